//! Command-line front end: distributions, comparisons, and parameter sweeps
//! over the photon statistics of squeezed number states.

mod chart;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use sqznum::cohen_dist::{cohen_distribution, wigner_ring_distribution};
use sqznum::compare::compare;
use sqznum::exact_dist::{exact_distribution, exact_distribution_recurrence};
use sqznum::interference::wkb_distribution;
use sqznum::{Distribution, Method, Scalar};

use output::SweepEntry;

#[derive(Parser)]
#[command(
    name = "sqznum",
    version,
    about = "Photon-number statistics of squeezed number states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one distribution and write CSV, JSON, or an SVG bar chart
    Dist(DistArgs),
    /// Compare two methods; writes a JSON report plus an overlay SVG
    Compare(CompareArgs),
    /// Compute every (n, r, method) triple of a grid, in parallel
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse()
}

#[derive(Args)]
struct DistArgs {
    /// Number-state index n
    #[arg(long)]
    n: usize,
    /// Squeezing parameter r
    #[arg(long, allow_negative_numbers = true)]
    r: Scalar,
    /// Computation method
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Largest outcome index (default: the classical support plus a tail)
    #[arg(long)]
    m_max: Option<usize>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: a generated name in the output directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp from the metadata
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Number-state index n
    #[arg(long)]
    n: usize,
    /// Squeezing parameter r
    #[arg(long, allow_negative_numbers = true)]
    r: Scalar,
    /// Reference method (relative errors are taken against it)
    #[arg(long, value_parser = parse_method)]
    method_a: Method,
    /// Method under comparison
    #[arg(long, value_parser = parse_method)]
    method_b: Method,
    /// Largest outcome index (default: the classical support plus a tail)
    #[arg(long)]
    m_max: Option<usize>,
    /// Report file; the overlay SVG lands next to it (default: generated)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Omit the generation timestamp from the metadata
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Number-state indices, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    /// Squeezing parameters, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    r: Vec<Scalar>,
    /// Methods, comma separated
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
    method: Vec<Method>,
    /// Largest outcome index for every triple (default: per-triple support)
    #[arg(long)]
    m_max: Option<usize>,
    /// Output format for the per-triple files
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output directory (default: the output directory)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: logical cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Omit the generation timestamp from the metadata
    #[arg(long)]
    no_timestamp: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Dist(args) => cmd_dist(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

/// Directory used when --out is not given: $SQZNUM_OUT_DIR, else the
/// working directory.
fn out_dir() -> PathBuf {
    std::env::var_os("SQZNUM_OUT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Covers the classical band window plus a decay tail on either squeezing
/// sign.
fn default_m_max(n: usize, r: Scalar) -> usize {
    (((2 * n + 1) as Scalar * (2.0 * r.abs()).exp()) / 2.0).ceil() as usize + 50
}

fn compute(
    method: Method,
    n: usize,
    r: Scalar,
    m_max: usize,
) -> sqznum::Result<Distribution<Scalar>> {
    match method {
        Method::ExactQuadrature => exact_distribution(n, r, m_max),
        Method::ExactRecurrence => exact_distribution_recurrence(n, r, m_max),
        Method::Wkb => wkb_distribution(n, r, m_max),
        Method::CohenClosedForm => Ok(cohen_distribution(n, r, m_max)),
        Method::WignerRing => wigner_ring_distribution(n, r, m_max),
    }
}

fn cmd_dist(args: DistArgs) -> Result<ExitCode> {
    let m_max = args.m_max.unwrap_or_else(|| default_m_max(args.n, args.r));
    let dist = compute(args.method, args.n, args.r, m_max).with_context(|| {
        format!(
            "computing the {} distribution for n = {}, r = {}",
            args.method, args.n, args.r
        )
    })?;
    let path = args.out.unwrap_or_else(|| {
        out_dir().join(format!(
            "dist_n{}_r{}_{}.{}",
            args.n,
            args.r,
            args.method,
            args.format.extension()
        ))
    });
    let payload = match args.format {
        Format::Csv => output::distribution_csv(&dist, !args.no_timestamp),
        Format::Json => output::distribution_json(&dist, !args.no_timestamp)?,
        Format::Svg => chart::distribution_svg(&dist),
    };
    output::write_file(&path, &payload)?;
    println!("{}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode> {
    let m_max = args.m_max.unwrap_or_else(|| default_m_max(args.n, args.r));
    let a = compute(args.method_a, args.n, args.r, m_max)
        .with_context(|| format!("computing the {} side", args.method_a))?;
    let b = compute(args.method_b, args.n, args.r, m_max)
        .with_context(|| format!("computing the {} side", args.method_b))?;
    let report = compare(&a, &b).context("comparing the distributions")?;
    let json_path = args.out.unwrap_or_else(|| {
        out_dir().join(format!(
            "compare_n{}_r{}_{}_vs_{}.json",
            args.n, args.r, args.method_a, args.method_b
        ))
    });
    let svg_path = json_path.with_extension("svg");
    output::write_file(
        &json_path,
        &output::report_json(&report, &a, !args.no_timestamp)?,
    )?;
    output::write_file(&svg_path, &chart::overlay_svg(&a, &b))?;
    println!("{}", json_path.display());
    println!("{}", svg_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    let dir = args.out.clone().unwrap_or_else(out_dir);
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    let mut triples = Vec::new();
    for &n in &args.n {
        for &r in &args.r {
            for &method in &args.method {
                triples.push((n, r, method));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .context("building the worker pool")?;
    let entries: Vec<SweepEntry> = pool.install(|| {
        triples
            .par_iter()
            .map(|&(n, r, method)| {
                let m_max = args.m_max.unwrap_or_else(|| default_m_max(n, r));
                let file = format!("dist_n{}_r{}_{}.{}", n, r, method, args.format.extension());
                let written = compute(method, n, r, m_max)
                    .map_err(anyhow::Error::from)
                    .and_then(|dist| {
                        let payload = match args.format {
                            Format::Csv => output::distribution_csv(&dist, !args.no_timestamp),
                            Format::Json => output::distribution_json(&dist, !args.no_timestamp)?,
                            Format::Svg => chart::distribution_svg(&dist),
                        };
                        output::write_file(&dir.join(&file), &payload)
                    });
                match written {
                    Ok(()) => SweepEntry {
                        n,
                        r,
                        method: method.to_string(),
                        file: Some(file),
                        status: "ok".to_string(),
                    },
                    Err(err) => SweepEntry {
                        n,
                        r,
                        method: method.to_string(),
                        file: None,
                        status: format!("error: {err:#}"),
                    },
                }
            })
            .collect()
    });
    let manifest_path = dir.join("manifest.json");
    output::write_file(
        &manifest_path,
        &output::manifest_json(&entries, !args.no_timestamp)?,
    )?;
    println!("{}", manifest_path.display());
    let failed = entries.iter().filter(|e| e.status != "ok").count();
    if failed > 0 {
        eprintln!(
            "{failed} of {} sweep entries failed; see the manifest",
            entries.len()
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}
