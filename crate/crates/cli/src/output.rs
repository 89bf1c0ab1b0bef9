//! File payload construction. Every writer keeps a stable layout so that
//! identical inputs give identical bytes; the generation timestamp is the
//! only volatile field and sits behind a flag.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sqznum::{ComparisonReport, Distribution, EntryFlag, Method, Scalar};

pub const SCHEMA_DISTRIBUTION: &str = "sqznum.distribution.v1";
pub const SCHEMA_COMPARISON: &str = "sqznum.comparison.v1";
pub const SCHEMA_SWEEP: &str = "sqznum.sweep.v1";

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Method-specific thresholds that shaped the values, recorded alongside
/// them so a reader can judge what a zero or a flag means.
fn tolerances(method: Method) -> String {
    match method {
        Method::ExactQuadrature | Method::ExactRecurrence => format!(
            "clamp threshold {:e}",
            sqznum::exact_dist::clamp_threshold::<Scalar>()
        ),
        Method::Wkb => format!(
            "turning-point guard fraction {:e}, tangency slope floor {:e}",
            sqznum::wkb_engine::DEFAULT_GUARD_FRACTION,
            sqznum::interference::TANGENCY_SLOPE_FLOOR
        ),
        Method::CohenClosedForm => "none (closed form)".to_string(),
        Method::WignerRing => format!(
            "ring integral absolute tolerance {:e}",
            sqznum::cohen_dist::RING_INTEGRAL_TOLERANCE
        ),
    }
}

pub fn distribution_csv(d: &Distribution<Scalar>, with_timestamp: bool) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {SCHEMA_DISTRIBUTION}\n"));
    out.push_str(&format!("# version = {}\n", env!("CARGO_PKG_VERSION")));
    if with_timestamp {
        out.push_str(&format!("# generated = {}\n", timestamp()));
    }
    out.push_str(&format!("# n = {}\n", d.n));
    out.push_str(&format!("# r = {}\n", d.r));
    out.push_str(&format!("# method = {}\n", d.method));
    out.push_str(&format!("# tolerances = {}\n", tolerances(d.method)));
    for note in &d.notes {
        out.push_str(&format!("# note: {note}\n"));
    }
    out.push_str("m,P,flag\n");
    for m in 0..d.len() {
        let flag = d.flags[m].map(EntryFlag::csv_name).unwrap_or("");
        out.push_str(&format!("{m},{:.16e},{flag}\n", d.values[m]));
    }
    out
}

#[derive(Serialize)]
struct DistributionDoc<'a> {
    schema: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<String>,
    n: usize,
    r: Scalar,
    method: Method,
    m_max: usize,
    tolerances: String,
    notes: &'a [String],
    values: &'a [Scalar],
    flags: &'a [Option<EntryFlag>],
}

pub fn distribution_json(d: &Distribution<Scalar>, with_timestamp: bool) -> Result<String> {
    let doc = DistributionDoc {
        schema: SCHEMA_DISTRIBUTION,
        version: env!("CARGO_PKG_VERSION"),
        generated: with_timestamp.then(timestamp),
        n: d.n,
        r: d.r,
        method: d.method,
        m_max: d.len().saturating_sub(1),
        tolerances: tolerances(d.method),
        notes: &d.notes,
        values: &d.values,
        flags: &d.flags,
    };
    let mut text = serde_json::to_string_pretty(&doc).context("serializing the distribution")?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct ComparisonDoc<'a> {
    schema: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<String>,
    n: usize,
    r: Scalar,
    #[serde(flatten)]
    report: &'a ComparisonReport<Scalar>,
}

pub fn report_json(
    report: &ComparisonReport<Scalar>,
    reference: &Distribution<Scalar>,
    with_timestamp: bool,
) -> Result<String> {
    let doc = ComparisonDoc {
        schema: SCHEMA_COMPARISON,
        version: env!("CARGO_PKG_VERSION"),
        generated: with_timestamp.then(timestamp),
        n: reference.n,
        r: reference.r,
        report,
    };
    let mut text = serde_json::to_string_pretty(&doc).context("serializing the report")?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
pub struct SweepEntry {
    pub n: usize,
    pub r: Scalar,
    pub method: String,
    pub file: Option<String>,
    pub status: String,
}

#[derive(Serialize)]
struct ManifestDoc<'a> {
    schema: &'static str,
    version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    generated: Option<String>,
    entries: &'a [SweepEntry],
}

pub fn manifest_json(entries: &[SweepEntry], with_timestamp: bool) -> Result<String> {
    let doc = ManifestDoc {
        schema: SCHEMA_SWEEP,
        version: env!("CARGO_PKG_VERSION"),
        generated: with_timestamp.then(timestamp),
        entries,
    };
    let mut text = serde_json::to_string_pretty(&doc).context("serializing the manifest")?;
    text.push('\n');
    Ok(text)
}

pub fn write_file(path: &Path, payload: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    std::fs::write(path, payload).with_context(|| format!("writing {}", path.display()))
}
