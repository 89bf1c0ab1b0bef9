use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sqznum"))
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("m,"))
        .collect()
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["csv", "json", "svg"] {
        let p1 = dir.path().join(format!("a.{format}"));
        let p2 = dir.path().join(format!("b.{format}"));
        for p in [&p1, &p2] {
            let status = bin()
                .args([
                    "dist",
                    "--n",
                    "5",
                    "--r",
                    "2",
                    "--method",
                    "exact",
                    "--m-max",
                    "120",
                    "--format",
                    format,
                    "--no-timestamp",
                    "--out",
                ])
                .arg(p)
                .status()
                .unwrap();
            assert!(status.success());
        }
        assert_eq!(
            std::fs::read(&p1).unwrap(),
            std::fs::read(&p2).unwrap(),
            "{format} output differs between identical runs"
        );
    }
}

#[test]
fn zero_squeezing_gives_an_indicator_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ind.csv");
    let status = bin()
        .args([
            "dist",
            "--n",
            "5",
            "--r",
            "0",
            "--method",
            "exact",
            "--m-max",
            "10",
            "--no-timestamp",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# n = 5"));
    assert!(text.contains("# method = exact"));
    assert!(!text.contains("# generated"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 11);
    for (m, row) in rows.iter().enumerate() {
        if m == 5 {
            assert_eq!(*row, "5,1.0000000000000000e0,");
        } else {
            assert_eq!(*row, format!("{m},0.0000000000000000e0,"));
        }
    }
}

#[test]
fn row_count_covers_the_full_range() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.csv");
    let status = bin()
        .args([
            "dist",
            "--n",
            "5",
            "--r",
            "2",
            "--method",
            "exact",
            "--m-max",
            "400",
            "--no-timestamp",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(data_rows(&text).len(), 401);
}

#[test]
fn timestamp_appears_unless_suppressed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stamped.csv");
    let status = bin()
        .args([
            "dist", "--n", "1", "--r", "1", "--method", "exact", "--m-max", "5", "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# generated = "));
}

#[test]
fn json_document_carries_metadata_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    let status = bin()
        .args([
            "dist",
            "--n",
            "3",
            "--r",
            "1",
            "--method",
            "wigner-ring",
            "--m-max",
            "30",
            "--format",
            "json",
            "--no-timestamp",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["schema"], "sqznum.distribution.v1");
    assert_eq!(doc["n"], 3);
    assert_eq!(doc["method"], "wigner_ring");
    assert_eq!(doc["m_max"], 30);
    assert_eq!(doc["values"].as_array().unwrap().len(), 31);
    assert_eq!(doc["flags"].as_array().unwrap().len(), 31);
    assert!(doc["tolerances"].as_str().unwrap().contains("1e-10"));
    assert!(doc.get("generated").is_none());
}

#[test]
fn usage_errors_exit_with_two() {
    let out = bin()
        .args(["dist", "--n", "1", "--r", "1", "--method", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn computation_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["dist", "--n", "1", "--r", "0", "--method", "wkb", "--out"])
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.starts_with("error:"), "stderr was: {stderr}");
}

#[test]
fn compare_writes_report_and_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("rep.json");
    let status = bin()
        .args([
            "compare",
            "--n",
            "5",
            "--r",
            "2",
            "--method-a",
            "exact",
            "--method-b",
            "cohen",
            "--m-max",
            "400",
            "--no-timestamp",
            "--out",
        ])
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["schema"], "sqznum.comparison.v1");
    assert_eq!(doc["method_a"], "exact_quadrature");
    assert_eq!(doc["method_b"], "cohen_closed_form");
    let tv = doc["total_variation"].as_f64().unwrap();
    assert!(tv > 0.0 && tv < 0.05, "total variation {tv}");
    assert_eq!(doc["last_max_location_a"], 199);
    let svg = std::fs::read_to_string(json.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<polyline"));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn comparing_a_method_with_itself_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("self.json");
    let status = bin()
        .args([
            "compare",
            "--n",
            "2",
            "--r",
            "1",
            "--method-a",
            "exact",
            "--method-b",
            "exact",
            "--m-max",
            "60",
            "--no-timestamp",
            "--out",
        ])
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["total_variation"].as_f64().unwrap(), 0.0);
}

#[test]
fn sweep_writes_every_file_and_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let status = bin()
        .args([
            "sweep",
            "--n",
            "0,5",
            "--r",
            "1,2",
            "--method",
            "exact",
            "--m-max",
            "40",
            "--no-timestamp",
            "--out",
        ])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["schema"], "sqznum.sweep.v1");
    let entries = manifest["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    for entry in entries {
        assert_eq!(entry["status"], "ok");
        let file = entry["file"].as_str().unwrap();
        assert!(dir.path().join(file).exists(), "missing {file}");
    }
    assert!(Path::new(&dir.path().join("dist_n5_r2_exact.csv")).exists());
}

#[test]
fn sweep_records_failures_and_signals_them() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "sweep",
            "--n",
            "2",
            "--r",
            "0,1",
            "--method",
            "wkb",
            "--m-max",
            "20",
            "--no-timestamp",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    let entries = manifest["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!(entries[0]["status"].as_str().unwrap().starts_with("error:"));
    assert!(entries[0]["file"].is_null());
    assert_eq!(entries[1]["status"], "ok");
}

#[test]
fn svg_panel_draws_bars_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("panel.svg");
    let status = bin()
        .args([
            "dist",
            "--n",
            "5",
            "--r",
            "2",
            "--method",
            "exact",
            "--m-max",
            "120",
            "--format",
            "svg",
            "--no-timestamp",
            "--out",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<rect"));
    assert!(svg.contains("P(m)"));
    assert!(svg.trim_end().ends_with("</svg>"));
}
