use std::path::Path;
use std::process::{Command, Output};

use fockwalk::manifest::read_manifests;
use serde_json::Value;

fn fockwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockwalk")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = fockwalk(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let header = r.headers().unwrap().iter().map(String::from).collect();
        let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
        Self { header, rows }
    }

    fn read(path: &Path) -> Self {
        Self::parse(&std::fs::read_to_string(path).unwrap())
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let j = self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
        self.rows.iter().map(|r| r[j].parse().unwrap_or(f64::NAN)).collect()
    }
}

#[test]
fn walk_writes_csv_json_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("walk.csv");
    let path = csv_path.to_str().unwrap();
    ok(&["walk", "--total-photons", "4", "--input-a", "2", "--reflectivity", "0.5", "--output", path]);
    let t = Csv::read(&csv_path);
    assert_eq!(t.header, ["k", "delta_k", "probability", "envelope"]);
    let p = t.col("probability");
    for (got, want) in p.iter().zip([0.375, 0.0, 0.25, 0.0, 0.375]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert_eq!(t.col("delta_k"), [4.0, 2.0, 0.0, -2.0, -4.0]);
    // 16 significant digits
    let mantissa = t.rows[2][2].split('e').next().unwrap().replace('.', "");
    assert!(mantissa.len() >= 12);

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("walk.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 5);
    assert_eq!(doc["rows"][2][2].as_f64().unwrap(), p[2]);
    assert_eq!(doc["manifest"]["subcommand"], "walk");
    assert_eq!(doc["manifest"]["parameters"]["total"], 4);

    ok(&["walk", "--total-photons", "4", "--input-a", "2", "--reflectivity", "0.25", "--output", path]);
    let runs = read_manifests(&dir.path().join("manifest.jsonl")).unwrap();
    assert_eq!(runs.len(), 2);
    assert_eq!(runs[1].parameters["reflectivity"], 0.25);
    assert!(runs.iter().all(|m| m.outputs.len() == 2 && m.version == env!("CARGO_PKG_VERSION")));
}

#[test]
fn walk_fig2_panels() {
    let delta = Csv::parse(&ok(&["walk", "--total-photons", "50", "--input-a", "25", "--reflectivity", "0"]));
    let p = delta.col("probability");
    assert_eq!(p[25], 1.0);
    assert_eq!(p.iter().sum::<f64>(), 1.0);
    for r in ["0.07", "0.25"] {
        let t = Csv::parse(&ok(&["walk", "--total-photons", "50", "--input-a", "25", "--reflectivity", r]));
        assert!(!t.header.contains(&"envelope".to_string()));
        assert!((t.col("probability").iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
    let t = Csv::parse(&ok(&[
        "walk", "--total-photons", "50", "--input-a", "25", "--reflectivity", "0.5", "--phase", "0.7",
    ]));
    let (p, re, im) = (t.col("probability"), t.col("amplitude_re"), t.col("amplitude_im"));
    for k in 0..=50 {
        assert!((re[k] * re[k] + im[k] * im[k] - p[k]).abs() < 1e-12);
    }
    assert!(t.col("envelope")[0].is_nan());
}

#[test]
fn transfer_sweep() {
    let t = Csv::parse(&ok(&["transfer", "--total-photons", "6", "--reflectivity", "0:1:11"]));
    let f = t.col("fidelity");
    assert_eq!(f.len(), 11);
    assert!((f[10] - 1.0).abs() < 1e-12);
    assert!(f[0].abs() < 1e-12);
    // r = 0 leaves |0, 6⟩ alone, r = 1 moves it to |6, 0⟩
    assert_eq!(t.col("p_0")[0], 1.0);
    assert!((t.col("p_6")[10] - 1.0).abs() < 1e-12);
    for (i, fi) in f.iter().enumerate() {
        let r = i as f64 / 10.0;
        assert!((fi - r.powi(6)).abs() < 1e-10);
    }

    let state = "[[0.3,0.1],[0,-0.5],[0.2,0.2],[0.7,0]]";
    let t = Csv::parse(&ok(&["transfer", "--total-photons", "3", "--state", state, "--reflectivity", "1"]));
    assert!((t.col("fidelity")[0] - 1.0).abs() < 1e-10);
    let bad = fockwalk(&["transfer", "--total-photons", "4", "--state", state]);
    assert!(!bad.status.success());
}

#[test]
fn spectrum_models() {
    for s in [10usize, 50] {
        let t = Csv::parse(&ok(&["spectrum", "--model", "generalized", "--total-photons", &s.to_string()]));
        for (l, e) in t.col("eigenvalue").iter().enumerate() {
            assert!((e - (l as f64 - s as f64 / 2.0)).abs() < 1e-9);
        }
        let p = t.col("mode_probability");
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().skip(1).step_by(2).all(|x| *x < 1e-20));
    }

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s3.csv");
    ok(&[
        "spectrum", "--model", "ssh", "--total-photons", "51", "--delta", "0.005", "--output", out.to_str().unwrap(),
    ]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("s3.json")).unwrap()).unwrap();
    assert_eq!(doc["summary"]["sites"], 52);
    assert_eq!(doc["summary"]["mode"], "near-zero");

    let uniform = Csv::parse(&ok(&["spectrum", "--model", "ssh", "--total-photons", "20", "--delta", "0"]));
    let e = uniform.col("eigenvalue");
    // uniform coupling 1 on 21 sites: 2cos(mπ/22), no gap at zero
    let mut band: Vec<f64> = (1..=21).map(|m| 2.0 * (m as f64 * std::f64::consts::PI / 22.0).cos()).collect();
    band.sort_by(f64::total_cmp);
    for (a, b) in e.iter().zip(&band) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!(e[10].abs() < 1e-12);
}

#[test]
fn variance_sweeps() {
    let t = Csv::parse(&ok(&["variance", "--total-photons", "50", "--imbalance", "30", "--theta", "0:pi:9"]));
    let exact = t.col("variance_exact");
    let dist = t.col("variance_distribution");
    assert!(exact[0].abs() < 1e-12);
    for (a, b) in exact.iter().zip(&dist) {
        assert!((a - b).abs() < 1e-8 * (1.0 + a));
    }
    let t = Csv::parse(&ok(&[
        "variance", "--total-photons", "4", "--input-a", "2", "--reflectivity", "0.04,0.3,0.5,0.96",
    ]));
    for (v, want) in t.col("variance_approx").iter().zip([0.49, 4.03, 7.40, 0.49]) {
        assert!((v - want).abs() <= 0.01);
    }
    assert!(!fockwalk(&["variance", "--total-photons", "4", "--imbalance", "3"]).status.success());
}

#[test]
fn decohere_endpoints() {
    let t = Csv::parse(&ok(&[
        "decohere", "--total-photons", "6", "--input-a", "0", "--reflectivity", "0.3", "--mixing-angle", "pi/2",
    ]));
    let binom = [0.117649, 0.302526, 0.324135, 0.18522, 0.059535, 0.010206, 0.000729];
    for (k, b) in binom.iter().enumerate() {
        assert!((t.col(&format!("p_{k}"))[0] - b).abs() < 1e-10);
    }
    let t = Csv::parse(&ok(&["decohere", "--total-photons", "50", "--input-a", "25"]));
    assert_eq!(t.rows.len(), 7);
    let v = t.col("variance");
    assert!((v[0] - (1250.0 + 50.0) / 4.0).abs() < 1e-8);
    assert!((v[6] - 12.5).abs() < 1e-8);
}

#[test]
fn classify_reports() {
    let v: Value = serde_json::from_str(&ok(&["classify", "--total-photons", "50"])).unwrap();
    assert_eq!(v["class"], "BDI");
    assert_eq!(v["time_reversal_squared"], 1);
    let v: Value = serde_json::from_str(&ok(&["classify", "--total-photons", "7", "--onsite", "0.2"])).unwrap();
    assert_eq!(v["class"], "AI");
    assert!(v["chiral_squared"].is_null());
    let v: Value = serde_json::from_str(&ok(&["classify", "--total-photons", "0"])).unwrap();
    assert_eq!(v["class"], "BDI");
    let v: Value = serde_json::from_str(&ok(&[
        "classify", "--model", "ssh", "--total-photons", "9", "--delta", "-0.3",
    ]))
    .unwrap();
    assert_eq!(v["class"], "BDI");
}

#[test]
fn experiment_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "transmission = 1.0\ndetector_efficiency = 1.0\nidler_transmission = 1.0\n\
         reflectivity = 0.5\nherald = [2, 2]\nheralded_events = 100000\nseed = 12\n",
    )
    .unwrap();
    let out = dir.path().join("counts.csv");
    let args = ["experiment", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()];
    ok(&args);
    let t = Csv::read(&out);
    let (p, dp, ideal) = (t.col("probability"), t.col("delta_p"), t.col("lossless_probability"));
    for k in 0..5 {
        if dp[k].is_nan() {
            assert!(ideal[k] < 1e-12);
        } else {
            assert!((p[k] - ideal[k]).abs() < 3.0 * dp[k], "k={k}");
        }
    }
    let first = std::fs::read_to_string(&out).unwrap();
    ok(&args);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    ok(&["experiment", "--config", cfg.to_str().unwrap(), "--seed", "13", "--output", out.to_str().unwrap()]);
    assert_ne!(std::fs::read_to_string(&out).unwrap(), first);
    let runs = read_manifests(&dir.path().join("manifest.jsonl")).unwrap();
    assert_eq!(runs.iter().map(|m| m.seed).collect::<Vec<_>>(), [Some(12), Some(12), Some(13)]);

    std::fs::write(&cfg, "pulses = 0\n").unwrap();
    let bad = fockwalk(&["experiment", "--config", cfg.to_str().unwrap()]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("pulses"));

    let defaults = ok(&["experiment", "--print-default-config"]);
    assert!(defaults.contains("mean_photon_number = 0.2"));
}

#[test]
fn rate_command() {
    let t = Csv::parse(&ok(&["rate", "--pulses", "1000000", "--seed", "4"]));
    let got = t.col("per_minute")[0];
    let expected = t.col("expected_per_minute")[0];
    assert!((got - expected).abs() < 4.0 * t.col("per_minute_uncertainty")[0]);
}

#[test]
fn errors_exit_non_zero() {
    for args in [
        vec!["walk", "--total-photons", "4", "--input-a", "2", "--reflectivity", "1.5"],
        vec!["transfer", "--total-photons", "4", "--reflectivity", "0:1:0"],
        vec!["decohere", "--total-photons", "4", "--input-a", "2", "--mixing-angle", "2"],
        vec!["spectrum", "--model", "ssh", "--total-photons", "4", "--delta", "1"],
        vec!["experiment", "--config", "/nonexistent/run.toml"],
        vec!["walk", "--total-photons", "4"],
    ] {
        let out = fockwalk(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
