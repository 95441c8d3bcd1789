//! Black-box tests of the `geqw` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn geqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geqw"))
        .args(args)
        .output()
        .expect("failed to launch binary")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const BASE: &str = "q1 = 0.5\nq2 = \"inf\"\ncoin = \"entangling\"\nseed = 42\nt_max = 25\n";

#[test]
fn run_writes_fixed_header_and_config_echo() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.toml", BASE);
    let out = geqw(&["run", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("o/run.csv")).unwrap();
    assert!(text.contains("# q2 = \"inf\""));
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert_eq!(
        header,
        "t,var_x1,var_x2,var_R,trace_distance,entropy_c,entropy_c1,entropy_c2,negativity,coherence_x1"
    );
    // Coherence is off by default: its column must be empty, not zero.
    let row = text.lines().last().unwrap();
    assert!(row.ends_with(','), "expected trailing empty field: {row}");
}

#[test]
fn reruns_are_byte_identical_and_seed_changes_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.toml", BASE);
    for sub in ["a", "b"] {
        let out = geqw(&[
            "run",
            "--config",
            &cfg,
            "--out",
            tmp.path().join(sub).to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = fs::read(tmp.path().join("a/run.csv")).unwrap();
    let b = fs::read(tmp.path().join("b/run.csv")).unwrap();
    assert_eq!(a, b, "same config must reproduce byte-identical output");

    let out = geqw(&[
        "run",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("c").to_str().unwrap(),
        "--seed",
        "43",
    ]);
    assert!(out.status.success());
    let c = fs::read(tmp.path().join("c/run.csv")).unwrap();
    assert_ne!(a, c, "seed override must change the realization");
    let text = String::from_utf8(c).unwrap();
    assert!(text.contains("# seed = 43"), "echo must reflect the override");
}

#[test]
fn snapshot_export_is_deterministic_and_sorted() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.toml",
        &format!("{BASE}snapshot = true\n"),
    );
    for sub in ["a", "b"] {
        let out = geqw(&[
            "run",
            "--config",
            &cfg,
            "--out",
            tmp.path().join(sub).to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = fs::read(tmp.path().join("a/snapshot.tsv")).unwrap();
    let b = fs::read(tmp.path().join("b/snapshot.tsv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x1\tx2\tre_uu\tim_uu\tre_ud\tim_ud\tre_du\tim_du\tre_dd\tim_dd"
    );
    let mut prev: Option<(i64, i64)> = None;
    let mut norm = 0.0f64;
    for line in lines {
        let cells: Vec<&str> = line.split('\t').collect();
        assert_eq!(cells.len(), 10);
        let key = (cells[0].parse().unwrap(), cells[1].parse().unwrap());
        if let Some(p) = prev {
            assert!(key > p, "rows must be sorted: {key:?} after {p:?}");
        }
        prev = Some(key);
        for pair in cells[2..].chunks(2) {
            let re: f64 = pair[0].parse().unwrap();
            let im: f64 = pair[1].parse().unwrap();
            norm += re * re + im * im;
        }
    }
    assert!((norm - 1.0).abs() < 1e-10, "snapshot norm² = {norm}");
}

#[test]
fn snapshot_with_spectral_engine_fails_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.toml",
        &format!("{BASE}snapshot = true\nengine = \"spectral\"\n"),
    );
    let out = geqw(&["run", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("snapshot"), "{err}");
}

#[test]
fn invalid_configs_fail_with_named_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown.toml", "q1 = 0.5\nq2 = 1.0\nseed = 1\nbogus_key = 3\n", "bogus_key"),
        ("badq.toml", "q1 = -2.0\nq2 = 1.0\nseed = 1\n", "q1"),
        (
            "ent1d.toml",
            "dimension = 1\nq1 = 0.5\nseed = 1\ncoin = \"entangling\"\n",
            "coin",
        ),
        ("noq2.toml", "q1 = 0.5\nseed = 1\n", "q2"),
    ];
    for (name, body, needle) in cases {
        let cfg = write_config(tmp.path(), name, body);
        let out = geqw(&["run", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
        assert!(!out.status.success(), "{name} should fail");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: expected `{needle}` in: {err}");
    }
}

#[test]
fn ensemble_report_contains_fits_and_window_conventions() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.toml", &format!("{BASE}realizations = 3\n"));
    let out = geqw(&[
        "ensemble",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o/ensemble.json")).unwrap())
            .unwrap();
    assert_eq!(json["config"]["q2"], "inf");
    assert_eq!(json["fit_windows"]["full"][0], 10);
    assert_eq!(json["fit_windows"]["asymptotic"][0], 13);
    assert_eq!(json["realizations"].as_array().unwrap().len(), 3);
    assert!(json["summary"]["alpha_asymptotic"]["mean"].is_f64());
    assert!(json["summary"]["alpha_asymptotic"]["std"].is_f64());
    // The mean CSV exists and parses.
    let mean = fs::read_to_string(tmp.path().join("o/ensemble_mean.csv")).unwrap();
    assert!(mean.lines().any(|l| l.starts_with("25,")));

    // --realizations overrides the config.
    let out = geqw(&[
        "ensemble",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o2").to_str().unwrap(),
        "--realizations",
        "2",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("o2/ensemble.json")).unwrap())
            .unwrap();
    assert_eq!(json["realizations"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_emits_one_row_per_q() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cfg.toml",
        "q1 = 0.5\nq2 = 0.5\nseed = 5\nt_max = 40\nrealizations = 2\n\
         engine = \"spectral\"\nspectral_samples = 500\n\
         trace_distance = false\nentropies = false\nnegativity = false\n\
         sweep_q = [0.5, \"inf\"]\n",
    );
    let out = geqw(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("o/sweep.csv")).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("q1,"))
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("0.5,0.5,"));
    assert!(rows[1].starts_with("inf,inf,"));
    // Sweep without sweep_q fails cleanly.
    let bare = write_config(tmp.path(), "bare.toml", BASE);
    let out = geqw(&["sweep", "--config", &bare, "--out", tmp.path().join("x").to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep_q"));
}

#[test]
fn verify_passes_and_reports_each_check() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "cfg.toml", BASE);
    let out = geqw(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = fs::read_to_string(tmp.path().join("o/verify.txt")).unwrap();
    for check in [
        "coin_unitarity",
        "step_weight_normalization",
        "norm_conservation",
        "dense_sparse_agreement",
        "spectral_sparse_agreement",
        "channel_kraus",
    ] {
        assert!(report.contains(&format!("PASS {check}")), "{report}");
    }
    assert!(!report.contains("FAIL"), "{report}");
}
