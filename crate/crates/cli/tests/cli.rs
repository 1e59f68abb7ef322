use std::path::Path;
use std::process::{Command, Output};

use pll_cli::report::read_csv;

fn pll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pll"))
        .args(args)
        .env_remove("PLL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// `value` column of a quantity/value/unit report.
fn quantity(csv: &str, name: &str) -> f64 {
    let t = read_csv(csv).unwrap();
    let q = t.column("quantity").unwrap();
    let v = t.column("value").unwrap();
    let row = t.rows.iter().position(|r| r[q] == name).unwrap_or_else(|| panic!("no {name}"));
    t.rows[row][v].parse().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(pll(&["--help"]).status.code(), Some(0));
    let v = pll(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["pie", "--model", "NOPE", "--ns", "1e-3"][..],
        &["pie", "--model", "GH", "--ns", "-1"],
        &["pie", "--model", "SIF_SOFT", "--ns", "1e-3", "--nn", "1e-3", "--nf", "1"],
        &["pie", "--model", "QPG_PNR", "--ns", "1e-3"],
        &["sweep", "--model", "SIF_SOFT", "--ns-points", "0"],
        &["frobnicate"],
        &["linkbudget"],
    ] {
        let o = pll(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn gh_noiseless_and_unit_noise() {
    let o = pll(&["pie", "--model", "GH", "--ns", "1e-12", "--nn", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((quantity(&stdout(&o), "pie") - 1.0).abs() < 1e-6);
    let o = pll(&["pie", "--model", "S1", "--ns", "1e-6"]);
    assert!((quantity(&stdout(&o), "pie") - 2.885).abs() < 1e-3);
}

#[test]
fn gh_night_asymptote() {
    let o = pll(&["pie", "--model", "GH", "--ns", "1e-6", "--nn-db", "-72.5"]);
    let asym = quantity(&stdout(&o), "pie_asymptote");
    assert!((asym - 24.085).abs() < 2e-3, "{asym}");
}

#[test]
fn unrestricted_qpg_night() {
    let o = pll(&["pie", "--model", "QPG_ONOFF", "--nn-db", "-72.5", "--unrestricted"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = quantity(&stdout(&o), "pie");
    assert!((v - 18.48).abs() < 0.01, "{v}");
}

#[test]
fn optimize_reports_operating_point() {
    let o = pll(&["pie", "--model", "SIF_HARD", "--ns", "1e-3", "--nb", "1e-4", "--optimize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    let m = quantity(&s, "m_star");
    assert_eq!(m, m.round());
    assert!((quantity(&s, "nf_star") - m * 1e-3).abs() < 1e-12);
}

#[test]
fn linkbudget_background_examples() {
    // 112 kHz of background at 1 GHz slots: −39.5 dB per slot, −72.5 dB per
    // mode over 2000 modes.
    let o = pll(&[
        "linkbudget", "--slot-ns", "1", "--bg-flux-per-s", "1.122e5", "--modes", "2000",
        "--signal-flux-per-s", "1.67e5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let s = stdout(&o);
    assert!((quantity(&s, "n_b_db") + 39.5).abs() < 0.01);
    assert!((quantity(&s, "n_n_db") + 72.5).abs() < 0.02);
    assert!((quantity(&s, "n_s") - 1.67e-4).abs() < 1e-12);
}

#[test]
fn linkbudget_zero_power() {
    let o = pll(&[
        "linkbudget", "--range-au", "1.25", "--d-tx-m", "0.22", "--d-rx-m", "5.1",
        "--wavelength-nm", "1550", "--p-tx-w", "0", "--slot-ns", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(quantity(&stdout(&o), "n_s"), 0.0);
}

#[test]
fn config_file_with_command_line_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"model": "GH", "ns": 1e-12, "nn": 1.0}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = pll(&["pie", "--config", c]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!((quantity(&stdout(&o), "pie") - 1.0).abs() < 1e-6);
    let o = pll(&["pie", "--config", c, "--nn", "3"]);
    assert!((quantity(&stdout(&o), "pie") - (4.0f64 / 3.0).log2()).abs() < 1e-6);

    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(pll(&["pie", "--config", c]).status.code(), Some(2));
}

#[test]
fn json_schema_is_shared() {
    for args in [
        &["pie", "--model", "GH", "--ns", "1e-3", "--json"][..],
        &["table2", "--json"],
        &["sweep", "--model", "SIF_SOFT", "--ns-points", "2", "--noise-points", "2", "--json"],
    ] {
        let o = pll(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        for key in ["tool", "version", "command", "inputs", "outputs", "units", "provenance"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
        assert_eq!(v["tool"], "pll");
    }
}

#[test]
fn sweep_round_trips_and_degrades_with_noise() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let prefix = dir.path().join("panel");
    let o = pll(&[
        "sweep", "--model", "SIF_SOFT", "--ns-min", "1e-4", "--ns-max", "1e-2", "--ns-points", "3",
        "--noise-min", "1e-5", "--noise-max", "1e-1", "--noise-points", "3",
        "--out", out.to_str().unwrap(), "--panels", prefix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("SIF_SOFT"));
    let t = read_csv(&text).unwrap();
    assert_eq!(t.rows.len(), 9);
    for name in ["n_s", "n_b", "pie", "nf_star", "m_star", "boundary_hit", "flags"] {
        assert!(t.column(name).is_some(), "{name}");
    }
    let ns = t.floats("n_s").unwrap();
    let pie = t.floats("pie").unwrap();
    // Noise-major order: the same n_s recurs every three rows.
    for j in 0..3 {
        assert!(pie[j] >= pie[3 + j] && pie[3 + j] >= pie[6 + j], "n_s = {}", ns[j]);
    }
    for q in ["pie", "nf_star", "m_star"] {
        let p = dir.path().join(format!("panel_{q}.csv"));
        let m = read_csv(&std::fs::read_to_string(&p).unwrap()).unwrap();
        assert_eq!(m.rows.len(), 3);
        assert_eq!(m.columns.len(), 4);
    }
}

#[test]
fn table2_rows_match_reference() {
    let o = pll(&["table2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = read_csv(&stdout(&o)).unwrap();
    assert_eq!(t.rows.len(), 7);
    let gh = t.floats("gh_night").unwrap();
    let qpg_day = t.floats("qpg_day").unwrap();
    let sif = t.floats("sif_night").unwrap();
    assert!((gh[0] - 4.023).abs() / 4.023 < 0.01);
    assert!((qpg_day[3] - 0.617).abs() / 0.617 < 0.02);
    assert!((sif[6] - 0.296).abs() / 0.296 < 0.02);
    assert!(t.column("sif_day").is_none());
    let with = pll(&["table2", "--with-sif-day"]);
    assert!(read_csv(&stdout(&with)).unwrap().column("sif_day").is_some());
}

#[test]
fn mc_validate_passes_fails_and_repeats() {
    let base = ["mc-validate", "--model", "SIF", "--nf", "0.5", "--nb", "1.122e-4", "--samples", "1000000"];
    let a = pll(&base);
    assert_eq!(a.status.code(), Some(0), "{}{}", stdout(&a), stderr(&a));
    let b = pll(&base);
    assert_eq!(a.stdout, b.stdout);

    let mut bad = base.to_vec();
    bad.extend(["--perturb", "0.05"]);
    let c = pll(&bad);
    assert_eq!(c.status.code(), Some(1));
    assert!(stderr(&c).contains("p_click"), "{}", stderr(&c));
}

#[test]
fn mc_validate_counts_and_frames() {
    let dir = tempfile::tempdir().unwrap();
    let hist = dir.path().join("h.csv");
    let o = pll(&[
        "mc-validate", "--model", "QPG_PNR", "--nf", "2", "--nn", "0.1", "--samples", "200000",
        "--seed", "7", "--histogram", hist.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let h = read_csv(&std::fs::read_to_string(&hist).unwrap()).unwrap();
    let total: f64 = h.floats("pulse_count").unwrap().iter().sum();
    assert_eq!(total, 200000.0);

    let o = pll(&[
        "mc-validate", "--model", "SIF_HARD", "--ns", "1e-3", "--m", "16", "--nb", "1e-4",
        "--samples", "200000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
}

#[test]
fn output_file_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let o = pll(&["pie", "--model", "S2", "--ns", "1e-9", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(Path::new(&out).exists());
    let o = pll(&["pie", "--model", "S2", "--ns", "1e-9", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}
