//! End-to-end tests of the `qfridge` binary.

use std::fs;
use std::process::{Command, Output};

const FIG2: [&str; 8] = [
    "--omega-c",
    "2",
    "--omega-h",
    "10",
    "--beta-c",
    "0.4",
    "--beta-h",
    "0.25",
];

fn qfridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfridge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn meta(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap()
        .parse()
        .unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn golden_matches(actual: &str, golden_file: &str) {
    let golden = fs::read_to_string(format!(
        "{}/tests/golden/{golden_file}",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    let (a, g) = (csv_rows(actual), csv_rows(&golden));
    assert_eq!(a.len(), g.len());
    assert_eq!(a[0], g[0]);
    for (ra, rg) in a.iter().zip(&g).skip(1) {
        assert_eq!(ra[..4], rg[..4]);
        let (va, vg): (f64, f64) = (ra[4].parse().unwrap(), rg[4].parse().unwrap());
        assert!((va - vg).abs() <= 1e-12, "{}: {va} vs {vg}", ra[1]);
    }
}

#[test]
fn cycle_cop_matches_reference() {
    let mut args = vec!["cycle", "--kind", "mo1", "--xi", "0.5"];
    args.extend(FIG2);
    let o = qfridge(&args);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!((meta(&out, "cop") - 0.290_494).abs() < 5e-7);
    golden_matches(&out, "mo1_fig2_xi0.5.csv");

    let mut args = vec!["cycle", "--kind", "mo1", "--xi", "0"];
    args.extend(FIG2);
    assert!((meta(&stdout(&qfridge(&args)), "cop") - 0.25).abs() < 1e-15);
}

#[test]
fn simulated_trace_export_matches_golden() {
    let out = stdout(&qfridge(&[
        "cycle", "--kind", "ms2", "--xi", "0.5", "--verify",
    ]));
    assert!(meta(&out, "verify_max_discrepancy") <= 1e-10);
    golden_matches(&out, "ms2_fig2_xi0.5.csv");
}

#[test]
fn exit_codes() {
    assert_eq!(qfridge(&["cycle"]).status.code(), Some(0));
    assert_eq!(
        qfridge(&["cycle", "--omega-c", "-1"]).status.code(),
        Some(1)
    );
    assert_eq!(qfridge(&["cycle", "--xi", "2"]).status.code(), Some(1));
    assert_eq!(
        qfridge(&["cycle", "--kind", "stirling"]).status.code(),
        Some(1)
    );
    assert_eq!(qfridge(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qfridge(&["--version"]).status.code(), Some(0));

    let o = qfridge(&["cycle", "--beta-h", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("beta_h < beta_c"), "{err}");

    // Boundary: beta_c omega_c = beta_h omega_h gives a ledger but no COP.
    assert_eq!(
        qfridge(&["cycle", "--beta-h", "0.08"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qfridge(&["xi-critical", "--beta-h", "0.08"]).status.code(),
        Some(2)
    );

    let o = qfridge(&["verify", "--count", "20", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("# failure mo1.oracle"));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = qfridge(&["verify", "--seed", "9", "--count", "300"]);
    let b = qfridge(&["verify", "--seed", "9", "--count", "300"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("result,PASS\n"));
    let c = qfridge(&["verify", "--seed", "10", "--count", "300"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn fig2_shape_and_values() {
    let out = stdout(&qfridge(&["fig2"]));
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0].join(","),
        "series,beta_h,xi,cop,qc_total,w_in,w_ex,regime"
    );
    assert_eq!(rows.len(), 1 + 4 * 101);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("# series=")).count(),
        4
    );
    assert!(out.contains("nominal_w_in=1.87"));
    let first: f64 = rows[1][3].parse().unwrap();
    assert!((first - 0.25).abs() < 1e-15);
    assert!(rows.iter().skip(1).all(|r| r[7] == "refrigerator"));
}

#[test]
fn fig3_strong_limit_is_shared() {
    let rows = csv_rows(&stdout(&qfridge(&["fig3", "--format", "csv"])));
    let limits: Vec<f64> = rows
        .iter()
        .skip(1)
        .filter(|r| r[2].parse::<f64>().unwrap() == 1.0)
        .map(|r| r[4].parse().unwrap())
        .collect();
    assert_eq!(limits.len(), 4);
    for q in limits {
        assert!((q - 0.620_051_037_744_775_1).abs() < 1e-12);
    }
}

#[test]
fn sweep_over_hot_frequency_marks_regimes() {
    let o = qfridge(&[
        "sweep", "--kind", "otto", "--param", "omega_h", "--from", "2.4", "--to", "10", "--steps",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0].join(","), "omega_h,cop,qc_total,w_in,w_ex,regime");
    let regimes: Vec<&str> = rows.iter().skip(1).map(|r| r[5].as_str()).collect();
    assert!(regimes.contains(&"non-refrigerator"));
    assert!(regimes.contains(&"boundary"));
    assert!(regimes.contains(&"refrigerator"));
    // Undefined COP is written as NaN.
    let boundary = rows.iter().find(|r| r[5] == "boundary").unwrap();
    assert!(boundary[1].parse::<f64>().unwrap().is_nan());

    let none = qfridge(&[
        "sweep", "--param", "beta_h", "--from", "0.5", "--to", "0.9", "--steps", "5",
    ]);
    assert_eq!(none.status.code(), Some(2));
}

#[test]
fn jsonl_output_parses() {
    let o = qfridge(&[
        "sweep", "--kind", "mo2", "--steps", "5", "--format", "jsonl",
    ]);
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 5);
    assert!((lines[4]["xi"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn config_file_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("ledger.csv");
    fs::write(
        &cfg,
        "# fig-2 preset, strongest measurement\nkind = mo1\nxi = 1\n--beta-h = 0.25\n",
    )
    .unwrap();
    let o = qfridge(&[
        "cycle",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&out).unwrap();
    assert!((meta(&text, "cop") - 0.330_987_148_328_855_2).abs() < 1e-12);

    let o = qfridge(&["cycle", "--config", cfg.to_str().unwrap(), "--xi", "0.5"]);
    assert!((meta(&stdout(&o), "cop") - 0.290_493_574_164_427_56).abs() < 1e-12);

    fs::write(&cfg, "xi = 0.1\nxi = 0.2\n").unwrap();
    assert_eq!(
        qfridge(&["cycle", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qfridge(&["cycle", "--config", "/nonexistent/run.cfg"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn xi_critical_command() {
    let rows = csv_rows(&stdout(&qfridge(&["xi-critical"])));
    assert_eq!(rows[0].join(","), "quantity,value");
    let get = |k: &str| -> f64 { rows.iter().find(|r| r[0] == k).unwrap()[1].parse().unwrap() };
    assert!((get("xi_critical") - 0.755_316_335_580_529_3).abs() < 1e-12);
    assert!(get("abs_difference") <= 1e-10);
    assert!(get("w_ex_at_xi_critical").abs() <= 1e-12);
}
