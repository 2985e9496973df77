//! `qfridge` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 regime error (including a
//! sweep with no refrigerating point), 3 verification failure.

pub mod config;
pub mod verify;

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{self, FigureDataset, SweepRow, SweepSpec, SweptParam};
use crate::analytic::{self, CycleReport};
use crate::error::{Error, Result};
use crate::ledger::sig17;
use crate::params::{CycleKind, CycleParams};
use crate::simulate::{self, Discrepancy, ORACLE_TOL};

use config::{resolve, ConfigFile};
use verify::{run_verification, Fault};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qfridge",
    version,
    about = "Otto and swap refrigerators with a generalized-measurement stroke"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Closed-form report and stroke ledger of one cycle.
    Cycle(CycleArgs),
    /// Closed-form quantities over a parameter grid.
    Sweep(SweepArgs),
    /// COP against measurement strength for the four preset hot temperatures.
    Fig2(OutputArgs),
    /// Removed cold-side heat against measurement strength for the presets.
    Fig3(OutputArgs),
    /// Critical measurement strength, closed form and bisection.
    XiCritical(XiArgs),
    /// Randomized simulator-versus-closed-form verification.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "jsonl", alias = "json-lines")]
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, true).map_err(Error::Config)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub omega_c: Option<f64>,
    #[arg(long)]
    pub omega_h: Option<f64>,
    #[arg(long)]
    pub beta_c: Option<f64>,
    #[arg(long)]
    pub beta_h: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// csv (default) or jsonl.
    #[arg(long)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat `key = value` file using the long flag names; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[arg(long)]
    pub kind: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Also run the density-matrix simulator and report the largest gap.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub kind: Option<String>,
    /// Parameter to vary: xi, omega_c, omega_h, beta_c or beta_h.
    #[arg(long)]
    pub param: Option<String>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct XiArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Corrupt one closed-form entry to check that failures are detected.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const DEFAULT_SEED: u64 = 20240;
pub const DEFAULT_COUNT: usize = 1000;
pub const DEFAULT_STEPS: usize = 101;

/// Result of a subcommand: text to emit plus exit code.
struct Outcome {
    text: String,
    code: i32,
}

fn load_config(output: &OutputArgs) -> Result<ConfigFile> {
    match &output.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
}

/// Flags, then config, then the first preset of the figure datasets.
fn resolve_params(a: &ParamArgs, cfg: &ConfigFile) -> Result<CycleParams> {
    CycleParams::new(
        resolve(a.omega_c, cfg, "omega-c", analysis::FIG_OMEGA_C)?,
        resolve(a.omega_h, cfg, "omega-h", analysis::FIG_OMEGA_H)?,
        resolve(a.beta_c, cfg, "beta-c", analysis::FIG_BETA_C)?,
        resolve(a.beta_h, cfg, "beta-h", analysis::FIG_BETA_H[0])?,
        resolve(a.xi, cfg, "xi", 0.0)?,
    )
}

fn resolve_kind(flag: &Option<String>, cfg: &ConfigFile) -> Result<CycleKind> {
    resolve(flag.clone(), cfg, "kind", "mo1".to_string())?.parse()
}

fn resolve_format(o: &OutputArgs, cfg: &ConfigFile) -> Result<Format> {
    resolve(o.format, cfg, "format", Format::Csv)
}

fn resolve_out(o: &OutputArgs, cfg: &ConfigFile) -> Result<Option<PathBuf>> {
    Ok(o.out.clone().or(cfg.get::<PathBuf>("out")?))
}

fn report_csv(r: &CycleReport, check: Option<&Discrepancy>) -> String {
    let opt = |v: Option<f64>| v.map(sig17).unwrap_or_else(|| "none".into());
    let p = &r.params;
    let mut out = String::new();
    let mut meta = |k: &str, v: String| out.push_str(&format!("# {k}={v}\n"));
    meta("kind", r.kind.to_string());
    meta("omega_c", sig17(p.omega_c));
    meta("omega_h", sig17(p.omega_h));
    meta("beta_c", sig17(p.beta_c));
    meta("beta_h", sig17(p.beta_h));
    meta("xi", sig17(p.xi));
    meta("regime", p.regime().regime.to_string());
    meta("w_in", sig17(r.w_in));
    meta("w_ex", sig17(r.w_ex));
    meta("w_meas", sig17(r.w_meas));
    meta("surplus", r.surplus.to_string());
    meta("q_c_total", sig17(r.q_c_total));
    meta("q_h_total", sig17(r.q_h_total));
    meta("cop", sig17(r.cop));
    meta("xi_critical", opt(r.xi_critical));
    meta("engine_efficiency", opt(r.engine_efficiency));
    if let Some(d) = check {
        meta("verify_max_discrepancy", sig17(d.max_abs));
        meta("verify_worst_entry", d.worst_label.clone());
        meta("verify_tol", sig17(d.tol));
        meta("verify", if d.passed { "pass" } else { "fail" }.into());
    }
    out.push_str(&r.ledger.to_csv());
    out
}

fn report_jsonl(r: &CycleReport, check: Option<&Discrepancy>) -> String {
    let mut lines = vec![json!({
        "type": "report",
        "kind": r.kind,
        "params": r.params,
        "regime": r.params.regime().regime,
        "w_in": r.w_in,
        "w_ex": r.w_ex,
        "w_meas": r.w_meas,
        "surplus": r.surplus,
        "q_c_total": r.q_c_total,
        "q_h_total": r.q_h_total,
        "cop": r.cop,
        "xi_critical": r.xi_critical,
        "engine_efficiency": r.engine_efficiency,
    })];
    for e in r.ledger.iter() {
        let mut v = serde_json::to_value(e).expect("serializable");
        v["type"] = json!("stroke");
        lines.push(v);
    }
    if let Some(d) = check {
        lines.push(json!({
            "type": "verify",
            "max_discrepancy": d.max_abs,
            "worst_entry": d.worst_label,
            "tol": d.tol,
            "passed": d.passed,
        }));
    }
    lines.iter().map(|l| format!("{l}\n")).collect()
}

fn cmd_cycle(a: &CycleArgs) -> Result<Outcome> {
    let cfg = load_config(&a.output)?;
    let kind = resolve_kind(&a.kind, &cfg)?;
    let p = resolve_params(&a.params, &cfg)?;
    let tol = resolve(a.tol, &cfg, "tol", ORACLE_TOL)?;
    let report = analytic::report(kind, &p)?;
    let check = if a.verify {
        let trace = simulate::run_cycle(kind, &p)?;
        Some(simulate::compare_to_analytic(&trace, &report, tol)?)
    } else {
        None
    };
    let text = match resolve_format(&a.output, &cfg)? {
        Format::Csv => report_csv(&report, check.as_ref()),
        Format::Jsonl => report_jsonl(&report, check.as_ref()),
    };
    let code = match &check {
        Some(d) if !d.passed => EXIT_VERIFY,
        _ => EXIT_OK,
    };
    Ok(Outcome { text, code })
}

fn row_csv(r: &SweepRow) -> String {
    format!(
        "{},{},{},{},{},{}",
        sig17(r.value),
        sig17(r.cop),
        sig17(r.q_c_total),
        sig17(r.w_in),
        sig17(r.w_ex),
        r.status.label()
    )
}

fn row_json(r: &SweepRow, param: &str) -> serde_json::Value {
    let num = |x: f64| if x.is_finite() { json!(x) } else { json!(null) };
    json!({
        param: r.value,
        "cop": num(r.cop),
        "qc_total": num(r.q_c_total),
        "w_in": num(r.w_in),
        "w_ex": num(r.w_ex),
        "regime": r.status.label(),
    })
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let cfg = load_config(&a.output)?;
    let kind = resolve_kind(&a.kind, &cfg)?;
    let param: SweptParam = resolve(a.param.clone(), &cfg, "param", "xi".to_string())?.parse()?;
    let fixed = resolve_params(&a.params, &cfg)?;
    let spec = SweepSpec {
        kind,
        param,
        from: resolve(a.from, &cfg, "from", 0.0)?,
        to: resolve(a.to, &cfg, "to", 1.0)?,
        steps: resolve(a.steps, &cfg, "steps", DEFAULT_STEPS)?,
        fixed,
    };
    let rows = analysis::sweep(&spec)?;
    let text = match resolve_format(&a.output, &cfg)? {
        Format::Csv => {
            let mut out = format!(
                "# qfridge {} sweep kind={} param={}\n{},cop,qc_total,w_in,w_ex,regime\n",
                env!("CARGO_PKG_VERSION"),
                kind,
                param,
                param
            );
            for r in &rows {
                out.push_str(&row_csv(r));
                out.push('\n');
            }
            out
        }
        Format::Jsonl => rows
            .iter()
            .map(|r| format!("{}\n", row_json(r, param.name())))
            .collect(),
    };
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

fn figure_text(fig: &FigureDataset, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!(
                "# qfridge {} {} kind=mo1 omega_c={} omega_h={} beta_c={}\n",
                env!("CARGO_PKG_VERSION"),
                fig.name,
                analysis::FIG_OMEGA_C,
                analysis::FIG_OMEGA_H,
                analysis::FIG_BETA_C
            );
            for (i, s) in fig.series.iter().enumerate() {
                out.push_str(&format!(
                    "# series={} style={} beta_h={} nominal_w_in={:.2} w_in={}\n",
                    i + 1,
                    s.style,
                    s.beta_h,
                    s.nominal_w_in,
                    sig17(s.w_in)
                ));
            }
            out.push_str("series,beta_h,xi,cop,qc_total,w_in,w_ex,regime\n");
            for (i, s) in fig.series.iter().enumerate() {
                for r in &s.rows {
                    out.push_str(&format!("{},{},{}\n", i + 1, sig17(s.beta_h), row_csv(r)));
                }
            }
            out
        }
        Format::Jsonl => {
            let mut out = String::new();
            for (i, s) in fig.series.iter().enumerate() {
                out.push_str(&format!(
                    "{}\n",
                    json!({
                        "type": "series",
                        "figure": fig.name,
                        "series": i + 1,
                        "style": s.style,
                        "beta_h": s.beta_h,
                        "nominal_w_in": s.nominal_w_in,
                        "w_in": s.w_in,
                    })
                ));
            }
            for (i, s) in fig.series.iter().enumerate() {
                for r in &s.rows {
                    let mut v = row_json(r, "xi");
                    v["series"] = json!(i + 1);
                    v["beta_h"] = json!(s.beta_h);
                    out.push_str(&format!("{v}\n"));
                }
            }
            out
        }
    }
}

fn cmd_figure(a: &OutputArgs, fig: FigureDataset) -> Result<Outcome> {
    let cfg = load_config(a)?;
    Ok(Outcome {
        text: figure_text(&fig, resolve_format(a, &cfg)?),
        code: EXIT_OK,
    })
}

fn cmd_xi_critical(a: &XiArgs) -> Result<Outcome> {
    let cfg = load_config(&a.output)?;
    let p = resolve_params(&a.params, &cfg)?;
    let closed = analytic::xi_critical(&p)?;
    let numeric = analysis::find_xi_critical_numeric(&p)?;
    let w_ex = analytic::w_ex(&p.with_xi(closed)?);
    let pairs = [
        ("xi_critical", closed),
        ("xi_critical_bisection", numeric),
        ("abs_difference", (closed - numeric).abs()),
        ("w_ex_at_xi_critical", w_ex),
        ("w_in", analytic::w_in(&p)),
    ];
    let text = match resolve_format(&a.output, &cfg)? {
        Format::Csv => {
            let mut out = String::from("quantity,value\n");
            for (k, v) in pairs {
                out.push_str(&format!("{k},{}\n", sig17(v)));
            }
            out
        }
        Format::Jsonl => {
            let obj: serde_json::Map<String, serde_json::Value> = pairs
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            format!("{}\n", serde_json::Value::Object(obj))
        }
    };
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let cfg = load_config(&a.output)?;
    let seed = resolve(a.seed, &cfg, "seed", DEFAULT_SEED)?;
    let count = resolve(a.count, &cfg, "count", DEFAULT_COUNT)?;
    let tol = resolve(a.tol, &cfg, "tol", ORACLE_TOL)?;
    let fault = if a.inject_fault {
        Fault::Mo1MeasurementHeat
    } else {
        Fault::None
    };
    let report = run_verification(seed, count, tol, fault)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY
    };
    Ok(Outcome {
        text: report.render(),
        code,
    })
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::Cycle(a) => &a.output,
        Command::Sweep(a) => &a.output,
        Command::Fig2(a) | Command::Fig3(a) => a,
        Command::XiCritical(a) => &a.output,
        Command::Verify(a) => &a.output,
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_regime() => EXIT_REGIME,
        Error::EmptySweep => EXIT_REGIME,
        Error::Consistency(_) | Error::Structural(_) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Cycle(a) => cmd_cycle(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Fig2(a) => cmd_figure(a, analysis::fig2_dataset()),
        Command::Fig3(a) => cmd_figure(a, analysis::fig3_dataset()),
        Command::XiCritical(a) => cmd_xi_critical(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = dispatch(&cli.command).and_then(|o| {
        let cfg = load_config(output_args(&cli.command))?;
        let dest = resolve_out(output_args(&cli.command), &cfg)?;
        Ok((o, dest))
    });
    match outcome {
        Ok((o, dest)) => {
            let written = match dest {
                Some(path) => fs::write(&path, o.text.as_bytes())
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => stdout
                    .write_all(o.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_USAGE;
            }
            if o.code == EXIT_VERIFY {
                let _ = writeln!(stderr, "verification failed");
            }
            o.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("qfridge").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn meta(text: &str, key: &str) -> f64 {
        let prefix = format!("# {key}=");
        text.lines()
            .find_map(|l| l.strip_prefix(&prefix))
            .unwrap()
            .parse()
            .unwrap()
    }

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

    #[test]
    fn cycle_reports_cop() {
        let mut args = vec!["cycle", "--kind", "mo1", "--xi", "0.5"];
        args.extend(FIG2);
        let (code, out, _) = run_str(&args);
        assert_eq!(code, EXIT_OK);
        assert!((meta(&out, "cop") - 0.290_493_574_164_427_56).abs() < 1e-12);
        assert!(out.contains("stroke,label,kind,counterpart,value\n"));

        let mut args = vec!["cycle", "--kind", "mo1", "--xi", "0"];
        args.extend(FIG2);
        let (_, out, _) = run_str(&args);
        assert!((meta(&out, "cop") - 0.25).abs() < 1e-15);
    }

    #[test]
    fn regime_violation_exits_2() {
        let (code, _, err) = run_str(&["cycle", "--kind", "mo1", "--beta-h", "0.05"]);
        assert_eq!(code, EXIT_REGIME);
        assert!(err.contains("beta_c*omega_c < beta_h*omega_h"), "{err}");
    }

    #[test]
    fn bad_flags_exit_1() {
        assert_eq!(run_str(&["cycle", "--bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["cycle", "--kind", "diesel"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["cycle", "--xi", "1.5"]).0, EXIT_USAGE);
        assert_eq!(run_str(&[]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn cycle_verify_flag() {
        let (code, out, _) = run_str(&["cycle", "--kind", "ms2", "--xi", "0.3", "--verify"]);
        assert_eq!(code, EXIT_OK);
        assert!(meta(&out, "verify_max_discrepancy") <= 1e-10);
    }

    #[test]
    fn jsonl_cycle_output() {
        let (code, out, _) =
            run_str(&["cycle", "--kind", "mo2", "--xi", "0.5", "--format", "jsonl"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<serde_json::Value> = out
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 6);
        assert_eq!(lines[0]["type"], "report");
        assert!((lines[0]["cop"].as_f64().unwrap() - 0.25).abs() < 1e-13);
        assert_eq!(lines[1]["label"], "Q(xi)");
    }

    #[test]
    fn sweep_header_and_rows() {
        let (code, out, _) = run_str(&["sweep", "--kind", "mo2", "--steps", "11"]);
        assert_eq!(code, EXIT_OK);
        let data: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], "xi,cop,qc_total,w_in,w_ex,regime");
        assert_eq!(data.len(), 12);
        assert!(data[1].ends_with(",refrigerator"));
    }

    #[test]
    fn config_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "kind = mo1\nxi = 1\n").unwrap();
        let p = path.to_str().unwrap();
        let (_, out, _) = run_str(&["cycle", "--config", p]);
        assert!((meta(&out, "cop") - 0.330_987_148_328_855_2).abs() < 1e-12);
        let (_, out, _) = run_str(&["cycle", "--config", p, "--xi", "0"]);
        assert!((meta(&out, "cop") - 0.25).abs() < 1e-15);

        fs::write(&path, "colour = blue\n").unwrap();
        assert_eq!(run_str(&["cycle", "--config", p]).0, EXIT_USAGE);
    }

    #[test]
    fn out_flag_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("xi.csv");
        let (code, out, _) = run_str(&["xi-critical", "--out", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.is_empty());
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("quantity,value\nxi_critical,7.5531633558"));
    }
}
