//! Command-line interface.
//!
//! Four subcommands: `classify` one parameter value, `sweep` a range,
//! `plot` an SVG picture, and `oracle` for the built-in regression
//! corpus. Exit codes encode verdicts so shell scripts can test for a
//! tangent without parsing output: 0 = Tangent (or all rows / all cases
//! pass), 1 = Corner (or some row / case failed), 2 = Degenerate or
//! Undetermined, 64 = usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::curve::CurveExpr;
use crate::limits::LimitConfig;
use crate::oracle::{run_all, OracleOutcome};
use crate::report::{MachineRecord, OracleRecord};
use crate::svg::{self, PlotOptions};
use crate::tangent::{
    classify, report_for_error, sweep, TangentReport, Verdict, DEFAULT_COLLINEAR_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_TANGENT: i32 = 1;
pub const EXIT_NO_VERDICT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "tangent",
    version,
    about = "Classify tangent lines of parametric curves and graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the tangent at a single parameter value.
    Classify {
        /// Curve literal, e.g. "x=cos(t); y=sin(t)" or "f=abs(t)".
        curve: String,
        /// Parameter value of the base point.
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Classify at n evenly spaced parameter values across a range.
    Sweep {
        /// Curve literal, e.g. "x=cos(t); y=sin(t)" or "f=abs(t)".
        curve: String,
        /// Parameter range "a:b" with a < b.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Number of evenly spaced samples (at least 2).
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Render the curve and the classified point as an SVG document.
    Plot {
        /// Curve literal, e.g. "x=cos(t); y=sin(t)" or "f=abs(t)".
        curve: String,
        /// Parameter value of the base point.
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
        /// Parameter range "a:b" to draw the curve over.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run the built-in regression corpus and report per-case results.
    Oracle {
        #[command(flatten)]
        common: CommonOpts,
    },
}

#[derive(Args, Debug)]
struct CommonOpts {
    /// Initial probe step.
    #[arg(long)]
    h0: Option<f64>,
    /// Step shrink factor per probe, in (0, 1).
    #[arg(long)]
    rho: Option<f64>,
    /// Angular agreement tolerance in radians.
    #[arg(long = "angle-tol")]
    angle_tol: Option<f64>,
    /// Collinearity tolerance for matching side limits.
    #[arg(long = "collinear-tol")]
    collinear_tol: Option<f64>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Read defaults from a key=value config file (flags still win).
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Output format for reports.
#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Readable text.
    Human,
    /// One JSON record per line.
    Machine,
}

/// Fully resolved configuration: defaults, then the config file, then
/// command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub limits: LimitConfig,
    pub collinear_tol: f64,
    pub format: Format,
    pub svg: PlotOptions,
}

impl Default for CliConfig {
    fn default() -> CliConfig {
        CliConfig {
            limits: LimitConfig::default(),
            collinear_tol: DEFAULT_COLLINEAR_TOL,
            format: Format::Human,
            svg: PlotOptions::default(),
        }
    }
}

#[derive(Debug)]
struct UsageError(String);

fn usage(message: String) -> UsageError {
    UsageError(message)
}

fn parse_num<T: std::str::FromStr>(
    path: &Path,
    lineno: usize,
    key: &str,
    value: &str,
) -> Result<T, UsageError> {
    value.parse().map_err(|_| {
        usage(format!(
            "{}:{}: invalid value {:?} for {}",
            path.display(),
            lineno,
            value,
            key
        ))
    })
}

fn apply_config_file(cfg: &mut CliConfig, path: &Path) -> Result<(), UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(usage(format!(
                "{}:{}: expected key=value, got {:?}",
                path.display(),
                lineno,
                line
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "h0" => cfg.limits.h0 = parse_num(path, lineno, key, value)?,
            "rho" => cfg.limits.rho = parse_num(path, lineno, key, value)?,
            "angle_tol" => cfg.limits.angle_tol = parse_num(path, lineno, key, value)?,
            "window" => cfg.limits.window = parse_num(path, lineno, key, value)?,
            "max_steps" => cfg.limits.max_steps = parse_num(path, lineno, key, value)?,
            "collinear_tol" => cfg.collinear_tol = parse_num(path, lineno, key, value)?,
            "format" => {
                cfg.format = match value {
                    "human" => Format::Human,
                    "machine" => Format::Machine,
                    _ => {
                        return Err(usage(format!(
                            "{}:{}: format must be human or machine, got {:?}",
                            path.display(),
                            lineno,
                            value
                        )));
                    }
                }
            }
            "svg_width" => cfg.svg.width = parse_num(path, lineno, key, value)?,
            "svg_height" => cfg.svg.height = parse_num(path, lineno, key, value)?,
            "svg_samples" => cfg.svg.samples = parse_num(path, lineno, key, value)?,
            "svg_margin" => cfg.svg.margin = parse_num(path, lineno, key, value)?,
            _ => {
                return Err(usage(format!(
                    "{}:{}: unknown key {:?}",
                    path.display(),
                    lineno,
                    key
                )));
            }
        }
    }
    Ok(())
}

fn resolve(common: &CommonOpts) -> Result<CliConfig, UsageError> {
    let mut cfg = CliConfig::default();
    if let Some(path) = &common.config {
        apply_config_file(&mut cfg, path)?;
    }
    if let Some(h0) = common.h0 {
        cfg.limits.h0 = h0;
    }
    if let Some(rho) = common.rho {
        cfg.limits.rho = rho;
    }
    if let Some(angle_tol) = common.angle_tol {
        cfg.limits.angle_tol = angle_tol;
    }
    if let Some(collinear_tol) = common.collinear_tol {
        cfg.collinear_tol = collinear_tol;
    }
    if let Some(format) = common.format {
        cfg.format = format;
    }
    cfg.limits.validate().map_err(|e| usage(e.to_string()))?;
    cfg.svg.validate().map_err(|e| usage(e.to_string()))?;
    if !(cfg.collinear_tol.is_finite() && cfg.collinear_tol > 0.0) {
        return Err(usage(format!(
            "collinear_tol must be positive and finite, got {}",
            cfg.collinear_tol
        )));
    }
    Ok(cfg)
}

fn parse_curve(src: &str) -> Result<CurveExpr, UsageError> {
    CurveExpr::parse_literal(src).map_err(|e| usage(format!("invalid curve literal: {e}")))
}

fn parse_range(src: &str) -> Result<(f64, f64), UsageError> {
    let bad = || {
        usage(format!(
            "invalid range {src:?}: expected \"a:b\" with a < b"
        ))
    };
    let (a, b) = src.split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(bad());
    }
    Ok((a, b))
}

fn verdict_exit(verdict: Verdict) -> i32 {
    match verdict {
        Verdict::Tangent => EXIT_OK,
        Verdict::Corner => EXIT_NOT_TANGENT,
        Verdict::Degenerate | Verdict::Undetermined => EXIT_NO_VERDICT,
    }
}

fn classify_or_degenerate(curve: &CurveExpr, t0: f64, cfg: &CliConfig) -> TangentReport {
    match classify(curve, t0, &cfg.limits, cfg.collinear_tol) {
        Ok(report) => report,
        Err(err) => report_for_error(t0, &err),
    }
}

fn human_classify(curve: &CurveExpr, report: &TangentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve:     {}", curve.label());
    let _ = writeln!(out, "t0:        {}", report.t0);
    if report.point.is_finite() {
        let _ = writeln!(out, "point:     {}", report.point);
    } else {
        let _ = writeln!(out, "point:     not evaluable");
    }
    let _ = writeln!(out, "verdict:   {}", report.verdict);
    match report.direction {
        Some(d) => {
            let _ = writeln!(out, "direction: {d}");
        }
        None => {
            let _ = writeln!(out, "direction: none");
        }
    }
    match report.collinearity_residual {
        Some(r) => {
            let _ = writeln!(out, "residual:  {r:.3e}");
        }
        None => {
            let _ = writeln!(out, "residual:  n/a");
        }
    }
    let _ = writeln!(out, "minus:     {}", report.minus.brief());
    let _ = writeln!(out, "plus:      {}", report.plus.brief());
    if !report.notes.is_empty() {
        let _ = writeln!(out, "notes:     {}", report.notes);
    }
    out
}

fn human_sweep(curve: &CurveExpr, reports: &[TangentReport]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "curve: {}", curve.label());
    let _ = writeln!(
        out,
        "{:<24} {:<14} {:<34} note",
        "t0", "verdict", "direction"
    );
    let mut tangents = 0usize;
    for report in reports {
        if report.verdict == Verdict::Tangent {
            tangents += 1;
        }
        let direction = match report.direction {
            Some(d) => d.to_string(),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{:<24} {:<14} {:<34} {}",
            report.t0,
            report.verdict.to_string(),
            direction,
            report.notes
        );
    }
    let _ = writeln!(out, "summary: {tangents}/{} Tangent", reports.len());
    out
}

fn human_oracle(outcomes: &[OracleOutcome]) -> String {
    let mut out = String::new();
    let mut passed = 0usize;
    for o in outcomes {
        if o.pass {
            passed += 1;
            let _ = writeln!(out, "PASS {:<22} {}", o.name, o.verdict);
        } else {
            let _ = writeln!(
                out,
                "FAIL {:<22} expected {}, got {}: {}",
                o.name, o.expected, o.verdict, o.note
            );
        }
    }
    let _ = writeln!(out, "summary: {passed}/{} cases passed", outcomes.len());
    out
}

fn machine_reports(reports: &[TangentReport]) -> String {
    let mut out = String::new();
    for report in reports {
        out.push_str(&MachineRecord::from_report(report).to_json_line());
        out.push('\n');
    }
    out
}

fn cmd_classify(curve: &str, t0: f64, cfg: &CliConfig) -> Result<(i32, String), UsageError> {
    if !t0.is_finite() {
        return Err(usage(format!("--at must be finite, got {t0}")));
    }
    let curve = parse_curve(curve)?;
    let report = classify_or_degenerate(&curve, t0, cfg);
    let output = match cfg.format {
        Format::Human => human_classify(&curve, &report),
        Format::Machine => machine_reports(std::slice::from_ref(&report)),
    };
    Ok((verdict_exit(report.verdict), output))
}

fn cmd_sweep(
    curve: &str,
    range: &str,
    n: usize,
    cfg: &CliConfig,
) -> Result<(i32, String), UsageError> {
    let curve = parse_curve(curve)?;
    let (t_min, t_max) = parse_range(range)?;
    if n < 2 {
        return Err(usage(format!("--n must be at least 2, got {n}")));
    }
    let reports = sweep(&curve, t_min, t_max, n, &cfg.limits, cfg.collinear_tol);
    let all_tangent = reports.iter().all(|r| r.verdict == Verdict::Tangent);
    let output = match cfg.format {
        Format::Human => human_sweep(&curve, &reports),
        Format::Machine => machine_reports(&reports),
    };
    let code = if all_tangent {
        EXIT_OK
    } else {
        EXIT_NOT_TANGENT
    };
    Ok((code, output))
}

fn cmd_plot(
    curve: &str,
    t0: f64,
    range: &str,
    cfg: &CliConfig,
) -> Result<(i32, String), UsageError> {
    if !t0.is_finite() {
        return Err(usage(format!("--at must be finite, got {t0}")));
    }
    let curve = parse_curve(curve)?;
    let (t_min, t_max) = parse_range(range)?;
    let report = classify_or_degenerate(&curve, t0, cfg);
    let document = svg::render(&curve, &report, t_min, t_max, &cfg.svg);
    Ok((EXIT_OK, document))
}

fn cmd_oracle(cfg: &CliConfig) -> Result<(i32, String), UsageError> {
    let outcomes = run_all(&cfg.limits, cfg.collinear_tol);
    let all_pass = outcomes.iter().all(|o| o.pass);
    let output = match cfg.format {
        Format::Human => human_oracle(&outcomes),
        Format::Machine => {
            let mut out = String::new();
            for o in &outcomes {
                out.push_str(&OracleRecord::from_outcome(o).to_json_line());
                out.push('\n');
            }
            out
        }
    };
    let code = if all_pass { EXIT_OK } else { EXIT_NOT_TANGENT };
    Ok((code, output))
}

fn dispatch(cli: Cli) -> Result<(i32, String, Option<PathBuf>), UsageError> {
    let (common, result) = match &cli.command {
        Command::Classify { curve, at, common } => {
            (common, cmd_classify(curve, *at, &resolve(common)?)?)
        }
        Command::Sweep {
            curve,
            range,
            n,
            common,
        } => (common, cmd_sweep(curve, range, *n, &resolve(common)?)?),
        Command::Plot {
            curve,
            at,
            range,
            common,
        } => (common, cmd_plot(curve, *at, range, &resolve(common)?)?),
        Command::Oracle { common } => (common, cmd_oracle(&resolve(common)?)?),
    };
    let (code, output) = result;
    Ok((code, output, common.out.clone()))
}

/// Parse arguments from the process environment, run the selected
/// command, and return the exit code for `std::process::exit`.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok((code, output, out_path)) => match out_path {
            Some(path) => {
                if let Err(e) = fs::write(&path, &output) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
                code
            }
            None => {
                print!("{output}");
                code
            }
        },
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> CliConfig {
        CliConfig::default()
    }

    #[test]
    fn classify_exit_codes_follow_the_verdict() {
        let (code, out) = cmd_classify("x=cos(t); y=sin(t)", 0.0, &cfg()).unwrap();
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verdict:   Tangent"), "{out}");
        assert!(out.contains("direction: (0, 1, 0)"), "{out}");

        let (code, _) = cmd_classify("f=abs(t)", 0.0, &cfg()).unwrap();
        assert_eq!(code, EXIT_NOT_TANGENT);

        let (code, _) = cmd_classify("x=1; y=1", 0.0, &cfg()).unwrap();
        assert_eq!(code, EXIT_NO_VERDICT);

        // An unevaluable base point is reported, not a usage error.
        let (code, out) = cmd_classify("f=ln(t)", 0.0, &cfg()).unwrap();
        assert_eq!(code, EXIT_NO_VERDICT);
        assert!(out.contains("not evaluable"), "{out}");
    }

    #[test]
    fn classify_machine_output_is_one_record() {
        let mut config = cfg();
        config.format = Format::Machine;
        let (code, out) = cmd_classify("x=cos(t); y=sin(t)", 0.0, &config).unwrap();
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 1);
        let record = MachineRecord::parse(out.trim()).unwrap();
        assert_eq!(record.verdict, "Tangent");
        assert_eq!(record.dirx, Some(0.0));
        assert_eq!(record.diry, Some(1.0));
    }

    #[test]
    fn sweep_requires_two_samples_and_a_real_range() {
        assert!(cmd_sweep("x=t; y=t", "0:1", 1, &cfg()).is_err());
        assert!(cmd_sweep("x=t; y=t", "1:0", 4, &cfg()).is_err());
        assert!(cmd_sweep("x=t; y=t", "zero:one", 4, &cfg()).is_err());
        assert!(cmd_sweep("x=t; y=", "0:1", 4, &cfg()).is_err());
    }

    #[test]
    fn sweep_exit_code_reflects_non_tangent_rows() {
        let (code, out) = cmd_sweep("x=cos(t); y=sin(t)", "0:6.28", 16, &cfg()).unwrap();
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("summary: 16/16 Tangent"), "{out}");

        let (code, out) = cmd_sweep("f=abs(t)", "-1:1", 3, &cfg()).unwrap();
        assert_eq!(code, EXIT_NOT_TANGENT);
        assert!(out.contains("Corner"), "{out}");
        assert!(out.contains("summary: 2/3 Tangent"), "{out}");
    }

    #[test]
    fn plot_renders_even_for_corners() {
        let (code, out) = cmd_plot("f=abs(t)", 0.0, "-1:1", &cfg()).unwrap();
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("<svg "));
        assert!(!out.contains("class=\"tangent\""));
        assert!(cmd_plot("f=abs(", 0.0, "-1:1", &cfg()).is_err());
    }

    #[test]
    fn oracle_passes_by_default_and_fails_when_over_tight() {
        let (code, out) = cmd_oracle(&cfg()).unwrap();
        assert_eq!(code, EXIT_OK, "{out}");

        let mut tight = cfg();
        tight.collinear_tol = 1e-12;
        let (code, out) = cmd_oracle(&tight).unwrap();
        assert_eq!(code, EXIT_NOT_TANGENT, "{out}");
        assert!(out.contains("FAIL"), "{out}");
    }

    #[test]
    fn config_file_sets_defaults_and_flags_override() {
        let dir = std::env::temp_dir().join("tangent-cli-config-test");
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ok.conf");
        fs::write(
            &path,
            "# comment\n\nh0 = 0.005\nrho=0.25\nformat = machine\nsvg_width = 320\n",
        )
        .unwrap();
        let common = CommonOpts {
            h0: None,
            rho: Some(0.75),
            angle_tol: None,
            collinear_tol: None,
            format: None,
            out: None,
            config: Some(path.clone()),
        };
        let cfg = resolve(&common).unwrap();
        assert_eq!(cfg.limits.h0, 0.005);
        assert_eq!(cfg.limits.rho, 0.75, "flag overrides the file");
        assert_eq!(cfg.format, Format::Machine);
        assert_eq!(cfg.svg.width, 320);

        for bad in ["windows = 3\n", "rho\n", "rho = quick\n", "format = yaml\n"] {
            let bad_path = dir.join("bad.conf");
            fs::write(&bad_path, bad).unwrap();
            let common = CommonOpts {
                h0: None,
                rho: None,
                angle_tol: None,
                collinear_tol: None,
                format: None,
                out: None,
                config: Some(bad_path.clone()),
            };
            let err = resolve(&common).unwrap_err();
            assert!(err.0.contains("bad.conf:1"), "{}", err.0);
        }
    }

    #[test]
    fn resolved_config_is_validated() {
        let common = CommonOpts {
            h0: Some(-1.0),
            rho: None,
            angle_tol: None,
            collinear_tol: None,
            format: None,
            out: None,
            config: None,
        };
        assert!(resolve(&common).is_err());

        let common = CommonOpts {
            h0: None,
            rho: None,
            angle_tol: None,
            collinear_tol: Some(0.0),
            format: None,
            out: None,
            config: None,
        };
        assert!(resolve(&common).is_err());
    }

    #[test]
    fn range_parser_accepts_negative_endpoints() {
        assert_eq!(parse_range("-1:1").unwrap(), (-1.0, 1.0));
        assert_eq!(parse_range(" -2.5 : -0.5 ").unwrap(), (-2.5, -0.5));
        assert!(parse_range("1").is_err());
        assert!(parse_range("0:inf").is_err());
    }
}
