//! Command-line orchestration: argument parsing, config merging, suite
//! execution, and report persistence.
//!
//! The binary writes one JSON document per run — version, the effective
//! configuration, the constants table, and the suite reports — to `--out` or
//! stdout, with an optional CSV dump of the pointwise cases. Exit codes:
//! 0 when every suite passes, 1 when any check fails, 2 on configuration or
//! I/O errors.

use crate::error::Error;
use crate::grid::{GridSpec, ZeroModePolicy};
use crate::identities::{run_suite, SuiteContext, SuiteId};
use crate::operators::QuadratureSpec;
use crate::report::CheckReport;
use crate::specfun;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::PathBuf;

/// Effective run configuration after merging defaults, the optional JSON
/// config file, and command-line flags (flags win).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Ambient dimension.
    pub n: usize,
    /// Suites to execute (empty for a constants-only run).
    pub suites: Vec<SuiteId>,
    /// Tolerance override applied to every suite (None → per-suite default).
    pub tol: Option<f64>,
    /// Seed for the randomized suites.
    pub seed: u64,
    /// Singular-integral quadrature controls.
    pub quadrature: QuadratureSpec,
    /// Grid half-width L.
    pub grid_half_width: f64,
    /// Grid points per axis (None → 4096 in n = 1, 512 in n = 2).
    pub grid_points: Option<usize>,
    /// Zero-mode policy for the Fourier path.
    pub zero_mode: ZeroModePolicy,
    /// Report destination (None → stdout).
    pub output_path: Option<PathBuf>,
    /// Optional CSV point dump.
    pub emit_csv: Option<PathBuf>,
    /// Detector-honesty perturbation magnitude (None → clean run).
    pub perturb: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            n: 1,
            suites: Vec::new(),
            tol: None,
            seed: 7,
            quadrature: QuadratureSpec::default(),
            grid_half_width: 20.0,
            grid_points: None,
            zero_mode: ZeroModePolicy::Corrected,
            output_path: None,
            emit_csv: None,
            perturb: None,
        }
    }
}

/// Optional-field mirror of [`RunConfig`] for `--config` JSON files.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    suites: Option<Vec<String>>,
    tol: Option<f64>,
    seed: Option<u64>,
    quad_abs_tol: Option<f64>,
    quad_rel_tol: Option<f64>,
    grid_half_width: Option<f64>,
    grid_points: Option<usize>,
    zero_mode: Option<serde_json::Value>,
    output_path: Option<PathBuf>,
    emit_csv: Option<PathBuf>,
    perturb: Option<f64>,
}

#[derive(Parser, Debug)]
#[command(
    name = "loglap",
    version,
    about = "Numerical verification of the logarithmic Laplacian: constants, \
             bubble solutions, and closed-form identities"
)]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand, Debug)]
enum CliCommand {
    /// Emit the constants table only.
    Constants(CommonFlags),
    /// Run identity suites (named suites, or `all`).
    Verify {
        /// Suite names: bubble, fracbubble, scaling, kelvin, commutator,
        /// pohozaev, pitt, asymptotics, expansion, sublinear, or all.
        #[arg(required = true)]
        suites: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Shorthand for `verify expansion`.
    Expansion(CommonFlags),
    /// Shorthand for `verify pitt`.
    Pitt(CommonFlags),
    /// Shorthand for `verify pohozaev`.
    Pohozaev(CommonFlags),
}

#[derive(Args, Debug, Default)]
struct CommonFlags {
    /// Ambient dimension (1, 2, or 3; the Fourier-grid suites need 1 or 2).
    #[arg(long)]
    n: Option<usize>,
    /// Tolerance override applied to every selected suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// JSON config file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump pointwise cases as CSV.
    #[arg(long = "emit-csv")]
    emit_csv: Option<PathBuf>,
    /// Absolute tolerance for the adaptive quadrature.
    #[arg(long = "quad-abs-tol")]
    quad_abs_tol: Option<f64>,
    /// Relative tolerance for the adaptive quadrature.
    #[arg(long = "quad-rel-tol")]
    quad_rel_tol: Option<f64>,
    /// Grid half-width L (box [−L, L]^n).
    #[arg(long = "grid-L")]
    grid_l: Option<f64>,
    /// Grid points per axis (power of two).
    #[arg(long = "grid-N")]
    grid_n: Option<usize>,
    /// Zero-mode policy: "corrected", "exclude", or a number to assign.
    #[arg(long = "zero-mode", allow_hyphen_values = true)]
    zero_mode: Option<String>,
    /// Run each suite against its documented perturbation of this size
    /// (detector-honesty check; the run is expected to fail).
    #[arg(long)]
    perturb: Option<f64>,
}

fn parse_zero_mode_str(s: &str) -> Result<ZeroModePolicy, Error> {
    match s {
        "corrected" => Ok(ZeroModePolicy::Corrected),
        "exclude" => Ok(ZeroModePolicy::Exclude),
        other => other
            .parse::<f64>()
            .map(ZeroModePolicy::Assign)
            .map_err(|_| {
                Error::config(format!(
                    "zero-mode must be 'corrected', 'exclude', or a number; got '{other}'"
                ))
            }),
    }
}

fn parse_suite_list(names: &[String]) -> Result<Vec<SuiteId>, Error> {
    let mut suites = Vec::new();
    for name in names {
        if name == "all" {
            suites.extend(SuiteId::ALL);
        } else {
            suites.push(SuiteId::parse(name)?);
        }
    }
    suites.dedup();
    Ok(suites)
}

fn merge(flags: &CommonFlags, suites: Vec<SuiteId>) -> Result<RunConfig, Error> {
    let mut cfg = RunConfig { suites, ..RunConfig::default() };

    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| Error::config(format!("bad config {}: {e}", path.display())))?;
        if let Some(n) = file.n {
            cfg.n = n;
        }
        if let Some(names) = file.suites {
            cfg.suites = parse_suite_list(&names)?;
        }
        cfg.tol = file.tol.or(cfg.tol);
        if let Some(seed) = file.seed {
            cfg.seed = seed;
        }
        if let Some(v) = file.quad_abs_tol {
            cfg.quadrature.abs_tol = v;
        }
        if let Some(v) = file.quad_rel_tol {
            cfg.quadrature.rel_tol = v;
        }
        if let Some(v) = file.grid_half_width {
            cfg.grid_half_width = v;
        }
        cfg.grid_points = file.grid_points.or(cfg.grid_points);
        if let Some(zm) = file.zero_mode {
            cfg.zero_mode = match zm {
                serde_json::Value::String(s) => parse_zero_mode_str(&s)?,
                serde_json::Value::Number(v) => ZeroModePolicy::Assign(
                    v.as_f64().ok_or_else(|| Error::config("bad zero-mode number"))?,
                ),
                _ => return Err(Error::config("bad zero-mode value in config file")),
            };
        }
        cfg.output_path = file.output_path.or(cfg.output_path);
        cfg.emit_csv = file.emit_csv.or(cfg.emit_csv);
        cfg.perturb = file.perturb.or(cfg.perturb);
    }

    if let Some(n) = flags.n {
        cfg.n = n;
    }
    cfg.tol = flags.tol.or(cfg.tol);
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(v) = flags.quad_abs_tol {
        cfg.quadrature.abs_tol = v;
    }
    if let Some(v) = flags.quad_rel_tol {
        cfg.quadrature.rel_tol = v;
    }
    if let Some(v) = flags.grid_l {
        cfg.grid_half_width = v;
    }
    cfg.grid_points = flags.grid_n.or(cfg.grid_points);
    if let Some(zm) = &flags.zero_mode {
        cfg.zero_mode = parse_zero_mode_str(zm)?;
    }
    cfg.output_path = flags.out.clone().or(cfg.output_path);
    cfg.emit_csv = flags.emit_csv.clone().or(cfg.emit_csv);
    cfg.perturb = flags.perturb.or(cfg.perturb);

    if !(1..=3).contains(&cfg.n) {
        return Err(Error::config("--n must be 1, 2, or 3"));
    }
    cfg.quadrature.validate()?;
    Ok(cfg)
}

/// Parses argv into a run configuration. The first element is the program
/// name, as in `std::env::args()`.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, Error>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = CliArgs::try_parse_from(argv).map_err(|e| Error::config(e.to_string()))?;
    match cli.command {
        CliCommand::Constants(flags) => merge(&flags, Vec::new()),
        CliCommand::Verify { suites, flags } => {
            let ids = parse_suite_list(&suites)?;
            merge(&flags, ids)
        }
        CliCommand::Expansion(flags) => merge(&flags, vec![SuiteId::Expansion]),
        CliCommand::Pitt(flags) => merge(&flags, vec![SuiteId::Pitt]),
        CliCommand::Pohozaev(flags) => merge(&flags, vec![SuiteId::Pohozaev]),
    }
}

/// The constants table as the JSON object the `constants` output contract
/// fixes, with b_{n,s} tabulated over s ∈ {0.05, 0.10, …, 0.45}.
pub fn constants_json(n: usize) -> Result<serde_json::Value, Error> {
    let tab = specfun::constants_table(n as u32)?;
    let bexp = specfun::b_expansion(n as u32)?;
    let b_ns: Vec<serde_json::Value> = (1..=9)
        .map(|i| {
            let s = i as f64 * 0.05;
            Ok(serde_json::json!({ "s": s, "b_ns": specfun::b_ns_analytic(n as u32, s)? }))
        })
        .collect::<Result<_, Error>>()?;
    Ok(serde_json::json!({
        "n": n,
        "c_n": tab.c_n,
        "rho_n": tab.rho_n,
        "beta_n": tab.beta_n,
        "lambda_n": tab.lambda_n,
        "B_n_printed": tab.b_n_printed,
        "ln_lambda_n": tab.ln_lambda_n,
        "D_n": tab.d_n,
        "b_ns": b_ns,
        "gap_Bn": tab.ln_lambda_n - tab.b_n_printed,
        "b1_empirical": bexp.b1_empirical,
        "b1_printed": bexp.b1_printed,
    }))
}

/// The JSON document a run produces.
#[derive(Debug, Serialize)]
pub struct RunDocument {
    pub version: &'static str,
    pub config: RunConfig,
    pub constants: serde_json::Value,
    pub reports: Vec<CheckReport>,
}

/// Executes the configured suites and assembles the output document.
pub fn execute(config: &RunConfig) -> Result<RunDocument, Error> {
    init_thread_pool();
    let grid = if config.n <= 2 {
        let default = GridSpec::default_for(config.n)?;
        Some(GridSpec {
            n: config.n,
            half_width: config.grid_half_width,
            points: config.grid_points.unwrap_or(default.points),
            zero_mode: config.zero_mode,
        })
    } else {
        None
    };
    if let Some(g) = &grid {
        g.validate()?;
    }
    let mut reports = Vec::with_capacity(config.suites.len());
    for &id in &config.suites {
        let ctx = SuiteContext {
            n: config.n,
            tol: config.tol,
            quad: config.quadrature,
            grid,
            seed: config.seed,
            perturb: match config.perturb {
                Some(eps) => id.documented_perturbation(eps),
                None => crate::identities::Perturbation::None,
            },
        };
        reports.push(run_suite(id, &ctx)?);
    }
    Ok(RunDocument {
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        constants: constants_json(config.n)?,
        reports,
    })
}

/// Caps the worker count from `LOGLAP_THREADS` (best effort; the pool can
/// only be configured once per process).
fn init_thread_pool() {
    if let Ok(value) = std::env::var("LOGLAP_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
}

/// CSV point dump: one row per case, with the sample coordinates padded to
/// the run's dimension (blank for cases not tied to a point).
pub fn render_csv(doc: &RunDocument) -> String {
    let n = doc.config.n;
    let mut out = String::from("suite,case");
    for i in 0..n {
        out.push_str(&format!(",coord{i}"));
    }
    out.push_str(",lhs,rhs,abs_err\n");
    for report in &doc.reports {
        for case in &report.cases {
            out.push_str(&report.suite_id);
            out.push(',');
            out.push_str(&case.case_id);
            for i in 0..n {
                out.push(',');
                if let Some(c) = case.coords.get(i) {
                    out.push_str(&format!("{c}"));
                }
            }
            out.push_str(&format!(",{},{},{}\n", case.lhs, case.rhs, case.abs_err));
        }
    }
    out
}

/// Runs a parsed configuration end to end and returns the process exit code:
/// 0 all checks passed, 1 some check failed, 2 configuration or I/O error.
pub fn run(config: &RunConfig) -> i32 {
    let doc = match execute(config) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let json = match serde_json::to_string_pretty(&doc) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot serialize report: {e}");
            return 2;
        }
    };
    if let Err(e) = write_output(config, &json, &doc) {
        eprintln!("error: {e}");
        return 2;
    }
    if doc.reports.iter().all(|r| r.overall_pass) {
        0
    } else {
        1
    }
}

fn write_output(config: &RunConfig, json: &str, doc: &RunDocument) -> Result<(), Error> {
    match &config.output_path {
        Some(path) => std::fs::write(path, format!("{json}\n"))?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            writeln!(lock, "{json}")?;
        }
    }
    if let Some(path) = &config.emit_csv {
        std::fs::write(path, render_csv(doc))?;
    }
    Ok(())
}

/// Binary entry point: parse, run, map errors to exit code 2.
pub fn main_entry() -> i32 {
    match parse_args(std::env::args()) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_defaults() {
        let cfg =
            parse_args(["loglap", "verify", "bubble", "--n", "1", "--tol", "1e-5"]).unwrap();
        assert_eq!(cfg.n, 1);
        assert_eq!(cfg.suites, vec![SuiteId::Bubble]);
        assert_eq!(cfg.tol, Some(1e-5));
    }

    #[test]
    fn constants_subcommand_selects_no_suites() {
        let cfg = parse_args(["loglap", "constants", "--n", "2"]).unwrap();
        assert_eq!(cfg.n, 2);
        assert!(cfg.suites.is_empty());
    }

    #[test]
    fn unknown_suite_is_a_usage_error() {
        assert!(parse_args(["loglap", "verify", "nope"]).is_err());
        assert!(parse_args(["loglap", "frobnicate"]).is_err());
    }

    #[test]
    fn all_expands_to_every_suite() {
        let cfg = parse_args(["loglap", "verify", "all"]).unwrap();
        assert_eq!(cfg.suites.len(), SuiteId::ALL.len());
    }

    #[test]
    fn config_file_merges_under_flags() {
        let path = std::env::temp_dir().join("loglap-cli-test-config.json");
        std::fs::write(
            &path,
            r#"{"n": 2, "seed": 99, "tol": 0.5, "zero_mode": "exclude"}"#,
        )
        .unwrap();
        let cfg = parse_args([
            "loglap",
            "verify",
            "sublinear",
            "--config",
            path.to_str().unwrap(),
            "--n",
            "1",
        ])
        .unwrap();
        assert_eq!(cfg.n, 1, "flag beats file");
        assert_eq!(cfg.seed, 99, "file beats default");
        assert_eq!(cfg.tol, Some(0.5));
        assert_eq!(cfg.zero_mode, ZeroModePolicy::Exclude);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn zero_mode_accepts_assign_values() {
        let cfg = parse_args(["loglap", "pitt", "--zero-mode", "-2.5"]).unwrap();
        assert_eq!(cfg.zero_mode, ZeroModePolicy::Assign(-2.5));
    }

    #[test]
    fn constants_json_has_the_contracted_keys() {
        let value = constants_json(2).unwrap();
        let obj = value.as_object().unwrap();
        for key in [
            "n",
            "c_n",
            "rho_n",
            "beta_n",
            "lambda_n",
            "B_n_printed",
            "ln_lambda_n",
            "D_n",
            "b_ns",
            "gap_Bn",
            "b1_empirical",
            "b1_printed",
        ] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(value["b_ns"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn csv_has_the_contracted_header() {
        let cfg = parse_args(["loglap", "verify", "asymptotics", "--n", "2"]).unwrap();
        let doc = execute(&cfg).unwrap();
        let csv = render_csv(&doc);
        assert!(csv.starts_with("suite,case,coord0,coord1,lhs,rhs,abs_err\n"), "{csv}");
    }

    #[test]
    fn exit_code_follows_the_reports() {
        let out = std::env::temp_dir().join("loglap-cli-test-out.json");
        let mut cfg = parse_args(["loglap", "verify", "sublinear", "--n", "1"]).unwrap();
        cfg.output_path = Some(out.clone());
        assert_eq!(run(&cfg), 0);
        cfg.perturb = Some(0.01);
        assert_eq!(run(&cfg), 1);
        std::fs::remove_file(&out).ok();
    }
}
