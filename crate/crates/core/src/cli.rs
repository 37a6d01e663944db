//! Command-line front end.
//!
//! Exit codes: 0 success, 1 malformed input, 2 an input or result breaks a
//! physical invariant, 3 a CHSH violation was found, 4 the optimizer did
//! not converge.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::chsh::{analytic_curves, analytic_gamma, chsh_analysis, correlation_matrix_trace, VIOLATION_TOLERANCE};
use crate::entanglement::{analytic_concurrence, concurrence_pure, reduced_pure, Party};
use crate::montecarlo::{run_scan, table_rows, write_histogram_csv, write_rows_csv, ScanConfig};
use crate::optimizer::{optimize_settings, OptimizerConfig};
use crate::spin::{make_spin_operators, SpinQuantumNumber};
use crate::state::{FamilySpec, QuditDensity, Sampler, TwoQuditState};
use crate::{Error, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;

/// Largest accepted gap between the optimized and the analytic maximum.
pub const OPTIMIZER_GAP: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "qutrit-chsh", version, about = "CHSH maxima under spin measurements on two-qudit states")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// CHSH analysis of one state; exits 3 if the inequality is violated.
    Gamma {
        #[command(flatten)]
        state: StateArgs,
        /// Spin of the local measurements; defaults to (d − 1)/2.
        #[arg(long)]
        spin: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Closed-form γ (and concurrence) along a one-parameter family.
    Sweep {
        #[arg(long, value_enum)]
        example: SweepFamily,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Write to this file instead of stdout.
        #[arg(long = "out")]
        path: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo scan of random pure two-qutrit states; exits 3 on any violation.
    Scan {
        #[arg(long = "n", default_value_t = 1_000_000)]
        n_samples: u64,
        #[arg(long, value_enum, default_value_t = Sampler::UniformSquare)]
        sampler: Sampler,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        hist_bins: usize,
        /// Histogram CSV (bin_lo,bin_hi,count).
        #[arg(long)]
        hist_out: Option<PathBuf>,
        /// Number of leading samples to record.
        #[arg(long, default_value_t = 50)]
        rows: usize,
        /// CSV of the recorded samples, rounded to --decimals (default 2).
        #[arg(long)]
        rows_out: Option<PathBuf>,
        /// JSON report; when given, stdout gets only the summary line.
        #[arg(long = "out")]
        path: Option<PathBuf>,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximise the CHSH expectation numerically and compare with 2√(z² + z̃²).
    Optimize {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Concurrence of a pure state.
    Concurrence {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a state, or with no state the spin algebra for --spin.
    Validate {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        spin: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Antisym,
    Sym,
    Ghz3,
    Werner,
    Horodecki,
    Example1,
    Example2,
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SweepFamily {
    #[value(name = "1")]
    Example1,
    #[value(name = "2")]
    Example2,
    Werner,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct StateArgs {
    #[arg(long, value_enum, conflicts_with = "state_file")]
    family: Option<Family>,
    /// Three complex coefficients (α₁₂,α₁₃,α₂₃ or α₁₁,α₂₂,α₃₃), e.g.
    /// `0.6,0.8i,0`; rescaled to unit norm.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Option<Vec<C64>>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Diagonal probabilities of Alice's factor of a product state.
    #[arg(long, value_delimiter = ',')]
    rho_a: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    rho_b: Option<Vec<f64>>,
    /// JSON state: {"dims":[dA,dB],"amplitudes":[[re,im],…]} or "matrix".
    #[arg(long)]
    state_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Round floats to this many decimal places instead of 12 significant digits.
    #[arg(long)]
    decimals: Option<u32>,
}

/// A failure carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_invariant_violation() { EXIT_INVARIANT } else { EXIT_INPUT };
        Self { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

type CmdResult = std::result::Result<i32, Failure>;

fn required<T: Copy>(v: Option<T>, flag: &str, family: &str) -> std::result::Result<T, Failure> {
    v.ok_or_else(|| input_error(format!("--family {family} needs --{flag}")))
}

fn normalized_alpha(v: &Option<Vec<C64>>, family: &str) -> std::result::Result<[C64; 3], Failure> {
    let v = v.as_ref().ok_or_else(|| input_error(format!("--family {family} needs --alpha")))?;
    if v.len() != 3 {
        return Err(input_error(format!("--alpha takes 3 comma-separated values, got {}", v.len())));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(input_error("--alpha must have a nonzero finite norm"));
    }
    Ok([v[0] / norm, v[1] / norm, v[2] / norm])
}

impl StateArgs {
    fn is_given(&self) -> bool {
        self.family.is_some() || self.state_file.is_some()
    }

    fn family_spec(&self) -> std::result::Result<Option<FamilySpec>, Failure> {
        let Some(family) = self.family else { return Ok(None) };
        let name = family.to_possible_value().expect("no skipped variants").get_name().to_owned();
        let spec = match family {
            Family::Antisym => {
                let [a12, a13, a23] = normalized_alpha(&self.alpha, &name)?;
                FamilySpec::Antisym { a12, a13, a23 }
            }
            Family::Sym => {
                let [a11, a22, a33] = normalized_alpha(&self.alpha, &name)?;
                FamilySpec::Sym { a11, a22, a33 }
            }
            Family::Ghz3 => FamilySpec::Ghz3,
            Family::Werner => FamilySpec::Werner { phi: required(self.phi, "phi", &name)? },
            Family::Horodecki => FamilySpec::Horodecki { tau: required(self.tau, "tau", &name)? },
            Family::Example1 => FamilySpec::Example1 { t: required(self.t, "t", &name)? },
            Family::Example2 => FamilySpec::Example2 { t: required(self.t, "t", &name)? },
            Family::Product => {
                let local = |p: &Option<Vec<f64>>, flag: &str| -> std::result::Result<QuditDensity, Failure> {
                    let p = p.as_ref().ok_or_else(|| input_error(format!("--family product needs --{flag}")))?;
                    if p.len() != 3 {
                        return Err(input_error(format!("--{flag} takes 3 comma-separated probabilities")));
                    }
                    Ok(QuditDensity::diagonal(p)?)
                };
                FamilySpec::Product { a: local(&self.rho_a, "rho-a")?, b: local(&self.rho_b, "rho-b")? }
            }
        };
        spec.validate()?;
        Ok(Some(spec))
    }

    fn load(&self) -> std::result::Result<(TwoQuditState, Option<FamilySpec>), Failure> {
        if let Some(path) = &self.state_file {
            let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
            return Ok((TwoQuditState::from_json(&text)?, None));
        }
        let spec = self.family_spec()?.ok_or_else(|| input_error("give --family or --state-file"))?;
        let state = if spec.is_pure() {
            TwoQuditState::Pure(spec.pure_state()?)
        } else {
            TwoQuditState::Mixed(spec.density_matrix()?)
        };
        Ok((state, Some(spec)))
    }
}

/// `x` to 12 significant digits.
fn significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_decimals(x: f64, d: u32) -> f64 {
    let f = 10f64.powi(d as i32);
    let r = (x * f).round() / f;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

impl OutputArgs {
    fn number(&self, x: f64) -> f64 {
        match self.decimals {
            Some(d) => round_decimals(x, d),
            None => significant(x),
        }
    }

    fn round(&self, v: &mut Value) {
        match v {
            Value::Number(n) if n.is_f64() => {
                if let Some(x) = n.as_f64() {
                    *v = json!(self.number(x));
                }
            }
            Value::Array(items) => items.iter_mut().for_each(|x| self.round(x)),
            Value::Object(map) => map.values_mut().for_each(|x| self.round(x)),
            _ => {}
        }
    }

    fn emit<T: Serialize>(&self, value: &T, out: &mut dyn Write) -> std::result::Result<(), Failure> {
        let mut v = serde_json::to_value(value).map_err(Error::from)?;
        self.round(&mut v);
        match self.format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&v).map_err(Error::from)?).map_err(Error::from)?,
            Format::Csv => write_records_csv(&records(&v), out)?,
        }
        Ok(())
    }
}

/// A JSON value as CSV rows: an array becomes one row per element, anything
/// else a single row. Nested fields are flattened with `.` separators.
fn records(v: &Value) -> Vec<Map<String, Value>> {
    fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
        let key = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
            other => {
                out.insert(prefix.to_owned(), other.clone());
            }
        }
    }
    let rows: Vec<&Value> = match v {
        Value::Array(items) => items.iter().collect(),
        other => vec![other],
    };
    rows.into_iter()
        .map(|r| {
            let mut m = Map::new();
            flatten("", r, &mut m);
            m
        })
        .collect()
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn write_records_csv(rows: &[Map<String, Value>], out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let mut w = csv::Writer::from_writer(out);
    if let Some(first) = rows.first() {
        w.write_record(first.keys()).map_err(Error::from)?;
        for r in rows {
            w.write_record(first.keys().map(|k| r.get(k).map(cell).unwrap_or_default())).map_err(Error::from)?;
        }
    }
    w.flush().map_err(Error::from)?;
    Ok(())
}

fn create(path: &Path) -> std::result::Result<fs::File, Failure> {
    fs::File::create(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn spin_for(spin: Option<f64>, dim: usize) -> std::result::Result<SpinQuantumNumber, Failure> {
    let s = match spin {
        Some(s) => SpinQuantumNumber::new(s)?,
        None => SpinQuantumNumber::from_dim(dim)?,
    };
    if s.dim() != dim {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: dim }.into());
    }
    Ok(s)
}

fn local_dim(state: &TwoQuditState) -> std::result::Result<usize, Failure> {
    let dims = state.dims();
    if dims.a != dims.b {
        return Err(Error::DimensionMismatch { expected: dims.a, found: dims.b }.into());
    }
    Ok(dims.a)
}

fn cmd_gamma(state: &StateArgs, spin: Option<f64>, out: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    let (state, spec) = state.load()?;
    let s = spin_for(spin, local_dim(&state)?)?;
    let z = correlation_matrix_trace(&state.density(), &make_spin_operators(s))?;
    let a = chsh_analysis(&z);
    let analytic = match &spec {
        Some(spec) if s == SpinQuantumNumber::ONE => Some(analytic_gamma(spec)?),
        _ => None,
    };
    let report = json!({
        "spin": s.to_string(),
        "correlation_matrix": z,
        "singular_values": a.singular_values,
        "gamma": a.gamma,
        "upsilon": a.upsilon,
        "violated": a.violated,
        "analytic_gamma": analytic,
    });
    out.emit(&report, stdout)?;
    Ok(if a.violated { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_sweep(example: SweepFamily, points: usize, path: Option<&Path>, out: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    if points < 2 {
        return Err(input_error("--points must be at least 2"));
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    let rows: Vec<Value> = (0..points)
        .map(|i| -> std::result::Result<Value, Failure> {
            Ok(match example {
                SweepFamily::Werner => {
                    let phi = if i == points - 1 { 1.0 } else { -1.0 + 2.0 * step(i) };
                    json!({ "phi": phi, "gamma": analytic_gamma(&FamilySpec::Werner { phi })? })
                }
                SweepFamily::Example1 | SweepFamily::Example2 => {
                    let t = step(i);
                    let spec = if example == SweepFamily::Example1 { FamilySpec::Example1 { t } } else { FamilySpec::Example2 { t } };
                    let p = analytic_curves(&spec)?;
                    json!({ "t": t, "gamma": p.gamma, "concurrence": p.concurrence })
                }
            })
        })
        .collect::<std::result::Result<_, _>>()?;
    let rows = Value::Array(rows);
    let out = OutputArgs { format: out.format, decimals: out.decimals };
    match path {
        Some(p) => out.emit(&rows, &mut create(p)?)?,
        None => out.emit(&rows, stdout)?,
    }
    Ok(EXIT_OK)
}

struct ScanArgs<'a> {
    cfg: ScanConfig,
    hist_out: Option<&'a Path>,
    rows_out: Option<&'a Path>,
    path: Option<&'a Path>,
}

fn cmd_scan(args: ScanArgs<'_>, out: &OutputArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let cfg = args.cfg;
    let report = run_scan(&cfg)?;
    if let Some(p) = args.hist_out {
        write_histogram_csv(&report, create(p)?)?;
    }
    if let Some(p) = args.rows_out {
        write_rows_csv(&table_rows(&cfg, cfg.record_rows.min(cfg.n_samples as usize), out.decimals.unwrap_or(2))?, create(p)?)?;
    }
    let summary = format!(
        "max_gamma={} violation_count={} n={} sampler={} seed={}",
        out.number(report.max_gamma),
        report.violation_count,
        report.n_samples,
        cfg.sampler.to_possible_value().expect("no skipped variants").get_name(),
        cfg.seed
    );
    match (args.path, out.format) {
        (Some(p), _) => {
            out.emit(&report, &mut create(p)?)?;
            writeln!(stdout, "{summary}").map_err(Error::from)?;
        }
        (None, Format::Json) => {
            out.emit(&report, stdout)?;
            writeln!(stderr, "{summary}").map_err(Error::from)?;
        }
        (None, Format::Csv) => {
            // the full report does not fit one table; CSV mode prints the histogram
            out.emit(&report.concurrence_histogram, stdout)?;
            writeln!(stderr, "{summary}").map_err(Error::from)?;
        }
    }
    Ok(if report.violation_count > 0 { EXIT_VIOLATION } else { EXIT_OK })
}

fn cmd_optimize(state: &StateArgs, cfg: OptimizerConfig, workers: usize, out: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    let (state, _) = state.load()?;
    let s = spin_for(None, local_dim(&state)?)?;
    let z = correlation_matrix_trace(&state.density(), &make_spin_operators(s))?;
    let analytic = chsh_analysis(&z).upsilon;
    let result = if workers == 0 {
        optimize_settings(&z, &cfg)?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| input_error(format!("cannot start {workers} workers: {e}")))?;
        pool.install(|| optimize_settings(&z, &cfg))?
    };
    let gap = (analytic - result.value).abs();
    let report = json!({
        "analytic_upsilon": analytic,
        "value": result.value,
        "gap": gap,
        "iterations": result.iterations,
        "converged": result.converged,
        "setting": result.setting,
    });
    out.emit(&report, stdout)?;
    Ok(if !result.converged {
        EXIT_NOT_CONVERGED
    } else if gap > OPTIMIZER_GAP {
        EXIT_INVARIANT
    } else {
        EXIT_OK
    })
}

fn cmd_concurrence(state: &StateArgs, out: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    let (state, spec) = state.load()?;
    let psi = state.as_pure().ok_or(Error::NotPure("a mixed state file"))?;
    let analytic = match &spec {
        Some(spec) => Some(analytic_concurrence(spec)?),
        None => None,
    };
    let report = json!({
        "concurrence": concurrence_pure(psi),
        "purity_a": reduced_pure(psi, Party::A).purity,
        "purity_b": reduced_pure(psi, Party::B).purity,
        "analytic_concurrence": analytic,
    });
    out.emit(&report, stdout)?;
    Ok(EXIT_OK)
}

fn cmd_validate(state: &StateArgs, spin: Option<f64>, out: &OutputArgs, stdout: &mut dyn Write) -> CmdResult {
    if !state.is_given() {
        let s = SpinQuantumNumber::new(required(spin, "spin", "validate without a state has")?)?;
        let report = make_spin_operators(s).validate();
        let ok = report.max_residual() <= 1e-12;
        out.emit(&json!({ "spin": s.to_string(), "residuals": report, "valid": ok }), stdout)?;
        return Ok(if ok { EXIT_OK } else { EXIT_INVARIANT });
    }
    // loading already enforces the invariants; reaching here means they hold
    let (state, _) = state.load()?;
    let rho = state.density();
    let ev = rho.eigenvalues();
    let tr = rho.trace();
    let report = json!({
        "valid": true,
        "kind": if state.as_pure().is_some() { "pure" } else { "mixed" },
        "dims": rho.dims(),
        "trace": [tr.re, tr.im],
        "min_eigenvalue": ev.first(),
        "rank": rho.rank(1e-10),
        "violation_tolerance": VIOLATION_TOLERANCE,
    });
    out.emit(&report, stdout)?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Gamma { state, spin, out } => cmd_gamma(&state, spin, &out, stdout),
        Command::Sweep { example, points, path, out } => cmd_sweep(example, points, path.as_deref(), &out, stdout),
        Command::Scan { n_samples, sampler, seed, hist_bins, hist_out, rows, rows_out, path, workers, out } => {
            let cfg = ScanConfig { n_samples, sampler, seed, histogram_bins: hist_bins, workers, record_rows: rows };
            let args = ScanArgs { cfg, hist_out: hist_out.as_deref(), rows_out: rows_out.as_deref(), path: path.as_deref() };
            cmd_scan(args, &out, stdout, stderr)
        }
        Command::Optimize { state, restarts, max_iter, tol, seed, workers, out } => {
            let cfg = OptimizerConfig { max_iterations: max_iter, convergence_tol: tol, restarts, seed };
            cmd_optimize(&state, cfg, workers, &out, stdout)
        }
        Command::Concurrence { state, out } => cmd_concurrence(&state, &out, stdout),
        Command::Validate { state, spin, out } => cmd_validate(&state, spin, &out, stdout),
    }
}

/// Parse `args` (including the program name) and run one subcommand,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{}", e.render()) } else { write!(stdout, "{}", e.render()) };
            return code;
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
