//! Command-line front end: `irscov <command> [options]`.
//!
//! Exit status is 0 on success, 1 for usage, parse and validation errors,
//! and 2 when a numerical routine fails to converge or no element count
//! reaches the requested coverage.

mod config;
mod output;
mod sweep;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{
    db_to_linear, default_scenario, deg_to_rad, linear_to_db, parse_config, parse_config_str,
    scenario_echo, DEFAULT_WAVELENGTH_M, KEYS,
};
pub use output::fmt_num;
pub use sweep::{SweepScale, SweepSpec, SweepVariable};

use crate::channel::{validate, Diagnostic, Scenario};
use crate::coverage::{optimal_elements, CoverageQuery, CoverageResult, Method, SearchOptions};
use crate::dist::{ks_statistic, moment_match, product_cdf, RayleighPair};
use crate::error::{Error, Result};
use crate::mc::{sample_products, simulate_coverage, EmpiricalCdf, SimConfig};
use crate::method::MethodRegistry;
use output::Table;

#[derive(Debug, Parser)]
#[command(
    name = "irscov",
    version,
    about = "Coverage probability of IRS-aided links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coverage probability for one threshold.
    Coverage(CoverageArgs),
    /// Coverage over a range of one scenario variable.
    Sweep(SweepArgs),
    /// Smallest element count reaching coverage 1 - epsilon.
    OptimalN(OptimalArgs),
    /// Analytic coverage against Monte Carlo over a threshold sweep.
    ValidateMc(ValidateArgs),
    /// Goodness of fit of the Gamma law to sampled amplitude products.
    KsTest(KsArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Scenario file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            trials: self.trials,
            seed: self.seed,
            workers: self.workers,
        }
    }
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, allow_negative_numbers = true)]
    threshold_db: f64,
    /// exact-n1, gamma-approx or monte-carlo.
    #[arg(long, default_value = "gamma-approx")]
    method: String,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    variable: SweepVariable,
    #[arg(long, allow_negative_numbers = true)]
    start: f64,
    #[arg(long, allow_negative_numbers = true)]
    stop: f64,
    #[arg(long)]
    points: usize,
    #[arg(long, default_value = "linear")]
    scale: SweepScale,
    /// Fixed threshold for sweeps over anything but the threshold itself.
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    threshold_db: f64,
    #[arg(long, default_value = "gamma-approx")]
    method: String,
    /// Add Monte Carlo columns.
    #[arg(long)]
    mc: bool,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Debug, Args)]
struct OptimalArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, allow_negative_numbers = true, num_args = 1.., required = true)]
    threshold_db: Vec<f64>,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Confirm each result by Monte Carlo.
    #[arg(long)]
    mc: bool,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, allow_negative_numbers = true, default_value_t = -30.0)]
    start: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 30.0)]
    stop: f64,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Debug, Args)]
struct KsArgs {
    /// Fading coefficient used for both hops.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[command(flatten)]
    sim: SimArgs,
}

/// Parse `argv` (including the program name), run the command and return
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Coverage(a) => cmd_coverage(a, out, err),
        Command::Sweep(a) => cmd_sweep(a, out, err),
        Command::OptimalN(a) => cmd_optimal(a, out, err),
        Command::ValidateMc(a) => cmd_validate_mc(a, out, err),
        Command::KsTest(a) => cmd_ks(a, out),
    }
}

/// Collects warnings and prints each distinct one once.
#[derive(Default)]
struct Warnings(BTreeSet<String>);

impl Warnings {
    fn scenario(&mut self, s: &Scenario) -> Result<()> {
        let diags = validate(s);
        let errors: Vec<Diagnostic> = diags.iter().filter(|d| d.is_error()).cloned().collect();
        if !errors.is_empty() {
            return Err(Error::Validation(errors));
        }
        self.0.extend(diags.iter().map(ToString::to_string));
        Ok(())
    }

    fn result(&mut self, r: &CoverageResult) {
        self.0
            .extend(r.diagnostics.iter().map(|d| format!("warning: {d}")));
    }

    fn flush(self, err: &mut dyn Write) -> Result<()> {
        for w in self.0 {
            writeln!(err, "{w}")?;
        }
        Ok(())
    }
}

fn load_scenario(args: &ScenarioArgs) -> Result<Scenario> {
    match &args.config {
        Some(path) => parse_config(path),
        None => Ok(default_scenario()),
    }
}

fn meta(command: &str, s: &Scenario) -> Vec<String> {
    vec![
        format!("irscov {} {command}", env!("CARGO_PKG_VERSION")),
        scenario_echo(s),
    ]
}

fn cmd_coverage(a: CoverageArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let scenario = load_scenario(&a.scenario)?;
    let mut warnings = Warnings::default();
    warnings.scenario(&scenario)?;
    let registry = MethodRegistry::with_builtin(a.sim.config());
    let method = registry.get(&a.method)?;
    let query = CoverageQuery::new(scenario.clone(), db_to_linear(a.threshold_db))?;
    let result = method.evaluate(&query)?;
    warnings.result(&result);

    let mut m = meta("coverage", &scenario);
    m.push(format!("method = {}", method.name()));
    let value = vec![
        "threshold_db".to_string(),
        fmt_num(a.threshold_db),
        fmt_num(result.probability),
    ];
    if result.method == Method::MonteCarlo {
        m.push(format!("trials = {}\nseed = {}", a.sim.trials, a.sim.seed));
        let mut t = Table::start(out, &m, &["variable", "value", "p_mc", "ci95"])?;
        let mut row = value;
        row.push(fmt_num(result.half_width_95.unwrap_or(0.0)));
        t.row(&row)?;
    } else {
        let mut t = Table::start(out, &m, &["variable", "value", "p_analytic"])?;
        t.row(&value)?;
    }
    warnings.flush(err)
}

/// Scenario and linear threshold for one sweep point.
fn sweep_point(
    base: &Scenario,
    variable: SweepVariable,
    value: f64,
    threshold_db: f64,
) -> Result<(Scenario, f64)> {
    let mut s = base.clone();
    let mut th_db = threshold_db;
    match variable {
        SweepVariable::ThresholdDb => th_db = value,
        SweepVariable::NElements => {
            if !(value >= 0.0) {
                return Err(Error::domain(
                    "sweep",
                    format!("element count {value} is negative"),
                ));
            }
            s.n_elements = value.round() as u64;
        }
        SweepVariable::ElementSide => s.element_side = value,
        SweepVariable::Sigma => {
            s.sigma1 = value;
            s.sigma2 = value;
        }
        SweepVariable::ThetaS => s.theta_s = deg_to_rad(value),
    }
    Ok((s, db_to_linear(th_db)))
}

fn cmd_sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let base = load_scenario(&a.scenario)?;
    let spec = SweepSpec::new(a.variable, a.start, a.stop, a.points, a.scale)?;
    let registry = MethodRegistry::with_builtin(a.sim.config());
    let method = registry.get(&a.method)?;
    let sim = a.sim.config();
    let mut warnings = Warnings::default();

    let mut rows = Vec::with_capacity(spec.points);
    for value in spec.values() {
        let (s, gamma_th) = sweep_point(&base, spec.variable, value, a.threshold_db)?;
        warnings.scenario(&s)?;
        let q = CoverageQuery::new(s, gamma_th)?;
        let r = method.evaluate(&q)?;
        warnings.result(&r);
        let mut row = vec![
            spec.variable.to_string(),
            fmt_num(value),
            fmt_num(r.probability),
        ];
        if a.mc {
            let rep = simulate_coverage(&q, &sim)?;
            row.push(fmt_num(rep.estimate));
            row.push(fmt_num(rep.half_width_95));
        }
        rows.push(row);
    }

    let mut m = meta("sweep", &base);
    m.push(format!("method = {}", method.name()));
    if spec.variable != SweepVariable::ThresholdDb {
        m.push(format!("threshold_db = {}", a.threshold_db));
    }
    let mut columns = vec!["variable", "value", "p_analytic"];
    if a.mc {
        m.push(format!("trials = {}\nseed = {}", a.sim.trials, a.sim.seed));
        columns.extend(["p_mc", "ci95"]);
    }
    let mut t = Table::start(out, &m, &columns)?;
    for row in rows {
        t.row(&row)?;
    }
    warnings.flush(err)
}

fn cmd_optimal(a: OptimalArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let scenario = load_scenario(&a.scenario)?;
    let mut warnings = Warnings::default();
    warnings.scenario(&scenario)?;
    let opts = SearchOptions {
        epsilon: a.epsilon,
        cap: a.cap,
    };
    let sim = a.sim.config();

    let mut rows = Vec::new();
    for &th_db in &a.threshold_db {
        let gamma_th = db_to_linear(th_db);
        let n = optimal_elements(&scenario, gamma_th, &opts)?;
        let q = CoverageQuery::new(scenario.with_elements(n), gamma_th)?;
        let p = crate::coverage::coverage_general(&q)?.probability;
        let mut row = vec![fmt_num(th_db), n.to_string(), fmt_num(p)];
        if a.mc {
            let rep = simulate_coverage(&q, &sim)?;
            row.push(fmt_num(rep.estimate));
            row.push(fmt_num(rep.half_width_95));
        }
        rows.push(row);
    }

    let mut m = meta("optimal-n", &scenario);
    m.push(format!("epsilon = {}", a.epsilon));
    let mut columns = vec!["threshold_db", "n_star", "p_analytic"];
    if a.mc {
        m.push(format!("trials = {}\nseed = {}", a.sim.trials, a.sim.seed));
        columns.extend(["p_mc", "ci95"]);
    }
    let mut t = Table::start(out, &m, &columns)?;
    for row in rows {
        t.row(&row)?;
    }
    warnings.flush(err)
}

fn cmd_validate_mc(a: ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let scenario = load_scenario(&a.scenario)?;
    let mut warnings = Warnings::default();
    warnings.scenario(&scenario)?;
    let spec = SweepSpec::new(
        SweepVariable::ThresholdDb,
        a.start,
        a.stop,
        a.points,
        SweepScale::Linear,
    )?;
    let sim = a.sim.config();
    let registry = MethodRegistry::with_builtin(sim);
    let analytic = if scenario.n_elements == 1 {
        registry.get(Method::ExactN1.as_str())?
    } else {
        registry.get(Method::GammaApprox.as_str())?
    };

    let mut rows = Vec::with_capacity(spec.points);
    for th_db in spec.values() {
        let q = CoverageQuery::new(scenario.clone(), db_to_linear(th_db))?;
        let r = analytic.evaluate(&q)?;
        warnings.result(&r);
        let rep = simulate_coverage(&q, &sim)?;
        rows.push(vec![
            "threshold_db".to_string(),
            fmt_num(th_db),
            fmt_num(r.probability),
            fmt_num(rep.estimate),
            fmt_num(rep.half_width_95),
        ]);
    }

    let mut m = meta("validate-mc", &scenario);
    m.push(format!("method = {}", analytic.name()));
    m.push(format!("trials = {}\nseed = {}", a.sim.trials, a.sim.seed));
    let mut t = Table::start(
        out,
        &m,
        &["variable", "value", "p_analytic", "p_mc", "ci95"],
    )?;
    for row in rows {
        t.row(&row)?;
    }
    warnings.flush(err)
}

/// KS distances of sampled products against the matched Gamma law and
/// against the exact product law.
pub fn ks_distances(sigma: f64, sim: &SimConfig) -> Result<(f64, f64)> {
    let pair = RayleighPair::new(sigma, sigma)?;
    let ecdf = EmpiricalCdf::from_unsorted(sample_products(&pair, sim.trials, sim)?)?;
    let gamma = moment_match(&pair);
    let ks_gamma = ks_statistic(&ecdf, |x| gamma.cdf(x).unwrap_or(f64::NAN));
    let ks_exact = ks_statistic(&ecdf, |x| product_cdf(&pair, x).unwrap_or(f64::NAN));
    if ks_gamma.is_nan() || ks_exact.is_nan() {
        return Err(Error::NonConvergence {
            func: "ks-test model CDF",
            max_iter: 0,
        });
    }
    Ok((ks_gamma, ks_exact))
}

fn cmd_ks(a: KsArgs, out: &mut dyn Write) -> Result<()> {
    let sim = a.sim.config();
    let (ks_gamma, ks_exact) = ks_distances(a.sigma, &sim)?;
    let m = vec![format!("irscov {} ks-test", env!("CARGO_PKG_VERSION"))];
    let mut t = Table::start(
        out,
        &m,
        &["sigma", "trials", "seed", "ks_gamma", "ks_exact"],
    )?;
    t.row(&[
        fmt_num(a.sigma),
        a.sim.trials.to_string(),
        a.sim.seed.to_string(),
        fmt_num(ks_gamma),
        fmt_num(ks_exact),
    ])?;
    Ok(())
}
