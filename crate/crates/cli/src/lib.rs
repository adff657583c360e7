//! Command-line front end for `qmono-core`.
//!
//! Three subcommands: `compute` evaluates one measure across a partition,
//! `check` runs one inequality checker, `suite` runs the worked examples.
//! Exit status: 0 when the result holds (verified or consistent), 1 when an
//! inequality is violated, 4 when a check is inconclusive, 2 for malformed
//! input and 3 when the core rejects a value.

pub mod error;
pub mod partition;
pub mod report;
pub mod spec;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use partition::Partition;
use qmono_core::measures::{
    coa, concurrence_pure, cren, crenoa, linear_entropy, mixed_concurrence, negativity_mixed, negativity_pure, tangle_three,
    MeasureValue, RoofConfig,
};
use qmono_core::monogamy::{self, closed_form_suite, CheckReport, CoefficientSet, SuiteParams, SuiteResult, Verdict};
use qmono_core::tensor::partial_trace;
use report::Format;
use serde::Deserialize;
use spec::{State, StateSpec};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qmono", version, about = "Entanglement measures and monogamy checks for multi-qudit states")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Seed of the roof optimizer.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts per roof.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Sweeps per restart.
    #[arg(long = "iters", global = true)]
    pub iterations: Option<usize>,
    /// Decomposition size (default 2 * rank, capped at rank^2).
    #[arg(long, global = true)]
    pub ensemble: Option<usize>,
    /// Minimum per-proposal improvement before a restart counts as stalled.
    #[arg(long = "tol", global = true)]
    pub tolerance: Option<f64>,
    /// Worker threads: `auto` or a positive count.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_threads)]
    pub threads: Threads,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub output: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Count(usize),
}

fn parse_threads(s: &str) -> Result<Threads, String> {
    if s == "auto" {
        return Ok(Threads::Auto);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(Threads::Count(n)),
        _ => Err(format!("expected `auto` or a positive integer, got {s:?}")),
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateArgs {
    /// JSON state spec file, or `-` for standard input.
    #[arg(long)]
    pub state: Option<String>,
    /// Inline JSON state spec.
    #[arg(long = "state-json")]
    pub state_json: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one measure.
    Compute {
        #[arg(value_enum)]
        measure: MeasureName,
        #[command(flatten)]
        state: StateArgs,
        /// Like `0|1,2`; parties left out are traced out. Default: `0|rest`.
        #[arg(long, short)]
        partition: Option<String>,
    },
    /// Evaluate one inequality and report a certified verdict.
    Check {
        #[arg(value_enum)]
        check: CheckName,
        #[command(flatten)]
        state: StateArgs,
        /// Partition for `entropy` (default `0|rest`).
        #[arg(long, short)]
        partition: Option<String>,
    },
    /// Run worked examples 1 to 4, or `all`.
    Suite {
        #[arg(required = true)]
        ids: Vec<String>,
        /// JSON file overriding the example parameter grids.
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MeasureName {
    Concurrence,
    Negativity,
    Cren,
    Crenoa,
    Coa,
    LinearEntropy,
    Tangle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Ckw,
    CoaDual,
    Cren,
    CrenoaDual,
    Theorem1,
    Corollary1,
    Theorem2,
    Theorem3,
    Identity17,
    Entropy,
}

/// Rendered report plus exit status.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl RunArgs {
    pub fn roof_config(&self) -> Result<RoofConfig, CliError> {
        let d = RoofConfig::default();
        let cfg = RoofConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            iterations: self.iterations.unwrap_or(d.iterations),
            ensemble: self.ensemble,
            tolerance: self.tolerance.unwrap_or(d.tolerance),
            seed: self.seed,
            two_qubit: d.two_qubit,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

fn read_source(src: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: PathBuf::from(src), source };
    if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(src).map_err(io)
    }
}

impl StateArgs {
    pub fn load(&self) -> Result<State, CliError> {
        let text = match (&self.state, &self.state_json) {
            (Some(src), None) => read_source(src)?,
            (None, Some(json)) => json.clone(),
            _ => return Err(CliError::Usage("give exactly one of --state and --state-json".into())),
        };
        StateSpec::parse(&text)?.build()
    }
}

pub fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Verified | Verdict::Consistent => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn pure_only(state: &State, what: &str) -> Result<qmono_core::tensor::PureState, CliError> {
    match state {
        State::Pure(p) => Ok(p.clone()),
        State::Mixed(_) => Err(CliError::Usage(format!("{what} needs a pure state"))),
    }
}

pub fn compute(measure: MeasureName, state: &State, partition: Option<&str>, cfg: &RoofConfig) -> Result<(String, MeasureValue), CliError> {
    let n = state.dims().len();
    if measure == MeasureName::Tangle {
        if partition.is_some() {
            return Err(CliError::Usage("tangle takes no partition; it always uses 0|1|2".into()));
        }
        return Ok(("0|1|2".into(), tangle_three(&pure_only(state, "tangle")?, cfg)?));
    }
    let part = match partition {
        Some(expr) => Partition::parse(expr)?,
        None => Partition::first_vs_rest(n),
    };
    if n < 2 {
        return Err(CliError::Usage("a bipartite measure needs at least two parties".into()));
    }
    let (restricted, cut) = part.restrict(state)?;
    let value = match (measure, &restricted) {
        (MeasureName::Concurrence, State::Pure(p)) => concurrence_pure(p, &cut)?,
        (MeasureName::Concurrence, State::Mixed(m)) => mixed_concurrence(m, &cut, cfg)?,
        (MeasureName::Negativity, State::Pure(p)) => negativity_pure(p, &cut)?,
        (MeasureName::Negativity, State::Mixed(m)) => negativity_mixed(m, &cut)?,
        (MeasureName::Cren, s) => cren(&s.to_mixed(), &cut, cfg)?,
        (MeasureName::Crenoa, s) => crenoa(&s.to_mixed(), &cut, cfg)?,
        (MeasureName::Coa, s) => coa(&s.to_mixed(), &cut, cfg)?,
        (MeasureName::LinearEntropy, s) => MeasureValue::exact(linear_entropy(&partial_trace(&s.to_mixed(), cut.side_a())?)),
        (MeasureName::Tangle, _) => unreachable!("handled above"),
    };
    Ok((part.to_string(), value))
}

pub fn check(name: CheckName, state: &State, partition: Option<&str>, cfg: &RoofConfig) -> Result<CheckReport, CliError> {
    if partition.is_some() && name != CheckName::Entropy {
        return Err(CliError::Usage("--partition only applies to the entropy check".into()));
    }
    let label = name.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let pure = || pure_only(state, &label);
    let report = match name {
        CheckName::Ckw => monogamy::ckw_check(&pure()?, cfg)?,
        CheckName::CoaDual => monogamy::coa_dual_check(&pure()?, cfg)?,
        CheckName::Cren => monogamy::cren_monogamy_check(&pure()?, cfg)?,
        CheckName::CrenoaDual => monogamy::crenoa_dual_check(&pure()?, cfg)?,
        CheckName::Theorem1 => monogamy::theorem1_check(&state.to_mixed(), cfg)?,
        CheckName::Corollary1 => monogamy::corollary1_check(&state.to_mixed(), cfg)?,
        CheckName::Theorem2 => monogamy::theorem2_check(&pure()?, cfg)?,
        CheckName::Theorem3 => monogamy::theorem3_check(&pure()?, cfg)?,
        CheckName::Identity17 => monogamy::decomposition_identity_check(&pure()?, cfg)?,
        CheckName::Entropy => {
            let part = match partition {
                Some(expr) => Partition::parse(expr)?,
                None => Partition::first_vs_rest(state.dims().len()),
            };
            let (restricted, cut) = part.restrict(state)?;
            monogamy::entropy_subadditivity_check(&restricted.to_mixed(), &cut)?
        }
    };
    Ok(report)
}

/// Optional overrides of [`SuiteParams`]; omitted fields keep their defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub ghz_parties: Option<Vec<usize>>,
    pub ghz_amplitudes: Option<Vec<f64>>,
    pub w_parties: Option<Vec<usize>>,
    pub vacuum_weights: Option<Vec<f64>>,
    pub coefficient_sets: Option<Vec<CoefficientSetFile>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSetFile {
    pub label: String,
    pub rows: Vec<Vec<f64>>,
}

impl ParamsFile {
    pub fn into_params(self) -> Result<SuiteParams, CliError> {
        let d = SuiteParams::default();
        let params = SuiteParams {
            ghz_parties: self.ghz_parties.unwrap_or(d.ghz_parties),
            ghz_amplitudes: self.ghz_amplitudes.unwrap_or(d.ghz_amplitudes),
            w_parties: self.w_parties.unwrap_or(d.w_parties),
            vacuum_weights: self.vacuum_weights.unwrap_or(d.vacuum_weights),
            coefficient_sets: match self.coefficient_sets {
                Some(sets) => sets.into_iter().map(|s| CoefficientSet { label: s.label, rows: s.rows }).collect(),
                None => d.coefficient_sets,
            },
        };
        params.validate().map_err(|e| CliError::Params(e.to_string()))?;
        Ok(params)
    }
}

pub fn load_params(path: &Path) -> Result<SuiteParams, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let file: ParamsFile = serde_json::from_str(&text).map_err(|e| CliError::Params(e.to_string()))?;
    file.into_params()
}

pub fn parse_suite_ids(ids: &[String]) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    for id in ids {
        let more: Vec<u8> = match id.trim() {
            "all" => vec![1, 2, 3, 4],
            s => match s.parse::<u8>() {
                Ok(k @ 1..=4) => vec![k],
                _ => return Err(CliError::Usage(format!("unknown suite {id:?}; expected 1, 2, 3, 4 or all"))),
            },
        };
        for k in more {
            if !out.contains(&k) {
                out.push(k);
            }
        }
    }
    Ok(out)
}

pub fn suite(ids: &[u8], params: &SuiteParams, cfg: &RoofConfig) -> Result<SuiteResult, CliError> {
    let mut result = SuiteResult::default();
    for &id in ids {
        result.extend(closed_form_suite(id, params, cfg)?);
    }
    Ok(result)
}

/// Runs a parsed command without touching stdout.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = cli.run.roof_config()?;
    let format = cli.run.output;
    match &cli.command {
        Command::Compute { measure, state, partition } => {
            let state = state.load()?;
            let (partition, value) = compute(*measure, &state, partition.as_deref(), &cfg)?;
            let name = measure.to_possible_value().expect("named measure");
            let computed = report::Computed { measure: name.get_name(), partition, dims: state.dims().to_vec(), value };
            Ok(Outcome { text: report::render_compute(&computed, format), code: EXIT_OK })
        }
        Command::Check { check: name, state, partition } => {
            let state = state.load()?;
            let report = check(*name, &state, partition.as_deref(), &cfg)?;
            Ok(Outcome { text: report::render_check(&report, format), code: verdict_exit(report.verdict()) })
        }
        Command::Suite { ids, params } => {
            let ids = parse_suite_ids(ids)?;
            let params = match params {
                Some(path) => load_params(path)?,
                None => SuiteParams::default(),
            };
            let result = suite(&ids, &params, &cfg)?;
            let code = if result.violations() == 0 { EXIT_OK } else { EXIT_VIOLATED };
            Ok(Outcome { text: report::render_suite(&ids, &result, format), code })
        }
    }
}

fn thread_pool(threads: Threads) -> Result<rayon::ThreadPool, CliError> {
    let n = match threads {
        Threads::Auto => 0,
        Threads::Count(n) => n,
    };
    rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// Parses `args`, runs the command on a pool of the requested size and
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = thread_pool(cli.run.threads).and_then(|pool| pool.install(|| execute(&cli)));
    match result.and_then(|o| emit(cli.run.out.as_deref(), &o.text).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
