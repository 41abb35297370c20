//! Command-line front end.
//!
//! Settings resolve as: command-line flag, then the `--config` key-value
//! file (keys are flag names without dashes, e.g. `system-size = 200`),
//! then built-in defaults. `RCM_PERC_THREADS` supplies the default thread
//! count. Data goes to stdout or `--out`; diagnostics go to stderr.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::branching::constant_g_certificate;
use crate::connection::ConnectionModel;
use crate::error::{RcmError, Result};
use crate::exploration::{estimate_pair_connectedness, SimParams, DEFAULT_MAX_GENERATED_POINTS, DEFAULT_MAX_STEPS};
use crate::records::{write_csv, write_json_lines, TrialRecord};
use crate::reproduce::{branching_columns, reproduce_preset, Scale};
use crate::sampling::DEFAULT_SEED;
use crate::threshold::{estimate_critical, percolation_verdict, run_trials, SearchConfig};

pub const THREADS_ENV: &str = "RCM_PERC_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNRELIABLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rcm-perc",
    version,
    about = "Critical intensities of Poisson random connection models"
)]
pub struct Cli {
    /// Key-value file providing defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Explore clusters of the origin and emit one record per trial.
    Explore {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Percolation verdict at one intensity.
    Percolate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        runs: Option<u64>,
        /// Run every trial even after the first escape.
        #[arg(long)]
        full_runs: bool,
    },
    /// Bracket the critical intensity starting from the branching bound.
    Critical {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        runs: Option<u64>,
        #[arg(long)]
        ramp: Option<f64>,
        #[arg(long)]
        refine: Option<u32>,
        #[arg(long)]
        full_runs: bool,
    },
    /// Branching bound and constant-g certificate.
    Bound {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        gamma: Option<f64>,
        /// Print the branching columns of all five reference tables.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair connectedness between the origin and a point at distance r.
    Tau {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Rerun a reference table's critical-intensity searches.
    Reproduce {
        #[arg(long)]
        table: Option<u32>,
        #[arg(long, value_enum)]
        scale: Option<Scale>,
        /// Comma-separated subset of dimensions.
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum)]
        output: Option<OutputFormat>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Gilbert,
    Penetrable,
    SoftSphere,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub range: Option<f64>,
    /// Connection probability of the penetrable model.
    #[arg(long)]
    pub p: Option<f64>,
    /// Characteristic energy of the soft-sphere model.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Hardness exponent of the soft-sphere model.
    #[arg(long)]
    pub hardness: Option<u32>,
    /// CSV `(r, phi)` table for the tabulated model.
    #[arg(long)]
    pub table_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub system_size: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub output: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub max_points: Option<u64>,
    #[arg(long)]
    pub max_steps: Option<u64>,
}

/// Parsed `--config` file.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| RcmError::invalid("config", format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            values.insert(key, value.trim().trim_matches('"').to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn get<T: FromStr>(&self, key: &'static str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| RcmError::invalid(key, format!("config value {v:?}: {e}"))),
        }
    }

    fn get_enum<T: ValueEnum>(&self, key: &'static str) -> Result<Option<T>> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true)
                .map(Some)
                .map_err(|e| RcmError::invalid(key, format!("config value {v:?}: {e}"))),
        }
    }

    /// Flag value if given, else the config value.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &'static str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &'static str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get_enum(key),
        }
    }

    fn flag(&self, flag: bool, key: &'static str) -> Result<bool> {
        Ok(flag || self.get::<bool>(key)?.unwrap_or(false))
    }
}

fn required<T>(value: Option<T>, field: &'static str) -> Result<T> {
    value.ok_or_else(|| RcmError::invalid(field, format!("--{field} is required")))
}

fn resolve_model(args: &ModelArgs, cfg: &ConfigFile) -> Result<(ConnectionModel, usize)> {
    let kind = cfg.pick_enum(args.model, "model")?.unwrap_or(ModelKind::Gilbert);
    let dim = cfg.pick(args.dim, "dim")?.unwrap_or(2);
    let range = cfg.pick(args.range, "range")?.unwrap_or(2.0);
    let model = match kind {
        ModelKind::Gilbert => ConnectionModel::gilbert(range)?,
        ModelKind::Penetrable => ConnectionModel::penetrable(range, required(cfg.pick(args.p, "p")?, "p")?)?,
        ModelKind::SoftSphere => ConnectionModel::soft_sphere(
            range,
            cfg.pick(args.beta, "beta")?.unwrap_or(1.0),
            required(cfg.pick(args.hardness, "hardness")?, "hardness")?,
        )?,
        ModelKind::Tabulated => {
            let path: PathBuf = required(cfg.pick(args.table_file.clone(), "table-file")?, "table-file")?;
            ConnectionModel::tabulated_from_path(&path)?
        }
    };
    crate::geometry::validate_dim(dim)?;
    Ok((model, dim))
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn resolve_threads(flag: Option<usize>, cfg: &ConfigFile) -> Result<usize> {
    let threads = match cfg.pick(flag, "threads")? {
        Some(t) => t,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| RcmError::invalid("threads", format!("{THREADS_ENV}={v:?}: {e}")))?,
            Err(_) => default_threads(),
        },
    };
    if threads == 0 {
        return Err(RcmError::invalid("threads", "need at least one thread"));
    }
    Ok(threads)
}

#[derive(Debug)]
struct Resolved {
    model: ConnectionModel,
    params: SimParams,
    seed: u64,
    threads: usize,
    format: OutputFormat,
    out: Option<PathBuf>,
}

fn resolve_run(model_args: &ModelArgs, run: &RunArgs, gamma: f64, cfg: &ConfigFile) -> Result<Resolved> {
    let (model, dim) = resolve_model(model_args, cfg)?;
    let system_size = required(cfg.pick(run.system_size, "system-size")?, "system-size")?;
    let mut params = SimParams::new(dim, gamma, system_size);
    params.max_generated_points = cfg
        .pick(run.max_points, "max-points")?
        .unwrap_or(DEFAULT_MAX_GENERATED_POINTS);
    params.max_steps = cfg.pick(run.max_steps, "max-steps")?.unwrap_or(DEFAULT_MAX_STEPS);
    params.validate(&model)?;
    Ok(Resolved {
        model,
        params,
        seed: cfg.pick(run.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        threads: resolve_threads(run.threads, cfg)?,
        format: cfg.pick_enum(run.output, "output")?.unwrap_or(OutputFormat::Json),
        out: cfg.pick(run.out.clone(), "out")?,
    })
}

/// Effective settings echoed into output documents. The thread count is
/// left out since it never changes results.
#[derive(Debug, Serialize)]
struct EffectiveConfig<'a> {
    command: &'static str,
    model: &'a ConnectionModel,
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    system_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ramp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refine: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    full_runs: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_steps: Option<u64>,
}

impl<'a> EffectiveConfig<'a> {
    fn new(command: &'static str, model: &'a ConnectionModel, dim: usize) -> Self {
        EffectiveConfig {
            command,
            model,
            dim,
            system_size: None,
            gamma: None,
            runs: None,
            trials: None,
            r: None,
            ramp: None,
            refine: None,
            full_runs: None,
            seed: None,
            max_points: None,
            max_steps: None,
        }
    }

    fn with_run(mut self, r: &Resolved) -> Self {
        self.system_size = Some(r.params.system_size);
        self.seed = Some(r.seed);
        self.max_points = Some(r.params.max_generated_points);
        self.max_steps = Some(r.params.max_steps);
        self
    }
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    config: EffectiveConfig<'a>,
    result: T,
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json_document<T: Serialize>(out: Option<&Path>, doc: &T) -> Result<()> {
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, doc)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RcmError::invalid("threads", e.to_string()))?;
    pool.install(f)
}

#[derive(Serialize)]
struct CriticalSummaryRow {
    table: u32,
    dim: usize,
    system_size: f64,
    runs: u64,
    branching_bound: f64,
    lower: f64,
    upper: f64,
    midpoint: f64,
    published_estimate: f64,
    published_branching_bound: f64,
    unreliable: bool,
    wall_time_ms: f64,
}

/// Runs one parsed command; returns the process exit status.
pub fn execute(cli: Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Explore {
            model,
            run,
            gamma,
            trials,
        } => {
            let gamma = required(cfg.pick(gamma, "gamma")?, "gamma")?;
            let r = resolve_run(&model, &run, gamma, &cfg)?;
            let trials = cfg.pick(trials, "trials")?.unwrap_or(1);
            let results = with_pool(r.threads, || run_trials(&r.params, &r.model, trials, r.seed))?;
            let records: Vec<TrialRecord> = results
                .iter()
                .map(|t| TrialRecord::from_trial(t, r.seed, gamma))
                .collect();
            eprintln!(
                "explore: {} with d={} gamma={} S={} seed={} trials={trials}",
                r.model.describe(),
                r.params.dim,
                gamma,
                r.params.system_size,
                r.seed
            );
            let out = open_output(r.out.as_deref())?;
            match r.format {
                OutputFormat::Json => write_json_lines(out, &records)?,
                OutputFormat::Csv => write_csv(out, &records)?,
            }
            Ok(if records.iter().any(|t| t.capped) {
                EXIT_UNRELIABLE
            } else {
                EXIT_OK
            })
        }
        Command::Percolate {
            model,
            run,
            gamma,
            runs,
            full_runs,
        } => {
            let gamma = required(cfg.pick(gamma, "gamma")?, "gamma")?;
            let r = resolve_run(&model, &run, gamma, &cfg)?;
            let runs = cfg.pick(runs, "runs")?.unwrap_or(SearchConfig::default().runs);
            let full_runs = cfg.flag(full_runs, "full-runs")?;
            let verdict = with_pool(r.threads, || {
                percolation_verdict(&r.params, &r.model, runs, r.seed, !full_runs)
            })?;
            if verdict.unreliable() {
                eprintln!("warning: {} capped runs; verdict unreliable", verdict.capped_runs);
            }
            match r.format {
                OutputFormat::Json => {
                    let mut config = EffectiveConfig::new("percolate", &r.model, r.params.dim).with_run(&r);
                    config.gamma = Some(gamma);
                    config.runs = Some(runs);
                    config.full_runs = Some(full_runs);
                    write_json_document(
                        r.out.as_deref(),
                        &Document {
                            config,
                            result: &verdict,
                        },
                    )?;
                }
                OutputFormat::Csv => write_csv(open_output(r.out.as_deref())?, std::slice::from_ref(&verdict))?,
            }
            Ok(if verdict.unreliable() { EXIT_UNRELIABLE } else { EXIT_OK })
        }
        Command::Critical {
            model,
            run,
            runs,
            ramp,
            refine,
            full_runs,
        } => {
            let r = resolve_run(&model, &run, 0.0, &cfg)?;
            let defaults = SearchConfig::default();
            let search = SearchConfig {
                runs: cfg.pick(runs, "runs")?.unwrap_or(defaults.runs),
                ramp_factor: cfg.pick(ramp, "ramp")?.unwrap_or(defaults.ramp_factor),
                refinements: cfg.pick(refine, "refine")?.unwrap_or(defaults.refinements),
                early_exit: !cfg.flag(full_runs, "full-runs")?,
                ..defaults
            };
            search.validate()?;
            let estimate = with_pool(r.threads, || estimate_critical(&r.params, &r.model, &search, r.seed))?;
            for w in &estimate.warnings {
                eprintln!("warning: {w}");
            }
            match r.format {
                OutputFormat::Json => {
                    let mut config = EffectiveConfig::new("critical", &r.model, r.params.dim).with_run(&r);
                    config.runs = Some(search.runs);
                    config.ramp = Some(search.ramp_factor);
                    config.refine = Some(search.refinements);
                    config.full_runs = Some(!search.early_exit);
                    write_json_document(
                        r.out.as_deref(),
                        &Document {
                            config,
                            result: &estimate,
                        },
                    )?;
                }
                OutputFormat::Csv => write_csv(open_output(r.out.as_deref())?, &estimate.history)?,
            }
            Ok(if estimate.unreliable { EXIT_UNRELIABLE } else { EXIT_OK })
        }
        Command::Bound {
            model,
            gamma,
            table,
            output,
            out,
        } => {
            let format = cfg.pick_enum(output, "output")?.unwrap_or(OutputFormat::Json);
            let out = cfg.pick(out, "out")?;
            if cfg.flag(table, "table")? {
                let columns = branching_columns()?;
                match format {
                    OutputFormat::Json => write_json_document(out.as_deref(), &columns)?,
                    OutputFormat::Csv => write_csv(open_output(out.as_deref())?, &columns)?,
                }
                return Ok(EXIT_OK);
            }
            let (model, dim) = resolve_model(&model, &cfg)?;
            let gamma = cfg.pick(gamma, "gamma")?.unwrap_or(0.0);
            let report = constant_g_certificate(&model, dim as u32, gamma)?;
            match format {
                OutputFormat::Json => write_json_document(out.as_deref(), &report)?,
                OutputFormat::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        model: &'a str,
                        dim: u32,
                        connectivity_mass: f64,
                        branching_bound: Option<f64>,
                        gamma: f64,
                        q: f64,
                        certificate_valid: bool,
                        g: Option<f64>,
                        mean_cluster_bound: Option<f64>,
                    }
                    let name = model.describe();
                    let row = Row {
                        model: &name,
                        dim: report.dim,
                        connectivity_mass: report.connectivity_mass,
                        branching_bound: report.branching_bound,
                        gamma,
                        q: report.q,
                        certificate_valid: report.certificate_valid,
                        g: report.g,
                        mean_cluster_bound: report.mean_cluster_bound,
                    };
                    write_csv(open_output(out.as_deref())?, &[row])?
                }
            }
            Ok(EXIT_OK)
        }
        Command::Tau {
            model,
            run,
            gamma,
            r: dist,
            trials,
        } => {
            let gamma = required(cfg.pick(gamma, "gamma")?, "gamma")?;
            let r = resolve_run(&model, &run, gamma, &cfg)?;
            let dist = required(cfg.pick(dist, "r")?, "r")?;
            let trials = cfg.pick(trials, "trials")?.unwrap_or(10_000);
            let est = with_pool(r.threads, || {
                estimate_pair_connectedness(&r.params, &r.model, dist, trials, r.seed)
            })?;
            if est.excessive_exclusions {
                eprintln!(
                    "warning: {} of {trials} trials excluded ({} escaped, {} capped)",
                    est.excluded_escaped + est.excluded_capped,
                    est.excluded_escaped,
                    est.excluded_capped
                );
            }
            match r.format {
                OutputFormat::Json => {
                    let mut config = EffectiveConfig::new("tau", &r.model, r.params.dim).with_run(&r);
                    config.gamma = Some(gamma);
                    config.r = Some(dist);
                    config.trials = Some(trials);
                    write_json_document(r.out.as_deref(), &Document { config, result: &est })?;
                }
                OutputFormat::Csv => write_csv(open_output(r.out.as_deref())?, std::slice::from_ref(&est))?,
            }
            Ok(if est.excluded_capped > 0 {
                EXIT_UNRELIABLE
            } else {
                EXIT_OK
            })
        }
        Command::Reproduce {
            table,
            scale,
            dims,
            seed,
            threads,
            output,
            out,
        } => {
            let table = required(cfg.pick(table, "table")?, "table")?;
            let scale = cfg.pick_enum(scale, "scale")?.unwrap_or(Scale::Desk);
            let dims = match dims {
                Some(d) => Some(d),
                None => match cfg.values.get("dims") {
                    None => None,
                    Some(v) => Some(
                        v.split(',')
                            .map(|s| s.trim().parse::<usize>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|e| RcmError::invalid("dims", e.to_string()))?,
                    ),
                },
            };
            let seed = cfg.pick(seed, "seed")?.unwrap_or(DEFAULT_SEED);
            let threads = resolve_threads(threads, &cfg)?;
            let format = cfg.pick_enum(output, "output")?.unwrap_or(OutputFormat::Json);
            let out = cfg.pick(out, "out")?;
            crate::reference::reference_table(table)?;
            eprintln!("reproduce: table {table}, {scale:?} scale, seed {seed}, {threads} threads");
            let report = with_pool(threads, || reproduce_preset(table, scale, seed, dims.as_deref()))?;
            for row in &report.rows {
                eprintln!(
                    "  d={} S={} runs={}: [{:.6}, {:.6}] midpoint {:.6} (published {})",
                    row.dim,
                    row.system_size,
                    row.runs,
                    row.estimate.lower,
                    row.estimate.upper,
                    row.estimate.midpoint,
                    row.published_estimate
                );
            }
            match format {
                OutputFormat::Json => write_json_document(out.as_deref(), &report)?,
                OutputFormat::Csv => {
                    let rows: Vec<CriticalSummaryRow> = report
                        .rows
                        .iter()
                        .map(|row| CriticalSummaryRow {
                            table,
                            dim: row.dim,
                            system_size: row.system_size,
                            runs: row.runs,
                            branching_bound: row.branching_bound,
                            lower: row.estimate.lower,
                            upper: row.estimate.upper,
                            midpoint: row.estimate.midpoint,
                            published_estimate: row.published_estimate,
                            published_branching_bound: row.published_branching_bound,
                            unreliable: row.estimate.unreliable,
                            wall_time_ms: row.estimate.wall_time_ms,
                        })
                        .collect();
                    write_csv(open_output(out.as_deref())?, &rows)?
                }
            }
            Ok(if report.unreliable() { EXIT_UNRELIABLE } else { EXIT_OK })
        }
    }
}

/// Parses `argv` (program name first) and runs it.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}
