//! Command-line front end for the `matchcolor` library.
//!
//! Exit status: 0 on success, 1 when an algorithm gives up (retries
//! exhausted, greedy blocked, calibration stalled), 2 on usage or input
//! errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matchcolor::fractional::{chi_star, parse_rational, Rational};
use matchcolor::gs::{color_multigraph, GsConfig};
use matchcolor::hardcore::{
    calibrate_with, sample_matching_with, CalibrationConfig, ChainConfig, ExactLimits, HardCoreModel, Sampler,
};
use matchcolor::list::{list_edge_color, ListConfig};
use matchcolor::multigraph::{validate_coloring, ListAssignment, Multigraph, PartialColoring};
use matchcolor::oracle;
use matchcolor::rng::stream;

#[derive(Debug, Parser)]
#[command(name = "matchcolor", version, about = "Edge coloring of multigraphs via hard-core matchings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional chromatic index with its witness.
    ChiStar(ChiStarArgs),
    /// Edge-color a multigraph.
    Color(ColorArgs),
    /// List-edge-color a multigraph.
    ListColor(ListColorArgs),
    /// Find activities with uniform edge marginals.
    Calibrate(CalibrateArgs),
    /// Draw matchings from a hard-core distribution.
    Sample(SampleArgs),
    /// Brute-force checks on tiny instances.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run `color` over a range of seeds and write a CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ChiStarArgs {
    pub graph: PathBuf,
    /// Largest odd set searched; the answer is an upper bound past it.
    #[arg(long, value_parser = odd_cap)]
    pub odd_set_cap: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GsArgs {
    #[arg(long, default_value = "0.1", value_parser = gs_epsilon)]
    pub epsilon: Rational,
    /// Rounds run while χ* is at least this value.
    #[arg(long, value_parser = positive_rational)]
    pub chi0: Option<Rational>,
    /// Resampling radius.
    #[arg(long = "radius-t", value_parser = at_least_one)]
    pub t: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub retries: usize,
    #[arg(long, value_parser = at_least_one)]
    pub step_cap: Option<usize>,
    #[arg(long, value_parser = odd_cap)]
    pub odd_set_cap: Option<usize>,
    #[arg(long, default_value_t = 5000, value_parser = at_least_one)]
    pub calibration_iters: usize,
    /// MCMC steps per sample when a ball is too large for exact sampling.
    #[arg(long, value_parser = at_least_one)]
    pub chain_steps: Option<usize>,
}

impl GsArgs {
    fn config(&self, seed: u64) -> GsConfig {
        GsConfig {
            epsilon: self.epsilon,
            chi0: self.chi0,
            t: self.t,
            sampler: ChainConfig {
                steps: self.chain_steps,
                ..ChainConfig::with_seed(seed)
            },
            retries: self.retries,
            seed,
            odd_set_cap: self.odd_set_cap,
            step_cap: self.step_cap,
            calibration_iters: self.calibration_iters,
            ..Default::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub gs: GsArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coloring JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ListColorArgs {
    pub graph: PathBuf,
    /// JSON object mapping edge ids to color lists.
    #[arg(long)]
    pub lists: PathBuf,
    #[arg(long, default_value = "0.1", value_parser = positive_rational)]
    pub epsilon: Rational,
    /// Color budget C; defaults to the smallest list size.
    #[arg(long, value_parser = at_least_one)]
    pub budget: Option<usize>,
    #[arg(long, value_parser = unit_interval)]
    pub alpha: Option<f64>,
    #[arg(long = "radius-t", value_parser = at_least_one)]
    pub t: Option<usize>,
    #[arg(long = "radius-tprime", value_parser = at_least_one)]
    pub t_prime: Option<usize>,
    #[arg(long, value_parser = non_negative)]
    pub edge_threshold: Option<f64>,
    #[arg(long, value_parser = non_negative)]
    pub vertex_threshold: Option<f64>,
    #[arg(long, default_value_t = 32)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 10_000, value_parser = at_least_one)]
    pub step_cap: usize,
    #[arg(long, default_value_t = 3)]
    pub retries: usize,
    #[arg(long, value_parser = odd_cap)]
    pub odd_set_cap: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    pub graph: PathBuf,
    /// Common target marginal, e.g. `39/160` or `0.24`.
    #[arg(long, value_parser = open_unit_rational)]
    pub target: Rational,
    #[arg(long, value_parser = positive_float)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 5000, value_parser = at_least_one)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ActivityArgs {
    /// Uniform activity.
    #[arg(long, value_parser = positive_float, conflicts_with = "activities")]
    pub lambda: Option<f64>,
    /// JSON array with one activity per edge.
    #[arg(long)]
    pub activities: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Auto,
    Exact,
    Mcmc,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub activity: ActivityArgs,
    #[arg(long, default_value_t = 1, value_parser = at_least_one)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Chain steps per sample (MCMC only).
    #[arg(long, value_parser = at_least_one)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Exact chromatic index, or an exact list coloring with `--lists`.
    ChiE {
        graph: PathBuf,
        #[arg(long)]
        lists: Option<PathBuf>,
    },
    /// Exact hard-core distribution.
    Dist {
        graph: PathBuf,
        #[command(flatten)]
        activity: ActivityArgs,
    },
    /// Total variation distance between two distribution or sample files.
    Tv { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub graph: PathBuf,
    #[command(flatten)]
    pub gs: GsArgs,
    #[arg(long, default_value_t = 20, value_parser = at_least_one)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Adds a `wall_ms` column; the output is then no longer reproducible.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err("must be an integer ≥ 1".into()),
    }
}

fn odd_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 3 => Ok(v),
        _ => Err("must be an integer ≥ 3".into()),
    }
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn gs_epsilon(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r > Rational::from_integer(0) && r <= Rational::new(1, 10) {
        Ok(r)
    } else {
        Err("ε must be in (0, 0.1]".into())
    }
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r > Rational::from_integer(0) {
        Ok(r)
    } else {
        Err("must be positive".into())
    }
}

fn open_unit_rational(s: &str) -> Result<Rational, String> {
    let r = rational(s)?;
    if r > Rational::from_integer(0) && r < Rational::from_integer(1) {
        Ok(r)
    } else {
        Err("must be in (0, 1)".into())
    }
}

fn float(s: &str) -> Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("`{s}` is not a number"))
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x = float(s)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err("must be in [0, 1]".into())
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let x = float(s)?;
    if x >= 0.0 {
        Ok(x)
    } else {
        Err("must be non-negative".into())
    }
}

fn positive_float(s: &str) -> Result<f64, String> {
    let x = float(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] matchcolor::Error),
    #[error("output failed validation: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use matchcolor::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Validation(_) => 1,
            CliError::Core(e) => match e {
                E::RoundFailed { .. } | E::GreedyBlocked { .. } | E::Calibration { .. } | E::Invariant(_) => 1,
                E::Parse { .. }
                | E::Argument(_)
                | E::Capacity(_)
                | E::Infeasible { .. }
                | E::EmptyList { .. }
                | E::Json(_) => 2,
            },
        }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<Cli, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    Cli::try_parse_from(argv)
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_graph(path: &Path) -> Result<Multigraph, CliError> {
    Ok(Multigraph::parse(&read(path)?)?)
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.clone(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(matchcolor::Error::from)?;
    s.push('\n');
    Ok(s)
}

fn activities(g: &Multigraph, a: &ActivityArgs) -> Result<Vec<f64>, CliError> {
    match (&a.activities, a.lambda) {
        (Some(p), _) => {
            let v: Vec<f64> = serde_json::from_str(&read(p)?).map_err(matchcolor::Error::from)?;
            if v.len() != g.edge_count() {
                return Err(CliError::Usage(format!(
                    "{}: {} activities for {} edges",
                    p.display(),
                    v.len(),
                    g.edge_count()
                )));
            }
            Ok(v)
        }
        (None, l) => Ok(vec![l.unwrap_or(1.0); g.edge_count()]),
    }
}

fn check(g: &Multigraph, col: &PartialColoring, lists: Option<&ListAssignment>) -> Result<(), CliError> {
    let report = validate_coloring(g, col, lists);
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "{} conflicts, {} uncolored, {} list violations",
            report.conflicts.len(),
            report.uncolored.len(),
            report.list_violations.len()
        )))
    }
}

/// Reads a file holding either an exact distribution
/// (`[{"matching": [..], "probability": p}]`) or raw samples (`[[..], ..]`).
fn read_law(path: &Path) -> Result<BTreeMap<Vec<usize>, f64>, CliError> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(matchcolor::Error::from)?;
    let bad = || CliError::Usage(format!("{}: expected a distribution or a sample array", path.display()));
    let items = v.as_array().ok_or_else(bad)?;
    let edges = |x: &Value| -> Result<Vec<usize>, CliError> {
        let mut e: Vec<usize> = x
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|y| y.as_u64().map(|u| u as usize).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        e.sort_unstable();
        Ok(e)
    };
    if items.iter().all(|x| x.is_object()) {
        let mut law = BTreeMap::new();
        for x in items {
            let m = edges(x.get("matching").ok_or_else(bad)?)?;
            let p = x.get("probability").and_then(Value::as_f64).ok_or_else(bad)?;
            *law.entry(m).or_insert(0.0) += p;
        }
        Ok(law)
    } else {
        let samples = items.iter().map(edges).collect::<Result<Vec<_>, _>>()?;
        Ok(oracle::empirical(&samples))
    }
}

pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::ChiStar(a) => {
            let g = read_graph(&a.graph)?;
            let fi = chi_star(&g, a.odd_set_cap)?;
            emit(&a.out, stdout, &pretty(&fi)?)
        }
        Command::Color(a) => {
            let g = read_graph(&a.graph)?;
            let out = color_multigraph(&g, &a.gs.config(a.seed))?;
            check(&g, &out.coloring, None)?;
            if let Some(p) = &a.stats {
                emit(&Some(p.clone()), stdout, &pretty(&out.stats)?)?;
            }
            emit(&a.out, stdout, &pretty(&out.coloring.to_json())?)
        }
        Command::ListColor(a) => {
            let g = read_graph(&a.graph)?;
            let lists = ListAssignment::from_json_str(&read(&a.lists)?, g.edge_count())?;
            let cfg = ListConfig {
                epsilon: a.epsilon,
                budget: a.budget,
                alpha: a.alpha,
                t_prime: a.t_prime,
                t: a.t,
                edge_threshold: a.edge_threshold,
                vertex_threshold: a.vertex_threshold,
                sampler: ChainConfig::with_seed(a.seed),
                seed: a.seed,
                max_iterations: a.max_iterations,
                step_cap: a.step_cap,
                retries: a.retries,
                odd_set_cap: a.odd_set_cap,
                ..Default::default()
            };
            let out = list_edge_color(&g, &lists, &cfg)?;
            check(&g, &out.coloring, Some(&lists))?;
            if let Some(p) = &a.stats {
                emit(&Some(p.clone()), stdout, &pretty(&out.stats)?)?;
            }
            emit(&a.out, stdout, &pretty(&out.coloring.to_json())?)
        }
        Command::Calibrate(a) => {
            let g = read_graph(&a.graph)?;
            let cfg = CalibrationConfig {
                tol: a.tol,
                max_iters: a.max_iters,
                chain: ChainConfig::with_seed(a.seed),
                ..Default::default()
            };
            let r = calibrate_with(&g, a.target, &cfg)?;
            let by_edge: BTreeMap<String, f64> =
                r.activities.iter().enumerate().map(|(e, l)| (e.to_string(), *l)).collect();
            let v = json!({
                "activities": by_edge,
                "max_error": r.max_error,
                "K_hat": r.k_hat,
                "iterations": r.iterations,
                "exact": r.exact,
            });
            emit(&a.out, stdout, &pretty(&v)?)
        }
        Command::Sample(a) => {
            let g = read_graph(&a.graph)?;
            let lam = activities(&g, &a.activity)?;
            let model = HardCoreModel::new(g, lam)?;
            let chain = ChainConfig {
                steps: a.steps,
                ..ChainConfig::with_seed(a.seed)
            };
            let mut rng = stream(a.seed, &[0x5A]);
            let samples: Vec<Vec<usize>> = match a.method {
                Method::Mcmc => (0..a.count)
                    .map(|_| sample_matching_with(&model, &chain, &mut rng).edges().to_vec())
                    .collect(),
                Method::Exact | Method::Auto => {
                    let mut s = Sampler::new(&model, ExactLimits::default(), &chain);
                    if a.method == Method::Exact && !s.is_exact() {
                        return Err(matchcolor::Error::Capacity(
                            "graph too large for exact sampling; use --method mcmc".into(),
                        )
                        .into());
                    }
                    (0..a.count).map(|_| s.sample(&mut rng).edges().to_vec()).collect()
                }
            };
            emit(&a.out, stdout, &(serde_json::to_string(&samples).map_err(matchcolor::Error::from)? + "\n"))
        }
        Command::Verify(VerifyCommand::ChiE { graph, lists }) => {
            let g = read_graph(&graph)?;
            let v = match lists {
                None => {
                    let (k, col) = oracle::brute_force_chromatic_index(&g)?;
                    json!({ "chromatic_index": k, "coloring": col.to_json() })
                }
                Some(p) => {
                    let l = ListAssignment::from_json_str(&read(&p)?, g.edge_count())?;
                    match oracle::brute_force_list_coloring(&g, &l)? {
                        Some(col) => json!({ "colorable": true, "coloring": col.to_json() }),
                        None => json!({ "colorable": false }),
                    }
                }
            };
            emit(&None, stdout, &pretty(&v)?)
        }
        Command::Verify(VerifyCommand::Dist { graph, activity }) => {
            let g = read_graph(&graph)?;
            let lam = activities(&g, &activity)?;
            let d = oracle::exact_distribution(&HardCoreModel::new(g, lam)?)?;
            let rows: Vec<Value> = d
                .support
                .iter()
                .zip(&d.probabilities)
                .map(|(m, p)| json!({ "matching": m.edges(), "probability": p }))
                .collect();
            emit(&None, stdout, &pretty(&rows)?)
        }
        Command::Verify(VerifyCommand::Tv { a, b }) => {
            let tv = oracle::tv_distance(&read_law(&a)?, &read_law(&b)?);
            emit(&None, stdout, &pretty(&json!({ "tv": tv }))?)
        }
        Command::Bench(a) => {
            let g = read_graph(&a.graph)?;
            let mut csv = String::from("seed,status,steps,colors,ratio");
            if a.timing {
                csv.push_str(",wall_ms");
            }
            csv.push('\n');
            for k in 0..a.seeds as u64 {
                let seed = a.seed_base + k;
                let start = Instant::now();
                let row = match color_multigraph(&g, &a.gs.config(seed)) {
                    Ok(out) => {
                        check(&g, &out.coloring, None)?;
                        let steps: usize = out.stats.rounds.iter().map(|r| r.steps).sum();
                        format!("{seed},ok,{steps},{},{:.6}", out.stats.colors_used, out.stats.ratio)
                    }
                    Err(e) => {
                        let code = CliError::from(e).exit_code();
                        if code != 1 {
                            return Err(CliError::Usage(format!("seed {seed}: input rejected")));
                        }
                        format!("{seed},failed,,,")
                    }
                };
                csv.push_str(&row);
                if a.timing {
                    csv.push_str(&format!(",{}", start.elapsed().as_millis()));
                }
                csv.push('\n');
            }
            emit(&a.out, stdout, &csv)
        }
    }
}

/// Parses, executes and maps the outcome to an exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
