//! Command-line front end.
//!
//! Every subcommand resolves a flat [`RunConfig`] (built-in defaults, then an
//! optional JSON config file, then flags) and echoes it into its JSON output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::baselines::{brute_force_optimum, hill_climb, rcm_order, DEFAULT_ORACLE_LIMIT};
use crate::bbo::{run_bbo, BboConfig};
use crate::bicluster::{
    extract_blocks, generate_synthetic, recovery_score, BiclusterSet, GroundTruth,
};
use crate::datasets::{self, Dataset};
use crate::error::{Error, Result};
use crate::io::{load_matrix, save_matrix, MatrixFormat};
use crate::matrix::{
    apply_arrangement, bandwidth_cost, classic_bandwidth, scramble, Arrangement, DataMatrix,
    Permutation,
};
use crate::migration::{integrate_lv, LvForm, LvParams};
use crate::plot::{render_dotplot, render_panels, write_svg};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "BANDCLUST_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bandclust",
    version,
    about = "Bicluster two-mode matrices by weighted bandwidth minimization"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a planted-block synthetic matrix and its ground truth.
    Generate(GenerateArgs),
    /// Randomly permute rows and columns of a matrix.
    Scramble(ScrambleArgs),
    /// Minimize the weighted bandwidth with the migration-based optimizer.
    Solve(SolveArgs),
    /// Exhaustive optimum for tiny matrices.
    Oracle(OracleArgs),
    /// Reverse Cuthill-McKee ordering of the row/column graph.
    Rcm(RcmArgs),
    /// Pairwise-swap descent.
    Hillclimb(HillclimbArgs),
    /// Extract blocks from a solved ordering and score them against ground truth.
    Eval(EvalArgs),
    /// Render an SVG dot plot.
    Plot(PlotArgs),
    /// Scramble, solve and evaluate the benchmark datasets.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with flat configuration keys; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// `csv` or `mtx`; guessed from the extension by default.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args, Default)]
struct Tuning {
    #[arg(long)]
    pop_size: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    mutation_prob: Option<f64>,
    #[arg(long)]
    elite_count: Option<usize>,
    #[arg(long)]
    stagnation_window: Option<usize>,
    #[arg(long)]
    restart_window: Option<usize>,
    #[arg(long)]
    lv_alpha: Option<f64>,
    #[arg(long)]
    lv_beta: Option<f64>,
    #[arg(long)]
    lv_gamma: Option<f64>,
    #[arg(long)]
    lv_delta: Option<f64>,
    #[arg(long)]
    lv_x0: Option<f64>,
    #[arg(long)]
    lv_y0: Option<f64>,
    #[arg(long)]
    lv_t_end: Option<f64>,
    #[arg(long)]
    lv_steps: Option<usize>,
    /// `as-printed` or `conventional`.
    #[arg(long)]
    lv_form: Option<String>,
    /// Activity threshold for block extraction and graph construction.
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    lo: Option<u32>,
    #[arg(long)]
    hi: Option<u32>,
    #[arg(long)]
    noise: Option<f64>,
    /// Where to write the ground-truth JSON.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScrambleArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// Where to write the arrangement that was applied.
    #[arg(long)]
    arrangement: Option<PathBuf>,
    /// Ground truth of the input, to be relabeled into scrambled indices.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    truth_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    tuning: Tuning,
    /// Also write the reordered matrix.
    #[arg(long)]
    reordered: Option<PathBuf>,
    /// Also write the extracted blocks as JSON.
    #[arg(long)]
    blocks: Option<PathBuf>,
    /// Dump the Lotka-Volterra trajectory as `t,x,y` CSV.
    #[arg(long)]
    trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    limit: Option<u64>,
}

#[derive(Debug, Args)]
struct RcmArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct HillclimbArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    max_passes: Option<usize>,
    /// `identity` or `random` (drawn from the seed).
    #[arg(long)]
    start: Option<String>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// Result JSON whose `best` arrangement is applied to the input.
    #[arg(long)]
    result: Option<PathBuf>,
    /// Ground-truth JSON in the input's index space.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    input: InputArgs,
    /// Result JSON whose `best` arrangement is applied before plotting.
    #[arg(long)]
    result: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    tuning: Tuning,
    /// Directory holding optional dataset files (e.g. the CEOs/clubs CSV).
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Directory for the summary CSV, per-dataset results and plots.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Restrict to one dataset: galaskiewicz, southern-women or synthetic.
    #[arg(long)]
    dataset: Option<String>,
}

/// Fully resolved run configuration, echoed into every result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub input: Option<PathBuf>,
    pub format: Option<MatrixFormat>,
    pub seed: u64,
    pub pop_size: usize,
    pub generations: usize,
    pub mutation_prob: f64,
    pub elite_count: usize,
    pub stagnation_window: usize,
    pub restart_window: usize,
    pub lv_alpha: f64,
    pub lv_beta: f64,
    pub lv_gamma: f64,
    pub lv_delta: f64,
    pub lv_x0: f64,
    pub lv_y0: f64,
    pub lv_t_end: f64,
    pub lv_steps: usize,
    pub lv_form: LvForm,
    pub tau: f64,
    pub limit: u64,
    pub max_passes: usize,
    pub start: String,
    pub rows: usize,
    pub cols: usize,
    pub blocks: usize,
    pub lo: u32,
    pub hi: u32,
    pub noise: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let bbo = BboConfig::default();
        let lv = bbo.lv;
        Self {
            command: String::new(),
            input: None,
            format: None,
            seed: bbo.seed,
            pop_size: bbo.pop_size,
            generations: bbo.generations,
            mutation_prob: bbo.mutation_prob,
            elite_count: bbo.elite_count,
            stagnation_window: bbo.stagnation_window,
            restart_window: bbo.restart_window,
            lv_alpha: lv.alpha,
            lv_beta: lv.beta,
            lv_gamma: lv.gamma,
            lv_delta: lv.delta,
            lv_x0: lv.x0,
            lv_y0: lv.y0,
            lv_t_end: lv.t_end,
            lv_steps: lv.steps,
            lv_form: lv.form,
            tau: 0.0,
            limit: DEFAULT_ORACLE_LIMIT,
            max_passes: 1000,
            start: "identity".into(),
            rows: 56,
            cols: 50,
            blocks: 4,
            lo: datasets::SYNTHETIC_RANGE.0,
            hi: datasets::SYNTHETIC_RANGE.1,
            noise: 0.0,
        }
    }
}

impl RunConfig {
    pub fn bbo(&self) -> BboConfig {
        BboConfig {
            pop_size: self.pop_size,
            generations: self.generations,
            mutation_prob: self.mutation_prob,
            elite_count: self.elite_count,
            stagnation_window: self.stagnation_window,
            restart_window: self.restart_window,
            seed: self.seed,
            lv: LvParams {
                alpha: self.lv_alpha,
                beta: self.lv_beta,
                gamma: self.lv_gamma,
                delta: self.lv_delta,
                x0: self.lv_x0,
                y0: self.lv_y0,
                t_end: self.lv_t_end,
                steps: self.lv_steps,
                form: self.lv_form,
            },
        }
    }

    fn resolve(command: &str, common: &Common) -> Result<Self> {
        let mut cfg = match &common.config {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        cfg.command = command.to_string();
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    fn apply_input(&mut self, input: &InputArgs) -> Result<()> {
        if let Some(p) = &input.input {
            self.input = Some(p.clone());
        }
        if let Some(f) = &input.format {
            self.format = Some(f.parse()?);
        }
        if self.format.is_none() {
            self.format = self.input.as_deref().map(MatrixFormat::from_path);
        }
        Ok(())
    }

    fn apply_tuning(&mut self, t: &Tuning) -> Result<()> {
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = t.$field { self.$field = v; })*
            };
        }
        set!(
            pop_size,
            generations,
            mutation_prob,
            elite_count,
            stagnation_window,
            restart_window,
            lv_alpha,
            lv_beta,
            lv_gamma,
            lv_delta,
            lv_x0,
            lv_y0,
            lv_t_end,
            lv_steps,
            tau
        );
        if let Some(form) = &t.lv_form {
            self.lv_form = match form.as_str() {
                "as-printed" => LvForm::AsPrinted,
                "conventional" => LvForm::Conventional,
                other => return Err(Error::Config(format!("unknown lv form `{other}`"))),
            };
        }
        Ok(())
    }

    fn load_input(&self) -> Result<DataMatrix> {
        let path = self
            .input
            .as_ref()
            .ok_or_else(|| Error::Config("--input is required".into()))?;
        load_matrix(
            path,
            self.format.unwrap_or_else(|| MatrixFormat::from_path(path)),
        )
    }
}

/// JSON document written by `solve`, `oracle`, `rcm` and `hillclimb`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc {
    pub command: String,
    pub rows: usize,
    pub cols: usize,
    pub initial_cost: f64,
    pub best_cost: f64,
    pub classic_bandwidth: usize,
    pub best: Arrangement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_trace: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations_run: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<u64>,
    pub config: RunConfig,
}

impl ResultDoc {
    fn new(cfg: &RunConfig, a: &DataMatrix, best: Arrangement) -> Result<Self> {
        let initial_cost = bandwidth_cost(a, &Arrangement::identity(a.rows(), a.cols()))?;
        let best_cost = bandwidth_cost(a, &best)?;
        Ok(Self {
            command: cfg.command.clone(),
            rows: a.rows(),
            cols: a.cols(),
            initial_cost,
            best_cost,
            classic_bandwidth: classic_bandwidth(&apply_arrangement(a, &best)?),
            best,
            cost_trace: None,
            generations_run: None,
            enumerated: None,
            config: cfg.clone(),
        })
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn save_any(a: &DataMatrix, path: &Path) -> Result<()> {
    save_matrix(a, path, MatrixFormat::from_path(path))
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            // Fails only if a pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(args) => generate(args),
        Command::Scramble(args) => scramble_cmd(args),
        Command::Solve(args) => solve(args),
        Command::Oracle(args) => oracle(args),
        Command::Rcm(args) => rcm(args),
        Command::Hillclimb(args) => hillclimb(args),
        Command::Eval(args) => eval(args),
        Command::Plot(args) => plot(args),
        Command::Bench(args) => bench(args),
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("generate", &args.common)?;
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = args.$field { cfg.$field = v; })* };
    }
    set!(rows, cols, blocks, lo, hi, noise);
    let (a, truth) = generate_synthetic(
        cfg.rows,
        cfg.cols,
        cfg.blocks,
        (cfg.lo, cfg.hi),
        cfg.noise,
        cfg.seed,
    )?;
    match &args.common.out {
        Some(path) => save_any(&a, path)?,
        None => print!("{}", crate::io::to_csv(&a)?),
    }
    if let Some(path) = &args.truth {
        fs::write(path, to_json(&truth)?)?;
    }
    Ok(())
}

fn scramble_cmd(args: ScrambleArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("scramble", &args.common)?;
    cfg.apply_input(&args.input)?;
    let a = cfg.load_input()?;
    let (scrambled, arr) = scramble(&a, cfg.seed);
    match &args.common.out {
        Some(path) => save_any(&scrambled, path)?,
        None => print!("{}", crate::io::to_csv(&scrambled)?),
    }
    if let Some(path) = &args.arrangement {
        fs::write(path, to_json(&arr)?)?;
    }
    match (&args.truth, &args.truth_out) {
        (Some(src), Some(dst)) => {
            let truth: GroundTruth = read_json(src)?;
            fs::write(dst, to_json(&truth.through(&arr))?)?;
        }
        (None, None) => {}
        _ => return Err(Error::Config("--truth and --truth-out go together".into())),
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("solve", &args.common)?;
    cfg.apply_input(&args.input)?;
    cfg.apply_tuning(&args.tuning)?;
    let a = cfg.load_input()?;
    let bbo = cfg.bbo();
    if let Some(path) = &args.trajectory {
        fs::write(path, integrate_lv(&bbo.lv)?.to_csv())?;
    }
    let res = run_bbo(&a, &bbo)?;
    eprintln!(
        "solved {}x{} in {:.3}s: cost {} -> {} after {} generations",
        a.rows(),
        a.cols(),
        res.wall_time,
        res.initial_cost,
        res.best_cost,
        res.generations_run
    );
    let mut doc = ResultDoc::new(&cfg, &a, res.best.clone())?;
    doc.cost_trace = Some(res.cost_trace);
    doc.generations_run = Some(res.generations_run);
    let reordered = apply_arrangement(&a, &res.best)?;
    if let Some(path) = &args.reordered {
        save_any(&reordered, path)?;
    }
    if let Some(path) = &args.blocks {
        fs::write(
            path,
            to_json(&extract_blocks(&reordered, &res.best, cfg.tau)?)?,
        )?;
    }
    emit(args.common.out.as_deref(), &to_json(&doc)?)
}

fn oracle(args: OracleArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("oracle", &args.common)?;
    cfg.apply_input(&args.input)?;
    if let Some(limit) = args.limit {
        cfg.limit = limit;
    }
    let a = cfg.load_input()?;
    let res = brute_force_optimum(&a, cfg.limit)?;
    let mut doc = ResultDoc::new(&cfg, &a, res.optimal_arrangement)?;
    doc.enumerated = Some(res.enumerated);
    emit(args.common.out.as_deref(), &to_json(&doc)?)
}

fn rcm(args: RcmArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("rcm", &args.common)?;
    cfg.apply_input(&args.input)?;
    if let Some(tau) = args.tau {
        cfg.tau = tau;
    }
    let a = cfg.load_input()?;
    let doc = ResultDoc::new(&cfg, &a, rcm_order(&a, cfg.tau))?;
    emit(args.common.out.as_deref(), &to_json(&doc)?)
}

/// Uniformly random arrangement from the seed's init stream.
pub fn random_arrangement(m: usize, n: usize, seed: u64) -> Arrangement {
    let mut rng = crate::rng::substream(seed, crate::rng::INIT, u64::MAX);
    let rows = Permutation::random(m, &mut rng);
    let cols = Permutation::random(n, &mut rng);
    Arrangement::new(rows, cols)
}

fn hillclimb(args: HillclimbArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("hillclimb", &args.common)?;
    cfg.apply_input(&args.input)?;
    if let Some(p) = args.max_passes {
        cfg.max_passes = p;
    }
    if let Some(s) = &args.start {
        cfg.start = s.clone();
    }
    let a = cfg.load_input()?;
    let start = match cfg.start.as_str() {
        "identity" => Arrangement::identity(a.rows(), a.cols()),
        "random" => random_arrangement(a.rows(), a.cols(), cfg.seed),
        other => return Err(Error::Config(format!("unknown start `{other}`"))),
    };
    let best = hill_climb(&a, &start, cfg.max_passes)?;
    let doc = ResultDoc::new(&cfg, &a, best)?;
    emit(args.common.out.as_deref(), &to_json(&doc)?)
}

#[derive(Debug, Serialize)]
struct EvalDoc {
    command: String,
    best_cost: f64,
    classic_bandwidth: usize,
    blocks: BiclusterSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovery_score: Option<f64>,
    config: RunConfig,
}

fn eval(args: EvalArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("eval", &args.common)?;
    cfg.apply_input(&args.input)?;
    if let Some(tau) = args.tau {
        cfg.tau = tau;
    }
    let a = cfg.load_input()?;
    let arr = match &args.result {
        Some(path) => read_json::<ResultDoc>(path)?.best,
        None => Arrangement::identity(a.rows(), a.cols()),
    };
    let reordered = apply_arrangement(&a, &arr)?;
    let blocks = extract_blocks(&reordered, &arr, cfg.tau)?;
    let score = match &args.truth {
        Some(path) => Some(recovery_score(
            &blocks,
            &read_json::<GroundTruth>(path)?.as_set(),
        )),
        None => None,
    };
    let doc = EvalDoc {
        command: cfg.command.clone(),
        best_cost: bandwidth_cost(&a, &arr)?,
        classic_bandwidth: classic_bandwidth(&reordered),
        blocks,
        recovery_score: score,
        config: cfg,
    };
    emit(args.common.out.as_deref(), &to_json(&doc)?)
}

fn plot(args: PlotArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("plot", &args.common)?;
    cfg.apply_input(&args.input)?;
    let mut a = cfg.load_input()?;
    if let Some(path) = &args.result {
        a = apply_arrangement(&a, &read_json::<ResultDoc>(path)?.best)?;
    }
    let svg = render_dotplot(&a);
    match &args.common.out {
        Some(path) => write_svg(&svg, path),
        None => {
            print!("{svg}");
            Ok(())
        }
    }
}

/// One line of the benchmark summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub dataset: String,
    pub rows: usize,
    pub cols: usize,
    pub reference_cost: f64,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub oracle_cost: Option<f64>,
    pub rcm_cost: f64,
    pub hillclimb_cost: f64,
    pub recovery_score: f64,
    pub wall_time: f64,
    pub seed: u64,
}

/// Scramble, solve and score one dataset. The unscrambled matrix is the
/// reference ordering; its extracted blocks serve as ground truth unless a
/// planted truth is given.
pub fn bench_dataset(
    name: &str,
    original: &DataMatrix,
    truth: Option<&GroundTruth>,
    cfg: &RunConfig,
) -> Result<(BenchRow, String)> {
    let (scrambled, scramble_arr) = scramble(original, cfg.seed);
    let truth = match truth {
        Some(t) => t.as_set(),
        None => extract_blocks(
            original,
            &Arrangement::identity(original.rows(), original.cols()),
            cfg.tau,
        )?,
    }
    .through(&scramble_arr);

    let started = Instant::now();
    let res = run_bbo(&scrambled, &cfg.bbo())?;
    let wall_time = started.elapsed().as_secs_f64();
    let solved = apply_arrangement(&scrambled, &res.best)?;
    let found = extract_blocks(&solved, &res.best, cfg.tau)?;

    let oracle_cost = brute_force_optimum(&scrambled, cfg.limit)
        .ok()
        .map(|r| r.optimal_cost);
    let rcm_cost = bandwidth_cost(&scrambled, &rcm_order(&scrambled, cfg.tau))?;
    let start = random_arrangement(scrambled.rows(), scrambled.cols(), cfg.seed);
    let hc = hill_climb(&scrambled, &start, cfg.max_passes)?;

    let row = BenchRow {
        dataset: name.to_string(),
        rows: original.rows(),
        cols: original.cols(),
        reference_cost: bandwidth_cost(
            original,
            &Arrangement::identity(original.rows(), original.cols()),
        )?,
        initial_cost: res.initial_cost,
        final_cost: res.best_cost,
        oracle_cost,
        rcm_cost,
        hillclimb_cost: bandwidth_cost(&scrambled, &hc)?,
        recovery_score: recovery_score(&found, &truth),
        wall_time,
        seed: cfg.seed,
    };
    let svg = render_panels(&[
        ("original", original),
        ("scrambled", &scrambled),
        ("recovered", &solved),
    ]);
    Ok((row, svg))
}

fn summary_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "dataset,rows,cols,reference_cost,initial_cost,final_cost,oracle_cost,rcm_cost,hillclimb_cost,recovery_score,wall_time,seed\n",
    );
    for r in rows {
        let oracle = r.oracle_cost.map(|c| c.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.4},{:.3},{}",
            r.dataset,
            r.rows,
            r.cols,
            r.reference_cost,
            r.initial_cost,
            r.final_cost,
            oracle,
            r.rcm_cost,
            r.hillclimb_cost,
            r.recovery_score,
            r.wall_time,
            r.seed
        );
    }
    out
}

fn bench(args: BenchArgs) -> Result<()> {
    let mut cfg = RunConfig::resolve("bench", &args.common)?;
    cfg.apply_tuning(&args.tuning)?;
    let selected: Vec<Dataset> = match &args.dataset {
        Some(name) => vec![name.parse()?],
        None => Dataset::ALL.to_vec(),
    };
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
    }
    let mut rows = Vec::new();
    for dataset in selected {
        let (a, truth) = match datasets::load(dataset, args.data_dir.as_deref(), cfg.seed) {
            Ok(loaded) => loaded,
            Err(e @ Error::Input(_)) if args.dataset.is_none() => {
                eprintln!("skipping {}: {e}", dataset.name());
                continue;
            }
            Err(e) => return Err(e),
        };
        let (row, svg) = bench_dataset(dataset.name(), &a, truth.as_ref(), &cfg)?;
        eprintln!(
            "{}: {} -> {} (reference {}), recovery {:.3}, {:.2}s",
            row.dataset,
            row.initial_cost,
            row.final_cost,
            row.reference_cost,
            row.recovery_score,
            row.wall_time
        );
        if let Some(dir) = &args.out_dir {
            write_svg(&svg, dir.join(format!("{}.svg", dataset.name())))?;
        }
        rows.push(row);
    }
    let csv = summary_csv(&rows);
    if let Some(dir) = &args.out_dir {
        fs::write(dir.join("summary.csv"), &csv)?;
        fs::write(dir.join("config.json"), to_json(&cfg)?)?;
    }
    emit(args.common.out.as_deref(), &csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_and_flags_merge() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"pop_size": 12, "generations": 7, "seed": 4}"#).unwrap();
        let common = Common {
            config: Some(path),
            seed: Some(9),
            out: None,
        };
        let mut cfg = RunConfig::resolve("solve", &common).unwrap();
        cfg.apply_tuning(&Tuning {
            generations: Some(3),
            lv_form: Some("conventional".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.pop_size, 12);
        assert_eq!(cfg.generations, 3);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.lv_form, LvForm::Conventional);
        assert_eq!(cfg.bbo().pop_size, 12);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"popsize": 12}"#).unwrap();
        let common = Common {
            config: Some(path),
            seed: None,
            out: None,
        };
        assert!(matches!(
            RunConfig::resolve("solve", &common),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn run_config_round_trips() {
        let cfg = RunConfig::default();
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }
}
