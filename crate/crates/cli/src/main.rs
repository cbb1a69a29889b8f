use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use serde_json::json;

use reupload_lab::data::{approx_qubits_needed, Dataset, DatasetKind, DatasetSpec, Task};
use reupload_lab::lab::{plot_svg, run_experiment, ExperimentConfig, ExperimentId, PlotOptions, Profile, Table};
use reupload_lab::model::{evaluate, train, CircuitSpec, Entangler, LossKind, ModelFile, TrainConfig};
use reupload_lab::pauli::{layer_threshold, td_from_d2_bound, divergence_bound};

mod overrides;

use overrides::{layered, read_json, to_value, usage, UsageError};

const SEED_ENV: &str = "REUPLOAD_LAB_SEED";

#[derive(Parser)]
#[command(name = "reupload-lab", version, about = "Data re-uploading circuits: datasets, bounds, training and experiments")]
struct Cli {
    /// More logging (-v info, -vv debug). RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    /// Errors only.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dataset as CSV.
    Gen(GenArgs),
    /// Evaluate the divergence bound or the layer threshold.
    Bounds(BoundsArgs),
    /// Train a circuit on a CSV dataset and save the model.
    Train(TrainArgs),
    /// Score a saved model on a CSV dataset.
    Eval(EvalArgs),
    /// Run a named experiment and write results.csv and summary.json.
    Experiment(ExperimentArgs),
    /// Render an SVG from an experiment results.csv.
    Plot(PlotArgs),
    /// Check the fixed-point encoding error bound, or report the bits it needs.
    ApproxCheck(ApproxArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KindArg {
    GaussianMeans,
    Linsep,
    RegressionTanh,
    CorrelatedGaussian,
    IdxImages,
}

impl From<KindArg> for DatasetKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::GaussianMeans => Self::GaussianMeans,
            KindArg::Linsep => Self::Linsep,
            KindArg::RegressionTanh => Self::RegressionTanh,
            KindArg::CorrelatedGaussian => Self::CorrelatedGaussian,
            KindArg::IdxImages => Self::IdxImages,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum TaskArg {
    Classification,
    Regression,
}

impl From<TaskArg> for Task {
    fn from(t: TaskArg) -> Self {
        match t {
            TaskArg::Classification => Task::Classification,
            TaskArg::Regression => Task::Regression,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum EntanglerArg {
    RingCnot,
    None,
}

impl From<EntanglerArg> for Entangler {
    fn from(e: EntanglerArg) -> Self {
        match e {
            EntanglerArg::RingCnot => Entangler::RingCnot,
            EntanglerArg::None => Entangler::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum LossArg {
    CrossEntropy,
    Mse,
}

impl From<LossArg> for LossKind {
    fn from(l: LossArg) -> Self {
        match l {
            LossArg::CrossEntropy => LossKind::CrossEntropy,
            LossArg::Mse => LossKind::Mse,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    /// Dataset spec as JSON; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    #[arg(long)]
    images: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("what").required(true).args(["eps", "layers"]))]
struct BoundsArgs {
    #[arg(long = "n-qubits", short = 'n')]
    n_qubits: usize,
    #[arg(long, default_value_t = 0.8)]
    sigma2: f64,
    /// Report the smallest L whose bound is below this.
    #[arg(long)]
    eps: Option<f64>,
    /// Report the bound at these L (comma separated).
    #[arg(long, short = 'l', value_delimiter = ',', num_args = 1..)]
    layers: Vec<usize>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "classification")]
    task: TaskArg,
    #[arg(long = "n-qubits", short = 'n')]
    n_qubits: usize,
    /// Encoding layers; defaults to dim / (3N).
    #[arg(long, short = 'l')]
    layers: Option<usize>,
    /// Layers per repetition including zero-encoded ones; defaults to L.
    #[arg(long)]
    total_layers: Option<usize>,
    #[arg(long, short = 'p', default_value_t = 1)]
    repetitions: usize,
    #[arg(long, value_enum, default_value = "ring_cnot")]
    entangler: EntanglerArg,
    /// Zero-pad the features up to 3·N·L.
    #[arg(long)]
    pad: bool,
    /// Training config as JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config field, e.g. --set learning_rate=0.01.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long, value_enum)]
    loss: Option<LossArg>,
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    /// Model file to write.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    pad: bool,
    /// Defaults to cross-entropy for classification, MSE for regression.
    #[arg(long, value_enum)]
    loss: Option<LossArg>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: divergence, linsep_sweep, same_dataset, regression,
    /// scaling_study, counter_example, bound_sweep, approx_check.
    #[arg(long)]
    id: Option<String>,
    #[arg(long, default_value = "desk")]
    profile: String,
    /// Full experiment config as JSON; replaces --id/--profile.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Data seed.
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, short)]
    jobs: Option<usize>,
    /// Output directory; defaults to the config's or results/<id>.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Fill the seconds column (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    /// Print the resolved config and exit.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value = "L")]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, value_delimiter = ',')]
    group_by: Vec<String>,
    #[arg(long)]
    log_y: bool,
    #[arg(long)]
    overlay: Option<String>,
    #[arg(long)]
    title: Option<String>,
    /// Defaults to the input path with an .svg extension.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    /// Only print the bits needed for this accuracy at (N, L, P).
    #[arg(long, requires_all = ["n_qubits", "layers", "repetitions"])]
    delta: Option<f64>,
    #[arg(long = "n-qubits", short = 'n')]
    n_qubits: Option<usize>,
    #[arg(long, short = 'l')]
    layers: Option<usize>,
    #[arg(long, short = 'p')]
    repetitions: Option<usize>,
    #[arg(long, default_value = "desk")]
    profile: String,
    #[arg(long)]
    instances: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<u32>,
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    #[arg(long, short)]
    jobs: Option<usize>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let level = match (cli.quiet, cli.verbose) {
        (true, _) => "error",
        (false, 0) => "warn",
        (false, 1) => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();

    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Train(a) => cmd_train(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Plot(a) => cmd_plot(a),
        Command::ApproxCheck(a) => cmd_approx(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// 2 for bad input or configuration, 3 for everything that failed while running.
fn exit_code(e: &anyhow::Error) -> u8 {
    use reupload_lab::Error as E;
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(le) = cause.downcast_ref::<E>() {
            return match le {
                E::Config(_)
                | E::Parse { .. }
                | E::Format(_)
                | E::Json(_)
                | E::Domain(_)
                | E::DimensionMismatch { .. }
                | E::IndexOutOfRange { .. } => 2,
                _ => 3,
            };
        }
    }
    3
}

fn cmd_gen(a: GenArgs) -> anyhow::Result<ExitCode> {
    let mut spec: DatasetSpec = match &a.config {
        Some(p) => overrides::from_value(read_json(p)?, "dataset spec")?,
        None => {
            let (Some(kind), Some(dim), Some(size)) = (a.kind, a.dim, a.size) else {
                return Err(usage("gen needs --kind, --dim and --size (or --config)"));
            };
            DatasetSpec::new(kind.into(), dim, size, 0)
        }
    };
    if let Some(k) = a.kind {
        spec.kind = k.into();
    }
    if let Some(d) = a.dim {
        spec.dim = d;
    }
    if let Some(s) = a.size {
        spec.size = s;
    }
    if let Some(s) = a.seed {
        spec.seed = s;
    }
    if let Some(s) = a.sigma2 {
        spec.sigma2 = s;
    }
    if let Some(m) = a.margin {
        spec.margin = m;
    }
    if a.images.is_some() {
        spec.images = a.images;
    }
    if a.labels.is_some() {
        spec.labels = a.labels;
    }
    let data = spec.generate()?;
    let balance = match data.task() {
        Task::Classification => {
            let [c0, c1] = data.class_counts();
            format!("class 0: {c0}, class 1: {c1}")
        }
        Task::Regression => "regression targets".to_string(),
    };
    match &a.out {
        Some(path) => {
            data.save_csv(path).with_context(|| format!("writing {}", path.display()))?;
            println!("{} rows, dim {} ({balance}) -> {}", data.len(), data.dim(), path.display());
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            data.write_csv(&mut lock)?;
            lock.flush()?;
            eprintln!("{} rows, dim {} ({balance})", data.len(), data.dim());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(a: BoundsArgs) -> anyhow::Result<ExitCode> {
    if let Some(eps) = a.eps {
        let l = layer_threshold(a.n_qubits, a.sigma2, eps)?;
        println!("n_qubits,sigma2,eps,layer_threshold");
        println!("{},{},{},{}", a.n_qubits, a.sigma2, eps, l);
    }
    if !a.layers.is_empty() {
        println!("n_qubits,layers,sigma2,bound,trace_distance_bound");
        for &l in &a.layers {
            let b = divergence_bound(a.n_qubits, l, a.sigma2)?;
            let td = td_from_d2_bound(b)?;
            println!("{},{},{},{:.6e},{:.6e}", a.n_qubits, l, a.sigma2, b, td);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_data(path: &Path, task: Task, want_dim: usize, pad: bool) -> anyhow::Result<Dataset> {
    let data = Dataset::load_csv(path, task).with_context(|| format!("reading {}", path.display()))?;
    if data.dim() == want_dim {
        return Ok(data);
    }
    if pad && data.dim() < want_dim {
        info!("zero-padding features from {} to {}", data.dim(), want_dim);
        return Ok(data.padded(want_dim)?);
    }
    Err(usage(format!(
        "data has {} features but the circuit encodes {}{}",
        data.dim(),
        want_dim,
        if data.dim() < want_dim { " (use --pad to zero-fill)" } else { "" }
    )))
}

fn peek_dim(path: &Path, task: Task) -> anyhow::Result<usize> {
    Ok(Dataset::load_csv(path, task)
        .with_context(|| format!("reading {}", path.display()))?
        .dim())
}

fn cmd_train(a: TrainArgs) -> anyhow::Result<ExitCode> {
    let task: Task = a.task.into();
    let mut base = match &a.config {
        Some(p) => read_json(p)?,
        None => to_value(&TrainConfig::default())?,
    };
    if task == Task::Regression && a.config.is_none() {
        base["loss"] = json!("mse");
    }
    let mut cfg: TrainConfig = layered(base, &a.sets, "train config")?;
    if let Some(e) = a.epochs {
        cfg.epochs = e;
    }
    if let Some(lr) = a.learning_rate {
        cfg.learning_rate = lr;
    }
    if let Some(b) = a.batch_size {
        cfg.batch_size = b;
    }
    if let Some(l) = a.loss {
        cfg.loss = l.into();
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    cfg.validate()?;

    let layers = match a.layers {
        Some(l) => l,
        None => {
            let dim = peek_dim(&a.data, task)?;
            let per = 3 * a.n_qubits;
            if per == 0 || dim % per != 0 {
                return Err(usage(format!(
                    "cannot infer --layers: dim {dim} is not a multiple of 3·N = {per}"
                )));
            }
            dim / per
        }
    };
    let spec = CircuitSpec::new(
        a.n_qubits,
        layers,
        a.total_layers.unwrap_or(layers),
        a.repetitions,
        a.entangler.into(),
    )?;
    let data = load_data(&a.data, task, spec.data_dim(), a.pad)?;
    info!(
        "training N={} L={} L_max={} P={} on {} samples for {} epochs",
        spec.n_qubits,
        spec.encoding_layers,
        spec.total_layers,
        spec.repetitions,
        data.len(),
        cfg.epochs
    );
    let outcome = train(&data, &spec, &cfg)?;
    let metrics = evaluate(&outcome.hypothesis, &data, cfg.loss, cfg.prob_clip)?;
    ModelFile::from_hypothesis(&outcome.hypothesis, Some(metrics.error))
        .save(&a.out)
        .with_context(|| format!("writing {}", a.out.display()))?;
    let report = json!({
        "model": a.out,
        "samples": data.len(),
        "epochs": cfg.epochs,
        "best_epoch": outcome.best_epoch,
        "train": metrics,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(a: EvalArgs) -> anyhow::Result<ExitCode> {
    let file: ModelFile = overrides::from_value(read_json(&a.model)?, "model file")?;
    let h = file.to_hypothesis()?;
    let data = load_data(&a.data, h.task(), h.spec().data_dim(), a.pad)?;
    let loss = match (a.loss, h.task()) {
        (Some(l), _) => l.into(),
        (None, Task::Classification) => LossKind::CrossEntropy,
        (None, Task::Regression) => LossKind::Mse,
    };
    let m = evaluate(&h, &data, loss, TrainConfig::default().prob_clip)?;
    let report = json!({
        "samples": data.len(),
        "error": m.error,
        "accuracy": m.accuracy,
        "h_gap": m.h_gap,
        "loss": m.loss,
        "train_error": file.train_error,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn parse_id(s: &str) -> anyhow::Result<ExperimentId> {
    ExperimentId::parse(s).ok_or_else(|| {
        let names: Vec<_> = ExperimentId::ALL.iter().map(|i| i.name()).collect();
        usage(format!("unknown experiment `{s}`; expected one of {}", names.join(", ")))
    })
}

fn parse_profile(s: &str) -> anyhow::Result<Profile> {
    Profile::parse(s).ok_or_else(|| usage(format!("unknown profile `{s}`; expected paper, desk or ci")))
}

/// Runs, writes and reports; exit 3 when a built-in check fails.
fn run_and_report(cfg: &ExperimentConfig, jobs: Option<usize>, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    cfg.validate()?;
    let dir = out
        .or_else(|| cfg.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("results").join(cfg.id.name()));
    info!("running {} into {}", cfg.id.name(), dir.display());
    let output = run_experiment(cfg, jobs)?;
    output.write(&dir).with_context(|| format!("writing {}", dir.display()))?;
    for c in &output.summary.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    for (k, v) in &output.summary.notes {
        println!("note {k} = {v}");
    }
    println!("{} rows -> {}", output.summary.rows, dir.display());
    if output.all_checks_pass() {
        Ok(ExitCode::SUCCESS)
    } else {
        warn!("some checks failed");
        Ok(ExitCode::from(3))
    }
}

fn cmd_experiment(a: ExperimentArgs) -> anyhow::Result<ExitCode> {
    let mut base = match (&a.config, &a.id) {
        (Some(p), _) => read_json(p)?,
        (None, Some(id)) => to_value(&ExperimentConfig::preset(parse_id(id)?, parse_profile(&a.profile)?))?,
        (None, None) => return Err(usage("experiment needs --id or --config")),
    };
    if let Some(s) = a.seed {
        base["data"]["seed"] = json!(s);
    }
    if a.timing {
        base["record_timing"] = json!(true);
    }
    let cfg: ExperimentConfig = layered(base, &a.sets, "experiment config")?;
    if a.dry_run {
        println!("{}", serde_json::to_string_pretty(&cfg)?);
        return Ok(ExitCode::SUCCESS);
    }
    run_and_report(&cfg, a.jobs, a.out)
}

fn cmd_plot(a: PlotArgs) -> anyhow::Result<ExitCode> {
    let table = Table::load_csv(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let mut opts = PlotOptions::new(&a.x, &a.y);
    opts.group_by = a.group_by;
    opts.log_y = a.log_y;
    opts.overlay = a.overlay;
    opts.title = a.title;
    let svg = plot_svg(&table, &opts)?;
    let out = a.out.unwrap_or_else(|| a.input.with_extension("svg"));
    std::fs::write(&out, svg).with_context(|| format!("writing {}", out.display()))?;
    println!("{}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_approx(a: ApproxArgs) -> anyhow::Result<ExitCode> {
    if let Some(delta) = a.delta {
        let (n, l, p) = (a.n_qubits.unwrap(), a.layers.unwrap(), a.repetitions.unwrap());
        let q = approx_qubits_needed(n, l, p, delta)?;
        println!("n_qubits,layers,repetitions,delta,fractional_bits");
        println!("{n},{l},{p},{delta},{q}");
        return Ok(ExitCode::SUCCESS);
    }
    let mut cfg = ExperimentConfig::preset(ExperimentId::ApproxCheck, parse_profile(&a.profile)?);
    if let Some(n) = a.n_qubits {
        cfg.grid.n_qubits = vec![n];
    }
    if let Some(l) = a.layers {
        cfg.grid.layers = vec![l];
    }
    if let Some(p) = a.repetitions {
        cfg.grid.repetitions = vec![p];
    }
    if let Some(k) = a.instances {
        cfg.instances = k;
    }
    if !a.q.is_empty() {
        cfg.q_values = a.q;
    }
    if let Some(s) = a.seed {
        cfg.seeds = vec![s];
    }
    run_and_report(&cfg, a.jobs, a.out)
}
