use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::aggregate::{aggregate, PointSummary};
use super::config::{ExperimentConfig, ExperimentId};
use super::record::{GridPoint, RunRecord, Table};
use crate::data::generators::{class_means, empirical_feature_variance};
use crate::data::quantize::{approx_error_bound, quantize};
use crate::data::rng::{derive_seed, Rng, Stream};
use crate::data::{Dataset, DatasetKind, DatasetSpec};
use crate::error::{Error, Result};
use crate::model::{evaluate, train, CircuitSpec, Hypothesis, ParameterTensor, TrainConfig};
use crate::pauli::{
    d2, d2_to_mixed_from_pauli, expected_observable_monte_carlo, expected_state_analytic,
    expected_state_monte_carlo, layer_threshold, divergence_bound, GaussianSpec,
};
use crate::qsim::{DensityMatrix, Observable};
use crate::data::Task;

/// Extra allowance for Monte-Carlo estimates in the built-in checks.
pub const MC_SLACK: f64 = 0.02;
/// Tolerance on exact inequalities.
pub const EXACT_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub experiment: ExperimentId,
    pub rows: usize,
    pub points: Vec<PointSummary>,
    pub checks: Vec<Check>,
    pub notes: BTreeMap<String, f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub table: Table,
    /// Parsed rows for experiments that use the run-record schema.
    pub records: Vec<RunRecord>,
    pub summary: Summary,
}

impl ExperimentOutput {
    pub fn all_checks_pass(&self) -> bool {
        self.summary.checks.iter().all(|c| c.passed)
    }

    /// Writes `results.csv` and `summary.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        self.table.save_csv(dir.join("results.csv"))?;
        let mut json = serde_json::to_string_pretty(&self.summary)?;
        json.push('\n');
        std::fs::write(dir.join("summary.json"), json)?;
        Ok(())
    }
}

fn push_unique(points: &mut Vec<GridPoint>, n: usize, l: usize, p: usize, m: usize) {
    let gp = GridPoint {
        n_qubits: n,
        layers: l,
        repetitions: p,
        train_size: m,
    };
    if !points.contains(&gp) {
        points.push(gp);
    }
}

/// Grid points of an experiment in output order.
///
/// * `divergence`: each `N` at `P = 1`, then each `P` at `N = 1`, all over `L`.
/// * `same_dataset`: `n_qubits` and `layers` are zipped into pairs.
/// * `scaling_study`: each train size at the first `P`, then each `P` at the
///   largest train size.
/// * `bound_sweep`: `N × L` at `P = 1`.
/// * the rest: `N × P × L` at the first train size.
pub fn grid_points(cfg: &ExperimentConfig) -> Result<Vec<GridPoint>> {
    let g = &cfg.grid;
    let m0 = g.train_sizes[0];
    let mut pts = Vec::new();
    match cfg.id {
        ExperimentId::Divergence => {
            for &n in &g.n_qubits {
                for &l in &g.layers {
                    push_unique(&mut pts, n, l, 1, m0);
                }
            }
            for &p in &g.repetitions {
                for &l in &g.layers {
                    push_unique(&mut pts, 1, l, p, m0);
                }
            }
        }
        ExperimentId::LinsepSweep | ExperimentId::CounterExample | ExperimentId::Regression => {
            for &n in &g.n_qubits {
                for &p in &g.repetitions {
                    for &l in &g.layers {
                        push_unique(&mut pts, n, l, p, m0);
                    }
                }
            }
        }
        ExperimentId::SameDataset => {
            if g.n_qubits.len() != g.layers.len() {
                return Err(Error::Config(
                    "same_dataset pairs n_qubits with layers; the lists must have equal length".into(),
                ));
            }
            for (&n, &l) in g.n_qubits.iter().zip(&g.layers) {
                if 3 * n * l != cfg.data.dim {
                    return Err(Error::Config(format!(
                        "same_dataset point N={n}, L={l} does not encode data.dim = {}",
                        cfg.data.dim
                    )));
                }
            }
            for &p in &g.repetitions {
                for (&n, &l) in g.n_qubits.iter().zip(&g.layers) {
                    push_unique(&mut pts, n, l, p, m0);
                }
            }
        }
        ExperimentId::ScalingStudy => {
            let (n, l, p0) = (g.n_qubits[0], g.layers[0], g.repetitions[0]);
            let m_max = *g.train_sizes.iter().max().expect("nonempty");
            for &m in &g.train_sizes {
                push_unique(&mut pts, n, l, p0, m);
            }
            for &p in &g.repetitions {
                push_unique(&mut pts, n, l, p, m_max);
            }
        }
        ExperimentId::BoundSweep => {
            for &n in &g.n_qubits {
                for &l in &g.layers {
                    push_unique(&mut pts, n, l, 1, 0);
                }
            }
        }
        ExperimentId::ApproxCheck => {}
    }
    Ok(pts)
}

fn circuit_for(cfg: &ExperimentConfig, p: &GridPoint) -> Result<CircuitSpec> {
    let l_max = cfg.grid.total_layers.unwrap_or(p.layers).max(p.layers);
    CircuitSpec::new(p.n_qubits, p.layers, l_max, p.repetitions, cfg.entangler)
}

fn dataset_kind(id: ExperimentId) -> DatasetKind {
    match id {
        ExperimentId::Divergence => DatasetKind::GaussianMeans,
        ExperimentId::Regression => DatasetKind::RegressionTanh,
        ExperimentId::CounterExample => DatasetKind::CorrelatedGaussian,
        _ => DatasetKind::Linsep,
    }
}

/// Train and test sets for one grid point. They depend on the data seed, the
/// dimension and the train size only, so every run seed sees the same data.
pub fn datasets(cfg: &ExperimentConfig, dim: usize, train_size: usize) -> Result<(Dataset, Dataset)> {
    let make = |size: usize, seed: u64| {
        let mut spec = DatasetSpec::new(dataset_kind(cfg.id), dim, size, seed);
        spec.sigma2 = cfg.data.sigma2;
        spec.margin = cfg.data.margin;
        spec.generate()
    };
    let train_seed = derive_seed(cfg.data.seed, Stream::TrainData, ((dim as u64) << 32) | train_size as u64);
    let test_seed = derive_seed(cfg.data.seed, Stream::TestData, dim as u64);
    Ok((make(train_size, train_seed)?, make(cfg.data.test_size, test_seed)?))
}

fn train_config(cfg: &ExperimentConfig, seed: u64) -> TrainConfig {
    TrainConfig {
        seed,
        ..cfg.train.clone()
    }
}

fn score(
    cfg: &ExperimentConfig,
    h: &Hypothesis,
    train_set: &Dataset,
    test_set: &Dataset,
    rec: &mut RunRecord,
) -> Result<()> {
    let tr = evaluate(h, train_set, cfg.train.loss, cfg.train.prob_clip)?;
    let te = evaluate(h, test_set, cfg.train.loss, cfg.train.prob_clip)?;
    rec.train_error = Some(tr.error);
    rec.test_error = Some(te.error);
    rec.train_acc = tr.accuracy;
    rec.test_acc = te.accuracy;
    rec.h_gap_train = Some(tr.h_gap);
    rec.h_gap_test = Some(te.h_gap);
    Ok(())
}

/// Mean over both classes of `D₂(ρ̄_c ‖ ρ_I)`, with `ρ̄_c` the Monte-Carlo
/// average encoded state of class `c`.
fn class_divergence(cfg: &ExperimentConfig, spec: &CircuitSpec, theta: &ParameterTensor) -> Result<f64> {
    let dim = spec.data_dim();
    let mixed = DensityMatrix::maximally_mixed(spec.n_qubits);
    let mut total = 0.0;
    for c in 0..2 {
        let gauss = GaussianSpec::isotropic(class_means(dim, c), cfg.data.sigma2)?;
        let seed = derive_seed(cfg.data.seed, Stream::MonteCarlo, ((dim as u64) << 1) | c as u64);
        let rho = expected_state_monte_carlo(spec, &gauss, theta, cfg.data.pool_size, seed)?;
        total += d2(&rho, &mixed)?;
    }
    Ok(total / 2.0)
}

struct RunOut {
    record: RunRecord,
    sigma2_effective: Option<(usize, f64)>,
}

fn run_one(cfg: &ExperimentConfig, point: &GridPoint, seed: u64) -> Result<RunOut> {
    let start = Instant::now();
    let spec = circuit_for(cfg, point)?;
    let dim = spec.data_dim();
    let mut rec = RunRecord::empty(cfg.id, point, seed);
    let mut sigma2_effective = None;
    let tc = train_config(cfg, seed);
    if cfg.id == ExperimentId::Divergence {
        let init = ParameterTensor::random_normal(&spec, &mut Rng::derived(seed, Stream::Init, 0));
        rec.div_pre = Some(class_divergence(cfg, &spec, &init)?);
        rec.bound = Some(divergence_bound(point.n_qubits, point.layers, cfg.data.sigma2)?);
        if dim == 0 {
            // Nothing to encode or train on: the state stays |0⟩.
            rec.div_post = rec.div_pre;
        } else {
            let (train_set, test_set) = datasets(cfg, dim, point.train_size)?;
            let out = train(&train_set, &spec, &tc)?;
            score(cfg, &out.hypothesis, &train_set, &test_set, &mut rec)?;
            rec.div_post = Some(class_divergence(cfg, &spec, out.hypothesis.params())?);
        }
    } else {
        let (train_set, test_set) = datasets(cfg, dim, point.train_size)?;
        let out = train(&train_set, &spec, &tc)?;
        score(cfg, &out.hypothesis, &train_set, &test_set, &mut rec)?;
        if cfg.id != ExperimentId::CounterExample {
            let s2 = empirical_feature_variance(&train_set);
            sigma2_effective = Some((dim, s2));
            rec.bound = Some(divergence_bound(point.n_qubits, point.layers, s2)?);
        }
    }
    if cfg.record_timing {
        rec.seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(RunOut {
        record: rec,
        sigma2_effective,
    })
}

/// Runs an experiment on a pool of `jobs` workers (all cores when `None`).
/// Output is identical for every worker count.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cfg.id {
        ExperimentId::BoundSweep => run_bound_sweep(cfg),
        ExperimentId::ApproxCheck => run_approx_check(cfg),
        _ => run_records(cfg),
    })
}

fn run_records(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let points = grid_points(cfg)?;
    let tasks: Vec<(GridPoint, u64)> = points
        .iter()
        .flat_map(|p| cfg.seeds.iter().map(move |&s| (*p, s)))
        .collect();
    log::info!("{}: {} runs over {} grid points", cfg.id.name(), tasks.len(), points.len());
    let outs: Vec<RunOut> = tasks
        .par_iter()
        .map(|(p, s)| {
            let r = run_one(cfg, p, *s);
            log::debug!("{} N={} L={} P={} M={} seed={s} done", cfg.id.name(), p.n_qubits, p.layers, p.repetitions, p.train_size);
            r
        })
        .collect::<Result<_>>()?;
    let mut notes = BTreeMap::new();
    for o in &outs {
        if let Some((dim, s2)) = o.sigma2_effective {
            notes.insert(format!("sigma2_effective_D{dim:03}"), s2);
        }
    }
    let records: Vec<RunRecord> = outs.into_iter().map(|o| o.record).collect();
    let checks = record_checks(cfg, &records)?;
    Ok(ExperimentOutput {
        table: Table::from_records(&records),
        summary: Summary {
            experiment: cfg.id,
            rows: records.len(),
            points: aggregate(&records),
            checks,
            notes,
        },
        records,
    })
}

fn record_checks(cfg: &ExperimentConfig, records: &[RunRecord]) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let unit = |v: Option<f64>| v.is_none_or(|x| (-EXACT_SLACK..=1.0 + EXACT_SLACK).contains(&x));
    let bad = records
        .iter()
        .filter(|r| !(unit(r.train_error) && unit(r.test_error)))
        .count();
    checks.push(Check::new("errors_in_unit_interval", bad == 0, format!("{bad} violations")));
    if cfg.id == ExperimentId::Divergence {
        let bad = records
            .iter()
            .filter(|r| {
                [r.div_pre, r.div_post]
                    .iter()
                    .flatten()
                    .any(|&d| d < -EXACT_SLACK || d > r.n_qubits as f64 + EXACT_SLACK)
            })
            .count();
        checks.push(Check::new("divergence_in_range", bad == 0, format!("{bad} violations")));
    }
    if matches!(cfg.id, ExperimentId::LinsepSweep | ExperimentId::Regression) {
        // Records deep enough for the concentration guarantee at ε = 0.1.
        let eps = 0.1;
        let (mut applicable, mut bad) = (0, 0);
        for r in records {
            let spec = circuit_for(cfg, &r.point())?;
            let (train_set, _) = datasets(cfg, spec.data_dim(), r.train_size)?;
            let s2 = empirical_feature_variance(&train_set);
            if r.layers >= layer_threshold(r.n_qubits, s2, eps)? {
                applicable += 1;
                if r.h_gap_test.is_some_and(|g| g > eps + 0.05) {
                    bad += 1;
                }
            }
        }
        checks.push(Check::new(
            "concentration_beyond_threshold",
            bad == 0,
            format!("{applicable} records past the layer threshold, {bad} violations"),
        ));
    }
    Ok(checks)
}

pub const BOUND_SWEEP_COLUMNS: [&str; 12] = [
    "N",
    "L",
    "seed",
    "sigma2",
    "d2_analytic",
    "d2_mc",
    "bound",
    "threshold",
    "h_mc",
    "h_gap",
    "bound_ok",
    "concentration_ok",
];

struct BoundRow {
    n: usize,
    l: usize,
    seed: u64,
    d2_analytic: f64,
    d2_mc: f64,
    bound: f64,
    threshold: usize,
    h_mc: f64,
}

fn bound_row(cfg: &ExperimentConfig, p: &GridPoint, seed: u64) -> Result<BoundRow> {
    let spec = CircuitSpec::unpadded(p.n_qubits, p.layers, 1, cfg.entangler)?;
    let dim = spec.data_dim();
    let theta = ParameterTensor::random_normal(&spec, &mut Rng::derived(seed, Stream::Init, 0));
    let mut rng = Rng::derived(seed, Stream::Instance, ((p.n_qubits as u64) << 16) | p.layers as u64);
    let means: Vec<f64> = (0..dim).map(|_| rng.uniform_range(0.0, TAU)).collect();
    let gauss = GaussianSpec::isotropic(means, cfg.data.sigma2)?;
    let beta = expected_state_analytic(&spec, &gauss, &theta)?;
    let mc_seed = derive_seed(seed, Stream::MonteCarlo, ((p.n_qubits as u64) << 16) | p.layers as u64);
    let rho = expected_state_monte_carlo(&spec, &gauss, &theta, cfg.data.pool_size, mc_seed)?;
    let h0 = Observable::h0(p.n_qubits);
    let h_mc = expected_observable_monte_carlo(&spec, &gauss, &theta, &h0, cfg.data.pool_size, mc_seed)?;
    Ok(BoundRow {
        n: p.n_qubits,
        l: p.layers,
        seed,
        d2_analytic: d2_to_mixed_from_pauli(&beta),
        d2_mc: d2(&rho, &DensityMatrix::maximally_mixed(p.n_qubits))?,
        bound: divergence_bound(p.n_qubits, p.layers, cfg.data.sigma2)?,
        threshold: layer_threshold(p.n_qubits, cfg.data.sigma2, cfg.epsilon)?,
        h_mc,
    })
}

/// Analytic and sampled divergence of the expected encoded state against the
/// closed-form ceiling, plus the sampled output gap once `L` passes the layer
/// threshold.
fn run_bound_sweep(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let points = grid_points(cfg)?;
    let tasks: Vec<(GridPoint, u64)> = points
        .iter()
        .flat_map(|p| cfg.seeds.iter().map(move |&s| (*p, s)))
        .collect();
    let rows: Vec<BoundRow> = tasks
        .par_iter()
        .map(|(p, s)| bound_row(cfg, p, *s))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&BOUND_SWEEP_COLUMNS);
    let (mut bound_bad, mut conc_bad, mut conc_rows) = (0, 0, 0);
    let mut zero_layer_ok = true;
    for r in &rows {
        let bound_ok = r.d2_analytic <= r.bound + EXACT_SLACK;
        let h_gap = (r.h_mc - 0.5).abs();
        let conc_ok = r.l < r.threshold || h_gap <= cfg.epsilon + MC_SLACK;
        if r.l >= r.threshold {
            conc_rows += 1;
        }
        if r.l == 0 && (r.bound - r.n as f64).abs() > EXACT_SLACK {
            zero_layer_ok = false;
        }
        bound_bad += usize::from(!bound_ok);
        conc_bad += usize::from(!conc_ok);
        table.push(vec![
            r.n.to_string(),
            r.l.to_string(),
            r.seed.to_string(),
            cfg.data.sigma2.to_string(),
            r.d2_analytic.to_string(),
            r.d2_mc.to_string(),
            r.bound.to_string(),
            r.threshold.to_string(),
            r.h_mc.to_string(),
            h_gap.to_string(),
            bound_ok.to_string(),
            conc_ok.to_string(),
        ]);
    }
    let checks = vec![
        Check::new("analytic_d2_within_bound", bound_bad == 0, format!("{bound_bad} of {} rows exceed the bound", rows.len())),
        Check::new(
            "output_gap_past_threshold",
            conc_bad == 0,
            format!("{conc_rows} rows at or past the threshold, {conc_bad} violations"),
        ),
        Check::new("bound_at_zero_layers_is_n", zero_layer_ok, "bound(N, 0) = N"),
    ];
    Ok(ExperimentOutput {
        summary: Summary {
            experiment: cfg.id,
            rows: table.rows.len(),
            points: Vec::new(),
            checks,
            notes: BTreeMap::new(),
        },
        table,
        records: Vec::new(),
    })
}

pub const APPROX_COLUMNS: [&str; 8] = ["instance", "N", "L", "P", "q", "measured", "bound", "ratio"];

struct ApproxRow {
    n: usize,
    l: usize,
    p: usize,
    q: u32,
    measured: f64,
    bound: f64,
}

/// `|h(x) − h(x̃_q)|` on random instances against `3NLP·2^{−q}`.
fn approx_instance(cfg: &ExperimentConfig, index: usize) -> Result<Vec<ApproxRow>> {
    let g = &cfg.grid;
    let mut rng = Rng::derived(cfg.seeds[0], Stream::Instance, index as u64);
    let mut pick = |v: &[usize]| v[rng.below(v.len() as u64) as usize];
    let (n, l, p) = (pick(&g.n_qubits), pick(&g.layers), pick(&g.repetitions));
    let spec = CircuitSpec::unpadded(n, l, p, cfg.entangler)?;
    let theta = ParameterTensor::random_normal(&spec, &mut rng);
    let x: Vec<f64> = (0..spec.data_dim()).map(|_| rng.uniform_range(0.0, TAU)).collect();
    let h = Hypothesis::new(spec, theta, Task::Classification)?;
    let exact = h.value(&x, 0.0)?;
    cfg.q_values
        .iter()
        .map(|&q| {
            let (xq, _) = quantize(&x, q);
            Ok(ApproxRow {
                n,
                l,
                p,
                q,
                measured: (exact - h.value(&xq, 0.0)?).abs(),
                bound: approx_error_bound(n, l, p, q),
            })
        })
        .collect()
}

fn run_approx_check(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let per_instance: Vec<Vec<ApproxRow>> = (0..cfg.instances)
        .into_par_iter()
        .map(|i| approx_instance(cfg, i))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&APPROX_COLUMNS);
    let (mut violations, mut nonmonotone) = (0, 0);
    let mut worst: f64 = 0.0;
    for (i, rows) in per_instance.iter().enumerate() {
        let mut by_q: Vec<&ApproxRow> = rows.iter().collect();
        by_q.sort_by_key(|r| r.q);
        if by_q.windows(2).any(|w| w[1].measured > w[0].measured + 1e-12) {
            nonmonotone += 1;
        }
        for r in rows {
            let ratio = r.measured / r.bound;
            worst = worst.max(ratio);
            violations += usize::from(r.measured > r.bound);
            table.push(vec![
                i.to_string(),
                r.n.to_string(),
                r.l.to_string(),
                r.p.to_string(),
                r.q.to_string(),
                r.measured.to_string(),
                r.bound.to_string(),
                ratio.to_string(),
            ]);
        }
    }
    let checks = vec![
        Check::new("measured_within_bound", violations == 0, format!("{violations} violations")),
        Check::new("worst_ratio_at_most_one", worst <= 1.0, format!("worst ratio {worst:.3e}")),
        Check::new(
            "nonincreasing_in_q",
            nonmonotone == 0,
            format!("{nonmonotone} of {} instances not monotone", per_instance.len()),
        ),
    ];
    let mut notes = BTreeMap::new();
    notes.insert("worst_ratio".to_string(), worst);
    Ok(ExperimentOutput {
        summary: Summary {
            experiment: cfg.id,
            rows: table.rows.len(),
            points: Vec::new(),
            checks,
            notes,
        },
        table,
        records: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::config::Profile;

    fn tiny(id: ExperimentId) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::preset(id, Profile::Ci);
        cfg.seeds = vec![1];
        cfg.train.epochs = 2;
        cfg.data.test_size = 20;
        cfg.data.pool_size = 300;
        cfg.grid.train_sizes.truncate(1);
        cfg.grid.train_sizes[0] = 20;
        cfg
    }

    #[test]
    fn divergence_points_union() {
        let cfg = tiny(ExperimentId::Divergence);
        let pts = grid_points(&cfg).unwrap();
        // N ∈ {1,2} at P=1 plus P=2 at N=1, over four layer counts.
        assert_eq!(pts.len(), 12);
    }

    #[test]
    fn divergence_zero_layers_is_n() {
        let mut cfg = tiny(ExperimentId::Divergence);
        cfg.grid.layers = vec![0, 1];
        cfg.grid.repetitions = vec![1];
        let out = run_experiment(&cfg, Some(1)).unwrap();
        for r in out.records.iter().filter(|r| r.layers == 0) {
            assert!((r.div_pre.unwrap() - r.n_qubits as f64).abs() < 1e-12);
            assert_eq!(r.div_pre, r.div_post);
        }
        assert!(out.all_checks_pass());
    }

    #[test]
    fn same_dataset_validates_pairs() {
        let mut cfg = tiny(ExperimentId::SameDataset);
        cfg.grid.layers = vec![8, 4, 2, 2];
        assert!(grid_points(&cfg).is_err());
    }

    #[test]
    fn scaling_points() {
        let cfg = ExperimentConfig::preset(ExperimentId::ScalingStudy, Profile::Desk);
        let pts = grid_points(&cfg).unwrap();
        assert_eq!(pts.len(), 7);
        assert!(pts.iter().all(|p| p.layers == 8));
    }

    #[test]
    fn job_count_does_not_change_output() {
        let mut cfg = tiny(ExperimentId::LinsepSweep);
        cfg.seeds = vec![1, 2];
        cfg.grid.layers = vec![1, 2];
        cfg.grid.repetitions = vec![1];
        let a = run_experiment(&cfg, Some(1)).unwrap();
        let b = run_experiment(&cfg, Some(3)).unwrap();
        assert_eq!(a.table.to_csv_string(), b.table.to_csv_string());
        assert_eq!(a.records.len(), 4);
    }

    #[test]
    fn approx_check_small() {
        let mut cfg = tiny(ExperimentId::ApproxCheck);
        cfg.instances = 5;
        let out = run_experiment(&cfg, Some(2)).unwrap();
        assert_eq!(out.table.rows.len(), 20);
        assert!(out.summary.checks[0].passed && out.summary.checks[1].passed);
    }
}
