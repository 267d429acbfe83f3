use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::coalesce::{simulate_coalesce, CoalesceParams};
use super::record::{summarize, ExperimentConfig, RunRecord, TrialRecord, ZLaw};
use crate::certify::{cheeger_bounds_graph, densest_subgraph};
use crate::decompose::{attached_forest, tail_statistics, two_core_map};
use crate::error::{Error, Result};
use crate::genmodels::{
    giant_constants, sample_cnm, sample_gnm, sample_kernel_degrees, sample_pairing, DegreeSequence,
};
use crate::mixing::{mixing_time_exact, uniform_mixing_time, MAX_DENSE_STATES};
use crate::multigraph::{diameter, double_sweep_lower_bound, giant_component_map, is_simple, longest_2path, Multigraph};
use crate::rng::substream_seed;
use crate::strip::{severe_strip, StripParams};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "COREMIX_THREADS";

/// Names accepted by [`run_experiment`].
pub const EXPERIMENTS: [&str; 7] = [
    "giant_sizes",
    "scaling_mixing",
    "diameter",
    "tails",
    "kernel_expansion",
    "simple_fraction",
    "coalesce",
];

fn pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("{THREADS_ENV} must be a nonnegative integer, got {s:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

type Values = BTreeMap<String, f64>;

/// Runs `f(size, seed)` for every (size, trial) pair on the worker pool. Trial
/// `t` at size index `i` gets seed `hash(base, i * trials + t)`; results come
/// back in (size, trial) order whatever the scheduling.
fn run_trials<F>(cfg: &ExperimentConfig, f: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(usize, u64) -> Result<(Values, Option<String>)> + Sync,
{
    if cfg.sizes.is_empty() {
        return Err(Error::InvalidParameter("experiment needs at least one size".into()));
    }
    let jobs: Vec<(usize, usize, u64)> = cfg
        .sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &size)| {
            (0..cfg.trials).map(move |t| (size, t, substream_seed(cfg.seed, (i * cfg.trials + t) as u64)))
        })
        .collect();
    pool()?.install(|| {
        jobs.par_iter()
            .map(|&(size, trial, seed)| {
                let (values, note) = f(size, seed)?;
                Ok(TrialRecord {
                    size,
                    trial,
                    seed,
                    values,
                    note,
                })
            })
            .collect()
    })
}

fn finish(cfg: &ExperimentConfig, trials: Vec<TrialRecord>, scalars: Values, start: Instant) -> RunRecord {
    let mut rec = RunRecord {
        config: cfg.clone(),
        summary: summarize(&trials),
        trials,
        scalars,
        gates: Vec::new(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    rec.evaluate_gates();
    rec
}

fn edges_for(c: f64, n: usize) -> usize {
    (c * n as f64 / 2.0).round() as usize
}

fn bool_value(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn values<const K: usize>(pairs: [(&str, f64); K]) -> Values {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn median_of(rec_trials: &[TrialRecord], size: usize, metric: &str) -> Option<f64> {
    let mut xs: Vec<f64> = rec_trials
        .iter()
        .filter(|t| t.size == size)
        .filter_map(|t| t.values.get(metric).copied())
        .filter(|v| v.is_finite())
        .collect();
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    Some(if k % 2 == 1 { xs[k / 2] } else { 0.5 * (xs[k / 2 - 1] + xs[k / 2]) })
}

fn mean_of(trials: &[TrialRecord], metric: &str) -> Option<f64> {
    let xs: Vec<f64> = trials.iter().filter_map(|t| t.values.get(metric).copied()).collect();
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Adds `median_<metric>@<n>` per size and the max/min spread of those medians.
fn median_table(trials: &[TrialRecord], sizes: &[usize], metric: &str, scalars: &mut Values) -> Vec<f64> {
    let meds: Vec<f64> = sizes.iter().filter_map(|&n| median_of(trials, n, metric)).collect();
    for (&n, &m) in sizes.iter().zip(&meds) {
        scalars.insert(format!("median_{metric}@{n}"), m);
    }
    if meds.len() == sizes.len() && !meds.is_empty() {
        let hi = meds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = meds.iter().copied().fold(f64::INFINITY, f64::min);
        scalars.insert(format!("{metric}_max_over_min"), hi / lo);
    }
    meds
}

/// Giant, 2-core and kernel fractions of `𝒢(n, cn/2)`.
pub fn run_giant_sizes(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let constants = giant_constants(cfg.c)?;
    let trials = run_trials(cfg, |n, seed| {
        let g = sample_gnm(n, edges_for(cfg.c, n), seed)?;
        let giant = giant_component_map(&g);
        let core = two_core_map(&giant.graph);
        let core_n = core.graph.vertex_count();
        let deg2 = (0..core_n).filter(|&v| core.graph.deg(v) == 2).count();
        Ok((
            values([
                ("giant_fraction", giant.graph.vertex_count() as f64 / n as f64),
                ("core_fraction", core_n as f64 / n as f64),
                ("kernel_deg2_fraction", if core_n == 0 { 0.0 } else { deg2 as f64 / core_n as f64 }),
                ("kernel_fraction", (core_n - deg2) as f64 / n as f64),
            ]),
            None,
        ))
    })?;
    let mut scalars = values([
        ("expected_giant_fraction", constants.b),
        ("expected_core_fraction", constants.b_core),
        ("t", constants.t),
    ]);
    if let (Some(g), Some(c)) = (mean_of(&trials, "giant_fraction"), mean_of(&trials, "core_fraction")) {
        scalars.insert("mean_giant_fraction".into(), g);
        scalars.insert("mean_core_fraction".into(), c);
        scalars.insert("giant_fraction_error".into(), (g - constants.b).abs());
        scalars.insert("core_fraction_error".into(), (c - constants.b_core).abs());
    }
    Ok(finish(cfg, trials, scalars, start))
}

/// Exact `ℋ` (and `U_ε` when `eps` is set) on the giant component.
pub fn run_scaling_mixing(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    if let Some(&n) = cfg.sizes.iter().find(|&&n| n > MAX_DENSE_STATES) {
        return Err(Error::TooLarge {
            what: "exact mixing experiment",
            size: n,
            cap: MAX_DENSE_STATES,
        });
    }
    let trials = run_trials(cfg, |n, seed| {
        let g = sample_gnm(n, edges_for(cfg.c, n), seed)?;
        let giant = giant_component_map(&g).graph;
        if giant.edge_count() == 0 {
            return Ok((values([("giant_vertices", giant.vertex_count() as f64)]), Some("giant has no edges".into())));
        }
        let h = mixing_time_exact(&giant)?;
        let ln = (n as f64).ln();
        let mut v = values([
            ("giant_vertices", giant.vertex_count() as f64),
            ("H", h),
            ("H_over_log2n", h / (ln * ln)),
            ("H_over_logn", h / ln),
            ("longest_2path", longest_2path(&giant) as f64),
        ]);
        if let Some(eps) = cfg.eps {
            let u = uniform_mixing_time(&giant, eps)? as f64;
            v.insert("U".into(), u);
            v.insert("U_over_H".into(), u / h);
        }
        Ok((v, None))
    })?;
    let mut scalars = Values::new();
    median_table(&trials, &cfg.sizes, "H_over_log2n", &mut scalars);
    let per_log = median_table(&trials, &cfg.sizes, "H_over_logn", &mut scalars);
    if per_log.len() == cfg.sizes.len() && !per_log.is_empty() {
        scalars.insert("H_over_logn_last_over_first".into(), per_log[per_log.len() - 1] / per_log[0]);
    }
    if cfg.eps.is_some() {
        median_table(&trials, &cfg.sizes, "U_over_H", &mut scalars);
    }
    Ok(finish(cfg, trials, scalars, start))
}

/// Diameter of the giant component against `ln n`.
pub fn run_diameter(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let trials = run_trials(cfg, |n, seed| {
        let g = sample_gnm(n, edges_for(cfg.c, n), seed)?;
        let giant = giant_component_map(&g).graph;
        let d = diameter(&giant)?;
        Ok((
            values([
                ("diameter", d as f64),
                ("diameter_over_logn", d as f64 / (n as f64).ln()),
                ("double_sweep", double_sweep_lower_bound(&giant)? as f64),
                ("longest_2path", longest_2path(&giant) as f64),
            ]),
            None,
        ))
    })?;
    let mut scalars = Values::new();
    median_table(&trials, &cfg.sizes, "diameter_over_logn", &mut scalars);
    Ok(finish(cfg, trials, scalars, start))
}

/// Edge counts of the components of `G - E(R)` that have at least one edge.
pub fn residual_component_edges(g: &Multigraph, removed: &[bool]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut keep = vec![true; g.edge_count()];
    for (e, &r) in removed.iter().enumerate() {
        keep[e] = !r;
    }
    let rest = g.restrict(&vec![true; n], &keep).graph;
    let parts = rest.components();
    parts.edge_counts.into_iter().filter(|&m| m > 0).collect()
}

/// Exponential-tail checks on attached-tree sizes and on the components left
/// after deleting the edges of `R_N`.
pub fn run_tails(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let trials = run_trials(cfg, |n, seed| {
        let g = sample_gnm(n, edges_for(cfg.c, n), seed)?;
        let giant = giant_component_map(&g).graph;
        let core = two_core_map(&giant);
        let mut v = Values::new();
        let mut notes = Vec::new();
        if core.graph.vertex_count() > 0 {
            let forest = attached_forest(&giant, &core)?;
            match tail_statistics(&forest.tree_size, cfg.rate_min) {
                Ok(fit) => {
                    v.insert("tree_tail_pass".into(), bool_value(fit.pass));
                    if let Some(s) = fit.slope {
                        v.insert("tree_slope".into(), s);
                    }
                }
                Err(e) => notes.push(format!("tree tail skipped: {e}")),
            }
        } else {
            notes.push("tree tail skipped: empty 2-core".into());
        }
        let (rn, _) = severe_strip(&giant, &StripParams::new(cfg.n_param, substream_seed(seed, 1)))?;
        v.insert("reduced_vertices".into(), rn.graph.vertex_count() as f64);
        if rn.graph.vertex_count() == 0 {
            notes.push("component tail skipped: empty reduced core".into());
        } else {
            let mut removed = vec![false; giant.edge_count()];
            for &e in &rn.edge_map {
                removed[e] = true;
            }
            let sizes = residual_component_edges(&giant, &removed);
            v.insert("components".into(), sizes.len() as f64);
            v.insert("max_component_edges".into(), sizes.iter().copied().max().unwrap_or(0) as f64);
            match tail_statistics(&sizes, cfg.rate_min) {
                Ok(fit) => {
                    v.insert("component_tail_pass".into(), bool_value(fit.pass));
                    if let Some(s) = fit.slope {
                        v.insert("component_slope".into(), s);
                    }
                }
                Err(e) => notes.push(format!("component tail skipped: {e}")),
            }
        }
        if let (Some(&a), Some(&b)) = (v.get("tree_tail_pass"), v.get("component_tail_pass")) {
            v.insert("both_pass".into(), a * b);
        }
        Ok((v, (!notes.is_empty()).then(|| notes.join("; "))))
    })?;
    let mut scalars = Values::new();
    for metric in ["tree_tail_pass", "component_tail_pass", "both_pass"] {
        let passed = trials.iter().filter(|t| t.values.get(metric) == Some(&1.0)).count();
        scalars.insert(format!("{metric}_count"), passed as f64);
        scalars.insert(format!("{metric}_fraction"), passed as f64 / trials.len() as f64);
    }
    let skipped = trials.iter().filter(|t| t.note.is_some()).count();
    scalars.insert("skipped_trials".into(), skipped as f64);
    Ok(finish(cfg, trials, scalars, start))
}

/// Spectral Cheeger lower bound and densest-subgraph density of pairing-model
/// kernels.
pub fn run_kernel_expansion(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let n_k = cfg
        .n_k
        .or_else(|| cfg.sizes.first().copied())
        .ok_or_else(|| Error::InvalidParameter("kernel_expansion needs n_k".into()))?;
    let mut cfg = cfg.clone();
    cfg.sizes = vec![n_k];
    let m_k = match (cfg.regular_degree, cfg.m_k) {
        (Some(d), _) => {
            if (n_k * d) % 2 == 1 || d < 3 {
                return Err(Error::InvalidParameter(format!("no {d}-regular multigraph on {n_k} vertices")));
            }
            n_k * d / 2
        }
        (None, Some(m)) => m,
        (None, None) => return Err(Error::InvalidParameter("kernel_expansion needs m_k or regular_degree".into())),
    };
    if 2 * m_k < 3 * n_k {
        return Err(Error::InvalidParameter(format!("need 2 m_k >= 3 n_k, got n_k={n_k}, m_k={m_k}")));
    }
    let trials = run_trials(&cfg, |_, seed| {
        let degrees = match cfg.regular_degree {
            Some(d) => DegreeSequence(vec![d; n_k]),
            None => sample_kernel_degrees(n_k, m_k, seed)?,
        };
        let g = sample_pairing(&degrees, substream_seed(seed, 1))?;
        let dens = densest_subgraph(&g)?;
        let mut v = values([
            ("density", dens.density),
            ("max_degree", g.max_degree().unwrap_or(0) as f64),
            ("connected", bool_value(g.is_connected())),
        ]);
        let mut note = None;
        if g.is_connected() {
            let ch = cheeger_bounds_graph(&g)?;
            v.insert("spectral_lower".into(), ch.lower);
            v.insert("sweep_upper".into(), ch.upper);
        } else {
            v.insert("spectral_lower".into(), 0.0);
            note = Some("pairing graph is disconnected, so Φ = 0".into());
        }
        Ok((v, note))
    })?;
    let mut scalars = Values::new();
    let count = |f: &dyn Fn(&TrialRecord) -> bool| trials.iter().filter(|t| f(t)).count() as f64;
    let lower = |t: &TrialRecord| t.values.get("spectral_lower").copied().unwrap_or(0.0);
    scalars.insert("spectral_lower_gt_0.01".into(), count(&|t| lower(t) > 0.01));
    scalars.insert("spectral_lower_gt_0.02".into(), count(&|t| lower(t) > 0.02));
    scalars.insert(
        "density_le_1.2".into(),
        count(&|t| t.values.get("density").is_some_and(|&d| d <= 1.2)),
    );
    scalars.insert("m_k".into(), m_k as f64);
    Ok(finish(&cfg, trials, scalars, start))
}

/// Fraction of simple `𝒞(n, cn/2)` samples against the Poisson limits.
pub fn run_simple_fraction(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let trials = run_trials(cfg, |n, seed| {
        let g = sample_cnm(n, edges_for(cfg.c, n), seed)?;
        let loops = g.loop_count();
        let canon = g.canonical_edges();
        let repeats = canon.windows(2).filter(|w| w[0] == w[1] && w[0].0 != w[0].1).count();
        Ok((
            values([
                ("simple", bool_value(is_simple(&g))),
                ("loops", loops as f64),
                ("repeated_edges", repeats as f64),
            ]),
            None,
        ))
    })?;
    let mut scalars = Values::new();
    for &n in &cfg.sizes {
        let m = edges_for(cfg.c, n) as f64;
        let nf = n as f64;
        let mu1 = m / nf;
        let pairs = m * (m - 1.0) / 2.0;
        let mu2_stated = pairs / (nf * nf);
        // two unordered edges coincide with probability 2/n² (either orientation)
        let mu2_pairs = 2.0 * pairs / (nf * nf);
        let hits = trials.iter().filter(|t| t.size == n && t.values["simple"] == 1.0).count();
        let total = trials.iter().filter(|t| t.size == n).count();
        scalars.insert(format!("simple_fraction@{n}"), hits as f64 / total as f64);
        scalars.insert(format!("predicted_stated@{n}"), (-mu1 - mu2_stated).exp());
        scalars.insert(format!("predicted_unordered_pairs@{n}"), (-mu1 - mu2_pairs).exp());
    }
    Ok(finish(cfg, trials, scalars, start))
}

/// The coalescing branching process.
pub fn run_coalesce(cfg: &ExperimentConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let base = CoalesceParams {
        n: 0,
        delta: cfg.delta.unwrap_or(0.01),
        z_mean: cfg.z_mean.unwrap_or(0.1),
        z_law: cfg.z_law.unwrap_or(ZLaw::Geometric),
        initial_mean: cfg.initial_mean.unwrap_or(2.0),
    };
    let trials = run_trials(cfg, |n, seed| {
        let params = CoalesceParams { n, ..base };
        let out = simulate_coalesce(&params, seed)?;
        let mut v = values([
            ("marked", out.marked as f64),
            ("nontrivial_fraction", out.nontrivial_fraction(n)),
            ("components", out.final_sizes.len() as f64),
            ("max_component", out.final_sizes.first().copied().unwrap_or(0) as f64),
            ("fresh_vertices", out.fresh_vertices as f64),
            ("identifications", out.identifications as f64),
        ]);
        let mut note = None;
        match tail_statistics(&out.final_sizes, cfg.rate_min) {
            Ok(fit) => {
                v.insert("tail_pass".into(), bool_value(fit.pass));
                if let Some(s) = fit.slope {
                    v.insert("slope".into(), s);
                }
            }
            Err(e) => note = Some(format!("tail skipped: {e}")),
        }
        Ok((v, note))
    })?;
    let mut scalars = Values::new();
    let passed = trials.iter().filter(|t| t.values.get("tail_pass") == Some(&1.0)).count();
    scalars.insert("tail_pass_count".into(), passed as f64);
    scalars.insert("tail_pass_fraction".into(), passed as f64 / trials.len() as f64);
    if let Some(m) = mean_of(&trials, "nontrivial_fraction") {
        scalars.insert("mean_nontrivial_fraction".into(), m);
    }
    let worst = trials
        .iter()
        .filter_map(|t| t.values.get("nontrivial_fraction").copied())
        .fold(0.0, f64::max);
    scalars.insert("max_nontrivial_fraction".into(), worst);
    Ok(finish(cfg, trials, scalars, start))
}

/// Dispatches on `cfg.name`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunRecord> {
    cfg.validate()?;
    match cfg.name.as_str() {
        "giant_sizes" => run_giant_sizes(cfg),
        "scaling_mixing" => run_scaling_mixing(cfg),
        "diameter" => run_diameter(cfg),
        "tails" => run_tails(cfg),
        "kernel_expansion" => run_kernel_expansion(cfg),
        "simple_fraction" => run_simple_fraction(cfg),
        "coalesce" => run_coalesce(cfg),
        other => Err(Error::InvalidParameter(format!(
            "unknown experiment {other:?}; expected one of {}",
            EXPERIMENTS.join(", ")
        ))),
    }
}

pub fn exp_giant_sizes(c: f64, n: usize, trials: usize, seed: u64) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("giant_sizes", vec![n], trials, seed);
    cfg.c = c;
    run_experiment(&cfg)
}

pub fn exp_scaling_mixing(c: f64, sizes: &[usize], trials: usize, eps: Option<f64>, seed: u64) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("scaling_mixing", sizes.to_vec(), trials, seed);
    cfg.c = c;
    cfg.eps = eps;
    run_experiment(&cfg)
}

pub fn exp_diameter(c: f64, sizes: &[usize], trials: usize, seed: u64) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("diameter", sizes.to_vec(), trials, seed);
    cfg.c = c;
    run_experiment(&cfg)
}

pub fn exp_tails(c: f64, n: usize, n_param: usize, trials: usize, seed: u64) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("tails", vec![n], trials, seed);
    cfg.c = c;
    cfg.n_param = n_param;
    run_experiment(&cfg)
}

/// Pairing-model kernels on `n_k` vertices with `m_k` edges, or `d`-regular
/// when `regular_degree` is set.
pub fn exp_kernel_expansion(
    n_k: usize,
    m_k: usize,
    regular_degree: Option<usize>,
    trials: usize,
    seed: u64,
) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("kernel_expansion", vec![n_k], trials, seed);
    cfg.n_k = Some(n_k);
    cfg.m_k = Some(m_k);
    cfg.regular_degree = regular_degree;
    run_experiment(&cfg)
}

pub fn exp_simple_fraction(c: f64, n: usize, trials: usize, seed: u64) -> Result<RunRecord> {
    let mut cfg = ExperimentConfig::new("simple_fraction", vec![n], trials, seed);
    cfg.c = c;
    run_experiment(&cfg)
}

pub fn exp_coalesce(params: &CoalesceParams, trials: usize, seed: u64) -> Result<RunRecord> {
    params.validate()?;
    let mut cfg = ExperimentConfig::new("coalesce", vec![params.n], trials, seed);
    cfg.delta = Some(params.delta);
    cfg.z_mean = Some(params.z_mean);
    cfg.z_law = Some(params.z_law);
    cfg.initial_mean = Some(params.initial_mean);
    run_experiment(&cfg)
}
