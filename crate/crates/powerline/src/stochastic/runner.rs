//! Parallel evaluation of the simulator over collocation nodes or samples.
//!
//! Every node/sample is an independent deterministic run; rayon schedules
//! them across workers and results are collected back in node order, so the
//! reduction (and therefore every downstream CSV byte) does not depend on
//! the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simulation::{failure_indicator, run_deterministic, FailureRecord, SimulationConfig};
use crate::stochastic::grid::{CollocationGrid, QoIEnsemble, QoIKind};
use crate::stochastic::space::ParamName;

/// Scalar series of one run, with the failure indicator padded to the full
/// horizon.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub theta_max: Vec<f64>,
    pub phi_max: Vec<f64>,
    pub h_b: Vec<f64>,
    pub failure: Option<FailureRecord>,
    pub error: Option<String>,
}

/// All three ensembles of a study, aligned per the truncation rules:
/// temperature/damage series are cut at the ensemble's earliest failure,
/// the Bernoulli indicator spans the full horizon.
#[derive(Debug, Clone)]
pub struct EnsembleOutput {
    pub theta: QoIEnsemble,
    pub phi: QoIEnsemble,
    pub h_b: QoIEnsemble,
    pub failures: Vec<Option<FailureRecord>>,
    /// Errors from runs whose solvers broke down, with node indices.
    pub run_errors: Vec<(usize, String)>,
}

/// Applies parameter values to a copy of the base configuration.
pub fn apply_parameters(
    base: &SimulationConfig,
    names: &[ParamName],
    values: &[f64],
) -> SimulationConfig {
    let mut cfg = base.clone();
    for (name, &value) in names.iter().zip(values) {
        name.apply(&mut cfg, value);
    }
    cfg
}

/// One deterministic run reduced to its study outputs.
pub fn run_node(cfg: &SimulationConfig) -> Result<RunOutput> {
    let result = run_deterministic(cfg)?;
    let h_b = failure_indicator(&result, cfg);
    Ok(RunOutput {
        theta_max: result.theta_max,
        phi_max: result.phi_max,
        h_b,
        failure: result.failure,
        error: result.error,
    })
}

/// Runs the simulator at every collocation node, in parallel.
pub fn evaluate_ensemble(
    base: &SimulationConfig,
    grid: &CollocationGrid,
    jobs: Option<usize>,
    progress: bool,
) -> Result<EnsembleOutput> {
    base.validate()?;
    let names: Vec<ParamName> = grid.dims().iter().map(|p| p.name).collect();
    let configs: Vec<SimulationConfig> = (0..grid.n_nodes())
        .map(|p| apply_parameters(base, &names, &grid.node_values(p)))
        .collect();
    let outputs = run_many(&configs, jobs, progress)?;
    Ok(collect_ensembles(base, outputs))
}

/// Evaluates a list of configurations in parallel, preserving order.
pub fn run_many(
    configs: &[SimulationConfig],
    jobs: Option<usize>,
    progress: bool,
) -> Result<Vec<RunOutput>> {
    let total = configs.len();
    let done = AtomicUsize::new(0);
    let tick = (total / 20).max(1);
    let work = || -> Result<Vec<RunOutput>> {
        configs
            .par_iter()
            .map(|cfg| {
                let out = run_node(cfg);
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if progress && (d % tick == 0 || d == total) {
                    eprintln!("  {d}/{total} runs complete");
                }
                out
            })
            .collect()
    };
    match jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
            pool.install(work)
        }
        None => work(),
    }
}

/// Assembles run outputs into aligned ensembles.
pub fn collect_ensembles(base: &SimulationConfig, outputs: Vec<RunOutput>) -> EnsembleOutput {
    let n_steps = base.n_steps();
    // Earliest end across runs (failure truncation or breakdown).
    let min_len = outputs
        .iter()
        .map(|o| o.theta_max.len())
        .min()
        .unwrap_or(0);
    let times: Vec<f64> = (1..=min_len).map(|k| k as f64 * base.dt).collect();
    let full_times: Vec<f64> = (1..=n_steps).map(|k| k as f64 * base.dt).collect();

    let mut theta = Vec::with_capacity(outputs.len());
    let mut phi = Vec::with_capacity(outputs.len());
    let mut h_b = Vec::with_capacity(outputs.len());
    let mut failures = Vec::with_capacity(outputs.len());
    let mut run_errors = Vec::new();
    for (i, out) in outputs.into_iter().enumerate() {
        let mut th = out.theta_max;
        let mut ph = out.phi_max;
        th.truncate(min_len);
        ph.truncate(min_len);
        theta.push(th);
        phi.push(ph);
        h_b.push(out.h_b);
        failures.push(out.failure);
        if let Some(e) = out.error {
            run_errors.push((i, e));
        }
    }
    EnsembleOutput {
        theta: QoIEnsemble {
            kind: QoIKind::ThetaMaxSeries,
            times: times.clone(),
            values: theta,
        },
        phi: QoIEnsemble {
            kind: QoIKind::PhiMaxSeries,
            times,
            values: phi,
        },
        h_b: QoIEnsemble {
            kind: QoIKind::HBSeries,
            times: full_times,
            values: h_b,
        },
        failures,
        run_errors,
    }
}
