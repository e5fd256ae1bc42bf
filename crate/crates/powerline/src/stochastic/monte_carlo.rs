//! Seeded Monte Carlo baseline over the same parameter boxes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::simulation::SimulationConfig;
use crate::stochastic::runner::{apply_parameters, collect_ensembles, run_many};
use crate::stochastic::space::RandomParameter;

/// Monte Carlo estimates aligned with the PCM outputs: unbiased sample
/// mean/standard deviation of the tracked quantities plus the empirical
/// failure fraction.
#[derive(Debug, Clone)]
pub struct MonteCarloOutput {
    /// Truncated time axis shared by the moment series, years.
    pub times: Vec<f64>,
    pub theta_mean: Vec<f64>,
    pub theta_std: Vec<f64>,
    pub phi_mean: Vec<f64>,
    pub phi_std: Vec<f64>,
    /// Full-horizon time axis for the failure probability.
    pub full_times: Vec<f64>,
    pub p_f: Vec<f64>,
    /// The sampled parameter values, `samples[i][dim]`.
    pub samples: Vec<Vec<f64>>,
}

/// Uniform i.i.d. samples of the parameter box from a seeded stream. The
/// sequence depends only on the seed and the space, never on the worker
/// count.
pub fn sample_box(space: &[RandomParameter], n_samples: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|_| {
            space
                .iter()
                .map(|p| p.lower + (p.upper - p.lower) * rng.gen::<f64>())
                .collect()
        })
        .collect()
}

/// Seeded uniform sampling of the parameter box, one simulator run per
/// sample, reduced to moment and failure-probability series.
pub fn monte_carlo_moments(
    base: &SimulationConfig,
    space: &[RandomParameter],
    n_samples: usize,
    seed: u64,
    jobs: Option<usize>,
    progress: bool,
) -> Result<MonteCarloOutput> {
    if n_samples == 0 {
        return Err(Error::invalid("samples", "need at least one sample"));
    }
    base.validate()?;
    let names: Vec<_> = space.iter().map(|p| p.name).collect();
    let samples = sample_box(space, n_samples, seed);
    let configs: Vec<SimulationConfig> = samples
        .iter()
        .map(|values| apply_parameters(base, &names, values))
        .collect();
    let outputs = run_many(&configs, jobs, progress)?;
    let ensembles = collect_ensembles(base, outputs);

    let (theta_mean, theta_std) = sample_moments(&ensembles.theta.values);
    let (phi_mean, phi_std) = sample_moments(&ensembles.phi.values);
    let (p_f, _) = sample_moments(&ensembles.h_b.values);

    Ok(MonteCarloOutput {
        times: ensembles.theta.times.clone(),
        theta_mean,
        theta_std,
        phi_mean,
        phi_std,
        full_times: ensembles.h_b.times.clone(),
        p_f,
        samples,
    })
}

/// Column-wise unbiased sample mean and standard deviation.
fn sample_moments(values: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = values.len();
    let n_t = values.first().map_or(0, Vec::len);
    let mut mean = vec![0.0; n_t];
    for series in values {
        for (m, &v) in mean.iter_mut().zip(series) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut std = vec![0.0; n_t];
    if n > 1 {
        for series in values {
            for ((s, &v), &m) in std.iter_mut().zip(series).zip(&mean) {
                let d = v - m;
                *s += d * d;
            }
        }
        for s in &mut std {
            *s = (*s / (n as f64 - 1.0)).sqrt();
        }
    }
    (mean, std)
}
