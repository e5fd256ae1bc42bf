//! Moment, sensitivity, and failure-probability post-processing of an
//! evaluated ensemble.
//!
//! All reductions run in fixed node order so results are identical no matter
//! how the underlying simulations were scheduled.

use crate::error::{Error, Result};
use crate::stochastic::grid::{CollocationGrid, QoIEnsemble};

/// Variance floor below which sensitivity indices are reported as undefined
/// (NaN) instead of amplifying round-off noise.
pub const VARIANCE_FLOOR: f64 = 1e-30;

/// Expectation and standard deviation series by tensor quadrature:
/// `E = sum_p w_p rho J Q_p` with `rho J = 1/2` per uniform dimension.
pub fn pcm_moments(
    ensemble: &QoIEnsemble,
    grid: &CollocationGrid,
) -> Result<(Vec<f64>, Vec<f64>)> {
    ensemble.validate(grid.n_nodes())?;
    let n_t = ensemble.times.len();
    let n_nodes = grid.n_nodes();
    let weights: Vec<f64> = (0..n_nodes).map(|p| grid.probability_weight(p)).collect();

    let mut expectation = vec![0.0; n_t];
    for (p, series) in ensemble.values.iter().enumerate() {
        let w = weights[p];
        for (e, &q) in expectation.iter_mut().zip(series) {
            *e += w * q;
        }
    }
    let mut std = vec![0.0; n_t];
    for (p, series) in ensemble.values.iter().enumerate() {
        let w = weights[p];
        for ((s, &q), &e) in std.iter_mut().zip(series).zip(&expectation) {
            let d = q - e;
            *s += w * d * d;
        }
    }
    for s in &mut std {
        *s = s.max(0.0).sqrt();
    }
    Ok((expectation, std))
}

/// First-order Sobol index series for every dimension, by double quadrature
/// over the existing tensor grid (no extra simulator runs).
///
/// For dimension `j`: condition on each node of `xi_j`, average over the
/// remaining dimensions, take the quadrature variance of those conditional
/// means, and normalize by the total variance. Indices are clipped to
/// [0, 1]; time indices whose total variance underflows report NaN.
pub fn sobol_first_order(
    ensemble: &QoIEnsemble,
    grid: &CollocationGrid,
) -> Result<Vec<Vec<f64>>> {
    if grid.n_dims() < 2 {
        return Err(Error::invalid(
            "stochastic.space",
            "sensitivity analysis needs at least two dimensions",
        ));
    }
    if grid.points_per_dim() < 2 {
        return Err(Error::invalid(
            "points",
            "sensitivity analysis needs at least two points per dimension",
        ));
    }
    ensemble.validate(grid.n_nodes())?;
    let n_t = ensemble.times.len();
    let n = grid.points_per_dim();
    let k = grid.n_dims();
    let n_nodes = grid.n_nodes();

    let (expectation, std) = pcm_moments(ensemble, grid)?;
    let total_var: Vec<f64> = std.iter().map(|s| s * s).collect();
    let w1d = grid.weights_1d().to_vec();

    let mut indices = Vec::with_capacity(k);
    for j in 0..k {
        // Conditional means E[Q | xi_j = node i], one series per node of
        // dimension j.
        let mut cond = vec![vec![0.0; n_t]; n];
        for flat in 0..n_nodes {
            let idx = grid.multi_index(flat);
            // Weight over every dimension except j.
            let mut w = 1.0;
            for (d, &i) in idx.iter().enumerate() {
                if d != j {
                    w *= 0.5 * w1d[i];
                }
            }
            let target = &mut cond[idx[j]];
            for (c, &q) in target.iter_mut().zip(&ensemble.values[flat]) {
                *c += w * q;
            }
        }
        // Variance of the conditional means over xi_j.
        let mut var_j = vec![0.0; n_t];
        for (i, series) in cond.iter().enumerate() {
            let w = 0.5 * w1d[i];
            for ((v, &c), &e) in var_j.iter_mut().zip(series).zip(&expectation) {
                let d = c - e;
                *v += w * d * d;
            }
        }
        let s_j: Vec<f64> = var_j
            .iter()
            .zip(&total_var)
            .map(|(&v, &tv)| {
                if tv < VARIANCE_FLOOR {
                    f64::NAN
                } else {
                    (v / tv).clamp(0.0, 1.0)
                }
            })
            .collect();
        indices.push(s_j);
    }
    Ok(indices)
}

/// Probability-of-failure series: the expectation of the Bernoulli failure
/// indicator, clamped into [0, 1].
pub fn probability_of_failure(
    h_ensemble: &QoIEnsemble,
    grid: &CollocationGrid,
) -> Result<Vec<f64>> {
    let (mut e, _) = pcm_moments(h_ensemble, grid)?;
    for v in &mut e {
        *v = v.clamp(0.0, 1.0);
    }
    Ok(e)
}

/// Relative L2 error `||candidate - reference|| / ||reference||`.
pub fn convergence_error(candidate: &[f64], reference: &[f64]) -> Result<f64> {
    if candidate.len() != reference.len() {
        return Err(Error::invalid(
            "series",
            format!(
                "length mismatch: candidate {} vs reference {}",
                candidate.len(),
                reference.len()
            ),
        ));
    }
    let ref_norm: f64 = reference.iter().map(|r| r * r).sum::<f64>().sqrt();
    if ref_norm == 0.0 {
        return Err(Error::invalid("series", "reference norm is zero"));
    }
    let diff: f64 = candidate
        .iter()
        .zip(reference)
        .map(|(c, r)| (c - r) * (c - r))
        .sum::<f64>()
        .sqrt();
    Ok(diff / ref_norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::grid::QoIKind;
    use crate::stochastic::space::{ParamName, RandomParameter};

    fn grid_1d(lower: f64, upper: f64, n: usize) -> CollocationGrid {
        let p = RandomParameter::new(ParamName::GC, lower, upper).unwrap();
        CollocationGrid::new(vec![p], n).unwrap()
    }

    fn grid_2d_unit(n: usize) -> CollocationGrid {
        let p1 = RandomParameter::new(ParamName::GC, 0.0, 1.0).unwrap();
        let p2 = RandomParameter::new(ParamName::WB, 0.0, 1.0).unwrap();
        CollocationGrid::new(vec![p1, p2], n).unwrap()
    }

    fn eval_grid(grid: &CollocationGrid, f: impl Fn(&[f64]) -> f64) -> QoIEnsemble {
        QoIEnsemble {
            kind: QoIKind::PhiMaxSeries,
            times: vec![0.0],
            values: (0..grid.n_nodes())
                .map(|p| vec![f(&grid.node_values(p))])
                .collect(),
        }
    }

    #[test]
    fn constant_qoi() {
        let grid = grid_1d(2.0, 5.0, 4);
        let e = eval_grid(&grid, |_| 7.5);
        let (mean, std) = pcm_moments(&e, &grid).unwrap();
        assert!((mean[0] - 7.5).abs() < 1e-12);
        assert!(std[0].abs() < 1e-7);
    }

    #[test]
    fn linear_qoi_mean_is_midpoint() {
        let grid = grid_1d(3.0, 9.0, 3);
        let e = eval_grid(&grid, |x| x[0]);
        let (mean, _) = pcm_moments(&e, &grid).unwrap();
        assert!((mean[0] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_qoi_closed_form_moments() {
        // xi ~ U[0,1]: E[xi^2] = 1/3, std = sqrt(4/45).
        let grid = grid_1d(0.0, 1.0, 3);
        let e = eval_grid(&grid, |x| x[0] * x[0]);
        let (mean, std) = pcm_moments(&e, &grid).unwrap();
        assert!((mean[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((std[0] - (4.0_f64 / 45.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn additive_model_sobol() {
        // Q = xi1 + 2 xi2 on U[0,1]^2: S = (0.2, 0.8) exactly.
        let grid = grid_2d_unit(3);
        let e = eval_grid(&grid, |x| x[0] + 2.0 * x[1]);
        let s = sobol_first_order(&e, &grid).unwrap();
        assert!((s[0][0] - 0.2).abs() < 1e-12);
        assert!((s[1][0] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn product_model_sobol_interaction_remainder() {
        // Q = xi1 * xi2 on U[0,1]^2: S1 = S2 = 3/7, sum < 1.
        let grid = grid_2d_unit(3);
        let e = eval_grid(&grid, |x| x[0] * x[1]);
        let s = sobol_first_order(&e, &grid).unwrap();
        let expected = 3.0 / 7.0;
        assert!((s[0][0] - expected).abs() < 1e-12);
        assert!((s[1][0] - expected).abs() < 1e-12);
        assert!(s[0][0] + s[1][0] < 1.0);
    }

    #[test]
    fn single_active_dimension() {
        let grid = grid_2d_unit(4);
        let e = eval_grid(&grid, |x| 3.0 * x[0] + 1.0);
        let s = sobol_first_order(&e, &grid).unwrap();
        assert!((s[0][0] - 1.0).abs() < 1e-10);
        assert!(s[1][0].abs() < 1e-10);
    }

    #[test]
    fn degenerate_variance_reports_nan() {
        let grid = grid_2d_unit(3);
        let e = eval_grid(&grid, |_| 1.0);
        let s = sobol_first_order(&e, &grid).unwrap();
        assert!(s[0][0].is_nan());
        assert!(s[1][0].is_nan());
    }

    #[test]
    fn failure_probability_weight_sum_oracle() {
        // 1-D 5-point grid; the top two nodes fail from t1 onward. The
        // failure probability equals the mapped weight mass of the failing
        // region.
        let grid = grid_1d(0.0, 1.0, 5);
        let values: Vec<Vec<f64>> = (0..5)
            .map(|i| if i >= 3 { vec![0.0, 1.0] } else { vec![0.0, 0.0] })
            .collect();
        let e = QoIEnsemble {
            kind: QoIKind::HBSeries,
            times: vec![0.0, 1.0],
            values,
        };
        let pf = probability_of_failure(&e, &grid).unwrap();
        assert_eq!(pf[0], 0.0);
        let expected: f64 = (3..5).map(|i| grid.probability_weight(i)).sum();
        assert!((pf[1] - expected).abs() < 1e-12);
        assert!(pf.iter().all(|&p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn sobol_grid_requirements() {
        let grid = grid_1d(0.0, 1.0, 5);
        let e = eval_grid(&grid, |x| x[0]);
        assert!(sobol_first_order(&e, &grid).is_err());
    }

    #[test]
    fn missing_nodes_are_reported() {
        let grid = grid_1d(0.0, 1.0, 5);
        let e = QoIEnsemble {
            kind: QoIKind::PhiMaxSeries,
            times: vec![0.0],
            values: vec![vec![1.0]; 4],
        };
        assert!(pcm_moments(&e, &grid).is_err());
    }

    #[test]
    fn convergence_error_basics() {
        let r = vec![1.0, 2.0, 3.0];
        assert_eq!(convergence_error(&r, &r).unwrap(), 0.0);
        let c: Vec<f64> = r.iter().map(|v| 1.1 * v).collect();
        assert!((convergence_error(&c, &r).unwrap() - 0.1).abs() < 1e-12);
        assert!(convergence_error(&[1.0], &[0.0]).is_err());
        assert!(convergence_error(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn tensor_quadrature_exactness_high_degree() {
        // Degree-9 polynomial in each dimension is integrated exactly at
        // n = 5 (2n - 1 = 9).
        let grid = grid_2d_unit(5);
        let e = eval_grid(&grid, |x| x[0].powi(9) + x[1].powi(8));
        let (mean, _) = pcm_moments(&e, &grid).unwrap();
        let exact = 1.0 / 10.0 + 1.0 / 9.0;
        assert!((mean[0] - exact).abs() < 1e-12);
    }
}
