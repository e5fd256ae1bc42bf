//! Tensor-product collocation grid and evaluated ensembles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::quadrature::gauss_legendre_rule;
use crate::stochastic::space::RandomParameter;

/// Hard cap on the tensor-grid dimensionality; beyond this the full tensor
/// product is impractical.
pub const MAX_DIMS: usize = 6;

/// Full tensor product of per-dimension Gauss-Legendre rules mapped onto the
/// parameter box.
#[derive(Debug, Clone)]
pub struct CollocationGrid {
    dims: Vec<RandomParameter>,
    points_per_dim: usize,
    /// Per-dimension mapped nodes (physical parameter values).
    nodes_1d: Vec<Vec<f64>>,
    /// Per-dimension standard-interval weights.
    weights_1d: Vec<f64>,
}

impl CollocationGrid {
    pub fn new(dims: Vec<RandomParameter>, points_per_dim: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::invalid("stochastic.space", "need at least one parameter"));
        }
        if dims.len() > MAX_DIMS {
            return Err(Error::invalid(
                "stochastic.space",
                format!(
                    "{} dimensions exceed the tensor-grid cap of {MAX_DIMS}",
                    dims.len()
                ),
            ));
        }
        let (std_nodes, weights_1d) = gauss_legendre_rule(points_per_dim)?;
        let nodes_1d = dims
            .iter()
            .map(|p| std_nodes.iter().map(|&eta| p.map_from_standard(eta)).collect())
            .collect();
        Ok(CollocationGrid {
            dims,
            points_per_dim,
            nodes_1d,
            weights_1d,
        })
    }

    pub fn dims(&self) -> &[RandomParameter] {
        &self.dims
    }

    pub fn n_dims(&self) -> usize {
        self.dims.len()
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    /// Total number of collocation nodes, `n^k`.
    pub fn n_nodes(&self) -> usize {
        self.points_per_dim.pow(self.n_dims() as u32)
    }

    /// Per-dimension node values (mapped to parameter space).
    pub fn nodes_1d(&self, dim: usize) -> &[f64] {
        &self.nodes_1d[dim]
    }

    /// Per-dimension standard weights (sum to 2).
    pub fn weights_1d(&self) -> &[f64] {
        &self.weights_1d
    }

    /// Decomposes a flat node index into per-dimension indices
    /// (last dimension varies fastest).
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let n = self.points_per_dim;
        let k = self.n_dims();
        let mut idx = vec![0; k];
        let mut rem = flat;
        for d in (0..k).rev() {
            idx[d] = rem % n;
            rem /= n;
        }
        idx
    }

    /// Parameter values at a flat node index.
    pub fn node_values(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(d, &i)| self.nodes_1d[d][i])
            .collect()
    }

    /// Probability-measure weight of a node: the product over dimensions of
    /// `w * rho * J = w / 2`. These sum to one over the grid.
    pub fn probability_weight(&self, flat: usize) -> f64 {
        self.multi_index(flat)
            .iter()
            .map(|&i| 0.5 * self.weights_1d[i])
            .product()
    }
}

/// Which scalar series an ensemble tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QoIKind {
    ThetaMaxSeries,
    PhiMaxSeries,
    HBSeries,
}

/// Time-resolved quantity of interest evaluated at every grid node:
/// `values[node][time]`.
#[derive(Debug, Clone)]
pub struct QoIEnsemble {
    pub kind: QoIKind,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl QoIEnsemble {
    /// Checks the ensemble covers `expected_nodes` nodes with equal-length,
    /// finite series; reports the offending node indices otherwise.
    pub fn validate(&self, expected_nodes: usize) -> Result<()> {
        if self.values.len() != expected_nodes {
            return Err(Error::invalid(
                "ensemble",
                format!(
                    "expected {expected_nodes} node series, got {}",
                    self.values.len()
                ),
            ));
        }
        let n_t = self.times.len();
        let bad: Vec<usize> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.len() != n_t || v.iter().any(|x| !x.is_finite()))
            .map(|(i, _)| i)
            .collect();
        if !bad.is_empty() {
            return Err(Error::invalid(
                "ensemble",
                format!("missing or non-finite series at nodes {bad:?}"),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::space::ParamName;

    fn unit_param(name: ParamName) -> RandomParameter {
        RandomParameter::new(name, 0.0, 1.0).unwrap()
    }

    #[test]
    fn node_count_is_tensor_product() {
        let dims = vec![unit_param(ParamName::GC), unit_param(ParamName::WB)];
        let grid = CollocationGrid::new(dims, 5).unwrap();
        assert_eq!(grid.n_nodes(), 25);
        let dims3 = vec![
            unit_param(ParamName::GC),
            unit_param(ParamName::WB),
            unit_param(ParamName::IB),
        ];
        assert_eq!(CollocationGrid::new(dims3, 5).unwrap().n_nodes(), 125);
    }

    #[test]
    fn dimension_cap() {
        let dims: Vec<_> = ParamName::ALL[..7].iter().map(|&n| unit_param(n)).collect();
        assert!(CollocationGrid::new(dims, 5).is_err());
        let dims: Vec<_> = ParamName::ALL[..6].iter().map(|&n| unit_param(n)).collect();
        assert!(CollocationGrid::new(dims, 5).is_ok());
    }

    #[test]
    fn probability_weights_partition_unity() {
        let dims = vec![
            unit_param(ParamName::GC),
            unit_param(ParamName::WB),
            unit_param(ParamName::IB),
        ];
        let grid = CollocationGrid::new(dims, 4).unwrap();
        let total: f64 = (0..grid.n_nodes()).map(|i| grid.probability_weight(i)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn multi_index_round_trip() {
        let dims = vec![unit_param(ParamName::GC), unit_param(ParamName::WB)];
        let grid = CollocationGrid::new(dims, 3).unwrap();
        for flat in 0..9 {
            let idx = grid.multi_index(flat);
            assert_eq!(idx[0] * 3 + idx[1], flat);
        }
    }

    #[test]
    fn ensemble_validation_reports_holes() {
        let e = QoIEnsemble {
            kind: QoIKind::PhiMaxSeries,
            times: vec![0.0, 1.0],
            values: vec![vec![0.0, 1.0], vec![0.0]],
        };
        let err = e.validate(2).unwrap_err().to_string();
        assert!(err.contains('1'), "should name node 1: {err}");
        assert!(e.validate(3).is_err());
    }
}
