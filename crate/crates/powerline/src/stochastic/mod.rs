//! Probabilistic collocation over the simulator as a black box.

pub mod grid;
pub mod moments;
pub mod monte_carlo;
pub mod quadrature;
pub mod runner;
pub mod space;

pub use grid::{CollocationGrid, QoIEnsemble, QoIKind};
pub use moments::{convergence_error, pcm_moments, probability_of_failure, sobol_first_order};
pub use monte_carlo::{monte_carlo_moments, MonteCarloOutput};
pub use quadrature::gauss_legendre_rule;
pub use runner::{evaluate_ensemble, EnsembleOutput};
pub use space::{parameter_space_preset, ParamName, RandomParameter, SpacePreset};
