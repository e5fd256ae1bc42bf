//! Long-term failure simulation of overhead power transmission lines.
//!
//! A 1-D coupled thermo-electro-mechanical model — phase-field damage and
//! fatigue, steady-state heat with scenario-dependent exchange terms, and a
//! degraded-conductivity voltage equation — driven by Fourier-synthesized
//! seasonal weather, with a probabilistic collocation layer on top for
//! uncertainty moments, Sobol sensitivities, and time-resolved probability
//! of failure.
//!
//! ## Layout
//!
//! - [`loading`] — DFT synthesis of annual wind/temperature cycles, current
//!   demand, and the notched cross-sectional area profile.
//! - [`scenario`] — regional presets (high wind / wildfire / icing) and
//!   scheduled environmental events.
//! - [`sag`] — sag/tension chain turning temperature, wind, and ice into the
//!   mechanical end load.
//! - [`fem`] — linear finite elements for the displacement, damage, fatigue,
//!   temperature, and voltage fields.
//! - [`simulation`] — the staggered 50-year time loop and failure detection.
//! - [`stochastic`] — collocation grids, moments, Sobol indices, failure
//!   probability, and the Monte Carlo baseline.
//! - [`config`] / [`output`] / [`cli`] — TOML run configuration, CSV/manifest
//!   writers, and the command-line front end.
//!
//! ## Runnable examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example synthesize_loading
//! cargo run --release --example run_deterministic
//! cargo run --release --example failure_mode_sweep
//! cargo run --release --example pcm_moments
//! cargo run --release --example sobol_indices
//! cargo run --release --example probability_of_failure
//! cargo run --release --example monte_carlo_baseline
//! cargo run --release --example convergence_study
//! ```
//!
//! The same pipelines are scriptable through the `powerline` binary; see the
//! README for the subcommand reference.

pub mod cli;
pub mod config;
pub mod error;
pub mod fem;
pub mod loading;
pub mod material;
pub mod output;
pub mod sag;
pub mod scenario;
pub mod simulation;
pub mod stochastic;

pub use error::{Error, Result};
pub use loading::{
    area_at, current_demand, dft_coefficients, evaluate_loading, AreaProfile, CurrentDemand,
    FourierLoading, MonthlySeries, QuantityKind,
};
pub use material::MaterialProperties;
pub use sag::{
    drag_coefficient, ice_load, initial_sag, tension_at_temperature, wind_load, SagParameters,
    WindLoadParams,
};
pub use scenario::{
    ambient_at, scenario_presets, AmbientState, EventPayload, EventWindow, IceLayer, Region,
    ScenarioConfig, ScenarioKind, Wildfire,
};
pub use simulation::{
    failure_indicator, limit_state, run_deterministic, run_with_observer, FailureMode,
    FailureRecord, PicardConfig, SimulationConfig, SimulationResult,
};
pub use stochastic::{
    convergence_error, evaluate_ensemble, gauss_legendre_rule, monte_carlo_moments, pcm_moments,
    probability_of_failure, sobol_first_order, CollocationGrid, ParamName, QoIEnsemble, QoIKind,
    RandomParameter, SpacePreset,
};
