//! 1-D finite-element discretization of the coupled field equations.

pub mod heat;
pub mod mesh;
pub mod solvers;
pub mod state;
pub mod tridiag;

pub use heat::{convective_coefficient, fire_flux, HeatExchange, FREEZING_POINT, STEFAN_BOLTZMANN};
pub use mesh::{ElementGeometry, Mesh};
pub use solvers::{
    degraded_conductivity, element_fluxes, recover_strains, solve_damage, solve_displacement,
    solve_temperature, solve_voltage, step_fatigue, total_convective_loss, total_joule_power,
    update_history, Workspace,
};
pub use state::FieldState;
