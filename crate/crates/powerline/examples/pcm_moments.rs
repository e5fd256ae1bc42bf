//! Collocation moments: expectation and standard deviation of the damage
//! maximum under material/loading uncertainty.
//!
//! ```bash
//! cargo run --release --example pcm_moments
//! ```

use powerline::stochastic::parameter_space_preset;
use powerline::{
    evaluate_ensemble, pcm_moments, CollocationGrid, Region, SimulationConfig, SpacePreset,
};

fn main() {
    let mut base = SimulationConfig::preset(Region::AmarilloTx);
    base.horizon = 8.0; // shortened demo horizon

    let space = parameter_space_preset(SpacePreset::XiF1, &base).expect("preset space");
    println!("=== collocation moments over xi_f1 = {{g_c, a, w_b, I_b}} ===");
    for p in &space {
        println!(
            "  {}: uniform on [{:.4e}, {:.4e}]",
            p.name.key(),
            p.lower,
            p.upper
        );
    }

    let points = 3;
    let grid = CollocationGrid::new(space, points).expect("grid");
    println!(
        "grid: {} dims x {points} points = {} independent runs\n",
        grid.n_dims(),
        grid.n_nodes()
    );

    let ens = evaluate_ensemble(&base, &grid, None, true).expect("ensemble");
    let (e_phi, s_phi) = pcm_moments(&ens.phi, &grid).expect("moments");
    let (e_theta, s_theta) = pcm_moments(&ens.theta, &grid).expect("moments");

    println!("\n  yr   E[phi_max]  std[phi_max]  E[theta_max]  std[theta_max]");
    for (k, &t) in ens.phi.times.iter().enumerate() {
        if (t - t.round()).abs() < 1e-9 {
            println!(
                "{t:5.1}  {:10.5}  {:12.3e}  {:12.2}  {:13.3e}",
                e_phi[k], s_phi[k], e_theta[k], s_theta[k]
            );
        }
    }
    println!("\nboth moments grow with time as damage and heating feed each other");
}
