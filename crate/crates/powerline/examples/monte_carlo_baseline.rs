//! Seeded Monte Carlo baseline next to the collocation estimate of the
//! same quantity.
//!
//! ```bash
//! cargo run --release --example monte_carlo_baseline
//! ```

use powerline::stochastic::parameter_space_preset;
use powerline::{
    evaluate_ensemble, monte_carlo_moments, pcm_moments, CollocationGrid, Region,
    SimulationConfig, SpacePreset,
};

fn main() {
    let mut base = SimulationConfig::preset(Region::AmarilloTx);
    base.horizon = 6.0;
    base.n_elements = 500;

    let space = parameter_space_preset(SpacePreset::XiF1, &base).expect("preset space");

    let grid = CollocationGrid::new(space.clone(), 3).expect("grid");
    println!(
        "collocation: {} runs; monte carlo: 200 seeded samples\n",
        grid.n_nodes()
    );
    let ens = evaluate_ensemble(&base, &grid, None, true).expect("ensemble");
    let (e_pcm, s_pcm) = pcm_moments(&ens.phi, &grid).expect("moments");

    let mc = monte_carlo_moments(&base, &space, 200, 42, None, true).expect("mc");

    let k = ens.phi.times.len().min(mc.times.len()) - 1;
    let t = ens.phi.times[k];
    println!("\nE[phi_max] at t = {t:.2} yr:");
    println!("  collocation  {:.6}  (std {:.3e})", e_pcm[k], s_pcm[k]);
    println!("  monte carlo  {:.6}  (std {:.3e})", mc.phi_mean[k], mc.phi_std[k]);
    let diff = (e_pcm[k] - mc.phi_mean[k]).abs();
    let clt = 3.0 * mc.phi_std[k] / (200.0_f64).sqrt();
    println!("  |difference| {diff:.3e} vs 3-sigma sampling band {clt:.3e}");
    assert!(diff < clt, "estimates should agree within the sampling band");
    println!("\nthe two estimators agree within Monte Carlo sampling error");
}
