//! First-order Sobol sensitivity of the damage maximum to material and
//! loading parameters, by post-processing one collocation ensemble.
//!
//! ```bash
//! cargo run --release --example sobol_indices
//! ```

use powerline::stochastic::parameter_space_preset;
use powerline::{
    evaluate_ensemble, sobol_first_order, CollocationGrid, Region, SimulationConfig, SpacePreset,
};

fn main() {
    let mut base = SimulationConfig::preset(Region::AmarilloTx);
    base.horizon = 8.0;

    let space = parameter_space_preset(SpacePreset::XiF1, &base).expect("preset space");
    let names: Vec<&str> = space.iter().map(|p| p.name.key()).collect();
    let grid = CollocationGrid::new(space, 3).expect("grid");
    println!(
        "=== Sobol indices of phi_max over xi_f1, {} runs ===\n",
        grid.n_nodes()
    );

    let ens = evaluate_ensemble(&base, &grid, None, true).expect("ensemble");
    let indices = sobol_first_order(&ens.phi, &grid).expect("indices");

    print!("  yr ");
    for n in &names {
        print!("  S_{n:<6}");
    }
    println!();
    for (k, &t) in ens.phi.times.iter().enumerate() {
        if (t - t.round()).abs() < 1e-9 {
            print!("{t:5.1}");
            for s in &indices {
                print!("  {:8.4}", s[k]);
            }
            println!();
        }
    }

    let last = ens.phi.times.len() - 1;
    let sum: f64 = indices.iter().map(|s| s[last]).sum();
    println!(
        "\nfirst-order indices sum to {sum:.4} at the end of the run; \
         the remainder is parameter interaction"
    );
}
