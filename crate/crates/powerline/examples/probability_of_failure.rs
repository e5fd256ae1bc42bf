//! Time-resolved probability of failure for the icing scenario: the
//! collocation expectation of the Bernoulli failure indicator.
//!
//! ```bash
//! cargo run --release --example probability_of_failure
//! ```

use powerline::stochastic::parameter_space_preset;
use powerline::{
    evaluate_ensemble, probability_of_failure, CollocationGrid, Region, SimulationConfig,
    SpacePreset,
};

fn main() {
    let mut base = SimulationConfig::preset(Region::BethelAk);
    base.horizon = 3.0; // icing failures concentrate in the first winters

    let space = parameter_space_preset(SpacePreset::Xi3, &base).expect("preset space");
    let grid = CollocationGrid::new(space, 3).expect("grid");
    println!(
        "=== probability of failure, icing region, xi_3 space, {} runs ===\n",
        grid.n_nodes()
    );

    let ens = evaluate_ensemble(&base, &grid, None, true).expect("ensemble");
    let p_f = probability_of_failure(&ens.h_b, &grid).expect("p_f");

    println!("  t [yr]   p_f");
    let mut last_printed = -1.0;
    for (k, &t) in ens.h_b.times.iter().enumerate() {
        // Print the first step of each month, plus every jump.
        let jumped = k > 0 && (p_f[k] - p_f[k - 1]).abs() > 1e-12;
        if jumped || t - last_printed >= 0.25 - 1e-12 {
            println!("  {t:6.2}  {:6.4}", p_f[k]);
            last_printed = t;
        }
    }

    let failed = ens
        .failures
        .iter()
        .filter(|f| f.is_some())
        .count();
    println!(
        "\n{failed}/{} realizations fail within {} yr; p_f is their \
         quadrature-weighted mass",
        grid.n_nodes(),
        base.horizon
    );
}
