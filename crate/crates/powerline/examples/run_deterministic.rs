//! One deterministic service-life run of the high-wind preset, with the
//! yearly evolution of the tracked maxima.
//!
//! ```bash
//! cargo run --release --example run_deterministic
//! ```

use std::time::Instant;

use powerline::{run_deterministic, Region, SimulationConfig};

fn main() {
    let cfg = SimulationConfig::preset(Region::AmarilloTx);
    println!(
        "=== {:?} preset: {} yr horizon, dt = {} yr, N = {} elements ===",
        cfg.scenario.kind, cfg.horizon, cfg.dt, cfg.n_elements
    );
    println!(
        "pretension {:.0} kN, notch severity {}, base current {} A\n",
        cfg.sag.pretension / 1e3,
        cfg.area.spread_depth_ratio,
        cfg.scenario.current.base
    );

    let start = Instant::now();
    let result = run_deterministic(&cfg).expect("valid preset");
    let elapsed = start.elapsed();

    println!("  yr   theta_max[K]  phi_max    v_drop[V]  tension[kN]");
    for (k, &t) in result.times.iter().enumerate() {
        if (t - t.round()).abs() < 1e-9 && (t.round() as usize) % 2 == 0 {
            println!(
                "{t:5.1}  {:12.2}  {:8.4}  {:10.3}  {:10.2}",
                result.theta_max[k],
                result.phi_max[k],
                result.v_drop[k],
                result.tension[k] / 1e3,
            );
        }
    }
    match result.failure {
        Some(f) => println!("\nline fails at {:.2} yr by {:?}", f.time, f.mode),
        None => println!("\nline survives the full horizon"),
    }
    println!("simulated {} steps in {elapsed:?}", result.times.len());
}
