//! Failure time and mode across the three regional presets, with and
//! without their unexpected-event schedules, plus the effect of the
//! scenario-specific severity parameters.
//!
//! ```bash
//! cargo run --release --example failure_mode_sweep
//! ```

use powerline::scenario::{EventPayload, Wildfire};
use powerline::{run_deterministic, Region, SimulationConfig};

fn describe(cfg: &SimulationConfig) -> String {
    match run_deterministic(cfg).expect("valid config").failure {
        Some(f) => format!("{:?} at {:6.2} yr", f.mode, f.time),
        None => "no failure in horizon".to_string(),
    }
}

fn main() {
    println!("=== preset failure modes ===");
    for region in Region::ALL {
        let cfg = SimulationConfig::preset(region);
        let mut quiet = cfg.clone();
        quiet.scenario = quiet.scenario.without_events();
        println!(
            "{region:?}: with events {}, seasonal only {}",
            describe(&cfg),
            describe(&quiet)
        );
    }

    println!("\n=== initial damage severity (high-wind region, seasonal only) ===");
    for a_sigma in [3.0, 2.0, 1.5] {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.scenario = cfg.scenario.without_events();
        cfg.area.spread_depth_ratio = a_sigma;
        println!("  notch spread/depth {a_sigma:3.1}: {}", describe(&cfg));
    }

    println!("\n=== extreme wind speed (high-wind region) ===");
    for ft in [50.0, 75.0, 100.0] {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::ExtremeWind { w_max } = &mut ev.payload {
                *w_max = ft * 0.3048;
            }
        }
        println!("  w_max {ft:5.1} ft/s: {}", describe(&cfg));
    }

    println!("\n=== wildfire view factor (wildfire region) ===");
    for vf in [0.004, 0.0077, 0.0125] {
        let mut cfg = SimulationConfig::preset(Region::SanDiegoCa);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::Wildfire(Wildfire { view_factor, .. }) = &mut ev.payload {
                *view_factor = vf;
            }
        }
        println!("  view factor {vf:6.4}: {}", describe(&cfg));
    }

    println!("\n=== ice thickness (icing region) ===");
    for inch in [0.1, 0.25, 0.5] {
        let mut cfg = SimulationConfig::preset(Region::BethelAk);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::IceLayer(layer) = &mut ev.payload {
                layer.thickness = inch * 0.0254;
            }
        }
        println!("  ice {inch:4.2} in: {}", describe(&cfg));
    }
}
