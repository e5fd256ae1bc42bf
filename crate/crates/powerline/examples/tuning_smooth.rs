use powerline::scenario::{EventPayload, Wildfire};
use powerline::{run_deterministic, Region, SimulationConfig};

fn ft(cfg: &SimulationConfig) -> String {
    match run_deterministic(cfg).unwrap().failure {
        Some(f) => format!("{:?}@{:.2}", f.mode, f.time),
        None => "none".into(),
    }
}

fn main() {
    println!("== modes ==");
    for region in Region::ALL {
        let cfg = SimulationConfig::preset(region);
        let mut quiet = cfg.clone();
        quiet.scenario = quiet.scenario.without_events();
        println!("{region:?}: ev {} | no-ev {}", ft(&cfg), ft(&quiet));
    }
    println!("== w_max ==");
    for f in [50.0, 75.0, 100.0] {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::ExtremeWind { w_max } = &mut ev.payload { *w_max = f * 0.3048; }
        }
        println!("  {f}: {}", ft(&cfg));
    }
    println!("== v_f scan ==");
    for vf in [0.004, 0.0074, 0.0076, 0.0078, 0.008, 0.0082, 0.0085, 0.0125] {
        let mut cfg = SimulationConfig::preset(Region::SanDiegoCa);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::Wildfire(Wildfire { view_factor, .. }) = &mut ev.payload { *view_factor = vf; }
        }
        println!("  {vf}: {}", ft(&cfg));
    }
    println!("== t_ice ==");
    for inch in [0.1, 0.25, 0.5] {
        let mut cfg = SimulationConfig::preset(Region::BethelAk);
        for ev in &mut cfg.scenario.events {
            if let EventPayload::IceLayer(l) = &mut ev.payload { l.thickness = inch * 0.0254; }
        }
        println!("  {inch}: {}", ft(&cfg));
    }
    println!("== a_sigma ordering ==");
    for a in [1.5, 2.0, 3.0] {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.scenario = cfg.scenario.without_events();
        cfg.area.spread_depth_ratio = a;
        println!("  {a}: {}", ft(&cfg));
    }
    println!("== mesh convergence at 5 yr ==");
    let run = |n: usize| {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.scenario = cfg.scenario.without_events();
        cfg.n_elements = n;
        cfg.horizon = 5.0;
        let r = run_deterministic(&cfg).unwrap();
        let k = r.times.len() - 1;
        (r.theta_max[k], r.phi_max[k])
    };
    let (tc, pc) = run(1000);
    let (tf, pf) = run(2000);
    println!("  theta diff {:.3e}, phi diff {:.3e}", (tf - tc).abs() / tf, (pf - pc).abs() / pf);
    println!("== gc corner ==");
    let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
    cfg.scenario = cfg.scenario.without_events();
    cfg.material.fracture_energy = 9e3;
    println!("  gc=9000 no-events: {}", ft(&cfg));
}
