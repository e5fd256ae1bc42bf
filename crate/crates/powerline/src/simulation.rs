//! The staggered time loop coupling all field equations over the service
//! life of the line.
//!
//! Each step: tensile load from the sag chain, displacement, strain-energy
//! history, damage, fatigue, temperature, voltage — with lagged cross-field
//! values (the previous step's voltage feeds Joule heating, the previous
//! temperature feeds the sag chain and fatigue). The run stops at the first
//! threshold crossing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::{
    recover_strains, solve_damage, solve_displacement, solve_temperature, solve_voltage,
    step_fatigue, update_history, ElementGeometry, FieldState, HeatExchange, Mesh, Workspace,
};
use crate::loading::{current_demand, AreaProfile};
use crate::material::MaterialProperties;
use crate::sag::{tension_at_temperature, SagParameters, WindLoadParams};
use crate::scenario::{ambient_at, Region, ScenarioConfig, ScenarioKind};

/// Default spread/depth ratio of the initial-damage notch in presets
/// (a 17%-deep area reduction at midspan).
pub const DEFAULT_NOTCH_SEVERITY: f64 = 2.3;

/// Optional fixed-point (Picard) coupling inside each step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PicardConfig {
    pub enabled: bool,
    pub max_iterations: usize,
    pub tolerance: f64,
}

impl Default for PicardConfig {
    fn default() -> Self {
        PicardConfig {
            enabled: false,
            max_iterations: 5,
            tolerance: 1e-6,
        }
    }
}

/// Everything one deterministic run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub scenario: ScenarioConfig,
    pub material: MaterialProperties,
    pub sag: SagParameters,
    pub wind: WindLoadParams,
    pub area: AreaProfile,
    pub n_elements: usize,
    /// Step size, years.
    pub dt: f64,
    /// Service horizon, years.
    pub horizon: f64,
    /// Temperature threshold, K.
    pub theta_lim: f64,
    /// Damage threshold.
    pub phi_lim: f64,
    pub picard: PicardConfig,
    /// Record full field snapshots every this many years.
    pub snapshot_interval: Option<f64>,
}

impl SimulationConfig {
    /// The region's scenario preset with default material, geometry, and
    /// numerics.
    pub fn preset(region: Region) -> Self {
        let material = MaterialProperties::default();
        let span = 200.0;
        let sag = SagParameters {
            span,
            // 20% of a 175 kN ultimate strength.
            pretension: 35e3,
            unit_weight: material.unit_weight(),
            thermal_expansion: 2.3e-5,
            reference_temp: material.reference_temp,
        };
        let wind = WindLoadParams {
            air_density: material.air.density,
            attack_angle: std::f64::consts::FRAC_PI_2,
            span_factor: 0.6,
            diameter: material.diameter,
            kinematic_viscosity: material.air.kinematic_viscosity,
        };
        let area = AreaProfile::new(material.nominal_area(), DEFAULT_NOTCH_SEVERITY, span)
            .expect("default area profile");
        SimulationConfig {
            scenario: crate::scenario::scenario_presets(region),
            material,
            sag,
            wind,
            area,
            n_elements: 1000,
            dt: 0.01,
            horizon: 50.0,
            theta_lim: 373.0,
            phi_lim: 0.8,
            picard: PicardConfig::default(),
            snapshot_interval: None,
        }
    }

    /// Number of time steps over the horizon.
    pub fn n_steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::invalid(
                "horizon",
                format!("must be positive, got {}", self.horizon),
            ));
        }
        let steps = self.horizon / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::invalid(
                "horizon",
                format!("horizon {} yr is not an integral number of dt = {} steps", self.horizon, self.dt),
            ));
        }
        if !(self.theta_lim > 0.0) {
            return Err(Error::invalid("theta_lim", "must be positive"));
        }
        if !(self.phi_lim > 0.0) {
            return Err(Error::invalid("phi_lim", "must be positive"));
        }
        if self.n_elements < 2 {
            return Err(Error::invalid("n_elements", "need at least 2 elements"));
        }
        if (self.area.span - self.sag.span).abs() > 1e-9 * self.sag.span {
            return Err(Error::invalid(
                "area.span",
                "area profile span and sag span must agree",
            ));
        }
        self.material.validate()?;
        self.sag.validate()?;
        self.scenario.validate(self.horizon)?;
        AreaProfile::new(self.area.nominal_area, self.area.spread_depth_ratio, self.area.span)?;
        Ok(())
    }
}

/// Which threshold tripped first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureMode {
    Temperature,
    Damage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    /// Failure time, years.
    pub time: f64,
    pub mode: FailureMode,
}

/// Per-step scalar series plus the failure record. Series end at the failure
/// step; [`failure_indicator`] re-expands the step function to the full
/// horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// Step times, years.
    pub times: Vec<f64>,
    /// Mesh maximum of the temperature field per step, K.
    pub theta_max: Vec<f64>,
    /// Mesh maximum of the damage field per step.
    pub phi_max: Vec<f64>,
    /// End-to-end voltage drop per step, V.
    pub v_drop: Vec<f64>,
    /// Horizontal tension per step, N.
    pub tension: Vec<f64>,
    pub failure: Option<FailureRecord>,
    /// Set when a solver broke down mid-run; the series holds the steps
    /// completed before the breakdown.
    pub error: Option<String>,
    /// Field snapshots at the configured marks.
    pub snapshots: Vec<(f64, FieldState)>,
    /// Node index of the final damage maximum.
    pub phi_argmax: usize,
}

/// Limit-state function `g = limit - value_max`; negative means failed.
pub fn limit_state(limit: f64, value_max: f64) -> f64 {
    limit - value_max
}

/// Bernoulli failure indicator over the full horizon: zero before the
/// failure step, one from it onward (series padded past truncation).
pub fn failure_indicator(result: &SimulationResult, cfg: &SimulationConfig) -> Vec<f64> {
    let n = cfg.n_steps();
    let mut h = vec![0.0; n];
    if result.failure.is_some() {
        // The run stops at the failing step, so it is the last recorded one.
        let k = result.times.len().saturating_sub(1);
        for v in h.iter_mut().skip(k) {
            *v = 1.0;
        }
    }
    h
}

/// Runs the staggered loop over the configured horizon.
///
/// Returns `Err` only for invalid configurations; threshold crossings and
/// mid-run solver breakdowns are reported inside the result.
pub fn run_deterministic(cfg: &SimulationConfig) -> Result<SimulationResult> {
    run_with_observer(cfg, |_, _| {})
}

/// Like [`run_deterministic`], invoking `observer` with the time and the
/// full field state after every completed step.
pub fn run_with_observer<F>(cfg: &SimulationConfig, mut observer: F) -> Result<SimulationResult>
where
    F: FnMut(f64, &FieldState),
{
    cfg.validate()?;
    let mesh = Mesh::new(cfg.area.span, cfg.n_elements)?;
    let geom = ElementGeometry::new(&mesh, &cfg.area);
    let mut ws = Workspace::new(&mesh, &geom);
    let n_nodes = mesh.n_nodes();
    let n_steps = cfg.n_steps();

    let ambient0 = ambient_at(&cfg.scenario, 0.0);
    let mut state = FieldState::virgin(n_nodes, ambient0.ambient_temp);

    let mut result = SimulationResult {
        times: Vec::with_capacity(n_steps),
        theta_max: Vec::with_capacity(n_steps),
        phi_max: Vec::with_capacity(n_steps),
        v_drop: Vec::with_capacity(n_steps),
        tension: Vec::with_capacity(n_steps),
        failure: None,
        error: None,
        snapshots: Vec::new(),
        phi_argmax: mesh.midspan_node(),
    };

    let mut u_new = Vec::with_capacity(n_nodes);
    let mut phi_new = Vec::with_capacity(n_nodes);
    let mut theta_new = Vec::with_capacity(n_nodes);
    let mut v_new = Vec::with_capacity(n_nodes);
    let mut strains = Vec::with_capacity(n_nodes);
    let mid = mesh.midspan_node();

    'steps: for k in 1..=n_steps {
        let t = k as f64 * cfg.dt;
        let ambient = ambient_at(&cfg.scenario, t);
        let exchange = match HeatExchange::from_ambient(&ambient, &cfg.material) {
            Ok(e) => e,
            Err(e) => {
                result.error = Some(e.to_string());
                break 'steps;
            }
        };
        let current = current_demand(&cfg.scenario.current, t).abs();
        let ice = ambient.ice;

        // Fixed-point sweeps over the quasi-static fields; the default is a
        // single staggered pass.
        let sweeps = if cfg.picard.enabled {
            cfg.picard.max_iterations.max(1)
        } else {
            1
        };
        let mut tension = 0.0;
        let mut converged_iterate = false;
        for sweep in 0..sweeps {
            // Tension from the midspan conductor temperature of the current
            // iterate (lagged on the first sweep).
            let theta_for_sag = if sweep == 0 { &state.theta } else { &theta_new };
            let dtheta = theta_for_sag[mid] - cfg.sag.reference_temp;
            tension = match tension_at_temperature(
                &cfg.sag,
                &cfg.wind,
                dtheta,
                ambient.wind_speed,
                ice.as_ref(),
                cfg.material.ice.density,
            ) {
                Ok(h) => h,
                Err(e) => {
                    result.error = Some(e.to_string());
                    break 'steps;
                }
            };

            let step = staggered_sweep(SweepArgs {
                mesh: &mesh,
                geom: &geom,
                cfg,
                state: &mut state,
                exchange: &exchange,
                ice: ice.as_ref(),
                tension,
                current,
                first_sweep: sweep == 0,
                ws: &mut ws,
                u_new: &mut u_new,
                phi_new: &mut phi_new,
                theta_new: &mut theta_new,
                v_new: &mut v_new,
                strains: &mut strains,
            });
            match step {
                Ok(change) => {
                    if sweep > 0 && change < cfg.picard.tolerance {
                        converged_iterate = true;
                    }
                }
                Err(e) => {
                    result.error = Some(e.to_string());
                    break 'steps;
                }
            }
            if converged_iterate {
                break;
            }
        }

        // Fatigue integrates once per step, from the step's final
        // displacement/damage and the lagged temperature.
        step_fatigue(
            &mesh,
            &geom,
            &cfg.material,
            &u_new,
            &phi_new,
            &state.theta,
            cfg.dt,
            &mut ws,
            &mut state.fatigue,
        );

        std::mem::swap(&mut state.u, &mut u_new);
        std::mem::swap(&mut state.phi, &mut phi_new);
        std::mem::swap(&mut state.theta, &mut theta_new);
        std::mem::swap(&mut state.voltage, &mut v_new);

        observer(t, &state);
        let theta_max = state.max_theta();
        let phi_max = state.max_phi();
        result.times.push(t);
        result.theta_max.push(theta_max);
        result.phi_max.push(phi_max);
        result.v_drop.push(state.voltage_drop());
        result.tension.push(tension);

        if let Some(interval) = cfg.snapshot_interval {
            let cycles = t / interval;
            if (cycles - cycles.round()).abs() < 0.5 * cfg.dt / interval {
                result.snapshots.push((t, state.clone()));
            }
        }

        // Threshold checks; when both cross within one step the damage
        // check runs first.
        if limit_state(cfg.phi_lim, phi_max) < 0.0 {
            result.failure = Some(FailureRecord {
                time: t,
                mode: FailureMode::Damage,
            });
            break;
        }
        if limit_state(cfg.theta_lim, theta_max) < 0.0 {
            result.failure = Some(FailureRecord {
                time: t,
                mode: FailureMode::Temperature,
            });
            break;
        }
    }

    result.phi_argmax = state.argmax_phi();
    Ok(result)
}

struct SweepArgs<'a> {
    mesh: &'a Mesh,
    geom: &'a ElementGeometry,
    cfg: &'a SimulationConfig,
    state: &'a mut FieldState,
    exchange: &'a HeatExchange,
    ice: Option<&'a crate::scenario::IceLayer>,
    tension: f64,
    current: f64,
    first_sweep: bool,
    ws: &'a mut Workspace,
    u_new: &'a mut Vec<f64>,
    phi_new: &'a mut Vec<f64>,
    theta_new: &'a mut Vec<f64>,
    v_new: &'a mut Vec<f64>,
    strains: &'a mut Vec<f64>,
}

/// One staggered pass over the quasi-static fields. Returns the largest
/// relative change of the damage/temperature iterates (meaningful from the
/// second sweep of a step onward).
fn staggered_sweep(args: SweepArgs<'_>) -> Result<f64> {
    let SweepArgs {
        mesh,
        geom,
        cfg,
        state,
        exchange,
        ice,
        tension,
        current,
        first_sweep,
        ws,
        u_new,
        phi_new,
        theta_new,
        v_new,
        strains,
    } = args;

    let (prev_phi, prev_theta) = if first_sweep {
        (Vec::new(), Vec::new())
    } else {
        (phi_new.clone(), theta_new.clone())
    };

    {
        let phi_in: &[f64] = if first_sweep {
            state.phi.as_slice()
        } else {
            phi_new.as_slice()
        };
        solve_displacement(mesh, geom, &cfg.material, phi_in, tension, ws, u_new)?;
    }
    recover_strains(mesh, u_new, strains);
    update_history(&mut state.history, strains, cfg.material.young_modulus);
    solve_damage(
        mesh,
        geom,
        &cfg.material,
        &state.history,
        &state.fatigue,
        ws,
        phi_new,
    )?;
    // Irreversibility: the history field forbids healing; the projection
    // removes solver-level wiggle on top of that.
    for (p, &prev) in phi_new.iter_mut().zip(&state.phi) {
        if *p < prev {
            *p = prev;
        }
    }
    solve_temperature(
        mesh,
        geom,
        &cfg.material,
        phi_new,
        &state.theta,
        &state.voltage,
        exchange,
        ice,
        ws,
        theta_new,
    )?;
    solve_voltage(mesh, geom, &cfg.material, phi_new, theta_new, current, ice, ws, v_new)?;

    if first_sweep {
        Ok(f64::INFINITY)
    } else {
        Ok(max_rel_change(&prev_phi, phi_new).max(max_rel_change(&prev_theta, theta_new)))
    }
}

fn max_rel_change(prev: &[f64], new: &[f64]) -> f64 {
    if prev.len() != new.len() {
        return f64::INFINITY;
    }
    let scale = new
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    prev.iter()
        .zip(new)
        .fold(0.0_f64, |m, (p, n)| m.max((p - n).abs()))
        / scale
}

/// Scenario kind of a config (decides which quantity the stochastic studies
/// watch by default).
pub fn default_failure_quantity(kind: ScenarioKind) -> FailureMode {
    match kind {
        ScenarioKind::Wildfire => FailureMode::Temperature,
        ScenarioKind::HighWind | ScenarioKind::Icing => FailureMode::Damage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_state_examples() {
        assert_eq!(limit_state(373.0, 300.0), 73.0);
        assert_eq!(limit_state(373.0, 373.0), 0.0);
        assert!((limit_state(0.8, 0.95) + 0.15).abs() < 1e-12);
    }

    #[test]
    fn indicator_step_function() {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.horizon = 1.0;
        let mut result = SimulationResult {
            times: (1..=100).map(|k| k as f64 * 0.01).collect(),
            theta_max: vec![300.0; 100],
            phi_max: vec![0.0; 100],
            v_drop: vec![0.0; 100],
            tension: vec![0.0; 100],
            failure: None,
            error: None,
            snapshots: Vec::new(),
            phi_argmax: 0,
        };
        // Never fails: all zeros.
        assert!(failure_indicator(&result, &cfg).iter().all(|&v| v == 0.0));
        // Fails at step 40 (1-based): series truncated there.
        result.times.truncate(40);
        result.failure = Some(FailureRecord {
            time: 0.4,
            mode: FailureMode::Damage,
        });
        let h = failure_indicator(&result, &cfg);
        assert_eq!(h.len(), 100);
        assert!(h[..39].iter().all(|&v| v == 0.0));
        assert!(h[39..].iter().all(|&v| v == 1.0));
        // Pathological immediate failure: all ones.
        result.times.truncate(1);
        let h = failure_indicator(&result, &cfg);
        assert!(h.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn unloaded_line_tracks_ambient_and_stays_whole() {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.scenario = cfg.scenario.without_events();
        cfg.scenario.current = crate::loading::CurrentDemand::new(0.0, 0.0).unwrap();
        cfg.sag.pretension = 3e3;
        cfg.horizon = 2.0;
        cfg.n_elements = 200;
        let result = run_deterministic(&cfg).unwrap();
        assert!(result.failure.is_none());
        assert!(result.error.is_none());
        assert_eq!(result.times.len(), 200);
        // Without Joule heating the conductor sits at ambient temperature.
        for (k, &t) in result.times.iter().enumerate() {
            let ambient = ambient_at(&cfg.scenario, t).ambient_temp;
            assert!(
                (result.theta_max[k] - ambient).abs() < 1e-6,
                "step {k}: {} vs ambient {ambient}",
                result.theta_max[k]
            );
        }
        // Lightly tensioned line: damage never gets going.
        assert!(result.phi_max.last().unwrap() < &1e-3);
    }

    #[test]
    fn determinism_bitwise() {
        let mut cfg = SimulationConfig::preset(Region::SanDiegoCa);
        cfg.horizon = 1.0;
        cfg.n_elements = 200;
        let a = run_deterministic(&cfg).unwrap();
        let b = run_deterministic(&cfg).unwrap();
        assert_eq!(a.theta_max, b.theta_max);
        assert_eq!(a.phi_max, b.phi_max);
        assert_eq!(a.v_drop, b.v_drop);
        assert_eq!(a.tension, b.tension);
    }

    #[test]
    fn series_lengths_agree() {
        let mut cfg = SimulationConfig::preset(Region::BethelAk);
        cfg.horizon = 0.5;
        cfg.n_elements = 100;
        let r = run_deterministic(&cfg).unwrap();
        let n = r.times.len();
        assert_eq!(r.theta_max.len(), n);
        assert_eq!(r.phi_max.len(), n);
        assert_eq!(r.v_drop.len(), n);
        assert_eq!(r.tension.len(), n);
    }

    #[test]
    fn phi_max_series_non_decreasing() {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.horizon = 2.0;
        cfg.n_elements = 200;
        let r = run_deterministic(&cfg).unwrap();
        for pair in r.phi_max.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.dt = -1.0;
        match run_deterministic(&cfg) {
            Err(Error::InvalidInput { field, .. }) => assert_eq!(field, "dt"),
            other => panic!("expected validation error, got {other:?}"),
        }
        let mut cfg = SimulationConfig::preset(Region::AmarilloTx);
        cfg.horizon = 0.505; // not an integral number of steps
        assert!(run_deterministic(&cfg).is_err());
    }

    #[test]
    fn picard_mode_converges_and_stays_close_to_single_pass() {
        let mut cfg = SimulationConfig::preset(Region::SanDiegoCa);
        cfg.horizon = 0.5;
        cfg.n_elements = 200;
        let single = run_deterministic(&cfg).unwrap();
        cfg.picard.enabled = true;
        let picard = run_deterministic(&cfg).unwrap();
        assert!(picard.failure.is_none());
        // The single pass lags the Joule term by one step, so skip the
        // start-up transient; afterwards the two tracks agree closely.
        for (a, b) in single.theta_max.iter().zip(&picard.theta_max).skip(3) {
            assert!((a - b).abs() / b < 1e-3, "{a} vs {b}");
        }
    }
}
