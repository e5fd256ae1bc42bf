//! Uncertain parameters and the preset stochastic spaces.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::EventPayload;
use crate::simulation::SimulationConfig;

/// The uncertain parameters the studies support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamName {
    /// Fracture energy `g_c`.
    GC,
    /// Aging coefficient `a`.
    AgingCoeff,
    /// Damage layer width `gamma`.
    Gamma,
    /// Initial-damage spread/depth ratio `A_sigma`.
    ASigma,
    /// Base-temperature scale `theta_b`.
    ThetaB,
    /// Base-wind scale `w_b`.
    WB,
    /// Base current `I_b`.
    IB,
    /// Current amplitude `I_a`.
    IA,
    /// Extreme wind speed `w_max`.
    WMax,
    /// Wildfire flame temperature `T_fire`.
    TFire,
    /// Wildfire view factor `V_f`.
    VF,
    /// Ice thickness `t_ice`.
    TIce,
}

impl ParamName {
    pub const ALL: [ParamName; 12] = [
        ParamName::GC,
        ParamName::AgingCoeff,
        ParamName::Gamma,
        ParamName::ASigma,
        ParamName::ThetaB,
        ParamName::WB,
        ParamName::IB,
        ParamName::IA,
        ParamName::WMax,
        ParamName::TFire,
        ParamName::VF,
        ParamName::TIce,
    ];

    /// Short identifier used in config files and CSV headers.
    pub fn key(&self) -> &'static str {
        match self {
            ParamName::GC => "g_c",
            ParamName::AgingCoeff => "a",
            ParamName::Gamma => "gamma",
            ParamName::ASigma => "a_sigma",
            ParamName::ThetaB => "theta_b",
            ParamName::WB => "w_b",
            ParamName::IB => "i_b",
            ParamName::IA => "i_a",
            ParamName::WMax => "w_max",
            ParamName::TFire => "t_fire",
            ParamName::VF => "v_f",
            ParamName::TIce => "t_ice",
        }
    }

    pub fn parse(key: &str) -> Result<Self> {
        ParamName::ALL
            .iter()
            .find(|p| p.key() == key)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown random parameter `{key}`")))
    }

    /// Reads the parameter's current (mean) value from a config.
    pub fn read(&self, cfg: &SimulationConfig) -> Result<f64> {
        let value = match self {
            ParamName::GC => cfg.material.fracture_energy,
            ParamName::AgingCoeff => cfg.material.aging_coeff,
            ParamName::Gamma => cfg.material.damage_layer_width,
            ParamName::ASigma => cfg.area.spread_depth_ratio,
            ParamName::ThetaB => cfg.scenario.temp_base_scale,
            ParamName::WB => cfg.scenario.wind_base_scale,
            ParamName::IB => cfg.scenario.current.base,
            ParamName::IA => cfg.scenario.current.amplitude,
            ParamName::WMax => first_event_value(cfg, |p| match p {
                EventPayload::ExtremeWind { w_max } => Some(*w_max),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Config("`w_max` requires an extreme-wind event in the scenario".into())
            })?,
            ParamName::TFire => first_event_value(cfg, |p| match p {
                EventPayload::Wildfire(f) => Some(f.flame_temp),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Config("`t_fire` requires a wildfire event in the scenario".into())
            })?,
            ParamName::VF => first_event_value(cfg, |p| match p {
                EventPayload::Wildfire(f) => Some(f.view_factor),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Config("`v_f` requires a wildfire event in the scenario".into())
            })?,
            ParamName::TIce => first_event_value(cfg, |p| match p {
                EventPayload::IceLayer(i) => Some(i.thickness),
                _ => None,
            })
            .ok_or_else(|| {
                Error::Config("`t_ice` requires an ice event in the scenario".into())
            })?,
        };
        Ok(value)
    }

    /// Writes a sampled value into a config (all matching events are
    /// updated for the event-borne parameters).
    pub fn apply(&self, cfg: &mut SimulationConfig, value: f64) {
        match self {
            ParamName::GC => cfg.material.fracture_energy = value,
            ParamName::AgingCoeff => cfg.material.aging_coeff = value,
            ParamName::Gamma => cfg.material.damage_layer_width = value,
            ParamName::ASigma => cfg.area.spread_depth_ratio = value,
            ParamName::ThetaB => cfg.scenario.temp_base_scale = value,
            ParamName::WB => cfg.scenario.wind_base_scale = value,
            ParamName::IB => cfg.scenario.current.base = value,
            ParamName::IA => cfg.scenario.current.amplitude = value,
            ParamName::WMax => {
                for ev in &mut cfg.scenario.events {
                    if let EventPayload::ExtremeWind { w_max } = &mut ev.payload {
                        *w_max = value;
                    }
                }
            }
            ParamName::TFire => {
                for ev in &mut cfg.scenario.events {
                    if let EventPayload::Wildfire(f) = &mut ev.payload {
                        f.flame_temp = value;
                    }
                }
            }
            ParamName::VF => {
                for ev in &mut cfg.scenario.events {
                    if let EventPayload::Wildfire(f) = &mut ev.payload {
                        f.view_factor = value;
                    }
                }
            }
            ParamName::TIce => {
                for ev in &mut cfg.scenario.events {
                    if let EventPayload::IceLayer(i) = &mut ev.payload {
                        i.thickness = value;
                    }
                }
            }
        }
    }
}

fn first_event_value(
    cfg: &SimulationConfig,
    pick: impl Fn(&EventPayload) -> Option<f64>,
) -> Option<f64> {
    cfg.scenario.events.iter().find_map(|ev| pick(&ev.payload))
}

/// One uniformly distributed uncertain parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomParameter {
    pub name: ParamName,
    pub lower: f64,
    pub upper: f64,
}

impl RandomParameter {
    pub fn new(name: ParamName, lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::invalid(
                "stochastic.bounds",
                format!("parameter `{}` needs lower < upper, got [{lower}, {upper}]", name.key()),
            ));
        }
        Ok(RandomParameter { name, lower, upper })
    }

    /// Bounds at +-10% around the parameter's mean value in `cfg`.
    pub fn around_mean(name: ParamName, cfg: &SimulationConfig) -> Result<Self> {
        let mean = name.read(cfg)?;
        if mean == 0.0 {
            return Err(Error::Config(format!(
                "parameter `{}` has zero mean in this config; a relative bound is empty",
                name.key()
            )));
        }
        let (lower, upper) = if mean > 0.0 {
            (0.9 * mean, 1.1 * mean)
        } else {
            (1.1 * mean, 0.9 * mean)
        };
        RandomParameter::new(name, lower, upper)
    }

    /// Affine map from the standard interval [-1, 1] to [lower, upper].
    pub fn map_from_standard(&self, eta: f64) -> f64 {
        self.lower + 0.5 * (self.upper - self.lower) * (eta + 1.0)
    }
}

/// Named parameter-set presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpacePreset {
    /// Material parameters: `{A_sigma, gamma, g_c, a}`.
    XiM,
    /// Loading study: `{g_c, a, theta_b, w_b, I_b, I_a}`.
    XiC,
    /// Most influential four, high-wind region.
    XiF1,
    /// Most influential four, wildfire region.
    XiF2,
    /// Most influential four, icing region.
    XiF3,
    /// Final high-wind set: `{g_c, a, w_b, I_b, w_max}`.
    Xi1,
    /// Final wildfire set: `{g_c, a, w_b, I_b, T_fire, V_f}`.
    Xi2,
    /// Final icing set: `{g_c, a, w_b, I_b, t_ice}`.
    Xi3,
}

impl SpacePreset {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "xi_m" => Ok(SpacePreset::XiM),
            "xi_c" => Ok(SpacePreset::XiC),
            "xi_f1" => Ok(SpacePreset::XiF1),
            "xi_f2" => Ok(SpacePreset::XiF2),
            "xi_f3" => Ok(SpacePreset::XiF3),
            "xi_1" => Ok(SpacePreset::Xi1),
            "xi_2" => Ok(SpacePreset::Xi2),
            "xi_3" => Ok(SpacePreset::Xi3),
            other => Err(Error::Config(format!(
                "unknown space preset `{other}`; expected one of \
                 xi_m, xi_c, xi_f1, xi_f2, xi_f3, xi_1, xi_2, xi_3"
            ))),
        }
    }

    pub fn names(&self) -> Vec<ParamName> {
        use ParamName::*;
        match self {
            SpacePreset::XiM => vec![ASigma, Gamma, GC, AgingCoeff],
            SpacePreset::XiC => vec![GC, AgingCoeff, ThetaB, WB, IB, IA],
            SpacePreset::XiF1 | SpacePreset::XiF2 | SpacePreset::XiF3 => {
                vec![GC, AgingCoeff, WB, IB]
            }
            SpacePreset::Xi1 => vec![GC, AgingCoeff, WB, IB, WMax],
            SpacePreset::Xi2 => vec![GC, AgingCoeff, WB, IB, TFire, VF],
            SpacePreset::Xi3 => vec![GC, AgingCoeff, WB, IB, TIce],
        }
    }
}

/// Builds a preset space with +-10% bounds around the config's mean values.
pub fn parameter_space_preset(
    preset: SpacePreset,
    cfg: &SimulationConfig,
) -> Result<Vec<RandomParameter>> {
    preset
        .names()
        .into_iter()
        .map(|n| RandomParameter::around_mean(n, cfg))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Region;

    #[test]
    fn bounds_are_ten_percent_around_mean() {
        let cfg = SimulationConfig::preset(Region::AmarilloTx);
        let p = RandomParameter::around_mean(ParamName::GC, &cfg).unwrap();
        assert!((p.lower - 9e3).abs() < 1e-9);
        assert!((p.upper - 11e3).abs() < 1e-9);
        assert_eq!(p.map_from_standard(-1.0), p.lower);
        assert_eq!(p.map_from_standard(1.0), p.upper);
        assert!((p.map_from_standard(0.0) - 10e3).abs() < 1e-9);
    }

    #[test]
    fn apply_round_trips_through_read() {
        let mut cfg = SimulationConfig::preset(Region::BethelAk);
        for name in [ParamName::GC, ParamName::WB, ParamName::TIce] {
            name.apply(&mut cfg, 0.123);
            assert_eq!(name.read(&cfg).unwrap(), 0.123);
        }
    }

    #[test]
    fn scenario_parameters_need_matching_events() {
        let cfg = SimulationConfig::preset(Region::AmarilloTx);
        assert!(ParamName::WMax.read(&cfg).is_ok());
        assert!(ParamName::TIce.read(&cfg).is_err());
        assert!(ParamName::VF.read(&cfg).is_err());
        let cfg = SimulationConfig::preset(Region::SanDiegoCa);
        assert!(ParamName::VF.read(&cfg).is_ok());
        assert!(ParamName::TFire.read(&cfg).is_ok());
    }

    #[test]
    fn preset_sets_match_published_lists() {
        let xi2 = SpacePreset::Xi2.names();
        assert_eq!(xi2.len(), 6);
        assert!(xi2.contains(&ParamName::TFire));
        assert!(xi2.contains(&ParamName::VF));
        let xi3 = SpacePreset::Xi3.names();
        assert_eq!(xi3.len(), 5);
        assert!(xi3.contains(&ParamName::TIce));
        assert_eq!(SpacePreset::parse("xi_m").unwrap(), SpacePreset::XiM);
        assert!(SpacePreset::parse("nope").is_err());
    }
}
