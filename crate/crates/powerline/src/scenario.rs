//! Regional loading data and scheduled environmental events.
//!
//! A [`ScenarioConfig`] bundles the Fourier-synthesized wind/temperature
//! cycles for one region with the event windows (seasonal extreme wind, a
//! wildfire exposure, or winter ice cover) that perturb them. The simulation
//! loop queries it through [`ambient_at`], which returns everything the
//! solvers need to know about the environment at one instant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loading::{
    dft_coefficients, evaluate_loading, CurrentDemand, FourierLoading, MonthlySeries,
    QuantityKind, FT_PER_S_TO_M_PER_S,
};

/// The three studied regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    AmarilloTx,
    SanDiegoCa,
    BethelAk,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::AmarilloTx, Region::SanDiegoCa, Region::BethelAk];

    pub fn parse(name: &str) -> Result<Region> {
        match name {
            "amarillo_tx" => Ok(Region::AmarilloTx),
            "san_diego_ca" => Ok(Region::SanDiegoCa),
            "bethel_ak" => Ok(Region::BethelAk),
            other => Err(Error::Config(format!(
                "unknown preset `{other}`; expected amarillo_tx, san_diego_ca, or bethel_ak"
            ))),
        }
    }
}

/// Which unexpected condition a scenario studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    HighWind,
    Wildfire,
    Icing,
}

/// Published monthly wind (ft/s) and temperature (K) rows for one region.
pub struct RegionTables {
    pub wind: MonthlySeries,
    pub temperature: MonthlySeries,
}

/// Monthly averages for the three regions, January through December.
/// Wind in ft/s as published, temperature in K.
pub fn table_rows(region: Region) -> RegionTables {
    let (wind, temp): ([f64; 12], [f64; 12]) = match region {
        Region::AmarilloTx => (
            [
                17.75, 18.92, 20.39, 21.56, 20.09, 20.39, 18.19, 16.72, 17.75, 18.33, 18.63,
                17.89,
            ],
            [
                276.87, 280.98, 284.76, 287.32, 290.43, 298.32, 301.37, 297.59, 295.15, 291.87,
                284.37, 276.54,
            ],
        ),
        Region::SanDiegoCa => (
            [
                7.48, 8.95, 9.68, 10.56, 10.85, 10.56, 10.27, 9.97, 9.68, 8.36, 7.48, 7.19,
            ],
            [
                289.15, 290.43, 292.37, 291.93, 290.93, 293.65, 295.59, 297.09, 298.26, 296.71,
                290.54, 287.65,
            ],
        ),
        Region::BethelAk => (
            [
                20.68, 20.24, 18.77, 17.01, 15.55, 14.23, 14.08, 15.11, 15.40, 16.72, 18.04,
                18.92,
            ],
            [
                256.48, 261.82, 257.32, 268.98, 279.54, 283.65, 284.98, 284.93, 281.76, 272.87,
                266.37, 256.82,
            ],
        ),
    };
    RegionTables {
        wind: MonthlySeries::new(wind, QuantityKind::Wind).expect("embedded wind row"),
        temperature: MonthlySeries::new(temp, QuantityKind::Temperature)
            .expect("embedded temperature row"),
    }
}

/// Wildfire exposure parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wildfire {
    /// Average temperature of the radiating surface, K.
    pub flame_temp: f64,
    /// Geometric view factor between flame and conductor, in [0, 1].
    pub view_factor: f64,
    /// Flame emissivity, in (0, 1].
    pub emissivity: f64,
    /// Atmospheric transmissivity, in (0, 1].
    pub transmissivity: f64,
}

/// Uniform ice sleeve parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IceLayer {
    /// Radial ice thickness, m.
    pub thickness: f64,
    /// Ice temperature, K. `None` defaults to `min(ambient, 273.15)`.
    pub temperature: Option<f64>,
}

/// What happens during an event window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventPayload {
    /// Wind speed floor in m/s; the ambient wind is raised to at least this.
    ExtremeWind { w_max: f64 },
    Wildfire(Wildfire),
    IceLayer(IceLayer),
}

/// A scheduled environmental event. With `annual = true` the window repeats
/// every year from `start` onward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventWindow {
    /// Start time, years.
    pub start: f64,
    /// Window length, years.
    pub duration: f64,
    /// Repeat every year starting at `start`.
    #[serde(default)]
    pub annual: bool,
    pub payload: EventPayload,
}

impl EventWindow {
    pub fn validate(&self) -> Result<()> {
        if !(self.duration > 0.0) {
            return Err(Error::invalid("events.duration", "must be positive"));
        }
        if !(self.start >= 0.0) {
            return Err(Error::invalid("events.start", "must be >= 0"));
        }
        match self.payload {
            EventPayload::ExtremeWind { w_max } => {
                if !(w_max >= 0.0) {
                    return Err(Error::invalid("events.w_max", "must be >= 0"));
                }
            }
            EventPayload::Wildfire(f) => {
                if !(f.view_factor >= 0.0 && f.view_factor <= 1.0) {
                    return Err(Error::invalid("events.view_factor", "must lie in [0, 1]"));
                }
                if !(f.emissivity > 0.0 && f.emissivity <= 1.0) {
                    return Err(Error::invalid("events.emissivity", "must lie in (0, 1]"));
                }
                if !(f.transmissivity > 0.0 && f.transmissivity <= 1.0) {
                    return Err(Error::invalid("events.transmissivity", "must lie in (0, 1]"));
                }
                if !(f.flame_temp > 0.0) {
                    return Err(Error::invalid("events.flame_temp", "must be positive"));
                }
            }
            EventPayload::IceLayer(i) => {
                if !(i.thickness >= 0.0) {
                    return Err(Error::invalid("events.thickness", "must be >= 0"));
                }
            }
        }
        Ok(())
    }

    /// Whether the window covers time `t`.
    pub fn contains(&self, t: f64) -> bool {
        if self.annual {
            if t < self.start {
                return false;
            }
            let phase = (t - self.start).rem_euclid(1.0);
            phase < self.duration
        } else {
            t >= self.start && t < self.start + self.duration
        }
    }
}

/// Loading data plus event schedule for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub wind_loading: FourierLoading,
    pub temp_loading: FourierLoading,
    pub current: CurrentDemand,
    pub events: Vec<EventWindow>,
    /// Multiplicative scale on the synthesized wind cycle (`w_b`).
    pub wind_base_scale: f64,
    /// Multiplicative scale on the synthesized temperature cycle (`theta_b`).
    pub temp_base_scale: f64,
}

impl ScenarioConfig {
    /// Windows that start beyond the horizon are inert rather than invalid;
    /// shortened runs against a long-lived preset stay usable.
    pub fn validate(&self, _horizon: f64) -> Result<()> {
        if !(self.wind_base_scale > 0.0) {
            return Err(Error::invalid("scenario.wind_base_scale", "must be > 0"));
        }
        if !(self.temp_base_scale > 0.0) {
            return Err(Error::invalid("scenario.temp_base_scale", "must be > 0"));
        }
        for ev in &self.events {
            ev.validate()?;
        }
        Ok(())
    }

    /// Drops every event window, leaving only the seasonal cycling.
    pub fn without_events(mut self) -> Self {
        self.events.clear();
        self
    }
}

/// Environment snapshot handed to the solvers for one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmbientState {
    /// Wind speed in m/s (already converted and scaled).
    pub wind_speed: f64,
    /// Ambient air temperature, K.
    pub ambient_temp: f64,
    /// True when an extreme-wind window raised the wind speed.
    pub extreme_wind_active: bool,
    pub fire: Option<Wildfire>,
    pub ice: Option<IceLayer>,
}

/// Samples the scenario environment at time `t` (years).
///
/// Wind is synthesized in ft/s, scaled by `w_b`, and converted to m/s here;
/// an active extreme-wind window can only raise it (max semantics). Fire and
/// ice payloads attach whenever their windows cover `t`.
pub fn ambient_at(cfg: &ScenarioConfig, t: f64) -> AmbientState {
    let mut wind =
        cfg.wind_base_scale * evaluate_loading(&cfg.wind_loading, t) * FT_PER_S_TO_M_PER_S;
    let ambient_temp = cfg.temp_base_scale * evaluate_loading(&cfg.temp_loading, t);
    let mut extreme_wind_active = false;
    let mut fire = None;
    let mut ice = None;
    for ev in &cfg.events {
        if !ev.contains(t) {
            continue;
        }
        match ev.payload {
            EventPayload::ExtremeWind { w_max } => {
                if w_max > wind {
                    wind = w_max;
                    extreme_wind_active = true;
                }
            }
            EventPayload::Wildfire(f) => fire = Some(f),
            EventPayload::IceLayer(i) => ice = Some(i),
        }
    }
    AmbientState {
        wind_speed: wind.max(0.0),
        ambient_temp,
        extreme_wind_active,
        fire,
        ice,
    }
}

/// Default flame temperature for wildfire presets, K (a 1200 C flame).
pub const DEFAULT_FLAME_TEMP: f64 = 1473.15;
/// Default flame emissivity for wildfire presets.
pub const DEFAULT_EMISSIVITY: f64 = 0.9;
/// Default atmospheric transmissivity for wildfire presets.
pub const DEFAULT_TRANSMISSIVITY: f64 = 0.9;
/// Default wildfire view factor for presets.
pub const DEFAULT_VIEW_FACTOR: f64 = 0.0125;
/// Default extreme-wind speed for the high-wind preset: 100 ft/s in m/s.
pub const DEFAULT_W_MAX: f64 = 100.0 * FT_PER_S_TO_M_PER_S;
/// Default ice thickness for the icing preset: 0.25 inch in metres.
pub const DEFAULT_ICE_THICKNESS: f64 = 0.25 * 0.0254;
/// Default amplitude of the seasonal current oscillation, A.
pub const DEFAULT_CURRENT_AMPLITUDE: f64 = 150.0;
/// Default base current: allowable ampacity of the 40 mm conductor, A.
pub const DEFAULT_BASE_CURRENT: f64 = 1500.0;

/// Builds the scenario preset for a region: the published monthly rows are
/// synthesized into annual cycles and the region's characteristic event
/// schedule is attached.
///
/// Event timing defaults: the high-wind scenario sees a one-month extreme
/// wind window each year starting at t = 1; the wildfire scenario a single
/// 0.02 yr window at t = 10; the icing scenario carries ice through every
/// month whose published mean temperature is below freezing.
pub fn scenario_presets(region: Region) -> ScenarioConfig {
    let rows = table_rows(region);
    let wind_loading = dft_coefficients(&rows.wind);
    let temp_loading = dft_coefficients(&rows.temperature);
    let current = CurrentDemand::new(DEFAULT_BASE_CURRENT, DEFAULT_CURRENT_AMPLITUDE)
        .expect("default current");

    let (kind, events) = match region {
        Region::AmarilloTx => (
            ScenarioKind::HighWind,
            vec![EventWindow {
                start: 1.0,
                duration: 1.0 / 12.0,
                annual: true,
                payload: EventPayload::ExtremeWind { w_max: DEFAULT_W_MAX },
            }],
        ),
        Region::SanDiegoCa => (
            ScenarioKind::Wildfire,
            vec![EventWindow {
                start: 10.0,
                duration: 0.02,
                annual: false,
                payload: EventPayload::Wildfire(Wildfire {
                    flame_temp: DEFAULT_FLAME_TEMP,
                    view_factor: DEFAULT_VIEW_FACTOR,
                    emissivity: DEFAULT_EMISSIVITY,
                    transmissivity: DEFAULT_TRANSMISSIVITY,
                }),
            }],
        ),
        Region::BethelAk => {
            let ice = IceLayer {
                thickness: DEFAULT_ICE_THICKNESS,
                temperature: None,
            };
            (ScenarioKind::Icing, freezing_windows(&rows.temperature, ice))
        }
    };

    ScenarioConfig {
        kind,
        wind_loading,
        temp_loading,
        current,
        events,
        wind_base_scale: 1.0,
        temp_base_scale: 1.0,
    }
}

/// Annual ice windows covering consecutive runs of months whose published
/// mean temperature is below freezing.
fn freezing_windows(temps: &MonthlySeries, ice: IceLayer) -> Vec<EventWindow> {
    let freezing: Vec<bool> = temps.values().iter().map(|&t| t < 273.15).collect();
    let mut windows = Vec::new();
    let mut m = 0;
    while m < 12 {
        if freezing[m] {
            let first = m;
            while m < 12 && freezing[m] {
                m += 1;
            }
            windows.push(EventWindow {
                start: first as f64 / 12.0,
                duration: (m - first) as f64 / 12.0,
                annual: true,
                payload: EventPayload::IceLayer(ice),
            });
        } else {
            m += 1;
        }
    }
    windows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_rows_match_published_values() {
        let tx = table_rows(Region::AmarilloTx);
        assert_eq!(tx.temperature.values()[6], 301.37); // July
        let ca = table_rows(Region::SanDiegoCa);
        assert_eq!(ca.wind.values()[4], 10.85); // May
        let ak = table_rows(Region::BethelAk);
        assert_eq!(ak.temperature.values()[0], 256.48); // January
    }

    #[test]
    fn preset_kinds() {
        assert_eq!(scenario_presets(Region::AmarilloTx).kind, ScenarioKind::HighWind);
        assert_eq!(scenario_presets(Region::SanDiegoCa).kind, ScenarioKind::Wildfire);
        assert_eq!(scenario_presets(Region::BethelAk).kind, ScenarioKind::Icing);
    }

    #[test]
    fn ambient_at_january_san_diego() {
        let cfg = scenario_presets(Region::SanDiegoCa).without_events();
        let s = ambient_at(&cfg, 0.0);
        let expected = 7.48 * FT_PER_S_TO_M_PER_S;
        assert!((s.wind_speed - expected).abs() / expected < 1e-9);
        assert!(s.fire.is_none() && s.ice.is_none());
    }

    #[test]
    fn extreme_wind_uses_max_semantics() {
        let mut cfg = scenario_presets(Region::AmarilloTx);
        cfg.events = vec![EventWindow {
            start: 0.0,
            duration: 1.0,
            annual: false,
            payload: EventPayload::ExtremeWind { w_max: 100.0 * FT_PER_S_TO_M_PER_S },
        }];
        let s = ambient_at(&cfg, 0.5);
        assert_eq!(s.wind_speed, 30.48);
        assert!(s.extreme_wind_active);

        // A "maximum" below the ambient wind changes nothing.
        cfg.events[0].payload = EventPayload::ExtremeWind { w_max: 0.1 };
        let base = ambient_at(&cfg.clone().without_events(), 0.5);
        let s = ambient_at(&cfg, 0.5);
        assert_eq!(s.wind_speed, base.wind_speed);
        assert!(!s.extreme_wind_active);
    }

    #[test]
    fn annual_recurrence() {
        let w = EventWindow {
            start: 1.0,
            duration: 1.0 / 12.0,
            annual: true,
            payload: EventPayload::ExtremeWind { w_max: 30.0 },
        };
        assert!(!w.contains(0.5));
        assert!(w.contains(1.0));
        assert!(w.contains(1.05));
        assert!(!w.contains(1.2));
        assert!(w.contains(7.03));
        assert!(!w.contains(7.5));
    }

    #[test]
    fn periodic_without_events() {
        let cfg = scenario_presets(Region::AmarilloTx).without_events();
        for t in [0.12, 0.7] {
            let a = ambient_at(&cfg, t);
            let b = ambient_at(&cfg, t + 1.0);
            assert!((a.wind_speed - b.wind_speed).abs() < 1e-10);
            assert!((a.ambient_temp - b.ambient_temp).abs() < 1e-10);
        }
    }

    #[test]
    fn fire_and_ice_never_coexist_in_presets() {
        for region in Region::ALL {
            let cfg = scenario_presets(region);
            let mut t = 0.0;
            while t < 50.0 {
                let s = ambient_at(&cfg, t);
                assert!(!(s.fire.is_some() && s.ice.is_some()));
                t += 0.01;
            }
        }
    }

    #[test]
    fn bethel_ice_covers_freezing_months_only() {
        let cfg = scenario_presets(Region::BethelAk);
        // January and November are below freezing, June is not.
        assert!(ambient_at(&cfg, 2.0).ice.is_some());
        assert!(ambient_at(&cfg, 2.0 + 10.5 / 12.0).ice.is_some());
        assert!(ambient_at(&cfg, 2.0 + 5.5 / 12.0).ice.is_none());
    }

    #[test]
    fn event_validation() {
        let bad = EventWindow {
            start: 0.0,
            duration: 0.0,
            annual: false,
            payload: EventPayload::ExtremeWind { w_max: 1.0 },
        };
        assert!(bad.validate().is_err());
        let bad_view = EventWindow {
            start: 0.0,
            duration: 1.0,
            annual: false,
            payload: EventPayload::Wildfire(Wildfire {
                flame_temp: 1000.0,
                view_factor: 1.5,
                emissivity: 0.9,
                transmissivity: 0.9,
            }),
        };
        assert!(bad_view.validate().is_err());
    }
}
