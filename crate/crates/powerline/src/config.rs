//! Run configuration files.
//!
//! Structured plain text (TOML) with four sections: `[material]`,
//! `[scenario]`, `[[events]]`, and `[stochastic]`, plus an optional
//! `[simulation]` block for numerics. Every key is optional on top of the
//! scenario preset; a config without a preset must supply the monthly data
//! inline or through a column file. Unknown keys are rejected with a
//! diagnostic naming the key.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loading::{dft_coefficients, AreaProfile, CurrentDemand, MonthlySeries, QuantityKind};
use crate::scenario::{
    EventPayload, EventWindow, IceLayer, Region, ScenarioConfig, ScenarioKind, Wildfire,
    DEFAULT_EMISSIVITY, DEFAULT_FLAME_TEMP, DEFAULT_TRANSMISSIVITY,
};
use crate::simulation::{PicardConfig, SimulationConfig};
use crate::stochastic::space::{ParamName, RandomParameter, SpacePreset};

/// Default sample count for Monte Carlo runs.
pub const DEFAULT_MC_SAMPLES: usize = 10_000;
/// Default collocation points per dimension.
pub const DEFAULT_PCM_POINTS: usize = 5;
/// Default RNG seed.
pub const DEFAULT_SEED: u64 = 42;

/// Resolved stochastic settings attached to a run.
#[derive(Debug, Clone, Serialize)]
pub struct StochasticSettings {
    pub space: Vec<RandomParameter>,
    pub points: usize,
    pub samples: usize,
    pub seed: u64,
}

/// A fully resolved run: the simulation config plus optional stochastic
/// settings. This is also the structure whose canonical serialization is
/// digested into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedConfig {
    pub simulation: SimulationConfig,
    pub stochastic: Option<StochasticSettings>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    simulation: Option<SimulationSection>,
    material: Option<MaterialSection>,
    scenario: Option<ScenarioSection>,
    events: Option<Vec<EventSection>>,
    stochastic: Option<StochasticSection>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    dt: Option<f64>,
    horizon: Option<f64>,
    n_elements: Option<usize>,
    theta_lim: Option<f64>,
    phi_lim: Option<f64>,
    snapshot_interval: Option<f64>,
    picard: Option<PicardConfig>,
}

/// Material constants plus the mechanical keys of the sag chain.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialSection {
    young_modulus: Option<f64>,
    damage_layer_width: Option<f64>,
    fracture_energy: Option<f64>,
    density: Option<f64>,
    aging_coeff: Option<f64>,
    thermal_conductivity: Option<f64>,
    electrical_conductivity_ref: Option<f64>,
    resistivity_temp_coeff: Option<f64>,
    reference_temp: Option<f64>,
    diameter: Option<f64>,
    h_min: Option<f64>,
    melt_spreading_years: Option<f64>,
    // Sag / wind-load keys.
    pretension: Option<f64>,
    /// Alternative to `pretension`: 20% of this ultimate strength.
    ultimate_strength: Option<f64>,
    thermal_expansion: Option<f64>,
    unit_weight: Option<f64>,
    span_factor: Option<f64>,
    attack_angle: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioSection {
    preset: Option<String>,
    kind: Option<ScenarioKind>,
    /// Inline monthly wind row, ft/s.
    wind_values: Option<Vec<f64>>,
    /// Inline monthly temperature row, K.
    temp_values: Option<Vec<f64>>,
    /// Column file (month index, value) with the wind row, ft/s.
    wind_data: Option<PathBuf>,
    /// Column file (month index, value) with the temperature row, K.
    temp_data: Option<PathBuf>,
    wind_base_scale: Option<f64>,
    temp_base_scale: Option<f64>,
    base_current: Option<f64>,
    current_amplitude: Option<f64>,
    /// Initial-damage severity (spread/depth ratio of the area notch).
    a_sigma: Option<f64>,
    span: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum EventSection {
    ExtremeWind {
        start: f64,
        duration: f64,
        #[serde(default)]
        annual: bool,
        /// m/s.
        w_max: f64,
    },
    Wildfire {
        start: f64,
        duration: f64,
        #[serde(default)]
        annual: bool,
        flame_temp: Option<f64>,
        view_factor: f64,
        emissivity: Option<f64>,
        transmissivity: Option<f64>,
    },
    IceLayer {
        start: f64,
        duration: f64,
        #[serde(default)]
        annual: bool,
        /// m.
        thickness: f64,
        ice_temp: Option<f64>,
    },
}

impl EventSection {
    fn into_window(self) -> EventWindow {
        match self {
            EventSection::ExtremeWind {
                start,
                duration,
                annual,
                w_max,
            } => EventWindow {
                start,
                duration,
                annual,
                payload: EventPayload::ExtremeWind { w_max },
            },
            EventSection::Wildfire {
                start,
                duration,
                annual,
                flame_temp,
                view_factor,
                emissivity,
                transmissivity,
            } => EventWindow {
                start,
                duration,
                annual,
                payload: EventPayload::Wildfire(Wildfire {
                    flame_temp: flame_temp.unwrap_or(DEFAULT_FLAME_TEMP),
                    view_factor,
                    emissivity: emissivity.unwrap_or(DEFAULT_EMISSIVITY),
                    transmissivity: transmissivity.unwrap_or(DEFAULT_TRANSMISSIVITY),
                }),
            },
            EventSection::IceLayer {
                start,
                duration,
                annual,
                thickness,
                ice_temp,
            } => EventWindow {
                start,
                duration,
                annual,
                payload: EventPayload::IceLayer(IceLayer {
                    thickness,
                    temperature: ice_temp,
                }),
            },
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct StochasticSection {
    /// Space preset name (`xi_m`, `xi_c`, `xi_f1`..`xi_f3`, `xi_1`..`xi_3`).
    space: Option<String>,
    /// Explicit parameter list; overrides `space`.
    parameters: Option<Vec<ParamSpec>>,
    points: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamSpec {
    name: String,
    lower: Option<f64>,
    upper: Option<f64>,
}

/// Loads a monthly column file: lines of `month_index value`, `#` comments
/// allowed, exactly twelve rows whose indices cover a full year (either
/// 0..=11 or 1..=12).
pub fn load_monthly_file(path: &Path, kind: QuantityKind) -> Result<MonthlySeries> {
    let body = fs::read_to_string(path)?;
    let mut entries: Vec<(i64, f64)> = Vec::new();
    for (lineno, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split([' ', '\t', ',']).filter(|s| !s.is_empty());
        let idx: i64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad_row(path, lineno))?;
        let value: f64 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad_row(path, lineno))?;
        if parts.next().is_some() {
            return Err(bad_row(path, lineno));
        }
        entries.push((idx, value));
    }
    if entries.len() != 12 {
        return Err(Error::Config(format!(
            "{}: expected exactly 12 monthly rows, found {}",
            path.display(),
            entries.len()
        )));
    }
    entries.sort_by_key(|&(i, _)| i);
    let indices: Vec<i64> = entries.iter().map(|&(i, _)| i).collect();
    let zero_based: Vec<i64> = (0..12).collect();
    let one_based: Vec<i64> = (1..=12).collect();
    if indices != zero_based && indices != one_based {
        return Err(Error::Config(format!(
            "{}: month indices must cover 0..=11 or 1..=12, got {indices:?}",
            path.display()
        )));
    }
    let values: Vec<f64> = entries.iter().map(|&(_, v)| v).collect();
    MonthlySeries::from_slice(&values, kind)
}

fn bad_row(path: &Path, lineno: usize) -> Error {
    Error::Config(format!(
        "{}:{}: expected `month_index value`",
        path.display(),
        lineno + 1
    ))
}

/// Parses and resolves a config file against the defaults.
pub fn load_config(path: &Path) -> Result<ResolvedConfig> {
    let body = fs::read_to_string(path)?;
    let file: FileConfig = toml::from_str(&body)
        .map_err(|e| Error::Config(format!("{}: {}", path.display(), first_line(&e.to_string()))))?;
    resolve(file, path.parent().unwrap_or(Path::new(".")))
}

/// A resolved config straight from a preset name.
pub fn preset_config(region: Region) -> ResolvedConfig {
    ResolvedConfig {
        simulation: SimulationConfig::preset(region),
        stochastic: None,
    }
}

fn first_line(s: &str) -> String {
    let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
    match (lines.first(), lines.last()) {
        (Some(first), Some(last)) if first != last => format!("{first}; {}", last.trim()),
        (Some(first), _) => (*first).to_string(),
        _ => s.to_string(),
    }
}

fn resolve(file: FileConfig, base_dir: &Path) -> Result<ResolvedConfig> {
    let scen = file.scenario.unwrap_or_default();

    // Scenario foundation: preset or built from inline data.
    let mut cfg = match &scen.preset {
        Some(name) => SimulationConfig::preset(Region::parse(name)?),
        None => {
            let kind = scen.kind.ok_or_else(|| {
                Error::Config("scenario needs either `preset` or `kind` plus monthly data".into())
            })?;
            let wind = monthly_from(&scen.wind_values, &scen.wind_data, base_dir, QuantityKind::Wind)?
                .ok_or_else(|| {
                    Error::Config("scenario without preset needs `wind_values` or `wind_data`".into())
                })?;
            let temp = monthly_from(
                &scen.temp_values,
                &scen.temp_data,
                base_dir,
                QuantityKind::Temperature,
            )?
            .ok_or_else(|| {
                Error::Config("scenario without preset needs `temp_values` or `temp_data`".into())
            })?;
            let mut c = SimulationConfig::preset(Region::AmarilloTx);
            c.scenario = ScenarioConfig {
                kind,
                wind_loading: dft_coefficients(&wind),
                temp_loading: dft_coefficients(&temp),
                current: c.scenario.current,
                events: Vec::new(),
                wind_base_scale: 1.0,
                temp_base_scale: 1.0,
            };
            c
        }
    };

    // Inline data overrides a preset's rows too.
    if scen.preset.is_some() {
        if let Some(w) =
            monthly_from(&scen.wind_values, &scen.wind_data, base_dir, QuantityKind::Wind)?
        {
            cfg.scenario.wind_loading = dft_coefficients(&w);
        }
        if let Some(t) = monthly_from(
            &scen.temp_values,
            &scen.temp_data,
            base_dir,
            QuantityKind::Temperature,
        )? {
            cfg.scenario.temp_loading = dft_coefficients(&t);
        }
    }

    if let Some(v) = scen.wind_base_scale {
        cfg.scenario.wind_base_scale = v;
    }
    if let Some(v) = scen.temp_base_scale {
        cfg.scenario.temp_base_scale = v;
    }
    if let Some(v) = scen.base_current {
        cfg.scenario.current = CurrentDemand::new(v, cfg.scenario.current.amplitude)?;
    }
    if let Some(v) = scen.current_amplitude {
        cfg.scenario.current = CurrentDemand::new(cfg.scenario.current.base, v)?;
    }
    if let Some(span) = scen.span {
        cfg.sag.span = span;
        cfg.area.span = span;
    }
    if let Some(v) = scen.a_sigma {
        cfg.area = AreaProfile::new(cfg.area.nominal_area, v, cfg.area.span)?;
    }

    // Explicit events replace the preset's schedule.
    if let Some(events) = file.events {
        cfg.scenario.events = events.into_iter().map(EventSection::into_window).collect();
    }

    if let Some(m) = file.material {
        apply_material(&mut cfg, &m)?;
    }

    if let Some(s) = file.simulation {
        if let Some(v) = s.dt {
            cfg.dt = v;
        }
        if let Some(v) = s.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = s.n_elements {
            cfg.n_elements = v;
        }
        if let Some(v) = s.theta_lim {
            cfg.theta_lim = v;
        }
        if let Some(v) = s.phi_lim {
            cfg.phi_lim = v;
        }
        if let Some(v) = s.snapshot_interval {
            cfg.snapshot_interval = Some(v);
        }
        if let Some(p) = s.picard {
            cfg.picard = p;
        }
    }

    let stochastic = match file.stochastic {
        Some(s) => Some(resolve_stochastic(s, &cfg)?),
        None => None,
    };

    cfg.validate()?;
    Ok(ResolvedConfig {
        simulation: cfg,
        stochastic,
    })
}

fn monthly_from(
    inline: &Option<Vec<f64>>,
    path: &Option<PathBuf>,
    base_dir: &Path,
    kind: QuantityKind,
) -> Result<Option<MonthlySeries>> {
    if let Some(values) = inline {
        return Ok(Some(MonthlySeries::from_slice(values, kind)?));
    }
    if let Some(p) = path {
        let full = if p.is_absolute() {
            p.clone()
        } else {
            base_dir.join(p)
        };
        return Ok(Some(load_monthly_file(&full, kind)?));
    }
    Ok(None)
}

fn apply_material(cfg: &mut SimulationConfig, m: &MaterialSection) -> Result<()> {
    let mat = &mut cfg.material;
    if let Some(v) = m.young_modulus {
        mat.young_modulus = v;
    }
    if let Some(v) = m.damage_layer_width {
        mat.damage_layer_width = v;
    }
    if let Some(v) = m.fracture_energy {
        mat.fracture_energy = v;
    }
    if let Some(v) = m.density {
        mat.density = v;
    }
    if let Some(v) = m.aging_coeff {
        mat.aging_coeff = v;
    }
    if let Some(v) = m.thermal_conductivity {
        mat.thermal_conductivity = v;
    }
    if let Some(v) = m.electrical_conductivity_ref {
        mat.electrical_conductivity_ref = v;
    }
    if let Some(v) = m.resistivity_temp_coeff {
        mat.resistivity_temp_coeff = v;
    }
    if let Some(v) = m.reference_temp {
        mat.reference_temp = v;
        cfg.sag.reference_temp = v;
    }
    if let Some(v) = m.diameter {
        mat.diameter = v;
        cfg.wind.diameter = v;
        // Geometry follows the diameter unless explicitly overridden.
        cfg.area.nominal_area = mat.nominal_area();
        cfg.sag.unit_weight = mat.unit_weight();
    }
    if let Some(v) = m.h_min {
        mat.h_min = v;
    }
    if let Some(v) = m.melt_spreading_years {
        mat.melt_spreading_years = v;
    }
    match (m.pretension, m.ultimate_strength) {
        (Some(p), _) => cfg.sag.pretension = p,
        (None, Some(u)) => cfg.sag.pretension = 0.2 * u,
        (None, None) => {}
    }
    if let Some(v) = m.thermal_expansion {
        cfg.sag.thermal_expansion = v;
    }
    if let Some(v) = m.unit_weight {
        cfg.sag.unit_weight = v;
    }
    if let Some(v) = m.span_factor {
        cfg.wind.span_factor = v;
    }
    if let Some(v) = m.attack_angle {
        cfg.wind.attack_angle = v;
    }
    cfg.wind.air_density = mat.air.density;
    cfg.wind.kinematic_viscosity = mat.air.kinematic_viscosity;
    Ok(())
}

fn resolve_stochastic(s: StochasticSection, cfg: &SimulationConfig) -> Result<StochasticSettings> {
    let space = if let Some(params) = s.parameters {
        params
            .into_iter()
            .map(|p| {
                let name = ParamName::parse(&p.name)?;
                match (p.lower, p.upper) {
                    (Some(lo), Some(hi)) => RandomParameter::new(name, lo, hi),
                    (None, None) => RandomParameter::around_mean(name, cfg),
                    _ => Err(Error::Config(format!(
                        "parameter `{}` needs both `lower` and `upper`, or neither",
                        p.name
                    ))),
                }
            })
            .collect::<Result<Vec<_>>>()?
    } else if let Some(name) = s.space {
        crate::stochastic::space::parameter_space_preset(SpacePreset::parse(&name)?, cfg)?
    } else {
        return Err(Error::Config(
            "[stochastic] needs `space = \"<preset>\"` or a `parameters` list".into(),
        ));
    };
    Ok(StochasticSettings {
        space,
        points: s.points.unwrap_or(DEFAULT_PCM_POINTS),
        samples: s.samples.unwrap_or(DEFAULT_MC_SAMPLES),
        seed: s.seed.unwrap_or(DEFAULT_SEED),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn preset_with_overrides() {
        let f = write_tmp(
            r#"
[simulation]
dt = 0.02
horizon = 10.0

[scenario]
preset = "bethel_ak"
a_sigma = 2.0

[material]
fracture_energy = 12e3
ultimate_strength = 160e3
"#,
        );
        let rc = load_config(f.path()).unwrap();
        assert_eq!(rc.simulation.dt, 0.02);
        assert_eq!(rc.simulation.horizon, 10.0);
        assert_eq!(rc.simulation.material.fracture_energy, 12e3);
        assert_eq!(rc.simulation.sag.pretension, 32e3);
        assert_eq!(rc.simulation.area.spread_depth_ratio, 2.0);
        assert_eq!(rc.simulation.scenario.kind, ScenarioKind::Icing);
    }

    #[test]
    fn unknown_keys_are_named() {
        let f = write_tmp("[scenario]\npreset = \"amarillo_tx\"\nbogus_key = 1\n");
        let err = load_config(f.path()).unwrap_err().to_string();
        assert!(err.contains("bogus_key"), "diagnostic should name the key: {err}");
    }

    #[test]
    fn explicit_events_replace_preset_schedule() {
        let f = write_tmp(
            r#"
[scenario]
preset = "amarillo_tx"

[[events]]
type = "extreme_wind"
start = 2.0
duration = 0.1
annual = false
w_max = 25.0
"#,
        );
        let rc = load_config(f.path()).unwrap();
        assert_eq!(rc.simulation.scenario.events.len(), 1);
        assert_eq!(rc.simulation.scenario.events[0].start, 2.0);
    }

    #[test]
    fn stochastic_presets_resolve_with_bounds() {
        let f = write_tmp(
            r#"
[scenario]
preset = "amarillo_tx"

[stochastic]
space = "xi_1"
points = 3
seed = 7
"#,
        );
        let rc = load_config(f.path()).unwrap();
        let st = rc.stochastic.unwrap();
        assert_eq!(st.space.len(), 5);
        assert_eq!(st.points, 3);
        assert_eq!(st.seed, 7);
        assert_eq!(st.samples, DEFAULT_MC_SAMPLES);
    }

    #[test]
    fn monthly_file_round_trip() {
        let f = write_tmp(
            "# month value\n1 10.0\n2 11\n3 12\n4 13\n5 14\n6 15\n7 16\n8 15\n9 14\n10 13\n11 12\n12 11\n",
        );
        let s = load_monthly_file(f.path(), QuantityKind::Wind).unwrap();
        assert_eq!(s.values()[0], 10.0);
        assert_eq!(s.values()[11], 11.0);
    }

    #[test]
    fn monthly_file_rejects_wrong_row_count() {
        let f = write_tmp("1 10.0\n2 11\n");
        assert!(load_monthly_file(f.path(), QuantityKind::Wind).is_err());
        let f = write_tmp(
            "1 1\n1 2\n3 3\n4 4\n5 5\n6 6\n7 7\n8 8\n9 9\n10 10\n11 11\n12 12\n",
        );
        assert!(load_monthly_file(f.path(), QuantityKind::Wind).is_err());
    }

    #[test]
    fn inline_scenario_without_preset() {
        let f = write_tmp(
            r#"
[scenario]
kind = "high_wind"
wind_values = [17.75, 18.92, 20.39, 21.56, 20.09, 20.39, 18.19, 16.72, 17.75, 18.33, 18.63, 17.89]
temp_values = [276.87, 280.98, 284.76, 287.32, 290.43, 298.32, 301.37, 297.59, 295.15, 291.87, 284.37, 276.54]
"#,
        );
        let rc = load_config(f.path()).unwrap();
        assert_eq!(rc.simulation.scenario.events.len(), 0);
        assert!((rc.simulation.scenario.wind_loading.mean() - 18.884166666666667).abs() < 1e-9);
    }
}
