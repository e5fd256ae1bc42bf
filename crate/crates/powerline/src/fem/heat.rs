//! Surface heat-exchange models for the temperature equation.

use crate::error::{Error, Result};
use crate::material::{MaterialProperties, SECONDS_PER_YEAR};
use crate::sag::ice_load;
use crate::scenario::{AmbientState, Wildfire};

/// Stefan-Boltzmann constant, W/(m^2 K^4).
pub const STEFAN_BOLTZMANN: f64 = 5.670e-8;

/// Freezing point of water, K.
pub const FREEZING_POINT: f64 = 273.15;

/// Cross-flow cylinder correlation constants `(C, m)` per Reynolds-number
/// band: `Nu = C Re^m Pr^(1/3)`.
const NUSSELT_BANDS: [(f64, f64, f64, f64); 5] = [
    (0.4, 4.0, 0.989, 0.330),
    (4.0, 40.0, 0.911, 0.385),
    (40.0, 4000.0, 0.683, 0.466),
    (4000.0, 40_000.0, 0.193, 0.618),
    (40_000.0, 400_000.0, 0.027, 0.805),
];

/// Convective heat-transfer coefficient for cross flow over the conductor,
/// W/(m^2 K).
///
/// At zero wind the forced-convection correlation is invalid; a configured
/// natural-convection floor `h_min` is returned instead. Reynolds numbers
/// outside the tabulated range use the nearest band.
pub fn convective_coefficient(wind_speed: f64, d_eff: f64, props: &MaterialProperties) -> f64 {
    if wind_speed <= 0.0 {
        return props.h_min;
    }
    let air = &props.air;
    let re = wind_speed * d_eff / air.kinematic_viscosity;
    let (c, m) = nusselt_constants(re);
    let nu = c * re.powf(m) * air.prandtl.cbrt();
    let h = nu * air.thermal_conductivity / d_eff;
    h.max(props.h_min)
}

fn nusselt_constants(re: f64) -> (f64, f64) {
    for &(lo, hi, c, m) in &NUSSELT_BANDS {
        if re >= lo && re < hi {
            return (c, m);
        }
    }
    if re < NUSSELT_BANDS[0].0 {
        let b = NUSSELT_BANDS[0];
        (b.2, b.3)
    } else {
        let b = NUSSELT_BANDS[NUSSELT_BANDS.len() - 1];
        (b.2, b.3)
    }
}

/// Surface heat-exchange terms entering the temperature solve for one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeatExchange {
    /// Convective cooling to the ambient air over the local surface area.
    Convective { h: f64, ambient: f64 },
    /// Convection plus absorbed wildfire radiation.
    ConvectiveFire {
        h: f64,
        ambient: f64,
        /// Radiative flux absorbed per unit surface area,
        /// `eps * sigma * theta_f^4 * view * tau`, W/m^2.
        fire_flux: f64,
    },
    /// Ice-covered line: conduction through the sleeve replaces convection
    /// entirely, plus a latent-heat sink while the conductor is above
    /// freezing.
    IceCovered {
        /// Ring conductance per unit length, `2 pi k_ice / ln(r2/r1)`,
        /// W/(m K).
        ring_conductance: f64,
        /// Ice temperature, K.
        ice_temp: f64,
        /// Latent sink per unit length while melting, W/m.
        melt_sink: f64,
    },
}

impl HeatExchange {
    /// Builds the step's heat-exchange model from the sampled environment.
    ///
    /// Ice takes precedence over fire (a sleeve shields the surface). The
    /// convective coefficient is evaluated at the nominal diameter; the
    /// local surface measure enters through the assembly.
    pub fn from_ambient(ambient: &AmbientState, props: &MaterialProperties) -> Result<Self> {
        if let Some(ice) = &ambient.ice {
            let r1 = props.diameter / 2.0;
            let r2 = r1 + ice.thickness;
            if r2 <= r1 {
                return Err(Error::invalid(
                    "events.thickness",
                    format!(
                        "ice outer radius {r2} m must exceed the conductor radius {r1} m; \
                         an ice event needs positive thickness"
                    ),
                ));
            }
            let ring_conductance =
                2.0 * std::f64::consts::PI * props.ice.thermal_conductivity / (r2 / r1).ln();
            let ice_temp = ice
                .temperature
                .unwrap_or_else(|| ambient.ambient_temp.min(FREEZING_POINT));
            // Latent heat of the full sleeve, spread over the configured
            // melt duration to obtain a power per unit length.
            let sleeve_mass = ice_load(props.diameter, ice.thickness, props.ice.density)
                / crate::material::GRAVITY;
            let melt_sink = sleeve_mass * props.ice.latent_heat
                / (props.melt_spreading_years * SECONDS_PER_YEAR);
            return Ok(HeatExchange::IceCovered {
                ring_conductance,
                ice_temp,
                melt_sink,
            });
        }
        let h = convective_coefficient(ambient.wind_speed, props.diameter, props);
        if let Some(fire) = &ambient.fire {
            return Ok(HeatExchange::ConvectiveFire {
                h,
                ambient: ambient.ambient_temp,
                fire_flux: fire_flux(fire),
            });
        }
        Ok(HeatExchange::Convective {
            h,
            ambient: ambient.ambient_temp,
        })
    }
}

/// Radiative flux absorbed from a wildfire per unit surface area, W/m^2.
pub fn fire_flux(fire: &Wildfire) -> f64 {
    fire.emissivity
        * STEFAN_BOLTZMANN
        * fire.flame_temp.powi(4)
        * fire.view_factor
        * fire.transmissivity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::IceLayer;

    #[test]
    fn band_selection_at_re_8128() {
        assert_eq!(nusselt_constants(8128.0), (0.193, 0.618));
        assert_eq!(nusselt_constants(0.5), (0.989, 0.330));
        assert_eq!(nusselt_constants(39.0), (0.911, 0.385));
        assert_eq!(nusselt_constants(1e5), (0.027, 0.805));
        // Out-of-range values clamp to the nearest band.
        assert_eq!(nusselt_constants(0.01), (0.989, 0.330));
        assert_eq!(nusselt_constants(1e7), (0.027, 0.805));
    }

    #[test]
    fn convective_coefficient_example() {
        // v = 3.048 m/s, D = 0.04 m -> Re = 8128, Nu = 0.193 Re^0.618 Pr^(1/3).
        let props = MaterialProperties::default();
        let h = convective_coefficient(3.048, 0.04, &props);
        let re: f64 = 3.048 * 0.04 / 15e-6;
        let nu = 0.193 * re.powf(0.618) * 0.71_f64.cbrt();
        let expected = nu * 0.0295 / 0.04;
        assert!((h - expected).abs() < 1e-12);
        assert!((h - 33.1).abs() < 0.1);
    }

    #[test]
    fn coefficient_increases_with_wind_within_band() {
        let props = MaterialProperties::default();
        let mut prev = 0.0;
        // All these stay inside the 4000..40000 band.
        for v in [2.0, 3.0, 5.0, 8.0, 12.0] {
            let h = convective_coefficient(v, 0.04, &props);
            assert!(h > prev);
            prev = h;
        }
    }

    #[test]
    fn zero_wind_returns_floor() {
        let props = MaterialProperties::default();
        assert_eq!(convective_coefficient(0.0, 0.04, &props), props.h_min);
    }

    #[test]
    fn ice_mode_validation_and_precedence() {
        let props = MaterialProperties::default();
        let mut ambient = AmbientState {
            wind_speed: 5.0,
            ambient_temp: 260.0,
            extreme_wind_active: false,
            fire: None,
            ice: Some(IceLayer {
                thickness: 0.0,
                temperature: None,
            }),
        };
        // Zero thickness collapses the ring: rejected.
        assert!(HeatExchange::from_ambient(&ambient, &props).is_err());

        ambient.ice = Some(IceLayer {
            thickness: 0.00635,
            temperature: None,
        });
        match HeatExchange::from_ambient(&ambient, &props).unwrap() {
            HeatExchange::IceCovered {
                ring_conductance,
                ice_temp,
                melt_sink,
            } => {
                let expected =
                    2.0 * std::f64::consts::PI * 2.39 / (0.02635_f64 / 0.02).ln();
                assert!((ring_conductance - expected).abs() < 1e-9);
                assert_eq!(ice_temp, 260.0);
                assert!(melt_sink > 0.0);
            }
            other => panic!("expected ice mode, got {other:?}"),
        }
    }

    #[test]
    fn fire_flux_magnitude() {
        let fire = Wildfire {
            flame_temp: 1473.15,
            view_factor: 0.0125,
            emissivity: 0.9,
            transmissivity: 0.9,
        };
        let q = fire_flux(&fire);
        let expected = 0.9 * STEFAN_BOLTZMANN * 1473.15_f64.powi(4) * 0.0125 * 0.9;
        assert!((q - expected).abs() < 1e-9);
        assert!(q > 2000.0 && q < 4000.0);
    }
}
