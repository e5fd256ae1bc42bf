//! Sag and tension mechanics of the suspended cable.
//!
//! The span is modeled as a shallow parabolic cable: thermal
//! expansion/contraction changes the suspended length, the length sets the
//! sag, and the sag together with the effective weight (self weight, ice,
//! wind) fixes the horizontal tension that loads the 1-D bar model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::material::GRAVITY;
use crate::scenario::IceLayer;

/// Geometry and pretension of the suspended span.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SagParameters {
    /// Span length between towers, m.
    pub span: f64,
    /// Initial horizontal pretension, N (commonly ~20% of ultimate strength).
    pub pretension: f64,
    /// Cable weight per unit length, N/m.
    pub unit_weight: f64,
    /// Coefficient of thermal expansion, 1/K.
    pub thermal_expansion: f64,
    /// Temperature at which the pretension was set, K.
    pub reference_temp: f64,
}

impl SagParameters {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sag.span", self.span),
            ("sag.pretension", self.pretension),
            ("sag.unit_weight", self.unit_weight),
            ("sag.thermal_expansion", self.thermal_expansion),
            ("sag.reference_temp", self.reference_temp),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(
                    "sag",
                    format!("`{name}` must be finite and positive, got {v}"),
                ));
            }
        }
        Ok(())
    }
}

/// Wind-pressure loading parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindLoadParams {
    /// Air density, kg/m^3.
    pub air_density: f64,
    /// Angle between wind and line, rad.
    pub attack_angle: f64,
    /// Span (terrain exposure) factor, in (0, 1].
    pub span_factor: f64,
    /// Bare conductor diameter, m.
    pub diameter: f64,
    /// Kinematic viscosity of air, m^2/s (for the Reynolds number).
    pub kinematic_viscosity: f64,
}

impl Default for WindLoadParams {
    fn default() -> Self {
        WindLoadParams {
            air_density: 1.225,
            attack_angle: std::f64::consts::FRAC_PI_2,
            span_factor: 0.6,
            diameter: 0.04,
            kinematic_viscosity: 15e-6,
        }
    }
}

/// Initial sag of the pretensioned span: `S0 = w_c S_L^2 / (8 H0)`.
pub fn initial_sag(p: &SagParameters) -> Result<f64> {
    if !(p.pretension > 0.0) {
        return Err(Error::invalid("sag.pretension", "must be positive"));
    }
    Ok(p.unit_weight * p.span * p.span / (8.0 * p.pretension))
}

/// Drag coefficient of a smooth circular cylinder as a function of Reynolds
/// number.
///
/// Piecewise log-linear fit through accepted experimental values, with the
/// drag-crisis drop above Re ~ 2e5; output clamped to [0.3, 2.0].
pub fn drag_coefficient(re: f64) -> f64 {
    // (Re, C_D) anchors; interpolation is linear in log10(Re).
    const ANCHORS: [(f64, f64); 9] = [
        (5.62e1, 2.0),
        (1e2, 1.5),
        (2e2, 1.3),
        (4e2, 1.1),
        (1e3, 1.0),
        (3e3, 0.95),
        (1e4, 1.2),
        (2e5, 1.2),
        (3.5e5, 0.3),
    ];
    if !(re > 0.0) {
        return 2.0;
    }
    let cd = if re <= ANCHORS[0].0 {
        2.0
    } else if re >= ANCHORS[ANCHORS.len() - 1].0 {
        0.3
    } else {
        let lr = re.log10();
        let mut value = 0.3;
        for pair in ANCHORS.windows(2) {
            let (r0, c0) = pair[0];
            let (r1, c1) = pair[1];
            if re <= r1 {
                let f = (lr - r0.log10()) / (r1.log10() - r0.log10());
                value = c0 + f * (c1 - c0);
                break;
            }
        }
        value
    };
    cd.clamp(0.3, 2.0)
}

/// Transverse wind load per unit length:
/// `w_w = P_w C_D D_eff sin^2(theta_w) alpha` with `P_w = rho v^2 / 2`.
///
/// An ice sleeve widens the projected diameter to `D + 2 t`.
pub fn wind_load(w: &WindLoadParams, wind_speed: f64, ice: Option<&IceLayer>) -> f64 {
    if wind_speed <= 0.0 {
        return 0.0;
    }
    let d_eff = w.diameter + ice.map_or(0.0, |i| 2.0 * i.thickness);
    let pressure = 0.5 * w.air_density * wind_speed * wind_speed;
    let re = wind_speed * d_eff / w.kinematic_viscosity;
    let cd = drag_coefficient(re);
    pressure * cd * d_eff * w.attack_angle.sin().powi(2) * w.span_factor
}

/// Weight of a uniform ice sleeve per unit length:
/// `w_i = rho_ice * pi (D + t) t * g`.
pub fn ice_load(diameter: f64, ice_thickness: f64, ice_density: f64) -> f64 {
    let volume = std::f64::consts::PI * (diameter + ice_thickness) * ice_thickness;
    ice_density * volume * GRAVITY
}

/// Horizontal tension of the span at conductor temperature offset `dtheta`
/// from the reference, under the current wind speed and optional ice sleeve.
///
/// Chain: unloaded length from the initial sag, thermal change of length,
/// new sag from the length surplus, tension from sag and effective weight
/// `W = sqrt((w_c + w_i)^2 + w_w^2)`.
///
/// Fails when thermal contraction would pull the cable taut (`L <= S_L`),
/// which is outside the shallow-sag model's validity.
pub fn tension_at_temperature(
    p: &SagParameters,
    w: &WindLoadParams,
    dtheta: f64,
    wind_speed: f64,
    ice: Option<&IceLayer>,
    ice_density: f64,
) -> Result<f64> {
    let s0 = initial_sag(p)?;
    let l0 = p.span + 8.0 * s0 * s0 / (3.0 * p.span);
    let length = l0 * (1.0 + p.thermal_expansion * dtheta);
    if length <= p.span {
        return Err(Error::solver(
            "tension_at_temperature",
            format!(
                "thermal contraction (dtheta = {dtheta:.2} K) leaves no sag: \
                 cable length {length:.4} m <= span {} m",
                p.span
            ),
        ));
    }
    let sag = (3.0 * p.span * (length - p.span) / 8.0).sqrt();
    let w_wind = wind_load(w, wind_speed, ice);
    let w_ice = ice.map_or(0.0, |i| ice_load(w.diameter, i.thickness, ice_density));
    let total = ((p.unit_weight + w_ice).powi(2) + w_wind * w_wind).sqrt();
    Ok(total * p.span * p.span / (8.0 * sag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SagParameters {
        SagParameters {
            span: 200.0,
            pretension: 30e3,
            unit_weight: 30.0,
            thermal_expansion: 2.3e-5,
            reference_temp: 298.15,
        }
    }

    #[test]
    fn initial_sag_examples() {
        assert_eq!(initial_sag(&params()).unwrap(), 5.0);
        let mut p = params();
        p.unit_weight = 1e-9;
        assert!(initial_sag(&p).unwrap() < 1e-9);
        // Doubling the pretension halves the sag.
        let mut p = params();
        p.pretension *= 2.0;
        assert!((initial_sag(&p).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn tension_round_trip_at_reference() {
        let p = params();
        let w = WindLoadParams::default();
        let h = tension_at_temperature(&p, &w, 0.0, 0.0, None, 917.0).unwrap();
        assert!((h - p.pretension).abs() / p.pretension < 1e-6);
    }

    #[test]
    fn heating_lowers_tension() {
        let p = params();
        let w = WindLoadParams::default();
        let mut prev = f64::INFINITY;
        for dtheta in [-30.0, -10.0, 0.0, 10.0, 30.0, 60.0] {
            let h = tension_at_temperature(&p, &w, dtheta, 0.0, None, 917.0).unwrap();
            assert!(h < prev, "tension must strictly decrease with temperature");
            assert!(h.is_finite() && h > 0.0);
            prev = h;
        }
    }

    #[test]
    fn cooling_by_twenty_kelvin_oracle() {
        // Step-by-step evaluation of the chain, kept independent of the
        // implementation's internal ordering.
        let p = params();
        let w = WindLoadParams::default();
        let s0 = 30.0 * 200.0_f64 * 200.0 / (8.0 * 30e3); // 5 m
        let l0 = 200.0 + 8.0 * s0 * s0 / (3.0 * 200.0);
        let length = l0 * (1.0 + 2.3e-5 * (-20.0));
        // Contraction is alpha * 20 = 4.6e-4 of the unloaded length.
        assert!((1.0 - length / l0 - 4.6e-4).abs() < 1e-9);
        let sag = (3.0 * 200.0 * (length - 200.0) / 8.0_f64).sqrt();
        let expected = 30.0 * 200.0 * 200.0 / (8.0 * sag);
        let h = tension_at_temperature(&p, &w, -20.0, 0.0, None, 917.0).unwrap();
        assert!((h - expected).abs() / expected < 1e-12);
        assert!(h > p.pretension);
    }

    #[test]
    fn taut_line_is_an_error() {
        let p = params();
        let w = WindLoadParams::default();
        // The default geometry runs out of sag near dtheta ~ -89 K.
        assert!(tension_at_temperature(&p, &w, -120.0, 0.0, None, 917.0).is_err());
    }

    #[test]
    fn wind_load_examples() {
        let w = WindLoadParams::default();
        assert_eq!(wind_load(&w, 0.0, None), 0.0);
        // Pressure at 10 m/s is 61.25 Pa.
        let v = 10.0;
        let re = v * w.diameter / w.kinematic_viscosity;
        let expected = 61.25 * drag_coefficient(re) * 0.04 * 0.6;
        assert!((wind_load(&w, v, None) - expected).abs() < 1e-12);
    }

    #[test]
    fn iced_wind_load_widens_projection() {
        let w = WindLoadParams::default();
        let ice = IceLayer {
            thickness: 0.00635,
            temperature: None,
        };
        // Projected width grows to D + 2t = 0.0527 m.
        let bare = wind_load(&w, 10.0, None);
        let iced = wind_load(&w, 10.0, Some(&ice));
        let d_eff: f64 = 0.04 + 2.0 * 0.00635;
        assert!((d_eff - 0.0527).abs() < 1e-12);
        let re = 10.0 * d_eff / w.kinematic_viscosity;
        let expected = 61.25 * drag_coefficient(re) * d_eff * 0.6;
        assert!((iced - expected).abs() < 1e-12);
        assert!(iced > bare);
    }

    #[test]
    fn ice_load_examples() {
        assert_eq!(ice_load(0.04, 0.0, 917.0), 0.0);
        // 0.25 inch of ice on the 40 mm conductor.
        let w_i = ice_load(0.04, 0.00635, 917.0);
        assert!((w_i - 8.32).abs() < 0.01);
        // Superlinear in thickness: doubling more than doubles the load.
        assert!(ice_load(0.04, 0.0127, 917.0) > 2.0 * w_i);
    }

    #[test]
    fn drag_curve_anchors_and_clamp() {
        assert!((drag_coefficient(1e4) - 1.2).abs() < 0.05);
        assert!((drag_coefficient(1e3) - 1.0).abs() < 0.05);
        for re in [1e-2, 1.0, 37.0, 333.0, 4.2e3, 9e4, 3e5, 1e6, 1e9] {
            let cd = drag_coefficient(re);
            assert!((0.3..=2.0).contains(&cd), "Re = {re} gave C_D = {cd}");
        }
        assert_eq!(drag_coefficient(1.0), 2.0);
        assert_eq!(drag_coefficient(1e7), 0.3);
    }

    #[test]
    fn effective_weight_never_below_self_weight() {
        let p = params();
        let w = WindLoadParams::default();
        let h_ref = tension_at_temperature(&p, &w, 5.0, 0.0, None, 917.0).unwrap();
        for v in [1.0, 5.0, 20.0, 40.0] {
            let h = tension_at_temperature(&p, &w, 5.0, v, None, 917.0).unwrap();
            assert!(h >= h_ref);
        }
    }
}
