//! Conductor, air, and ice properties.
//!
//! Defaults describe an all-aluminum conductor of 40 mm diameter together
//! with standard air and ice constants. Every value can be overridden from a
//! config file.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Standard gravity, m/s^2.
pub const GRAVITY: f64 = 9.81;

/// Seconds in one simulation year.
pub const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;

/// Air constants used by the convective-cooling correlation and wind loads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AirProperties {
    /// Density, kg/m^3.
    pub density: f64,
    /// Kinematic viscosity, m^2/s.
    pub kinematic_viscosity: f64,
    /// Thermal conductivity, W/(m K).
    pub thermal_conductivity: f64,
    /// Prandtl number.
    pub prandtl: f64,
}

impl Default for AirProperties {
    fn default() -> Self {
        AirProperties {
            density: 1.225,
            kinematic_viscosity: 15e-6,
            thermal_conductivity: 0.0295,
            prandtl: 0.71,
        }
    }
}

/// Ice constants for the icing scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IceProperties {
    /// Density, kg/m^3.
    pub density: f64,
    /// Electrical resistivity, Ohm m.
    pub resistivity: f64,
    /// Thermal conductivity, W/(m K).
    pub thermal_conductivity: f64,
    /// Latent heat of fusion, J/kg.
    pub latent_heat: f64,
}

impl Default for IceProperties {
    fn default() -> Self {
        IceProperties {
            density: 917.0,
            resistivity: 1e9,
            thermal_conductivity: 2.39,
            latent_heat: 3.36e5,
        }
    }
}

/// Conductor material constants plus the geometric and numerical parameters
/// the field solvers need.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialProperties {
    /// Young's modulus, Pa.
    pub young_modulus: f64,
    /// Phase-field damage layer width, m.
    pub damage_layer_width: f64,
    /// Fracture energy release rate, N/m.
    pub fracture_energy: f64,
    /// Density, kg/m^3.
    pub density: f64,
    /// Aging coefficient, m^5/(yr kg).
    pub aging_coeff: f64,
    /// Thermal conductivity, W/(m K).
    pub thermal_conductivity: f64,
    /// Electrical conductivity at the reference temperature, S/m.
    pub electrical_conductivity_ref: f64,
    /// Temperature coefficient of resistivity, 1/K.
    pub resistivity_temp_coeff: f64,
    /// Reference temperature, K.
    pub reference_temp: f64,
    /// Nominal conductor diameter, m.
    pub diameter: f64,
    /// Natural-convection floor for the heat-transfer coefficient at zero
    /// wind, W/(m^2 K); the forced-convection correlation is invalid there.
    pub h_min: f64,
    /// Duration over which the latent-heat melt sink is spread, years.
    pub melt_spreading_years: f64,
    pub air: AirProperties,
    pub ice: IceProperties,
}

impl Default for MaterialProperties {
    fn default() -> Self {
        MaterialProperties {
            young_modulus: 69e9,
            damage_layer_width: 0.02,
            fracture_energy: 10e3,
            density: 2700.0,
            aging_coeff: 1e-10,
            thermal_conductivity: 237.0,
            electrical_conductivity_ref: 3.77e7,
            resistivity_temp_coeff: 3.9e-3,
            reference_temp: 298.15,
            diameter: 0.04,
            h_min: 2.0,
            melt_spreading_years: 1.0 / 12.0,
            air: AirProperties::default(),
            ice: IceProperties::default(),
        }
    }
}

impl MaterialProperties {
    /// Undamaged cross-sectional area implied by the nominal diameter, m^2.
    pub fn nominal_area(&self) -> f64 {
        PI * self.diameter * self.diameter / 4.0
    }

    /// Self-weight per unit length implied by density and nominal area, N/m.
    pub fn unit_weight(&self) -> f64 {
        self.density * self.nominal_area() * GRAVITY
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("material.young_modulus", self.young_modulus),
            ("material.damage_layer_width", self.damage_layer_width),
            ("material.fracture_energy", self.fracture_energy),
            ("material.density", self.density),
            ("material.aging_coeff", self.aging_coeff),
            ("material.thermal_conductivity", self.thermal_conductivity),
            (
                "material.electrical_conductivity_ref",
                self.electrical_conductivity_ref,
            ),
            (
                "material.resistivity_temp_coeff",
                self.resistivity_temp_coeff,
            ),
            ("material.reference_temp", self.reference_temp),
            ("material.diameter", self.diameter),
            ("material.melt_spreading_years", self.melt_spreading_years),
            ("material.air.density", self.air.density),
            (
                "material.air.kinematic_viscosity",
                self.air.kinematic_viscosity,
            ),
            (
                "material.air.thermal_conductivity",
                self.air.thermal_conductivity,
            ),
            ("material.air.prandtl", self.air.prandtl),
            ("material.ice.density", self.ice.density),
            ("material.ice.resistivity", self.ice.resistivity),
            (
                "material.ice.thermal_conductivity",
                self.ice.thermal_conductivity,
            ),
            ("material.ice.latent_heat", self.ice.latent_heat),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::invalid(
                    "material",
                    format!("`{name}` must be finite and positive, got {value}"),
                ));
            }
        }
        if !(self.h_min >= 0.0) {
            return Err(Error::invalid("material.h_min", "must be >= 0"));
        }
        Ok(())
    }
}
