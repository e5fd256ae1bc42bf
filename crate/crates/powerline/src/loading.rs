//! Periodic loading synthesis.
//!
//! Monthly wind/temperature records are turned into smooth annual loading
//! curves through a real discrete Fourier transform, so the simulation can
//! sample weather at arbitrary times. The module also hosts the parameterized
//! current demand and the notched cross-sectional area profile that seeds
//! damage localization.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feet-per-second to metres-per-second. Published wind tables are in ft/s;
/// everything internal is SI.
pub const FT_PER_S_TO_M_PER_S: f64 = 0.3048;

/// Number of monthly samples in a published record.
pub const MONTHS: usize = 12;

/// What a monthly record measures. Wind is stored in ft/s as published and
/// converted to m/s at the scenario boundary; temperature is Kelvin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantityKind {
    Wind,
    Temperature,
}

/// Twelve monthly averages of one measured quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct MonthlySeries {
    values: [f64; MONTHS],
    kind: QuantityKind,
}

impl MonthlySeries {
    /// Validates and wraps a 12-entry record. Both wind and temperature must
    /// be finite and strictly positive.
    pub fn new(values: [f64; MONTHS], kind: QuantityKind) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::invalid(
                    "monthly_series",
                    format!("entry {i} is not finite"),
                ));
            }
            if *v <= 0.0 {
                return Err(Error::invalid(
                    "monthly_series",
                    format!("entry {i} must be positive, got {v}"),
                ));
            }
        }
        Ok(MonthlySeries { values, kind })
    }

    /// Validates a slice, rejecting anything that is not exactly 12 rows.
    pub fn from_slice(values: &[f64], kind: QuantityKind) -> Result<Self> {
        let arr: [f64; MONTHS] = values.try_into().map_err(|_| {
            Error::invalid(
                "monthly_series",
                format!("expected exactly {MONTHS} rows, got {}", values.len()),
            )
        })?;
        Self::new(arr, kind)
    }

    pub fn values(&self) -> &[f64; MONTHS] {
        &self.values
    }

    pub fn kind(&self) -> QuantityKind {
        self.kind
    }

    /// Time of the m-th sample within one period (period length 1.0).
    pub fn sample_instant(month: usize) -> f64 {
        month as f64 / MONTHS as f64
    }
}

/// Truncated Fourier series reconstructing an annual cycle:
/// `f(t) = A0 + sum_n [An cos(2*pi*n*t/T) + Bn sin(2*pi*n*t/T)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierLoading {
    mean: f64,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
    /// Period in years.
    period: f64,
}

impl FourierLoading {
    pub fn new(mean: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>, period: f64) -> Result<Self> {
        if cos_coeffs.len() != sin_coeffs.len() {
            return Err(Error::invalid(
                "fourier_loading",
                "cosine and sine coefficient arrays must have equal length",
            ));
        }
        if !(period > 0.0) {
            return Err(Error::invalid("period", "period must be positive"));
        }
        Ok(FourierLoading {
            mean,
            cos_coeffs,
            sin_coeffs,
            period,
        })
    }

    /// A constant signal: mean only, no harmonics.
    pub fn constant(mean: f64) -> Self {
        FourierLoading {
            mean,
            cos_coeffs: vec![0.0; MONTHS / 2],
            sin_coeffs: vec![0.0; MONTHS / 2],
            period: 1.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    pub fn period(&self) -> f64 {
        self.period
    }
}

/// Real DFT of a 12-sample record, returning the reconstruction coefficients.
///
/// The highest retained harmonic (n = N/2) is shared between positive and
/// negative frequencies, so its cosine coefficient carries half weight; with
/// that convention the reconstruction is exact at the original sample
/// instants.
pub fn dft_coefficients(samples: &MonthlySeries) -> FourierLoading {
    let n = MONTHS;
    let x = samples.values();
    let mut cos_coeffs = Vec::with_capacity(n / 2);
    let mut sin_coeffs = Vec::with_capacity(n / 2);

    let mean = x.iter().sum::<f64>() / n as f64;
    for k in 1..=n / 2 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, &val) in x.iter().enumerate() {
            let angle = 2.0 * PI * (k * m) as f64 / n as f64;
            re += val * angle.cos();
            im -= val * angle.sin();
        }
        let scale = if k == n / 2 { 1.0 } else { 2.0 };
        cos_coeffs.push(scale * re / n as f64);
        sin_coeffs.push(-scale * im / n as f64);
    }

    FourierLoading {
        mean,
        cos_coeffs,
        sin_coeffs,
        period: 1.0,
    }
}

/// Evaluates the reconstructed loading at time `t` (years). Periodic with
/// period `T`; 100 simulation steps of 0.01 yr span one full cycle.
pub fn evaluate_loading(loading: &FourierLoading, t: f64) -> f64 {
    let base = 2.0 * PI * t / loading.period;
    let mut value = loading.mean;
    for (i, (&a, &b)) in loading
        .cos_coeffs
        .iter()
        .zip(loading.sin_coeffs.iter())
        .enumerate()
    {
        let angle = base * (i + 1) as f64;
        value += a * angle.cos() + b * angle.sin();
    }
    value
}

/// Parameterized current demand `I(t) = -I_b - I_a sin(4*pi*t)`.
///
/// The sign convention is preserved here; consumers that feed Joule heating
/// use the magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentDemand {
    /// Base current `I_b` in amperes.
    pub base: f64,
    /// Oscillation amplitude `I_a` in amperes.
    pub amplitude: f64,
}

impl CurrentDemand {
    pub fn new(base: f64, amplitude: f64) -> Result<Self> {
        if !(base >= 0.0) {
            return Err(Error::invalid("current.base", "base current must be >= 0"));
        }
        if !(amplitude >= 0.0) {
            return Err(Error::invalid(
                "current.amplitude",
                "current amplitude must be >= 0",
            ));
        }
        Ok(CurrentDemand { base, amplitude })
    }
}

/// Signed current demand at time `t` (years): two full cycles per year.
pub fn current_demand(d: &CurrentDemand, t: f64) -> f64 {
    -d.base - d.amplitude * (4.0 * PI * t).sin()
}

/// Cross-sectional area with a Gaussian notch at midspan, standing in for
/// pre-existing damage:
/// `A(x) = A0 (1 - exp(-(x - L/2)^2 / (2 As^2)) / (As sqrt(2 pi)))`.
///
/// Smaller `spread_depth_ratio` means a deeper notch (more severe initial
/// damage).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaProfile {
    /// Undamaged cross-sectional area in m^2.
    pub nominal_area: f64,
    /// Spread-to-depth ratio of the notch (dimensionless).
    pub spread_depth_ratio: f64,
    /// Span length in m.
    pub span: f64,
}

/// Lower bound on the spread-to-depth ratio: at `1/sqrt(2*pi)` the notch
/// depth reaches the full area and `A(L/2)` hits zero.
pub const MIN_SPREAD_DEPTH_RATIO: f64 = 0.398_942_280_401_432_7;

impl AreaProfile {
    pub fn new(nominal_area: f64, spread_depth_ratio: f64, span: f64) -> Result<Self> {
        if !(nominal_area > 0.0) {
            return Err(Error::invalid(
                "area.nominal_area",
                "nominal area must be positive",
            ));
        }
        if !(span > 0.0) {
            return Err(Error::invalid("area.span", "span must be positive"));
        }
        if !(spread_depth_ratio > MIN_SPREAD_DEPTH_RATIO) {
            return Err(Error::invalid(
                "area.spread_depth_ratio",
                format!(
                    "spread/depth ratio {spread_depth_ratio} would make the area non-positive; \
                     it must exceed 1/sqrt(2*pi) ~= {MIN_SPREAD_DEPTH_RATIO:.6}"
                ),
            ));
        }
        Ok(AreaProfile {
            nominal_area,
            spread_depth_ratio,
            span,
        })
    }
}

/// Area at position `x` along the span; strictly positive by construction.
pub fn area_at(profile: &AreaProfile, x: f64) -> f64 {
    let sigma = profile.spread_depth_ratio;
    let d = x - profile.span / 2.0;
    let notch = (-d * d / (2.0 * sigma * sigma)).exp() / (sigma * (2.0 * PI).sqrt());
    profile.nominal_area * (1.0 - notch)
}
