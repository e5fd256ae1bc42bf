//! Assembly and solution of the five field equations.
//!
//! All equations discretize with linear elements and two-point Gauss
//! quadrature into symmetric tridiagonal systems. Quantities that vary along
//! the line (area, surface measure, interpolated fields) are evaluated at
//! the quadrature points; the assembled systems go through the direct
//! banded solver.

use crate::error::{Error, Result};
use crate::fem::heat::{HeatExchange, FREEZING_POINT};
use crate::fem::mesh::{shape, ElementGeometry, Mesh, GAUSS_XI};
use crate::fem::tridiag::SymTridiag;
use crate::material::MaterialProperties;
use crate::scenario::IceLayer;

/// Floor on `(1 - phi)` inside stiffness/conductance assembly. Keeps the
/// systems solvable while a localized region saturates; a line whose damage
/// saturates everywhere is still reported as a solver error.
const DEGRADATION_FLOOR: f64 = 1e-6;

/// Threshold on `max (1 - phi)^2` below which the whole line counts as
/// mechanically/electrically dead.
const SATURATION_THRESHOLD: f64 = 1e-10;

/// Reusable scratch buffers for one simulation instance.
#[derive(Debug, Clone)]
pub struct Workspace {
    matrix: SymTridiag,
    rhs: Vec<f64>,
    work: Vec<f64>,
    /// Row-sum lumped mass `integral A N_i dx`, used by the fatigue update.
    lumped_mass: Vec<f64>,
}

impl Workspace {
    pub fn new(mesh: &Mesh, geom: &ElementGeometry) -> Self {
        let n = mesh.n_nodes();
        let mut lumped_mass = vec![0.0; n];
        for e in 0..mesh.n_elements() {
            for (g, &xi) in GAUSS_XI.iter().enumerate() {
                let nn = shape(xi);
                let w = geom.area[e][g] * geom.half_h;
                lumped_mass[e] += w * nn[0];
                lumped_mass[e + 1] += w * nn[1];
            }
        }
        Workspace {
            matrix: SymTridiag::zeros(n),
            rhs: vec![0.0; n],
            work: Vec::with_capacity(n),
            lumped_mass,
        }
    }

    fn reset(&mut self) {
        self.matrix.clear();
        self.rhs.fill(0.0);
    }
}

#[inline]
fn degradation(phi: f64) -> f64 {
    let r = (1.0 - phi).max(DEGRADATION_FLOOR);
    r * r
}

/// Temperature-corrected undegraded conductivity, S/m. The caller must have
/// checked the temperature domain.
#[inline]
fn conductivity_at(theta: f64, props: &MaterialProperties) -> f64 {
    props.electrical_conductivity_ref
        / (1.0 + props.resistivity_temp_coeff * (theta - props.reference_temp))
}

/// Electrical conductivity degraded by damage and temperature, S/m.
///
/// `sigma = (1 - phi)^2 sigma_0 / (1 + alpha (theta - theta_0))`. An ice
/// sleeve contributes its (negligible) parallel conductance referred to the
/// nominal conductor area.
pub fn degraded_conductivity(
    phi: f64,
    theta: f64,
    props: &MaterialProperties,
    ice: Option<&IceLayer>,
) -> Result<f64> {
    if !(phi >= 0.0 && phi <= 1.0) {
        return Err(Error::invalid("phi", format!("damage {phi} outside [0, 1]")));
    }
    let denom = 1.0 + props.resistivity_temp_coeff * (theta - props.reference_temp);
    if denom <= 0.0 {
        return Err(Error::invalid(
            "theta",
            format!(
                "temperature {theta} K drives the resistivity correction non-positive \
                 (unphysical domain)"
            ),
        ));
    }
    let d = 1.0 - phi;
    let mut sigma = d * d * props.electrical_conductivity_ref / denom;
    if let Some(ice) = ice {
        sigma += ice_parallel_conductivity(ice, props);
    }
    Ok(sigma)
}

/// Parallel ice-sleeve conductance referred to the nominal conductor area.
fn ice_parallel_conductivity(ice: &IceLayer, props: &MaterialProperties) -> f64 {
    let sigma_ice = 1.0 / props.ice.resistivity;
    let ring_area = std::f64::consts::PI * (props.diameter + ice.thickness) * ice.thickness;
    sigma_ice * ring_area / props.nominal_area()
}

fn check_temperature_domain(theta: &[f64], props: &MaterialProperties) -> Result<()> {
    let min = theta.iter().copied().fold(f64::INFINITY, f64::min);
    if !(1.0 + props.resistivity_temp_coeff * (min - props.reference_temp) > 0.0) {
        return Err(Error::invalid(
            "theta",
            format!("minimum temperature {min} K is outside the resistivity-law domain"),
        ));
    }
    Ok(())
}

/// Quasi-static displacement solve under the end traction `tension`.
///
/// `u = 0` at `x = 0`; the horizontal tension enters as the natural boundary
/// term at `x = L`. The damage-gradient coupling term contributes to the
/// right-hand side.
pub fn solve_displacement(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    phi: &[f64],
    tension: f64,
    ws: &mut Workspace,
    u_out: &mut Vec<f64>,
) -> Result<()> {
    if !tension.is_finite() {
        return Err(Error::invalid("tension", "traction must be finite"));
    }
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    let inv_h2 = 1.0 / (h * h);
    ws.reset();

    let gamma_gc = props.damage_layer_width * props.fracture_energy;
    let mut max_degr: f64 = 0.0;
    for e in 0..n_el {
        let mut stiff = 0.0;
        let mut area_meas = 0.0;
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
            let raw = (1.0 - phi_g) * (1.0 - phi_g);
            max_degr = max_degr.max(raw);
            stiff += degradation(phi_g) * props.young_modulus * geom.area[e][g] * geom.half_h;
            area_meas += geom.area[e][g] * geom.half_h;
        }
        let k = stiff * inv_h2;
        ws.matrix.add_local(e, k, -k, k);
        // Damage-gradient body term: gamma g_c A (phi')^2 against dw/dx.
        let dphi = (phi[e + 1] - phi[e]) / h;
        let f = gamma_gc * dphi * dphi * area_meas / h;
        ws.rhs[e] -= f;
        ws.rhs[e + 1] += f;
    }
    if max_degr < SATURATION_THRESHOLD {
        return Err(Error::solver(
            "solve_displacement",
            "stiffness singular: damage has saturated across the entire line",
        ));
    }
    ws.rhs[n_el] += tension;
    ws.matrix.impose_dirichlet(0, 0.0, &mut ws.rhs);
    ws.matrix
        .solve_into(&mut ws.rhs, &mut ws.work, "solve_displacement")?;
    u_out.clear();
    u_out.extend_from_slice(&ws.rhs);
    Ok(())
}

/// Element strains averaged onto nodes (one-sided at the ends).
pub fn recover_strains(mesh: &Mesh, u: &[f64], out: &mut Vec<f64>) {
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    out.clear();
    out.resize(n_el + 1, 0.0);
    let strain = |e: usize| (u[e + 1] - u[e]) / h;
    out[0] = strain(0);
    out[n_el] = strain(n_el - 1);
    for i in 1..n_el {
        out[i] = 0.5 * (strain(i - 1) + strain(i));
    }
}

/// Pointwise update of the strain-energy history field:
/// `H = max(Y strain^2, H_prev)`. Never decreases.
pub fn update_history(history: &mut [f64], strains: &[f64], young_modulus: f64) {
    for (h, &eps) in history.iter_mut().zip(strains) {
        let energy = young_modulus * eps * eps;
        if energy > *h {
            *h = energy;
        }
    }
}

/// Damage solve driven by the history and fatigue fields; the result is
/// clamped to [0, 1]. Natural (zero-flux) boundary conditions.
pub fn solve_damage(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    history: &[f64],
    fatigue: &[f64],
    ws: &mut Workspace,
    phi_out: &mut Vec<f64>,
) -> Result<()> {
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    let inv_h2 = 1.0 / (h * h);
    ws.reset();

    let gamma = props.damage_layer_width;
    let gamma_gc = gamma * props.fracture_energy;
    let gc_over_gamma = props.fracture_energy / gamma;
    for e in 0..n_el {
        let mut stiff = 0.0;
        let mut m = [0.0; 3]; // m11, m12, m22
        let mut r = [0.0; 2];
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let a_meas = geom.area[e][g] * geom.half_h;
            stiff += gamma_gc * a_meas;
            let hist_g = nn[0] * history[e] + nn[1] * history[e + 1];
            let fat_g = nn[0] * fatigue[e] + nn[1] * fatigue[e + 1];
            let react = (hist_g + gc_over_gamma) * a_meas;
            m[0] += react * nn[0] * nn[0];
            m[1] += react * nn[0] * nn[1];
            m[2] += react * nn[1] * nn[1];
            let src = (hist_g + fat_g / gamma) * a_meas;
            r[0] += src * nn[0];
            r[1] += src * nn[1];
        }
        let k = stiff * inv_h2;
        ws.matrix.add_local(e, k + m[0], -k + m[1], k + m[2]);
        ws.rhs[e] += r[0];
        ws.rhs[e + 1] += r[1];
    }
    ws.matrix.solve_into(&mut ws.rhs, &mut ws.work, "solve_damage")?;
    phi_out.clear();
    phi_out.extend(ws.rhs.iter().map(|v| v.clamp(0.0, 1.0)));
    Ok(())
}

/// Explicit fatigue step with a row-sum lumped mass matrix:
/// `F += dt * rho a (1 - phi) Y |u'| phi (theta/theta_0) / gamma`.
///
/// The lumped mass keeps the nodal increments non-negative, so the fatigue
/// field never decreases.
pub fn step_fatigue(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    u: &[f64],
    phi: &[f64],
    theta: &[f64],
    dt: f64,
    ws: &mut Workspace,
    fatigue: &mut [f64],
) {
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    ws.rhs.fill(0.0);
    let coef = props.density * props.aging_coeff * props.young_modulus
        / (props.damage_layer_width * props.reference_temp);
    for e in 0..n_el {
        let strain = ((u[e + 1] - u[e]) / h).abs();
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
            let theta_g = nn[0] * theta[e] + nn[1] * theta[e + 1];
            let q = coef * (1.0 - phi_g).max(0.0) * strain * phi_g.max(0.0) * theta_g
                * geom.area[e][g]
                * geom.half_h;
            ws.rhs[e] += q * nn[0];
            ws.rhs[e + 1] += q * nn[1];
        }
    }
    for i in 0..fatigue.len() {
        fatigue[i] += dt * ws.rhs[i] / ws.lumped_mass[i];
    }
}

/// Steady-state temperature solve with the given surface heat exchange.
///
/// The Joule source uses the current damage field and the lagged voltage and
/// temperature fields. Zero-flux conditions at both ends; the distributed
/// exchange term anchors the solution.
#[allow(clippy::too_many_arguments)]
pub fn solve_temperature(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    phi: &[f64],
    theta_prev: &[f64],
    v_prev: &[f64],
    exchange: &HeatExchange,
    ice: Option<&IceLayer>,
    ws: &mut Workspace,
    theta_out: &mut Vec<f64>,
) -> Result<()> {
    check_temperature_domain(theta_prev, props)?;
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    let inv_h2 = 1.0 / (h * h);
    ws.reset();

    let ice_sigma = ice.map_or(0.0, |i| ice_parallel_conductivity(i, props));
    for e in 0..n_el {
        let mut stiff = 0.0;
        let mut m = [0.0; 3];
        let mut r = [0.0; 2];
        let dv = (v_prev[e + 1] - v_prev[e]) / h;
        let joule_grad = dv * dv;
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let a_meas = geom.area[e][g] * geom.half_h;
            stiff += props.thermal_conductivity * a_meas;

            // Joule source from lagged voltage/temperature.
            let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
            let theta_g = nn[0] * theta_prev[e] + nn[1] * theta_prev[e + 1];
            let sigma = degradation(phi_g) * conductivity_at(theta_g, props) + ice_sigma;
            let joule = sigma * joule_grad * a_meas;
            r[0] += joule * nn[0];
            r[1] += joule * nn[1];

            match *exchange {
                HeatExchange::Convective { h: hc, ambient } => {
                    let surf = hc * std::f64::consts::PI * geom.diameter[e][g] * geom.half_h;
                    m[0] += surf * nn[0] * nn[0];
                    m[1] += surf * nn[0] * nn[1];
                    m[2] += surf * nn[1] * nn[1];
                    r[0] += surf * ambient * nn[0];
                    r[1] += surf * ambient * nn[1];
                }
                HeatExchange::ConvectiveFire {
                    h: hc,
                    ambient,
                    fire_flux,
                } => {
                    let a_s = std::f64::consts::PI * geom.diameter[e][g] * geom.half_h;
                    let surf = hc * a_s;
                    m[0] += surf * nn[0] * nn[0];
                    m[1] += surf * nn[0] * nn[1];
                    m[2] += surf * nn[1] * nn[1];
                    let src = (surf * ambient) + fire_flux * a_s;
                    r[0] += src * nn[0];
                    r[1] += src * nn[1];
                }
                HeatExchange::IceCovered {
                    ring_conductance,
                    ice_temp,
                    melt_sink,
                } => {
                    // The ring conductance is already per unit length.
                    let ring = ring_conductance * geom.half_h;
                    m[0] += ring * nn[0] * nn[0];
                    m[1] += ring * nn[0] * nn[1];
                    m[2] += ring * nn[1] * nn[1];
                    let mut src = ring * ice_temp;
                    // Latent sink only while the conductor surface is warm
                    // enough to melt (lagged temperature).
                    if theta_g > FREEZING_POINT {
                        src -= melt_sink * geom.half_h;
                    }
                    r[0] += src * nn[0];
                    r[1] += src * nn[1];
                }
            }
        }
        let k = stiff * inv_h2;
        ws.matrix.add_local(e, k + m[0], -k + m[1], k + m[2]);
        ws.rhs[e] += r[0];
        ws.rhs[e + 1] += r[1];
    }
    ws.matrix
        .solve_into(&mut ws.rhs, &mut ws.work, "solve_temperature")?;
    theta_out.clear();
    theta_out.extend_from_slice(&ws.rhs);
    Ok(())
}

/// Voltage solve under an imposed total current magnitude.
///
/// `V = 0` at `x = 0`; the current enters as the natural flux condition at
/// `x = L`, so the discrete flux `sigma_E A dV/dx` equals the imposed
/// current through every cross-section.
#[allow(clippy::too_many_arguments)]
pub fn solve_voltage(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    phi: &[f64],
    theta: &[f64],
    current_magnitude: f64,
    ice: Option<&IceLayer>,
    ws: &mut Workspace,
    v_out: &mut Vec<f64>,
) -> Result<()> {
    check_temperature_domain(theta, props)?;
    if !(current_magnitude >= 0.0) {
        return Err(Error::invalid("current", "current magnitude must be >= 0"));
    }
    let n_el = mesh.n_elements();
    let h = mesh.spacing();
    let inv_h2 = 1.0 / (h * h);
    ws.reset();

    let ice_sigma = ice.map_or(0.0, |i| ice_parallel_conductivity(i, props));
    let mut max_degr: f64 = 0.0;
    for e in 0..n_el {
        let mut cond = 0.0;
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
            let theta_g = nn[0] * theta[e] + nn[1] * theta[e + 1];
            let raw = (1.0 - phi_g) * (1.0 - phi_g);
            max_degr = max_degr.max(raw);
            let sigma = degradation(phi_g) * conductivity_at(theta_g, props) + ice_sigma;
            cond += sigma * geom.area[e][g] * geom.half_h;
        }
        let k = cond * inv_h2;
        ws.matrix.add_local(e, k, -k, k);
    }
    if max_degr < SATURATION_THRESHOLD {
        return Err(Error::solver(
            "solve_voltage",
            "line is fully insulating: damage has saturated everywhere",
        ));
    }
    ws.rhs[n_el] += current_magnitude;
    ws.matrix.impose_dirichlet(0, 0.0, &mut ws.rhs);
    ws.matrix
        .solve_into(&mut ws.rhs, &mut ws.work, "solve_voltage")?;
    v_out.clear();
    v_out.extend_from_slice(&ws.rhs);
    Ok(())
}

/// Per-element electrical flux `sigma_E A dV/dx`, A. Constant along the line
/// up to solver round-off (discrete current conservation).
pub fn element_fluxes(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    phi: &[f64],
    theta: &[f64],
    voltage: &[f64],
    ice: Option<&IceLayer>,
) -> Vec<f64> {
    let h = mesh.spacing();
    let ice_sigma = ice.map_or(0.0, |i| ice_parallel_conductivity(i, props));
    (0..mesh.n_elements())
        .map(|e| {
            let mut cond = 0.0;
            for (g, &xi) in GAUSS_XI.iter().enumerate() {
                let nn = shape(xi);
                let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
                let theta_g = nn[0] * theta[e] + nn[1] * theta[e + 1];
                cond += (degradation(phi_g) * conductivity_at(theta_g, props) + ice_sigma)
                    * geom.area[e][g]
                    * geom.half_h;
            }
            cond / (h * h) * (voltage[e + 1] - voltage[e])
        })
        .collect()
}

/// Total Joule power `integral sigma_E (dV/dx)^2 A dx`, W, with the same
/// quadrature the temperature assembly uses.
pub fn total_joule_power(
    mesh: &Mesh,
    geom: &ElementGeometry,
    props: &MaterialProperties,
    phi: &[f64],
    theta: &[f64],
    voltage: &[f64],
    ice: Option<&IceLayer>,
) -> f64 {
    let h = mesh.spacing();
    let ice_sigma = ice.map_or(0.0, |i| ice_parallel_conductivity(i, props));
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        let dv = (voltage[e + 1] - voltage[e]) / h;
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let phi_g = nn[0] * phi[e] + nn[1] * phi[e + 1];
            let theta_g = nn[0] * theta[e] + nn[1] * theta[e + 1];
            let sigma = degradation(phi_g) * conductivity_at(theta_g, props) + ice_sigma;
            total += sigma * dv * dv * geom.area[e][g] * geom.half_h;
        }
    }
    total
}

/// Total convective loss `integral h (theta - theta_a) A_s dx`, W.
pub fn total_convective_loss(
    mesh: &Mesh,
    geom: &ElementGeometry,
    h_conv: f64,
    ambient: f64,
    theta: &[f64],
) -> f64 {
    let mut total = 0.0;
    for e in 0..mesh.n_elements() {
        for (g, &xi) in GAUSS_XI.iter().enumerate() {
            let nn = shape(xi);
            let theta_g = nn[0] * theta[e] + nn[1] * theta[e + 1];
            let a_s = std::f64::consts::PI * geom.diameter[e][g];
            total += h_conv * (theta_g - ambient) * a_s * geom.half_h;
        }
    }
    total
}
