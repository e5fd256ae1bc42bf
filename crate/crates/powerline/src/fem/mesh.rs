//! Uniform 1-D mesh with linear elements and precomputed quadrature data.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::loading::{area_at, AreaProfile};

/// Two-point Gauss abscissae on the reference element [-1, 1]; both weights
/// are 1.
pub const GAUSS_XI: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Linear shape functions evaluated at a reference coordinate.
#[inline]
pub fn shape(xi: f64) -> [f64; 2] {
    [0.5 * (1.0 - xi), 0.5 * (1.0 + xi)]
}

/// Uniform mesh over `[0, length]` with `n_elements` linear elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    length: f64,
    n_elements: usize,
    node_coords: Vec<f64>,
}

impl Mesh {
    pub fn new(length: f64, n_elements: usize) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::invalid("mesh.length", "must be positive"));
        }
        if n_elements < 2 {
            return Err(Error::invalid("mesh.n_elements", "need at least 2 elements"));
        }
        let h = length / n_elements as f64;
        let node_coords = (0..=n_elements).map(|i| i as f64 * h).collect();
        Ok(Mesh {
            length,
            n_elements,
            node_coords,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elements + 1
    }

    /// Element size.
    pub fn spacing(&self) -> f64 {
        self.length / self.n_elements as f64
    }

    pub fn node_coords(&self) -> &[f64] {
        &self.node_coords
    }

    /// Index of the node closest to midspan.
    pub fn midspan_node(&self) -> usize {
        self.n_elements / 2
    }
}

/// Per-element quadrature-point geometry, precomputed once per run: the
/// cross-sectional area profile is fixed, and `exp` evaluations inside the
/// assembly loops would otherwise dominate the run time.
#[derive(Debug, Clone)]
pub struct ElementGeometry {
    /// Area at the two Gauss points of each element, m^2.
    pub area: Vec<[f64; 2]>,
    /// Local diameter `D(x) = sqrt(4 A(x) / pi)` at the Gauss points, m.
    pub diameter: Vec<[f64; 2]>,
    /// Gauss-point coordinates, m.
    pub x: Vec<[f64; 2]>,
    /// Half element size (the Jacobian of the reference map).
    pub half_h: f64,
}

impl ElementGeometry {
    pub fn new(mesh: &Mesh, profile: &AreaProfile) -> Self {
        let h = mesh.spacing();
        let n = mesh.n_elements();
        let mut area = Vec::with_capacity(n);
        let mut diameter = Vec::with_capacity(n);
        let mut x = Vec::with_capacity(n);
        for e in 0..n {
            let x0 = e as f64 * h;
            let mut ax = [0.0; 2];
            let mut dx = [0.0; 2];
            let mut xx = [0.0; 2];
            for (g, &xi) in GAUSS_XI.iter().enumerate() {
                let xg = x0 + 0.5 * h * (1.0 + xi);
                let a = area_at(profile, xg);
                ax[g] = a;
                dx[g] = (4.0 * a / PI).sqrt();
                xx[g] = xg;
            }
            area.push(ax);
            diameter.push(dx);
            x.push(xx);
        }
        ElementGeometry {
            area,
            diameter,
            x,
            half_h: 0.5 * h,
        }
    }
}
