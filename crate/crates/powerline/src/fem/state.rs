//! Nodal field state of one simulation instance.

/// All nodal fields at one time step. A state is confined to a single
/// simulation instance; independent instances may run concurrently.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    /// Axial displacement, m.
    pub u: Vec<f64>,
    /// Damage phase field, clamped to [0, 1].
    pub phi: Vec<f64>,
    /// Fatigue field, N/m; non-decreasing in time.
    pub fatigue: Vec<f64>,
    /// Strain-energy history field, Pa; non-decreasing in time.
    pub history: Vec<f64>,
    /// Conductor temperature, K.
    pub theta: Vec<f64>,
    /// Voltage, V.
    pub voltage: Vec<f64>,
}

impl FieldState {
    /// Virgin line: zero displacement, damage, fatigue, history, and
    /// voltage; uniform temperature.
    pub fn virgin(n_nodes: usize, initial_temp: f64) -> Self {
        FieldState {
            u: vec![0.0; n_nodes],
            phi: vec![0.0; n_nodes],
            fatigue: vec![0.0; n_nodes],
            history: vec![0.0; n_nodes],
            theta: vec![initial_temp; n_nodes],
            voltage: vec![0.0; n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.u.len()
    }

    pub fn max_phi(&self) -> f64 {
        self.phi.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_theta(&self) -> f64 {
        self.theta.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the damage maximum.
    pub fn argmax_phi(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.phi.iter().enumerate() {
            if v > self.phi[best] {
                best = i;
            }
        }
        best
    }

    /// End-to-end voltage drop magnitude, V.
    pub fn voltage_drop(&self) -> f64 {
        (self.voltage[self.voltage.len() - 1] - self.voltage[0]).abs()
    }
}
