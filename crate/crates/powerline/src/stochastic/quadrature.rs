//! Gauss-Legendre quadrature on [-1, 1].

use crate::error::{Error, Result};

/// Maximum supported rule size.
pub const MAX_POINTS: usize = 100;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Exact for polynomials of degree <= 2n - 1. Nodes are returned in
/// ascending order; weights are positive and sum to 2.
///
/// Nodes are found by Newton iteration on the Legendre polynomial from the
/// classical Chebyshev-based initial guesses; weights follow from
/// `w_i = 2 / ((1 - x_i^2) P_n'(x_i)^2)`.
pub fn gauss_legendre_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > MAX_POINTS {
        return Err(Error::invalid(
            "points",
            format!("rule size must lie in 1..={MAX_POINTS}, got {n}"),
        ));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];

    // Only the lower half is computed; the rule is symmetric.
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = -(std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = x;
        weights[i] = w;
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // The middle node is exactly zero.
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    Ok((nodes, weights))
}

/// Legendre polynomial P_n and its derivative at `x` via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}
