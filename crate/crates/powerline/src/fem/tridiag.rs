//! Direct solver for symmetric tridiagonal systems.
//!
//! Every field equation in the 1-D discretization assembles into a symmetric
//! positive-definite tridiagonal matrix, so a banded Thomas factorization is
//! all that is needed; no iterative solver is involved.

use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// Sub/super-diagonal, length `diag.len() - 1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn zeros(n: usize) -> Self {
        SymTridiag {
            diag: vec![0.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Resets all entries to zero, keeping the allocation.
    pub fn clear(&mut self) {
        self.diag.fill(0.0);
        self.off.fill(0.0);
    }

    /// Adds the 2x2 local matrix of element `e` (coupling nodes `e` and
    /// `e + 1`).
    #[inline]
    pub fn add_local(&mut self, e: usize, k11: f64, k12: f64, k22: f64) {
        self.diag[e] += k11;
        self.diag[e + 1] += k22;
        self.off[e] += k12;
    }

    /// Imposes `x[i] = value` by zeroing the row/column and moving the
    /// coupling into the right-hand side (symmetry is preserved).
    pub fn impose_dirichlet(&mut self, i: usize, value: f64, rhs: &mut [f64]) {
        if i > 0 {
            rhs[i - 1] -= self.off[i - 1] * value;
            self.off[i - 1] = 0.0;
        }
        if i + 1 < self.n() {
            rhs[i + 1] -= self.off[i] * value;
            self.off[i] = 0.0;
        }
        self.diag[i] = 1.0;
        rhs[i] = value;
    }

    /// Solves `A x = rhs` in place by the Thomas algorithm, using `work` as
    /// scratch. Fails on a non-positive or vanishing pivot (singular or
    /// indefinite system).
    pub fn solve_into(
        &self,
        rhs: &mut [f64],
        work: &mut Vec<f64>,
        context: &'static str,
    ) -> Result<()> {
        let n = self.n();
        assert_eq!(rhs.len(), n);
        work.clear();
        work.resize(n, 0.0);

        // Forward elimination: work holds the modified super-diagonal.
        let mut pivot = self.diag[0];
        if !pivot.is_finite() || pivot.abs() < f64::MIN_POSITIVE {
            return Err(Error::solver(
                context,
                format!("singular system: pivot {pivot:.3e} at row 0"),
            ));
        }
        work[0] = self.off.first().copied().unwrap_or(0.0) / pivot;
        rhs[0] /= pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.off[i - 1] * work[i - 1];
            if !pivot.is_finite() || pivot.abs() < f64::MIN_POSITIVE {
                return Err(Error::solver(
                    context,
                    format!("singular system: pivot {pivot:.3e} at row {i}"),
                ));
            }
            if i < n - 1 {
                work[i] = self.off[i] / pivot;
            }
            rhs[i] = (rhs[i] - self.off[i - 1] * rhs[i - 1]) / pivot;
        }
        // Back substitution.
        for i in (0..n - 1).rev() {
            rhs[i] -= work[i] * rhs[i + 1];
        }
        Ok(())
    }

    /// `y = A x`, used by tests to verify solves.
    #[cfg(test)]
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = self.diag[i] * x[i];
            if i > 0 {
                y[i] += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y[i] += self.off[i] * x[i + 1];
            }
        }
        y
    }
}
