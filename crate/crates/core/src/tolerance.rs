//! Numerical thresholds used across the crate.
//!
//! State validation reads its thresholds from [`Tolerances`], which can be
//! overridden at run time. The remaining constants are the fixed thresholds
//! the invariant suites check against.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Thresholds applied when validating a [`QuantumState`](crate::QuantumState).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Allowed deviation of a pure vector's Euclidean norm from 1.
    pub norm: f64,
    /// Allowed entrywise deviation of a density matrix from its adjoint.
    pub hermitian: f64,
    /// Smallest eigenvalue a density matrix may have (a small negative number).
    pub min_eigenvalue: f64,
    /// Allowed deviation of a density matrix trace from 1.
    pub trace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-12,
            hermitian: 1e-12,
            min_eigenvalue: -1e-10,
            trace: 1e-12,
        }
    }
}

impl Tolerances {
    /// Rejects records with non-finite values, non-positive residual bounds
    /// or a positive eigenvalue floor.
    pub fn check(&self) -> Result<()> {
        let positive = [
            ("norm", self.norm),
            ("hermitian", self.hermitian),
            ("trace", self.trace),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return invalid(format!("tolerance `{name}` must be finite and > 0, got {value}"));
            }
        }
        if !self.min_eigenvalue.is_finite() || self.min_eigenvalue > 0.0 {
            return invalid(format!(
                "tolerance `min_eigenvalue` must be finite and <= 0, got {}",
                self.min_eigenvalue
            ));
        }
        Ok(())
    }
}

/// Entrywise bound for identities that hold in exact arithmetic on 2x2 and 4x4 matrices.
pub const ALGEBRA_EXACT: f64 = 1e-14;
/// Entrywise bound for identities involving a handful of transcendental evaluations.
pub const ALGEBRA: f64 = 1e-12;
/// Bound on the smallest eigenvalue of a POVM element.
pub const POVM_POSITIVITY: f64 = -1e-12;
/// Bound for results obtained by composite trapezoidal or Gauss-Legendre quadrature.
pub const QUADRATURE: f64 = 1e-9;
/// Bound for 2D resolution-of-identity checks.
pub const RESOLUTION: f64 = 1e-6;
/// Bound on the orthonormality and reconstruction of eigen decompositions.
pub const EIGEN: f64 = 1e-10;
/// Bound on the reconstruction residual of an eigen decomposition.
pub const EIGEN_RECONSTRUCTION: f64 = 1e-9;
/// Hermiticity required on input to the eigensolver.
pub const EIGEN_INPUT_HERMITIAN: f64 = 1e-10;

/// Default number of nodes for periodic trapezoidal quadrature.
pub const DEFAULT_PERIODIC_NODES: usize = 2048;
/// Default number of nodes per axis for 2D periodic grids.
pub const DEFAULT_GRID_NODES: usize = 128;
/// Default number of Gauss-Legendre nodes for polar-angle integrals.
pub const DEFAULT_POLAR_NODES: usize = 64;
