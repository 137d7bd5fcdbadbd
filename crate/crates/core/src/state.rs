use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigen, kron, kron_vec, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::tolerance::Tolerances;

/// A one- or two-qubit state, either as a state vector or a density matrix.
///
/// Construction only checks shapes. Use [`validate_state`] to check
/// normalization, hermiticity and positivity.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(Vec<C64>),
    Density(ComplexMatrix),
}

impl QuantumState {
    pub fn pure(amplitudes: Vec<C64>) -> Result<Self> {
        match amplitudes.len() {
            2 | 4 => Ok(Self::Pure(amplitudes)),
            n => invalid(format!("state vector must have length 2 or 4, got {n}")),
        }
    }

    /// Pure state rescaled to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Self::pure(amplitudes.into_iter().map(|z| z / n).collect())
    }

    pub fn density(rho: ComplexMatrix) -> Self {
        Self::Density(rho)
    }

    /// Computational basis state `|index>` on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        let dim = match qubits {
            1 => 2,
            2 => 4,
            q => return invalid(format!("only 1 or 2 qubits are supported, got {q}")),
        };
        if index >= dim {
            return invalid(format!("basis index {index} out of range for {qubits} qubit(s)"));
        }
        Self::pure((0..dim).map(|i| if i == index { ONE } else { ZERO }).collect())
    }

    pub fn maximally_mixed(qubits: usize) -> Result<Self> {
        let dim = match qubits {
            1 => 2,
            2 => 4,
            q => return invalid(format!("only 1 or 2 qubits are supported, got {q}")),
        };
        Ok(Self::Density(ComplexMatrix::identity(dim) * (1.0 / dim as f64)))
    }

    /// `a ⊗ b`; pure when both factors are pure.
    pub fn product(a: &Self, b: &Self) -> Result<Self> {
        a.expect_qubits(1)?;
        b.expect_qubits(1)?;
        match (a, b) {
            (Self::Pure(x), Self::Pure(y)) => Ok(Self::Pure(kron_vec(x, y)?)),
            _ => Ok(Self::Density(kron(&a.density_matrix(), &b.density_matrix())?)),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(v) => v.len(),
            Self::Density(m) => m.dim(),
        }
    }

    pub fn qubits(&self) -> usize {
        if self.dim() == 2 {
            1
        } else {
            2
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, Self::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match self {
            Self::Pure(v) => Some(v),
            Self::Density(_) => None,
        }
    }

    pub fn density_matrix(&self) -> ComplexMatrix {
        match self {
            Self::Pure(v) => ComplexMatrix::projector(v),
            Self::Density(m) => m.clone(),
        }
    }

    /// `Tr[rho O]`
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        match self {
            Self::Pure(v) => op.expectation(v),
            Self::Density(m) => (m * op).trace(),
        }
    }

    pub(crate) fn expect_qubits(&self, qubits: usize) -> Result<()> {
        if self.qubits() == qubits {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "expected a {qubits}-qubit state, got {} qubit(s)",
                self.qubits()
            )))
        }
    }

    pub(crate) fn expect_pure(&self) -> Result<&[C64]> {
        self.amplitudes()
            .ok_or_else(|| Error::InvalidArgument("operation requires a pure state".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateCheck {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateReport {
    pub checks: Vec<StateCheck>,
}

impl StateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&StateCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StateCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks a state against the invariants of its representation and reports
/// every residual. Never fails.
pub fn validate_state(state: &QuantumState, tol: &Tolerances) -> StateReport {
    let bounded = |name, residual: f64, threshold: f64| StateCheck {
        name,
        residual,
        threshold,
        passed: residual <= threshold,
    };
    let checks = match state {
        QuantumState::Pure(v) => {
            let finite = v.iter().all(|z| z.re.is_finite() && z.im.is_finite());
            let residual = if finite { (norm(v) - 1.0).abs() } else { f64::INFINITY };
            vec![bounded("norm", residual, tol.norm)]
        }
        QuantumState::Density(m) => {
            let finite = m.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite());
            if !finite {
                vec![
                    bounded("hermitian", f64::INFINITY, tol.hermitian),
                    bounded("min_eigenvalue", f64::INFINITY, 0.0),
                    bounded("trace", f64::INFINITY, tol.trace),
                ]
            } else {
                let herm = m.hermiticity_residual();
                let min_eig = hermitian_eigen(&m.hermitian_part())
                    .map(|pairs| pairs.last().map_or(0.0, |p| p.value))
                    .unwrap_or(f64::NEG_INFINITY);
                let trace = m.trace();
                let trace_residual = (trace - ONE).norm();
                vec![
                    bounded("hermitian", herm, tol.hermitian),
                    StateCheck {
                        name: "min_eigenvalue",
                        residual: min_eig,
                        threshold: tol.min_eigenvalue,
                        passed: min_eig >= tol.min_eigenvalue,
                    },
                    bounded("trace", trace_residual, tol.trace),
                ]
            }
        }
    };
    StateReport { checks }
}
