//! Phase of a single qubit from the polar decomposition `S- = sqrt(S- S+) E`.
//!
//! The ladder operators are `S+ = |1><0|`, `S- = |0><1|` and
//! `Sz = (|1><1| - |0><0|)/2`. The unitary `E` is fixed by the polar
//! decomposition up to one free phase `e^{iφ0}` on its `|1><0|` element.
//! The default `e^{iφ0} = -1` gives `E = |0><1| - |1><0|`, whose eigenphases
//! are `±π/2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{commutator, psd_sqrt, ComplexMatrix, C64, I, ONE, ZERO};
use crate::state::QuantumState;

#[derive(Clone, Debug, PartialEq)]
pub struct LadderSet {
    pub s_plus: ComplexMatrix,
    pub s_minus: ComplexMatrix,
    pub s_z: ComplexMatrix,
    pub identity: ComplexMatrix,
}

impl Default for LadderSet {
    fn default() -> Self {
        Self::new()
    }
}

impl LadderSet {
    pub fn new() -> Self {
        Self {
            s_plus: ComplexMatrix::from_real_rows([[0.0, 0.0], [1.0, 0.0]]),
            s_minus: ComplexMatrix::from_real_rows([[0.0, 1.0], [0.0, 0.0]]),
            s_z: ComplexMatrix::from_real_rows([[-0.5, 0.0], [0.0, 0.5]]),
            identity: ComplexMatrix::identity(2),
        }
    }

    /// `(S+ + S-)/2`
    pub fn s_x(&self) -> ComplexMatrix {
        (&self.s_plus + &self.s_minus) * 0.5
    }

    /// `i(S+ - S-)/2`, i.e. half the Pauli y matrix in the `|0>, |1>` order.
    ///
    /// With this sign `Tr[rho 2Sy] = sin ϑ sin φ` for the Bloch state of
    /// [`bloch_state`], and `sin Φ = 2Sy`.
    pub fn s_y(&self) -> ComplexMatrix {
        (&self.s_plus - &self.s_minus).scale(I * 0.5)
    }

    /// Largest entrywise violation of `[Sz, S±] = ±S±` and `[S+, S-] = 2Sz`.
    pub fn commutator_residual(&self) -> f64 {
        let r1 = commutator(&self.s_z, &self.s_plus).max_abs_diff(&self.s_plus);
        let r2 = commutator(&self.s_z, &self.s_minus).max_abs_diff(&(-self.s_minus.clone()));
        let r3 = commutator(&self.s_plus, &self.s_minus).max_abs_diff(&(&self.s_z * 2.0));
        r1.max(r2).max(r3)
    }
}

/// `sin(ϑ/2)|0> + e^{iφ} cos(ϑ/2)|1>`
pub fn bloch_state(theta: f64, phi: f64) -> Result<QuantumState> {
    Ok(QuantumState::Pure(bloch_ket(theta, phi)?.to_vec()))
}

pub(crate) fn bloch_ket(theta: f64, phi: f64) -> Result<[C64; 2]> {
    if !(0.0..=PI).contains(&theta) {
        return invalid(format!("polar angle must lie in [0, π], got {theta}"));
    }
    let half = 0.5 * theta;
    Ok([C64::from(half.sin()), C64::cis(phi) * half.cos()])
}

/// `(Tr[rho σx], Tr[rho σy], Tr[rho σz])` with `σj = 2Sj`.
pub fn bloch_vector(state: &QuantumState) -> Result<[f64; 3]> {
    state.expect_qubits(1)?;
    let l = LadderSet::new();
    Ok([
        2.0 * state.expectation(&l.s_x()).re,
        2.0 * state.expectation(&l.s_y()).re,
        2.0 * state.expectation(&l.s_z).re,
    ])
}

/// The unitary exponential-of-phase operator `E = |0><1| + e^{iφ0}|1><0|`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseExponential {
    matrix: ComplexMatrix,
    factor: C64,
}

impl Default for PhaseExponential {
    fn default() -> Self {
        Self::standard()
    }
}

impl PhaseExponential {
    pub fn new(phi0: f64) -> Self {
        Self::from_unit_factor(C64::cis(phi0))
    }

    /// The operator with `e^{iφ0} = -1`, i.e. `E = |0><1| - |1><0|`.
    pub fn standard() -> Self {
        Self::from_unit_factor(-ONE)
    }

    fn from_unit_factor(factor: C64) -> Self {
        Self {
            matrix: ComplexMatrix::from_rows([[ZERO, ONE], [factor, ZERO]]),
            factor,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `e^{iφ0}`
    pub fn factor(&self) -> C64 {
        self.factor
    }

    pub fn phi0(&self) -> f64 {
        self.factor.arg()
    }

    /// `max |S- - sqrt(S- S+) E|`
    pub fn polar_residual(&self) -> f64 {
        let l = LadderSet::new();
        let modulus = psd_sqrt(&(&l.s_minus * &l.s_plus)).expect("S- S+ is Hermitian");
        (&modulus * &self.matrix).max_abs_diff(&l.s_minus)
    }
}

/// `E` for an arbitrary free phase `φ0`; `φ0 = π` reproduces [`PhaseExponential::standard`].
pub fn phase_exponential(phi0: f64) -> PhaseExponential {
    if phi0 == PI {
        PhaseExponential::standard()
    } else {
        PhaseExponential::new(phi0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseEigenstate {
    /// Eigenphase, `+π/2` or `-π/2`.
    pub phase: f64,
    pub ket: [C64; 2],
}

impl PhaseEigenstate {
    pub fn state(&self) -> QuantumState {
        QuantumState::Pure(self.ket.to_vec())
    }
}

/// `|φ±> = (|0> ± i|1>)/√2` with eigenphases `±π/2` under the standard `E`.
pub fn phase_eigenstates() -> [PhaseEigenstate; 2] {
    let h = FRAC_1_SQRT_2;
    [
        PhaseEigenstate {
            phase: FRAC_PI_2,
            ket: [C64::from(h), C64::new(0.0, h)],
        },
        PhaseEigenstate {
            phase: -FRAC_PI_2,
            ket: [C64::from(h), C64::new(0.0, -h)],
        },
    ]
}

/// `F(Φ) = Σ± |φ±> F(φ±) <φ±|`
pub fn phase_operator_function(f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(2);
    for e in phase_eigenstates() {
        out += &ComplexMatrix::projector(&e.ket).scale(C64::from(f(e.phase)));
    }
    out
}

/// The Hermitian phase operator `Φ`, with eigenvalues `±π/2`.
pub fn hermitian_phase_operator() -> ComplexMatrix {
    phase_operator_function(|x| x)
}

/// Probabilities of the two eigenphases, `P(φ±) = Tr[rho |φ±><φ±|]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermitianPhaseDistribution {
    pub p_plus: f64,
    pub p_minus: f64,
}

impl HermitianPhaseDistribution {
    /// `<F(Φ)> = Σ± F(φ±) P(φ±)`
    pub fn mean(&self, f: impl Fn(f64) -> f64) -> f64 {
        f(FRAC_PI_2) * self.p_plus + f(-FRAC_PI_2) * self.p_minus
    }
}

pub fn hermitian_phase_distribution(state: &QuantumState) -> Result<HermitianPhaseDistribution> {
    state.expect_qubits(1)?;
    let [plus, minus] = phase_eigenstates();
    Ok(HermitianPhaseDistribution {
        p_plus: state.expectation(&ComplexMatrix::projector(&plus.ket)).re,
        p_minus: state.expectation(&ComplexMatrix::projector(&minus.ket)).re,
    })
}
