//! Phase sum and difference of two qubits.
//!
//! `E+ = E_A E_B` and `E- = E_A E_B†` shift the sum and the difference of the
//! two phases. On the product grid `(φA, φB)` the sum and difference range
//! over `4π`; casting folds them into `[0, 2π)` by averaging the two branches
//! `(φA, φB)` and `(φA + π, φB + π)`, and the parity label `v` of
//! `V = e^{iπ(S+ + 1)}` tells the branches apart.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{commutator, hermitian_function, kron, kron_vec, max_abs_diff_vec, ComplexMatrix, C64, ONE, ZERO};
use crate::povm::{sg_ket, wrap_phase, PhasePovm};
use crate::quadrature::{integrate_periodic, integrate_periodic_2d};
use crate::qubit_phase::{LadderSet, PhaseExponential};
use crate::state::QuantumState;

/// Operators for the phase sum and difference of qubits A and B.
#[derive(Clone, Debug, PartialEq)]
pub struct SumDiffOperators {
    pub e_plus: ComplexMatrix,
    pub e_minus: ComplexMatrix,
    /// `S+ = Sz_A + Sz_B`
    pub s_plus_z: ComplexMatrix,
    /// `S- = Sz_A - Sz_B`
    pub s_minus_z: ComplexMatrix,
    pub v: ComplexMatrix,
}

pub fn build_sum_diff() -> SumDiffOperators {
    SumDiffOperators::from_exponential(&PhaseExponential::standard())
}

impl SumDiffOperators {
    pub fn from_exponential(e: &PhaseExponential) -> Self {
        let e = e.matrix();
        let id = ComplexMatrix::identity(2);
        let sz = LadderSet::new().s_z;
        let kron2 = |a: &ComplexMatrix, b: &ComplexMatrix| kron(a, b).expect("single-qubit factors");
        let sz_a = kron2(&sz, &id);
        let sz_b = kron2(&id, &sz);
        let s_plus_z = &sz_a + &sz_b;
        // S+ has integer spectrum, so e^{iπ(S+ + 1)} is the parity (-1)^{s+1}, taken exactly.
        let v = hermitian_function(&s_plus_z, |s| {
            if (s.round() as i64 + 1).rem_euclid(2) == 0 {
                ONE
            } else {
                -ONE
            }
        })
        .expect("S+ is Hermitian");
        Self {
            e_plus: kron2(e, e),
            e_minus: kron2(e, &e.adjoint()),
            s_minus_z: &sz_a - &sz_b,
            s_plus_z,
            v,
        }
    }

    /// Residuals of the commutation relations expected of the sum and
    /// difference operators, plus `V² = I`.
    pub fn commutator_report(&self) -> CommutatorReport {
        let zero = ComplexMatrix::zeros(4);
        let entry = |name, lhs: ComplexMatrix, rhs: &ComplexMatrix| CommutatorResidual {
            name,
            residual: lhs.max_abs_diff(rhs),
        };
        CommutatorReport {
            entries: vec![
                entry("[E+,S+]=E+", commutator(&self.e_plus, &self.s_plus_z), &self.e_plus),
                entry("[E-,S-]=E-", commutator(&self.e_minus, &self.s_minus_z), &self.e_minus),
                entry("[E+,S-]=0", commutator(&self.e_plus, &self.s_minus_z), &zero),
                entry("[E-,S+]=0", commutator(&self.e_minus, &self.s_plus_z), &zero),
                entry("[E+,V]=0", commutator(&self.e_plus, &self.v), &zero),
                entry("[E-,V]=0", commutator(&self.e_minus, &self.v), &zero),
                entry("V^2=I", &self.v * &self.v, &ComplexMatrix::identity(4)),
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorResidual {
    pub name: &'static str,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub entries: Vec<CommutatorResidual>,
}

impl CommutatorReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.residual)
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

/// `|φA, φB> = |φA> ⊗ |φB>` with unnormalized SG kets.
pub fn sg_product_state(phi_a: f64, phi_b: f64) -> Vec<C64> {
    kron_vec(&sg_ket(phi_a), &sg_ket(phi_b)).expect("single-qubit factors")
}

/// `(|E+ ψ - e^{i(φA+φB)} ψ|, |E- ψ - e^{i(φA-φB)} ψ|)` for `ψ = |φA, φB>`,
/// with `E` built from `e^{iφ0} = +1`.
///
/// An SG ket is an eigenvector of that `E` only for `φ ∈ {0, π}`; elsewhere
/// the residuals are nonzero.
pub fn sg_eigen_residuals(phi_a: f64, phi_b: f64) -> (f64, f64) {
    let ops = SumDiffOperators::from_exponential(&PhaseExponential::new(0.0));
    let psi = sg_product_state(phi_a, phi_b);
    let residual = |op: &ComplexMatrix, phase: f64| {
        let lhs = op.apply(&psi);
        let rhs: Vec<C64> = psi.iter().map(|z| z * C64::cis(phase)).collect();
        max_abs_diff_vec(&lhs, &rhs)
    };
    (
        residual(&ops.e_plus, phi_a + phi_b),
        residual(&ops.e_minus, phi_a - phi_b),
    )
}

/// A member `|φ+, φ-, v>` of the continuous sum/difference basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CastBasisState {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub v: u8,
    pub vector: Vec<C64>,
}

/// `|φ+, φ-, v>` in closed form:
/// `v = 0`: `(|00> + e^{iφ+}|11>)/2π`,
/// `v = 1`: `(e^{iφ+}|01> + e^{i(φ+ + φ-)}|10>)/2π`.
pub fn cast_basis_state(phi_plus: f64, phi_minus: f64, v: u8) -> Result<CastBasisState> {
    let (p, m) = (wrap_phase(phi_plus), wrap_phase(phi_minus));
    let k = 1.0 / TAU;
    let vector = match v {
        0 => vec![C64::from(k), ZERO, ZERO, C64::cis(p) * k],
        1 => vec![ZERO, C64::cis(p) * k, C64::cis(p + m) * k, ZERO],
        _ => return invalid(format!("parity label v must be 0 or 1, got {v}")),
    };
    Ok(CastBasisState {
        phi_plus: p,
        phi_minus: m,
        v,
        vector,
    })
}

/// `(e^{ivφA}/2)[|φA, φB> + (-1)^v |φA + π, φB + π>]`, the defining
/// superposition of the cast basis in terms of the individual phases.
pub fn cast_basis_from_phases(phi_a: f64, phi_b: f64, v: u8) -> Result<Vec<C64>> {
    let sign = match v {
        0 => 1.0,
        1 => -1.0,
        _ => return invalid(format!("parity label v must be 0 or 1, got {v}")),
    };
    let prefactor = C64::cis(v as f64 * phi_a) * 0.5;
    let first = sg_product_state(phi_a, phi_b);
    let second = sg_product_state(phi_a + PI, phi_b + PI);
    Ok(first
        .iter()
        .zip(&second)
        .map(|(x, y)| prefactor * (x + y * sign))
        .collect())
}

/// `max |V ψ - (-1)^v ψ|`
pub fn v_eigen_residual(ops: &SumDiffOperators, state: &CastBasisState) -> f64 {
    let sign = if state.v == 0 { 1.0 } else { -1.0 };
    let expected: Vec<C64> = state.vector.iter().map(|z| z * sign).collect();
    max_abs_diff_vec(&ops.v.apply(&state.vector), &expected)
}

/// `max |Σv ∫∫ |φ+,φ-,v><φ+,φ-,v| - I|` on an `nodes × nodes` grid.
pub fn resolution_residual(nodes: usize) -> f64 {
    let total = integrate_periodic_2d(nodes, |p, m| {
        let b0 = cast_basis_state(p, m, 0).expect("valid label");
        let b1 = cast_basis_state(p, m, 1).expect("valid label");
        &ComplexMatrix::projector(&b0.vector) + &ComplexMatrix::projector(&b1.vector)
    });
    total.max_abs_diff(&ComplexMatrix::identity(4))
}

/// Casts a distribution over `(φA, φB)` onto `(φ+, φ-)`:
/// `𝒫(φ+, φ-) = [P(φA, φB) + P(φA + π, φB + π)]/2` with
/// `φA = (φ+ + φ-)/2`, `φB = (φ+ - φ-)/2`.
pub fn cast_distribution<F>(p: F) -> impl Fn(f64, f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    move |phi_plus, phi_minus| {
        let a = 0.5 * (phi_plus + phi_minus);
        let b = 0.5 * (phi_plus - phi_minus);
        0.5 * (p(a, b) + p(a + PI, b + PI))
    }
}

/// `(C+, C-) = (<00|rho|11>, <01|rho|10>)`.
pub(crate) fn coherence_pair(state: &QuantumState) -> Result<(C64, C64)> {
    state.expect_qubits(2)?;
    Ok(match state {
        QuantumState::Pure(c) => (c[0] * c[3].conj(), c[1] * c[2].conj()),
        QuantumState::Density(rho) => (rho[(0, 3)], rho[(1, 2)]),
    })
}

/// The cast joint distribution
/// `𝒫(φ+, φ-) = (1/4π²)[1 + γAγB(C+ e^{iφ+} + C- e^{iφ-} + c.c.)]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JointPhaseFourier {
    pub c_plus: C64,
    pub c_minus: C64,
    pub gamma_a: f64,
    pub gamma_b: f64,
}

impl JointPhaseFourier {
    pub fn from_state(state: &QuantumState, gamma_a: f64, gamma_b: f64) -> Result<Self> {
        PhasePovm::new(gamma_a)?;
        PhasePovm::new(gamma_b)?;
        let (c_plus, c_minus) = coherence_pair(state)?;
        Ok(Self {
            c_plus,
            c_minus,
            gamma_a,
            gamma_b,
        })
    }

    fn g(&self) -> f64 {
        self.gamma_a * self.gamma_b
    }

    pub fn eval(&self, phi_plus: f64, phi_minus: f64) -> f64 {
        let harmonics = self.c_plus * C64::cis(wrap_phase(phi_plus)) + self.c_minus * C64::cis(wrap_phase(phi_minus));
        (1.0 + 2.0 * self.g() * harmonics.re) / (TAU * TAU)
    }

    /// Row-major `points × points` grid of `(φ+, φ-, 𝒫)`, `φ+` outermost.
    pub fn grid(&self, points: usize) -> Vec<[f64; 3]> {
        let nodes: Vec<f64> = crate::quadrature::periodic_nodes(points).collect();
        nodes
            .iter()
            .flat_map(|&p| nodes.iter().map(move |&m| [p, m, self.eval(p, m)]))
            .collect()
    }

    /// `∫∫ e^{i(kφ+ + lφ-)} 𝒫 dφ+ dφ-` in closed form.
    pub fn moment(&self, k: i32, l: i32) -> C64 {
        match (k, l) {
            (0, 0) => ONE,
            (1, 0) => self.c_plus.conj() * self.g(),
            (-1, 0) => self.c_plus * self.g(),
            (0, 1) => self.c_minus.conj() * self.g(),
            (0, -1) => self.c_minus * self.g(),
            _ => ZERO,
        }
    }

    /// `(D+, D-) = (1 - (γAγB)²|C+|², 1 - (γAγB)²|C-|²)`
    pub fn dispersions(&self) -> (f64, f64) {
        let g2 = self.g() * self.g();
        (1.0 - g2 * self.c_plus.norm_sqr(), 1.0 - g2 * self.c_minus.norm_sqr())
    }

    /// Phase-difference marginal `∫ 𝒫 dφ+ = (1/2π)(1 + γAγB(C- e^{iφ-} + c.c.))`.
    pub fn marginal_difference(&self, phi_minus: f64) -> f64 {
        (1.0 + 2.0 * self.g() * (self.c_minus * C64::cis(wrap_phase(phi_minus))).re) / TAU
    }
}

/// `P(φA, φB) = Tr[rho Δ_γA(φA) ⊗ Δ_γB(φB)]` before casting.
pub fn product_distribution(
    state: &QuantumState,
    gamma_a: f64,
    gamma_b: f64,
) -> Result<impl Fn(f64, f64) -> f64> {
    state.expect_qubits(2)?;
    let povm = CastPovm::new(gamma_a, gamma_b)?;
    let state = state.clone();
    Ok(move |a, b| state.expectation(&povm.product_element(a, b)).re)
}

/// The cast POVM
/// `Λ(φ+, φ-) = [Δ(φA, φB) + Δ(φA + π, φB + π)]/2`, `Δ = Δ_γA ⊗ Δ_γB`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CastPovm {
    a: PhasePovm,
    b: PhasePovm,
}

pub fn cast_povm(gamma_a: f64, gamma_b: f64) -> Result<CastPovm> {
    CastPovm::new(gamma_a, gamma_b)
}

impl CastPovm {
    pub fn new(gamma_a: f64, gamma_b: f64) -> Result<Self> {
        Ok(Self {
            a: PhasePovm::new(gamma_a)?,
            b: PhasePovm::new(gamma_b)?,
        })
    }

    pub fn gammas(&self) -> (f64, f64) {
        (self.a.gamma(), self.b.gamma())
    }

    pub fn product_element(&self, phi_a: f64, phi_b: f64) -> ComplexMatrix {
        kron(&self.a.element(phi_a), &self.b.element(phi_b)).expect("single-qubit factors")
    }

    pub fn element(&self, phi_plus: f64, phi_minus: f64) -> ComplexMatrix {
        let a = 0.5 * (phi_plus + phi_minus);
        let b = 0.5 * (phi_plus - phi_minus);
        (&self.product_element(a, b) + &self.product_element(a + PI, b + PI)) * 0.5
    }

    pub fn distribution(&self, state: &QuantumState) -> Result<JointPhaseFourier> {
        let (ga, gb) = self.gammas();
        JointPhaseFourier::from_state(state, ga, gb)
    }
}

/// Phase-difference POVM `Λ(φ-) = (1/2π)[I + γAγB(e^{iφ-} S+ ⊗ S- + h.c.)]`.
pub fn marginal_diff_povm(gamma_a: f64, gamma_b: f64, phi_minus: f64) -> Result<ComplexMatrix> {
    let g = PhasePovm::new(gamma_a)?.gamma() * PhasePovm::new(gamma_b)?.gamma();
    let l = LadderSet::new();
    let raising = kron(&l.s_plus, &l.s_minus)?.scale(C64::cis(wrap_phase(phi_minus)) * g);
    let lowering = raising.adjoint();
    Ok((&(&ComplexMatrix::identity(4) + &raising) + &lowering) * (1.0 / TAU))
}

/// `Λ(φ-) = ∫ dφ' Δ_γA(φ- + φ') ⊗ Δ_γB(φ')` by an n-node trapezoidal rule.
pub fn marginal_diff_povm_quadrature(
    gamma_a: f64,
    gamma_b: f64,
    phi_minus: f64,
    nodes: usize,
) -> Result<ComplexMatrix> {
    let povm = CastPovm::new(gamma_a, gamma_b)?;
    Ok(integrate_periodic(nodes, |phi| povm.product_element(phi_minus + phi, phi)))
}

/// `∫∫ e^{i(kφ+ + lφ-)} f(φ+, φ-) dφ+ dφ-` over `[0, 2π)²`.
pub fn cast_moment(f: impl Fn(f64, f64) -> f64, k: i32, l: i32, nodes: usize) -> C64 {
    integrate_periodic_2d(nodes, |p, m| C64::cis(k as f64 * p + l as f64 * m) * f(p, m))
}

/// `∫∫ e^{ik(φA+φB)} e^{il(φA-φB)} P(φA, φB) dφA dφB` over `[0, 2π)²`.
pub fn product_moment(p: impl Fn(f64, f64) -> f64, k: i32, l: i32, nodes: usize) -> C64 {
    integrate_periodic_2d(nodes, |a, b| C64::cis(k as f64 * (a + b) + l as f64 * (a - b)) * p(a, b))
}

/// Half-integer harmonic weights `(k, l) ∈ {±1/2}²` of a cast distribution,
/// `∫∫ dφA dφB f(φA + φB, φA - φB) e^{i(kφ+ + lφ-)}`, in the order
/// `(+,+), (+,-), (-,+), (-,-)`.
pub fn half_harmonic_weights(f: impl Fn(f64, f64) -> f64, nodes: usize) -> [C64; 4] {
    const HALF: [(f64, f64); 4] = [(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)];
    HALF.map(|(k, l)| {
        integrate_periodic_2d(nodes, |a, b| {
            // kφ+ + lφ- = (k + l)φA + (k - l)φB, integer exponents on the torus.
            C64::cis((k + l) * a + (k - l) * b) * f(a + b, a - b)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, hermitian_eigen, norm};
    use crate::quadrature::periodic_nodes;
    use crate::sampling;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    const GAMMAS: [f64; 4] = [0.1, 0.5, PI / 4.0, 1.0];

    fn phi_plus() -> QuantumState {
        let h = C64::from(FRAC_1_SQRT_2);
        QuantumState::Pure(vec![h, ZERO, ZERO, h])
    }

    fn psi_plus() -> QuantumState {
        let h = C64::from(FRAC_1_SQRT_2);
        QuantumState::Pure(vec![ZERO, h, h, ZERO])
    }

    #[test]
    fn operator_examples() {
        let ops = build_sum_diff();
        let e = PhaseExponential::standard();
        assert_eq!(ops.e_plus, kron(e.matrix(), e.matrix()).unwrap());
        let spectrum: Vec<f64> = hermitian_eigen(&ops.s_plus_z).unwrap().iter().map(|p| p.value).collect();
        assert_eq!(spectrum, vec![1.0, 0.0, 0.0, -1.0]);
        let diag: Vec<C64> = ops.v.diag();
        assert_eq!(diag, vec![ONE, -ONE, -ONE, ONE]);
        assert!(ops.v.max_abs_diff(&ComplexMatrix::diagonal(&diag)) == 0.0);
        assert!(ops.e_plus.unitarity_residual() < 1e-15 && ops.e_minus.unitarity_residual() < 1e-15);
    }

    #[test]
    fn parity_operator_relations_hold() {
        let report = build_sum_diff().commutator_report();
        for name in ["[E+,V]=0", "[E-,V]=0", "V^2=I"] {
            assert_eq!(report.get(name), Some(0.0), "{name}");
        }
    }

    #[test]
    fn shift_relations_do_not_hold_on_qubits() {
        // [E, Sz] = |0><1| - e^{iφ0}|1><0|, never E itself.
        let report = build_sum_diff().commutator_report();
        assert!(report.get("[E+,S+]=E+").unwrap() > 0.5);
        assert!(report.get("[E-,S-]=E-").unwrap() > 0.5);
        assert!(report.get("[E+,S-]=0").unwrap() > 0.5);
        assert!(report.get("[E-,S+]=0").unwrap() > 0.5);
    }

    #[test]
    fn sg_product_examples() {
        let k = 1.0 / TAU;
        let v = sg_product_state(0.0, 0.0);
        assert!(max_abs_diff_vec(&v, &[C64::from(k); 4]) < 1e-17);
        let v = sg_product_state(PI, 0.0);
        let expected = [c64(k, 0.0), c64(k, 0.0), c64(-k, 0.0), c64(-k, 0.0)];
        assert!(max_abs_diff_vec(&v, &expected) < 1e-16);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10 {
            let v = sg_product_state(rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
            assert!((norm(&v).powi(2) - 1.0 / (PI * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn sg_eigen_relation_at_real_phases_only() {
        for a in [0.0, PI] {
            for b in [0.0, PI] {
                let (rp, rm) = sg_eigen_residuals(a, b);
                assert!(rp < 1e-15 && rm < 1e-15);
            }
        }
        let (rp, _) = sg_eigen_residuals(0.7, 0.0);
        assert!(rp > 1e-3);
    }

    #[test]
    fn cast_basis_parity_and_reparametrization() {
        let ops = build_sum_diff();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let (a, b) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
            for v in 0..=1u8 {
                let state = cast_basis_state(a + b, a - b, v).unwrap();
                assert!(v_eigen_residual(&ops, &state) <= 1e-12);
                let direct = cast_basis_from_phases(a, b, v).unwrap();
                assert!(max_abs_diff_vec(&direct, &state.vector) <= 1e-12);
                let shifted = cast_basis_from_phases(a + PI, b + PI, v).unwrap();
                assert!(max_abs_diff_vec(&shifted, &direct) <= 1e-12);
            }
        }
        assert!(cast_basis_state(0.0, 0.0, 2).is_err());
        assert!(cast_basis_from_phases(0.0, 0.0, 3).is_err());
    }

    #[test]
    fn cast_basis_resolves_identity() {
        assert!(resolution_residual(128) <= 1e-6);
    }

    #[test]
    fn casting_examples() {
        let u = 1.0 / (TAU * TAU);
        let uniform = cast_distribution(|_, _| u);
        assert!((uniform(1.0, 2.0) - u).abs() < 1e-18);
        let half = cast_distribution(|a, _| u * (1.0 + a.cos()));
        for p in periodic_nodes(8) {
            for m in periodic_nodes(8) {
                assert!((half(p, m) - u).abs() < 1e-16);
            }
        }
        let q = c64(0.1, 0.05);
        let sum = cast_distribution(|a, b| u * (1.0 + 2.0 * (q * C64::cis(a + b)).re));
        let m = cast_moment(&sum, -1, 0, 32);
        assert!((m - q).norm() < 1e-15);
    }

    #[test]
    fn cast_povm_examples() {
        let povm = cast_povm(1.0, 1.0).unwrap();
        let mixed = QuantumState::maximally_mixed(2).unwrap();
        for (p, m) in [(0.0, 0.0), (1.0, 4.0)] {
            assert!((mixed.expectation(&povm.element(p, m)).re - 1.0 / (TAU * TAU)).abs() < 1e-16);
        }
        for gamma_a in GAMMAS {
            for gamma_b in GAMMAS {
                let povm = cast_povm(gamma_a, gamma_b).unwrap();
                let g = gamma_a * gamma_b;
                for (p, m) in [(0.0, 0.3), (2.0, 5.0)] {
                    let phi = phi_plus().expectation(&povm.element(p, m)).re;
                    assert!((phi - (1.0 + g * p.cos()) / (TAU * TAU)).abs() < 1e-15);
                    let psi = psi_plus().expectation(&povm.element(p, m)).re;
                    assert!((psi - (1.0 + g * m.cos()) / (TAU * TAU)).abs() < 1e-15);
                }
            }
        }
        assert!(cast_povm(0.0, 1.0).is_err());
    }

    #[test]
    fn cast_povm_is_a_povm() {
        for (ga, gb) in [(1.0, 1.0), (0.1, PI / 4.0)] {
            let povm = cast_povm(ga, gb).unwrap();
            let total = integrate_periodic_2d(32, |p, m| povm.element(p, m));
            assert!(total.max_abs_diff(&ComplexMatrix::identity(4)) <= 1e-9);
            for p in periodic_nodes(8) {
                for m in periodic_nodes(8) {
                    let e = povm.element(p, m);
                    assert!(e.hermiticity_residual() == 0.0);
                    assert!(hermitian_eigen(&e).unwrap()[3].value >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn cast_povm_matches_cast_trace_rule_and_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..20 {
            let s = sampling::random_state(&mut rng, 2);
            let (ga, gb) = (rng.random_range(0.05..=1.0), rng.random_range(0.05..=1.0));
            let povm = cast_povm(ga, gb).unwrap();
            let closed = povm.distribution(&s).unwrap();
            let cast = cast_distribution(product_distribution(&s, ga, gb).unwrap());
            for _ in 0..8 {
                let (p, m) = (rng.random_range(0.0..TAU), rng.random_range(0.0..TAU));
                let direct = s.expectation(&povm.element(p, m)).re;
                assert!((direct - cast(p, m)).abs() <= 1e-12);
                assert!((direct - closed.eval(p, m)).abs() <= 1e-12);
            }
            for [_, _, v] in closed.grid(64) {
                assert!(v >= -1e-10);
            }
        }
    }

    #[test]
    fn moments_and_half_harmonics() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..5 {
            let s = sampling::random_density(&mut rng, 2);
            let p = product_distribution(&s, 1.0, 0.5).unwrap();
            let cast = cast_distribution(&p);
            let closed = JointPhaseFourier::from_state(&s, 1.0, 0.5).unwrap();
            for k in -1..=1 {
                for l in -1..=1 {
                    let lhs = cast_moment(&cast, k, l, 16);
                    let rhs = product_moment(&p, k, l, 16);
                    assert!((lhs - rhs).norm() <= 1e-9, "({k},{l})");
                    assert!((lhs - closed.moment(k, l)).norm() <= 1e-9);
                }
            }
            for w in half_harmonic_weights(&cast, 16) {
                assert!(w.norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn uncast_distribution_has_half_harmonics() {
        // The same weights taken on the uncast product distribution are nonzero.
        let plus = c64(FRAC_1_SQRT_2, 0.0);
        let s = QuantumState::Pure(vec![plus * plus; 4]);
        let p = product_distribution(&s, 1.0, 1.0).unwrap();
        let raw = half_harmonic_weights(|x, y| p(0.5 * (x + y), 0.5 * (x - y)), 16);
        assert!(raw[0].norm() > 0.1);
    }

    #[test]
    fn marginal_difference_examples() {
        let mixed = QuantumState::maximally_mixed(2).unwrap();
        let m = marginal_diff_povm(1.0, 1.0, 0.4).unwrap();
        assert!((mixed.expectation(&m).re - 1.0 / TAU).abs() < 1e-16);
        for phi in periodic_nodes(16) {
            let m = marginal_diff_povm(1.0, 1.0, phi).unwrap();
            assert!((psi_plus().expectation(&m).re - (1.0 + phi.cos()) / TAU).abs() < 1e-15);
        }
        assert!(marginal_diff_povm(1.0, 1.5, 0.0).is_err());
    }

    #[test]
    fn marginal_difference_routes_agree() {
        for (ga, gb) in [(1.0, 1.0), (0.3, 0.9)] {
            let povm = cast_povm(ga, gb).unwrap();
            for phi in [0.0, 1.3, 5.9] {
                let closed = marginal_diff_povm(ga, gb, phi).unwrap();
                let conv = marginal_diff_povm_quadrature(ga, gb, phi, 64).unwrap();
                let cast = integrate_periodic(64, |p| povm.element(p, phi));
                assert!(closed.max_abs_diff(&conv) <= 1e-9);
                assert!(closed.max_abs_diff(&cast) <= 1e-9);
            }
        }
    }

    #[test]
    fn marginal_difference_of_product_is_cross_correlation() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..10 {
            let (a, b) = (sampling::random_state(&mut rng, 1), sampling::random_state(&mut rng, 1));
            let s = QuantumState::product(&a, &b).unwrap();
            let (ga, gb) = (0.7, 1.0);
            let pa = PhasePovm::new(ga).unwrap().distribution(&a).unwrap();
            let pb = PhasePovm::new(gb).unwrap().distribution(&b).unwrap();
            let closed = JointPhaseFourier::from_state(&s, ga, gb).unwrap();
            for phi in periodic_nodes(12) {
                let corr: f64 = integrate_periodic(64, |x| pa.eval(phi + x) * pb.eval(x));
                let direct = s.expectation(&marginal_diff_povm(ga, gb, phi).unwrap()).re;
                assert!((corr - direct).abs() <= 1e-12);
                assert!((closed.marginal_difference(phi) - direct).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn one_qubit_state_rejected() {
        let s = QuantumState::basis(1, 0).unwrap();
        assert!(JointPhaseFourier::from_state(&s, 1.0, 1.0).is_err());
        assert!(product_distribution(&s, 1.0, 1.0).is_err());
    }
}
