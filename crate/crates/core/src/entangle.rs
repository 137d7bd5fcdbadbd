//! Entanglement degree from phase-sum and phase-difference dispersions.
//!
//! With `C+ = <00|rho|11>` and `C- = <01|rho|10>` the cast distribution gives
//! `D± = 1 - (γAγB)²|C±|²`. Dividing `|D+ - D-|` by `Γ = (γAγB/2)²` yields
//! `𝔻 = 4 ||C+|² - |C-|²|`, which no longer depends on the POVM parameters.
//!
//! `𝔻` is evaluated in the computational basis. It is not invariant under
//! local unitaries: `(H ⊗ I)|Φ+>` is maximally entangled yet has `𝔻 = 0`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigen, inner, kron, partial_trace, psd_sqrt, ComplexMatrix, Subsystem, C64, ONE, ZERO};
use crate::quadrature::integrate_periodic_2d;
use crate::state::QuantumState;
use crate::twoqubit::{cast_distribution, coherence_pair, product_distribution, JointPhaseFourier};

/// Threshold on `|κ1² - κ2²|` below which the Schmidt spectrum is treated as degenerate.
const DEGENERACY: f64 = 1e-12;
/// Below this `κ2` the second local vector of B is fixed by orthogonality.
const SMALL_KAPPA: f64 = 1e-8;
/// Partial traces within this distance of `I/2` count as maximally mixed.
pub const MAXIMAL_ENTANGLEMENT_TOL: f64 = 1e-10;

/// `|Ψ> = κ1 |x1, y1> + κ2 |x2, y2>`.
///
/// `basis_a[k]` holds `(a_k, b_k)` and `basis_b[k]` holds `(α_k, β_k)`. Each
/// `x_k` has its first nonzero component real and nonnegative; the matching
/// `y_k` carries the remaining phase so that the expansion is exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchmidtForm {
    pub kappa1: f64,
    pub kappa2: f64,
    pub basis_a: [[C64; 2]; 2],
    pub basis_b: [[C64; 2]; 2],
}

impl SchmidtForm {
    pub fn kappas(&self) -> [f64; 2] {
        [self.kappa1, self.kappa2]
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let mut out = vec![ZERO; 4];
        for (k, kappa) in self.kappas().into_iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    out[2 * i + j] += self.basis_a[k][i] * self.basis_b[k][j] * kappa;
                }
            }
        }
        out
    }

    /// `|<ψ|reconstruction>|²`
    pub fn fidelity(&self, psi: &[C64]) -> f64 {
        inner(psi, &self.reconstruct()).norm_sqr()
    }

    /// `(|C+|², |C-|²)` from Schmidt variables:
    /// `|Σκaα|²|Σκbβ|²` and `|Σκaβ|²|Σκbα|²`.
    pub fn phase_moduli(&self) -> (f64, f64) {
        let sum = |f: &dyn Fn(usize) -> C64| (0..2).map(f).sum::<C64>();
        let [x, y] = [&self.basis_a, &self.basis_b];
        let k = self.kappas();
        let a_alpha = sum(&|i| x[i][0] * y[i][0] * k[i]);
        let b_beta = sum(&|i| x[i][1] * y[i][1] * k[i]);
        let a_beta = sum(&|i| x[i][0] * y[i][1] * k[i]);
        let b_alpha = sum(&|i| x[i][1] * y[i][0] * k[i]);
        (
            a_alpha.norm_sqr() * b_beta.norm_sqr(),
            a_beta.norm_sqr() * b_alpha.norm_sqr(),
        )
    }
}

/// Rotates `v` so that its first nonzero component is real and nonnegative.
fn fix_phase(v: [C64; 2]) -> [C64; 2] {
    let lead = if v[0].norm() > 1e-15 { v[0] } else { v[1] };
    if lead.norm() == 0.0 {
        return v;
    }
    let phase = (lead / lead.norm()).conj();
    [v[0] * phase, v[1] * phase]
}

/// Schmidt decomposition of a pure two-qubit state through the spectrum of
/// `M M†`, `M_ij = <ij|Ψ>`.
pub fn schmidt_decompose(state: &QuantumState) -> Result<SchmidtForm> {
    state.expect_qubits(2)?;
    let c = state.expect_pure()?;
    let m = ComplexMatrix::from_rows([[c[0], c[1]], [c[2], c[3]]]);
    let pairs = hermitian_eigen(&(&m * &m.adjoint()))?;
    let (l1, l2) = (pairs[0].value.max(0.0), pairs[1].value.max(0.0));

    let xs: [[C64; 2]; 2] = if l1 - l2 <= DEGENERACY {
        // Any orthonormal basis diagonalizes a degenerate spectrum; take the computational one.
        [[ONE, ZERO], [ZERO, ONE]]
    } else {
        [0, 1].map(|k| fix_phase([pairs[k].vector[0], pairs[k].vector[1]]))
    };
    let kappas = [l1.sqrt(), l2.sqrt()];

    // y_k[j] = Σ_i conj(x_k[i]) M_ij / κ_k
    let project = |x: &[C64; 2], kappa: f64| -> [C64; 2] {
        [0, 1].map(|j| (x[0].conj() * m[(0, j)] + x[1].conj() * m[(1, j)]) / kappa)
    };
    let y1 = project(&xs[0], kappas[0]);
    let y2 = if kappas[1] > SMALL_KAPPA {
        project(&xs[1], kappas[1])
    } else {
        [-y1[1].conj(), y1[0].conj()]
    };
    Ok(SchmidtForm {
        kappa1: kappas[0],
        kappa2: kappas[1],
        basis_a: xs,
        basis_b: [y1, y2],
    })
}

/// `(C+, C-) = (<00|rho|11>, <01|rho|10>)`.
pub fn joint_phase_coefficients(state: &QuantumState) -> Result<(C64, C64)> {
    coherence_pair(state)
}

/// `(D+, D-)` in closed form.
pub fn sum_diff_dispersions(state: &QuantumState, gamma_a: f64, gamma_b: f64) -> Result<(f64, f64)> {
    Ok(JointPhaseFourier::from_state(state, gamma_a, gamma_b)?.dispersions())
}

/// `(D+, D-)` from an `nodes × nodes` trapezoidal quadrature of the cast
/// trace-rule distribution, `D± = 1 - |∫∫ e^{iφ±} 𝒫 dφ+ dφ-|²`.
pub fn sum_diff_dispersions_quadrature(
    state: &QuantumState,
    gamma_a: f64,
    gamma_b: f64,
    nodes: usize,
) -> Result<(f64, f64)> {
    let cast = cast_distribution(product_distribution(state, gamma_a, gamma_b)?);
    let [m_plus, m_minus] = integrate_periodic_2d(nodes, |p, m| {
        let value = cast(p, m);
        Pair([C64::cis(p) * value, C64::cis(m) * value])
    })
    .0;
    Ok((1.0 - m_plus.norm_sqr(), 1.0 - m_minus.norm_sqr()))
}

/// Two complex accumulators integrated together.
#[derive(Clone, Copy)]
struct Pair([C64; 2]);

impl std::ops::Add for Pair {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Pair([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }
}

impl std::ops::Mul<f64> for Pair {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Pair([self.0[0] * k, self.0[1] * k])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub d_plus: f64,
    pub d_minus: f64,
    pub degree: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub concurrence: f64,
    pub c_plus: C64,
    pub c_minus: C64,
}

/// `Γ = (γAγB/2)²`
pub fn normalization(gamma_a: f64, gamma_b: f64) -> f64 {
    (0.5 * gamma_a * gamma_b).powi(2)
}

pub fn entanglement_degree(state: &QuantumState, gamma_a: f64, gamma_b: f64) -> Result<EntanglementReport> {
    let joint = JointPhaseFourier::from_state(state, gamma_a, gamma_b)?;
    let (d_plus, d_minus) = joint.dispersions();
    // |D+ - D-|/Γ simplifies exactly; taking the difference of the moduli
    // directly avoids cancellation in D± when γAγB is small.
    let degree = 4.0 * (joint.c_plus.norm_sqr() - joint.c_minus.norm_sqr()).abs();
    Ok(EntanglementReport {
        d_plus,
        d_minus,
        degree,
        gamma_a,
        gamma_b,
        concurrence: concurrence(state)?,
        c_plus: joint.c_plus,
        c_minus: joint.c_minus,
    })
}

/// `|D+ - D-|/Γ` evaluated literally from the two dispersions.
pub fn degree_from_dispersions(d_plus: f64, d_minus: f64, gamma_a: f64, gamma_b: f64) -> f64 {
    (d_plus - d_minus).abs() / normalization(gamma_a, gamma_b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [Self::PhiPlus, Self::PhiMinus, Self::PsiPlus, Self::PsiMinus];

    pub fn name(&self) -> &'static str {
        match self {
            Self::PhiPlus => "phi+",
            Self::PhiMinus => "phi-",
            Self::PsiPlus => "psi+",
            Self::PsiMinus => "psi-",
        }
    }

    pub fn amplitudes(&self) -> Vec<C64> {
        let h = C64::from(FRAC_1_SQRT_2);
        match self {
            Self::PhiPlus => vec![h, ZERO, ZERO, h],
            Self::PhiMinus => vec![h, ZERO, ZERO, -h],
            Self::PsiPlus => vec![ZERO, h, h, ZERO],
            Self::PsiMinus => vec![ZERO, h, -h, ZERO],
        }
    }

    pub fn state(&self) -> QuantumState {
        QuantumState::Pure(self.amplitudes())
    }
}

/// `|Φ+>, |Φ->, |Ψ+>, |Ψ->` in that order.
pub fn bell_states() -> [QuantumState; 4] {
    BellState::ALL.map(|b| b.state())
}

/// `(H ⊗ I)|Φ+> = (|00> + |01> + |10> - |11>)/2`.
pub fn hadamard_rotated_bell_state() -> QuantumState {
    let h = C64::from(0.5);
    QuantumState::Pure(vec![h, h, h, -h])
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(&self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plus => "plus",
            Self::Minus => "minus",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Self::Plus),
            "minus" | "-" => Ok(Self::Minus),
            other => invalid(format!("sign must be 'plus' or 'minus', got '{other}'")),
        }
    }
}

/// `|Φε±> = (1/√2){[ε|0> + (1-ε)|1>]/𝒩 ⊗ |0> ± |11>}` with
/// `𝒩 = √(ε² + (1-ε)²)`, together with the predicted degree `ε²/𝒩²`.
pub fn epsilon_family(epsilon: f64, sign: Sign) -> Result<(QuantumState, f64)> {
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("ε must lie in [0, 1], got {epsilon}"));
    }
    let n2 = epsilon * epsilon + (1.0 - epsilon).powi(2);
    let n = n2.sqrt();
    let h = FRAC_1_SQRT_2;
    let amplitudes = vec![
        C64::from(h * epsilon / n),
        ZERO,
        C64::from(h * (1.0 - epsilon) / n),
        C64::from(h * sign.value()),
    ];
    Ok((QuantumState::Pure(amplitudes), epsilon * epsilon / n2))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MaximalEntanglementCheck {
    pub maximal: bool,
    /// `max |Tr_B ρ - I/2|`
    pub residual_a: f64,
    /// `max |Tr_A ρ - I/2|`
    pub residual_b: f64,
}

/// Whether both reduced states of a pure two-qubit state are `I/2`.
pub fn is_maximally_entangled(state: &QuantumState) -> Result<MaximalEntanglementCheck> {
    state.expect_qubits(2)?;
    state.expect_pure()?;
    let rho = state.density_matrix();
    let half = ComplexMatrix::identity(2) * 0.5;
    let residual_a = partial_trace(&rho, Subsystem::A)?.max_abs_diff(&half);
    let residual_b = partial_trace(&rho, Subsystem::B)?.max_abs_diff(&half);
    Ok(MaximalEntanglementCheck {
        maximal: residual_a <= MAXIMAL_ENTANGLEMENT_TOL && residual_b <= MAXIMAL_ENTANGLEMENT_TOL,
        residual_a,
        residual_b,
    })
}

/// Wootters concurrence.
///
/// Pure states use `2|c00 c11 - c01 c10|`. Density matrices use the square
/// roots `s1 ≥ … ≥ s4` of the eigenvalues of `√ρ ρ~ √ρ`,
/// `ρ~ = (σy ⊗ σy) ρ* (σy ⊗ σy)`, and return `max(0, s1 - s2 - s3 - s4)`.
pub fn concurrence(state: &QuantumState) -> Result<f64> {
    state.expect_qubits(2)?;
    match state {
        QuantumState::Pure(c) => Ok((2.0 * (c[0] * c[3] - c[1] * c[2]).norm()).min(1.0)),
        QuantumState::Density(rho) => {
            let sy = ComplexMatrix::from_rows([[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]]);
            let flip = kron(&sy, &sy)?;
            let tilde = &(&flip * &rho.conj()) * &flip;
            let root = psd_sqrt(&rho.hermitian_part())?;
            let r = (&(&root * &tilde) * &root).hermitian_part();
            let s: Vec<f64> = hermitian_eigen(&r)?.iter().map(|p| p.value.max(0.0).sqrt()).collect();
            Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
        }
    }
}

/// `ρ_A ⊗ ρ_B` has `|C+| = |C-|`; returns `||C+| - |C-||`.
pub fn product_coherence_gap(state: &QuantumState) -> Result<f64> {
    let (p, m) = coherence_pair(state)?;
    Ok((p.norm() - m.norm()).abs())
}

/// One row of an `ε` sweep over the `Φε` family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub predicted: f64,
    pub computed: f64,
    pub concurrence: f64,
}

/// Evaluates `𝔻` on `steps` equally spaced `ε` values from 0 to 1.
pub fn epsilon_sweep(steps: usize, sign: Sign, gamma_a: f64, gamma_b: f64) -> Result<Vec<SweepRow>> {
    if steps < 2 {
        return invalid(format!("an ε sweep needs at least 2 steps, got {steps}"));
    }
    (0..steps)
        .map(|i| {
            let epsilon = i as f64 / (steps - 1) as f64;
            let (state, predicted) = epsilon_family(epsilon, sign)?;
            let report = entanglement_degree(&state, gamma_a, gamma_b)?;
            Ok(SweepRow {
                epsilon,
                predicted,
                computed: report.degree,
                concurrence: report.concurrence,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, norm};
    use crate::sampling;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const GAMMAS: [f64; 5] = [0.1, 0.25, 0.5, PI / 4.0, 1.0];

    #[test]
    fn schmidt_examples() {
        let f = schmidt_decompose(&BellState::PhiPlus.state()).unwrap();
        assert!((f.kappa1 - FRAC_1_SQRT_2).abs() < 1e-15 && (f.kappa2 - FRAC_1_SQRT_2).abs() < 1e-15);
        let f = schmidt_decompose(&QuantumState::basis(2, 0).unwrap()).unwrap();
        assert_eq!((f.kappa1, f.kappa2), (1.0, 0.0));
        let (s, _) = epsilon_family(0.5, Sign::Plus).unwrap();
        let f = schmidt_decompose(&s).unwrap();
        assert!((f.kappa1.powi(2) + f.kappa2.powi(2) - 1.0).abs() < 1e-12);
        assert!(f.fidelity(s.amplitudes().unwrap()) >= 1.0 - 1e-12);
    }

    #[test]
    fn schmidt_rejects_mixed_input() {
        assert!(schmidt_decompose(&QuantumState::maximally_mixed(2).unwrap()).is_err());
        assert!(schmidt_decompose(&QuantumState::basis(1, 0).unwrap()).is_err());
    }

    #[test]
    fn schmidt_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let s = sampling::random_pure_state(&mut rng, 2);
            let psi = s.amplitudes().unwrap();
            let f = schmidt_decompose(&s).unwrap();
            assert!(f.kappa1 >= f.kappa2 && f.kappa2 >= 0.0);
            assert!((f.kappa1.powi(2) + f.kappa2.powi(2) - 1.0).abs() <= 1e-12);
            for basis in [&f.basis_a, &f.basis_b] {
                assert!((norm(&basis[0]) - 1.0).abs() <= 1e-12);
                assert!((norm(&basis[1]) - 1.0).abs() <= 1e-12);
                assert!(inner(&basis[0], &basis[1]).norm() <= 1e-12);
            }
            assert!(f.fidelity(psi) >= 1.0 - 1e-12);
            let (p, m) = joint_phase_coefficients(&s).unwrap();
            let (mp, mm) = f.phase_moduli();
            assert!((mp - p.norm_sqr()).abs() <= 1e-12 && (mm - m.norm_sqr()).abs() <= 1e-12);
            let c = concurrence(&s).unwrap();
            assert!((c - 2.0 * f.kappa1 * f.kappa2).abs() <= 1e-10);
        }
    }

    #[test]
    fn local_vectors_have_real_leading_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let f = schmidt_decompose(&sampling::random_pure_state(&mut rng, 2)).unwrap();
            for x in f.basis_a {
                let lead = if x[0].norm() > 1e-15 { x[0] } else { x[1] };
                assert!(lead.im.abs() < 1e-15 && lead.re >= 0.0);
            }
        }
    }

    #[test]
    fn coefficient_examples() {
        let (p, m) = joint_phase_coefficients(&BellState::PhiPlus.state()).unwrap();
        assert!((p - c64(0.5, 0.0)).norm() < 1e-15 && m.norm() == 0.0);
        let (p, m) = joint_phase_coefficients(&BellState::PsiPlus.state()).unwrap();
        assert!(p.norm() == 0.0 && (m - c64(0.5, 0.0)).norm() < 1e-15);
        let (p, m) = joint_phase_coefficients(&hadamard_rotated_bell_state()).unwrap();
        assert!((p - c64(-0.25, 0.0)).norm() < 1e-15 && (m - c64(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dispersion_examples() {
        let (dp, dm) = sum_diff_dispersions(&BellState::PhiPlus.state(), 1.0, 1.0).unwrap();
        assert!((dp - 0.75).abs() < 1e-15 && dm == 1.0);
        for g in GAMMAS {
            let mixed = QuantumState::maximally_mixed(2).unwrap();
            assert_eq!(sum_diff_dispersions(&mixed, g, g).unwrap(), (1.0, 1.0));
            let zero = QuantumState::basis(2, 0).unwrap();
            assert_eq!(sum_diff_dispersions(&zero, g, 1.0).unwrap(), (1.0, 1.0));
        }
        assert!(sum_diff_dispersions(&BellState::PhiPlus.state(), 0.0, 1.0).is_err());
    }

    #[test]
    fn dispersions_match_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let s = sampling::random_state(&mut rng, 2);
            let (ga, gb) = (rng.random_range(0.05..=1.0), rng.random_range(0.05..=1.0));
            let (dp, dm) = sum_diff_dispersions(&s, ga, gb).unwrap();
            let (qp, qm) = sum_diff_dispersions_quadrature(&s, ga, gb, 16).unwrap();
            assert!((dp - qp).abs() <= 1e-9 && (dm - qm).abs() <= 1e-9);
            assert!((0.0..=1.0).contains(&dp) && (0.0..=1.0).contains(&dm));
        }
    }

    #[test]
    fn bell_states_are_maximal_with_unit_degree() {
        let states = bell_states();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let g = inner(a.amplitudes().unwrap(), b.amplitudes().unwrap());
                let expected = if i == j { ONE } else { ZERO };
                assert!((g - expected).norm() < 1e-15);
            }
            assert!(is_maximally_entangled(a).unwrap().maximal);
            for ga in GAMMAS {
                for gb in GAMMAS {
                    let r = entanglement_degree(a, ga, gb).unwrap();
                    assert!((r.degree - 1.0).abs() <= 1e-12);
                    let literal = degree_from_dispersions(r.d_plus, r.d_minus, ga, gb);
                    assert!((literal - 1.0).abs() <= 1e-9);
                }
            }
            assert!((concurrence(a).unwrap() - 1.0).abs() <= 1e-12);
        }
        assert_eq!(
            BellState::PhiPlus.amplitudes(),
            vec![C64::from(FRAC_1_SQRT_2), ZERO, ZERO, C64::from(FRAC_1_SQRT_2)]
        );
    }

    #[test]
    fn product_states_have_zero_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..1000 {
            let s = sampling::random_product_state(&mut rng);
            let r = entanglement_degree(&s, 1.0, 1.0).unwrap();
            assert!(r.degree <= 1e-12, "{}", r.degree);
            assert!(product_coherence_gap(&s).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn epsilon_family_examples() {
        for sign in [Sign::Plus, Sign::Minus] {
            let (s, d) = epsilon_family(1.0, sign).unwrap();
            let bell = if sign == Sign::Plus { BellState::PhiPlus } else { BellState::PhiMinus };
            assert_eq!(s, bell.state());
            assert_eq!(d, 1.0);
            let (s, d) = epsilon_family(0.0, sign).unwrap();
            let h = C64::from(FRAC_1_SQRT_2);
            assert_eq!(s, QuantumState::Pure(vec![ZERO, ZERO, h, h * sign.value()]));
            assert_eq!(d, 0.0);
            let (s, d) = epsilon_family(0.5, sign).unwrap();
            assert!((d - 0.5).abs() < 1e-15);
            assert!((entanglement_degree(&s, 1.0, 1.0).unwrap().degree - 0.5).abs() <= 1e-12);
            assert!((concurrence(&s).unwrap() - FRAC_1_SQRT_2).abs() <= 1e-12);
        }
        assert!(epsilon_family(-0.1, Sign::Plus).is_err());
        assert!(epsilon_family(1.1, Sign::Plus).is_err());
        assert!(epsilon_family(f64::NAN, Sign::Plus).is_err());
    }

    #[test]
    fn epsilon_family_degree_is_concurrence_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let grid = (0..=10).map(|i| i as f64 / 10.0);
        let random: Vec<f64> = (0..100).map(|_| rng.random_range(0.0..=1.0)).collect();
        for eps in grid.chain(random) {
            for sign in [Sign::Plus, Sign::Minus] {
                let (s, predicted) = epsilon_family(eps, sign).unwrap();
                assert!((norm(s.amplitudes().unwrap()) - 1.0).abs() <= 1e-15);
                let r = entanglement_degree(&s, 0.5, 1.0).unwrap();
                assert!((r.degree - predicted).abs() <= 1e-12);
                assert!((r.degree - r.concurrence.powi(2)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn degree_is_gamma_independent_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for _ in 0..100 {
            let s = sampling::random_state(&mut rng, 2);
            let reference = entanglement_degree(&s, 1.0, 1.0).unwrap().degree;
            assert!((0.0..=1.0 + 1e-12).contains(&reference));
            for ga in GAMMAS {
                for gb in GAMMAS {
                    assert!((entanglement_degree(&s, ga, gb).unwrap().degree - reference).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn maximal_entanglement_examples() {
        assert!(is_maximally_entangled(&BellState::PhiMinus.state()).unwrap().maximal);
        assert!(!is_maximally_entangled(&QuantumState::basis(2, 0).unwrap()).unwrap().maximal);
        let rotated = hadamard_rotated_bell_state();
        assert!(is_maximally_entangled(&rotated).unwrap().maximal);
        let r = entanglement_degree(&rotated, 1.0, 1.0).unwrap();
        assert!(r.degree.abs() < 1e-15);
        assert!((r.concurrence - 1.0).abs() < 1e-15);
        assert!(is_maximally_entangled(&QuantumState::maximally_mixed(2).unwrap()).is_err());
    }

    #[test]
    fn concurrence_of_density_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..50 {
            let pure = sampling::random_pure_state(&mut rng, 2);
            let dens = QuantumState::Density(pure.density_matrix());
            let (a, b) = (concurrence(&pure).unwrap(), concurrence(&dens).unwrap());
            assert!((a - b).abs() <= 1e-7, "{a} {b}");
        }
        // Werner state p|Ψ-><Ψ-| + (1-p)I/4 has C = max(0, (3p - 1)/2).
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let singlet = BellState::PsiMinus.state().density_matrix();
            let rho = &(singlet * p) + &(ComplexMatrix::identity(4) * ((1.0 - p) / 4.0));
            let c = concurrence(&QuantumState::Density(rho)).unwrap();
            assert!((c - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() <= 1e-7, "p={p}: {c}");
        }
        let product = QuantumState::Density(QuantumState::basis(2, 1).unwrap().density_matrix());
        assert!(concurrence(&product).unwrap() <= 1e-7);
    }

    #[test]
    fn sweep_rows() {
        let rows = epsilon_sweep(11, Sign::Plus, 1.0, 1.0).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!((rows[0].epsilon, rows[0].predicted), (0.0, 0.0));
        assert!(rows[0].computed.abs() < 1e-15);
        assert!((rows[10].computed - 1.0).abs() < 1e-12);
        assert!((rows[5].computed - 0.5).abs() < 1e-12);
        assert!((rows[5].concurrence - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(rows.iter().all(|r| (r.computed - r.predicted).abs() <= 1e-12));
        assert!(epsilon_sweep(1, Sign::Plus, 1.0, 1.0).is_err());
    }

    #[test]
    fn sign_parsing() {
        assert_eq!("plus".parse::<Sign>().unwrap(), Sign::Plus);
        assert_eq!("minus".parse::<Sign>().unwrap(), Sign::Minus);
        assert!("other".parse::<Sign>().is_err());
        assert_eq!(Sign::Minus.to_string(), "minus");
    }
}
