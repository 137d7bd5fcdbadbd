//! Covariant phase POVMs for a qubit.
//!
//! The family `Δγ(φ) = (1/2π)(I + γ e^{iφ} S+ + γ e^{-iφ} S-)`, `0 < γ <= 1`,
//! induces distributions `P(φ) = (1/2π)(1 + c e^{iφ} + c* e^{-iφ})` with
//! `c = γ <0|rho|1>`. Distributions are kept as the single coefficient `c`;
//! grids are only produced for export and cross-checks.
//!
//! `γ = 1` is the Susskind-Glogower POVM and `γ = π/4` is the marginal of the
//! SU(2) Q function.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::linalg::{exp_i_hermitian, ComplexMatrix, C64, ZERO};
use crate::quadrature::{integrate_periodic, periodic_nodes, GaussLegendreRule};
use crate::qubit_phase::{bloch_ket, LadderSet, PhaseExponential};
use crate::state::QuantumState;
use crate::tolerance::{DEFAULT_PERIODIC_NODES, DEFAULT_POLAR_NODES};

/// POVM parameter of the Q-function marginal.
pub const Q_FUNCTION_GAMMA: f64 = PI / 4.0;

/// Reduces an angle to the fiducial window `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if w >= TAU {
        0.0
    } else {
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhasePovm {
    gamma: f64,
}

impl PhasePovm {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return invalid(format!("POVM parameter γ must lie in (0, 1], got {gamma}"));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn element(&self, phi: f64) -> ComplexMatrix {
        let k = self.gamma / TAU;
        let off = C64::cis(wrap_phase(phi)) * k;
        ComplexMatrix::from_rows([[C64::from(1.0 / TAU), off.conj()], [off, C64::from(1.0 / TAU)]])
    }

    pub fn distribution(&self, state: &QuantumState) -> Result<PhaseFourier> {
        phase_distribution(state, self)
    }
}

pub fn povm_element(povm: &PhasePovm, phi: f64) -> ComplexMatrix {
    povm.element(phi)
}

/// A qubit phase distribution given by its first Fourier coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseFourier {
    pub c: C64,
    pub gamma: f64,
}

impl PhaseFourier {
    /// `P(φ) = (1/2π)(1 + c e^{iφ} + c* e^{-iφ})`
    pub fn eval(&self, phi: f64) -> f64 {
        (1.0 + 2.0 * (self.c * C64::cis(wrap_phase(phi))).re) / TAU
    }

    /// `points` uniformly spaced samples `(φ, P(φ))` on `[0, 2π)`.
    pub fn grid(&self, points: usize) -> Vec<(f64, f64)> {
        periodic_nodes(points).map(|phi| (phi, self.eval(phi))).collect()
    }

    pub fn dispersion(&self) -> Dispersion {
        dispersion(self)
    }

    pub fn moments(&self) -> Result<(f64, f64)> {
        moments_from_distribution(self)
    }

    /// Values at the three reconstruction angles.
    pub fn three_point_samples(&self) -> ThreePointSamples {
        let [a0, a1, am1] = THREE_POINT_ANGLES;
        ThreePointSamples {
            p0: self.eval(a0),
            p1: self.eval(a1),
            p_neg1: self.eval(am1),
        }
    }
}

pub fn phase_distribution(state: &QuantumState, povm: &PhasePovm) -> Result<PhaseFourier> {
    state.expect_qubits(1)?;
    let coherence = state.expectation(&LadderSet::new().s_plus);
    Ok(PhaseFourier {
        c: coherence * povm.gamma,
        gamma: povm.gamma,
    })
}

/// Phase dispersion `D² = 1 - |∫ e^{iφ} P(φ) dφ|² = 1 - |c|²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Dispersion {
    pub squared: f64,
}

impl Dispersion {
    pub fn value(&self) -> f64 {
        self.squared.max(0.0).sqrt()
    }
}

pub fn dispersion(d: &PhaseFourier) -> Dispersion {
    Dispersion {
        squared: 1.0 - d.c.norm_sqr(),
    }
}

/// `(<Sx>, <Sy>)` recovered from the distribution as
/// `(1/γ) ∫ (cos φ, sin φ) P(φ) dφ = (Re c, -Im c)/γ`.
pub fn moments_from_distribution(d: &PhaseFourier) -> Result<(f64, f64)> {
    if d.gamma == 0.0 || !d.gamma.is_finite() {
        return invalid("cannot recover moments from a distribution with γ = 0");
    }
    Ok((d.c.re / d.gamma, -d.c.im / d.gamma))
}

/// `φr = 2πr/3` for `r = 0, 1, -1`.
pub const THREE_POINT_ANGLES: [f64; 3] = [0.0, TAU / 3.0, -TAU / 3.0];

/// `P` sampled at the three reconstruction angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThreePointSamples {
    pub p0: f64,
    pub p1: f64,
    pub p_neg1: f64,
}

impl ThreePointSamples {
    fn pairs(&self) -> [(f64, f64); 3] {
        let [a0, a1, am1] = THREE_POINT_ANGLES;
        [(a0, self.p0), (a1, self.p1), (am1, self.p_neg1)]
    }

    pub fn coefficient(&self) -> C64 {
        reconstruct_from_three_points(self.p0, self.p1, self.p_neg1)
    }

    /// `P(φ) = (1/3) Σ_{r,s} P(φr) e^{is(φ - φr)}`
    pub fn eval(&self, phi: f64) -> f64 {
        let mut total = ZERO;
        for (angle, value) in self.pairs() {
            for s in -1..=1 {
                total += C64::cis(s as f64 * (phi - angle)) * value;
            }
        }
        total.re / 3.0
    }
}

/// `c = (2π/3) Σr P(φr) e^{-iφr}`
pub fn reconstruct_from_three_points(p0: f64, p1: f64, p_neg1: f64) -> C64 {
    let s = ThreePointSamples { p0, p1, p_neg1 };
    let sum: C64 = s.pairs().iter().map(|&(a, v)| C64::cis(-a) * v).sum();
    sum * (TAU / 3.0)
}

/// `Δγ1` obtained from `Δγ2` through the kernel
/// `(1/2π) ∫ dφ' [1 + (γ1/γ2) e^{i(φ-φ')} + c.c.] Δγ2(φ')`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvertedPovm {
    target_gamma: f64,
    source: PhasePovm,
    nodes: usize,
}

impl ConvertedPovm {
    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes.max(3);
        self
    }

    pub fn target_gamma(&self) -> f64 {
        self.target_gamma
    }

    pub fn element(&self, phi: f64) -> ComplexMatrix {
        let ratio = self.target_gamma / self.source.gamma;
        let integral = integrate_periodic(self.nodes, |phi_src| {
            let kernel = 1.0 + 2.0 * ratio * (phi - phi_src).cos();
            self.source.element(phi_src) * kernel
        });
        integral * (1.0 / TAU)
    }
}

pub fn povm_convert(target_gamma: f64, source: PhasePovm) -> Result<ConvertedPovm> {
    PhasePovm::new(target_gamma)?;
    Ok(ConvertedPovm {
        target_gamma,
        source,
        nodes: DEFAULT_PERIODIC_NODES,
    })
}

/// Band-limited part `F~` of a periodic function: the harmonics `k = -1, 0, 1`
/// of `F`, with every higher harmonic removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncatedFourier {
    /// `F_k = ∫ e^{ikφ} F(φ) dφ` for `k = -1, 0, 1`.
    pub coefficients: [C64; 3],
}

impl TruncatedFourier {
    pub fn coefficient(&self, k: i32) -> C64 {
        match k {
            -1..=1 => self.coefficients[(k + 1) as usize],
            _ => ZERO,
        }
    }

    /// `F~(φ) = (1/2π) Σ_{k=-1..1} F_k e^{-ikφ}`
    pub fn eval(&self, phi: f64) -> C64 {
        (-1..=1)
            .map(|k| self.coefficient(k) * C64::cis(-(k as f64) * phi))
            .sum::<C64>()
            / TAU
    }
}

pub fn fourier_truncate(f: impl Fn(f64) -> C64, nodes: usize) -> Result<TruncatedFourier> {
    if nodes < 3 {
        return invalid(format!("Fourier truncation needs at least 3 nodes, got {nodes}"));
    }
    let coefficient = |k: f64| integrate_periodic(nodes, |phi| C64::cis(k * phi) * f(phi));
    Ok(TruncatedFourier {
        coefficients: [coefficient(-1.0), coefficient(0.0), coefficient(1.0)],
    })
}

/// `<F> = (2π/3) Σr F~(φr) P(φr)`.
pub fn expectation_three_point(f: impl Fn(f64) -> C64, d: &PhaseFourier, nodes: usize) -> Result<C64> {
    let truncated = fourier_truncate(f, nodes)?;
    let sum: C64 = THREE_POINT_ANGLES
        .iter()
        .map(|&a| truncated.eval(a) * d.eval(a))
        .sum();
    Ok(sum * (TAU / 3.0))
}

/// `∫ F(φ) P(φ) dφ` by direct trapezoidal quadrature.
pub fn expectation_by_quadrature(f: impl Fn(f64) -> C64, d: &PhaseFourier, nodes: usize) -> C64 {
    integrate_periodic(nodes, |phi| f(phi) * d.eval(phi))
}

/// `|φ> = (|0> + e^{iφ}|1>)/√(2π)`
pub fn sg_ket(phi: f64) -> [C64; 2] {
    let n = 1.0 / TAU.sqrt();
    [C64::from(n), C64::cis(phi) * n]
}

/// `Δ_SG(φ) = |φ><φ|`
pub fn sg_projector(phi: f64) -> ComplexMatrix {
    ComplexMatrix::projector(&sg_ket(phi))
}

pub fn sg_povm() -> PhasePovm {
    PhasePovm { gamma: 1.0 }
}

/// `Q(ϑ, φ) = (1/2π) Tr[rho |ϑ,φ><ϑ,φ|]` with SU(2) coherent states.
pub fn q_function(state: &QuantumState, theta: f64, phi: f64) -> Result<f64> {
    state.expect_qubits(1)?;
    let ket = bloch_ket(theta, phi)?;
    Ok(state.expectation(&ComplexMatrix::projector(&ket)).re / TAU)
}

/// `Δ_Q(φ) = (1/2π) ∫_0^π dϑ sin ϑ |ϑ,φ><ϑ,φ|` by Gauss-Legendre quadrature in `ϑ`.
pub fn q_povm_element(phi: f64, nodes: usize) -> Result<ComplexMatrix> {
    if nodes < DEFAULT_POLAR_NODES {
        return invalid(format!(
            "Q-function POVM needs at least {DEFAULT_POLAR_NODES} nodes, got {nodes}"
        ));
    }
    let rule = GaussLegendreRule::new(nodes)?;
    let integral = rule.integrate(0.0, PI, |theta| {
        let ket = bloch_ket(theta, phi).expect("node inside [0, π]");
        ComplexMatrix::projector(&ket) * theta.sin()
    });
    Ok(integral * (1.0 / TAU))
}

/// `max |∫ Δγ(φ) dφ - I|` with an n-node trapezoidal rule.
pub fn completeness_residual(povm: &PhasePovm, nodes: usize) -> f64 {
    integrate_periodic(nodes, |phi| povm.element(phi)).max_abs_diff(&ComplexMatrix::identity(2))
}

/// `max |e^{iφ'Sz} Δ(φ) e^{-iφ'Sz} - Δ(φ + φ')|`
pub fn covariance_residual(povm: &PhasePovm, phi: f64, shift: f64) -> f64 {
    let sz = LadderSet::new().s_z;
    let u = exp_i_hermitian(&sz, shift).expect("Sz is Hermitian");
    let shifted = &(&u * &povm.element(phi)) * &u.adjoint();
    shifted.max_abs_diff(&povm.element(phi + shift))
}

/// `max |E Δ(φ) E† - Δ(φ)|`.
///
/// This does not vanish for a qubit: conjugation by `E` maps `S+` onto a
/// multiple of `S-`, so it reflects the distribution instead of leaving it
/// fixed (see [`reflection_residual`]).
pub fn complementarity_residual(povm: &PhasePovm, e: &PhaseExponential, phi: f64) -> f64 {
    conjugate(e, &povm.element(phi)).max_abs_diff(&povm.element(phi))
}

/// `max |E Δ(φ) E† - Δ(φ0 - φ)|`, which vanishes for every `E` and `γ`.
pub fn reflection_residual(povm: &PhasePovm, e: &PhaseExponential, phi: f64) -> f64 {
    conjugate(e, &povm.element(phi)).max_abs_diff(&povm.element(e.phi0() - phi))
}

fn conjugate(e: &PhaseExponential, m: &ComplexMatrix) -> ComplexMatrix {
    &(e.matrix() * m) * &e.matrix().adjoint()
}

/// Minimum eigenvalue of `Δγ(φ)`, `(1 - γ)/2π` in closed form.
pub fn min_element_eigenvalue(povm: &PhasePovm, phi: f64) -> f64 {
    crate::linalg::hermitian_eigen(&povm.element(phi))
        .expect("POVM elements are Hermitian")
        .last()
        .map_or(0.0, |p| p.value)
}
