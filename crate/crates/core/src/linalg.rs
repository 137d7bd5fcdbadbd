//! Dense complex linear algebra for one- and two-qubit operators.
//!
//! Matrices are 2x2 or 4x4 and stored row-major. Two-qubit basis order is
//! `|00>, |01>, |10>, |11>` with qubit A as the left Kronecker factor, so the
//! index of `|ab>` is `2a + b`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::tolerance;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Shorthand for `C64::new`.
pub const fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        invalid(format!("matrix dimension must be 2 or 4, got {dim}"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// # Panics
    /// If `dim` is not 2 or 4.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(dim == 2 || dim == 4, "matrix dimension must be 2 or 4");
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// # Panics
    /// If `N` is not 2 or 4.
    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| rows[i][j])
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |i, j| C64::from(rows[i][j]))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    /// `|ket><bra|`
    pub fn outer(ket: &[C64], bra: &[C64]) -> Self {
        assert_eq!(ket.len(), bra.len(), "outer product of unequal lengths");
        Self::from_fn(ket.len(), |i, j| ket[i] * bra[j].conj())
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn diag(&self) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().copied().map(f).collect(),
        }
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length does not match matrix");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `<v|M|v>`
    pub fn expectation(&self, v: &[C64]) -> C64 {
        inner(v, &self.apply(v))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()) * 0.5
    }

    /// `max |M M^dagger - I|`
    pub fn unitarity_residual(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity(self.dim))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&rhs.entries) {
            *a += b;
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum())
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: f64) -> ComplexMatrix {
        self.scale(C64::from(k))
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: f64) -> ComplexMatrix {
        self.scale(C64::from(k))
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, k: C64) -> ComplexMatrix {
        self.scale(k)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

/// `[a, b] = ab - ba`
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &(a * b) - &(b * a)
}

/// `<a|b>`, antilinear in the first argument.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len(), "inner product of unequal lengths");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff_vec(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Kronecker product of two single-qubit operators, `a` acting on qubit A.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: m.dim,
            });
        }
    }
    Ok(ComplexMatrix::from_fn(4, |i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)]))
}

/// Kronecker product of two single-qubit vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Result<Vec<C64>> {
    for v in [a, b] {
        if v.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.len(),
            });
        }
    }
    Ok(vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Reduced operator on `keep`, tracing out the other qubit.
pub fn partial_trace(m: &ComplexMatrix, keep: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim,
        });
    }
    Ok(match keep {
        Subsystem::A => ComplexMatrix::from_fn(2, |a, a2| (0..2).map(|b| m[(2 * a + b, 2 * a2 + b)]).sum()),
        Subsystem::B => ComplexMatrix::from_fn(2, |b, b2| (0..2).map(|a| m[(2 * a + b, 2 * a + b2)]).sum()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<C64>,
}

const MAX_SWEEPS: usize = 64;

/// Eigen decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues are returned in descending order with orthonormal eigenvectors.
/// For 2x2 input a single rotation diagonalizes the matrix exactly.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Vec<EigenPair>> {
    let residual = m.hermiticity_residual();
    if residual.is_nan() || residual > tolerance::EIGEN_INPUT_HERMITIAN {
        return invalid(format!("matrix is not Hermitian (residual {residual:.3e})"));
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-18 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let modulus = apq.norm();
                if modulus <= 1e-300 {
                    continue;
                }
                // Phase that makes the (p, q) element real and positive.
                let phase = (apq / modulus).conj();
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * modulus);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let mut g = ComplexMatrix::identity(n);
                g[(p, p)] = C64::from(c);
                g[(p, q)] = C64::from(s);
                g[(q, p)] = -phase * s;
                g[(q, q)] = phase * c;

                a = &(&g.adjoint() * &a) * &g;
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                v = &v * &g;
            }
        }
    }

    let mut pairs: Vec<EigenPair> = (0..n)
        .map(|k| EigenPair {
            value: a[(k, k)].re,
            vector: (0..n).map(|i| v[(i, k)]).collect(),
        })
        .collect();
    pairs.sort_by(|x, y| y.value.total_cmp(&x.value));
    Ok(pairs)
}

/// `f(M)` for Hermitian `M` through its spectral decomposition.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(m.dim);
    for pair in hermitian_eigen(m)? {
        out += &ComplexMatrix::projector(&pair.vector).scale(f(pair.value));
    }
    Ok(out)
}

/// Principal positive-semidefinite square root. Eigenvalues below zero
/// (rounding noise) are clamped to zero.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    hermitian_function(m, |x| C64::from(x.max(0.0).sqrt()))
}

/// `exp(i t H)` for Hermitian `H`.
pub fn exp_i_hermitian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    hermitian_function(h, |x| C64::cis(t * x))
}
