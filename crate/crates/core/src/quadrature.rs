//! Composite trapezoidal rules on periodic grids and Gauss-Legendre rules on
//! finite intervals.
//!
//! On a uniform grid of `n` nodes over one period the trapezoidal rule
//! integrates every harmonic `e^{ikx}` with `|k| < n` exactly.

use std::f64::consts::TAU;
use std::num::NonZeroUsize;
use std::ops::{Add, Mul};

use gauss_quad::GaussLegendre;

use crate::error::{invalid, Result};

/// Nodes `2πj/n`, `j = 0..n`, of the uniform grid on `[0, 2π)`.
pub fn periodic_nodes(n: usize) -> impl Iterator<Item = f64> + Clone {
    (0..n).map(move |j| TAU * j as f64 / n as f64)
}

/// `∫_0^{2π} f(x) dx` by the n-node trapezoidal rule.
///
/// # Panics
/// If `n == 0`.
pub fn integrate_periodic<T, F>(n: usize, mut f: F) -> T
where
    T: Add<Output = T> + Mul<f64, Output = T>,
    F: FnMut(f64) -> T,
{
    assert!(n > 0, "quadrature needs at least one node");
    let mut nodes = periodic_nodes(n);
    let first = f(nodes.next().unwrap());
    let sum = nodes.fold(first, |acc, x| acc + f(x));
    sum * (TAU / n as f64)
}

/// `∫∫_{[0,2π)^2} f(x, y) dx dy` by the tensor trapezoidal rule with `n` nodes per axis.
pub fn integrate_periodic_2d<T, F>(n: usize, mut f: F) -> T
where
    T: Add<Output = T> + Mul<f64, Output = T>,
    F: FnMut(f64, f64) -> T,
{
    integrate_periodic(n, |x| integrate_periodic(n, |y| f(x, y)))
}

/// A Gauss-Legendre rule mapped onto `[a, b]`.
pub struct GaussLegendreRule {
    rule: GaussLegendre,
}

impl GaussLegendreRule {
    pub fn new(nodes: usize) -> Result<Self> {
        let Some(degree) = NonZeroUsize::new(nodes) else {
            return invalid("Gauss-Legendre rule needs at least one node");
        };
        Ok(Self {
            rule: GaussLegendre::new(degree),
        })
    }

    /// Nodes and weights on `[a, b]`.
    pub fn points(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.rule
            .nodes()
            .zip(self.rule.weights())
            .map(|(x, w)| (mid + half * x, half * w))
            .collect()
    }

    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let mut points = self.points(a, b).into_iter();
        let (x0, w0) = points.next().expect("rule has at least one node");
        points.fold(f(x0) * w0, |acc, (x, w)| acc + f(x) * w)
    }
}
