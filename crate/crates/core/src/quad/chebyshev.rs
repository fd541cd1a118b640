//! Chebyshev expansions of matrix-valued paths `τ ↦ F(τ)` on `[0, 1]`.
//!
//! Nested integrals of `f(A∇_τB)` all reduce to linear functionals of one
//! path. Fitting the path once and pushing the functional onto the scalar
//! Chebyshev basis replaces `O(n²)` matrix function evaluations by `O(N)`
//! evaluations plus scalar quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hermat::HermitianMatrix;

pub const DEFAULT_PATH_TOL: f64 = 1e-13;
pub const MAX_PATH_DEGREE: usize = 1024;
const MIN_PATH_DEGREE: usize = 16;

#[derive(Clone, Debug)]
pub struct ChebyshevPath {
    /// `F(t) ≈ Σ_k coeffs[k]·T_k(2t - 1)`.
    coeffs: Vec<HermitianMatrix>,
}

fn lobatto_point(j: usize, n: usize) -> f64 {
    0.5 * (1.0 + (PI * j as f64 / n as f64).cos())
}

impl ChebyshevPath {
    /// Samples `path` on nested Chebyshev-Lobatto grids, doubling until the
    /// trailing eighth of the coefficients falls below `tol` times the largest one.
    pub fn fit(path: impl Fn(f64) -> Result<HermitianMatrix>, tol: f64, max_degree: usize) -> Result<Self> {
        let mut n = MIN_PATH_DEGREE;
        let mut samples: Vec<HermitianMatrix> = (0..=n).map(|j| path(lobatto_point(j, n))).collect::<Result<_>>()?;
        loop {
            let coeffs = Self::coefficients(&samples);
            let norms: Vec<f64> = coeffs.iter().map(|c| c.frobenius()).collect();
            let scale = norms.iter().copied().fold(0.0, f64::max);
            let tail = norms[n - n / 8..].iter().copied().fold(0.0, f64::max);
            if tail <= tol * scale || scale == 0.0 {
                return Ok(Self { coeffs });
            }
            if 2 * n > max_degree {
                return Err(Error::Quadrature {
                    nodes: n + 1,
                    previous: scale,
                    last: tail,
                    difference: tail,
                    tolerance: tol * scale,
                });
            }
            let finer = 2 * n;
            let mut refined = Vec::with_capacity(finer + 1);
            for j in 0..=finer {
                if j % 2 == 0 {
                    refined.push(samples[j / 2].clone());
                } else {
                    refined.push(path(lobatto_point(j, finer))?);
                }
            }
            samples = refined;
            n = finer;
        }
    }

    fn coefficients(samples: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let n = samples.len() - 1;
        let dim = samples[0].dim();
        (0..=n)
            .map(|k| {
                let mut acc = HermitianMatrix::zeros(dim);
                for (j, f) in samples.iter().enumerate() {
                    let end = if j == 0 || j == n { 0.5 } else { 1.0 };
                    let w = end * (PI * (j * k % (2 * n)) as f64 / n as f64).cos();
                    acc.axpy(w, f);
                }
                let end = if k == 0 || k == n { 0.5 } else { 1.0 };
                acc.scale(2.0 * end / n as f64)
            })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    /// `[T_0(2t-1), …, T_N(2t-1)]`.
    pub fn basis(&self, t: f64) -> Vec<f64> {
        chebyshev_basis(self.degree(), t)
    }

    pub fn eval(&self, t: f64) -> HermitianMatrix {
        self.combine(&self.basis(t))
    }

    /// `Σ_k weights[k]·coeffs[k]`.
    pub fn combine(&self, weights: &[f64]) -> HermitianMatrix {
        let mut acc = HermitianMatrix::zeros(self.dim());
        for (c, &w) in self.coeffs.iter().zip(weights) {
            acc.axpy(w, c);
        }
        acc
    }

    /// Applies a linear functional `L` to the path as `Σ_k L(T_k)·coeffs[k]`.
    ///
    /// `functional` receives the basis evaluator and must return `L` applied to it
    /// componentwise, typically by running a (nested) quadrature over `Vec<f64>`.
    pub fn apply_functional(
        &self,
        functional: impl FnOnce(&dyn Fn(f64) -> Result<Vec<f64>>) -> Result<Vec<f64>>,
    ) -> Result<HermitianMatrix> {
        let degree = self.degree();
        let moments = functional(&|t| Ok(chebyshev_basis(degree, t)))?;
        Ok(self.combine(&moments))
    }
}

pub fn chebyshev_basis(degree: usize, t: f64) -> Vec<f64> {
    let x = 2.0 * t - 1.0;
    let mut out = Vec::with_capacity(degree + 1);
    out.push(1.0);
    if degree >= 1 {
        out.push(x);
    }
    for k in 2..=degree {
        let next = 2.0 * x * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{apply_spectral, random_hpd, TestFunction};
    use crate::quad::{integrate_eta, EtaMeasure, QuadratureSpec};

    #[test]
    fn reproduces_matrix_function_path() {
        let a = random_hpd(3, 20.0, 5).unwrap();
        let b = random_hpd(3, 20.0, 6).unwrap();
        for f in TestFunction::palette() {
            let path = |t: f64| apply_spectral(&f, &a.nabla(&b, t));
            let cheb = ChebyshevPath::fit(path, DEFAULT_PATH_TOL, MAX_PATH_DEGREE).unwrap();
            for &t in &[0.0, 0.013, 0.37, 0.5, 0.999, 1.0] {
                let direct = path(t).unwrap();
                let err = cheb.eval(t).max_abs_diff(&direct);
                assert!(err <= 1e-11 * (1.0 + direct.max_abs_entry()), "{f} at {t}: {err:e}");
            }
        }
    }

    #[test]
    fn functional_matches_direct_integral() {
        let a = random_hpd(4, 50.0, 7).unwrap();
        let b = random_hpd(4, 50.0, 8).unwrap();
        let f = TestFunction::Log;
        let path = |t: f64| apply_spectral(&f, &a.nabla(&b, t));
        let cheb = ChebyshevPath::fit(path, DEFAULT_PATH_TOL, MAX_PATH_DEGREE).unwrap();
        let spec = QuadratureSpec::default();
        let m = EtaMeasure::new(0.2).unwrap();
        let via_path = cheb.apply_functional(|basis| integrate_eta(basis, m, &spec)).unwrap();
        let direct = integrate_eta(path, m, &spec).unwrap();
        assert!(via_path.max_abs_diff(&direct) < 1e-11);
    }

    #[test]
    fn polynomial_path_is_exact() {
        let a = HermitianMatrix::diag(&[1.0, 2.0]).unwrap();
        let cheb = ChebyshevPath::fit(|t| Ok(a.scale(t * t * t)), DEFAULT_PATH_TOL, 64).unwrap();
        assert_eq!(cheb.degree(), MIN_PATH_DEGREE);
        assert!(cheb.eval(0.3).max_abs_diff(&a.scale(0.027)) < 1e-15);
    }
}
