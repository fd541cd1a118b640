//! Paths `τ ↦ F(τ)` along the segment `A∇_τB`, integrated through Chebyshev moments.
//!
//! A chain needs several integrals of the same path against different measures.
//! The path is fitted once; each integral is `Σ_k c_k·L(T_k)` where the moment
//! vector `L(T_k)` depends only on the functional and the degree. Fitted degrees
//! are powers of two, so moments are cached and shared across an ensemble.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::hermat::{eig_hermitian, frechet_in_basis, HermitianMatrix, TestFunction};
use crate::quad::{
    chebyshev_basis, integrate_eta, jacobi_rule, integrate_sigma, integrate_uniform, ChebyshevPath, EtaMeasure,
    QuadratureSpec, SigmaMeasure, DEFAULT_PATH_TOL, MAX_PATH_DEGREE,
};
use crate::scalar::r_coef;

/// Linear functionals of a scalar path `φ` on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Functional {
    /// `∫ φ dη_λ`.
    Eta(f64),
    /// `∫ φ dt`.
    Uniform,
    /// `∫ φ dσ_{λ,α}`.
    Sigma(f64, f64),
    /// `∫ φ(r(λ, t)) dη_α(t)`.
    MixedWeight(f64, f64),
    /// `∫ φ((λ + x)/2) dη_λ(x)`.
    EtaMidpoint(f64),
    /// `∫∫ φ((1-t)λ + t·x) dσ_{λ,1/2}(t) dη_λ(x)`.
    EtaSigmaNested(f64),
    /// `∫_0^1 ∫ φ dη_λ dλ`.
    EtaAveraged,
    /// `∫ (t - λ)·φ(t) dη_λ(t)`.
    EtaLever(f64),
}

impl Functional {
    fn key(&self, degree: usize) -> (u8, u64, u64, usize) {
        let (tag, x, y) = match *self {
            Functional::Eta(l) => (0, l, 0.0),
            Functional::Uniform => (1, 0.0, 0.0),
            Functional::Sigma(l, a) => (2, l, a),
            Functional::MixedWeight(l, a) => (3, l, a),
            Functional::EtaMidpoint(l) => (4, l, 0.0),
            Functional::EtaSigmaNested(l) => (5, l, 0.0),
            Functional::EtaAveraged => (6, 0.0, 0.0),
            Functional::EtaLever(l) => (7, l, 0.0),
        };
        (tag, x.to_bits(), y.to_bits(), degree)
    }

    /// `L(T_0), …, L(T_degree)` for the Chebyshev basis on `[0, 1]`.
    fn compute(&self, degree: usize) -> Result<Vec<f64>> {
        let inner = QuadratureSpec::default();
        let outer = QuadratureSpec::outer();
        let basis = |t: f64| Ok(chebyshev_basis(degree, t));
        match *self {
            Functional::Eta(l) => integrate_eta(basis, EtaMeasure::new(l)?, &inner),
            Functional::Uniform => integrate_uniform(basis, &inner),
            Functional::Sigma(l, a) => integrate_sigma(basis, SigmaMeasure::new(l, a)?, &inner),
            Functional::MixedWeight(l, a) => {
                integrate_eta(|t| Ok(chebyshev_basis(degree, r_coef(l, t))), EtaMeasure::new(a)?, &inner)
            }
            Functional::EtaMidpoint(l) => {
                integrate_eta(|x| Ok(chebyshev_basis(degree, 0.5 * (l + x))), EtaMeasure::new(l)?, &inner)
            }
            Functional::EtaSigmaNested(l) => {
                let sigma = SigmaMeasure::new(l, 0.5)?;
                eta_exact(EtaMeasure::new(l)?, degree, |x| {
                    sigma_exact(sigma, degree, |t| chebyshev_basis(degree, (1.0 - t) * l + t * x))
                })
            }
            Functional::EtaAveraged => integrate_uniform(
                |l| eta_exact(EtaMeasure::new(l)?, degree, |t| Ok(chebyshev_basis(degree, t))),
                &outer,
            ),
            Functional::EtaLever(l) => integrate_eta(
                |t| {
                    let mut v = chebyshev_basis(degree, t);
                    v.iter_mut().for_each(|x| *x *= t - l);
                    Ok(v)
                },
                EtaMeasure::new(l)?,
                &inner,
            ),
        }
    }
}

/// `∫ g dη` with one Gauss–Jacobi rule, exact when `g` is a polynomial of degree ≤ `degree`.
fn eta_exact(measure: EtaMeasure, degree: usize, g: impl Fn(f64) -> Result<Vec<f64>>) -> Result<Vec<f64>> {
    if measure.is_point_mass() {
        return g(measure.lambda());
    }
    let rule = jacobi_rule(measure.exponent(), degree / 2 + 1)?;
    let mut acc = vec![0.0; degree + 1];
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        for (a, v) in acc.iter_mut().zip(g(t)?) {
            *a += w * v;
        }
    }
    Ok(acc)
}

fn sigma_exact(measure: SigmaMeasure, degree: usize, g: impl Fn(f64) -> Vec<f64>) -> Result<Vec<f64>> {
    let (first, second) = measure.components();
    let alpha = measure.alpha();
    let x = eta_exact(first, degree, |t| Ok(g(t)))?;
    let y = eta_exact(second, degree, |t| Ok(g(t)))?;
    Ok(x.iter().zip(&y).map(|(x, y)| (1.0 - alpha) * x + alpha * y).collect())
}

type MomentKey = (u8, u64, u64, usize);

fn moment_cache() -> &'static Mutex<HashMap<MomentKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<MomentKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn moments(functional: Functional, degree: usize) -> Result<Arc<Vec<f64>>> {
    let key = functional.key(degree);
    if let Some(m) = moment_cache().lock().expect("moment cache").get(&key) {
        return Ok(Arc::clone(m));
    }
    // Computed outside the lock; a concurrent duplicate computes the same vector.
    let m = Arc::new(functional.compute(degree)?);
    moment_cache()
        .lock()
        .expect("moment cache")
        .insert(key, Arc::clone(&m));
    Ok(m)
}

/// A fitted matrix path with cached integration.
pub(crate) struct SegmentPath {
    cheb: ChebyshevPath,
}

impl SegmentPath {
    /// `τ ↦ f(A∇_τB)`.
    pub(crate) fn function(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        let cheb = ChebyshevPath::fit(
            |t| {
                let eig = eig_hermitian(&a.nabla(b, t))?;
                eig.check_domain(f)?;
                Ok(eig.map(|x| f.value(x)))
            },
            DEFAULT_PATH_TOL,
            MAX_PATH_DEGREE,
        )?;
        Ok(Self { cheb })
    }

    /// `τ ↦ Df(A∇_τB)(B - A)`.
    pub(crate) fn derivative(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        let direction = b - a;
        let cheb = ChebyshevPath::fit(
            |t| {
                let eig = eig_hermitian(&a.nabla(b, t))?;
                eig.check_domain(f)?;
                Ok(frechet_in_basis(&eig, |x| f.value(x), |x| f.derivative(x), &direction))
            },
            DEFAULT_PATH_TOL,
            MAX_PATH_DEGREE,
        )?;
        Ok(Self { cheb })
    }

    pub(crate) fn integrate(&self, functional: Functional) -> Result<HermitianMatrix> {
        let m = moments(functional, self.cheb.degree())?;
        Ok(self.cheb.combine(&m))
    }

    #[cfg(test)]
    pub(crate) fn degree(&self) -> usize {
        self.cheb.degree()
    }
}
