use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::function::TestFunction;
use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

/// Relative factor of the positive-definite gate: `λ_min > PD_GATE·(1 + λ_max)`.
pub const PD_GATE: f64 = 1e-10;

/// Relative factor of the divided-difference degeneracy threshold.
pub const DIVIDED_DIFFERENCE_GAP: f64 = 1e-8;

/// Margin by which eigenvalues must sit inside an open domain.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// `M = U·diag(eigenvalues)·U*` with eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `U·diag(f(λ_i))·U*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.with_eigenvalues(&values)
    }

    /// `U·diag(values)·U*` for caller-supplied eigenvalues.
    pub fn with_eigenvalues(&self, values: &[f64]) -> HermitianMatrix {
        let u = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            let v = Complex64::new(v, 0.0);
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        HermitianMatrix::symmetrized(scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.with_eigenvalues(&self.eigenvalues)
    }

    /// Checks every eigenvalue lies inside `f`'s open domain.
    pub fn check_domain(&self, f: &TestFunction) -> Result<()> {
        let (lo, hi) = f.domain();
        for &x in &self.eigenvalues {
            if !(x > lo + DOMAIN_MARGIN && x < hi - DOMAIN_MARGIN) {
                return Err(Error::SpectrumDomain {
                    function: f.id(),
                    eigenvalue: x,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min() > PD_GATE * (1.0 + self.max())
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eig_hermitian(m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let condition = || {
        let d = m.diagonal();
        let hi = d.iter().fold(f64::MIN, |a, &b| a.max(b.abs()));
        let lo = d.iter().fold(f64::MAX, |a, &b| a.min(b.abs()));
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    };
    let (values, vectors) = if m.is_real() {
        let eig = SymmetricEigen::try_new(m.real_part(), EIG_EPS, EIG_MAX_ITER).ok_or(
            Error::EigenNonConvergence {
                dim: n,
                condition: condition(),
            },
        )?;
        let vectors = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        (eig.eigenvalues, vectors)
    } else {
        let eig = SymmetricEigen::try_new(m.as_matrix().clone(), EIG_EPS, EIG_MAX_ITER).ok_or(
            Error::EigenNonConvergence {
                dim: n,
                condition: condition(),
            },
        )?;
        (eig.eigenvalues, eig.eigenvectors)
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let eigenvalues = order.iter().map(|&i| values[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `f(M)` through the spectral theorem, with a domain check.
pub fn apply_spectral(f: &TestFunction, m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = eig_hermitian(m)?;
    eig.check_domain(f)?;
    Ok(eig.map(|x| f.value(x)))
}

/// `f(M)` for an arbitrary scalar map, no domain check.
pub fn apply_map(m: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    Ok(eig_hermitian(m)?.map(f))
}

/// Fails unless `m` passes the positive-definite gate.
pub fn require_positive_definite(name: &str, m: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let eig = eig_hermitian(m)?;
    if !eig.is_positive_definite() {
        return Err(Error::NotPositiveDefinite {
            name: name.to_string(),
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig)
}

pub fn inverse(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    let eig = require_positive_definite("operand", m)?;
    Ok(eig.map(|x| 1.0 / x))
}

/// `A^{1/2}·X·A^{1/2}` for positive-definite `A`.
pub fn congruence_sandwich(a: &HermitianMatrix, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    a.check_same_dim(x)?;
    let eig = require_positive_definite("A", a)?;
    let root = eig.map(f64::sqrt);
    Ok(x.sandwich(&root))
}

/// Result of testing `A ≤ B` in the Loewner order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LoewnerVerdict {
    /// Smallest eigenvalue of `B - A`.
    pub margin: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl LoewnerVerdict {
    pub fn new(margin: f64, tolerance: f64) -> Self {
        Self {
            margin,
            tolerance,
            holds: margin >= -tolerance,
        }
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.min())
}

/// Tests `A ≤ B`: the margin is the smallest eigenvalue of `B - A`.
pub fn loewner_compare(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<LoewnerVerdict> {
    a.check_same_dim(b)?;
    if !(tol >= 0.0) {
        return Err(Error::param("tol", tol, "must be nonnegative"));
    }
    let margin = min_eigenvalue(&(b - a))?;
    Ok(LoewnerVerdict::new(margin, tol))
}

/// Directional derivative `Df(A)(B)` by first divided differences in the eigenbasis of `A`.
pub fn frechet_derivative(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    let eig = eig_hermitian(a)?;
    eig.check_domain(f)?;
    Ok(frechet_in_basis(&eig, |x| f.value(x), |x| f.derivative(x), b))
}

/// Divided-difference derivative given a precomputed decomposition of the base point.
pub fn frechet_in_basis(
    eig: &SpectralDecomposition,
    value: impl Fn(f64) -> f64,
    derivative: impl Fn(f64) -> f64,
    direction: &HermitianMatrix,
) -> HermitianMatrix {
    let n = eig.dim();
    let u = &eig.eigenvectors;
    let lam = &eig.eigenvalues;
    let fl: Vec<f64> = lam.iter().map(|&x| value(x)).collect();
    let delta = DIVIDED_DIFFERENCE_GAP * (1.0 + eig.spectral_radius());
    let mut inner = u.adjoint() * direction.as_matrix() * u;
    for i in 0..n {
        for j in 0..n {
            let gap = lam[i] - lam[j];
            let phi = if gap.abs() > delta {
                (fl[i] - fl[j]) / gap
            } else {
                derivative(0.5 * (lam[i] + lam[j]))
            };
            inner[(i, j)] *= phi;
        }
    }
    HermitianMatrix::symmetrized(u * inner * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::random::random_hpd;

    fn assert_close(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) {
        let d = a.max_abs_diff(b);
        assert!(d <= tol, "difference {d:e} > {tol:e}\n{a}\n{b}");
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let eig = eig_hermitian(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
        let eig = eig_hermitian(&HermitianMatrix::diag(&[2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0]);
    }

    #[test]
    fn reconstruction_and_unitarity() {
        for seed in 0..10 {
            let m = random_hpd(5, 50.0, seed).unwrap();
            let eig = eig_hermitian(&m).unwrap();
            assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let rho = eig.spectral_radius();
            let err = eig.reconstruct().max_abs_diff(&m);
            assert!(err <= 1e-12 * (1.0 + rho), "reconstruction {err:e}");
            let u = &eig.eigenvectors;
            let gram = u.adjoint() * u;
            let id = DMatrix::<Complex64>::identity(5, 5);
            let off = (gram - id).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(off <= 1e-12, "U*U deviates by {off:e}");
        }
    }

    #[test]
    fn spectral_functions_on_diagonals() {
        let m = HermitianMatrix::diag(&[1.0, 2.0]).unwrap();
        let inv = apply_spectral(&TestFunction::Inv, &m).unwrap();
        assert_close(&inv, &HermitianMatrix::diag(&[1.0, 0.5]).unwrap(), 1e-15);
        let m = HermitianMatrix::diag(&[4.0, 9.0]).unwrap();
        let root = apply_spectral(&TestFunction::Pow(0.5), &m).unwrap();
        assert_close(&root, &HermitianMatrix::diag(&[2.0, 3.0]).unwrap(), 1e-14);
    }

    #[test]
    fn square_matches_product() {
        let m = random_hpd(4, 10.0, 3).unwrap();
        let sq = apply_spectral(&TestFunction::Square, &m).unwrap();
        let direct = HermitianMatrix::from_complex(m.matmul(&m)).unwrap();
        assert!(sq.max_abs_diff(&direct) <= 1e-12 * (1.0 + direct.max_abs_entry()));
    }

    #[test]
    fn domain_violation_names_eigenvalue() {
        let m = HermitianMatrix::diag(&[-1.0, 2.0]).unwrap();
        match apply_spectral(&TestFunction::Log, &m).unwrap_err() {
            Error::SpectrumDomain { eigenvalue, .. } => assert_eq!(eigenvalue, -1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sandwich_cases() {
        let x = random_hpd(3, 5.0, 1).unwrap();
        let out = congruence_sandwich(&HermitianMatrix::identity(3), &x).unwrap();
        assert_close(&out, &x, 1e-14);
        let a = HermitianMatrix::diag(&[4.0, 4.0]).unwrap();
        let out = congruence_sandwich(&a, &HermitianMatrix::identity(2)).unwrap();
        assert_close(&out, &a, 1e-14);
        let bad = HermitianMatrix::diag(&[1.0, -1.0]).unwrap();
        assert!(matches!(
            congruence_sandwich(&bad, &a),
            Err(Error::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn sandwich_preserves_inertia() {
        for seed in 0..20 {
            let a = random_hpd(4, 20.0, seed).unwrap();
            let x = HermitianMatrix::diag(&[-2.0, -0.5, 1.0, 3.0]).unwrap();
            let u = random_hpd(4, 3.0, seed + 100).unwrap();
            let x = x.congruence(&eig_hermitian(&u).unwrap().eigenvectors);
            let out = congruence_sandwich(&a, &x).unwrap();
            let signs: Vec<bool> = eig_hermitian(&out).unwrap().eigenvalues.iter().map(|&v| v > 0.0).collect();
            assert_eq!(signs, vec![false, false, true, true]);
        }
    }

    #[test]
    fn loewner_examples() {
        let i = HermitianMatrix::identity(2);
        let v = loewner_compare(&i, &i.scale(2.0), 0.0).unwrap();
        assert!((v.margin - 1.0).abs() < 1e-15 && v.holds);
        let a = HermitianMatrix::diag(&[1.0, 2.0]).unwrap();
        let b = HermitianMatrix::diag(&[2.0, 1.0]).unwrap();
        let v = loewner_compare(&a, &b, 1e-9).unwrap();
        assert!((v.margin + 1.0).abs() < 1e-15 && !v.holds);
        let v = loewner_compare(&a, &a, 0.0).unwrap();
        assert_eq!(v.margin, 0.0);
        assert!(v.holds);
        assert!(loewner_compare(&a, &HermitianMatrix::identity(3), 0.0).is_err());
    }

    #[test]
    fn frechet_of_inverse_on_example() {
        let y = HermitianMatrix::diag(&[1.0, 2.0]).unwrap();
        let x = HermitianMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let d = frechet_derivative(&TestFunction::Inv, &y, &x).unwrap();
        let expected = HermitianMatrix::from_rows(&[vec![-1.0, -0.5], vec![-0.5, -0.25]]).unwrap();
        assert_close(&d, &expected, 1e-14);
    }

    #[test]
    fn frechet_zero_direction_and_square() {
        let a = random_hpd(4, 10.0, 9).unwrap();
        let zero = HermitianMatrix::zeros(4);
        for f in TestFunction::palette() {
            let d = frechet_derivative(&f, &a, &zero).unwrap();
            assert_eq!(d.max_abs_entry(), 0.0);
        }
        let b = random_hpd(4, 10.0, 10).unwrap();
        let d = frechet_derivative(&TestFunction::Square, &a, &b).unwrap();
        let expected = HermitianMatrix::symmetrized(a.matmul(&b) + b.matmul(&a));
        assert!(d.max_abs_diff(&expected) <= 1e-10);
    }
}
