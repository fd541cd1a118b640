use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{HermitianMatrix, MAX_DIM};
use crate::error::{Error, Result};

/// Which scalar field the random unitary factor is drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// Seeded random Hermitian positive-definite matrix with condition number at most `cond_cap`.
///
/// The spectrum is log-uniform inside `[s, s·cond_cap]` for a random scale `s ∈ [0.5, 2]`
/// and the eigenbasis comes from a QR factorisation of a random complex matrix.
pub fn random_hpd(dim: usize, cond_cap: f64, seed: u64) -> Result<HermitianMatrix> {
    random_hpd_in(Field::Complex, dim, cond_cap, seed)
}

/// Real symmetric variant of [`random_hpd`].
pub fn random_spd(dim: usize, cond_cap: f64, seed: u64) -> Result<HermitianMatrix> {
    random_hpd_in(Field::Real, dim, cond_cap, seed)
}

pub fn random_hpd_in(field: Field, dim: usize, cond_cap: f64, seed: u64) -> Result<HermitianMatrix> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::param("dim", dim as f64, format!("must lie in [1, {MAX_DIM}]")));
    }
    if !(cond_cap >= 1.0) || !cond_cap.is_finite() {
        return Err(Error::param("cond_cap", cond_cap, "must be finite and at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = rng.random_range(0.5..2.0);
    if cond_cap == 1.0 || dim == 1 {
        return Ok(HermitianMatrix::identity(dim).scale(scale));
    }
    // Shrink the exponent range slightly so rounding cannot push the ratio past the cap.
    let log_cap = cond_cap.ln() * (1.0 - 1e-9);
    let eigenvalues: Vec<f64> = (0..dim)
        .map(|_| scale * (log_cap * rng.random_range(0.0..1.0)).exp())
        .collect();
    let raw = DMatrix::from_fn(dim, dim, |_, _| {
        let re = rng.random_range(-1.0..1.0);
        let im = match field {
            Field::Real => 0.0,
            Field::Complex => rng.random_range(-1.0..1.0),
        };
        Complex64::new(re, im)
    });
    let q = raw.qr().q();
    let d = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(eigenvalues[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let m = HermitianMatrix::symmetrized(&q * d * q.adjoint());
    Ok(match field {
        Field::Real => HermitianMatrix::symmetrized(m.into_matrix().map(|z| Complex64::new(z.re, 0.0))),
        Field::Complex => m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::spectral::eig_hermitian;

    #[test]
    fn one_by_one_is_positive() {
        for seed in 0..5 {
            let m = random_hpd(1, 10.0, seed).unwrap();
            assert!(m.entry(0, 0).re > 0.0);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let a = random_hpd(4, 30.0, 17).unwrap();
        let b = random_hpd(4, 30.0, 17).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_hpd(4, 30.0, 18).unwrap());
    }

    #[test]
    fn condition_cap_respected() {
        for seed in 0..20 {
            for field in [Field::Real, Field::Complex] {
                let m = random_hpd_in(field, 6, 100.0, seed).unwrap();
                let eig = eig_hermitian(&m).unwrap();
                assert!(eig.min() > 0.0);
                assert!(eig.max() / eig.min() <= 100.0, "ratio {}", eig.max() / eig.min());
            }
        }
        assert!(random_spd(3, 5.0, 0).unwrap().is_real());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(random_hpd(0, 10.0, 0).is_err());
        assert!(random_hpd(3, 0.5, 0).is_err());
        assert!(random_hpd(3, f64::NAN, 0).is_err());
    }
}
