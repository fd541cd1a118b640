use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by the constructors.
pub const MAX_DIM: usize = 64;

/// Relative tolerance for the Hermitian symmetry check on construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A finite-dimensional self-adjoint matrix over the complex numbers.
///
/// Every constructor symmetrizes its input, so `entries[i][j]` is exactly the
/// conjugate of `entries[j][i]` and the diagonal is exactly real.
#[derive(Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates squareness, dimension and Hermitian symmetry, then symmetrizes.
    pub fn from_complex(data: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols {
            return Err(Error::InvalidMatrix(format!("not square: {rows}x{cols}")));
        }
        if rows == 0 || rows > MAX_DIM {
            return Err(Error::InvalidMatrix(format!(
                "dimension {rows} outside [1, {MAX_DIM}]"
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let scale = 1.0 + data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for i in 0..rows {
            for j in 0..=i {
                let gap = (data[(i, j)] - data[(j, i)].conj()).norm();
                if gap > HERMITIAN_TOL * scale {
                    return Err(Error::InvalidMatrix(format!(
                        "entry ({i},{j}) differs from the conjugate of ({j},{i}) by {gap:e}"
                    )));
                }
            }
        }
        Ok(Self::symmetrized(data))
    }

    pub fn from_real(data: DMatrix<f64>) -> Result<Self> {
        Self::from_complex(data.map(|x| Complex64::new(x, 0.0)))
    }

    /// Builds from row-major real and (optional) imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self> {
        let n = re.len();
        if re.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMatrix("real part is not square".into()));
        }
        if let Some(im) = im {
            if im.len() != n || im.iter().any(|row| row.len() != n) {
                return Err(Error::InvalidMatrix(
                    "imaginary part does not match the real part".into(),
                ));
            }
        }
        let data = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(re[i][j], im.map_or(0.0, |im| im[i][j]))
        });
        Self::from_complex(data)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_parts(rows, None)
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_real(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                0.0
            }
        }))
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    /// The 1x1 matrix `[x]`.
    pub fn scalar(x: f64) -> Self {
        Self {
            data: DMatrix::from_element(1, 1, Complex64::new(x, 0.0)),
        }
    }

    /// Hermitian part `(M + M*)/2` of an arbitrary square matrix, without checks.
    pub(crate) fn symmetrized(data: DMatrix<Complex64>) -> Self {
        let n = data.nrows();
        let mut out = data;
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
            for j in 0..i {
                let z = (out[(i, j)] + out[(j, i)].conj()) * 0.5;
                out[(i, j)] = z;
                out[(j, i)] = z.conj();
            }
        }
        Self { data: out }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.data.map(|z| z.im)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.data[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(factor, 0.0),
        }
    }

    /// Weighted arithmetic combination `(1-t)·self + t·other`.
    pub fn nabla(&self, other: &Self, t: f64) -> Self {
        Self {
            data: &self.data * Complex64::new(1.0 - t, 0.0) + &other.data * Complex64::new(t, 0.0),
        }
    }

    /// `self + factor·other`, in place.
    pub fn axpy(&mut self, factor: f64, other: &Self) {
        let f = Complex64::new(factor, 0.0);
        self.data.zip_apply(&other.data, |a, b| *a += f * b);
    }

    /// Plain matrix product; generally not Hermitian.
    pub fn matmul(&self, other: &Self) -> DMatrix<Complex64> {
        &self.data * &other.data
    }

    /// `X·self·X*`, symmetrized.
    pub fn congruence(&self, x: &DMatrix<Complex64>) -> Self {
        Self::symmetrized(x * &self.data * x.adjoint())
    }

    /// `C·self·C` for Hermitian `C`.
    pub fn sandwich(&self, c: &Self) -> Self {
        Self::symmetrized(&c.data * &self.data * &c.data)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm of the commutator `self·other - other·self`.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        let ab = &self.data * &other.data;
        let ba = &other.data * &self.data;
        (ab - ba).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianMatrix{}", self)
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        write!(f, "[")?;
        for i in 0..n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                let z = self.data[(i, j)];
                if z.im == 0.0 {
                    write!(f, "{:.6}", z.re)?;
                } else {
                    write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
                }
            }
        }
        write!(f, "]")
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix {
            data: &self.data - &rhs.data,
        }
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix {
            data: -&self.data,
        }
    }
}

impl Mul<&HermitianMatrix> for f64 {
    type Output = HermitianMatrix;
    fn mul(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        rhs.scale(self)
    }
}
