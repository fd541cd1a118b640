use crate::hermat::HermitianMatrix;

/// Values a quadrature rule can accumulate: reals, real vectors and Hermitian matrices.
pub trait QuadValue: Clone {
    fn zero_like(&self) -> Self;
    fn add_scaled(&mut self, weight: f64, other: &Self);
    /// Distance used by the convergence test.
    fn distance(&self, other: &Self) -> f64;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero_like(&self) -> Self {
        0.0
    }

    fn add_scaled(&mut self, weight: f64, other: &Self) {
        *self += weight * other;
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).abs()
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Vec<f64> {
    fn zero_like(&self) -> Self {
        vec![0.0; self.len()]
    }

    fn add_scaled(&mut self, weight: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += weight * b;
        }
    }

    fn distance(&self, other: &Self) -> f64 {
        self.iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    fn magnitude(&self) -> f64 {
        self.iter().map(|a| a.abs()).fold(0.0, f64::max)
    }
}

/// Matrices use the Frobenius norm, an upper bound for the operator norm.
impl QuadValue for HermitianMatrix {
    fn zero_like(&self) -> Self {
        HermitianMatrix::zeros(self.dim())
    }

    fn add_scaled(&mut self, weight: f64, other: &Self) {
        self.axpy(weight, other);
    }

    fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius()
    }

    fn magnitude(&self) -> f64 {
        self.frobenius()
    }
}
