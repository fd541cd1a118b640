//! Dense Hermitian matrices: spectral calculus, Loewner comparison, Fréchet
//! derivatives and seeded random positive-definite generation.

mod function;
mod io;
mod matrix;
mod random;
mod spectral;

pub use function::{Convexity, TestFunction};
pub use io::MatrixFile;
pub use matrix::{HermitianMatrix, HERMITIAN_TOL, MAX_DIM};
pub use random::{random_hpd, random_hpd_in, random_spd, Field};
pub use spectral::{
    apply_map, apply_spectral, congruence_sandwich, eig_hermitian, frechet_derivative,
    frechet_in_basis, inverse, loewner_compare, min_eigenvalue, require_positive_definite,
    LoewnerVerdict, SpectralDecomposition, DIVIDED_DIFFERENCE_GAP, DOMAIN_MARGIN, PD_GATE,
};
