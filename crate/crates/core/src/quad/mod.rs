//! Probability measures on `[0, 1]` and the quadrature engine that integrates
//! scalar-, vector- and matrix-valued maps against them.

mod chebyshev;
mod measure;
mod rules;
mod value;

pub use chebyshev::{chebyshev_basis, ChebyshevPath, DEFAULT_PATH_TOL, MAX_PATH_DEGREE};
pub use measure::{
    eta_moment, eta_weight, integrate_eta, integrate_eta_between, integrate_eta_split,
    integrate_sigma, integrate_uniform, EtaMeasure, QuadratureSpec, SigmaMeasure,
};
pub use rules::{jacobi_rule, legendre_rule, GaussRule};
pub use value::QuadValue;
