//! Scalar formulas: the mixing coefficient `r(ν, α)`, the ratio bounds
//! `m(s, t)`/`M(s, t)`, the bracket coefficients `α(s, λ)`/`μ(s, λ)`, the
//! representative functions of the weighted logarithmic means and the beta
//! function bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermat::TestFunction;
use crate::quad::{integrate_eta, EtaMeasure, QuadratureSpec};

/// Below this distance from `x = 1` the weighted logarithmic representative
/// function switches to its Taylor expansion in `log x`.
pub const PAL_SERIES_RADIUS: f64 = 1e-6;

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in (0, 1)"))
    }
}

fn closed_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in [0, 1]"))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be positive"))
    }
}

/// `r(ν, α) = ν + α - 2να`.
pub fn r_coef(nu: f64, alpha: f64) -> f64 {
    nu + alpha - 2.0 * nu * alpha
}

/// `(m, M)` with `m = min(t/s, (1-t)/(1-s))` and `M` the max.
pub fn ratio_bounds(s: f64, t: f64) -> (f64, f64) {
    let left = t / s;
    let right = (1.0 - t) / (1.0 - s);
    (left.min(right), left.max(right))
}

/// Bracket coefficients `α(s, λ)` and `μ(s, λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientPair {
    pub alpha_coef: f64,
    pub mu_coef: f64,
    pub s: f64,
    pub lambda: f64,
}

impl CoefficientPair {
    /// `(1-s)^{-1} ∇_λ s^{-1}`, which equals `alpha_coef + mu_coef`.
    pub fn sum(&self) -> f64 {
        (1.0 - self.lambda) / (1.0 - self.s) + self.lambda / self.s
    }
}

/// `α = ((1-λ)/(1-s))·(1 - s^{λ/(1-λ)})` and `μ = (1-s)^{-1}∇_λ s^{-1} - α`.
pub fn bracket_coefs(s: f64, lambda: f64) -> Result<CoefficientPair> {
    open_unit("s", s)?;
    open_unit("lambda", lambda)?;
    let alpha_coef = (1.0 - lambda) / (1.0 - s) * (1.0 - s.powf(lambda / (1.0 - lambda)));
    let harmonic_sum = (1.0 - lambda) / (1.0 - s) + lambda / s;
    Ok(CoefficientPair {
        alpha_coef,
        mu_coef: harmonic_sum - alpha_coef,
        s,
        lambda,
    })
}

/// `f_λ(x) = (∫ (1∇_t x)^{-1} dη_λ(t))^{-1}`, the representative function of the harmonic-type mean.
pub fn rep_function_bold(lambda: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    positive("x", x)?;
    let measure = EtaMeasure::new(lambda)?;
    let inv = integrate_eta(|t| Ok(1.0 / (1.0 - t + t * x)), measure, spec)?;
    Ok(1.0 / inv)
}

/// `g_λ(x) = ∫ x^t dη_λ(t)`, the representative function of the geometric-type mean.
pub fn rep_function_bb(lambda: f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    positive("x", x)?;
    let measure = EtaMeasure::new(lambda)?;
    let log_x = x.ln();
    integrate_eta(|t| Ok((t * log_x).exp()), measure, spec)
}

/// Representative function of the weighted logarithmic mean `L_λ`:
/// `(1/log x)·(((1-λ)/λ)(x^λ - 1) + (λ/(1-λ))·x^λ(x^{1-λ} - 1))`, equal to one at `x = 1`.
pub fn rep_function_pal(lambda: f64, x: f64) -> Result<f64> {
    open_unit("lambda", lambda)?;
    positive("x", x)?;
    let u = (x - 1.0).ln_1p();
    if (x - 1.0).abs() < PAL_SERIES_RADIUS {
        return Ok(1.0 + lambda * u + (lambda + 2.0 * lambda * lambda) * u * u / 6.0);
    }
    let left = (1.0 - lambda) / lambda * (lambda * u).exp_m1();
    let right = lambda / (1.0 - lambda) * (lambda * u).exp() * ((1.0 - lambda) * u).exp_m1();
    Ok((left + right) / u)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BetaOrientation {
    /// `lower ≤ value ≤ upper` (`y ≥ 2`).
    Standard,
    /// `lower ≥ value ≥ upper` (`1 ≤ y ≤ 2`).
    Reversed,
    /// `y = 2`: both orientations, i.e. equality.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaBounds {
    pub x: f64,
    pub y: f64,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub orientation: BetaOrientation,
}

impl BetaBounds {
    /// Signed margins of the two comparisons in the applicable orientation.
    pub fn margins(&self) -> [f64; 2] {
        match self.orientation {
            BetaOrientation::Standard => [self.value - self.lower, self.upper - self.value],
            BetaOrientation::Reversed => [self.lower - self.value, self.value - self.upper],
            BetaOrientation::Both => {
                let standard = [self.value - self.lower, self.upper - self.value];
                let reversed = [self.lower - self.value, self.value - self.upper];
                [standard[0].min(reversed[0]), standard[1].min(reversed[1])]
            }
        }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.margins().iter().all(|&m| m >= -tol)
    }
}

/// `B(x, y) = exp(lnΓ(x) + lnΓ(y) - lnΓ(x + y))`.
pub fn beta(x: f64, y: f64) -> f64 {
    (libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y)).exp()
}

/// Bounds `1/(x(1+x)^{y-1})` and `1/(x(1+x))` around `B(x, y)`.
pub fn beta_bounds_check(x: f64, y: f64) -> Result<BetaBounds> {
    positive("x", x)?;
    if !(y >= 1.0) || !y.is_finite() {
        return Err(Error::param("y", y, "must be at least 1"));
    }
    let orientation = if y == 2.0 {
        BetaOrientation::Both
    } else if y > 2.0 {
        BetaOrientation::Standard
    } else {
        BetaOrientation::Reversed
    };
    Ok(BetaBounds {
        x,
        y,
        lower: 1.0 / (x * (1.0 + x).powf(y - 1.0)),
        value: beta(x, y),
        upper: 1.0 / (x * (1.0 + x)),
        orientation,
    })
}

/// `(h(a∇_λb), ∫ h(a∇_tb) dη_λ(t), h(a)∇_λh(b))` for an arbitrary scalar map.
pub fn scalar_hh_chain_with(
    h: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<[f64; 3]> {
    let measure = EtaMeasure::new(lambda)?;
    if a == b {
        let v = h(a);
        return Ok([v, v, v]);
    }
    let point = h((1.0 - lambda) * a + lambda * b);
    let middle = integrate_eta(|t| Ok(h((1.0 - t) * a + t * b)), measure, spec)?;
    let chord = (1.0 - lambda) * h(a) + lambda * h(b);
    Ok([point, middle, chord])
}

/// Scalar weighted Hermite-Hadamard chain; ascending for convex `f`.
pub fn scalar_hh_chain(
    f: &TestFunction,
    a: f64,
    b: f64,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<[f64; 3]> {
    for (name, v) in [("a", a), ("b", b)] {
        if !f.contains(v) {
            return Err(Error::SpectrumDomain {
                function: f.id(),
                eigenvalue: v,
                lo: f.domain().0,
                hi: f.domain().1,
            });
        }
        let _ = name;
    }
    closed_unit("lambda", lambda)?;
    scalar_hh_chain_with(|x| f.value(x), a, b, lambda, spec)
}
