use serde::Serialize;

use super::rules::{jacobi_rule, legendre_rule, GaussRule};
use super::value::QuadValue;
use crate::error::{Error, Result};

/// The probability measure `dη_λ(t) = (λ/(1-λ))·t^{(2λ-1)/(1-λ)} dt` on `[0, 1]`.
///
/// Its mean is `λ`. The endpoints `λ = 0` and `λ = 1` are the Dirac masses at
/// `t = 0` and `t = 1`, the limits of the family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaMeasure {
    lambda: f64,
}

impl EtaMeasure {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::param("lambda", lambda, "must lie in [0, 1]"));
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_point_mass(&self) -> bool {
        self.lambda == 0.0 || self.lambda == 1.0
    }

    /// Normalising constant `λ/(1-λ)`, equal to `p + 1`.
    pub fn constant(&self) -> f64 {
        self.lambda / (1.0 - self.lambda)
    }

    /// Exponent `p = (2λ-1)/(1-λ)` of the density; `p > -1` on the open interval.
    pub fn exponent(&self) -> f64 {
        (2.0 * self.lambda - 1.0) / (1.0 - self.lambda)
    }

    /// `∫ t^k dη_λ(t) = λ/(λ + k(1-λ))`.
    pub fn moment(&self, k: u32) -> f64 {
        eta_moment(*self, k)
    }

    /// Measure mirrored by `t ↦ 1 - t`, i.e. `η_{1-λ}` composed with the reflection.
    pub fn complement(&self) -> Self {
        Self {
            lambda: 1.0 - self.lambda,
        }
    }
}

/// `dσ_{λ,α} = (1-α)·dη_λ + α·dη_{1-λ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SigmaMeasure {
    lambda: f64,
    alpha: f64,
}

impl SigmaMeasure {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::param("lambda", lambda, "must lie in (0, 1)"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::param("alpha", alpha, "must lie in [0, 1]"));
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The two mixture components `(η_λ, η_{1-λ})`.
    pub fn components(&self) -> (EtaMeasure, EtaMeasure) {
        (
            EtaMeasure {
                lambda: self.lambda,
            },
            EtaMeasure {
                lambda: 1.0 - self.lambda,
            },
        )
    }
}

/// Node-count and tolerance policy for the adaptive rules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub base_nodes: usize,
    /// Successive estimates must agree to `abs_tol·(1 + |estimate|)`.
    pub abs_tol: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            base_nodes: 64,
            abs_tol: 1e-10,
            max_doublings: 6,
        }
    }
}

impl QuadratureSpec {
    /// Policy for the outer level of a double integral.
    pub fn outer() -> Self {
        Self {
            abs_tol: 1e-8,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.base_nodes == 0 {
            return Err(Error::param("base_nodes", 0.0, "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::param("abs_tol", self.abs_tol, "must be positive"));
        }
        if self.max_doublings == 0 {
            return Err(Error::param("max_doublings", 0.0, "must be positive"));
        }
        Ok(())
    }
}

/// Density of `η_λ` at `t ∈ (0, 1)`; point masses have none.
pub fn eta_weight(measure: EtaMeasure, t: f64) -> Result<f64> {
    if measure.is_point_mass() {
        return Err(Error::PointMass {
            lambda: measure.lambda,
        });
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::param("t", t, "must lie in (0, 1)"));
    }
    Ok(measure.constant() * t.powf(measure.exponent()))
}

pub fn eta_moment(measure: EtaMeasure, k: u32) -> f64 {
    let lambda = measure.lambda;
    if k == 0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    lambda / (lambda + k as f64 * (1.0 - lambda))
}

fn apply_rule<V: QuadValue>(
    rule: &GaussRule,
    map: impl Fn(f64) -> f64,
    scale: f64,
    g: &impl Fn(f64) -> Result<V>,
) -> Result<V> {
    let mut iter = rule.nodes.iter().zip(&rule.weights);
    let (&x0, &w0) = iter.next().expect("rules have at least one node");
    let first = g(map(x0))?;
    let mut acc = first.zero_like();
    acc.add_scaled(w0 * scale, &first);
    for (&x, &w) in iter {
        acc.add_scaled(w * scale, &g(map(x))?);
    }
    Ok(acc)
}

/// Doubles the node count until two successive estimates agree.
fn adaptive<V: QuadValue>(spec: &QuadratureSpec, estimate: impl Fn(usize) -> Result<V>) -> Result<V> {
    spec.validate()?;
    let mut n = spec.base_nodes;
    let mut previous = estimate(n)?;
    for _ in 0..spec.max_doublings {
        n *= 2;
        let current = estimate(n)?;
        let difference = current.distance(&previous);
        let tolerance = spec.abs_tol * (1.0 + current.magnitude());
        if difference <= tolerance {
            return Ok(current);
        }
        if n == spec.base_nodes << spec.max_doublings {
            return Err(Error::Quadrature {
                nodes: n,
                previous: previous.magnitude(),
                last: current.magnitude(),
                difference,
                tolerance,
            });
        }
        previous = current;
    }
    unreachable!("loop returns on its final doubling")
}

/// `∫ g dη_λ` over `[0, 1]`.
///
/// The open-interval case uses Gauss-Jacobi rules for the weight `t^p`, which
/// absorb the endpoint singularity of the density for `λ < 1/2`; point masses
/// evaluate `g` at the atom.
pub fn integrate_eta<V: QuadValue>(
    g: impl Fn(f64) -> Result<V>,
    measure: EtaMeasure,
    spec: &QuadratureSpec,
) -> Result<V> {
    match measure.lambda {
        0.0 => g(0.0),
        1.0 => g(1.0),
        _ => {
            let p = measure.exponent();
            adaptive(spec, |n| apply_rule(&*jacobi_rule(p, n)?, |x| x, 1.0, &g))
        }
    }
}

/// `∫ g dσ_{λ,α} = (1-α)·∫ g dη_λ + α·∫ g dη_{1-λ}`.
pub fn integrate_sigma<V: QuadValue>(
    g: impl Fn(f64) -> Result<V>,
    measure: SigmaMeasure,
    spec: &QuadratureSpec,
) -> Result<V> {
    let (left, right) = measure.components();
    let alpha = measure.alpha;
    if alpha == 0.0 {
        return integrate_eta(&g, left, spec);
    }
    if alpha == 1.0 {
        return integrate_eta(&g, right, spec);
    }
    let a = integrate_eta(&g, left, spec)?;
    let b = integrate_eta(&g, right, spec)?;
    let mut out = a.zero_like();
    out.add_scaled(1.0 - alpha, &a);
    out.add_scaled(alpha, &b);
    Ok(out)
}

/// `∫_0^1 g(t) dt`.
pub fn integrate_uniform<V: QuadValue>(g: impl Fn(f64) -> Result<V>, spec: &QuadratureSpec) -> Result<V> {
    adaptive(spec, |n| apply_rule(&*legendre_rule(n)?, |x| x, 1.0, &g))
}

/// `∫_a^b g dη_λ` for `0 ≤ a < b ≤ 1`.
///
/// A piece starting at zero keeps the Jacobi weight (rescaled to `[0, b]`);
/// pieces away from zero integrate the smooth density with Gauss-Legendre.
pub fn integrate_eta_between<V: QuadValue>(
    g: impl Fn(f64) -> Result<V>,
    measure: EtaMeasure,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<V> {
    if !(0.0 <= a && a < b && b <= 1.0) {
        return Err(Error::param("interval", a, format!("[{a}, {b}] is not inside [0, 1]")));
    }
    if measure.is_point_mass() {
        let atom = measure.lambda;
        let probe = g(atom)?;
        let inside = if atom == 0.0 { a == 0.0 } else { b == 1.0 };
        return Ok(if inside { probe } else { probe.zero_like() });
    }
    let p = measure.exponent();
    if a == 0.0 {
        let mass = b.powf(p + 1.0);
        adaptive(spec, |n| apply_rule(&*jacobi_rule(p, n)?, |x| b * x, mass, &g))
    } else {
        let c = measure.constant();
        let width = b - a;
        let weighted = |t: f64| -> Result<V> {
            let v = g(t)?;
            let mut out = v.zero_like();
            out.add_scaled(c * t.powf(p), &v);
            Ok(out)
        };
        adaptive(spec, |n| apply_rule(&*legendre_rule(n)?, |x| a + width * x, width, &weighted))
    }
}

/// `∫ g dη_λ` split at interior breakpoints, for integrands with kinks.
pub fn integrate_eta_split<V: QuadValue>(
    g: impl Fn(f64) -> Result<V>,
    measure: EtaMeasure,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<V> {
    let mut edges = vec![0.0];
    edges.extend(breakpoints.iter().copied().filter(|&x| x > 0.0 && x < 1.0));
    edges.push(1.0);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut total: Option<V> = None;
    for w in edges.windows(2) {
        let piece = integrate_eta_between(&g, measure, w[0], w[1], spec)?;
        match total.as_mut() {
            Some(t) => t.add_scaled(1.0, &piece),
            None => total = Some(piece),
        }
    }
    Ok(total.expect("at least one piece"))
}
