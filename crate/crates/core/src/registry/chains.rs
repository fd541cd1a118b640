//! Term construction for each registry chain.
//!
//! Chains over an arbitrary test function integrate the fitted path
//! `τ ↦ f(A∇_τB)`. Chains over operator means work on the spectrum of
//! `C = A^{-1/2}BA^{-1/2}`, where every term is a scalar function of `C`
//! lifted by congruence with `A^{±1/2}`.

use crate::error::Result;
use crate::hermat::{apply_spectral, inverse, HermitianMatrix, TestFunction};
use crate::means::{harm, sharp, wlog_geom, wlog_harm, PairReduction};
use crate::quad::{integrate_eta, integrate_sigma, EtaMeasure, QuadratureSpec, SigmaMeasure};
use crate::scalar::{beta_bounds_check, bracket_coefs, r_coef, ratio_bounds, BetaOrientation};

use super::path::{Functional, SegmentPath};
use super::{ChainTerms, Orientation};

fn f_at(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    apply_spectral(f, &a.nabla(b, t))
}

/// `f(A)∇_uf(B) - f(A∇_uB)`.
fn convexity_defect(
    f: &TestFunction,
    fa: &HermitianMatrix,
    fb: &HermitianMatrix,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    u: f64,
) -> Result<HermitianMatrix> {
    Ok(&fa.nabla(fb, u) - &f_at(f, a, b, u)?)
}

fn endpoints(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<(HermitianMatrix, HermitianMatrix)> {
    Ok((apply_spectral(f, a)?, apply_spectral(f, b)?))
}

pub(super) fn whhoi(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let path = SegmentPath::function(f, a, b)?;
    let (fa, fb) = endpoints(f, a, b)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("f(A∇_λB)", f_at(f, a, b, lambda)?),
        ("∫f(A∇_tB)dη_λ", path.integrate(Functional::Eta(lambda))?),
        ("f(A)∇_λf(B)", fa.nabla(&fb, lambda)),
    ]);
    Ok(c)
}

pub(super) fn rhhoi(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<ChainTerms> {
    let path = SegmentPath::function(f, a, b)?;
    let (fa, fb) = endpoints(f, a, b)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("f(A∇B)", f_at(f, a, b, 0.5)?),
        ("∫f(A∇_tB)dt", path.integrate(Functional::Uniform)?),
        ("∫∫f(A∇_tB)dη_λdλ", path.integrate(Functional::EtaAveraged)?),
        ("f(A)∇f(B)", fa.nabla(&fb, 0.5)),
    ]);
    Ok(c)
}

pub(super) fn whhoi2(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    alpha: f64,
) -> Result<ChainTerms> {
    let path = SegmentPath::function(f, a, b)?;
    let (fa, fb) = endpoints(f, a, b)?;
    let r = r_coef(lambda, alpha);
    let mixture = f_at(f, a, b, lambda)?.nabla(&f_at(f, a, b, 1.0 - lambda)?, alpha);
    let mut c = ChainTerms::default();
    c.run(vec![
        ("f(A∇_rB)", f_at(f, a, b, r)?),
        ("∫f(A∇_{r(λ,t)}B)dη_α", path.integrate(Functional::MixedWeight(lambda, alpha))?),
        ("f(A∇_λB)∇_αf(A∇_{1-λ}B)", mixture),
        ("M_{λ,α}(f;A,B)", path.integrate(Functional::Sigma(lambda, alpha))?),
        ("f(A)∇_rf(B)", fa.nabla(&fb, r)),
    ]);
    Ok(c)
}

pub(super) fn lwhhoi(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let path = SegmentPath::function(f, a, b)?;
    let point = f_at(f, a, b, lambda)?;
    let eta = path.integrate(Functional::Eta(lambda))?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("f(A∇_λB)", point.clone()),
        ("∫f((A∇_λB)∇(A∇_xB))dη_λ", path.integrate(Functional::EtaMidpoint(lambda))?),
        ("∫M_{λ,1/2}(f;A∇_λB,A∇_xB)dη_λ", path.integrate(Functional::EtaSigmaNested(lambda))?),
        ("f(A∇_λB)∇M_{λ,0}(f;A,B)", point.nabla(&eta, 0.5)),
        ("∫f(A∇_xB)dη_λ", eta),
    ]);
    Ok(c)
}

pub(super) fn rocf(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, s: f64, t: f64) -> Result<ChainTerms> {
    let (fa, fb) = endpoints(f, a, b)?;
    let ds = convexity_defect(f, &fa, &fb, a, b, s)?;
    let (m, big) = ratio_bounds(s, t);
    let mut c = ChainTerms::default();
    c.run(vec![
        ("m(s,t)·D_s", ds.scale(m)),
        ("D_t", convexity_defect(f, &fa, &fb, a, b, t)?),
        ("M(s,t)·D_s", ds.scale(big)),
    ]);
    Ok(c)
}

fn right_defect(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    fa: &HermitianMatrix,
    fb: &HermitianMatrix,
    lambda: f64,
) -> Result<HermitianMatrix> {
    let path = SegmentPath::function(f, a, b)?;
    Ok(&fa.nabla(fb, lambda) - &path.integrate(Functional::Eta(lambda))?)
}

pub(super) fn rwhhoir(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    s: f64,
    lambda: f64,
) -> Result<ChainTerms> {
    let (fa, fb) = endpoints(f, a, b)?;
    let ds = convexity_defect(f, &fa, &fb, a, b, s)?;
    let k = bracket_coefs(s, lambda)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("α(s,λ)·D_s", ds.scale(k.alpha_coef)),
        ("f(A)∇_λf(B) − ∫f(A∇_tB)dη_λ", right_defect(f, a, b, &fa, &fb, lambda)?),
        ("μ(s,λ)·D_s", ds.scale(k.mu_coef)),
    ]);
    Ok(c)
}

pub(super) fn cor_a(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let (fa, fb) = endpoints(f, a, b)?;
    let d = convexity_defect(f, &fa, &fb, a, b, lambda)?;
    let q = lambda.powf(lambda / (1.0 - lambda));
    let mut c = ChainTerms::default();
    c.run(vec![
        ("(1−λ^{λ/(1−λ)})·D_λ", d.scale(1.0 - q)),
        ("f(A)∇_λf(B) − ∫f(A∇_tB)dη_λ", right_defect(f, a, b, &fa, &fb, lambda)?),
        ("(1+λ^{λ/(1−λ)})·D_λ", d.scale(1.0 + q)),
    ]);
    Ok(c)
}

pub(super) fn rwhhoil(f: &TestFunction, a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let path = SegmentPath::function(f, a, b)?;
    let slope = SegmentPath::derivative(f, a, b)?;
    let defect = &path.integrate(Functional::Eta(lambda))? - &f_at(f, a, b, lambda)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("0", HermitianMatrix::zeros(a.dim())),
        ("∫f(A∇_tB)dη_λ − f(A∇_λB)", defect),
        ("∫(t−λ)Df(A∇_tB)(B−A)dη_λ", slope.integrate(Functional::EtaLever(lambda))?),
    ]);
    Ok(c)
}

pub(super) fn rwhhir_scalar(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let measure = EtaMeasure::new(lambda)?;
    let (da, db) = (a.diagonal(), b.diagonal());
    let mut defects = Vec::with_capacity(da.len());
    let mut bounds = Vec::with_capacity(da.len());
    for (&x, &y) in da.iter().zip(&db) {
        for v in [x, y] {
            if !f.contains(v) {
                return Err(crate::Error::SpectrumDomain {
                    function: f.id(),
                    eigenvalue: v,
                    lo: f.domain().0,
                    hi: f.domain().1,
                });
            }
        }
        let seg = |t: f64| (1.0 - t) * x + t * y;
        let mean = integrate_eta(|t| Ok(f.value(seg(t))), measure, &spec)?;
        defects.push(mean - f.value(seg(lambda)));
        let lever = integrate_eta(|t| Ok((t - lambda) * f.derivative(seg(t))), measure, &spec)?;
        bounds.push((y - x) * lever);
    }
    let mut c = ChainTerms::default();
    c.run(vec![
        ("0", HermitianMatrix::zeros(a.dim())),
        ("∫f(a∇_tb)dη_λ − f(a∇_λb)", HermitianMatrix::diag(&defects)?),
        ("(b−a)∫(t−λ)f'(a∇_tb)dη_λ", HermitianMatrix::diag(&bounds)?),
    ]);
    Ok(c)
}

pub(super) fn nwomi1(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let mut c = ChainTerms::default();
    c.run(vec![
        ("A!_λB", harm(a, b, lambda)?),
        ("L_λ(A,B)", wlog_harm(a, b, lambda, &spec)?),
        ("A∇_λB", a.nabla(b, lambda)),
    ]);
    Ok(c)
}

pub(super) fn nwomi2(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let mut c = ChainTerms::default();
    c.run(vec![
        ("A♯_λB", sharp(a, b, lambda)?),
        ("𝕃_λ(A,B)", wlog_geom(a, b, lambda, &spec)?),
        ("A∇_λB", a.nabla(b, lambda)),
    ]);
    Ok(c)
}

/// `(A!_uB)^{-1} = A^{-1}∇_uB^{-1}`.
fn harm_inverse(ai: &HermitianMatrix, bi: &HermitianMatrix, u: f64) -> HermitianMatrix {
    ai.nabla(bi, u)
}

pub(super) fn enwomi1(a: &HermitianMatrix, b: &HermitianMatrix, s: f64, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let (ai, bi) = (inverse(a)?, inverse(b)?);
    let gap_s = &harm_inverse(&ai, &bi, s) - &inverse(&a.nabla(b, s))?;
    let gap = &harm_inverse(&ai, &bi, lambda) - &inverse(&wlog_harm(a, b, lambda, &spec)?)?;
    let k = bracket_coefs(s, lambda)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("α(s,λ)((A!_sB)^{-1} − (A∇_sB)^{-1})", gap_s.scale(k.alpha_coef)),
        ("(A!_λB)^{-1} − L_λ^{-1}", gap),
        ("μ(s,λ)((A!_sB)^{-1} − (A∇_sB)^{-1})", gap_s.scale(k.mu_coef)),
    ]);
    Ok(c)
}

pub(super) fn enwomi2(a: &HermitianMatrix, b: &HermitianMatrix, s: f64, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let gap_s = &a.nabla(b, s) - &sharp(a, b, s)?;
    let gap = &a.nabla(b, lambda) - &wlog_geom(a, b, lambda, &spec)?;
    let k = bracket_coefs(s, lambda)?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("α(s,λ)(A∇_sB − A♯_sB)", gap_s.scale(k.alpha_coef)),
        ("A∇_λB − 𝕃_λ", gap),
        ("μ(s,λ)(A∇_sB − A♯_sB)", gap_s.scale(k.mu_coef)),
    ]);
    Ok(c)
}

pub(super) fn rnwomi(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let k = bracket_coefs(lambda, lambda)?;
    let (al, mu) = (k.alpha_coef, k.mu_coef);
    let h = harm_inverse(&inverse(a)?, &inverse(b)?, lambda);
    let arith = a.nabla(b, lambda);
    let n = inverse(&arith)?;
    let geo = sharp(a, b, lambda)?;
    let bold = wlog_harm(a, b, lambda, &spec)?;
    let blackboard = wlog_geom(a, b, lambda, &spec)?;
    let upper_geo = arith.nabla(&geo, al);
    let mut c = ChainTerms::default();
    c.run(vec![
        ("(A!_λB)^{-1}∇_μ(A∇_λB)^{-1}", h.nabla(&n, mu)),
        ("L_λ^{-1}", inverse(&bold)?),
        ("(A!_λB)^{-1}∇_α(A∇_λB)^{-1}", h.nabla(&n, al)),
    ]);
    c.run(vec![
        ("(A∇_λB)∇_μ(A♯_λB)", arith.nabla(&geo, mu)),
        ("𝕃_λ", blackboard.clone()),
        ("(A∇_λB)∇_α(A♯_λB)", upper_geo.clone()),
    ]);
    c.run(vec![
        ("A!_λB", harm(a, b, lambda)?),
        ("(A!_λB)!_α(A∇_λB)", inverse(&h.nabla(&n, al))?),
        ("L_λ", bold),
    ]);
    c.run(vec![
        ("𝕃_λ", blackboard),
        ("(A∇_λB)∇_α(A♯_λB)", upper_geo),
        ("A∇_λB", arith),
    ]);
    Ok(c)
}

/// `1∇_τc`.
fn seg(c: f64, tau: f64) -> f64 {
    1.0 - tau + tau * c
}

fn spectral_eta(
    pair: &PairReduction,
    lambda: f64,
    spec: &QuadratureSpec,
    h: impl Fn(f64, f64) -> f64,
) -> Result<Vec<f64>> {
    let measure = EtaMeasure::new(lambda)?;
    pair.integrate_spectrum(h, |g| integrate_eta(g, measure, spec))
}

pub(super) fn rnwomi3(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let inner = QuadratureSpec::default();
    let outer = QuadratureSpec::outer();
    let pair = PairReduction::new(a, b)?;
    let spectrum = pair.spectrum().to_vec();
    let eta = EtaMeasure::new(lambda)?;
    let sigma = SigmaMeasure::new(lambda, 0.5)?;
    let inv_mean = spectral_eta(&pair, lambda, &inner, |t, c| 1.0 / seg(c, t))?;
    let midpoint = spectral_eta(&pair, lambda, &inner, |x, c| 1.0 / seg(c, 0.5 * (lambda + x)))?;
    let nested = integrate_eta(
        |x| {
            integrate_sigma(
                |t| Ok(spectrum.iter().map(|&c| 1.0 / seg(c, (1.0 - t) * lambda + t * x)).collect::<Vec<f64>>()),
                sigma,
                &inner,
            )
        },
        eta,
        &outer,
    )?;
    let recip = |v: &[f64]| v.iter().map(|x| 1.0 / x).collect::<Vec<f64>>();
    let harmonic_with_point: Vec<f64> = spectrum
        .iter()
        .zip(&inv_mean)
        .map(|(&c, &m)| 2.0 / (1.0 / seg(c, lambda) + m))
        .collect();
    let mut c = ChainTerms::default();
    c.run(vec![
        ("L_λ", pair.lift(&recip(&inv_mean))),
        ("(A∇_λB)!L_λ", pair.lift(&harmonic_with_point)),
        ("[∫M_{λ,1/2}(A∇_λB,A∇_xB)dη_λ]^{-1}", pair.lift(&recip(&nested))),
        ("[∫(A∇_{(λ+x)/2}B)^{-1}dη_λ]^{-1}", pair.lift(&recip(&midpoint))),
        ("A∇_λB", a.nabla(b, lambda)),
    ]);
    Ok(c)
}

pub(super) fn thm311(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<ChainTerms> {
    let spec = QuadratureSpec::default();
    let pair = PairReduction::new(a, b)?;
    let gap = spectral_eta(&pair, lambda, &spec, |t, c| 1.0 / seg(c, t) - 1.0 / seg(c, lambda))?;
    let bound = spectral_eta(&pair, lambda, &spec, |t, c| (lambda - t) * (c - 1.0) / (seg(c, t) * seg(c, t)))?;
    let mut c = ChainTerms::default();
    c.run(vec![
        ("0", HermitianMatrix::zeros(a.dim())),
        ("L_λ^{-1} − (A∇_λB)^{-1}", pair.lift_inverse(&gap)),
        ("∫(λ−t)(A∇_tB)^{-1}(B−A)(A∇_tB)^{-1}dη_λ", pair.lift_inverse(&bound)),
    ]);
    Ok(c)
}

/// Mixed-mean chains, all lifted by `A^{1/2}·(·)·A^{1/2}`.
///
/// With `P_u = A♯_r(A∇_uB) − A∇_u(A♯_rB) ≥ 0` the bracket reads
/// `α(s,λ)·P_s ≤ ∫A♯_r(A∇_tB)dη_λ − A∇_λ(A♯_rB) ≤ μ(s,λ)·P_s`, since `x^r` is
/// operator concave. The averaged version integrates over `r` against `dη_λ`.
pub(super) fn mixte(a: &HermitianMatrix, b: &HermitianMatrix, r: f64, s: f64, lambda: f64) -> Result<ChainTerms> {
    let inner = QuadratureSpec::default();
    let outer = QuadratureSpec::outer();
    let pair = PairReduction::new(a, b)?;
    let spectrum = pair.spectrum().to_vec();
    let eta = EtaMeasure::new(lambda)?;
    let lift = |v: Vec<f64>| pair.lift(&v);
    let per = |h: &dyn Fn(f64) -> f64| spectrum.iter().map(|&c| h(c)).collect::<Vec<f64>>();

    // g(z) = ∫ z^u dη_λ(u), the representative function of 𝕃_λ.
    let g = |z: f64| integrate_eta(|u| Ok(z.powf(u)), eta, &inner);
    let g_c = spectrum.iter().map(|&c| g(c)).collect::<Result<Vec<f64>>>()?;
    let g_seg = |u: f64| spectrum.iter().map(|&c| g(seg(c, u))).collect::<Result<Vec<f64>>>();
    let averaged = integrate_eta(g_seg, eta, &outer)?;

    let power_mean = |p: f64| spectral_eta(&pair, lambda, &inner, move |t, c| seg(c, t).powf(p));

    let mut out = ChainTerms::default();
    out.run(vec![
        ("A∇_λ(A♯_sB)", lift(per(&|c| seg(c.powf(s), lambda)))),
        ("∫A♯_s(A∇_tB)dη_λ", lift(power_mean(s)?)),
        ("A♯_s(A∇_λB)", lift(per(&|c| seg(c, lambda).powf(s)))),
    ]);
    out.run(vec![
        ("A∇_λ𝕃_λ(A,B)", lift(g_c.iter().map(|&x| seg(x, lambda)).collect())),
        ("∫𝕃_λ(A,A∇_tB)dη_λ", lift(averaged.clone())),
        ("𝕃_λ(A,A∇_λB)", lift(g_seg(lambda)?)),
    ]);

    let p_at = |u: f64| per(&|c| seg(c, u).powf(r) - seg(c.powf(r), u));
    let x_gap: Vec<f64> = power_mean(r)?
        .iter()
        .zip(&spectrum)
        .map(|(m, &c)| m - seg(c.powf(r), lambda))
        .collect();
    for (u, tag) in [(s, "s"), (lambda, "λ")] {
        let k = bracket_coefs(u, lambda)?;
        let p = p_at(u);
        out.run(vec![
            (&format!("α({tag},λ)·P_{tag}")[..], lift(p.iter().map(|x| k.alpha_coef * x).collect())),
            ("∫A♯_r(A∇_tB)dη_λ − A∇_λ(A♯_rB)", lift(x_gap.clone())),
            (&format!("μ({tag},λ)·P_{tag}")[..], lift(p.iter().map(|x| k.mu_coef * x).collect())),
        ]);
    }

    let k = bracket_coefs(s, lambda)?;
    let q: Vec<f64> = g_seg(s)?.iter().zip(&g_c).map(|(gs, &gc)| gs - seg(gc, s)).collect();
    let y_gap: Vec<f64> = averaged.iter().zip(&g_c).map(|(m, &gc)| m - seg(gc, lambda)).collect();
    out.run(vec![
        ("α(s,λ)(𝕃_λ(A,A∇_sB) − A∇_s𝕃_λ(A,B))", lift(q.iter().map(|x| k.alpha_coef * x).collect())),
        ("∫𝕃_λ(A,A∇_tB)dη_λ − A∇_λ𝕃_λ(A,B)", lift(y_gap)),
        ("μ(s,λ)(𝕃_λ(A,A∇_sB) − A∇_s𝕃_λ(A,B))", lift(q.iter().map(|x| k.mu_coef * x).collect())),
    ]);
    Ok(out)
}

pub(super) fn beta_scalar(x: f64, y: f64) -> Result<(Orientation, ChainTerms)> {
    let bounds = beta_bounds_check(x, y)?;
    let orientation = match bounds.orientation {
        BetaOrientation::Standard => Orientation::Ascending,
        BetaOrientation::Reversed => Orientation::Descending,
        BetaOrientation::Both => Orientation::Equality,
    };
    let mut c = ChainTerms::default();
    c.run(vec![
        ("1/(x(1+x)^{y-1})", HermitianMatrix::scalar(bounds.lower)),
        ("B(x,y)", HermitianMatrix::scalar(bounds.value)),
        ("1/(x(1+x))", HermitianMatrix::scalar(bounds.upper)),
    ]);
    Ok((orientation, c))
}
