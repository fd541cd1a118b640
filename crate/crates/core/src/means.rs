//! Operator means of positive-definite matrices.
//!
//! Every mean here is a Kubo-Ando mean, so it is determined by its action on
//! the reduced operand `C = A^{-1/2} B A^{-1/2}`: `A σ B = A^{1/2} h(C) A^{1/2}`.
//! [`PairReduction`] computes that reduction once; the integral means then
//! integrate scalar families over the spectrum of `C` before lifting back.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hermat::{
    apply_spectral, eig_hermitian, inverse, require_positive_definite, HermitianMatrix,
    SpectralDecomposition, TestFunction,
};
use crate::quad::{integrate_eta, integrate_sigma, integrate_uniform, EtaMeasure, QuadratureSpec, SigmaMeasure};
use crate::scalar::{rep_function_bb, rep_function_bold, rep_function_pal};

/// `A^{±1/2}` together with the spectral decomposition of `A^{-1/2} B A^{-1/2}`.
#[derive(Clone, Debug)]
pub struct PairReduction {
    root: HermitianMatrix,
    inv_root: HermitianMatrix,
    reduced: SpectralDecomposition,
}

impl PairReduction {
    pub fn new(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Self> {
        a.check_same_dim(b)?;
        let ea = require_positive_definite("A", a)?;
        require_positive_definite("B", b)?;
        let root = ea.map(f64::sqrt);
        let inv_root = ea.map(|x| 1.0 / x.sqrt());
        let reduced = eig_hermitian(&b.sandwich(&inv_root))?;
        Ok(Self {
            root,
            inv_root,
            reduced,
        })
    }

    /// Eigenvalues of `C = A^{-1/2} B A^{-1/2}`, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.reduced.eigenvalues
    }

    pub fn reduced(&self) -> &SpectralDecomposition {
        &self.reduced
    }

    pub fn root(&self) -> &HermitianMatrix {
        &self.root
    }

    pub fn inv_root(&self) -> &HermitianMatrix {
        &self.inv_root
    }

    /// `A^{1/2} h(C) A^{1/2}` where `h(c_i) = values[i]`.
    pub fn lift(&self, values: &[f64]) -> HermitianMatrix {
        self.reduced.with_eigenvalues(values).sandwich(&self.root)
    }

    /// `A^{-1/2} h(C) A^{-1/2}` where `h(c_i) = values[i]`.
    pub fn lift_inverse(&self, values: &[f64]) -> HermitianMatrix {
        self.reduced.with_eigenvalues(values).sandwich(&self.inv_root)
    }

    /// `A^{1/2} h(C) A^{1/2}`.
    pub fn lift_map(&self, h: impl Fn(f64) -> f64) -> HermitianMatrix {
        let values: Vec<f64> = self.spectrum().iter().map(|&c| h(c)).collect();
        self.lift(&values)
    }

    /// `A^{1/2} h(C) A^{1/2}` for a fallible `h`.
    pub fn try_lift_map(&self, h: impl Fn(f64) -> Result<f64>) -> Result<HermitianMatrix> {
        let values = self.spectrum().iter().map(|&c| h(c)).collect::<Result<Vec<f64>>>()?;
        Ok(self.lift(&values))
    }

    /// `∫ h(t, C) dμ(t)` on the spectrum, as a vector of per-eigenvalue integrals.
    pub fn integrate_spectrum(
        &self,
        h: impl Fn(f64, f64) -> f64,
        integrator: impl FnOnce(&dyn Fn(f64) -> Result<Vec<f64>>) -> Result<Vec<f64>>,
    ) -> Result<Vec<f64>> {
        let spectrum = self.spectrum();
        integrator(&|t| Ok(spectrum.iter().map(|&c| h(t, c)).collect()))
    }
}

/// Identifier of a binary operator mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeanKind {
    /// Weighted arithmetic mean `∇_λ`.
    Nabla,
    /// Weighted harmonic mean `!_λ`.
    Harm,
    /// Weighted geometric mean `♯_λ`.
    Sharp,
    /// Logarithmic mean `∫ ♯_t dt` (weightless).
    Logm,
    /// Weighted logarithmic mean of Pal et al.
    PalLog,
    /// `(∫ (A∇_tB)^{-1} dη_λ)^{-1}`.
    WlogHarm,
    /// `∫ A♯_tB dη_λ`.
    WlogGeom,
}

impl MeanKind {
    pub const ALL: [MeanKind; 7] = [
        MeanKind::Nabla,
        MeanKind::Harm,
        MeanKind::Sharp,
        MeanKind::Logm,
        MeanKind::PalLog,
        MeanKind::WlogHarm,
        MeanKind::WlogGeom,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            MeanKind::Nabla => "nabla",
            MeanKind::Harm => "harm",
            MeanKind::Sharp => "sharp",
            MeanKind::Logm => "logm",
            MeanKind::PalLog => "pal_log",
            MeanKind::WlogHarm => "wlog_harm",
            MeanKind::WlogGeom => "wlog_geom",
        }
    }

    pub fn is_weighted(&self) -> bool {
        !matches!(self, MeanKind::Logm)
    }

    /// Rejects weights outside the admissible range of the kind.
    pub fn validate_weight(&self, lambda: f64) -> Result<()> {
        match self {
            MeanKind::Logm => Ok(()),
            MeanKind::PalLog if !(lambda > 0.0 && lambda < 1.0) => {
                Err(Error::param("lambda", lambda, "pal_log needs a weight in (0, 1)"))
            }
            _ if !(0.0..=1.0).contains(&lambda) => Err(Error::param("lambda", lambda, "must lie in [0, 1]")),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for MeanKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for MeanKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeanKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::Format(format!("unknown mean kind '{s}'")))
    }
}

impl Serialize for MeanKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.id())
    }
}

/// Dirac semantics at the weight boundary: `λ = 0` gives `A`, `λ = 1` gives `B`.
fn boundary(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Option<HermitianMatrix> {
    if lambda == 0.0 {
        Some(a.clone())
    } else if lambda == 1.0 {
        Some(b.clone())
    } else {
        None
    }
}

fn check_weight(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::param("lambda", lambda, "must lie in [0, 1]"))
    }
}

/// `∇_λ`, `!_λ` or `♯_λ`.
pub fn elementary_mean(
    kind: MeanKind,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
) -> Result<HermitianMatrix> {
    check_weight(lambda)?;
    a.check_same_dim(b)?;
    match kind {
        MeanKind::Nabla => Ok(a.nabla(b, lambda)),
        MeanKind::Harm | MeanKind::Sharp => {
            let pair = PairReduction::new(a, b)?;
            if let Some(m) = boundary(a, b, lambda) {
                return Ok(m);
            }
            Ok(if kind == MeanKind::Harm {
                pair.lift_map(|c| c / (lambda + (1.0 - lambda) * c))
            } else {
                pair.lift_map(|c| c.powf(lambda))
            })
        }
        other => Err(Error::param(
            "kind",
            f64::NAN,
            format!("'{other}' is not an elementary mean"),
        )),
    }
}

/// `A ♯_λ B`.
pub fn sharp(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<HermitianMatrix> {
    elementary_mean(MeanKind::Sharp, a, b, lambda)
}

/// `A !_λ B`.
pub fn harm(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<HermitianMatrix> {
    elementary_mean(MeanKind::Harm, a, b, lambda)
}

/// `L(A, B) = ∫ A♯_tB dt`, integrated over the reduced spectrum.
pub fn log_mean(a: &HermitianMatrix, b: &HermitianMatrix, spec: &QuadratureSpec) -> Result<HermitianMatrix> {
    let pair = PairReduction::new(a, b)?;
    let values = pair.integrate_spectrum(|t, c| c.powf(t), |g| integrate_uniform(g, spec))?;
    Ok(pair.lift(&values))
}

/// `(∫ A^{-1} !_t B^{-1} dt)^{-1}`, integrating the full matrix path.
pub fn log_mean_harmonic_form(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    require_positive_definite("A", a)?;
    require_positive_definite("B", b)?;
    let integral = integrate_uniform(|t| inverse(&a.nabla(b, t)), spec)?;
    inverse(&integral)
}

/// `L_λ(A, B) = A^{1/2} f(C) A^{1/2}` with the weighted logarithmic representative function.
pub fn pal_log_mean(a: &HermitianMatrix, b: &HermitianMatrix, lambda: f64) -> Result<HermitianMatrix> {
    MeanKind::PalLog.validate_weight(lambda)?;
    let pair = PairReduction::new(a, b)?;
    pair.try_lift_map(|c| rep_function_pal(lambda, c))
}

/// `(∫ (A∇_tB)^{-1} dη_λ)^{-1}`.
///
/// Since `(A∇_tB)^{-1} = A^{-1/2}(1∇_tC)^{-1}A^{-1/2}`, the integral is taken
/// on the spectrum of `C` and inverted there.
pub fn wlog_harm(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let measure = EtaMeasure::new(lambda)?;
    let pair = PairReduction::new(a, b)?;
    if let Some(m) = boundary(a, b, lambda) {
        return Ok(m);
    }
    let values = pair.integrate_spectrum(|t, c| 1.0 / (1.0 - t + t * c), |g| integrate_eta(g, measure, spec))?;
    Ok(pair.lift_map_values(values.iter().map(|v| 1.0 / v)))
}

/// `∫ A♯_tB dη_λ`.
pub fn wlog_geom(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let measure = EtaMeasure::new(lambda)?;
    let pair = PairReduction::new(a, b)?;
    if let Some(m) = boundary(a, b, lambda) {
        return Ok(m);
    }
    let values = pair.integrate_spectrum(|t, c| c.powf(t), |g| integrate_eta(g, measure, spec))?;
    Ok(pair.lift(&values))
}

/// `(∫ (A∇_tB)^{-1} dη_λ)^{-1}` with the matrix integrand inverted at every node.
pub fn wlog_harm_direct(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let measure = EtaMeasure::new(lambda)?;
    PairReduction::new(a, b)?;
    inverse(&integrate_eta(|t| inverse(&a.nabla(b, t)), measure, spec)?)
}

/// `∫ A♯_tB dη_λ` with `A♯_tB` formed at every node.
pub fn wlog_geom_direct(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let measure = EtaMeasure::new(lambda)?;
    PairReduction::new(a, b)?;
    integrate_eta(|t| sharp(a, b, t), measure, spec)
}

/// `A^{1/2} f_λ(C) A^{1/2}`, one scalar integral per eigenvalue.
pub fn wlog_harm_representative(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let pair = PairReduction::new(a, b)?;
    pair.try_lift_map(|c| rep_function_bold(lambda, c, spec))
}

/// `A^{1/2} g_λ(C) A^{1/2}`, one scalar integral per eigenvalue.
pub fn wlog_geom_representative(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    let pair = PairReduction::new(a, b)?;
    pair.try_lift_map(|c| rep_function_bb(lambda, c, spec))
}

impl PairReduction {
    fn lift_map_values(&self, values: impl Iterator<Item = f64>) -> HermitianMatrix {
        let values: Vec<f64> = values.collect();
        self.lift(&values)
    }
}

/// Dispatches on [`MeanKind`]; the weight is ignored for `logm`.
pub fn compute_mean(
    kind: MeanKind,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    kind.validate_weight(lambda)?;
    match kind {
        MeanKind::Nabla | MeanKind::Harm | MeanKind::Sharp => elementary_mean(kind, a, b, lambda),
        MeanKind::Logm => log_mean(a, b, spec),
        MeanKind::PalLog => pal_log_mean(a, b, lambda),
        MeanKind::WlogHarm => wlog_harm(a, b, lambda, spec),
        MeanKind::WlogGeom => wlog_geom(a, b, lambda, spec),
    }
}

/// `𝓜_{λ,α}(f; A, B) = ∫ f(A∇_tB) dσ_{λ,α}(t)`.
pub fn hh_functional(
    f: &TestFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    lambda: f64,
    alpha: f64,
    spec: &QuadratureSpec,
) -> Result<HermitianMatrix> {
    a.check_same_dim(b)?;
    let measure = SigmaMeasure::new(lambda, alpha)?;
    integrate_sigma(|t| apply_spectral(f, &a.nabla(b, t)), measure, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermat::{loewner_compare, random_hpd, random_spd};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn example_pair() -> (HermitianMatrix, HermitianMatrix) {
        (
            HermitianMatrix::diag(&[1.0, 2.0]).unwrap(),
            HermitianMatrix::diag(&[2.0, 1.0]).unwrap(),
        )
    }

    fn pair(seed: u64, dim: usize) -> (HermitianMatrix, HermitianMatrix) {
        (
            random_hpd(dim, 100.0, seed).unwrap(),
            random_hpd(dim, 100.0, seed + 1000).unwrap(),
        )
    }

    fn assert_close(x: &HermitianMatrix, y: &HermitianMatrix, tol: f64) {
        let scale = 1.0 + x.max_abs_entry().max(y.max_abs_entry());
        let err = x.max_abs_diff(y);
        assert!(err <= tol * scale, "difference {err:e} exceeds {tol:e}·{scale}");
    }

    fn assert_diag(m: &HermitianMatrix, expected: [f64; 2], tol: f64) {
        for (i, e) in expected.iter().enumerate() {
            assert!((m.entry(i, i).re - e).abs() < tol, "entry {i}: {} vs {e}", m.entry(i, i).re);
        }
        assert!(m.entry(0, 1).norm() < 1e-14);
    }

    #[test]
    fn boundary_weights() {
        let (a, b) = pair(1, 3);
        for kind in [MeanKind::Nabla, MeanKind::Harm, MeanKind::Sharp] {
            assert_close(&elementary_mean(kind, &a, &b, 0.0).unwrap(), &a, 1e-14);
            assert_close(&elementary_mean(kind, &a, &b, 1.0).unwrap(), &b, 1e-14);
        }
        assert_eq!(wlog_harm(&a, &b, 0.0, &spec()).unwrap(), a);
        assert_eq!(wlog_geom(&a, &b, 1.0, &spec()).unwrap(), b);
    }

    #[test]
    fn scalar_geometric_mean() {
        let m = sharp(&HermitianMatrix::scalar(4.0), &HermitianMatrix::scalar(9.0), 0.5).unwrap();
        assert!((m.entry(0, 0).re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn harm_sharp_nabla_ordering() {
        for seed in 0..100 {
            let (a, b) = pair(seed, 2 + (seed as usize % 4));
            let l = [0.1, 0.25, 0.5, 0.75, 0.9][seed as usize % 5];
            let h = harm(&a, &b, l).unwrap();
            let s = sharp(&a, &b, l).unwrap();
            let n = a.nabla(&b, l);
            assert!(loewner_compare(&h, &s, 1e-9).unwrap().holds);
            assert!(loewner_compare(&s, &n, 1e-9).unwrap().holds);
        }
    }

    #[test]
    fn harm_matches_inverse_formula() {
        let (a, b) = pair(3, 4);
        let direct = inverse(&inverse(&a).unwrap().nabla(&inverse(&b).unwrap(), 0.3)).unwrap();
        assert_close(&harm(&a, &b, 0.3).unwrap(), &direct, 1e-11);
    }

    #[test]
    fn log_mean_examples() {
        let (a, _) = pair(4, 3);
        assert_close(&log_mean(&a, &a, &spec()).unwrap(), &a, 1e-12);
        let l = log_mean(&HermitianMatrix::scalar(1.0), &HermitianMatrix::scalar(2.0), &spec()).unwrap();
        assert!((l.entry(0, 0).re - 1.0 / 2f64.ln()).abs() < 1e-13);
        for seed in 0..10 {
            let (a, b) = pair(seed, 3);
            let ab = log_mean(&a, &b, &spec()).unwrap();
            assert_close(&ab, &log_mean(&b, &a, &spec()).unwrap(), 1e-9);
            assert_close(&ab, &log_mean_harmonic_form(&a, &b, &spec()).unwrap(), 1e-9);
        }
    }

    #[test]
    fn paper_example_values() {
        let (a, b) = example_pair();
        let l2 = 2f64.ln();
        let pal = pal_log_mean(&a, &b, 0.75).unwrap();
        assert_diag(&pal, [1.7051, 1.2088], 5e-4);
        let harm_type = wlog_harm(&a, &b, 0.75, &spec()).unwrap();
        assert_diag(&harm_type, [1.0 / (3.0 * l2 - 1.5), 1.0 / (12.0 * l2 - 7.5)], 1e-12);
        let geom_type = wlog_geom(&a, &b, 0.75, &spec()).unwrap();
        assert_diag(&geom_type, [1.696_426_716_207_92, 1.200_385_234_240_896], 1e-12);
        for (x, y) in [(&pal, &harm_type), (&pal, &geom_type), (&harm_type, &geom_type)] {
            assert!(x.max_abs_diff(y) > 5e-3);
        }
    }

    #[test]
    fn half_weight_collapses_to_log_mean() {
        for seed in 0..10 {
            let (a, b) = pair(seed + 20, 4);
            let l = log_mean(&a, &b, &spec()).unwrap();
            assert_close(&wlog_harm(&a, &b, 0.5, &spec()).unwrap(), &l, 1e-8);
            assert_close(&wlog_geom(&a, &b, 0.5, &spec()).unwrap(), &l, 1e-8);
            assert_close(&pal_log_mean(&a, &b, 0.5).unwrap(), &l, 1e-8);
        }
    }

    #[test]
    fn integral_and_representative_routes_agree() {
        for seed in 0..6 {
            let (a, b) = pair(seed + 40, 3);
            for &l in &[0.1, 0.5, 0.9] {
                let canonical = wlog_harm(&a, &b, l, &spec()).unwrap();
                assert_close(&canonical, &wlog_harm_direct(&a, &b, l, &spec()).unwrap(), 1e-8);
                assert_close(&canonical, &wlog_harm_representative(&a, &b, l, &spec()).unwrap(), 1e-8);
                let canonical = wlog_geom(&a, &b, l, &spec()).unwrap();
                assert_close(&canonical, &wlog_geom_direct(&a, &b, l, &spec()).unwrap(), 1e-8);
                assert_close(&canonical, &wlog_geom_representative(&a, &b, l, &spec()).unwrap(), 1e-8);
            }
        }
    }

    #[test]
    fn eta_weighted_means_are_not_weight_symmetric() {
        let one = HermitianMatrix::scalar(1.0);
        let two = HermitianMatrix::scalar(2.0);
        let forward = wlog_harm(&one, &two, 0.75, &spec()).unwrap().entry(0, 0).re;
        let mirrored = wlog_harm(&two, &one, 0.25, &spec()).unwrap().entry(0, 0).re;
        assert!((forward - 1.725_799_633_041_393).abs() < 1e-12);
        assert!((mirrored - 1.692_854_023_615_879).abs() < 1e-12);
        let forward = wlog_geom(&one, &two, 0.75, &spec()).unwrap().entry(0, 0).re;
        let mirrored = wlog_geom(&two, &one, 0.25, &spec()).unwrap().entry(0, 0).re;
        assert!((mirrored - 1.712_289_702_040_611).abs() < 1e-12 && (forward - mirrored).abs() > 1e-2);
    }

    #[test]
    fn new_means_are_bracketed() {
        for seed in 0..20 {
            let (a, b) = pair(seed + 60, 2 + seed as usize % 5);
            let l = [0.1, 0.25, 0.5, 0.75, 0.9][seed as usize % 5];
            let n = a.nabla(&b, l);
            let wh = wlog_harm(&a, &b, l, &spec()).unwrap();
            let wg = wlog_geom(&a, &b, l, &spec()).unwrap();
            assert!(loewner_compare(&harm(&a, &b, l).unwrap(), &wh, 1e-9).unwrap().holds);
            assert!(loewner_compare(&wh, &n, 1e-9).unwrap().holds);
            assert!(loewner_compare(&sharp(&a, &b, l).unwrap(), &wg, 1e-9).unwrap().holds);
            assert!(loewner_compare(&wg, &n, 1e-9).unwrap().holds);
        }
    }

    #[test]
    fn mean_axioms() {
        let weighted = |kind: MeanKind, a: &HermitianMatrix, b: &HermitianMatrix, l: f64| {
            compute_mean(kind, a, b, l, &spec()).unwrap()
        };
        for (i, kind) in MeanKind::ALL.into_iter().enumerate() {
            let seed = 80 + i as u64;
            let (a, b) = pair(seed, 3);
            let c = random_hpd(3, 10.0, seed + 7).unwrap();
            let l = 0.3;
            assert_close(&weighted(kind, &a, &a, l), &a, 1e-10);
            let lhs = weighted(kind, &a.sandwich(&c), &b.sandwich(&c), l);
            assert_close(&lhs, &weighted(kind, &a, &b, l).sandwich(&c), 1e-8);
            let bump = random_hpd(3, 10.0, seed + 9).unwrap().scale(0.1);
            let bigger = &a + &bump;
            let m = loewner_compare(&weighted(kind, &a, &b, l), &weighted(kind, &bigger, &b, l), 1e-8).unwrap();
            assert!(m.holds, "{kind}: {}", m.margin);
            // The η-weighted means are only symmetric at λ = 1/2.
            let l = if matches!(kind, MeanKind::WlogHarm | MeanKind::WlogGeom) { 0.5 } else { l };
            if kind.is_weighted() {
                let mirrored = weighted(kind, &b, &a, 1.0 - l);
                assert_close(&weighted(kind, &a, &b, l), &mirrored, 1e-9);
            }
        }
    }

    #[test]
    fn hh_functional_properties() {
        let (a, b) = pair(100, 3);
        for f in TestFunction::palette() {
            let m = hh_functional(&f, &a, &b, 0.3, 0.2, &spec()).unwrap();
            let mirrored = hh_functional(&f, &a, &b, 0.7, 0.8, &spec()).unwrap();
            assert_close(&m, &mirrored, 1e-9);
        }
        let inv = TestFunction::Inv;
        let m = hh_functional(&inv, &a, &b, 0.6, 0.0, &spec()).unwrap();
        assert_close(&m, &inverse(&wlog_harm(&a, &b, 0.6, &spec()).unwrap()).unwrap(), 1e-9);
        let near = hh_functional(&inv, &a, &b, 0.001, 0.4, &spec()).unwrap();
        let chord = apply_spectral(&inv, &a).unwrap().nabla(&apply_spectral(&inv, &b).unwrap(), 0.4);
        assert!(near.max_abs_diff(&chord) < 1e-2 * (1.0 + chord.max_abs_entry()));
    }

    #[test]
    fn real_inputs_stay_real() {
        let a = random_spd(4, 30.0, 1).unwrap();
        let b = random_spd(4, 30.0, 2).unwrap();
        assert!(wlog_geom(&a, &b, 0.4, &spec()).unwrap().is_real());
    }

    #[test]
    fn rejects_bad_input() {
        let (a, b) = example_pair();
        let indefinite = HermitianMatrix::diag(&[1.0, -1.0]).unwrap();
        assert!(matches!(sharp(&indefinite, &b, 0.5), Err(Error::NotPositiveDefinite { .. })));
        assert!(pal_log_mean(&a, &b, 1.0).is_err());
        assert!(wlog_geom(&a, &b, 1.5, &spec()).is_err());
        assert!("nope".parse::<MeanKind>().is_err());
        assert_eq!("wlog_geom".parse::<MeanKind>().unwrap(), MeanKind::WlogGeom);
    }
}
