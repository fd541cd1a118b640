//! Inequality chains as evaluable objects.
//!
//! A chain evaluates to a list of terms (Hermitian matrices; scalar chains use
//! `1×1` or diagonal matrices) and a list of comparisons `terms[i] ≤ terms[j]`.
//! Each comparison yields a Loewner margin, the smallest eigenvalue of the
//! difference, taken in the orientation the chain requires: comparisons flip
//! when the test function is operator concave.

mod chains;
mod path;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermat::{eig_hermitian, min_eigenvalue, HermitianMatrix, TestFunction};

/// Named parameters, ordered by name so reports serialize deterministically.
pub type Params = BTreeMap<String, f64>;

/// The grid used by the default ensembles.
pub const PARAM_GRID: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// Default relative Loewner tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamDomain {
    /// `(0, 1)`.
    OpenUnit,
    /// `[0, 1]`.
    ClosedUnit,
    /// `(0, ∞)`.
    Positive,
    /// `[1, ∞)`.
    AtLeastOne,
}

impl ParamDomain {
    pub fn contains(&self, v: f64) -> bool {
        match self {
            ParamDomain::OpenUnit => v > 0.0 && v < 1.0,
            ParamDomain::ClosedUnit => (0.0..=1.0).contains(&v),
            ParamDomain::Positive => v > 0.0 && v.is_finite(),
            ParamDomain::AtLeastOne => v >= 1.0 && v.is_finite(),
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            ParamDomain::OpenUnit => "(0, 1)",
            ParamDomain::ClosedUnit => "[0, 1]",
            ParamDomain::Positive => "(0, inf)",
            ParamDomain::AtLeastOne => "[1, inf)",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ParamDecl {
    pub name: &'static str,
    pub domain: ParamDomain,
    /// Values swept by the default ensemble.
    pub grid: &'static [f64],
}

const fn unit(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        domain: ParamDomain::OpenUnit,
        grid: &PARAM_GRID,
    }
}

const fn closed(name: &'static str) -> ParamDecl {
    ParamDecl {
        name,
        domain: ParamDomain::ClosedUnit,
        grid: &PARAM_GRID,
    }
}

/// How a chain uses the test function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionUse {
    /// No test function; the orientation is fixed.
    None,
    /// Any palette member; the orientation flips for concave members.
    Palette,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainDescriptor {
    pub id: &'static str,
    pub title: &'static str,
    /// The result the chain encodes.
    pub anchor: &'static str,
    pub params: &'static [ParamDecl],
    pub function: FunctionUse,
    /// Number of terms produced.
    pub arity: usize,
}

impl ChainDescriptor {
    pub fn takes_function(&self) -> bool {
        self.function == FunctionUse::Palette
    }

    /// Checks that `params` supplies exactly the declared names, each in its domain.
    pub fn validate(&self, params: &Params, f: Option<&TestFunction>) -> Result<()> {
        let config = |reason: String| Error::ChainConfig {
            chain: self.id.to_string(),
            reason,
        };
        for decl in self.params {
            match params.get(decl.name) {
                None => return Err(config(format!("missing parameter '{}'", decl.name))),
                Some(&v) if !decl.domain.contains(v) => {
                    return Err(config(format!(
                        "parameter '{}' = {v} outside {}",
                        decl.name,
                        decl.domain.describe()
                    )))
                }
                Some(_) => {}
            }
        }
        if let Some(extra) = params.keys().find(|k| !self.params.iter().any(|d| d.name == k.as_str())) {
            return Err(config(format!("unexpected parameter '{extra}'")));
        }
        match (self.takes_function(), f) {
            (true, None) => Err(config("a test function is required".into())),
            (false, Some(f)) => Err(config(format!("does not take a test function (got '{f}')"))),
            _ => Ok(()),
        }
    }

    /// Every combination of the declared parameter grids, in lexicographic order.
    pub fn param_grid(&self) -> Vec<Params> {
        let mut out = vec![Params::new()];
        for decl in self.params {
            out = out
                .into_iter()
                .flat_map(|p| {
                    decl.grid.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.insert(decl.name.to_string(), v);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

static CHAINS: [ChainDescriptor; 18] = [
    ChainDescriptor {
        id: "whhoi",
        title: "f(A∇_λB) ≤ ∫f(A∇_tB)dη_λ ≤ f(A)∇_λf(B)",
        anchor: "weighted Hermite-Hadamard operator inequalities",
        params: &[unit("lambda")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "rhhoi",
        title: "f(A∇B) ≤ ∫f(A∇_tB)dt ≤ ∫∫f(A∇_tB)dη_λ(t)dλ ≤ f(A)∇f(B)",
        anchor: "refinement of the standard Hermite-Hadamard operator inequalities",
        params: &[],
        function: FunctionUse::Palette,
        arity: 4,
    },
    ChainDescriptor {
        id: "whhoi2",
        title: "f(A∇_rB) ≤ ∫f(A∇_{r(λ,t)}B)dη_α ≤ f(A∇_λB)∇_αf(A∇_{1-λ}B) ≤ M_{λ,α}(f;A,B) ≤ f(A)∇_rf(B)",
        anchor: "five-term chain through r(λ,α) and the mixture measure σ_{λ,α}",
        params: &[unit("lambda"), closed("alpha")],
        function: FunctionUse::Palette,
        arity: 5,
    },
    ChainDescriptor {
        id: "lwhhoi",
        title: "f(A∇_λB) ≤ ∫f((A∇_λB)∇(A∇_xB))dη_λ ≤ ∫M_{λ,1/2}(f;A∇_λB,A∇_xB)dη_λ ≤ f(A∇_λB)∇M_{λ,0}(f;A,B) ≤ ∫f(A∇_xB)dη_λ",
        anchor: "refinement of the left weighted Hermite-Hadamard inequality by nested means",
        params: &[unit("lambda")],
        function: FunctionUse::Palette,
        arity: 5,
    },
    ChainDescriptor {
        id: "rocf",
        title: "m(s,t)·D_s ≤ D_t ≤ M(s,t)·D_s with D_u = f(A)∇_uf(B) − f(A∇_uB)",
        anchor: "refinement and reverse of operator convexity",
        params: &[unit("s"), unit("t")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "rwhhoir",
        title: "α(s,λ)·D_s ≤ f(A)∇_λf(B) − ∫f(A∇_tB)dη_λ ≤ μ(s,λ)·D_s",
        anchor: "refinement and reverse of the right weighted Hermite-Hadamard inequality",
        params: &[unit("s"), unit("lambda")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "cor_a",
        title: "(1−λ^{λ/(1−λ)})·D_λ ≤ f(A)∇_λf(B) − ∫f(A∇_tB)dη_λ ≤ (1+λ^{λ/(1−λ)})·D_λ",
        anchor: "right-inequality bracket specialized at s = λ",
        params: &[unit("lambda")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "rwhhoil",
        title: "0 ≤ ∫f(A∇_tB)dη_λ − f(A∇_λB) ≤ ∫(t−λ)Df(A∇_tB)(B−A)dη_λ",
        anchor: "refinement and reverse of the left weighted Hermite-Hadamard inequality for C¹ maps",
        params: &[closed("lambda")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "rwhhir_scalar",
        title: "0 ≤ ∫f(a∇_tb)dη_λ − f(a∇_λb) ≤ (b−a)∫(t−λ)f'(a∇_tb)dη_λ on each diagonal pair",
        anchor: "scalar refinement and reverse of the left weighted Hermite-Hadamard inequality",
        params: &[closed("lambda")],
        function: FunctionUse::Palette,
        arity: 3,
    },
    ChainDescriptor {
        id: "nwomi1",
        title: "A!_λB ≤ L_λ(A,B) ≤ A∇_λB (harmonic-type weighted logarithmic mean)",
        anchor: "comparison of the harmonic-type weighted logarithmic mean",
        params: &[closed("lambda")],
        function: FunctionUse::None,
        arity: 3,
    },
    ChainDescriptor {
        id: "nwomi2",
        title: "A♯_λB ≤ 𝕃_λ(A,B) ≤ A∇_λB (geometric-type weighted logarithmic mean)",
        anchor: "comparison of the geometric-type weighted logarithmic mean",
        params: &[closed("lambda")],
        function: FunctionUse::None,
        arity: 3,
    },
    ChainDescriptor {
        id: "enwomi1",
        title: "α(s,λ)((A!_sB)^{-1} − (A∇_sB)^{-1}) ≤ (A!_λB)^{-1} − L_λ^{-1} ≤ μ(s,λ)(same)",
        anchor: "estimate of the inverse gap of the harmonic-type weighted logarithmic mean",
        params: &[unit("s"), unit("lambda")],
        function: FunctionUse::None,
        arity: 3,
    },
    ChainDescriptor {
        id: "enwomi2",
        title: "α(s,λ)(A∇_sB − A♯_sB) ≤ A∇_λB − 𝕃_λ ≤ μ(s,λ)(A∇_sB − A♯_sB)",
        anchor: "estimate of the arithmetic gap of the geometric-type weighted logarithmic mean",
        params: &[unit("s"), unit("lambda")],
        function: FunctionUse::None,
        arity: 3,
    },
    ChainDescriptor {
        id: "rnwomi",
        title: "coefficient-weighted brackets of both weighted logarithmic means and their refinements",
        anchor: "refined comparisons at s = λ",
        params: &[unit("lambda")],
        function: FunctionUse::None,
        arity: 12,
    },
    ChainDescriptor {
        id: "rnwomi3",
        title: "L_λ ≤ (A∇_λB)!L_λ ≤ [∫M_{λ,1/2}(A∇_λB,A∇_xB)dη_λ]^{-1} ≤ [∫(A∇_{(λ+x)/2}B)^{-1}dη_λ]^{-1} ≤ A∇_λB",
        anchor: "nested refinement for the harmonic-type weighted logarithmic mean (f = 1/x)",
        params: &[unit("lambda")],
        function: FunctionUse::None,
        arity: 5,
    },
    ChainDescriptor {
        id: "thm311",
        title: "0 ≤ L_λ^{-1} − (A∇_λB)^{-1} ≤ ∫(λ−t)(A∇_tB)^{-1}(B−A)(A∇_tB)^{-1}dη_λ",
        anchor: "derivative bound for the harmonic-type weighted logarithmic mean",
        params: &[closed("lambda")],
        function: FunctionUse::None,
        arity: 3,
    },
    ChainDescriptor {
        id: "mixte",
        title: "mixed-mean chains combining ♯_r, ∇_s and 𝕃_λ",
        anchor: "inequalities for mixed operator means",
        params: &[unit("r"), unit("s"), unit("lambda")],
        function: FunctionUse::None,
        arity: 15,
    },
    ChainDescriptor {
        id: "beta_scalar",
        title: "1/(x(1+x)^{y−1}) ≤ B(x,y) ≤ 1/(x(1+x)), reversed for 1 ≤ y ≤ 2",
        anchor: "beta function bounds",
        params: &[
            ParamDecl {
                name: "x",
                domain: ParamDomain::Positive,
                grid: &[0.1, 0.25, 0.5, 1.0, 2.5, 5.0],
            },
            ParamDecl {
                name: "y",
                domain: ParamDomain::AtLeastOne,
                grid: &[1.0, 1.25, 1.5, 2.0, 3.0, 10.0],
            },
        ],
        function: FunctionUse::None,
        arity: 3,
    },
];

const UPPER_MU: &str = "upper bracket coefficient is μ(s,λ), the companion of α(s,λ)";
const ETA_MEASURE: &str = "averages are taken against dη_λ";

/// Interpretation notes carried into every report of chain `id`.
pub fn chain_notes(id: &str) -> &'static [&'static str] {
    match id {
        "cor_a" => &[ETA_MEASURE],
        "enwomi1" | "enwomi2" | "rnwomi" => &[UPPER_MU],
        "mixte" => &[
            UPPER_MU,
            ETA_MEASURE,
            "averaged geometric-type comparisons use the λ-weighted mean 𝕃_λ(A, A∇_tB)",
            "gap brackets are oriented so that α(s,λ) bounds from below, as operator concavity of x^r and 𝕃_λ requires",
        ],
        _ => &[],
    }
}

/// All chains in their stable registry order.
pub fn list_chains() -> &'static [ChainDescriptor] {
    &CHAINS
}

pub fn descriptor(id: &str) -> Result<&'static ChainDescriptor> {
    CHAINS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownChain(id.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Every comparison reads `terms[i] ≤ terms[j]`.
    Ascending,
    /// Every comparison reads `terms[i] ≥ terms[j]`.
    Descending,
    /// Both readings must hold, i.e. equality within tolerance.
    Equality,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Ascending => "ascending",
            Orientation::Descending => "descending",
            Orientation::Equality => "equality",
        })
    }
}

/// Evaluated chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub id: String,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub dims: usize,
    pub orientation: Orientation,
    pub margins: Vec<f64>,
    pub holds: bool,
    /// Effective tolerance `tol·(1 + max spectral radius of the terms)`.
    pub tolerance: f64,
    /// Interpretation choices that affect how the chain's terms are formed.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// `1 + max spectral radius of the terms`.
    #[serde(skip)]
    pub scale: f64,
    #[serde(skip)]
    pub labels: Vec<String>,
    #[serde(skip)]
    pub terms: Vec<HermitianMatrix>,
    /// Pairs `(i, j)` compared as `terms[i] ≤ terms[j]` in ascending orientation.
    #[serde(skip)]
    pub comparisons: Vec<(usize, usize)>,
}

impl ChainReport {
    pub fn worst_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Worst margin divided by the tolerance scale `1 + ρ`.
    pub fn relative_worst_margin(&self) -> f64 {
        self.worst_margin() / self.scale
    }

    pub fn term(&self, label: &str) -> Option<&HermitianMatrix> {
        self.labels.iter().position(|l| l == label).map(|i| &self.terms[i])
    }
}

/// Terms and comparisons under construction.
#[derive(Default)]
pub(crate) struct ChainTerms {
    labels: Vec<String>,
    terms: Vec<HermitianMatrix>,
    comparisons: Vec<(usize, usize)>,
}

impl ChainTerms {
    /// Appends a run of terms compared consecutively.
    pub(crate) fn run(&mut self, items: Vec<(&str, HermitianMatrix)>) {
        let start = self.terms.len();
        for (i, (label, term)) in items.into_iter().enumerate() {
            if i > 0 {
                self.comparisons.push((start + i - 1, start + i));
            }
            self.labels.push(label.to_string());
            self.terms.push(term);
        }
    }
}

fn finish(
    desc: &ChainDescriptor,
    params: &Params,
    f: Option<&TestFunction>,
    dims: usize,
    orientation: Orientation,
    built: ChainTerms,
    tol: f64,
) -> Result<ChainReport> {
    let ChainTerms {
        labels,
        terms,
        comparisons,
    } = built;
    let radius = terms
        .iter()
        .map(|t| eig_hermitian(t).map(|e| e.spectral_radius()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let tolerance = tol * (1.0 + radius);
    let margins = comparisons
        .iter()
        .map(|&(i, j)| {
            let up = &terms[j] - &terms[i];
            Ok(match orientation {
                Orientation::Ascending => min_eigenvalue(&up)?,
                Orientation::Descending => min_eigenvalue(&-&up)?,
                Orientation::Equality => min_eigenvalue(&up)?.min(min_eigenvalue(&-&up)?),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let holds = margins.iter().all(|&m| m >= -tolerance);
    Ok(ChainReport {
        id: desc.id.to_string(),
        params: params.clone(),
        function: f.map(|f| f.id()),
        dims,
        orientation,
        margins,
        holds,
        tolerance,
        notes: chain_notes(desc.id).iter().map(|n| n.to_string()).collect(),
        scale: 1.0 + radius,
        labels,
        terms,
        comparisons,
    })
}

/// Evaluates chain `id` on the pair `(A, B)`.
///
/// `tol` is relative: the chain holds when every margin is at least
/// `-tol·(1 + max spectral radius of the terms)`.
pub fn evaluate_chain(
    id: &str,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    params: &Params,
    f: Option<&TestFunction>,
    tol: f64,
) -> Result<ChainReport> {
    let desc = descriptor(id)?;
    desc.validate(params, f)?;
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::param("tol", tol, "must be positive"));
    }
    a.check_same_dim(b)?;
    let p = |name: &str| params[name];
    let orientation = match f {
        Some(f) if !f.is_convex() => Orientation::Descending,
        _ => Orientation::Ascending,
    };
    let (orientation, built) = match (desc.id, f) {
        ("whhoi", Some(f)) => (orientation, chains::whhoi(f, a, b, p("lambda"))?),
        ("rhhoi", Some(f)) => (orientation, chains::rhhoi(f, a, b)?),
        ("whhoi2", Some(f)) => (orientation, chains::whhoi2(f, a, b, p("lambda"), p("alpha"))?),
        ("lwhhoi", Some(f)) => (orientation, chains::lwhhoi(f, a, b, p("lambda"))?),
        ("rocf", Some(f)) => (orientation, chains::rocf(f, a, b, p("s"), p("t"))?),
        ("rwhhoir", Some(f)) => (orientation, chains::rwhhoir(f, a, b, p("s"), p("lambda"))?),
        ("cor_a", Some(f)) => (orientation, chains::cor_a(f, a, b, p("lambda"))?),
        ("rwhhoil", Some(f)) => (orientation, chains::rwhhoil(f, a, b, p("lambda"))?),
        ("rwhhir_scalar", Some(f)) => (orientation, chains::rwhhir_scalar(f, a, b, p("lambda"))?),
        ("nwomi1", None) => (orientation, chains::nwomi1(a, b, p("lambda"))?),
        ("nwomi2", None) => (orientation, chains::nwomi2(a, b, p("lambda"))?),
        ("enwomi1", None) => (orientation, chains::enwomi1(a, b, p("s"), p("lambda"))?),
        ("enwomi2", None) => (orientation, chains::enwomi2(a, b, p("s"), p("lambda"))?),
        ("rnwomi", None) => (orientation, chains::rnwomi(a, b, p("lambda"))?),
        ("rnwomi3", None) => (orientation, chains::rnwomi3(a, b, p("lambda"))?),
        ("thm311", None) => (orientation, chains::thm311(a, b, p("lambda"))?),
        ("mixte", None) => (orientation, chains::mixte(a, b, p("r"), p("s"), p("lambda"))?),
        ("beta_scalar", None) => chains::beta_scalar(p("x"), p("y"))?,
        _ => unreachable!("validated descriptor"),
    };
    finish(desc, params, f, a.dim(), orientation, built, tol)
}

/// Convenience for building [`Params`] from pairs.
pub fn params(pairs: &[(&str, f64)]) -> Params {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests;
