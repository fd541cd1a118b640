//! Gauss rules on `[0, 1]` for the probability weight `(p + 1)·t^p`, `p > -1`.
//!
//! Nodes and weights come from the Golub-Welsch construction: the eigenvalues
//! of the Jacobi matrix of the shifted Jacobi polynomials, with weights given
//! by the squared first components of the eigenvectors. Only the first row of
//! the eigenvector matrix is tracked through the QL sweeps, so a rule costs
//! `O(n²)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

const MAX_QL_ITERATIONS: usize = 100;

/// Nodes ascending in `(0, 1)`, weights positive and summing to one.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

type RuleKey = (u64, usize);

fn cache() -> &'static Mutex<HashMap<RuleKey, Arc<GaussRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached `n`-point rule for the weight `(p + 1)·t^p` on `[0, 1]`.
pub fn jacobi_rule(p: f64, n: usize) -> Result<Arc<GaussRule>> {
    let key = (p.to_bits(), n);
    if let Some(rule) = cache().lock().expect("rule cache").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_jacobi_rule(p, n)?);
    cache()
        .lock()
        .expect("rule cache")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// Cached `n`-point Gauss-Legendre rule on `[0, 1]` (weights sum to one).
pub fn legendre_rule(n: usize) -> Result<Arc<GaussRule>> {
    jacobi_rule(0.0, n)
}

fn build_jacobi_rule(p: f64, n: usize) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::param("nodes", 0.0, "need at least one node"));
    }
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::param("p", p, "Jacobi exponent must exceed -1"));
    }
    // Recurrence of monic Jacobi polynomials on [-1, 1] for (1-x)^0 (1+x)^p,
    // mapped to t = (1 + x) / 2.
    let b = p;
    let mut diag = Vec::with_capacity(n);
    let mut off = vec![0.0; n];
    for k in 0..n {
        let kf = k as f64;
        let alpha = if k == 0 {
            b / (b + 2.0)
        } else {
            let s = 2.0 * kf + b;
            (b * b) / (s * (s + 2.0))
        };
        diag.push(0.5 * (1.0 + alpha));
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + b;
            let beta = 4.0 * j * j * (j + b) * (j + b) / (s * s * (s + 1.0) * (s - 1.0));
            off[k] = 0.5 * beta.sqrt();
        }
    }
    let mut first = vec![0.0; n];
    first[0] = 1.0;
    tridiagonal_ql(&mut diag, &mut off, &mut first)?;
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first)
        .map(|(x, z)| (x, z * z))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|&(_, w)| w).sum();
    Ok(GaussRule {
        nodes: pairs.iter().map(|&(x, _)| x).collect(),
        weights: pairs.iter().map(|&(_, w)| w / total).collect(),
    })
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
///
/// `diag` is overwritten with the eigenvalues; `off[i]` couples rows `i` and
/// `i + 1`; `first` carries the first row of the accumulated rotations.
fn tridiagonal_ql(diag: &mut [f64], off: &mut [f64], first: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > MAX_QL_ITERATIONS {
                return Err(Error::EigenNonConvergence {
                    dim: n,
                    condition: f64::NAN,
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut shift) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= shift;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - shift;
                r = (diag[i] - g) * s + 2.0 * c * b;
                shift = s * r;
                diag[i + 1] = g + shift;
                g = c * r - b;
                let z = first[i + 1];
                first[i + 1] = s * first[i] + c * z;
                first[i] = c * first[i] - s * z;
            }
            if deflated {
                continue;
            }
            diag[l] -= shift;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}
