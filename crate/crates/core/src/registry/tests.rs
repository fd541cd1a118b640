use super::*;
use crate::hermat::random_hpd;
use crate::means::wlog_harm;
use crate::quad::{legendre_rule, QuadratureSpec};

fn scalar(x: f64) -> HermitianMatrix {
    HermitianMatrix::scalar(x)
}

/// `∫ φ dη_λ` by graded composite Gauss–Legendre on `[0, 1]` against the raw
/// density `(p+1)t^p`; the panel next to zero is approximated by `φ(0)·h^{p+1}`.
fn eta_oracle(phi: impl Fn(f64) -> f64, lambda: f64) -> f64 {
    let p = (2.0 * lambda - 1.0) / (1.0 - lambda);
    let rule = legendre_rule(24).unwrap();
    let mut hi = 1.0_f64;
    let mut total = 0.0;
    while hi > 1e-200 {
        let lo = 0.5 * hi;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = lo + (hi - lo) * x;
            total += w * (hi - lo) * (p + 1.0) * t.powf(p) * phi(t);
        }
        hi = lo;
    }
    total + phi(0.0) * hi.powf(p + 1.0)
}

#[test]
fn registry_lists_eighteen_chains() {
    let chains = list_chains();
    assert_eq!(chains.len(), 18);
    let mut ids: Vec<_> = chains.iter().map(|c| c.id).collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), 18);
    assert!(chains.iter().all(|c| !c.anchor.is_empty() && !c.title.is_empty()));
    assert!(descriptor("whhoi").is_ok());
    assert!(matches!(descriptor("nope"), Err(Error::UnknownChain(_))));
}

#[test]
fn whhoi_scalar_example() {
    let r = evaluate_chain(
        "whhoi",
        &scalar(1.0),
        &scalar(2.0),
        &params(&[("lambda", 0.75)]),
        Some(&TestFunction::Inv),
        DEFAULT_TOL,
    )
    .unwrap();
    let vals: Vec<f64> = r.terms.iter().map(|t| t.trace()).collect();
    let expect = [1.0 / 1.75, 3.0 * 2f64.ln() - 1.5, 0.625];
    for (v, e) in vals.iter().zip(expect) {
        assert!((v - e).abs() < 1e-12, "{v} vs {e}");
    }
    assert!(r.holds);
    assert_eq!(r.margins.len(), 2);
}

#[test]
fn equal_arguments_give_zero_margins() {
    let a = random_hpd(3, 10.0, 5).unwrap();
    for (id, p, f) in [
        ("whhoi", params(&[("lambda", 0.3)]), Some(TestFunction::Square)),
        ("rhhoi", params(&[]), Some(TestFunction::XLogX)),
        ("nwomi1", params(&[("lambda", 0.3)]), None),
        ("nwomi2", params(&[("lambda", 0.3)]), None),
        ("rnwomi3", params(&[("lambda", 0.3)]), None),
    ] {
        let r = evaluate_chain(id, &a, &a, &p, f.as_ref(), DEFAULT_TOL).unwrap();
        for m in &r.margins {
            assert!(m.abs() < 1e-9 * r.scale, "{id}: {m:e}");
        }
    }
}

#[test]
fn concave_functions_reverse_orientation() {
    let a = random_hpd(3, 20.0, 1).unwrap();
    let b = random_hpd(3, 20.0, 2).unwrap();
    let p = params(&[("lambda", 0.4)]);
    let log = evaluate_chain("whhoi", &a, &b, &p, Some(&TestFunction::Log), DEFAULT_TOL).unwrap();
    assert_eq!(log.orientation, Orientation::Descending);
    assert!(log.holds, "{:?}", log.margins);
    let inv = evaluate_chain("whhoi", &a, &b, &p, Some(&TestFunction::Inv), DEFAULT_TOL).unwrap();
    assert_eq!(inv.orientation, Orientation::Ascending);
    assert!(inv.holds);
}

#[test]
fn cor_a_is_rwhhoir_at_s_equal_lambda() {
    let a = random_hpd(3, 20.0, 3).unwrap();
    let b = random_hpd(3, 20.0, 4).unwrap();
    for f in TestFunction::palette() {
        for &l in &[0.25, 0.5, 0.75] {
            let c = evaluate_chain("cor_a", &a, &b, &params(&[("lambda", l)]), Some(&f), DEFAULT_TOL).unwrap();
            let r = evaluate_chain(
                "rwhhoir",
                &a,
                &b,
                &params(&[("s", l), ("lambda", l)]),
                Some(&f),
                DEFAULT_TOL,
            )
            .unwrap();
            for (x, y) in c.margins.iter().zip(&r.margins) {
                assert!((x - y).abs() < 1e-12 * c.scale, "{f} λ={l}: {x:e} vs {y:e}");
            }
        }
    }
}

#[test]
fn rnwomi3_starts_at_harmonic_type_mean() {
    let a = random_hpd(4, 30.0, 6).unwrap();
    let b = random_hpd(4, 30.0, 7).unwrap();
    let r = evaluate_chain("rnwomi3", &a, &b, &params(&[("lambda", 0.35)]), None, DEFAULT_TOL).unwrap();
    let direct = wlog_harm(&a, &b, 0.35, &QuadratureSpec::default()).unwrap();
    assert!(r.terms[0].max_abs_diff(&direct) < 1e-10);
    assert!(r.holds, "{:?}", r.margins);
}

#[test]
fn scalar_collapse_matches_independent_oracle() {
    for f in TestFunction::palette() {
        for &(x, y) in &[(0.5, 3.0), (2.0, 1.0), (1.0, 7.5)] {
            for &l in &PARAM_GRID {
                let r = evaluate_chain("whhoi", &scalar(x), &scalar(y), &params(&[("lambda", l)]), Some(&f), DEFAULT_TOL)
                    .unwrap();
                let oracle = eta_oracle(|t| f.value((1.0 - t) * x + t * y), l);
                let got = r.terms[1].trace();
                assert!((got - oracle).abs() < 1e-10 * (1.0 + oracle.abs()), "{f} ({x},{y}) λ={l}: {got} vs {oracle}");
                assert!((r.terms[0].trace() - f.value((1.0 - l) * x + l * y)).abs() < 1e-13);
            }
        }
    }
}

#[test]
fn whhoi_at_half_matches_uniform_term() {
    let a = random_hpd(3, 20.0, 8).unwrap();
    let b = random_hpd(3, 20.0, 9).unwrap();
    let f = TestFunction::Pow(1.5);
    let w = evaluate_chain("whhoi", &a, &b, &params(&[("lambda", 0.5)]), Some(&f), DEFAULT_TOL).unwrap();
    let r = evaluate_chain("rhhoi", &a, &b, &params(&[]), Some(&f), DEFAULT_TOL).unwrap();
    for (i, j) in [(0, 0), (1, 1), (2, 3)] {
        assert!(w.terms[i].max_abs_diff(&r.terms[j]) < 1e-11);
    }
}

#[test]
fn rwhhir_scalar_acts_on_diagonals() {
    let a = HermitianMatrix::diag(&[1.0, 3.0]).unwrap();
    let b = HermitianMatrix::diag(&[2.0, 0.5]).unwrap();
    let r = evaluate_chain("rwhhir_scalar", &a, &b, &params(&[("lambda", 0.6)]), Some(&TestFunction::Square), DEFAULT_TOL)
        .unwrap();
    let full = evaluate_chain("rwhhoil", &a, &b, &params(&[("lambda", 0.6)]), Some(&TestFunction::Square), DEFAULT_TOL)
        .unwrap();
    // Commuting diagonal pairs: the matrix chain reduces to the scalar one.
    for i in 1..3 {
        assert!(r.terms[i].max_abs_diff(&full.terms[i]) < 1e-11);
    }
}

#[test]
fn beta_orientation_follows_y() {
    let run = |y: f64| evaluate_chain("beta_scalar", &scalar(1.0), &scalar(1.0), &params(&[("x", 0.5), ("y", y)]), None, DEFAULT_TOL).unwrap();
    assert_eq!(run(3.0).orientation, Orientation::Ascending);
    assert_eq!(run(1.5).orientation, Orientation::Descending);
    let eq = run(2.0);
    assert_eq!(eq.orientation, Orientation::Equality);
    assert!(eq.holds);
    for y in [1.0, 1.25, 3.0, 10.0] {
        assert!(run(y).holds);
    }
}

#[test]
fn validation_rejects_bad_inputs() {
    let a = scalar(1.0);
    let b = scalar(2.0);
    let f = TestFunction::Inv;
    let whhoi = |p: Params, f: Option<&TestFunction>| evaluate_chain("whhoi", &a, &b, &p, f, DEFAULT_TOL);
    assert!(whhoi(params(&[]), Some(&f)).is_err());
    assert!(whhoi(params(&[("lambda", 0.5)]), None).is_err());
    assert!(whhoi(params(&[("lambda", 1.0)]), Some(&f)).is_err());
    assert!(whhoi(params(&[("lambda", 0.5), ("alpha", 0.5)]), Some(&f)).is_err());
    assert!(evaluate_chain("nwomi1", &a, &b, &params(&[("lambda", 0.5)]), Some(&f), DEFAULT_TOL).is_err());
    assert!(evaluate_chain("whhoi", &a, &b, &params(&[("lambda", 0.5)]), Some(&f), 0.0).is_err());
    let neg = scalar(-1.0);
    assert!(evaluate_chain("whhoi", &neg, &b, &params(&[("lambda", 0.5)]), Some(&TestFunction::Log), DEFAULT_TOL).is_err());
}

#[test]
fn closed_weight_boundaries_evaluate() {
    let a = random_hpd(2, 10.0, 21).unwrap();
    let b = random_hpd(2, 10.0, 22).unwrap();
    for id in ["rwhhoil", "nwomi1", "nwomi2", "thm311"] {
        for l in [0.0, 1.0] {
            let f = descriptor(id).unwrap().takes_function().then_some(TestFunction::Square);
            let r = evaluate_chain(id, &a, &b, &params(&[("lambda", l)]), f.as_ref(), DEFAULT_TOL).unwrap();
            assert!(r.holds, "{id} λ={l}: {:?}", r.margins);
        }
    }
}

#[test]
fn soundness_sweep_on_random_pairs() {
    for seed in 0..3u64 {
        let a = random_hpd(3, 40.0, 100 + 2 * seed).unwrap();
        let b = random_hpd(3, 40.0, 101 + 2 * seed).unwrap();
        for desc in list_chains() {
            let fs: Vec<Option<TestFunction>> = if desc.takes_function() {
                TestFunction::palette().into_iter().map(Some).collect()
            } else {
                vec![None]
            };
            let grid = desc.param_grid();
            for f in &fs {
                for (k, p) in grid.iter().enumerate() {
                    // Thin the larger grids; every point is covered across seeds.
                    if grid.len() > 5 && !(k as u64 + seed).is_multiple_of(3) {
                        continue;
                    }
                    let r = evaluate_chain(desc.id, &a, &b, p, f.as_ref(), DEFAULT_TOL)
                        .unwrap_or_else(|e| panic!("{} {p:?} {f:?}: {e}", desc.id));
                    assert!(r.holds, "{} {p:?} {f:?}: {:?} tol {:e}", desc.id, r.margins, r.tolerance);
                    assert_eq!(r.terms.len(), desc.arity, "{}", desc.id);
                }
            }
        }
    }
}
