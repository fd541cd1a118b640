//! Seeded verification ensembles, parameter sweeps and the worked `diag(1,2)`,
//! `diag(2,1)` example.
//!
//! Every task derives its matrices from `(seed, trial)` alone, so results do
//! not depend on scheduling. Tasks may run on the rayon pool; cases are always
//! assembled in task order. Wall-clock runtime is kept out of the serialized
//! reports so identical configurations give byte-identical JSON.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermat::{eig_hermitian, random_hpd, HermitianMatrix, TestFunction};
use crate::means::{pal_log_mean, wlog_geom, wlog_harm};
use crate::quad::QuadratureSpec;
use crate::registry::{chain_notes, descriptor, evaluate_chain, ChainReport, Orientation, Params};

pub const SCHEMA: &str = "opmean-report/1";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DIMS: [usize; 4] = [2, 3, 4, 6];
pub const DEFAULT_COND: f64 = 100.0;
/// Agreement required of the worked example, matching its 4-digit printout.
pub const EXAMPLE_TOL: f64 = 5e-4;

/// SplitMix64 finalizer applied to `seed + (index + 1)·γ`: stream `index` of `seed`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Where the operand pairs come from.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSource {
    /// Fresh random HPD pairs; trial `k` uses `dims[k % dims.len()]`.
    Random { dims: Vec<usize>, cond: f64 },
    /// The same pair for every trial.
    Fixed {
        #[serde(skip)]
        a: HermitianMatrix,
        #[serde(skip)]
        b: HermitianMatrix,
        dims: usize,
    },
}

impl PairSource {
    pub fn random(dims: Vec<usize>, cond: f64) -> Self {
        PairSource::Random { dims, cond }
    }

    pub fn fixed(a: HermitianMatrix, b: HermitianMatrix) -> Result<Self> {
        a.check_same_dim(&b)?;
        let dims = a.dim();
        Ok(PairSource::Fixed { a, b, dims })
    }

    fn validate(&self) -> Result<()> {
        if let PairSource::Random { dims, cond } = self {
            if dims.is_empty() || dims.contains(&0) {
                return Err(Error::Format("dimensions must be a nonempty list of positive integers".into()));
            }
            if !(*cond >= 1.0) || !cond.is_finite() {
                return Err(Error::param("cond", *cond, "must be a finite value ≥ 1"));
            }
        }
        Ok(())
    }

    /// The pair for `trial` and the seed it was drawn from.
    pub fn pair(&self, seed: u64, trial: usize) -> Result<(HermitianMatrix, HermitianMatrix, u64)> {
        match self {
            PairSource::Random { dims, cond } => {
                let s = split_seed(seed, trial as u64);
                let dim = dims[trial % dims.len()];
                let a = random_hpd(dim, *cond, split_seed(s, 0))?;
                let b = random_hpd(dim, *cond, split_seed(s, 1))?;
                Ok((a, b, s))
            }
            PairSource::Fixed { a, b, .. } => Ok((a.clone(), b.clone(), seed)),
        }
    }
}

/// How ensemble tasks are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// The rayon pool; falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

fn run_tasks<T: Send, R: Send>(tasks: Vec<T>, exec: Execution, f: impl Fn(T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return tasks.into_par_iter().map(f).collect();
    }
    let _ = exec;
    tasks.into_iter().map(f).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleConfig {
    pub chains: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub source: PairSource,
    /// Test functions for palette chains; `None` runs the whole palette.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<TestFunction>>,
    /// Fixed parameter values; parameters not given here cycle through their grid.
    pub params: Params,
}

impl EnsembleConfig {
    pub fn new(chains: Vec<String>, trials: usize, seed: u64) -> Self {
        Self {
            chains,
            trials,
            seed,
            tol: crate::registry::DEFAULT_TOL,
            source: PairSource::random(DEFAULT_DIMS.to_vec(), DEFAULT_COND),
            functions: None,
            params: Params::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", 0.0, "must be at least 1"));
        }
        if self.chains.is_empty() {
            return Err(Error::Format("at least one chain is required".into()));
        }
        if !(self.tol > 0.0) || !self.tol.is_finite() {
            return Err(Error::param("tol", self.tol, "must be positive"));
        }
        if matches!(&self.functions, Some(f) if f.is_empty()) {
            return Err(Error::Format("function list must not be empty".into()));
        }
        self.source.validate()?;
        for id in &self.chains {
            descriptor(id)?;
        }
        for name in self.params.keys() {
            let declared = self
                .chains
                .iter()
                .any(|id| descriptor(id).map(|d| d.params.iter().any(|p| p.name == name)).unwrap_or(false));
            if !declared {
                return Err(Error::Format(format!("parameter '{name}' is not used by any selected chain")));
            }
        }
        for id in &self.chains {
            // Rejects out-of-domain fixed values before any work is done.
            for p in chain_grid(id, &self.params)? {
                let desc = descriptor(id)?;
                for decl in desc.params {
                    if !decl.domain.contains(p[decl.name]) {
                        return Err(Error::ChainConfig {
                            chain: id.clone(),
                            reason: format!("parameter '{}' = {} out of range", decl.name, p[decl.name]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The chain's parameter grid with fixed values substituted.
fn chain_grid(id: &str, fixed: &Params) -> Result<Vec<Params>> {
    let desc = descriptor(id)?;
    let mut out = vec![Params::new()];
    for decl in desc.params {
        let values: Vec<f64> = match fixed.get(decl.name) {
            Some(&v) => vec![v],
            None => decl.grid.to_vec(),
        };
        out = out
            .iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.insert(decl.name.to_string(), v);
                    q
                })
            })
            .collect();
    }
    Ok(out)
}

fn chain_functions(id: &str, requested: &Option<Vec<TestFunction>>) -> Result<Vec<Option<TestFunction>>> {
    Ok(if descriptor(id)?.takes_function() {
        requested.clone().unwrap_or_else(TestFunction::palette).into_iter().map(Some).collect()
    } else {
        vec![None]
    })
}

/// One chain evaluation inside an ensemble.
#[derive(Clone, Debug, Serialize)]
pub struct Case {
    pub chain: String,
    pub trial: usize,
    pub pair_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub params: Params,
    pub dims: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    pub margins: Vec<f64>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Worst margin over `1 + max spectral radius of the terms`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative_worst_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Case {
    fn from_outcome(
        chain: &str,
        trial: usize,
        pair_seed: u64,
        dims: usize,
        function: Option<&TestFunction>,
        params: Params,
        outcome: Result<ChainReport>,
    ) -> Self {
        let base = Case {
            chain: chain.to_string(),
            trial,
            pair_seed,
            function: function.map(|f| f.id()),
            params,
            dims,
            orientation: None,
            margins: Vec::new(),
            holds: false,
            tolerance: None,
            relative_worst_margin: None,
            error: None,
        };
        match outcome {
            Ok(r) => Case {
                orientation: Some(r.orientation),
                holds: r.holds,
                tolerance: Some(r.tolerance),
                relative_worst_margin: Some(r.relative_worst_margin()),
                margins: r.margins,
                ..base
            },
            Err(e) => Case {
                error: Some(e.to_string()),
                ..base
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub id: String,
    pub anchor: String,
    pub cases: usize,
    pub failures: usize,
    pub errors: usize,
    pub worst_margin: f64,
    pub worst_relative_margin: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnsembleReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: EnsembleConfig,
    pub summaries: Vec<ChainSummary>,
    /// Cases with `holds = false`, evaluation errors included.
    pub failures: usize,
    pub errors: usize,
    pub cases: Vec<Case>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl EnsembleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self, id: &str) -> Option<&ChainSummary> {
        self.summaries.iter().find(|s| s.id == id)
    }
}

fn summarize(id: &str, cases: &[Case]) -> Result<ChainSummary> {
    let mine: Vec<&Case> = cases.iter().filter(|c| c.chain == id).collect();
    let fold = |f: fn(&Case) -> Option<f64>| mine.iter().filter_map(|c| f(c)).fold(f64::INFINITY, f64::min);
    Ok(ChainSummary {
        id: id.to_string(),
        anchor: descriptor(id)?.anchor.to_string(),
        cases: mine.len(),
        failures: mine.iter().filter(|c| !c.holds).count(),
        errors: mine.iter().filter(|c| c.error.is_some()).count(),
        worst_margin: fold(|c| c.margins.iter().copied().reduce(f64::min)),
        worst_relative_margin: fold(|c| c.relative_worst_margin),
        notes: chain_notes(id).iter().map(|s| s.to_string()).collect(),
    })
}

/// Runs every selected chain on `trials` pairs.
///
/// Trial `k` of each chain uses pair `k` of the source and the `k`-th point
/// of the chain's parameter grid (cyclically); palette chains are evaluated
/// for every requested test function.
pub fn run_ensemble(config: &EnsembleConfig, exec: Execution) -> Result<EnsembleReport> {
    config.validate()?;
    let start = Instant::now();
    let mut tasks = Vec::new();
    for id in &config.chains {
        let grid = chain_grid(id, &config.params)?;
        let functions = chain_functions(id, &config.functions)?;
        for trial in 0..config.trials {
            tasks.push((id.as_str(), trial, grid[trial % grid.len()].clone(), functions.clone()));
        }
    }
    let per_task = run_tasks(tasks, exec, |(id, trial, params, functions)| {
        let (a, b, seed) = match config.source.pair(config.seed, trial) {
            Ok(p) => p,
            Err(e) => {
                let err = Case::from_outcome(id, trial, 0, 0, None, params, Err(e));
                return vec![err];
            }
        };
        functions
            .iter()
            .map(|f| {
                let outcome = evaluate_chain(id, &a, &b, &params, f.as_ref(), config.tol);
                Case::from_outcome(id, trial, seed, a.dim(), f.as_ref(), params.clone(), outcome)
            })
            .collect::<Vec<Case>>()
    });
    let cases: Vec<Case> = per_task.into_iter().flatten().collect();
    let summaries = config
        .chains
        .iter()
        .map(|id| summarize(id, &cases))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleReport {
        schema: SCHEMA,
        command: "verify",
        config: config.clone(),
        failures: cases.iter().filter(|c| !c.holds).count(),
        errors: cases.iter().filter(|c| c.error.is_some()).count(),
        summaries,
        cases,
        runtime: start.elapsed(),
    })
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepConfig {
    pub chain: String,
    /// Swept parameters in order; the first varies slowest.
    pub grid: Vec<(String, Vec<f64>)>,
    /// Parameters held fixed across the sweep.
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<TestFunction>>,
    pub source: PairSource,
    pub seed: u64,
    pub tol: f64,
}

impl SweepConfig {
    fn points(&self) -> Result<Vec<Params>> {
        let desc = descriptor(&self.chain)?;
        if self.grid.is_empty() {
            return Err(Error::Format("sweep grid is empty".into()));
        }
        let mut out = vec![self.params.clone()];
        for (name, values) in &self.grid {
            if values.is_empty() {
                return Err(Error::Format(format!("grid for '{name}' is empty")));
            }
            if self.params.contains_key(name) {
                return Err(Error::Format(format!("'{name}' is both swept and fixed")));
            }
            if !desc.params.iter().any(|d| d.name == name) {
                return Err(Error::ChainConfig {
                    chain: self.chain.clone(),
                    reason: format!("unknown parameter '{name}'"),
                });
            }
            out = out
                .iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.insert(name.clone(), v);
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

/// One sweep point.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub holds: bool,
    pub margins: Vec<f64>,
    pub worst_margin: f64,
    pub relative_worst_margin: f64,
    /// Largest eigenvalue of each oriented consecutive difference.
    pub gaps: Vec<f64>,
    /// Largest eigenvalue of the oriented difference between the outer bounds of each run.
    pub widths: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: SweepConfig,
    pub failures: usize,
    pub errors: usize,
    pub rows: Vec<SweepRow>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn oriented_spread(r: &ChainReport, i: usize, j: usize) -> Result<f64> {
    let up = &r.terms[j] - &r.terms[i];
    let eig = eig_hermitian(&up)?;
    Ok(match r.orientation {
        Orientation::Ascending => eig.max(),
        Orientation::Descending => -eig.min(),
        Orientation::Equality => eig.max().max(-eig.min()),
    })
}

fn sweep_row(params: Params, f: Option<&TestFunction>, outcome: Result<ChainReport>) -> SweepRow {
    let row = |r: &ChainReport| -> Result<(Vec<f64>, Vec<f64>)> {
        let gaps = r
            .comparisons
            .iter()
            .map(|&(i, j)| oriented_spread(r, i, j))
            .collect::<Result<Vec<f64>>>()?;
        // Runs are maximal sequences of chained comparisons.
        let mut widths = Vec::new();
        let mut run_start: Option<usize> = None;
        for (k, &(i, j)) in r.comparisons.iter().enumerate() {
            let first = *run_start.get_or_insert(i);
            let last_in_run = r.comparisons.get(k + 1).is_none_or(|&(next, _)| next != j);
            if last_in_run {
                widths.push(oriented_spread(r, first, j)?);
                run_start = None;
            }
        }
        Ok((gaps, widths))
    };
    let failed = |error: String| SweepRow {
        params: params.clone(),
        function: f.map(|f| f.id()),
        holds: false,
        margins: Vec::new(),
        worst_margin: f64::NAN,
        relative_worst_margin: f64::NAN,
        gaps: Vec::new(),
        widths: Vec::new(),
        error: Some(error),
    };
    match outcome.and_then(|r| row(&r).map(|gw| (r, gw))) {
        Ok((r, (gaps, widths))) => SweepRow {
            params: params.clone(),
            function: f.map(|f| f.id()),
            holds: r.holds,
            worst_margin: r.worst_margin(),
            relative_worst_margin: r.relative_worst_margin(),
            margins: r.margins,
            gaps,
            widths,
            error: None,
        },
        Err(e) => failed(e.to_string()),
    }
}

/// Evaluates one chain over a parameter grid on the first pair of the source.
pub fn run_sweep(config: &SweepConfig, exec: Execution) -> Result<SweepReport> {
    if !(config.tol > 0.0) || !config.tol.is_finite() {
        return Err(Error::param("tol", config.tol, "must be positive"));
    }
    config.source.validate()?;
    let points = config.points()?;
    let desc = descriptor(&config.chain)?;
    for p in &points {
        desc.validate(p, desc.takes_function().then_some(&TestFunction::Inv))?;
    }
    let functions = chain_functions(&config.chain, &config.functions)?;
    let start = Instant::now();
    let (a, b, _) = config.source.pair(config.seed, 0)?;
    let tasks: Vec<(Params, Option<TestFunction>)> = points
        .iter()
        .flat_map(|p| functions.iter().map(move |f| (p.clone(), *f)))
        .collect();
    let rows = run_tasks(tasks, exec, |(p, f)| {
        let outcome = evaluate_chain(&config.chain, &a, &b, &p, f.as_ref(), config.tol);
        sweep_row(p, f.as_ref(), outcome)
    });
    Ok(SweepReport {
        schema: SCHEMA,
        command: "sweep",
        config: config.clone(),
        failures: rows.iter().filter(|r| !r.holds).count(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        rows,
        runtime: start.elapsed(),
    })
}

/// One diagonal entry of the worked example.
#[derive(Clone, Debug, Serialize)]
pub struct ExampleEntry {
    pub mean: &'static str,
    pub entry: &'static str,
    pub computed: f64,
    /// High-precision value from closed-form antiderivatives.
    pub oracle: f64,
    /// The 4-digit reference printout for this mean, as labelled there.
    pub reference: f64,
    pub deviation: f64,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub schema: &'static str,
    pub command: &'static str,
    pub lambda: f64,
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub tolerance: f64,
    pub entries: Vec<ExampleEntry>,
    pub notes: Vec<String>,
    pub holds: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

impl ExampleReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn entry(&self, mean: &str, entry: &str) -> Option<&ExampleEntry> {
        self.entries.iter().find(|e| e.mean == mean && e.entry == entry)
    }
}

/// The three weighted logarithmic means at `λ = 3/4` on `A = diag(1,2)`, `B = diag(2,1)`.
pub fn paper_example() -> Result<ExampleReport> {
    let start = Instant::now();
    let lambda = 0.75;
    let a = HermitianMatrix::diag(&[1.0, 2.0])?;
    let b = HermitianMatrix::diag(&[2.0, 1.0])?;
    let spec = QuadratureSpec::default();
    let ln2 = std::f64::consts::LN_2;
    // (id, computed, oracle, reference as printed)
    let rows = [
        (
            "pal_log",
            pal_log_mean(&a, &b, lambda)?,
            [1.705_100_761_368_977, 1.208_813_457_670_544],
            [1.7051, 1.2088],
        ),
        (
            "wlog_harm",
            wlog_harm(&a, &b, lambda, &spec)?,
            [1.0 / (3.0 * ln2 - 1.5), 1.0 / (12.0 * ln2 - 7.5)],
            [1.6964, 1.2004],
        ),
        (
            "wlog_geom",
            wlog_geom(&a, &b, lambda, &spec)?,
            [1.696_426_716_207_92, 1.200_385_234_240_896],
            [1.7258, 1.2228],
        ),
    ];
    let mut entries = Vec::new();
    for (mean, m, oracle, reference) in rows {
        for (k, entry) in ["(1,1)", "(2,2)"].into_iter().enumerate() {
            let computed = m.entry(k, k).re;
            let deviation = computed - oracle[k];
            entries.push(ExampleEntry {
                mean,
                entry,
                computed,
                oracle: oracle[k],
                reference: reference[k],
                deviation,
                within_tolerance: deviation.abs() <= EXAMPLE_TOL,
            });
        }
    }
    let holds = entries.iter().all(|e| e.within_tolerance);
    Ok(ExampleReport {
        schema: SCHEMA,
        command: "paper-example",
        lambda,
        a: [1.0, 2.0],
        b: [2.0, 1.0],
        tolerance: EXAMPLE_TOL,
        entries,
        notes: vec![
            "the reference values for wlog_harm and wlog_geom appear with their labels exchanged: \
             computed wlog_harm matches the value printed for wlog_geom and vice versa"
                .into(),
        ],
        holds,
        runtime: start.elapsed(),
    })
}
