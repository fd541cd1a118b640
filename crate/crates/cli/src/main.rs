use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use opmean::ensemble::{
    linspace, paper_example, run_ensemble, run_sweep, EnsembleConfig, EnsembleReport, Execution, PairSource,
    SweepConfig, SweepReport, DEFAULT_SEED, SCHEMA,
};
use opmean::hermat::{require_positive_definite, HermitianMatrix, MatrixFile, TestFunction};
use opmean::means::{compute_mean, MeanKind};
use opmean::quad::QuadratureSpec;
use opmean::registry::{Params, DEFAULT_TOL};

/// Weighted logarithmic operator means and Hermite-Hadamard type chains on Hermitian matrices.
#[derive(Parser)]
#[command(name = "opmean", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a mean of two matrices read from JSON files.
    Mean(MeanArgs),
    /// Evaluate chains over a seeded random ensemble.
    Verify(VerifyArgs),
    /// Evaluate one chain over a parameter grid on a fixed pair.
    Sweep(SweepArgs),
    /// Reproduce the three weighted logarithmic means on diag(1,2), diag(2,1) at λ = 3/4.
    PaperExample(OutputArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeanArgs {
    /// nabla, harm, sharp, logm, pal_log, wlog_harm or wlog_geom.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SourceArgs {
    /// Matrix dimensions, cycled over trials.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,6")]
    dim: Vec<usize>,
    /// Condition-number cap of the random matrices.
    #[arg(long, default_value_t = 100.0)]
    cond: f64,
    /// Use this pair instead of random matrices (requires --b).
    #[arg(long, requires = "b")]
    a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    #[arg(long, env = "OPMEAN_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Relative Loewner tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Palette members for chains that take a test function (default: all).
    #[arg(long = "f", value_delimiter = ',')]
    functions: Vec<String>,
    /// Fixed parameter values, `name=value`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    params: Vec<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Chain ids, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    chain: Vec<String>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    chain: String,
    /// `name=lo:hi:count`, repeatable; the first grid varies slowest.
    #[arg(long, required = true)]
    grid: Vec<String>,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

/// Failure modes with distinct exit statuses.
enum Failure {
    /// Bad input or configuration: exit 2.
    Usage(String),
    /// The run completed but some inequality failed: exit 1.
    Violated,
}

impl From<opmean::Error> for Failure {
    fn from(e: opmean::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mean(args) => cmd_mean(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::PaperExample(out) => cmd_paper_example(out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_matrix(path: &Path, name: &str) -> Result<HermitianMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{name}: cannot read {}: {e}", path.display())))?;
    HermitianMatrix::from_json(&text).map_err(|e| usage(format!("{name} ({}): {e}", path.display())))
}

fn emit(output: &OutputArgs, body: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| usage(format!("cannot write to stdout: {e}")))
        }
    }
}

fn cmd_mean(args: MeanArgs) -> Result<(), Failure> {
    let kind: MeanKind = args.kind.parse()?;
    let lambda = match (kind.is_weighted(), args.lambda) {
        (true, Some(l)) => l,
        (true, None) => return Err(usage(format!("--lambda is required for '{kind}'"))),
        (false, l) => l.unwrap_or(0.5),
    };
    kind.validate_weight(lambda)?;
    let a = read_matrix(&args.a, "A")?;
    let b = read_matrix(&args.b, "B")?;
    require_positive_definite("A", &a)?;
    require_positive_definite("B", &b)?;
    let m = compute_mean(kind, &a, &b, lambda, &QuadratureSpec::default())?;
    let report = json!({
        "schema": SCHEMA,
        "command": "mean",
        "kind": kind,
        "lambda": kind.is_weighted().then_some(lambda),
        "result": MatrixFile::from(&m),
    });
    emit(&args.output, &(serde_json::to_string_pretty(&report).expect("json") + "\n"))
}

fn parse_params(items: &[String]) -> Result<Params, Failure> {
    let mut out = Params::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("parameter '{item}' is not of the form name=value")))?;
        let v: f64 = v.trim().parse().map_err(|_| usage(format!("parameter '{item}': bad number")))?;
        if out.insert(k.trim().to_string(), v).is_some() {
            return Err(usage(format!("parameter '{k}' given twice")));
        }
    }
    Ok(out)
}

fn parse_grid(item: &str) -> Result<(String, Vec<f64>), Failure> {
    let bad = || usage(format!("grid '{item}' is not of the form name=lo:hi:count"));
    let (name, spec) = item.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(usage(format!("grid '{item}' is empty")));
    }
    Ok((name.trim().to_string(), linspace(lo, hi, n)))
}

struct Source {
    source: PairSource,
    seed: u64,
    tol: f64,
    functions: Option<Vec<TestFunction>>,
    params: Params,
}

fn resolve_source(args: &SourceArgs) -> Result<Source, Failure> {
    let source = match (&args.a, &args.b) {
        (Some(a), Some(b)) => PairSource::fixed(read_matrix(a, "A")?, read_matrix(b, "B")?)?,
        _ => PairSource::random(args.dim.clone(), args.cond),
    };
    let functions = if args.functions.is_empty() {
        None
    } else {
        Some(
            args.functions
                .iter()
                .map(|f| f.parse::<TestFunction>())
                .collect::<Result<Vec<_>, _>>()?,
        )
    };
    Ok(Source {
        source,
        seed: args.seed,
        tol: args.tol,
        functions,
        params: parse_params(&args.params)?,
    })
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

fn write_csv(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| usage(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn verify_csv(report: &EnsembleReport) -> Result<String, Failure> {
    let width = report.cases.iter().map(|c| c.margins.len()).max().unwrap_or(0);
    let mut header: Vec<String> = ["chain", "trial", "pair_seed", "dims", "function", "params", "holds", "relative_worst_margin"]
        .map(String::from)
        .to_vec();
    header.extend((1..=width).map(|k| format!("margin_{k}")));
    header.push("error".into());
    let rows = report
        .cases
        .iter()
        .map(|c| {
            let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let mut r = vec![
                c.chain.clone(),
                c.trial.to_string(),
                c.pair_seed.to_string(),
                c.dims.to_string(),
                c.function.clone().unwrap_or_default(),
                params.join(";"),
                c.holds.to_string(),
                c.relative_worst_margin.map(fmt_num).unwrap_or_default(),
            ];
            r.extend((0..width).map(|k| c.margins.get(k).copied().map(fmt_num).unwrap_or_default()));
            r.push(c.error.clone().unwrap_or_default());
            r
        })
        .collect();
    write_csv(header, rows)
}

fn sweep_csv(report: &SweepReport) -> Result<String, Failure> {
    let names: Vec<String> = report
        .rows
        .first()
        .map(|r| r.params.keys().cloned().collect())
        .unwrap_or_default();
    let gaps = report.rows.iter().map(|r| r.gaps.len()).max().unwrap_or(0);
    let widths = report.rows.iter().map(|r| r.widths.len()).max().unwrap_or(0);
    let mut header = vec!["chain".to_string(), "function".to_string()];
    header.extend(names.iter().cloned());
    header.extend(["holds", "worst_margin", "relative_worst_margin"].map(String::from));
    header.extend((1..=gaps).map(|k| format!("gap_{k}")));
    header.extend((1..=widths).map(|k| format!("width_{k}")));
    header.push("error".into());
    let rows = report
        .rows
        .iter()
        .map(|row| {
            let mut r = vec![report.config.chain.clone(), row.function.clone().unwrap_or_default()];
            r.extend(names.iter().map(|n| row.params[n].to_string()));
            r.push(row.holds.to_string());
            r.push(fmt_num(row.worst_margin));
            r.push(fmt_num(row.relative_worst_margin));
            r.extend((0..gaps).map(|k| row.gaps.get(k).copied().map(fmt_num).unwrap_or_default()));
            r.extend((0..widths).map(|k| row.widths.get(k).copied().map(fmt_num).unwrap_or_default()));
            r.push(row.error.clone().unwrap_or_default());
            r
        })
        .collect();
    write_csv(header, rows)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let src = resolve_source(&args.source)?;
    let config = EnsembleConfig {
        chains: args.chain.clone(),
        trials: args.trials,
        seed: src.seed,
        tol: src.tol,
        source: src.source,
        functions: src.functions,
        params: src.params,
    };
    let report = run_ensemble(&config, Execution::Parallel)?;
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => verify_csv(&report)?,
    };
    emit(&args.output, &body)?;
    for s in &report.summaries {
        eprintln!(
            "{}: {} cases, {} failures ({} errors), worst relative margin {:e}",
            s.id, s.cases, s.failures, s.errors, s.worst_relative_margin
        );
    }
    eprintln!("runtime {:.3} s", report.runtime.as_secs_f64());
    if report.failures > 0 {
        Err(Failure::Violated)
    } else {
        Ok(())
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let src = resolve_source(&args.source)?;
    let grid = args.grid.iter().map(|g| parse_grid(g)).collect::<Result<Vec<_>, _>>()?;
    let config = SweepConfig {
        chain: args.chain.clone(),
        grid,
        params: src.params,
        functions: src.functions,
        source: src.source,
        seed: src.seed,
        tol: src.tol,
    };
    let report = run_sweep(&config, Execution::Parallel)?;
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => sweep_csv(&report)?,
    };
    emit(&args.output, &body)?;
    eprintln!(
        "{}: {} points, {} failures ({} errors), runtime {:.3} s",
        report.config.chain,
        report.rows.len(),
        report.failures,
        report.errors,
        report.runtime.as_secs_f64()
    );
    if report.failures > 0 {
        Err(Failure::Violated)
    } else {
        Ok(())
    }
}

fn cmd_paper_example(output: OutputArgs) -> Result<(), Failure> {
    let report = paper_example()?;
    emit(&output, &(report.to_json() + "\n"))?;
    eprintln!("{:<10} {:<6} {:>12} {:>12} {:>10} {:>11}", "mean", "entry", "computed", "oracle", "reference", "deviation");
    for e in &report.entries {
        eprintln!(
            "{:<10} {:<6} {:>12.6} {:>12.6} {:>10.4} {:>11.2e}",
            e.mean, e.entry, e.computed, e.oracle, e.reference, e.deviation
        );
    }
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    if report.holds {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}
