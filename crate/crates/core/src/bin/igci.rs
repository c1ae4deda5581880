use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::warn;
use serde::Serialize;

use igci::io::{
    align_lag, evaluate_manifest, lagged_overlap, load_columns, load_pair, DecisionRecord, Emitter,
    LoadError, OutputFormat, PairsManifest,
};
use igci::simulation::{
    run_grid, run_sine, substream, verify_noise_bound, BoundInput, GridConfig, NoiseKind,
    NoiseSpec, SineConfig, DEFAULT_WIDTH,
};
use igci::trace::{infer_linear_direction, TraceOptions};
use igci::{
    igci_score, orthogonality, random_density, Direction, Error, EstimatorKind, MultiSample,
    ReferenceFamily, SamplePair,
};

#[derive(Parser)]
#[command(
    name = "igci",
    version,
    about = "Infer causal direction from deterministic bivariate relations"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Reference measure: uniform (rescale to [0,1]) or gaussian (standardize).
    #[arg(long, global = true, default_value = "uniform", value_parser = parse_reference)]
    reference: ReferenceFamily,
    /// Estimator: entropy (spacings) or slope.
    #[arg(long, global = true, default_value = "entropy")]
    estimator: EstimatorKind,
    /// Random seed for simulation and verification.
    #[arg(long, global = true, env = "IGCI_SEED", default_value_t = 0)]
    seed: u64,
    /// Output format: json (one object per line) or tsv.
    #[arg(long, global = true, default_value = "json")]
    format: OutputFormat,
}

fn parse_reference(s: &str) -> Result<ReferenceFamily, String> {
    match s.parse::<ReferenceFamily>() {
        Ok(r @ (ReferenceFamily::UniformUnit | ReferenceFamily::Gaussian)) => Ok(r),
        _ => Err(format!("expected uniform or gaussian, got '{s}'")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Score one pair of columns from a data file.
    Infer {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        x_col: usize,
        #[arg(long, default_value_t = 1)]
        y_col: usize,
        /// Identifier in the output record; defaults to the file name.
        #[arg(long)]
        id: Option<String>,
    },
    /// Score every pair listed in a manifest.
    Pairs {
        manifest: PathBuf,
        /// Emit only the summary record instead of one record per entry.
        #[arg(long)]
        summary: bool,
    },
    /// Run the synthetic benchmark grid, or the sine perturbation experiment.
    Simulate(SimulateArgs),
    /// Decide the direction between two linearly related vector variables.
    Tracedir {
        file: PathBuf,
        /// Columns of the first variable, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        x_cols: Vec<usize>,
        /// Columns of the second variable, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        y_cols: Vec<usize>,
        /// Fit the reverse model by regression instead of inverting the forward fit.
        #[arg(long)]
        refit: bool,
    },
    /// Find the shift between two time series that maximizes correlation.
    Align {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        a_col: usize,
        #[arg(long, default_value_t = 1)]
        b_col: usize,
        /// Largest shift searched; defaults to 10% of the series length.
        #[arg(long)]
        max_lag: Option<usize>,
        /// Also score the aligned series as a pair.
        #[arg(long)]
        infer: bool,
    },
    /// Numerical checks of the underlying information-theoretic identities.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// Run the sine perturbation experiment instead of the grid.
    #[arg(long)]
    sine: bool,
    /// Noise distribution: none, uniform, normal or laplace.
    #[arg(long, default_value = "none")]
    noise: NoiseKind,
    /// Noise level.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Sample size per repetition.
    #[arg(long, short, default_value_t = 1000)]
    m: usize,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    /// Width of the input densities.
    #[arg(long, default_value_t = DEFAULT_WIDTH)]
    sigma: f64,
    /// Score (effect, cause) instead of (cause, effect).
    #[arg(long)]
    swap: bool,
    /// Sine amplitude.
    #[arg(long, default_value_t = 0.005)]
    epsilon: f64,
    /// Sine frequency.
    #[arg(long, default_value_t = 40.0)]
    omega: f64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the relative-entropy orthogonality identity on random densities.
    Divergence {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Number of support points.
        #[arg(long, default_value_t = 10)]
        support: usize,
    },
    /// Check the entropy growth bound under added Gaussian noise.
    NoiseBound {
        /// Built-in input (gaussian, uniform, bimodal); all of them if omitted.
        #[arg(long, conflicts_with = "file")]
        input: Option<BoundInput>,
        /// Read the input sample from a column of this file instead.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        col: usize,
        #[arg(long, short, default_value_t = 100_000)]
        m: usize,
        /// Noise variances, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,1")]
        sigmas: Vec<f64>,
    },
}

/// An error with the process exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

const USAGE: u8 = 1;
const DATA: u8 = 2;
const NUMERIC: u8 = 3;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_) | Error::InvalidReference(_) => USAGE,
            Error::SingularCovariance
            | Error::NotPositiveDefinite
            | Error::SingularFit(_)
            | Error::NonPositiveTrace(_)
            | Error::SamplingStalled(_)
            | Error::Domain(_) => NUMERIC,
            _ => DATA,
        };
        Self {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Data(inner) => inner.into(),
            other => Self {
                code: DATA,
                msg: other.to_string(),
            },
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: NUMERIC,
            msg: format!("writing output: {e}"),
        }
    }
}

type Out = Emitter<io::BufWriter<io::StdoutLock<'static>>>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = Emitter::new(io::BufWriter::new(io::stdout().lock()), cli.common.format);
    let result = run(cli.command, &cli.common, &mut out).and_then(|()| Ok(out.flush()?));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = out.flush();
            eprintln!("igci: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, c: &Common, out: &mut Out) -> Result<(), Failure> {
    match command {
        Command::Infer {
            file,
            x_col,
            y_col,
            id,
        } => {
            let loaded = load_pair(&file, x_col, y_col)?;
            let report = igci_score(&loaded.pair, c.reference, c.estimator)?;
            let id = id.unwrap_or_else(|| display_name(&file));
            out.emit(&DecisionRecord::new(id, &report))?;
        }
        Command::Pairs { manifest, summary } => pairs(&manifest, summary, c, out)?,
        Command::Simulate(args) => simulate(&args, c, out)?,
        Command::Tracedir {
            file,
            x_cols,
            y_cols,
            refit,
        } => tracedir(&file, &x_cols, &y_cols, refit, out)?,
        Command::Align {
            file,
            a_col,
            b_col,
            max_lag,
            infer,
        } => align(&file, a_col, b_col, max_lag, infer, c, out)?,
        Command::Verify {
            check: VerifyCommand::Divergence { trials, support },
        } => divergence_identity(trials, support, c.seed, out)?,
        Command::Verify {
            check:
                VerifyCommand::NoiseBound {
                    input,
                    file,
                    col,
                    m,
                    sigmas,
                },
        } => noise_bound(input, file.as_deref(), col, m, &sigmas, c.seed, out)?,
    }
    Ok(())
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Serialize)]
struct PairRecord {
    id: String,
    c_xy: Option<f64>,
    c_yx: Option<f64>,
    direction: Direction,
    estimator: EstimatorKind,
    reference: ReferenceFamily,
    m_used: Option<usize>,
    truth: Option<Direction>,
    weight: f64,
    correct: Option<bool>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SummaryRecord {
    entries: usize,
    decisions_pct: f64,
    accuracy_pct: Option<f64>,
    errors: usize,
}

fn pairs(path: &Path, summary_only: bool, c: &Common, out: &mut Out) -> Result<(), Failure> {
    let manifest = PairsManifest::load(path)?;
    let summary = evaluate_manifest(&manifest, c.reference, c.estimator);
    let errors = summary.entries.iter().filter(|e| e.error.is_some()).count();
    if !summary_only {
        for e in &summary.entries {
            if let Some(msg) = &e.error {
                warn!("{}: {msg}", e.id);
            }
            out.emit(&PairRecord {
                id: e.id.clone(),
                c_xy: e.report.map(|r| r.c_xy),
                c_yx: e.report.map(|r| r.c_yx),
                direction: e.direction(),
                estimator: c.estimator,
                reference: c.reference,
                m_used: e.report.map(|r| r.m_used),
                truth: e.truth,
                weight: e.weight,
                correct: e.correct,
                error: e.error.clone(),
            })?;
        }
    }
    let rec = SummaryRecord {
        entries: summary.entries.len(),
        decisions_pct: summary.decisions_pct,
        accuracy_pct: summary.accuracy_pct,
        errors,
    };
    if summary_only {
        out.emit(&rec)?;
    } else {
        let acc = rec
            .accuracy_pct
            .map_or("n/a".to_string(), |a| format!("{a:.1}%"));
        eprintln!(
            "{} entries, decisions {:.1}%, accuracy {acc}, {errors} errors",
            rec.entries, rec.decisions_pct
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct GridRecord {
    cell: String,
    input: char,
    mechanism: char,
    noise: &'static str,
    lambda: f64,
    correct: usize,
    wrong: usize,
    undecided: usize,
    accuracy_pct: f64,
}

#[derive(Serialize)]
struct SineRecord {
    dist: String,
    correct: usize,
    wrong: usize,
    undecided: usize,
    accuracy_pct: f64,
}

fn simulate(a: &SimulateArgs, c: &Common, out: &mut Out) -> Result<(), Failure> {
    if a.sine {
        let cfg = SineConfig {
            epsilon: a.epsilon,
            omega: a.omega,
            m: a.m,
            repetitions: a.reps,
            estimator: c.estimator,
            reference: c.reference,
            seed: c.seed,
            ..SineConfig::default()
        };
        for r in run_sine(&cfg)? {
            out.emit(&SineRecord {
                dist: r.label,
                correct: r.tally.correct,
                wrong: r.tally.wrong,
                undecided: r.tally.undecided,
                accuracy_pct: r.accuracy_pct,
            })?;
        }
        return Ok(());
    }
    let cfg = GridConfig {
        noise: NoiseSpec::new(a.noise, a.lambda)?,
        m: a.m,
        repetitions: a.reps,
        estimator: c.estimator,
        reference: c.reference,
        seed: c.seed,
        sigma: a.sigma,
        swap_roles: a.swap,
    };
    for cell in run_grid(&cfg)?.cells {
        out.emit(&GridRecord {
            cell: cell.label(),
            input: cell.input.letter(),
            mechanism: cell.mechanism.letter(),
            noise: a.noise.name(),
            lambda: a.lambda,
            correct: cell.tally.correct,
            wrong: cell.tally.wrong,
            undecided: cell.tally.undecided,
            accuracy_pct: cell.accuracy_pct,
        })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct TraceRecord {
    direction: Direction,
    delta_xy: f64,
    delta_yx: f64,
    dim: usize,
    rows: usize,
    relative_residual: f64,
    poor_fit: bool,
}

fn multi(columns: &[Vec<f64>]) -> Result<MultiSample, Error> {
    let rows = columns.first().map_or(0, Vec::len);
    let data = (0..rows)
        .flat_map(|i| columns.iter().map(move |col| col[i]))
        .collect();
    MultiSample::from_row_major(data, rows, columns.len())
}

fn tracedir(
    file: &Path,
    x_cols: &[usize],
    y_cols: &[usize],
    refit: bool,
    out: &mut Out,
) -> Result<(), Failure> {
    let cols: Vec<usize> = x_cols.iter().chain(y_cols).copied().collect();
    let loaded = load_columns(file, &cols)?;
    let (xs, ys) = loaded.columns.split_at(x_cols.len());
    let (x, y) = (multi(xs)?, multi(ys)?);
    let opts = TraceOptions {
        refit_reverse: refit,
        ..TraceOptions::default()
    };
    let inf = infer_linear_direction(&x, &y, &opts)?;
    out.emit(&TraceRecord {
        direction: inf.direction,
        delta_xy: inf.delta_xy,
        delta_yx: inf.delta_yx,
        dim: inf.model.dim,
        rows: x.rows(),
        relative_residual: inf.model.relative_residual,
        poor_fit: inf.poor_fit,
    })?;
    Ok(())
}

#[derive(Serialize)]
struct AlignRecord {
    lag: i64,
    correlation: f64,
    overlap_length: usize,
    low_correlation: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    decision: Option<DecisionRecord>,
}

fn align(
    file: &Path,
    a_col: usize,
    b_col: usize,
    max_lag: Option<usize>,
    infer: bool,
    c: &Common,
    out: &mut Out,
) -> Result<(), Failure> {
    let loaded = load_columns(file, &[a_col, b_col])?;
    let (a, b) = (&loaded.columns[0], &loaded.columns[1]);
    let max_lag = max_lag.unwrap_or(a.len() / 10);
    let al = align_lag(a, b, max_lag)?;
    if al.low_correlation() {
        warn!(
            "best correlation {:.3} at lag {} is weak",
            al.correlation, al.lag
        );
    }
    let decision = if infer {
        let (sa, sb) = lagged_overlap(a, b, al.lag);
        let pair = SamplePair::new(sa.to_vec(), sb.to_vec())?;
        let report = igci_score(&pair, c.reference, c.estimator)?;
        Some(DecisionRecord::new(display_name(file), &report))
    } else {
        None
    };
    out.emit(&AlignRecord {
        lag: al.lag,
        correlation: al.correlation,
        overlap_length: al.overlap_length,
        low_correlation: al.low_correlation(),
        decision,
    })?;
    Ok(())
}

#[derive(Serialize)]
struct DivergenceRecord {
    trials: usize,
    support: usize,
    max_discrepancy: f64,
    tolerance: f64,
    passed: bool,
}

fn divergence_identity(
    trials: usize,
    support: usize,
    seed: u64,
    out: &mut Out,
) -> Result<(), Failure> {
    const TOL: f64 = 1e-10;
    if support < 1 {
        return Err(Error::InvalidParameter("support must have at least one point".into()).into());
    }
    let mut rng = substream(seed, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let q = random_density(support, &mut rng);
        let r = random_density(support, &mut rng);
        let s = random_density(support, &mut rng);
        worst = worst.max(orthogonality(&q, &r, &s)?.discrepancy());
    }
    out.emit(&DivergenceRecord {
        trials,
        support,
        max_discrepancy: worst,
        tolerance: TOL,
        passed: worst <= TOL,
    })?;
    Ok(())
}

#[derive(Serialize)]
struct BoundRecord {
    input: String,
    sigma: f64,
    entropy_clean: f64,
    entropy_noisy: f64,
    fisher: f64,
    bound: f64,
    gap: f64,
    holds: bool,
}

const BOUND_TOL: f64 = 0.05;

fn noise_bound(
    input: Option<BoundInput>,
    file: Option<&Path>,
    col: usize,
    m: usize,
    sigmas: &[f64],
    seed: u64,
    out: &mut Out,
) -> Result<(), Failure> {
    let samples: Vec<(String, Vec<f64>)> = match file {
        Some(path) => {
            let mut loaded = load_columns(path, &[col])?;
            vec![(display_name(path), loaded.columns.remove(0))]
        }
        None => input
            .map_or(BoundInput::ALL.to_vec(), |k| vec![k])
            .into_iter()
            .map(|k| (k.name().to_string(), k.sample(m, seed)))
            .collect(),
    };
    for (name, x) in samples {
        for level in verify_noise_bound(&x, sigmas, seed)? {
            out.emit(&BoundRecord {
                input: name.clone(),
                sigma: level.sigma,
                entropy_clean: level.entropy_clean,
                entropy_noisy: level.entropy_noisy,
                fisher: level.fisher,
                bound: level.bound,
                gap: level.gap,
                holds: level.holds(BOUND_TOL),
            })?;
        }
    }
    Ok(())
}
