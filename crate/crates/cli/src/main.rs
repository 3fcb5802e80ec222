//! bilimit — classify the convergence of double series and double integrals
//! over the first quadrant, and verify successive integration for regularly
//! convergent integrals.
//!
//! Exit codes: 0 = analysis completed (whatever the verdicts), 2 = input
//! error, 3 = the regular-convergence hypothesis of `fubini-check` was
//! rejected.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bilimit_core::classify::{
    classify_absolute, classify_pringsheim, classify_regular, row_col_verdicts,
    successive_sum_check, ClassifierConfig, ClassifyError, RowColReport, SuccessiveSumReport,
};
use bilimit_core::fubini::{
    characterize_regular, classify_integral_pringsheim, classify_integral_regular, fubini_check,
    FubiniConfig, FubiniError, IntegralClassifierConfig, RegularCharacterization,
};
use bilimit_core::integral::horizontal_strip;
use bilimit_core::series::PrefixSumTable;
use bilimit_core::verdict::Verdict;
use bilimit_core::zoo::{fixture, FixtureId};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use input::{build_table, resolve_integrand, resolve_source};
use output::{curve_csv, emit_json, grid_csv, write_file, Envelope, TOOL_VERSION};

#[derive(Debug)]
pub enum CliError {
    /// Unusable input or configuration: exit 2.
    Input(String),
    /// Unexpected internal failure: exit 1.
    Internal(String),
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "bilimit",
    version,
    about = "Convergence analysis for double series and double integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a double series: Pringsheim, regular and absolute
    /// convergence plus row/column verdicts.
    AnalyzeSeries(AnalyzeSeriesArgs),
    /// Classify a double integral: Pringsheim and regular convergence plus
    /// the strip-uniformity characterization.
    AnalyzeIntegral(AnalyzeIntegralArgs),
    /// Verify successive integration for a regularly convergent integral.
    FubiniCheck(FubiniCheckArgs),
    /// Export partial sums, partial integrals or strip integrals as CSV.
    GridExport(GridExportArgs),
    /// List the built-in fixtures with their expected verdicts.
    ListFixtures,
}

#[derive(Args)]
struct AnalyzeSeriesArgs {
    /// Built-in fixture id (ex1..ex5, fig6, ex6).
    #[arg(long)]
    fixture: Option<FixtureId>,
    /// Sparse CSV of terms with header j,k,re,im.
    #[arg(long)]
    terms: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    #[arg(long, default_value_t = 128)]
    cap_m: usize,
    #[arg(long, default_value_t = 128)]
    cap_n: usize,
    #[arg(long, default_value_t = 4)]
    probe_floor: usize,
    #[arg(long, default_value_t = 256)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Examine rows/columns only up to this index (default: the caps).
    #[arg(long)]
    report_range: Option<usize>,
    /// Include wall-clock timing in the report (breaks byte-for-byte
    /// reproducibility of the output).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct AnalyzeIntegralArgs {
    /// Built-in fixture id (ex1..ex5, fig6, ex6, ex7).
    #[arg(long)]
    fixture: Option<FixtureId>,
    /// Sparse CSV of unit-cell values with header j,k,re,im.
    #[arg(long)]
    cells: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-2)]
    eps: f64,
    #[arg(long, default_value_t = 1024.0)]
    x_cap: f64,
    #[arg(long, default_value_t = 1024.0)]
    y_cap: f64,
    #[arg(long, default_value_t = 2.0)]
    grid: f64,
    #[arg(long, default_value_t = 128)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct FubiniCheckArgs {
    /// Built-in fixture id (typically ex6 or ex7).
    #[arg(long)]
    fixture: Option<FixtureId>,
    /// Sparse CSV of unit-cell values with header j,k,re,im.
    #[arg(long)]
    cells: Option<PathBuf>,
    /// Tolerance scale for the iterated-limit residuals (the report allows
    /// 4x this value).
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    /// Epsilon for the regular-convergence hypothesis classifier.
    #[arg(long, default_value_t = 1e-2)]
    classify_eps: f64,
    #[arg(long, default_value_t = 1024.0)]
    x_cap: f64,
    #[arg(long, default_value_t = 1024.0)]
    y_cap: f64,
    #[arg(long, default_value_t = 2.0)]
    grid: f64,
    #[arg(long, default_value_t = 128)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the I1/I2 curve CSV files.
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum GridWhat {
    PartialSums,
    PartialIntegrals,
    Strips,
}

#[derive(Args)]
struct GridExportArgs {
    #[arg(long)]
    fixture: Option<FixtureId>,
    /// Sparse CSV of terms / unit-cell values with header j,k,re,im.
    #[arg(long)]
    terms: Option<PathBuf>,
    #[arg(long, value_enum)]
    what: GridWhat,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 8)]
    m_max: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[arg(long, default_value_t = 8.0)]
    x_max: f64,
    #[arg(long, default_value_t = 8.0)]
    y_max: f64,
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    /// Strip band lower edge (strips export).
    #[arg(long, default_value_t = 0.0)]
    strip_y: f64,
    /// Strip band upper edge (strips export).
    #[arg(long, default_value_t = 1.0)]
    strip_y1: f64,
    /// Geometric sweep factor for the strip x1 grid.
    #[arg(long, default_value_t = 2.0)]
    grid: f64,
}

fn threads_from_env() -> usize {
    match std::env::var("BILIMIT_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => n.min(64),
            _ => {
                eprintln!("warning: ignoring invalid BILIMIT_THREADS={v}");
                1
            }
        },
        Err(_) => 1,
    }
}

#[derive(Serialize)]
struct SeriesSummary {
    examined: usize,
    converge: usize,
    diverge: usize,
    inconclusive: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    first_divergent: Option<usize>,
}

impl SeriesSummary {
    fn of(verdicts: &[Verdict]) -> Self {
        let converge = verdicts.iter().filter(|v| v.is_converges()).count();
        let diverge = verdicts.iter().filter(|v| v.is_diverges()).count();
        SeriesSummary {
            examined: verdicts.len(),
            converge,
            diverge,
            inconclusive: verdicts.len() - converge - diverge,
            first_divergent: verdicts.iter().position(|v| v.is_diverges()),
        }
    }
}

#[derive(Serialize)]
struct SeriesBody {
    verdicts: SeriesVerdicts,
    #[serde(skip_serializing_if = "Option::is_none")]
    successive: Option<SuccessiveSumReport>,
}

#[derive(Serialize)]
struct SeriesVerdicts {
    pringsheim: Verdict,
    regular: Verdict,
    absolute: Verdict,
    rows: SeriesSummary,
    cols: SeriesSummary,
}

fn cmd_analyze_series(args: AnalyzeSeriesArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (input, source) = resolve_source(args.fixture, args.terms.as_deref())?;
    let cfg = ClassifierConfig {
        eps: args.eps,
        probe_floor: args.probe_floor,
        cap_m: args.cap_m,
        cap_n: args.cap_n,
        sample_budget: args.budget,
        seed: args.seed,
        report_range: args.report_range,
        ..ClassifierConfig::default()
    };
    let table = build_table(&source, cfg.cap_m, cfg.cap_n)?;
    let abs_table = PrefixSumTable::build_abs(&source, cfg.cap_m, cfg.cap_n)
        .map_err(|e| CliError::Input(e.to_string()))?;

    let pringsheim = classify_pringsheim(&table, &cfg)?;
    let regular = classify_regular(&table, &cfg)?;
    let absolute = classify_absolute(&abs_table, &cfg)?;
    let RowColReport { rows, cols } = row_col_verdicts(&source, &cfg)?;
    let successive = if regular.is_converges() {
        Some(successive_sum_check(&table, &cfg)?)
    } else {
        None
    };

    let envelope = Envelope {
        tool_version: TOOL_VERSION,
        command: "analyze-series",
        input,
        config: cfg,
        body: SeriesBody {
            verdicts: SeriesVerdicts {
                pringsheim,
                regular,
                absolute,
                rows: SeriesSummary::of(&rows),
                cols: SeriesSummary::of(&cols),
            },
            successive,
        },
        timing_ms: args.timing.then(|| started.elapsed().as_millis()),
    };
    emit_json(&envelope)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct IntegralBody {
    verdicts: IntegralVerdicts,
    characterization: RegularCharacterization,
}

#[derive(Serialize)]
struct IntegralVerdicts {
    pringsheim: Verdict,
    regular: Verdict,
}

fn map_fubini_err(e: FubiniError) -> CliError {
    match e {
        FubiniError::InvalidConfig(m) => CliError::Input(m),
        FubiniError::Integral(err) => CliError::Input(err.to_string()),
        FubiniError::HypothesisRejected { .. } => {
            CliError::Internal("unexpected hypothesis rejection".to_string())
        }
    }
}

fn cmd_analyze_integral(args: AnalyzeIntegralArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (input, integrand) =
        resolve_integrand(args.fixture, args.cells.as_deref(), args.x_cap, args.y_cap)?;
    let cfg = IntegralClassifierConfig {
        eps: args.eps,
        x_cap: args.x_cap,
        y_cap: args.y_cap,
        grid: args.grid,
        sample_budget: args.budget,
        seed: args.seed,
        threads: threads_from_env(),
    };
    let pringsheim = classify_integral_pringsheim(&integrand, &cfg).map_err(map_fubini_err)?;
    let regular = classify_integral_regular(&integrand, &cfg).map_err(map_fubini_err)?;
    let characterization = characterize_regular(&integrand, &cfg).map_err(map_fubini_err)?;

    let envelope = Envelope {
        tool_version: TOOL_VERSION,
        command: "analyze-integral",
        input,
        config: cfg,
        body: IntegralBody {
            verdicts: IntegralVerdicts {
                pringsheim,
                regular,
            },
            characterization,
        },
        timing_ms: args.timing.then(|| started.elapsed().as_millis()),
    };
    emit_json(&envelope)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct RejectionBody {
    error: &'static str,
    verdict: Verdict,
}

fn cmd_fubini_check(args: FubiniCheckArgs) -> Result<ExitCode, CliError> {
    let started = Instant::now();
    let (input, integrand) =
        resolve_integrand(args.fixture, args.cells.as_deref(), args.x_cap, args.y_cap)?;
    let cfg = FubiniConfig {
        classify: IntegralClassifierConfig {
            eps: args.classify_eps,
            x_cap: args.x_cap,
            y_cap: args.y_cap,
            grid: args.grid,
            sample_budget: args.budget,
            seed: args.seed,
            threads: threads_from_env(),
        },
        residual_eps: args.eps,
    };
    match fubini_check(&integrand, &cfg) {
        Ok(report) => {
            if let Some(dir) = &args.csv_out {
                write_file(&dir.join("i1_curve.csv"), &curve_csv("a", &report.i1_curve))?;
                write_file(&dir.join("i2_curve.csv"), &curve_csv("b", &report.i2_curve))?;
            }
            let envelope = Envelope {
                tool_version: TOOL_VERSION,
                command: "fubini-check",
                input,
                config: cfg,
                body: report,
                timing_ms: args.timing.then(|| started.elapsed().as_millis()),
            };
            emit_json(&envelope)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(FubiniError::HypothesisRejected { verdict }) => {
            let envelope = Envelope {
                tool_version: TOOL_VERSION,
                command: "fubini-check",
                input,
                config: cfg,
                body: RejectionBody {
                    error: "hypothesis_rejected",
                    verdict,
                },
                timing_ms: args.timing.then(|| started.elapsed().as_millis()),
            };
            emit_json(&envelope)?;
            Ok(ExitCode::from(3))
        }
        Err(other) => Err(map_fubini_err(other)),
    }
}

fn cmd_grid_export(args: GridExportArgs) -> Result<ExitCode, CliError> {
    match args.what {
        GridWhat::PartialSums => {
            let (_, source) = resolve_source(args.fixture, args.terms.as_deref())?;
            let table = build_table(&source, args.m_max, args.n_max)?;
            let mut rows = Vec::new();
            for m in 0..=args.m_max {
                for n in 0..=args.n_max {
                    let v = table
                        .partial_sum(m as i64, n as i64)
                        .map_err(|e| CliError::Internal(e.to_string()))?;
                    rows.push((vec![m as f64, n as f64], v));
                }
            }
            write_file(&args.out, &grid_csv("m,n,value_re,value_im", &rows))?;
        }
        GridWhat::PartialIntegrals => {
            if !args.step.is_finite() || args.step <= 0.0 {
                return Err(CliError::Input("step must be positive".to_string()));
            }
            let (_, integrand) =
                resolve_integrand(args.fixture, args.terms.as_deref(), args.x_max, args.y_max)?;
            let count = |hi: f64| (hi / args.step).round() as usize;
            let mut rows = Vec::new();
            for i in 0..=count(args.x_max) {
                let x = (i as f64 * args.step).min(args.x_max);
                for j in 0..=count(args.y_max) {
                    let y = (j as f64 * args.step).min(args.y_max);
                    let v = integrand
                        .partial_integral(x, y)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    rows.push((vec![x, y], v));
                }
            }
            write_file(&args.out, &grid_csv("x,y,value_re,value_im", &rows))?;
        }
        GridWhat::Strips => {
            if !(args.strip_y.is_finite() && args.strip_y >= 0.0 && args.strip_y1 > args.strip_y) {
                return Err(CliError::Input(
                    "strip band requires 0 <= strip_y < strip_y1".to_string(),
                ));
            }
            if !args.grid.is_finite() || args.grid <= 1.0 {
                return Err(CliError::Input("grid factor must exceed 1".to_string()));
            }
            let (_, integrand) = resolve_integrand(
                args.fixture,
                args.terms.as_deref(),
                args.x_max,
                args.strip_y1,
            )?;
            let mut rows = Vec::new();
            let mut x1 = 1.0f64.min(args.x_max);
            loop {
                let v = horizontal_strip(&integrand, x1, args.strip_y, args.strip_y1)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                rows.push((vec![x1, args.strip_y, args.strip_y1], v));
                if x1 >= args.x_max {
                    break;
                }
                x1 = (x1 * args.grid).min(args.x_max);
            }
            write_file(&args.out, &grid_csv("x1,y,y1,value_re,value_im", &rows))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FixtureEntry {
    id: FixtureId,
    title: &'static str,
    kind: &'static str,
    expected: bilimit_core::zoo::Expected,
    notes: &'static str,
}

fn cmd_list_fixtures() -> Result<ExitCode, CliError> {
    let entries: Vec<FixtureEntry> = FixtureId::ALL
        .iter()
        .map(|&id| {
            let fx = fixture(id);
            FixtureEntry {
                id,
                title: fx.title,
                kind: match id {
                    FixtureId::Ex7 => "integrand",
                    FixtureId::Ex6 => "series+integrand",
                    _ => "series",
                },
                expected: fx.expected,
                notes: fx.notes,
            }
        })
        .collect();
    emit_json(&entries)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::AnalyzeSeries(args) => cmd_analyze_series(args),
        Command::AnalyzeIntegral(args) => cmd_analyze_integral(args),
        Command::FubiniCheck(args) => cmd_fubini_check(args),
        Command::GridExport(args) => cmd_grid_export(args),
        Command::ListFixtures => cmd_list_fixtures(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::FAILURE
        }
    }
}
