//! `eagm`: point clouds of multivalued elliptic integrals, and checks that
//! they fall on the predicted lattices.

mod config;
mod output;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use eagm_core::complex::c;
use eagm_core::lattice::DEFAULT_FIT_TOL;
use eagm_core::magm::{magm_negative_sweep, EquivalenceReport, NegativeOutcome};
use eagm_core::oracle::landen_check;
use eagm_core::{
    enumerate_cloud, fit_cloud, magm_equivalence, predict_locus, FitReport, FunctionKind, Locus, ReferenceSet,
};
use serde::Serialize;

use config::{CommonArgs, Format, OutputArgs, RunConfig, UsageError, DEFAULT_B};
use output::Record;

/// Row-by-row MAGM agreement required by `magm-check`.
const MAGM_ROW_TOL: f64 = 1e-12;
/// MAGM limit agreement with the oracle ratio E/K.
const MAGM_LIMIT_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "eagm", version, about = "Multivalued AGM point clouds for elliptic integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complete integral K over sigma masks, both signs of b.
    FillK(FillArgs),
    /// Incomplete integral F over sigma x delta masks.
    FillF(FillArgs),
    /// Complete integral E over sigma masks.
    FillE(FillArgs),
    /// The ratio E/K over sigma masks.
    FillN(FillArgs),
    /// Jacobi Zeta over sigma x delta x gamma masks.
    FillZ(FillArgs),
    /// Jacobi Zeta over delta masks with gamma = delta << 1.
    FillZRestricted(FillArgs),
    /// Fit a cloud to its predicted locus and print the report as JSON.
    Verify(VerifyArgs),
    /// MAGM against the Gauss series, plus the negative-sign sweep.
    MagmCheck(MagmArgs),
    /// Print the reference complete integrals and identity residuals.
    Ref(RefArgs),
}

#[derive(Debug, Args)]
struct FillArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// K, F, E, N or z-restricted.
    #[arg(long)]
    kind: FunctionKind,
    #[arg(long, default_value_t = DEFAULT_FIT_TOL)]
    tol: f64,
    #[command(flatten)]
    common: CommonArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
struct MagmArgs {
    #[arg(long, default_value_t = DEFAULT_B)]
    b: f64,
    #[arg(long, default_value_t = 20)]
    rows: usize,
    /// Sweep every negative-sign mask of this many bits.
    #[arg(long, default_value_t = 4)]
    width: u32,
}

#[derive(Debug, Args)]
struct RefArgs {
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    k: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            if let Some(usage) = err.downcast_ref::<UsageError>() {
                eprintln!("error: {usage}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {err:#}");
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::FillK(a) => fill(FunctionKind::K, a),
        Command::FillF(a) => fill(FunctionKind::F, a),
        Command::FillE(a) => fill(FunctionKind::E, a),
        Command::FillN(a) => fill(FunctionKind::N, a),
        Command::FillZ(a) => fill(FunctionKind::Z, a),
        Command::FillZRestricted(a) => fill(FunctionKind::ZRestricted, a),
        Command::Verify(a) => verify(a),
        Command::MagmCheck(a) => magm_check(a),
        Command::Ref(a) => reference(a),
    }
}

fn resolve(kind: FunctionKind, common: &CommonArgs) -> Result<RunConfig> {
    let cfg = RunConfig::resolve(kind, common)?;
    for w in &cfg.warnings {
        eprintln!("warning: {w}");
    }
    Ok(cfg)
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn fill(kind: FunctionKind, args: FillArgs) -> Result<ExitCode> {
    let cfg = resolve(kind, &args.common)?;
    let points = enumerate_cloud(&cfg.request())?;
    let records: Vec<Record> = points.iter().map(Record::from).collect();
    let text = match args.output.format {
        Format::Csv => output::to_csv(&records),
        Format::Json => output::to_json(&records)?,
    };
    emit(&text, args.output.out.as_deref())?;
    if let Some(svg) = &args.output.svg {
        let b = cfg.params.b();
        let title = format!("{} multivalues, b = {}, sinphi = {}", kind, b.re, cfg.sinphi);
        fs::write(svg, output::to_svg(&records, &title)).with_context(|| format!("writing {}", svg.display()))?;
    }
    let flagged = points.iter().filter(|p| p.ill_conditioned).count();
    eprintln!("{} points, {} ill-conditioned", points.len(), flagged);
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    kind: FunctionKind,
    b: f64,
    sinphi: f64,
    both_signs: bool,
    locus: Locus,
    report: FitReport,
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    if args.kind == FunctionKind::Z {
        return Err(UsageError("the unrestricted Z cloud has no predicted locus; use z-restricted".into()).into());
    }
    if !(args.tol > 0.0 && args.tol.is_finite()) {
        return Err(UsageError(format!("--tol must be positive, got {}", args.tol)).into());
    }
    let cfg = resolve(args.kind, &args.common)?;
    let refs = ReferenceSet::from_complement(cfg.params.b())?;
    let locus = predict_locus(cfg.kind, &refs, cfg.sinphi, cfg.both_signs)?;
    let points = enumerate_cloud(&cfg.request())?;
    let report = fit_cloud(&points, &locus, args.tol);
    let pass = report.pass;
    eprintln!(
        "{} {}: {} points, max residual {:.3e}, {} flagged excluded",
        if pass { "PASS" } else { "FAIL" },
        cfg.kind,
        points.len(),
        report.max_residual,
        report.flagged_excluded
    );
    let out = VerifyOutput {
        kind: cfg.kind,
        b: cfg.params.b().re,
        sinphi: cfg.sinphi,
        both_signs: cfg.both_signs,
        locus,
        report,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(&text, args.out.as_deref())?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[derive(Debug, Serialize)]
struct MagmOutput {
    equivalence: EquivalenceReport,
    pass: bool,
    negative: Vec<NegativeOutcome>,
}

fn magm_check(args: MagmArgs) -> Result<ExitCode> {
    if !(args.b > 0.0 && args.b < 1.0) {
        return Err(UsageError(format!("--b must lie in (0, 1), got {}", args.b)).into());
    }
    if args.width > 16 {
        return Err(UsageError(format!("--width {} is too wide; at most 16", args.width)).into());
    }
    let equivalence = magm_equivalence(args.b, args.rows)?;
    let negative = magm_negative_sweep(args.b, args.width, args.rows)?;
    let pass = equivalence.max_row_deviation < MAGM_ROW_TOL && equivalence.limit_error < MAGM_LIMIT_TOL;
    eprintln!(
        "{}: row deviation {:.3e}, limit error {:.3e}, {} of {} negative masks converged",
        if pass { "PASS" } else { "FAIL" },
        equivalence.max_row_deviation,
        equivalence.limit_error,
        negative.iter().filter(|o| o.converged).count(),
        negative.len()
    );
    let mut text = serde_json::to_string_pretty(&MagmOutput {
        equivalence,
        pass,
        negative,
    })?;
    text.push('\n');
    emit(&text, None)?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[derive(Debug, Serialize)]
struct RefOutput {
    refs: ReferenceSet,
    legendre_residual: f64,
    /// Both Landen product residuals, for real `0 < b < 1`.
    landen_residuals: Option<(f64, f64)>,
}

fn reference(args: RefArgs) -> Result<ExitCode> {
    let refs = match (args.b, args.k) {
        (Some(b), k) => {
            if k.is_some() {
                eprintln!("warning: both --b and --k given; using --b");
            }
            ReferenceSet::from_complement(c(b, 0.0))?
        }
        (None, Some(k)) => ReferenceSet::from_modulus(c(k, 0.0))?,
        (None, None) => ReferenceSet::from_complement(c(DEFAULT_B, 0.0))?,
    };
    let b = refs.b;
    let landen_residuals = if b.im == 0.0 && b.re > 0.0 && b.re < 1.0 {
        Some(landen_check(b.re)?)
    } else {
        None
    };
    let out = RefOutput {
        refs,
        legendre_residual: refs.legendre_residual(),
        landen_residuals,
    };
    let mut text = serde_json::to_string_pretty(&out)?;
    text.push('\n');
    emit(&text, None)?;
    Ok(ExitCode::SUCCESS)
}
