//! `riesz`: constants, grid verification and sharpness runs as JSON reports.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use riesz_core::circle::HarmonicPair;
use riesz_core::constants::sharp_constant_a;
use riesz_core::extremals::{write_boundary_trace, ExtremalSpec, Variant};
use riesz_core::lemmas::{lemma_suite, LemmaGrid};
use riesz_core::minorant::{
    plurisubharmonicity_check, pointwise_check, subharmonicity_check, write_slack_landscape, LineSpec, PointwiseGrid,
    SubmeanGrid,
};
use riesz_core::report::{all_passed, Sense, VerificationReport};
use riesz_core::search::{
    ascend_ratio, curve_beta, extremal_ratio_curve, random_never_exceeds, sharpness_check, sharpness_check_at, DEFAULT_SAMPLES, EXCEED_TOL,
};
use riesz_core::{ConstantSet, Params, RieszError};

#[derive(Parser)]
#[command(name = "riesz", version, about = "Sharp weighted Riesz-type inequality: constants and numerical verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the constants at (p, b).
    Constants(Common),
    /// Pointwise minorant inequality, sub-mean checks of H and G_p.
    VerifyPointwise {
        #[command(flatten)]
        common: Common,
        /// Angle points per angle axis of the 4-D grid.
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// Scalar lemma suite (requires p < 2).
    VerifyLemmas {
        #[command(flatten)]
        common: Common,
        /// Points of the 1-D grids; 2-D and 3-D grids scale from it.
        #[arg(long, default_value_t = 2000)]
        grid: usize,
    },
    /// Extremal ratio curve and closed-form Z/X against quadrature.
    Sharpness {
        #[command(flatten)]
        common: Common,
        /// Curve endpoint; the curve must be within 5e-3 of A there.
        #[arg(long)]
        c: Option<f64>,
        /// Mixing weight of the extremal used for the CSV trace.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Randomized search, seeded ascent or the closed-form curve.
    Search {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Random)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Every check at (p, b) in one JSON report.
    ReportAll(Common),
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 1.5)]
    p: f64,
    #[arg(long, default_value_t = 2.0)]
    b: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Random,
    Ascend,
    Curve,
}

#[derive(Serialize)]
struct Output {
    #[serde(flatten)]
    constants: ConstantSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<Vec<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    best_pair: Option<HarmonicPair>,
    reports: Vec<VerificationReport>,
}

impl Output {
    fn new(params: Params) -> Self {
        Self {
            constants: ConstantSet::compute(params),
            curve: None,
            best_ratio: None,
            best_pair: None,
            reports: Vec::new(),
        }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(err: RieszError) -> anyhow::Error {
    UsageError(err.to_string()).into()
}

fn params(common: &Common) -> anyhow::Result<Params> {
    Params::new(common.p, common.b).map_err(usage)
}

fn sink(out: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn lemma_grid(points: usize) -> LemmaGrid {
    LemmaGrid {
        points_1d: points.max(8),
        points_2d: (points / 5).max(8),
        points_3d: (points / 40).max(8),
    }
}

fn minorant_reports(params: Params, grid: PointwiseGrid, seed: u64) -> Vec<VerificationReport> {
    let mut reports = pointwise_check(params, grid);
    reports.extend(subharmonicity_check(params.p(), &SubmeanGrid::default()));
    reports.push(plurisubharmonicity_check(params.p(), &LineSpec { seed, ..LineSpec::default() }));
    reports
}

fn require_json(common: &Common, what: &str) -> anyhow::Result<()> {
    if common.format == Format::Csv {
        bail!(UsageError(format!("{what} has no CSV output")));
    }
    Ok(())
}

/// Runs one subcommand; `Ok(None)` means CSV was written and there is no JSON.
fn run(cli: Cli) -> anyhow::Result<(Common, Option<Output>)> {
    match cli.command {
        Command::Constants(common) => {
            require_json(&common, "constants")?;
            let out = Output::new(params(&common)?);
            Ok((common, Some(out)))
        }
        Command::VerifyPointwise { common, grid } => {
            let params = params(&common)?;
            let grid = PointwiseGrid {
                angle_points: grid.max(4),
                ..PointwiseGrid::default()
            };
            if common.format == Format::Csv {
                write_slack_landscape(params, grid, sink(&common.out)?)?;
                return Ok((common, None));
            }
            let mut out = Output::new(params);
            out.reports = minorant_reports(params, grid, common.seed);
            Ok((common, Some(out)))
        }
        Command::VerifyLemmas { common, grid } => {
            require_json(&common, "verify-lemmas")?;
            let params = params(&common)?;
            let mut out = Output::new(params);
            out.reports = lemma_suite(params, lemma_grid(grid)).map_err(usage)?;
            Ok((common, Some(out)))
        }
        Command::Sharpness { common, c, beta } => {
            let params = params(&common)?;
            if common.format == Format::Csv {
                let c = c.unwrap_or(0.9 / params.p());
                let variant = match beta {
                    Some(beta) => Variant::Fbeta { beta },
                    None if params.is_p2() => Variant::Fbb0,
                    None => Variant::Fbeta {
                        beta: curve_beta(params).map_err(usage)?,
                    },
                };
                let spec = ExtremalSpec::new(params, c, variant).map_err(usage)?;
                write_boundary_trace(&spec, DEFAULT_SAMPLES, sink(&common.out)?)?;
                return Ok((common, None));
            }
            let mut out = Output::new(params);
            let c_end = c.unwrap_or((1.0 - 1e-3) / params.p());
            out.reports = sharpness_check_at(params, c_end).map_err(usage)?;
            let c_values: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0 * c_end).collect();
            out.curve = Some(extremal_ratio_curve(params, &c_values).map_err(usage)?);
            Ok((common, Some(out)))
        }
        Command::Search {
            common,
            mode,
            trials,
            degree,
        } => {
            require_json(&common, "search")?;
            let params = params(&common)?;
            let mut out = Output::new(params);
            match mode {
                Mode::Random => {
                    let found = random_never_exceeds(params, trials, degree, common.seed).map_err(usage)?;
                    out.best_ratio = Some(found.best_ratio);
                    out.best_pair = Some(found.best_pair);
                    out.reports.push(found.report);
                }
                Mode::Ascend => {
                    let asc = ascend_ratio(params, degree, trials, common.seed).map_err(usage)?;
                    let a = sharp_constant_a(params);
                    out.reports.push(VerificationReport::new(
                        "ascent-below-A",
                        format!(
                            "p={}, b={}; coordinate ascent, degree {degree}, {} evaluations, seed {}",
                            params.p(),
                            params.b(),
                            asc.evaluations,
                            common.seed
                        ),
                        &["start_ratio"],
                        asc.evaluations,
                        asc.ratio,
                        vec![asc.start_ratio],
                        Sense::AtMost,
                        a,
                        a * EXCEED_TOL,
                    ));
                    out.best_ratio = Some(asc.ratio);
                    out.best_pair = Some(asc.pair);
                }
                Mode::Curve => {
                    let all = sharpness_check(params).map_err(usage)?;
                    out.reports.extend(all.into_iter().filter(|r| r.name.starts_with("curve")));
                    let c_values: Vec<f64> =
                        (1..=20).map(|k| k as f64 / 20.0 * (1.0 - 1e-3) / params.p()).collect();
                    out.curve = Some(extremal_ratio_curve(params, &c_values).map_err(usage)?);
                }
            }
            Ok((common, Some(out)))
        }
        Command::ReportAll(common) => {
            require_json(&common, "report-all")?;
            let params = params(&common)?;
            let mut out = Output::new(params);
            out.reports = minorant_reports(params, PointwiseGrid::default(), common.seed);
            if !params.is_p2() {
                out.reports.extend(lemma_suite(params, LemmaGrid::default()).map_err(usage)?);
            }
            out.reports.extend(sharpness_check(params).map_err(usage)?);
            let found = random_never_exceeds(params, 10_000, 8, common.seed).map_err(usage)?;
            out.best_ratio = Some(found.best_ratio);
            out.best_pair = Some(found.best_pair);
            out.reports.push(found.report);
            Ok((common, Some(out)))
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var("RIESZ_THREADS") {
        let n: usize = value
            .parse()
            .map_err(|_| UsageError(format!("RIESZ_THREADS must be a positive integer, got {value:?}")))?;
        if n == 0 {
            bail!(UsageError("RIESZ_THREADS must be a positive integer, got 0".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on invalid flags
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| run(cli)).and_then(|(common, out)| {
        let Some(out) = out else { return Ok(true) };
        let mut w = sink(&common.out)?;
        serde_json::to_writer_pretty(&mut w, &out)?;
        writeln!(w)?;
        let (ok, failed) = all_passed(&out.reports);
        if let Some(name) = failed {
            eprintln!("check failed: {name}");
            for r in out.reports.iter().filter(|r| !r.passed) {
                eprintln!("{}", r.summary());
            }
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
