//! `qotto`: run Otto cycles, sweeps and maximum-power searches from the shell.
//!
//! Settings resolve as built-in defaults, then the `--config` TOML file, then
//! command-line flags. The worker count additionally falls back to the
//! `QOTTO_WORKERS` environment variable before the pool default.
//!
//! Exit status: 0 on success, 1 on invalid input or a failed check, 2 when
//! no point reached a limit cycle.

mod config;
mod error;
mod report;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qotto_core::error::Error;
use qotto_core::models::{EngineParameters, ModelId};
use qotto_core::sweep::{
    evaluate, fit_line, max_power_over_coupling, max_power_over_level, sweep_grid, AxisName,
    GridSpec, MaxPowerRecord, Outcome, PointResult, Scan, SearchContext,
};

use config::{parse_axis, parse_scan, resolve_parameters, resolve_workers, FileConfig, PhysicsArgs};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qotto", version, about = "Quantum Otto engine simulator", allow_negative_numbers = true)]
struct Cli {
    /// TOML run configuration; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write results here instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for sweeps (default: $QOTTO_WORKERS, else one per core)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(flatten)]
    physics: PhysicsArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one cycle to its limit and report the ledger and machine type (JSON)
    #[command(allow_negative_numbers = true)]
    Classify,
    /// Evaluate a 1-D or 2-D parameter grid (CSV)
    #[command(allow_negative_numbers = true)]
    Sweep {
        /// First axis, name:start:stop:step with name one of temp_ratio, omega_ratio, omega1_c, g
        #[arg(long)]
        axis1: Option<String>,
        /// Optional second axis, same format
        #[arg(long)]
        axis2: Option<String>,
        /// Largest grid accepted
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Peak power per temperature ratio (CSV, one row per ratio)
    #[command(allow_negative_numbers = true)]
    MaxPower {
        /// T_h/T_c values, start:stop:step
        #[arg(long)]
        temp_ratios: Option<String>,
        /// Scan the level ratio or the coupling
        #[arg(long, value_enum)]
        over: Option<Over>,
        /// Scanned values, start:stop:step
        #[arg(long)]
        range: Option<String>,
        /// Also write every scanned point here (CSV)
        #[arg(long)]
        curves: Option<PathBuf>,
    },
    /// Fit the peak level ratio against T_h/T_c (JSON)
    #[command(allow_negative_numbers = true)]
    MprFit {
        /// Fit rows of an existing max-power table instead of scanning
        #[arg(long)]
        input: Option<PathBuf>,
        /// T_h/T_c values, start:stop:step
        #[arg(long)]
        temp_ratios: Option<String>,
        /// Scanned level ratios, start:stop:step
        #[arg(long)]
        range: Option<String>,
    },
    /// Check work measurement and stroke generators on deterministic draws (JSON)
    #[command(allow_negative_numbers = true)]
    Verify {
        /// Draws per suite
        #[arg(long)]
        draws: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Over {
    Level,
    G,
}

const DEFAULT_TEMP_RATIOS: &str = "2:3.5:0.5";
const SINGLE_LEVEL_RANGE: &str = "1.05:4.5:0.05";
const COUPLED_LEVEL_RANGE: &str = "1:6:0.05";
const G_RANGE: &str = "0:2:0.05";

/// What a finished command hands back to `main`.
struct Done {
    text: String,
    summary: String,
    code: u8,
}

fn main() -> ExitCode {
    // usage errors are validation errors: exit 1, keeping 2 for non-convergence
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(done) => {
            if let Err(e) = emit(cli.output.as_deref().or(file_output(&cli).as_deref()), &done.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if !done.summary.is_empty() {
                eprintln!("{}", done.summary);
            }
            ExitCode::from(done.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn file_output(cli: &Cli) -> Option<PathBuf> {
    let path = cli.config.as_ref()?;
    FileConfig::load(path).ok()?.output
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.to_owned(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Done, CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let workers = resolve_workers(cli.workers, &file)?;
    let params = resolve_parameters(&cli.physics, &file)?;
    match &cli.command {
        Command::Classify => classify(&params),
        Command::Sweep { axis1, axis2, budget } => {
            let axis1 = axis1
                .as_deref()
                .or(file.scan.axis1.as_deref())
                .ok_or_else(|| CliError::Invalid("sweep needs --axis1 (or scan.axis1 in the config)".into()))?;
            let axis2 = axis2.as_deref().or(file.scan.axis2.as_deref());
            let mut spec = GridSpec::new(parse_axis(axis1)?, axis2.map(parse_axis).transpose()?, params);
            if let Some(b) = budget.or(file.scan.budget) {
                spec.budget = b;
            }
            sweep(&spec, workers)
        }
        Command::MaxPower { temp_ratios, over, range, curves } => {
            let ratios = temp_ratios
                .as_deref()
                .or(file.scan.temp_ratios.as_deref())
                .unwrap_or(DEFAULT_TEMP_RATIOS);
            let over = match (over, file.scan.over.as_deref()) {
                (Some(o), _) => *o,
                (None, Some(s)) => Over::from_str(s, true)
                    .map_err(|_| CliError::Invalid(format!("scan.over must be level or g, got {s:?}")))?,
                (None, None) => Over::Level,
            };
            let range = range
                .as_deref()
                .or(file.scan.range.as_deref())
                .unwrap_or(default_range(params.model, over));
            let ctx = SearchContext { base: params.base, workers };
            max_power(&params, &ctx, parse_scan(ratios)?, over, parse_scan(range)?, curves.as_deref())
        }
        Command::MprFit { input, temp_ratios, range } => match input {
            Some(path) => mpr_fit_table(path),
            None => {
                if params.model != ModelId::SingleQubit {
                    return Err(CliError::Invalid(
                        "mpr-fit scans the single qubit; drop --model or pass --input".into(),
                    ));
                }
                let ratios = temp_ratios
                    .as_deref()
                    .or(file.scan.temp_ratios.as_deref())
                    .unwrap_or(DEFAULT_TEMP_RATIOS);
                let range = range.as_deref().or(file.scan.range.as_deref()).unwrap_or(SINGLE_LEVEL_RANGE);
                let ctx = SearchContext { base: params.base, workers };
                mpr_fit_scan(&ctx, parse_scan(ratios)?, parse_scan(range)?)
            }
        },
        Command::Verify { draws } => {
            let draws = draws.or(file.verify.draws).unwrap_or(verify::DEFAULT_DRAWS);
            if draws == 0 {
                return Err(CliError::Invalid("verify needs at least one draw".into()));
            }
            let rep = verify::run(draws);
            let summary = rep
                .suites
                .iter()
                .map(|s| format!("{}: {} passed, {} failed", s.name, s.passed, s.failed))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Done {
                text: serde_json::to_string_pretty(&rep)? + "\n",
                summary,
                code: if rep.all_passed() { 0 } else { 1 },
            })
        }
    }
}

fn default_range(model: ModelId, over: Over) -> &'static str {
    match (over, model.is_coupled()) {
        (Over::G, _) => G_RANGE,
        (Over::Level, true) => COUPLED_LEVEL_RANGE,
        (Over::Level, false) => SINGLE_LEVEL_RANGE,
    }
}

fn classify(params: &EngineParameters) -> Result<Done, CliError> {
    let pt = PointResult { index: (0, 0), params: *params, outcome: evaluate(params) };
    let code = match &pt.outcome {
        Outcome::Converged(_) => 0,
        Outcome::NonConverged { .. } | Outcome::Failed(Error::DegenerateLedger { .. }) => 2,
        Outcome::Failed(e) => return Err(e.clone().into()),
    };
    let summary = match pt.result() {
        Some(r) => format!(
            "kind={} N={} Q_h={:e} Q_c={:e} W1={:e} W2={:e} P={:e}",
            r.kind, r.iterations, r.ledger.q_h, r.ledger.q_c, r.ledger.w_1, r.ledger.w_2, r.metrics.power
        ),
        None => format!("no limit cycle: {}", report::status(&pt)),
    };
    Ok(Done {
        text: serde_json::to_string_pretty(&report::point_json(&pt))? + "\n",
        summary,
        code,
    })
}

fn table(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut buf = Vec::new();
    report::write_table(&mut buf, header, rows)?;
    String::from_utf8(buf).map_err(|e| CliError::Invalid(e.to_string()))
}

fn sweep(spec: &GridSpec, workers: Option<usize>) -> Result<Done, CliError> {
    let points = sweep_grid(spec, workers)?;
    let converged = points.iter().filter(|p| p.converged()).count();
    let rows: Vec<_> = points.iter().map(report::point_row).collect();
    Ok(Done {
        text: table(&report::POINT_HEADER, &rows)?,
        summary: format!("{} points, {converged} converged", points.len()),
        code: if converged == 0 { 2 } else { 0 },
    })
}

fn search(
    params: &EngineParameters,
    ctx: &SearchContext,
    r: f64,
    over: Over,
    range: Scan,
) -> Result<Option<MaxPowerRecord>, CliError> {
    let found = match over {
        Over::Level => max_power_over_level(params.model, r, params.g, range, ctx),
        Over::G => max_power_over_coupling(params.model, r, range, ctx),
    };
    match found {
        Ok(rec) => Ok(Some(rec)),
        Err(Error::NoEnginePoint) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn max_power(
    params: &EngineParameters,
    ctx: &SearchContext,
    ratios: Scan,
    over: Over,
    range: Scan,
    curves: Option<&Path>,
) -> Result<Done, CliError> {
    if over == Over::G && !params.model.is_coupled() {
        return Err(CliError::Invalid("--over g needs a coupled model".into()));
    }
    let scanned = match (over, params.model.is_coupled()) {
        (Over::G, _) => AxisName::G,
        (Over::Level, true) => AxisName::Omega1C,
        (Over::Level, false) => AxisName::OmegaRatio,
    };
    let mut rows = Vec::new();
    let mut curve_rows = Vec::new();
    let mut converged = 0;
    for r in ratios.values() {
        match search(params, ctx, r, over, range)? {
            Some(rec) => {
                converged += rec.curve.iter().filter(|p| p.converged()).count();
                curve_rows.extend(rec.curve.iter().map(report::point_row));
                rows.push(report::record_row(&rec));
            }
            None => {
                // still count convergence so an all-heater scan is not exit 2
                let mut p = *params;
                p.temp_ratio = r;
                let probe = GridSpec::new(qotto_core::sweep::Axis { name: scanned, scan: range }, None, p);
                let pts = sweep_grid(&probe, ctx.workers)?;
                converged += pts.iter().filter(|p| p.converged()).count();
                curve_rows.extend(pts.iter().map(report::point_row));
                rows.push(report::empty_record_row(&p, scanned.name(), "no engine point"));
            }
        }
    }
    if let Some(path) = curves {
        emit(Some(path), &table(&report::POINT_HEADER, &curve_rows)?)?;
    }
    let header: Vec<&str> = report::POINT_HEADER.iter().chain(&report::RECORD_HEADER).copied().collect();
    Ok(Done {
        text: table(&header, &rows)?,
        summary: format!("{} temperature ratios, {converged} converged points", rows.len()),
        code: if converged == 0 { 2 } else { 0 },
    })
}

fn fit_report(points: &[(f64, f64, bool)]) -> Result<Done, CliError> {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.0, p.1)).collect();
    let fit = fit_line(&xy)?;
    let json = serde_json::json!({
        "points": points.iter().map(|p| serde_json::json!({
            "temp_ratio": p.0, "argmax_level": p.1, "boundary_max": p.2,
        })).collect::<Vec<_>>(),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "max_residual": fit.max_residual,
    });
    Ok(Done {
        text: serde_json::to_string_pretty(&json)? + "\n",
        summary: format!(
            "argmax = {:.4} + {:.4} T_h/T_c (max residual {:.3e})",
            fit.intercept, fit.slope, fit.max_residual
        ),
        code: 0,
    })
}

fn mpr_fit_scan(ctx: &SearchContext, ratios: Scan, range: Scan) -> Result<Done, CliError> {
    let mut pts = Vec::new();
    for r in ratios.values() {
        let rec = max_power_over_level(ModelId::SingleQubit, r, 0.0, range, ctx)?;
        pts.push((rec.temp_ratio, rec.argmax_level, rec.boundary_max));
    }
    fit_report(&pts)
}

/// Read `temp_ratio`, `argmax_level` and `boundary_max` from a max-power table.
fn mpr_fit_table(path: &Path) -> Result<Done, CliError> {
    let bad = |message: String| CliError::ReadTable { path: path.to_owned(), message };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| bad(format!("missing column {name}")))
    };
    let (ci, cj, cb) = (col("temp_ratio")?, col("argmax_level")?, col("boundary_max")?);
    let mut pts = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        // rows without an engine point have no argmax
        if rec[cj].is_empty() {
            continue;
        }
        let parse = |c: usize| {
            rec[c]
                .parse::<f64>()
                .map_err(|_| bad(format!("row {}: {:?} is not a number", line + 2, &rec[c])))
        };
        pts.push((parse(ci)?, parse(cj)?, &rec[cb] == "true"));
    }
    fit_report(&pts)
}
