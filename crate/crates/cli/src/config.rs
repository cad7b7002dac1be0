//! Run configuration: built-in defaults, then the TOML file, then flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use qotto_core::bath::BathSpec;
use qotto_core::models::{BaseParameters, EngineParameters, ModelId};
use qotto_core::sweep::{Axis, Scan};

use crate::error::CliError;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "QOTTO_WORKERS";

pub const DEFAULT_T_HOT: f64 = 15.0;
pub const DEFAULT_G: f64 = 0.55;
pub const DEFAULT_OMEGA1_C: f64 = 2.5;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<String>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub temperatures: TemperatureSection,
    #[serde(default)]
    pub bath: BathSection,
    #[serde(default)]
    pub levels: LevelSection,
    #[serde(default)]
    pub cycle: CycleSection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub verify: VerifySection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureSection {
    pub hot: Option<f64>,
    pub cold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub kappa: Option<f64>,
    pub cutoff: Option<f64>,
    pub ohmicity: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSection {
    pub omega_c: Option<f64>,
    pub omega_h: Option<f64>,
    pub omega1_c: Option<f64>,
    pub g: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSection {
    pub t_h: Option<f64>,
    pub t_c: Option<f64>,
    pub max_iterations: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub axis1: Option<String>,
    pub axis2: Option<String>,
    pub temp_ratios: Option<String>,
    pub over: Option<String>,
    pub range: Option<String>,
    pub budget: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub draws: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
            path: path.to_owned(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| CliError::ParseConfig {
            path: path.to_owned(),
            message: e.message().to_owned(),
        })
    }
}

/// Physical overrides shared by every subcommand.
#[derive(Debug, Default, Clone, Args)]
pub struct PhysicsArgs {
    /// Model: single, 11, 12, 21 or 22
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Hot bath temperature T_h
    #[arg(long, global = true)]
    pub th: Option<f64>,
    /// Cold bath temperature T_c
    #[arg(long, global = true)]
    pub tc: Option<f64>,
    /// System-bath coupling κ
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Bath cutoff frequency ω_ct
    #[arg(long, global = true)]
    pub cutoff: Option<f64>,
    /// Cold gap ω_c (energy unit, also Q2's gap)
    #[arg(long, global = true)]
    pub wc: Option<f64>,
    /// Single qubit hot gap ω_h (default: (ω_c/2)(1 + T_h/T_c))
    #[arg(long, global = true)]
    pub wh: Option<f64>,
    /// Coupled models: Q1's cold gap ω₁ᶜ
    #[arg(long, global = true)]
    pub w1c: Option<f64>,
    /// Coupled models: qubit-qubit coupling g
    #[arg(long, global = true)]
    pub g: Option<f64>,
    /// Hot stroke duration t_h
    #[arg(long = "time-h", global = true)]
    pub time_h: Option<f64>,
    /// Cold stroke duration t_c
    #[arg(long = "time-c", global = true)]
    pub time_c: Option<f64>,
    /// Cycle iteration cap
    #[arg(long = "max-iterations", global = true)]
    pub max_iterations: Option<usize>,
}

/// Parse `start:stop:step`.
pub fn parse_scan(s: &str) -> Result<Scan, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::Invalid(format!("scan {s:?} must look like start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.trim().parse().map_err(|_| bad())?;
    }
    Ok(Scan::new(v[0], v[1], v[2])?)
}

/// Parse `name:start:stop:step`.
pub fn parse_axis(s: &str) -> Result<Axis, CliError> {
    let (name, rest) = s
        .split_once(':')
        .ok_or_else(|| CliError::Invalid(format!("axis {s:?} must look like name:start:stop:step")))?;
    Ok(Axis {
        name: name.trim().parse()?,
        scan: parse_scan(rest)?,
    })
}

/// Worker count: flag, then file, then environment, else the pool default.
pub fn resolve_workers(flag: Option<usize>, file: &FileConfig) -> Result<Option<usize>, CliError> {
    let env = match std::env::var(WORKERS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
            CliError::Invalid(format!("{WORKERS_ENV}={v:?} is not a worker count"))
        })?),
        Err(_) => None,
    };
    let workers = flag.or(file.workers).or(env);
    if workers == Some(0) {
        return Err(CliError::Invalid("worker count must be at least 1".into()));
    }
    Ok(workers)
}

pub fn resolve_model(flag: &PhysicsArgs, file: &FileConfig) -> Result<ModelId, CliError> {
    match flag.model.as_deref().or(file.model.as_deref()) {
        Some(m) => Ok(m.parse()?),
        None => Ok(ModelId::SingleQubit),
    }
}

/// Merge flags over the file over defaults and validate everything that
/// can be checked before a cycle runs.
pub fn resolve_parameters(flag: &PhysicsArgs, file: &FileConfig) -> Result<EngineParameters, CliError> {
    let d = BaseParameters::default();
    let base = BaseParameters {
        omega_c: flag.wc.or(file.levels.omega_c).unwrap_or(d.omega_c),
        t_cold: flag.tc.or(file.temperatures.cold).unwrap_or(d.t_cold),
        kappa: flag.kappa.or(file.bath.kappa).unwrap_or(d.kappa),
        cutoff: flag.cutoff.or(file.bath.cutoff).unwrap_or(d.cutoff),
        ohmicity: file.bath.ohmicity.unwrap_or(d.ohmicity),
        t_h: flag.time_h.or(file.cycle.t_h).unwrap_or(d.t_h),
        t_c: flag.time_c.or(file.cycle.t_c).unwrap_or(d.t_c),
        max_iterations: flag
            .max_iterations
            .or(file.cycle.max_iterations)
            .unwrap_or(d.max_iterations),
    };
    let t_hot = flag.th.or(file.temperatures.hot).unwrap_or(DEFAULT_T_HOT);
    let params = EngineParameters {
        model: resolve_model(flag, file)?,
        temp_ratio: t_hot / base.t_cold,
        omega_h: flag.wh.or(file.levels.omega_h),
        omega1_c: flag.w1c.or(file.levels.omega1_c).unwrap_or(DEFAULT_OMEGA1_C),
        g: flag.g.or(file.levels.g).unwrap_or(DEFAULT_G),
        base,
    };
    validate(&params, t_hot)?;
    Ok(params)
}

fn validate(p: &EngineParameters, t_hot: f64) -> Result<(), CliError> {
    let b = &p.base;
    BathSpec::with_ohmicity(t_hot, b.kappa, b.cutoff, b.ohmicity)?;
    BathSpec::with_ohmicity(b.t_cold, b.kappa, b.cutoff, b.ohmicity)?;
    let positive = |name: &str, v: f64| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(CliError::Invalid(format!("{name} must be positive and finite, got {v}")))
        }
    };
    positive("omega_c", b.omega_c)?;
    positive("omega1_c", p.omega1_c)?;
    if let Some(wh) = p.omega_h {
        positive("omega_h", wh)?;
    }
    for (name, v) in [("t_h", b.t_h), ("t_c", b.t_c), ("g", p.g)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(CliError::Invalid(format!("{name} must be non-negative and finite, got {v}")));
        }
    }
    if b.max_iterations == 0 {
        return Err(CliError::Invalid("max_iterations must be at least 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scans_parse() {
        let s = parse_scan("2:3.5:0.5").unwrap();
        assert_eq!((s.start, s.stop, s.step), (2.0, 3.5, 0.5));
        assert!(parse_scan("2:3.5").is_err());
        assert!(parse_scan("2:1:0.5").is_err());
        assert!(parse_scan("a:b:c").is_err());
        let a = parse_axis("omega1_c:1:6:0.05").unwrap();
        assert_eq!(a.scan.len(), 101);
        assert!(parse_axis("omega9:1:6:0.05").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = toml::from_str(
            "model = \"12\"\n[temperatures]\nhot = 15.5\n[levels]\ng = 0.4\nomega1_c = 3.0\n",
        )
        .unwrap();
        let flags = PhysicsArgs {
            g: Some(0.55),
            ..Default::default()
        };
        let p = resolve_parameters(&flags, &file).unwrap();
        assert_eq!(p.model, ModelId::M12);
        assert_eq!(p.g, 0.55);
        assert_eq!(p.omega1_c, 3.0);
        assert!((p.t_hot() - 15.5).abs() < 1e-12);
        assert_eq!(p.base, BaseParameters::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[bath]\nkapa = 1.0\n").is_err());
    }

    #[test]
    fn invalid_physics_is_caught_up_front() {
        let file = FileConfig::default();
        for flags in [
            PhysicsArgs { kappa: Some(-1.0), ..Default::default() },
            PhysicsArgs { tc: Some(0.0), ..Default::default() },
            PhysicsArgs { time_h: Some(-1.0), ..Default::default() },
            PhysicsArgs { wh: Some(0.0), ..Default::default() },
            PhysicsArgs { max_iterations: Some(0), ..Default::default() },
            PhysicsArgs { model: Some("13".into()), ..Default::default() },
        ] {
            assert!(resolve_parameters(&flags, &file).is_err(), "{flags:?}");
        }
    }
}
