//! Parameter grids, maximum-power searches and the max-power line fit.
//!
//! Points are independent: each one builds its own config and propagators
//! and iterates to its limit cycle. With the `parallel` feature they run on a
//! rayon pool; results always come back in grid order, so sweeps are
//! bit-reproducible regardless of scheduling.

use serde::{Deserialize, Serialize};

use crate::cycle::{LimitCycleResult, MachineKind, PreparedCycle, StrokeLedger};
use crate::error::{Error, Result};
use crate::models::{build_config, BaseParameters, EngineParameters, ModelId};

pub const DEFAULT_GRID_BUDGET: usize = 1_000_000;

/// Inclusive arithmetic range `start, start + step, … ≤ stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scan {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Scan {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let s = Self { start, stop, step };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = self.start.is_finite() && self.stop.is_finite() && self.step.is_finite();
        if !finite || self.step <= 0.0 || self.start > self.stop {
            return Err(Error::InvalidParameter(format!(
                "bad scan {}:{}:{} (need start ≤ stop, step > 0)",
                self.start, self.stop, self.step
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        // tolerate the stop value landing a hair past an exact multiple
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisName {
    /// T_h/T_c.
    TempRatio,
    /// ω_h/ω_c, single qubit.
    OmegaRatio,
    /// ω₁ᶜ/ω_c, coupled models.
    Omega1C,
    G,
}

impl AxisName {
    pub fn name(&self) -> &'static str {
        match self {
            AxisName::TempRatio => "temp_ratio",
            AxisName::OmegaRatio => "omega_ratio",
            AxisName::Omega1C => "omega1_c",
            AxisName::G => "g",
        }
    }

    pub fn apply(&self, params: &mut EngineParameters, v: f64) {
        match self {
            AxisName::TempRatio => params.temp_ratio = v,
            AxisName::OmegaRatio => params.omega_h = Some(v * params.base.omega_c),
            AxisName::Omega1C => params.omega1_c = v * params.base.omega_c,
            AxisName::G => params.g = v,
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "temp_ratio" => Ok(AxisName::TempRatio),
            "omega_ratio" => Ok(AxisName::OmegaRatio),
            "omega1_c" => Ok(AxisName::Omega1C),
            "g" => Ok(AxisName::G),
            other => Err(Error::InvalidParameter(format!(
                "unknown axis {other:?} (expected temp_ratio, omega_ratio, omega1_c or g)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub scan: Scan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub fixed: EngineParameters,
    pub budget: usize,
}

impl GridSpec {
    pub fn new(axis1: Axis, axis2: Option<Axis>, fixed: EngineParameters) -> Self {
        Self {
            axis1,
            axis2,
            fixed,
            budget: DEFAULT_GRID_BUDGET,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.scan.len(), self.axis2.map_or(1, |a| a.scan.len()))
    }

    fn points(&self) -> Result<Vec<(usize, usize, EngineParameters)>> {
        self.axis1.scan.validate()?;
        if let Some(a) = &self.axis2 {
            a.scan.validate()?;
            if a.name == self.axis1.name {
                return Err(Error::InvalidParameter("grid axes must differ".into()));
            }
        }
        let (n1, n2) = self.shape();
        let total = n1.saturating_mul(n2);
        if total > self.budget {
            return Err(Error::GridTooLarge {
                points: total,
                budget: self.budget,
            });
        }
        let mut out = Vec::with_capacity(total);
        for i in 0..n1 {
            for j in 0..n2 {
                let mut p = self.fixed;
                self.axis1.name.apply(&mut p, self.axis1.scan.value(i));
                if let Some(a) = &self.axis2 {
                    a.name.apply(&mut p, a.scan.value(j));
                }
                out.push((i, j, p));
            }
        }
        Ok(out)
    }
}

/// What happened at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Converged(LimitCycleResult),
    NonConverged {
        iterations: usize,
        last_ledger: StrokeLedger,
    },
    /// Config rejected or cycle undefined (NonOperational, DegenerateLedger, …).
    Failed(Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub index: (usize, usize),
    pub params: EngineParameters,
    pub outcome: Outcome,
}

impl PointResult {
    pub fn result(&self) -> Option<&LimitCycleResult> {
        match &self.outcome {
            Outcome::Converged(r) => Some(r),
            _ => None,
        }
    }

    pub fn converged(&self) -> bool {
        self.result().is_some()
    }

    pub fn iterations(&self) -> Option<usize> {
        match &self.outcome {
            Outcome::Converged(r) => Some(r.iterations),
            Outcome::NonConverged { iterations, .. } => Some(*iterations),
            Outcome::Failed(Error::DegenerateLedger { iterations, .. }) => Some(*iterations),
            Outcome::Failed(_) => None,
        }
    }

    pub fn kind(&self) -> Option<MachineKind> {
        self.result().map(|r| r.kind)
    }

    /// Power of a converged engine; `None` for any other point.
    pub fn engine_power(&self) -> Option<f64> {
        self.result()
            .filter(|r| r.kind == MachineKind::Engine)
            .map(|r| r.metrics.power)
    }

    /// Power of the converged cycle. A decoupled model that cannot operate
    /// delivers exactly zero.
    pub fn power(&self) -> Option<f64> {
        match &self.outcome {
            Outcome::Converged(r) => Some(r.metrics.power),
            Outcome::Failed(Error::NonOperational(_)) => Some(0.0),
            _ => None,
        }
    }
}

pub fn evaluate(params: &EngineParameters) -> Outcome {
    let run = build_config(params).and_then(|c| PreparedCycle::new(&c)?.iterate_to_limit());
    match run {
        Ok(r) => Outcome::Converged(r),
        Err(Error::NonConvergence {
            iterations,
            last_ledger,
        }) => Outcome::NonConverged {
            iterations,
            last_ledger,
        },
        Err(e) => Outcome::Failed(e),
    }
}

#[cfg(feature = "parallel")]
fn map_points(points: Vec<(usize, usize, EngineParameters)>, workers: Option<usize>) -> Result<Vec<PointResult>> {
    use rayon::prelude::*;
    let job = || {
        points
            .into_par_iter()
            .map(|(i, j, p)| PointResult {
                index: (i, j),
                params: p,
                outcome: evaluate(&p),
            })
            .collect()
    };
    match workers {
        None => Ok(job()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))
            .map(|pool| pool.install(job)),
    }
}

#[cfg(not(feature = "parallel"))]
fn map_points(points: Vec<(usize, usize, EngineParameters)>, _workers: Option<usize>) -> Result<Vec<PointResult>> {
    Ok(points
        .into_iter()
        .map(|(i, j, p)| PointResult {
            index: (i, j),
            params: p,
            outcome: evaluate(&p),
        })
        .collect())
}

/// Evaluate every grid point, row-major in (axis1, axis2) index order.
/// `workers = None` uses the default pool size.
pub fn sweep_grid(spec: &GridSpec, workers: Option<usize>) -> Result<Vec<PointResult>> {
    if workers == Some(0) {
        return Err(Error::InvalidParameter("worker count must be ≥ 1".into()));
    }
    map_points(spec.points()?, workers)
}

/// Shared settings for the 1-D searches.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SearchContext {
    pub base: BaseParameters,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxPowerRecord {
    pub model: ModelId,
    pub temp_ratio: f64,
    pub scanned: AxisName,
    /// Level ratio (ω_h/ω_c or ω₁ᶜ/ω_c) at the peak.
    pub argmax_level: f64,
    /// g at the peak; only set for coupling scans.
    pub argmax_g: Option<f64>,
    pub p_max: f64,
    pub eta_at_pm: f64,
    pub n_at_pm: usize,
    /// Peak sits on the first or last scan point.
    pub boundary_max: bool,
    /// The peak point in full.
    pub peak: PointResult,
    /// Every scanned point, in scan order.
    pub curve: Vec<PointResult>,
}

fn argmax_record(
    model: ModelId,
    temp_ratio: f64,
    scanned: AxisName,
    curve: Vec<PointResult>,
) -> Result<MaxPowerRecord> {
    let mut best: Option<(usize, f64)> = None;
    for (k, pt) in curve.iter().enumerate() {
        if let Some(p) = pt.engine_power() {
            // strict: ties stay with the smaller parameter
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((k, p));
            }
        }
    }
    let (k, p_max) = best.ok_or(Error::NoEnginePoint)?;
    let peak = curve[k].clone();
    let r = peak.result().expect("engine point is converged");
    let omega_c = peak.params.base.omega_c;
    let argmax_level = match model {
        ModelId::SingleQubit => peak.params.working_gaps().0 / omega_c,
        _ => peak.params.omega1_c / omega_c,
    };
    Ok(MaxPowerRecord {
        model,
        temp_ratio,
        scanned,
        argmax_level,
        argmax_g: (scanned == AxisName::G).then_some(peak.params.g),
        p_max,
        eta_at_pm: r.metrics.efficiency.unwrap_or(f64::NAN),
        n_at_pm: r.iterations,
        boundary_max: k == 0 || k + 1 == curve.len(),
        peak,
        curve,
    })
}

/// Peak power over the level ratio: ω_h/ω_c for the single qubit, ω₁ᶜ/ω_c
/// for coupled models (with ω₁ʰ = ω₁ᶜ + Δω). Only engine points compete.
pub fn max_power_over_level(
    model: ModelId,
    temp_ratio: f64,
    g: f64,
    scan: Scan,
    ctx: &SearchContext,
) -> Result<MaxPowerRecord> {
    let mut fixed = EngineParameters::coupled(model, temp_ratio, ctx.base.omega_c, g);
    fixed.base = ctx.base;
    let axis = if model.is_coupled() { AxisName::Omega1C } else { AxisName::OmegaRatio };
    let spec = GridSpec::new(Axis { name: axis, scan }, None, fixed);
    argmax_record(model, temp_ratio, axis, sweep_grid(&spec, ctx.workers)?)
}

/// Peak power over the coupling g with Q1 pinned to the single-qubit
/// maximum-power levels (ω₁ᶜ = ω_c, ω₁ʰ = Ω_h).
pub fn max_power_over_coupling(
    model: ModelId,
    temp_ratio: f64,
    scan_g: Scan,
    ctx: &SearchContext,
) -> Result<MaxPowerRecord> {
    if !model.is_coupled() {
        return Err(Error::InvalidParameter("coupling scan needs a coupled model".into()));
    }
    let mut fixed = EngineParameters::coupled(model, temp_ratio, ctx.base.omega_c, 0.0);
    fixed.base = ctx.base;
    let spec = GridSpec::new(Axis { name: AxisName::G, scan: scan_g }, None, fixed);
    argmax_record(model, temp_ratio, AxisName::G, sweep_grid(&spec, ctx.workers)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MprFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

/// Least-squares line of peak level ratio against T_h/T_c.
pub fn fit_mpr(records: &[MaxPowerRecord]) -> Result<MprFit> {
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.temp_ratio, r.argmax_level)).collect();
    fit_line(&pts)
}

pub fn fit_line(pts: &[(f64, f64)]) -> Result<MprFit> {
    if pts.len() < 3 {
        return Err(Error::TooFewRecords(pts.len()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all records share one temperature ratio".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).abs())
        .fold(0.0, f64::max);
    Ok(MprFit {
        slope,
        intercept,
        max_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_lengths() {
        assert_eq!(Scan::new(1.05, 3.5, 0.05).unwrap().len(), 50);
        assert_eq!(Scan::new(1.0, 6.0, 0.05).unwrap().len(), 101);
        assert_eq!(Scan::new(1.0, 1.04, 0.05).unwrap().len(), 1);
        assert!(Scan::new(2.0, 1.0, 0.1).is_err());
        assert!(Scan::new(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn line_fit_examples() {
        let exact: Vec<_> = [1.0, 2.0, 3.0, 4.0].iter().map(|&x| (x, 0.5 + 0.5 * x)).collect();
        let f = fit_line(&exact).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-14 && (f.intercept - 0.5).abs() < 1e-14);
        assert!(f.max_residual < 1e-14);

        let dup = [(2.0, 1.5), (2.0, 1.5), (3.0, 2.0), (3.0, 2.0)];
        let f = fit_line(&dup).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-14 && f.max_residual < 1e-14);

        assert!(matches!(fit_line(&exact[..2]), Err(Error::TooFewRecords(2))));
    }

    #[test]
    fn one_by_one_grid_is_one_cycle() {
        let fixed = EngineParameters::single(3.0, None);
        let axis = |name, v| Axis { name, scan: Scan::new(v, v, 0.1).unwrap() };
        let spec = GridSpec::new(axis(AxisName::TempRatio, 3.0), Some(axis(AxisName::OmegaRatio, 2.0)), fixed);
        let table = sweep_grid(&spec, Some(1)).unwrap();
        assert_eq!(table.len(), 1);
        let direct = crate::cycle::iterate_to_limit(&build_config(&fixed).unwrap()).unwrap();
        assert_eq!(table[0].result().unwrap(), &direct);
    }

    #[test]
    fn budget_enforced() {
        let fixed = EngineParameters::single(3.0, None);
        let mut spec = GridSpec::new(
            Axis { name: AxisName::TempRatio, scan: Scan::new(1.0, 2.0, 0.1).unwrap() },
            Some(Axis { name: AxisName::OmegaRatio, scan: Scan::new(1.0, 2.0, 0.1).unwrap() }),
            fixed,
        );
        spec.budget = 100;
        assert!(matches!(sweep_grid(&spec, None), Err(Error::GridTooLarge { points: 121, budget: 100 })));
    }

    #[test]
    fn ties_go_to_smaller_level() {
        let base = EngineParameters::single(3.0, None);
        let mk = |w: f64| {
            let mut p = base;
            p.omega_h = Some(w);
            PointResult { index: (0, 0), params: p, outcome: evaluate(&p) }
        };
        // the same point twice: identical power, first wins
        let curve = vec![mk(1.5), mk(2.0), mk(2.0), mk(1.8)];
        let r = argmax_record(ModelId::SingleQubit, 3.0, AxisName::OmegaRatio, curve).unwrap();
        assert_eq!(r.peak.index, (0, 0));
        assert_eq!(r.argmax_level, 2.0);
        assert!(!r.boundary_max);
    }

    #[test]
    fn no_engine_point() {
        // T_h/T_c = 1.5 with ω_h/ω_c ≥ 2: a cooler everywhere
        let r = max_power_over_level(ModelId::SingleQubit, 1.5, 0.0, Scan::new(2.0, 2.5, 0.25).unwrap(), &SearchContext::default());
        assert!(matches!(r, Err(Error::NoEnginePoint)));
    }

    #[test]
    fn non_operational_point_has_zero_power() {
        let ctx = SearchContext::default();
        let r = max_power_over_coupling(ModelId::M12, 3.0, Scan::new(0.0, 0.4, 0.2).unwrap(), &ctx).unwrap();
        assert_eq!(r.curve[0].power(), Some(0.0));
        assert!(r.curve[0].engine_power().is_none());
        assert!(r.argmax_g.unwrap() > 0.0);
    }
}
