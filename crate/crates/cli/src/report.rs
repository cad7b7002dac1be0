//! CSV and JSON emission. Every row repeats the full resolved parameter set.

use serde_json::{json, Value};

use qotto_core::cycle::StrokeLedger;
use qotto_core::models::{reference_otto_efficiency, EngineParameters};
use qotto_core::sweep::{MaxPowerRecord, Outcome, PointResult};

/// Columns of a point row.
pub const POINT_HEADER: [&str; 27] = [
    "model", "T_h", "T_c", "omega_h", "omega_c", "omega2", "g", "kappa", "omega_ct",
    "ohmicity", "t_h", "t_c", "max_iterations", "N", "converged", "Q_h", "Q_c", "W1", "W2",
    "kind", "P", "eta", "eta_otto", "eta_carnot", "eta_ca", "eta_otto_dressed", "status",
];

/// Extra columns of a max-power row, after the peak's point columns.
pub const RECORD_HEADER: [&str; 8] = [
    "scanned", "temp_ratio", "argmax_level", "argmax_g", "p_max", "eta_at_pm", "n_at_pm",
    "boundary_max",
];

/// 17 significant digits, enough to round-trip any f64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn parameter_cells(p: &EngineParameters) -> Vec<String> {
    let b = &p.base;
    let (wh, wc) = p.working_gaps();
    let coupled = p.model.is_coupled();
    vec![
        p.model.name().to_owned(),
        num(p.t_hot()),
        num(b.t_cold),
        num(wh),
        num(wc),
        if coupled { num(b.omega_c) } else { String::new() },
        if coupled { num(p.g) } else { String::new() },
        num(b.kappa),
        num(b.cutoff),
        num(b.ohmicity),
        num(b.t_h),
        num(b.t_c),
        b.max_iterations.to_string(),
    ]
}

/// Ledger of the point: the limit cycle's, or the last one tried.
fn ledger(pt: &PointResult) -> Option<StrokeLedger> {
    match &pt.outcome {
        Outcome::Converged(r) => Some(r.ledger),
        Outcome::NonConverged { last_ledger, .. } => Some(*last_ledger),
        Outcome::Failed(qotto_core::error::Error::DegenerateLedger { ledger, .. }) => Some(*ledger),
        Outcome::Failed(_) => None,
    }
}

pub fn status(pt: &PointResult) -> String {
    match &pt.outcome {
        Outcome::Converged(_) => "ok".into(),
        Outcome::NonConverged { .. } => "nonconverged".into(),
        Outcome::Failed(e) => e.to_string(),
    }
}

/// Reference efficiencies fixed by the parameters alone.
fn references(p: &EngineParameters) -> (f64, f64, f64) {
    let inv = 1.0 / p.temp_ratio;
    (reference_otto_efficiency(p), 1.0 - inv, 1.0 - inv.sqrt())
}

pub fn point_row(pt: &PointResult) -> Vec<String> {
    let mut row = parameter_cells(&pt.params);
    let l = ledger(pt);
    let res = pt.result();
    let (otto, carnot, ca) = references(&pt.params);
    row.extend([
        pt.iterations().map(|n| n.to_string()).unwrap_or_default(),
        pt.converged().to_string(),
        opt(l.map(|l| l.q_h)),
        opt(l.map(|l| l.q_c)),
        opt(l.map(|l| l.w_1)),
        opt(l.map(|l| l.w_2)),
        res.map(|r| r.kind.as_str().to_owned()).unwrap_or_default(),
        opt(pt.power()),
        opt(res.and_then(|r| r.metrics.efficiency)),
        num(res.map_or(otto, |r| r.metrics.eta_otto)),
        num(res.map_or(carnot, |r| r.metrics.eta_carnot)),
        num(res.map_or(ca, |r| r.metrics.eta_ca)),
        opt(res.and_then(|r| r.metrics.eta_otto_dressed)),
        status(pt),
    ]);
    row
}

pub fn record_row(rec: &MaxPowerRecord) -> Vec<String> {
    let mut row = point_row(&rec.peak);
    row.extend([
        rec.scanned.name().to_owned(),
        num(rec.temp_ratio),
        num(rec.argmax_level),
        opt(rec.argmax_g),
        num(rec.p_max),
        num(rec.eta_at_pm),
        rec.n_at_pm.to_string(),
        rec.boundary_max.to_string(),
    ]);
    row
}

/// Row for a temperature ratio whose scan held no engine point.
pub fn empty_record_row(params: &EngineParameters, scanned: &str, why: &str) -> Vec<String> {
    let mut row = parameter_cells(params);
    let (otto, carnot, ca) = references(params);
    row.extend(["".into(), "false".into()]);
    row.extend(std::iter::repeat_n(String::new(), 7));
    row.extend([num(otto), num(carnot), num(ca), String::new(), why.to_owned()]);
    row.extend([scanned.to_owned(), num(params.temp_ratio)]);
    row.extend(std::iter::repeat_n(String::new(), 6));
    row
}

pub fn write_table<W: std::io::Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn parameters_json(p: &EngineParameters) -> Value {
    let b = &p.base;
    let (wh, wc) = p.working_gaps();
    let mut v = json!({
        "T_h": p.t_hot(),
        "T_c": b.t_cold,
        "omega_h": wh,
        "omega_c": wc,
        "kappa": b.kappa,
        "omega_ct": b.cutoff,
        "ohmicity": b.ohmicity,
        "t_h": b.t_h,
        "t_c": b.t_c,
        "max_iterations": b.max_iterations,
    });
    if p.model.is_coupled() {
        v["omega2"] = json!(b.omega_c);
        v["g"] = json!(p.g);
    }
    v
}

pub fn point_json(pt: &PointResult) -> Value {
    let res = pt.result();
    json!({
        "model": pt.params.model.name(),
        "parameters": parameters_json(&pt.params),
        "converged": pt.converged(),
        "iterations": pt.iterations(),
        "kind": res.map(|r| r.kind.as_str()),
        "ledger": ledger(pt).map(|l| json!({
            "Q_h": l.q_h, "Q_c": l.q_c, "W1": l.w_1, "W2": l.w_2, "W": l.work(), "delta_E": l.delta_e(),
        })),
        "metrics": res.map(|r| &r.metrics),
        "populations": res.map(|r| r.state.populations()),
        "status": status(pt),
    })
}
