//! Browser bindings: a machine-type phase diagram, a power curve against the
//! single-qubit baseline, and the stroke ledger of one limit cycle.
//!
//! Temperatures are in units of ω_c = 1 with T_c = 5 unless a call says
//! otherwise; every other setting is the library default.

use wasm_bindgen::prelude::*;

use qotto_core::cycle::MachineKind;
use qotto_core::models::{EngineParameters, ModelId};
use qotto_core::sweep::{
    evaluate, max_power_over_level, sweep_grid, Axis, AxisName, GridSpec, Outcome, PointResult, Scan,
    SearchContext,
};

/// Cell codes of [`phase_diagram`].
pub const ENGINE: u8 = 0;
pub const HEATER: u8 = 1;
pub const COOLER: u8 = 2;
pub const INDETERMINATE: u8 = 3;
pub const NO_CYCLE: u8 = 4;

const T_COLD: f64 = 5.0;
// keep an interactive page responsive
const BROWSER_BUDGET: usize = 20_000;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn model(name: &str) -> Result<ModelId, JsError> {
    name.parse().map_err(js_err)
}

fn code(pt: &PointResult) -> u8 {
    match pt.kind() {
        Some(MachineKind::Engine) => ENGINE,
        Some(MachineKind::Heater) => HEATER,
        Some(MachineKind::Cooler) => COOLER,
        Some(MachineKind::Indeterminate) => INDETERMINATE,
        None => NO_CYCLE,
    }
}

fn base(model: ModelId, t_hot: f64, g: f64) -> EngineParameters {
    let mut p = EngineParameters::coupled(model, t_hot / T_COLD, 1.0, g);
    if model == ModelId::SingleQubit {
        p.g = 0.0;
    }
    p
}

/// Machine type over a grid, row-major with x fastest.
///
/// Single qubit: x = ω_h/ω_c, y = T_h/T_c. Coupled models: x = ω₁ᶜ/ω_c,
/// y = g, at hot temperature `t_hot`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn phase_diagram(
    model_name: &str,
    t_hot: f64,
    x_start: f64,
    x_stop: f64,
    x_step: f64,
    y_start: f64,
    y_stop: f64,
    y_step: f64,
) -> Result<Vec<u8>, JsError> {
    let m = model(model_name)?;
    let (xa, ya) = if m.is_coupled() {
        (AxisName::Omega1C, AxisName::G)
    } else {
        (AxisName::OmegaRatio, AxisName::TempRatio)
    };
    let x = Scan::new(x_start, x_stop, x_step).map_err(js_err)?;
    let y = Scan::new(y_start, y_stop, y_step).map_err(js_err)?;
    // axis1 is y so the row-major result already has x fastest
    let mut spec = GridSpec::new(Axis { name: ya, scan: y }, Some(Axis { name: xa, scan: x }), base(m, t_hot, 0.0));
    spec.budget = BROWSER_BUDGET;
    let pts = sweep_grid(&spec, None).map_err(js_err)?;
    Ok(pts.iter().map(code).collect())
}

/// Number of points a scan produces, for sizing the canvas.
#[wasm_bindgen]
pub fn scan_len(start: f64, stop: f64, step: f64) -> Result<usize, JsError> {
    Ok(Scan::new(start, stop, step).map_err(js_err)?.len())
}

/// Power along a level scan, with the single-qubit maximum power at the
/// same temperatures as the reference line.
#[wasm_bindgen]
pub struct PowerCurve {
    levels: Vec<f64>,
    power: Vec<f64>,
    engine: Vec<u8>,
    baseline: f64,
    argmax: f64,
    p_max: f64,
}

#[wasm_bindgen]
impl PowerCurve {
    #[wasm_bindgen(getter)]
    pub fn levels(&self) -> Vec<f64> {
        self.levels.clone()
    }
    /// P at each level; NaN where no limit cycle was reached.
    #[wasm_bindgen(getter)]
    pub fn power(&self) -> Vec<f64> {
        self.power.clone()
    }
    /// 1 where the point runs as an engine.
    #[wasm_bindgen(getter)]
    pub fn engine(&self) -> Vec<u8> {
        self.engine.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn baseline(&self) -> f64 {
        self.baseline
    }
    #[wasm_bindgen(getter)]
    pub fn argmax(&self) -> f64 {
        self.argmax
    }
    #[wasm_bindgen(getter)]
    pub fn p_max(&self) -> f64 {
        self.p_max
    }
}

#[wasm_bindgen]
pub fn power_curve(model_name: &str, t_hot: f64, g: f64, start: f64, stop: f64, step: f64) -> Result<PowerCurve, JsError> {
    let m = model(model_name)?;
    let r = t_hot / T_COLD;
    let scan = Scan::new(start, stop, step).map_err(js_err)?;
    let ctx = SearchContext::default();
    let rec = max_power_over_level(m, r, g, scan, &ctx).map_err(js_err)?;
    let single = max_power_over_level(ModelId::SingleQubit, r, 0.0, Scan::new(1.0, 1.0 + r, 0.05).map_err(js_err)?, &ctx)
        .map_err(js_err)?;
    Ok(PowerCurve {
        levels: scan.values(),
        power: rec.curve.iter().map(|p| p.power().unwrap_or(f64::NAN)).collect(),
        engine: rec.curve.iter().map(|p| u8::from(p.engine_power().is_some())).collect(),
        baseline: single.p_max,
        argmax: rec.argmax_level,
        p_max: rec.p_max,
    })
}

/// Ledger and figures of merit of one limit cycle.
#[wasm_bindgen]
pub struct CycleReport {
    status: String,
    kind: String,
    iterations: usize,
    ledger: Vec<f64>,
    power: f64,
    efficiency: f64,
    eta_otto: f64,
    eta_carnot: f64,
    eta_ca: f64,
}

#[wasm_bindgen]
impl CycleReport {
    /// "ok", "nonconverged" or the reason no cycle exists.
    #[wasm_bindgen(getter)]
    pub fn status(&self) -> String {
        self.status.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn kind(&self) -> String {
        self.kind.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn iterations(&self) -> usize {
        self.iterations
    }
    /// [Q_h, W1, Q_c, W2] in stroke order.
    #[wasm_bindgen(getter)]
    pub fn ledger(&self) -> Vec<f64> {
        self.ledger.clone()
    }
    #[wasm_bindgen(getter)]
    pub fn power(&self) -> f64 {
        self.power
    }
    /// NaN unless the cycle is an engine.
    #[wasm_bindgen(getter)]
    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }
    #[wasm_bindgen(getter)]
    pub fn eta_otto(&self) -> f64 {
        self.eta_otto
    }
    #[wasm_bindgen(getter)]
    pub fn eta_carnot(&self) -> f64 {
        self.eta_carnot
    }
    #[wasm_bindgen(getter)]
    pub fn eta_ca(&self) -> f64 {
        self.eta_ca
    }
}

/// `level` is ω_h/ω_c for the single qubit, ω₁ᶜ/ω_c otherwise.
#[wasm_bindgen]
pub fn limit_cycle(model_name: &str, t_hot: f64, level: f64, g: f64) -> Result<CycleReport, JsError> {
    let m = model(model_name)?;
    let mut p = base(m, t_hot, g);
    let axis = if m.is_coupled() { AxisName::Omega1C } else { AxisName::OmegaRatio };
    axis.apply(&mut p, level);
    let inv = T_COLD / t_hot;
    let mut rep = CycleReport {
        status: String::new(),
        kind: String::new(),
        iterations: 0,
        ledger: Vec::new(),
        power: f64::NAN,
        efficiency: f64::NAN,
        eta_otto: qotto_core::models::reference_otto_efficiency(&p),
        eta_carnot: 1.0 - inv,
        eta_ca: 1.0 - inv.sqrt(),
    };
    match evaluate(&p) {
        Outcome::Converged(r) => {
            rep.status = "ok".into();
            rep.kind = r.kind.as_str().into();
            rep.iterations = r.iterations;
            rep.ledger = vec![r.ledger.q_h, r.ledger.w_1, r.ledger.q_c, r.ledger.w_2];
            rep.power = r.metrics.power;
            rep.efficiency = r.metrics.efficiency.unwrap_or(f64::NAN);
        }
        Outcome::NonConverged { iterations, last_ledger: l } => {
            rep.status = "nonconverged".into();
            rep.iterations = iterations;
            rep.ledger = vec![l.q_h, l.w_1, l.q_c, l.w_2];
        }
        Outcome::Failed(e) => rep.status = e.to_string(),
    }
    Ok(rep)
}
