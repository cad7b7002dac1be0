//! The six-step Otto cycle, its energy ledger and the limit-cycle iteration.
//!
//! Sign convention: every ledger entry is energy flowing *into* the working
//! medium. An engine therefore has `W = W₁ + W₂ < 0`.

use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::dynamics::{evolve, global_liouvillian, local_liouvillian, Contact, StrokeGenerator};
use crate::error::{Error, Result};
use crate::hamiltonian::{dress, CoupledSystemSpec, SingleQubitLevels, Stroke};
use crate::state::DensityMatrix;

pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Relative first-law tolerance of the stop rule.
pub const CONVERGENCE_FACTOR: f64 = 1e-2;
/// Below this a ledger entry is treated as exactly zero.
pub const DEGENERATE_FLOOR: f64 = 1e-14;

/// Which qubit each bath touches, for a coupled medium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Contacts {
    pub hot: Contact,
    pub cold: Contact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Medium {
    Single(SingleQubitLevels),
    Coupled {
        spec: CoupledSystemSpec,
        contacts: Contacts,
    },
}

impl Medium {
    pub fn dim(&self) -> usize {
        match self {
            Medium::Single(_) => 2,
            Medium::Coupled { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleConfig {
    pub medium: Medium,
    pub hot_bath: BathSpec,
    pub cold_bath: BathSpec,
    pub t_h: f64,
    pub t_c: f64,
    pub max_iterations: usize,
}

impl CycleConfig {
    pub fn validate(&self) -> Result<()> {
        self.hot_bath.validate()?;
        self.cold_bath.validate()?;
        for (name, t) in [("t_h", self.t_h), ("t_c", self.t_c)] {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be ≥ 0, got {t}")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Total cycle time; work strokes are instantaneous.
    pub fn period(&self) -> f64 {
        self.t_h + self.t_c
    }
}

/// Signed energy book of one full cycle.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StrokeLedger {
    pub q_h: f64,
    pub q_c: f64,
    pub w_1: f64,
    pub w_2: f64,
}

impl StrokeLedger {
    pub fn new(q_h: f64, q_c: f64, w_1: f64, w_2: f64) -> Self {
        Self { q_h, q_c, w_1, w_2 }
    }

    pub fn work(&self) -> f64 {
        self.w_1 + self.w_2
    }

    /// First-law residual `|Q_h + Q_c + W₁ + W₂|`.
    pub fn delta_e(&self) -> f64 {
        (self.q_h + self.q_c + self.w_1 + self.w_2).abs()
    }

    pub fn min_magnitude(&self) -> f64 {
        [self.q_h, self.q_c, self.w_1, self.w_2]
            .iter()
            .map(|x| x.abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_degenerate(&self) -> bool {
        self.min_magnitude() < DEGENERATE_FLOOR
    }

    pub fn is_converged(&self) -> bool {
        self.delta_e() <= CONVERGENCE_FACTOR * self.min_magnitude()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MachineKind {
    Engine,
    Heater,
    Cooler,
    Indeterminate,
}

impl MachineKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MachineKind::Engine => "Engine",
            MachineKind::Heater => "Heater",
            MachineKind::Cooler => "Cooler",
            MachineKind::Indeterminate => "Indeterminate",
        }
    }
}

impl std::fmt::Display for MachineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify(ledger: &StrokeLedger) -> MachineKind {
    let w = ledger.work();
    let (qh, qc) = (ledger.q_h, ledger.q_c);
    if qh > 0.0 && qc < 0.0 && w < 0.0 {
        MachineKind::Engine
    } else if qh > 0.0 && qc < 0.0 && w > 0.0 {
        MachineKind::Heater
    } else if qh < 0.0 && qc > 0.0 && w > 0.0 {
        MachineKind::Cooler
    } else {
        MachineKind::Indeterminate
    }
}

/// Performance figures of one ledger. Ratios that do not apply to the
/// machine kind, or whose denominator vanishes, are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub power: f64,
    pub efficiency: Option<f64>,
    pub hcop: Option<f64>,
    pub ccop: Option<f64>,
    /// Bare-gap Otto efficiency (Q1's gaps for a coupled medium).
    pub eta_otto: f64,
    /// `1 − ω̃₁ᶜ/ω̃₁ʰ`; coupled media only.
    pub eta_otto_dressed: Option<f64>,
    pub eta_carnot: f64,
    pub eta_ca: f64,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    let r = num / den;
    (den != 0.0 && r.is_finite()).then_some(r)
}

pub fn otto_efficiency(medium: &Medium) -> f64 {
    match medium {
        Medium::Single(l) => 1.0 - l.omega_c / l.omega_h,
        Medium::Coupled { spec, .. } => 1.0 - spec.omega1_c / spec.omega1_h,
    }
}

pub fn metrics(ledger: &StrokeLedger, config: &CycleConfig) -> Metrics {
    let w = ledger.work();
    let kind = classify(ledger);
    let tc_over_th = config.cold_bath.temperature / config.hot_bath.temperature;
    let eta_otto_dressed = match &config.medium {
        Medium::Single(_) => None,
        Medium::Coupled { spec, .. } => {
            let h = dress(spec, Stroke::Hot).omega_tilde_1;
            let c = dress(spec, Stroke::Cold).omega_tilde_1;
            Some(1.0 - c / h)
        }
    };
    Metrics {
        power: if config.period() > 0.0 { -w / config.period() } else { 0.0 },
        efficiency: (kind == MachineKind::Engine).then(|| ratio(-w, ledger.q_h)).flatten(),
        hcop: (kind == MachineKind::Heater).then(|| ratio(-ledger.q_c, w)).flatten(),
        ccop: (kind == MachineKind::Cooler).then(|| ratio(ledger.q_c, w)).flatten(),
        eta_otto: otto_efficiency(&config.medium),
        eta_otto_dressed,
        eta_carnot: 1.0 - tc_over_th,
        eta_ca: 1.0 - tc_over_th.sqrt(),
    }
}

/// Both stroke generators of a config, with propagators built once.
#[derive(Debug, Clone)]
pub struct PreparedCycle {
    config: CycleConfig,
    hot: StrokeGenerator,
    cold: StrokeGenerator,
}

impl PreparedCycle {
    pub fn new(config: &CycleConfig) -> Result<Self> {
        config.validate()?;
        let (hot, cold) = match &config.medium {
            Medium::Single(levels) => (
                local_liouvillian(levels, Stroke::Hot, &config.hot_bath, config.t_h)?,
                local_liouvillian(levels, Stroke::Cold, &config.cold_bath, config.t_c)?,
            ),
            Medium::Coupled { spec, contacts } => (
                global_liouvillian(spec, Stroke::Hot, &config.hot_bath, contacts.hot, config.t_h)?,
                global_liouvillian(spec, Stroke::Cold, &config.cold_bath, contacts.cold, config.t_c)?,
            ),
        };
        Ok(Self {
            config: *config,
            hot,
            cold,
        })
    }

    pub fn config(&self) -> &CycleConfig {
        &self.config
    }

    pub fn hot(&self) -> &StrokeGenerator {
        &self.hot
    }

    pub fn cold(&self) -> &StrokeGenerator {
        &self.cold
    }

    /// One cycle from `rho0`; returns the end state and the ledger.
    pub fn run(&self, rho0: &DensityMatrix) -> Result<(DensityMatrix, StrokeLedger)> {
        let eh = self.hot.energies();
        let ec = self.cold.energies();

        // (a) hot contact, (b) measurement
        let rho_h = evolve(&self.hot, rho0)?.dephased();
        let q_h = rho_h.energy(eh) - rho0.energy(eh);
        // (c) expansion: populations carried over, Hamiltonian relabelled
        let w_1 = rho_h.energy(ec) - rho_h.energy(eh);
        // (d) cold contact, (e) measurement
        let rho_c = evolve(&self.cold, &rho_h)?.dephased();
        let q_c = rho_c.energy(ec) - rho_h.energy(ec);
        // (f) compression
        let w_2 = rho_c.energy(eh) - rho_c.energy(ec);

        Ok((rho_c, StrokeLedger::new(q_h, q_c, w_1, w_2)))
    }

    /// Cycle from the ground state until the first law closes to within
    /// `CONVERGENCE_FACTOR` of the smallest ledger entry.
    pub fn iterate_to_limit(&self) -> Result<LimitCycleResult> {
        let mut rho = DensityMatrix::ground(self.config.medium.dim());
        let mut last = StrokeLedger::default();
        for n in 1..=self.config.max_iterations {
            let (next, ledger) = self.run(&rho)?;
            if ledger.is_degenerate() {
                return Err(Error::DegenerateLedger {
                    iterations: n,
                    ledger,
                });
            }
            if ledger.is_converged() {
                return Ok(LimitCycleResult {
                    state: rho,
                    iterations: n,
                    ledger,
                    kind: classify(&ledger),
                    metrics: metrics(&ledger, &self.config),
                });
            }
            rho = next;
            last = ledger;
        }
        Err(Error::NonConvergence {
            iterations: self.config.max_iterations,
            last_ledger: last,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitCycleResult {
    /// Cycle-start state of the converged cycle.
    pub state: DensityMatrix,
    pub iterations: usize,
    pub ledger: StrokeLedger,
    pub kind: MachineKind,
    pub metrics: Metrics,
}

pub fn run_cycle(config: &CycleConfig, rho0: &DensityMatrix) -> Result<(DensityMatrix, StrokeLedger)> {
    let prepared = PreparedCycle::new(config)?;
    if rho0.dim() != config.medium.dim() {
        return Err(Error::DimensionMismatch {
            expected: config.medium.dim(),
            found: rho0.dim(),
        });
    }
    prepared.run(rho0)
}

pub fn iterate_to_limit(config: &CycleConfig) -> Result<LimitCycleResult> {
    PreparedCycle::new(config)?.iterate_to_limit()
}
