//! The single-qubit reference engine and the four coupled topologies.
//!
//! A coupled model `M⟨H⟩⟨C⟩` attaches the hot bath to qubit ⟨H⟩ and the cold
//! bath to qubit ⟨C⟩. Work is always exchanged through Q1, whose gap moves by
//! `Δω = (ω_c/2)(T_h/T_c − 1)`, the level change of the single-qubit engine
//! at maximum power. Q2's gap stays at ω_c.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bath::{BathSpec, DEFAULT_CUTOFF};
use crate::cycle::{Contacts, CycleConfig, Medium, DEFAULT_MAX_ITERATIONS};
use crate::dynamics::Contact;
use crate::error::{Error, Result};
use crate::hamiltonian::{CoupledSystemSpec, SingleQubitLevels};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelId {
    SingleQubit,
    M11,
    M12,
    M21,
    M22,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [
        ModelId::SingleQubit,
        ModelId::M11,
        ModelId::M12,
        ModelId::M21,
        ModelId::M22,
    ];
    pub const COUPLED: [ModelId; 4] = [ModelId::M11, ModelId::M12, ModelId::M21, ModelId::M22];

    /// Canonical identifier: "single", "11", "12", "21" or "22".
    pub fn name(&self) -> &'static str {
        match self {
            ModelId::SingleQubit => "single",
            ModelId::M11 => "11",
            ModelId::M12 => "12",
            ModelId::M21 => "21",
            ModelId::M22 => "22",
        }
    }

    pub fn is_coupled(&self) -> bool {
        *self != ModelId::SingleQubit
    }

    pub fn contacts(&self) -> Option<Contacts> {
        let c = |hot, cold| Some(Contacts { hot, cold });
        match self {
            ModelId::SingleQubit => None,
            ModelId::M11 => c(Contact::Q1, Contact::Q1),
            ModelId::M12 => c(Contact::Q1, Contact::Q2),
            ModelId::M21 => c(Contact::Q2, Contact::Q1),
            ModelId::M22 => c(Contact::Q2, Contact::Q2),
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "single" => Ok(ModelId::SingleQubit),
            "11" => Ok(ModelId::M11),
            "12" => Ok(ModelId::M12),
            "21" => Ok(ModelId::M21),
            "22" => Ok(ModelId::M22),
            other => Err(Error::InvalidParameter(format!(
                "unknown model {other:?} (expected single, 11, 12, 21 or 22)"
            ))),
        }
    }
}

/// Parameters shared by every study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseParameters {
    /// Cold gap and energy unit; also Q2's gap.
    pub omega_c: f64,
    pub t_cold: f64,
    pub kappa: f64,
    pub cutoff: f64,
    pub ohmicity: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub max_iterations: usize,
}

impl Default for BaseParameters {
    fn default() -> Self {
        Self {
            omega_c: 1.0,
            t_cold: 5.0,
            kappa: 0.005,
            cutoff: DEFAULT_CUTOFF,
            ohmicity: 1.0,
            t_h: 50.0,
            t_c: 50.0,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineParameters {
    pub model: ModelId,
    /// T_h/T_c.
    pub temp_ratio: f64,
    /// Single qubit only: hot gap. `None` means the maximum-power level Ω_h.
    pub omega_h: Option<f64>,
    /// Coupled only: Q1's cold-stroke gap ω₁ᶜ.
    pub omega1_c: f64,
    pub g: f64,
    pub base: BaseParameters,
}

impl EngineParameters {
    pub fn single(temp_ratio: f64, omega_h: Option<f64>) -> Self {
        Self {
            model: ModelId::SingleQubit,
            temp_ratio,
            omega_h,
            omega1_c: 1.0,
            g: 0.0,
            base: BaseParameters::default(),
        }
    }

    pub fn coupled(model: ModelId, temp_ratio: f64, omega1_c: f64, g: f64) -> Self {
        Self {
            model,
            temp_ratio,
            omega_h: None,
            omega1_c,
            g,
            base: BaseParameters::default(),
        }
    }

    pub fn t_hot(&self) -> f64 {
        self.temp_ratio * self.base.t_cold
    }

    /// `Δω = (ω_c/2)(T_h/T_c − 1)`.
    pub fn delta_omega(&self) -> f64 {
        0.5 * self.base.omega_c * (self.temp_ratio - 1.0)
    }

    /// `Ω_h = (ω_c/2)(1 + T_h/T_c)`.
    pub fn max_power_level(&self) -> f64 {
        0.5 * self.base.omega_c * (1.0 + self.temp_ratio)
    }

    pub fn omega1_h(&self) -> f64 {
        self.omega1_c + self.delta_omega()
    }

    /// Hot and cold gaps of the qubit that does the work.
    pub fn working_gaps(&self) -> (f64, f64) {
        match self.model {
            ModelId::SingleQubit => (
                self.omega_h.unwrap_or_else(|| self.max_power_level()),
                self.base.omega_c,
            ),
            _ => (self.omega1_h(), self.omega1_c),
        }
    }
}

pub fn build_config(params: &EngineParameters) -> Result<CycleConfig> {
    let b = &params.base;
    if !(params.temp_ratio > 0.0 && params.temp_ratio.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "temperature ratio must be positive, got {}",
            params.temp_ratio
        )));
    }
    let hot_bath = BathSpec::with_ohmicity(params.t_hot(), b.kappa, b.cutoff, b.ohmicity)?;
    let cold_bath = BathSpec::with_ohmicity(b.t_cold, b.kappa, b.cutoff, b.ohmicity)?;
    let (wh, wc) = params.working_gaps();
    let medium = match params.model.contacts() {
        None => Medium::Single(SingleQubitLevels::new(wh, wc)?),
        Some(contacts) => {
            if params.g == 0.0 && params.model != ModelId::M11 {
                return Err(Error::NonOperational(params.model.name()));
            }
            Medium::Coupled {
                spec: CoupledSystemSpec::new(wh, wc, b.omega_c, params.g)?,
                contacts,
            }
        }
    };
    let config = CycleConfig {
        medium,
        hot_bath,
        cold_bath,
        t_h: b.t_h,
        t_c: b.t_c,
        max_iterations: b.max_iterations,
    };
    config.validate()?;
    Ok(config)
}

/// Bare-gap Otto efficiency of the working qubit.
pub fn reference_otto_efficiency(params: &EngineParameters) -> f64 {
    let (wh, wc) = params.working_gaps();
    1.0 - wc / wh
}
