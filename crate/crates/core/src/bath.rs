//! Thermal reservoir rate functions (k_B = ħ = 1).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default Ohmic cutoff, in units of the cold gap. Large enough that the
/// spectral density is effectively linear over every scanned frequency.
pub const DEFAULT_CUTOFF: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    pub temperature: f64,
    pub kappa: f64,
    pub cutoff: f64,
    pub ohmicity: f64,
}

impl BathSpec {
    pub fn new(temperature: f64, kappa: f64, cutoff: f64) -> Result<Self> {
        Self::with_ohmicity(temperature, kappa, cutoff, 1.0)
    }

    pub fn with_ohmicity(temperature: f64, kappa: f64, cutoff: f64, ohmicity: f64) -> Result<Self> {
        let bath = Self {
            temperature,
            kappa,
            cutoff,
            ohmicity,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("bath {name} must be positive, got {x}")))
            }
        };
        positive("temperature", self.temperature)?;
        positive("kappa", self.kappa)?;
        positive("cutoff", self.cutoff)?;
        if !self.ohmicity.is_finite() {
            return Err(Error::InvalidParameter("ohmicity must be finite".into()));
        }
        Ok(())
    }
}

/// `n̄(ω) = 1/(e^{ω/T} − 1)`.
pub fn bose_einstein(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega <= 0.0 || omega.is_nan() {
        return Err(Error::NonPositiveFrequency(omega));
    }
    Ok(1.0 / (omega / bath.temperature).exp_m1())
}

/// `J(ω) = κ ω^s ω_ct^{s−1} e^{−ω/ω_ct}`.
pub fn ohmic_spectral_density(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega <= 0.0 || omega.is_nan() {
        return Err(Error::NonPositiveFrequency(omega));
    }
    let s = bath.ohmicity;
    Ok(bath.kappa * omega.powf(s) * bath.cutoff.powf(s - 1.0) * (-omega / bath.cutoff).exp())
}

/// `γ(ω) = 2π J(ω)` for ω > 0 and exactly zero otherwise.
pub fn damping_rate(omega: f64, bath: &BathSpec) -> f64 {
    if omega > 0.0 {
        2.0 * PI * ohmic_spectral_density(omega, bath).expect("omega > 0")
    } else {
        0.0
    }
}

/// Bath-induced transition rate at signed frequency ω.
///
/// Emission (ω > 0) is `γ(ω)(1 + n̄(ω))`; absorption (ω < 0) is
/// `γ(|ω|) n̄(|ω|)`, so that `G(−ω) = G(ω) e^{−ω/T}`.
pub fn spectral_response(omega: f64, bath: &BathSpec) -> Result<f64> {
    if omega == 0.0 || omega.is_nan() {
        return Err(Error::ZeroFrequency);
    }
    let w = omega.abs();
    let n = bose_einstein(w, bath)?;
    let gamma = damping_rate(w, bath);
    Ok(if omega > 0.0 { gamma * (1.0 + n) } else { gamma * n })
}
