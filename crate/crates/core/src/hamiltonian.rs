//! Bare and dressed Hamiltonians of the working medium.
//!
//! The two-qubit basis order is (↓↓, ↓↑, ↑↓, ↑↑) with Q1 the first tensor
//! factor. Q1's gap switches between strokes, Q2's gap and the XX coupling
//! stay fixed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{diag, re, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stroke {
    Hot,
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitLevels {
    pub omega_h: f64,
    pub omega_c: f64,
}

impl SingleQubitLevels {
    pub fn new(omega_h: f64, omega_c: f64) -> Result<Self> {
        if !(omega_h > 0.0 && omega_c > 0.0 && omega_h.is_finite() && omega_c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "qubit gaps must be positive, got ω_h={omega_h}, ω_c={omega_c}"
            )));
        }
        Ok(Self { omega_h, omega_c })
    }

    pub fn gap(&self, stroke: Stroke) -> f64 {
        match stroke {
            Stroke::Hot => self.omega_h,
            Stroke::Cold => self.omega_c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoupledSystemSpec {
    pub omega1_h: f64,
    pub omega1_c: f64,
    pub omega2: f64,
    pub g: f64,
}

impl CoupledSystemSpec {
    pub fn new(omega1_h: f64, omega1_c: f64, omega2: f64, g: f64) -> Result<Self> {
        let gaps_ok = [omega1_h, omega1_c, omega2]
            .iter()
            .all(|w| *w > 0.0 && w.is_finite());
        if !gaps_ok {
            return Err(Error::InvalidParameter(format!(
                "qubit gaps must be positive, got ω₁ʰ={omega1_h}, ω₁ᶜ={omega1_c}, ω₂={omega2}"
            )));
        }
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling must be ≥ 0, got {g}")));
        }
        Ok(Self {
            omega1_h,
            omega1_c,
            omega2,
            g,
        })
    }

    pub fn omega1(&self, stroke: Stroke) -> f64 {
        match stroke {
            Stroke::Hot => self.omega1_h,
            Stroke::Cold => self.omega1_c,
        }
    }
}

pub fn single_hamiltonian(levels: &SingleQubitLevels, stroke: Stroke) -> CMatrix {
    diag(&[0.0, levels.gap(stroke)])
}

pub fn coupled_hamiltonian(spec: &CoupledSystemSpec, stroke: Stroke) -> CMatrix {
    let w1 = spec.omega1(stroke);
    let w2 = spec.omega2;
    let mut h = diag(&[0.0, w2, w1, w1 + w2]);
    h[(1, 2)] = re(spec.g);
    h[(2, 1)] = re(spec.g);
    h
}

/// Eigenframe of one stroke's coupled Hamiltonian.
///
/// `omega_tilde_1` is always the upper eigenvalue of the single-excitation
/// block, so labels never swap when ω₁ crosses ω₂.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedFrame {
    pub omega_tilde_1: f64,
    pub omega_tilde_2: f64,
    pub beta: f64,
    pub unitary: CMatrix,
    /// ω₁ + ω₂, the doubly excited energy (unchanged by the coupling).
    pub top: f64,
}

impl DressedFrame {
    /// Diagonal of `U† H U`: (0, ω̃₂, ω̃₁, ω₁+ω₂).
    pub fn energies(&self) -> [f64; 4] {
        [0.0, self.omega_tilde_2, self.omega_tilde_1, self.top]
    }

    pub fn diagonal_hamiltonian(&self) -> CMatrix {
        diag(&self.energies())
    }
}

pub fn dress(spec: &CoupledSystemSpec, stroke: Stroke) -> DressedFrame {
    let w1 = spec.omega1(stroke);
    let w2 = spec.omega2;
    let g = spec.g;
    let split = (4.0 * g * g + (w1 - w2).powi(2)).sqrt();
    let beta = 0.5 * (2.0 * g).atan2(w1 - w2);
    let (s, c) = beta.sin_cos();

    let mut u = diag(&[1.0, 0.0, 0.0, 1.0]);
    u[(1, 1)] = re(c);
    u[(1, 2)] = re(s);
    u[(2, 1)] = re(-s);
    u[(2, 2)] = re(c);

    DressedFrame {
        omega_tilde_1: 0.5 * (w1 + w2 + split),
        omega_tilde_2: 0.5 * (w1 + w2 - split),
        beta,
        unitary: u,
        top: w1 + w2,
    }
}
