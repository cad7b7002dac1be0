//! GKSL generators for the bath strokes and their cached propagators.
//!
//! The single qubit uses the standard (local) master equation. The coupled
//! pair uses the global master equation written directly in the stroke's
//! dressed frame, where jump operators are tensor-factor ladder operators of
//! the dressed labels: `σ̃₁⁻` drives ↑↓̃→↓↓ and ↑↑→↓↑̃ (gap ω̃₁), `σ̃₂⁻` drives
//! ↓↑̃→↓↓ and ↑↑→↑↓̃ (gap ω̃₂).

use serde::{Deserialize, Serialize};

use crate::bath::{spectral_response, BathSpec};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    dress, single_hamiltonian, CoupledSystemSpec, DressedFrame, SingleQubitLevels, Stroke,
};
use crate::linalg::{identity, kron, sigma_minus, sigma_plus, vectorize_generator, CMatrix, Jump, Superoperator};
use crate::state::DensityMatrix;

/// Which qubit a bath touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Contact {
    Q1,
    Q2,
}

/// A stroke's generator with its propagator `exp(L · duration)` cached.
#[derive(Debug, Clone)]
pub struct StrokeGenerator {
    generator: Superoperator,
    hamiltonian: CMatrix,
    energies: Vec<f64>,
    frame: Option<DressedFrame>,
    duration: f64,
    propagator: Superoperator,
}

impl StrokeGenerator {
    fn new(
        generator: Superoperator,
        energies: Vec<f64>,
        frame: Option<DressedFrame>,
        duration: f64,
    ) -> Result<Self> {
        check_duration(duration)?;
        let propagator = generator.exp_scaled(duration)?;
        Ok(Self {
            hamiltonian: crate::linalg::diag(&energies),
            generator,
            energies,
            frame,
            duration,
            propagator,
        })
    }

    /// Same generator, new duration; the propagator is rebuilt.
    pub fn with_duration(self, duration: f64) -> Result<Self> {
        Self::new(self.generator, self.energies, self.frame, duration)
    }

    pub fn generator(&self) -> &Superoperator {
        &self.generator
    }

    pub fn propagator(&self) -> &Superoperator {
        &self.propagator
    }

    /// The stroke Hamiltonian, diagonal in the frame the state lives in.
    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `None` for the bare single-qubit frame.
    pub fn frame(&self) -> Option<&DressedFrame> {
        self.frame.as_ref()
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn dim(&self) -> usize {
        self.generator.hilbert_dim()
    }
}

fn check_duration(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("stroke duration must be ≥ 0, got {t}")))
    }
}

/// `−i[H_S, ·] + G(ω) D[σ⁻] + G(−ω) D[σ⁺]` for the stroke's gap ω.
pub fn local_liouvillian(
    levels: &SingleQubitLevels,
    stroke: Stroke,
    bath: &BathSpec,
    duration: f64,
) -> Result<StrokeGenerator> {
    bath.validate()?;
    let w = levels.gap(stroke);
    let h = single_hamiltonian(levels, stroke);
    let jumps = [
        Jump::new(spectral_response(w, bath)?, sigma_minus()),
        Jump::new(spectral_response(-w, bath)?, sigma_plus()),
    ];
    StrokeGenerator::new(vectorize_generator(&h, &jumps)?, vec![0.0, w], None, duration)
}

/// Dissipator weights `(w₁, w₂)` on the σ̃₁ and σ̃₂ channels.
pub fn contact_weights(beta: f64, contact: Contact) -> (f64, f64) {
    let (s, c) = beta.sin_cos();
    match contact {
        Contact::Q1 => (c * c, s * s),
        Contact::Q2 => (s * s, c * c),
    }
}

/// Dressed ladder operators `(σ̃₁⁻, σ̃₂⁻)` in the (↓↓, ↓↑̃, ↑↓̃, ↑↑) labeling.
pub fn dressed_lowering() -> (CMatrix, CMatrix) {
    (
        kron(&sigma_minus(), &identity(2)),
        kron(&identity(2), &sigma_minus()),
    )
}

/// Global GKSL generator of a coupled stroke, in that stroke's dressed frame.
pub fn global_liouvillian(
    spec: &CoupledSystemSpec,
    stroke: Stroke,
    bath: &BathSpec,
    contact: Contact,
    duration: f64,
) -> Result<StrokeGenerator> {
    bath.validate()?;
    let frame = dress(spec, stroke);
    let (w1, w2) = contact_weights(frame.beta, contact);
    let (s1m, s2m) = dressed_lowering();
    let channel = |weight: f64, gap: f64, op: &CMatrix| -> Result<[Jump; 2]> {
        Ok([
            Jump::new(weight * spectral_response(gap, bath)?, op.clone()),
            Jump::new(weight * spectral_response(-gap, bath)?, op.adjoint()),
        ])
    };
    let mut jumps = Vec::with_capacity(4);
    jumps.extend(channel(w1, frame.omega_tilde_1, &s1m)?);
    jumps.extend(channel(w2, frame.omega_tilde_2, &s2m)?);

    let energies = frame.energies().to_vec();
    let generator = vectorize_generator(&frame.diagonal_hamiltonian(), &jumps)?;
    StrokeGenerator::new(generator, energies, Some(frame), duration)
}

/// Propagate `rho` through the stroke.
pub fn evolve(gen: &StrokeGenerator, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != gen.dim() {
        return Err(Error::DimensionMismatch {
            expected: gen.dim(),
            found: rho.dim(),
        });
    }
    let out = gen.propagator.apply(rho.matrix())?;
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, max_abs, C64};

    fn bath(t: f64) -> BathSpec {
        BathSpec::new(t, 0.005, 1000.0).unwrap()
    }

    /// Two-level rate-equation oracle: p_e(t) = p_ss (1 − e^{−Γt}) + p_e(0) e^{−Γt}.
    fn two_level_excited(w: f64, b: &BathSpec, p0: f64, t: f64) -> f64 {
        let down = spectral_response(w, b).unwrap();
        let up = spectral_response(-w, b).unwrap();
        let total = up + down;
        let pss = up / total;
        pss + (p0 - pss) * (-total * t).exp()
    }

    #[test]
    fn thermalizes_single_qubit() {
        let levels = SingleQubitLevels::new(2.0, 1.0).unwrap();
        let b = bath(5.0);
        let gen = local_liouvillian(&levels, Stroke::Cold, &b, 1e4).unwrap();
        let p = evolve(&gen, &DensityMatrix::ground(2)).unwrap().populations();
        assert!((p[1] / p[0] - (-0.2f64).exp()).abs() < 1e-8);
        assert!((p[1] - 0.450_166_002_687_522).abs() < 1e-10);
    }

    #[test]
    fn frozen_bath_keeps_ground_state() {
        let levels = SingleQubitLevels::new(2.0, 1.0).unwrap();
        let gen = local_liouvillian(&levels, Stroke::Hot, &bath(1e-3), 1e3).unwrap();
        let p = evolve(&gen, &DensityMatrix::from_populations(&[0.5, 0.5]).unwrap())
            .unwrap()
            .populations();
        assert!(p[1] < 1e-12);
    }

    #[test]
    fn relaxation_follows_rate_equation() {
        let levels = SingleQubitLevels::new(2.0, 1.0).unwrap();
        let b = bath(5.0);
        for &t in &[0.5, 3.0, 50.0] {
            let gen = local_liouvillian(&levels, Stroke::Cold, &b, t).unwrap();
            let p = evolve(&gen, &DensityMatrix::ground(2)).unwrap().populations();
            assert!((p[1] - two_level_excited(1.0, &b, 0.0, t)).abs() < 1e-12, "t={t}");
        }
        // Γ = G(1) + G(−1) ≈ 0.3148907, so 50 time units is ~15.7 relaxation times
        let gamma = spectral_response(1.0, &b).unwrap() + spectral_response(-1.0, &b).unwrap();
        assert!((gamma - 0.314_890_717_227_617).abs() < 1e-12);
    }

    #[test]
    fn zero_duration_is_identity() {
        let levels = SingleQubitLevels::new(2.0, 1.0).unwrap();
        let gen = local_liouvillian(&levels, Stroke::Hot, &bath(15.0), 0.0).unwrap();
        let mut m = diag(&[0.3, 0.7]);
        m[(0, 1)] = C64::new(0.1, 0.2);
        m[(1, 0)] = C64::new(0.1, -0.2);
        let rho = DensityMatrix::new(m).unwrap();
        assert!(max_abs(&(evolve(&gen, &rho).unwrap().into_matrix() - rho.matrix())) < 1e-15);
    }

    #[test]
    fn semigroup_property() {
        let spec = CoupledSystemSpec::new(3.0, 2.0, 1.0, 0.55).unwrap();
        let b = bath(15.0);
        let full = global_liouvillian(&spec, Stroke::Hot, &b, Contact::Q2, 8.0).unwrap();
        let half = full.clone().with_duration(4.0).unwrap();
        let mut m = diag(&[0.4, 0.3, 0.2, 0.1]);
        m[(1, 2)] = C64::new(0.05, 0.02);
        m[(2, 1)] = C64::new(0.05, -0.02);
        let rho = DensityMatrix::new(m).unwrap();
        let once = evolve(&full, &rho).unwrap();
        let twice = evolve(&half, &evolve(&half, &rho).unwrap()).unwrap();
        assert!(max_abs(&(once.into_matrix() - twice.into_matrix())) < 1e-9);
    }

    #[test]
    fn decoupled_global_matches_local_on_q1() {
        let spec = CoupledSystemSpec::new(2.5, 1.5, 1.0, 0.0).unwrap();
        let b = bath(15.0);
        let global = global_liouvillian(&spec, Stroke::Hot, &b, Contact::Q1, 1.0).unwrap();
        let w = 2.5;
        let local_jumps = [
            Jump::new(spectral_response(w, &b).unwrap(), kron(&sigma_minus(), &identity(2))),
            Jump::new(spectral_response(-w, &b).unwrap(), kron(&sigma_plus(), &identity(2))),
        ];
        let h = crate::hamiltonian::coupled_hamiltonian(&spec, Stroke::Hot);
        let reference = vectorize_generator(&h, &local_jumps).unwrap();
        assert!(max_abs(&(global.generator().matrix() - reference.matrix())) <= 1e-12);
    }

    #[test]
    fn decoupled_q2_contact_conserves_q1() {
        let spec = CoupledSystemSpec::new(2.5, 1.5, 1.0, 0.0).unwrap();
        let gen = global_liouvillian(&spec, Stroke::Cold, &bath(5.0), Contact::Q2, 200.0).unwrap();
        let rho = DensityMatrix::from_populations(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let p = evolve(&gen, &rho).unwrap().populations();
        // Q1 excited = ↑↓ + ↑↑
        assert!((p[2] + p[3] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn global_steady_state_is_gibbs() {
        for contact in [Contact::Q1, Contact::Q2] {
            let spec = CoupledSystemSpec::new(3.55, 2.5, 1.0, 0.55).unwrap();
            let b = bath(15.5);
            let gen = global_liouvillian(&spec, Stroke::Hot, &b, contact, 1e4).unwrap();
            let p = evolve(&gen, &DensityMatrix::ground(4)).unwrap().populations();
            let boltz: Vec<f64> = gen.energies().iter().map(|e| (-e / 15.5).exp()).collect();
            let z: f64 = boltz.iter().sum();
            for (pi, bi) in p.iter().zip(&boltz) {
                assert!((pi - bi / z).abs() < 1e-6, "{contact:?}");
            }
        }
    }

    #[test]
    fn diagonal_states_stay_diagonal() {
        let spec = CoupledSystemSpec::new(3.0, 2.0, 1.0, 0.4).unwrap();
        let gen = global_liouvillian(&spec, Stroke::Cold, &bath(5.0), Contact::Q1, 50.0).unwrap();
        let rho = DensityMatrix::from_populations(&[0.25, 0.25, 0.25, 0.25]).unwrap();
        assert!(evolve(&gen, &rho).unwrap().max_coherence() < 1e-10);
    }

    #[test]
    fn dimension_mismatch() {
        let levels = SingleQubitLevels::new(2.0, 1.0).unwrap();
        let gen = local_liouvillian(&levels, Stroke::Hot, &bath(5.0), 1.0).unwrap();
        assert!(matches!(
            evolve(&gen, &DensityMatrix::ground(4)),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
    }

    #[test]
    fn contact_weights_sum_to_one() {
        let (a, b) = contact_weights(0.3, Contact::Q1);
        let (c, d) = contact_weights(0.3, Contact::Q2);
        assert!((a + b - 1.0).abs() < 1e-15 && (a - d).abs() < 1e-15 && (b - c).abs() < 1e-15);
    }
}
