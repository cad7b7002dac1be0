//! Indirect measurement of work through a clock and a work storage.
//!
//! The composite is system ⊗ clock ⊗ storage, with the storage having one
//! level per system eigenstate. Storage level `b` carries the energy
//! `E_from(b) − E_to(b)`, the amount released by the system in eigenstate
//! `b` when its Hamiltonian switches. The swap unitary moves the clock from
//! 0 to 1 and, for an excited `b`, lifts the storage from level 0 to level
//! `b`. With this storage Hamiltonian the unitary commutes with the total
//! Hamiltonian, so the storage's mean energy is the extracted work.
//!
//! This is a verification oracle. The cycle itself uses trace formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{DressedFrame, SingleQubitLevels, Stroke};
use crate::linalg::{commutator, diag, identity, kron, ket_bra, norm_inf, CMatrix};
use crate::state::DensityMatrix;

/// Largest coherence tolerated by the coupled measurement.
pub const DIAGONAL_TOL: f64 = 1e-10;

/// Which work stroke is being measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// Hot Hamiltonian to cold Hamiltonian (step c).
    Expand,
    /// Cold back to hot (step f).
    Compress,
}

impl Direction {
    fn strokes(self) -> (Stroke, Stroke) {
        match self {
            Direction::Expand => (Stroke::Hot, Stroke::Cold),
            Direction::Compress => (Stroke::Cold, Stroke::Hot),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeasurementSetup {
    system_dim: usize,
    from: Vec<f64>,
    to: Vec<f64>,
    storage: Vec<f64>,
    hamiltonian: CMatrix,
    unitary: CMatrix,
}

/// Outcome of one projective readout of the storage.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkReadout {
    /// Probability of each storage level.
    pub storage_distribution: Vec<f64>,
    /// `tr[H_W ρ_W]`: energy deposited in the storage.
    pub extracted_work: f64,
    /// System populations after the interaction.
    pub system_populations: Vec<f64>,
}

impl MeasurementSetup {
    /// Setup for a switch between two diagonal Hamiltonians with the given
    /// eigenenergies. Index 0 must be the ground state of both.
    pub fn new(from: &[f64], to: &[f64]) -> Result<Self> {
        if from.len() != to.len() {
            return Err(Error::DimensionMismatch {
                expected: from.len(),
                found: to.len(),
            });
        }
        if from.len() < 2 {
            return Err(Error::InvalidParameter("system needs at least two levels".into()));
        }
        let storage: Vec<f64> = from.iter().zip(to).map(|(f, t)| f - t).collect();
        let mut setup = Self {
            system_dim: from.len(),
            from: from.to_vec(),
            to: to.to_vec(),
            storage,
            hamiltonian: CMatrix::zeros(0, 0),
            unitary: swap_unitary(from.len()),
        };
        setup.rebuild_hamiltonian();
        Ok(setup)
    }

    pub fn single(levels: &SingleQubitLevels, direction: Direction) -> Result<Self> {
        let (from, to) = direction.strokes();
        Self::new(&[0.0, levels.gap(from)], &[0.0, levels.gap(to)])
    }

    pub fn coupled(hot: &DressedFrame, cold: &DressedFrame, direction: Direction) -> Result<Self> {
        let (from, to) = match direction {
            Direction::Expand => (hot, cold),
            Direction::Compress => (cold, hot),
        };
        Self::new(&from.energies(), &to.energies())
    }

    fn rebuild_hamiltonian(&mut self) {
        let d = self.system_dim;
        let clock0 = ket_bra(2, 0, 0);
        let clock1 = ket_bra(2, 1, 1);
        let id_w = identity(d);
        self.hamiltonian = kron(&kron(&diag(&self.from), &clock0), &id_w)
            + kron(&kron(&diag(&self.to), &clock1), &id_w)
            + kron(&identity(2 * d), &diag(&self.storage));
    }

    /// Shift one storage level, breaking energy conservation. Test hook.
    pub fn with_storage_shift(mut self, level: usize, shift: f64) -> Self {
        self.storage[level] += shift;
        self.rebuild_hamiltonian();
        self
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn composite_dim(&self) -> usize {
        2 * self.system_dim * self.system_dim
    }

    pub fn storage_energies(&self) -> &[f64] {
        &self.storage
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    /// Couple `rho` to a fresh clock and storage, apply the swap and read
    /// the storage.
    pub fn measure(&self, rho: &DensityMatrix) -> Result<WorkReadout> {
        let d = self.system_dim;
        if rho.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: rho.dim(),
            });
        }
        let initial = kron(&kron(rho.matrix(), &ket_bra(2, 0, 0)), &ket_bra(d, 0, 0));
        let fin = &self.unitary * initial * self.unitary.adjoint();

        // composite index is (system, clock, storage), storage fastest
        let mut p_w = vec![0.0; d];
        let mut p_s = vec![0.0; d];
        for i in 0..2 * d * d {
            let p = fin[(i, i)].re;
            p_w[i % d] += p;
            p_s[i / (2 * d)] += p;
        }
        let extracted_work = p_w.iter().zip(&self.storage).map(|(p, e)| p * e).sum();
        Ok(WorkReadout {
            storage_distribution: p_w,
            extracted_work,
            system_populations: p_s,
        })
    }
}

/// Clock flip for the ground state; for excited `b`, swap
/// `|0⟩_C|0⟩_W ↔ |1⟩_C|b⟩_W` and leave the rest alone.
fn swap_unitary(d: usize) -> CMatrix {
    let flip = ket_bra(2, 0, 1) + ket_bra(2, 1, 0);
    let mut u = kron(&kron(&ket_bra(d, 0, 0), &flip), &identity(d));
    for b in 1..d {
        let id_w = identity(d);
        let block = kron(&ket_bra(2, 0, 1), &ket_bra(d, 0, b))
            + kron(&ket_bra(2, 1, 0), &ket_bra(d, b, 0))
            + kron(&ket_bra(2, 0, 0), &(&id_w - ket_bra(d, 0, 0)))
            + kron(&ket_bra(2, 1, 1), &(&id_w - ket_bra(d, b, b)));
        u += kron(&ket_bra(d, b, b), &block);
    }
    u
}

/// `‖[U, H_SE]‖∞`.
pub fn verify_energy_conservation_of_unitary(setup: &MeasurementSetup) -> f64 {
    norm_inf(&commutator(setup.unitary(), setup.hamiltonian()))
}

/// Work delivered to the storage by a single qubit switching gaps.
pub fn single_qubit_extracted_work(
    rho: &DensityMatrix,
    levels: &SingleQubitLevels,
    direction: Direction,
) -> Result<f64> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    Ok(MeasurementSetup::single(levels, direction)?.measure(rho)?.extracted_work)
}

/// Work delivered to the two-qubit storage. `rho` must be diagonal in the
/// dressed frame the switch starts from.
pub fn coupled_extracted_work(
    rho: &DensityMatrix,
    hot: &DressedFrame,
    cold: &DressedFrame,
    direction: Direction,
) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    let coherence = rho.max_coherence();
    if coherence > DIAGONAL_TOL {
        return Err(Error::NotDiagonal(coherence));
    }
    Ok(MeasurementSetup::coupled(hot, cold, direction)?.measure(rho)?.extracted_work)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{dress, CoupledSystemSpec};
    use crate::linalg::{is_hermitian, max_abs, re};

    fn levels() -> SingleQubitLevels {
        SingleQubitLevels::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn ground_state_extracts_nothing() {
        let g = DensityMatrix::ground(2);
        assert_eq!(single_qubit_extracted_work(&g, &levels(), Direction::Expand).unwrap(), 0.0);
    }

    #[test]
    fn expansion_extracts_gap_difference() {
        let rho = DensityMatrix::from_populations(&[0.6, 0.4]).unwrap();
        let w = single_qubit_extracted_work(&rho, &levels(), Direction::Expand).unwrap();
        assert!((w - 0.4).abs() < 1e-15);
        let w2 = single_qubit_extracted_work(&rho, &levels(), Direction::Compress).unwrap();
        assert!((w2 + 0.4).abs() < 1e-15);
    }

    #[test]
    fn single_unitary_matches_printed_swap() {
        // |0⟩⟨0| ⊗ (|0⟩⟨1| + |1⟩⟨0|) ⊗ 𝕀 + |1⟩⟨1| ⊗ (|00⟩⟨11| + |11⟩⟨00| + |01⟩⟨01| + |10⟩⟨10|)
        let cw = ket_bra(4, 0, 3) + ket_bra(4, 3, 0) + ket_bra(4, 1, 1) + ket_bra(4, 2, 2);
        let flip = ket_bra(2, 0, 1) + ket_bra(2, 1, 0);
        let expected =
            kron(&ket_bra(2, 0, 0), &kron(&flip, &identity(2))) + kron(&ket_bra(2, 1, 1), &cw);
        let s = MeasurementSetup::single(&levels(), Direction::Expand).unwrap();
        assert_eq!(s.unitary(), &expected);
        assert_eq!(s.composite_dim(), 8);
        assert_eq!(s.storage_energies(), &[0.0, 1.0]);
    }

    #[test]
    fn unitary_is_unitary_and_conserves_energy() {
        let spec = CoupledSystemSpec::new(3.55, 2.5, 1.0, 0.55).unwrap();
        let (h, c) = (dress(&spec, Stroke::Hot), dress(&spec, Stroke::Cold));
        for dir in [Direction::Expand, Direction::Compress] {
            let s = MeasurementSetup::coupled(&h, &c, dir).unwrap();
            let u = s.unitary();
            assert!(max_abs(&(u.adjoint() * u - identity(32))) < 1e-15);
            assert!(is_hermitian(s.hamiltonian(), 0.0));
            assert!(verify_energy_conservation_of_unitary(&s) <= 1e-12);
        }
        let single = MeasurementSetup::single(&levels(), Direction::Expand).unwrap();
        assert!(verify_energy_conservation_of_unitary(&single) <= 1e-12);
    }

    #[test]
    fn corrupted_storage_is_detected() {
        let s = MeasurementSetup::single(&levels(), Direction::Expand)
            .unwrap()
            .with_storage_shift(1, 0.1);
        // [U, H] picks up ±0.1 on the swapped pair
        assert!((verify_energy_conservation_of_unitary(&s) - 0.1).abs() < 1e-12);
    }

    #[test]
    fn coupled_formula_and_decoupled_limit() {
        let spec = CoupledSystemSpec::new(3.0, 2.0, 1.0, 0.4).unwrap();
        let (h, c) = (dress(&spec, Stroke::Hot), dress(&spec, Stroke::Cold));
        let p = [0.4, 0.3, 0.2, 0.1];
        let rho = DensityMatrix::from_populations(&p).unwrap();
        let w = coupled_extracted_work(&rho, &h, &c, Direction::Expand).unwrap();
        let expected = p[1] * (h.omega_tilde_2 - c.omega_tilde_2)
            + p[2] * (h.omega_tilde_1 - c.omega_tilde_1)
            + p[3] * (3.0 - 2.0);
        assert!((w - expected).abs() < 1e-14);

        let free = CoupledSystemSpec::new(2.0, 1.0, 1.0, 0.0).unwrap();
        let w0 = coupled_extracted_work(
            &rho,
            &dress(&free, Stroke::Hot),
            &dress(&free, Stroke::Cold),
            Direction::Expand,
        )
        .unwrap();
        let marginal = DensityMatrix::from_populations(&[p[0] + p[1], p[2] + p[3]]).unwrap();
        let ws = single_qubit_extracted_work(&marginal, &levels(), Direction::Expand).unwrap();
        assert!((w0 - ws).abs() < 1e-12);
    }

    #[test]
    fn coherent_input_rejected_for_coupled() {
        let spec = CoupledSystemSpec::new(3.0, 2.0, 1.0, 0.4).unwrap();
        let mut m = diag(&[0.4, 0.3, 0.2, 0.1]);
        m[(1, 2)] = re(0.05);
        m[(2, 1)] = re(0.05);
        let rho = DensityMatrix::new(m).unwrap();
        let r = coupled_extracted_work(&rho, &dress(&spec, Stroke::Hot), &dress(&spec, Stroke::Cold), Direction::Expand);
        assert!(matches!(r, Err(Error::NotDiagonal(_))));
    }

    #[test]
    fn readout_keeps_system_and_is_normalized() {
        let spec = CoupledSystemSpec::new(3.0, 2.0, 1.0, 0.4).unwrap();
        let s = MeasurementSetup::coupled(&dress(&spec, Stroke::Hot), &dress(&spec, Stroke::Cold), Direction::Compress)
            .unwrap();
        let p = [0.1, 0.2, 0.3, 0.4];
        let r = s.measure(&DensityMatrix::from_populations(&p).unwrap()).unwrap();
        assert!((r.storage_distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (a, b) in r.system_populations.iter().zip(&p) {
            assert!((a - b).abs() < 1e-12);
        }
        // storage ends in level b with the system's population of b
        for (a, b) in r.storage_distribution.iter().zip(&p) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
