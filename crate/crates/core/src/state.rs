use crate::error::{Error, Result};
use crate::linalg::{
    diag, hermitian_eigenvalues, is_hermitian, re, CMatrix, HERMITIAN_TOL, POSITIVITY_SLACK,
};

const TRACE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite state of the working medium,
/// expressed in the current stroke's computational (dressed) frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NonSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if !is_hermitian(&m, HERMITIAN_TOL) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&m)[0];
        if min < -POSITIVITY_SLACK {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn ground(dim: usize) -> Self {
        let mut p = vec![0.0; dim];
        p[0] = 1.0;
        Self(diag(&p))
    }

    pub fn from_populations(p: &[f64]) -> Result<Self> {
        if p.iter().any(|x| *x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidState("populations must be nonnegative".into()));
        }
        Self::new(diag(p))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.0)[0]
    }

    pub fn max_coherence(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    worst = worst.max(self.0[(r, c)].norm());
                }
            }
        }
        worst
    }

    /// Projective measurement in the current basis: drop all coherences.
    pub fn dephased(&self) -> Self {
        let p: Vec<f64> = self.populations();
        Self(diag(&p))
    }

    /// `tr[H ρ]`.
    pub fn expectation(&self, h: &CMatrix) -> f64 {
        (h * &self.0).trace().re
    }

    /// `tr[diag(e) ρ]`.
    pub fn energy(&self, energies: &[f64]) -> f64 {
        self.0
            .diagonal()
            .iter()
            .zip(energies)
            .map(|(p, e)| p.re * e)
            .sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        is_hermitian(&self.0, tol)
    }

    pub fn scaled(&self, x: f64) -> CMatrix {
        &self.0 * re(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    #[test]
    fn ground_state_is_valid() {
        let g = DensityMatrix::ground(4);
        assert_eq!(g.populations(), vec![1.0, 0.0, 0.0, 0.0]);
        assert!(DensityMatrix::new(g.matrix().clone()).is_ok());
    }

    #[test]
    fn rejects_invalid_matrices() {
        assert!(DensityMatrix::new(diag(&[0.6, 0.6])).is_err());
        assert!(DensityMatrix::new(diag(&[1.2, -0.2])).is_err());
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = C64::new(0.1, 0.1);
        assert!(DensityMatrix::new(m.clone()).is_err());
        m[(1, 0)] = C64::new(0.1, -0.1);
        assert!(DensityMatrix::new(m).is_ok());
        assert!(DensityMatrix::from_populations(&[0.5, -0.1, 0.6]).is_err());
    }

    #[test]
    fn dephasing_keeps_populations() {
        let mut m = diag(&[0.3, 0.7]);
        m[(0, 1)] = re(0.2);
        m[(1, 0)] = re(0.2);
        let rho = DensityMatrix::new(m).unwrap();
        let d = rho.dephased();
        assert_eq!(d.populations(), rho.populations());
        assert_eq!(d.max_coherence(), 0.0);
        assert!((rho.energy(&[0.0, 2.0]) - 1.4).abs() < 1e-15);
    }
}
