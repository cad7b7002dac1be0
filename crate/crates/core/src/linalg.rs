//! Dense complex linear algebra for 2-, 4- and 16-dimensional problems.
//!
//! Superoperators act on column-major vectorized matrices, so that
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)`. Everything here is value-semantic.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Element-wise tolerance for `M = M†`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const POSITIVITY_SLACK: f64 = 1e-8;

pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn diag(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        entries.len(),
        entries.iter().map(|&x| re(x)),
    ))
}

/// `|0⟩⟨1|`: takes the excited state (index 1) to the ground state (index 0).
pub fn sigma_minus() -> CMatrix {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = re(1.0);
    m
}

pub fn sigma_plus() -> CMatrix {
    sigma_minus().adjoint()
}

/// `|i⟩⟨j|` in dimension `n`.
pub fn ket_bra(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = re(1.0);
    m
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Induced infinity norm (largest absolute row sum).
pub fn norm_inf(m: &CMatrix) -> f64 {
    m.row_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs(&(m - m.adjoint())) <= tol
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * re(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Matrix exponential by scaling and squaring with a Padé core.
pub fn matexp(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.clone().exp())
}

pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// A linear map on `n×n` matrices, stored as an `n²×n²` matrix acting on
/// column-major vectorizations.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    n: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            matrix: CMatrix::zeros(n * n, n * n),
        }
    }

    pub fn from_matrix(n: usize, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != n * n || matrix.ncols() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: matrix.nrows(),
            });
        }
        Ok(Self { n, matrix })
    }

    /// Dimension of the Hilbert space the map acts on.
    pub fn hilbert_dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        if rho.nrows() != self.n || rho.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: rho.nrows(),
            });
        }
        Ok(unvectorize(&(&self.matrix * vectorize(rho)), self.n))
    }

    /// `exp(self · t)` as a new superoperator.
    pub fn exp_scaled(&self, t: f64) -> Result<Self> {
        Ok(Self {
            n: self.n,
            matrix: matexp(&(&self.matrix * re(t)))?,
        })
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(Self {
            n: self.n,
            matrix: &self.matrix * &other.matrix,
        })
    }

    /// `‖vec(𝕀)ᵀ L‖∞`: zero for a trace-preserving generator.
    pub fn trace_defect(&self) -> f64 {
        let id = vectorize(&identity(self.n)).transpose();
        (id * &self.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// One dissipative channel `rate · D[op]`.
#[derive(Debug, Clone)]
pub struct Jump {
    pub rate: f64,
    pub op: CMatrix,
}

impl Jump {
    pub fn new(rate: f64, op: CMatrix) -> Self {
        Self { rate, op }
    }
}

/// Assemble `ρ ↦ −i[H, ρ] + Σ rate · D[o]ρ` with
/// `D[o]ρ = o ρ o† − ½{o†o, ρ}`.
pub fn vectorize_generator(h: &CMatrix, jumps: &[Jump]) -> Result<Superoperator> {
    if !h.is_square() {
        return Err(Error::NonSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let n = h.nrows();
    let id = identity(n);
    let mut l = (kron(&id, h) - kron(&h.transpose(), &id)) * (-I);
    for jump in jumps {
        if jump.rate < 0.0 || jump.rate.is_nan() {
            return Err(Error::NegativeRate(jump.rate));
        }
        if jump.op.nrows() != n || jump.op.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: jump.op.nrows(),
            });
        }
        if jump.rate == 0.0 {
            continue;
        }
        let o = &jump.op;
        let odo = o.adjoint() * o;
        let term = kron(&o.conjugate(), o)
            - (kron(&id, &odo) + kron(&odo.transpose(), &id)) * re(0.5);
        l += term * re(jump.rate);
    }
    Ok(Superoperator { n, matrix: l })
}
