//! Dense verification oracle for small lattices: materializes the search
//! iterate column by column and diagonalizes it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::controlled::{ControlConfig, ControlledOps};
use crate::error::{Result, SearchError};
use crate::lattice::{ProblemInstance, Space, StateVector};
use crate::walk::WalkOps;

/// Largest side the dense oracle accepts.
pub const MAX_DENSE_SIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DenseOperator {
    /// `W` on the joint space.
    Walk,
    /// `U_W` on the joint space.
    Akr,
    /// `U_C` on the controlled space.
    Controlled(ControlConfig),
}

impl DenseOperator {
    fn space(&self) -> Space {
        match self {
            DenseOperator::Walk | DenseOperator::Akr => Space::Joint,
            DenseOperator::Controlled(_) => Space::Controlled,
        }
    }
}

/// Builds the operator as a dense matrix by applying it to every basis vector.
pub fn dense_matrix(instance: &ProblemInstance, which: DenseOperator) -> Result<DMatrix<Complex64>> {
    let side = instance.side();
    if side > MAX_DENSE_SIDE {
        return Err(SearchError::DenseTooLarge {
            side,
            max: MAX_DENSE_SIDE,
        });
    }
    let space = which.space();
    let dim = space.dim(instance.n_sites());
    let walk = WalkOps::new(*instance);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dim {
        let mut col = StateVector::basis(space, side, j);
        match which {
            DenseOperator::Walk => walk.apply_walk(&mut col)?,
            DenseOperator::Akr => walk.apply_search_iterate(&mut col)?,
            DenseOperator::Controlled(cfg) => ControlledOps::new(*instance, cfg).apply_u_c(&mut col)?,
        }
        for (i, a) in col.amplitudes().iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    Ok(m)
}

/// Eigendecomposition of a unitary, sorted by `|phase|`.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub eigenvalues: Vec<Complex64>,
    /// Eigenphases in `(-pi, pi]`.
    pub phases: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub vectors: DMatrix<Complex64>,
    /// Largest strictly-upper entry of the Schur factor; zero for an exactly
    /// normal input.
    pub off_diagonal: f64,
    space: Space,
    side: usize,
}

impl UnitaryEigen {
    pub fn vector(&self, k: usize) -> StateVector {
        let side = self.side;
        StateVector::from_amplitudes(self.space, side, self.vectors.column(k).iter().copied().collect())
    }

    /// Smallest eigenphase above `floor`.
    pub fn principal_phase(&self, floor: f64) -> Result<f64> {
        self.phases
            .iter()
            .copied()
            .filter(|&ph| ph > floor)
            .min_by(|a, b| a.total_cmp(b))
            .ok_or(SearchError::NoEigenphase)
    }

    /// Indices of eigenvalues within `tol` of `e^{i phase}`.
    pub fn indices_near(&self, phase: f64, tol: f64) -> Vec<usize> {
        let target = Complex64::from_polar(1.0, phase);
        (0..self.eigenvalues.len())
            .filter(|&k| (self.eigenvalues[k] - target).norm() < tol)
            .collect()
    }
}

impl UnitaryEigen {
    fn new(
        space: Space,
        side: usize,
        eigenvalues: Vec<Complex64>,
        vectors: DMatrix<Complex64>,
        off_diagonal: f64,
    ) -> Self {
        let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
        order.sort_by(|&a, &b| {
            eigenvalues[a]
                .arg()
                .abs()
                .total_cmp(&eigenvalues[b].arg().abs())
                .then(eigenvalues[a].arg().total_cmp(&eigenvalues[b].arg()))
        });
        let sorted_vals: Vec<Complex64> = order.iter().map(|&k| eigenvalues[k]).collect();
        let mut sorted_vecs = DMatrix::<Complex64>::zeros(vectors.nrows(), vectors.ncols());
        for (dst, &src) in order.iter().enumerate() {
            sorted_vecs.set_column(dst, &vectors.column(src));
        }
        Self {
            phases: sorted_vals.iter().map(|z| z.arg()).collect(),
            eigenvalues: sorted_vals,
            vectors: sorted_vecs,
            off_diagonal,
            space,
            side,
        }
    }
}

/// Diagonalizes a unitary matrix through its complex Schur form; for a normal
/// matrix the triangular factor is diagonal and the Schur vectors are
/// eigenvectors.
pub fn eigen_unitary(m: DMatrix<Complex64>, space: Space, side: usize) -> Result<UnitaryEigen> {
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-14, 100_000).ok_or(SearchError::EigenFailed)?;
    let (q, t) = schur.unpack();
    let n = t.nrows();
    let mut off = 0.0f64;
    for j in 0..n {
        for i in 0..j {
            off = off.max(t[(i, j)].norm());
        }
    }
    let vals: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    Ok(UnitaryEigen::new(space, side, vals, q, off))
}

/// Dense eigendecomposition of `U_W` or `U_C` (or `W`) at `side <= 8`.
pub fn dense_oracle(instance: &ProblemInstance, which: DenseOperator) -> Result<UnitaryEigen> {
    let m = dense_matrix(instance, which)?;
    eigen_unitary(m, which.space(), instance.side())
}

/// `||M v - lambda v||` for a dense matrix and a state.
pub fn eigen_residual(m: &DMatrix<Complex64>, v: &StateVector, lambda: Complex64) -> f64 {
    let x = DVector::from_column_slice(v.amplitudes());
    let y = m * &x - x * lambda;
    y.norm()
}
