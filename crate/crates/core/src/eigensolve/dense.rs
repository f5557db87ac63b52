use std::sync::Arc;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64 as C64;

use super::selection::{nearest_indices, residual_norm, EigenSelection, SolverKind};
use crate::entanglement::SectorState;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{eigh_complex, eigh_real, eigvals_complex, eigvals_real};
use crate::model::{SectorBasis, SparseHermitianOperator};

/// Largest sector dimension diagonalized densely (`N = 14` at `S^z = 0`).
pub const MAX_DENSE_DIM: usize = 13_000;

fn guard(dim: usize) -> Result<()> {
    if dim > MAX_DENSE_DIM {
        return Err(Error::Capacity {
            what: "dense eigensolver dimension",
            size: dim,
            limit: MAX_DENSE_DIM,
            hint: "use the filtered interior solver",
        });
    }
    Ok(())
}

/// Full eigendecomposition, real arithmetic when the operator allows it.
pub struct DenseEigensystem {
    pub values: Vec<f64>,
    vectors: Vectors,
}

enum Vectors {
    Real(Mat<f64>),
    Complex(Mat<C64>),
}

pub fn dense_eigensystem(h: &SparseHermitianOperator) -> Result<DenseEigensystem> {
    guard(h.dim())?;
    let dim = h.dim();
    if h.is_real() {
        let mut m = Mat::<f64>::zeros(dim, dim);
        for (i, j, v) in h.iter() {
            m[(i, j)] = v.re;
        }
        let (values, u) = eigh_real(&m)?;
        Ok(DenseEigensystem {
            values,
            vectors: Vectors::Real(u),
        })
    } else {
        let mut m = Mat::<C64>::zeros(dim, dim);
        for (i, j, v) in h.iter() {
            m[(i, j)] = v;
        }
        let (values, u) = eigh_complex(&m)?;
        Ok(DenseEigensystem {
            values,
            vectors: Vectors::Complex(u),
        })
    }
}

impl DenseEigensystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<C64> {
        match &self.vectors {
            Vectors::Real(u) => u.col_as_slice(j).iter().map(|&x| C64::new(x, 0.0)).collect(),
            Vectors::Complex(u) => u.col_as_slice(j).to_vec(),
        }
    }

    /// Coefficients `U^H ψ`.
    pub fn project(&self, psi: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim(), psi.len())?;
        Ok(match &self.vectors {
            Vectors::Real(u) => (0..self.dim())
                .map(|j| u.col_as_slice(j).iter().zip(psi).map(|(&a, b)| b * a).sum())
                .collect(),
            Vectors::Complex(u) => (0..self.dim())
                .map(|j| u.col_as_slice(j).iter().zip(psi).map(|(a, b)| a.conj() * b).sum())
                .collect(),
        })
    }

    /// `U C` for a column-major coefficient block `C` of shape `dim x ncols`.
    pub fn reconstruct(&self, coeffs: &Mat<C64>) -> Mat<C64> {
        let (dim, ncols) = (self.dim(), coeffs.ncols());
        match &self.vectors {
            Vectors::Complex(u) => {
                let mut out = Mat::<C64>::zeros(dim, ncols);
                matmul(out.as_mut(), Accum::Replace, u.as_ref(), coeffs.as_ref(), C64::new(1.0, 0.0), Par::Seq);
                out
            }
            Vectors::Real(u) => {
                let re = Mat::<f64>::from_fn(dim, ncols, |i, j| coeffs[(i, j)].re);
                let im = Mat::<f64>::from_fn(dim, ncols, |i, j| coeffs[(i, j)].im);
                let mut out_re = Mat::<f64>::zeros(dim, ncols);
                let mut out_im = Mat::<f64>::zeros(dim, ncols);
                matmul(out_re.as_mut(), Accum::Replace, u.as_ref(), re.as_ref(), 1.0, Par::Seq);
                matmul(out_im.as_mut(), Accum::Replace, u.as_ref(), im.as_ref(), 1.0, Par::Seq);
                Mat::from_fn(dim, ncols, |i, j| C64::new(out_re[(i, j)], out_im[(i, j)]))
            }
        }
    }
}

/// Every eigenvalue, ascending.
pub fn dense_eigenvalues(h: &SparseHermitianOperator) -> Result<Vec<f64>> {
    guard(h.dim())?;
    let dim = h.dim();
    if h.is_real() {
        let mut m = Mat::<f64>::zeros(dim, dim);
        for (i, j, v) in h.iter() {
            m[(i, j)] = v.re;
        }
        eigvals_real(&m)
    } else {
        let mut m = Mat::<C64>::zeros(dim, dim);
        for (i, j, v) in h.iter() {
            m[(i, j)] = v;
        }
        eigvals_complex(&m)
    }
}

/// Every eigenpair, ascending in energy.
pub fn dense_spectrum(h: &SparseHermitianOperator, basis: &Arc<SectorBasis>) -> Result<EigenSelection> {
    check_dim(basis.dim(), h.dim())?;
    let sys = dense_eigensystem(h)?;
    let idx: Vec<usize> = (0..sys.dim()).collect();
    let (lo, hi) = (sys.values[0], sys.values[sys.dim() - 1]);
    collect(h, basis, &sys, &idx, 0.5 * (lo + hi))
}

/// The `n_eps` eigenpairs nearest the spectral center, without materializing the rest.
pub fn dense_middle(h: &SparseHermitianOperator, basis: &Arc<SectorBasis>, n_eps: usize) -> Result<EigenSelection> {
    check_dim(basis.dim(), h.dim())?;
    if n_eps > h.dim() {
        return Err(Error::param(format!("requested {n_eps} eigenpairs from dimension {}", h.dim())));
    }
    let sys = dense_eigensystem(h)?;
    let center = 0.5 * (sys.values[0] + sys.values[sys.dim() - 1]);
    let idx = nearest_indices(&sys.values, center, n_eps);
    collect(h, basis, &sys, &idx, center)
}

fn collect(
    h: &SparseHermitianOperator,
    basis: &Arc<SectorBasis>,
    sys: &DenseEigensystem,
    idx: &[usize],
    center: f64,
) -> Result<EigenSelection> {
    let mut values = Vec::with_capacity(idx.len());
    let mut vectors = Vec::with_capacity(idx.len());
    let mut residual_norms = Vec::with_capacity(idx.len());
    for &j in idx {
        let v = sys.vector(j);
        residual_norms.push(residual_norm(h, &v, sys.values[j]));
        values.push(sys.values[j]);
        vectors.push(SectorState::normalized(basis.clone(), v)?);
    }
    Ok(EigenSelection {
        values,
        vectors,
        center,
        sigma: None,
        solver: SolverKind::Dense,
        residual_norms,
        theta_min: None,
        filter_order: None,
    })
}
