//! Thin wrappers around `faer` dense Hermitian eigensolvers.

use faer::{Mat, Side};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub(crate) fn eigh_complex(m: &Mat<C64>) -> Result<(Vec<f64>, Mat<C64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("dense Hermitian eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..s.nrows()).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

pub(crate) fn eigh_real(m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("dense symmetric eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let values = (0..s.nrows()).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

pub(crate) fn eigvals_complex(m: &Mat<C64>) -> Result<Vec<f64>> {
    let v = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("dense Hermitian eigensolver failed: {e:?}")))?;
    Ok(v)
}

pub(crate) fn eigvals_real(m: &Mat<f64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Solver(format!("dense symmetric eigensolver failed: {e:?}")))
}

/// Largest eigenvalue of a small Hermitian matrix given row-major.
pub(crate) fn max_eigenvalue_small(n: usize, data: &[C64]) -> f64 {
    match n {
        0 => 0.0,
        1 => data[0].re,
        2 => {
            let (a, d) = (data[0].re, data[3].re);
            let b = data[1];
            0.5 * (a + d) + (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt()
        }
        _ => {
            let m = Mat::<C64>::from_fn(n, n, |i, j| data[i * n + j]);
            match m.self_adjoint_eigenvalues(Side::Lower) {
                Ok(v) => v.last().copied().unwrap_or(0.0),
                Err(_) => f64::NAN,
            }
        }
    }
}
