//! Compressed sparse row storage for Hermitian operators on a sector basis.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use crate::error::{check_dim, Error, Result};

#[derive(Clone, Debug)]
pub struct SparseHermitianOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<C64>,
    // Copy of the real parts, present when every imaginary part is zero.
    real_values: Option<Vec<f64>>,
}

impl SparseHermitianOperator {
    /// Compresses coordinate triplets; duplicate `(row, col)` entries are summed.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, C64)>) -> Result<Self> {
        if dim > u32::MAX as usize {
            return Err(Error::param("dimension exceeds u32 column index range"));
        }
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= dim || *c >= dim) {
            return Err(Error::param(format!(
                "triplet ({r}, {c}) outside a {dim}x{dim} operator"
            )));
        }
        triplets.sort_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<C64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                cols.push(c as u32);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut op = SparseHermitianOperator {
            dim,
            row_ptr,
            cols,
            values,
            real_values: None,
        };
        op.refresh_real_cache();
        Ok(op)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let triplets = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| (i, i, C64::new(d, 0.0)))
            .collect();
        Self::from_triplets(diag.len(), triplets).expect("diagonal triplets are in range")
    }

    fn refresh_real_cache(&mut self) {
        self.real_values = if self.values.iter().all(|v| v.im == 0.0) {
            Some(self.values.iter().map(|v| v.re).collect())
        } else {
            None
        };
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_real(&self) -> bool {
        self.real_values.is_some()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_indices(&self) -> &[u32] {
        &self.cols
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Iterates `(row, col, value)` over stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1]).map(move |k| (r, self.cols[k] as usize, self.values[k]))
        })
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        let span = self.row_ptr[row]..self.row_ptr[row + 1];
        match self.cols[span.clone()].binary_search(&(col as u32)) {
            Ok(k) => self.values[span.start + k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal_entries().iter().sum()
    }

    /// `tr(H†H) = Σ |H_ij|²`.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Largest `|H_ij - conj(H_ji)|` over stored entries.
    pub fn hermiticity_error(&self) -> f64 {
        self.iter()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim * self.dim];
        for (r, c, v) in self.iter() {
            out[r * self.dim + c] = v;
        }
        out
    }

    /// Coordinate-list debug dump, one `row col re im` line per stored entry.
    pub fn to_coo_text(&self) -> String {
        let mut s = String::with_capacity(self.nnz() * 48);
        for (r, c, v) in self.iter() {
            let _ = writeln!(s, "{r} {c} {:.17e} {:.17e}", v.re, v.im);
        }
        s
    }

    pub fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim, x.len())?;
        let mut y = vec![C64::new(0.0, 0.0); self.dim];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// `y = H x`. Panics on length mismatch.
    pub fn apply_into(&self, x: &[C64], y: &mut [C64]) {
        self.affine_into(x, y, 1.0, 0.0);
    }

    /// `y = scale * (H x - shift * x)`.
    pub fn affine_into(&self, x: &[C64], y: &mut [C64], scale: f64, shift: f64) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        match &self.real_values {
            Some(re) => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let span = self.row_ptr[i]..self.row_ptr[i + 1];
                    let mut acc = C64::new(0.0, 0.0);
                    for (&c, &v) in self.cols[span.clone()].iter().zip(&re[span]) {
                        acc += x[c as usize] * v;
                    }
                    *yi = (acc - x[i] * shift) * scale;
                }
            }
            None => {
                for (i, yi) in y.iter_mut().enumerate() {
                    let span = self.row_ptr[i]..self.row_ptr[i + 1];
                    let mut acc = C64::new(0.0, 0.0);
                    for (&c, &v) in self.cols[span.clone()].iter().zip(&self.values[span]) {
                        acc += v * x[c as usize];
                    }
                    *yi = (acc - x[i] * shift) * scale;
                }
            }
        }
    }

    /// Chebyshev three-term update `prev <- 2 * scale * (H cur - shift * cur) - prev`.
    ///
    /// Only `prev[i]` is read when row `i` is written, so the update runs in place.
    pub fn chebyshev_step(&self, cur: &[C64], prev: &mut [C64], scale: f64, shift: f64) {
        assert_eq!(cur.len(), self.dim);
        assert_eq!(prev.len(), self.dim);
        let two_scale = 2.0 * scale;
        match &self.real_values {
            Some(re) => {
                for (i, p) in prev.iter_mut().enumerate() {
                    let span = self.row_ptr[i]..self.row_ptr[i + 1];
                    let mut acc = C64::new(0.0, 0.0);
                    for (&c, &v) in self.cols[span.clone()].iter().zip(&re[span]) {
                        acc += cur[c as usize] * v;
                    }
                    *p = (acc - cur[i] * shift) * two_scale - *p;
                }
            }
            None => {
                for (i, p) in prev.iter_mut().enumerate() {
                    let span = self.row_ptr[i]..self.row_ptr[i + 1];
                    let mut acc = C64::new(0.0, 0.0);
                    for (&c, &v) in self.cols[span.clone()].iter().zip(&self.values[span]) {
                        acc += v * cur[c as usize];
                    }
                    *p = (acc - cur[i] * shift) * two_scale - *p;
                }
            }
        }
    }

    /// `<x|H|x>`; real for Hermitian operators up to rounding.
    pub fn expectation(&self, x: &[C64]) -> Result<C64> {
        let hx = self.apply(x)?;
        Ok(x.iter().zip(&hx).map(|(a, b)| a.conj() * b).sum())
    }
}
