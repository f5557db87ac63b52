//! Orthonormal Krylov bases with explicit projected matrices.
//!
//! Each new vector is orthogonalized against the whole basis twice (classical
//! Gram-Schmidt with one reorthogonalization pass). The projections are kept,
//! so the projected matrix `V^H A V` is assembled column by column without
//! assuming a tridiagonal structure, which keeps thick restarts trivial.

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, MatMut, MatRef, Par};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::SectorState;
use crate::linalg::eigh_complex;
use crate::error::Result;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Relative norm drop under which the new direction is treated as lost.
const BREAKDOWN: f64 = 1e-10;

pub(crate) fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..dim)
        .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let n = crate::entanglement::norm_of(&v);
    v.iter_mut().for_each(|x| *x /= n);
    v
}

pub(crate) struct KrylovSpace {
    dim: usize,
    basis: Mat<C64>,
    proj: Mat<C64>,
    len: usize,
    rng: ChaCha8Rng,
}

impl KrylovSpace {
    /// Space for up to `capacity` vectors, started from a seeded random vector.
    pub(crate) fn new(dim: usize, capacity: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut basis = Mat::<C64>::zeros(dim, capacity + 1);
        let start = random_unit_vector(dim, &mut rng);
        basis.col_as_slice_mut(0).copy_from_slice(&start);
        KrylovSpace {
            dim,
            basis,
            proj: Mat::zeros(capacity + 1, capacity + 1),
            len: 0,
            rng,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    /// The vector that the next `extend` applies the operator to.
    pub(crate) fn next_vector(&self) -> &[C64] {
        self.basis.col_as_slice(self.len)
    }

    /// Adds `w = A v_len` to the projection and stores the next basis vector.
    /// Returns the coupling `β` to the new vector (0 after a breakdown).
    pub(crate) fn extend(&mut self, w: &mut Vec<C64>) -> f64 {
        let j = self.len;
        let upto = j + 1;
        let mut h = vec![ZERO; upto];
        self.orthogonalize(w, upto, &mut h);
        for (i, &hi) in h.iter().enumerate().take(j) {
            self.proj[(j, i)] = hi.conj();
            self.proj[(i, j)] = hi;
        }
        self.proj[(j, j)] = C64::new(h[j].re, 0.0);
        self.len = upto;

        let beta = crate::entanglement::norm_of(w);
        let scale = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() + beta;
        let beta = if beta > BREAKDOWN * scale {
            w.iter_mut().for_each(|x| *x /= beta);
            beta
        } else {
            // Invariant subspace reached; continue from a fresh direction.
            if upto >= self.dim {
                w.iter_mut().for_each(|x| *x = ZERO);
                return 0.0;
            }
            *w = random_unit_vector(self.dim, &mut self.rng);
            let mut scratch = vec![ZERO; upto];
            self.orthogonalize(w, upto, &mut scratch);
            let n = crate::entanglement::norm_of(w);
            w.iter_mut().for_each(|x| *x /= n);
            0.0
        };
        if upto < self.proj.nrows() {
            self.proj[(upto, j)] = C64::new(beta, 0.0);
            self.proj[(j, upto)] = C64::new(beta, 0.0);
        }
        self.basis.col_as_slice_mut(upto).copy_from_slice(w);
        beta
    }

    fn orthogonalize(&self, w: &mut [C64], ncols: usize, h: &mut [C64]) {
        let v = self.basis.subcols(0, ncols);
        let mut c = Mat::<C64>::zeros(ncols, 1);
        for _ in 0..2 {
            matmul(
                c.as_mut(),
                Accum::Replace,
                v.adjoint(),
                MatRef::from_column_major_slice(w, self.dim, 1),
                ONE,
                Par::Seq,
            );
            matmul(
                MatMut::from_column_major_slice_mut(w, self.dim, 1),
                Accum::Add,
                v,
                c.as_ref(),
                -ONE,
                Par::Seq,
            );
            for (hi, ci) in h.iter_mut().zip(c.col_as_slice(0)) {
                *hi += *ci;
            }
        }
    }

    /// Ritz decomposition of the projected matrix, eigenvalues descending.
    ///
    /// The residual of Ritz pair `i` is `|β y_{len-1, i}|` with `β` the last coupling.
    pub(crate) fn ritz(&self) -> Result<Ritz> {
        let m = self.len;
        let g = Mat::<C64>::from_fn(m, m, |i, j| self.proj[(i, j)]);
        let (vals, vecs) = eigh_complex(&g)?;
        let beta = if m < self.proj.nrows() { self.proj[(m, m - 1)].re } else { 0.0 };
        let order: Vec<usize> = (0..m).rev().collect();
        Ok(Ritz {
            values: order.iter().map(|&i| vals[i]).collect(),
            residuals: order.iter().map(|&i| (beta * vecs[(m - 1, i)]).norm()).collect(),
            vectors: Mat::from_fn(m, m, |r, c| vecs[(r, order[c])]),
        })
    }

    /// Replaces the basis by the leading `keep` Ritz vectors and carries the
    /// residual direction over as the next vector.
    pub(crate) fn restart(&mut self, ritz: &Ritz, keep: usize) {
        let m = self.len;
        let y = ritz.vectors.subcols(0, keep);
        let mut u = Mat::<C64>::zeros(self.dim, keep);
        matmul(u.as_mut(), Accum::Replace, self.basis.subcols(0, m), y, ONE, Par::Seq);
        let residual = self.basis.col_as_slice(m).to_vec();
        for j in 0..keep {
            self.basis.col_as_slice_mut(j).copy_from_slice(u.col_as_slice(j));
        }
        self.basis.col_as_slice_mut(keep).copy_from_slice(&residual);
        self.proj.fill(ZERO);
        for (j, &theta) in ritz.values.iter().take(keep).enumerate() {
            self.proj[(j, j)] = C64::new(theta, 0.0);
        }
        self.len = keep;
    }

    /// Ritz vectors for the first `count` Ritz pairs as a `dim x count` matrix.
    pub(crate) fn ritz_vectors(&self, ritz: &Ritz, count: usize) -> Mat<C64> {
        let mut u = Mat::<C64>::zeros(self.dim, count);
        matmul(
            u.as_mut(),
            Accum::Replace,
            self.basis.subcols(0, self.len),
            ritz.vectors.subcols(0, count),
            ONE,
            Par::Seq,
        );
        u
    }
}

pub(crate) struct Ritz {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub vectors: Mat<C64>,
}

/// Orthonormal columns as sector states, renormalized against rounding.
pub(crate) fn columns_to_states(
    basis: &std::sync::Arc<crate::model::SectorBasis>,
    m: &Mat<C64>,
) -> Result<Vec<SectorState>> {
    (0..m.ncols())
        .map(|j| SectorState::normalized(basis.clone(), m.col_as_slice(j).to_vec()))
        .collect()
}
