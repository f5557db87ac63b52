//! Reduced density matrices and maximal Schmidt weights of sector states.
//!
//! For a state of fixed total magnetization the reduced matrix of any
//! subsystem is block diagonal in the subsystem magnetization. Each block is
//! the Gram matrix of an amplitude block `M[a, b]` whose rows run over
//! configurations of `A` with a given number of up spins and whose columns
//! run over the matching configurations of `B`.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use super::partition::Bipartition;
use super::state::SectorState;
use crate::error::{check_dim, Error, Result};
use crate::linalg::max_eigenvalue_small;
use crate::model::{binomial, MAX_SITES};

pub const MAX_SUBSYSTEM_SITES: usize = 14;

/// Packs the bits of `x` selected by `mask` into the low bits.
#[inline]
pub(crate) fn extract_bits(x: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    let mut bit = 0;
    while m != 0 {
        let low = m.trailing_zeros();
        out |= (x >> low & 1) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

/// Dense reduced density matrix `ρ_A = tr_B |ψ><ψ|`, row-major with
/// dimension `2^|A|`. Index bit `i` is the `i`-th site of `A` in ascending order.
pub fn reduced_density_matrix(state: &SectorState, part: &Bipartition) -> Result<Vec<C64>> {
    check_dim(state.n_sites(), part.n_sites())?;
    let size_a = part.size();
    if size_a > MAX_SUBSYSTEM_SITES {
        return Err(Error::Capacity {
            what: "subsystem size",
            size: size_a,
            limit: MAX_SUBSYSTEM_SITES,
            hint: "use the complementary subsystem or a smaller cut",
        });
    }
    let dim_a = 1usize << size_a;
    let (mask_a, mask_b) = (part.mask(), part.complement_mask());

    let mut entries: Vec<(u32, u32, C64)> = state
        .basis()
        .states()
        .iter()
        .zip(state.amplitudes())
        .filter(|(_, a)| a.norm_sqr() != 0.0)
        .map(|(&s, &amp)| (extract_bits(s, mask_b), extract_bits(s, mask_a), amp))
        .collect();
    entries.sort_by_key(|&(b, a, _)| (b, a));

    let mut rho = vec![C64::new(0.0, 0.0); dim_a * dim_a];
    for group in entries.chunk_by(|x, y| x.0 == y.0) {
        for &(_, a, u) in group {
            for &(_, a2, v) in group {
                rho[a as usize * dim_a + a2 as usize] += u * v.conj();
            }
        }
    }
    Ok(rho)
}

/// Largest eigenvalue of `ρ_A`, i.e. the largest squared Schmidt coefficient.
pub fn max_schmidt_sq(state: &SectorState, part: &Bipartition) -> Result<f64> {
    check_dim(state.n_sites(), part.n_sites())?;
    let mut scratch = SchmidtScratch::new(state.n_sites());
    Ok(scratch
        .max_schmidt_sq_above(state, part.mask(), f64::NEG_INFINITY)
        .unwrap_or(0.0))
}

/// Reusable buffers for scanning many cuts of states on the same chain.
pub(crate) struct SchmidtScratch {
    block: Vec<C64>,
    gram: Vec<C64>,
    weights: Vec<f64>,
}

impl SchmidtScratch {
    pub(crate) fn new(n_sites: usize) -> Self {
        SchmidtScratch {
            block: Vec::new(),
            gram: Vec::new(),
            weights: Vec::with_capacity(n_sites + 1),
        }
    }

    /// Largest Schmidt weight across the cut `mask_a` if it exceeds `floor`.
    ///
    /// Blocks whose weight or Frobenius norm is at most `floor` cannot carry
    /// a larger eigenvalue and are skipped, so `None` certifies that the
    /// maximal weight is `<= floor`.
    pub(crate) fn max_schmidt_sq_above(&mut self, state: &SectorState, mask_a: u32, floor: f64) -> Option<f64> {
        let n = state.n_sites();
        let full = state.basis().full_mask();
        let mask_b = !mask_a & full;
        let size_a = mask_a.count_ones() as usize;
        let size_b = n - size_a;
        let n_up = state.basis().n_up();
        // The smaller side indexes the lookup tables; the argument is symmetric.
        let (mask_a, mask_b, size_a, size_b) = if size_a <= size_b {
            (mask_a, mask_b, size_a, size_b)
        } else {
            (mask_b, mask_a, size_b, size_a)
        };

        block_weights(state, mask_a, size_a, &mut self.weights);
        let mut best: Option<f64> = None;
        let mut cut = floor;
        for m_a in 0..=size_a {
            let weight = self.weights[m_a];
            if weight <= cut || n_up < m_a || n_up - m_a > size_b {
                continue;
            }
            let rows = binomial(size_a, m_a);
            let cols = binomial(size_b, n_up - m_a);
            let lambda = if rows == 1 || cols == 1 {
                weight
            } else {
                self.fill_block(state, mask_a, mask_b, m_a, rows, cols);
                let k = rows.min(cols);
                self.fill_gram(rows, cols);
                let frob = self.gram.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if frob <= cut {
                    continue;
                }
                max_eigenvalue_small(k, &self.gram)
            };
            if lambda > cut {
                cut = lambda;
                best = Some(lambda);
            }
        }
        best
    }

    fn fill_block(&mut self, state: &SectorState, mask_a: u32, mask_b: u32, m_a: usize, rows: usize, cols: usize) {
        self.block.clear();
        self.block.resize(rows * cols, C64::new(0.0, 0.0));
        let rank = rank_table();
        for (&s, &amp) in state.basis().states().iter().zip(state.amplitudes()) {
            let a = extract_bits(s, mask_a);
            if a.count_ones() as usize != m_a {
                continue;
            }
            let b = extract_bits(s, mask_b);
            let r = rank[a as usize] as usize;
            let c = rank[b as usize] as usize;
            self.block[r * cols + c] = amp;
        }
    }

    // Gram matrix on the smaller side of the block.
    fn fill_gram(&mut self, rows: usize, cols: usize) {
        let m = &self.block;
        if rows <= cols {
            self.gram.clear();
            self.gram.resize(rows * rows, C64::new(0.0, 0.0));
            for i in 0..rows {
                let ri = &m[i * cols..(i + 1) * cols];
                for j in i..rows {
                    let rj = &m[j * cols..(j + 1) * cols];
                    let z: C64 = ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum();
                    self.gram[i * rows + j] = z;
                    self.gram[j * rows + i] = z.conj();
                }
            }
        } else {
            self.gram.clear();
            self.gram.resize(cols * cols, C64::new(0.0, 0.0));
            for r in 0..rows {
                let row = &m[r * cols..(r + 1) * cols];
                for i in 0..cols {
                    let xi = row[i].conj();
                    if xi == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for j in i..cols {
                        self.gram[i * cols + j] += xi * row[j];
                    }
                }
            }
            for i in 0..cols {
                for j in 0..i {
                    self.gram[i * cols + j] = self.gram[j * cols + i].conj();
                }
            }
        }
    }
}

/// Weight of each subsystem-magnetization block, indexed by up-spin count in `A`.
fn block_weights(state: &SectorState, mask_a: u32, size_a: usize, w: &mut Vec<f64>) {
    w.clear();
    w.resize(size_a + 1, 0.0);
    for (&s, a) in state.basis().states().iter().zip(state.amplitudes()) {
        w[(s & mask_a).count_ones() as usize] += a.norm_sqr();
    }
}

/// `rank[x]` is the position of `x` among all words with the same popcount.
fn rank_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut seen = [0u32; MAX_SITES + 1];
        (0..1u32 << MAX_SITES)
            .map(|x| {
                let c = &mut seen[x.count_ones() as usize];
                *c += 1;
                *c - 1
            })
            .collect()
    })
}
