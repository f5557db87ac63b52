//! Disordered Heisenberg chain with two- and three-body Dzyaloshinskii–Moriya
//! couplings, restricted to one magnetization sector.
//!
//! With `S = σ/2` and ladder operators the bond terms read
//!
//! ```text
//! J S_a·S_b                         = J S^z_a S^z_b + J/2 (S+_a S-_b + S-_a S+_b)
//! D (S^x_a S^y_b - S^y_a S^x_b)     = i D/2 (S+_a S-_b - S-_a S+_b)
//! 2D' (S^x_a S^z_b S^y_c - (x<->y)) = i D' S^z_b (S+_a S-_c - S-_a S+_c)
//! ```
//!
//! so the DM terms are purely imaginary hoppings, the three-body one carrying
//! the sign of the intermediate spin.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::basis::SectorBasis;
use super::disorder::DisorderField;
use super::sparse::SparseHermitianOperator;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingParams {
    pub j: f64,
    pub d: f64,
    pub d_prime: f64,
}

impl CouplingParams {
    pub fn new(j: f64, d: f64, d_prime: f64) -> Result<Self> {
        let p = CouplingParams { j, d, d_prime };
        p.validate()?;
        Ok(p)
    }

    /// `J = 1` with the given DM strengths.
    pub fn dm(d: f64, d_prime: f64) -> Result<Self> {
        Self::new(1.0, d, d_prime)
    }

    pub fn heisenberg() -> Self {
        CouplingParams {
            j: 1.0,
            d: 0.0,
            d_prime: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::param(format!("J must be positive, got {}", self.j)));
        }
        if !(self.d >= 0.0 && self.d.is_finite()) || !(self.d_prime >= 0.0 && self.d_prime.is_finite()) {
            return Err(Error::param(format!(
                "DM strengths must be non-negative, got D={} D'={}",
                self.d, self.d_prime
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Periodic,
    Open,
}

impl BoundaryCondition {
    /// Nearest-neighbour pairs `(k, k+1)`.
    pub fn bonds(self, n_sites: usize) -> Vec<(usize, usize)> {
        match self {
            BoundaryCondition::Periodic => (0..n_sites).map(|k| (k, (k + 1) % n_sites)).collect(),
            BoundaryCondition::Open => (0..n_sites.saturating_sub(1)).map(|k| (k, k + 1)).collect(),
        }
    }

    /// Consecutive triples `(k, k+1, k+2)` with three distinct sites.
    pub fn triples(self, n_sites: usize) -> Vec<(usize, usize, usize)> {
        let all: Vec<_> = match self {
            BoundaryCondition::Periodic => (0..n_sites)
                .map(|k| (k, (k + 1) % n_sites, (k + 2) % n_sites))
                .collect(),
            BoundaryCondition::Open => (0..n_sites.saturating_sub(2)).map(|k| (k, k + 1, k + 2)).collect(),
        };
        all.into_iter().filter(|&(a, _, c)| a != c).collect()
    }
}

impl std::fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Open => "open",
        })
    }
}

#[inline]
fn sz(state: u32, site: usize) -> f64 {
    if state >> site & 1 == 1 {
        0.5
    } else {
        -0.5
    }
}

pub fn build_hamiltonian(
    params: &CouplingParams,
    field: &DisorderField,
    basis: &SectorBasis,
    bc: BoundaryCondition,
) -> Result<SparseHermitianOperator> {
    params.validate()?;
    let n = basis.n_sites();
    if field.len() != n {
        return Err(Error::param(format!(
            "disorder field has {} sites but the basis has {n}",
            field.len()
        )));
    }
    let bonds = bc.bonds(n);
    let triples = if params.d_prime != 0.0 { bc.triples(n) } else { Vec::new() };
    let h = field.values();

    let mut triplets = Vec::with_capacity(basis.dim() * (1 + bonds.len() / 2 + triples.len() / 2));
    for (col, &s) in basis.states().iter().enumerate() {
        let mut diag = 0.0;
        for (k, &hk) in h.iter().enumerate() {
            diag += hk * sz(s, k);
        }
        for &(a, b) in &bonds {
            diag += params.j * sz(s, a) * sz(s, b);
            if (s >> a ^ s >> b) & 1 == 1 {
                let flipped = s ^ (1 << a) ^ (1 << b);
                // +1 when the flip raises site a (S+_a S-_b), -1 when it lowers it
                let dir = if s >> a & 1 == 0 { 1.0 } else { -1.0 };
                let amp = C64::new(0.5 * params.j, 0.5 * params.d * dir);
                push_hop(basis, &mut triplets, s, flipped, col, amp)?;
            }
        }
        for &(a, b, c) in &triples {
            if (s >> a ^ s >> c) & 1 == 1 {
                let flipped = s ^ (1 << a) ^ (1 << c);
                let dir = if s >> a & 1 == 0 { 1.0 } else { -1.0 };
                let amp = C64::new(0.0, params.d_prime * sz(s, b) * dir);
                push_hop(basis, &mut triplets, s, flipped, col, amp)?;
            }
        }
        triplets.push((col, col, C64::new(diag, 0.0)));
    }
    SparseHermitianOperator::from_triplets(basis.dim(), triplets)
}

fn push_hop(
    basis: &SectorBasis,
    out: &mut Vec<(usize, usize, C64)>,
    from: u32,
    to: u32,
    col: usize,
    amp: C64,
) -> Result<()> {
    debug_assert_eq!(from.count_ones(), to.count_ones());
    let row = basis
        .index_of(to)
        .ok_or_else(|| Error::Solver(format!("hop target {to:#b} left the sector")))?;
    out.push((row, col, amp));
    Ok(())
}
