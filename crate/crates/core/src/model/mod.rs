//! Sector bases, disorder sampling and Hamiltonian assembly.

mod basis;
mod disorder;
mod hamiltonian;
mod sparse;

pub use basis::{binomial, enumerate_sector, Magnetization, SectorBasis, MAX_SITES};
pub use disorder::{sample_disorder, DisorderField};
pub use hamiltonian::{build_hamiltonian, BoundaryCondition, CouplingParams};
pub use sparse::SparseHermitianOperator;

use num_complex::Complex64 as C64;

use crate::error::Result;

/// `y = H x`, not renormalized.
pub fn apply(op: &SparseHermitianOperator, x: &[C64]) -> Result<Vec<C64>> {
    op.apply(x)
}
