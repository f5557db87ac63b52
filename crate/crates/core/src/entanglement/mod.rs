//! Reduced density matrices, Schmidt weights and the generalized geometric measure.

mod ggm;
mod histogram;
mod partition;
mod schmidt;
mod state;

use std::path::Path;

pub use ggm::{ggm, ggm_pair, GgmMode, GgmResult, GGM_FLOOR, MAX_EXACT_SITES};
pub use histogram::{ggm_histogram, GgmHistogram, DEFAULT_HISTOGRAM_EPS};
pub use partition::{canonical_bipartitions, Bipartition};
pub use schmidt::{max_schmidt_sq, reduced_density_matrix, MAX_SUBSYSTEM_SITES};
pub use state::{SectorState, NORM_TOLERANCE};
pub(crate) use state::norm as norm_of;

use crate::error::Result;
use crate::output::{fmt_float, write_csv};

/// One eigenstate's entry in a GGM batch table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GgmBatchRow {
    pub realization: usize,
    pub eigen_index: usize,
    pub energy: f64,
    pub ggm: f64,
    pub ggm1: f64,
}

pub fn write_ggm_batch(path: &Path, rows: &[GgmBatchRow]) -> Result<()> {
    write_csv(
        path,
        &["realization", "eigen_index", "energy", "ggm", "ggm1"],
        rows.iter().map(|r| {
            [
                r.realization.to_string(),
                r.eigen_index.to_string(),
                fmt_float(r.energy),
                fmt_float(r.ggm),
                fmt_float(r.ggm1),
            ]
        }),
    )
}
