use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::dense::{dense_eigenvalues, dense_middle};
use super::polfed::{polfed_interior, PolfedConfig};
use super::selection::{nearest_indices, EigenSelection, SolverKind};
use crate::error::Result;
use crate::model::{SectorBasis, SparseHermitianOperator};

/// Which solver handles a sector, chosen by its dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSettings {
    /// Sectors up to this size are diagonalized densely.
    pub dense_max_dim: usize,
    pub polfed: PolfedConfig,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            dense_max_dim: 3500,
            polfed: PolfedConfig::default(),
        }
    }
}

impl SolverSettings {
    pub fn kind_for(&self, dim: usize) -> SolverKind {
        if dim <= self.dense_max_dim {
            SolverKind::Dense
        } else {
            SolverKind::Polfed
        }
    }
}

/// The `n_eps` mid-spectrum eigenpairs with the configured solver.
pub fn solve_middle(
    h: &SparseHermitianOperator,
    basis: &Arc<SectorBasis>,
    n_eps: usize,
    settings: &SolverSettings,
) -> Result<EigenSelection> {
    match settings.kind_for(h.dim()) {
        SolverKind::Dense => dense_middle(h, basis, n_eps),
        SolverKind::Polfed => {
            let cfg = PolfedConfig {
                n_eps,
                ..settings.polfed.clone()
            };
            polfed_interior(h, basis, &cfg)
        }
    }
}

/// Mid-spectrum eigenvalues only, ascending; skips eigenvectors on the dense path.
pub fn solve_middle_values(
    h: &SparseHermitianOperator,
    basis: &Arc<SectorBasis>,
    n_eps: usize,
    settings: &SolverSettings,
) -> Result<Vec<f64>> {
    let mut v = match settings.kind_for(h.dim()) {
        SolverKind::Dense => {
            let all = dense_eigenvalues(h)?;
            if n_eps > all.len() {
                return Err(crate::error::Error::param(format!(
                    "requested {n_eps} eigenvalues from dimension {}",
                    all.len()
                )));
            }
            let center = 0.5 * (all[0] + all[all.len() - 1]);
            nearest_indices(&all, center, n_eps).into_iter().map(|i| all[i]).collect()
        }
        SolverKind::Polfed => solve_middle(h, basis, n_eps, settings)?.values,
    };
    v.sort_by(f64::total_cmp);
    Ok(v)
}
