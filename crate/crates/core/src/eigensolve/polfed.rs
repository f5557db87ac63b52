//! Polynomially filtered interior eigensolver.
//!
//! A Chebyshev filter maps the eigenvalues near the target onto the top of
//! the spectrum of `f(H~)`, whose dominant eigenpairs are found with a
//! thick-restart Krylov iteration. A final Rayleigh-Ritz step with `H` on the
//! converged subspace separates states at equal filter value on opposite
//! sides of the target.

use std::sync::Arc;

use faer::linalg::matmul::matmul;
use faer::{Accum, Mat, Par};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::bounds::{extremal_bounds, normalize_operator, NormalizedOperator, SpectralBounds, DEFAULT_MARGIN};
use super::filter::{ChebyshevFilter, FilterWork};
use super::krylov::{columns_to_states, KrylovSpace};
use super::selection::{nearest_indices, EigenSelection, SolverKind};
use crate::error::{check_dim, Error, Result};
use crate::linalg::eigh_complex;
use crate::model::{SectorBasis, SparseHermitianOperator};

/// Residual bound on accepted eigenpairs of `H`.
pub const ACCEPTED_RESIDUAL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolfedConfig {
    /// Filter target in the normalized spectrum; `None` targets the spectral center.
    pub sigma: Option<f64>,
    /// Filter order; `None` estimates it from the density of states.
    pub order: Option<usize>,
    pub n_eps: usize,
    pub theta_floor: f64,
    /// Krylov space size; `None` picks roughly twice the number of wanted pairs.
    pub krylov_dim: Option<usize>,
    /// Attempts with a lowered filter order after a `θ_min` rejection.
    pub max_restarts: usize,
    /// Thick restarts of the Krylov iteration per attempt.
    pub max_cycles: usize,
    /// Residual tolerance on the filtered Ritz pairs.
    pub tolerance: f64,
    pub margin: f64,
    pub seed: u64,
}

impl Default for PolfedConfig {
    fn default() -> Self {
        PolfedConfig {
            sigma: None,
            order: None,
            n_eps: 1,
            theta_floor: 0.2,
            krylov_dim: None,
            max_restarts: 6,
            max_cycles: 500,
            tolerance: 1e-10,
            margin: DEFAULT_MARGIN,
            seed: 0x706f_6c66_6564,
        }
    }
}

impl PolfedConfig {
    pub fn new(n_eps: usize) -> Self {
        PolfedConfig {
            n_eps,
            ..Default::default()
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.n_eps == 0 || self.n_eps > dim {
            return Err(Error::param(format!("n_eps = {} must lie in 1..={dim}", self.n_eps)));
        }
        if self.order == Some(0) {
            return Err(Error::param("filter order must be at least 1"));
        }
        if !(self.theta_floor > 0.17 && self.theta_floor < 1.0) {
            return Err(Error::param(format!("theta_floor {} outside (0.17, 1)", self.theta_floor)));
        }
        if let Some(s) = self.sigma {
            if !(-1.0..=1.0).contains(&s) {
                return Err(Error::param(format!("sigma {s} outside [-1, 1]")));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::param("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Filter order that keeps roughly `n_eps` states inside the main lobe.
///
/// The density of the normalized spectrum at `sigma` is modelled as a
/// Gaussian with the exact first two moments of `H`; the main lobe of the
/// order-`K` filter spans about `±2/K`.
pub fn auto_filter_order(h: &SparseHermitianOperator, bounds: SpectralBounds, sigma: f64, n_eps: usize) -> usize {
    let dim = h.dim() as f64;
    let a = bounds.a();
    let mean = h.trace() / dim;
    let var = (h.frobenius_norm_sq() / dim - mean * mean).max(f64::MIN_POSITIVE);
    let s = var.sqrt() / a;
    let mu = (mean - bounds.b()) / a;
    let rho = (-(sigma - mu).powi(2) / (2.0 * s * s)).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
    let k = 4.0 * dim * rho / n_eps as f64;
    if k >= 10.0 {
        ((k / 10.0).round() * 10.0).min(1e5) as usize
    } else {
        k.round().max(2.0) as usize
    }
}

/// The `n_eps` eigenpairs nearest the filter target.
pub fn polfed_interior(
    h: &SparseHermitianOperator,
    basis: &Arc<SectorBasis>,
    config: &PolfedConfig,
) -> Result<EigenSelection> {
    check_dim(basis.dim(), h.dim())?;
    config.validate(h.dim())?;
    let bounds = extremal_bounds(h, config.margin)?;
    let hn = normalize_operator(h, bounds)?;
    let sigma = config.sigma.unwrap_or(0.0);
    let mut order = config.order.unwrap_or_else(|| auto_filter_order(h, bounds, sigma, config.n_eps));
    let mut last_theta = f64::NAN;
    for attempt in 0..=config.max_restarts {
        let filter = ChebyshevFilter::new(sigma, order)?;
        let sel = filtered_solve(&hn, basis, &filter, config)?;
        let theta = sel.theta_min.unwrap_or(f64::NAN);
        log::debug!("filtered solve attempt {attempt}: order {order}, theta_min {theta:.4}");
        if theta > config.theta_floor {
            return Ok(sel);
        }
        last_theta = theta;
        // A lower order widens the main lobe and raises θ_min.
        let next = ((order as f64 / 1.5).round() as usize).max(1);
        if next == order {
            break;
        }
        order = next;
    }
    Err(Error::Solver(format!(
        "filtered solve rejected: theta_min {last_theta:.4} <= {} at order {order} after {} attempts",
        config.theta_floor,
        config.max_restarts + 1
    )))
}

fn filtered_solve(
    hn: &NormalizedOperator,
    basis: &Arc<SectorBasis>,
    filter: &ChebyshevFilter,
    config: &PolfedConfig,
) -> Result<EigenSelection> {
    let h = hn.operator();
    let dim = hn.dim();
    let n_eps = config.n_eps;
    let n_want = (n_eps + (n_eps / 5).max(10)).min(dim);
    let m = config
        .krylov_dim
        .unwrap_or((2 * n_want).max(n_want + 40))
        .clamp(n_want, dim);
    let keep = (n_want + (m - n_want) / 2).min(m.saturating_sub(1)).max(1);

    let mut space = KrylovSpace::new(dim, m, config.seed);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    let mut work = FilterWork::default();
    let mut converged = None;
    let mut worst = f64::INFINITY;
    for cycle in 0..config.max_cycles {
        while space.len() < m {
            filter.apply_into(hn, space.next_vector(), &mut w, &mut work);
            space.extend(&mut w);
        }
        let ritz = space.ritz()?;
        worst = ritz.residuals[..n_want].iter().copied().fold(0.0, f64::max);
        if worst <= config.tolerance || m == dim {
            log::debug!("filtered Krylov converged after {} cycles", cycle + 1);
            converged = Some(space.ritz_vectors(&ritz, n_want));
            break;
        }
        space.restart(&ritz, keep);
    }
    let u = converged.ok_or_else(|| {
        Error::Solver(format!(
            "filtered Krylov iteration did not converge in {} cycles (order {}, worst residual {worst:.3e})",
            config.max_cycles,
            filter.order()
        ))
    })?;

    // Rayleigh-Ritz with H on the converged filtered subspace.
    let k = u.ncols();
    let mut hu = Mat::<C64>::zeros(dim, k);
    for j in 0..k {
        h.apply_into(u.col_as_slice(j), hu.col_as_slice_mut(j));
    }
    let mut g = Mat::<C64>::zeros(k, k);
    matmul(g.as_mut(), Accum::Replace, u.adjoint(), hu.as_ref(), C64::new(1.0, 0.0), Par::Seq);
    let g = Mat::<C64>::from_fn(k, k, |i, j| 0.5 * (g[(i, j)] + g[(j, i)].conj()));
    let (energies, z) = eigh_complex(&g)?;
    let mut vecs = Mat::<C64>::zeros(dim, k);
    let mut hvecs = Mat::<C64>::zeros(dim, k);
    matmul(vecs.as_mut(), Accum::Replace, u.as_ref(), z.as_ref(), C64::new(1.0, 0.0), Par::Seq);
    matmul(hvecs.as_mut(), Accum::Replace, hu.as_ref(), z.as_ref(), C64::new(1.0, 0.0), Par::Seq);

    let bounds = hn.bounds();
    let center = bounds.from_normalized(filter.sigma());
    let idx = nearest_indices(&energies, center, n_eps);
    let mut residual_norms = Vec::with_capacity(n_eps);
    let mut values = Vec::with_capacity(n_eps);
    let chosen = Mat::<C64>::from_fn(dim, n_eps, |r, c| vecs[(r, idx[c])]);
    let mut theta_min = f64::INFINITY;
    for &j in &idx {
        let e = energies[j];
        let r = vecs
            .col_as_slice(j)
            .iter()
            .zip(hvecs.col_as_slice(j))
            .map(|(v, hv)| (hv - v * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual_norms.push(r);
        values.push(e);
        theta_min = theta_min.min(filter.eval(bounds.to_normalized(e)));
    }
    let worst_residual = residual_norms.iter().copied().fold(0.0, f64::max);
    if worst_residual >= ACCEPTED_RESIDUAL {
        return Err(Error::Solver(format!(
            "filtered eigenpairs have residual {worst_residual:.3e} >= {ACCEPTED_RESIDUAL:e}"
        )));
    }
    Ok(EigenSelection {
        values,
        vectors: columns_to_states(basis, &chosen)?,
        center,
        sigma: Some(filter.sigma()),
        solver: SolverKind::Polfed,
        residual_norms,
        theta_min: Some(theta_min),
        filter_order: Some(filter.order()),
    })
}
