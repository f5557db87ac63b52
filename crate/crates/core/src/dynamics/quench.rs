//! Néel quench: trajectories, disorder-averaged GGM series and their steady value.

use std::path::Path;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::TimeGrid;
use super::propagate::{chebyshev_propagate_in_place, PropagatorWork, DEFAULT_EPS_M};
use crate::eigensolve::{dense_eigensystem, extremal_bounds, normalize_operator, DenseEigensystem, DEFAULT_MARGIN};
use crate::entanglement::{ggm, GgmMode, SectorState};
use crate::error::{check_dim, Error, Result};
use crate::model::{build_hamiltonian, enumerate_sector, sample_disorder, BoundaryCondition, CouplingParams, Magnetization, SectorBasis, SparseHermitianOperator};
use crate::observables::{aggregate, pairwise_sum, StderrMethod};
use crate::output::{fmt_float, write_csv};
use crate::seeding::derive_seed;

/// Half-width of the accepted Néel energy window, as a fraction of the bandwidth.
pub const NEEL_WINDOW: f64 = 0.1;

pub const DEFAULT_STEADY_T_LO: f64 = 1e4;

/// Alternating product state with the odd sites up.
pub fn neel_state(basis: Arc<SectorBasis>) -> Result<SectorState> {
    let n = basis.n_sites();
    if n % 2 != 0 || basis.magnetization() != Magnetization::ZERO {
        return Err(Error::param(format!("Néel state needs the Sz = 0 sector of an even chain, got N = {n}")));
    }
    let encoding = (0..n).filter(|k| k % 2 == 1).fold(0u32, |acc, k| acc | 1 << k);
    SectorState::basis_state(basis, encoding)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagator {
    /// One Chebyshev expansion per grid interval.
    #[default]
    Chebyshev,
    /// Full eigendecomposition, every grid time at once.
    Dense,
}

/// Everything that defines one quench ensemble apart from its size and seed.
#[derive(Clone, Debug)]
pub struct QuenchParams {
    pub n_sites: usize,
    pub h: f64,
    pub coupling: CouplingParams,
    pub bc: BoundaryCondition,
    pub h_index: usize,
    pub propagator: Propagator,
    pub mode: GgmMode,
    pub eps_m: f64,
    pub margin: f64,
}

impl QuenchParams {
    pub fn new(n_sites: usize, h: f64, coupling: CouplingParams) -> Self {
        QuenchParams {
            n_sites,
            h,
            coupling,
            bc: BoundaryCondition::Open,
            h_index: 0,
            propagator: Propagator::default(),
            mode: GgmMode::SingleSite,
            eps_m: DEFAULT_EPS_M,
            margin: DEFAULT_MARGIN,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.coupling.validate()?;
        if !(self.h >= 0.0 && self.h.is_finite()) {
            return Err(Error::param(format!("disorder strength must be finite and non-negative, got {}", self.h)));
        }
        if !(self.eps_m > 0.0) {
            return Err(Error::param("eps_m must be positive"));
        }
        Ok(())
    }
}

/// One realization's GGM time series and its conservation diagnostics.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub index: usize,
    pub seed: u64,
    pub ggm: Vec<f64>,
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
    /// Néel energy as a fraction of the way from `E_min` to `E_max`.
    pub neel_position: f64,
}

impl Trajectory {
    pub fn neel_in_window(&self) -> bool {
        (self.neel_position - 0.5).abs() <= NEEL_WINDOW
    }
}

/// Evolves the Néel state of realization `index` across `grid`.
pub fn evolve_realization(params: &QuenchParams, grid: &TimeGrid, basis: &Arc<SectorBasis>, master_seed: u64, index: usize) -> Result<Trajectory> {
    let seed = derive_seed(master_seed, params.n_sites, params.h_index, index);
    let field = sample_disorder(params.h, params.n_sites, seed)?;
    let h = build_hamiltonian(&params.coupling, &field, basis, params.bc)?;
    let psi0 = neel_state(basis.clone())?;
    let e0 = h.expectation(psi0.amplitudes())?.re;

    let mut tracker = Tracker::new(&h, e0, grid.len());
    let (e_min, e_max) = match params.propagator {
        Propagator::Dense => {
            let sys = dense_eigensystem(&h)?;
            let states = dense_states(&sys, psi0.amplitudes(), &grid.times)?;
            for k in 0..grid.len() {
                tracker.record(basis, states.col_as_slice(k), params.mode)?;
            }
            (sys.values[0], *sys.values.last().unwrap())
        }
        Propagator::Chebyshev => {
            let bounds = extremal_bounds(&h, params.margin)?;
            let hn = normalize_operator(&h, bounds)?;
            let mut psi = psi0.amplitudes().to_vec();
            let mut work = PropagatorWork::default();
            let mut t = 0.0;
            for &tk in &grid.times {
                chebyshev_propagate_in_place(&hn, &mut psi, tk - t, params.eps_m, &mut work)?;
                t = tk;
                tracker.record(basis, &psi, params.mode)?;
            }
            (bounds.e_min, bounds.e_max)
        }
    };
    let neel_position = (e0 - e_min) / (e_max - e_min);
    let traj = tracker.finish(index, seed, neel_position);
    if !traj.neel_in_window() {
        log::warn!(
            "N={} h={} realization {index}: Néel energy at {:.3} of the bandwidth, outside the central window",
            params.n_sites,
            params.h,
            neel_position
        );
    }
    Ok(traj)
}

struct Tracker<'a> {
    h: &'a SparseHermitianOperator,
    e0: f64,
    ggm: Vec<f64>,
    norm_drift: f64,
    energy_drift: f64,
}

impl<'a> Tracker<'a> {
    fn new(h: &'a SparseHermitianOperator, e0: f64, len: usize) -> Self {
        Tracker {
            h,
            e0,
            ggm: Vec::with_capacity(len),
            norm_drift: 0.0,
            energy_drift: 0.0,
        }
    }

    fn record(&mut self, basis: &Arc<SectorBasis>, psi: &[C64], mode: GgmMode) -> Result<()> {
        let state = SectorState::new(basis.clone(), psi.to_vec())?;
        self.norm_drift = self.norm_drift.max((state.norm() - 1.0).abs());
        self.energy_drift = self.energy_drift.max((self.h.expectation(psi)?.re - self.e0).abs());
        self.ggm.push(ggm(&state, mode)?.value);
        Ok(())
    }

    fn finish(self, index: usize, seed: u64, neel_position: f64) -> Trajectory {
        Trajectory {
            index,
            seed,
            ggm: self.ggm,
            max_norm_drift: self.norm_drift,
            max_energy_drift: self.energy_drift,
            neel_position,
        }
    }
}

/// `U diag(e^{-iEt}) U^H ψ` for every `t`, one column per time.
pub fn dense_states(sys: &DenseEigensystem, psi: &[C64], times: &[f64]) -> Result<Mat<C64>> {
    check_dim(sys.dim(), psi.len())?;
    let c = sys.project(psi)?;
    let coeffs = Mat::from_fn(sys.dim(), times.len(), |j, k| c[j] * C64::from_polar(1.0, -sys.values[j] * times[k]));
    Ok(sys.reconstruct(&coeffs))
}

/// `e^{-iHt} ψ` from a full eigendecomposition.
pub fn dense_propagate(sys: &DenseEigensystem, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    Ok(dense_states(sys, psi, &[t])?.col_as_slice(0).to_vec())
}

/// Disorder-averaged GGM after a Néel quench.
#[derive(Clone, Debug)]
pub struct QuenchSeries {
    pub grid: TimeGrid,
    pub mean_ggm: Vec<f64>,
    pub stderr: Vec<f64>,
    pub n_realizations: usize,
    pub stderr_method: StderrMethod,
    pub n_sites: usize,
    pub h: f64,
    pub d: f64,
    pub d_prime: f64,
    /// Successful trajectories in realization order.
    pub trajectories: Vec<Trajectory>,
    pub failures: Vec<(usize, String)>,
}

impl QuenchSeries {
    /// Averages the successful trajectories; failed realizations are listed, not averaged.
    pub fn from_results(params: &QuenchParams, grid: &TimeGrid, results: Vec<Result<Trajectory>>) -> Result<Self> {
        let mut failures = Vec::new();
        let mut trajectories = Vec::new();
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(t) => trajectories.push(t),
                Err(e) => failures.push((i, e.to_string())),
            }
        }
        if trajectories.is_empty() {
            return Err(Error::Solver(format!("every quench realization failed; first: {:?}", failures.first())));
        }
        let mut mean_ggm = Vec::with_capacity(grid.len());
        let mut stderr = Vec::with_capacity(grid.len());
        let mut method = StderrMethod::Blocks;
        for k in 0..grid.len() {
            let col: Vec<f64> = trajectories.iter().map(|t| t.ggm[k]).collect();
            let (m, s, how) = aggregate(&col)?;
            mean_ggm.push(m);
            stderr.push(s);
            method = how;
        }
        Ok(QuenchSeries {
            grid: grid.clone(),
            mean_ggm,
            stderr,
            n_realizations: trajectories.len(),
            stderr_method: method,
            n_sites: params.n_sites,
            h: params.h,
            d: params.coupling.d,
            d_prime: params.coupling.d_prime,
            trajectories,
            failures,
        })
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.trajectories.iter().map(|t| t.max_norm_drift).fold(0.0, f64::max)
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.trajectories.iter().map(|t| t.max_energy_drift).fold(0.0, f64::max)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_csv(
            path,
            &["t", "mean_ggm", "stderr", "n_realizations"],
            (0..self.grid.len()).map(|k| {
                [
                    fmt_float(self.grid.times[k]),
                    fmt_float(self.mean_ggm[k]),
                    fmt_float(self.stderr[k]),
                    self.n_realizations.to_string(),
                ]
            }),
        )
    }
}

/// Runs `n_realizations` quenches in parallel; the first failure aborts with its realization id.
pub fn evolve_ggm_series(params: &QuenchParams, grid: &TimeGrid, n_realizations: usize, master_seed: u64) -> Result<QuenchSeries> {
    let results = evolve_all(params, grid, n_realizations, master_seed)?;
    if let Some((i, e)) = results.iter().enumerate().find_map(|(i, r)| r.as_ref().err().map(|e| (i, e))) {
        return Err(Error::Solver(format!("quench realization {i} failed: {e}")));
    }
    QuenchSeries::from_results(params, grid, results)
}

/// Per-realization results in index order, failures kept.
pub fn evolve_all(params: &QuenchParams, grid: &TimeGrid, n_realizations: usize, master_seed: u64) -> Result<Vec<Result<Trajectory>>> {
    params.validate()?;
    if n_realizations == 0 {
        return Err(Error::param("need at least one quench realization"));
    }
    let basis = Arc::new(enumerate_sector(params.n_sites, Magnetization::ZERO)?);
    Ok((0..n_realizations)
        .into_par_iter()
        .map(|r| evolve_realization(params, grid, &basis, master_seed, r))
        .collect())
}

/// Time average of the mean series over grid points in `[lo, hi]`, with its standard error.
pub fn steady_state_value(series: &QuenchSeries, window: Option<(f64, f64)>) -> Result<(f64, f64)> {
    let (lo, hi) = window.unwrap_or((DEFAULT_STEADY_T_LO, series.grid.t_max));
    let idx = series.grid.window(lo, hi);
    if idx.is_empty() {
        return Err(Error::param(format!("no grid times inside [{lo}, {hi}]")));
    }
    let per: Vec<f64> = series
        .trajectories
        .iter()
        .map(|t| pairwise_sum(&idx.iter().map(|&k| t.ggm[k]).collect::<Vec<_>>()) / idx.len() as f64)
        .collect();
    let value = pairwise_sum(&idx.iter().map(|&k| series.mean_ggm[k]).collect::<Vec<_>>()) / idx.len() as f64;
    let (_, stderr, _) = aggregate(&per)?;
    Ok((value, stderr))
}
