use std::path::Path;

use crate::entanglement::SectorState;
use crate::error::{Error, Result};
use crate::model::BoundaryCondition;
use crate::output::{fmt_float, write_csv};

/// `|C|` below this is raised to it before taking the logarithm.
pub const LN_CLAMP: f64 = 1e-14;

/// `<S^z_k>` and `<S^z_i S^z_j>` for every site pair from one amplitude sweep.
pub(crate) struct ZzMoments {
    n: usize,
    single: Vec<f64>,
    pair: Vec<f64>,
}

impl ZzMoments {
    pub(crate) fn new(state: &SectorState) -> Self {
        let n = state.n_sites();
        let mut single = vec![0.0; n];
        let mut pair = vec![0.0; n * n];
        let mut sz = vec![0.0; n];
        for (&s, a) in state.basis().states().iter().zip(state.amplitudes()) {
            let w = a.norm_sqr();
            if w == 0.0 {
                continue;
            }
            for (k, z) in sz.iter_mut().enumerate() {
                *z = if s >> k & 1 == 1 { 0.5 } else { -0.5 };
                single[k] += w * *z;
            }
            for i in 0..n {
                let wi = w * sz[i];
                for j in i + 1..n {
                    pair[i * n + j] += wi * sz[j];
                }
            }
        }
        ZzMoments { n, single, pair }
    }

    pub(crate) fn connected(&self, i: usize, j: usize) -> f64 {
        let (i, j) = (i.min(j), i.max(j));
        self.pair[i * self.n + j] - self.single[i] * self.single[j]
    }
}

/// Connected correlator `<S^z_i S^z_j> - <S^z_i><S^z_j>`.
pub fn zz_correlator(state: &SectorState, i: usize, j: usize) -> Result<f64> {
    let n = state.n_sites();
    if i == j {
        return Err(Error::param("correlator needs two distinct sites"));
    }
    if i >= n || j >= n {
        return Err(Error::param(format!("sites ({i}, {j}) outside a {n}-site chain")));
    }
    Ok(ZzMoments::new(state).connected(i, j))
}

/// Site pairs at each separation: ring distance `1..=N/2` on a ring, `1..N` on an open chain.
pub fn pairs_at_distance(n_sites: usize, bc: BoundaryCondition) -> Vec<(usize, Vec<(usize, usize)>)> {
    match bc {
        BoundaryCondition::Periodic => (1..=n_sites / 2)
            .map(|r| (r, (0..n_sites).map(|i| (i, (i + r) % n_sites)).collect()))
            .collect(),
        BoundaryCondition::Open => (1..n_sites)
            .map(|r| (r, (0..n_sites - r).map(|i| (i, i + r)).collect()))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorProfile {
    pub distances: Vec<usize>,
    /// Average of `ln |C^zz_r|` at each distance.
    pub values: Vec<f64>,
}

/// Average of `ln |C^zz|` over pairs at each separation and over `states`.
pub fn correlator_profile(states: &[SectorState], bc: BoundaryCondition) -> Result<CorrelatorProfile> {
    let first = states.first().ok_or_else(|| Error::param("correlator profile needs at least one state"))?;
    let n = first.n_sites();
    let groups = pairs_at_distance(n, bc);
    let mut per_state: Vec<Vec<f64>> = vec![Vec::with_capacity(states.len()); groups.len()];
    for s in states {
        if s.n_sites() != n {
            return Err(Error::param("states on different chain lengths"));
        }
        let m = ZzMoments::new(s);
        for (acc, (_, pairs)) in per_state.iter_mut().zip(&groups) {
            let lns: Vec<f64> = pairs.iter().map(|&(i, j)| m.connected(i, j).abs().max(LN_CLAMP).ln()).collect();
            acc.push(super::pairwise_sum(&lns) / lns.len() as f64);
        }
    }
    Ok(CorrelatorProfile {
        distances: groups.iter().map(|(r, _)| *r).collect(),
        values: per_state.iter().map(|v| super::pairwise_sum(v) / v.len() as f64).collect(),
    })
}

impl CorrelatorProfile {
    /// Element-wise mean of profiles with matching distances.
    pub fn average(profiles: &[CorrelatorProfile]) -> Result<CorrelatorProfile> {
        let first = profiles.first().ok_or_else(|| Error::param("no profiles to average"))?;
        if profiles.iter().any(|p| p.distances != first.distances) {
            return Err(Error::param("profiles have different distance sets"));
        }
        let values = (0..first.values.len())
            .map(|k| {
                let col: Vec<f64> = profiles.iter().map(|p| p.values[k]).collect();
                super::pairwise_sum(&col) / col.len() as f64
            })
            .collect();
        Ok(CorrelatorProfile {
            distances: first.distances.clone(),
            values,
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_csv(
            path,
            &["r", "mean_ln_abs_C"],
            self.distances.iter().zip(&self.values).map(|(r, v)| [r.to_string(), fmt_float(*v)]),
        )
    }
}
