use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{check_dim, Error, Result};
use crate::model::SectorBasis;

pub const NORM_TOLERANCE: f64 = 1e-10;

/// Normalized amplitude vector over a sector basis.
#[derive(Clone, Debug)]
pub struct SectorState {
    basis: Arc<SectorBasis>,
    amplitudes: Vec<C64>,
}

impl SectorState {
    /// Wraps amplitudes that are already normalized within [`NORM_TOLERANCE`].
    pub fn new(basis: Arc<SectorBasis>, amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(basis.dim(), amplitudes.len())?;
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::param(format!("state norm is {norm}, expected 1")));
        }
        Ok(SectorState { basis, amplitudes })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(basis: Arc<SectorBasis>, mut amplitudes: Vec<C64>) -> Result<Self> {
        check_dim(basis.dim(), amplitudes.len())?;
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::param("cannot normalize a zero or non-finite vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= n);
        Ok(SectorState { basis, amplitudes })
    }

    /// Unit mass on one computational basis state.
    pub fn basis_state(basis: Arc<SectorBasis>, encoding: u32) -> Result<Self> {
        let idx = basis
            .index_of(encoding)
            .ok_or_else(|| Error::param(format!("encoding {encoding:#b} is not in the sector")))?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); basis.dim()];
        amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(SectorState { basis, amplitudes })
    }

    pub fn basis(&self) -> &SectorBasis {
        &self.basis
    }

    pub fn basis_arc(&self) -> &Arc<SectorBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }

    pub fn overlap(&self, other: &SectorState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability that site `k` points up, for every site.
    pub fn up_populations(&self) -> Vec<f64> {
        let n = self.n_sites();
        let mut p = vec![0.0; n];
        for (&s, a) in self.basis.states().iter().zip(&self.amplitudes) {
            let w = a.norm_sqr();
            if w == 0.0 {
                continue;
            }
            let mut bits = s;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                p[k] += w;
                bits &= bits - 1;
            }
        }
        p
    }
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}
