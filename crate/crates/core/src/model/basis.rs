//! Computational basis of a fixed-magnetization sector.
//!
//! Bit `k` of an encoding is 1 when site `k` carries spin up (S^z = +1/2),
//! site 0 being the least significant bit. States are kept in ascending
//! integer order so that lookups are a binary search.

use crate::error::{Error, Result};

pub const MAX_SITES: usize = 18;

/// Total magnetization as an integer number of half units, i.e. `2 S^z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Magnetization(pub i32);

impl Magnetization {
    pub const ZERO: Magnetization = Magnetization(0);

    /// Interprets `sz` as a physical value; it must be a multiple of 1/2.
    pub fn from_f64(sz: f64) -> Result<Self> {
        let twice = 2.0 * sz;
        if !twice.is_finite() || (twice - twice.round()).abs() > 1e-12 {
            return Err(Error::param(format!("S^z = {sz} is not a multiple of 1/2")));
        }
        Ok(Magnetization(twice.round() as i32))
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorBasis {
    n_sites: usize,
    sz: Magnetization,
    n_up: usize,
    states: Vec<u32>,
}

impl SectorBasis {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn magnetization(&self) -> Magnetization {
        self.sz
    }

    /// Number of up spins shared by every encoding in the sector.
    pub fn n_up(&self) -> usize {
        self.n_up
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u32] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u32 {
        self.states[index]
    }

    pub fn index_of(&self, encoding: u32) -> Option<usize> {
        self.states.binary_search(&encoding).ok()
    }

    /// Mask with the low `n_sites` bits set.
    pub fn full_mask(&self) -> u32 {
        ((1u64 << self.n_sites) - 1) as u32
    }
}

/// Lists every `n_sites`-bit encoding with `n_sites / 2 + sz` up spins.
pub fn enumerate_sector(n_sites: usize, sz: Magnetization) -> Result<SectorBasis> {
    if !(2..=MAX_SITES).contains(&n_sites) || n_sites % 2 != 0 {
        return Err(Error::param(format!(
            "site count must be even and within 2..={MAX_SITES}, got {n_sites}"
        )));
    }
    let twice_up = n_sites as i32 + sz.0;
    if sz.0.unsigned_abs() as usize > n_sites || twice_up % 2 != 0 {
        return Err(Error::param(format!(
            "S^z = {} is not reachable with {n_sites} spins",
            sz.value()
        )));
    }
    Ok(SectorBasis::with_up_count(n_sites, (twice_up / 2) as usize))
}

impl SectorBasis {
    /// Sector of any chain length with a fixed number of up spins.
    ///
    /// Odd chains are accepted here for small test states; the Hamiltonian
    /// pipelines go through [`enumerate_sector`].
    pub fn from_up_count(n_sites: usize, n_up: usize) -> Result<SectorBasis> {
        if !(1..=MAX_SITES).contains(&n_sites) || n_up > n_sites {
            return Err(Error::param(format!("no sector with {n_up} up spins on {n_sites} sites")));
        }
        Ok(Self::with_up_count(n_sites, n_up))
    }

    fn with_up_count(n_sites: usize, n_up: usize) -> SectorBasis {
        let mut states = Vec::with_capacity(binomial(n_sites, n_up));
        if n_up == 0 {
            states.push(0);
        } else {
            // Gosper's hack walks the fixed-popcount words in increasing order.
            let limit = 1u64 << n_sites;
            let mut v: u64 = (1u64 << n_up) - 1;
            while v < limit {
                states.push(v as u32);
                let t = v | (v - 1);
                v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            }
        }
        SectorBasis {
            n_sites,
            sz: Magnetization(2 * n_up as i32 - n_sites as i32),
            n_up,
            states,
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
