use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::MAX_SITES;

/// Subsystem `A` of an `A:B` cut, stored as a site mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    n_sites: usize,
    mask: u32,
}

impl Bipartition {
    pub fn new(n_sites: usize, sites: &[usize]) -> Result<Self> {
        if n_sites == 0 || n_sites > MAX_SITES {
            return Err(Error::param(format!("unsupported site count {n_sites}")));
        }
        let mut mask = 0u32;
        for &s in sites {
            if s >= n_sites {
                return Err(Error::param(format!("site {s} outside a {n_sites}-site chain")));
            }
            mask |= 1 << s;
        }
        Self::from_mask(n_sites, mask)
    }

    pub fn from_mask(n_sites: usize, mask: u32) -> Result<Self> {
        let full = ((1u64 << n_sites) - 1) as u32;
        if mask == 0 || mask & full == full || mask & !full != 0 {
            return Err(Error::param("both sides of a bipartition must be non-empty"));
        }
        Ok(Bipartition { n_sites, mask })
    }

    pub fn single_site(n_sites: usize, site: usize) -> Result<Self> {
        Self::new(n_sites, &[site])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn complement_mask(&self) -> u32 {
        !self.mask & ((1u64 << self.n_sites) - 1) as u32
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn sites(&self) -> Vec<usize> {
        (0..self.n_sites).filter(|&k| self.mask >> k & 1 == 1).collect()
    }

    /// The equivalent cut with `|A| <= N/2`, and site 0 in `A` at equality.
    pub fn canonical(&self) -> Bipartition {
        let size = self.size();
        let flip = 2 * size > self.n_sites || (2 * size == self.n_sites && self.mask & 1 == 0);
        if flip {
            Bipartition {
                n_sites: self.n_sites,
                mask: self.complement_mask(),
            }
        } else {
            *self
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sites: Vec<String> = self.sites().iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", sites.join(","))
    }
}

/// Every canonical cut of an `n_sites` chain, ordered lexicographically by
/// the ascending site list of `A`.
pub fn canonical_bipartitions(n_sites: usize) -> &'static [u32] {
    static CACHE: [OnceLock<Vec<u32>>; MAX_SITES + 1] = [const { OnceLock::new() }; MAX_SITES + 1];
    CACHE[n_sites].get_or_init(|| {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        lex_subsets(n_sites, 0, &mut prefix, &mut out);
        out
    })
}

// Depth-first walk emits subsets in lexicographic order of their site lists.
fn lex_subsets(n: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<u32>) {
    for s in start..n {
        prefix.push(s);
        let size = prefix.len();
        if 2 * size < n || (2 * size == n && prefix[0] == 0) {
            out.push(prefix.iter().fold(0u32, |m, &k| m | 1 << k));
        }
        if 2 * (size + 1) <= n {
            lex_subsets(n, s + 1, prefix, out);
        }
        prefix.pop();
    }
}
