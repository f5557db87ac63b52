use serde::{Deserialize, Serialize};

use super::partition::{canonical_bipartitions, Bipartition};
use super::schmidt::SchmidtScratch;
use super::state::SectorState;
use crate::error::{Error, Result};

/// Largest chain for which every bipartition is visited.
pub const MAX_EXACT_SITES: usize = 14;

/// Values below this are reported as exactly zero.
pub const GGM_FLOOR: f64 = 1e-12;

// Schmidt weights closer than this are treated as tied.
const TIE_TOLERANCE: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GgmMode {
    Exact,
    SingleSite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GgmResult {
    pub value: f64,
    pub mode: GgmMode,
    /// Lexicographically first cut attaining the largest Schmidt weight.
    pub argmax_partition: Bipartition,
    pub max_lambda_sq: f64,
}

/// Generalized geometric measure `1 - max λ²` over the cuts selected by `mode`.
pub fn ggm(state: &SectorState, mode: GgmMode) -> Result<GgmResult> {
    match mode {
        GgmMode::SingleSite => Ok(single_site(state)),
        GgmMode::Exact => {
            let mut scratch = SchmidtScratch::new(state.n_sites());
            exact(state, &mut scratch)
        }
    }
}

/// Both measures of one state, sharing the single-site pass.
pub fn ggm_pair(state: &SectorState) -> Result<(GgmResult, GgmResult)> {
    let mut scratch = SchmidtScratch::new(state.n_sites());
    Ok((exact(state, &mut scratch)?, single_site(state)))
}

fn single_site(state: &SectorState) -> GgmResult {
    let n = state.n_sites();
    let (site, lambda) = state
        .up_populations()
        .into_iter()
        .map(|p| p.max(1.0 - p))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (k, l)| if l > best.1 + TIE_TOLERANCE { (k, l) } else { best });
    GgmResult {
        value: clamp(1.0 - lambda),
        mode: GgmMode::SingleSite,
        argmax_partition: Bipartition::single_site(n, site).expect("site within chain").canonical(),
        max_lambda_sq: lambda,
    }
}

fn exact(state: &SectorState, scratch: &mut SchmidtScratch) -> Result<GgmResult> {
    let n = state.n_sites();
    if n > MAX_EXACT_SITES {
        return Err(Error::Capacity {
            what: "chain length for exact GGM",
            size: n,
            limit: MAX_EXACT_SITES,
            hint: "use the single-site mode",
        });
    }
    if n < 2 {
        return Err(Error::param("a bipartition needs at least two sites"));
    }
    // Single-site cuts are cheap and give a floor that prunes most blocks.
    let seed = single_site(state).max_lambda_sq;
    let mut floor = seed - 2.0 * TIE_TOLERANCE;
    let mut best: Option<(f64, u32)> = None;
    for &mask in canonical_bipartitions(n) {
        if let Some(lambda) = scratch.max_schmidt_sq_above(state, mask, floor) {
            if best.is_none_or(|(b, _)| lambda > b + TIE_TOLERANCE) {
                best = Some((lambda, mask));
                floor = floor.max(lambda - TIE_TOLERANCE);
            }
        }
    }
    let (lambda, mask) = best.ok_or_else(|| Error::Solver("no bipartition reached the single-site bound".into()))?;
    Ok(GgmResult {
        value: clamp(1.0 - lambda),
        mode: GgmMode::Exact,
        argmax_partition: Bipartition::from_mask(n, mask)?,
        max_lambda_sq: lambda,
    })
}

fn clamp(g: f64) -> f64 {
    if g < GGM_FLOOR {
        0.0
    } else {
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_sector, Magnetization, SectorBasis};
    use num_complex::Complex64 as C64;
    use std::sync::Arc;

    fn basis(n: usize) -> Arc<SectorBasis> {
        Arc::new(enumerate_sector(n, Magnetization::ZERO).unwrap())
    }

    #[test]
    fn product_state_is_zero() {
        let b = basis(8);
        for i in [0, 17, 69] {
            let s = SectorState::basis_state(b.clone(), b.state(i)).unwrap();
            assert_eq!(ggm(&s, GgmMode::Exact).unwrap().value, 0.0);
            assert_eq!(ggm(&s, GgmMode::SingleSite).unwrap().value, 0.0);
        }
    }

    #[test]
    fn ghz_is_half() {
        let b = basis(8);
        let e1 = 0b1010_1010;
        let e2 = 0b0101_0101;
        let mut amps = vec![C64::new(0.0, 0.0); b.dim()];
        amps[b.index_of(e1).unwrap()] = C64::new(1.0, 0.0);
        amps[b.index_of(e2).unwrap()] = C64::new(0.0, 1.0);
        let s = SectorState::normalized(b, amps).unwrap();
        for mode in [GgmMode::Exact, GgmMode::SingleSite] {
            let r = ggm(&s, mode).unwrap();
            assert!((r.value - 0.5).abs() < 1e-14);
            assert_eq!(r.argmax_partition.sites(), vec![0], "ties resolve to the first cut");
        }
    }

    #[test]
    fn w_state_third() {
        let b = Arc::new(SectorBasis::from_up_count(3, 1).unwrap());
        let s = SectorState::normalized(b, vec![C64::new(1.0, 0.0); 3]).unwrap();
        let (e, s1) = ggm_pair(&s).unwrap();
        assert!((e.value - 1.0 / 3.0).abs() < 1e-15);
        assert!((s1.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_pairs_need_larger_cuts() {
        // Singlets on (0,1) and (2,3): single-site weight 1/2, cut {0,1} is a product.
        let b = basis(4);
        let mut amps = vec![C64::new(0.0, 0.0); b.dim()];
        for (enc, sign) in [(0b0101u32, 1.0), (0b0110, -1.0), (0b1001, -1.0), (0b1010, 1.0)] {
            amps[b.index_of(enc).unwrap()] = C64::new(sign, 0.0);
        }
        let s = SectorState::normalized(b, amps).unwrap();
        let (e, s1) = ggm_pair(&s).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.argmax_partition.sites(), vec![0, 1]);
        assert!((s1.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_mode_guard() {
        let b = basis(16);
        let s = SectorState::basis_state(b.clone(), b.state(0)).unwrap();
        assert!(matches!(ggm(&s, GgmMode::Exact), Err(Error::Capacity { .. })));
        assert!(ggm(&s, GgmMode::SingleSite).is_ok());
    }
}
