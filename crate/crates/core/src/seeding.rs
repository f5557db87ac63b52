//! Per-work-unit seeds derived from one master seed.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of realization `realization` at chain length `n_sites` and disorder index `h_index`.
///
/// Each component is absorbed through a SplitMix64 round, so the result is a
/// pure function of the tuple.
pub fn derive_seed(master_seed: u64, n_sites: usize, h_index: usize, realization: usize) -> u64 {
    let mut s = mix(master_seed.wrapping_add(GOLDEN));
    for (lane, part) in [n_sites as u64, h_index as u64, realization as u64].into_iter().enumerate() {
        s = mix(s ^ part.wrapping_add(GOLDEN.wrapping_mul(lane as u64 + 2)));
    }
    s
}
