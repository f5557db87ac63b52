//! Level statistics, zz correlators and quenched averaging.

mod correlator;
mod gap;
mod quenched;

pub use correlator::{correlator_profile, pairs_at_distance, zz_correlator, CorrelatorProfile, LN_CLAMP};
pub use gap::{gap_ratios, GapRatioSeries, DEGENERACY_TOLERANCE};
pub use quenched::{
    aggregate, quenched_average, read_sweep_csv, write_sweep_csv, DisorderEnsemble, Needs, QuenchedOutcome, Realization,
    StderrMethod, SweepRecord, N_BLOCKS,
};

/// Sum in a fixed binary-tree order, independent of how the input was produced.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
