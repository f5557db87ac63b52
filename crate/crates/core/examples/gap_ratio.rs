//! Mean gap ratio across the ergodic-to-localized crossover at N = 10.
//!
//! ```text
//! cargo run --release --example gap_ratio
//! ```

use dmchain::eigensolve::SolverSettings;
use dmchain::model::{BoundaryCondition, CouplingParams};
use dmchain::observables::{gap_ratios, DisorderEnsemble, Needs, QuenchedOutcome};

fn main() -> dmchain::Result<()> {
    println!("{:>6} {:>10} {:>10} {:>10}", "h", "D=D'=0", "D=0.5", "D'=0.5");
    for (k, h) in [0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0].into_iter().enumerate() {
        let mut line = format!("{h:>6.1}");
        for (d, dp) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5)] {
            let ens = DisorderEnsemble {
                n_sites: 10,
                h,
                coupling: CouplingParams::dm(d, dp)?,
                bc: BoundaryCondition::Periodic,
                n_eps: 80,
                n_realizations: 100,
                master_seed: 1,
                h_index: k,
                solver: SolverSettings::default(),
            };
            let per = ens.map(Needs::Values, |r| Ok(gap_ratios(&r.energies)?.mean()))?;
            let out = QuenchedOutcome::from_results(&ens, "gap_ratio", per)?;
            line += &format!(" {:>10.4}", out.record.mean);
        }
        println!("{line}");
    }
    println!("GOE 0.5307, GUE 0.5996, Poisson 0.3863");
    Ok(())
}
