//! Generalized geometric measure of mid-spectrum eigenstates and its
//! single-site approximation, with the distribution at weak and strong disorder.
//!
//! ```text
//! cargo run --release --example multipartite_entanglement
//! ```

use dmchain::eigensolve::SolverSettings;
use dmchain::entanglement::{ggm_histogram, ggm_pair};
use dmchain::model::{BoundaryCondition, CouplingParams};
use dmchain::observables::{DisorderEnsemble, Needs};

fn main() -> dmchain::Result<()> {
    for h in [1.0, 8.0] {
        let ens = DisorderEnsemble {
            n_sites: 10,
            h,
            coupling: CouplingParams::heisenberg(),
            bc: BoundaryCondition::Periodic,
            n_eps: 80,
            n_realizations: 40,
            master_seed: 5,
            h_index: 0,
            solver: SolverSettings::default(),
        };
        let per = ens.map(Needs::Vectors, |r| {
            r.states()
                .iter()
                .map(|s| ggm_pair(s).map(|(g, g1)| (g.value, g1.value)))
                .collect::<dmchain::Result<Vec<_>>>()
        })?;
        let pairs: Vec<(f64, f64)> = per.into_iter().collect::<dmchain::Result<Vec<_>>>()?.concat();
        let n = pairs.len() as f64;
        let g = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let g1 = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        println!("h={h}: mean G = {g:.4}, mean G1 = {g1:.4} over {} states", pairs.len());

        let samples: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let hist = ggm_histogram(&samples, 0.025)?;
        for (c, m) in hist.centers.iter().zip(&hist.mass) {
            println!("  {c:.3} {}", "#".repeat((m * 200.0).round() as usize));
        }
    }
    Ok(())
}
