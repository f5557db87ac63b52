//! Disorder-averaged `ln |C^zz(r)|` on either side of the transition with a
//! two-body DM coupling.
//!
//! ```text
//! cargo run --release --example correlators
//! ```

use dmchain::eigensolve::SolverSettings;
use dmchain::model::{BoundaryCondition, CouplingParams};
use dmchain::observables::{correlator_profile, CorrelatorProfile, DisorderEnsemble, Needs};

fn main() -> dmchain::Result<()> {
    for h in [1.77, 6.23] {
        let ens = DisorderEnsemble {
            n_sites: 12,
            h,
            coupling: CouplingParams::dm(0.5, 0.0)?,
            bc: BoundaryCondition::Periodic,
            n_eps: 200,
            n_realizations: 10,
            master_seed: 3,
            h_index: 0,
            solver: SolverSettings::default(),
        };
        let profiles = ens
            .map(Needs::Vectors, |r| correlator_profile(r.states(), ens.bc))?
            .into_iter()
            .collect::<dmchain::Result<Vec<_>>>()?;
        let avg = CorrelatorProfile::average(&profiles)?;
        let cols: Vec<String> = avg.distances.iter().zip(&avg.values).map(|(r, v)| format!("r={r}: {v:.2}")).collect();
        println!("h={h}  {}", cols.join("  "));
    }
    Ok(())
}
