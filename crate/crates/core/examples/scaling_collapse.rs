//! Finite-size-scaling collapse of the quenched GGM over N = 8, 10, 12.
//!
//! ```text
//! cargo run --release --example scaling_collapse
//! ```

use dmchain::analysis::{fss_fit, FitBox, ScalingDataset, ScalingRow};
use dmchain::eigensolve::SolverSettings;
use dmchain::entanglement::{ggm, GgmMode};
use dmchain::model::{BoundaryCondition, CouplingParams};
use dmchain::observables::quenched_average;
use dmchain::observables::DisorderEnsemble;

fn main() -> dmchain::Result<()> {
    let hs: Vec<f64> = (1..=14).map(|k| 0.5 * k as f64).collect();
    let mut rows = Vec::new();
    for (n, n_eps, n_r) in [(8, 22, 100), (10, 80, 30), (12, 200, 6)] {
        for (k, &h) in hs.iter().enumerate() {
            let ens = DisorderEnsemble {
                n_sites: n,
                h,
                coupling: CouplingParams::heisenberg(),
                bc: BoundaryCondition::Periodic,
                n_eps,
                n_realizations: n_r,
                master_seed: 9,
                h_index: k,
                solver: SolverSettings::default(),
            };
            let out = quenched_average(&ens, "ggm", |s| Ok(ggm(s, GgmMode::Exact)?.value))?;
            rows.push(ScalingRow {
                n_sites: n,
                h,
                x: out.record.mean,
                stderr: out.record.stderr,
            });
        }
        println!("N={n} done");
    }
    let fit = fss_fit(&ScalingDataset::new("ggm", rows)?, &FitBox::default())?;
    println!("h* = {:.2}, nu = {:.2}, cost = {:.3}", fit.h_star, fit.nu, fit.cost_min);
    Ok(())
}
