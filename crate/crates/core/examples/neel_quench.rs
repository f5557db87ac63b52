//! Néel-state quench: single-site GGM growth, logarithmic rate and plateau.
//!
//! ```text
//! cargo run --release --example neel_quench
//! ```

use dmchain::analysis::{transient_fit, ALPHA_THRESHOLD};
use dmchain::dynamics::{evolve_ggm_series, steady_state_value, QuenchParams, TimeGrid};
use dmchain::model::CouplingParams;

fn main() -> dmchain::Result<()> {
    let grid = TimeGrid::default();
    for h in [1.0, 4.0, 8.0] {
        let params = QuenchParams::new(10, h, CouplingParams::heisenberg());
        let series = evolve_ggm_series(&params, &grid, 10, 8)?;
        let fit = transient_fit(&series, None)?;
        let (g_inf, err) = steady_state_value(&series, None)?;
        println!(
            "h={h}: alpha = {:.5} ({}), G_inf = {g_inf:.4} +- {err:.4}, norm drift {:.1e}",
            fit.alpha,
            if fit.alpha > ALPHA_THRESHOLD { "ergodic" } else { "localized" },
            series.max_norm_drift()
        );
        for k in (0..grid.len()).step_by(20) {
            println!("  t = {:>9.2}  G1 = {:.4}", grid.times[k], series.mean_ggm[k]);
        }
    }
    Ok(())
}
