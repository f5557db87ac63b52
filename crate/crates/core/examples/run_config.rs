//! Config-driven runs: an equilibrium sweep chained into a collapse fit.
//!
//! ```text
//! cargo run --release --example run_config
//! ```

use dmchain::pipeline::{apply_overrides, parse_config, run_pipeline};

const SWEEP: &str = r#"
pipeline = "equilibrium_sweep"

[model]
N = [8, 10]
h = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0]

[sampling]
n_R = 20
master_seed = 42

[observables]
list = ["gap_ratio", "ggm"]
"#;

fn main() -> dmchain::Result<()> {
    let root = std::env::temp_dir().join("dmchain-run-config");
    let sweep_dir = root.join("sweep");
    let text = apply_overrides(SWEEP, &[format!("output_dir={:?}", sweep_dir.display().to_string())])?;
    let cfg = parse_config(&text)?;
    println!("{}", cfg.to_toml()?);
    let m = run_pipeline(&cfg, None)?;
    println!("sweep: {} units, config {}", m.n_units, &m.config_hash[..12]);

    let fss = apply_overrides(
        &text,
        &[
            "pipeline=\"fss\"".into(),
            format!("output_dir={:?}", root.join("fss").display().to_string()),
            format!("analysis.input={:?}", sweep_dir.join("sweep.csv").display().to_string()),
        ],
    )?;
    let m = run_pipeline(&parse_config(&fss)?, None)?;
    for f in &m.outputs {
        println!("  {}", root.join("fss").join(f).display());
    }
    Ok(())
}
