use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dmchain::pipeline::{apply_overrides, parse_config, run_pipeline, Pipeline};

#[derive(Parser)]
#[command(version, about = "Disordered Heisenberg chains with Dzyaloshinskii-Moriya couplings")]
struct Cli {
    #[command(subcommand)]
    pipeline: Command,
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, replacing `output_dir`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed, replacing `sampling.master_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, env = "DMCHAIN_WORKERS")]
    workers: Option<usize>,
    /// `section.key=value`, applied in order after the file.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Eigenvalues of every realization.
    Spectrum,
    /// Quenched averages over field strengths and sizes.
    EquilibriumSweep,
    /// GGM histograms of mid-spectrum eigenstates.
    Distribution,
    /// Néel quench GGM series.
    Dynamics,
    /// Finite-size-scaling collapse of a sweep.
    Fss,
    /// Logarithmic growth fits of quench series.
    Transient,
    /// Size scaling of the quench plateau.
    Steady,
}

impl Command {
    fn pipeline(self) -> Pipeline {
        match self {
            Command::Spectrum => Pipeline::Spectrum,
            Command::EquilibriumSweep => Pipeline::EquilibriumSweep,
            Command::Distribution => Pipeline::Distribution,
            Command::Dynamics => Pipeline::Dynamics,
            Command::Fss => Pipeline::Fss,
            Command::Transient => Pipeline::Transient,
            Command::Steady => Pipeline::Steady,
        }
    }
}

fn run(cli: Cli) -> dmchain::Result<()> {
    let text = match &cli.config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| dmchain::Error::io(p, e))?,
        None => String::new(),
    };
    let mut overrides = vec![format!("pipeline=\"{}\"", cli.pipeline.pipeline().name())];
    if let Some(out) = &cli.out {
        overrides.push(format!("output_dir={:?}", out.display().to_string()));
    }
    if let Some(seed) = cli.seed {
        overrides.push(format!("sampling.master_seed={seed}"));
    }
    overrides.extend(cli.overrides);
    let cfg = parse_config(&apply_overrides(&text, &overrides)?)?;
    let manifest = run_pipeline(&cfg, cli.workers)?;
    println!(
        "{}: {} outputs in {} ({} units, {} failed, {:.1} s)",
        cfg.pipeline.name(),
        manifest.outputs.len(),
        cfg.output_dir.display(),
        manifest.n_units,
        manifest.failures.len(),
        manifest.wall_clock_seconds
    );
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
