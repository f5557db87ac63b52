//! Configuration, orchestration and persistence of the seven pipelines.

mod config;
mod run;

pub use config::{
    apply_overrides, load_config, parse_config, AnalysisConfig, DynamicsConfig, ExperimentConfig, ModelConfig, Observable,
    ObservablesConfig, Pipeline, SamplingConfig, SAMPLING_TABLE,
};
pub use run::{config_hash, read_series, run_pipeline, RunManifest, SeedEntry, UnitFailure, MANIFEST_FILE, MAX_FAILURE_FRACTION};
