//! Command-line driver for the denoiser spectral experiments.
//!
//! Each catalog experiment samples random noisy circuits (or their
//! ingredients), computes spectra with `denoiser-core` and writes
//! `spectra.csv` (or `spectra.json`), `summary.json` and `timing.json` to
//! `<out>/<experiment>/`. Given the same configuration the spectra and
//! summary files are byte-identical across runs and worker counts.

pub mod catalog;
pub mod config;
mod error;
pub mod output;
pub mod run;

pub use catalog::{catalog, CatalogEntry, Experiment, NoiseModel, Schedule, System};
pub use config::{ExperimentConfig, OutputFormat, Overrides};
pub use error::{CliError, CliResult};
pub use run::{run_experiment, RunReport, Summary};
