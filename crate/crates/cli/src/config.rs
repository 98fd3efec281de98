//! Experiment configuration: catalog defaults merged with user overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogEntry, Experiment, NoiseModel, Schedule, System};
use crate::error::{CliError, CliResult};

/// Environment variable that replaces the default output directory.
pub const OUT_ENV: &str = "DENOISER_OUT";
pub const DEFAULT_OUT: &str = "out";
pub const DEFAULT_SEED: u64 = 1234;
/// Superoperator dimension `N²` from which a run needs `allow_large`.
pub const LARGE_SUPEROP_DIM: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn spectra_file(self) -> &'static str {
        match self {
            Self::Csv => "spectra.csv",
            Self::Json => "spectra.json",
        }
    }
}

/// Everything that determines an experiment's outputs, plus where to put
/// them and how many workers to use. Only the serialized part enters the
/// output files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub systems: Vec<System>,
    pub schedules: Vec<Schedule>,
    pub ensemble: usize,
    pub contour_pool: usize,
    pub contour_angles: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub allow_large: bool,
    #[serde(skip)]
    pub out_dir: PathBuf,
    #[serde(skip)]
    pub threads: usize,
}

/// User-supplied replacements for catalog defaults. Empty lists keep the
/// default.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub qubits: Vec<usize>,
    pub layers: Vec<usize>,
    pub times: Vec<f64>,
    pub k_max: Vec<usize>,
    pub noise: Option<NoiseModel>,
    pub ensemble: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub threads: Option<usize>,
    pub allow_large: bool,
}

fn distinct<T: PartialEq + Copy>(items: impl IntoIterator<Item = T>) -> Vec<T> {
    let mut out = Vec::new();
    for x in items {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn resolve_systems(defaults: &[System], o: &Overrides) -> CliResult<Vec<System>> {
    if o.qubits.is_empty() && o.k_max.is_empty() && o.noise.is_none() {
        return Ok(defaults.to_vec());
    }
    let noises = match o.noise {
        Some(n) => vec![n],
        None => distinct(defaults.iter().map(|s| s.noise)),
    };
    let mut out = Vec::new();
    for noise in noises {
        let same: Vec<&System> = defaults.iter().filter(|s| s.noise == noise).collect();
        let dims = if o.qubits.is_empty() {
            let pool = if same.is_empty() { defaults.iter().collect() } else { same.clone() };
            distinct(pool.iter().map(|s| s.dim))
        } else {
            let mut dims = Vec::new();
            for &l in &o.qubits {
                if !(1..=12).contains(&l) {
                    return Err(CliError::Config(format!("--L must lie in 1..=12, got {l}")));
                }
                dims.push(1usize << l);
            }
            distinct(dims)
        };
        match noise {
            NoiseModel::Global => out.extend(dims.into_iter().map(System::global)),
            NoiseModel::Local => {
                let clip = o.k_max.is_empty();
                let ks = if clip {
                    let ks = distinct(same.iter().filter_map(|s| s.k_max));
                    if ks.is_empty() {
                        vec![2]
                    } else {
                        ks
                    }
                } else {
                    distinct(o.k_max.iter().copied())
                };
                for dim in dims {
                    if !dim.is_power_of_two() {
                        return Err(CliError::Config(format!("local noise needs a power-of-two dimension, got {dim}")));
                    }
                    let l = dim.trailing_zeros() as usize;
                    for &k in &ks {
                        out.push(System { noise, dim, k_max: Some(if clip { k.min(l) } else { k }) });
                    }
                }
            }
        }
    }
    Ok(distinct(out))
}

fn resolve_schedules(entry: &CatalogEntry, o: &Overrides) -> Vec<Schedule> {
    if o.times.is_empty() && o.layers.is_empty() {
        return entry.schedules.clone();
    }
    let uses_time = entry.schedules.iter().any(|s| s.t.is_some()) || entry.experiment.products().needs_circuit();
    let ms = if o.layers.is_empty() { distinct(entry.schedules.iter().map(|s| s.layers)) } else { distinct(o.layers.clone()) };
    if !uses_time {
        return ms.into_iter().map(Schedule::depth_only).collect();
    }
    let ts: Vec<f64> = if o.times.is_empty() {
        distinct(entry.schedules.iter().filter_map(|s| s.t))
    } else {
        distinct(o.times.clone())
    };
    let mut out = Vec::new();
    for &m in &ms {
        for &t in &ts {
            out.push(Schedule::new(t, m));
        }
    }
    out
}

impl ExperimentConfig {
    /// Catalog defaults for `experiment` with `overrides` applied, validated.
    pub fn resolve(experiment: Experiment, overrides: &Overrides) -> CliResult<Self> {
        let entry = experiment.default_entry();
        let out_dir = overrides
            .out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        let threads = overrides
            .threads
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
        let config = Self {
            experiment,
            systems: resolve_systems(&entry.systems, overrides)?,
            schedules: resolve_schedules(&entry, overrides),
            ensemble: overrides.ensemble.unwrap_or(entry.ensemble),
            contour_pool: entry.contour_pool,
            contour_angles: 48,
            seed: overrides.seed.unwrap_or(DEFAULT_SEED),
            format: overrides.format.unwrap_or_default(),
            allow_large: overrides.allow_large,
            out_dir,
            threads,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.ensemble == 0 {
            return bad("ensemble size must be at least 1".into());
        }
        if self.threads == 0 {
            return bad("--threads must be at least 1".into());
        }
        if self.systems.is_empty() {
            return bad("no systems to run".into());
        }
        let products = self.experiment.products();
        for s in &self.systems {
            if s.dim < 2 {
                return bad(format!("dimension must be at least 2, got {}", s.dim));
            }
            if let Some(k) = s.k_max {
                let l = s.qubits().ok_or_else(|| CliError::Config(format!("local noise on N={} is not a qubit register", s.dim)))?;
                if k == 0 || k > l {
                    return bad(format!("k_max must lie in 1..={l} for N={}, got {k}", s.dim));
                }
            }
            if products.kossakowski_sum && s.noise == NoiseModel::Local {
                return bad("Kossakowski sums are defined for global noise only".into());
            }
        }
        if products.needs_circuit() || products.kossakowski_sum {
            if self.schedules.is_empty() {
                return bad("no (t, m) schedule to run".into());
            }
            for s in &self.schedules {
                if s.layers == 0 {
                    return bad("depth m must be at least 1".into());
                }
                if products.needs_circuit() {
                    match s.t {
                        Some(t) if t.is_finite() && t > 0.0 => {}
                        other => return bad(format!("noise time t must be positive and finite, got {other:?}")),
                    }
                }
            }
        }
        if products.contour && self.contour_pool == 0 {
            return bad("contour estimates need a non-empty Lindbladian pool".into());
        }
        if self.runnable_systems().is_empty() {
            let largest = self.systems.iter().map(|s| s.dim).max().unwrap_or(0);
            return bad(format!(
                "every system has N² >= {LARGE_SUPEROP_DIM} (largest N = {largest}); pass --allow-large to run it"
            ));
        }
        Ok(())
    }

    pub fn is_large(&self, s: &System) -> bool {
        s.dim * s.dim >= LARGE_SUPEROP_DIM
    }

    /// Systems that fit the size guard.
    pub fn runnable_systems(&self) -> Vec<System> {
        self.systems.iter().copied().filter(|s| self.allow_large || !self.is_large(s)).collect()
    }

    pub fn experiment_dir(&self) -> PathBuf {
        self.out_dir.join(self.experiment.name())
    }
}
