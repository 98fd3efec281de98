//! Experiment execution.
//!
//! Work is split into independent jobs (one per pooled Lindbladian, circuit
//! or Kossakowski sum) that each derive their RNG substream from the base
//! seed and their position in the parameter grid, so results do not depend
//! on the number of workers or their scheduling. Jobs run on a scoped worker
//! pool; results are gathered in job order and written by the calling thread.

use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use denoiser_core::linalg::set_kernel_threads;
use denoiser_core::spectra::{kossakowski_sum_spectrum, polygon_centroid, BandRule};
use denoiser_core::{
    assemble_noisy_circuit, build_lindbladian, build_local_lindbladian, build_pauli_basis, c64, compute_denoiser,
    decay_band_clusters, eigenvalues, empirical_lindblad_contour, exact_denoiser, kossakowski_sum_bounds,
    min_distance_profile, predict_denoiser_contour, sample_global_kossakowski, sample_local_kossakowski,
    BandSummary, CircuitSpec, DecayScale, OperatorBasis, RngSeed, SpectrumParams, SpectrumSample, Superoperator,
};
use serde::{Deserialize, Serialize};

use crate::catalog::{Experiment, NoiseModel, Schedule, System};
use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{CliError, CliResult};
use crate::output::{csv_string, json_spectra_string, rows_from_sample, to_json, write_file, SpectrumRow, SCHEMA_VERSION};

/// Conjugation-closure tolerance applied to every spectrum before writing.
pub const CONJUGATION_TOL: f64 = 1e-8;
/// Relative dilation of predicted contours when counting covered eigenvalues.
pub const CONTOUR_DILATION: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumStats {
    pub count: usize,
    pub stationary_count: usize,
    pub spectral_radius: f64,
    pub conjugation_defect: f64,
    pub mean_log_modulus: f64,
}

impl SpectrumStats {
    fn of(s: &SpectrumSample) -> Self {
        Self {
            count: s.len(),
            stationary_count: s.stationary_count(),
            spectral_radius: s.spectral_radius(),
            conjugation_defect: s.conjugation_defect(),
            mean_log_modulus: s.mean_log_modulus(),
        }
    }
}

/// Mean of `ln|λ|` over the denoiser spectrum against its exact value `t m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeterminantCheck {
    pub mean_log_modulus: f64,
    pub expected: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitRecord {
    pub run_id: String,
    pub system: System,
    pub schedule: Schedule,
    pub member: usize,
    pub seed: RngSeed,
    pub predicted_center: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub noisy: Option<SpectrumStats>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub denoiser: Option<SpectrumStats>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub condition_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub determinant_check: Option<DeterminantCheck>,
    /// `exp` of the mean `ln|λ|` over non-stationary denoiser eigenvalues.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_modulus_center: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bands: Option<BandSummary>,
    /// Distance from each exact denoiser eigenvalue to the nearest
    /// first-order eigenvalue, sorted descending.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub min_distance_profile: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub contour_fraction_inside: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourRecord {
    pub system: System,
    pub pooled: usize,
    /// Boundary of the shifted Lindbladian cloud `λ + 1`; multiplied by `N`
    /// when no circuit is involved, so that different dimensions overlay.
    pub base: Vec<c64>,
    pub base_centroid: c64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub schedule: Option<Schedule>,
    /// Image of `base` under the denoiser map.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub mapped: Vec<c64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub center: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LindbladRecord {
    pub run_id: String,
    pub system: System,
    pub member: usize,
    pub seed: RngSeed,
    pub mean_eigenvalue: c64,
    pub stationary_count: usize,
    /// Extent along the real axis of `N (λ + 1)` over non-stationary values.
    pub rescaled_real_extent: f64,
    pub rescaled_imag_extent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KossakowskiRecord {
    pub run_id: String,
    pub dim: usize,
    pub layers: usize,
    pub member: usize,
    pub seed: RngSeed,
    pub bounds: (f64, f64),
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub fraction_in_bounds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Skipped {
    pub system: System,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub seed: u64,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<Skipped>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub circuits: Vec<CircuitRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub contours: Vec<ContourRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lindbladians: Vec<LindbladRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub kossakowski_sums: Vec<KossakowskiRecord>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobTiming {
    pub job: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Timing {
    pub experiment: Experiment,
    pub threads: usize,
    pub total_seconds: f64,
    pub jobs: Vec<JobTiming>,
}

/// Result of [`run_experiment`]: the summary that was written and the paths.
#[derive(Debug)]
pub struct RunReport {
    pub summary: Summary,
    pub spectra_path: PathBuf,
    pub summary_path: PathBuf,
    pub timing_path: PathBuf,
}

fn system_stream(s: &System) -> u64 {
    let noise = match s.noise {
        NoiseModel::Global => 0u64,
        NoiseModel::Local => 1,
    };
    s.dim as u64 | (s.k_max.unwrap_or(0) as u64) << 24 | noise << 32
}

const CIRCUIT_DOMAIN: u64 = 0;
const POOL_DOMAIN: u64 = 1 << 40;
const SUM_DOMAIN: u64 = 2 << 40;

/// Seed of ensemble member `member` of circuits on `system`; shared by all
/// schedules so that parameter sweeps compare the same random draws.
pub fn circuit_seed(base: u64, system: &System, member: usize) -> RngSeed {
    RngSeed::with_stream(base, CIRCUIT_DOMAIN | system_stream(system)).substream(member as u64)
}

/// Seed of the `member`-th pooled Lindbladian on `system`.
pub fn lindbladian_seed(base: u64, system: &System, member: usize) -> RngSeed {
    RngSeed::with_stream(base, POOL_DOMAIN | system_stream(system)).substream(member as u64)
}

pub fn kossakowski_seed(base: u64, dim: usize, member: usize) -> RngSeed {
    RngSeed::with_stream(base, SUM_DOMAIN | dim as u64).substream(member as u64)
}

pub fn circuit_spec(system: &System, schedule: &Schedule, seed: RngSeed) -> CliResult<CircuitSpec> {
    let t = schedule.t.ok_or_else(|| CliError::Config("circuit runs need a noise time".into()))?;
    Ok(match (system.noise, system.k_max) {
        (NoiseModel::Global, _) => CircuitSpec::global(system.dim, schedule.layers, t, seed),
        (NoiseModel::Local, Some(k)) => {
            let l = system.qubits().ok_or_else(|| CliError::Config(format!("N={} is not a qubit register", system.dim)))?;
            CircuitSpec::local(l, k, schedule.layers, t, seed)
        }
        (NoiseModel::Local, None) => return Err(CliError::Config("local noise needs k_max".into())),
    })
}

/// One random Lindbladian on `system`, drawn from `seed`.
pub fn sample_lindbladian(system: &System, seed: RngSeed) -> denoiser_core::Result<Superoperator> {
    match system.k_max {
        Some(k) if system.noise == NoiseModel::Local => {
            let basis = build_pauli_basis(system.dim.trailing_zeros() as usize, k)?;
            let kmat = sample_local_kossakowski(basis.len(), system.dim as f64, seed)?;
            build_local_lindbladian(&kmat, &basis)
        }
        _ => {
            let basis = OperatorBasis::gell_mann(system.dim)?;
            build_lindbladian(&sample_global_kossakowski(system.dim, seed)?, &basis)
        }
    }
}

fn checked_eigenvalues(s: &Superoperator, source: &str, run_id: &str, params: SpectrumParams) -> CliResult<SpectrumSample> {
    let n2 = s.dim() * s.dim();
    let sample = eigenvalues(s, source).map_err(|e| CliError::numerical(run_id, e))?.with_params(params);
    sample.check_invariants(n2, CONJUGATION_TOL).map_err(|e| CliError::numerical(run_id, e))?;
    Ok(sample)
}

enum JobSpec {
    Pool { system: System, member: usize },
    Circuit { system: System, schedule: Schedule, member: usize },
    Sum { dim: usize, layers: usize, member: usize },
}

impl JobSpec {
    fn run_id(&self) -> String {
        match self {
            Self::Pool { system, member } => format!("{}-e{member}", system.label()),
            Self::Circuit { system, schedule, member } => format!("{}-{}-e{member}", system.label(), schedule.label()),
            Self::Sum { dim, layers, member } => format!("N{dim}-m{layers}-e{member}"),
        }
    }
}

enum JobOutput {
    Pool { sample: SpectrumSample, record: LindbladRecord },
    Circuit { record: Box<CircuitRecord>, rows: Vec<SpectrumRow>, denoiser: Vec<c64> },
    Sum { record: KossakowskiRecord, rows: Vec<SpectrumRow> },
}

fn run_pool_job(config: &ExperimentConfig, system: System, member: usize, run_id: &str) -> CliResult<JobOutput> {
    let seed = lindbladian_seed(config.seed, &system, member);
    let l = sample_lindbladian(&system, seed).map_err(|e| CliError::numerical(run_id, e))?;
    let params = SpectrumParams { dim: system.dim, k_max: system.k_max, seed: Some(seed), ..Default::default() };
    let sample = checked_eigenvalues(&l, "lindbladian", run_id, params)?;
    let n = system.dim as f64;
    let rescaled: Vec<c64> = sample.non_stationary().map(|z| (z + 1.0) * n).collect();
    let extent = |f: fn(&c64) -> f64| {
        let (lo, hi) = rescaled.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
        if rescaled.is_empty() {
            0.0
        } else {
            hi - lo
        }
    };
    let record = LindbladRecord {
        run_id: run_id.to_owned(),
        system,
        member,
        seed,
        mean_eigenvalue: sample.mean(),
        stationary_count: sample.stationary_count(),
        rescaled_real_extent: extent(|z| z.re),
        rescaled_imag_extent: extent(|z| z.im),
    };
    Ok(JobOutput::Pool { sample, record })
}

fn run_circuit_job(
    config: &ExperimentConfig,
    system: System,
    schedule: Schedule,
    member: usize,
    run_id: &str,
) -> CliResult<JobOutput> {
    let products = config.experiment.products();
    let seed = circuit_seed(config.seed, &system, member);
    let spec = circuit_spec(&system, &schedule, seed)?;
    let t = spec.t;
    let m = spec.layers;
    let params = SpectrumParams { dim: system.dim, t: Some(t), layers: Some(m), k_max: system.k_max, seed: Some(seed) };
    let num = |e| CliError::numerical(run_id, e);
    let circuit = assemble_noisy_circuit(&spec).map_err(num)?;
    let mut rows = Vec::new();
    let mut record = CircuitRecord {
        run_id: run_id.to_owned(),
        system,
        schedule,
        member,
        seed,
        predicted_center: (t * m as f64).exp(),
        noisy: None,
        denoiser: None,
        condition_estimate: None,
        determinant_check: None,
        log_modulus_center: None,
        bands: None,
        min_distance_profile: None,
        contour_fraction_inside: None,
    };
    if products.noisy {
        let s = checked_eigenvalues(&circuit.noisy, "noisy-circuit", run_id, params.clone())?;
        record.noisy = Some(SpectrumStats::of(&s));
        rows.extend(rows_from_sample(run_id, &s));
    }
    let mut denoiser_values = Vec::new();
    if products.denoiser {
        let (d, condition, linear) = if products.linear {
            let r = compute_denoiser(&circuit).map_err(num)?;
            (r.denoiser, r.condition, Some(r.linear))
        } else {
            let (d, c) = exact_denoiser(&circuit).map_err(num)?;
            (d, c, None)
        };
        drop(circuit);
        let s = checked_eigenvalues(&d, "denoiser", run_id, params.clone())?;
        drop(d);
        let expected = t * m as f64;
        let mean_log = s.mean_log_modulus();
        record.condition_estimate = Some(condition);
        record.determinant_check = Some(DeterminantCheck {
            mean_log_modulus: mean_log,
            expected,
            relative_error: (mean_log - expected).abs() / expected,
        });
        let non_stationary: Vec<c64> = s.non_stationary().collect();
        if !non_stationary.is_empty() {
            let mean = non_stationary.iter().map(|z| z.norm().ln()).sum::<f64>() / non_stationary.len() as f64;
            record.log_modulus_center = Some(mean.exp());
        }
        record.bands =
            Some(decay_band_clusters(&s, DecayScale::Denoiser { t, layers: m }, BandRule::default()).map_err(num)?);
        record.denoiser = Some(SpectrumStats::of(&s));
        rows.extend(rows_from_sample(run_id, &s));
        if let Some(linear) = linear {
            let l = checked_eigenvalues(&linear, "denoiser-linear", run_id, params)?;
            record.min_distance_profile = Some(min_distance_profile(s.values(), l.values()));
            rows.extend(rows_from_sample(run_id, &l));
        }
        denoiser_values = non_stationary;
    }
    Ok(JobOutput::Circuit { record: Box::new(record), rows, denoiser: denoiser_values })
}

fn run_sum_job(config: &ExperimentConfig, dim: usize, layers: usize, member: usize, run_id: &str) -> CliResult<JobOutput> {
    let seed = kossakowski_seed(config.seed, dim, member);
    let values = kossakowski_sum_spectrum(dim, layers, seed).map_err(|e| CliError::numerical(run_id, e))?;
    if values.len() != dim * dim - 1 || values.iter().any(|x| !x.is_finite()) {
        return Err(CliError::numerical(
            run_id,
            denoiser_core::Error::DegenerateInput(format!("expected {} finite eigenvalues", dim * dim - 1)),
        ));
    }
    let bounds = kossakowski_sum_bounds(layers).map_err(|e| CliError::numerical(run_id, e))?;
    let inside = values.iter().filter(|&&x| x >= bounds.0 && x <= bounds.1).count();
    let record = KossakowskiRecord {
        run_id: run_id.to_owned(),
        dim,
        layers,
        member,
        seed,
        bounds,
        min: values.iter().cloned().fold(f64::INFINITY, f64::min),
        max: values.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        mean: values.iter().sum::<f64>() / values.len() as f64,
        fraction_in_bounds: inside as f64 / values.len() as f64,
    };
    let rows = values
        .iter()
        .map(|&x| SpectrumRow {
            run_id: run_id.to_owned(),
            source: "kossakowski-sum".into(),
            re: x,
            im: 0.0,
            is_stationary: false,
        })
        .collect();
    Ok(JobOutput::Sum { record, rows })
}

/// Runs `jobs` on up to `threads` workers and returns results in job order.
fn execute<J: Sync, T: Send>(jobs: &[J], threads: usize, f: impl Fn(&J) -> T + Sync) -> Vec<T> {
    let workers = threads.min(jobs.len()).max(1);
    set_kernel_threads((threads / workers).max(1));
    if workers == 1 {
        return jobs.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<T>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let out = f(&jobs[i]);
                slots.lock().expect("worker panicked")[i] = Some(out);
            });
        }
    });
    slots.into_inner().expect("worker panicked").into_iter().map(|o| o.expect("every job ran")).collect()
}

fn build_jobs(config: &ExperimentConfig, systems: &[System]) -> Vec<JobSpec> {
    let products = config.experiment.products();
    let mut jobs = Vec::new();
    if products.contour || products.lindbladian {
        let pool = if products.lindbladian { config.ensemble } else { config.contour_pool };
        for &system in systems {
            jobs.extend((0..pool).map(|member| JobSpec::Pool { system, member }));
        }
    }
    if products.needs_circuit() {
        for &system in systems {
            for &schedule in &config.schedules {
                jobs.extend((0..config.ensemble).map(|member| JobSpec::Circuit { system, schedule, member }));
            }
        }
    }
    if products.kossakowski_sum {
        for system in systems {
            for schedule in &config.schedules {
                jobs.extend((0..config.ensemble).map(|member| JobSpec::Sum { dim: system.dim, layers: schedule.layers, member }));
            }
        }
    }
    jobs
}

/// Runs an experiment and writes `spectra.{csv,json}`, `summary.json` and
/// `timing.json` under `<out_dir>/<experiment>/`.
///
/// On a numerical failure the files are still written from the jobs that
/// succeeded, the summary is marked failed, and the error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> CliResult<RunReport> {
    config.validate()?;
    let started = Instant::now();
    let dir = config.experiment_dir();
    std::fs::create_dir_all(&dir)
        .map_err(|source| CliError::Config(format!("cannot create output directory {}: {source}", dir.display())))?;

    let systems = config.runnable_systems();
    let skipped: Vec<Skipped> = config
        .systems
        .iter()
        .filter(|s| !systems.contains(s))
        .map(|&system| Skipped { system, reason: "N² at or above the large-run limit; pass --allow-large".into() })
        .collect();
    for s in &skipped {
        eprintln!("skipping {}: {}", s.system.label(), s.reason);
    }

    let jobs = build_jobs(config, &systems);
    let results = execute(&jobs, config.threads, |job| {
        let run_id = job.run_id();
        let t0 = Instant::now();
        let out = match *job {
            JobSpec::Pool { system, member } => run_pool_job(config, system, member, &run_id),
            JobSpec::Circuit { system, schedule, member } => run_circuit_job(config, system, schedule, member, &run_id),
            JobSpec::Sum { dim, layers, member } => run_sum_job(config, dim, layers, member, &run_id),
        };
        (run_id, t0.elapsed().as_secs_f64(), out)
    });

    let mut summary = Summary {
        schema_version: SCHEMA_VERSION,
        experiment: config.experiment,
        status: Status::Ok,
        error: None,
        seed: config.seed,
        config: config.clone(),
        skipped,
        circuits: Vec::new(),
        contours: Vec::new(),
        lindbladians: Vec::new(),
        kossakowski_sums: Vec::new(),
    };
    let mut timings = Vec::new();
    let mut rows = Vec::new();
    let mut pools: Vec<(System, Vec<SpectrumSample>)> = Vec::new();
    let mut denoisers: Vec<Vec<c64>> = Vec::new();
    let mut first_error = None;
    let emit_pool = config.experiment.products().lindbladian;
    for (run_id, seconds, out) in results {
        timings.push(JobTiming { job: run_id, seconds });
        match out {
            Ok(JobOutput::Pool { sample, record }) => {
                if emit_pool {
                    rows.extend(rows_from_sample(&record.run_id, &sample));
                    summary.lindbladians.push(record.clone());
                }
                match pools.iter_mut().find(|(s, _)| *s == record.system) {
                    Some((_, v)) => v.push(sample),
                    None => pools.push((record.system, vec![sample])),
                }
            }
            Ok(JobOutput::Circuit { record, rows: r, denoiser }) => {
                rows.extend(r);
                summary.circuits.push(*record);
                denoisers.push(denoiser);
            }
            Ok(JobOutput::Sum { record, rows: r }) => {
                rows.extend(r);
                summary.kossakowski_sums.push(record);
            }
            Err(e) => {
                eprintln!("error: {e}");
                first_error.get_or_insert(e);
            }
        }
    }

    if config.experiment.products().contour {
        if let Err(e) = attach_contours(config, &pools, &mut summary, &denoisers) {
            first_error.get_or_insert(e);
        }
    }
    if let Some(e) = &first_error {
        summary.status = Status::Failed;
        summary.error = Some(e.to_string());
    }

    let spectra_path = dir.join(config.format.spectra_file());
    let spectra = match config.format {
        OutputFormat::Csv => csv_string(&rows),
        OutputFormat::Json => json_spectra_string(&rows)?,
    };
    write_file(&spectra_path, &spectra)?;
    let summary_path = dir.join("summary.json");
    write_file(&summary_path, &to_json(&summary)?)?;
    let timing_path = dir.join("timing.json");
    let timing = Timing {
        experiment: config.experiment,
        threads: config.threads,
        total_seconds: started.elapsed().as_secs_f64(),
        jobs: timings,
    };
    write_file(&timing_path, &to_json(&timing)?)?;

    match first_error {
        Some(e) => Err(e),
        None => Ok(RunReport { summary, spectra_path, summary_path, timing_path }),
    }
}

const MIN_CONTOUR_ANGLES: usize = 16;

/// Angular bin count for a contour over `points` eigenvalues: about eight
/// points per bin, between 16 and `max`. A pool that still leaves a bin
/// empty is retried at 16 bins and otherwise reported as skipped.
pub fn contour_angles(max: usize, points: usize) -> usize {
    (points / 8).clamp(MIN_CONTOUR_ANGLES.min(max), max)
}

fn attach_contours(
    config: &ExperimentConfig,
    pools: &[(System, Vec<SpectrumSample>)],
    summary: &mut Summary,
    denoisers: &[Vec<c64>],
) -> CliResult<()> {
    for (system, samples) in pools {
        let context = format!("contour {}", system.label());
        let standalone = !config.experiment.products().needs_circuit();
        let target_dim = if standalone { 1 } else { system.dim };
        let points: usize = samples.iter().map(|s| s.len() - s.stationary_count()).sum();
        let angles = contour_angles(config.contour_angles, points);
        let attempt = match empirical_lindblad_contour(samples, angles, target_dim) {
            Err(denoiser_core::Error::Binning { .. }) if angles > MIN_CONTOUR_ANGLES => {
                empirical_lindblad_contour(samples, MIN_CONTOUR_ANGLES, target_dim)
            }
            other => other,
        };
        let base = match attempt {
            Ok(base) => base,
            Err(denoiser_core::Error::Binning { bin, n_angles }) => {
                let reason = format!("contour: angular bin {bin} of {n_angles} empty ({points} pooled eigenvalues)");
                eprintln!("skipping {}: {reason}", system.label());
                summary.skipped.push(Skipped { system: *system, reason });
                continue;
            }
            Err(e) => return Err(CliError::numerical(&context, e)),
        };
        let base_centroid = polygon_centroid(&base);
        if standalone {
            summary.contours.push(ContourRecord {
                system: *system,
                pooled: samples.len(),
                base,
                base_centroid,
                schedule: None,
                mapped: Vec::new(),
                center: None,
            });
            continue;
        }
        for schedule in &config.schedules {
            let t = schedule.t.unwrap_or(0.0);
            let prediction = predict_denoiser_contour(&base, t, schedule.layers);
            for (record, values) in summary.circuits.iter_mut().zip(denoisers) {
                if record.system == *system && record.schedule == *schedule {
                    record.contour_fraction_inside =
                        Some(prediction.fraction_inside(values.iter().copied(), CONTOUR_DILATION));
                }
            }
            summary.contours.push(ContourRecord {
                system: *system,
                pooled: samples.len(),
                base: base.clone(),
                base_centroid,
                schedule: Some(*schedule),
                mapped: prediction.mapped,
                center: Some(prediction.center),
            });
        }
    }
    Ok(())
}
