//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with the
//! measured quantities and its runtime against the budget. Tests hold a
//! shared lock so that timings are not distorted by concurrent runs.

use std::path::PathBuf;
use std::sync::MutexGuard;
use std::time::Instant;

use denoiser_cli::{run_experiment, Experiment, ExperimentConfig, OutputFormat, Overrides};
use denoiser_core::spectra::{kossakowski_sum_spectrum, BandRule};
use denoiser_core::*;
use denoiser_validation::{lock, verdict};

fn serial() -> MutexGuard<'static, ()> {
    lock()
}

fn distance_to_one(s: &SpectrumSample) -> f64 {
    s.values().iter().map(|z| (z - 1.0).norm()).fold(f64::INFINITY, f64::min)
}

fn max_min_distance(c: &NoisyCircuit) -> f64 {
    let r = compute_denoiser(c).unwrap();
    let exact = eigenvalues(&r.denoiser, "denoiser").unwrap();
    let linear = eigenvalues(&r.linear, "denoiser-linear").unwrap();
    min_distance_profile(exact.values(), linear.values())[0]
}

#[test]
fn criterion_01_trace_identity() {
    let _g = serial();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [8, 16, 32] {
        let basis = OperatorBasis::gell_mann(n).unwrap();
        for s in 0..20 {
            let k = sample_global_kossakowski(n, RngSeed::new(s)).unwrap();
            let l = build_lindbladian(&k, &basis).unwrap();
            let n2 = (n * n) as f64;
            worst = worst.max((l.trace() + n2).norm() / n2);
        }
    }
    for qubits in [4, 5] {
        for k_max in [1, 2] {
            let basis = build_pauli_basis(qubits, k_max).unwrap();
            let n = basis.dim();
            for s in 0..20 {
                let k = sample_local_kossakowski(basis.len(), n as f64, RngSeed::new(s)).unwrap();
                let l = build_local_lindbladian(&k, &basis).unwrap();
                let n2 = (n * n) as f64;
                worst = worst.max((l.trace() + n2).norm() / n2);
            }
        }
    }
    let ok = worst <= 1e-8;
    assert!(verdict(1, "trace identity", ok, &format!("max |Tr L + N²|/N² = {worst:.2e} (tol 1e-8)"), start.elapsed(), 60.0));
}

#[test]
fn criterion_02_cptp_spectral_constraints() {
    let _g = serial();
    let start = Instant::now();
    let (mut radius, mut fixed_noisy, mut fixed_d, mut conj) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in [0.1, 0.3, 0.5] {
        for s in 0..10 {
            let c = assemble_noisy_circuit(&CircuitSpec::global(32, 2, t, RngSeed::new(s))).unwrap();
            let noisy = eigenvalues(&c.noisy, "noisy-circuit").unwrap();
            let (d, _) = exact_denoiser(&c).unwrap();
            drop(c);
            let den = eigenvalues(&d, "denoiser").unwrap();
            radius = radius.max(noisy.spectral_radius());
            fixed_noisy = fixed_noisy.max(distance_to_one(&noisy));
            fixed_d = fixed_d.max(distance_to_one(&den));
            conj = conj.max(noisy.conjugation_defect()).max(den.conjugation_defect());
        }
    }
    let ok = radius <= 1.0 + 1e-8 && fixed_noisy <= 1e-6 && fixed_d <= 1e-6 && conj <= 1e-8;
    let detail = format!(
        "max |eig Λ| = {radius:.12} (≤ 1+1e-8), dist to 1: Λ {fixed_noisy:.1e}, D {fixed_d:.1e} (≤ 1e-6), conj defect {conj:.1e} (≤ 1e-8)"
    );
    assert!(verdict(2, "CPTP spectral constraints", ok, &detail, start.elapsed(), 300.0));
}

fn determinant_error(n: usize, t: f64, m: usize, seed: u64) -> f64 {
    let c = assemble_noisy_circuit(&CircuitSpec::global(n, m, t, RngSeed::new(seed))).unwrap();
    let (d, _) = exact_denoiser(&c).unwrap();
    drop(c);
    let s = eigenvalues(&d, "denoiser").unwrap();
    let target = t * m as f64;
    (s.mean_log_modulus() - target).abs() / target
}

#[test]
fn criterion_03_determinant_identity() {
    let _g = serial();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (t, m) in [(0.1, 2), (0.5, 5)] {
        for seed in 0..2 {
            worst = worst.max(determinant_error(32, t, m, seed));
        }
    }
    let ok = worst <= 1e-6;
    let detail = format!("max rel |mean ln|eig D| − t m| = {worst:.2e} (tol 1e-6)");
    assert!(verdict(3, "determinant identity", ok, &detail, start.elapsed(), 120.0));
}

#[test]
fn criterion_04_bch_magnitude() {
    let _g = serial();
    let start = Instant::now();
    let global = |t, m| max_min_distance(&assemble_noisy_circuit(&CircuitSpec::global(32, m, t, RngSeed::new(1))).unwrap());
    let base = global(0.1, 2);
    let longer = global(0.5, 2);
    let deeper = global(0.1, 5);
    let local = max_min_distance(&assemble_noisy_circuit(&CircuitSpec::local(5, 2, 2, 0.1, RngSeed::new(1))).unwrap());
    let ok = base <= 1e-5 && local <= 1e-3 && longer > base && deeper > base;
    let detail = format!(
        "global t=0.1 m=2: {base:.2e} (≤ 1e-5); local k_max=2: {local:.2e} (≤ 1e-3); t=0.5 m=2: {longer:.2e}; t=0.1 m=5: {deeper:.2e} (both > base)"
    );
    assert!(verdict(4, "first-order approximation", ok, &detail, start.elapsed(), 300.0));
}

#[test]
fn criterion_05_contour_prediction() {
    let _g = serial();
    let start = Instant::now();
    let (n, t, m) = (32, 0.5, 10);
    let basis = OperatorBasis::gell_mann(n).unwrap();
    let pool: Vec<SpectrumSample> = (0..10)
        .map(|s| {
            let k = sample_global_kossakowski(n, RngSeed::with_stream(99, s)).unwrap();
            eigenvalues(&build_lindbladian(&k, &basis).unwrap(), "lindbladian").unwrap()
        })
        .collect();
    let contour = empirical_lindblad_contour(&pool, 48, n).unwrap();
    let prediction = predict_denoiser_contour(&contour, t, m);
    let (mut inside, mut total, mut worst_center, mut worst_seed) = (0.0, 0usize, 0.0f64, 1.0f64);
    for seed in 0..5 {
        let c = assemble_noisy_circuit(&CircuitSpec::global(n, m, t, RngSeed::new(seed))).unwrap();
        let (d, _) = exact_denoiser(&c).unwrap();
        drop(c);
        let s = eigenvalues(&d, "denoiser").unwrap();
        let values: Vec<c64> = s.non_stationary().collect();
        let frac = prediction.fraction_inside(values.iter().copied(), 0.1);
        worst_seed = worst_seed.min(frac);
        inside += frac * values.len() as f64;
        total += values.len();
        let center = (values.iter().map(|z| z.norm().ln()).sum::<f64>() / values.len() as f64).exp();
        worst_center = worst_center.max((center - prediction.center).abs() / prediction.center);
    }
    let fraction = inside / total as f64;
    let ok = fraction >= 0.95 && worst_center <= 0.1;
    let detail = format!(
        "inside 10%-dilated contour: {:.1}% pooled (min per seed {:.1}%, need ≥ 95%); center rel err {worst_center:.2e} vs e^5 (≤ 10%)",
        100.0 * fraction,
        100.0 * worst_seed
    );
    assert!(verdict(5, "contour prediction", ok, &detail, start.elapsed(), 600.0));
}

#[test]
fn criterion_06_center_scaling() {
    let _g = serial();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for t in [0.1, 0.2, 0.3, 0.4, 0.5] {
        worst = worst.max(determinant_error(32, t, 2, 7));
    }
    for m in 2..=5 {
        worst = worst.max(determinant_error(32, 0.1, m, 7));
    }
    let ok = worst <= 1e-6;
    let detail = format!("max rel |mean ln|eig D| − t m| over t and m sweeps = {worst:.2e} (tol 1e-6)");
    assert!(verdict(6, "center scaling", ok, &detail, start.elapsed(), 120.0));
}

#[test]
fn criterion_07_kossakowski_sum_bounds() {
    let _g = serial();
    let start = Instant::now();
    let (mut outside, mut worst_mean) = (0usize, 0.0f64);
    let mut extremes = Vec::new();
    for m in [1, 2, 4] {
        let (lo, hi) = kossakowski_sum_bounds(m).unwrap();
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        for s in 0..10 {
            let v = kossakowski_sum_spectrum(32, m, RngSeed::new(s)).unwrap();
            outside += v.iter().filter(|&&x| x < lo - 0.3 || x > hi + 0.3).count();
            min = v.iter().cloned().fold(min, f64::min);
            max = v.iter().cloned().fold(max, f64::max);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            worst_mean = worst_mean.max((mean - m as f64).abs() / m as f64);
        }
        extremes.push(format!("m={m}: [{min:.3}, {max:.3}] vs [{:.3}, {:.3}]", lo - 0.3, hi + 0.3));
    }
    let ok = outside == 0 && worst_mean <= 0.02;
    let detail = format!("{}; {outside} eigenvalues outside; mean rel err {worst_mean:.1e} (≤ 2%)", extremes.join(", "));
    assert!(verdict(7, "Kossakowski-sum bounds", ok, &detail, start.elapsed(), 60.0));
}

fn denoiser_bands(spec: &CircuitSpec) -> usize {
    let c = assemble_noisy_circuit(spec).unwrap();
    let (d, _) = exact_denoiser(&c).unwrap();
    drop(c);
    let s = eigenvalues(&d, "denoiser").unwrap();
    decay_band_clusters(&s, DecayScale::Denoiser { t: spec.t, layers: spec.layers }, BandRule::default())
        .unwrap()
        .non_stationary_band_count()
}

#[test]
fn criterion_08_locality_hierarchy() {
    let _g = serial();
    let start = Instant::now();
    let seeds = [0u64, 1, 2];
    let k1: Vec<usize> = seeds.iter().map(|&s| denoiser_bands(&CircuitSpec::local(5, 1, 2, 0.1, RngSeed::new(s)))).collect();
    let full: Vec<usize> = seeds.iter().map(|&s| denoiser_bands(&CircuitSpec::local(5, 5, 2, 0.1, RngSeed::new(s)))).collect();
    let global: Vec<usize> = seeds.iter().map(|&s| denoiser_bands(&CircuitSpec::global(32, 2, 0.1, RngSeed::new(s)))).collect();
    let ok = k1.iter().all(|&b| b >= 2) && full == global;
    let detail = format!("non-stationary bands k_max=1: {k1:?} (each ≥ 2); k_max=L: {full:?} vs global {global:?} (equal)");
    assert!(verdict(8, "locality hierarchy", ok, &detail, start.elapsed(), 300.0));
}

#[test]
fn criterion_09_lindblad_universality() {
    let _g = serial();
    let start = Instant::now();
    let n = 32;
    let basis = OperatorBasis::gell_mann(n).unwrap();
    let (mut worst_mean, mut lo, mut hi, mut half) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for s in 0..10 {
        let k = sample_global_kossakowski(n, RngSeed::new(s)).unwrap();
        let spec = eigenvalues(&build_lindbladian(&k, &basis).unwrap(), "lindbladian").unwrap();
        worst_mean = worst_mean.max((spec.mean() + 1.0).norm());
        for z in spec.non_stationary() {
            let x = n as f64 * (z.re + 1.0);
            lo = lo.min(x);
            hi = hi.max(x);
            half = half.max(x.abs());
        }
    }
    let diameter = hi - lo;
    let ok = worst_mean <= 1e-8 && (diameter - 2.0).abs() <= 0.15 * 2.0;
    let detail = format!(
        "max |mean λ + 1| = {worst_mean:.1e} (≤ 1e-8); rescaled real diameter N·Δ = {diameter:.3} vs 2 ± 15% (half-width {half:.3})"
    );
    assert!(verdict(9, "Lindblad universality", ok, &detail, start.elapsed(), 180.0));
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("denoiser-acceptance-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn criterion_10_determinism() {
    let _g = serial();
    let start = Instant::now();
    let mut mismatched = Vec::new();
    for e in Experiment::ALL {
        for format in [OutputFormat::Csv, OutputFormat::Json] {
            let runs: Vec<(Vec<u8>, Vec<u8>)> = ["a", "b"]
                .iter()
                .map(|tag| {
                    let overrides = Overrides {
                        qubits: vec![3],
                        ensemble: Some(2),
                        out_dir: Some(temp_dir(tag)),
                        format: Some(format),
                        threads: Some(if *tag == "a" { 1 } else { 2 }),
                        ..Overrides::default()
                    };
                    let config = ExperimentConfig::resolve(e, &overrides).unwrap();
                    let report = run_experiment(&config).unwrap();
                    (std::fs::read(report.spectra_path).unwrap(), std::fs::read(report.summary_path).unwrap())
                })
                .collect();
            if runs[0] != runs[1] {
                mismatched.push(format!("{e}/{format:?}"));
            }
        }
    }
    for tag in ["a", "b"] {
        let _ = std::fs::remove_dir_all(temp_dir(tag));
    }
    let ok = mismatched.is_empty();
    let detail = format!("{} experiments × 2 formats re-run (1 vs 2 workers); mismatches: {mismatched:?}", Experiment::ALL.len());
    assert!(verdict(10, "determinism", ok, &detail, start.elapsed(), 120.0));
}
