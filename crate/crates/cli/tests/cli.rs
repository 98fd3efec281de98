use std::path::{Path, PathBuf};
use std::process::Command;

use denoiser_cli::output::parse_csv;
use denoiser_cli::run::Status;
use denoiser_cli::{catalog, run_experiment, Experiment, ExperimentConfig, Overrides, Summary};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_denoiser"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("denoiser-cli-{}-{tag}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn read_summary(dir: &Path, e: Experiment) -> Summary {
    let text = std::fs::read_to_string(dir.join(e.name()).join("summary.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn list_prints_ten_entries_as_json() {
    let out = bin().args(["list", "--json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = v.as_array().unwrap();
    assert_eq!(entries.len(), 10);
    let names: Vec<&str> = entries.iter().map(|e| e["experiment"].as_str().unwrap()).collect();
    assert_eq!(names, Experiment::ALL.map(|e| e.name()));
    assert_eq!(catalog().len(), 10);
}

#[test]
fn plain_list_names_every_experiment() {
    let out = bin().arg("list").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for e in Experiment::ALL {
        assert!(text.contains(e.name()));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["fig2", "--t", "-0.1"],
        vec!["fig2", "--m", "0"],
        vec!["fig2", "--nonsense"],
        vec!["fig7"],
        vec!["fig8-hist", "--L", "3", "--kmax", "4"],
        vec!["kossakowski-sum", "--noise", "local"],
    ] {
        let out = bin().args(&args).arg("--out").arg(scratch("usage")).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn run_writes_the_documented_files() {
    let dir = scratch("files");
    let out = bin()
        .args(["fig2", "--L", "2", "--t", "0.2,0.4", "--ensemble", "2", "--threads", "1", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let exp = dir.join("fig2");
    let rows = parse_csv(&std::fs::read_to_string(exp.join("spectra.csv")).unwrap()).unwrap();
    // 2 t values × 2 members × (noisy + denoiser) × 16 eigenvalues
    assert_eq!(rows.len(), 2 * 2 * 2 * 16);
    assert!(rows.iter().any(|r| r.source == "noisy-circuit"));
    let summary = read_summary(&dir, Experiment::Fig2);
    assert_eq!(summary.status, Status::Ok);
    assert_eq!(summary.circuits.len(), 4);
    for c in &summary.circuits {
        let t = c.schedule.t.unwrap();
        assert_eq!(c.predicted_center, (2.0 * t).exp());
        assert!(c.determinant_check.as_ref().unwrap().relative_error < 1e-6);
        assert_eq!(c.denoiser.as_ref().unwrap().stationary_count, 1);
    }
    let timing: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(exp.join("timing.json")).unwrap()).unwrap();
    assert_eq!(timing["jobs"].as_array().unwrap().len(), 4);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn env_var_sets_output_directory() {
    let dir = scratch("env");
    let out = bin()
        .args(["kossakowski-sum", "--L", "2", "--m", "1,3", "--ensemble", "1", "--format", "json"])
        .env("DENOISER_OUT", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("kossakowski-sum/spectra.json")).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2 * 15);
    let summary = read_summary(&dir, Experiment::KossakowskiSum);
    for r in &summary.kossakowski_sums {
        assert!((r.mean - r.layers as f64).abs() < 1e-10);
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn histogram_runs_record_distance_profiles() {
    let dir = scratch("hist");
    let overrides = Overrides { qubits: vec![2], out_dir: Some(dir.clone()), threads: Some(1), ..Overrides::default() };
    let config = ExperimentConfig::resolve(Experiment::Fig8Hist, &overrides).unwrap();
    let report = run_experiment(&config).unwrap();
    assert_eq!(report.summary.circuits.len(), 4);
    for c in &report.summary.circuits {
        let p = c.min_distance_profile.as_ref().unwrap();
        assert_eq!(p.len(), 16);
        assert!(p.windows(2).all(|w| w[0] >= w[1]));
    }
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn contour_runs_attach_predictions() {
    let dir = scratch("contour");
    let overrides = Overrides { qubits: vec![3], out_dir: Some(dir.clone()), threads: Some(1), ..Overrides::default() };
    let config = ExperimentConfig::resolve(Experiment::Fig6, &overrides).unwrap();
    let report = run_experiment(&config).unwrap();
    let contour = &report.summary.contours[0];
    assert_eq!(contour.base.len(), config.contour_angles);
    assert_eq!(contour.mapped.len(), contour.base.len());
    assert_eq!(contour.center, Some(5.0f64.exp()));
    assert!(report.summary.circuits[0].contour_fraction_inside.is_some());
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn large_systems_are_skipped_and_reported() {
    let dir = scratch("skip");
    let overrides = Overrides {
        qubits: vec![2, 6],
        ensemble: Some(1),
        out_dir: Some(dir.clone()),
        threads: Some(1),
        ..Overrides::default()
    };
    let config = ExperimentConfig::resolve(Experiment::LindbladSpectra, &overrides).unwrap();
    let report = run_experiment(&config).unwrap();
    let large: Vec<_> = report.summary.skipped.iter().filter(|s| s.system.dim == 64).collect();
    assert_eq!(large.len(), 2);
    // a single N=4 Lindbladian has too few eigenvalues for a contour
    assert!(report.summary.skipped.iter().filter(|s| s.system.dim == 4).all(|s| s.reason.starts_with("contour")));
    assert!(report.summary.lindbladians.iter().all(|l| l.system.dim == 4));
    let _ = std::fs::remove_dir_all(dir);
}
