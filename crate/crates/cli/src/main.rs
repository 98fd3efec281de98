use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use denoiser_cli::{catalog, run_experiment, Experiment, ExperimentConfig, NoiseModel, OutputFormat, Overrides};

/// Spectra of random noisy circuits and their denoisers.
#[derive(Parser)]
#[command(name = "denoiser", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the experiment catalog with default parameters.
    List {
        /// Emit the catalog as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Channel and denoiser spectra for t = 0.1..0.5 (N=32, m=2).
    Fig2(RunArgs),
    /// Denoiser spectra and predicted contours for N = 8, 16, 24, 32.
    Fig3(RunArgs),
    /// Denoiser spectra and predicted contours for m = 2..5.
    Fig4(RunArgs),
    /// Exact versus first-order denoiser eigenvalue distances, global noise.
    #[command(name = "fig5-hist")]
    Fig5Hist(RunArgs),
    /// Deep-circuit denoiser spectrum with its predicted contour.
    Fig6(RunArgs),
    /// Local-noise denoiser spectrum at N=64 (needs --allow-large).
    Fig7(RunArgs),
    /// Exact versus first-order denoiser eigenvalue distances, local noise.
    #[command(name = "fig8-hist")]
    Fig8Hist(RunArgs),
    /// Pooled Lindbladian spectra and contours.
    LindbladSpectra(RunArgs),
    /// Local-noise denoiser spectra across k_max (needs --allow-large at L=6).
    LocalKmaxSweep(RunArgs),
    /// Sums of Kossakowski matrices against their spectral bounds.
    KossakowskiSum(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Qubit counts; each gives N = 2^L.
    #[arg(long = "L", value_delimiter = ',')]
    qubits: Vec<usize>,
    /// Circuit depths.
    #[arg(long = "m", value_delimiter = ',')]
    layers: Vec<usize>,
    /// Noise times.
    #[arg(long = "t", value_delimiter = ',', allow_negative_numbers = true)]
    times: Vec<f64>,
    /// Locality cutoffs for local noise.
    #[arg(long = "kmax", value_delimiter = ',')]
    k_max: Vec<usize>,
    /// Noise model, replacing the catalog's.
    #[arg(long)]
    noise: Option<NoiseModel>,
    /// Ensemble size.
    #[arg(long)]
    ensemble: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: $DENOISER_OUT, then ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    threads: Option<usize>,
    /// Permit runs with N² >= 4096.
    #[arg(long)]
    allow_large: bool,
}

impl From<RunArgs> for Overrides {
    fn from(a: RunArgs) -> Self {
        Overrides {
            qubits: a.qubits,
            layers: a.layers,
            times: a.times,
            k_max: a.k_max,
            noise: a.noise,
            ensemble: a.ensemble,
            seed: a.seed,
            out_dir: a.out,
            format: a.format,
            threads: a.threads,
            allow_large: a.allow_large,
        }
    }
}

fn print_catalog(json: bool) -> Result<(), denoiser_cli::CliError> {
    let entries = catalog();
    if json {
        print!("{}", denoiser_cli::output::to_json(&entries)?);
        return Ok(());
    }
    for e in entries {
        let systems: Vec<String> = e.systems.iter().map(|s| s.label()).collect();
        let schedules: Vec<String> = e.schedules.iter().map(|s| s.label()).collect();
        println!("{:<18} {}", e.experiment.name(), e.description);
        println!("{:<18} systems: {}", "", systems.join(", "));
        if !schedules.is_empty() {
            println!("{:<18} schedules: {}", "", schedules.join(", "));
        }
        println!("{:<18} ensemble: {}", "", e.ensemble);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, args) = match cli.command {
        Command::List { json } => {
            return match print_catalog(json) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            };
        }
        Command::Fig2(a) => (Experiment::Fig2, a),
        Command::Fig3(a) => (Experiment::Fig3, a),
        Command::Fig4(a) => (Experiment::Fig4, a),
        Command::Fig5Hist(a) => (Experiment::Fig5Hist, a),
        Command::Fig6(a) => (Experiment::Fig6, a),
        Command::Fig7(a) => (Experiment::Fig7, a),
        Command::Fig8Hist(a) => (Experiment::Fig8Hist, a),
        Command::LindbladSpectra(a) => (Experiment::LindbladSpectra, a),
        Command::LocalKmaxSweep(a) => (Experiment::LocalKmaxSweep, a),
        Command::KossakowskiSum(a) => (Experiment::KossakowskiSum, a),
    };
    let result = ExperimentConfig::resolve(experiment, &args.into()).and_then(|config| run_experiment(&config));
    match result {
        Ok(report) => {
            println!("{}", report.spectra_path.display());
            println!("{}", report.summary_path.display());
            println!("{}", report.timing_path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
