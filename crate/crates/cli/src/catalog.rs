//! The fixed experiment catalog and its default parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Fig2,
    Fig3,
    Fig4,
    Fig5Hist,
    Fig6,
    Fig7,
    Fig8Hist,
    LindbladSpectra,
    LocalKmaxSweep,
    KossakowskiSum,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Self::Fig2,
        Self::Fig3,
        Self::Fig4,
        Self::Fig5Hist,
        Self::Fig6,
        Self::Fig7,
        Self::Fig8Hist,
        Self::LindbladSpectra,
        Self::LocalKmaxSweep,
        Self::KossakowskiSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5Hist => "fig5-hist",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
            Self::Fig8Hist => "fig8-hist",
            Self::LindbladSpectra => "lindblad-spectra",
            Self::LocalKmaxSweep => "local-kmax-sweep",
            Self::KossakowskiSum => "kossakowski-sum",
        }
    }

    /// What the experiment computes for every system and schedule.
    pub fn products(self) -> Products {
        let base = Products::default();
        match self {
            Self::Fig2 => Products { noisy: true, denoiser: true, ..base },
            Self::Fig3 | Self::Fig4 | Self::Fig6 => Products { denoiser: true, contour: true, ..base },
            Self::Fig5Hist | Self::Fig8Hist => Products { denoiser: true, linear: true, ..base },
            Self::Fig7 | Self::LocalKmaxSweep => Products { denoiser: true, ..base },
            Self::LindbladSpectra => Products { lindbladian: true, contour: true, ..base },
            Self::KossakowskiSum => Products { kossakowski_sum: true, ..base },
        }
    }

    pub fn default_entry(self) -> CatalogEntry {
        catalog().into_iter().find(|e| e.experiment == self).expect("every experiment has a catalog entry")
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Products {
    pub noisy: bool,
    pub denoiser: bool,
    pub linear: bool,
    pub contour: bool,
    pub lindbladian: bool,
    pub kossakowski_sum: bool,
}

impl Products {
    pub fn needs_circuit(&self) -> bool {
        self.noisy || self.denoiser || self.linear
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    Global,
    Local,
}

/// Hilbert-space dimension plus noise model. `k_max` is set for local noise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct System {
    pub noise: NoiseModel,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_max: Option<usize>,
}

impl System {
    pub const fn global(dim: usize) -> Self {
        Self { noise: NoiseModel::Global, dim, k_max: None }
    }

    pub const fn local(qubits: usize, k_max: usize) -> Self {
        Self { noise: NoiseModel::Local, dim: 1 << qubits, k_max: Some(k_max) }
    }

    pub fn qubits(&self) -> Option<usize> {
        self.dim.is_power_of_two().then(|| self.dim.trailing_zeros() as usize)
    }

    /// Short label used inside run ids.
    pub fn label(&self) -> String {
        match self.k_max {
            Some(k) => format!("N{}-k{}", self.dim, k),
            None => format!("N{}", self.dim),
        }
    }
}

/// Noise time and circuit depth. `t` is absent for experiments that only use
/// the depth (Kossakowski sums).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<f64>,
    pub layers: usize,
}

impl Schedule {
    pub const fn new(t: f64, layers: usize) -> Self {
        Self { t: Some(t), layers }
    }

    pub const fn depth_only(layers: usize) -> Self {
        Self { t: None, layers }
    }

    pub fn label(&self) -> String {
        match self.t {
            Some(t) => format!("m{}-t{}", self.layers, t),
            None => format!("m{}", self.layers),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub experiment: Experiment,
    pub description: String,
    pub systems: Vec<System>,
    pub schedules: Vec<Schedule>,
    pub ensemble: usize,
    /// Independent Lindbladians pooled per dimension for contour estimates.
    pub contour_pool: usize,
}

fn entry(
    experiment: Experiment,
    description: &str,
    systems: Vec<System>,
    schedules: Vec<Schedule>,
    ensemble: usize,
) -> CatalogEntry {
    let contour_pool = if experiment.products().contour { 10 } else { 0 };
    CatalogEntry { experiment, description: description.into(), systems, schedules, ensemble, contour_pool }
}

/// All experiments with their default parameter sets.
pub fn catalog() -> Vec<CatalogEntry> {
    use Experiment::*;
    let hist_pairs = || vec![Schedule::new(0.1, 2), Schedule::new(0.5, 2), Schedule::new(0.1, 5), Schedule::new(0.5, 5)];
    vec![
        entry(
            Fig2,
            "noisy-circuit and denoiser spectra for growing noise time, with predicted centers exp(m t)",
            vec![System::global(32)],
            [0.1, 0.2, 0.3, 0.4, 0.5].into_iter().map(|t| Schedule::new(t, 2)).collect(),
            1,
        ),
        entry(
            Fig3,
            "denoiser spectra for several dimensions with predicted contours",
            [8, 16, 24, 32].into_iter().map(System::global).collect(),
            vec![Schedule::new(0.1, 2)],
            1,
        ),
        entry(
            Fig4,
            "denoiser spectra for growing depth with predicted contours",
            vec![System::global(32)],
            (2..=5).map(|m| Schedule::new(0.1, m)).collect(),
            1,
        ),
        entry(
            Fig5Hist,
            "nearest-eigenvalue distances between the exact and first-order denoisers, global noise",
            vec![System::global(32)],
            hist_pairs(),
            1,
        ),
        entry(
            Fig6,
            "deep-circuit denoiser spectrum with its predicted contour",
            vec![System::global(32)],
            vec![Schedule::new(0.5, 10)],
            1,
        ),
        entry(
            Fig7,
            "local-noise denoiser spectrum and its decay bands (large run)",
            vec![System::local(6, 2)],
            vec![Schedule::new(0.1, 2)],
            1,
        ),
        entry(
            Fig8Hist,
            "nearest-eigenvalue distances between the exact and first-order denoisers, local noise",
            vec![System::local(5, 2)],
            hist_pairs(),
            1,
        ),
        entry(
            LindbladSpectra,
            "pooled random Lindbladian spectra and their rescaled contours",
            vec![System::global(8), System::global(16), System::global(24), System::global(32), System::local(6, 2)],
            Vec::new(),
            10,
        ),
        entry(
            LocalKmaxSweep,
            "local-noise denoiser spectra across locality cutoffs (large run)",
            (1..=6).map(|k| System::local(6, k)).collect(),
            vec![Schedule::new(0.1, 2)],
            1,
        ),
        entry(
            KossakowskiSum,
            "spectra of rescaled sums of global Kossakowski matrices against free-probability bounds",
            vec![System::global(32)],
            [1, 2, 4].into_iter().map(Schedule::depth_only).collect(),
            10,
        ),
    ]
}
