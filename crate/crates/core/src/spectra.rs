//! Eigenvalues and spectral post-processing.

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::ensembles::sample_global_kossakowski;
use crate::linalg::max_abs;
use crate::superop::{SuperopKind, Superoperator};
use crate::{Error, Result, RngSeed};

/// Distance to the stationary eigenvalue below which an entry is flagged.
pub const STATIONARY_TOL: f64 = 1e-6;
/// Default gap factor of [`BandRule`].
pub const DEFAULT_GAP_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumParams {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<RngSeed>,
}

/// Eigenvalues of one superoperator with per-entry stationary flags.
///
/// The stationary eigenvalue is `1` for channels and denoisers and `0` for
/// Lindbladians.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSample {
    pub source: String,
    pub kind: SuperopKind,
    pub params: SpectrumParams,
    pub eigenvalues: Vec<c64>,
    pub stationary: Vec<bool>,
}

impl SpectrumSample {
    pub fn new(source: impl Into<String>, kind: SuperopKind, params: SpectrumParams, eigenvalues: Vec<c64>) -> Self {
        let fixed = stationary_value(kind);
        let stationary = eigenvalues.iter().map(|z| (z - fixed).norm() <= STATIONARY_TOL).collect();
        Self { source: source.into(), kind, params, eigenvalues, stationary }
    }

    pub fn with_params(mut self, params: SpectrumParams) -> Self {
        self.params = params;
        self
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn values(&self) -> &[c64] {
        &self.eigenvalues
    }

    pub fn stationary_count(&self) -> usize {
        self.stationary.iter().filter(|&&s| s).count()
    }

    pub fn non_stationary(&self) -> impl Iterator<Item = c64> + '_ {
        self.eigenvalues.iter().zip(&self.stationary).filter(|(_, &s)| !s).map(|(&z, _)| z)
    }

    pub fn mean(&self) -> c64 {
        self.eigenvalues.iter().sum::<c64>() / self.len() as f64
    }

    /// Mean of `ln|λ|` over all eigenvalues.
    pub fn mean_log_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm().ln()).sum::<f64>() / self.len() as f64
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest distance from some `conj(λ)` to the spectrum.
    pub fn conjugation_defect(&self) -> f64 {
        self.eigenvalues.iter().map(|z| nearest(z.conj(), &self.eigenvalues)).fold(0.0, f64::max)
    }

    /// Count and conjugation-closure checks.
    pub fn check_invariants(&self, expected_len: usize, conj_tol: f64) -> Result<()> {
        if self.len() != expected_len {
            return Err(Error::ShapeMismatch {
                expected: format!("{expected_len} eigenvalues"),
                found: format!("{}", self.len()),
            });
        }
        if self.eigenvalues.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::DegenerateInput(format!("{}: non-finite eigenvalue", self.source)));
        }
        let defect = self.conjugation_defect();
        if defect > conj_tol {
            return Err(Error::DegenerateInput(format!(
                "{}: spectrum not closed under conjugation (defect {defect:e})",
                self.source
            )));
        }
        Ok(())
    }
}

fn stationary_value(kind: SuperopKind) -> c64 {
    match kind {
        SuperopKind::Lindbladian => c64::new(0.0, 0.0),
        _ => c64::new(1.0, 0.0),
    }
}

fn nearest(z: c64, set: &[c64]) -> f64 {
    set.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
}

/// All `N²` eigenvalues of a superoperator.
pub fn eigenvalues(s: &Superoperator, source: &str) -> Result<SpectrumSample> {
    let m = s.matrix();
    let values = m
        .eigenvalues()
        .map_err(|_| Error::Eigensolver { dim: m.nrows(), max_abs: max_abs(m.as_ref()) })?;
    if values.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::Eigensolver { dim: m.nrows(), max_abs: max_abs(m.as_ref()) });
    }
    let params = SpectrumParams { dim: s.dim(), ..Default::default() };
    Ok(SpectrumSample::new(source, s.kind(), params, values))
}

/// Largest relative eigenpair residual `‖S v − λ v‖ / (‖S‖_max ‖v‖)` over
/// every `stride`-th eigenpair.
pub fn eigenpair_residual(s: &Superoperator, stride: usize) -> Result<f64> {
    let m = s.matrix();
    let evd = m.eigen().map_err(|_| Error::Eigensolver { dim: m.nrows(), max_abs: max_abs(m.as_ref()) })?;
    let u = evd.U();
    let vals = evd.S().column_vector();
    let scale = max_abs(m.as_ref()).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for j in (0..m.ncols()).step_by(stride.max(1)) {
        let v = u.col(j);
        let sv = m * v;
        let lambda = vals[j];
        let mut num = 0.0;
        for i in 0..m.nrows() {
            num += (sv[i] - v[i] * lambda).norm_sqr();
        }
        worst = worst.max(num.sqrt() / (scale * v.norm_l2()));
    }
    Ok(worst)
}

/// For each `a ∈ A` the distance to the nearest element of `B`, sorted in
/// descending order.
pub fn min_distance_profile(a: &[c64], b: &[c64]) -> Vec<f64> {
    if b.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<f64> = a.iter().map(|&z| nearest(z, b)).collect();
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Hausdorff-style distance: the larger of the two directed maxima.
pub fn symmetric_min_distance(a: &[c64], b: &[c64]) -> f64 {
    let ab = min_distance_profile(a, b).first().copied().unwrap_or(0.0);
    let ba = min_distance_profile(b, a).first().copied().unwrap_or(0.0);
    ab.max(ba)
}

/// Boundary of a pooled Lindblad spectrum by angular max-modulus binning.
///
/// Each spectrum is shifted by `+1`, its stationary eigenvalue is dropped and
/// it is rescaled by `N / target_dim` so spectra of different sizes share the
/// scale of `target_dim`. The plane is split into `n_angles` equal sectors
/// over `[−π, π)`; the point of largest modulus in each sector becomes a
/// contour vertex, giving a closed polygon ordered by angle.
pub fn empirical_lindblad_contour(samples: &[SpectrumSample], n_angles: usize, target_dim: usize) -> Result<Vec<c64>> {
    if n_angles < 16 {
        return Err(Error::InvalidParameter(format!("need at least 16 angular bins, got {n_angles}")));
    }
    if target_dim == 0 {
        return Err(Error::InvalidDimension { dim: 0, reason: "target dimension must be positive" });
    }
    let mut best: Vec<Option<c64>> = vec![None; n_angles];
    let width = std::f64::consts::TAU / n_angles as f64;
    for sample in samples {
        let scale = sample.params.dim.max(1) as f64 / target_dim as f64;
        for z in sample.non_stationary() {
            let w = (z + 1.0) * scale;
            let angle = w.im.atan2(w.re) + std::f64::consts::PI;
            let bin = ((angle / width) as usize).min(n_angles - 1);
            if best[bin].is_none_or(|b| w.norm() > b.norm()) {
                best[bin] = Some(w);
            }
        }
    }
    best.into_iter()
        .enumerate()
        .map(|(bin, p)| p.ok_or(Error::Binning { bin, n_angles }))
        .collect()
}

/// `g(f) = exp(−t(√m f − m))`.
pub fn denoiser_map(f: c64, t: f64, m: usize) -> c64 {
    let m = m as f64;
    ((f * m.sqrt() - m) * (-t)).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourPrediction {
    pub t: f64,
    pub layers: usize,
    pub base: Vec<c64>,
    pub mapped: Vec<c64>,
    /// `exp(t m)`.
    pub center: f64,
}

impl ContourPrediction {
    /// Area centroid of the mapped polygon.
    pub fn centroid(&self) -> c64 {
        polygon_centroid(&self.mapped)
    }

    /// Whether `z` lies inside the mapped polygon scaled by `1 + dilation`
    /// about its centroid.
    pub fn contains_dilated(&self, z: c64, dilation: f64) -> bool {
        let c = self.centroid();
        point_in_polygon(c + (z - c) / (1.0 + dilation), &self.mapped)
    }

    pub fn fraction_inside(&self, values: impl IntoIterator<Item = c64>, dilation: f64) -> f64 {
        let (mut inside, mut total) = (0usize, 0usize);
        for z in values {
            total += 1;
            inside += self.contains_dilated(z, dilation) as usize;
        }
        if total == 0 {
            0.0
        } else {
            inside as f64 / total as f64
        }
    }
}

/// Maps a base contour (centered at 0) through [`denoiser_map`].
pub fn predict_denoiser_contour(base: &[c64], t: f64, m: usize) -> ContourPrediction {
    ContourPrediction {
        t,
        layers: m,
        base: base.to_vec(),
        mapped: base.iter().map(|&f| denoiser_map(f, t, m)).collect(),
        center: (t * m as f64).exp(),
    }
}

/// Even-odd rule.
pub fn point_in_polygon(z: c64, poly: &[c64]) -> bool {
    let n = poly.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + n - 1) % n]);
        if (a.im > z.im) != (b.im > z.im) {
            let x = a.re + (z.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if z.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn polygon_centroid(poly: &[c64]) -> c64 {
    let n = poly.len();
    let (mut area, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let cross = p.re * q.im - q.re * p.im;
        area += cross;
        cx += (p.re + q.re) * cross;
        cy += (p.im + q.im) * cross;
    }
    if area.abs() < f64::MIN_POSITIVE {
        return poly.iter().sum::<c64>() / n.max(1) as f64;
    }
    c64::new(cx / (3.0 * area), cy / (3.0 * area))
}

/// Support `m + 1 ∓ 2√m` of the sum of `m` free Marchenko-Pastur laws of
/// unit ratio.
pub fn kossakowski_sum_bounds(m: usize) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    let m = m as f64;
    Ok((m + 1.0 - 2.0 * m.sqrt(), m + 1.0 + 2.0 * m.sqrt()))
}

/// Eigenvalues of `Σ_i (N² − 1)/N · K_i` for `m` independent global
/// Kossakowski matrices, drawn from `seed.substream(i)`.
pub fn kossakowski_sum_spectrum(dim: usize, m: usize, seed: RngSeed) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidParameter("need m >= 1".into()));
    }
    let scale = (dim * dim - 1) as f64 / dim as f64;
    let mut sum = sample_global_kossakowski(dim, seed.substream(0))?.matrix().clone();
    for i in 1..m {
        sum += sample_global_kossakowski(dim, seed.substream(i as u64))?.matrix();
    }
    let sum = sum * faer::Scale(c64::new(scale, 0.0));
    let values = sum
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| Error::Eigensolver { dim: sum.nrows(), max_abs: max_abs(sum.as_ref()) })?;
    Ok(values)
}

/// The scalar that band clustering is performed on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DecayScale {
    /// `ln|λ| / (t m)`.
    Denoiser { t: f64, layers: usize },
    /// `Re λ`.
    Lindbladian,
}

impl DecayScale {
    pub fn value(&self, z: c64) -> f64 {
        match *self {
            Self::Denoiser { t, layers } => z.norm().ln() / (t * layers as f64),
            Self::Lindbladian => z.re,
        }
    }
}

/// Gap-splitting rule: a band boundary opens where consecutive sorted values
/// differ by more than `factor × median gap`, further multiplied by `ln n`
/// when `log_scaled` is set (`n` the number of distinct values).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandRule {
    pub factor: f64,
    pub log_scaled: bool,
}

impl Default for BandRule {
    fn default() -> Self {
        Self { factor: DEFAULT_GAP_FACTOR, log_scaled: true }
    }
}

impl BandRule {
    /// Plain `factor × median gap`.
    pub fn median_gap(factor: f64) -> Self {
        Self { factor, log_scaled: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub center: f64,
    pub lower: f64,
    pub upper: f64,
    pub population: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSummary {
    pub scale: DecayScale,
    pub rule: BandRule,
    /// Eigenvalues flagged stationary; they form a band of their own.
    pub stationary: usize,
    /// Non-stationary bands, ordered by increasing value.
    pub bands: Vec<Band>,
    pub median_gap: f64,
    pub threshold: f64,
}

impl BandSummary {
    /// Band count including the stationary band when present.
    pub fn band_count(&self) -> usize {
        self.bands.len() + usize::from(self.stationary > 0)
    }

    pub fn non_stationary_band_count(&self) -> usize {
        self.bands.len()
    }
}

/// One-dimensional gap clustering of decay values.
///
/// Conjugate pairs share their value, so gap statistics use only the
/// eigenvalues with `Im λ >= −1e-10`; every non-stationary eigenvalue is then
/// assigned to the band whose range contains its value.
pub fn decay_band_clusters(spec: &SpectrumSample, scale: DecayScale, rule: BandRule) -> Result<BandSummary> {
    if spec.len() < 2 {
        return Err(Error::DegenerateInput(format!("{} eigenvalues, need at least 2", spec.len())));
    }
    if let DecayScale::Denoiser { t, layers } = scale {
        if !(t > 0.0 && layers > 0) {
            return Err(Error::InvalidParameter("denoiser decay scale needs t > 0 and m >= 1".into()));
        }
    }
    let all: Vec<(c64, f64)> = spec.non_stationary().map(|z| (z, scale.value(z))).collect();
    let mut distinct: Vec<f64> = all.iter().filter(|(z, _)| z.im >= -1e-10).map(|&(_, v)| v).collect();
    distinct.sort_by(f64::total_cmp);
    let stationary = spec.stationary_count();
    if distinct.is_empty() {
        return Ok(BandSummary { scale, rule, stationary, bands: Vec::new(), median_gap: 0.0, threshold: 0.0 });
    }
    let mut gaps: Vec<f64> = distinct.windows(2).map(|w| w[1] - w[0]).collect();
    let median_gap = median(&mut gaps.clone());
    let log_factor = if rule.log_scaled { (distinct.len().max(2) as f64).ln() } else { 1.0 };
    let threshold = rule.factor * median_gap * log_factor;
    let mut cuts = Vec::new();
    for (i, g) in gaps.iter_mut().enumerate() {
        if *g > threshold {
            cuts.push(0.5 * (distinct[i] + distinct[i + 1]));
        }
    }
    let mut bands: Vec<Band> = (0..=cuts.len())
        .map(|_| Band { center: 0.0, lower: f64::INFINITY, upper: f64::NEG_INFINITY, population: 0 })
        .collect();
    for &(_, v) in &all {
        let idx = cuts.partition_point(|&c| c < v);
        let b = &mut bands[idx];
        b.center += v;
        b.lower = b.lower.min(v);
        b.upper = b.upper.max(v);
        b.population += 1;
    }
    bands.retain(|b| b.population > 0);
    for b in &mut bands {
        b.center /= b.population as f64;
    }
    Ok(BandSummary { scale, rule, stationary, bands, median_gap, threshold })
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn sample(values: Vec<c64>, kind: SuperopKind) -> SpectrumSample {
        SpectrumSample::new("test", kind, SpectrumParams { dim: 2, ..Default::default() }, values)
    }

    #[test]
    fn identity_spectrum() {
        let s = Superoperator::new(3, identity(9), SuperopKind::Generic).unwrap();
        let spec = eigenvalues(&s, "id").unwrap();
        assert_eq!(spec.len(), 9);
        assert!(spec.values().iter().all(|z| (z - 1.0).norm() < 1e-14));
        assert_eq!(spec.stationary_count(), 9);
        assert!(eigenpair_residual(&s, 1).unwrap() < 1e-14);
    }

    #[test]
    fn min_distance_examples() {
        let a = [c64::new(1.0, 0.0)];
        let b = [c64::new(1.0 + 1e-3, 0.0)];
        let p = min_distance_profile(&a, &b);
        assert!((p[0] - 1e-3).abs() < 1e-15);
        let z = [c64::new(0.0, 1.0), c64::new(2.0, 0.0), c64::new(-1.0, 0.5)];
        assert!(min_distance_profile(&z, &z).iter().all(|&d| d == 0.0));
        let far = [c64::new(0.0, 1.0)];
        let prof = min_distance_profile(&z, &far);
        assert!(prof.windows(2).all(|w| w[0] >= w[1]));
        assert!(symmetric_min_distance(&far, &z) >= prof[0]);
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(kossakowski_sum_bounds(1).unwrap(), (0.0, 4.0));
        assert_eq!(kossakowski_sum_bounds(4).unwrap(), (1.0, 9.0));
        assert!(kossakowski_sum_bounds(0).is_err());
    }

    #[test]
    fn map_examples() {
        let p = predict_denoiser_contour(&[c64::new(0.0, 0.0)], 0.1, 2);
        assert!((p.mapped[0].re - 0.2f64.exp()).abs() < 1e-15);
        assert!((p.center - 1.2214027581601699).abs() < 1e-15);
        let base: Vec<c64> = (0..8).map(|k| c64::from_polar(0.05, k as f64)).collect();
        let zero = predict_denoiser_contour(&base, 0.0, 5);
        assert!(zero.mapped.iter().all(|&z| z == c64::new(1.0, 0.0)));
    }

    #[test]
    fn polygon_helpers() {
        let square = [c64::new(-1.0, -1.0), c64::new(1.0, -1.0), c64::new(1.0, 1.0), c64::new(-1.0, 1.0)];
        assert!(point_in_polygon(c64::new(0.2, 0.3), &square));
        assert!(!point_in_polygon(c64::new(1.2, 0.3), &square));
        assert!(polygon_centroid(&square).norm() < 1e-15);
    }

    #[test]
    fn dilation_about_centroid() {
        let base: Vec<c64> = (0..64).map(|k| c64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 64.0)).collect();
        let pred = ContourPrediction { t: 0.0, layers: 1, base: base.clone(), mapped: base, center: 1.0 };
        assert!(!pred.contains_dilated(c64::new(1.05, 0.0), 0.0));
        assert!(pred.contains_dilated(c64::new(1.05, 0.0), 0.1));
        assert!(!pred.contains_dilated(c64::new(1.15, 0.0), 0.1));
    }

    #[test]
    fn circle_contour() {
        let n = 4000;
        let vals: Vec<c64> = (0..n)
            .map(|k| c64::from_polar(0.03, k as f64 * std::f64::consts::TAU / n as f64) - 1.0)
            .chain([c64::new(0.0, 0.0)])
            .collect();
        let mut s = sample(vals, SuperopKind::Lindbladian);
        s.params.dim = 8;
        let contour = empirical_lindblad_contour(&[s.clone()], 32, 8).unwrap();
        assert_eq!(contour.len(), 32);
        assert!(contour.iter().all(|z| (z.norm() - 0.03).abs() < 1e-12));
        let angles: Vec<f64> = contour.iter().map(|z| z.im.atan2(z.re)).collect();
        assert!(angles.windows(2).all(|w| w[0] < w[1]));
        // rescaling to a different target size
        let half = empirical_lindblad_contour(&[s.clone()], 32, 16).unwrap();
        assert!(half.iter().all(|z| (z.norm() - 0.015).abs() < 1e-12));
        assert!(matches!(empirical_lindblad_contour(&[s.clone()], 8, 8), Err(Error::InvalidParameter(_))));
        let sparse = sample(vec![c64::new(-1.0, 0.01), c64::new(-1.0, -0.01)], SuperopKind::Lindbladian);
        assert!(matches!(empirical_lindblad_contour(&[sparse], 16, 2), Err(Error::Binning { .. })));
    }

    #[test]
    fn band_clustering_on_synthetic_levels() {
        let mut vals = vec![c64::new(1.0, 0.0)];
        for k in 0..200 {
            let x = k as f64 / 200.0;
            vals.push(c64::from_polar((0.1 * (1.0 + 0.05 * x)).exp(), 0.3 + x));
            vals.push(c64::from_polar((0.1 * (3.0 + 0.05 * x)).exp(), 0.3 + x));
        }
        let s = sample(vals, SuperopKind::Denoiser);
        let summary = decay_band_clusters(&s, DecayScale::Denoiser { t: 0.1, layers: 1 }, BandRule::default()).unwrap();
        assert_eq!(summary.stationary, 1);
        assert_eq!(summary.non_stationary_band_count(), 2);
        assert_eq!(summary.band_count(), 3);
        assert_eq!(summary.bands[0].population, 200);
        assert!((summary.bands[1].center - 3.025).abs() < 1e-3);
        assert!(decay_band_clusters(&sample(vec![c64::new(2.0, 0.0)], SuperopKind::Denoiser), DecayScale::Lindbladian, BandRule::default()).is_err());
    }

    #[test]
    fn conjugation_checks() {
        let s = sample(vec![c64::new(0.5, 0.2), c64::new(0.5, -0.2), c64::new(0.1, 0.0)], SuperopKind::Generic);
        assert_eq!(s.conjugation_defect(), 0.0);
        assert!(s.check_invariants(3, 1e-8).is_ok());
        assert!(s.check_invariants(4, 1e-8).is_err());
        let bad = sample(vec![c64::new(0.5, 0.2)], SuperopKind::Generic);
        assert!(bad.check_invariants(1, 1e-8).is_err());
    }
}
