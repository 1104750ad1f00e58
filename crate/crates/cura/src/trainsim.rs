//! Beam-training sweeps, spectral-efficiency evaluation, coverage probing,
//! and Monte-Carlo experiment orchestration.
//!
//! Sweeps are exhaustive: training overhead equals codebook cardinality. All
//! sampling is driven by a counter-seeded RNG (one independent stream per
//! trial), so results are bit-identical for a given master seed regardless of
//! evaluation order. Bulk codeword scoring runs through a single-precision
//! SoA kernel; the selected codeword's reported gain is recomputed in double
//! precision.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codebook::{
    baseline_dft, baseline_uniform_polar, baseline_uniform_spherical, build_codebook_1d,
    build_codebook_2d, codebook_layout_1d, codebook_layout_2d, Codebook, CodebookOptions,
    DesignThresholds,
};
use crate::erd::{erd_1d, erd_2d_branches};
use crate::error::{Error, Result};
use crate::geometry::{location_from_polar, ArrayGeometry, PolarDirection, SphericalLocation};
use crate::wavefield::{focusing_vector_any, vector_gain, ComplexWeightVector};

/// Codeword coefficients flattened into single-precision planar storage for
/// fast bulk scoring.
pub struct GainMatrix {
    len: usize,
    re: Vec<f32>,
    im: Vec<f32>,
}

impl GainMatrix {
    pub fn from_codebook(codebook: &Codebook) -> Self {
        let len = codebook
            .codewords()
            .first()
            .map_or(0, |(w, _)| w.len());
        let n = codebook.len();
        let mut re = Vec::with_capacity(n * len);
        let mut im = Vec::with_capacity(n * len);
        for (w, _) in codebook.codewords() {
            for c in w.coefficients() {
                re.push(c.re as f32);
                im.push(c.im as f32);
            }
        }
        Self { len, re, im }
    }

    pub fn n_codewords(&self) -> usize {
        if self.len == 0 {
            0
        } else {
            self.re.len() / self.len
        }
    }

    /// `|hᴴw|²` for one codeword row against a planar channel.
    fn gain_sq(&self, row: usize, h_re: &[f32], h_im: &[f32]) -> f32 {
        let offset = row * self.len;
        let wr = &self.re[offset..offset + self.len];
        let wi = &self.im[offset..offset + self.len];
        // Eight independent accumulator lanes keep the reduction vectorizable.
        let mut acc_re = [0.0f32; 8];
        let mut acc_im = [0.0f32; 8];
        let chunks = self.len / 8;
        for c in 0..chunks {
            let base = c * 8;
            for l in 0..8 {
                let (a, b) = (h_re[base + l], h_im[base + l]);
                let (x, y) = (wr[base + l], wi[base + l]);
                // conj(h) * w accumulated lane-wise.
                acc_re[l] += a * x + b * y;
                acc_im[l] += a * y - b * x;
            }
        }
        let (mut sr, mut si) = (0.0f32, 0.0f32);
        for l in 0..8 {
            sr += acc_re[l];
            si += acc_im[l];
        }
        for i in chunks * 8..self.len {
            let (a, b) = (h_re[i], h_im[i]);
            let (x, y) = (wr[i], wi[i]);
            sr += a * x + b * y;
            si += a * y - b * x;
        }
        sr * sr + si * si
    }

    /// Argmax of `|hᴴw|²` over all rows; ties broken by lowest index.
    pub fn best(&self, h_re: &[f32], h_im: &[f32]) -> (usize, f32) {
        let mut best_idx = 0usize;
        let mut best_gain = -1.0f32;
        for row in 0..self.n_codewords() {
            let g = self.gain_sq(row, h_re, h_im);
            if g > best_gain {
                best_gain = g;
                best_idx = row;
            }
        }
        (best_idx, best_gain)
    }

    /// Argmax restricted to candidate rows; ties broken by lowest index.
    pub fn best_among(&self, candidates: &[usize], h_re: &[f32], h_im: &[f32]) -> (usize, f32) {
        let mut best_idx = 0usize;
        let mut best_gain = -1.0f32;
        for &row in candidates {
            let g = self.gain_sq(row, h_re, h_im);
            if g > best_gain {
                best_gain = g;
                best_idx = row;
            }
        }
        (best_idx, best_gain)
    }
}

fn planar(h: &[Complex64]) -> (Vec<f32>, Vec<f32>) {
    (
        h.iter().map(|c| c.re as f32).collect(),
        h.iter().map(|c| c.im as f32).collect(),
    )
}

/// Exhaustive beam sweep: the codeword maximizing `|hᴴw|²` over the book
/// (double precision; ties broken by lowest index). Returns `(index, gain²)`.
pub fn sweep_select(codebook: &Codebook, channel: &[Complex64]) -> Result<(usize, f64)> {
    if codebook.is_empty() {
        return Err(Error::InvalidArgument("empty codebook".into()));
    }
    let mut best = (0usize, -1.0f64);
    for (i, (w, _)) in codebook.codewords().iter().enumerate() {
        let g = vector_gain(channel, w)?.powi(2);
        if g > best.1 {
            best = (i, g);
        }
    }
    Ok(best)
}

/// Spectral efficiency `log2(1 + SNR·|hᴴv|²)` in bits/s/Hz.
pub fn spectral_efficiency(gain: f64, snr_db: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gain) {
        return Err(Error::Domain(format!(
            "alignment gain must lie in [0,1], got {gain}"
        )));
    }
    let snr_linear = 10.0f64.powf(snr_db / 10.0);
    Ok((1.0 + snr_linear * gain).log2())
}

/// How user ranges are drawn within the region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RangeSampling {
    /// Uniform in the reciprocal range τ = 1/r (the codebook's natural metric).
    #[default]
    TauUniform,
    /// Uniform in r.
    RUniform,
}

/// User-location region: range bounds crossed with the polar coverage disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserRegion {
    pub r_min: f64,
    pub r_max: f64,
    pub rho_max: f64,
    pub phi_tilde_max: f64,
    /// Restrict ranges to lie inside the direction's ERD (directions whose
    /// ERD falls below `r_min` are redrawn).
    pub inside_erd: bool,
}

/// Which codebook a scenario entry refers to; proposed and baseline books are
/// built lazily (one at a time) to bound peak memory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodebookSpec {
    /// The ERD-guided hierarchical codebook for the scenario geometry.
    Proposed,
    /// DFT baseline (size capped at the element count).
    Dft,
    /// Budget-matched uniform polar-domain surrogate.
    UniformPolar,
    /// Budget-matched uniform spherical surrogate.
    UniformSpherical,
}

/// A complete Monte-Carlo beam-training experiment description.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub geometry: ArrayGeometry,
    pub thresholds: DesignThresholds,
    pub options: CodebookOptions,
    pub codebooks: Vec<(String, CodebookSpec)>,
    pub region: UserRegion,
    pub snr_grid_db: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub range_sampling: RangeSampling,
}

/// Per-codebook, per-SNR mean spectral efficiency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrPoint {
    pub snr_db: f64,
    pub mean_spectral_efficiency: f64,
}

/// Per-codebook training outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodebookResult {
    pub name: String,
    /// Codebook cardinality = training overhead (number of probed beams).
    pub size: usize,
    pub mean_alignment_gain: f64,
    pub per_snr: Vec<SnrPoint>,
    /// Selected-beam index histogram (index → count).
    pub histogram: BTreeMap<usize, u64>,
}

/// Full result of a scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingResult {
    pub trials: u64,
    pub master_seed: u64,
    pub codebooks: Vec<CodebookResult>,
    /// Mean genie spectral efficiency (beam matched to the true location) per
    /// SNR point, an upper bound for every codebook.
    pub genie_per_snr: Vec<SnrPoint>,
}

/// ERD used for the `inside_erd` user-region gate. For the 2-D array the
/// compact-form minimum can collapse to zero (its x-branch vanishes at
/// broadside while the horizontal aperture is small); the arc branch is the
/// physically meaningful near-field extent, so the gate uses it.
fn region_erd(geom: &ArrayGeometry, dir: PolarDirection, delta_gain: f64) -> Result<f64> {
    match geom {
        ArrayGeometry::OneD(g) => erd_1d(g, dir, delta_gain),
        ArrayGeometry::TwoD(g) => Ok(erd_2d_branches(g, dir, delta_gain)?.1),
    }
}

/// One drawn user: location plus the LoS path phase.
#[derive(Debug, Clone, Copy)]
pub struct DrawnUser {
    pub location: SphericalLocation,
    pub path_phase: f64,
}

/// Draws the trial's user location from its dedicated RNG stream:
/// direction area-uniform over the polar disc sector, range τ-uniform (or
/// r-uniform) over the admissible interval.
pub fn draw_user(
    geom: &ArrayGeometry,
    region: &UserRegion,
    delta_gain: f64,
    sampling: RangeSampling,
    master_seed: u64,
    trial: u64,
) -> Result<DrawnUser> {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    for _ in 0..10_000 {
        let rho = region.rho_max * rng.gen::<f64>().sqrt();
        let varphi = region.phi_tilde_max * (2.0 * rng.gen::<f64>() - 1.0);
        let dir = PolarDirection::new(rho, varphi);
        let r_hi = if region.inside_erd {
            region_erd(geom, dir, delta_gain)?.min(region.r_max)
        } else {
            region.r_max
        };
        if r_hi <= region.r_min {
            continue; // direction has no admissible range; redraw
        }
        let u = rng.gen::<f64>();
        let r = match sampling {
            RangeSampling::TauUniform => {
                let tau = 1.0 / r_hi + u * (1.0 / region.r_min - 1.0 / r_hi);
                1.0 / tau
            }
            RangeSampling::RUniform => region.r_min + u * (r_hi - region.r_min),
        };
        let path_phase = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        return Ok(DrawnUser {
            location: location_from_polar(r, dir)?,
            path_phase,
        });
    }
    Err(Error::InvalidArgument(
        "user region admits no locations (ERD below r_min everywhere sampled)".into(),
    ))
}

/// Builds the codebook a scenario entry refers to. Baselines are
/// budget-matched to the proposed codebook's size (the DFT book is capped at
/// the element count, its maximal orthogonal size).
pub fn build_scenario_codebook(scenario: &Scenario, spec: &CodebookSpec) -> Result<Codebook> {
    let proposed_size = proposed_size(scenario)?;
    match (spec, &scenario.geometry) {
        (CodebookSpec::Proposed, ArrayGeometry::OneD(g)) => {
            build_codebook_1d(g, &scenario.thresholds, &scenario.options)
        }
        (CodebookSpec::Proposed, ArrayGeometry::TwoD(g)) => {
            build_codebook_2d(g, &scenario.thresholds, &scenario.options)
        }
        (CodebookSpec::Dft, geom) => {
            baseline_dft(geom, proposed_size.min(geom.n_elements()))
        }
        (CodebookSpec::UniformPolar, geom) => {
            baseline_uniform_polar(geom, &scenario.thresholds, proposed_size)
        }
        (CodebookSpec::UniformSpherical, geom) => {
            baseline_uniform_spherical(geom, &scenario.thresholds, proposed_size)
        }
    }
}

/// Size of the proposed codebook for this scenario (streamed, not built).
pub fn proposed_size(scenario: &Scenario) -> Result<usize> {
    Ok(match &scenario.geometry {
        ArrayGeometry::OneD(g) => {
            codebook_layout_1d(g, &scenario.thresholds, &scenario.options)?.total
        }
        ArrayGeometry::TwoD(g) => {
            codebook_layout_2d(g, &scenario.thresholds, &scenario.options)?.total
        }
    })
}

fn validate_scenario(scenario: &Scenario) -> Result<()> {
    scenario.thresholds.validate_for(&scenario.geometry)?;
    if scenario.trials < 1 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if scenario.snr_grid_db.is_empty() {
        return Err(Error::InvalidArgument("SNR grid must be non-empty".into()));
    }
    if scenario.codebooks.is_empty() {
        return Err(Error::InvalidArgument("need at least one codebook".into()));
    }
    let region = &scenario.region;
    if !(region.r_min >= scenario.thresholds.r_min
        && region.r_max <= scenario.thresholds.r_max
        && region.r_min < region.r_max)
    {
        return Err(Error::InvalidArgument(format!(
            "user region ranges [{}, {}] must lie within the design region [{}, {}]",
            region.r_min, region.r_max, scenario.thresholds.r_min, scenario.thresholds.r_max
        )));
    }
    if !(region.rho_max > 0.0 && region.rho_max <= scenario.thresholds.rho_max) {
        return Err(Error::InvalidArgument(format!(
            "region rho_max {} outside (0, {}]",
            region.rho_max, scenario.thresholds.rho_max
        )));
    }
    Ok(())
}

/// Runs the full Monte-Carlo experiment: draws every trial's user, builds the
/// normalized LoS channel, sweeps each codebook, and accumulates per-SNR
/// spectral efficiency. Deterministic given the master seed; codebooks are
/// built and scored one at a time.
pub fn run_scenario(scenario: &Scenario) -> Result<TrainingResult> {
    validate_scenario(scenario)?;
    // All trial channels are drawn up front, in trial order, so per-codebook
    // scoring cannot perturb the sampling sequence.
    let mut channels: Vec<Vec<Complex64>> = Vec::with_capacity(scenario.trials as usize);
    for trial in 0..scenario.trials {
        let user = draw_user(
            &scenario.geometry,
            &scenario.region,
            scenario.thresholds.delta_gain,
            scenario.range_sampling,
            scenario.master_seed,
            trial,
        )?;
        // Normalized LoS channel: unit path gain with random phase over the
        // unit-norm focusing vector.
        let b = focusing_vector_any(&scenario.geometry, &user.location)?;
        let rot = Complex64::from_polar(1.0, user.path_phase);
        channels.push(b.coefficients().iter().map(|c| rot * c).collect());
    }
    let planar_channels: Vec<(Vec<f32>, Vec<f32>)> = channels.iter().map(|h| planar(h)).collect();

    let genie_per_snr = scenario
        .snr_grid_db
        .iter()
        .map(|&snr| {
            Ok(SnrPoint {
                snr_db: snr,
                mean_spectral_efficiency: spectral_efficiency(1.0, snr)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut results = Vec::with_capacity(scenario.codebooks.len());
    for (name, spec) in &scenario.codebooks {
        let codebook = build_scenario_codebook(scenario, spec)?;
        let matrix = GainMatrix::from_codebook(&codebook);
        let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
        let mut gain_sum = 0.0f64;
        let mut se_sums = vec![0.0f64; scenario.snr_grid_db.len()];
        for (h, (h_re, h_im)) in channels.iter().zip(&planar_channels) {
            let (idx, _) = matrix.best(h_re, h_im);
            // Report the winner's gain in double precision.
            let gain = vector_gain(h, &codebook.codewords()[idx].0)?.powi(2).min(1.0);
            *histogram.entry(idx).or_insert(0) += 1;
            gain_sum += gain;
            for (sum, &snr) in se_sums.iter_mut().zip(&scenario.snr_grid_db) {
                *sum += spectral_efficiency(gain, snr)?;
            }
        }
        let n = scenario.trials as f64;
        results.push(CodebookResult {
            name: name.clone(),
            size: codebook.len(),
            mean_alignment_gain: gain_sum / n,
            per_snr: scenario
                .snr_grid_db
                .iter()
                .zip(&se_sums)
                .map(|(&snr_db, &sum)| SnrPoint {
                    snr_db,
                    mean_spectral_efficiency: sum / n,
                })
                .collect(),
            histogram,
        });
    }
    Ok(TrainingResult {
        trials: scenario.trials,
        master_seed: scenario.master_seed,
        codebooks: results,
        genie_per_snr,
    })
}

/// Coverage statistics over a sampled region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageStats {
    pub n_samples: usize,
    pub min: f64,
    pub mean: f64,
    pub percentile_5: f64,
    /// For each queried threshold δ, the fraction of samples whose best
    /// correlation reaches it.
    pub threshold_fractions: Vec<(f64, f64)>,
}

/// Probes coverage: samples user locations (τ-uniform range, area-uniform
/// direction) and reports statistics of `max_w |b(s)ᴴw|`.
///
/// `angular_window` restricts each sample's search to codewords within that
/// polar-domain distance of the sample direction. The restricted maximum is a
/// lower bound on the true maximum, so the reported statistics are
/// conservative; pass `None` for the exhaustive search.
pub fn coverage_probe(
    geom: &ArrayGeometry,
    codebook: &Codebook,
    region: &UserRegion,
    n_samples: usize,
    seed: u64,
    delta_thresholds: &[f64],
    angular_window: Option<f64>,
) -> Result<CoverageStats> {
    if n_samples < 1 {
        return Err(Error::InvalidArgument("need at least one coverage sample".into()));
    }
    if codebook.is_empty() {
        return Err(Error::InvalidArgument("empty codebook".into()));
    }
    let matrix = GainMatrix::from_codebook(codebook);
    let directions: Vec<PolarDirection> = codebook
        .codewords()
        .iter()
        .map(|(_, meta)| meta.direction)
        .collect();
    let mut best_gains = Vec::with_capacity(n_samples);
    for sample in 0..n_samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sample as u64);
        let rho = region.rho_max * rng.gen::<f64>().sqrt();
        let varphi = region.phi_tilde_max * (2.0 * rng.gen::<f64>() - 1.0);
        let tau = 1.0 / region.r_max
            + rng.gen::<f64>() * (1.0 / region.r_min - 1.0 / region.r_max);
        let dir = PolarDirection::new(rho, varphi);
        let loc = location_from_polar(1.0 / tau, dir)?;
        let b = focusing_vector_any(geom, &loc)?;
        let (h_re, h_im) = planar(b.coefficients());
        let gain_sq = match angular_window {
            None => matrix.best(&h_re, &h_im).1,
            Some(window) => {
                let candidates: Vec<usize> = directions
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| {
                        (d.rho - rho).hypot(d.varphi - varphi) <= window
                    })
                    .map(|(i, _)| i)
                    .collect();
                if candidates.is_empty() {
                    matrix.best(&h_re, &h_im).1
                } else {
                    matrix.best_among(&candidates, &h_re, &h_im).1
                }
            }
        };
        best_gains.push((gain_sq.max(0.0) as f64).sqrt().min(1.0));
    }
    let mut sorted = best_gains.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("gains are finite"));
    let p5_index = ((n_samples as f64) * 0.05).floor() as usize;
    Ok(CoverageStats {
        n_samples,
        min: sorted[0],
        mean: best_gains.iter().sum::<f64>() / n_samples as f64,
        percentile_5: sorted[p5_index.min(n_samples - 1)],
        threshold_fractions: delta_thresholds
            .iter()
            .map(|&delta| {
                let frac = best_gains.iter().filter(|&&g| g >= delta).count() as f64
                    / n_samples as f64;
                (delta, frac)
            })
            .collect(),
    })
}

/// Convenience wrapper retained for tests: the exact best gain of a codebook
/// against an explicit weight vector (double precision, exhaustive).
pub fn best_gain_exact(codebook: &Codebook, v: &ComplexWeightVector) -> Result<(usize, f64)> {
    sweep_select(codebook, v.coefficients())
}
