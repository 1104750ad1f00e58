//! ERD-guided hierarchical polar-domain codebook generation for 1-D and 2-D
//! CuRAs, plus the baseline codebooks used for comparison.
//!
//! The hierarchical construction first lays out an angular grid of concentric
//! polar-domain rings whose spacing keeps the `J0` angular correlation of
//! neighboring beams at the design threshold, then attaches to each direction
//! a reciprocal-range (τ-uniform) near-field grid inside the direction's ERD
//! and a sparse logarithmic far-field grid beyond it. 1-D codewords are exact
//! focusing vectors; 2-D codewords use the separable Kronecker construction
//! with a distance-dependent phase correction.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::correlation::{arc_quadratic_scale, theta_factor, ThetaVariant};
use crate::erd::{erd_1d, erd_2d};
use crate::error::{Error, Result};
use crate::geometry::{
    location_from_polar, polar_to_spherical, ArrayGeometry, Cura1DGeometry, Cura2DGeometry,
    PolarDirection,
};
use crate::specfun::{bessel_j0_inverse, fresnel_envelope_inverse};
use crate::wavefield::{element_distances, focusing_vector, ComplexWeightVector};

/// Lower clamp applied to the direction factors `Θ` and `ξ` (and the 2-D
/// `|cosρ cosφ̃|`) inside step-size computations, where they would otherwise
/// make the steps diverge at grazing directions.
pub const DIRECTION_FACTOR_CLAMP: f64 = 0.05;

/// Correlation/gain-loss thresholds and coverage-region bounds driving the
/// grid generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignThresholds {
    /// Angular coherence threshold δ_p ∈ (0,1).
    pub delta_p: f64,
    /// Range coherence threshold δ_r ∈ (0,1).
    pub delta_r: f64,
    /// ERD gain-loss tolerance δ_gain ∈ (0,1).
    pub delta_gain: f64,
    /// Far-field sparsity factor η_r > 0 (log-grid growth rate).
    pub eta_r: f64,
    /// Joint 2-D angular coherence η_a ∈ (0,1).
    pub eta_a: f64,
    /// Polar coverage limit ρ_max ∈ (0, π/2].
    pub rho_max: f64,
    /// Service-region range bounds (meters).
    pub r_min: f64,
    pub r_max: f64,
}

impl DesignThresholds {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64, name: &str| -> Result<()> {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0,1), got {v}")));
            }
            Ok(())
        };
        unit(self.delta_p, "delta_p")?;
        unit(self.delta_r, "delta_r")?;
        unit(self.delta_gain, "delta_gain")?;
        unit(self.eta_a, "eta_a")?;
        if !(self.eta_r > 0.0) {
            return Err(Error::Config(format!(
                "eta_r must be positive, got {}",
                self.eta_r
            )));
        }
        if !(self.rho_max > 0.0 && self.rho_max <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::Config(format!(
                "rho_max must lie in (0, pi/2], got {}",
                self.rho_max
            )));
        }
        if !(self.r_min > 0.0 && self.r_min < self.r_max) {
            return Err(Error::Config(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        Ok(())
    }

    /// Checks the geometry-dependent minimum-distance invariant
    /// `r_min > 0.5·√(D³/λ)` (validity of the second-order expansion).
    pub fn validate_for(&self, geom: &ArrayGeometry) -> Result<()> {
        self.validate()?;
        let bound = 0.5 * (geom.aperture().powi(3) / geom.wavelength()).sqrt();
        if self.r_min <= bound {
            return Err(Error::Config(format!(
                "r_min = {} must exceed the Fresnel validity bound 0.5*sqrt(D^3/lambda) = {bound:.3}",
                self.r_min
            )));
        }
        Ok(())
    }

    /// Reference defaults: all coherence thresholds 0.5, η_r = 1,
    /// η_a = δ_p² (so a single-row 2-D array reduces to the 1-D design),
    /// full polar coverage.
    pub fn defaults(r_min: f64, r_max: f64) -> Self {
        Self {
            delta_p: 0.5,
            delta_r: 0.5,
            delta_gain: 0.5,
            eta_r: 1.0,
            eta_a: 0.25,
            rho_max: std::f64::consts::FRAC_PI_2,
            r_min,
            r_max,
        }
    }
}

/// Formula switches exposed by the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodebookOptions {
    /// Which `Θ` variant the sampling rules use.
    pub theta_variant: ThetaVariant,
    /// Keep the strict 2-D horizontal Δτ branch (with its extra `R` factor)
    /// instead of the dimensionally consistent alternative.
    pub strict_formulas: bool,
    /// Azimuthal half-width φ̃_max of the coverage region; defaults to the
    /// bend half-angle β.
    pub phi_tilde_max: Option<f64>,
}

impl Default for CodebookOptions {
    fn default() -> Self {
        Self {
            theta_variant: ThetaVariant::BroadsideUnit,
            strict_formulas: true,
            phi_tilde_max: None,
        }
    }
}

impl CodebookOptions {
    fn phi_max(&self, beta: f64) -> f64 {
        self.phi_tilde_max.unwrap_or(beta)
    }
}

/// Whether a codeword focuses inside the direction's ERD or steers beyond it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodewordKind {
    NearField,
    FarField,
}

/// Position of a codeword in the hierarchical grid:
/// ring index `i`, azimuth index `j`, range index `s` (near) or `l` (far),
/// all zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridIndex {
    pub ring: usize,
    pub azimuth: usize,
    pub range: usize,
}

/// Metadata describing where a codeword points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodewordMeta {
    pub kind: CodewordKind,
    /// Focal range in meters (far-field codewords carry their log-grid range).
    pub range: f64,
    pub direction: PolarDirection,
    pub grid_index: GridIndex,
}

/// A generated codebook: unit-norm constant-modulus codewords with their
/// grid metadata, plus a fingerprint of the generating inputs.
#[derive(Debug, Clone)]
pub struct Codebook {
    codewords: Vec<(ComplexWeightVector, CodewordMeta)>,
    fingerprint: String,
}

impl Codebook {
    pub fn codewords(&self) -> &[(ComplexWeightVector, CodewordMeta)] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Hash of geometry + thresholds + switches that generated the book.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

/// Fingerprints any serializable description of the generating inputs.
pub fn fingerprint_of(inputs: &impl Serialize) -> String {
    let json = serde_json::to_string(inputs).expect("fingerprint serialization cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// One ring of the angular grid: its polar radius and azimuth samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    pub rho: f64,
    pub azimuths: Vec<f64>,
}

impl Ring {
    pub fn directions(&self) -> impl Iterator<Item = PolarDirection> + '_ {
        self.azimuths
            .iter()
            .map(move |&v| PolarDirection::new(self.rho, v))
    }
}

/// Local radial step `Δρ = J0⁻¹(δ_p)·λ·β / (2πR sinβ · Θ)`, evaluated through
/// the finite combination `R sinβ/β` and with `Θ` clamped from below.
pub fn radial_step_1d(
    geom: &Cura1DGeometry,
    thresholds: &DesignThresholds,
    dir: PolarDirection,
    variant: ThetaVariant,
) -> Result<f64> {
    thresholds.validate()?;
    let theta = theta_factor(dir, variant).max(DIRECTION_FACTOR_CLAMP);
    Ok(ring_step_1d(geom, thresholds)? / theta)
}

/// Ring spacing of the 1-D angular grid: the radial step at the worst-case
/// direction factor `Θ_max = 1`.
fn ring_step_1d(geom: &Cura1DGeometry, thresholds: &DesignThresholds) -> Result<f64> {
    let inv = bessel_j0_inverse(thresholds.delta_p)?.value();
    Ok(inv * geom.wavelength() / (2.0 * std::f64::consts::PI * geom.radius_sinc_beta()))
}

fn azimuth_count_1d(
    geom: &Cura1DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
    rho: f64,
) -> Result<usize> {
    // N_φ(ρ) = ceil(4πRρ sinβ φ̃_max / (λ J0⁻¹(δ_p) β)), at least one sample.
    let inv = bessel_j0_inverse(thresholds.delta_p)?.value();
    let phi_max = options.phi_max(geom.bend_half_angle());
    let count = (4.0 * std::f64::consts::PI * geom.radius_sinc_beta() * rho * phi_max
        / (geom.wavelength() * inv))
        .ceil() as usize;
    Ok(count.max(1))
}

fn rings_from(
    ring_step: f64,
    rho_max: f64,
    phi_max: f64,
    mut azimuth_count: impl FnMut(f64) -> Result<usize>,
) -> Result<Vec<Ring>> {
    let n_rings = (rho_max / ring_step).floor() as usize;
    let mut rings = Vec::with_capacity(n_rings + 1);
    rings.push(Ring {
        rho: 0.0,
        azimuths: vec![0.0],
    });
    for i in 1..=n_rings {
        let rho = i as f64 * ring_step;
        let n_phi = azimuth_count(rho)?;
        let azimuths = (0..n_phi)
            .map(|j| -phi_max + j as f64 * 2.0 * phi_max / n_phi as f64)
            .collect();
        rings.push(Ring { rho, azimuths });
    }
    Ok(rings)
}

/// 1-D angular grid: rings `ρ_i = i·Δρ` with azimuths placed uniformly on
/// `[−φ̃_max, φ̃_max)`; ring 0 degenerates to the single broadside point.
pub fn angular_grid_1d(
    geom: &Cura1DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<Vec<Ring>> {
    thresholds.validate()?;
    let step = ring_step_1d(geom, thresholds)?;
    rings_from(
        step,
        thresholds.rho_max,
        options.phi_max(geom.bend_half_angle()),
        |rho| azimuth_count_1d(geom, thresholds, options, rho),
    )
}

/// Reciprocal-range step `Δτ = 2λ·J0⁻¹(δ_r) / (πR²ξ)` with `ξ` clamped from
/// below inside the step computation.
fn near_tau_step(geom: &Cura1DGeometry, dir: PolarDirection, thresholds: &DesignThresholds) -> Result<f64> {
    let inv = bessel_j0_inverse(thresholds.delta_r)?.value();
    Ok(2.0 * geom.wavelength() * inv / (std::f64::consts::PI * clamped_quadratic_scale(geom, dir)))
}

/// `R²ξ` with the direction factor clamped at [`DIRECTION_FACTOR_CLAMP`].
fn clamped_quadratic_scale(geom: &Cura1DGeometry, dir: PolarDirection) -> f64 {
    let scale = arc_quadratic_scale(geom, dir);
    if geom.is_straight() {
        let half = 0.5 * geom.arc_length();
        scale.max(half * half * DIRECTION_FACTOR_CLAMP)
    } else {
        let r = geom.radius();
        scale.max(r * r * DIRECTION_FACTOR_CLAMP)
    }
}

fn near_grid_from(erd: f64, d_tau: f64, thresholds: &DesignThresholds) -> Vec<f64> {
    if erd <= thresholds.r_min {
        return Vec::new();
    }
    let erd = erd.min(thresholds.r_max);
    let tau_lo = 1.0 / erd;
    let tau_hi = 1.0 / thresholds.r_min;
    let m_nf = ((tau_hi - tau_lo) / d_tau).floor() as usize + 1;
    (0..m_nf).map(|s| 1.0 / (tau_lo + s as f64 * d_tau)).collect()
}

/// τ-uniform near-field range grid on `[1/erd, 1/r_min]`: ranges strictly
/// decreasing from the ERD toward `r_min`. Empty when the ERD lies below the
/// service region.
pub fn near_range_grid(
    geom: &Cura1DGeometry,
    dir: PolarDirection,
    thresholds: &DesignThresholds,
) -> Result<Vec<f64>> {
    thresholds.validate()?;
    let erd = erd_1d(geom, dir, thresholds.delta_gain)?;
    Ok(near_grid_from(erd, near_tau_step(geom, dir, thresholds)?, thresholds))
}

fn far_grid_from(erd: f64, thresholds: &DesignThresholds) -> Vec<f64> {
    // The grid starts at the ERD, clamped up to r_min so the point count
    // stays bounded along directions whose ERD collapses toward zero.
    let start = erd.max(thresholds.r_min);
    if thresholds.r_max <= start {
        return Vec::new();
    }
    let ratio = thresholds.r_max / start;
    let m_ff = ((ratio.ln() / (1.0 + thresholds.eta_r).ln()).ceil() as usize).max(2);
    (0..m_ff)
        .map(|l| start * ratio.powf(l as f64 / (m_ff as f64 - 1.0)))
        .collect()
}

/// Logarithmic far-field range grid
/// `r_l = erd·(r_max/erd)^{(l-1)/(M_FF-1)}` with
/// `M_FF = max(2, ⌈log(r_max/erd)/log(1+η_r)⌉)`. Empty when the ERD exceeds
/// `r_max`.
pub fn far_range_grid(
    geom: &Cura1DGeometry,
    dir: PolarDirection,
    thresholds: &DesignThresholds,
) -> Result<Vec<f64>> {
    thresholds.validate()?;
    let erd = erd_1d(geom, dir, thresholds.delta_gain)?;
    Ok(far_grid_from(erd, thresholds))
}

/// Range plan of a single direction: near-field samples inside the ERD and
/// far-field samples beyond it, with the shared boundary sample deduplicated.
fn direction_range_plan(erd: f64, d_tau: f64, thresholds: &DesignThresholds) -> (Vec<f64>, Vec<f64>) {
    let near = near_grid_from(erd, d_tau, thresholds);
    let mut far = far_grid_from(erd, thresholds);
    if let (Some(&first_near), Some(&first_far)) = (near.first(), far.first()) {
        // Both grids include the ERD boundary itself; keep the near sample.
        if (first_far - first_near).abs() <= 1e-9 * first_far {
            far.remove(0);
        }
    }
    (near, far)
}

fn push_direction_codewords(
    out: &mut Vec<(ComplexWeightVector, CodewordMeta)>,
    ring: usize,
    azimuth: usize,
    dir: PolarDirection,
    near: &[f64],
    far: &[f64],
    mut make: impl FnMut(f64) -> Result<ComplexWeightVector>,
) -> Result<()> {
    // Deterministic ordering within a direction: descending τ (ascending r).
    for (s, &r) in near.iter().enumerate().rev() {
        out.push((
            make(r)?,
            CodewordMeta {
                kind: CodewordKind::NearField,
                range: r,
                direction: dir,
                grid_index: GridIndex { ring, azimuth, range: s },
            },
        ));
    }
    for (l, &r) in far.iter().enumerate() {
        out.push((
            make(r)?,
            CodewordMeta {
                kind: CodewordKind::FarField,
                range: r,
                direction: dir,
                grid_index: GridIndex { ring, azimuth, range: l },
            },
        ));
    }
    Ok(())
}

/// Builds the full 1-D hierarchical codebook: exact focusing vectors at every
/// (direction, range) grid point, ordered ring-major, then azimuth, then
/// descending τ.
pub fn build_codebook_1d(
    geom: &Cura1DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<Codebook> {
    thresholds.validate_for(&ArrayGeometry::OneD(*geom))?;
    let rings = angular_grid_1d(geom, thresholds, options)?;
    let mut codewords = Vec::new();
    for (i, ring) in rings.iter().enumerate() {
        for (j, dir) in ring.directions().enumerate() {
            let erd = erd_1d(geom, dir, thresholds.delta_gain)?;
            let d_tau = near_tau_step(geom, dir, thresholds)?;
            let (near, far) = direction_range_plan(erd, d_tau, thresholds);
            push_direction_codewords(&mut codewords, i, j, dir, &near, &far, |r| {
                focusing_vector(geom, &location_from_polar(r, dir)?)
            })?;
        }
    }
    Ok(Codebook {
        codewords,
        fingerprint: fingerprint_of(&("cura-1d", geom, thresholds, options)),
    })
}

/// Streaming size summary of a codebook layout (no codeword materialization),
/// used for recounts and the CLI size breakdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSummary {
    pub rings: usize,
    pub angular_points: usize,
    pub near_field: usize,
    pub far_field: usize,
    pub total: usize,
}

/// Counts the 1-D codebook layout without building codewords.
pub fn codebook_layout_1d(
    geom: &Cura1DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<LayoutSummary> {
    thresholds.validate_for(&ArrayGeometry::OneD(*geom))?;
    let rings = angular_grid_1d(geom, thresholds, options)?;
    let mut summary = LayoutSummary {
        rings: rings.len(),
        angular_points: 0,
        near_field: 0,
        far_field: 0,
        total: 0,
    };
    for ring in &rings {
        for dir in ring.directions() {
            let erd = erd_1d(geom, dir, thresholds.delta_gain)?;
            let d_tau = near_tau_step(geom, dir, thresholds)?;
            let (near, far) = direction_range_plan(erd, d_tau, thresholds);
            summary.angular_points += 1;
            summary.near_field += near.len();
            summary.far_field += far.len();
        }
    }
    summary.total = summary.near_field + summary.far_field;
    Ok(summary)
}

/// Effective 2-D radial step: the tighter of the arc constraint (tightened
/// threshold `√η_a`) and the horizontal direction-cosine constraint,
/// `Δρ_h = λ·arcsin(√η_a)/(πM d_x |cosρ cosφ̃|)`, with both direction factors
/// clamped from below. A single row has no horizontal aperture and excludes
/// the horizontal branch.
pub fn radial_step_2d(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    dir: PolarDirection,
    variant: ThetaVariant,
) -> Result<f64> {
    thresholds.validate()?;
    let tightened = tightened_thresholds(thresholds);
    let v = radial_step_1d(geom.arc(), &tightened, dir, variant)?;
    Ok(match horizontal_cosine_step(geom, thresholds, dir.rho.cos() * dir.varphi.cos()) {
        Some(h) => v.min(h),
        None => v,
    })
}

/// Thresholds with the angular coherence tightened to `√η_a` for the
/// separable per-dimension 2-D design.
fn tightened_thresholds(thresholds: &DesignThresholds) -> DesignThresholds {
    DesignThresholds {
        delta_p: thresholds.eta_a.sqrt(),
        ..*thresholds
    }
}

/// `λ·arcsin(√η_a) / (πM d_x · |cos factor|)`, or `None` for a single row.
fn horizontal_cosine_step(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    cos_factor: f64,
) -> Option<f64> {
    if geom.n_rows() <= 1 {
        return None;
    }
    let c = cos_factor.abs().max(DIRECTION_FACTOR_CLAMP);
    Some(
        geom.arc().wavelength() * thresholds.eta_a.sqrt().asin()
            / (std::f64::consts::PI * geom.n_rows() as f64 * geom.row_spacing() * c),
    )
}

fn ring_step_2d(geom: &Cura2DGeometry, thresholds: &DesignThresholds) -> Result<f64> {
    // Worst case over directions: Θ = 1 and |cosρ cosφ̃| = 1.
    let tightened = tightened_thresholds(thresholds);
    let v = ring_step_1d(geom.arc(), &tightened)?;
    Ok(match horizontal_cosine_step(geom, thresholds, 1.0) {
        Some(h) => v.min(h),
        None => v,
    })
}

/// 2-D angular grid: rings at the effective radial step; per-ring azimuth
/// spacing `Δφ̃(ρ_i, 0) = min(Δφ̃_v, Δφ̃_h)` evaluated at zero azimuth.
pub fn angular_grid_2d(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<Vec<Ring>> {
    thresholds.validate()?;
    let step = ring_step_2d(geom, thresholds)?;
    let tightened = tightened_thresholds(thresholds);
    let phi_max = options.phi_max(geom.arc().bend_half_angle());
    rings_from(step, thresholds.rho_max, phi_max, |rho| {
        let at_zero = PolarDirection::new(rho, 0.0);
        let theta = theta_factor(at_zero, options.theta_variant).max(DIRECTION_FACTOR_CLAMP);
        let inv = bessel_j0_inverse(tightened.delta_p)?.value();
        let d_varphi_v = inv * geom.arc().wavelength()
            / (2.0 * std::f64::consts::PI * geom.arc().radius_sinc_beta() * theta * rho);
        let d_varphi = match horizontal_cosine_step(geom, thresholds, rho.cos()) {
            Some(h) => d_varphi_v.min(h),
            None => d_varphi_v,
        };
        Ok(((2.0 * phi_max / d_varphi).ceil() as usize).max(1))
    })
}

/// Separable Kronecker angular codeword `w_x ⊗ w_yz`: the x-axis steering
/// phases over rows and the arc steering phases over the curved dimension,
/// both evaluated at the spherical direction mapped from `(ρ, φ̃)`. Ordering
/// matches `element_positions_2d`.
pub fn angular_codeword_2d(geom: &Cura2DGeometry, dir: PolarDirection) -> Result<ComplexWeightVector> {
    let k = 2.0 * std::f64::consts::PI / geom.arc().wavelength();
    let [ux, uy, uz] = dir.unit_vector();
    let arc_positions = crate::geometry::element_positions_1d(geom.arc());
    let mut phases = Vec::with_capacity(geom.n_elements());
    for m in 1..=geom.n_rows() {
        let x_phase = k * m as f64 * geom.row_spacing() * ux;
        phases.extend(
            arc_positions
                .iter()
                .map(|&[_, y, z]| x_phase + k * (uy * y + uz * z)),
        );
    }
    ComplexWeightVector::from_phases(&phases)
}

/// Angular codeword with the distance-dependent phase correction
/// `exp(−j·2π/λ·(r_{m,n}(r) − r_{m,n}(r_ref)))` toward range `r`, using exact
/// distances. `r_ref` is the design decision `r_max`, so far-range codewords
/// coincide with pure angular steering.
pub fn range_codeword_2d(
    geom: &Cura2DGeometry,
    dir: PolarDirection,
    r: f64,
    r_ref: f64,
) -> Result<ComplexWeightVector> {
    let angular = angular_codeword_2d(geom, dir)?;
    if r == r_ref {
        return Ok(angular);
    }
    let positions = crate::geometry::element_positions_2d(geom);
    let d_focus = element_distances(&positions, &location_from_polar(r, dir)?);
    let d_ref = element_distances(&positions, &location_from_polar(r_ref, dir)?);
    let k = 2.0 * std::f64::consts::PI / geom.arc().wavelength();
    let correction: Vec<Complex64> = d_focus
        .iter()
        .zip(&d_ref)
        .map(|(&df, &dr)| Complex64::from_polar(1.0, -k * ((df - r) - (dr - r_ref))))
        .collect();
    angular.rotated_by(&correction)
}

/// 2-D reciprocal-range step: the tighter of the horizontal Fresnel branch
/// and the arc branch. The strict horizontal branch `λ·ε_Δ/(R d_x²M²)`
/// carries an `R` absent from the definition of `ε`; the corrected branch
/// `λ·ε_Δ/(d_x²M²)` is used when `strict_formulas` is off (and in the
/// straight limit, where `R` diverges).
pub fn range_tau_step_2d(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    dir: PolarDirection,
    options: &CodebookOptions,
) -> Result<f64> {
    let arc_branch = near_tau_step(geom.arc(), dir, thresholds)?;
    if geom.n_rows() <= 1 {
        return Ok(arc_branch);
    }
    let eps = fresnel_envelope_inverse(thresholds.delta_r)?;
    let m = geom.n_rows() as f64;
    let base = geom.arc().wavelength() * eps / (geom.row_spacing().powi(2) * m * m);
    let horizontal = if options.strict_formulas && !geom.arc().is_straight() {
        base / geom.arc().radius()
    } else {
        base
    };
    Ok(horizontal.min(arc_branch))
}

/// Builds the 2-D hierarchical codebook per the separable construction:
/// per-direction ERD gating, τ-uniform near grid, logarithmic far grid, and
/// Kronecker-plus-correction codewords.
pub fn build_codebook_2d(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<Codebook> {
    thresholds.validate_for(&ArrayGeometry::TwoD(*geom))?;
    let rings = angular_grid_2d(geom, thresholds, options)?;
    let mut codewords = Vec::new();
    for (i, ring) in rings.iter().enumerate() {
        for (j, dir) in ring.directions().enumerate() {
            let erd = erd_2d(geom, dir, thresholds.delta_gain)?;
            let d_tau = range_tau_step_2d(geom, thresholds, dir, options)?;
            let (near, far) = direction_range_plan(erd, d_tau, thresholds);
            push_direction_codewords(&mut codewords, i, j, dir, &near, &far, |r| {
                range_codeword_2d(geom, dir, r, thresholds.r_max)
            })?;
        }
    }
    Ok(Codebook {
        codewords,
        fingerprint: fingerprint_of(&("cura-2d", geom, thresholds, options)),
    })
}

/// Counts the 2-D codebook layout without building codewords.
pub fn codebook_layout_2d(
    geom: &Cura2DGeometry,
    thresholds: &DesignThresholds,
    options: &CodebookOptions,
) -> Result<LayoutSummary> {
    thresholds.validate_for(&ArrayGeometry::TwoD(*geom))?;
    let rings = angular_grid_2d(geom, thresholds, options)?;
    let mut summary = LayoutSummary {
        rings: rings.len(),
        angular_points: 0,
        near_field: 0,
        far_field: 0,
        total: 0,
    };
    for ring in &rings {
        for dir in ring.directions() {
            let erd = erd_2d(geom, dir, thresholds.delta_gain)?;
            let d_tau = range_tau_step_2d(geom, thresholds, dir, options)?;
            let (near, far) = direction_range_plan(erd, d_tau, thresholds);
            summary.angular_points += 1;
            summary.near_field += near.len();
            summary.far_field += far.len();
        }
    }
    summary.total = summary.near_field + summary.far_field;
    Ok(summary)
}

fn synthetic_meta(index: usize, range: f64, dir: PolarDirection) -> CodewordMeta {
    CodewordMeta {
        kind: CodewordKind::FarField,
        range,
        direction: dir,
        grid_index: GridIndex { ring: 0, azimuth: index, range: 0 },
    }
}

/// Classical DFT codebook: `size` columns of the unitary DFT over the element
/// index, selected uniformly. Range-agnostic by construction.
pub fn baseline_dft(geom: &ArrayGeometry, size: usize) -> Result<Codebook> {
    let n = geom.n_elements();
    if size < 1 {
        return Err(Error::InvalidArgument("codebook size must be at least 1".into()));
    }
    if size > n {
        return Err(Error::InvalidArgument(format!(
            "DFT codebook size {size} exceeds element count {n}"
        )));
    }
    let mut codewords = Vec::with_capacity(size);
    for i in 0..size {
        let col = i * n / size;
        let phases: Vec<f64> = (0..n)
            .map(|e| 2.0 * std::f64::consts::PI * (col * e % n) as f64 / n as f64)
            .collect();
        codewords.push((
            ComplexWeightVector::from_phases(&phases)?,
            synthetic_meta(i, f64::INFINITY, PolarDirection::BROADSIDE),
        ));
    }
    Ok(Codebook {
        codewords,
        fingerprint: fingerprint_of(&("dft", geom, size)),
    })
}

/// Grid shape for the budget-matched uniform baselines: `n_range` range
/// samples crossed with an approximately square `(θ, φ)` grid, truncated to
/// the exact budget.
fn uniform_grid_shape(budget: usize) -> (usize, usize, usize) {
    let n_range = ((budget as f64).cbrt().round() as usize).max(1);
    let angular_budget = budget.div_ceil(n_range);
    let n_theta = ((angular_budget as f64).sqrt().ceil() as usize).max(1);
    let n_phi = angular_budget.div_ceil(n_theta);
    (n_theta, n_phi, n_range)
}

fn uniform_baseline(
    geom: &ArrayGeometry,
    thresholds: &DesignThresholds,
    size_budget: usize,
    tau_uniform: bool,
    label: &str,
) -> Result<Codebook> {
    if size_budget < 1 {
        return Err(Error::InvalidArgument("codebook budget must be at least 1".into()));
    }
    let (n_theta, n_phi, n_range) = uniform_grid_shape(size_budget);
    let positions = geom.positions();
    let wavelength = geom.wavelength();
    let mut codewords = Vec::with_capacity(size_budget);
    'outer: for ti in 0..n_theta {
        let theta = (ti as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
        for pi in 0..n_phi {
            let phi = (pi as f64 + 0.5) * std::f64::consts::PI / n_phi as f64;
            for ri in 0..n_range {
                let frac = (ri as f64 + 0.5) / n_range as f64;
                let r = if tau_uniform {
                    let tau = 1.0 / thresholds.r_max
                        + frac * (1.0 / thresholds.r_min - 1.0 / thresholds.r_max);
                    1.0 / tau
                } else {
                    thresholds.r_min + frac * (thresholds.r_max - thresholds.r_min)
                };
                let loc = crate::geometry::SphericalLocation::new(r, theta, phi)?;
                let w = crate::wavefield::ComplexWeightVector::from_phases(
                    &element_distances(&positions, &loc)
                        .iter()
                        .map(|&d| -2.0 * std::f64::consts::PI / wavelength * (d - r))
                        .collect::<Vec<_>>(),
                )?;
                codewords.push((
                    w,
                    synthetic_meta(
                        codewords.len(),
                        r,
                        crate::geometry::spherical_to_polar(theta, phi),
                    ),
                ));
                if codewords.len() == size_budget {
                    break 'outer;
                }
            }
        }
    }
    Ok(Codebook {
        codewords,
        fingerprint: fingerprint_of(&(label, geom, thresholds, size_budget)),
    })
}

/// Uniform polar-domain surrogate baseline: a uniform `(θ, φ)` grid crossed
/// with τ-uniform range samples, ignoring ERD gating and curvature-dependent
/// resolution, budget-matched to the proposed codebook.
pub fn baseline_uniform_polar(
    geom: &ArrayGeometry,
    thresholds: &DesignThresholds,
    size_budget: usize,
) -> Result<Codebook> {
    uniform_baseline(geom, thresholds, size_budget, true, "uniform-polar")
}

/// Uniform spherical surrogate baseline: a uniform 3-D `(r, θ, φ)` grid with
/// budget-matched size.
pub fn baseline_uniform_spherical(
    geom: &ArrayGeometry,
    thresholds: &DesignThresholds,
    size_budget: usize,
) -> Result<Codebook> {
    uniform_baseline(geom, thresholds, size_budget, false, "uniform-spherical")
}

/// Convenience: maps a polar-domain direction and range to the spherical
/// location a codeword focuses on.
pub fn codeword_location(meta: &CodewordMeta) -> Result<crate::geometry::SphericalLocation> {
    location_from_polar(meta.range, meta.direction)
}

/// The spherical direction a codeword points toward.
pub fn codeword_spherical_direction(meta: &CodewordMeta) -> (f64, f64) {
    polar_to_spherical(meta.direction)
}
