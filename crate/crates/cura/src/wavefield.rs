//! Exact and approximate spherical-wave responses, channels, and the
//! beamforming-gain inner product.
//!
//! Beamfocusing vectors conjugate-match the exact spherical-wave phases at a
//! 3-D location; steering vectors are their far-field (plane-wave) limit and
//! depend on direction only. All weight vectors obey the phase-shifter
//! constant-modulus constraint: every entry has magnitude `1/√len`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    element_positions_1d, element_positions_2d, location_to_cartesian, spherical_to_polar,
    Cura1DGeometry, Cura2DGeometry, PolarDirection, SphericalLocation,
};

/// Unit-norm, constant-modulus complex weight vector (length `N` or `M·N`).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexWeightVector {
    coefficients: Vec<Complex64>,
}

impl ComplexWeightVector {
    /// Builds the vector `(1/√len)·exp(j·phase_i)` from per-element phases.
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidArgument("empty phase vector".into()));
        }
        let amp = 1.0 / (phases.len() as f64).sqrt();
        Ok(Self {
            coefficients: phases
                .iter()
                .map(|&p| Complex64::from_polar(amp, p))
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Per-element phases in `(-π, π]`.
    pub fn phases(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.arg()).collect()
    }

    /// Elementwise product with a unit-modulus phase factor, preserving the
    /// constant-modulus property.
    pub fn rotated_by(&self, phase_factors: &[Complex64]) -> Result<Self> {
        if phase_factors.len() != self.len() {
            return Err(Error::InvalidArgument(format!(
                "phase factor length {} does not match vector length {}",
                phase_factors.len(),
                self.len()
            )));
        }
        Ok(Self {
            coefficients: self
                .coefficients
                .iter()
                .zip(phase_factors)
                .map(|(c, p)| c * p)
                .collect(),
        })
    }
}

/// One propagation path of the generative multipath channel: a complex gain
/// and the scatterer/user location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathSpec {
    pub gain: Complex64,
    pub location: SphericalLocation,
}

/// Exact Euclidean propagation distances `r_i = ||u - q_i||` from a location
/// to each element position.
pub fn element_distances(positions: &[[f64; 3]], loc: &SphericalLocation) -> Vec<f64> {
    let [ux, uy, uz] = location_to_cartesian(loc);
    positions
        .iter()
        .map(|&[qx, qy, qz]| {
            let (dx, dy, dz) = (ux - qx, uy - qy, uz - qz);
            (dx * dx + dy * dy + dz * dz).sqrt()
        })
        .collect()
}

fn fresnel_expansion(positions: &[[f64; 3]], loc: &SphericalLocation) -> Vec<f64> {
    // Second-order Taylor expansion of ||u - q|| in 1/r:
    //   r - û·q + (|q|² - (û·q)²) / (2r).
    // For the arc, |q|² equals R²(1 - 2cos(β-ψ)cosβ + cos²β).
    let u = location_to_cartesian(loc);
    let r = loc.range;
    let inv_r = 1.0 / r;
    positions
        .iter()
        .map(|&[qx, qy, qz]| {
            let q_sq = qx * qx + qy * qy + qz * qz;
            let proj = (u[0] * qx + u[1] * qy + u[2] * qz) * inv_r;
            r - proj + 0.5 * (q_sq - proj * proj) * inv_r
        })
        .collect()
}

/// Result of the second-order (Fresnel) distance expansion, flagging whether
/// the range satisfies the validity bound `r > 0.5·√(D³/λ)`.
#[derive(Debug, Clone)]
pub struct FresnelDistances {
    pub distances: Vec<f64>,
    pub within_validity: bool,
}

fn fresnel_with_validity(
    positions: &[[f64; 3]],
    loc: &SphericalLocation,
    aperture: f64,
    wavelength: f64,
) -> FresnelDistances {
    FresnelDistances {
        distances: fresnel_expansion(positions, loc),
        within_validity: loc.range > 0.5 * (aperture.powi(3) / wavelength).sqrt(),
    }
}

/// Second-order distance expansion for the 1-D arc.
pub fn element_distances_fresnel(geom: &Cura1DGeometry, loc: &SphericalLocation) -> FresnelDistances {
    fresnel_with_validity(
        &element_positions_1d(geom),
        loc,
        geom.aperture(),
        geom.wavelength(),
    )
}

/// Second-order distance expansion for the 2-D array.
pub fn element_distances_fresnel_2d(
    geom: &Cura2DGeometry,
    loc: &SphericalLocation,
) -> FresnelDistances {
    fresnel_with_validity(
        &element_positions_2d(geom),
        loc,
        geom.aperture(),
        geom.arc().wavelength(),
    )
}

fn focusing_from_positions(
    positions: &[[f64; 3]],
    wavelength: f64,
    loc: &SphericalLocation,
) -> Result<ComplexWeightVector> {
    let k = 2.0 * std::f64::consts::PI / wavelength;
    let phases: Vec<f64> = element_distances(positions, loc)
        .iter()
        .map(|&ri| -k * (ri - loc.range))
        .collect();
    ComplexWeightVector::from_phases(&phases)
}

/// Beamfocusing vector with entries `(1/√N)·exp(-j·2π/λ·(r_i - r))` built
/// from exact distances.
pub fn focusing_vector(geom: &Cura1DGeometry, loc: &SphericalLocation) -> Result<ComplexWeightVector> {
    focusing_from_positions(&element_positions_1d(geom), geom.wavelength(), loc)
}

/// 2-D beamfocusing vector over the `M·N` stacked-arc elements.
pub fn focusing_vector_2d(
    geom: &Cura2DGeometry,
    loc: &SphericalLocation,
) -> Result<ComplexWeightVector> {
    focusing_from_positions(&element_positions_2d(geom), geom.arc().wavelength(), loc)
}

fn steering_from_positions(
    positions: &[[f64; 3]],
    wavelength: f64,
    dir: PolarDirection,
) -> Result<ComplexWeightVector> {
    let k = 2.0 * std::f64::consts::PI / wavelength;
    let [ux, uy, uz] = dir.unit_vector();
    let phases: Vec<f64> = positions
        .iter()
        .map(|&[qx, qy, qz]| k * (ux * qx + uy * qy + uz * qz))
        .collect();
    ComplexWeightVector::from_phases(&phases)
}

/// Far-field steering vector: the plane-wave phase `exp(+j·2π/λ·û·q_i)` over
/// the exact element positions, where `û` is the unit vector of the
/// polar-domain direction.
pub fn steering_vector(geom: &Cura1DGeometry, dir: PolarDirection) -> Result<ComplexWeightVector> {
    steering_from_positions(&element_positions_1d(geom), geom.wavelength(), dir)
}

/// 2-D far-field steering vector over the stacked-arc elements.
pub fn steering_vector_2d(
    geom: &Cura2DGeometry,
    dir: PolarDirection,
) -> Result<ComplexWeightVector> {
    steering_from_positions(&element_positions_2d(geom), geom.arc().wavelength(), dir)
}

fn channel_from_positions(
    positions: &[[f64; 3]],
    wavelength: f64,
    paths: &[PathSpec],
) -> Result<Vec<Complex64>> {
    if paths.is_empty() {
        return Err(Error::InvalidArgument("channel needs at least one path".into()));
    }
    let mut h = vec![Complex64::new(0.0, 0.0); positions.len()];
    for path in paths {
        let b = focusing_from_positions(positions, wavelength, &path.location)?;
        for (hi, bi) in h.iter_mut().zip(b.coefficients()) {
            *hi += path.gain * bi;
        }
    }
    Ok(h)
}

/// Beamfocusing vector for either aperture kind.
pub fn focusing_vector_any(
    geom: &crate::geometry::ArrayGeometry,
    loc: &SphericalLocation,
) -> Result<ComplexWeightVector> {
    focusing_from_positions(&geom.positions(), geom.wavelength(), loc)
}

/// Far-field steering vector for either aperture kind.
pub fn steering_vector_any(
    geom: &crate::geometry::ArrayGeometry,
    dir: PolarDirection,
) -> Result<ComplexWeightVector> {
    steering_from_positions(&geom.positions(), geom.wavelength(), dir)
}

/// Multipath channel for either aperture kind.
pub fn channel_any(
    geom: &crate::geometry::ArrayGeometry,
    paths: &[PathSpec],
) -> Result<Vec<Complex64>> {
    channel_from_positions(&geom.positions(), geom.wavelength(), paths)
}

/// Multipath channel `h = Σ_ℓ α_ℓ b(r_ℓ, θ_ℓ, φ_ℓ)` (unnormalized; the
/// simulator normalizes to `||h||₂ = 1`).
pub fn channel(geom: &Cura1DGeometry, paths: &[PathSpec]) -> Result<Vec<Complex64>> {
    channel_from_positions(&element_positions_1d(geom), geom.wavelength(), paths)
}

/// 2-D multipath channel over the stacked-arc elements.
pub fn channel_2d(geom: &Cura2DGeometry, paths: &[PathSpec]) -> Result<Vec<Complex64>> {
    channel_from_positions(&element_positions_2d(geom), geom.arc().wavelength(), paths)
}

/// Beamforming gain `|uᴴv|` between two unit-norm weight vectors; symmetric
/// and invariant to common phase rotations, with value in `[0, 1]`.
pub fn beam_gain(u: &ComplexWeightVector, v: &ComplexWeightVector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let inner: Complex64 = u
        .coefficients()
        .iter()
        .zip(v.coefficients())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(inner.norm().min(1.0))
}

/// `|hᴴw|` between an arbitrary complex vector (e.g. a normalized channel)
/// and a weight vector.
pub fn vector_gain(h: &[Complex64], w: &ComplexWeightVector) -> Result<f64> {
    if h.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} vs {}",
            h.len(),
            w.len()
        )));
    }
    let inner: Complex64 = h
        .iter()
        .zip(w.coefficients())
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(inner.norm())
}

/// Normalizes a channel vector to unit Euclidean norm.
pub fn normalize(h: &mut [Complex64]) -> Result<()> {
    let norm = h.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("cannot normalize a zero channel".into()));
    }
    for c in h.iter_mut() {
        *c /= norm;
    }
    Ok(())
}

/// Direction (polar domain) of a spherical location, used when comparing a
/// focusing vector against the steering vector along the same ray.
pub fn direction_of(loc: &SphericalLocation) -> PolarDirection {
    spherical_to_polar(loc.elevation, loc.azimuth)
}
