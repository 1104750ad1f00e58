//! CuRA element layouts, coordinate systems, and the polar-domain
//! re-parameterization of directions.
//!
//! The 1-D CuRA is a circular arc of `N` elements in the yz-plane with radius
//! `R` and bend half-angle `β`; arc length `L = (N-1)d = 2βR`. The 2-D CuRA
//! stacks `M` copies of the arc along the x-axis at spacing `d_x`. Directions
//! are expressed either in standard spherical coordinates `(θ, φ)` or in the
//! polar domain `(ρ, φ̃)`: deviation from and rotation about the array normal
//! (the +x axis), under which iso-correlation contours are approximately
//! circular.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this bend half-angle the arc is treated as a straight line; the
/// exact layout formula suffers catastrophic cancellation as `β → 0` and the
/// radius `R = L/(2β)` diverges.
pub const STRAIGHT_BETA_THRESHOLD: f64 = 1e-6;

/// Circular-arc (1-D) CuRA aperture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cura1DGeometry {
    n_elements: usize,
    bend_half_angle: f64,
    spacing: f64,
    wavelength: f64,
}

impl Cura1DGeometry {
    /// Builds an arc of `n_elements` with bend half-angle `beta` (radians),
    /// element spacing `spacing` and wavelength `wavelength` (meters).
    /// The radius follows from `R = (N-1)d / (2β)`; `beta = 0` denotes the
    /// straight-ULA limit.
    pub fn new(n_elements: usize, beta: f64, spacing: f64, wavelength: f64) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::InvalidGeometry(format!(
                "need at least 2 elements, got {n_elements}"
            )));
        }
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&beta) {
            return Err(Error::InvalidGeometry(format!(
                "bend half-angle must lie in [0, pi/2], got {beta}"
            )));
        }
        if !(spacing > 0.0) || !(wavelength > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "spacing and wavelength must be positive, got d={spacing}, lambda={wavelength}"
            )));
        }
        Ok(Self {
            n_elements,
            bend_half_angle: beta,
            spacing,
            wavelength,
        })
    }

    /// Half-wavelength-spaced arc, the default configuration.
    pub fn half_wavelength(n_elements: usize, beta: f64, wavelength: f64) -> Result<Self> {
        Self::new(n_elements, beta, wavelength / 2.0, wavelength)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn bend_half_angle(&self) -> f64 {
        self.bend_half_angle
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Arc length `L = (N-1)d`.
    pub fn arc_length(&self) -> f64 {
        (self.n_elements as f64 - 1.0) * self.spacing
    }

    /// Whether the geometry is in the straight-ULA regime.
    pub fn is_straight(&self) -> bool {
        self.bend_half_angle < STRAIGHT_BETA_THRESHOLD
    }

    /// Arc radius `R = L / (2β)`. Infinite in the straight limit.
    pub fn radius(&self) -> f64 {
        if self.is_straight() {
            f64::INFINITY
        } else {
            self.arc_length() / (2.0 * self.bend_half_angle)
        }
    }

    /// The combined quantity `R sinβ / β`, which stays finite (`L/2`) in the
    /// straight limit; the sampling rules only depend on `R` through it.
    pub fn radius_sinc_beta(&self) -> f64 {
        if self.is_straight() {
            0.5 * self.arc_length()
        } else {
            self.radius() * self.bend_half_angle.sin() / self.bend_half_angle
        }
    }

    /// Arc parameter `ψ_i = 2β(i-1)/(N-1)` for the 1-based element index.
    pub fn arc_parameter(&self, i: usize) -> f64 {
        2.0 * self.bend_half_angle * (i as f64 - 1.0) / (self.n_elements as f64 - 1.0)
    }

    /// Aperture extent `D`: the maximum pairwise element distance
    /// (the end-to-end chord `2R sinβ`, or `L` when straight).
    pub fn aperture(&self) -> f64 {
        if self.is_straight() {
            self.arc_length()
        } else {
            2.0 * self.radius() * self.bend_half_angle.sin()
        }
    }
}

/// Stacked-arc (2-D) CuRA aperture: `M` rows of the 1-D arc along x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cura2DGeometry {
    arc: Cura1DGeometry,
    n_rows: usize,
    row_spacing: f64,
}

impl Cura2DGeometry {
    pub fn new(arc: Cura1DGeometry, n_rows: usize, row_spacing: f64) -> Result<Self> {
        if n_rows < 1 {
            return Err(Error::InvalidGeometry("need at least 1 row".into()));
        }
        if !(row_spacing > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "row spacing must be positive, got {row_spacing}"
            )));
        }
        Ok(Self {
            arc,
            n_rows,
            row_spacing,
        })
    }

    pub fn arc(&self) -> &Cura1DGeometry {
        &self.arc
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn row_spacing(&self) -> f64 {
        self.row_spacing
    }

    pub fn n_elements(&self) -> usize {
        self.n_rows * self.arc.n_elements()
    }

    /// Horizontal aperture `L_x = (M-1) d_x`.
    pub fn horizontal_aperture(&self) -> f64 {
        (self.n_rows as f64 - 1.0) * self.row_spacing
    }

    /// 3-D aperture diagonal combining the row extent and the arc chord.
    pub fn aperture(&self) -> f64 {
        self.horizontal_aperture().hypot(self.arc.aperture())
    }
}

/// User position in spherical coordinates: range `r` (meters), elevation `θ`
/// measured from the +z axis, azimuth `φ` in the xy-plane from +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalLocation {
    pub range: f64,
    pub elevation: f64,
    pub azimuth: f64,
}

impl SphericalLocation {
    pub fn new(range: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        if !(range > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "range must be positive, got {range}"
            )));
        }
        Ok(Self {
            range,
            elevation,
            azimuth,
        })
    }
}

/// Direction in the polar domain: `ρ` is the deviation from the array normal
/// (+x axis, `ρ = 0` is broadside) and `φ̃` the rotation about the normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarDirection {
    pub rho: f64,
    pub varphi: f64,
}

impl PolarDirection {
    pub fn new(rho: f64, varphi: f64) -> Self {
        Self { rho, varphi }
    }

    pub const BROADSIDE: PolarDirection = PolarDirection {
        rho: 0.0,
        varphi: 0.0,
    };

    /// Unit vector of the direction in Cartesian coordinates:
    /// `(cosρ, sinρ sinφ̃, sinρ cosφ̃)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (sin_rho, cos_rho) = self.rho.sin_cos();
        let (sin_vp, cos_vp) = self.varphi.sin_cos();
        [cos_rho, sin_rho * sin_vp, sin_rho * cos_vp]
    }
}

/// Either supported aperture, so codebook baselines and the simulator can be
/// written once over element positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ArrayGeometry {
    OneD(Cura1DGeometry),
    TwoD(Cura2DGeometry),
}

impl ArrayGeometry {
    pub fn n_elements(&self) -> usize {
        match self {
            ArrayGeometry::OneD(g) => g.n_elements(),
            ArrayGeometry::TwoD(g) => g.n_elements(),
        }
    }

    pub fn wavelength(&self) -> f64 {
        match self {
            ArrayGeometry::OneD(g) => g.wavelength(),
            ArrayGeometry::TwoD(g) => g.arc().wavelength(),
        }
    }

    pub fn aperture(&self) -> f64 {
        match self {
            ArrayGeometry::OneD(g) => g.aperture(),
            ArrayGeometry::TwoD(g) => g.aperture(),
        }
    }

    pub fn positions(&self) -> Vec<[f64; 3]> {
        match self {
            ArrayGeometry::OneD(g) => element_positions_1d(g),
            ArrayGeometry::TwoD(g) => element_positions_2d(g),
        }
    }

    /// The underlying arc cross-section (the 1-D geometry itself, or the arc
    /// of the 2-D array).
    pub fn arc(&self) -> &Cura1DGeometry {
        match self {
            ArrayGeometry::OneD(g) => g,
            ArrayGeometry::TwoD(g) => g.arc(),
        }
    }
}

/// Element positions `q_i = (0, R(cos(β-ψ_i) - cosβ), R sin(β-ψ_i))` of the
/// 1-D arc, `i = 1..N`. Below [`STRAIGHT_BETA_THRESHOLD`] the analytic
/// straight-line limit `q_i = (0, 0, L/2 - (i-1)d)` is used.
pub fn element_positions_1d(geom: &Cura1DGeometry) -> Vec<[f64; 3]> {
    let n = geom.n_elements();
    if geom.is_straight() {
        let half = 0.5 * geom.arc_length();
        (0..n)
            .map(|i| [0.0, 0.0, half - i as f64 * geom.spacing()])
            .collect()
    } else {
        let beta = geom.bend_half_angle();
        let r = geom.radius();
        (1..=n)
            .map(|i| {
                let (sin_a, cos_a) = (beta - geom.arc_parameter(i)).sin_cos();
                [0.0, r * (cos_a - beta.cos()), r * sin_a]
            })
            .collect()
    }
}

/// Element positions `q_{m,n} = (m d_x, y_n, z_n)` of the 2-D array,
/// row-major over `(m, n)` with `m = 1..M`, matching the Kronecker codeword
/// ordering of the codebook module.
pub fn element_positions_2d(geom: &Cura2DGeometry) -> Vec<[f64; 3]> {
    let arc_positions = element_positions_1d(geom.arc());
    let mut out = Vec::with_capacity(geom.n_elements());
    for m in 1..=geom.n_rows() {
        let x = m as f64 * geom.row_spacing();
        out.extend(arc_positions.iter().map(|&[_, y, z]| [x, y, z]));
    }
    out
}

fn clamped_acos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0).acos()
}

/// Maps a spherical direction to the polar domain:
/// `ρ = arccos(sinθ cosφ)`, `φ̃ = atan2(sinθ sinφ, cosθ)`.
pub fn spherical_to_polar(theta: f64, phi: f64) -> PolarDirection {
    let (sin_t, cos_t) = theta.sin_cos();
    PolarDirection::new(
        clamped_acos(sin_t * phi.cos()),
        (sin_t * phi.sin()).atan2(cos_t),
    )
}

/// Maps a polar-domain direction back to spherical coordinates:
/// `θ = arccos(sinρ cosφ̃)`, `φ = atan2(sinρ sinφ̃, cosρ)`.
///
/// Inverse of [`spherical_to_polar`] on the coverage region
/// `ρ ∈ [0, π/2]`, `φ̃ ∈ [-π/2, π/2]`.
pub fn polar_to_spherical(dir: PolarDirection) -> (f64, f64) {
    let [x, y, z] = dir.unit_vector();
    (clamped_acos(z), y.atan2(x))
}

/// Cartesian coordinates `(r sinθ cosφ, r sinθ sinφ, r cosθ)` of a location.
pub fn location_to_cartesian(loc: &SphericalLocation) -> [f64; 3] {
    let (sin_t, cos_t) = loc.elevation.sin_cos();
    let (sin_p, cos_p) = loc.azimuth.sin_cos();
    [
        loc.range * sin_t * cos_p,
        loc.range * sin_t * sin_p,
        loc.range * cos_t,
    ]
}

/// Location at range `r` along a polar-domain direction.
pub fn location_from_polar(range: f64, dir: PolarDirection) -> Result<SphericalLocation> {
    let (theta, phi) = polar_to_spherical(dir);
    SphericalLocation::new(range, theta, phi)
}
