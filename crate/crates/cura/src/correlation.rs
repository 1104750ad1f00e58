//! Closed-form correlation envelopes between beams: the `J0` angular and
//! range models for the 1-D arc and their product extensions for the 2-D
//! stacked-arc array. These drive the codebook sampling rules; their fidelity
//! against exact inner products is measured by the validation module.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Cura1DGeometry, Cura2DGeometry, PolarDirection};
use crate::specfun::{bessel_j0, fresnel_envelope};

/// The two closed forms of the direction factor `Θ(ρ, φ̃)`; they differ by a
/// cos/sin swap on `ρ` and are resolved empirically (the codebook defaults to
/// the variant with lower worst-case model error).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaVariant {
    /// `√(cos²ρ sin²φ̃ + sin²ρ cos²φ̃)` (vanishes at broadside).
    BroadsideNull,
    /// `√(sin²ρ sin²φ̃ + cos²ρ cos²φ̃)` (equals 1 at broadside).
    BroadsideUnit,
}

/// Angular separation between two polar-domain directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularSeparation {
    pub d_rho: f64,
    pub d_varphi: f64,
}

impl AngularSeparation {
    pub fn new(d_rho: f64, d_varphi: f64) -> Self {
        Self { d_rho, d_varphi }
    }

    pub fn between(a: PolarDirection, b: PolarDirection) -> Self {
        Self::new(b.rho - a.rho, b.varphi - a.varphi)
    }

    /// Polar-domain distance `d_p = √(Δρ² + Δφ̃²)`.
    pub fn d_p(&self) -> f64 {
        self.d_rho.hypot(self.d_varphi)
    }
}

/// Direction factor `Θ(ρ, φ̃)` in the selected variant.
pub fn theta_factor(dir: PolarDirection, variant: ThetaVariant) -> f64 {
    let (sin_r, cos_r) = dir.rho.sin_cos();
    let (sin_v, cos_v) = dir.varphi.sin_cos();
    match variant {
        ThetaVariant::BroadsideNull => (cos_r * sin_v).hypot(sin_r * cos_v),
        ThetaVariant::BroadsideUnit => (sin_r * sin_v).hypot(cos_r * cos_v),
    }
}

/// Angular-domain gain model
/// `|J0((2πR/λ)·Θ(ρ,φ̃)·d_p·sinβ/β)|`; the `β → 0` limit is taken through the
/// finite combination `R sinβ/β → L/2`.
pub fn angular_gain_model_1d(
    geom: &Cura1DGeometry,
    dir: PolarDirection,
    sep: AngularSeparation,
    variant: ThetaVariant,
) -> Result<f64> {
    let arg = 2.0 * std::f64::consts::PI / geom.wavelength()
        * geom.radius_sinc_beta()
        * theta_factor(dir, variant)
        * sep.d_p();
    Ok(bessel_j0(arg)?.abs().min(1.0))
}

/// Near-field sensitivity factor `ξ(ρ, φ̃, β) = √(f₁² + f₂²)` with
/// `f₁ = sinρ sinφ̃ sinβ − cosρ cosβ` and `f₂ = cosρ cosφ̃ sinβ`.
pub fn xi_factor(dir: PolarDirection, beta: f64) -> f64 {
    let (sin_r, cos_r) = dir.rho.sin_cos();
    let (sin_v, cos_v) = dir.varphi.sin_cos();
    let (sin_b, cos_b) = beta.sin_cos();
    let f1 = sin_r * sin_v * sin_b - cos_r * cos_b;
    let f2 = cos_r * cos_v * sin_b;
    f1.hypot(f2)
}

/// The quadratic-phase scale `R²·ξ(ρ,φ̃,β)` driving the range model and the
/// ERD. In the straight-ULA limit `R` diverges while the physical scale stays
/// finite; there the linear-aperture analogue `(L/2)²·(1 − û_z²)` is used,
/// mirroring the x-axis branch of the 2-D ERD.
pub fn arc_quadratic_scale(geom: &Cura1DGeometry, dir: PolarDirection) -> f64 {
    if geom.is_straight() {
        let half = 0.5 * geom.arc_length();
        let uz = dir.unit_vector()[2];
        half * half * (1.0 - uz * uz)
    } else {
        let r = geom.radius();
        r * r * xi_factor(dir, geom.bend_half_angle())
    }
}

/// Range-domain gain model `|J0(ζ)|` with
/// `ζ = (πR²/λ)·ξ(ρ,φ̃,β)·|1/r₂ − 1/r₁|`.
pub fn range_gain_model_1d(
    geom: &Cura1DGeometry,
    dir: PolarDirection,
    r1: f64,
    r2: f64,
) -> Result<f64> {
    let d_tau = (1.0 / r2 - 1.0 / r1).abs();
    let zeta = std::f64::consts::PI * arc_quadratic_scale(geom, dir) / geom.wavelength() * d_tau;
    Ok(bessel_j0(zeta)?.abs().min(1.0))
}

/// Classical ULA array factor
/// `G_h(Δu) = |sin(πM d_x Δu/λ) / (M sin(π d_x Δu/λ))|`, with removable
/// singularities (broadside and grating lobes) evaluated by their limit 1.
pub fn ula_array_factor(m: usize, d_x: f64, wavelength: f64, d_u: f64) -> f64 {
    if m <= 1 {
        return 1.0;
    }
    let x = std::f64::consts::PI * d_x * d_u / wavelength;
    let denom = x.sin();
    if denom.abs() < 1e-12 {
        return 1.0;
    }
    ((m as f64 * x).sin() / (m as f64 * denom)).abs().min(1.0)
}

/// Direction cosine along the x-axis used by the product model,
/// `u = sinρ cosφ̃`.
pub fn model_x_cosine(dir: PolarDirection) -> f64 {
    dir.rho.sin() * dir.varphi.cos()
}

/// 2-D angular gain model: product of the arc model `G_v` and the horizontal
/// array factor `G_h(Δu)` with `Δu = sinρ₂cosφ̃₂ − sinρ₁cosφ̃₁`.
pub fn angular_gain_model_2d(
    geom: &Cura2DGeometry,
    dir1: PolarDirection,
    dir2: PolarDirection,
    variant: ThetaVariant,
) -> Result<f64> {
    let g_v = angular_gain_model_1d(
        geom.arc(),
        dir1,
        AngularSeparation::between(dir1, dir2),
        variant,
    )?;
    let d_u = model_x_cosine(dir2) - model_x_cosine(dir1);
    Ok(g_v
        * ula_array_factor(
            geom.n_rows(),
            geom.row_spacing(),
            geom.arc().wavelength(),
            d_u,
        ))
}

/// 2-D range gain model: arc range model times the Fresnel envelope of
/// `ε = d_x²M²Δτ/λ` from the horizontal aperture.
pub fn range_gain_model_2d(
    geom: &Cura2DGeometry,
    dir: PolarDirection,
    r1: f64,
    r2: f64,
) -> Result<f64> {
    let g_arc = range_gain_model_1d(geom.arc(), dir, r1, r2)?;
    let d_tau = (1.0 / r2 - 1.0 / r1).abs();
    let m = geom.n_rows() as f64;
    let eps = geom.row_spacing().powi(2) * m * m * d_tau / geom.arc().wavelength();
    Ok(g_arc * fresnel_envelope(eps)?)
}
