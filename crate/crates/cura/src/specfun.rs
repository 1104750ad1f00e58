//! Real-valued special functions used by the correlation models and the
//! codebook sampling rules: the Bessel function `J0`, its principal-branch
//! inverse, the Fresnel integrals `C` and `S`, and the Fresnel correlation
//! envelope with its inverse.
//!
//! `J0` is evaluated by its power series for small arguments and the Hankel
//! asymptotic expansion for large arguments. The Fresnel integrals use the
//! Maclaurin series for small arguments and the auxiliary-function asymptotic
//! expansion for large arguments. Inverses are computed by bracketing and
//! bisection, restricted to the first monotone segment of each function.

use crate::error::{Error, Result};

/// Crossover between the `J0` power series and the asymptotic expansion.
const J0_SERIES_CUTOFF: f64 = 12.0;
/// Crossover between the Fresnel series and the auxiliary-function expansion.
const FRESNEL_SERIES_CUTOFF: f64 = 3.5;
/// Maximum number of series terms before giving up (never reached in the
/// supported argument ranges).
const MAX_SERIES_TERMS: usize = 200;

/// First positive zero of `J0`, x01 ≈ 2.40483. Computed once by bisection on
/// the power series so the constant and the evaluator cannot drift apart.
pub fn first_j0_zero() -> f64 {
    static X01: std::sync::OnceLock<f64> = std::sync::OnceLock::new();
    *X01.get_or_init(|| {
        let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if j0_unchecked(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// A value on the principal branch of `J0`, i.e. in `[0, x01)` where `J0` is
/// strictly decreasing from 1 to 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalBranchValue(f64);

impl PrincipalBranchValue {
    /// Wraps `x`, rejecting values outside `[0, x01)`.
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 || x >= first_j0_zero() {
            return Err(Error::Domain(format!(
                "{x} is outside the principal branch [0, {})",
                first_j0_zero()
            )));
        }
        Ok(Self(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..MAX_SERIES_TERMS {
        let k = k as f64;
        term *= -q / (k * k);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() + 1e-300 {
            break;
        }
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    // Hankel expansion: H0(x) ~ sqrt(2/(pi x)) e^{i(x - pi/4)} sum_m (-i)^m a_m
    // with a_0 = 1, a_m = a_{m-1} (2m-1)^2 / (8 m x); J0 is the real part.
    // Terms are added while they shrink (optimal asymptotic truncation).
    let (mut sum_re, mut sum_im) = (1.0_f64, 0.0_f64);
    let mut a = 1.0_f64;
    let mut prev = f64::INFINITY;
    for m in 1..60 {
        a *= (2.0 * m as f64 - 1.0).powi(2) / (8.0 * m as f64 * x);
        if a > prev {
            break;
        }
        prev = a;
        // (-i)^m cycles through 1, -i, -1, i.
        match m % 4 {
            0 => sum_re += a,
            1 => sum_im -= a,
            2 => sum_re -= a,
            _ => sum_im += a,
        }
    }
    let phase = x - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (phase.cos() * sum_re - phase.sin() * sum_im)
}

fn j0_unchecked(x: f64) -> f64 {
    let x = x.abs();
    if x <= J0_SERIES_CUTOFF {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

/// Bessel function of the first kind, order zero.
///
/// Absolute error ≤ 1e-10 on |x| ≤ 50.
pub fn bessel_j0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("bessel_j0: non-finite input {x}")));
    }
    Ok(j0_unchecked(x))
}

/// Inverse of `J0` restricted to the principal branch `[0, x01)`.
///
/// Returns the unique `x` with `J0(x) = y` for `y` in `(0, 1]`.
pub fn bessel_j0_inverse(y: f64) -> Result<PrincipalBranchValue> {
    if !y.is_finite() || y <= 0.0 || y > 1.0 {
        return Err(Error::Domain(format!(
            "bessel_j0_inverse: {y} outside principal branch image (0, 1]"
        )));
    }
    if y == 1.0 {
        return PrincipalBranchValue::new(0.0);
    }
    // J0 is strictly decreasing on [0, x01]; plain bisection suffices.
    let (mut lo, mut hi) = (0.0_f64, first_j0_zero());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if j0_unchecked(mid) > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    PrincipalBranchValue::new(0.5 * (lo + hi))
}

fn fresnel_series(x: f64) -> (f64, f64) {
    // C(x) = x sum_k (-1)^k t^{2k} / ((2k)! (4k+1)),
    // S(x) = x sum_k (-1)^k t^{2k+1} / ((2k+1)! (4k+3)),  t = pi x^2 / 2.
    // Both sums walk the single sequence t^m / m!.
    let t = std::f64::consts::FRAC_PI_2 * x * x;
    let (mut c, mut s) = (0.0_f64, 0.0_f64);
    let mut term = 1.0_f64; // t^m / m!
    for m in 0..MAX_SERIES_TERMS {
        let v = term * x / (2.0 * m as f64 + 1.0);
        match m % 4 {
            0 => c += v,
            1 => s += v,
            2 => c -= v,
            _ => s -= v,
        }
        term *= t / (m as f64 + 1.0);
        if m > 4 && term * x < 1e-18 {
            break;
        }
    }
    (c, s)
}

fn fresnel_asymptotic(x: f64) -> (f64, f64) {
    // Auxiliary functions: C = 1/2 + f sin(z/2) - g cos(z/2),
    //                      S = 1/2 - f cos(z/2) - g sin(z/2),  z = pi x^2,
    // f = 1/(pi x) sum_m (-1)^m (4m-1)!!/z^{2m},
    // g = 1/(pi x) sum_m (-1)^m (4m+1)!!/z^{2m+1}, truncated at the smallest term.
    let z = std::f64::consts::PI * x * x;
    let (mut f, mut g) = (0.0_f64, 0.0_f64);
    let mut cf = 1.0_f64;
    let mut cg = 1.0 / z;
    for m in 0..40 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        f += sign * cf;
        g += sign * cg;
        let m = m as f64;
        let next_cf = cf * (4.0 * m + 1.0) * (4.0 * m + 3.0) / (z * z);
        if next_cf > cf {
            break;
        }
        cg *= (4.0 * m + 3.0) * (4.0 * m + 5.0) / (z * z);
        cf = next_cf;
    }
    let scale = 1.0 / (std::f64::consts::PI * x);
    f *= scale;
    g *= scale;
    let (sin_half, cos_half) = (0.5 * z).sin_cos();
    (
        0.5 + f * sin_half - g * cos_half,
        0.5 - f * cos_half - g * sin_half,
    )
}

/// Fresnel integrals `C(x) = ∫₀ˣ cos(πt²/2) dt` and `S(x) = ∫₀ˣ sin(πt²/2) dt`.
///
/// Absolute error ≤ 1e-8 on `x ≤ 20`.
pub fn fresnel(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "fresnel: input must be finite and nonnegative, got {x}"
        )));
    }
    if x < FRESNEL_SERIES_CUTOFF {
        Ok(fresnel_series(x))
    } else {
        Ok(fresnel_asymptotic(x))
    }
}

/// Fresnel correlation envelope `G(ε) = |C(√ε) + j S(√ε)| / √ε`, with
/// `G(0) = 1` by continuous extension. Result lies in `(0, 1]`.
pub fn fresnel_envelope(eps: f64) -> Result<f64> {
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Domain(format!(
            "fresnel_envelope: input must be finite and nonnegative, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(1.0);
    }
    let sqrt_eps = eps.sqrt();
    let (c, s) = fresnel(sqrt_eps)?;
    Ok(c.hypot(s) / sqrt_eps)
}

/// Smallest `ε > 0` with `fresnel_envelope(ε) = delta`, found by stepping
/// along the decreasing initial segment of the envelope and bisecting the
/// first bracketing interval. Round-trip error ≤ 1e-6.
pub fn fresnel_envelope_inverse(delta: f64) -> Result<f64> {
    if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
        return Err(Error::Domain(format!(
            "fresnel_envelope_inverse: delta must lie in (0, 1), got {delta}"
        )));
    }
    // The envelope decays from 1 toward 0 with superposed ripples; scanning in
    // small steps finds the first crossing, which bounds the smallest root.
    const STEP: f64 = 1e-3;
    const SCAN_MAX: f64 = 1e6;
    let mut lo = 0.0_f64;
    let mut hi = STEP;
    while fresnel_envelope(hi)? > delta {
        lo = hi;
        hi += STEP.max(hi * 0.01);
        if hi > SCAN_MAX {
            return Err(Error::Domain(format!(
                "fresnel_envelope_inverse: no crossing below {SCAN_MAX} for delta {delta}"
            )));
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if fresnel_envelope(mid)? > delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
