use approx::assert_abs_diff_eq;
use cura::specfun::{
    bessel_j0, bessel_j0_inverse, first_j0_zero, fresnel, fresnel_envelope,
    fresnel_envelope_inverse, PrincipalBranchValue,
};

#[test]
fn first_zero_matches_reference() {
    assert_abs_diff_eq!(first_j0_zero(), 2.4048255576957724, epsilon = 1e-12);
}

#[test]
fn j0_matches_reference_values() {
    assert_abs_diff_eq!(bessel_j0(0.0).unwrap(), 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(bessel_j0(1.0).unwrap(), 0.7651976865579665, epsilon = 1e-12);
    assert_abs_diff_eq!(bessel_j0(first_j0_zero()).unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(bessel_j0(-1.0).unwrap(), 0.7651976865579665, epsilon = 1e-12);
}

#[test]
fn j0_matches_integral_quadrature() {
    // J0(x) = (1/π)∫₀^π cos(x sinθ) dθ, midpoint rule with fine resolution.
    let quad = |x: f64| {
        let n = 20_000;
        let h = std::f64::consts::PI / n as f64;
        (0..n)
            .map(|i| (x * ((i as f64 + 0.5) * h).sin()).cos())
            .sum::<f64>()
            * h
            / std::f64::consts::PI
    };
    for &x in &[0.3, 1.7, 5.0, 11.9, 12.1, 25.0, 50.0] {
        assert_abs_diff_eq!(bessel_j0(x).unwrap(), quad(x), epsilon = 1e-9);
    }
}

#[test]
fn j0_is_continuous_at_the_series_cutoff() {
    let below = bessel_j0(12.0 - 1e-9).unwrap();
    let above = bessel_j0(12.0 + 1e-9).unwrap();
    assert_abs_diff_eq!(below, above, epsilon = 1e-9);
}

#[test]
fn j0_rejects_non_finite_input() {
    assert!(bessel_j0(f64::NAN).is_err());
    assert!(bessel_j0(f64::INFINITY).is_err());
}

#[test]
fn j0_inverse_round_trips() {
    assert_abs_diff_eq!(
        bessel_j0_inverse(0.5).unwrap().value(),
        1.5211440576687651,
        epsilon = 1e-12
    );
    for &y in &[0.999, 0.9, 0.5, 0.25, 0.01] {
        let x = bessel_j0_inverse(y).unwrap().value();
        assert_abs_diff_eq!(bessel_j0(x).unwrap(), y, epsilon = 1e-12);
    }
    assert_eq!(bessel_j0_inverse(1.0).unwrap().value(), 0.0);
}

#[test]
fn j0_inverse_rejects_out_of_image_values() {
    assert!(bessel_j0_inverse(0.0).is_err());
    assert!(bessel_j0_inverse(-0.1).is_err());
    assert!(bessel_j0_inverse(1.1).is_err());
    assert!(bessel_j0_inverse(f64::NAN).is_err());
}

#[test]
fn principal_branch_newtype_enforces_domain() {
    assert!(PrincipalBranchValue::new(0.0).is_ok());
    assert!(PrincipalBranchValue::new(2.4).is_ok());
    assert!(PrincipalBranchValue::new(-1e-12).is_err());
    assert!(PrincipalBranchValue::new(first_j0_zero()).is_err());
}

#[test]
fn fresnel_matches_reference_values() {
    let (c, s) = fresnel(1.0).unwrap();
    assert_abs_diff_eq!(c, 0.779893400376823, epsilon = 1e-8);
    assert_abs_diff_eq!(s, 0.4382591473903547, epsilon = 1e-8);
    let (c0, s0) = fresnel(0.0).unwrap();
    assert_eq!((c0, s0), (0.0, 0.0));
}

#[test]
fn fresnel_matches_quadrature() {
    let quad = |x: f64| {
        let n = 200_000;
        let h = x / n as f64;
        let mut c = 0.0;
        let mut s = 0.0;
        for i in 0..n {
            let t = (i as f64 + 0.5) * h;
            let arg = std::f64::consts::FRAC_PI_2 * t * t;
            c += arg.cos() * h;
            s += arg.sin() * h;
        }
        (c, s)
    };
    for &x in &[0.5, 2.0, 3.4, 3.6, 7.0] {
        let (c, s) = fresnel(x).unwrap();
        let (cq, sq) = quad(x);
        assert_abs_diff_eq!(c, cq, epsilon = 1e-6);
        assert_abs_diff_eq!(s, sq, epsilon = 1e-6);
    }
}

#[test]
fn fresnel_is_continuous_at_the_series_cutoff() {
    let (cb, sb) = fresnel(3.5 - 1e-9).unwrap();
    let (ca, sa) = fresnel(3.5 + 1e-9).unwrap();
    assert_abs_diff_eq!(cb, ca, epsilon = 1e-7);
    assert_abs_diff_eq!(sb, sa, epsilon = 1e-7);
}

#[test]
fn envelope_matches_reference_values() {
    assert_eq!(fresnel_envelope(0.0).unwrap(), 1.0);
    assert_abs_diff_eq!(fresnel_envelope(1.0).unwrap(), 0.8945975610421952, epsilon = 1e-8);
    assert_abs_diff_eq!(fresnel_envelope(4.0).unwrap(), 0.2984651222044925, epsilon = 1e-8);
}

#[test]
fn envelope_inverse_round_trips() {
    assert_abs_diff_eq!(
        fresnel_envelope_inverse(0.5).unwrap(),
        2.4218189956952187,
        epsilon = 1e-6
    );
    for &delta in &[0.9, 0.5, 0.3] {
        let eps = fresnel_envelope_inverse(delta).unwrap();
        assert_abs_diff_eq!(fresnel_envelope(eps).unwrap(), delta, epsilon = 1e-6);
    }
    assert!(fresnel_envelope_inverse(0.0).is_err());
    assert!(fresnel_envelope_inverse(1.0).is_err());
}
