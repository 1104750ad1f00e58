use approx::assert_abs_diff_eq;
use cura::erd::{
    erd_1d, erd_2d, erd_2d_branches, erd_contour, erd_contour_2d, erd_numeric,
    far_field_mismatch, rayleigh_distance,
};
use cura::geometry::{
    location_from_polar, Cura1DGeometry, Cura2DGeometry, PolarDirection,
};

fn arc(n: usize, beta: f64) -> Cura1DGeometry {
    Cura1DGeometry::half_wavelength(n, beta, 0.01).unwrap()
}

#[test]
fn rayleigh_distance_matches_the_classical_form() {
    let g = arc(512, 0.0);
    assert_abs_diff_eq!(
        rayleigh_distance(g.aperture(), g.wavelength()),
        2.0 * (511.0f64 * 0.005).powi(2) / 0.01,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        rayleigh_distance(g.aperture(), g.wavelength()),
        1305.605,
        epsilon = 1e-3
    );
}

#[test]
fn closed_form_matches_the_frozen_broadside_value() {
    let g = arc(512, std::f64::consts::FRAC_PI_6);
    let erd = erd_1d(&g, PolarDirection::BROADSIDE, 0.5).unwrap();
    assert_abs_diff_eq!(erd, 1229.430832570545, epsilon = 1e-6);
}

#[test]
fn erd_scales_with_radius_squared_and_inverse_wavelength() {
    let dir = PolarDirection::new(0.4, 0.1);
    let beta = std::f64::consts::FRAC_PI_6;
    let g1 = Cura1DGeometry::new(128, beta, 0.005, 0.01).unwrap();
    // Doubling N-1 at fixed spacing doubles L, hence R; the ERD must scale by
    // exactly 4 (the closed form is ∝ R²).
    let g2 = Cura1DGeometry::new(255, beta, 0.005, 0.01).unwrap();
    let e1 = erd_1d(&g1, dir, 0.5).unwrap();
    let e2 = erd_1d(&g2, dir, 0.5).unwrap();
    assert_abs_diff_eq!(g2.radius() / g1.radius(), 2.0, epsilon = 1e-12);
    assert_abs_diff_eq!(e2 / e1, 4.0, epsilon = 1e-12);
    // Halving λ at fixed layout doubles the ERD (∝ 1/λ).
    let g3 = Cura1DGeometry::new(128, beta, 0.005, 0.005).unwrap();
    let e3 = erd_1d(&g3, dir, 0.5).unwrap();
    assert_abs_diff_eq!(e3 / e1, 2.0, epsilon = 1e-12);
}

#[test]
fn erd_rejects_out_of_range_tolerances() {
    let g = arc(32, 0.3);
    for bad in [0.0, 1.0, -0.5, f64::NAN] {
        assert!(erd_1d(&g, PolarDirection::BROADSIDE, bad).is_err());
        assert!(erd_numeric(&g, PolarDirection::BROADSIDE, bad, 100.0).is_err());
    }
    assert!(erd_numeric(&g, PolarDirection::BROADSIDE, 0.5, -1.0).is_err());
    assert!(erd_numeric(&g, PolarDirection::BROADSIDE, 0.5, f64::INFINITY).is_err());
}

#[test]
fn numeric_erd_brackets_the_defining_loss_level() {
    let g = arc(64, std::f64::consts::FRAC_PI_6);
    let dir = PolarDirection::new(0.2, 0.0);
    let erd = erd_numeric(&g, dir, 0.5, 1000.0).unwrap();
    assert!(erd > 0.0);
    // Just inside the returned boundary the loss reaches the tolerance; just
    // beyond it stays below.
    let loss = |r: f64| 1.0 - far_field_mismatch(&g, &location_from_polar(r, dir).unwrap()).unwrap();
    assert!(loss(erd * 0.999) >= 0.5 - 1e-6);
    assert!(loss(erd * 1.001) < 0.5 + 1e-6);
    // Far beyond the boundary the far-field beam serves the user well.
    assert!(loss(1000.0) < 0.05);
}

#[test]
fn two_d_branches_combine_by_minimum() {
    let g2 = Cura2DGeometry::new(arc(64, std::f64::consts::FRAC_PI_6), 8, 0.005).unwrap();
    let dir = PolarDirection::new(0.6, 0.2);
    let (x, arc_branch) = erd_2d_branches(&g2, dir, 0.5).unwrap();
    let x = x.expect("multi-row array has an x branch");
    assert_abs_diff_eq!(erd_2d(&g2, dir, 0.5).unwrap(), x.min(arc_branch), epsilon = 1e-12);
    // The x branch vanishes at broadside (its direction factor is sin²ρcos²φ̃).
    let (x0, _) = erd_2d_branches(&g2, PolarDirection::BROADSIDE, 0.5).unwrap();
    assert_abs_diff_eq!(x0.unwrap(), 0.0, epsilon = 1e-15);
    // A single row has no x branch and reduces to the 1-D ERD.
    let single = Cura2DGeometry::new(arc(64, std::f64::consts::FRAC_PI_6), 1, 0.005).unwrap();
    let (none, arc_only) = erd_2d_branches(&single, dir, 0.5).unwrap();
    assert!(none.is_none());
    assert_abs_diff_eq!(
        arc_only,
        erd_1d(single.arc(), dir, 0.5).unwrap(),
        epsilon = 1e-12
    );
}

#[test]
fn contours_evaluate_the_closed_forms_pointwise() {
    let g = arc(64, 0.4);
    let grid = [
        PolarDirection::new(0.1, 0.0),
        PolarDirection::new(0.5, 0.2),
        PolarDirection::new(1.2, -0.3),
    ];
    let contour = erd_contour(&g, 0.5, &grid).unwrap();
    assert_eq!(contour.len(), 3);
    for (dir, value) in &contour {
        assert_abs_diff_eq!(*value, erd_1d(&g, *dir, 0.5).unwrap(), epsilon = 1e-12);
    }
    assert!(erd_contour(&g, 0.5, &[]).is_err());
    let g2 = Cura2DGeometry::new(g, 4, 0.005).unwrap();
    let contour2 = erd_contour_2d(&g2, 0.5, &grid).unwrap();
    for (dir, value) in &contour2 {
        assert_abs_diff_eq!(*value, erd_2d(&g2, *dir, 0.5).unwrap(), epsilon = 1e-12);
    }
}

#[test]
fn numeric_erd_returns_zero_when_loss_never_reaches_tolerance() {
    // A tiny aperture loses almost nothing anywhere in the scanned band.
    let g = arc(4, 0.1);
    let erd = erd_numeric(&g, PolarDirection::BROADSIDE, 0.5, 10.0).unwrap();
    assert_eq!(erd, 0.0);
}
