use approx::assert_abs_diff_eq;
use cura::codebook::{
    angular_codeword_2d, angular_grid_1d, angular_grid_2d, baseline_dft, baseline_uniform_polar,
    baseline_uniform_spherical, build_codebook_1d, build_codebook_2d, codebook_layout_1d,
    codebook_layout_2d, codeword_location, far_range_grid, near_range_grid, radial_step_1d,
    radial_step_2d, range_codeword_2d, range_tau_step_2d, CodebookOptions, CodewordKind,
    DesignThresholds,
};
use cura::correlation::ThetaVariant;
use cura::erd::erd_1d;
use cura::geometry::{Cura1DGeometry, Cura2DGeometry, PolarDirection};
use cura::wavefield::{beam_gain, focusing_vector, ComplexWeightVector};

fn arc(n: usize, beta: f64) -> Cura1DGeometry {
    Cura1DGeometry::half_wavelength(n, beta, 0.01).unwrap()
}

fn thresholds(r_min: f64, r_max: f64) -> DesignThresholds {
    DesignThresholds::defaults(r_min, r_max)
}

#[test]
fn thresholds_validation_rejects_bad_values() {
    let mut t = thresholds(10.0, 2000.0);
    assert!(t.validate().is_ok());
    t.delta_p = 0.0;
    assert!(t.validate().is_err());
    t.delta_p = 0.5;
    t.eta_r = 0.0;
    assert!(t.validate().is_err());
    t.eta_r = 1.0;
    t.rho_max = 2.0;
    assert!(t.validate().is_err());
    t.rho_max = 1.0;
    t.r_min = 3000.0;
    assert!(t.validate().is_err());
}

#[test]
fn fresnel_validity_gate_depends_on_the_aperture() {
    let g = arc(512, std::f64::consts::FRAC_PI_6);
    let geom = cura::geometry::ArrayGeometry::OneD(g);
    // D ≈ 2.44 m → bound ≈ 19.1 m: a 10 m floor must be rejected, 20 m passes.
    assert!(thresholds(10.0, 2000.0).validate_for(&geom).is_err());
    assert!(thresholds(20.0, 2000.0).validate_for(&geom).is_ok());
}

#[test]
fn ring_step_matches_the_frozen_references() {
    let opts = CodebookOptions::default();
    let t = thresholds(10.0, 2000.0);
    let g128 = arc(128, std::f64::consts::FRAC_PI_6);
    let rings = angular_grid_1d(&g128, &t, &opts).unwrap();
    let step = rings[1].rho - rings[0].rho;
    assert_abs_diff_eq!(step, 0.004180, epsilon = 1e-6);
    assert_eq!(rings.len(), 376); // ring 0 + 375 rings inside ρ_max = π/2

    let g512 = arc(512, std::f64::consts::FRAC_PI_6);
    let rings512 = angular_grid_1d(&g512, &thresholds(20.0, 2000.0), &opts).unwrap();
    assert_abs_diff_eq!(rings512[1].rho, 0.001039098716378335, epsilon = 1e-12);
}

#[test]
fn radial_step_divides_by_the_clamped_direction_factor() {
    let g = arc(128, std::f64::consts::FRAC_PI_6);
    let t = thresholds(10.0, 2000.0);
    let base = radial_step_1d(&g, &t, PolarDirection::BROADSIDE, ThetaVariant::BroadsideUnit).unwrap();
    // At broadside the broadside-unit variant is 1, so the step equals the ring step.
    let rings = angular_grid_1d(&g, &t, &CodebookOptions::default()).unwrap();
    assert_abs_diff_eq!(base, rings[1].rho, epsilon = 1e-12);
    // The body variant vanishes at broadside; the clamp caps the step at 1/0.05.
    let clamped =
        radial_step_1d(&g, &t, PolarDirection::BROADSIDE, ThetaVariant::BroadsideNull).unwrap();
    assert_abs_diff_eq!(clamped, base / 0.05, epsilon = 1e-12);
}

#[test]
fn azimuth_counts_grow_with_ring_radius_and_cover_symmetrically() {
    let g = arc(128, std::f64::consts::FRAC_PI_6);
    let opts = CodebookOptions::default();
    let rings = angular_grid_1d(&g, &thresholds(10.0, 2000.0), &opts).unwrap();
    assert_eq!(rings[0].azimuths, vec![0.0]);
    let phi_max = g.bend_half_angle();
    let mut last = 0usize;
    for ring in &rings[1..] {
        assert!(ring.azimuths.len() >= last);
        last = ring.azimuths.len();
        for &v in &ring.azimuths {
            assert!((-phi_max..phi_max).contains(&v));
        }
        // Uniform spacing 2φ̃_max / N_φ.
        if ring.azimuths.len() > 1 {
            let step = ring.azimuths[1] - ring.azimuths[0];
            assert_abs_diff_eq!(step, 2.0 * phi_max / ring.azimuths.len() as f64, epsilon = 1e-12);
        }
    }
}

#[test]
fn near_grid_is_tau_uniform_inside_the_erd() {
    let g = arc(128, std::f64::consts::FRAC_PI_6);
    let t = thresholds(10.0, 2000.0);
    let dir = PolarDirection::new(0.3, 0.0);
    let near = near_range_grid(&g, dir, &t).unwrap();
    let erd = erd_1d(&g, dir, t.delta_gain).unwrap().min(t.r_max);
    assert!(!near.is_empty());
    assert_abs_diff_eq!(near[0], erd, epsilon = 1e-9);
    // Strictly decreasing ranges, uniformly spaced in τ = 1/r.
    let taus: Vec<f64> = near.iter().map(|r| 1.0 / r).collect();
    let d_tau = taus[1] - taus[0];
    for pair in taus.windows(2) {
        assert!(pair[1] > pair[0]);
        assert_abs_diff_eq!(pair[1] - pair[0], d_tau, epsilon = 1e-12);
    }
    assert!(*near.last().unwrap() >= t.r_min);
}

#[test]
fn far_grid_is_logarithmic_from_the_erd_to_r_max() {
    let g = arc(128, std::f64::consts::FRAC_PI_6);
    let t = thresholds(10.0, 2000.0);
    let dir = PolarDirection::new(0.3, 0.0);
    let far = far_range_grid(&g, dir, &t).unwrap();
    let erd = erd_1d(&g, dir, t.delta_gain).unwrap();
    assert!(far.len() >= 2);
    assert_abs_diff_eq!(far[0], erd.max(t.r_min), epsilon = 1e-9 * erd);
    assert_abs_diff_eq!(*far.last().unwrap(), t.r_max, epsilon = 1e-9 * t.r_max);
    // Constant ratio between consecutive samples.
    let ratio = far[1] / far[0];
    for pair in far.windows(2) {
        assert_abs_diff_eq!(pair[1] / pair[0], ratio, epsilon = 1e-9);
    }
    // Along a grazing direction the ERD collapses; the grid starts at r_min.
    let grazing = PolarDirection::new(1.5707, 0.0);
    let far_grazing = far_range_grid(&g, grazing, &t).unwrap();
    assert!(far_grazing[0] >= t.r_min);
}

#[test]
fn layout_summary_matches_the_built_codebook() {
    let g = arc(32, std::f64::consts::FRAC_PI_6);
    let t = thresholds(2.0, 200.0);
    let opts = CodebookOptions::default();
    let layout = codebook_layout_1d(&g, &t, &opts).unwrap();
    let book = build_codebook_1d(&g, &t, &opts).unwrap();
    assert_eq!(book.len(), layout.total);
    let near = book
        .codewords()
        .iter()
        .filter(|(_, m)| m.kind == CodewordKind::NearField)
        .count();
    assert_eq!(near, layout.near_field);
    assert_eq!(book.len() - near, layout.far_field);
    assert_eq!(
        layout.angular_points,
        angular_grid_1d(&g, &t, &opts)
            .unwrap()
            .iter()
            .map(|r| r.azimuths.len())
            .sum::<usize>()
    );
}

#[test]
fn one_d_codewords_are_exact_focusing_vectors() {
    let g = arc(32, std::f64::consts::FRAC_PI_6);
    let t = thresholds(2.0, 200.0);
    let book = build_codebook_1d(&g, &t, &CodebookOptions::default()).unwrap();
    for (w, meta) in book.codewords().iter().step_by(97) {
        let loc = codeword_location(meta).unwrap();
        let reference = focusing_vector(&g, &loc).unwrap();
        assert_abs_diff_eq!(beam_gain(w, &reference).unwrap(), 1.0, epsilon = 1e-12);
    }
}

#[test]
fn fingerprints_are_stable_and_input_sensitive() {
    let g = arc(16, 0.4);
    let t = thresholds(1.0, 50.0);
    let opts = CodebookOptions::default();
    let a = build_codebook_1d(&g, &t, &opts).unwrap();
    let b = build_codebook_1d(&g, &t, &opts).unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    let mut t2 = t;
    t2.delta_r = 0.6;
    let c = build_codebook_1d(&g, &t2, &opts).unwrap();
    assert_ne!(a.fingerprint(), c.fingerprint());
}

#[test]
fn two_d_steps_tighten_the_one_d_design() {
    let g2 = Cura2DGeometry::new(arc(64, std::f64::consts::FRAC_PI_6), 8, 0.005).unwrap();
    let t = thresholds(5.0, 500.0);
    let dir = PolarDirection::new(0.5, 0.1);
    let step2 = radial_step_2d(&g2, &t, dir, ThetaVariant::BroadsideUnit).unwrap();
    // Tightened δ_p = √η_a < δ_p makes the arc branch alone stricter already.
    let step1 = radial_step_1d(g2.arc(), &t, dir, ThetaVariant::BroadsideUnit).unwrap();
    assert!(step2 <= step1 + 1e-15);
    // Single row: both reduce to the 1-D rules with tightened threshold only.
    let single = Cura2DGeometry::new(*g2.arc(), 1, 0.005).unwrap();
    let opts = CodebookOptions::default();
    let tau_single = range_tau_step_2d(&single, &t, dir, &opts).unwrap();
    let tau_multi = range_tau_step_2d(&g2, &t, dir, &opts).unwrap();
    assert!(tau_multi <= tau_single + 1e-18);
}

#[test]
fn strict_formula_switch_changes_the_horizontal_tau_branch() {
    // A tall panel (128 rows) makes the horizontal branch bind for the fixed
    // form while the strict 1/R scaling pushes it back above the arc branch.
    let g2 = Cura2DGeometry::new(arc(64, std::f64::consts::FRAC_PI_6), 128, 0.005).unwrap();
    let t = thresholds(5.0, 500.0);
    let dir = PolarDirection::new(0.5, 0.1);
    let strict = range_tau_step_2d(&g2, &t, dir, &CodebookOptions { strict_formulas: true, ..Default::default() }).unwrap();
    let fixed = range_tau_step_2d(&g2, &t, dir, &CodebookOptions { strict_formulas: false, ..Default::default() }).unwrap();
    // The switch scales the horizontal branch by 1/R; verify both settings
    // against the explicit formula, clamped by the shared arc branch. The arc
    // branch equals the single-row step.
    let arc_branch = range_tau_step_2d(
        &Cura2DGeometry::new(*g2.arc(), 1, 0.005).unwrap(),
        &t,
        dir,
        &CodebookOptions::default(),
    )
    .unwrap();
    let m = 128.0f64;
    let eps = cura::specfun::fresnel_envelope_inverse(t.delta_r).unwrap();
    let base = g2.arc().wavelength() * eps / (0.005f64.powi(2) * m * m);
    assert_abs_diff_eq!(fixed, base.min(arc_branch), epsilon = 1e-15);
    assert_abs_diff_eq!(
        strict,
        (base / g2.arc().radius()).min(arc_branch),
        epsilon = 1e-15
    );
    // R ≈ 0.3 m < 1 here, so the strict form loosens the horizontal branch:
    // the fixed form binds below the arc step while the strict one does not.
    assert!(strict > fixed);
}

#[test]
fn two_d_range_codeword_reduces_to_angular_steering_at_the_reference() {
    let g2 = Cura2DGeometry::new(arc(16, std::f64::consts::FRAC_PI_6), 4, 0.005).unwrap();
    let dir = PolarDirection::new(0.4, 0.1);
    let angular = angular_codeword_2d(&g2, dir).unwrap();
    let at_ref = range_codeword_2d(&g2, dir, 500.0, 500.0).unwrap();
    assert_eq!(angular.coefficients(), at_ref.coefficients());
    let nearer = range_codeword_2d(&g2, dir, 20.0, 500.0).unwrap();
    assert!(beam_gain(&angular, &nearer).unwrap() < 1.0);
    // The correction preserves the constant modulus.
    let amp = 1.0 / (g2.n_elements() as f64).sqrt();
    for c in nearer.coefficients() {
        assert_abs_diff_eq!(c.norm(), amp, epsilon = 1e-13);
    }
}

#[test]
fn two_d_layout_matches_the_built_codebook() {
    let g2 = Cura2DGeometry::new(arc(16, std::f64::consts::FRAC_PI_6), 4, 0.005).unwrap();
    let t = thresholds(2.0, 100.0);
    let opts = CodebookOptions::default();
    let layout = codebook_layout_2d(&g2, &t, &opts).unwrap();
    let book = build_codebook_2d(&g2, &t, &opts).unwrap();
    assert_eq!(book.len(), layout.total);
    assert_eq!(
        layout.angular_points,
        angular_grid_2d(&g2, &t, &opts)
            .unwrap()
            .iter()
            .map(|r| r.azimuths.len())
            .sum::<usize>()
    );
}

#[test]
fn dft_baseline_is_orthogonal_and_size_capped() {
    let geom = cura::geometry::ArrayGeometry::OneD(arc(16, 0.0));
    let book = baseline_dft(&geom, 16).unwrap();
    assert_eq!(book.len(), 16);
    for (i, (wi, _)) in book.codewords().iter().enumerate() {
        for (j, (wj, _)) in book.codewords().iter().enumerate() {
            let gain = beam_gain(wi, wj).unwrap();
            if i == j {
                assert_abs_diff_eq!(gain, 1.0, epsilon = 1e-12);
            } else {
                assert_abs_diff_eq!(gain, 0.0, epsilon = 1e-12);
            }
        }
    }
    assert!(baseline_dft(&geom, 17).is_err());
    assert!(baseline_dft(&geom, 0).is_err());
}

#[test]
fn uniform_baselines_match_the_budget_exactly() {
    let geom = cura::geometry::ArrayGeometry::OneD(arc(32, 0.4));
    let t = thresholds(2.0, 200.0);
    for budget in [1usize, 7, 100, 1234] {
        let polar = baseline_uniform_polar(&geom, &t, budget).unwrap();
        let spherical = baseline_uniform_spherical(&geom, &t, budget).unwrap();
        assert_eq!(polar.len(), budget);
        assert_eq!(spherical.len(), budget);
    }
    // Codewords are constant-modulus focusing beams within the range bounds.
    let book = baseline_uniform_polar(&geom, &t, 64).unwrap();
    for (w, meta) in book.codewords() {
        assert!(meta.range >= t.r_min - 1e-9 && meta.range <= t.r_max + 1e-9);
        let amp = 1.0 / (32f64).sqrt();
        for c in w.coefficients().iter().take(4) {
            assert_abs_diff_eq!(c.norm(), amp, epsilon = 1e-13);
        }
    }
}

#[test]
fn ula_limit_codebook_builds_without_error() {
    let g = arc(64, 0.0);
    let t = thresholds(2.0, 200.0);
    let book = build_codebook_1d(&g, &t, &CodebookOptions { phi_tilde_max: Some(0.3), ..Default::default() }).unwrap();
    assert!(!book.is_empty());
    let w: &ComplexWeightVector = &book.codewords()[0].0;
    assert_eq!(w.len(), 64);
}
