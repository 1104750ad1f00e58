use std::io::Write;

use cura::config::{codebook_spec_name, ArrayKind, RunConfig, SPEED_OF_LIGHT};
use cura::geometry::ArrayGeometry;
use cura::trainsim::CodebookSpec;

#[test]
fn defaults_form_a_valid_configuration() {
    let config = RunConfig::load(None, &[]).unwrap();
    assert!(config.validate().is_ok());
    let geometry = config.geometry().unwrap();
    assert!(matches!(geometry, ArrayGeometry::OneD(_)));
    assert_eq!(geometry.n_elements(), 512);
    assert_eq!(geometry.wavelength(), 0.01);
    let scenario = config.scenario().unwrap();
    assert_eq!(scenario.trials, 500);
    assert_eq!(scenario.codebooks.len(), 4);
}

#[test]
fn wavelength_and_carrier_frequency_are_mutually_exclusive() {
    let both = RunConfig::load(
        None,
        &["geometry.carrier_frequency_hz=30e9".into()],
    );
    assert!(both.is_err()); // default already sets wavelength_m

    let fc_only = RunConfig::load(
        None,
        &[
            "geometry.carrier_frequency_hz=29979245800.0".into(),
            "geometry.wavelength_m=null".into(),
        ],
    )
    .unwrap();
    let lambda = fc_only.geometry.wavelength().unwrap();
    assert!((lambda - SPEED_OF_LIGHT / 29979245800.0).abs() < 1e-15);
    assert!((lambda - 0.01).abs() < 1e-12);

    let neither = RunConfig::load(None, &["geometry.wavelength_m=null".into()]);
    assert!(neither.is_err());
}

#[test]
fn overrides_apply_by_dotted_path() {
    let config = RunConfig::load(
        None,
        &[
            "geometry.n_elements=128".into(),
            "geometry.array=\"two_d\"".into(),
            "thresholds.r_min=10".into(),
            "scenario.trials=7".into(),
            "switches.strict_formulas=false".into(),
        ],
    )
    .unwrap();
    assert_eq!(config.geometry.n_elements, 128);
    assert_eq!(config.geometry.array, ArrayKind::TwoD);
    assert_eq!(config.thresholds.r_min, 10.0);
    assert_eq!(config.scenario.trials, 7);
    assert!(!config.switches.strict_formulas);
    // Malformed overrides are config errors.
    assert!(RunConfig::load(None, &["no_equals_sign".into()]).is_err());
    assert!(RunConfig::load(None, &["=5".into()]).is_err());
    assert!(RunConfig::load(None, &["unknown_block.x=1".into()]).is_err());
}

#[test]
fn config_files_load_and_win_over_defaults() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(
        file,
        r#"{{
            "geometry": {{ "n_elements": 64, "bend_half_angle": 0.5 }},
            "thresholds": {{ "r_min": 5.0, "r_max": 500.0 }},
            "scenario": {{ "master_seed": 99 }}
        }}"#
    )
    .unwrap();
    let config = RunConfig::load(Some(file.path()), &[]).unwrap();
    assert_eq!(config.geometry.n_elements, 64);
    assert_eq!(config.geometry.bend_half_angle, 0.5);
    assert_eq!(config.thresholds.r_min, 5.0);
    assert_eq!(config.scenario.master_seed, 99);
    // Unspecified fields keep their defaults.
    assert_eq!(config.scenario.trials, 500);
    // Overrides beat the file.
    let overridden =
        RunConfig::load(Some(file.path()), &["scenario.master_seed=1".into()]).unwrap();
    assert_eq!(overridden.scenario.master_seed, 1);
}

#[test]
fn validation_enforces_module_invariants_at_load() {
    // r_min below the Fresnel validity bound for the default 512-element arc.
    assert!(RunConfig::load(None, &["thresholds.r_min=10".into()]).is_err());
    assert!(RunConfig::load(None, &["thresholds.delta_p=1.5".into()]).is_err());
    assert!(RunConfig::load(None, &["geometry.n_elements=1".into()]).is_err());
    assert!(RunConfig::load(None, &["switches.phi_tilde_max=2.0".into()]).is_err());
    assert!(RunConfig::load(None, &["scenario.snr_grid_db=[]".into()]).is_err());
}

#[test]
fn hash_is_stable_and_sensitive() {
    let a = RunConfig::load(None, &[]).unwrap();
    let b = RunConfig::load(None, &[]).unwrap();
    assert_eq!(a.hash(), b.hash());
    let c = RunConfig::load(None, &["scenario.master_seed=8".into()]).unwrap();
    assert_ne!(a.hash(), c.hash());
    assert_eq!(a.hash().len(), 64); // SHA-256 hex
}

#[test]
fn user_region_inherits_design_bounds() {
    let config = RunConfig::load(None, &[]).unwrap();
    let region = config.user_region();
    assert_eq!(region.r_min, config.thresholds.r_min);
    assert_eq!(region.r_max, config.thresholds.r_max);
    assert_eq!(region.rho_max, config.thresholds.rho_max);
    assert_eq!(region.phi_tilde_max, config.geometry.bend_half_angle);
    assert!(region.inside_erd);
    let custom = RunConfig::load(
        None,
        &["scenario.region.r_max=1000".into(), "scenario.region.inside_erd=false".into()],
    )
    .unwrap();
    assert_eq!(custom.user_region().r_max, 1000.0);
    assert!(!custom.user_region().inside_erd);
}

#[test]
fn codebook_spec_names_are_stable() {
    assert_eq!(codebook_spec_name(&CodebookSpec::Proposed), "proposed");
    assert_eq!(codebook_spec_name(&CodebookSpec::Dft), "dft");
    assert_eq!(codebook_spec_name(&CodebookSpec::UniformPolar), "uniform_polar");
    assert_eq!(
        codebook_spec_name(&CodebookSpec::UniformSpherical),
        "uniform_spherical"
    );
}
