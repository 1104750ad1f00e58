//! Experiment configuration: a single JSON document with defaulted blocks for
//! geometry, design thresholds, the Monte-Carlo scenario, output, and the
//! formula switches. Command-line `key=value` overrides are applied onto the
//! parsed JSON before validation, and every emitted file carries the SHA-256
//! hash of the effective configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codebook::{fingerprint_of, CodebookOptions, DesignThresholds};
use crate::correlation::ThetaVariant;
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, Cura1DGeometry, Cura2DGeometry};
use crate::trainsim::{CodebookSpec, RangeSampling, Scenario, UserRegion};

/// Speed of light in vacuum (m/s), used to derive λ from a carrier frequency.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Which aperture the experiment uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ArrayKind {
    #[default]
    OneD,
    TwoD,
}

/// Geometry block. Exactly one of `carrier_frequency_hz` and `wavelength_m`
/// must be given; spacings default to λ/2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometryConfig {
    pub array: ArrayKind,
    pub n_elements: usize,
    /// Row count of the 2-D array (ignored for 1-D).
    pub n_rows: usize,
    /// Bend half-angle β in radians; 0 is the straight ULA.
    pub bend_half_angle: f64,
    pub carrier_frequency_hz: Option<f64>,
    pub wavelength_m: Option<f64>,
    pub spacing_m: Option<f64>,
    pub row_spacing_m: Option<f64>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            array: ArrayKind::OneD,
            n_elements: 512,
            n_rows: 8,
            bend_half_angle: std::f64::consts::FRAC_PI_6,
            carrier_frequency_hz: None,
            wavelength_m: Some(0.01),
            spacing_m: None,
            row_spacing_m: None,
        }
    }
}

impl GeometryConfig {
    /// Wavelength in meters, derived from the carrier frequency when given.
    pub fn wavelength(&self) -> Result<f64> {
        match (self.carrier_frequency_hz, self.wavelength_m) {
            (Some(fc), None) => {
                if !(fc > 0.0) {
                    return Err(Error::Config(format!(
                        "carrier frequency must be positive, got {fc}"
                    )));
                }
                Ok(SPEED_OF_LIGHT / fc)
            }
            (None, Some(lambda)) => {
                if !(lambda > 0.0) {
                    return Err(Error::Config(format!(
                        "wavelength must be positive, got {lambda}"
                    )));
                }
                Ok(lambda)
            }
            (Some(_), Some(_)) => Err(Error::Config(
                "give exactly one of carrier_frequency_hz and wavelength_m, not both".into(),
            )),
            (None, None) => Err(Error::Config(
                "give exactly one of carrier_frequency_hz and wavelength_m".into(),
            )),
        }
    }

    pub fn build(&self) -> Result<ArrayGeometry> {
        let lambda = self.wavelength()?;
        let spacing = self.spacing_m.unwrap_or(lambda / 2.0);
        let arc = Cura1DGeometry::new(self.n_elements, self.bend_half_angle, spacing, lambda)?;
        Ok(match self.array {
            ArrayKind::OneD => ArrayGeometry::OneD(arc),
            ArrayKind::TwoD => {
                let row_spacing = self.row_spacing_m.unwrap_or(lambda / 2.0);
                ArrayGeometry::TwoD(Cura2DGeometry::new(arc, self.n_rows, row_spacing)?)
            }
        })
    }
}

/// Thresholds block, mirroring [`DesignThresholds`] with defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdsConfig {
    pub delta_p: f64,
    pub delta_r: f64,
    pub delta_gain: f64,
    pub eta_r: f64,
    pub eta_a: f64,
    pub rho_max: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl Default for ThresholdsConfig {
    fn default() -> Self {
        // The default r_min of 20 m keeps the second-order-expansion validity
        // bound satisfied for the default 512-element aperture.
        Self {
            delta_p: 0.5,
            delta_r: 0.5,
            delta_gain: 0.5,
            eta_r: 1.0,
            eta_a: 0.25,
            rho_max: std::f64::consts::FRAC_PI_2,
            r_min: 20.0,
            r_max: 2000.0,
        }
    }
}

impl ThresholdsConfig {
    pub fn build(&self) -> DesignThresholds {
        DesignThresholds {
            delta_p: self.delta_p,
            delta_r: self.delta_r,
            delta_gain: self.delta_gain,
            eta_r: self.eta_r,
            eta_a: self.eta_a,
            rho_max: self.rho_max,
            r_min: self.r_min,
            r_max: self.r_max,
        }
    }
}

/// Formula switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwitchesConfig {
    pub theta_variant: ThetaVariant,
    pub strict_formulas: bool,
    /// Azimuthal half-width of the design coverage region; defaults to β.
    pub phi_tilde_max: Option<f64>,
}

impl Default for SwitchesConfig {
    fn default() -> Self {
        let opts = CodebookOptions::default();
        Self {
            theta_variant: opts.theta_variant,
            strict_formulas: opts.strict_formulas,
            phi_tilde_max: opts.phi_tilde_max,
        }
    }
}

impl SwitchesConfig {
    pub fn build(&self) -> CodebookOptions {
        CodebookOptions {
            theta_variant: self.theta_variant,
            strict_formulas: self.strict_formulas,
            phi_tilde_max: self.phi_tilde_max,
        }
    }
}

/// User-region block of the scenario; unset bounds inherit the design region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RegionConfig {
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub rho_max: Option<f64>,
    pub phi_tilde_max: Option<f64>,
    pub inside_erd: Option<bool>,
}

/// Monte-Carlo scenario block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub region: RegionConfig,
    pub snr_grid_db: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    pub range_sampling: RangeSampling,
    pub codebooks: Vec<CodebookSpec>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            region: RegionConfig::default(),
            snr_grid_db: vec![0.0, 10.0, 20.0],
            trials: 500,
            master_seed: 7,
            range_sampling: RangeSampling::TauUniform,
            codebooks: vec![
                CodebookSpec::Proposed,
                CodebookSpec::Dft,
                CodebookSpec::UniformPolar,
                CodebookSpec::UniformSpherical,
            ],
        }
    }
}

/// Output block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: String,
    /// Also write the coefficient matrix next to codebook manifests.
    pub write_coefficients: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: "out".into(),
            write_coefficients: true,
        }
    }
}

/// The complete experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub thresholds: ThresholdsConfig,
    pub scenario: ScenarioConfig,
    pub output: OutputConfig,
    pub switches: SwitchesConfig,
}

/// Display name of a scenario codebook entry, used in result files.
pub fn codebook_spec_name(spec: &CodebookSpec) -> &'static str {
    match spec {
        CodebookSpec::Proposed => "proposed",
        CodebookSpec::Dft => "dft",
        CodebookSpec::UniformPolar => "uniform_polar",
        CodebookSpec::UniformSpherical => "uniform_spherical",
    }
}

impl RunConfig {
    /// Loads a configuration: the JSON file if given (otherwise the defaults),
    /// with `key=value` overrides applied by dotted path before validation.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut value = match path {
            Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
            None => Value::Object(Default::default()),
        };
        for entry in overrides {
            apply_override(&mut value, entry)?;
        }
        let config: RunConfig =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Re-validates every module invariant reachable from the configuration.
    pub fn validate(&self) -> Result<()> {
        let geometry = self.geometry.build()?;
        self.thresholds.build().validate_for(&geometry)?;
        if let Some(phi) = self.switches.phi_tilde_max {
            if !(phi > 0.0 && phi <= std::f64::consts::FRAC_PI_2) {
                return Err(Error::Config(format!(
                    "phi_tilde_max must lie in (0, pi/2], got {phi}"
                )));
            }
        }
        if self.scenario.trials < 1 {
            return Err(Error::Config("scenario.trials must be at least 1".into()));
        }
        if self.scenario.snr_grid_db.is_empty() {
            return Err(Error::Config("scenario.snr_grid_db must be non-empty".into()));
        }
        if self.scenario.codebooks.is_empty() {
            return Err(Error::Config("scenario.codebooks must be non-empty".into()));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Result<ArrayGeometry> {
        self.geometry.build()
    }

    pub fn thresholds(&self) -> DesignThresholds {
        self.thresholds.build()
    }

    pub fn codebook_options(&self) -> CodebookOptions {
        self.switches.build()
    }

    /// The user region with unset bounds inherited from the design region.
    pub fn user_region(&self) -> UserRegion {
        let t = self.thresholds.build();
        let region = &self.scenario.region;
        UserRegion {
            r_min: region.r_min.unwrap_or(t.r_min),
            r_max: region.r_max.unwrap_or(t.r_max),
            rho_max: region.rho_max.unwrap_or(t.rho_max),
            phi_tilde_max: region
                .phi_tilde_max
                .or(self.switches.phi_tilde_max)
                .unwrap_or(self.geometry.bend_half_angle.max(0.05)),
            inside_erd: region.inside_erd.unwrap_or(true),
        }
    }

    /// Assembles the full Monte-Carlo scenario.
    pub fn scenario(&self) -> Result<Scenario> {
        Ok(Scenario {
            geometry: self.geometry()?,
            thresholds: self.thresholds(),
            options: self.codebook_options(),
            codebooks: self
                .scenario
                .codebooks
                .iter()
                .map(|spec| (codebook_spec_name(spec).to_string(), spec.clone()))
                .collect(),
            region: self.user_region(),
            snr_grid_db: self.scenario.snr_grid_db.clone(),
            trials: self.scenario.trials,
            master_seed: self.scenario.master_seed,
            range_sampling: self.scenario.range_sampling,
        })
    }

    /// SHA-256 hash of the effective configuration, stamped into every
    /// emitted file.
    pub fn hash(&self) -> String {
        fingerprint_of(self)
    }
}

/// Applies one `dotted.path=json_value` override onto the raw JSON document,
/// creating intermediate objects as needed. Values that fail to parse as JSON
/// are taken as strings.
fn apply_override(root: &mut Value, entry: &str) -> Result<()> {
    let (path, raw) = entry.split_once('=').ok_or_else(|| {
        Error::Config(format!("override '{entry}' must have the form key.path=value"))
    })?;
    if path.is_empty() {
        return Err(Error::Config(format!("override '{entry}' has an empty key")));
    }
    let parsed: Value = serde_json::from_str(raw).unwrap_or(Value::String(raw.to_string()));
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    for segment in &segments[..segments.len() - 1] {
        let obj = cursor
            .as_object_mut()
            .ok_or_else(|| Error::Config(format!("override path '{path}' crosses a non-object")))?;
        cursor = obj
            .entry(segment.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = cursor
        .as_object_mut()
        .ok_or_else(|| Error::Config(format!("override path '{path}' crosses a non-object")))?;
    obj.insert(segments[segments.len() - 1].to_string(), parsed);
    Ok(())
}
