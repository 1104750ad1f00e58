//! `cura` command-line interface: codebook generation, beam-gain heatmaps,
//! ERD contour maps, Monte-Carlo SNR sweeps, coverage probes, and the
//! model-validation suite. All commands are deterministic under a fixed
//! configuration and emit files stamped with the configuration hash.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cura::codebook::{
    build_codebook_1d, build_codebook_2d, codebook_layout_1d, codebook_layout_2d, Codebook,
    LayoutSummary,
};
use cura::config::RunConfig;
use cura::erd::{erd_contour, erd_contour_2d};
use cura::error::Error;
use cura::export::{write_codebook, write_csv, write_json};
use cura::geometry::{polar_to_spherical, ArrayGeometry, PolarDirection, SphericalLocation};
use cura::trainsim::{coverage_probe, run_scenario};
use cura::validation::{
    dimension_consistency_report, erd_consistency_scan, angular_model_first_lobe_scan, range_model_error_scan,
};
use cura::wavefield::{beam_gain, focusing_vector_any};

#[derive(Parser)]
#[command(name = "cura", version, about = "CuRA codebook and beam-training toolkit")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration file (defaults are used when omitted).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output.directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed (overrides the config's scenario.master_seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Dotted-path config overrides, e.g. `--set geometry.n_elements=128`.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the hierarchical codebook and write its manifest/coefficients.
    Codebook,
    /// Emit a beam-gain heatmap CSV for a fixed focal point.
    Heatmap(HeatmapArgs),
    /// Emit ERD contours over a polar-direction grid.
    ErdMap(ErdMapArgs),
    /// Run the Monte-Carlo SNR sweep and write per-codebook results.
    Sweep,
    /// Probe codebook coverage over the user region.
    Coverage(CoverageArgs),
    /// Run the model-validation oracle scans and write their reports.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum HeatmapMode {
    /// Gain over an (elevation, azimuth) grid at the focal range.
    AngleAngle,
    /// Gain over a (range, elevation) grid at the focal azimuth.
    RangeAngle,
}

#[derive(Args)]
struct HeatmapArgs {
    #[arg(long, value_enum, default_value = "angle-angle")]
    mode: HeatmapMode,
    /// Focal range in meters.
    #[arg(long, default_value_t = 100.0)]
    focus_r: f64,
    /// Focal elevation θ in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    focus_theta: f64,
    /// Focal azimuth φ in radians.
    #[arg(long, default_value_t = 0.0)]
    focus_phi: f64,
    /// Samples per axis.
    #[arg(long, default_value_t = 121)]
    grid: usize,
}

#[derive(Args)]
struct ErdMapArgs {
    /// Polar-deviation samples of the contour grid.
    #[arg(long, default_value_t = 181)]
    grid: usize,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Restrict each sample's search to codewords within this polar-domain
    /// angular distance (conservative speedup); omit for exhaustive search.
    #[arg(long)]
    angular_window: Option<f64>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Directions per oracle scan.
    #[arg(long, default_value_t = 12)]
    directions: usize,
    /// Separation/ζ samples per direction.
    #[arg(long, default_value_t = 12)]
    points: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> cura::Result<()> {
    let mut config = RunConfig::load(cli.common.config.as_deref(), &cli.common.sets)?;
    if let Some(seed) = cli.common.seed {
        config.scenario.master_seed = seed;
    }
    if let Some(out) = &cli.common.out {
        config.output.directory = out.to_string_lossy().into_owned();
    }
    config.validate()?;
    let out_dir = PathBuf::from(&config.output.directory);
    match &cli.command {
        Command::Codebook => cmd_codebook(&config, &out_dir),
        Command::Heatmap(args) => cmd_heatmap(&config, &out_dir, args),
        Command::ErdMap(args) => cmd_erdmap(&config, &out_dir, args),
        Command::Sweep => cmd_sweep(&config, &out_dir),
        Command::Coverage(args) => cmd_coverage(&config, &out_dir, args),
        Command::Validate(args) => cmd_validate(&config, &out_dir, args),
    }
}

fn build_proposed(config: &RunConfig) -> cura::Result<(Codebook, LayoutSummary)> {
    let thresholds = config.thresholds();
    let options = config.codebook_options();
    match config.geometry()? {
        ArrayGeometry::OneD(g) => Ok((
            build_codebook_1d(&g, &thresholds, &options)?,
            codebook_layout_1d(&g, &thresholds, &options)?,
        )),
        ArrayGeometry::TwoD(g) => Ok((
            build_codebook_2d(&g, &thresholds, &options)?,
            codebook_layout_2d(&g, &thresholds, &options)?,
        )),
    }
}

fn cmd_codebook(config: &RunConfig, out_dir: &Path) -> cura::Result<()> {
    let (codebook, layout) = build_proposed(config)?;
    let options = config.codebook_options();
    let files = write_codebook(
        out_dir,
        "codebook",
        &codebook,
        &options,
        Some(&layout),
        &config.hash(),
        config.output.write_coefficients,
    )?;
    println!(
        "codebook: {} codewords ({} angular points over {} rings; {} near-field, {} far-field)",
        layout.total, layout.angular_points, layout.rings, layout.near_field, layout.far_field
    );
    for file in files {
        println!("wrote {}", file.display());
    }
    Ok(())
}

fn cmd_heatmap(config: &RunConfig, out_dir: &Path, args: &HeatmapArgs) -> cura::Result<()> {
    if args.grid < 2 {
        return Err(Error::Config("heatmap grid needs at least 2 samples".into()));
    }
    let geometry = config.geometry()?;
    let thresholds = config.thresholds();
    let focus = SphericalLocation::new(args.focus_r, args.focus_theta, args.focus_phi)?;
    let w = focusing_vector_any(&geometry, &focus)?;
    let n = args.grid;
    let mut rows: Vec<[String; 3]> = Vec::with_capacity(n * n);
    match args.mode {
        HeatmapMode::AngleAngle => {
            for ti in 0..n {
                let theta = ti as f64 * std::f64::consts::PI / (n as f64 - 1.0);
                for pi in 0..n {
                    let phi = pi as f64 * std::f64::consts::PI / (n as f64 - 1.0);
                    let probe = focusing_vector_any(
                        &geometry,
                        &SphericalLocation::new(args.focus_r, theta, phi)?,
                    )?;
                    let gain = beam_gain(&probe, &w)?;
                    rows.push([theta.to_string(), phi.to_string(), gain.to_string()]);
                }
            }
        }
        HeatmapMode::RangeAngle => {
            let (r_lo, r_hi) = (thresholds.r_min, thresholds.r_max);
            for ri in 0..n {
                let r = r_lo * (r_hi / r_lo).powf(ri as f64 / (n as f64 - 1.0));
                for ti in 0..n {
                    let theta = ti as f64 * std::f64::consts::PI / (n as f64 - 1.0);
                    let probe = focusing_vector_any(
                        &geometry,
                        &SphericalLocation::new(r, theta, args.focus_phi)?,
                    )?;
                    let gain = beam_gain(&probe, &w)?;
                    rows.push([r.to_string(), theta.to_string(), gain.to_string()]);
                }
            }
        }
    }
    let (header, stem) = match args.mode {
        HeatmapMode::AngleAngle => ("theta_rad,phi_rad,gain", "heatmap_angle_angle"),
        HeatmapMode::RangeAngle => ("range_m,theta_rad,gain", "heatmap_range_angle"),
    };
    let path = out_dir.join(format!("{stem}.csv"));
    write_csv(&path, &config.hash(), header, rows.into_iter().map(Vec::from))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn direction_fan(config: &RunConfig, n: usize) -> cura::Result<Vec<PolarDirection>> {
    let thresholds = config.thresholds();
    let phi_max = config.user_region().phi_tilde_max;
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n as f64 - 1.0);
        let rho = t * thresholds.rho_max;
        // Sweep azimuth jointly with ρ so one fan covers both coordinates.
        let varphi = phi_max * (2.0 * ((i * 7) % n) as f64 / n as f64 - 1.0);
        grid.push(PolarDirection::new(rho, varphi));
    }
    Ok(grid)
}

fn cmd_erdmap(config: &RunConfig, out_dir: &Path, args: &ErdMapArgs) -> cura::Result<()> {
    if args.grid < 2 {
        return Err(Error::Config("erd-map grid needs at least 2 samples".into()));
    }
    let thresholds = config.thresholds();
    // yz-plane fan: φ̃ = 0, ρ from −ρ_max to ρ_max (negative ρ encodes the
    // mirrored half-plane via φ̃ = π).
    let grid: Vec<PolarDirection> = (0..args.grid)
        .map(|i| {
            let rho = -thresholds.rho_max
                + 2.0 * thresholds.rho_max * i as f64 / (args.grid as f64 - 1.0);
            if rho < 0.0 {
                PolarDirection::new(-rho, std::f64::consts::PI)
            } else {
                PolarDirection::new(rho, 0.0)
            }
        })
        .collect();
    let contour = match config.geometry()? {
        ArrayGeometry::OneD(g) => erd_contour(&g, thresholds.delta_gain, &grid)?,
        ArrayGeometry::TwoD(g) => erd_contour_2d(&g, thresholds.delta_gain, &grid)?,
    };
    let rows = contour.iter().map(|(dir, erd)| {
        let (theta, phi) = polar_to_spherical(*dir);
        vec![
            dir.rho.to_string(),
            dir.varphi.to_string(),
            theta.to_string(),
            phi.to_string(),
            erd.to_string(),
        ]
    });
    let path = out_dir.join("erd_contour.csv");
    write_csv(&path, &config.hash(), "rho_rad,varphi_rad,theta_rad,phi_rad,erd_m", rows)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep(config: &RunConfig, out_dir: &Path) -> cura::Result<()> {
    let scenario = config.scenario()?;
    let result = run_scenario(&scenario)?;
    let json_path = out_dir.join("sweep_result.json");
    write_json(&json_path, &config.hash(), &result)?;
    let rows = result.codebooks.iter().flat_map(|cb| {
        cb.per_snr.iter().map(move |point| {
            vec![
                cb.name.clone(),
                cb.size.to_string(),
                point.snr_db.to_string(),
                point.mean_spectral_efficiency.to_string(),
                cb.mean_alignment_gain.to_string(),
            ]
        })
    });
    let csv_path = out_dir.join("sweep_result.csv");
    write_csv(
        &csv_path,
        &config.hash(),
        "codebook,size,snr_db,mean_spectral_efficiency,mean_alignment_gain",
        rows,
    )?;
    for cb in &result.codebooks {
        let se: Vec<String> = cb
            .per_snr
            .iter()
            .map(|p| format!("{} dB: {:.4}", p.snr_db, p.mean_spectral_efficiency))
            .collect();
        println!("{} (size {}): {}", cb.name, cb.size, se.join(", "));
    }
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn cmd_coverage(config: &RunConfig, out_dir: &Path, args: &CoverageArgs) -> cura::Result<()> {
    let (codebook, _) = build_proposed(config)?;
    let geometry = config.geometry()?;
    let thresholds = config.thresholds();
    let mut region = config.user_region();
    // Coverage is a property of the whole service region, not the ERD gate.
    region.inside_erd = false;
    let stats = coverage_probe(
        &geometry,
        &codebook,
        &region,
        args.samples,
        config.scenario.master_seed,
        &[thresholds.delta_p, thresholds.delta_r, 0.45],
        args.angular_window,
    )?;
    let path = out_dir.join("coverage.json");
    write_json(&path, &config.hash(), &stats)?;
    println!(
        "coverage over {} samples: min {:.4}, mean {:.4}, p5 {:.4}",
        stats.n_samples, stats.min, stats.mean, stats.percentile_5
    );
    for (delta, frac) in &stats.threshold_fractions {
        println!("  fraction >= {delta:.2}: {frac:.4}");
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_validate(config: &RunConfig, out_dir: &Path, args: &ValidateArgs) -> cura::Result<()> {
    if args.directions < 2 || args.points < 1 {
        return Err(Error::Config("validate needs >= 2 directions and >= 1 point".into()));
    }
    let thresholds = config.thresholds();
    let options = config.codebook_options();
    let arc = *config.geometry()?.arc();
    let directions = direction_fan(config, args.directions)?;
    let mut reports = vec![
        angular_model_first_lobe_scan(&arc, &directions, args.points, options.theta_variant, 0.05)?,
        range_model_error_scan(&arc, &directions, args.points, thresholds.r_max, 0.05)?,
        erd_consistency_scan(&arc, &directions, thresholds.delta_gain, 0.15)?,
    ];
    if let ArrayGeometry::TwoD(g) = config.geometry()? {
        reports.push(dimension_consistency_report(&g, &thresholds)?);
    }
    let path = out_dir.join("validation.json");
    write_json(&path, &config.hash(), &serde_json::json!({ "reports": reports }))?;
    for report in &reports {
        println!(
            "{}: max error {:.4} ({}) -> {}",
            report.model,
            report.max_abs_error,
            report.argmax,
            if report.pass { "pass" } else { "FAIL" }
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}
