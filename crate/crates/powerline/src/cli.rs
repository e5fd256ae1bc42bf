//! Command-line front end.
//!
//! Subcommands: `synth-loading`, `simulate`, `pcm`, `sobol`, `pfail`, `mc`,
//! and `converge`. Machine output goes to CSV files under `--out`; progress
//! goes to standard error. Exit codes: 0 success, 1 validation/config error,
//! 2 solver failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{
    load_config, preset_config, ResolvedConfig, StochasticSettings, DEFAULT_MC_SAMPLES,
    DEFAULT_PCM_POINTS, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::fem::Mesh;
use crate::output::{
    config_digest, ensure_out_dir, write_csv, write_series_csv, write_snapshots_csv, Manifest,
};
use crate::scenario::Region;
use crate::simulation::{run_deterministic, FailureMode, SimulationConfig};
use crate::stochastic::{
    convergence_error, evaluate_ensemble, monte_carlo_moments, parameter_space_preset,
    pcm_moments, probability_of_failure, sobol_first_order, CollocationGrid, ParamName,
    RandomParameter, SpacePreset,
};

#[derive(Parser)]
#[command(
    name = "powerline",
    version,
    about = "Long-term transmission-line failure simulation and uncertainty analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the annual loading curves from monthly data.
    SynthLoading {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
    },
    /// One deterministic run over the service horizon.
    Simulate {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        /// Record field snapshots every five years.
        #[arg(long)]
        snapshots: bool,
    },
    /// Collocation moments (expectation/std) of the tracked quantities.
    Pcm {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        #[command(flatten)]
        stoch: StochOpts,
    },
    /// First-order Sobol sensitivity indices.
    Sobol {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        #[command(flatten)]
        stoch: StochOpts,
        /// Quantity to analyze: auto (by scenario kind), theta, or phi.
        #[arg(long, default_value = "auto")]
        qoi: String,
    },
    /// Time-resolved probability of failure via the Bernoulli indicator.
    Pfail {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        #[command(flatten)]
        stoch: StochOpts,
    },
    /// Monte Carlo baseline estimates over the same parameter box.
    Mc {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        #[command(flatten)]
        stoch: StochOpts,
        /// Number of Monte Carlo samples.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Collocation-vs-Monte-Carlo convergence study in the fracture energy.
    Converge {
        #[command(flatten)]
        source: SourceOpts,
        #[command(flatten)]
        out: OutOpt,
        #[command(flatten)]
        numerics: NumericsOpts,
        /// Evaluation time of the damage quantity, years.
        #[arg(long, default_value_t = 25.0)]
        at_year: f64,
        /// Largest Monte Carlo sample count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Collocation points of the reference solution.
        #[arg(long, default_value_t = 100)]
        reference_points: usize,
        /// Keep the preset's event schedule (the study strips it by default
        /// so every realization survives to the evaluation time).
        #[arg(long)]
        keep_events: bool,
    },
}

#[derive(Args)]
struct SourceOpts {
    /// Built-in regional preset: amarillo_tx, san_diego_ca, or bethel_ak.
    #[arg(long, conflicts_with = "scenario")]
    preset: Option<String>,
    /// Scenario config file (TOML).
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Args)]
struct OutOpt {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NumericsOpts {
    /// Time step, years.
    #[arg(long)]
    dt: Option<f64>,
    /// Service horizon, years.
    #[arg(long)]
    horizon: Option<f64>,
    /// Worker threads for ensemble runs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct StochOpts {
    /// Parameter-space preset (xi_m, xi_c, xi_f1..xi_f3, xi_1..xi_3);
    /// overrides the config file's [stochastic] section.
    #[arg(long)]
    space: Option<String>,
    /// Collocation points per dimension.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Entry point used by the binary and by tests; returns the process exit
/// code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{e}");
            return 1;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Solver { .. } => 2,
                _ => 1,
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::SynthLoading { source, out } => synth_loading(&source, &out.out),
        Command::Simulate {
            source,
            out,
            numerics,
            snapshots,
        } => simulate(&source, &out.out, &numerics, snapshots),
        Command::Pcm {
            source,
            out,
            numerics,
            stoch,
        } => pcm(&source, &out.out, &numerics, &stoch),
        Command::Sobol {
            source,
            out,
            numerics,
            stoch,
            qoi,
        } => sobol(&source, &out.out, &numerics, &stoch, &qoi),
        Command::Pfail {
            source,
            out,
            numerics,
            stoch,
        } => pfail(&source, &out.out, &numerics, &stoch),
        Command::Mc {
            source,
            out,
            numerics,
            stoch,
            samples,
        } => mc(&source, &out.out, &numerics, &stoch, samples),
        Command::Converge {
            source,
            out,
            numerics,
            at_year,
            samples,
            seed,
            reference_points,
            keep_events,
        } => converge(
            &source,
            &out.out,
            &numerics,
            at_year,
            samples,
            seed,
            reference_points,
            keep_events,
        ),
    }
}

fn resolve_source(source: &SourceOpts) -> Result<ResolvedConfig> {
    match (&source.preset, &source.scenario) {
        (Some(name), None) => Ok(preset_config(Region::parse(name)?)),
        (None, Some(path)) => load_config(path),
        (None, None) => Err(Error::Config(
            "missing input: pass --preset <name> or --scenario <file>".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn apply_numerics(cfg: &mut SimulationConfig, n: &NumericsOpts) {
    if let Some(dt) = n.dt {
        cfg.dt = dt;
    }
    if let Some(h) = n.horizon {
        cfg.horizon = h;
    }
}

fn resolve_stochastic(
    rc: &ResolvedConfig,
    stoch: &StochOpts,
    samples_flag: Option<usize>,
) -> Result<StochasticSettings> {
    let mut settings = match (&stoch.space, &rc.stochastic) {
        (Some(name), _) => StochasticSettings {
            space: parameter_space_preset(SpacePreset::parse(name)?, &rc.simulation)?,
            points: DEFAULT_PCM_POINTS,
            samples: DEFAULT_MC_SAMPLES,
            seed: DEFAULT_SEED,
        },
        (None, Some(s)) => StochasticSettings {
            space: s.space.clone(),
            points: s.points,
            samples: s.samples,
            seed: s.seed,
        },
        (None, None) => {
            return Err(Error::Config(
                "no stochastic space: pass --space <preset> or add a [stochastic] section".into(),
            ))
        }
    };
    if let Some(s) = &rc.stochastic {
        if stoch.space.is_some() {
            // Keep file-level numeric settings when only the space is
            // overridden on the command line.
            settings.points = s.points;
            settings.samples = s.samples;
            settings.seed = s.seed;
        }
    }
    if let Some(p) = stoch.points {
        settings.points = p;
    }
    if let Some(s) = stoch.seed {
        settings.seed = s;
    }
    if let Some(s) = samples_flag {
        settings.samples = s;
    }
    Ok(settings)
}

fn begin_manifest(
    dir: &Path,
    command: &str,
    rc: &ResolvedConfig,
    seed: u64,
) -> Result<Manifest> {
    ensure_out_dir(dir)?;
    let digest = config_digest(rc)?;
    Ok(Manifest::begin(command, &digest, seed))
}

fn finalize(mut manifest: Manifest, dir: &Path, ok: bool) -> Result<()> {
    manifest.finish(ok);
    manifest.write(dir)?;
    if !ok {
        return Err(Error::solver("run", "see manifest and partial outputs"));
    }
    Ok(())
}

fn synth_loading(source: &SourceOpts, out: &Path) -> Result<()> {
    let rc = resolve_source(source)?;
    let cfg = &rc.simulation;
    let mut manifest = begin_manifest(out, "synth-loading", &rc, 0)?;

    let scen = &cfg.scenario;
    let n = (1.0 / cfg.dt).round() as usize;
    let rows = (0..=n).map(|k| {
        let t = k as f64 * cfg.dt;
        let a = crate::scenario::ambient_at(scen, t);
        vec![t, a.wind_speed, a.ambient_temp]
    });
    let path = out.join("loading.csv");
    write_csv(&path, "t,wind_ms,temp_k", rows)?;
    manifest.record_file(&path);

    let wind = &scen.wind_loading;
    let temp = &scen.temp_loading;
    let mut coeff_rows = vec![vec![0.0, wind.mean(), 0.0, temp.mean(), 0.0]];
    for i in 0..wind.cos_coeffs().len() {
        coeff_rows.push(vec![
            (i + 1) as f64,
            wind.cos_coeffs()[i],
            wind.sin_coeffs()[i],
            temp.cos_coeffs()[i],
            temp.sin_coeffs()[i],
        ]);
    }
    let path = out.join("coefficients.csv");
    write_csv(&path, "harmonic,wind_cos,wind_sin,temp_cos,temp_sin", coeff_rows)?;
    manifest.record_file(&path);

    finalize(manifest, out, true)
}

fn simulate(source: &SourceOpts, out: &Path, numerics: &NumericsOpts, snapshots: bool) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    if snapshots {
        rc.simulation.snapshot_interval = Some(5.0);
    }
    rc.simulation.validate()?;
    let mut manifest = begin_manifest(out, "simulate", &rc, 0)?;

    eprintln!(
        "simulating {:?} over {} yr ({} steps)",
        rc.simulation.scenario.kind,
        rc.simulation.horizon,
        rc.simulation.n_steps()
    );
    let result = run_deterministic(&rc.simulation)?;
    match &result.failure {
        Some(f) => eprintln!("failure at {:.2} yr by {:?}", f.time, f.mode),
        None => eprintln!("no failure over the horizon"),
    }

    let path = write_series_csv(out, &result, &rc.simulation)?;
    manifest.record_file(&path);
    if snapshots {
        let mesh = Mesh::new(rc.simulation.area.span, rc.simulation.n_elements)?;
        let path = write_snapshots_csv(out, &result, mesh.node_coords())?;
        manifest.record_file(&path);
    }
    let ok = result.error.is_none();
    if let Some(e) = &result.error {
        eprintln!("solver breakdown: {e}");
    }
    finalize(manifest, out, ok)
}

fn pcm(source: &SourceOpts, out: &Path, numerics: &NumericsOpts, stoch: &StochOpts) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    let settings = resolve_stochastic(&rc, stoch, None)?;
    rc.stochastic = Some(settings.clone());
    let mut manifest = begin_manifest(out, "pcm", &rc, settings.seed)?;

    let grid = CollocationGrid::new(settings.space.clone(), settings.points)?;
    eprintln!(
        "collocation grid: {} dims x {} points = {} runs",
        grid.n_dims(),
        settings.points,
        grid.n_nodes()
    );
    let ens = evaluate_ensemble(&rc.simulation, &grid, numerics.jobs, true)?;
    let (e_theta, s_theta) = pcm_moments(&ens.theta, &grid)?;
    let (e_phi, s_phi) = pcm_moments(&ens.phi, &grid)?;
    let rows = (0..ens.theta.times.len()).map(|k| {
        vec![
            ens.theta.times[k],
            e_theta[k],
            s_theta[k],
            e_phi[k],
            s_phi[k],
        ]
    });
    let path = out.join("moments.csv");
    write_csv(
        &path,
        "t,E_theta_max,std_theta_max,E_phi_max,std_phi_max",
        rows,
    )?;
    manifest.record_file(&path);
    report_run_errors(&ens.run_errors);
    finalize(manifest, out, ens.run_errors.is_empty())
}

fn sobol(
    source: &SourceOpts,
    out: &Path,
    numerics: &NumericsOpts,
    stoch: &StochOpts,
    qoi: &str,
) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    let settings = resolve_stochastic(&rc, stoch, None)?;
    rc.stochastic = Some(settings.clone());
    let mut manifest = begin_manifest(out, "sobol", &rc, settings.seed)?;

    let grid = CollocationGrid::new(settings.space.clone(), settings.points)?;
    eprintln!(
        "collocation grid: {} dims x {} points = {} runs",
        grid.n_dims(),
        settings.points,
        grid.n_nodes()
    );
    let ens = evaluate_ensemble(&rc.simulation, &grid, numerics.jobs, true)?;
    let use_theta = match qoi {
        "theta" => true,
        "phi" => false,
        "auto" => matches!(
            crate::simulation::default_failure_quantity(rc.simulation.scenario.kind),
            FailureMode::Temperature
        ),
        other => {
            return Err(Error::Config(format!(
                "unknown qoi `{other}`; expected auto, theta, or phi"
            )))
        }
    };
    let ensemble = if use_theta { &ens.theta } else { &ens.phi };
    let indices = sobol_first_order(ensemble, &grid)?;
    let header = std::iter::once("t".to_string())
        .chain(grid.dims().iter().map(|p| format!("S_{}", p.name.key())))
        .collect::<Vec<_>>()
        .join(",");
    let rows = (0..ensemble.times.len()).map(|k| {
        let mut row = vec![ensemble.times[k]];
        row.extend(indices.iter().map(|s| s[k]));
        row
    });
    let path = out.join("sobol.csv");
    write_csv(&path, &header, rows)?;
    manifest.record_file(&path);
    report_run_errors(&ens.run_errors);
    finalize(manifest, out, ens.run_errors.is_empty())
}

fn pfail(source: &SourceOpts, out: &Path, numerics: &NumericsOpts, stoch: &StochOpts) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    let settings = resolve_stochastic(&rc, stoch, None)?;
    rc.stochastic = Some(settings.clone());
    let mut manifest = begin_manifest(out, "pfail", &rc, settings.seed)?;

    let grid = CollocationGrid::new(settings.space.clone(), settings.points)?;
    eprintln!(
        "collocation grid: {} dims x {} points = {} runs",
        grid.n_dims(),
        settings.points,
        grid.n_nodes()
    );
    let ens = evaluate_ensemble(&rc.simulation, &grid, numerics.jobs, true)?;
    let p_f = probability_of_failure(&ens.h_b, &grid)?;
    let rows = (0..ens.h_b.times.len()).map(|k| vec![ens.h_b.times[k], p_f[k]]);
    let path = out.join("pfail.csv");
    write_csv(&path, "t,p_f", rows)?;
    manifest.record_file(&path);
    report_run_errors(&ens.run_errors);
    finalize(manifest, out, ens.run_errors.is_empty())
}

fn mc(
    source: &SourceOpts,
    out: &Path,
    numerics: &NumericsOpts,
    stoch: &StochOpts,
    samples: Option<usize>,
) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    let settings = resolve_stochastic(&rc, stoch, samples)?;
    rc.stochastic = Some(settings.clone());
    let mut manifest = begin_manifest(out, "mc", &rc, settings.seed)?;

    eprintln!("monte carlo: {} samples, seed {}", settings.samples, settings.seed);
    let mc = monte_carlo_moments(
        &rc.simulation,
        &settings.space,
        settings.samples,
        settings.seed,
        numerics.jobs,
        true,
    )?;
    let rows = (0..mc.times.len()).map(|k| {
        vec![
            mc.times[k],
            mc.theta_mean[k],
            mc.theta_std[k],
            mc.phi_mean[k],
            mc.phi_std[k],
        ]
    });
    let path = out.join("mc_moments.csv");
    write_csv(
        &path,
        "t,E_theta_max,std_theta_max,E_phi_max,std_phi_max",
        rows,
    )?;
    manifest.record_file(&path);
    let rows = (0..mc.full_times.len()).map(|k| vec![mc.full_times[k], mc.p_f[k]]);
    let path = out.join("mc_pfail.csv");
    write_csv(&path, "t,p_f", rows)?;
    manifest.record_file(&path);
    finalize(manifest, out, true)
}

/// Damage quantity at the study year: the series value at that time, or the
/// last recorded value when the run ended earlier.
fn qoi_at_year(phi_series: &[f64], dt: f64, year: f64) -> f64 {
    let idx = ((year / dt).round() as usize).saturating_sub(1);
    phi_series
        .get(idx)
        .or_else(|| phi_series.last())
        .copied()
        .unwrap_or(f64::NAN)
}

#[allow(clippy::too_many_arguments)]
fn converge(
    source: &SourceOpts,
    out: &Path,
    numerics: &NumericsOpts,
    at_year: f64,
    samples: Option<usize>,
    seed: Option<u64>,
    reference_points: usize,
    keep_events: bool,
) -> Result<()> {
    let mut rc = resolve_source(source)?;
    apply_numerics(&mut rc.simulation, numerics);
    if !keep_events {
        rc.simulation.scenario = rc.simulation.scenario.clone().without_events();
    }
    // Running past the evaluation time contributes nothing here.
    if rc.simulation.horizon > at_year {
        rc.simulation.horizon = at_year;
    }
    let n_samples = samples.unwrap_or(DEFAULT_MC_SAMPLES);
    let seed = seed.unwrap_or(DEFAULT_SEED);
    let space = vec![RandomParameter::around_mean(ParamName::GC, &rc.simulation)?];
    rc.stochastic = Some(StochasticSettings {
        space: space.clone(),
        points: reference_points,
        samples: n_samples,
        seed,
    });
    let mut manifest = begin_manifest(out, "converge", &rc, seed)?;
    let dt = rc.simulation.dt;

    // Reference: dense 1-D collocation.
    eprintln!("reference grid: {reference_points} points");
    let ref_grid = CollocationGrid::new(space.clone(), reference_points)?;
    let ref_ens = evaluate_ensemble(&rc.simulation, &ref_grid, numerics.jobs, true)?;
    let ref_scalar: Vec<f64> = ref_ens
        .phi
        .values
        .iter()
        .map(|s| qoi_at_year(s, dt, at_year))
        .collect();
    let mut ref_mean = 0.0;
    for (p, &q) in ref_scalar.iter().enumerate() {
        ref_mean += ref_grid.probability_weight(p) * q;
    }

    // Collocation sweep.
    let pcm_sizes = [2usize, 3, 4, 5, 7, 10];
    let mut pcm_rows = Vec::new();
    for &n in &pcm_sizes {
        eprintln!("pcm sweep: {n} points");
        let grid = CollocationGrid::new(space.clone(), n)?;
        let ens = evaluate_ensemble(&rc.simulation, &grid, numerics.jobs, false)?;
        let mut mean = 0.0;
        for (p, series) in ens.phi.values.iter().enumerate() {
            mean += grid.probability_weight(p) * qoi_at_year(series, dt, at_year);
        }
        let err = convergence_error(&[mean], &[ref_mean])?;
        pcm_rows.push(vec![n as f64, err]);
    }
    let path = out.join("convergence_pcm.csv");
    write_csv(&path, "n,error", pcm_rows)?;
    manifest.record_file(&path);

    // Monte Carlo sweep: one seeded sample stream, errors from prefixes.
    eprintln!("monte carlo sweep: {n_samples} samples");
    let samples = crate::stochastic::monte_carlo::sample_box(&space, n_samples, seed);
    let names: Vec<ParamName> = space.iter().map(|p| p.name).collect();
    let configs: Vec<SimulationConfig> = samples
        .iter()
        .map(|v| crate::stochastic::runner::apply_parameters(&rc.simulation, &names, v))
        .collect();
    let outputs = crate::stochastic::runner::run_many(&configs, numerics.jobs, true)?;
    let scalars: Vec<f64> = outputs
        .iter()
        .map(|o| qoi_at_year(&o.phi_max, dt, at_year))
        .collect();
    let mut mc_rows = Vec::new();
    let mut prefix = 10usize;
    while prefix <= n_samples {
        let mean = scalars[..prefix].iter().sum::<f64>() / prefix as f64;
        let err = convergence_error(&[mean], &[ref_mean])?;
        mc_rows.push(vec![prefix as f64, err]);
        prefix *= 10;
    }
    let path = out.join("convergence_mc.csv");
    write_csv(&path, "n_samples,error", mc_rows)?;
    manifest.record_file(&path);

    finalize(manifest, out, true)
}

fn report_run_errors(errors: &[(usize, String)]) {
    for (node, e) in errors {
        eprintln!("node {node}: solver breakdown: {e}");
    }
}
