//! Subcommand implementations.

use std::io;
use std::path::{Path, PathBuf};

use movingwell::frames::{
    comoving_forward, comoving_inverse, slow_accel_check, SlowAccelVerdict, SLOW_ACCEL_THRESHOLD,
};
use movingwell::revival::{revival_schedule, revive_psi};
use movingwell::solver::carpet;
use movingwell::{Frame, RevivalSpec, TauMap};
use rayon::prelude::*;

use crate::config::{ConfigError, RawConfig, RunConfig};
use crate::export;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] movingwell::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        use movingwell::Error as E;
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Io { .. } => 1,
            CliError::Sim(e) => match e {
                E::WallCollision { .. } => 3,
                E::Numerical(_) | E::Singularity { .. } => 4,
                E::UnreachableTau { .. } | E::OutOfRange { .. } => 5,
                E::InvalidParameter(_)
                | E::OutOfDomain { .. }
                | E::DegeneratePacket { .. }
                | E::GridMismatch
                | E::FrameMismatch { .. }
                | E::ParallelWalls
                | E::Unsupported(_) => 2,
            },
        }
    }
}

fn io_err(context: impl Into<String>) -> impl FnOnce(io::Error) -> CliError {
    let context = context.into();
    move |source| CliError::Io { context, source }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Runs one carpet simulation and writes `<output>.csv`, `.bin` and `.meta`.
/// Returns a one-line summary.
pub fn simulate(cfg: &RunConfig) -> Result<String, CliError> {
    let t_max = cfg.t_max.ok_or(ConfigError::Missing("t_max"))?;
    let psi0 = cfg.initial_state()?;
    let mut record = carpet(&psi0, &cfg.trajectory, t_max, cfg.n_t, &cfg.solver, &cfg.params)?;
    record
        .metadata
        .insert("units".into(), cfg.params.unit_system().name().into());
    record
        .metadata
        .insert("mass".into(), format!("{:e}", cfg.params.mass()));
    let csv = with_extension(&cfg.output, "csv");
    let bin = with_extension(&cfg.output, "bin");
    let meta = with_extension(&cfg.output, "meta");
    export::write_carpet_csv(&record, &csv).map_err(io_err(csv.display().to_string()))?;
    export::write_carpet_binary(&record, &bin).map_err(io_err(bin.display().to_string()))?;
    export::write_meta(&record, cfg.raw.pairs(), &meta).map_err(io_err(meta.display().to_string()))?;
    let norms = record.slice_norms();
    let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let dev = norms.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    Ok(format!(
        "{}: {} slices x {} points, norm in [{lo:.9}, {hi:.9}], max |norm - 1| = {dev:.3e}",
        cfg.output.display(),
        record.n_times(),
        record.n_points()
    ))
}

/// Thread count for sweeps: `MOVINGWELL_THREADS` if set to a positive integer.
pub fn sweep_threads() -> Option<usize> {
    std::env::var("MOVINGWELL_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Expands `key=a,b,c` into one validated config per value. Outputs get a
/// `-key-value` suffix unless the swept key is `output` itself.
pub fn sweep_configs(
    raw: &RawConfig,
    sweep: &str,
    build: impl Fn(RawConfig) -> Result<RunConfig, ConfigError>,
) -> Result<Vec<RunConfig>, CliError> {
    let (key, values) = sweep
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("--sweep expects key=a,b,c, got `{sweep}`")))?;
    let key = key.trim();
    let base_output = raw.get("output").unwrap_or("carpet").to_string();
    values
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .enumerate()
        .map(|(i, value)| {
            let mut r = raw.clone();
            r.set(&format!("{key}={value}"), i + 1)?;
            if key != "output" {
                r.set(&format!("output={base_output}-{key}-{value}"), i + 1)?;
            }
            Ok(build(r)?)
        })
        .collect()
}

/// Runs the configs concurrently and returns their results in input order.
pub fn run_sweep(configs: &[RunConfig]) -> Vec<Result<String, CliError>> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = sweep_threads() {
        builder = builder.num_threads(n);
    }
    match builder.build() {
        Ok(pool) => pool.install(|| configs.par_iter().map(simulate).collect()),
        Err(e) => {
            log::warn!("cannot build thread pool ({e}); running sweep serially");
            configs.iter().map(simulate).collect()
        }
    }
}

/// Predicted field at tau' = p/q; writes it to `field` and returns the report.
pub fn revive(cfg: &RunConfig, p: u64, q: u64, field: &Path) -> Result<String, CliError> {
    let spec = RevivalSpec::new(p, q)?;
    let psi0 = cfg.initial_state()?;
    let (psi, t_rev) = revive_psi(&psi0, &cfg.trajectory, spec, &cfg.params)?;
    export::write_field(&psi, field).map_err(io_err(field.display().to_string()))?;
    let mut out = format!("tau' = {spec}\nt_rev = {t_rev:.16e}\ns,shift,re,im,abs\n");
    for c in spec.coefficients() {
        out.push_str(&format!(
            "{},{:.6},{:.9e},{:.9e},{:.9e}\n",
            c.s,
            c.s as f64 / spec.q() as f64,
            c.value.re,
            c.value.im,
            c.value.norm()
        ));
    }
    out.push_str(&format!("wrote {}", field.display()));
    Ok(out)
}

pub fn schedule(cfg: &RunConfig, q_max: u64, t_max: f64) -> Result<String, CliError> {
    let rows = revival_schedule(&cfg.trajectory, q_max, t_max, &cfg.params)?;
    let mut out = String::from("p/q,tau_prime,t_rev");
    for (spec, t) in rows {
        out.push_str(&format!("\n{spec},{:.16e},{t:.16e}", spec.tau_prime()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    ToComoving,
    ToLab,
}

pub fn transform(
    cfg: &RunConfig,
    direction: Direction,
    t: f64,
    input: &Path,
    output: &Path,
) -> Result<String, CliError> {
    let field = export::read_field(input).map_err(io_err(input.display().to_string()))?;
    let result = match direction {
        Direction::ToComoving => {
            field.require_frame(Frame::LabX)?;
            comoving_forward(&field, &cfg.trajectory, t, &cfg.params)?
        }
        Direction::ToLab => {
            field.require_frame(Frame::ComovingY)?;
            comoving_inverse(&field, &cfg.trajectory, t, &cfg.params)?
        }
    };
    export::write_field(&result, output).map_err(io_err(output.display().to_string()))?;
    let tau_prime = TauMap::new(cfg.trajectory.clone(), cfg.params).tau_prime_of_t(t)?;
    Ok(format!(
        "wrote {} ({} frame, t = {t:.6e}, tau' = {tau_prime:.6e})",
        output.display(),
        result.frame().name()
    ))
}

pub fn check(cfg: &RunConfig, t0: f64, t1: f64) -> Result<String, CliError> {
    let report = slow_accel_check(&cfg.trajectory, t0, t1, &cfg.params)?;
    let verdict = match report.verdict {
        SlowAccelVerdict::Pass => "pass",
        SlowAccelVerdict::Warn => "warn",
    };
    let wall = if report.wall == 1 { "lower" } else { "upper" };
    Ok(format!(
        "max margin r = {:.6e} at t = {:.6e} ({wall} wall), threshold {SLOW_ACCEL_THRESHOLD}\nverdict: {verdict}",
        report.max_margin, report.at_time
    ))
}
