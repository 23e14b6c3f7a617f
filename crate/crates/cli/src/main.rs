//! `movingwell`: simulate, revive, schedule, transform and check runs of a
//! particle in a box with moving walls.

mod commands;
mod config;
mod export;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use movingwell::UnitSystem;

use commands::{CliError, Direction};
use config::{RawConfig, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fig4,
    Fig8,
    Fig10,
}

impl Preset {
    fn text(self) -> &'static str {
        match self {
            Preset::Fig4 => include_str!("../presets/fig4.cfg"),
            Preset::Fig8 => include_str!("../presets/fig8.cfg"),
            Preset::Fig10 => include_str!("../presets/fig10.cfg"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Si,
}

#[derive(Debug, Parser)]
#[command(name = "movingwell", version, about = "Particle in a box with moving walls")]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled config.
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// Unit system; must agree with the config's `units` key if present.
    #[arg(long, global = true, value_enum)]
    units: Option<Units>,
    /// Override a config value, e.g. `--set n_points=512`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve the packet and write the density carpet.
    Simulate {
        /// Run one simulation per value, e.g. `w0=1,2,3`.
        #[arg(long, value_name = "KEY=A,B,...")]
        sweep: Option<String>,
    },
    /// Predict the field at the revival time tau' = p/q.
    Revive {
        p: u64,
        q: u64,
        /// Output field file (default: `<output>-revive.csv`).
        #[arg(long)]
        field: Option<PathBuf>,
    },
    /// List revival times up to t_max.
    Schedule {
        #[arg(long)]
        q_max: u64,
        #[arg(long)]
        t_max: f64,
    },
    /// Map a field file between the lab and comoving frames at time t.
    Transform {
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Report the slow-acceleration margin over [t0, t1].
    Check {
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long)]
        t1: f64,
    },
}

fn load_raw(cli: &Cli) -> Result<RawConfig, CliError> {
    let mut raw = match (&cli.config, cli.preset) {
        (Some(path), _) => RawConfig::from_file(path)?,
        (None, Some(preset)) => {
            let name = format!("preset {}", preset.to_possible_value().expect("named").get_name());
            RawConfig::parse(preset.text(), &name)?
        }
        (None, None) => return Err(CliError::Usage("one of --config or --preset is required".into())),
    };
    for (i, assignment) in cli.overrides.iter().enumerate() {
        raw.set(assignment, i + 1)?;
    }
    Ok(raw)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let units = cli.units.map(|u| match u {
        Units::Natural => UnitSystem::Natural,
        Units::Si => UnitSystem::Si,
    });
    let raw = load_raw(&cli)?;
    let build = |r: RawConfig| RunConfig::from_raw(r, units);
    match &cli.command {
        Command::Simulate { sweep: None } => println!("{}", commands::simulate(&build(raw)?)?),
        Command::Simulate { sweep: Some(spec) } => {
            let configs = commands::sweep_configs(&raw, spec, build)?;
            let mut first_error = None;
            for result in commands::run_sweep(&configs) {
                match result {
                    Ok(line) => println!("{line}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        first_error.get_or_insert(e);
                    }
                }
            }
            if let Some(e) = first_error {
                return Err(e);
            }
        }
        Command::Revive { p, q, field } => {
            let cfg = build(raw)?;
            let field = field.clone().unwrap_or_else(|| {
                let mut s = cfg.output.as_os_str().to_owned();
                s.push("-revive.csv");
                PathBuf::from(s)
            });
            println!("{}", commands::revive(&cfg, *p, *q, &field)?);
        }
        Command::Schedule { q_max, t_max } => println!("{}", commands::schedule(&build(raw)?, *q_max, *t_max)?),
        Command::Transform {
            direction,
            t,
            input,
            output,
        } => println!("{}", commands::transform(&build(raw)?, *direction, *t, input, output)?),
        Command::Check { t0, t1 } => println!("{}", commands::check(&build(raw)?, *t0, *t1)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
