//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use movingwell::frames::comoving_inverse;
use movingwell::frames::well_grid;
use movingwell::solver::gaussian_packet;
use movingwell::{ComplexField, Frame, PhysicalParams, SolverConfig, SpatialGrid, UnitSystem, WallTrajectory};

/// Keys accepted in a config file or through `--set`.
pub const KNOWN_KEYS: &[&str] = &[
    "units",
    "mass",
    "trajectory",
    "w0",
    "v1",
    "v2",
    "t_scale",
    "n",
    "amplitude",
    "omega",
    "table",
    "packet_center",
    "packet_width",
    "packet_wavenumber",
    "packet_frame",
    "n_points",
    "steps_per_unit",
    "t_max",
    "n_t",
    "output",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}:{line}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{origin}:{line}: unknown key `{key}`")]
    UnknownKey { origin: String, line: usize, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {message}")]
    Invalid { key: String, message: String },
    #[error("config declares units = {config} but --units {flag} was given")]
    UnitsConflict { config: String, flag: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    origin: String,
    line: usize,
}

/// Parsed but unvalidated key/value pairs, each remembering where it came from.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
    base_dir: Option<PathBuf>,
}

impl RawConfig {
    /// Parses config text. `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (idx, full) in text.lines().enumerate() {
            let line = idx + 1;
            let content = full.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    origin: origin.into(),
                    line,
                    message: format!("expected `key = value`, found `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    origin: origin.into(),
                    line,
                    message: "empty key or value".into(),
                });
            }
            raw.insert(key, value, origin, line)?;
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut raw = Self::parse(&text, &path.display().to_string())?;
        raw.base_dir = path.parent().map(Path::to_path_buf);
        Ok(raw)
    }

    fn insert(&mut self, key: &str, value: &str, origin: &str, line: usize) -> Result<(), ConfigError> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                origin: origin.into(),
                line,
                key: key.into(),
            });
        }
        if let Some(prev) = self.entries.get(key) {
            if prev.origin == origin {
                return Err(ConfigError::Syntax {
                    origin: origin.into(),
                    line,
                    message: format!("duplicate key `{key}` (first set on line {})", prev.line),
                });
            }
        }
        self.entries.insert(
            key.into(),
            Entry {
                value: value.into(),
                origin: origin.into(),
                line,
            },
        );
        Ok(())
    }

    /// Applies a `key=value` override from the command line.
    pub fn set(&mut self, assignment: &str, position: usize) -> Result<(), ConfigError> {
        let origin = "--set";
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(ConfigError::Syntax {
                origin: origin.into(),
                line: position,
                message: format!("expected key=value, found `{assignment}`"),
            });
        };
        self.entries.remove(key.trim());
        self.insert(key.trim(), value.trim(), origin, position)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// All pairs in key order, for provenance output.
    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.value.as_str()))
    }

    fn number(&self, key: &'static str) -> Result<Option<f64>, ConfigError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| invalid(key, format!("`{v}` is not a finite number")))
            })
            .transpose()
    }

    fn required(&self, key: &'static str) -> Result<f64, ConfigError> {
        self.number(key)?.ok_or(ConfigError::Missing(key))
    }

    fn positive(&self, key: &'static str) -> Result<f64, ConfigError> {
        let v = self.required(key)?;
        if v <= 0.0 {
            return Err(invalid(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn count(&self, key: &'static str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| invalid(key, format!("`{v}` is not a non-negative integer"))),
        }
    }
}

fn invalid(key: &str, message: String) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        message,
    }
}

/// Frame in which the initial Gaussian is specified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketFrame {
    /// Gaussian in x on the initial well, no extra phase.
    Lab,
    /// Gaussian in y, mapped to the lab with the gauge phase at t = 0.
    Comoving,
}

/// Initial Gaussian, in units of the initial well width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
    /// Carrier wavenumber times the initial width.
    pub wavenumber: f64,
    pub frame: PacketFrame,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub trajectory: WallTrajectory,
    pub packet: PacketSpec,
    pub solver: SolverConfig,
    pub t_max: Option<f64>,
    pub n_t: usize,
    pub output: PathBuf,
    pub raw: RawConfig,
}

impl RunConfig {
    /// Validates `raw`. `units_flag` is the `--units` value, if given.
    pub fn from_raw(raw: RawConfig, units_flag: Option<UnitSystem>) -> Result<Self, ConfigError> {
        let declared = raw
            .get("units")
            .map(|u| u.parse::<UnitSystem>().map_err(|e| invalid("units", e.to_string())))
            .transpose()?;
        let units = match (declared, units_flag) {
            (Some(c), Some(f)) if c != f => {
                return Err(ConfigError::UnitsConflict {
                    config: c.name().into(),
                    flag: f.name().into(),
                })
            }
            (Some(c), _) => c,
            (None, Some(f)) => f,
            (None, None) => UnitSystem::Natural,
        };
        let params = match raw.number("mass")? {
            Some(m) => PhysicalParams::with_mass(units, m).map_err(|e| invalid("mass", e.to_string()))?,
            None => PhysicalParams::preset(units),
        };

        let trajectory = parse_trajectory(&raw)?;
        let packet = PacketSpec {
            center: raw.number("packet_center")?.unwrap_or(0.3),
            width: raw.number("packet_width")?.unwrap_or(0.04),
            wavenumber: raw.number("packet_wavenumber")?.unwrap_or(0.0),
            frame: match raw.get("packet_frame").unwrap_or("lab") {
                "lab" => PacketFrame::Lab,
                "comoving" => PacketFrame::Comoving,
                other => {
                    return Err(invalid(
                        "packet_frame",
                        format!("expected lab or comoving, got `{other}`"),
                    ))
                }
            },
        };
        if !(0.0 < packet.center && packet.center < 1.0) {
            return Err(invalid(
                "packet_center",
                format!("must lie in (0, 1), got {}", packet.center),
            ));
        }
        if packet.width <= 0.0 {
            return Err(invalid(
                "packet_width",
                format!("must be positive, got {}", packet.width),
            ));
        }

        let defaults = SolverConfig::default();
        let solver = SolverConfig::new(
            raw.count("n_points", defaults.n_points)?,
            raw.count("steps_per_unit", defaults.steps_per_unit)?,
        )
        .map_err(|e| invalid("n_points", e.to_string()))?;
        let t_max = match raw.number("t_max")? {
            Some(t) if t <= 0.0 => return Err(invalid("t_max", format!("must be positive, got {t}"))),
            other => other,
        };
        let n_t = raw.count("n_t", 129)?;
        if n_t < 2 {
            return Err(invalid("n_t", format!("need at least 2 time slices, got {n_t}")));
        }
        let output = PathBuf::from(raw.get("output").unwrap_or("carpet"));
        Ok(RunConfig {
            params,
            trajectory,
            packet,
            solver,
            t_max,
            n_t,
            output,
            raw,
        })
    }

    /// The initial lab-frame wavefunction on the well at t = 0.
    pub fn initial_state(&self) -> movingwell::Result<ComplexField> {
        let lab = well_grid(&self.trajectory, 0.0, self.solver.n_points)?;
        let w0 = lab.hi() - lab.lo();
        let p = &self.packet;
        match p.frame {
            PacketFrame::Lab => gaussian_packet(
                lab.lo() + p.center * w0,
                p.width * w0,
                self.params.hbar() * p.wavenumber / w0,
                &lab,
                Frame::LabX,
                &self.params,
            ),
            PacketFrame::Comoving => {
                let unit = SpatialGrid::unit(self.solver.n_points)?;
                let phi0 = gaussian_packet(
                    p.center,
                    p.width,
                    self.params.hbar() * p.wavenumber,
                    &unit,
                    Frame::ComovingY,
                    &self.params,
                )?;
                comoving_inverse(&phi0, &self.trajectory, 0.0, &self.params)
            }
        }
    }
}

fn parse_trajectory(raw: &RawConfig) -> Result<WallTrajectory, ConfigError> {
    let kind = raw.get("trajectory").ok_or(ConfigError::Missing("trajectory"))?;
    let built = match kind {
        "fixed" => WallTrajectory::fixed(raw.positive("w0")?),
        "linear" => WallTrajectory::linear(
            raw.positive("w0")?,
            raw.number("v1")?.unwrap_or(0.0),
            raw.number("v2")?.unwrap_or(0.0),
        ),
        "monomial" => WallTrajectory::monomial(raw.positive("w0")?, raw.positive("t_scale")?, raw.required("n")?),
        "sinusoidal" => {
            WallTrajectory::sinusoidal(raw.positive("w0")?, raw.required("amplitude")?, raw.required("omega")?)
        }
        "tabulated" => {
            let name = raw.get("table").ok_or(ConfigError::Missing("table"))?;
            let path = match &raw.base_dir {
                Some(dir) if Path::new(name).is_relative() => dir.join(name),
                _ => PathBuf::from(name),
            };
            WallTrajectory::tabulated(&read_table(&path)?)
        }
        other => {
            return Err(invalid(
                "trajectory",
                format!("expected fixed, linear, monomial, sinusoidal or tabulated, got `{other}`"),
            ))
        }
    };
    built.map_err(|e| invalid("trajectory", e.to_string()))
}

/// Reads `t,w1,w2` rows; a non-numeric first row is taken as a header.
fn read_table(path: &Path) -> Result<Vec<(f64, f64, f64)>, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let origin = path.display().to_string();
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed {
            Some(v) if v.len() == 3 => rows.push((v[0], v[1], v[2])),
            None if rows.is_empty() && line_no == 1 => continue,
            _ => {
                return Err(ConfigError::Syntax {
                    origin,
                    line: line_no,
                    message: format!("expected three numbers t,w1,w2, found `{content}`"),
                })
            }
        }
    }
    Ok(rows)
}
