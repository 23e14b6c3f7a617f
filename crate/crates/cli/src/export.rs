//! Carpet and field file formats.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use movingwell::{CarpetRecord, ComplexField, Frame, SpatialGrid};
use num_complex::Complex64;

pub const MAGIC: &[u8; 4] = b"QWCP";
pub const VERSION: u32 = 1;

/// Writes `t,x,re,im,density` rows for every slice.
pub fn write_carpet_csv(record: &CarpetRecord, path: &Path) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "t,x,re,im,density")?;
    for (t, slice) in record.times.iter().zip(&record.slices) {
        for (x, v) in slice.grid().points().zip(slice.values()) {
            writeln!(
                out,
                "{t:.16e},{x:.16e},{:.16e},{:.16e},{:.16e}",
                v.re,
                v.im,
                v.norm_sqr()
            )?;
        }
    }
    out.flush()
}

/// Writes the binary density carpet: magic, version, nx, nt, then nt * nx
/// little-endian f64 densities, time-major.
pub fn write_carpet_binary(record: &CarpetRecord, path: &Path) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(record.n_points() as u64).to_le_bytes())?;
    out.write_all(&(record.n_times() as u64).to_le_bytes())?;
    for slice in &record.slices {
        for d in slice.density() {
            out.write_all(&d.to_le_bytes())?;
        }
    }
    out.flush()
}

/// Decoded binary carpet.
#[cfg(test)]
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryCarpet {
    pub version: u32,
    pub nx: usize,
    pub nt: usize,
    pub densities: Vec<f64>,
}

#[cfg(test)]
pub fn read_carpet_binary(path: &Path) -> io::Result<BinaryCarpet> {
    let mut bytes = Vec::new();
    std::io::Read::read_to_end(&mut File::open(path)?, &mut bytes)?;
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    if bytes.len() < 24 || &bytes[..4] != MAGIC {
        return Err(bad("not a QWCP carpet"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    let nx = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let nt = u64::from_le_bytes(bytes[16..24].try_into().expect("8 bytes")) as usize;
    let body = &bytes[24..];
    if body.len() != nx * nt * 8 {
        return Err(bad("payload length does not match header"));
    }
    let densities = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(BinaryCarpet {
        version,
        nx,
        nt,
        densities,
    })
}

/// Text sidecar: format, sizes, per-slice grid extents and the config echo.
pub fn write_meta<'a>(
    record: &CarpetRecord,
    config: impl Iterator<Item = (&'a str, &'a str)>,
    path: &Path,
) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "format = QWCP")?;
    writeln!(out, "version = {VERSION}")?;
    writeln!(out, "nx = {}", record.n_points())?;
    writeln!(out, "nt = {}", record.n_times())?;
    writeln!(out, "frame = {}", record.frame.name())?;
    for (k, v) in &record.metadata {
        writeln!(out, "meta.{k} = {v}")?;
    }
    for (k, v) in config {
        writeln!(out, "config.{k} = {v}")?;
    }
    writeln!(out, "# slice index, t, x_lo, x_hi")?;
    for (i, (t, s)) in record.times.iter().zip(&record.slices).enumerate() {
        writeln!(
            out,
            "slice = {i},{t:.16e},{:.16e},{:.16e}",
            s.grid().lo(),
            s.grid().hi()
        )?;
    }
    out.flush()
}

/// Writes a single field as `x,re,im,density` (lab) or `y,re,im,density` (comoving).
pub fn write_field(field: &ComplexField, path: &Path) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let coord = match field.frame() {
        Frame::ComovingY => "y",
        _ => "x",
    };
    writeln!(out, "{coord},re,im,density")?;
    for (x, v) in field.grid().points().zip(field.values()) {
        writeln!(out, "{x:.16e},{:.16e},{:.16e},{:.16e}", v.re, v.im, v.norm_sqr())?;
    }
    out.flush()
}

/// Reads a field written by [`write_field`]. Nodes must be uniformly spaced.
pub fn read_field(path: &Path) -> io::Result<ComplexField> {
    let reader = BufReader::new(File::open(path)?);
    let bad = |line: usize, msg: String| io::Error::new(io::ErrorKind::InvalidData, format!("line {line}: {msg}"));
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| bad(1, "empty field file".into()))??;
    let frame = match header.split(',').next().map(str::trim) {
        Some("x") => Frame::LabX,
        Some("y") => Frame::ComovingY,
        _ => return Err(bad(1, format!("unrecognised header `{header}`"))),
    };
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| bad(idx + 2, e.to_string()))?;
        if cols.len() < 3 {
            return Err(bad(idx + 2, "expected at least x,re,im".into()));
        }
        xs.push(cols[0]);
        values.push(Complex64::new(cols[1], cols[2]));
    }
    if xs.len() < 2 {
        return Err(bad(2, "field needs at least two nodes".into()));
    }
    let grid = SpatialGrid::new(xs[0], xs[xs.len() - 1], xs.len())
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
    let h = grid.spacing();
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.point(i)).abs() > 1e-9 * h {
            return Err(bad(i + 2, format!("node {x:e} is not on a uniform grid")));
        }
    }
    ComplexField::new(grid, values, frame).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
}
