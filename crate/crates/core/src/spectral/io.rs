//! Field snapshots and norm tables on disk.
//!
//! A snapshot is a flat little-endian `f64` file holding `components`
//! real arrays back to back in grid order, next to a JSON sidecar
//! `{dim, points, lengths, components, time}`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;
use crate::spectral::field::ScalarField;
use crate::spectral::grid::SpectralGrid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub dim: usize,
    pub points: Vec<usize>,
    pub lengths: Vec<f64>,
    pub components: usize,
    pub time: f64,
}

/// Path of the JSON sidecar for a binary snapshot path.
pub fn sidecar_path(bin: &Path) -> PathBuf {
    let mut p = bin.as_os_str().to_owned();
    p.push(".json");
    PathBuf::from(p)
}

/// Writes real fields (all on one grid) as a snapshot.
pub fn write_snapshot<T: Real>(path: &Path, fields: &[&ScalarField<T>], time: f64) -> Result<()> {
    let Some(first) = fields.first() else {
        return invalid("snapshot needs at least one field");
    };
    let grid = first.grid();
    if fields.iter().any(|f| f.grid() != grid) {
        return Err(crate::error::Error::GridMismatch);
    }
    let header = SnapshotHeader {
        dim: grid.dim(),
        points: grid.points().to_vec(),
        lengths: grid.lengths().iter().map(|l| l.as_f64()).collect(),
        components: fields.len(),
        time,
    };
    let mut w = BufWriter::new(File::create(path)?);
    for f in fields {
        for v in f.values() {
            w.write_all(&v.re.as_f64().to_le_bytes())?;
        }
    }
    w.flush()?;
    serde_json::to_writer_pretty(File::create(sidecar_path(path))?, &header)?;
    Ok(())
}

/// Reads a snapshot back into real fields on a freshly built grid.
pub fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Vec<ScalarField<f64>>)> {
    let header: SnapshotHeader = serde_json::from_reader(File::open(sidecar_path(path))?)?;
    if header.points.len() != header.dim || header.lengths.len() != header.dim {
        return invalid("snapshot sidecar is inconsistent");
    }
    let grid = SpectralGrid::new(&header.points, &header.lengths)?;
    let mut r = BufReader::new(File::open(path)?);
    let mut fields = Vec::with_capacity(header.components);
    let mut buf = [0u8; 8];
    for _ in 0..header.components {
        let mut vals = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            r.read_exact(&mut buf)?;
            vals.push(f64::from_le_bytes(buf));
        }
        fields.push(ScalarField::from_real(&grid, vals)?);
    }
    Ok((header, fields))
}

/// One row of a norm table: `(tag, s, q, r, value)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub tag: String,
    pub s: f64,
    pub q: f64,
    pub r: f64,
    pub value: f64,
}

pub fn write_norm_rows(path: &Path, rows: &[NormRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Two-column whitespace-separated plot data.
pub fn write_xy(path: &Path, xs: &[f64], ys: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (x, y) in xs.iter().zip(ys) {
        writeln!(w, "{x:.17e} {y:.17e}")?;
    }
    w.flush()?;
    Ok(())
}
