//! Field snapshot files: one JSON header line followed by `n²` little-endian
//! `f64` collocation values in row-major order.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::field::SpectralField;
use super::grid::{make_grid, Grid};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotHeader {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub name: String,
    pub t: f64,
}

pub fn write_snapshot(mut out: impl Write, field: &SpectralField, name: &str, t: f64) -> Result<()> {
    let header = SnapshotHeader {
        n: field.grid().n(),
        length: field.grid().length(),
        name: name.to_string(),
        t,
    };
    let line = serde_json::to_string(&header).map_err(|e| Error::Snapshot(e.to_string()))?;
    out.write_all(line.as_bytes())?;
    out.write_all(b"\n")?;
    let values = field.to_values();
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for v in values {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&bytes)?;
    Ok(())
}

pub fn save_snapshot(path: &Path, field: &SpectralField, name: &str, t: f64) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    write_snapshot(&mut w, field, name, t)?;
    w.flush()?;
    Ok(())
}

/// Reads a snapshot, building a fresh grid from the header.
pub fn read_snapshot(input: impl Read) -> Result<(SnapshotHeader, SpectralField)> {
    let mut reader = BufReader::new(input);
    let mut line = String::new();
    reader.read_line(&mut line)?;
    let header: SnapshotHeader =
        serde_json::from_str(line.trim_end()).map_err(|e| Error::Snapshot(e.to_string()))?;
    let grid = make_grid(header.n, header.length)?;
    let field = read_values(&mut reader, &grid)?;
    Ok((header, field))
}

pub fn load_snapshot(path: &Path) -> Result<(SnapshotHeader, SpectralField)> {
    read_snapshot(std::fs::File::open(path)?)
}

fn read_values(reader: &mut impl Read, grid: &Arc<Grid>) -> Result<SpectralField> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != grid.len() * 8 {
        return Err(Error::Snapshot(format!(
            "expected {} payload bytes, found {}",
            grid.len() * 8,
            bytes.len()
        )));
    }
    let values: Vec<f64> = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    SpectralField::from_values(grid, &values)
}
