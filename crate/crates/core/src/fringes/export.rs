use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::fringes::pattern::{coordinate, FringePattern};
use crate::fringes::ramsey::RamseyScan;
use crate::pgm::{quantize, write_pgm16};

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn enc(e: impl std::fmt::Display) -> Error {
    Error::Encoding(e.to_string())
}

#[derive(Serialize)]
struct PatternRow {
    position_nm: f64,
    value: f64,
}

#[derive(Serialize)]
struct ScanRow {
    delta_hz: f64,
    value: f64,
}

/// `position_nm,value` for the single row of a line pattern.
pub fn write_pattern_csv<W: Write>(pattern: &FringePattern, out: W) -> Result<()> {
    if pattern.is_plane() {
        return Err(Error::config("plane patterns are exported as PGM"));
    }
    let mut w = writer(out);
    let row = pattern.data.row(0);
    let n = row.len();
    for (j, v) in row.iter().enumerate() {
        w.serialize(PatternRow {
            position_nm: coordinate(j, n, pattern.pitch) * 1e9,
            value: *v,
        })
        .map_err(enc)?;
    }
    w.flush().map_err(enc)
}

/// `delta_hz,value` with value = P_c.
pub fn write_ramsey_csv<W: Write>(scan: &RamseyScan, out: W) -> Result<()> {
    let mut w = writer(out);
    for p in &scan.points {
        w.serialize(ScanRow {
            delta_hz: p.delta_hz(),
            value: p.population_c,
        })
        .map_err(enc)?;
    }
    w.flush().map_err(enc)
}

/// 16-bit PGM of the pattern (peak intensity 1 maps to 65535).
pub fn write_pattern_pgm<W: Write>(pattern: &FringePattern, out: W) -> Result<()> {
    write_pgm16(&quantize(&pattern.data, 0.0, 1.0)?, out)
}

/// Sidecar describing the PGM axes and pitch.
pub fn write_pattern_sidecar<W: Write>(pattern: &FringePattern, mut out: W) -> Result<()> {
    let (rows, cols) = pattern.data.dim();
    let labels: Vec<String> = pattern.axes.iter().map(|a| a.to_string()).collect();
    let (row_axis, col_axis) = match labels.as_slice() {
        [c] => ("none".to_string(), c.clone()),
        [r, c] => (r.clone(), c.clone()),
        _ => return Err(Error::Encoding("pattern has no axes".into())),
    };
    let text = format!(
        "pitch_nm = {}\nrows = {rows}\ncols = {cols}\nrow_axis = {row_axis}\ncol_axis = {col_axis}\norigin = centre sample (rows/2, cols/2)\nscale = 65535 at peak intensity\n",
        pattern.pitch * 1e9
    );
    out.write_all(text.as_bytes()).map_err(enc)
}
