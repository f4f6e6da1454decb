use serde::Serialize;
use std::io::Write;

use crate::error::{Error, Result};
use crate::interferometer::arms::ArmTrack;
use crate::quantum::level::Level;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    QuantumSequence,
    Drift,
    SelectivePulse,
    Measurement,
}

/// Population and mean momentum of one internal level, summed over arms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelSummary {
    pub level: Level,
    pub population: f64,
    pub mean_nz: f64,
    pub mean_nx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageRecord {
    pub name: String,
    pub kind: StageKind,
    pub t_start: f64,
    pub t_end: f64,
    pub levels: Vec<LevelSummary>,
    /// Spread of arm centroids (max − min) along z and x (m).
    pub sep_z: f64,
    pub sep_x: f64,
    /// Gravitational drop since t = 0 (m).
    pub drop_y: f64,
    pub untracked: f64,
    pub arms: Vec<ArmTrack>,
}

impl StageRecord {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    pub fn level(&self, level: Level) -> Option<&LevelSummary> {
        self.levels.iter().find(|l| l.level == level)
    }

    pub fn population(&self, level: Level) -> f64 {
        self.level(level).map_or(0.0, |l| l.population)
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    stage: &'a str,
    t_start: f64,
    t_end: f64,
    level: &'a str,
    population: f64,
    mean_nz: f64,
    mean_nx: f64,
    sep_z_m: f64,
    sep_x_m: f64,
    drop_y_m: f64,
}

/// Writes one row per (stage, occupied level).
pub fn write_stage_csv<W: Write>(records: &[StageRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        for l in &r.levels {
            w.serialize(CsvRow {
                stage: &r.name,
                t_start: r.t_start,
                t_end: r.t_end,
                level: l.level.label(),
                population: l.population,
                mean_nz: l.mean_nz,
                mean_nx: l.mean_nx,
                sep_z_m: r.sep_z,
                sep_x_m: r.sep_x,
                drop_y_m: r.drop_y,
            })
            .map_err(|e| Error::Encoding(e.to_string()))?;
        }
    }
    w.flush().map_err(|e| Error::Encoding(e.to_string()))?;
    Ok(())
}
