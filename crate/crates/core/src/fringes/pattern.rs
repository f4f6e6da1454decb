use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::interferometer::arms::ArmTrack;
use crate::quantum::level::{Axis, Level};

/// One plane-wave component of the recombined cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeSource {
    pub amplitude: Complex64,
    pub level: Level,
    pub nz: i32,
    pub nx: i32,
    /// Extra phase on top of `arg(amplitude)` (rad).
    #[serde(default)]
    pub phase: f64,
}

impl From<&ArmTrack> for FringeSource {
    fn from(t: &ArmTrack) -> Self {
        FringeSource {
            amplitude: t.amplitude,
            level: t.level,
            nz: t.nz,
            nx: t.nx,
            phase: 0.0,
        }
    }
}

impl FringeSource {
    pub fn new(amplitude: f64, level: Level, nz: i32, nx: i32) -> Self {
        FringeSource {
            amplitude: Complex64::new(amplitude, 0.0),
            level,
            nz,
            nx,
            phase: 0.0,
        }
    }

    /// Sources from the tracks of the most populated arm.
    pub fn from_tracks(tracks: &[ArmTrack]) -> Vec<FringeSource> {
        let mut by_id = std::collections::BTreeMap::<usize, f64>::new();
        for t in tracks {
            *by_id.entry(t.id).or_default() += t.population;
        }
        let Some((&main, _)) = by_id.iter().max_by(|a, b| a.1.total_cmp(b.1)) else {
            return Vec::new();
        };
        tracks
            .iter()
            .filter(|t| t.id == main)
            .map(FringeSource::from)
            .collect()
    }
}

/// Gaussian coherence envelope: intensity falls to 1/e at `length` from the centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoherenceEnvelope {
    pub length: f64,
}

impl Default for CoherenceEnvelope {
    fn default() -> Self {
        CoherenceEnvelope { length: 300e-6 }
    }
}

impl CoherenceEnvelope {
    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::config("coherence length must be positive"));
        }
        Ok(())
    }

    pub fn factor(&self, r2: f64) -> f64 {
        (-r2 / (self.length * self.length)).exp()
    }

    /// Fringe periods of `spacing` that fit in one coherence length.
    pub fn periods(&self, spacing: f64) -> f64 {
        self.length / spacing
    }
}

/// Sampling grid, centred on the recombination point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Line {
        axis: Axis,
        samples: usize,
        pitch_nm: f64,
    },
    /// Rows along z, columns along x.
    Plane {
        samples_z: usize,
        samples_x: usize,
        pitch_nm: f64,
    },
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Line {
            axis: Axis::Z,
            samples: 4096,
            pitch_nm: 0.25,
        }
    }
}

impl GridSpec {
    pub fn plane() -> Self {
        GridSpec::Plane {
            samples_z: 1024,
            samples_x: 1024,
            pitch_nm: 0.25,
        }
    }

    pub fn pitch(&self) -> f64 {
        match *self {
            GridSpec::Line { pitch_nm, .. } | GridSpec::Plane { pitch_nm, .. } => pitch_nm * 1e-9,
        }
    }

    fn shape(&self) -> (usize, usize) {
        match *self {
            GridSpec::Line { samples, .. } => (1, samples),
            GridSpec::Plane {
                samples_z,
                samples_x,
                ..
            } => (samples_z, samples_x),
        }
    }

    fn axes(&self) -> Vec<Axis> {
        match *self {
            GridSpec::Line { axis, .. } => vec![axis],
            GridSpec::Plane { .. } => vec![Axis::Z, Axis::X],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (r, c) = self.shape();
        if r < 1 || c < 2 || (r > 1 && r < 2) {
            return Err(Error::config("grids need at least two samples per axis"));
        }
        if r.saturating_mul(c) > 1 << 26 {
            return Err(Error::config("grid is larger than 2^26 samples"));
        }
        if !(self.pitch() > 0.0 && self.pitch().is_finite()) {
            return Err(Error::config("grid pitch must be positive"));
        }
        Ok(())
    }
}

/// Sampled intensity, normalized to peak 1.
///
/// A line pattern has one row; a plane pattern has rows along `axes[0]`
/// and columns along `axes[1]`. Sample `j` of an axis with `n` samples sits
/// at `(j − n/2)·pitch`.
#[derive(Debug, Clone, PartialEq)]
pub struct FringePattern {
    pub data: Array2<f64>,
    pub pitch: f64,
    pub axes: Vec<Axis>,
    pub envelope: Option<CoherenceEnvelope>,
}

pub(crate) fn coordinate(j: usize, n: usize, pitch: f64) -> f64 {
    (j as f64 - (n / 2) as f64) * pitch
}

impl FringePattern {
    pub fn is_plane(&self) -> bool {
        self.axes.len() == 2
    }

    /// Samples along `axis`, or `None` if the pattern does not span it.
    pub fn samples_along(&self, axis: Axis) -> Option<usize> {
        let (rows, cols) = self.data.dim();
        match self.axes.as_slice() {
            [a] if *a == axis => Some(cols),
            [r, _] if *r == axis => Some(rows),
            [_, c] if *c == axis => Some(cols),
            _ => None,
        }
    }

    /// `(row, column)` coordinates of sample `(i, j)` in metres.
    pub fn position(&self, i: usize, j: usize) -> (f64, f64) {
        let (rows, cols) = self.data.dim();
        (
            coordinate(i, rows, self.pitch),
            coordinate(j, cols, self.pitch),
        )
    }

    /// Intensity with the coherence envelope divided out.
    pub fn carrier(&self) -> Array2<f64> {
        let Some(env) = self.envelope else {
            return self.data.clone();
        };
        let mut out = self.data.clone();
        for ((i, j), v) in out.indexed_iter_mut() {
            let (a, b) = self.position(i, j);
            let r2 = if self.is_plane() {
                a * a + b * b
            } else {
                b * b
            };
            *v /= env.factor(r2);
        }
        out
    }
}

/// |Σ a_j e^{i(k n_j·r + φ_j)}|² on `grid`, times the envelope, scaled to peak 1.
///
/// All sources must share one internal level; the lattice wavenumber sets k.
pub fn synthesize(
    sources: &[FringeSource],
    grid: &GridSpec,
    atom: &AtomParams,
    envelope: Option<CoherenceEnvelope>,
) -> Result<FringePattern> {
    grid.validate()?;
    if let Some(env) = envelope {
        env.validate()?;
    }
    let first = sources
        .first()
        .ok_or_else(|| Error::physics("no arms to interfere"))?;
    if let Some(odd) = sources.iter().find(|s| s.level != first.level) {
        return Err(Error::physics(format!(
            "arms in levels {} and {} are distinguishable and cannot interfere",
            first.level, odd.level
        )));
    }
    let k = atom.wavenumber();
    let (rows, cols) = grid.shape();
    let axes = grid.axes();
    let pitch = grid.pitch();
    let amps: Vec<Complex64> = sources
        .iter()
        .map(|s| s.amplitude * Complex64::from_polar(1.0, s.phase))
        .collect();
    let row_values: Vec<Vec<f64>> = (0..rows)
        .into_par_iter()
        .map(|i| {
            (0..cols)
                .map(|j| {
                    let (u, v) = (coordinate(i, rows, pitch), coordinate(j, cols, pitch));
                    let (z, x) = match axes.as_slice() {
                        [Axis::Z] => (v, 0.0),
                        [Axis::X] => (0.0, v),
                        _ => (u, v),
                    };
                    let field: Complex64 = sources
                        .iter()
                        .zip(&amps)
                        .map(|(s, a)| {
                            a * Complex64::from_polar(1.0, k * (s.nz as f64 * z + s.nx as f64 * x))
                        })
                        .sum();
                    let env = envelope.map_or(1.0, |e| e.factor(z * z + x * x));
                    field.norm_sqr() * env
                })
                .collect()
        })
        .collect();
    let flat: Vec<f64> = row_values.into_iter().flatten().collect();
    let peak = flat.iter().copied().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::physics("arms cancel everywhere on the grid"));
    }
    let data = Array2::from_shape_vec((rows, cols), flat.into_iter().map(|v| v / peak).collect())
        .map_err(|e| Error::Encoding(e.to_string()))?;
    Ok(FringePattern {
        data,
        pitch,
        axes,
        envelope,
    })
}
