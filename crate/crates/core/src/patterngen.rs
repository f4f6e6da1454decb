//! Arbitrary patterns through an arccos phase mask.
//!
//! A target `f ∈ [−1, 1]` is encoded as `g = arccos f`, imprinted as a phase
//! on one of two equally populated internal states, and read out by mixing
//! the states: the output intensity is `½(1 + cos g)`, so `2I − 1`
//! reproduces `f`.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Tolerance for treating the two components as equally populated.
pub const SPLIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetPattern {
    pub values: Array2<f64>,
    /// Pixel pitch (m).
    pub pitch: f64,
}

impl TargetPattern {
    /// Wraps `values`, which must already lie in [−1, 1].
    pub fn new(values: Array2<f64>, pitch: f64) -> Result<Self> {
        if !(pitch > 0.0 && pitch.is_finite()) {
            return Err(Error::config("pixel pitch must be positive"));
        }
        if values.is_empty() {
            return Err(Error::config("target pattern is empty"));
        }
        if let Some(((i, j), v)) = values
            .indexed_iter()
            .find(|(_, v)| !(-1.0..=1.0).contains(*v))
        {
            return Err(Error::Normalization(format!(
                "f[{i}, {j}] = {v} is outside [−1, 1]"
            )));
        }
        Ok(TargetPattern { values, pitch })
    }

    /// Maps image intensities `u ∈ [0, 1]` to `f = 2u − 1`.
    pub fn from_unit(image: &Array2<f64>, pitch: f64) -> Result<Self> {
        Self::new(image.mapv(|u| 2.0 * u - 1.0), pitch)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMask {
    /// g = arccos f (rad), in [0, π].
    pub g: Array2<f64>,
    /// Input pixel pitch (m).
    pub pitch: f64,
    /// Ideal demagnification of the mask image onto the atoms.
    pub magnification: f64,
}

impl PhaseMask {
    pub fn with_magnification(mut self, m: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::config("magnification must be positive"));
        }
        self.magnification = m;
        Ok(self)
    }

    /// Pixel pitch at the atoms.
    pub fn output_pitch(&self) -> f64 {
        self.pitch / self.magnification
    }
}

pub fn encode(f: &TargetPattern) -> PhaseMask {
    PhaseMask {
        g: f.values.mapv(f64::acos),
        pitch: f.pitch,
        magnification: 1.0,
    }
}

/// Two internal-state components sampled on the pattern grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoComponent {
    pub psi1: Array2<Complex64>,
    pub psi2: Array2<Complex64>,
}

impl TwoComponent {
    /// Both components at amplitude 1/√2 everywhere.
    pub fn equal_split(shape: (usize, usize)) -> Self {
        let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
        TwoComponent {
            psi1: Array2::from_elem(shape, a),
            psi2: Array2::from_elem(shape, a),
        }
    }
}

/// Multiplies `psi2` by `exp(i·κt·g)`; `psi1` is untouched.
pub fn imprint(state: &TwoComponent, mask: &PhaseMask, kappa_t: f64) -> Result<TwoComponent> {
    if state.psi2.dim() != mask.g.dim() || state.psi1.dim() != mask.g.dim() {
        return Err(Error::config("state and mask grids differ in shape"));
    }
    if !kappa_t.is_finite() {
        return Err(Error::config("interaction scale must be finite"));
    }
    let mut psi2 = state.psi2.clone();
    Zip::from(&mut psi2)
        .and(&mask.g)
        .for_each(|p, &g| *p *= Complex64::from_polar(1.0, kappa_t * g));
    Ok(TwoComponent {
        psi1: state.psi1.clone(),
        psi2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interference {
    /// I = |ψ₁ + ψ₂|²/2.
    pub intensity: Array2<f64>,
    /// f̂ = 2I − 1.
    pub recovered: Array2<f64>,
    /// Per-pixel two-wave contrast 2|ψ₁ψ₂|/(|ψ₁|² + |ψ₂|²).
    pub contrast: Array2<f64>,
    pub warning: Option<String>,
}

/// Mixes the two components with a π/2 pulse and reads the output port.
pub fn interfere(state: &TwoComponent) -> Interference {
    let intensity = Zip::from(&state.psi1)
        .and(&state.psi2)
        .map_collect(|a, b| 0.5 * (a + b).norm_sqr());
    let contrast = Zip::from(&state.psi1).and(&state.psi2).map_collect(|a, b| {
        let (p, q) = (a.norm_sqr(), b.norm_sqr());
        if p + q > 0.0 {
            2.0 * (p * q).sqrt() / (p + q)
        } else {
            0.0
        }
    });
    let unequal = Zip::from(&state.psi1)
        .and(&state.psi2)
        .fold(0usize, |n, a, b| {
            n + usize::from(
                (a.norm() - FRAC_1_SQRT_2).abs() > SPLIT_TOLERANCE
                    || (b.norm() - FRAC_1_SQRT_2).abs() > SPLIT_TOLERANCE,
            )
        });
    let warning = (unequal > 0).then(|| {
        let worst = contrast.iter().copied().fold(1.0, f64::min);
        format!("{unequal} pixel(s) are not an equal split; contrast drops to {worst:.4}")
    });
    Interference {
        recovered: intensity.mapv(|i| 2.0 * i - 1.0),
        intensity,
        contrast,
        warning,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundtripReport {
    pub max_error: f64,
    pub rms_error: f64,
    pub rows: usize,
    pub cols: usize,
    pub input_pitch_m: f64,
    pub output_pitch_m: f64,
}

/// encode → imprint (ideal, κt = 1) → interfere, compared with `f`.
pub fn roundtrip(f: &TargetPattern, magnification: f64) -> Result<(Array2<f64>, RoundtripReport)> {
    let mask = encode(f).with_magnification(magnification)?;
    let state = imprint(&TwoComponent::equal_split(f.values.dim()), &mask, 1.0)?;
    let out = interfere(&state);
    let diff = &out.recovered - &f.values;
    let max_error = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let rms_error = (diff.iter().map(|d| d * d).sum::<f64>() / diff.len() as f64).sqrt();
    let (rows, cols) = f.values.dim();
    let report = RoundtripReport {
        max_error,
        rms_error,
        rows,
        cols,
        input_pitch_m: f.pitch,
        output_pitch_m: mask.output_pitch(),
    };
    Ok((out.recovered, report))
}

/// Binary gear silhouette in [0, 1]: `teeth` teeth around a hub with a bore.
pub fn gear_silhouette(size: usize, teeth: usize) -> Array2<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let outer = 0.45 * size as f64;
    let root = 0.36 * size as f64;
    let bore = 0.12 * size as f64;
    Array2::from_shape_fn((size, size), |(i, j)| {
        let (y, x) = (i as f64 - c, j as f64 - c);
        let r = x.hypot(y);
        let phase = (y.atan2(x) * teeth as f64 / std::f64::consts::TAU).rem_euclid(1.0);
        let rim = if phase < 0.5 { outer } else { root };
        if r > bore && r <= rim {
            1.0
        } else {
            0.0
        }
    })
}
