use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::interferometer::plans::RamseyPrefix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RamseyPoint {
    /// Two-photon detuning Δ (rad/s).
    pub delta: f64,
    pub population_c: f64,
}

impl RamseyPoint {
    pub fn delta_hz(&self) -> f64 {
        self.delta / TAU
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamseyScan {
    /// Split-to-recombination time of the plan (s).
    pub tau: f64,
    pub points: Vec<RamseyPoint>,
    /// Interpolated P_c minima, in Δ/2π (Hz).
    pub minima_hz: Vec<f64>,
    /// Mean spacing of neighbouring minima (Hz).
    pub period_hz: f64,
    /// Minimum closest to Δ = 0 (Hz).
    pub central_minimum_hz: f64,
    /// Half the distance between the minima on either side of the central one (Hz).
    pub central_width_hz: f64,
    /// Measured period / 2π, the 1/2πτ linewidth scale (Hz).
    pub width_scale_hz: f64,
}

/// Evenly spaced detunings (rad/s) from `lo_hz` to `hi_hz` in Δ/2π.
pub fn delta_grid(lo_hz: f64, hi_hz: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(hi_hz > lo_hz) {
        return Err(Error::config(
            "a detuning grid needs two or more increasing points",
        ));
    }
    let step = (hi_hz - lo_hz) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| TAU * (lo_hz + step * i as f64))
        .collect())
}

/// Local minima of `p(f)` refined by a parabola through three points.
fn minima(f: &[f64], p: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..p.len().saturating_sub(1) {
        if p[i] <= p[i - 1] && p[i] < p[i + 1] && p[i] < 0.5 {
            let (l, c, r) = (p[i - 1], p[i], p[i + 1]);
            let h = f[i + 1] - f[i];
            let denom = l - 2.0 * c + r;
            let offset = if denom > 0.0 {
                0.5 * (l - r) / denom
            } else {
                0.0
            };
            out.push(f[i] + offset * h);
        }
    }
    out
}

/// P_c over `deltas` (rad/s, increasing), evaluated in parallel from one
/// shared prefix, with the fringe period and width read off the minima.
pub fn ramsey_scan(prefix: &RamseyPrefix, deltas: &[f64]) -> Result<RamseyScan> {
    let tau = prefix.tau();
    let nominal = 1.0 / tau;
    if deltas.windows(2).any(|w| !(w[1] > w[0])) || deltas.len() < 2 {
        return Err(Error::config("detunings must be strictly increasing"));
    }
    let span = (deltas[deltas.len() - 1] - deltas[0]) / TAU;
    if span < 3.0 * nominal {
        return Err(Error::config(format!(
            "scan spans {span:.3} Hz; at least three fringe periods ({:.3} Hz) are needed",
            3.0 * nominal
        )));
    }
    let density = (deltas.len() - 1) as f64 / (span / nominal);
    if density < 20.0 {
        return Err(Error::config(format!(
            "scan has {density:.1} points per fringe period; at least 20 are needed"
        )));
    }
    let points: Vec<RamseyPoint> = deltas
        .par_iter()
        .map(|&delta| {
            prefix.population_c(delta).map(|population_c| RamseyPoint {
                delta,
                population_c,
            })
        })
        .collect::<Result<_>>()?;
    let f: Vec<f64> = points.iter().map(RamseyPoint::delta_hz).collect();
    let p: Vec<f64> = points.iter().map(|q| q.population_c).collect();
    let minima_hz = minima(&f, &p);
    if minima_hz.len() < 3 {
        return Err(Error::NoFringe(format!(
            "found {} P_c minima; need three",
            minima_hz.len()
        )));
    }
    let period_hz = (minima_hz[minima_hz.len() - 1] - minima_hz[0]) / (minima_hz.len() - 1) as f64;
    let centre = (0..minima_hz.len())
        .min_by(|&a, &b| minima_hz[a].abs().total_cmp(&minima_hz[b].abs()))
        .unwrap_or(0);
    if centre == 0 || centre + 1 == minima_hz.len() {
        return Err(Error::NoFringe(
            "the central minimum is not bracketed by two others".into(),
        ));
    }
    let central_width_hz = 0.5 * (minima_hz[centre + 1] - minima_hz[centre - 1]);
    Ok(RamseyScan {
        tau,
        points,
        central_minimum_hz: minima_hz[centre],
        minima_hz,
        period_hz,
        central_width_hz,
        width_scale_hz: period_hz / TAU,
    })
}
