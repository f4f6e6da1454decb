use ndarray::Axis as NdAxis;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fringes::pattern::FringePattern;
use crate::quantum::level::Axis;

/// Dominant fringe period along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spacing {
    /// Period (m).
    pub period: f64,
    /// Change of the period over one frequency bin (m).
    pub bin_width: f64,
    /// Interpolated peak position in bins.
    pub peak_bin: f64,
    /// Peak power over the mean power of the other bins.
    pub peak_to_background: f64,
}

impl Spacing {
    /// True when `period` lies within one bin of this estimate.
    pub fn agrees_with(&self, period: f64) -> bool {
        (self.period - period).abs() <= self.bin_width
    }
}

const MIN_PERIODS: usize = 10;
const PEAK_OVER_BACKGROUND: f64 = 5.0;
/// Smallest relative modulation depth treated as a fringe.
const MIN_DEPTH: f64 = 1e-6;

/// Period of the strongest spatial frequency along `axis`.
///
/// Each grid line along `axis` is Hann-windowed; power spectra are summed
/// over lines and the peak is refined by a parabola through log power.
pub fn extract_spacing(pattern: &FringePattern, axis: Axis) -> Result<Spacing> {
    let n = pattern
        .samples_along(axis)
        .ok_or_else(|| Error::config(format!("pattern has no {axis} axis")))?;
    if n < 4 * MIN_PERIODS {
        return Err(Error::NoFringe(format!(
            "{n} samples along {axis} are too few to resolve 10 periods"
        )));
    }
    let lane = if pattern.is_plane() && pattern.axes[0] == axis {
        NdAxis(0)
    } else {
        NdAxis(1)
    };
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let window: Vec<f64> = (0..n)
        .map(|j| 0.5 - 0.5 * (2.0 * PI * j as f64 / n as f64).cos())
        .collect();
    let mut power = vec![0.0; n / 2 + 1];
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    for line in pattern.data.lanes(lane) {
        for (b, (v, w)) in buf.iter_mut().zip(line.iter().zip(&window)) {
            *b = Complex::new(v * w, 0.0);
        }
        fft.process(&mut buf);
        for (p, c) in power.iter_mut().zip(&buf) {
            *p += c.norm_sqr();
        }
    }
    // Bin 1 carries leakage of the mean through the window.
    let (peak, &pmax) = power
        .iter()
        .enumerate()
        .skip(2)
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::NoFringe("spectrum is empty".into()))?;
    let dc = power[0];
    if !(dc > 0.0) || (pmax / dc).sqrt() < MIN_DEPTH {
        return Err(Error::NoFringe(format!("no modulation along {axis}")));
    }
    let others: Vec<f64> = power
        .iter()
        .enumerate()
        .skip(2)
        .filter(|(j, _)| j.abs_diff(peak) > 2)
        .map(|(_, p)| *p)
        .collect();
    let background = others.iter().sum::<f64>() / others.len().max(1) as f64;
    let ratio = if background > 0.0 {
        pmax / background
    } else {
        f64::INFINITY
    };
    if ratio < PEAK_OVER_BACKGROUND {
        return Err(Error::NoFringe(format!(
            "spectral peak is only {ratio:.2}× the background along {axis}"
        )));
    }
    if peak < MIN_PERIODS {
        return Err(Error::NoFringe(format!(
            "only {peak} periods along {axis}; at least {MIN_PERIODS} are needed"
        )));
    }
    let offset = if peak + 1 < power.len() {
        let (l, c, r) = (
            power[peak - 1].max(1e-300).ln(),
            pmax.ln(),
            power[peak + 1].max(1e-300).ln(),
        );
        let denom = l - 2.0 * c + r;
        if denom < 0.0 {
            0.5 * (l - r) / denom
        } else {
            0.0
        }
    } else {
        0.0
    };
    let bin = peak as f64 + offset;
    let length = n as f64 * pattern.pitch;
    let period = length / bin;
    Ok(Spacing {
        period,
        bin_width: period * period / length,
        peak_bin: bin,
        peak_to_background: ratio,
    })
}

/// (max − min)/(max + min) of the envelope-free intensity within one
/// coherence length of the centre (the whole grid without an envelope).
pub fn contrast(pattern: &FringePattern) -> f64 {
    let carrier = pattern.carrier();
    let radius = pattern.envelope.map_or(f64::INFINITY, |e| e.length);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for ((i, j), v) in carrier.indexed_iter() {
        let (a, b) = pattern.position(i, j);
        let r = if pattern.is_plane() {
            a.hypot(b)
        } else {
            b.abs()
        };
        if r <= radius {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if !(hi > 0.0) {
        return 0.0;
    }
    ((hi - lo) / (hi + lo)).clamp(0.0, 1.0)
}
