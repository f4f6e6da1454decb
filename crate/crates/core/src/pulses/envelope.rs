use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    SineSquared,
    Square,
}

/// Time window and Rabi-frequency profile of one pulse.
///
/// `peak` is the peak Rabi frequency Ω (rad/s); the Hamiltonian matrix
/// element is Ω(t)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseEnvelope {
    pub shape: Shape,
    pub peak: f64,
    pub start: f64,
    pub duration: f64,
}

impl PulseEnvelope {
    pub fn new(shape: Shape, peak: f64, start: f64, duration: f64) -> Result<Self> {
        let env = PulseEnvelope {
            shape,
            peak,
            start,
            duration,
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.peak.is_finite() && self.peak > 0.0) {
            return Err(Error::config(format!(
                "pulse peak Rabi frequency must be positive, got {}",
                self.peak
            )));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::config(format!(
                "pulse duration must be positive, got {}",
                self.duration
            )));
        }
        if !self.start.is_finite() {
            return Err(Error::config("pulse start must be finite"));
        }
        Ok(())
    }

    pub fn end(&self) -> f64 {
        self.start + self.duration
    }

    /// Rabi frequency Ω(t).
    pub fn value(&self, t: f64) -> f64 {
        if t < self.start || t > self.end() {
            return 0.0;
        }
        match self.shape {
            Shape::Square => self.peak,
            Shape::SineSquared => {
                let s = (PI * (t - self.start) / self.duration).sin();
                self.peak * s * s
            }
        }
    }

    /// ∫Ω dt over the window.
    pub fn area(&self) -> f64 {
        match self.shape {
            Shape::Square => self.peak * self.duration,
            Shape::SineSquared => 0.5 * self.peak * self.duration,
        }
    }

    /// Root-mean-square of Ω(t) over the window.
    pub fn rms(&self) -> f64 {
        match self.shape {
            Shape::Square => self.peak,
            Shape::SineSquared => self.peak * (3.0f64 / 8.0).sqrt(),
        }
    }
}

/// Ratio peak/rms for a shape; √(8/3) for sin².
pub fn peak_over_rms(shape: Shape) -> f64 {
    match shape {
        Shape::Square => 1.0,
        Shape::SineSquared => (8.0f64 / 3.0).sqrt(),
    }
}
