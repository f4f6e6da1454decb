use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulses::event::PulseEvent;

/// Boundaries closer than this (s) are treated as the same instant.
const BOUNDARY_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Drift {
    pub start: f64,
    pub duration: f64,
}

/// Interval with a fixed set of active pulses (indices into `events`).
#[derive(Debug, Clone, PartialEq)]
pub struct Epoch {
    pub start: f64,
    pub end: f64,
    pub active: Vec<usize>,
}

/// Time-ordered pulse events plus explicit drift intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePlan {
    pub start: f64,
    pub events: Vec<PulseEvent>,
    #[serde(default)]
    pub drifts: Vec<Drift>,
}

impl SequencePlan {
    pub fn new(start: f64) -> Self {
        SequencePlan {
            start,
            events: Vec::new(),
            drifts: Vec::new(),
        }
    }

    pub fn push(&mut self, event: PulseEvent) {
        self.events.push(event);
        self.sort();
    }

    /// Appends a drift starting at the current end of the plan.
    pub fn push_drift(&mut self, duration: f64) {
        let start = self.end();
        self.drifts.push(Drift { start, duration });
    }

    /// Appends all events and drifts of `other` (absolute times preserved).
    pub fn extend(&mut self, other: SequencePlan) {
        self.events.extend(other.events);
        self.drifts.extend(other.drifts);
        self.start = self.start.min(other.start);
        self.sort();
    }

    fn sort(&mut self) {
        self.events.sort_by(|a, b| {
            a.start()
                .total_cmp(&b.start())
                .then(a.end().total_cmp(&b.end()))
        });
    }

    /// Latest event or drift end (or `start` when empty).
    pub fn end(&self) -> f64 {
        let ev = self.events.iter().map(|e| e.end());
        let dr = self.drifts.iter().map(|d| d.start + d.duration);
        ev.chain(dr).fold(self.start, f64::max)
    }

    pub fn duration(&self) -> f64 {
        self.end() - self.start
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.events.iter().enumerate() {
            e.validate()
                .map_err(|err| Error::config(format!("event {i}: {err}")))?;
            if e.start() < self.start - BOUNDARY_EPS {
                return Err(Error::config(format!("event {i} starts before the plan")));
            }
        }
        for d in &self.drifts {
            if !(d.duration >= 0.0 && d.duration.is_finite() && d.start.is_finite()) {
                return Err(Error::config(format!("invalid drift {d:?}")));
            }
            let overlaps = self.events.iter().any(|e| {
                e.start() < d.start + d.duration - BOUNDARY_EPS && e.end() > d.start + BOUNDARY_EPS
            });
            if overlaps {
                return Err(Error::config(format!(
                    "drift at {} s overlaps a pulse",
                    d.start
                )));
            }
        }
        Ok(())
    }

    /// Splits [start, end] into maximal intervals with a constant active set.
    pub fn epochs(&self) -> Vec<Epoch> {
        let mut bounds: Vec<f64> = vec![self.start, self.end()];
        for e in &self.events {
            bounds.push(e.start());
            bounds.push(e.end());
        }
        bounds.sort_by(f64::total_cmp);
        bounds.dedup_by(|a, b| (*a - *b).abs() <= BOUNDARY_EPS);
        let mut out: Vec<Epoch> = Vec::new();
        for w in bounds.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let active: Vec<usize> = self
                .events
                .iter()
                .enumerate()
                .filter(|(_, e)| e.start() <= mid && mid < e.end())
                .map(|(i, _)| i)
                .collect();
            match out.last_mut() {
                Some(prev) if prev.active == active => prev.end = b,
                _ => out.push(Epoch {
                    start: a,
                    end: b,
                    active,
                }),
            }
        }
        out
    }

    /// Copy with every time shifted by `dt`.
    pub fn shifted(&self, dt: f64) -> SequencePlan {
        let mut p = self.clone();
        p.start += dt;
        for e in &mut p.events {
            e.envelope.start += dt;
        }
        for d in &mut p.drifts {
            d.start += dt;
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::envelope::{PulseEnvelope, Shape};
    use crate::pulses::event::Polarization;

    fn beam(pol: Polarization, start: f64, dur: f64) -> PulseEvent {
        PulseEvent::lambda_beam(
            pol,
            1,
            PulseEnvelope::new(Shape::SineSquared, 1.0, start, dur).unwrap(),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn overlapping_pair_has_three_epochs() {
        let mut p = SequencePlan::new(0.0);
        p.push(beam(Polarization::SigmaPlus, 0.0, 2.0));
        p.push(beam(Polarization::SigmaMinus, 1.0, 2.0));
        let e = p.epochs();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0].active, vec![0]);
        assert_eq!(e[1].active, vec![0, 1]);
        assert_eq!(e[2].active, vec![1]);
        assert_eq!(p.duration(), 3.0);
    }

    #[test]
    fn drift_extends_duration() {
        let mut p = SequencePlan::new(0.0);
        p.push(beam(Polarization::SigmaPlus, 0.0, 1.0));
        p.push_drift(5.0);
        assert_eq!(p.end(), 6.0);
        let e = p.epochs();
        assert_eq!(e.last().unwrap().active, Vec::<usize>::new());
        p.validate().unwrap();
    }

    #[test]
    fn near_coincident_boundaries_merge() {
        let mut p = SequencePlan::new(0.0);
        p.push(beam(Polarization::SigmaPlus, 0.0, 1.5e-7));
        p.push(beam(Polarization::SigmaMinus, 1.5e-7 + 1e-22, 1e-7));
        let e = p.epochs();
        assert_eq!(e.len(), 2);
    }
}
