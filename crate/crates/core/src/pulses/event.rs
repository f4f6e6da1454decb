use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulses::envelope::PulseEnvelope;
use crate::quantum::level::{Axis, Level};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// Single σ₊ beam: couples b(m_F=−1) to the D1 intermediate.
    SigmaPlus,
    /// Single σ₋ beam: couples a(m_F=+1) to the D1 intermediate.
    SigmaMinus,
    /// Linearly polarized beam pair (π-π Raman), beams along x.
    PiPair,
    /// Circularly polarized beam pair (σ-σ Raman), beams along z.
    SigmaPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    /// One traveling-wave leg of the D1 Λ system, simulated with the excited level.
    AdiabaticLambda,
    /// Two-photon Raman pair treated as an effective two-level coupling.
    RamanEffective,
}

/// One laser pulse (or, for the Raman channel, one beam pair).
///
/// `direction` is the propagation sign of a Λ beam along `axis`; for a Raman
/// pair it is the sign of the 2ħk kick from `from` to `to`, 0 when the beams
/// copropagate. `detuning` is the laser detuning from the bare internal
/// resonance, i.e. the chirp term; the coupling carries e^{iφ}e^{−iδt}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseEvent {
    pub envelope: PulseEnvelope,
    pub polarization: Polarization,
    pub axis: Axis,
    pub direction: i32,
    pub detuning: f64,
    pub channel: Channel,
    #[serde(default)]
    pub phase: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raman_levels: Option<(Level, Level)>,
}

/// Resolved coupling pattern of an event: `from(n) ↔ to(n + shift·axis)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub from: Level,
    pub to: Level,
    pub axis: Axis,
    pub shift: i32,
}

impl PulseEvent {
    /// A single Λ-system beam (σ₊ or σ₋ along z).
    pub fn lambda_beam(
        polarization: Polarization,
        direction: i32,
        envelope: PulseEnvelope,
        detuning: f64,
    ) -> Result<Self> {
        let ev = PulseEvent {
            envelope,
            polarization,
            axis: Axis::Z,
            direction,
            detuning,
            channel: Channel::AdiabaticLambda,
            phase: 0.0,
            raman_levels: None,
        };
        ev.validate()?;
        Ok(ev)
    }

    /// An effective two-level Raman pair.
    #[allow(clippy::too_many_arguments)]
    pub fn raman(
        polarization: Polarization,
        axis: Axis,
        from: Level,
        to: Level,
        direction: i32,
        envelope: PulseEnvelope,
        detuning: f64,
        phase: f64,
    ) -> Result<Self> {
        let ev = PulseEvent {
            envelope,
            polarization,
            axis,
            direction,
            detuning,
            channel: Channel::RamanEffective,
            phase,
            raman_levels: Some((from, to)),
        };
        ev.validate()?;
        Ok(ev)
    }

    pub fn start(&self) -> f64 {
        self.envelope.start
    }

    pub fn end(&self) -> f64 {
        self.envelope.end()
    }

    pub fn is_active(&self, t: f64) -> bool {
        t >= self.start() && t < self.end()
    }

    pub fn transition(&self) -> Transition {
        match self.channel {
            Channel::AdiabaticLambda => {
                let from = if self.polarization == Polarization::SigmaMinus {
                    Level::A
                } else {
                    Level::B
                };
                Transition {
                    from,
                    to: Level::E1,
                    axis: self.axis,
                    shift: self.direction,
                }
            }
            Channel::RamanEffective => {
                let (from, to) = self.raman_levels.unwrap_or((Level::A, Level::C));
                Transition {
                    from,
                    to,
                    axis: self.axis,
                    shift: 2 * self.direction,
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.envelope.validate()?;
        if !self.detuning.is_finite() || !self.phase.is_finite() {
            return Err(Error::config("pulse detuning and phase must be finite"));
        }
        let sigma = matches!(
            self.polarization,
            Polarization::SigmaPlus | Polarization::SigmaMinus | Polarization::SigmaPair
        );
        if sigma && self.axis != Axis::Z {
            return Err(Error::config(
                "circular polarizations are only available on the z axis",
            ));
        }
        if self.polarization == Polarization::PiPair && self.axis != Axis::X {
            return Err(Error::config("π-π Raman pairs propagate along x"));
        }
        match self.channel {
            Channel::AdiabaticLambda => {
                if !matches!(
                    self.polarization,
                    Polarization::SigmaPlus | Polarization::SigmaMinus
                ) {
                    return Err(Error::config("Λ beams must be σ₊ or σ₋"));
                }
                if self.direction.abs() != 1 {
                    return Err(Error::config("Λ beam direction must be ±1"));
                }
                if self.raman_levels.is_some() {
                    return Err(Error::config("Λ beams do not take Raman levels"));
                }
            }
            Channel::RamanEffective => {
                let (from, to) = self
                    .raman_levels
                    .ok_or_else(|| Error::config("Raman pair needs from/to levels"))?;
                let allowed = match (from.min(to), from.max(to)) {
                    (Level::A, Level::C) => {
                        matches!(
                            self.polarization,
                            Polarization::PiPair | Polarization::SigmaPair
                        )
                    }
                    (Level::B, Level::C) => self.polarization == Polarization::SigmaPair,
                    _ => false,
                };
                if !allowed {
                    return Err(Error::config(format!(
                        "no {:?} Raman transition between {from} and {to}",
                        self.polarization
                    )));
                }
                if self.direction.abs() > 1 {
                    return Err(Error::config("Raman direction must be −1, 0 or +1"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::envelope::Shape;

    fn env() -> PulseEnvelope {
        PulseEnvelope::new(Shape::Square, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn lambda_selection_rules() {
        let plus = PulseEvent::lambda_beam(Polarization::SigmaPlus, 1, env(), 0.0).unwrap();
        assert_eq!(
            plus.transition(),
            Transition {
                from: Level::B,
                to: Level::E1,
                axis: Axis::Z,
                shift: 1
            }
        );
        let minus = PulseEvent::lambda_beam(Polarization::SigmaMinus, -1, env(), 0.0).unwrap();
        assert_eq!(
            minus.transition(),
            Transition {
                from: Level::A,
                to: Level::E1,
                axis: Axis::Z,
                shift: -1
            }
        );
        assert!(PulseEvent::lambda_beam(Polarization::SigmaPlus, 0, env(), 0.0).is_err());
        assert!(PulseEvent::lambda_beam(Polarization::PiPair, 1, env(), 0.0).is_err());
    }

    #[test]
    fn raman_rules() {
        let ok = PulseEvent::raman(
            Polarization::PiPair,
            Axis::X,
            Level::A,
            Level::C,
            0,
            env(),
            0.0,
            0.0,
        );
        assert!(ok.is_ok());
        assert!(PulseEvent::raman(
            Polarization::PiPair,
            Axis::Z,
            Level::A,
            Level::C,
            0,
            env(),
            0.0,
            0.0
        )
        .is_err());
        assert!(PulseEvent::raman(
            Polarization::SigmaPair,
            Axis::Z,
            Level::B,
            Level::C,
            -1,
            env(),
            0.0,
            0.0
        )
        .is_ok());
        assert!(PulseEvent::raman(
            Polarization::PiPair,
            Axis::X,
            Level::B,
            Level::C,
            0,
            env(),
            0.0,
            0.0
        )
        .is_err());
        assert!(PulseEvent::raman(
            Polarization::SigmaPair,
            Axis::Z,
            Level::A,
            Level::B,
            1,
            env(),
            0.0,
            0.0
        )
        .is_err());
        let r = PulseEvent::raman(
            Polarization::SigmaPair,
            Axis::Z,
            Level::A,
            Level::C,
            -1,
            env(),
            0.0,
            0.0,
        )
        .unwrap();
        assert_eq!(r.transition().shift, -2);
        let bad = PulseEvent {
            detuning: f64::NAN,
            ..r
        };
        assert!(bad.validate().is_err());
    }
}
