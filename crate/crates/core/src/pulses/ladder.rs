//! Ladder builders: counter-intuitive Λ pulse pairs, alternating Raman π
//! ladders and copropagating two-level pulses.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::pulses::chirp::{chirp_offset, leg_detuning};
use crate::pulses::envelope::{peak_over_rms, PulseEnvelope, Shape};
use crate::pulses::event::{Polarization, PulseEvent};
use crate::pulses::plan::SequencePlan;
use crate::quantum::level::{Axis, Level, State};

/// Pairs with (2πgT)⁻¹ above this are flagged as non-adiabatic.
pub const ADIABATICITY_LIMIT: f64 = 0.1;

/// (2πgT)⁻¹ with g in Hz, i.e. 1/(g·T) for angular g.
pub fn adiabaticity(g: f64, half_time: f64) -> f64 {
    1.0 / (g * half_time)
}

/// Parameters shared by every counter-intuitive pair of a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AdiabaticPulses {
    /// Half the pulse length T (s); each pulse lasts 2T.
    pub half_time: f64,
    /// rms Rabi frequency g of each beam (rad/s).
    pub rms_rabi: f64,
    pub shape: Shape,
    pub chirp: bool,
}

impl Default for AdiabaticPulses {
    fn default() -> Self {
        AdiabaticPulses {
            half_time: 50e-9,
            rms_rabi: TAU * 100e6,
            shape: Shape::SineSquared,
            chirp: true,
        }
    }
}

impl AdiabaticPulses {
    pub fn validate(&self) -> Result<()> {
        if !(self.half_time > 0.0 && self.half_time.is_finite()) {
            return Err(Error::config(format!(
                "T must be positive, got {}",
                self.half_time
            )));
        }
        if !(self.rms_rabi > 0.0 && self.rms_rabi.is_finite()) {
            return Err(Error::config(format!(
                "g must be positive, got {}",
                self.rms_rabi
            )));
        }
        Ok(())
    }

    pub fn adiabaticity(&self) -> f64 {
        adiabaticity(self.rms_rabi, self.half_time)
    }

    /// Peak Rabi frequency Ω of each beam.
    pub fn peak_rabi(&self) -> f64 {
        2.0 * self.rms_rabi * peak_over_rms(self.shape)
    }

    /// Length of one pair window, 3T.
    pub fn pair_duration(&self) -> f64 {
        3.0 * self.half_time
    }

    /// Same pulses slowed down by `factor` (T·factor, g/factor): the
    /// adiabaticity is unchanged while the kinetic shifts grow relative to g.
    pub fn time_scaled(&self, factor: f64) -> Self {
        AdiabaticPulses {
            half_time: self.half_time * factor,
            rms_rabi: self.rms_rabi / factor,
            ..*self
        }
    }
}

/// One counter-intuitive pulse pair moving `from` to `to` by two recoils.
#[derive(Debug, Clone, PartialEq)]
pub struct PulsePair {
    pub index: usize,
    /// Target leg first, source leg second.
    pub events: [PulseEvent; 2],
    pub from: State,
    pub to: State,
    pub adiabaticity: f64,
    pub non_adiabatic: bool,
}

/// Builds pair `index` starting at `start`, taking the atom from `from`
/// (level a or b) along `direction` on z.
///
/// The leg coupling the empty target level arrives first; the leg on the
/// occupied source level arrives T later. From a the σ₊ beam leads, from b
/// the σ₋ beam leads.
pub fn counter_intuitive_pair(
    index: usize,
    start: f64,
    from: State,
    direction: i32,
    pulses: &AdiabaticPulses,
    atom: &AtomParams,
) -> Result<PulsePair> {
    pulses.validate()?;
    if direction.abs() != 1 {
        return Err(Error::config("ladder direction must be ±1"));
    }
    let (source_pol, target_pol, target_level) = match from.level {
        Level::A => (Polarization::SigmaMinus, Polarization::SigmaPlus, Level::B),
        Level::B => (Polarization::SigmaPlus, Polarization::SigmaMinus, Level::A),
        other => {
            return Err(Error::config(format!(
                "adiabatic ladder cannot start from level {other}"
            )))
        }
    };
    let to = from
        .with_level(target_level)
        .shifted(Axis::Z, 2 * direction);
    let mid = from.with_level(Level::E1).shifted(Axis::Z, direction);
    let (d_source, d_target) = if pulses.chirp {
        (
            leg_detuning(&from, &mid, atom),
            leg_detuning(&to, &mid, atom),
        )
    } else {
        (0.0, 0.0)
    };
    let t = pulses.half_time;
    let peak = pulses.peak_rabi();
    let target = PulseEvent::lambda_beam(
        target_pol,
        -direction,
        PulseEnvelope::new(pulses.shape, peak, start, 2.0 * t)?,
        d_target,
    )?;
    let source = PulseEvent::lambda_beam(
        source_pol,
        direction,
        PulseEnvelope::new(pulses.shape, peak, start + t, 2.0 * t)?,
        d_source,
    )?;
    let a = pulses.adiabaticity();
    Ok(PulsePair {
        index,
        events: [target, source],
        from,
        to,
        adiabaticity: a,
        non_adiabatic: a > ADIABATICITY_LIMIT,
    })
}

/// A ladder plan plus the state it is predicted to deliver.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticLadder {
    pub plan: SequencePlan,
    pub pairs: Vec<PulsePair>,
    pub predicted: State,
}

impl AdiabaticLadder {
    pub fn non_adiabatic(&self) -> bool {
        self.pairs.iter().any(|p| p.non_adiabatic)
    }

    /// Two-photon offsets applied per pair (zero when the chirp is off).
    pub fn chirp_offsets(&self, atom: &AtomParams) -> Result<Vec<f64>> {
        self.pairs
            .iter()
            .map(|p| chirp_offset(&p.from, &p.to, atom))
            .collect()
    }
}

/// `n_pairs` back-to-back counter-intuitive pairs starting at `start_time`.
/// The deflected arm ends at `start + 2·direction·n_pairs` recoils, on level a
/// after an even number of pairs and b after an odd number (for a start on a).
pub fn build_adiabatic_sequence(
    n_pairs: usize,
    start_time: f64,
    start: State,
    direction: i32,
    pulses: &AdiabaticPulses,
    atom: &AtomParams,
) -> Result<AdiabaticLadder> {
    if n_pairs == 0 {
        return Err(Error::config("an adiabatic ladder needs at least one pair"));
    }
    let mut plan = SequencePlan::new(start_time);
    let mut pairs = Vec::with_capacity(n_pairs);
    let mut state = start;
    for j in 0..n_pairs {
        let pair = counter_intuitive_pair(
            j,
            start_time + j as f64 * pulses.pair_duration(),
            state,
            direction,
            pulses,
            atom,
        )?;
        state = pair.to;
        plan.events.extend(pair.events.iter().cloned());
        pairs.push(pair);
    }
    plan.events.sort_by(|a, b| a.start().total_cmp(&b.start()));
    Ok(AdiabaticLadder {
        plan,
        pairs,
        predicted: state,
    })
}

/// Effective two-level Raman pulse parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RamanPulses {
    /// Effective two-photon Rabi frequency (rad/s).
    pub omega_eff: f64,
    /// π-pulse duration T′; defaults to π/Ω_eff.
    pub pi_duration: Option<f64>,
    /// Laser phase φ of every Raman pair; −π/2 maps a to (a − c)/√2.
    pub phase: f64,
    pub chirp: bool,
}

impl Default for RamanPulses {
    fn default() -> Self {
        RamanPulses {
            omega_eff: TAU * 100e6,
            pi_duration: None,
            phase: -FRAC_PI_2,
            chirp: true,
        }
    }
}

impl RamanPulses {
    /// T′, checked against Ω_eff·T′ = π.
    pub fn pi_time(&self) -> Result<f64> {
        if !(self.omega_eff > 0.0 && self.omega_eff.is_finite()) {
            return Err(Error::config(format!(
                "Ω_eff must be positive, got {}",
                self.omega_eff
            )));
        }
        let t = self.pi_duration.unwrap_or(PI / self.omega_eff);
        if ((self.omega_eff * t - PI) / PI).abs() > 1e-12 {
            return Err(Error::config(format!(
                "Ω_eff·T′ = {} violates the π-pulse condition",
                self.omega_eff * t
            )));
        }
        Ok(t)
    }
}

/// Which copropagating Raman pair drives a momentum-preserving a↔c pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopropagatingPair {
    /// Linearly polarized beams along x.
    PiPairX,
    /// Circularly polarized beams along z.
    SigmaPairZ,
}

/// Momentum-preserving square pulse of the given area on `from ↔ to`.
pub fn copropagating_pulse(
    area: f64,
    pair: CopropagatingPair,
    levels: (Level, Level),
    start: f64,
    raman: &RamanPulses,
) -> Result<PulseEvent> {
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::config(format!(
            "pulse area must be positive, got {area}"
        )));
    }
    let (pol, axis) = match pair {
        CopropagatingPair::PiPairX => (Polarization::PiPair, Axis::X),
        CopropagatingPair::SigmaPairZ => (Polarization::SigmaPair, Axis::Z),
    };
    let env = PulseEnvelope::new(
        Shape::Square,
        raman.omega_eff,
        start,
        area / raman.omega_eff,
    )?;
    PulseEvent::raman(pol, axis, levels.0, levels.1, 0, env, 0.0, raman.phase)
}

/// A Raman ladder plan with the predicted arm states.
#[derive(Debug, Clone, PartialEq)]
pub struct RamanLadder {
    pub plan: SequencePlan,
    pub predicted: Vec<State>,
    /// Direction of the last pulse, for chaining a reversal.
    pub last_direction: i32,
    /// Largest |detuning − resonance| over all driven transitions (rad/s).
    pub max_residual: f64,
}

/// Applies one counterpropagating a↔c pulse of `direction` to predicted arms.
fn raman_step(arms: &[State], axis: Axis, direction: i32, split: bool) -> Vec<State> {
    let mut out = Vec::new();
    for s in arms {
        match s.level {
            Level::A => {
                if split {
                    out.push(*s);
                }
                out.push(s.with_level(Level::C).shifted(axis, 2 * direction));
            }
            Level::C => {
                if split {
                    out.push(*s);
                }
                out.push(s.with_level(Level::A).shifted(axis, -2 * direction));
            }
            _ => out.push(*s),
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Resonance K(to) − K(from) of every a↔c transition the pulse drives among
/// `arms`; the laser sits at the midpoint of the extremes.
fn raman_detuning(
    arms: &[State],
    axis: Axis,
    direction: i32,
    atom: &AtomParams,
) -> Result<(f64, f64)> {
    let mut res = Vec::new();
    for s in arms {
        let (from, to) = match s.level {
            Level::A => (*s, s.with_level(Level::C).shifted(axis, 2 * direction)),
            Level::C => (s.with_level(Level::A).shifted(axis, -2 * direction), *s),
            _ => continue,
        };
        res.push(chirp_offset(&from, &to, atom)?);
    }
    if res.is_empty() {
        return Ok((0.0, 0.0));
    }
    let lo = res.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = res.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0.5 * (lo + hi), 0.5 * (hi - lo)))
}

/// Optional π/2 split followed by `n_pi` counterpropagating π pulses whose
/// directions alternate, starting from `first_direction`.
///
/// With a π/2 the split pulse uses `first_direction` and the π pulses start
/// from its opposite; without one the first π pulse uses `first_direction`.
/// Every π pulse drives the a↔c transitions of all arms at once.
#[allow(clippy::too_many_arguments)]
pub fn build_raman_sequence(
    half_pi: bool,
    n_pi: usize,
    first_direction: i32,
    axis: Axis,
    arms: &[State],
    start_time: f64,
    raman: &RamanPulses,
    atom: &AtomParams,
) -> Result<RamanLadder> {
    let t_pi = raman.pi_time()?;
    if first_direction.abs() != 1 {
        return Err(Error::config("Raman ladder direction must be ±1"));
    }
    let pol = match axis {
        Axis::Z => Polarization::SigmaPair,
        Axis::X => Polarization::PiPair,
    };
    let mut plan = SequencePlan::new(start_time);
    let mut arms: Vec<State> = arms.to_vec();
    let mut t = start_time;
    let mut direction = first_direction;
    let mut max_residual: f64 = 0.0;
    let mut last_direction = first_direction;
    let total = n_pi + usize::from(half_pi);
    for k in 0..total {
        let split = half_pi && k == 0;
        let duration = if split { 0.5 * t_pi } else { t_pi };
        let (centre, spread) = raman_detuning(&arms, axis, direction, atom)?;
        let detuning = if raman.chirp { centre } else { 0.0 };
        max_residual = max_residual.max(if raman.chirp {
            spread
        } else {
            centre.abs() + spread
        });
        let env = PulseEnvelope::new(Shape::Square, raman.omega_eff, t, duration)?;
        plan.events.push(PulseEvent::raman(
            pol,
            axis,
            Level::A,
            Level::C,
            direction,
            env,
            detuning,
            raman.phase,
        )?);
        arms = raman_step(&arms, axis, direction, split);
        last_direction = direction;
        t += duration;
        direction = -direction;
    }
    Ok(RamanLadder {
        plan,
        predicted: arms,
        last_direction,
        max_residual,
    })
}
