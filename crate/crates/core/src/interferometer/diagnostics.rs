//! Single-ladder runs used to characterize the transfer itself.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::pulses::chirp::chirp_offset;
use crate::pulses::envelope::{PulseEnvelope, Shape};
use crate::pulses::event::{Polarization, PulseEvent};
use crate::pulses::ladder::{
    build_adiabatic_sequence, copropagating_pulse, counter_intuitive_pair, AdiabaticPulses,
    CopropagatingPair, RamanPulses,
};
use crate::pulses::plan::SequencePlan;
use crate::quantum::evolve::{evolve, evolve_observed, EngineOptions, EvolutionReport};
use crate::quantum::level::{Axis, Level, State};
use crate::quantum::observables::observables;
use crate::quantum::wavefunction::WaveFunction;

/// Levels that make up the deflected arm during an adiabatic ladder.
pub const DEFLECTED: [Level; 3] = [Level::A, Level::B, Level::E1];

/// Population reaching `to` after one counter-intuitive pair from `from`,
/// with every peak Rabi frequency scaled by `1 + rabi_error`.
pub fn pair_fidelity(
    from: State,
    direction: i32,
    rabi_error: f64,
    pulses: &AdiabaticPulses,
    atom: &AtomParams,
    engine: &EngineOptions,
) -> Result<f64> {
    if !(rabi_error > -1.0 && rabi_error.is_finite()) {
        return Err(Error::config(format!(
            "Rabi error {rabi_error} must exceed −1"
        )));
    }
    let pair = counter_intuitive_pair(0, 0.0, from, direction, pulses, atom)?;
    let mut plan = SequencePlan::new(0.0);
    for ev in &pair.events {
        let mut ev = ev.clone();
        ev.envelope.peak *= 1.0 + rabi_error;
        plan.push(ev);
    }
    let (psi, _) = evolve(&WaveFunction::basis_state(from), &plan, atom, engine)?;
    Ok(psi.population(&pair.to))
}

/// Per-pair and cumulative transfer along one ladder started from a pure state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderFidelity {
    /// Fraction of the population in the expected state before pair j that
    /// reaches the expected state after it.
    pub per_pair: Vec<f64>,
    /// Population in the final expected state.
    pub cumulative: f64,
    pub predicted: State,
}

impl LadderFidelity {
    /// max − min of the per-pair fidelities.
    pub fn variation(&self) -> f64 {
        let lo = self.per_pair.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .per_pair
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

pub fn ladder_fidelity(
    n_pairs: usize,
    start: State,
    direction: i32,
    pulses: &AdiabaticPulses,
    atom: &AtomParams,
    engine: &EngineOptions,
) -> Result<LadderFidelity> {
    let ladder = build_adiabatic_sequence(n_pairs, 0.0, start, direction, pulses, atom)?;
    let mut boundary = Vec::with_capacity(n_pairs + 1);
    let mut observer = |_t: f64, psi: &WaveFunction| boundary.push(psi.clone());
    let psi0 = WaveFunction::basis_state(start);
    evolve_observed(
        &psi0,
        &ladder.plan,
        atom,
        engine,
        Some(pulses.pair_duration()),
        &mut observer,
    )?;
    boundary.truncate(n_pairs + 1);
    if boundary.len() != n_pairs + 1 {
        return Err(Error::physics("ladder sampling missed a pair boundary"));
    }
    let mut per_pair = Vec::with_capacity(n_pairs);
    let mut prev = boundary[0].population(&start);
    for (pair, psi) in ladder.pairs.iter().zip(&boundary[1..]) {
        let now = psi.population(&pair.to);
        per_pair.push(if prev > 0.0 { now / prev } else { 0.0 });
        prev = now;
    }
    Ok(LadderFidelity {
        per_pair,
        cumulative: prev,
        predicted: ladder.predicted,
    })
}

/// One sample of the deflected arm during the ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderSample {
    /// Time since the first ladder pulse (s).
    pub time: f64,
    /// Mean n_z over levels a, b and the D1 intermediate.
    pub mean_nz: f64,
    pub population: f64,
    pub excited: f64,
    /// True at pair boundaries.
    pub boundary: bool,
}

/// Population in the expected state after `pair` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairBoundary {
    pub pair: usize,
    pub state: State,
    pub population: f64,
}

/// Momentum-vs-time trace of an x π/2 split followed by an adiabatic ladder
/// on the a arm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderTrace {
    pub samples: Vec<LadderSample>,
    pub boundaries: Vec<PairBoundary>,
    pub predicted: State,
    /// Population in the predicted final state.
    pub deflected: f64,
    /// Population left in c(0).
    pub undeflected: f64,
    pub basis: usize,
    pub steps: usize,
}

impl LadderTrace {
    fn boundary_samples(&self) -> impl Iterator<Item = &LadderSample> {
        self.samples.iter().filter(|s| s.boundary)
    }

    /// Fraction of the expected population carried through each pair.
    pub fn pair_fidelities(&self) -> Vec<f64> {
        self.boundaries
            .windows(2)
            .map(|w| {
                if w[0].population > 0.0 {
                    w[1].population / w[0].population
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Mean n_z at each pair boundary.
    pub fn boundary_momenta(&self) -> Vec<f64> {
        self.boundary_samples().map(|s| s.mean_nz).collect()
    }

    /// Number of boundaries at which the mean momentum has moved by more
    /// than one recoil since the previous boundary.
    pub fn steps_taken(&self) -> usize {
        let b = self.boundary_momenta();
        b.windows(2).filter(|w| (w[1] - w[0]).abs() > 1.0).count()
    }

    /// True when the boundary momenta move one way only.
    pub fn monotone(&self, direction: i32) -> bool {
        let d = direction as f64;
        let b = self.boundary_momenta();
        b.windows(2).all(|w| d * (w[1] - w[0]) >= -1e-6)
    }
}

pub fn ladder_trace(
    n_pairs: usize,
    samples_per_pair: usize,
    pulses: &AdiabaticPulses,
    raman: &RamanPulses,
    atom: &AtomParams,
    engine: &EngineOptions,
) -> Result<LadderTrace> {
    if samples_per_pair == 0 {
        return Err(Error::config("need at least one sample per pair"));
    }
    let origin = State::new(Level::A, 0, 0);
    let half = copropagating_pulse(
        FRAC_PI_2,
        CopropagatingPair::PiPairX,
        (Level::A, Level::C),
        0.0,
        raman,
    )?;
    let mut split = SequencePlan::new(0.0);
    split.push(half);
    let (psi, first) = evolve(&WaveFunction::basis_state(origin), &split, atom, engine)?;

    let ladder = build_adiabatic_sequence(n_pairs, psi.time, origin, -1, pulses, atom)?;
    let interval = pulses.pair_duration() / samples_per_pair as f64;
    let t0 = psi.time;
    let expected: Vec<State> = std::iter::once(origin)
        .chain(ladder.pairs.iter().map(|p| p.to))
        .collect();
    let mut samples: Vec<LadderSample> = Vec::new();
    let mut boundaries: Vec<PairBoundary> = Vec::new();
    let mut observer = |t: f64, psi: &WaveFunction| {
        let k = samples.len();
        if k > n_pairs * samples_per_pair {
            return;
        }
        if k.is_multiple_of(samples_per_pair) {
            let pair = k / samples_per_pair;
            let state = expected[pair];
            boundaries.push(PairBoundary {
                pair,
                state,
                population: psi.population(&state),
            });
        }
        let o = observables(psi, &DEFLECTED, Axis::Z);
        samples.push(LadderSample {
            time: t - t0,
            mean_nz: o.mean.unwrap_or(0.0),
            population: o.population,
            excited: psi.level_population(Level::E1),
            boundary: k.is_multiple_of(samples_per_pair),
        });
    };
    let (psi, rest) = evolve_observed(
        &psi,
        &ladder.plan,
        atom,
        engine,
        Some(interval),
        &mut observer,
    )?;
    let report = EvolutionReport {
        steps: first.steps + rest.steps,
        largest_basis: first.largest_basis.max(rest.largest_basis),
        ..rest
    };
    Ok(LadderTrace {
        samples,
        boundaries,
        predicted: ladder.predicted,
        deflected: psi.population(&ladder.predicted),
        undeflected: psi.population(&State::new(Level::C, 0, 0)),
        basis: report.largest_basis,
        steps: report.steps,
    })
}

/// Population left in a(0) after a nominal Raman π pulse whose area is off
/// by the factor `1 + area_error`, on exact two-photon resonance.
pub fn raman_pi_residual(
    area_error: f64,
    raman: &RamanPulses,
    atom: &AtomParams,
    engine: &EngineOptions,
) -> Result<f64> {
    let t_pi = raman.pi_time()?;
    let from = State::new(Level::A, 0, 0);
    let to = State::new(Level::C, -2, 0);
    let env = PulseEnvelope::new(
        Shape::Square,
        raman.omega_eff * (1.0 + area_error),
        0.0,
        t_pi,
    )?;
    let ev = PulseEvent::raman(
        Polarization::SigmaPair,
        Axis::Z,
        Level::A,
        Level::C,
        -1,
        env,
        chirp_offset(&from, &to, atom)?,
        raman.phase,
    )?;
    let mut plan = SequencePlan::new(0.0);
    plan.push(ev);
    let (psi, _) = evolve(&WaveFunction::basis_state(from), &plan, atom, engine)?;
    Ok(psi.population(&from))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nominal_pair_transfers() {
        let f = pair_fidelity(
            State::new(Level::A, 0, 0),
            -1,
            0.0,
            &AdiabaticPulses::default(),
            &AtomParams::rubidium87(),
            &EngineOptions::default(),
        )
        .unwrap();
        assert!(f > 0.999, "{f}");
    }

    #[test]
    fn raman_residual_matches_rabi() {
        let atom = AtomParams::rubidium87();
        for eps in [-0.2, 0.0, 0.1] {
            let r = raman_pi_residual(
                eps,
                &RamanPulses::default(),
                &atom,
                &EngineOptions::default(),
            )
            .unwrap();
            let want = ((1.0 + eps) * FRAC_PI_2).cos().powi(2);
            assert!((r - want).abs() < 1e-6, "{eps}: {r} vs {want}");
        }
    }
}
