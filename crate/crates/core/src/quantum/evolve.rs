//! Runs a [`SequencePlan`] on a sparse wavefunction.
//!
//! Each epoch gets its own basis: every occupied state on a driven level is
//! surrounded by a guard window of ±`guard` recoils on the axes the active
//! pulses drive, for every driven level; occupied states on other levels are
//! kept as they are. If the edge of a guard window picks up more than
//! `boundary_tolerance` population the epoch is redone with a wider window,
//! up to `max_basis` states.

use num_complex::Complex64;
use std::collections::{BTreeSet, HashMap};

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::pulses::event::PulseEvent;
use crate::pulses::plan::SequencePlan;
use crate::quantum::basis::Basis;
use crate::quantum::hamiltonian::{EpochHamiltonian, HamiltonianOptions};
use crate::quantum::level::{Axis, Level, State};
use crate::quantum::propagate::{propagate, Workspace};
use crate::quantum::wavefunction::{WaveFunction, PRUNE_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    /// Step cap; default 1/(20·max|H|) per epoch.
    pub dt: Option<f64>,
    pub guard: i32,
    pub boundary_tolerance: f64,
    pub max_basis: usize,
    pub prune_floor: f64,
    pub hamiltonian: HamiltonianOptions,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            dt: None,
            guard: 3,
            boundary_tolerance: 1e-10,
            max_basis: 100_000,
            prune_floor: PRUNE_FLOOR,
            hamiltonian: HamiltonianOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvolutionReport {
    pub steps: usize,
    pub epochs: usize,
    pub largest_basis: usize,
    pub pruned: f64,
    /// Norm lost to excited-state decay.
    pub decay_loss: f64,
    /// Largest residual two-photon detuning seen in any epoch (rad/s).
    pub max_residual: f64,
}

/// Callback invoked with the state at requested sample times.
pub type Observer<'a> = dyn FnMut(f64, &WaveFunction) + 'a;

/// Free evolution for `duration`: kinetic phases and excited-state decay.
/// Returns the norm lost to decay.
pub fn free_evolution(
    psi: &mut WaveFunction,
    duration: f64,
    atom: &AtomParams,
    opts: &HamiltonianOptions,
) -> f64 {
    let half_gamma = 0.5 * opts.decay_rate.unwrap_or(0.0);
    let before = psi.norm_sqr();
    let mut next = WaveFunction::new(psi.time + duration);
    for (s, a) in psi.iter() {
        let k = if opts.kinetic {
            atom.kinetic(s.nz, s.nx)
        } else {
            0.0
        };
        let g = if s.level.is_excited() {
            half_gamma
        } else {
            0.0
        };
        next.set(*s, a * Complex64::new(-g * duration, -k * duration).exp());
    }
    *psi = next;
    before - psi.norm_sqr()
}

fn epoch_basis(
    psi: &WaveFunction,
    pulses: &[PulseEvent],
    guard: i32,
) -> (Basis, HashMap<State, i32>) {
    let mut driven: BTreeSet<Level> = BTreeSet::new();
    let mut drive_z = false;
    let mut drive_x = false;
    for p in pulses {
        let tr = p.transition();
        driven.insert(tr.from);
        driven.insert(tr.to);
        if tr.shift != 0 {
            match tr.axis {
                Axis::Z => drive_z = true,
                Axis::X => drive_x = true,
            }
        }
    }
    let gz = if drive_z { guard } else { 0 };
    let gx = if drive_x { guard } else { 0 };
    // Occupied states on undriven levels only pick up kinetic phases.
    let mut distance: HashMap<State, i32> = psi.states().map(|s| (*s, 0)).collect();
    let mut seeds: BTreeSet<(i32, i32)> = psi
        .states()
        .filter(|s| driven.contains(&s.level))
        .map(|s| (s.nz, s.nx))
        .collect();
    if seeds.is_empty() && !driven.is_empty() {
        // A pulse on empty levels still needs its levels in the basis.
        seeds = psi.states().map(|s| (s.nz, s.nx)).collect();
    }
    for &(nz, nx) in &seeds {
        for dz in -gz..=gz {
            for dx in -gx..=gx {
                let d = dz.abs().max(dx.abs());
                for &level in &driven {
                    let s = State::new(level, nz + dz, nx + dx);
                    distance
                        .entry(s)
                        .and_modify(|v| *v = (*v).min(d))
                        .or_insert(d);
                }
            }
        }
    }
    (Basis::from_states(distance.keys().copied()), distance)
}

/// Evolves `psi` through every epoch of `plan`, invoking `observer` at each
/// multiple of `sample_interval` (measured from `plan.start`) and at the end.
pub fn evolve_observed(
    psi: &WaveFunction,
    plan: &SequencePlan,
    atom: &AtomParams,
    opts: &EngineOptions,
    sample_interval: Option<f64>,
    observer: &mut Observer<'_>,
) -> Result<(WaveFunction, EvolutionReport)> {
    plan.validate()?;
    let mut psi = psi.clone();
    let mut report = EvolutionReport::default();
    if psi.time > plan.start + 1e-15 {
        return Err(Error::config(format!(
            "state time {} is after the plan start {}",
            psi.time, plan.start
        )));
    }
    let lead = plan.start - psi.time;
    report.decay_loss += free_evolution(&mut psi, lead, atom, &opts.hamiltonian);
    psi.time = plan.start;

    let mut samples: Vec<f64> = Vec::new();
    if let Some(dt) = sample_interval {
        if !(dt > 0.0) {
            return Err(Error::config("sample interval must be positive"));
        }
        let n = (plan.duration() / dt).floor() as usize;
        samples.extend((0..=n).map(|i| plan.start + i as f64 * dt));
    }
    let mut next_sample = 0;
    let emit = |t: f64, psi: &WaveFunction, next: &mut usize, observer: &mut Observer<'_>| {
        while *next < samples.len() && samples[*next] <= t + 1e-18 {
            observer(samples[*next], psi);
            *next += 1;
        }
    };
    emit(psi.time, &psi, &mut next_sample, observer);

    let mut ws = Workspace::new();
    for epoch in plan.epochs() {
        report.epochs += 1;
        if epoch.active.is_empty() {
            // Free flight, sampled piecewise.
            let mut t = epoch.start;
            while t < epoch.end {
                let stop = samples
                    .get(next_sample)
                    .copied()
                    .filter(|&s| s < epoch.end)
                    .unwrap_or(epoch.end);
                report.decay_loss += free_evolution(&mut psi, stop - t, atom, &opts.hamiltonian);
                t = stop;
                psi.time = t;
                emit(t, &psi, &mut next_sample, observer);
            }
            continue;
        }
        let pulses: Vec<PulseEvent> = epoch
            .active
            .iter()
            .map(|&i| plan.events[i].clone())
            .collect();
        let mut guard = opts.guard;
        loop {
            let (basis, distance) = epoch_basis(&psi, &pulses, guard);
            if basis.len() > opts.max_basis {
                return Err(Error::BasisBudget {
                    requested: basis.len(),
                    budget: opts.max_basis,
                });
            }
            let h = EpochHamiltonian::new(&basis, &pulses, atom, epoch.start, &opts.hamiltonian)?;
            let mut chi = psi.to_dense(&basis)?;
            let norm_before: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
            let mut t = epoch.start;
            let mut steps = 0;
            let mut trial_samples = Vec::new();
            let mut k = next_sample;
            while t < epoch.end {
                let stop = samples
                    .get(k)
                    .copied()
                    .filter(|&s| s < epoch.end)
                    .unwrap_or(epoch.end);
                steps += propagate(&h, &mut chi, t, stop, opts.dt, &mut ws)?;
                t = stop;
                if stop < epoch.end {
                    let mut snapshot = chi.clone();
                    h.from_epoch_frame(&mut snapshot, t);
                    trial_samples.push(WaveFunction::from_dense(&basis, &snapshot, t));
                    k += 1;
                }
            }
            h.from_epoch_frame(&mut chi, epoch.end);
            let edge: f64 = basis
                .states()
                .iter()
                .zip(&chi)
                .filter(|(s, _)| guard > 0 && distance[*s] == guard)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            if edge > opts.boundary_tolerance && guard < 64 {
                guard += opts.guard.max(1);
                continue;
            }
            if edge > opts.boundary_tolerance {
                return Err(Error::BasisBudget {
                    requested: basis.len(),
                    budget: opts.max_basis,
                });
            }
            let norm_after: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
            if opts.hamiltonian.decay_rate.is_some() {
                report.decay_loss += norm_before - norm_after;
            }
            report.steps += steps;
            report.largest_basis = report.largest_basis.max(basis.len());
            report.max_residual = report.max_residual.max(h.max_residual());
            for s in trial_samples {
                emit(s.time, &s, &mut next_sample, observer);
            }
            psi = WaveFunction::from_dense(&basis, &chi, epoch.end);
            report.pruned += psi.prune(opts.prune_floor);
            break;
        }
        emit(psi.time, &psi, &mut next_sample, observer);
    }
    psi.time = plan.end();
    observer(psi.time, &psi);
    Ok((psi, report))
}

/// Evolves `psi` through `plan` without sampling.
pub fn evolve(
    psi: &WaveFunction,
    plan: &SequencePlan,
    atom: &AtomParams,
    opts: &EngineOptions,
) -> Result<(WaveFunction, EvolutionReport)> {
    evolve_observed(psi, plan, atom, opts, None, &mut |_, _| {})
}
