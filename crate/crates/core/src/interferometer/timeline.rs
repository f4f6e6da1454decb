//! Stage-by-stage execution of an experiment timeline on a set of arms.

use num_complex::Complex64;
use std::collections::BTreeSet;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::interferometer::arms::{
    axis_index, class_velocity, regroup, tracks, Arm, ArmTrack, Geometry, X, Y, Z,
};
use crate::interferometer::log::{LevelSummary, StageKind, StageRecord};
use crate::pulses::event::PulseEvent;
use crate::pulses::plan::SequencePlan;
use crate::quantum::evolve::{evolve, free_evolution, EngineOptions, EvolutionReport};
use crate::quantum::level::{Axis, Level, State};
use crate::quantum::wavefunction::WaveFunction;

/// Allowed drift of tracked + untracked + lost population away from 1.
pub const CONSERVATION_TOLERANCE: f64 = 1e-7;

/// Hybrid quantum/classical state of an interferometer run.
#[derive(Debug, Clone)]
pub struct Interferometer {
    atom: AtomParams,
    engine: EngineOptions,
    geometry: Geometry,
    time: f64,
    arms: Vec<Arm>,
    untracked: f64,
    report: EvolutionReport,
    log: Vec<StageRecord>,
    warnings: Vec<String>,
}

impl Interferometer {
    /// One arm at the origin in `initial`, at t = 0.
    pub fn new(
        initial: State,
        atom: AtomParams,
        engine: EngineOptions,
        geometry: Geometry,
    ) -> Result<Self> {
        atom.validate()?;
        geometry.validate()?;
        Ok(Interferometer {
            atom,
            engine,
            geometry,
            time: 0.0,
            arms: vec![Arm {
                id: 0,
                position: [0.0; 3],
                psi: WaveFunction::basis_state(initial),
            }],
            untracked: 0.0,
            report: EvolutionReport::default(),
            log: Vec::new(),
            warnings: Vec::new(),
        })
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn atom(&self) -> &AtomParams {
        &self.atom
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn arms(&self) -> &[Arm] {
        &self.arms
    }

    pub fn untracked(&self) -> f64 {
        self.untracked
    }

    pub fn report(&self) -> &EvolutionReport {
        &self.report
    }

    pub fn log(&self) -> &[StageRecord] {
        &self.log
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    /// Vertical velocity at the current time.
    pub fn velocity_y(&self) -> f64 {
        self.geometry.initial_velocity[Y] - self.atom.gravity_m_s2 * self.time
    }

    /// Tracks of every component above the arm floor.
    pub fn tracks(&self) -> Vec<ArmTrack> {
        tracks(
            &self.arms,
            self.velocity_y(),
            self.geometry.arm_floor,
            &self.atom,
            &self.geometry,
        )
    }

    /// Arm holding the largest population of `state`.
    pub fn locate(&self, state: &State) -> Option<&Arm> {
        self.arms
            .iter()
            .filter(|a| a.psi.population(state) > 0.0)
            .max_by(|a, b| a.psi.population(state).total_cmp(&b.psi.population(state)))
    }

    fn locate_index(&self, state: &State) -> Result<usize> {
        let arm = self
            .locate(state)
            .ok_or_else(|| Error::physics(format!("no arm holds {state}")))?;
        Ok(arm.id)
    }

    /// Velocity of the arm carrying `state`, from that state's momentum.
    pub fn state_velocity(&self, state: &State) -> [f64; 3] {
        class_velocity(
            state.nz as f64,
            state.nx as f64,
            self.velocity_y(),
            &self.atom,
            &self.geometry,
        )
    }

    /// Time until the arms carrying `a` and `b` coincide along `axis`.
    pub fn closure_time(&self, a: &State, b: &State, axis: Axis) -> Result<f64> {
        let k = axis_index(axis);
        let pa = self.arms[self.locate_index(a)?].position[k];
        let pb = self.arms[self.locate_index(b)?].position[k];
        let va = self.state_velocity(a)[k];
        let vb = self.state_velocity(b)[k];
        let rel = va - vb;
        let t = -(pa - pb) / rel;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::physics(format!(
                "arms {a} and {b} are not converging along {axis:?}"
            )));
        }
        Ok(t)
    }

    fn significant(&self) -> impl Iterator<Item = &Arm> {
        let floor = self.geometry.selectivity_floor;
        self.arms.iter().filter(move |a| a.population() >= floor)
    }

    /// Spread of significant arm centroids along `axis`.
    pub fn separation(&self, axis: Axis) -> f64 {
        let k = axis_index(axis);
        let pos: Vec<f64> = self.significant().map(|a| a.position[k]).collect();
        let lo = pos.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = pos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if pos.is_empty() {
            0.0
        } else {
            hi - lo
        }
    }

    /// Largest distance between any two significant arm centroids.
    pub fn centroid_mismatch(&self) -> f64 {
        let arms: Vec<&Arm> = self.significant().collect();
        let mut worst: f64 = 0.0;
        for (i, a) in arms.iter().enumerate() {
            for b in &arms[i + 1..] {
                let d: f64 = (0..3)
                    .map(|k| (a.position[k] - b.position[k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn total_population(&self) -> f64 {
        self.arms.iter().map(Arm::population).sum()
    }

    pub fn level_population(&self, level: Level) -> f64 {
        self.arms
            .iter()
            .map(|a| a.psi.level_population(level))
            .sum()
    }

    fn merge_report(&mut self, r: &EvolutionReport) {
        self.report.steps += r.steps;
        self.report.epochs += r.epochs;
        self.report.largest_basis = self.report.largest_basis.max(r.largest_basis);
        self.report.pruned += r.pruned;
        self.report.decay_loss += r.decay_loss;
        self.report.max_residual = self.report.max_residual.max(r.max_residual);
    }

    fn check_conservation(&self, stage: &str) -> Result<()> {
        let total =
            self.total_population() + self.untracked + self.report.decay_loss + self.report.pruned;
        if (total - 1.0).abs() > CONSERVATION_TOLERANCE {
            return Err(Error::Normalization(format!(
                "population {total:.12} after stage '{stage}' (tracked {:.12}, untracked {:.3e})",
                self.total_population(),
                self.untracked
            )));
        }
        Ok(())
    }

    fn record(&mut self, name: &str, kind: StageKind, t_start: f64) {
        let mut levels = Vec::new();
        for level in Level::ALL {
            let (mut p, mut z, mut x) = (0.0, 0.0, 0.0);
            for arm in &self.arms {
                for (s, a) in arm.psi.iter() {
                    if s.level == level {
                        let w = a.norm_sqr();
                        p += w;
                        z += w * s.nz as f64;
                        x += w * s.nx as f64;
                    }
                }
            }
            if p > 0.0 {
                levels.push(LevelSummary {
                    level,
                    population: p,
                    mean_nz: z / p,
                    mean_nx: x / p,
                });
            }
        }
        let g = self.atom.gravity_m_s2;
        let v0 = self.geometry.initial_velocity[Y];
        let drop_y = 0.5 * g * self.time * self.time - v0 * self.time;
        self.log.push(StageRecord {
            name: name.to_string(),
            kind,
            t_start,
            t_end: self.time,
            levels,
            sep_z: self.separation(Axis::Z),
            sep_x: self.separation(Axis::X),
            drop_y,
            untracked: self.untracked,
            arms: self.tracks(),
        });
    }

    /// Moves every arm classically for `duration`, with kinetic phases.
    fn advance(&mut self, duration: f64) {
        if duration <= 0.0 {
            return;
        }
        let vy = self.velocity_y();
        let g = self.atom.gravity_m_s2;
        let atom = self.atom;
        let geometry = self.geometry;
        let mut loss = 0.0;
        for arm in &mut self.arms {
            loss += free_evolution(&mut arm.psi, duration, &atom, &self.engine.hamiltonian);
        }
        self.report.decay_loss += loss;
        let arms = std::mem::take(&mut self.arms);
        let (arms, lost) = regroup(arms, &geometry, |arm, (nz, nx)| {
            let v = class_velocity(nz as f64, nx as f64, vy, &atom, &geometry);
            let mut p = arm.position;
            p[X] += v[X] * duration;
            p[Z] += v[Z] * duration;
            p[Y] += vy * duration - 0.5 * g * duration * duration;
            p
        });
        self.arms = arms;
        self.untracked += lost;
        self.time += duration;
    }

    /// Free flight of all arms.
    pub fn drift(&mut self, name: &str, duration: f64) -> Result<()> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::config(format!(
                "drift '{name}' has invalid duration {duration}"
            )));
        }
        let t0 = self.time;
        self.advance(duration);
        self.check_conservation(name)?;
        self.record(name, StageKind::Drift, t0);
        Ok(())
    }

    /// Runs `plan` on the selected arms (all when `targets` is `None`); the
    /// other arms fly freely. Arms are moved with each momentum class ramping
    /// linearly from the arm's mean momentum at the start.
    fn run_plan(&mut self, plan: &SequencePlan, targets: Option<&BTreeSet<usize>>) -> Result<()> {
        if plan.start < self.time - 1e-15 {
            return Err(Error::config(format!(
                "sequence starts at {} s, before the current time {} s",
                plan.start, self.time
            )));
        }
        self.advance(plan.start - self.time);
        let t0 = self.time;
        let t1 = plan.end().max(t0);
        let duration = t1 - t0;
        let touched: BTreeSet<Level> = plan
            .events
            .iter()
            .flat_map(|e| {
                let tr = e.transition();
                [tr.from, tr.to]
            })
            .collect();
        let mut starts = Vec::with_capacity(self.arms.len());
        let mut reports = Vec::new();
        let mut loss = 0.0;
        for arm in &mut self.arms {
            starts.push(arm.mean_momentum());
            let driven = targets.is_none_or(|t| t.contains(&arm.id))
                && arm.psi.states().any(|s| touched.contains(&s.level));
            if driven {
                let mut psi = arm.psi.clone();
                psi.time = t0;
                let (out, report) = evolve(&psi, plan, &self.atom, &self.engine)?;
                arm.psi = out;
                reports.push(report);
            } else {
                loss +=
                    free_evolution(&mut arm.psi, duration, &self.atom, &self.engine.hamiltonian);
            }
            arm.psi.time = t1;
        }
        self.report.decay_loss += loss;
        for r in &reports {
            self.merge_report(r);
        }

        let vr = self.atom.recoil_velocity();
        let v0 = self.geometry.initial_velocity;
        let vy = self.velocity_y();
        let g = self.atom.gravity_m_s2;
        let geometry = self.geometry;
        let arms = std::mem::take(&mut self.arms);
        let ids: Vec<usize> = arms.iter().map(|a| a.id).collect();
        let (arms, lost) = regroup(arms, &geometry, |arm, (nz, nx)| {
            let idx = ids.iter().position(|&i| i == arm.id).unwrap_or(0);
            let (mz, mx) = starts[idx];
            let mut p = arm.position;
            p[Z] += duration * (v0[Z] + 0.5 * vr * (mz + nz as f64));
            p[X] += duration * (v0[X] + 0.5 * vr * (mx + nx as f64));
            p[Y] += vy * duration - 0.5 * g * duration * duration;
            p
        });
        self.arms = arms;
        self.untracked += lost;
        self.time = t1;
        Ok(())
    }

    /// Applies a spatially unresolved pulse sequence to every arm.
    pub fn sequence(&mut self, name: &str, plan: &SequencePlan) -> Result<()> {
        let t0 = self.time;
        self.run_plan(plan, None)?;
        self.check_conservation(name)?;
        self.record(name, StageKind::QuantumSequence, t0);
        Ok(())
    }

    /// Applies `event` (re-timed to start now) only to arms whose centroid
    /// lies within half a beam width of `center` along `axis`.
    ///
    /// The arms holding the `intended` states must be inside that region;
    /// every other significant arm must be at least one beam width plus one
    /// cloud size away from `center`.
    pub fn selective(
        &mut self,
        name: &str,
        event: &PulseEvent,
        axis: Axis,
        center: f64,
        intended: &[State],
    ) -> Result<()> {
        let k = axis_index(axis);
        let w = self.geometry.beam_width;
        let clear = w + self.geometry.cloud_size;
        let mut wanted = BTreeSet::new();
        for s in intended {
            wanted.insert(self.locate_index(s)?);
        }
        let mut targets = BTreeSet::new();
        for arm in &self.arms {
            let d = (arm.position[k] - center).abs();
            let inside = d <= 0.5 * w;
            if inside {
                targets.insert(arm.id);
            }
            let describe = || {
                format!(
                    "arm {} (population {:.3e}) is {:.3} mm from the beam centre",
                    arm.id,
                    arm.population(),
                    d * 1e3
                )
            };
            if wanted.contains(&arm.id) {
                if !inside {
                    return Err(Error::Selectivity {
                        stage: name.to_string(),
                        detail: format!("{}; the beam covers ±{:.3} mm", describe(), 0.5 * w * 1e3),
                    });
                }
            } else if d < clear {
                let detail = format!(
                    "{}; unaddressed arms need ≥ {:.3} mm",
                    describe(),
                    clear * 1e3
                );
                if arm.population() >= self.geometry.selectivity_floor {
                    return Err(Error::Selectivity {
                        stage: name.to_string(),
                        detail,
                    });
                }
                self.warnings.push(format!("{name}: {detail}"));
            }
        }
        if targets.is_empty() {
            self.warnings.push(format!(
                "{name}: no arm inside the selective beam; pulse skipped"
            ));
        }
        let mut ev = event.clone();
        ev.envelope.start = self.time;
        let mut plan = SequencePlan::new(self.time);
        plan.push(ev);
        let t0 = self.time;
        self.run_plan(&plan, Some(&targets))?;
        self.check_conservation(name)?;
        self.record(name, StageKind::SelectivePulse, t0);
        Ok(())
    }

    /// Multiplies the arm holding `state` by e^{iφ}.
    pub fn inject_phase(&mut self, state: &State, phase: f64) -> Result<()> {
        let idx = self.locate_index(state)?;
        self.arms[idx].psi.scale(Complex64::from_polar(1.0, phase));
        Ok(())
    }

    /// Logs a measurement stage without changing the state.
    pub fn measure(&mut self, name: &str) {
        let t = self.time;
        self.record(name, StageKind::Measurement, t);
    }

    /// Wavefunction of all arms within `radius` of the largest arm.
    pub fn detected(&self, radius: f64) -> WaveFunction {
        let mut psi = WaveFunction::new(self.time);
        let Some(main) = self
            .arms
            .iter()
            .max_by(|a, b| a.population().total_cmp(&b.population()))
        else {
            return psi;
        };
        for arm in &self.arms {
            let d: f64 = (0..3)
                .map(|k| (arm.position[k] - main.position[k]).powi(2))
                .sum::<f64>()
                .sqrt();
            if d <= radius {
                for (s, a) in arm.psi.iter() {
                    psi.add(*s, *a);
                }
            }
        }
        psi
    }
}
