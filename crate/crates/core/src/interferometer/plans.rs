//! The canned experiment timelines.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::interferometer::arms::{ArmTrack, Geometry};
use crate::interferometer::log::StageRecord;
use crate::interferometer::timeline::Interferometer;
use crate::pulses::envelope::{PulseEnvelope, Shape};
use crate::pulses::event::{Polarization, PulseEvent};
use crate::pulses::ladder::{
    build_adiabatic_sequence, build_raman_sequence, copropagating_pulse, AdiabaticPulses,
    CopropagatingPair, RamanPulses, ADIABATICITY_LIMIT,
};
use crate::quantum::evolve::{EngineOptions, EvolutionReport};
use crate::quantum::level::{Axis, Level, State};

/// Outcome of a full timeline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanResult {
    pub plan: String,
    pub log: Vec<StageRecord>,
    /// Components of the final state above the arm floor.
    pub arms: Vec<ArmTrack>,
    pub untracked: f64,
    pub warnings: Vec<String>,
    /// Largest distance between significant arm centroids at the end (m).
    pub closure_mismatch: f64,
    pub end_time: f64,
    #[serde(skip)]
    pub report: EvolutionReport,
}

impl PlanResult {
    fn from_run(plan: &str, it: Interferometer) -> Self {
        PlanResult {
            plan: plan.to_string(),
            arms: it.tracks(),
            untracked: it.untracked(),
            warnings: it.warnings().to_vec(),
            closure_mismatch: it.centroid_mismatch(),
            end_time: it.time(),
            report: it.report().clone(),
            log: it.log().to_vec(),
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.log.iter().find(|s| s.name == name)
    }

    /// Final components on `level`, largest population first.
    pub fn arms_on(&self, level: Level) -> Vec<ArmTrack> {
        let mut v: Vec<ArmTrack> = self
            .arms
            .iter()
            .filter(|a| a.level == level)
            .copied()
            .collect();
        v.sort_by(|a, b| b.population.total_cmp(&a.population));
        v
    }
}

fn check_adiabatic(pulses: &AdiabaticPulses) -> Result<()> {
    pulses.validate()?;
    let a = pulses.adiabaticity();
    if a >= ADIABATICITY_LIMIT {
        return Err(Error::Adiabaticity {
            parameter: a,
            limit: ADIABATICITY_LIMIT,
        });
    }
    Ok(())
}

fn closing_check(it: &mut Interferometer) {
    let mismatch = it.centroid_mismatch();
    let limit = 0.1 * it.geometry().cloud_size;
    if mismatch > limit {
        it.warn(format!(
            "arm centroids differ by {:.3} mm at recombination (limit {:.3} mm)",
            mismatch * 1e3,
            limit * 1e3
        ));
    }
    it.measure("recombination");
}

/// 1D adiabatic plan: x π/2, 2N split pairs, drift, 2N′ reversal pairs,
/// selective π on the undeflected arm, drift to closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Plan1d {
    /// N of the splitter; 2N pairs are run.
    pub n_split: usize,
    pub drift1: f64,
    /// N′ of the reversal; 2N′ pairs are run.
    pub n_reverse: usize,
    /// Second drift; computed from the closure condition when absent.
    pub drift2: Option<f64>,
    pub pulses: AdiabaticPulses,
    pub raman: RamanPulses,
}

impl Default for Plan1d {
    fn default() -> Self {
        Plan1d {
            n_split: 25,
            drift1: 3.3e-3,
            n_reverse: 50,
            drift2: None,
            pulses: AdiabaticPulses::default(),
            raman: RamanPulses::default(),
        }
    }
}

impl Plan1d {
    pub fn validate(&self) -> Result<()> {
        if self.n_split == 0 || self.n_reverse == 0 {
            return Err(Error::config("ladder sizes must be at least 1"));
        }
        if !(self.drift1 > 0.0) || self.drift2.is_some_and(|d| !(d >= 0.0)) {
            return Err(Error::config("drift times must be positive"));
        }
        check_adiabatic(&self.pulses)?;
        self.raman.pi_time()?;
        Ok(())
    }
}

/// Runs the 1D adiabatic interferometer up to recombination.
pub fn run_plan_1d_adiabatic(
    params: &Plan1d,
    atom: &AtomParams,
    engine: &EngineOptions,
    geometry: &Geometry,
) -> Result<PlanResult> {
    params.validate()?;
    let origin = State::new(Level::A, 0, 0);
    let mut it = Interferometer::new(origin, *atom, *engine, *geometry)?;
    let half = copropagating_pulse(
        FRAC_PI_2,
        CopropagatingPair::PiPairX,
        (Level::A, Level::C),
        0.0,
        &params.raman,
    )?;
    let mut plan = crate::pulses::plan::SequencePlan::new(0.0);
    plan.push(half);
    it.sequence("x pi/2", &plan)?;

    let split = build_adiabatic_sequence(
        2 * params.n_split,
        it.time(),
        origin,
        -1,
        &params.pulses,
        atom,
    )?;
    it.sequence("split", &split.plan)?;
    it.drift("drift 1", params.drift1)?;
    let reverse = build_adiabatic_sequence(
        2 * params.n_reverse,
        it.time(),
        split.predicted,
        1,
        &params.pulses,
        atom,
    )?;
    it.sequence("reversal", &reverse.plan)?;

    let rest = State::new(Level::C, 0, 0);
    let centre = it.locate(&rest).map(|a| a.position[2]).unwrap_or(0.0);
    let pi = copropagating_pulse(
        PI,
        CopropagatingPair::PiPairX,
        (Level::A, Level::C),
        0.0,
        &params.raman,
    )?;
    it.selective("selective pi", &pi, Axis::Z, centre, &[rest])?;

    let moving = reverse.predicted;
    let drift2 = match params.drift2 {
        Some(d) => d,
        None => it.closure_time(&moving, &origin, Axis::Z)?,
    };
    it.drift("drift 2", drift2)?;
    closing_check(&mut it);
    Ok(PlanResult::from_run("split1d", it))
}

/// Ramsey plan: the 1D plan without the selective pulse, a third ladder
/// bringing the moving arm to b(+2), and a σσ π/2 with extra detuning Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RamseyPlan {
    pub n_split: usize,
    pub n_reverse: usize,
    /// Pairs in the third ladder (2N − 1).
    pub third_pairs: usize,
    /// Split-to-recombination time; sets both drifts when they are absent.
    pub tau: f64,
    pub drift1: Option<f64>,
    pub drift2: Option<f64>,
    /// Extra phase on the moving arm before recombination (rad).
    pub arm_phase: f64,
    pub pulses: AdiabaticPulses,
    pub raman: RamanPulses,
}

impl Default for RamseyPlan {
    fn default() -> Self {
        RamseyPlan {
            n_split: 25,
            n_reverse: 50,
            third_pairs: 49,
            tau: 0.102,
            drift1: None,
            drift2: None,
            arm_phase: 0.0,
            pulses: AdiabaticPulses::default(),
            raman: RamanPulses::default(),
        }
    }
}

impl RamseyPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_split == 0 || self.n_reverse == 0 || self.third_pairs == 0 {
            return Err(Error::config("ladder sizes must be at least 1"));
        }
        if self.third_pairs.is_multiple_of(2) {
            return Err(Error::config(
                "the third ladder needs an odd number of pairs to end on level b",
            ));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::config("tau must be positive"));
        }
        if !self.arm_phase.is_finite() {
            return Err(Error::config("arm phase must be finite"));
        }
        check_adiabatic(&self.pulses)?;
        self.raman.pi_time()?;
        Ok(())
    }

    /// Pulse time spent outside the drifts.
    pub fn pulse_time(&self) -> Result<f64> {
        let pairs = 2 * self.n_split + 2 * self.n_reverse + self.third_pairs;
        Ok(pairs as f64 * self.pulses.pair_duration() + self.raman.pi_time()?)
    }

    /// First drift for the requested τ (the second follows from closure).
    pub fn drift1_for_tau(&self) -> Result<f64> {
        let d = 0.5 * (self.tau - self.pulse_time()?);
        if !(d > 0.0) {
            return Err(Error::config(format!(
                "tau {} s is shorter than the pulse sequences",
                self.tau
            )));
        }
        Ok(d)
    }
}

/// Ramsey state just before the closing pulse, reusable across Δ.
#[derive(Debug, Clone)]
pub struct RamseyPrefix {
    it: Interferometer,
    raman: RamanPulses,
    closing_from: State,
    closing_to: State,
}

impl RamseyPrefix {
    /// Time of the closing pulse, measured from the opening π/2.
    pub fn tau(&self) -> f64 {
        self.it.time()
    }

    pub fn interferometer(&self) -> &Interferometer {
        &self.it
    }

    /// Closes the interferometer with two-photon detuning Δ (rad/s) and
    /// returns the c population of the detected cloud (normalized).
    pub fn population_c(&self, delta: f64) -> Result<f64> {
        Ok(self.close(delta)?.1)
    }

    /// As [`population_c`](Self::population_c), also returning the full run.
    pub fn close(&self, delta: f64) -> Result<(PlanResult, f64)> {
        let mut it = self.it.clone();
        let resonance =
            crate::pulses::chirp::chirp_offset(&self.closing_from, &self.closing_to, it.atom())?;
        let t_pi = self.raman.pi_time()?;
        let env = PulseEnvelope::new(Shape::Square, self.raman.omega_eff, it.time(), 0.5 * t_pi)?;
        let direction = (self.closing_to.nz - self.closing_from.nz).signum();
        let pulse = PulseEvent::raman(
            Polarization::SigmaPair,
            Axis::Z,
            self.closing_from.level,
            self.closing_to.level,
            direction,
            env,
            resonance + delta,
            self.raman.phase,
        )?;
        let mut plan = crate::pulses::plan::SequencePlan::new(it.time());
        plan.push(pulse);
        it.sequence("closing pi/2", &plan)?;
        let detected = it.detected(it.geometry().cloud_size);
        let total = detected.norm_sqr();
        if !(total > 0.0) {
            return Err(Error::physics("nothing left in the detection region"));
        }
        let pc = detected.level_population(Level::C) / total;
        it.measure("detection");
        Ok((PlanResult::from_run("ramsey", it), pc))
    }
}

/// Runs the Ramsey plan up to the closing pulse.
pub fn ramsey_prefix(
    params: &RamseyPlan,
    atom: &AtomParams,
    engine: &EngineOptions,
    geometry: &Geometry,
) -> Result<RamseyPrefix> {
    params.validate()?;
    let origin = State::new(Level::A, 0, 0);
    let mut it = Interferometer::new(origin, *atom, *engine, *geometry)?;
    let half = copropagating_pulse(
        FRAC_PI_2,
        CopropagatingPair::PiPairX,
        (Level::A, Level::C),
        0.0,
        &params.raman,
    )?;
    let mut plan = crate::pulses::plan::SequencePlan::new(0.0);
    plan.push(half);
    it.sequence("x pi/2", &plan)?;

    let split = build_adiabatic_sequence(
        2 * params.n_split,
        it.time(),
        origin,
        -1,
        &params.pulses,
        atom,
    )?;
    it.sequence("split", &split.plan)?;
    let drift1 = match params.drift1 {
        Some(d) => d,
        None => params.drift1_for_tau()?,
    };
    it.drift("drift 1", drift1)?;
    let reverse = build_adiabatic_sequence(
        2 * params.n_reverse,
        it.time(),
        split.predicted,
        1,
        &params.pulses,
        atom,
    )?;
    it.sequence("reversal", &reverse.plan)?;
    let moving = reverse.predicted;
    if params.arm_phase != 0.0 {
        it.inject_phase(&moving, params.arm_phase)?;
    }
    let drift2 = match params.drift2 {
        Some(d) => d,
        None => it.closure_time(&moving, &State::new(Level::C, 0, 0), Axis::Z)?,
    };
    it.drift("drift 2", drift2)?;
    let third = build_adiabatic_sequence(
        params.third_pairs,
        it.time(),
        moving,
        -1,
        &params.pulses,
        atom,
    )?;
    it.sequence("third ladder", &third.plan)?;
    Ok(RamseyPrefix {
        it,
        raman: params.raman,
        closing_from: third.predicted,
        closing_to: State::new(Level::C, 0, 0),
    })
}

/// P_c(Δ) for a single detuning.
pub fn run_plan_ramsey(
    params: &RamseyPlan,
    delta: f64,
    atom: &AtomParams,
    engine: &EngineOptions,
    geometry: &Geometry,
) -> Result<f64> {
    ramsey_prefix(params, atom, engine, geometry)?.population_c(delta)
}

/// Raman z ladder: π/2 + 2P π pulses, drift, 4P reversal pulses, selective
/// x-copropagating π on the c arm, drift to closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RamanPlan1d {
    pub p: usize,
    pub drift1: f64,
    pub drift2: Option<f64>,
    pub raman: RamanPulses,
}

impl Default for RamanPlan1d {
    fn default() -> Self {
        RamanPlan1d {
            p: 12,
            drift1: 3.3e-3,
            drift2: None,
            raman: RamanPulses::default(),
        }
    }
}

struct RamanZStage {
    a_arm: State,
    c_arm: State,
}

fn raman_z_stage(
    it: &mut Interferometer,
    p: usize,
    drift1: f64,
    raman: &RamanPulses,
    atom: &AtomParams,
) -> Result<RamanZStage> {
    let origin = State::new(Level::A, 0, 0);
    let split = build_raman_sequence(true, 2 * p, -1, Axis::Z, &[origin], it.time(), raman, atom)?;
    it.sequence("z split", &split.plan)?;
    it.drift("z drift", drift1)?;
    let reverse = build_raman_sequence(
        false,
        4 * p,
        split.last_direction,
        Axis::Z,
        &split.predicted,
        it.time(),
        raman,
        atom,
    )?;
    it.sequence("z reversal", &reverse.plan)?;
    if reverse.max_residual > 0.0 {
        let frac = reverse.max_residual / raman.omega_eff;
        if frac > 0.05 {
            it.warn(format!("z ladder residual detuning is {frac:.3} of Ω_eff"));
        }
    }
    let a_arm = *reverse
        .predicted
        .iter()
        .find(|s| s.level == Level::A)
        .ok_or_else(|| Error::physics("no a arm"))?;
    let c_arm = *reverse
        .predicted
        .iter()
        .find(|s| s.level == Level::C)
        .ok_or_else(|| Error::physics("no c arm"))?;
    let centre = it.locate(&c_arm).map(|a| a.position[2]).unwrap_or(0.0);
    let pi = copropagating_pulse(
        PI,
        CopropagatingPair::PiPairX,
        (Level::A, Level::C),
        0.0,
        raman,
    )?;
    it.selective("selective x pi", &pi, Axis::Z, centre, &[c_arm])?;
    Ok(RamanZStage {
        a_arm,
        c_arm: c_arm.with_level(Level::A),
    })
}

pub fn run_plan_raman_1d(
    params: &RamanPlan1d,
    atom: &AtomParams,
    engine: &EngineOptions,
    geometry: &Geometry,
) -> Result<PlanResult> {
    if params.p == 0 {
        return Err(Error::config("P must be at least 1"));
    }
    params.raman.pi_time()?;
    let mut it = Interferometer::new(State::new(Level::A, 0, 0), *atom, *engine, *geometry)?;
    let z = raman_z_stage(&mut it, params.p, params.drift1, &params.raman, atom)?;
    let drift2 = match params.drift2 {
        Some(d) => d,
        None => it.closure_time(&z.a_arm, &z.c_arm, Axis::Z)?,
    };
    it.drift("drift to closure", drift2)?;
    closing_check(&mut it);
    Ok(PlanResult::from_run("raman1d", it))
}

/// 2D Raman plan: z ladder with P, x ladder with Q, four arms on level a.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Plan2d {
    pub p: usize,
    pub q: usize,
    pub drift_z: f64,
    /// x drift; chosen so x and z close together when absent.
    pub drift_x: Option<f64>,
    /// Final drift; from x closure when absent.
    pub drift_final: Option<f64>,
    pub raman: RamanPulses,
}

impl Default for Plan2d {
    fn default() -> Self {
        Plan2d {
            p: 12,
            q: 24,
            drift_z: 3.3e-3,
            drift_x: None,
            drift_final: None,
            raman: RamanPulses::default(),
        }
    }
}

pub fn run_plan_2d(
    params: &Plan2d,
    atom: &AtomParams,
    engine: &EngineOptions,
    geometry: &Geometry,
) -> Result<PlanResult> {
    if params.p == 0 || params.q == 0 {
        return Err(Error::config("P and Q must be at least 1"));
    }
    if !(params.drift_z > 0.0) {
        return Err(Error::config("z drift must be positive"));
    }
    let raman = params.raman;
    let t_pi = raman.pi_time()?;
    let mut it = Interferometer::new(State::new(Level::A, 0, 0), *atom, *engine, *geometry)?;
    let z = raman_z_stage(&mut it, params.p, params.drift_z, &raman, atom)?;
    let z_close = it.time() + it.closure_time(&z.a_arm, &z.c_arm, Axis::Z)?;

    let split = build_raman_sequence(
        true,
        2 * params.q,
        -1,
        Axis::X,
        &[z.a_arm, z.c_arm],
        it.time(),
        &raman,
        atom,
    )?;
    it.sequence("x split", &split.plan)?;
    let vr = atom.recoil_velocity();
    let xa = split
        .predicted
        .iter()
        .filter(|s| s.level == Level::A)
        .map(|s| s.nx)
        .max()
        .unwrap_or(0);
    let xc = split
        .predicted
        .iter()
        .filter(|s| s.level == Level::C)
        .map(|s| s.nx)
        .min()
        .unwrap_or(0);
    let n = 2 * params.q as i32;
    // After reversal the a arms sit at −2n and the c arms at 2n − 2.
    let v_split = (xa - xc) as f64 * vr;
    let v_back = (4 * n - 2) as f64 * vr;
    let reversal_time = (4 * params.q) as f64 * t_pi + t_pi;
    let drift_x = match params.drift_x {
        Some(d) => d,
        None => {
            let d = (z_close - it.time() - reversal_time) / (1.0 + v_split / v_back);
            if !(d > 0.0) {
                return Err(Error::physics(
                    "z arms close before the x ladder can finish",
                ));
            }
            d
        }
    };
    it.drift("x drift", drift_x)?;
    let reverse = build_raman_sequence(
        false,
        4 * params.q,
        split.last_direction,
        Axis::X,
        &split.predicted,
        it.time(),
        &raman,
        atom,
    )?;
    it.sequence("x reversal", &reverse.plan)?;
    let c_states: Vec<State> = reverse
        .predicted
        .iter()
        .filter(|s| s.level == Level::C)
        .copied()
        .collect();
    let a_state = *reverse
        .predicted
        .iter()
        .find(|s| s.level == Level::A)
        .ok_or_else(|| Error::physics("no a arm"))?;
    let centre = c_states
        .first()
        .and_then(|s| it.locate(s))
        .map(|a| a.position[0])
        .ok_or_else(|| Error::physics("no c arm after x reversal"))?;
    let pi = copropagating_pulse(
        PI,
        CopropagatingPair::SigmaPairZ,
        (Level::A, Level::C),
        0.0,
        &raman,
    )?;
    it.selective("selective z pi", &pi, Axis::X, centre, &c_states)?;
    let c_now = c_states[0].with_level(Level::A);
    let drift_final = match params.drift_final {
        Some(d) => d,
        None => it.closure_time(&a_state, &c_now, Axis::X)?,
    };
    it.drift("drift to closure", drift_final)?;
    closing_check(&mut it);
    Ok(PlanResult::from_run("split2d", it))
}
