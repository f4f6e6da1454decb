use serde::{Deserialize, Serialize};
use std::path::PathBuf;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::fringes::{CoherenceEnvelope, FringeSource, GridSpec};
use crate::interferometer::{Geometry, Plan1d, Plan2d, RamanPlan1d, RamseyPlan};
use crate::pulses::{AdiabaticPulses, RamanPulses};
use crate::quantum::{EngineOptions, HamiltonianOptions};

/// One run of the tool: a plan plus the shared physical and numerical settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub atom: AtomParams,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default)]
    pub geometry: Geometry,
    pub plan: PlanConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.atom.validate()?;
        self.geometry.validate()?;
        self.engine.options()?;
        self.plan.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    /// Step cap (s); automatic when absent.
    pub dt: Option<f64>,
    pub guard: i32,
    pub boundary_tolerance: f64,
    pub max_basis: usize,
    pub prune_floor: f64,
    pub kinetic: bool,
    /// Excited-state decay rate Γ (rad/s).
    pub decay_rate: Option<f64>,
}

impl Default for EngineConfig {
    fn default() -> Self {
        let e = EngineOptions::default();
        EngineConfig {
            dt: e.dt,
            guard: e.guard,
            boundary_tolerance: e.boundary_tolerance,
            max_basis: e.max_basis,
            prune_floor: e.prune_floor,
            kinetic: e.hamiltonian.kinetic,
            decay_rate: e.hamiltonian.decay_rate,
        }
    }
}

impl EngineConfig {
    pub fn options(&self) -> Result<EngineOptions> {
        if self.dt.is_some_and(|d| !(d > 0.0 && d.is_finite())) {
            return Err(Error::config("engine.dt must be positive"));
        }
        if self.guard < 1 || self.max_basis == 0 {
            return Err(Error::config(
                "engine.guard and engine.max_basis must be at least 1",
            ));
        }
        if !(self.boundary_tolerance > 0.0) || !(self.prune_floor >= 0.0) {
            return Err(Error::config("engine tolerances must be positive"));
        }
        if self
            .decay_rate
            .is_some_and(|g| !(g >= 0.0 && g.is_finite()))
        {
            return Err(Error::config("engine.decay_rate must be non-negative"));
        }
        Ok(EngineOptions {
            dt: self.dt,
            guard: self.guard,
            boundary_tolerance: self.boundary_tolerance,
            max_basis: self.max_basis,
            prune_floor: self.prune_floor,
            hamiltonian: HamiltonianOptions {
                kinetic: self.kinetic,
                decay_rate: self.decay_rate,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PlanConfig {
    Figure3(Figure3Config),
    Split1d(Split1dConfig),
    Ramsey(RamseyConfig),
    Split2d(Split2dConfig),
    Fringes(FringesConfig),
    Pattern(PatternConfig),
}

impl PlanConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            PlanConfig::Figure3(_) => "figure3",
            PlanConfig::Split1d(_) => "split1d",
            PlanConfig::Ramsey(_) => "ramsey",
            PlanConfig::Split2d(_) => "split2d",
            PlanConfig::Fringes(_) => "fringes",
            PlanConfig::Pattern(_) => "pattern",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PlanConfig::Figure3(c) => {
                if c.n_pairs == 0 || c.samples_per_pair == 0 {
                    return Err(Error::config(
                        "figure3 needs at least one pair and one sample per pair",
                    ));
                }
                if !(c.time_scale > 0.0 && c.time_scale.is_finite()) {
                    return Err(Error::config("figure3.time_scale must be positive"));
                }
                c.pulses.validate()?;
                c.raman.pi_time().map(|_| ())
            }
            PlanConfig::Split1d(c) => {
                match c.route {
                    Route::Adiabatic => c.adiabatic.validate()?,
                    Route::Raman => {
                        if c.raman.p == 0 {
                            return Err(Error::config("split1d.raman.p must be at least 1"));
                        }
                    }
                }
                c.fringes.validate()
            }
            PlanConfig::Ramsey(c) => {
                c.interferometer.validate()?;
                c.scan.validate()
            }
            PlanConfig::Split2d(c) => c.fringes.validate(),
            PlanConfig::Fringes(c) => {
                if c.sources.is_empty() {
                    return Err(Error::config("fringes.sources is empty"));
                }
                c.output.validate()
            }
            PlanConfig::Pattern(c) => {
                if !(c.pitch_m > 0.0) || !(c.magnification > 0.0) {
                    return Err(Error::config(
                        "pattern pitch and magnification must be positive",
                    ));
                }
                if c.input.is_none() && (c.gear.size < 8 || c.gear.teeth < 3) {
                    return Err(Error::config("built-in gear needs size ≥ 8 and ≥ 3 teeth"));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Figure3Config {
    pub n_pairs: usize,
    pub samples_per_pair: usize,
    /// Stretches T and divides g by this factor (adiabaticity unchanged).
    pub time_scale: f64,
    pub pulses: AdiabaticPulses,
    pub raman: RamanPulses,
}

impl Default for Figure3Config {
    fn default() -> Self {
        Figure3Config {
            n_pairs: 30,
            samples_per_pair: 12,
            time_scale: 1.0,
            pulses: AdiabaticPulses::default(),
            raman: RamanPulses::default(),
        }
    }
}

/// Grid and envelope for a synthesized fringe pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FringeOutput {
    pub grid: GridSpec,
    pub envelope: Option<CoherenceEnvelope>,
}

impl Default for FringeOutput {
    fn default() -> Self {
        FringeOutput {
            grid: GridSpec::default(),
            envelope: Some(CoherenceEnvelope::default()),
        }
    }
}

impl FringeOutput {
    fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.envelope.map_or(Ok(()), |e| e.validate())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Counter-intuitive Λ pulse pairs (Δn = 100 by default).
    #[default]
    Adiabatic,
    /// Raman π/2 plus alternating π pulses (Δn = 94 by default).
    Raman,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Split1dConfig {
    pub route: Route,
    pub adiabatic: Plan1d,
    pub raman: RamanPlan1d,
    pub fringes: FringeOutput,
}

/// Evenly spaced detunings in Δ/2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub lo_hz: f64,
    pub hi_hz: f64,
    pub points: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            lo_hz: -15.0,
            hi_hz: 15.0,
            points: 301,
        }
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<()> {
        crate::fringes::delta_grid(self.lo_hz, self.hi_hz, self.points).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RamseyConfig {
    pub interferometer: RamseyPlan,
    pub scan: ScanConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Split2dConfig {
    pub interferometer: Plan2d,
    pub fringes: FringeOutput,
}

impl Default for Split2dConfig {
    fn default() -> Self {
        Split2dConfig {
            interferometer: Plan2d::default(),
            fringes: FringeOutput {
                grid: GridSpec::plane(),
                ..FringeOutput::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FringesConfig {
    pub sources: Vec<FringeSource>,
    pub output: FringeOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GearConfig {
    pub size: usize,
    pub teeth: usize,
}

impl Default for GearConfig {
    fn default() -> Self {
        GearConfig {
            size: 64,
            teeth: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PatternConfig {
    /// PGM image, relative to the config file; the built-in gear when absent.
    pub input: Option<PathBuf>,
    pub gear: GearConfig,
    /// Input pixel pitch (m).
    pub pitch_m: f64,
    pub magnification: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig {
            input: None,
            gear: GearConfig::default(),
            pitch_m: 1e-6,
            magnification: 1.0,
        }
    }
}
