//! Experiment timelines on a hybrid quantum/classical model: amplitudes on
//! the recoil lattice, classical centroids per spatially separated arm.

pub mod arms;
pub mod diagnostics;
pub mod log;
pub mod plans;
pub mod timeline;

pub use arms::{Arm, ArmTrack, Geometry};
pub use diagnostics::{
    ladder_fidelity, ladder_trace, pair_fidelity, raman_pi_residual, LadderFidelity, LadderSample,
    LadderTrace, PairBoundary,
};
pub use log::{write_stage_csv, LevelSummary, StageKind, StageRecord};
pub use plans::{
    ramsey_prefix, run_plan_1d_adiabatic, run_plan_2d, run_plan_raman_1d, run_plan_ramsey, Plan1d,
    Plan2d, PlanResult, RamanPlan1d, RamseyPlan, RamseyPrefix,
};
pub use timeline::Interferometer;
