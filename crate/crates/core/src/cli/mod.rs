//! Config-driven runs behind the `recoil-ladder` binary.

pub mod catalog;
pub mod config;
pub mod run;

pub use catalog::{list_plans, PlanInfo, PLANS};
pub use config::{ExperimentConfig, PlanConfig};
pub use run::{config_hash, run, run_config, Manifest};
