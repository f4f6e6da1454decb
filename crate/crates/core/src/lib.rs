//! Photon-recoil ladder atom interferometry.
//!
//! States live on a lattice of momenta `(level, n_z, n_x)` in units of ħk.
//! [`quantum`] integrates the coherent dynamics, [`pulses`] builds the pulse
//! sequences, [`interferometer`] strings them into timelines with spatially
//! tracked arms, and [`fringes`] turns recombined arms into patterns and
//! spacings. [`patterngen`] covers phase-mask patterning of arbitrary images.
//!
//! ```no_run
//! use recoil_ladder::interferometer::{run_plan_raman_1d, Geometry, RamanPlan1d};
//! use recoil_ladder::quantum::EngineOptions;
//! use recoil_ladder::AtomParams;
//!
//! let result = run_plan_raman_1d(
//!     &RamanPlan1d::default(),
//!     &AtomParams::rubidium87(),
//!     &EngineOptions::default(),
//!     &Geometry::default(),
//! )?;
//! for arm in &result.arms {
//!     println!("{:?} {} {:.3}", arm.level, arm.nz, arm.population);
//! }
//! # Ok::<(), recoil_ladder::Error>(())
//! ```

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atom;
pub mod cli;
pub mod error;
pub mod fringes;
pub mod interferometer;
pub mod patterngen;
pub mod pgm;
pub mod pulses;
pub mod quantum;

pub use atom::AtomParams;
pub use error::{Error, Result};
