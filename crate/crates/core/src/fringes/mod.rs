//! Interference patterns of recombined arms, spacing and contrast analysis,
//! and Ramsey detuning scans.

pub mod export;
pub mod pattern;
pub mod ramsey;
pub mod spectrum;

pub use export::{write_pattern_csv, write_pattern_pgm, write_pattern_sidecar, write_ramsey_csv};
pub use pattern::{synthesize, CoherenceEnvelope, FringePattern, FringeSource, GridSpec};
pub use ramsey::{delta_grid, ramsey_scan, RamseyPoint, RamseyScan};
pub use spectrum::{contrast, extract_spacing, Spacing};
