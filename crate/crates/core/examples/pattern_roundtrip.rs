//! Encode an image as an arccos phase mask, imprint it on an equal
//! superposition and recover it from the interference.
//!
//! cargo run --example pattern_roundtrip -- [input.pgm]

use std::path::PathBuf;

use recoil_ladder::patterngen::{gear_silhouette, roundtrip, TargetPattern};
use recoil_ladder::pgm::{load_pgm, quantize, save_pgm16};

fn main() -> recoil_ladder::Result<()> {
    let image = match std::env::args().nth(1) {
        Some(path) => load_pgm(&PathBuf::from(path))?,
        None => gear_silhouette(256, 16),
    };
    let target = TargetPattern::from_unit(&image, 2e-6)?;
    let (recovered, report) = roundtrip(&target, 200.0)?;

    println!(
        "{}x{} pixels, max error {:.2e}, output pitch {:.1} nm",
        image.nrows(),
        image.ncols(),
        report.max_error,
        report.output_pitch_m * 1e9
    );
    save_pgm16(
        &quantize(&recovered, -1.0, 1.0)?,
        &PathBuf::from("recovered.pgm"),
    )?;
    Ok(())
}
