//! Interfere two plane-wave arms and recover their spacing from the pattern.
//! Writes `fringes.csv` and `fringes.pgm` to the current directory.

use std::fs::File;
use std::io::BufWriter;

use recoil_ladder::fringes::{
    contrast, extract_spacing, synthesize, write_pattern_csv, write_pattern_pgm, CoherenceEnvelope,
    FringeSource, GridSpec,
};
use recoil_ladder::quantum::{Axis, Level};
use recoil_ladder::AtomParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let atom = AtomParams::rubidium87();
    let sources = [
        FringeSource::new(1.0, Level::A, -50, 0),
        FringeSource::new(1.0, Level::A, 50, 0),
    ];
    let pattern = synthesize(
        &sources,
        &GridSpec::default(),
        &atom,
        Some(CoherenceEnvelope::default()),
    )?;

    let spacing = extract_spacing(&pattern, Axis::Z)?;
    let exact = atom.lattice_wavelength() / 100.0;
    println!(
        "period {:.4} nm, expected {:.4} nm, contrast {:.4}",
        spacing.period * 1e9,
        exact * 1e9,
        contrast(&pattern)
    );

    write_pattern_csv(&pattern, BufWriter::new(File::create("fringes.csv")?))?;
    write_pattern_pgm(&pattern, BufWriter::new(File::create("fringes.pgm")?))?;
    Ok(())
}
