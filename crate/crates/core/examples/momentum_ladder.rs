//! Climb the recoil ladder with counter-intuitive pulse pairs and print the
//! mean axial momentum of the deflected arm at every pair boundary.
//!
//! cargo run --release --example momentum_ladder -- 30

use recoil_ladder::interferometer::ladder_trace;
use recoil_ladder::pulses::{AdiabaticPulses, RamanPulses};
use recoil_ladder::quantum::EngineOptions;
use recoil_ladder::AtomParams;

fn main() -> recoil_ladder::Result<()> {
    let n_pairs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let pulses = AdiabaticPulses::default();
    let trace = ladder_trace(
        n_pairs,
        12,
        &pulses,
        &RamanPulses::default(),
        &AtomParams::rubidium87(),
        &EngineOptions::default(),
    )?;

    println!("adiabaticity {:.4}", pulses.adiabaticity());
    for (k, nz) in trace.boundary_momenta().iter().enumerate() {
        println!("pair {k:3}  <n_z> {nz:8.3}");
    }
    println!(
        "predicted {:?}, deflected {:.5}, undeflected {:.5}, basis {}",
        trace.predicted, trace.deflected, trace.undeflected, trace.basis
    );
    Ok(())
}
