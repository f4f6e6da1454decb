//! Scan the two-photon detuning of the Ramsey variant and print P_c.
//! The prefix up to the closing pulse is simulated once; each detuning only
//! reruns the final pulse.

use recoil_ladder::fringes::{delta_grid, ramsey_scan};
use recoil_ladder::interferometer::{ramsey_prefix, Geometry, RamseyPlan};
use recoil_ladder::quantum::EngineOptions;
use recoil_ladder::AtomParams;

fn main() -> recoil_ladder::Result<()> {
    let prefix = ramsey_prefix(
        &RamseyPlan::default(),
        &AtomParams::rubidium87(),
        &EngineOptions::default(),
        &Geometry::default(),
    )?;
    let scan = ramsey_scan(&prefix, &delta_grid(-15.0, 15.0, 121)?)?;

    for p in &scan.points {
        let bar = "#".repeat((p.population_c * 50.0).round() as usize);
        println!("{:7.2} Hz  {:.4}  {bar}", p.delta_hz(), p.population_c);
    }
    println!(
        "tau {:.4} s, period {:.4} Hz, 1/tau {:.4} Hz, central width {:.4} Hz",
        scan.tau,
        scan.period_hz,
        1.0 / scan.tau,
        scan.central_width_hz
    );
    Ok(())
}
