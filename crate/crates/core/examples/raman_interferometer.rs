//! Run the Raman-route one-dimensional interferometer and show the stage log
//! and the arms that meet at recombination.

use recoil_ladder::interferometer::{run_plan_raman_1d, Geometry, RamanPlan1d};
use recoil_ladder::quantum::EngineOptions;
use recoil_ladder::AtomParams;

fn main() -> recoil_ladder::Result<()> {
    let geometry = Geometry::default();
    let result = run_plan_raman_1d(
        &RamanPlan1d::default(),
        &AtomParams::rubidium87(),
        &EngineOptions::default(),
        &geometry,
    )?;

    for stage in &result.log {
        println!(
            "{:<20} {:9.6} s .. {:9.6} s   sep_z {:.3e} m",
            stage.name, stage.t_start, stage.t_end, stage.sep_z
        );
    }
    for arm in &result.arms {
        println!(
            "arm {:?} n_z {:4} n_x {:4} population {:.4}",
            arm.level, arm.nz, arm.nx, arm.population
        );
    }
    println!(
        "closure mismatch {:.2e} m (cloud {:.1e} m)",
        result.closure_mismatch, geometry.cloud_size
    );
    for w in &result.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
