//! Split a cloud into four arms with z and x Raman ladders, then synthesize
//! the recombined two-dimensional grating and measure both periods.
//!
//! cargo run --release --example grating_2d -- 12 24

use recoil_ladder::fringes::{contrast, extract_spacing, synthesize, FringeSource, GridSpec};
use recoil_ladder::interferometer::{run_plan_2d, Geometry, Plan2d};
use recoil_ladder::quantum::{Axis, EngineOptions};
use recoil_ladder::AtomParams;

fn main() -> recoil_ladder::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<usize>());
    let p = args.next().and_then(|r| r.ok()).unwrap_or(12);
    let q = args.next().and_then(|r| r.ok()).unwrap_or(24);
    let atom = AtomParams::rubidium87();

    // Short ladders separate the arms slowly, so drift longer.
    let drift_z = 3.3e-3 * (12.0 / p as f64).max(24.0 / q as f64).max(1.0);
    let plan = Plan2d {
        p,
        q,
        drift_z,
        ..Plan2d::default()
    };
    let result = run_plan_2d(
        &plan,
        &atom,
        &EngineOptions::default(),
        &Geometry::default(),
    )?;
    for arm in &result.arms {
        println!(
            "arm {:?} ({:4}, {:4}) population {:.4}",
            arm.level, arm.nz, arm.nx, arm.population
        );
    }

    let sources = FringeSource::from_tracks(&result.arms);
    let pattern = synthesize(&sources, &GridSpec::plane(), &atom, None)?;
    println!("contrast {:.4}", contrast(&pattern));
    for axis in [Axis::Z, Axis::X] {
        let s = extract_spacing(&pattern, axis)?;
        println!(
            "{axis}: period {:.4} nm (bin {:.3} nm)",
            s.period * 1e9,
            s.bin_width * 1e9
        );
    }
    Ok(())
}
