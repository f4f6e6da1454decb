use recoil_ladder::interferometer::{
    run_plan_2d, run_plan_raman_1d, Geometry, Plan2d, PlanResult, RamanPlan1d, StageRecord,
};
use recoil_ladder::quantum::{EngineOptions, Level};
use recoil_ladder::AtomParams;

fn atom() -> AtomParams {
    AtomParams::rubidium87()
}

fn total(stage: &StageRecord) -> f64 {
    stage.levels.iter().map(|l| l.population).sum::<f64>() + stage.untracked
}

fn conserved(result: &PlanResult) {
    for stage in &result.log {
        let t = total(stage);
        assert!((t - 1.0).abs() < 1e-7, "stage {} holds {t}", stage.name);
    }
}

fn sorted_momenta(result: &PlanResult, level: Level) -> Vec<(i32, i32)> {
    let mut v: Vec<_> = result.arms_on(level).iter().map(|a| (a.nz, a.nx)).collect();
    v.sort();
    v
}

#[test]
fn raman_plan_keeps_asymmetric_bookkeeping() {
    let result = run_plan_raman_1d(
        &RamanPlan1d::default(),
        &atom(),
        &EngineOptions::default(),
        &Geometry::default(),
    )
    .unwrap();
    conserved(&result);
    let reversal = result.stage("z reversal").unwrap();
    let mut after: Vec<_> = reversal.arms.iter().map(|a| (a.level, a.nz)).collect();
    after.sort();
    assert_eq!(after, vec![(Level::A, -48), (Level::C, 46)]);
    assert_eq!(sorted_momenta(&result, Level::A), vec![(-48, 0), (46, 0)]);
    assert!(result.closure_mismatch < 0.1 * Geometry::default().cloud_size);
    assert!(result.warnings.is_empty(), "{:?}", result.warnings);
}

#[test]
fn two_dimensional_plan_closes_on_four_arms() {
    let result = run_plan_2d(
        &Plan2d::default(),
        &atom(),
        &EngineOptions::default(),
        &Geometry::default(),
    )
    .unwrap();
    conserved(&result);
    assert_eq!(
        sorted_momenta(&result, Level::A),
        vec![(-48, -96), (-48, 94), (46, -96), (46, 94)]
    );
    assert!(result.closure_mismatch < 0.1 * Geometry::default().cloud_size);
    assert!(result.warnings.is_empty(), "{:?}", result.warnings);

    // Convergence in z is half as fast as in x.
    let vz: Vec<f64> = result.arms.iter().map(|a| a.velocity[2].abs()).collect();
    let vx: Vec<f64> = result.arms.iter().map(|a| a.velocity[0].abs()).collect();
    let (vz, vx) = (vz.iter().sum::<f64>() / 4.0, vx.iter().sum::<f64>() / 4.0);
    assert!((vx / vz - 2.0).abs() < 0.05, "vx {vx} vz {vz}");
}

#[test]
fn minimal_two_dimensional_plan_splits_four_ways() {
    // A few recoils separate the arms slowly; a small cloud keeps them addressable.
    let geometry = Geometry {
        cloud_size: 0.1e-3,
        beam_width: 0.05e-3,
        merge_distance: 1e-6,
        ..Geometry::default()
    };
    let plan = Plan2d {
        p: 1,
        q: 1,
        drift_x: Some(3e-3),
        ..Plan2d::default()
    };
    let result = run_plan_2d(&plan, &atom(), &EngineOptions::default(), &geometry).unwrap();
    conserved(&result);
    let arms = result.arms_on(Level::A);
    assert_eq!(arms.len(), 4);
    for arm in &arms {
        assert!((arm.population - 0.25).abs() < 1e-6, "{}", arm.population);
    }
}

#[test]
fn gravity_only_moves_arms_vertically() {
    let engine = EngineOptions::default();
    let geometry = Geometry::default();
    let weak = AtomParams {
        gravity_m_s2: 1.0,
        ..atom()
    };
    let a = run_plan_raman_1d(&RamanPlan1d::default(), &atom(), &engine, &geometry).unwrap();
    let b = run_plan_raman_1d(&RamanPlan1d::default(), &weak, &engine, &geometry).unwrap();
    assert_eq!(a.log.len(), b.log.len());
    for (sa, sb) in a.log.iter().zip(&b.log) {
        assert_eq!(sa.sep_z.to_bits(), sb.sep_z.to_bits(), "stage {}", sa.name);
        assert_eq!(sa.sep_x.to_bits(), sb.sep_x.to_bits(), "stage {}", sa.name);
        for (x, y) in sa.arms.iter().zip(&sb.arms) {
            assert_eq!(x.position[0].to_bits(), y.position[0].to_bits());
            assert_eq!(x.position[2].to_bits(), y.position[2].to_bits());
        }
    }
    let (ya, yb) = (a.log.last().unwrap().drop_y, b.log.last().unwrap().drop_y);
    assert!((ya / yb - atom().gravity_m_s2).abs() < 1e-9, "{ya} {yb}");
}

#[test]
fn unclosed_plans_warn() {
    let plan = RamanPlan1d {
        drift2: Some(1e-3),
        ..RamanPlan1d::default()
    };
    let result = run_plan_raman_1d(
        &plan,
        &atom(),
        &EngineOptions::default(),
        &Geometry::default(),
    )
    .unwrap();
    assert!(result.closure_mismatch > 0.1 * Geometry::default().cloud_size);
    assert!(!result.warnings.is_empty());
}
