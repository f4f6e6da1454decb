use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use recoil_ladder::pulses::{Polarization, PulseEnvelope, PulseEvent, SequencePlan, Shape};
use recoil_ladder::quantum::{
    assemble, build_basis, dark_state, evolve, propagate, step, Axis, Basis, EngineOptions,
    EpochHamiltonian, HamiltonianOptions, Level, State, WaveFunction, Workspace,
};
use recoil_ladder::AtomParams;

fn atom() -> AtomParams {
    AtomParams::rubidium87()
}

fn square(peak: f64, duration: f64) -> PulseEnvelope {
    PulseEnvelope::new(Shape::Square, peak, 0.0, duration).unwrap()
}

fn lambda(pol: Polarization, direction: i32, peak: f64, detuning: f64) -> PulseEvent {
    PulseEvent::lambda_beam(pol, direction, square(peak, 1e-6), detuning).unwrap()
}

fn raman(
    axis: Axis,
    direction: i32,
    peak: f64,
    duration: f64,
    detuning: f64,
    phase: f64,
) -> PulseEvent {
    let pol = if axis == Axis::Z {
        Polarization::SigmaPair
    } else {
        Polarization::PiPair
    };
    PulseEvent::raman(
        pol,
        axis,
        Level::A,
        Level::C,
        direction,
        square(peak, duration),
        detuning,
        phase,
    )
    .unwrap()
}

fn mean_n(psi: &WaveFunction, axis: Axis) -> f64 {
    psi.iter()
        .map(|(s, a)| s.n(axis) as f64 * a.norm_sqr())
        .sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn assembled_hamiltonian_is_exactly_hermitian(
        g1 in 1e6f64..5e8,
        g2 in 1e6f64..5e8,
        d1 in -1e8f64..1e8,
        d2 in -1e8f64..1e8,
        omega in 1e6f64..1e9,
        phase in -PI..PI,
        t in 0.0f64..1e-6,
    ) {
        let basis = build_basis(&[Level::A, Level::B, Level::C, Level::E1], -4..=4, -2..=2).unwrap();
        let pulses = [
            lambda(Polarization::SigmaPlus, 1, g1, d1),
            lambda(Polarization::SigmaMinus, -1, g2, d2),
            raman(Axis::X, 1, omega, 1e-6, d1, phase),
        ];
        let m = assemble(&basis, &pulses, t, &atom()).unwrap().to_matrix();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (m[[i, j]], m[[j, i]]);
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert!(a.im == -b.im);
            }
        }
    }

    #[test]
    fn single_steps_preserve_the_norm(
        g in 1e7f64..1e9,
        omega in 1e7f64..1e9,
        delta in -5e8f64..5e8,
        t0 in 0.0f64..5e-7,
        seed in 0u64..1000,
    ) {
        let basis = build_basis(&[Level::A, Level::B, Level::C, Level::E1], -5..=5, 0..=0).unwrap();
        let pulses = [
            lambda(Polarization::SigmaPlus, 1, g, delta),
            lambda(Polarization::SigmaMinus, -1, g, 0.0),
            raman(Axis::Z, -1, omega, 1e-6, -delta, 0.3),
        ];
        let h = EpochHamiltonian::new(&basis, &pulses, &atom(), 0.0, &HamiltonianOptions::default()).unwrap();
        let mut chi: Vec<Complex64> = (0..basis.len())
            .map(|i| Complex64::from_polar(1.0, (seed as f64 + 1.0) * 0.37 * i as f64))
            .collect();
        let n0 = norm(&chi).sqrt();
        chi.iter_mut().for_each(|c| *c /= n0);
        let dt = 1.0 / (20.0 * h.max_element());
        let mut ws = Workspace::new();
        step(&h, &mut chi, t0, dt, &mut ws).unwrap();
        prop_assert!((norm(&chi) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn z_pulses_conserve_transverse_momentum(nx in -20i32..20, nz in -10i32..10, pairs in 1usize..4) {
        let a = atom();
        let start = WaveFunction::from_pairs(0.0, [
            (State::new(Level::A, nz, nx), Complex64::new(0.6, 0.0)),
            (State::new(Level::A, nz, nx + 2), Complex64::new(0.0, 0.8)),
        ]);
        let before = mean_n(&start, Axis::X);
        let ladder = recoil_ladder::pulses::build_adiabatic_sequence(
            pairs,
            0.0,
            State::new(Level::A, nz, nx),
            1,
            &Default::default(),
            &a,
        )
        .unwrap();
        let (psi, _) = evolve(&start, &ladder.plan, &a, &EngineOptions::default()).unwrap();
        prop_assert!((mean_n(&psi, Axis::X) - before).abs() < 1e-9);
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn x_pulses_conserve_axial_momentum(nz in -20i32..20, nx in -10i32..10, direction in prop::sample::select(vec![-1, 1])) {
        let a = atom();
        let start = WaveFunction::from_pairs(0.0, [
            (State::new(Level::A, nz, nx), Complex64::new(0.8, 0.0)),
            (State::new(Level::C, nz + 4, nx), Complex64::new(0.0, 0.6)),
        ]);
        let before = mean_n(&start, Axis::Z);
        let mut plan = SequencePlan::new(0.0);
        plan.push(raman(Axis::X, direction, TAU * 1e8, 3e-9, 0.0, -PI / 2.0));
        let (psi, _) = evolve(&start, &plan, &a, &EngineOptions::default()).unwrap();
        prop_assert!((mean_n(&psi, Axis::Z) - before).abs() < 1e-9);
    }

    #[test]
    fn every_isolated_pair_follows_the_rabi_formula(
        omega in 1e6f64..2e8,
        delta in -2e8f64..2e8,
        cycles in 0.05f64..3.0,
        k in -6i32..=6,
    ) {
        let t = cycles * PI / omega;
        let basis = build_basis(&[Level::A, Level::C, Level::B], -6..=6, -1..=1).unwrap();
        let pulse = raman(Axis::Z, 0, omega, t, delta, 0.0);
        let opts = HamiltonianOptions { kinetic: false, decay_rate: None };
        let h = EpochHamiltonian::new(&basis, &[pulse], &atom(), 0.0, &opts).unwrap();
        let source = State::new(Level::A, k, 0);
        let mut chi = WaveFunction::basis_state(source).to_dense(&basis).unwrap();
        propagate(&h, &mut chi, 0.0, t, None, &mut Workspace::new()).unwrap();
        let target = basis.index_of(&State::new(Level::C, k, 0)).unwrap();
        let w = omega.hypot(delta);
        let expected = (omega / w).powi(2) * (0.5 * w * t).sin().powi(2);
        prop_assert!((chi[target].norm_sqr() - expected).abs() < 1e-6);
        let elsewhere: f64 = chi
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != target && basis.state(*i) != source)
            .map(|(_, c)| c.norm_sqr())
            .sum();
        prop_assert!(elsewhere < 1e-20);
    }

    #[test]
    fn dark_state_stays_dark(gp in 1e7f64..5e8, gm in 1e7f64..5e8, n in -10i32..10, d in prop::sample::select(vec![-1, 1])) {
        let duration = 2e-7;
        let minus = PulseEvent::lambda_beam(Polarization::SigmaMinus, d, square(gm, duration), 0.0).unwrap();
        let plus = PulseEvent::lambda_beam(Polarization::SigmaPlus, -d, square(gp, duration), 0.0).unwrap();
        let basis = Basis::from_states([
            State::new(Level::A, n, 0),
            State::new(Level::E1, n + d, 0),
            State::new(Level::B, n + 2 * d, 0),
        ]);
        let opts = HamiltonianOptions { kinetic: false, decay_rate: None };
        let h = EpochHamiltonian::new(&basis, &[minus, plus], &atom(), 0.0, &opts).unwrap();
        let mut chi = dark_state(gp, gm, n, d).unwrap().to_dense(&basis).unwrap();
        propagate(&h, &mut chi, 0.0, duration, None, &mut Workspace::new()).unwrap();
        let e = chi[basis.index_of(&State::new(Level::E1, n + d, 0)).unwrap()].norm_sqr();
        prop_assert!(e < 1e-10, "excited population {:e}", e);
    }
}

fn pulse_area(area: f64) -> WaveFunction {
    let omega = TAU * 1e8;
    let mut plan = SequencePlan::new(0.0);
    plan.push(raman(Axis::X, 0, omega, area / omega, 0.0, -PI / 2.0));
    evolve(
        &WaveFunction::basis_state(State::new(Level::A, 0, 0)),
        &plan,
        &atom(),
        &EngineOptions::default(),
    )
    .unwrap()
    .0
}

#[test]
fn half_pi_pulse_splits_evenly() {
    let psi = pulse_area(PI / 2.0);
    assert!((psi.level_population(Level::A) - 0.5).abs() < 1e-12);
    assert!((psi.level_population(Level::C) - 0.5).abs() < 1e-12);
}

#[test]
fn pi_pulse_moves_c_to_a() {
    let omega = TAU * 1e8;
    let mut plan = SequencePlan::new(0.0);
    plan.push(raman(Axis::X, 0, omega, PI / omega, 0.0, -PI / 2.0));
    let (psi, _) = evolve(
        &WaveFunction::basis_state(State::new(Level::C, 0, 0)),
        &plan,
        &atom(),
        &EngineOptions::default(),
    )
    .unwrap();
    assert!((psi.population(&State::new(Level::A, 0, 0)) - 1.0).abs() < 1e-12);
}

#[test]
fn two_pi_pulse_is_identity_up_to_phase() {
    let psi = pulse_area(2.0 * PI);
    let start = WaveFunction::basis_state(State::new(Level::A, 0, 0));
    assert!((psi.overlap(&start).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn long_run_conserves_norm() {
    let a = atom();
    let basis = build_basis(&[Level::A, Level::B, Level::E1], -12..=12, 0..=0).unwrap();
    let pulses = [
        lambda(Polarization::SigmaPlus, 1, 4e8, 2e7),
        lambda(Polarization::SigmaMinus, -1, 3e8, -1e7),
    ];
    let h =
        EpochHamiltonian::new(&basis, &pulses, &a, 0.0, &HamiltonianOptions::default()).unwrap();
    let mut chi = WaveFunction::basis_state(State::new(Level::A, 0, 0))
        .to_dense(&basis)
        .unwrap();
    let dt = 1.0 / (20.0 * h.max_element());
    let mut ws = Workspace::new();
    for k in 0..10_000 {
        step(&h, &mut chi, k as f64 * dt, dt, &mut ws).unwrap();
    }
    assert!((norm(&chi) - 1.0).abs() < 1e-7);
}
