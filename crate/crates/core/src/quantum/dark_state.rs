use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::level::{Level, State};
use crate::quantum::wavefunction::WaveFunction;

/// Dark state of the Λ system driven by σ₋ (Rabi g₋, on a) and σ₊ (Rabi g₊,
/// on b): g₊|a,n⟩ − g₋|b,n+2d⟩, normalized.
///
/// The state starts as |a⟩ while only the σ₊ field is on (counter-intuitive
/// ordering) and ends as −|b⟩ when only σ₋ remains; this sign flip is the
/// per-transfer sign that distinguishes the ladder arms.
pub fn dark_state(
    g_plus: f64,
    g_minus: f64,
    n_origin: i32,
    direction: i32,
) -> Result<WaveFunction> {
    let norm = g_plus.hypot(g_minus);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Degenerate(
            "dark state needs at least one nonzero Rabi frequency".into(),
        ));
    }
    let mut wf = WaveFunction::new(0.0);
    if g_plus != 0.0 {
        wf.set(
            State::new(Level::A, n_origin, 0),
            Complex64::new(g_plus / norm, 0.0),
        );
    }
    if g_minus != 0.0 {
        wf.set(
            State::new(Level::B, n_origin + 2 * direction, 0),
            Complex64::new(-g_minus / norm, 0.0),
        );
    }
    Ok(wf)
}

/// The orthogonal bright combination g₋|a,n⟩ + g₊|b,n+2d⟩.
pub fn bright_state(
    g_plus: f64,
    g_minus: f64,
    n_origin: i32,
    direction: i32,
) -> Result<WaveFunction> {
    let norm = g_plus.hypot(g_minus);
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Degenerate(
            "bright state needs at least one nonzero Rabi frequency".into(),
        ));
    }
    Ok(WaveFunction::from_pairs(
        0.0,
        [
            (
                State::new(Level::A, n_origin, 0),
                Complex64::new(g_minus / norm, 0.0),
            ),
            (
                State::new(Level::B, n_origin + 2 * direction, 0),
                Complex64::new(g_plus / norm, 0.0),
            ),
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::AtomParams;
    use crate::pulses::envelope::{PulseEnvelope, Shape};
    use crate::pulses::event::{Polarization, PulseEvent};
    use crate::quantum::basis::Basis;
    use crate::quantum::hamiltonian::{EpochHamiltonian, HamiltonianOptions};
    use crate::quantum::propagate::{propagate, Workspace};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn symmetric_couplings() {
        let d = dark_state(1.0, 1.0, 0, -1).unwrap();
        assert!((d.get(&State::new(Level::A, 0, 0)).re - H).abs() < 1e-15);
        assert!((d.get(&State::new(Level::B, -2, 0)).re + H).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        let only_minus = dark_state(0.0, 3.0, 0, -1).unwrap();
        assert_eq!(
            only_minus.get(&State::new(Level::B, -2, 0)),
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(only_minus.len(), 1);
        let only_plus = dark_state(2.0, 0.0, 0, -1).unwrap();
        assert_eq!(
            only_plus.get(&State::new(Level::A, 0, 0)),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(only_plus.len(), 1);
        assert!(matches!(
            dark_state(0.0, 0.0, 0, 1),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn orthogonal_to_bright() {
        for (gp, gm) in [(1.0, 2.0), (0.3, 0.0), (5.0, 0.1)] {
            let d = dark_state(gp, gm, 4, 1).unwrap();
            let b = bright_state(gp, gm, 4, 1).unwrap();
            assert!(d.overlap(&b).norm() < 1e-15);
            assert_eq!(d.level_population(Level::E1), 0.0);
            assert!((d.norm_sqr() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn stationary_under_constant_fields() {
        let atom = AtomParams::rubidium87();
        let (gp, gm) = (2.0e8, 1.3e8);
        let d = -1;
        let duration = 2e-7;
        let minus = PulseEvent::lambda_beam(
            Polarization::SigmaMinus,
            d,
            PulseEnvelope::new(Shape::Square, gm, 0.0, duration).unwrap(),
            0.0,
        )
        .unwrap();
        let plus = PulseEvent::lambda_beam(
            Polarization::SigmaPlus,
            -d,
            PulseEnvelope::new(Shape::Square, gp, 0.0, duration).unwrap(),
            0.0,
        )
        .unwrap();
        let basis = Basis::from_states([
            State::new(Level::A, 0, 0),
            State::new(Level::E1, d, 0),
            State::new(Level::B, 2 * d, 0),
        ]);
        let opts = HamiltonianOptions {
            kinetic: false,
            decay_rate: None,
        };
        let h = EpochHamiltonian::new(&basis, &[minus, plus], &atom, 0.0, &opts).unwrap();
        let start = dark_state(gp, gm, 0, d).unwrap();
        let mut chi = start.to_dense(&basis).unwrap();
        propagate(&h, &mut chi, 0.0, duration, None, &mut Workspace::new()).unwrap();
        let e = chi[basis.index_of(&State::new(Level::E1, d, 0)).unwrap()].norm_sqr();
        assert!(e < 1e-10, "excited population {e:e}");
        let end = WaveFunction::from_dense(&basis, &chi, duration);
        assert!((start.overlap(&end).norm() - 1.0).abs() < 1e-10);
    }
}
