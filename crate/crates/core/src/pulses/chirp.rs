//! Step-wise frequency chirp: detuning offsets that keep each ladder step on
//! two-photon resonance as the Doppler and recoil shifts grow.

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::quantum::level::State;

/// Two-photon detuning offset that puts `from → to` exactly on resonance:
/// K(to) − K(from), with K = ω_r(n_z² + n_x²).
///
/// The pair must connect two different ground levels and differ by exactly
/// two recoils on one axis.
pub fn chirp_offset(from: &State, to: &State, atom: &AtomParams) -> Result<f64> {
    if from.level.is_excited() || to.level.is_excited() || from.level == to.level {
        return Err(Error::config(format!(
            "{from} → {to} is not a two-photon ground-state pair"
        )));
    }
    let dz = (to.nz - from.nz).abs();
    let dx = (to.nx - from.nx).abs();
    if !matches!((dz, dx), (2, 0) | (0, 2)) {
        return Err(Error::config(format!(
            "{from} → {to} does not change momentum by 2ħk on one axis"
        )));
    }
    Ok(atom.kinetic(to.nz, to.nx) - atom.kinetic(from.nz, from.nx))
}

/// Single-beam detuning that makes `ground ↔ excited` resonant including the
/// kinetic energy difference.
pub fn leg_detuning(ground: &State, excited: &State, atom: &AtomParams) -> f64 {
    atom.kinetic(excited.nz, excited.nx) - atom.kinetic(ground.nz, ground.nx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::envelope::{PulseEnvelope, Shape};
    use crate::pulses::event::{Polarization, PulseEvent};
    use crate::quantum::basis::Basis;
    use crate::quantum::hamiltonian::assemble;
    use crate::quantum::level::Level;

    fn atom() -> AtomParams {
        AtomParams::rubidium87()
    }

    #[test]
    fn from_rest() {
        let a = atom();
        let w = a.recoil_frequency();
        let off = chirp_offset(
            &State::new(Level::A, 0, 0),
            &State::new(Level::B, -2, 0),
            &a,
        )
        .unwrap();
        assert!((off - 4.0 * w).abs() < 1e-9 * w);
    }

    #[test]
    fn second_step() {
        let a = atom();
        let w = a.recoil_frequency();
        let off = chirp_offset(
            &State::new(Level::B, -2, 0),
            &State::new(Level::A, -4, 0),
            &a,
        )
        .unwrap();
        assert!((off - 12.0 * w).abs() < 1e-9 * w);
    }

    #[test]
    fn mirrored_pair_flips_doppler_sign() {
        let a = atom();
        let down = chirp_offset(
            &State::new(Level::A, 0, 0),
            &State::new(Level::B, -2, 0),
            &a,
        )
        .unwrap();
        let up =
            chirp_offset(&State::new(Level::A, 2, 0), &State::new(Level::B, 0, 0), &a).unwrap();
        // K(0) − K(2) = −(K(−2) − K(0)): same recoil magnitude, Doppler sign reversed.
        assert!((up + down).abs() < 1e-9 * down);
    }

    #[test]
    fn illegal_pairs() {
        let a = atom();
        let s = |l, n, m| State::new(l, n, m);
        assert!(chirp_offset(&s(Level::A, 0, 0), &s(Level::B, -4, 0), &a).is_err());
        assert!(chirp_offset(&s(Level::A, 0, 0), &s(Level::B, -2, 2), &a).is_err());
        assert!(chirp_offset(&s(Level::A, 0, 0), &s(Level::A, -2, 0), &a).is_err());
        assert!(chirp_offset(&s(Level::A, 0, 0), &s(Level::E1, -1, 0), &a).is_err());
        assert!(chirp_offset(&s(Level::A, 0, 0), &s(Level::C, 0, 2), &a).is_ok());
    }

    #[test]
    fn compensated_pair_is_degenerate() {
        let a = atom();
        for n in [0, -2, -10, 36] {
            let from = State::new(Level::A, n, 0);
            let mid = State::new(Level::E1, n - 1, 0);
            let to = State::new(Level::B, n - 2, 0);
            let env = PulseEnvelope::new(Shape::Square, 1e8, 0.0, 1e-7).unwrap();
            let minus = PulseEvent::lambda_beam(
                Polarization::SigmaMinus,
                -1,
                env,
                leg_detuning(&from, &mid, &a),
            )
            .unwrap();
            let plus = PulseEvent::lambda_beam(
                Polarization::SigmaPlus,
                1,
                env,
                leg_detuning(&to, &mid, &a),
            )
            .unwrap();
            let basis = Basis::from_states([from, mid, to]);
            let spec = assemble(&basis, &[minus, plus], 5e-8, &a).unwrap();
            let d_from = spec.diagonal[basis.index_of(&from).unwrap()];
            let d_to = spec.diagonal[basis.index_of(&to).unwrap()];
            assert!((d_from - d_to).abs() < 1e-6, "n={n}: {d_from} vs {d_to}");
            let off = chirp_offset(&from, &to, &a).unwrap();
            let two_photon = leg_detuning(&from, &mid, &a) - leg_detuning(&to, &mid, &a);
            assert!((off - two_photon).abs() < 1e-6);
        }
    }
}
