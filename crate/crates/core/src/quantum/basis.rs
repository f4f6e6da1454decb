use std::collections::HashMap;
use std::ops::RangeInclusive;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::quantum::level::{Level, State};

/// Ordered, indexed set of recoil basis states.
#[derive(Debug, Clone, Default)]
pub struct Basis {
    states: Vec<State>,
    index: HashMap<State, usize>,
}

impl Basis {
    /// Builds a basis from arbitrary states; duplicates are dropped and the
    /// result is sorted in canonical order.
    pub fn from_states(states: impl IntoIterator<Item = State>) -> Self {
        let mut states: Vec<State> = states.into_iter().collect();
        states.sort_unstable();
        states.dedup();
        let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        Basis { states, index }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, i: usize) -> State {
        self.states[i]
    }

    pub fn index_of(&self, s: &State) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, s: &State) -> bool {
        self.index.contains_key(s)
    }

    pub fn has_level(&self, level: Level) -> bool {
        self.states.iter().any(|s| s.level == level)
    }
}

/// Dense product basis `levels × window_z × window_x`.
pub fn build_basis(
    levels: &[Level],
    window_z: RangeInclusive<i32>,
    window_x: RangeInclusive<i32>,
) -> Result<Basis> {
    if levels.is_empty() {
        return Err(Error::config("basis needs at least one internal level"));
    }
    if window_z.is_empty() {
        return Err(Error::config(format!("empty z window {window_z:?}")));
    }
    if window_x.is_empty() {
        return Err(Error::config(format!("empty x window {window_x:?}")));
    }
    let mut states = Vec::new();
    for &level in levels {
        for nz in window_z.clone() {
            for nx in window_x.clone() {
                states.push(State::new(level, nz, nx));
            }
        }
    }
    Ok(Basis::from_states(states))
}

/// Free-particle energy ω_r·(n_z² + n_x²) of a basis state, rad/s.
pub fn kinetic_term(state: &State, atom: &AtomParams) -> f64 {
    atom.kinetic(state.nz, state.nx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn three_levels_three_momenta() {
        let b = build_basis(&[Level::A, Level::B, Level::C], -2..=0, 0..=0).unwrap();
        assert_eq!(b.len(), 9);
        assert_eq!(b.state(0), State::new(Level::A, -2, 0));
        assert_eq!(b.state(8), State::new(Level::C, 0, 0));
    }

    #[test]
    fn ladder_sized_basis() {
        let b = build_basis(&[Level::A, Level::B, Level::C, Level::E1], -62..=2, 0..=0).unwrap();
        assert_eq!(b.len(), 260);
        for (i, s) in b.states().iter().enumerate() {
            assert_eq!(b.index_of(s), Some(i));
        }
    }

    #[test]
    #[allow(clippy::reversed_empty_ranges)]
    fn empty_windows_rejected() {
        assert!(build_basis(&[Level::A], 1..=0, 0..=0).is_err());
        assert!(build_basis(&[Level::A], 0..=0, 3..=2).is_err());
        assert!(build_basis(&[], 0..=0, 0..=0).is_err());
    }

    #[test]
    fn kinetic_values() {
        let atom = AtomParams::rubidium87();
        let wr = atom.recoil_frequency();
        assert_eq!(kinetic_term(&State::new(Level::A, 0, 0), &atom), 0.0);
        assert!((kinetic_term(&State::new(Level::A, -2, 0), &atom) - 4.0 * wr).abs() < 1e-9);
        let one = kinetic_term(&State::new(Level::A, 1, 0), &atom) / (2.0 * PI);
        assert!((one - 3770.97).abs() < 0.05, "{one}");
    }
}
