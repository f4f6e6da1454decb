use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quantum::basis::Basis;
use crate::quantum::level::{Level, State};

/// Default pruning floor on |amplitude|².
pub const PRUNE_FLOOR: f64 = 1e-14;
/// Largest norm change a single pruning pass may cause.
pub const PRUNE_NORM_BUDGET: f64 = 1e-12;

/// Sparse state vector over recoil basis states.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WaveFunction {
    amplitudes: BTreeMap<State, Complex64>,
    pub time: f64,
}

impl WaveFunction {
    pub fn new(time: f64) -> Self {
        WaveFunction {
            amplitudes: BTreeMap::new(),
            time,
        }
    }

    /// Unit-amplitude state at t = 0.
    pub fn basis_state(s: State) -> Self {
        let mut wf = WaveFunction::new(0.0);
        wf.set(s, Complex64::new(1.0, 0.0));
        wf
    }

    pub fn from_pairs(time: f64, pairs: impl IntoIterator<Item = (State, Complex64)>) -> Self {
        let mut wf = WaveFunction::new(time);
        for (s, a) in pairs {
            wf.add(s, a);
        }
        wf
    }

    pub fn get(&self, s: &State) -> Complex64 {
        self.amplitudes.get(s).copied().unwrap_or_default()
    }

    pub fn set(&mut self, s: State, a: Complex64) {
        self.amplitudes.insert(s, a);
    }

    pub fn add(&mut self, s: State, a: Complex64) {
        *self.amplitudes.entry(s).or_default() += a;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&State, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = &State> {
        self.amplitudes.keys()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn population(&self, s: &State) -> f64 {
        self.get(s).norm_sqr()
    }

    pub fn level_population(&self, level: Level) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(s, _)| s.level == level)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm_sqr();
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::Normalization(format!(
                "cannot normalize state with norm² {n}"
            )));
        }
        let s = 1.0 / n.sqrt();
        for a in self.amplitudes.values_mut() {
            *a *= s;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in self.amplitudes.values_mut() {
            *a *= factor;
        }
    }

    /// Drops amplitudes with |a|² below `floor`, smallest first, stopping
    /// before the removed norm would exceed [`PRUNE_NORM_BUDGET`]. Returns
    /// the removed norm².
    pub fn prune(&mut self, floor: f64) -> f64 {
        let mut small: Vec<(State, f64)> = self
            .amplitudes
            .iter()
            .map(|(s, a)| (*s, a.norm_sqr()))
            .filter(|(_, p)| *p < floor)
            .collect();
        small.sort_by(|a, b| a.1.total_cmp(&b.1));
        let mut removed = 0.0;
        for (s, p) in small {
            if removed + p > PRUNE_NORM_BUDGET {
                break;
            }
            removed += p;
            self.amplitudes.remove(&s);
        }
        removed
    }

    /// Amplitudes laid out over `basis`; states outside the basis are an error.
    pub fn to_dense(&self, basis: &Basis) -> Result<Vec<Complex64>> {
        let mut v = vec![Complex64::default(); basis.len()];
        for (s, a) in &self.amplitudes {
            match basis.index_of(s) {
                Some(i) => v[i] = *a,
                None if a.norm_sqr() == 0.0 => {}
                None => {
                    return Err(Error::config(format!(
                        "state {s} is not in the propagation basis"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn from_dense(basis: &Basis, v: &[Complex64], time: f64) -> Self {
        let amplitudes = basis
            .states()
            .iter()
            .zip(v)
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(s, a)| (*s, *a))
            .collect();
        WaveFunction { amplitudes, time }
    }

    /// Inner product ⟨self|other⟩.
    pub fn overlap(&self, other: &WaveFunction) -> Complex64 {
        self.amplitudes
            .iter()
            .map(|(s, a)| a.conj() * other.get(s))
            .sum()
    }
}
