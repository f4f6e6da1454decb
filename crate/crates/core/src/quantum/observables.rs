use serde::Serialize;

use crate::quantum::level::{Axis, Level};
use crate::quantum::wavefunction::WaveFunction;

/// Population and momentum moments of a level-filtered component.
/// `mean` and `spread` are `None` when the component is empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub population: f64,
    pub mean: Option<f64>,
    pub spread: Option<f64>,
}

pub fn observables(psi: &WaveFunction, filter: &[Level], axis: Axis) -> Observables {
    let mut pop = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (s, a) in psi.iter() {
        if !filter.contains(&s.level) {
            continue;
        }
        let p = a.norm_sqr();
        let n = s.n(axis) as f64;
        pop += p;
        m1 += p * n;
        m2 += p * n * n;
    }
    if pop == 0.0 {
        return Observables {
            population: 0.0,
            mean: None,
            spread: None,
        };
    }
    let mean = m1 / pop;
    let var = (m2 / pop - mean * mean).max(0.0);
    Observables {
        population: pop,
        mean: Some(mean),
        spread: Some(var.sqrt()),
    }
}
