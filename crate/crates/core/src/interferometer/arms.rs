use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::atom::AtomParams;
use crate::error::{Error, Result};
use crate::quantum::level::{Axis, Level, State};
use crate::quantum::wavefunction::WaveFunction;

/// Index of each axis in position and velocity triples `[x, y, z]`.
pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;

pub fn axis_index(axis: Axis) -> usize {
    match axis {
        Axis::X => X,
        Axis::Z => Z,
    }
}

/// Spatial scales of the hybrid quantum/classical model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Geometry {
    /// Initial cloud diameter (m).
    pub cloud_size: f64,
    /// Width of the spatially selective beams (m).
    pub beam_width: f64,
    /// Momentum groups closer than this share one arm (m).
    pub merge_distance: f64,
    /// Arms below this population are moved to the untracked bucket.
    pub arm_floor: f64,
    /// Arms below this population are ignored by selectivity checks.
    pub selectivity_floor: f64,
    /// Cloud velocity at t = 0 (m/s), `[x, y, z]`.
    pub initial_velocity: [f64; 3],
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry {
            cloud_size: 1e-3,
            beam_width: 0.5e-3,
            merge_distance: 10e-6,
            arm_floor: 1e-4,
            selectivity_floor: 1e-3,
            initial_velocity: [0.0; 3],
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.cloud_size, self.beam_width, self.merge_distance];
        if positive.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::config(
                "cloud size, beam width and merge distance must be positive",
            ));
        }
        if !(0.0..1.0).contains(&self.arm_floor) || !(0.0..1.0).contains(&self.selectivity_floor) {
            return Err(Error::config("population floors must lie in [0, 1)"));
        }
        if self.initial_velocity.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("initial velocity must be finite"));
        }
        Ok(())
    }
}

/// A spatially localized part of the atomic wavefunction.
///
/// All momentum components of an arm share one centroid; they are split
/// into separate arms once free flight moves them more than the merge
/// distance apart.
#[derive(Debug, Clone, PartialEq)]
pub struct Arm {
    pub id: usize,
    pub position: [f64; 3],
    pub psi: WaveFunction,
}

impl Arm {
    pub fn population(&self) -> f64 {
        self.psi.norm_sqr()
    }

    /// Population-weighted mean momentum `(n_z, n_x)`.
    pub fn mean_momentum(&self) -> (f64, f64) {
        let p = self.population();
        if p == 0.0 {
            return (0.0, 0.0);
        }
        let (mut z, mut x) = (0.0, 0.0);
        for (s, a) in self.psi.iter() {
            z += a.norm_sqr() * s.nz as f64;
            x += a.norm_sqr() * s.nx as f64;
        }
        (z / p, x / p)
    }

    /// Largest-population component.
    pub fn dominant(&self) -> Option<(State, Complex64)> {
        self.psi
            .iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(s, a)| (*s, *a))
    }
}

/// Classical summary of one momentum component of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArmTrack {
    /// Id of the arm (spatial cluster) holding this component.
    pub id: usize,
    pub amplitude: Complex64,
    pub population: f64,
    pub level: Level,
    pub nz: i32,
    pub nx: i32,
    /// Centroid `[x, y, z]` (m).
    pub position: [f64; 3],
    /// Velocity `[x, y, z]` (m/s).
    pub velocity: [f64; 3],
    /// arg(amplitude).
    pub phase: f64,
}

/// Velocity of momentum class `(nz, nx)`.
pub fn class_velocity(
    nz: f64,
    nx: f64,
    vy: f64,
    atom: &AtomParams,
    geometry: &Geometry,
) -> [f64; 3] {
    let vr = atom.recoil_velocity();
    let v0 = geometry.initial_velocity;
    [v0[X] + nx * vr, vy, v0[Z] + nz * vr]
}

/// Splits arms into momentum classes placed at `place(arm, class)`, then
/// merges classes closer than the merge distance (single linkage).
///
/// Returns the new arm list, ordered by position, and the population moved
/// to the untracked bucket.
pub fn regroup<F>(arms: Vec<Arm>, geometry: &Geometry, mut place: F) -> (Vec<Arm>, f64)
where
    F: FnMut(&Arm, (i32, i32)) -> [f64; 3],
{
    struct Group {
        position: [f64; 3],
        psi: WaveFunction,
    }
    let mut groups: Vec<Group> = Vec::new();
    for arm in &arms {
        let mut classes: BTreeMap<(i32, i32), WaveFunction> = BTreeMap::new();
        for (s, a) in arm.psi.iter() {
            classes
                .entry((s.nz, s.nx))
                .or_insert_with(|| WaveFunction::new(arm.psi.time))
                .set(*s, *a);
        }
        for (class, psi) in classes {
            groups.push(Group {
                position: place(arm, class),
                psi,
            });
        }
    }

    let n = groups.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        let mut j = i;
        while parent[j] != r {
            let next = parent[j];
            parent[j] = r;
            j = next;
        }
        r
    }
    let d2 = geometry.merge_distance * geometry.merge_distance;
    for i in 0..n {
        for j in i + 1..n {
            let dist: f64 = (0..3)
                .map(|k| (groups[i].position[k] - groups[j].position[k]).powi(2))
                .sum();
            if dist <= d2 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj.max(ri)] = ri.min(rj);
                }
            }
        }
    }

    let mut clusters: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        clusters.entry(r).or_default().push(i);
    }
    let mut out = Vec::new();
    let mut untracked = 0.0;
    for members in clusters.values() {
        let time = groups[members[0]].psi.time;
        let mut psi = WaveFunction::new(time);
        let mut weighted = [0.0; 3];
        let mut plain = [0.0; 3];
        let mut pop = 0.0;
        for &m in members {
            let g = &groups[m];
            let p = g.psi.norm_sqr();
            for k in 0..3 {
                weighted[k] += p * g.position[k];
                plain[k] += g.position[k];
            }
            pop += p;
            for (s, a) in g.psi.iter() {
                // Equal momenta travel together, so a state met in two groups
                // is an artefact of centroid rounding: combine in quadrature.
                let b = psi.get(s);
                let merged = if b == Complex64::new(0.0, 0.0) {
                    *a
                } else {
                    let arg = if b.norm_sqr() >= a.norm_sqr() {
                        b.arg()
                    } else {
                        a.arg()
                    };
                    Complex64::from_polar((b.norm_sqr() + a.norm_sqr()).sqrt(), arg)
                };
                psi.set(*s, merged);
            }
        }
        if pop < geometry.arm_floor {
            untracked += pop;
            continue;
        }
        let position = if pop > 0.0 {
            weighted.map(|w| w / pop)
        } else {
            plain.map(|v| v / members.len() as f64)
        };
        out.push(Arm {
            id: 0,
            position,
            psi,
        });
    }
    out.sort_by(|a, b| {
        a.position[Z]
            .total_cmp(&b.position[Z])
            .then(a.position[X].total_cmp(&b.position[X]))
            .then(a.position[Y].total_cmp(&b.position[Y]))
    });
    for (i, arm) in out.iter_mut().enumerate() {
        arm.id = i;
    }
    (out, untracked)
}

/// Per-component tracks for every arm, skipping components below `floor`.
pub fn tracks(
    arms: &[Arm],
    vy: f64,
    floor: f64,
    atom: &AtomParams,
    geometry: &Geometry,
) -> Vec<ArmTrack> {
    let mut out = Vec::new();
    for arm in arms {
        for (s, a) in arm.psi.iter() {
            let p = a.norm_sqr();
            if p < floor {
                continue;
            }
            out.push(ArmTrack {
                id: arm.id,
                amplitude: *a,
                population: p,
                level: s.level,
                nz: s.nz,
                nx: s.nx,
                position: arm.position,
                velocity: class_velocity(s.nz as f64, s.nx as f64, vy, atom, geometry),
                phase: a.arg(),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wf(states: &[(State, f64)]) -> WaveFunction {
        WaveFunction::from_pairs(
            0.0,
            states.iter().map(|(s, a)| (*s, Complex64::new(*a, 0.0))),
        )
    }

    #[test]
    fn classes_separate_after_flight() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let arm = Arm {
            id: 0,
            position: [0.0; 3],
            psi: wf(&[
                (State::new(Level::C, 0, 0), h),
                (State::new(Level::A, -100, 0), h),
            ]),
        };
        let g = Geometry::default();
        let (arms, lost) = regroup(vec![arm.clone()], &g, |a, (nz, _)| {
            let mut p = a.position;
            p[Z] += nz as f64 * 1e-5;
            p
        });
        assert_eq!(arms.len(), 2);
        assert_eq!(lost, 0.0);
        assert!(arms[0].position[Z] < arms[1].position[Z]);
        let (together, _) = regroup(vec![arm], &g, |a, _| a.position);
        assert_eq!(together.len(), 1);
    }

    #[test]
    fn small_clusters_are_untracked() {
        let arm = Arm {
            id: 0,
            position: [0.0; 3],
            psi: wf(&[
                (State::new(Level::A, 0, 0), (1.0f64 - 1e-5).sqrt()),
                (State::new(Level::A, 2, 0), 1e-5f64.sqrt()),
            ]),
        };
        let (arms, lost) = regroup(vec![arm], &Geometry::default(), |a, (nz, _)| {
            let mut p = a.position;
            p[Z] += nz as f64 * 1e-3;
            p
        });
        assert_eq!(arms.len(), 1);
        assert!((lost - 1e-5).abs() < 1e-15);
    }

    #[test]
    fn merge_is_population_weighted() {
        let a = Arm {
            id: 0,
            position: [0.0, 0.0, 0.0],
            psi: wf(&[(State::new(Level::A, 0, 0), 0.6)]),
        };
        let b = Arm {
            id: 1,
            position: [0.0, 0.0, 5e-6],
            psi: wf(&[(State::new(Level::A, 4, 0), 0.8)]),
        };
        let (arms, _) = regroup(vec![a, b], &Geometry::default(), |arm, _| arm.position);
        assert_eq!(arms.len(), 1);
        assert!((arms[0].position[Z] - 0.64 * 5e-6).abs() < 1e-18);
        assert!((arms[0].population() - 1.0).abs() < 1e-15);
    }
}
