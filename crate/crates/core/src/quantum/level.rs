use serde::{Deserialize, Serialize};
use std::fmt;

/// Hyperfine manifold a level belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    Ground,
    D1Excited,
    D2Excited,
}

/// The five internal levels retained by the model.
///
/// `A`, `B`, `C` are ground sublevels; `E1` is the D1 intermediate state of the
/// Λ system and `E2` an effective D2 intermediate (never populated when the
/// Raman channel is run as an effective two-level coupling).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    A,
    B,
    C,
    E1,
    E2,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::A, Level::B, Level::C, Level::E1, Level::E2];

    pub fn f(self) -> i32 {
        match self {
            Level::A | Level::B | Level::E1 => 1,
            Level::C => 2,
            Level::E2 => 2,
        }
    }

    pub fn m_f(self) -> i32 {
        match self {
            Level::A | Level::C => 1,
            Level::B => -1,
            Level::E1 | Level::E2 => 0,
        }
    }

    pub fn manifold(self) -> Manifold {
        match self {
            Level::A | Level::B | Level::C => Manifold::Ground,
            Level::E1 => Manifold::D1Excited,
            Level::E2 => Manifold::D2Excited,
        }
    }

    pub fn is_excited(self) -> bool {
        self.manifold() != Manifold::Ground
    }

    pub fn label(self) -> &'static str {
        match self {
            Level::A => "a",
            Level::B => "b",
            Level::C => "c",
            Level::E1 => "e1",
            Level::E2 => "e2",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Lattice axis of a recoil index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    X,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Z => "z",
            Axis::X => "x",
        })
    }
}

/// An internal level together with integer recoil indices along z and x.
///
/// The derived ordering (level, then n_z, then n_x) is the basis ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State {
    pub level: Level,
    pub nz: i32,
    pub nx: i32,
}

impl State {
    pub const fn new(level: Level, nz: i32, nx: i32) -> Self {
        State { level, nz, nx }
    }

    pub fn n(&self, axis: Axis) -> i32 {
        match axis {
            Axis::Z => self.nz,
            Axis::X => self.nx,
        }
    }

    /// Same level, momentum shifted by `dn` along `axis`.
    pub fn shifted(&self, axis: Axis, dn: i32) -> State {
        match axis {
            Axis::Z => State {
                nz: self.nz + dn,
                ..*self
            },
            Axis::X => State {
                nx: self.nx + dn,
                ..*self
            },
        }
    }

    pub fn with_level(&self, level: Level) -> State {
        State { level, ..*self }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}⟩", self.level, self.nz, self.nx)
    }
}
