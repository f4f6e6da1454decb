//! Recoil-lattice Hilbert space, Hamiltonian assembly and propagation.

pub mod basis;
pub mod dark_state;
pub mod evolve;
pub mod hamiltonian;
pub mod level;
pub mod observables;
pub mod propagate;
pub mod wavefunction;

pub use basis::{build_basis, kinetic_term, Basis};
pub use dark_state::{bright_state, dark_state};
pub use evolve::{evolve, evolve_observed, free_evolution, EngineOptions, EvolutionReport};
pub use hamiltonian::{assemble, Coupling, EpochHamiltonian, HamiltonianOptions, HamiltonianSpec};
pub use level::{Axis, Level, Manifold, State};
pub use observables::{observables, Observables};
pub use propagate::{default_dt, propagate, step, Workspace, STABILITY_LIMIT};
pub use wavefunction::WaveFunction;
