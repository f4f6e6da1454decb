//! Pulse envelopes, events, chirp compensation and ladder builders.

pub mod chirp;
pub mod envelope;
pub mod event;
pub mod ladder;
pub mod plan;

pub use chirp::{chirp_offset, leg_detuning};
pub use envelope::{PulseEnvelope, Shape};
pub use event::{Channel, Polarization, PulseEvent, Transition};
pub use ladder::{
    adiabaticity, build_adiabatic_sequence, build_raman_sequence, copropagating_pulse,
    counter_intuitive_pair, AdiabaticLadder, AdiabaticPulses, CopropagatingPair, PulsePair,
    RamanLadder, RamanPulses, ADIABATICITY_LIMIT,
};
pub use plan::{Drift, Epoch, SequencePlan};
