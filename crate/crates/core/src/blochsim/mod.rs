//! Classical magnetization dynamics for isochromat ensembles.
//!
//! RF pulses are hard (instantaneous rotations, no concurrent relaxation);
//! free precession and T1/T2 relaxation are applied in closed form per event.
//! Precession follows the right-hand convention with positive gyromagnetic
//! ratio: an isochromat at off-resonance `Δω` accumulates transverse phase
//! `−Δω·t` about +z. Purification is modeled as phase-window post-selection
//! over isochromats.
//!
//! Per-event isochromat updates are independent and parallelized; every
//! ensemble sum uses a fixed pairwise reduction tree, so results are
//! bit-stable across thread counts.

mod ensemble;
mod events;
mod executor;
pub mod reference;
mod sequences;

pub use ensemble::{Ensemble, Isochromat, OffResonance, PopulationSummary};
pub use events::SequenceEvent;
pub use executor::{
    apply_pulse, free_evolve, run_sequence, select_phase_window, SelectionOutcome,
    SequenceOutcome, Trajectory, TrajectoryPoint,
};
pub use sequences::{
    modified_stimulated_echo, spin_echo, stimulated_echo_with_options, t1_recovery_hadamard,
    t1_recovery_hadamard_with_delay, PurificationTrace, SpinEchoResult, SteOptions, SteTimings,
    T1HadamardReport, COINCIDENCE_DELAY_FACTOR,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BlochError {
    #[error("invalid ensemble: {0}")]
    Ensemble(String),
    #[error("invalid sequence event: {0}")]
    Event(String),
    #[error("timing constraint violated: {0}")]
    Timing(String),
    #[error("value out of domain: {0}")]
    Domain(String),
}
