//! Desk-scale simulator for MR-driven quantum computing experiments.
//!
//! The crate is organized around five building blocks:
//!
//! - [`fieldmodel`] — local magnetic fields and Larmor frequencies produced by
//!   a main field, a main gradient and per-site reverse gradients.
//! - [`spincore`] — exact density-matrix and gate algebra: rotation operators,
//!   the Hadamard built from rotations, CNOT embeddings, pseudo-pure states
//!   and Bell states.
//! - [`blochsim`] — classical isochromat-ensemble dynamics: hard RF pulses,
//!   free precession with T1/T2 relaxation, spin echoes, phase-window
//!   purification and the T1-recovery Hadamard sequence.
//! - [`pulsecompiler`] — transforms logical control/target signals into RF
//!   pulse tokens, compiles Hadamard+CNOT programs into two-channel pulse
//!   sequences and verifies them against the gate algebra.
//! - [`scenario`] / [`commands`] — the configuration file format and the
//!   command implementations behind the `mrqsim` CLI.
//!
//! All physical quantities are SI (tesla, meter, second, radian/second).

pub mod blochsim;
pub mod commands;
pub mod fieldmodel;
pub mod pulsecompiler;
pub mod scenario;
pub mod spincore;
pub mod tol;

pub use blochsim::BlochError;
pub use fieldmodel::FieldError;
pub use pulsecompiler::CompileError;
pub use scenario::ScenarioError;
pub use spincore::SpinError;

use thiserror::Error;

/// Top-level error for command execution.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    /// A computed quantity violated a pinned numerical threshold.
    #[error("numerical invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration problems,
    /// 3 for numerical-invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }

    /// Short machine-readable kind tag used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Field(_) => "field",
            Error::Spin(_) => "spin",
            Error::Bloch(_) => "bloch",
            Error::Compile(_) => "compile",
            Error::Scenario(_) => "scenario",
            Error::Invariant(_) => "invariant",
        }
    }
}
