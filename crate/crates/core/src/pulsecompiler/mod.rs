//! Logical-signal to RF-pulse compilation and Bell-state assembly.
//!
//! Control and target signals are carried as short pulse trains: a |0⟩-type
//! (cosine) control signal becomes a double half-turn, a |1⟩-type (sine)
//! control signal a single signed quarter-turn, and target signals a
//! four-pulse "quadrupole" train. Superposition branches and CNOT
//! conditioning are tracked symbolically with exact ±1/√2 amplitudes and only
//! then checked numerically against the gate algebra in [`crate::spincore`].

mod branches;
mod program;
mod signal;
mod verify;

pub use branches::{
    assemble_bell, assemble_bell_from_scratch, bell_kind_for_inputs, control_hadamard_branches,
    enumerate_cnot_terms, target_identity_branch, AssembledState, BellAssembly, BellHalf,
    BranchTerm, ControlToken, TargetToken,
};
pub use program::{
    compile_bell_sequence, parse_program, BlockKind, CircuitSpec, CompileOptions, GateOp,
    ProgramStep, PulseProgram, StepChannel, StepToken,
};
pub use signal::{transform_signal, Basis, Channel, LogicalSignal, PulseToken, Role, Sign, TokenKind};
pub use verify::{
    lower_token, verify_compiled, ChannelCheck, VerificationReport, LOWERING_TABLE_VERSION,
};

use crate::spincore::SpinError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("program parse error: {0}")]
    Parse(String),
    #[error("branch term set is invalid: {0}")]
    BadTokenSet(String),
    #[error("bell assembly is missing term {0}")]
    MissingTerm(String),
    #[error("token has no unitary lowering: {0}")]
    NoLowering(String),
    #[error("program does not map onto a two-qubit register: {0}")]
    Register(String),
    #[error(transparent)]
    Spin(#[from] SpinError),
}
