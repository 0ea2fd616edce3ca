//! Exact finite-dimensional spin state and gate algebra.
//!
//! Dense complex matrices only, capped at [`MAX_QUBITS`] qubits. The rotation
//! convention is `R_a(θ) = exp(−i·θ·σ_a/2)`; under it the product
//! `i·Rx(π)·Ry(π/2)` reproduces the canonical Hadamard matrix entrywise.
//! Qubit 0 is the leftmost tensor factor everywhere (most significant bit of
//! a basis index). State equality is always judged by fidelity, never
//! entrywise, so global phases are irrelevant.

mod density;
mod gates;
mod state;

pub use density::{
    conjugate_density, pseudo_pure_density, purify_step, recover_epsilon, DensityMatrix,
    PseudoPureSpec,
};
pub use gates::{
    canonical_hadamard, cnot_gate, hadamard_via_rotations, rotation_gate, Axis, UnitaryGate,
};
pub use state::{bell_states, state_fidelity, BellKind, StateVector};

use thiserror::Error;

/// Hard cap on register size; keeps the dense 2^N × 2^N algebra desk-scale.
pub const MAX_QUBITS: usize = 10;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("{0} qubits exceeds the supported maximum of {max}", max = MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("qubit index out of range or colliding: {0}")]
    BadQubitIndex(String),
    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix is not a density matrix: {0}")]
    NotDensity(String),
    #[error("value out of domain: {0}")]
    Domain(String),
}

/// Number of qubits for a dimension that must be a power of two within the cap.
pub(crate) fn qubits_for_dimension(dim: usize) -> Result<usize, SpinError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(SpinError::NotPowerOfTwo(dim));
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(SpinError::TooManyQubits(n));
    }
    Ok(n)
}
