//! Numerical tolerance ledger.
//!
//! Every threshold used by validation code and tests is pinned here so the
//! whole crate agrees on what "equal" means at each level of the stack.

/// Unitarity check: max entry of |UU† − I|.
pub const UNITARITY: f64 = 1e-12;

/// Hermiticity check: max entry of |A − A†|.
pub const HERMITIAN: f64 = 1e-12;

/// Trace-one check for density matrices.
pub const TRACE: f64 = 1e-12;

/// Positive-semidefiniteness slack: eigenvalues may dip this far below zero.
pub const PSD_SLACK: f64 = 1e-12;

/// State-vector normalization check.
pub const STATE_NORM: f64 = 1e-12;

/// Entrywise matrix equality in exact-algebra assertions.
pub const ENTRYWISE: f64 = 1e-12;

/// Fidelity floor for exact gate pipelines (1 − FIDELITY_SLACK).
pub const FIDELITY_SLACK: f64 = 1e-12;

/// Randomized property-test equivalence (conjugation invariants and the like).
pub const PROPERTY: f64 = 1e-10;

/// Static-dephasing refocusing accuracy of spin echoes.
pub const ECHO_REFOCUS: f64 = 1e-9;

/// Magnetization norm slack for ensembles with T1 = T2.
pub const MAGNETIZATION_NORM: f64 = 1e-9;

/// Ensemble weight normalization check.
pub const WEIGHT_SUM: f64 = 1e-12;

/// Agreement between the closed-form executor and the fine-step integrator.
pub const INTEGRATOR_AGREEMENT: f64 = 1e-6;

/// Longitudinal recovery at the coincidence delay (reaches one half).
pub const COINCIDENCE: f64 = 1e-3;

/// Relative tolerance used when two configured durations must be equal.
pub const TIMING_EQUALITY: f64 = 1e-12;
