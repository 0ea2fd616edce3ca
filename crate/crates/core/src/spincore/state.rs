//! State vectors, fidelity and the Bell basis.

use super::{qubits_for_dimension, SpinError};
use crate::tol;
use nalgebra::DVector;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A normalized 2^N-dimensional pure state.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: DVector<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes after checking unit norm within the tolerance.
    pub fn new(amps: Vec<Complex64>) -> Result<Self, SpinError> {
        qubits_for_dimension(amps.len())?;
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(SpinError::NotNormalized(norm));
        }
        Ok(Self { amps: v })
    }

    /// Computational basis state |index⟩ of an N-qubit register.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, SpinError> {
        if n_qubits > super::MAX_QUBITS {
            return Err(SpinError::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(SpinError::BadQubitIndex(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps: DVector::from_vec(amps) })
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    /// Tensor product with `self` as the leftmost factor (qubit 0 side).
    pub fn kron(&self, right: &StateVector) -> Result<Self, SpinError> {
        qubits_for_dimension(self.dimension() * right.dimension())?;
        Ok(Self { amps: self.amps.kronecker(&right.amps) })
    }
}

/// Overlap probability `|⟨a|b⟩|²`; invariant under global phases of either state.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SpinError> {
    if a.dimension() != b.dimension() {
        return Err(SpinError::DimensionMismatch(a.dimension(), b.dimension()));
    }
    Ok(a.amps.dotc(&b.amps).norm_sqr())
}

/// The four maximally entangled two-qubit states, in the order
/// Φ+, Φ−, Ψ+, Ψ−.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] =
        [BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus];

    pub fn label(self) -> &'static str {
        match self {
            BellKind::PhiPlus => "phi_plus",
            BellKind::PhiMinus => "phi_minus",
            BellKind::PsiPlus => "psi_plus",
            BellKind::PsiMinus => "psi_minus",
        }
    }

    pub fn index(self) -> usize {
        match self {
            BellKind::PhiPlus => 0,
            BellKind::PhiMinus => 1,
            BellKind::PsiPlus => 2,
            BellKind::PsiMinus => 3,
        }
    }
}

/// Normalized Bell basis `(|00⟩ ± |11⟩)/√2, (|01⟩ ± |10⟩)/√2`.
pub fn bell_states() -> [StateVector; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(h, 0.0);
    let m = Complex64::new(-h, 0.0);
    [
        StateVector::new(vec![p, z, z, p]).expect("Bell state is normalized"),
        StateVector::new(vec![p, z, z, m]).expect("Bell state is normalized"),
        StateVector::new(vec![z, p, p, z]).expect("Bell state is normalized"),
        StateVector::new(vec![z, p, m, z]).expect("Bell state is normalized"),
    ]
}

// JSON layout: {"dimension": d, "amplitudes": [[re, im], ...]}
#[derive(Serialize, Deserialize)]
struct StateRepr {
    dimension: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        StateRepr {
            dimension: self.dimension(),
            amplitudes: self.amps.iter().map(|e| [e.re, e.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        if repr.amplitudes.len() != repr.dimension {
            return Err(D::Error::custom(format!(
                "dimension {} does not match {} amplitudes",
                repr.dimension,
                repr.amplitudes.len()
            )));
        }
        StateVector::new(
            repr.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )
        .map_err(D::Error::custom)
    }
}
