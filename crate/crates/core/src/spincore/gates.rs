//! Rotation operators, the Hadamard decomposition and CNOT embeddings.

use super::{qubits_for_dimension, SpinError};
use crate::tol;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Rotation axis of an RF pulse or single-qubit gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = SpinError;

    fn from_str(s: &str) -> Result<Self, SpinError> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(SpinError::Domain(format!("unknown axis {other:?}"))),
        }
    }
}

/// A validated 2^N × 2^N unitary with a human-readable label.
#[derive(Debug, Clone)]
pub struct UnitaryGate {
    mat: DMatrix<Complex64>,
    label: String,
}

impl UnitaryGate {
    /// Wraps a matrix after checking `U·U† = I` to the unitarity tolerance
    /// (max-entry norm) and that the dimension is a supported power of two.
    pub fn new(mat: DMatrix<Complex64>, label: impl Into<String>) -> Result<Self, SpinError> {
        if mat.nrows() != mat.ncols() {
            return Err(SpinError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        qubits_for_dimension(mat.nrows())?;
        let dev = unitarity_deviation(&mat);
        if dev > tol::UNITARITY {
            return Err(SpinError::NotUnitary(dev));
        }
        Ok(Self { mat, label: label.into() })
    }

    pub fn identity(n_qubits: usize) -> Result<Self, SpinError> {
        if n_qubits > super::MAX_QUBITS {
            return Err(SpinError::TooManyQubits(n_qubits));
        }
        let dim = 1usize << n_qubits;
        Ok(Self { mat: DMatrix::identity(dim, dim), label: "I".into() })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dimension(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.mat.nrows().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint(), label: format!("{}†", self.label) }
    }

    /// Time-ordered composition: `self` first, then `later` (matrix product
    /// `later · self`).
    pub fn then(&self, later: &UnitaryGate) -> Result<Self, SpinError> {
        if self.dimension() != later.dimension() {
            return Err(SpinError::DimensionMismatch(self.dimension(), later.dimension()));
        }
        Ok(Self {
            mat: &later.mat * &self.mat,
            label: format!("{}·{}", later.label, self.label),
        })
    }

    /// Overall phase multiple; stays unitary for |phase| = 1.
    pub fn phased(&self, phase: Complex64, label: impl Into<String>) -> Result<Self, SpinError> {
        Self::new(self.mat.map(|e| phase * e), label)
    }

    /// Tensor product with `self` as the leftmost factor (qubit 0 side).
    pub fn kron(&self, right: &UnitaryGate) -> Result<Self, SpinError> {
        qubits_for_dimension(self.dimension() * right.dimension())?;
        Ok(Self {
            mat: self.mat.kronecker(&right.mat),
            label: format!("{}⊗{}", self.label, right.label),
        })
    }

    /// Applies the gate to a state: `U|ψ⟩`.
    pub fn apply(&self, state: &super::StateVector) -> Result<super::StateVector, SpinError> {
        if self.dimension() != state.dimension() {
            return Err(SpinError::DimensionMismatch(self.dimension(), state.dimension()));
        }
        super::StateVector::new((&self.mat * state.amplitudes()).iter().copied().collect())
    }

    /// Max entrywise deviation from another matrix.
    pub fn max_entry_deviation(&self, other: &DMatrix<Complex64>) -> f64 {
        (&self.mat - other).iter().map(|e| e.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn unitarity_deviation(mat: &DMatrix<Complex64>) -> f64 {
    let dim = mat.nrows();
    let prod = mat * mat.adjoint();
    let eye = DMatrix::<Complex64>::identity(dim, dim);
    (prod - eye).iter().map(|e| e.norm()).fold(0.0, f64::max)
}

/// Single-qubit rotation `exp(−i·angle·σ_axis/2)`.
pub fn rotation_gate(axis: Axis, angle: f64) -> UnitaryGate {
    let half = angle / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let zero = Complex64::new(0.0, 0.0);
    let mat = match axis {
        Axis::X => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
        ),
        Axis::Y => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        ),
        Axis::Z => DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(c, -s), zero, zero, Complex64::new(c, s)],
        ),
    };
    UnitaryGate { mat, label: format!("R{}({angle:.6})", axis.label()) }
}

/// Hadamard as the phased rotation product `i · Rx(π) · Ry(π/2)`.
///
/// The global factor `i` cancels the `−i` carried by `Rx(π) = −i·σx`, so the
/// result equals the canonical Hadamard matrix entrywise, not merely up to
/// phase.
pub fn hadamard_via_rotations() -> UnitaryGate {
    let ry = rotation_gate(Axis::Y, std::f64::consts::FRAC_PI_2);
    let rx = rotation_gate(Axis::X, std::f64::consts::PI);
    // Time order: Ry(π/2) first, then Rx(π); the matrix product is Rx·Ry.
    let mat = (rx.mat * ry.mat).map(|e| Complex64::new(0.0, 1.0) * e);
    UnitaryGate { mat, label: "H".into() }
}

/// The canonical Hadamard matrix (reference for entrywise checks).
pub fn canonical_hadamard() -> DMatrix<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    )
}

/// CNOT embedded in an N-qubit register: flips `target` iff `control` is |1⟩.
///
/// Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
/// basis index.
pub fn cnot_gate(control: usize, target: usize, n_qubits: usize) -> Result<UnitaryGate, SpinError> {
    if n_qubits > super::MAX_QUBITS {
        return Err(SpinError::TooManyQubits(n_qubits));
    }
    if control == target {
        return Err(SpinError::BadQubitIndex(format!(
            "control and target must differ, both are {control}"
        )));
    }
    if control >= n_qubits || target >= n_qubits {
        return Err(SpinError::BadQubitIndex(format!(
            "control {control} / target {target} out of range for {n_qubits} qubits"
        )));
    }
    let dim = 1usize << n_qubits;
    let control_bit = 1usize << (n_qubits - 1 - control);
    let target_bit = 1usize << (n_qubits - 1 - target);
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        let row = if col & control_bit != 0 { col ^ target_bit } else { col };
        mat[(row, col)] = Complex64::new(1.0, 0.0);
    }
    Ok(UnitaryGate { mat, label: format!("CNOT({control},{target})") })
}

// JSON layout: {"dimension": d, "label": "...", "entries": [[re, im], ...]}
// with entries row-major.
#[derive(Serialize, Deserialize)]
struct GateRepr {
    dimension: usize,
    label: String,
    entries: Vec<[f64; 2]>,
}

impl Serialize for UnitaryGate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GateRepr {
            dimension: self.dimension(),
            label: self.label.clone(),
            entries: row_major_pairs(&self.mat),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for UnitaryGate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = GateRepr::deserialize(deserializer)?;
        let mat = matrix_from_pairs(repr.dimension, &repr.entries).map_err(D::Error::custom)?;
        UnitaryGate::new(mat, repr.label).map_err(D::Error::custom)
    }
}

pub(crate) fn row_major_pairs(mat: &DMatrix<Complex64>) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(mat.nrows() * mat.ncols());
    for r in 0..mat.nrows() {
        for c in 0..mat.ncols() {
            let e = mat[(r, c)];
            out.push([e.re, e.im]);
        }
    }
    out
}

pub(crate) fn matrix_from_pairs(dim: usize, entries: &[[f64; 2]]) -> Result<DMatrix<Complex64>, String> {
    if entries.len() != dim * dim {
        return Err(format!("expected {} entries for dimension {dim}, got {}", dim * dim, entries.len()));
    }
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        let [re, im] = entries[r * dim + c];
        Complex64::new(re, im)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::{state_fidelity, StateVector};

    /// Series-sum matrix exponential, the independent oracle for rotations.
    fn matrix_exp(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let dim = a.nrows();
        let mut sum = DMatrix::<Complex64>::identity(dim, dim);
        let mut term = DMatrix::<Complex64>::identity(dim, dim);
        for k in 1..60 {
            term = (&term * a) / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    fn pauli(axis: Axis) -> DMatrix<Complex64> {
        let (o, l, i) =
            (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0));
        match axis {
            Axis::X => DMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Axis::Y => DMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
            Axis::Z => DMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    #[test]
    fn zero_angle_is_identity() {
        let g = rotation_gate(Axis::X, 0.0);
        assert!(g.max_entry_deviation(&DMatrix::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn ry_quarter_turn_matrix() {
        let g = rotation_gate(Axis::Y, std::f64::consts::FRAC_PI_2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(h, 0.0),
                Complex64::new(-h, 0.0),
                Complex64::new(h, 0.0),
                Complex64::new(h, 0.0),
            ],
        );
        assert!(g.max_entry_deviation(&expected) < 1e-15);
    }

    #[test]
    fn rx_half_turn_matches_exponential_oracle() {
        let g = rotation_gate(Axis::X, std::f64::consts::PI);
        // Expected −i·σx, frozen from the exponential of −i·π·σx/2.
        let expected = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!(g.max_entry_deviation(&expected) < 1e-15);
        let oracle = matrix_exp(
            &pauli(Axis::X).map(|e| Complex64::new(0.0, -std::f64::consts::PI / 2.0) * e),
        );
        assert!(g.max_entry_deviation(&oracle) < 1e-12);
    }

    #[test]
    fn rotations_match_exponential_oracle_on_all_axes() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            for angle in [-2.4, -0.3, 0.7, 1.9, 3.6] {
                let g = rotation_gate(axis, angle);
                let oracle =
                    matrix_exp(&pauli(axis).map(|e| Complex64::new(0.0, -angle / 2.0) * e));
                assert!(
                    g.max_entry_deviation(&oracle) < 1e-12,
                    "axis {axis:?} angle {angle}"
                );
            }
        }
    }

    #[test]
    fn hadamard_equals_canonical_matrix() {
        let h = hadamard_via_rotations();
        assert!(h.max_entry_deviation(&canonical_hadamard()) < crate::tol::ENTRYWISE);
    }

    #[test]
    fn hadamard_superposes_basis_states() {
        let h = hadamard_via_rotations();
        let plus = h.apply(&StateVector::basis(1, 0).unwrap()).unwrap();
        let minus = h.apply(&StateVector::basis(1, 1).unwrap()).unwrap();
        let hr = std::f64::consts::FRAC_1_SQRT_2;
        let expected_plus =
            StateVector::new(vec![Complex64::new(hr, 0.0), Complex64::new(hr, 0.0)]).unwrap();
        let expected_minus =
            StateVector::new(vec![Complex64::new(hr, 0.0), Complex64::new(-hr, 0.0)]).unwrap();
        assert!(state_fidelity(&plus, &expected_plus).unwrap() > 1.0 - crate::tol::FIDELITY_SLACK);
        assert!(state_fidelity(&minus, &expected_minus).unwrap() > 1.0 - crate::tol::FIDELITY_SLACK);
    }

    #[test]
    fn hadamard_is_an_involution() {
        let h = hadamard_via_rotations();
        let hh = h.then(&h).unwrap();
        assert!(hh.max_entry_deviation(&DMatrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn cnot_on_basis_states() {
        let cnot = cnot_gate(0, 1, 2).unwrap();
        let s00 = cnot.apply(&StateVector::basis(2, 0b00).unwrap()).unwrap();
        assert!(
            state_fidelity(&s00, &StateVector::basis(2, 0b00).unwrap()).unwrap() > 1.0 - 1e-12
        );
        let s10 = cnot.apply(&StateVector::basis(2, 0b10).unwrap()).unwrap();
        assert!(
            state_fidelity(&s10, &StateVector::basis(2, 0b11).unwrap()).unwrap() > 1.0 - 1e-12
        );
    }

    #[test]
    fn cnot_entangles_superposed_control() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus_zero = StateVector::new(vec![
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let out = cnot_gate(0, 1, 2).unwrap().apply(&plus_zero).unwrap();
        let expected = StateVector::new(vec![
            Complex64::new(h, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        assert!(state_fidelity(&out, &expected).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn cnot_rejects_bad_indices() {
        assert!(cnot_gate(0, 0, 2).is_err());
        assert!(cnot_gate(0, 2, 2).is_err());
        assert!(cnot_gate(3, 1, 2).is_err());
    }

    #[test]
    fn rotation_inverse_composes_to_identity() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let fwd = rotation_gate(axis, 1.234);
            let bwd = rotation_gate(axis, -1.234);
            let prod = fwd.then(&bwd).unwrap();
            assert!(prod.max_entry_deviation(&DMatrix::identity(2, 2)) < 1e-12);
        }
    }

    #[test]
    fn gate_json_round_trip() {
        let h = hadamard_via_rotations();
        let json = serde_json::to_string(&h).unwrap();
        let back: UnitaryGate = serde_json::from_str(&json).unwrap();
        assert!(back.max_entry_deviation(h.matrix()) < 1e-15);
        assert_eq!(back.label(), "H");
    }

    #[test]
    fn non_unitary_matrix_rejected() {
        let bad = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(matches!(UnitaryGate::new(bad, "bad"), Err(SpinError::NotUnitary(_))));
    }
}
