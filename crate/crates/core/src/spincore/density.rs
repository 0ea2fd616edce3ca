//! Density matrices, pseudo-pure states and the purification ledger.

use super::gates::{matrix_from_pairs, row_major_pairs, UnitaryGate};
use super::{qubits_for_dimension, SpinError, StateVector};
use crate::tol;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A validated Hermitian, trace-one, positive-semidefinite 2^N × 2^N matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<Complex64>) -> Result<Self, SpinError> {
        if mat.nrows() != mat.ncols() {
            return Err(SpinError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        qubits_for_dimension(mat.nrows())?;
        let herm_dev = (&mat - mat.adjoint()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        if herm_dev > tol::HERMITIAN {
            return Err(SpinError::NotDensity(format!(
                "not Hermitian (max deviation {herm_dev:.3e})"
            )));
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(SpinError::NotDensity(format!("trace is {trace}, expected 1")));
        }
        let min_eig = mat.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -tol::PSD_SLACK {
            return Err(SpinError::NotDensity(format!(
                "not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn dimension(&self) -> usize {
        self.mat.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.mat.nrows().trailing_zeros() as usize
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// `tr ρ²`; for a Hermitian matrix this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|e| e.norm_sqr()).sum()
    }

    /// Eigenvalues sorted ascending (real, since the matrix is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.mat.symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }
}

/// Mixture parameters for a state of the form
/// `(1−ε)/2^N · I + ε · |ψ⟩⟨ψ|`.
///
/// The impure fraction `1−ε` is stored directly so ledgers that drive it far
/// below machine epsilon (e.g. 10⁻¹⁸ after repeated purification) keep full
/// precision; `epsilon()` saturates at 1 in that regime by design.
#[derive(Debug, Clone)]
pub struct PseudoPureSpec {
    n_qubits: usize,
    impure: f64,
    pure_state: StateVector,
}

impl PseudoPureSpec {
    pub fn new(epsilon: f64, pure_state: StateVector) -> Result<Self, SpinError> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(SpinError::Domain(format!("epsilon must lie in [0, 1], got {epsilon}")));
        }
        Ok(Self { n_qubits: pure_state.n_qubits(), impure: 1.0 - epsilon, pure_state })
    }

    /// Builds the spec from the impure fraction `1−ε` directly.
    pub fn from_impure_fraction(impure: f64, pure_state: StateVector) -> Result<Self, SpinError> {
        if !(0.0..=1.0).contains(&impure) {
            return Err(SpinError::Domain(format!(
                "impure fraction must lie in [0, 1], got {impure}"
            )));
        }
        Ok(Self { n_qubits: pure_state.n_qubits(), impure, pure_state })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn epsilon(&self) -> f64 {
        1.0 - self.impure
    }

    pub fn impure_fraction(&self) -> f64 {
        self.impure
    }

    pub fn pure_state(&self) -> &StateVector {
        &self.pure_state
    }

    /// Replaces the pure state, e.g. after a unitary was applied to it.
    pub fn with_pure_state(&self, pure_state: StateVector) -> Result<Self, SpinError> {
        if pure_state.n_qubits() != self.n_qubits {
            return Err(SpinError::DimensionMismatch(
                1 << self.n_qubits,
                pure_state.dimension(),
            ));
        }
        Ok(Self { n_qubits: self.n_qubits, impure: self.impure, pure_state })
    }
}

/// Builds `(1−ε)/2^N · I + ε · |ψ⟩⟨ψ|` as a validated density matrix.
pub fn pseudo_pure_density(spec: &PseudoPureSpec) -> Result<DensityMatrix, SpinError> {
    let dim = 1usize << spec.n_qubits;
    let eps = spec.epsilon();
    let mixed_weight = Complex64::new(spec.impure / dim as f64, 0.0);
    let psi = spec.pure_state.amplitudes();
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            mat[(r, c)] = Complex64::new(eps, 0.0) * psi[r] * psi[c].conj();
        }
        mat[(r, r)] += mixed_weight;
    }
    DensityMatrix::new(mat)
}

/// Unitary conjugation `U ρ U†`.
///
/// This is the transform that leaves the maximally mixed part of a
/// pseudo-pure state untouched while rotating the pure part, so the mixture
/// fraction is preserved.
pub fn conjugate_density(rho: &DensityMatrix, u: &UnitaryGate) -> Result<DensityMatrix, SpinError> {
    if rho.dimension() != u.dimension() {
        return Err(SpinError::DimensionMismatch(rho.dimension(), u.dimension()));
    }
    DensityMatrix::new(u.matrix() * &rho.mat * u.matrix().adjoint())
}

/// One purification step: scales the impure fraction,
/// `1−ε′ = (1−ε) · step_factor`, leaving the pure state unchanged.
pub fn purify_step(spec: &PseudoPureSpec, step_factor: f64) -> Result<PseudoPureSpec, SpinError> {
    if !(step_factor > 0.0 && step_factor <= 1.0) {
        return Err(SpinError::Domain(format!(
            "step_factor must lie in (0, 1], got {step_factor}"
        )));
    }
    Ok(PseudoPureSpec {
        n_qubits: spec.n_qubits,
        impure: spec.impure * step_factor,
        pure_state: spec.pure_state.clone(),
    })
}

/// Recovers ε from the purity of a pseudo-pure state:
/// `tr ρ² = (1 − ε²)/2^N + ε²`.
pub fn recover_epsilon(rho: &DensityMatrix) -> f64 {
    let inv_dim = 1.0 / rho.dimension() as f64;
    let eps_sq = (rho.purity() - inv_dim) / (1.0 - inv_dim);
    eps_sq.max(0.0).sqrt()
}

// JSON layout: {"dimension": d, "entries": [[re, im], ...]} row-major.
#[derive(Serialize, Deserialize)]
struct DensityRepr {
    dimension: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        DensityRepr { dimension: self.dimension(), entries: row_major_pairs(&self.mat) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = DensityRepr::deserialize(deserializer)?;
        let mat = matrix_from_pairs(repr.dimension, &repr.entries).map_err(D::Error::custom)?;
        DensityMatrix::new(mat).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::{hadamard_via_rotations, state_fidelity};

    fn ket0() -> StateVector {
        StateVector::basis(1, 0).unwrap()
    }

    #[test]
    fn fully_pure_density_is_a_projector() {
        let spec = PseudoPureSpec::new(1.0, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-14);
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fully_mixed_density_is_identity_over_dim() {
        let spec = PseudoPureSpec::new(0.0, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        assert!((rho.purity() - 0.5).abs() < 1e-14);
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn half_mixture_diagonal() {
        let spec = PseudoPureSpec::new(0.5, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        // Direct evaluation of the mixture: diag(0.75, 0.25).
        assert!((rho.matrix()[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.25).abs() < 1e-15);
        assert_eq!(rho.matrix()[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn epsilon_outside_unit_interval_rejected() {
        assert!(PseudoPureSpec::new(-0.1, ket0()).is_err());
        assert!(PseudoPureSpec::new(1.1, ket0()).is_err());
    }

    #[test]
    fn conjugation_by_identity_is_a_no_op() {
        let spec = PseudoPureSpec::new(0.7, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        let id = UnitaryGate::identity(1).unwrap();
        let out = conjugate_density(&rho, &id).unwrap();
        let dev =
            (out.matrix() - rho.matrix()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-15);
    }

    #[test]
    fn maximally_mixed_state_is_invariant_under_any_unitary() {
        let spec = PseudoPureSpec::new(0.0, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        let h = hadamard_via_rotations();
        let out = conjugate_density(&rho, &h).unwrap();
        let dev =
            (out.matrix() - rho.matrix()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-14);
    }

    #[test]
    fn conjugation_rotates_only_the_pure_part() {
        let spec = PseudoPureSpec::new(0.3, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        let h = hadamard_via_rotations();
        let rotated = conjugate_density(&rho, &h).unwrap();

        let expected_spec =
            spec.with_pure_state(h.apply(spec.pure_state()).unwrap()).unwrap();
        let expected = pseudo_pure_density(&expected_spec).unwrap();
        let dev = (rotated.matrix() - expected.matrix())
            .iter()
            .map(|e| e.norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-14);
        assert!((recover_epsilon(&rotated) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn conjugation_preserves_eigenvalue_multiset() {
        let spec = PseudoPureSpec::new(0.42, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        let h = hadamard_via_rotations();
        let out = conjugate_density(&rho, &h).unwrap();
        let before = rho.eigenvalues();
        let after = out.eigenvalues();
        for (a, b) in before.iter().zip(after.iter()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn purify_step_scales_the_impure_fraction() {
        let spec = PseudoPureSpec::new(0.0, ket0()).unwrap();
        let once = purify_step(&spec, 1e-6).unwrap();
        assert_eq!(once.impure_fraction(), 1e-6);
        assert!((once.epsilon() - (1.0 - 1e-6)).abs() < 1e-15);
        let twice = purify_step(&once, 1e-6).unwrap();
        assert_eq!(twice.impure_fraction(), 1e-6 * 1e-6);
        // Pure state untouched.
        assert!(
            state_fidelity(twice.pure_state(), spec.pure_state()).unwrap() > 1.0 - 1e-15
        );
    }

    #[test]
    fn purify_step_with_unit_factor_is_identity() {
        let spec = PseudoPureSpec::new(0.25, ket0()).unwrap();
        let out = purify_step(&spec, 1.0).unwrap();
        assert_eq!(out.impure_fraction(), spec.impure_fraction());
    }

    #[test]
    fn purify_step_rejects_bad_factors() {
        let spec = PseudoPureSpec::new(0.5, ket0()).unwrap();
        assert!(purify_step(&spec, 0.0).is_err());
        assert!(purify_step(&spec, 1.5).is_err());
    }

    #[test]
    fn repeated_purification_matches_closed_form_exactly() {
        let eps0 = 0.3;
        let factor = 1e-6;
        let mut spec = PseudoPureSpec::new(eps0, ket0()).unwrap();
        let mut closed_form = 1.0 - eps0;
        for _ in 0..3 {
            spec = purify_step(&spec, factor).unwrap();
            closed_form *= factor;
        }
        assert_eq!(spec.impure_fraction(), closed_form);
    }

    #[test]
    fn non_density_inputs_rejected() {
        // Trace 2.
        let bad = DMatrix::from_diagonal_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(DensityMatrix::new(bad).is_err());
        // Hermitian, trace 1, but indefinite.
        let indefinite = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(indefinite).is_err());
        // Not Hermitian.
        let skew = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.3, 0.0),
                Complex64::new(-0.3, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(skew).is_err());
    }

    #[test]
    fn density_json_round_trip() {
        let spec = PseudoPureSpec::new(0.5, ket0()).unwrap();
        let rho = pseudo_pure_density(&spec).unwrap();
        let json = serde_json::to_string(&rho).unwrap();
        let back: DensityMatrix = serde_json::from_str(&json).unwrap();
        let dev =
            (back.matrix() - rho.matrix()).iter().map(|e| e.norm()).fold(0.0, f64::max);
        assert!(dev < 1e-15);
    }
}
