//! Symbolic superposition branches, CNOT term enumeration and Bell assembly.
//!
//! Branch bookkeeping is exact: amplitudes are tracked as ±1 coefficients on
//! computational basis kets and the 1/√2 normalization is applied only when a
//! state vector is materialized.

use super::signal::Basis;
use super::CompileError;
use crate::spincore::{BellKind, StateVector};
use num_complex::Complex64;
use serde::Serialize;

/// Control-side branch tokens produced by a Hadamard.
/// `BPlus`/`BMinus` carry |0⟩; `BPlusPlus` carries |1⟩ and `BMinusMinus`
/// carries −|1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ControlToken {
    BPlus,
    BMinus,
    BPlusPlus,
    BMinusMinus,
}

impl ControlToken {
    /// Basis ket the token stands for.
    pub fn basis(self) -> Basis {
        match self {
            ControlToken::BPlus | ControlToken::BMinus => Basis::Zero,
            ControlToken::BPlusPlus | ControlToken::BMinusMinus => Basis::One,
        }
    }

    /// Amplitude coefficient of the token (±1).
    pub fn coefficient(self) -> i8 {
        match self {
            ControlToken::BMinusMinus => -1,
            _ => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ControlToken::BPlus => "B+",
            ControlToken::BMinus => "B-",
            ControlToken::BPlusPlus => "B++",
            ControlToken::BMinusMinus => "B--",
        }
    }
}

/// Target-side branch tokens produced by the identity:
/// `APlus` is |0⟩, `AMinus` is |1⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TargetToken {
    APlus,
    AMinus,
}

impl TargetToken {
    pub fn basis(self) -> Basis {
        match self {
            TargetToken::APlus => Basis::Zero,
            TargetToken::AMinus => Basis::One,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetToken::APlus => "A+",
            TargetToken::AMinus => "A-",
        }
    }
}

/// The two superposition branches a Hadamard produces on the control side.
/// Each branch has amplitude 1/√2 after normalization.
pub fn control_hadamard_branches(input: Basis) -> (ControlToken, ControlToken) {
    match input {
        Basis::Zero => (ControlToken::BPlus, ControlToken::BPlusPlus),
        Basis::One => (ControlToken::BMinus, ControlToken::BMinusMinus),
    }
}

/// The single branch the identity produces on the target side.
pub fn target_identity_branch(input: Basis) -> TargetToken {
    match input {
        Basis::Zero => TargetToken::APlus,
        Basis::One => TargetToken::AMinus,
    }
}

/// One conditioned term `C[B·A·]`: a control token paired with a target token
/// and the basis the target ends up in after the CNOT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchTerm {
    pub control: ControlToken,
    pub target: TargetToken,
    pub cnot_result: Basis,
}

impl BranchTerm {
    pub fn label(&self) -> String {
        format!("C[{}{}]", self.control.label(), self.target.label())
    }
}

/// All eight CNOT terms from the four control tokens and two target tokens.
/// The target flips exactly when the control token carries |1⟩.
pub fn enumerate_cnot_terms(
    controls: &[ControlToken; 4],
    targets: &[TargetToken; 2],
) -> Result<Vec<BranchTerm>, CompileError> {
    fn one_of_each<T: PartialEq + Copy>(items: &[T], expected: &[T]) -> bool {
        items.len() == expected.len()
            && expected.iter().all(|e| items.iter().filter(|i| *i == e).count() == 1)
    }
    if !one_of_each(
        controls,
        &[
            ControlToken::BPlus,
            ControlToken::BMinus,
            ControlToken::BPlusPlus,
            ControlToken::BMinusMinus,
        ],
    ) {
        return Err(CompileError::BadTokenSet(
            "control tokens must be exactly {B+, B-, B++, B--}".into(),
        ));
    }
    if !one_of_each(targets, &[TargetToken::APlus, TargetToken::AMinus]) {
        return Err(CompileError::BadTokenSet("target tokens must be exactly {A+, A-}".into()));
    }

    let mut terms = Vec::with_capacity(8);
    for &control in controls {
        for &target in targets {
            let cnot_result = match control.basis() {
                Basis::Zero => target.basis(),
                Basis::One => target.basis().flipped(),
            };
            terms.push(BranchTerm { control, target, cnot_result });
        }
    }
    Ok(terms)
}

/// One half of an assembled state: sign, control bit and target bit of a
/// single `prefactor · C[B·A·]` product.
#[derive(Debug, Clone, Serialize)]
pub struct BellHalf {
    pub coefficient: i8,
    pub control_bit: u8,
    pub target_bit: u8,
    pub term: String,
}

/// One assembled maximally entangled state with its two halves retained.
#[derive(Debug, Clone, Serialize)]
pub struct AssembledState {
    pub kind: BellKind,
    pub halves: [BellHalf; 2],
    pub state: StateVector,
}

/// The four assembled states in the order Φ+, Φ−, Ψ+, Ψ−.
#[derive(Debug, Clone, Serialize)]
pub struct BellAssembly {
    pub states: [AssembledState; 4],
}

impl BellAssembly {
    pub fn state(&self, kind: BellKind) -> &StateVector {
        &self.states[kind.index()].state
    }

    /// Unnormalized coefficient sum of the four assembled states on the
    /// computational basis (the as-printed right-hand-side total).
    pub fn printed_sum(&self) -> [i64; 4] {
        let mut total = [0i64; 4];
        for assembled in &self.states {
            for half in &assembled.halves {
                let idx = (2 * half.control_bit + half.target_bit) as usize;
                total[idx] += half.coefficient as i64;
            }
        }
        total
    }
}

/// Which assembled state a (control, target) basis input pair produces under
/// Hadamard-then-CNOT.
pub fn bell_kind_for_inputs(control: Basis, target: Basis) -> BellKind {
    match (control, target) {
        (Basis::Zero, Basis::Zero) => BellKind::PhiPlus,
        (Basis::One, Basis::Zero) => BellKind::PhiMinus,
        (Basis::Zero, Basis::One) => BellKind::PsiPlus,
        (Basis::One, Basis::One) => BellKind::PsiMinus,
    }
}

fn find_term(
    terms: &[BranchTerm],
    control: ControlToken,
    target: TargetToken,
) -> Result<&BranchTerm, CompileError> {
    terms
        .iter()
        .find(|t| t.control == control && t.target == target)
        .ok_or_else(|| CompileError::MissingTerm(format!("C[{}{}]", control.label(), target.label())))
}

fn assemble_one(
    terms: &[BranchTerm],
    kind: BellKind,
    prefactors: (ControlToken, ControlToken),
    target: TargetToken,
) -> Result<AssembledState, CompileError> {
    let make_half = |prefactor: ControlToken| -> Result<BellHalf, CompileError> {
        let term = find_term(terms, prefactor, target)?;
        Ok(BellHalf {
            coefficient: prefactor.coefficient(),
            control_bit: prefactor.basis().bit(),
            target_bit: term.cnot_result.bit(),
            term: term.label(),
        })
    };
    let halves = [make_half(prefactors.0)?, make_half(prefactors.1)?];

    let norm = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    for half in &halves {
        let idx = (2 * half.control_bit + half.target_bit) as usize;
        amps[idx] += Complex64::new(half.coefficient as f64 * norm, 0.0);
    }
    let state = StateVector::new(amps)?;
    Ok(AssembledState { kind, halves, state })
}

/// Assembles the four entangled states from the eight CNOT terms, pairing
/// each Hadamard branch with its matching conditioned term:
/// the |0⟩-input branches (B+, B++) build Φ±-type states on target A+ and
/// Ψ±-type states on target A−, signs coming from the branch coefficients
/// (B−− contributes −1).
pub fn assemble_bell(terms: &[BranchTerm]) -> Result<BellAssembly, CompileError> {
    let phi_plus = assemble_one(
        terms,
        BellKind::PhiPlus,
        (ControlToken::BPlus, ControlToken::BPlusPlus),
        TargetToken::APlus,
    )?;
    let phi_minus = assemble_one(
        terms,
        BellKind::PhiMinus,
        (ControlToken::BMinus, ControlToken::BMinusMinus),
        TargetToken::APlus,
    )?;
    let psi_plus = assemble_one(
        terms,
        BellKind::PsiPlus,
        (ControlToken::BPlus, ControlToken::BPlusPlus),
        TargetToken::AMinus,
    )?;
    let psi_minus = assemble_one(
        terms,
        BellKind::PsiMinus,
        (ControlToken::BMinus, ControlToken::BMinusMinus),
        TargetToken::AMinus,
    )?;
    Ok(BellAssembly { states: [phi_plus, phi_minus, psi_plus, psi_minus] })
}

/// Convenience: the full enumeration-and-assembly pipeline with the canonical
/// token sets.
pub fn assemble_bell_from_scratch() -> Result<BellAssembly, CompileError> {
    let controls = [
        ControlToken::BPlus,
        ControlToken::BMinus,
        ControlToken::BPlusPlus,
        ControlToken::BMinusMinus,
    ];
    let targets = [TargetToken::APlus, TargetToken::AMinus];
    let terms = enumerate_cnot_terms(&controls, &targets)?;
    assemble_bell(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spincore::{bell_states, state_fidelity};

    fn canonical_terms() -> Vec<BranchTerm> {
        enumerate_cnot_terms(
            &[
                ControlToken::BPlus,
                ControlToken::BMinus,
                ControlToken::BPlusPlus,
                ControlToken::BMinusMinus,
            ],
            &[TargetToken::APlus, TargetToken::AMinus],
        )
        .unwrap()
    }

    #[test]
    fn hadamard_branches_carry_the_expected_kets() {
        let (first, second) = control_hadamard_branches(Basis::Zero);
        assert_eq!(first, ControlToken::BPlus);
        assert_eq!(second, ControlToken::BPlusPlus);
        assert_eq!(first.basis(), Basis::Zero);
        assert_eq!(second.basis(), Basis::One);
        assert_eq!(second.coefficient(), 1);

        let (first, second) = control_hadamard_branches(Basis::One);
        assert_eq!(first, ControlToken::BMinus);
        assert_eq!(second, ControlToken::BMinusMinus);
        assert_eq!(second.coefficient(), -1);
    }

    #[test]
    fn branch_amplitudes_normalize_to_inverse_root_two() {
        // Each assembled half carries |coefficient|·1/√2 after normalization.
        let assembly = assemble_bell_from_scratch().unwrap();
        for assembled in &assembly.states {
            for half in &assembled.halves {
                let idx = (2 * half.control_bit + half.target_bit) as usize;
                let amp = assembled.state.amplitudes()[idx];
                assert!((amp.norm() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identity_branch_is_idempotent() {
        for basis in [Basis::Zero, Basis::One] {
            let once = target_identity_branch(basis);
            let twice = target_identity_branch(once.basis());
            assert_eq!(once, twice);
        }
        assert_eq!(target_identity_branch(Basis::Zero), TargetToken::APlus);
        assert_eq!(target_identity_branch(Basis::One), TargetToken::AMinus);
    }

    #[test]
    fn enumeration_yields_eight_terms_with_conditional_flips() {
        let terms = canonical_terms();
        assert_eq!(terms.len(), 8);
        let kept = find_term(&terms, ControlToken::BPlus, TargetToken::APlus).unwrap();
        assert_eq!(kept.cnot_result, Basis::Zero);
        let flipped = find_term(&terms, ControlToken::BPlusPlus, TargetToken::APlus).unwrap();
        assert_eq!(flipped.cnot_result, Basis::One);
        let minus_flipped =
            find_term(&terms, ControlToken::BMinusMinus, TargetToken::AMinus).unwrap();
        assert_eq!(minus_flipped.cnot_result, Basis::Zero);
    }

    #[test]
    fn enumeration_rejects_wrong_token_sets() {
        let bad = enumerate_cnot_terms(
            &[
                ControlToken::BPlus,
                ControlToken::BPlus,
                ControlToken::BPlusPlus,
                ControlToken::BMinusMinus,
            ],
            &[TargetToken::APlus, TargetToken::AMinus],
        );
        assert!(matches!(bad, Err(CompileError::BadTokenSet(_))));
    }

    #[test]
    fn assembled_states_match_the_canonical_bell_basis() {
        let assembly = assemble_bell_from_scratch().unwrap();
        let canonical = bell_states();
        for kind in BellKind::ALL {
            let f =
                state_fidelity(assembly.state(kind), &canonical[kind.index()]).unwrap();
            assert!(f > 1.0 - crate::tol::FIDELITY_SLACK, "{kind:?}: fidelity {f}");
        }
    }

    #[test]
    fn psi_minus_second_half_is_negative() {
        let assembly = assemble_bell_from_scratch().unwrap();
        let psi_minus = &assembly.states[BellKind::PsiMinus.index()];
        assert_eq!(psi_minus.halves[0].coefficient, 1);
        assert_eq!(psi_minus.halves[1].coefficient, -1);
        // (|01⟩ − |10⟩)/√2
        let amps = psi_minus.state.amplitudes();
        assert!(amps[1].re > 0.0);
        assert!(amps[2].re < 0.0);
    }

    #[test]
    fn printed_sum_of_all_four_states() {
        // The unnormalized sum telescopes: Φ+ + Φ− + Ψ+ + Ψ− = 2|00⟩ + 2|01⟩.
        let assembly = assemble_bell_from_scratch().unwrap();
        assert_eq!(assembly.printed_sum(), [2, 2, 0, 0]);
    }

    #[test]
    fn assembly_reports_missing_terms_by_name() {
        let mut terms = canonical_terms();
        terms.retain(|t| {
            !(t.control == ControlToken::BMinusMinus && t.target == TargetToken::APlus)
        });
        let err = assemble_bell(&terms).unwrap_err();
        assert!(err.to_string().contains("C[B--A+]"), "got {err}");
    }

    #[test]
    fn input_pairs_map_onto_the_four_states() {
        assert_eq!(bell_kind_for_inputs(Basis::Zero, Basis::Zero), BellKind::PhiPlus);
        assert_eq!(bell_kind_for_inputs(Basis::One, Basis::Zero), BellKind::PhiMinus);
        assert_eq!(bell_kind_for_inputs(Basis::Zero, Basis::One), BellKind::PsiPlus);
        assert_eq!(bell_kind_for_inputs(Basis::One, Basis::One), BellKind::PsiMinus);
    }

    #[test]
    fn assembled_states_are_pairwise_orthonormal() {
        let assembly = assemble_bell_from_scratch().unwrap();
        for a in BellKind::ALL {
            for b in BellKind::ALL {
                let f = state_fidelity(assembly.state(a), assembly.state(b)).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((f - expected).abs() < 1e-12);
            }
        }
    }
}
