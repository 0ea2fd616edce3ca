//! Command implementations behind the `mrqsim` CLI.
//!
//! Each command takes a parsed [`Scenario`] plus the raw bytes it came from,
//! validates its inputs before doing any work, and produces a [`RunResult`]
//! whose JSON serialization is deterministic: identical scenario bytes and
//! seed yield byte-identical results regardless of thread count.

use crate::blochsim::{
    stimulated_echo_with_options, t1_recovery_hadamard_with_delay, PurificationTrace, SteOptions,
    SteTimings, Trajectory, COINCIDENCE_DELAY_FACTOR,
};
use crate::fieldmodel::{field_report_with_tolerance, FieldReport, DEFAULT_HOMOGENEITY_TOLERANCE};
use crate::pulsecompiler::{
    assemble_bell_from_scratch, bell_kind_for_inputs, compile_bell_sequence, parse_program,
    verify_compiled, Basis, CompileOptions, PulseProgram, VerificationReport,
};
use crate::scenario::{Scenario, SteConfig};
use crate::spincore::{
    bell_states, canonical_hadamard, cnot_gate, hadamard_via_rotations, pseudo_pure_density,
    purify_step, state_fidelity, BellKind, PseudoPureSpec, StateVector, UnitaryGate,
};
use crate::{tol, Error};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Schema tag stamped on every result document.
pub const RESULT_SCHEMA: &str = "mrqsim.result.v1";

/// The five subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Field,
    Gate,
    Purify,
    Bell,
    T1Had,
}

impl CommandKind {
    pub fn label(self) -> &'static str {
        match self {
            CommandKind::Field => "field",
            CommandKind::Gate => "gate",
            CommandKind::Purify => "purify",
            CommandKind::Bell => "bell",
            CommandKind::T1Had => "t1had",
        }
    }
}

impl std::str::FromStr for CommandKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "field" => Ok(CommandKind::Field),
            "gate" => Ok(CommandKind::Gate),
            "purify" => Ok(CommandKind::Purify),
            "bell" => Ok(CommandKind::Bell),
            "t1had" => Ok(CommandKind::T1Had),
            other => Err(format!("unknown command {other:?}")),
        }
    }
}

/// Envelope for one command run.
#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub schema: &'static str,
    pub command: &'static str,
    /// SHA-256 over the scenario bytes followed by the little-endian seed.
    pub input_digest: String,
    pub seed: u64,
    pub output: CommandOutput,
}

impl RunResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialization cannot fail")
    }

    /// Trajectory carried by the output, for CSV emission.
    pub fn trajectory(&self) -> Option<&Trajectory> {
        match &self.output {
            CommandOutput::Purify(out) => Some(&out.trajectory),
            CommandOutput::T1Had(out) => Some(&out.trajectory),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CommandOutput {
    Field(FieldOutput),
    Gate(Box<GateOutput>),
    Purify(Box<PurifyOutput>),
    Bell(Box<BellOutput>),
    T1Had(Box<T1HadOutput>),
}

#[derive(Debug, Clone, Serialize)]
pub struct FieldOutput {
    pub report: FieldReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct GateOutput {
    pub hadamard: UnitaryGate,
    /// Max entrywise distance of the rotation-built Hadamard from the
    /// canonical matrix.
    pub hadamard_matrix_deviation: f64,
    pub h_on_zero: StateVector,
    pub h_on_one: StateVector,
    pub h_on_zero_fidelity: f64,
    pub h_on_one_fidelity: f64,
    pub cnot: UnitaryGate,
    pub bell_states: [StateVector; 4],
    pub bell_labels: [&'static str; 4],
    /// Fidelity of Hadamard-then-CNOT on each basis input against the
    /// matching maximally entangled state.
    pub circuit_bell_fidelities: [f64; 4],
    pub bell_orthonormality_max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub step: usize,
    pub epsilon: f64,
    pub impure_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompensationCheck {
    pub shifts_rad_per_s: Vec<f64>,
    pub with_pulses_phase_error_rad: Vec<f64>,
    pub without_pulses_phase_error_rad: Vec<f64>,
    pub max_compensated_error_rad: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PurifyOutput {
    pub timings_s: [f64; 4],
    pub window_half_width_rad: f64,
    pub stage_fractions: Vec<f64>,
    pub cumulative_factor: f64,
    pub selection_emptied_ensemble: bool,
    pub final_magnetization: [f64; 3],
    pub final_phase_rad: f64,
    pub echo_compensation: CompensationCheck,
    pub pseudo_pure_ledger: Vec<LedgerEntry>,
    pub warnings: Vec<String>,
    pub trajectory: Trajectory,
}

#[derive(Debug, Clone, Serialize)]
pub struct BellOutput {
    pub program: PulseProgram,
    pub verification: VerificationReport,
    pub four_state_labels: [&'static str; 4],
    pub four_state_fidelities: [f64; 4],
    pub substitution_fidelities: [f64; 4],
    pub substitution_max_difference: f64,
    pub assembled_orthonormality_max_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct T1HadOutput {
    pub coincidence_delay_s: f64,
    pub mz_at_coincidence: f64,
    pub mz_error_from_half: f64,
    pub final_magnetization: [f64; 3],
    pub warnings: Vec<String>,
    pub trajectory: Trajectory,
}

/// Hex SHA-256 over the scenario bytes followed by the seed.
pub fn input_digest(scenario_bytes: &[u8], seed: u64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(scenario_bytes);
    hasher.update(seed.to_le_bytes());
    hex::encode(hasher.finalize())
}

/// Runs one command. `seed_override` (the CLI `--seed`) takes precedence over
/// the scenario's ensemble seed.
pub fn run_command(
    kind: CommandKind,
    scenario: &Scenario,
    scenario_bytes: &[u8],
    seed_override: Option<u64>,
) -> Result<RunResult, Error> {
    let seed = seed_override
        .or_else(|| scenario.ensemble.as_ref().map(|e| e.seed))
        .unwrap_or(0);
    let output = match kind {
        CommandKind::Field => CommandOutput::Field(cmd_field(scenario)?),
        CommandKind::Gate => CommandOutput::Gate(Box::new(cmd_gate()?)),
        CommandKind::Purify => CommandOutput::Purify(Box::new(cmd_purify(scenario, seed)?)),
        CommandKind::Bell => CommandOutput::Bell(Box::new(cmd_bell(scenario)?)),
        CommandKind::T1Had => CommandOutput::T1Had(Box::new(cmd_t1had(scenario, seed)?)),
    };
    Ok(RunResult {
        schema: RESULT_SCHEMA,
        command: kind.label(),
        input_digest: input_digest(scenario_bytes, seed),
        seed,
        output,
    })
}

fn cmd_field(scenario: &Scenario) -> Result<FieldOutput, Error> {
    let system = scenario.magnet()?.build()?;
    let tolerance =
        scenario.output.homogeneity_tolerance.unwrap_or(DEFAULT_HOMOGENEITY_TOLERANCE);
    let report =
        field_report_with_tolerance(&system, scenario.output.samples_per_site, tolerance)?;
    Ok(FieldOutput { report })
}

fn cmd_gate() -> Result<GateOutput, Error> {
    let hadamard = hadamard_via_rotations();
    let hadamard_matrix_deviation = hadamard.max_entry_deviation(&canonical_hadamard());
    if hadamard_matrix_deviation > tol::ENTRYWISE {
        return Err(Error::Invariant(format!(
            "rotation-built Hadamard deviates from the canonical matrix by {hadamard_matrix_deviation:.3e}"
        )));
    }

    let h_on_zero = hadamard.apply(&StateVector::basis(1, 0)?)?;
    let h_on_one = hadamard.apply(&StateVector::basis(1, 1)?)?;
    let hr = std::f64::consts::FRAC_1_SQRT_2;
    let plus = StateVector::new(vec![hr.into(), hr.into()])?;
    let minus = StateVector::new(vec![hr.into(), (-hr).into()])?;
    let h_on_zero_fidelity = state_fidelity(&h_on_zero, &plus)?;
    let h_on_one_fidelity = state_fidelity(&h_on_one, &minus)?;

    let cnot = cnot_gate(0, 1, 2)?;
    let circuit = hadamard.kron(&UnitaryGate::identity(1)?)?.then(&cnot)?;
    let states = bell_states();
    let mut circuit_bell_fidelities = [0.0; 4];
    for (input, kind) in [
        (0usize, BellKind::PhiPlus),
        (2, BellKind::PhiMinus),
        (1, BellKind::PsiPlus),
        (3, BellKind::PsiMinus),
    ] {
        let out = circuit.apply(&StateVector::basis(2, input)?)?;
        circuit_bell_fidelities[kind.index()] = state_fidelity(&out, &states[kind.index()])?;
    }

    let mut bell_orthonormality_max_deviation: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            bell_orthonormality_max_deviation = bell_orthonormality_max_deviation
                .max((state_fidelity(a, b)? - expected).abs());
        }
    }

    for (label, fidelity) in [
        ("H|0>", h_on_zero_fidelity),
        ("H|1>", h_on_one_fidelity),
        ("bell(phi+)", circuit_bell_fidelities[0]),
        ("bell(phi-)", circuit_bell_fidelities[1]),
        ("bell(psi+)", circuit_bell_fidelities[2]),
        ("bell(psi-)", circuit_bell_fidelities[3]),
    ] {
        if fidelity < 1.0 - tol::FIDELITY_SLACK {
            return Err(Error::Invariant(format!("{label} fidelity {fidelity} below threshold")));
        }
    }

    Ok(GateOutput {
        hadamard,
        hadamard_matrix_deviation,
        h_on_zero,
        h_on_one,
        h_on_zero_fidelity,
        h_on_one_fidelity,
        cnot,
        bell_states: states,
        bell_labels: [
            BellKind::PhiPlus.label(),
            BellKind::PhiMinus.label(),
            BellKind::PsiPlus.label(),
            BellKind::PsiMinus.label(),
        ],
        circuit_bell_fidelities,
        bell_orthonormality_max_deviation,
    })
}

fn wrap_phase(phi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut p = phi % two_pi;
    if p > std::f64::consts::PI {
        p -= two_pi;
    } else if p <= -std::f64::consts::PI {
        p += two_pi;
    }
    p
}

fn ste_timings(config: &SteConfig) -> SteTimings {
    SteTimings {
        t_a1: config.t_a1_s,
        t_a2: config.t_a2_s,
        t_a3: config.t_a3_s,
        t_a4: config.t_a4_s,
    }
}

fn purify_sample_dt(scenario: &Scenario, config: &SteConfig) -> f64 {
    scenario.output.trajectory_sample_dt_s.unwrap_or_else(|| {
        let total = config.t_a1_s + config.t_a2_s + config.t_a3_s + config.t_a4_s;
        (total / 400.0).max(f64::MIN_POSITIVE)
    })
}

fn cmd_purify(scenario: &Scenario, seed: u64) -> Result<PurifyOutput, Error> {
    let ste = scenario.stimulated_echo()?.clone();
    let timings = ste_timings(&ste);
    timings.validate()?;
    let ensemble_config = scenario.ensemble()?;
    let base = ensemble_config.build(seed)?;
    let warnings = base.warnings();
    let sample_dt = purify_sample_dt(scenario, &ste);
    let options =
        SteOptions { selection_phase: ste.selection_phase_rad, compensation_pulses: true };

    let mut main_run = base.clone();
    let trace: PurificationTrace = stimulated_echo_with_options(
        &mut main_run,
        &timings,
        ste.window_half_width_rad,
        options,
        sample_dt,
    )?;

    // Compensation comparison: rerun with every off-resonance shifted by a
    // constant, with and without the refocusing pulses, and record the net
    // phase error relative to each unshifted baseline.
    let shifts = ste.shift_probe_rad_per_s.clone();
    let run_phase = |compensation: bool, shift: f64| -> Result<f64, Error> {
        let mut ensemble = base.shifted(shift);
        let opts = SteOptions {
            selection_phase: ste.selection_phase_rad,
            compensation_pulses: compensation,
        };
        let trace = stimulated_echo_with_options(
            &mut ensemble,
            &timings,
            ste.window_half_width_rad,
            opts,
            sample_dt,
        )?;
        Ok(trace.final_phase)
    };
    let with_baseline = run_phase(true, 0.0)?;
    let without_baseline = run_phase(false, 0.0)?;
    let mut with_pulses = Vec::with_capacity(shifts.len());
    let mut without_pulses = Vec::with_capacity(shifts.len());
    for &shift in &shifts {
        with_pulses.push(wrap_phase(run_phase(true, shift)? - with_baseline));
        without_pulses.push(wrap_phase(run_phase(false, shift)? - without_baseline));
    }
    let max_compensated_error_rad =
        with_pulses.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));

    // Pseudo-pure bookkeeping for the configured number of purification
    // steps at the configured factor.
    let ledger_config = &scenario.sequence.purify_ledger;
    let mut spec = PseudoPureSpec::new(ledger_config.initial_epsilon, StateVector::basis(1, 0)?)?;
    let mut pseudo_pure_ledger = vec![LedgerEntry {
        step: 0,
        epsilon: spec.epsilon(),
        impure_fraction: spec.impure_fraction(),
    }];
    for step in 1..=ledger_config.steps {
        spec = purify_step(&spec, ledger_config.factor)?;
        pseudo_pure_ledger.push(LedgerEntry {
            step,
            epsilon: spec.epsilon(),
            impure_fraction: spec.impure_fraction(),
        });
    }
    // The density construction must stay valid at the final epsilon.
    pseudo_pure_density(&spec)?;

    Ok(PurifyOutput {
        timings_s: [timings.t_a1, timings.t_a2, timings.t_a3, timings.t_a4],
        window_half_width_rad: ste.window_half_width_rad,
        stage_fractions: trace.stage_fractions.clone(),
        cumulative_factor: trace.cumulative_factor,
        selection_emptied_ensemble: trace.empty,
        final_magnetization: trace.final_magnetization,
        final_phase_rad: trace.final_phase,
        echo_compensation: CompensationCheck {
            shifts_rad_per_s: shifts,
            with_pulses_phase_error_rad: with_pulses,
            without_pulses_phase_error_rad: without_pulses,
            max_compensated_error_rad,
        },
        pseudo_pure_ledger,
        warnings,
        trajectory: trace.trajectory,
    })
}

fn cmd_bell(scenario: &Scenario) -> Result<BellOutput, Error> {
    let spec = parse_program(&scenario.compiler.program)?;
    let options = CompileOptions { refocus_axis_y: scenario.compiler.use_y_refocus };
    let program = compile_bell_sequence(&spec, options)?;
    let verification = verify_compiled(&program)?;

    // The four canonical basis pairs, compiled and verified with both axis
    // annotations for the substitutable half-turn pair.
    let pairs =
        [(Basis::Zero, Basis::Zero), (Basis::One, Basis::Zero), (Basis::Zero, Basis::One), (Basis::One, Basis::One)];
    let mut four_state_labels = [""; 4];
    let mut four_state_fidelities = [0.0; 4];
    let mut substitution_fidelities = [0.0; 4];
    for (control, target) in pairs {
        let kind = bell_kind_for_inputs(control, target);
        let source = format!(
            "control={}; target={}; gates=H,CNOT",
            control.ket(),
            target.ket()
        );
        let parsed = parse_program(&source)?;
        let z_report = verify_compiled(&compile_bell_sequence(
            &parsed,
            CompileOptions { refocus_axis_y: false },
        )?)?;
        let y_report = verify_compiled(&compile_bell_sequence(
            &parsed,
            CompileOptions { refocus_axis_y: true },
        )?)?;
        four_state_labels[kind.index()] = kind.label();
        four_state_fidelities[kind.index()] = z_report.fidelity;
        substitution_fidelities[kind.index()] = y_report.fidelity;
        if z_report.fidelity < 1.0 - tol::FIDELITY_SLACK {
            return Err(Error::Invariant(format!(
                "compiled {} fidelity {} below threshold",
                kind.label(),
                z_report.fidelity
            )));
        }
    }
    let substitution_max_difference = four_state_fidelities
        .iter()
        .zip(&substitution_fidelities)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if substitution_max_difference > tol::FIDELITY_SLACK {
        return Err(Error::Invariant(format!(
            "half-turn axis substitution moved a fidelity by {substitution_max_difference:.3e}"
        )));
    }

    let assembly = assemble_bell_from_scratch()?;
    let mut assembled_orthonormality_max_deviation: f64 = 0.0;
    for a in BellKind::ALL {
        for b in BellKind::ALL {
            let f = state_fidelity(assembly.state(a), assembly.state(b))?;
            let expected = if a == b { 1.0 } else { 0.0 };
            assembled_orthonormality_max_deviation =
                assembled_orthonormality_max_deviation.max((f - expected).abs());
        }
    }
    if assembled_orthonormality_max_deviation > tol::FIDELITY_SLACK {
        return Err(Error::Invariant(format!(
            "assembled states deviate from orthonormality by {assembled_orthonormality_max_deviation:.3e}"
        )));
    }

    Ok(BellOutput {
        program,
        verification,
        four_state_labels,
        four_state_fidelities,
        substitution_fidelities,
        substitution_max_difference,
        assembled_orthonormality_max_deviation,
    })
}

fn cmd_t1had(scenario: &Scenario, seed: u64) -> Result<T1HadOutput, Error> {
    let ensemble_config = scenario.ensemble()?;
    let explicit_delay = scenario.sequence.t1_recovery.coincidence_delay_s;
    if ensemble_config.t1_s.is_none() && explicit_delay.is_none() {
        return Err(Error::Scenario(crate::scenario::ScenarioError::Invalid(
            "t1had needs a finite ensemble.t1_s or an explicit sequence.t1_recovery.coincidence_delay_s"
                .into(),
        )));
    }
    let mut ensemble = ensemble_config.build(seed)?;
    let warnings = ensemble.warnings();
    let delay = explicit_delay.unwrap_or(COINCIDENCE_DELAY_FACTOR * ensemble.t1());
    let sample_dt =
        scenario.output.trajectory_sample_dt_s.unwrap_or((delay / 400.0).max(f64::MIN_POSITIVE));
    let report = t1_recovery_hadamard_with_delay(&mut ensemble, delay, sample_dt)?;
    Ok(T1HadOutput {
        coincidence_delay_s: report.coincidence_delay_s,
        mz_at_coincidence: report.mz_at_coincidence,
        mz_error_from_half: (report.mz_at_coincidence - 0.5).abs(),
        final_magnetization: report.final_magnetization,
        warnings,
        trajectory: report.trajectory,
    })
}

/// Renders a trajectory as CSV with a `t,mx,my,mz` header.
pub fn trajectory_csv(trajectory: &Trajectory) -> String {
    let mut out = String::from("t,mx,my,mz\n");
    for p in &trajectory.points {
        out.push_str(&format!("{},{},{},{}\n", p.t_s, p.mx, p.my, p.mz));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENARIO: &str = r#"{
        "magnet": {
            "b0_tesla": 3.0,
            "main_gradient": {"kind": "constant", "offset_tesla": 0.0},
            "sites": [
                {"z_center_m": 0.0, "half_width_m": 0.005,
                 "reverse_gradient": {"kind": "constant", "offset_tesla": -0.005}},
                {"z_center_m": 0.1, "half_width_m": 0.005,
                 "reverse_gradient": {"kind": "constant", "offset_tesla": -0.010}}
            ]
        },
        "ensemble": {
            "n_isochromats": 2000,
            "t1_s": 1.0,
            "off_resonance": {"distribution": "uniform", "max_rad_per_s": 30.0},
            "seed": 11
        },
        "sequence": {
            "stimulated_echo": {
                "t_a1_s": 0.012, "t_a2_s": 0.012, "t_a3_s": 0.012, "t_a4_s": 0.012,
                "window_half_width_rad": 2.0
            }
        }
    }"#;

    fn scenario() -> Scenario {
        Scenario::from_json_str(SCENARIO).unwrap()
    }

    #[test]
    fn field_command_reports_constant_offsets() {
        let result =
            run_command(CommandKind::Field, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let CommandOutput::Field(out) = &result.output else { panic!("wrong output") };
        assert_eq!(out.report.sites.len(), 2);
        assert_eq!(out.report.sites[0].frequency_spread_rad_per_s, 0.0);
        assert!(out.report.sites[0].qubit_grade);
        assert_eq!(result.command, "field");
        assert_eq!(result.seed, 11);
    }

    #[test]
    fn gate_command_meets_its_thresholds() {
        let result =
            run_command(CommandKind::Gate, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let CommandOutput::Gate(out) = &result.output else { panic!("wrong output") };
        assert!(out.hadamard_matrix_deviation <= 1e-12);
        assert!(out.h_on_zero_fidelity >= 1.0 - 1e-12);
        assert!(out.circuit_bell_fidelities.iter().all(|f| *f >= 1.0 - 1e-12));
    }

    #[test]
    fn purify_command_produces_ledger_and_compensation() {
        let result =
            run_command(CommandKind::Purify, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let CommandOutput::Purify(out) = &result.output else { panic!("wrong output") };
        assert_eq!(out.pseudo_pure_ledger.len(), 4);
        let closed_form = 1.0 * 1e-6 * 1e-6 * 1e-6;
        assert_eq!(out.pseudo_pure_ledger[3].impure_fraction, closed_form);
        assert!((out.pseudo_pure_ledger[3].impure_fraction - 1e-18).abs() < 1e-12 * 1e-18);
        assert!(out.echo_compensation.max_compensated_error_rad <= 1e-9);
        let last_uncompensated =
            out.echo_compensation.without_pulses_phase_error_rad.last().unwrap().abs();
        assert!(last_uncompensated > 1e-6);
    }

    #[test]
    fn purify_requires_matching_dephasing_intervals() {
        let mut s = scenario();
        s.sequence.stimulated_echo.as_mut().unwrap().t_a3_s = 0.013;
        let err = run_command(CommandKind::Purify, &s, SCENARIO.as_bytes(), None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn bell_command_verifies_all_four_pairs() {
        let result =
            run_command(CommandKind::Bell, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let CommandOutput::Bell(out) = &result.output else { panic!("wrong output") };
        assert!(out.four_state_fidelities.iter().all(|f| *f >= 1.0 - 1e-12));
        assert!(out.substitution_max_difference <= 1e-12);
        assert_eq!(out.four_state_labels, ["phi_plus", "phi_minus", "psi_plus", "psi_minus"]);
    }

    #[test]
    fn t1had_command_reports_the_coincidence_value() {
        let result =
            run_command(CommandKind::T1Had, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let CommandOutput::T1Had(out) = &result.output else { panic!("wrong output") };
        assert!(out.mz_error_from_half < 1e-3);
        assert!(!out.trajectory.points.is_empty());
    }

    #[test]
    fn t1had_without_t1_or_delay_is_a_config_error() {
        let text = r#"{"ensemble": {"n_isochromats": 10,
            "off_resonance": {"distribution": "none"}}}"#;
        let s = Scenario::from_json_str(text).unwrap();
        let err = run_command(CommandKind::T1Had, &s, text.as_bytes(), None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn results_are_reproducible_for_identical_inputs() {
        let a = run_command(CommandKind::Purify, &scenario(), SCENARIO.as_bytes(), None)
            .unwrap()
            .to_json();
        let b = run_command(CommandKind::Purify, &scenario(), SCENARIO.as_bytes(), None)
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn seed_override_changes_the_digest() {
        let a = run_command(CommandKind::Field, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let b =
            run_command(CommandKind::Field, &scenario(), SCENARIO.as_bytes(), Some(99)).unwrap();
        assert_ne!(a.input_digest, b.input_digest);
        assert_eq!(b.seed, 99);
    }

    #[test]
    fn trajectory_csv_has_header_and_rows() {
        let result =
            run_command(CommandKind::T1Had, &scenario(), SCENARIO.as_bytes(), None).unwrap();
        let csv = trajectory_csv(result.trajectory().unwrap());
        assert!(csv.starts_with("t,mx,my,mz\n"));
        assert!(csv.lines().count() > 10);
    }
}
