//! Textual circuit programs and their compilation to pulse programs.

use super::branches::control_hadamard_branches;
use super::signal::{transform_signal, Basis, LogicalSignal, Role, Sign, TokenKind};
use super::CompileError;
use crate::spincore::Axis;
use serde::Serialize;

/// Parsed form of the minimal circuit grammar, e.g.
/// `control=|0>; target=|0>; gates=H,CNOT`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitSpec {
    pub control_basis: Basis,
    pub target_basis: Basis,
    pub gates: Vec<GateOp>,
}

impl CircuitSpec {
    pub fn has_hadamard(&self) -> bool {
        self.gates.contains(&GateOp::Hadamard)
    }

    pub fn has_cnot(&self) -> bool {
        self.gates.contains(&GateOp::Cnot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateOp {
    #[serde(rename = "H")]
    Hadamard,
    #[serde(rename = "I")]
    Identity,
    #[serde(rename = "CNOT")]
    Cnot,
}

fn parse_basis(value: &str, key: &str) -> Result<Basis, CompileError> {
    match value {
        "|0>" => Ok(Basis::Zero),
        "|1>" => Ok(Basis::One),
        other => Err(CompileError::Parse(format!(
            "{key} must be |0> or |1>, got {other:?}"
        ))),
    }
}

/// Parses the line-oriented program grammar. Statements are separated by
/// newlines or semicolons; each is `key=value` with keys `control`, `target`
/// and `gates`. The gate list is comma-separated from {H, I, CNOT} and may be
/// empty.
pub fn parse_program(src: &str) -> Result<CircuitSpec, CompileError> {
    let mut control = None;
    let mut target = None;
    let mut gates: Option<Vec<GateOp>> = None;

    for raw in src.split(|c| c == '\n' || c == ';') {
        let stmt = raw.trim();
        if stmt.is_empty() || stmt.starts_with('#') {
            continue;
        }
        let (key, value) = stmt
            .split_once('=')
            .ok_or_else(|| CompileError::Parse(format!("expected key=value, got {stmt:?}")))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "control" => {
                if control.replace(parse_basis(value, "control")?).is_some() {
                    return Err(CompileError::Parse("control specified twice".into()));
                }
            }
            "target" => {
                if target.replace(parse_basis(value, "target")?).is_some() {
                    return Err(CompileError::Parse("target specified twice".into()));
                }
            }
            "gates" => {
                if gates.is_some() {
                    return Err(CompileError::Parse("gates specified twice".into()));
                }
                let mut parsed = Vec::new();
                for gate in value.split(',') {
                    let gate = gate.trim();
                    if gate.is_empty() {
                        continue;
                    }
                    parsed.push(match gate.to_ascii_uppercase().as_str() {
                        "H" => GateOp::Hadamard,
                        "I" => GateOp::Identity,
                        "CNOT" => GateOp::Cnot,
                        other => {
                            return Err(CompileError::Parse(format!(
                                "unsupported gate {other:?}; supported gates are H, I, CNOT"
                            )))
                        }
                    });
                }
                gates = Some(parsed);
            }
            other => {
                return Err(CompileError::Parse(format!(
                    "unknown key {other:?}; expected control, target or gates"
                )))
            }
        }
    }

    Ok(CircuitSpec {
        control_basis: control
            .ok_or_else(|| CompileError::Parse("missing control=|0>/|1> statement".into()))?,
        target_basis: target
            .ok_or_else(|| CompileError::Parse("missing target=|0>/|1> statement".into()))?,
        gates: gates.ok_or_else(|| CompileError::Parse("missing gates=... statement".into()))?,
    })
}

/// Compiler switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompileOptions {
    /// Annotate the substitutable control-line half-turn pair about y instead
    /// of z. Either axis composes to a pure phase over the pair, so verified
    /// fidelities are unchanged.
    pub refocus_axis_y: bool,
}

/// Which functional block of the program a step belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    ControlHadamard,
    ControlPassthrough,
    Cnot,
    TargetIdentity,
}

/// Line a program step plays on; entangling steps span both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepChannel {
    ControlLine,
    TargetLine,
    Both,
}

/// Token of a program step: an RF pulse or the entangling block marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepToken {
    Pulse(TokenKind),
    Cnot,
}

impl StepToken {
    pub fn label(self) -> &'static str {
        match self {
            StepToken::Pulse(kind) => kind.label(),
            StepToken::Cnot => "CNOT",
        }
    }
}

impl Serialize for StepToken {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// One ordered step of a compiled pulse program.
#[derive(Debug, Clone, Serialize)]
pub struct ProgramStep {
    pub order: usize,
    pub channel: StepChannel,
    pub token: StepToken,
    pub axis: Option<Axis>,
    pub block: BlockKind,
    /// Branch label for control-line steps compiled from a superposition
    /// branch (e.g. "B+", "B--").
    pub branch: Option<String>,
}

/// A compiled two-channel pulse program.
#[derive(Debug, Clone, Serialize)]
pub struct PulseProgram {
    pub lowering_version: String,
    pub control_input: Basis,
    pub target_input: Basis,
    pub gates: Vec<GateOp>,
    /// Axis annotation chosen for the substitutable control half-turn pair.
    pub refocus_axis: Axis,
    pub steps: Vec<ProgramStep>,
    pub notes: Vec<String>,
}

impl PulseProgram {
    pub fn steps_in(&self, block: BlockKind) -> impl Iterator<Item = &ProgramStep> {
        self.steps.iter().filter(move |s| s.block == block)
    }
}

/// Compiles a parsed circuit into a two-channel pulse program.
///
/// Control tokens precede the entangling block, which precedes the target
/// tokens; simultaneity is not needed for the verified product. With a
/// Hadamard present the control line carries one pulse train per
/// superposition branch; the |0⟩-type branch train is the axis-substitutable
/// half-turn pair.
pub fn compile_bell_sequence(
    spec: &CircuitSpec,
    options: CompileOptions,
) -> Result<PulseProgram, CompileError> {
    let refocus_axis = if options.refocus_axis_y { Axis::Y } else { Axis::Z };
    let mut steps: Vec<ProgramStep> = Vec::new();
    let mut notes = Vec::new();

    let push = |steps: &mut Vec<ProgramStep>,
                    channel: StepChannel,
                    token: StepToken,
                    axis: Option<Axis>,
                    block: BlockKind,
                    branch: Option<String>| {
        let order = steps.len();
        steps.push(ProgramStep { order, channel, token, axis, block, branch });
    };

    if spec.has_hadamard() {
        let (first, second) = control_hadamard_branches(spec.control_basis);
        for branch_token in [first, second] {
            let sign = if branch_token.coefficient() < 0 { Sign::Minus } else { Sign::Plus };
            let signal = LogicalSignal::with_sign(Role::Control, branch_token.basis(), sign);
            for pulse in transform_signal(&signal) {
                let axis = match pulse.kind {
                    // The half-turn pair is the substitutable one.
                    TokenKind::R180 => Some(refocus_axis),
                    _ => pulse.axis,
                };
                push(
                    &mut steps,
                    StepChannel::ControlLine,
                    StepToken::Pulse(pulse.kind),
                    axis,
                    BlockKind::ControlHadamard,
                    Some(branch_token.label().to_string()),
                );
            }
        }
    } else if spec.has_cnot() {
        // No Hadamard: the control line still has to carry its input signal
        // for the entangling block to condition on.
        let signal = LogicalSignal::new(Role::Control, spec.control_basis);
        for pulse in transform_signal(&signal) {
            let axis = match pulse.kind {
                TokenKind::R180 => Some(refocus_axis),
                _ => pulse.axis,
            };
            push(
                &mut steps,
                StepChannel::ControlLine,
                StepToken::Pulse(pulse.kind),
                axis,
                BlockKind::ControlPassthrough,
                None,
            );
        }
    }

    if spec.has_cnot() {
        push(&mut steps, StepChannel::Both, StepToken::Cnot, None, BlockKind::Cnot, None);
    }

    let target_signal = LogicalSignal::new(Role::Target, spec.target_basis);
    for pulse in transform_signal(&target_signal) {
        push(
            &mut steps,
            StepChannel::TargetLine,
            StepToken::Pulse(pulse.kind),
            pulse.axis,
            BlockKind::TargetIdentity,
            None,
        );
    }

    notes.push(
        "target-line pulse train is identical for |0> and |1>; the intended basis is carried \
         as metadata and resolved by the input state"
            .to_string(),
    );

    Ok(PulseProgram {
        lowering_version: super::verify::LOWERING_TABLE_VERSION.to_string(),
        control_input: spec.control_basis,
        target_input: spec.target_basis,
        gates: spec.gates.clone(),
        refocus_axis,
        steps,
        notes,
    })
}
