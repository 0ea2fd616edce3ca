//! Logical signals and their fixed pulse-train transformations.

use crate::spincore::Axis;
use serde::{Deserialize, Serialize};

/// Which side of a two-qubit operation a signal belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Control,
    Target,
}

/// Basis label of a signal; |0⟩ rides the cosine component, |1⟩ the sine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Zero,
    One,
}

impl Basis {
    pub fn bit(self) -> u8 {
        match self {
            Basis::Zero => 0,
            Basis::One => 1,
        }
    }

    pub fn flipped(self) -> Basis {
        match self {
            Basis::Zero => Basis::One,
            Basis::One => Basis::Zero,
        }
    }

    pub fn ket(self) -> &'static str {
        match self {
            Basis::Zero => "|0>",
            Basis::One => "|1>",
        }
    }
}

/// Amplitude sign carried by a signal; defaults to `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Default for Sign {
    fn default() -> Self {
        Sign::Plus
    }
}

/// A logical control/target signal to be turned into RF pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogicalSignal {
    pub role: Role,
    pub basis: Basis,
    pub sign: Sign,
}

impl LogicalSignal {
    pub fn new(role: Role, basis: Basis) -> Self {
        Self { role, basis, sign: Sign::Plus }
    }

    pub fn with_sign(role: Role, basis: Basis, sign: Sign) -> Self {
        Self { role, basis, sign }
    }
}

/// Rotation labels a pulse token may carry. `MinusR90` is a sign-flipped
/// quarter-turn (a negated branch amplitude); `RMinus90` is a quarter-turn of
/// negative angle. Both lower to the same rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    #[serde(rename = "R(90)")]
    R90,
    #[serde(rename = "-R(90)")]
    MinusR90,
    #[serde(rename = "R(180)")]
    R180,
    #[serde(rename = "R(-90)")]
    RMinus90,
}

impl TokenKind {
    pub fn label(self) -> &'static str {
        match self {
            TokenKind::R90 => "R(90)",
            TokenKind::MinusR90 => "-R(90)",
            TokenKind::R180 => "R(180)",
            TokenKind::RMinus90 => "R(-90)",
        }
    }
}

/// Physical line a pulse token is played on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    ControlLine,
    TargetLine,
}

/// One RF pulse token with its optional axis annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseToken {
    pub kind: TokenKind,
    pub channel: Channel,
    pub axis: Option<Axis>,
}

/// Fixed signal-to-pulse transformation:
///
/// - control |0⟩ → `R(180) + R(180)` (about z, the substitutable pair)
/// - control |1⟩ → `R(90)` or `−R(90)` depending on the sign (about x)
/// - target (either basis) → `R(90) + R(180) + R(180) + R(−90)` (about x)
///
/// Target trains are identical for both basis inputs; the basis is carried as
/// metadata and resolved by the state the train is applied to.
pub fn transform_signal(signal: &LogicalSignal) -> Vec<PulseToken> {
    match (signal.role, signal.basis) {
        (Role::Control, Basis::Zero) => vec![
            PulseToken { kind: TokenKind::R180, channel: Channel::ControlLine, axis: Some(Axis::Z) },
            PulseToken { kind: TokenKind::R180, channel: Channel::ControlLine, axis: Some(Axis::Z) },
        ],
        (Role::Control, Basis::One) => {
            let kind = match signal.sign {
                Sign::Plus => TokenKind::R90,
                Sign::Minus => TokenKind::MinusR90,
            };
            vec![PulseToken { kind, channel: Channel::ControlLine, axis: Some(Axis::X) }]
        }
        (Role::Target, _) => vec![
            PulseToken { kind: TokenKind::R90, channel: Channel::TargetLine, axis: Some(Axis::X) },
            PulseToken { kind: TokenKind::R180, channel: Channel::TargetLine, axis: Some(Axis::X) },
            PulseToken { kind: TokenKind::R180, channel: Channel::TargetLine, axis: Some(Axis::X) },
            PulseToken { kind: TokenKind::RMinus90, channel: Channel::TargetLine, axis: Some(Axis::X) },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_zero_is_a_double_half_turn() {
        let tokens = transform_signal(&LogicalSignal::new(Role::Control, Basis::Zero));
        assert_eq!(tokens.len(), 2);
        assert!(tokens.iter().all(|t| t.kind == TokenKind::R180));
        assert!(tokens.iter().all(|t| t.channel == Channel::ControlLine));
    }

    #[test]
    fn control_one_sign_picks_the_quarter_turn() {
        let plus = transform_signal(&LogicalSignal::new(Role::Control, Basis::One));
        assert_eq!(plus.len(), 1);
        assert_eq!(plus[0].kind, TokenKind::R90);
        let minus =
            transform_signal(&LogicalSignal::with_sign(Role::Control, Basis::One, Sign::Minus));
        assert_eq!(minus[0].kind, TokenKind::MinusR90);
    }

    #[test]
    fn target_is_the_quadrupole_train_for_both_bases() {
        for basis in [Basis::Zero, Basis::One] {
            let tokens = transform_signal(&LogicalSignal::new(Role::Target, basis));
            let kinds: Vec<TokenKind> = tokens.iter().map(|t| t.kind).collect();
            assert_eq!(
                kinds,
                vec![TokenKind::R90, TokenKind::R180, TokenKind::R180, TokenKind::RMinus90]
            );
            assert!(tokens.iter().all(|t| t.channel == Channel::TargetLine));
        }
    }

    #[test]
    fn transformation_is_deterministic_over_the_closed_domain() {
        for role in [Role::Control, Role::Target] {
            for basis in [Basis::Zero, Basis::One] {
                for sign in [Sign::Plus, Sign::Minus] {
                    let signal = LogicalSignal::with_sign(role, basis, sign);
                    assert_eq!(transform_signal(&signal), transform_signal(&signal));
                }
            }
        }
    }

    #[test]
    fn token_counts_match_the_transformation_table() {
        assert_eq!(transform_signal(&LogicalSignal::new(Role::Control, Basis::Zero)).len(), 2);
        assert_eq!(transform_signal(&LogicalSignal::new(Role::Control, Basis::One)).len(), 1);
        assert_eq!(transform_signal(&LogicalSignal::new(Role::Target, Basis::Zero)).len(), 4);
        assert_eq!(transform_signal(&LogicalSignal::new(Role::Target, Basis::One)).len(), 4);
    }
}
