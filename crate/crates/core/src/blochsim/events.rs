//! Timed sequence events consumed by the executor.

use super::BlochError;
use crate::spincore::Axis;
use serde::{Deserialize, Serialize};

/// One step of a pulse sequence. Events are instantaneous except `Delay`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SequenceEvent {
    /// Hard RF pulse: rotate every isochromat by `angle_rad` about `axis`.
    RfPulse { axis: Axis, angle_rad: f64 },
    /// Free precession with relaxation for `duration_s` seconds.
    Delay { duration_s: f64 },
    /// Keep only isochromats whose transverse phase lies within
    /// `±half_width_rad` of `phase_rad`, renormalizing weights.
    /// `phase_rad = None` centers the window on the current net transverse
    /// phase (selecting whatever has rephased).
    Select { phase_rad: Option<f64>, half_width_rad: f64 },
}

/// Validates a whole event list before anything executes.
pub fn validate_events(events: &[SequenceEvent]) -> Result<(), BlochError> {
    for (i, event) in events.iter().enumerate() {
        match *event {
            SequenceEvent::RfPulse { angle_rad, .. } => {
                if !angle_rad.is_finite() {
                    return Err(BlochError::Event(format!(
                        "event {i}: pulse angle must be finite, got {angle_rad}"
                    )));
                }
            }
            SequenceEvent::Delay { duration_s } => {
                if !(duration_s >= 0.0) || !duration_s.is_finite() {
                    return Err(BlochError::Event(format!(
                        "event {i}: delay must be finite and nonnegative, got {duration_s} s"
                    )));
                }
            }
            SequenceEvent::Select { half_width_rad, phase_rad } => {
                if !(half_width_rad > 0.0 && half_width_rad <= std::f64::consts::PI) {
                    return Err(BlochError::Event(format!(
                        "event {i}: selection half-width must lie in (0, π], got {half_width_rad}"
                    )));
                }
                if let Some(p) = phase_rad {
                    if !p.is_finite() {
                        return Err(BlochError::Event(format!(
                            "event {i}: selection phase must be finite, got {p}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
