//! Named pulse sequences: spin echo, stimulated-echo purification and the
//! T1-recovery Hadamard.

use super::ensemble::Ensemble;
use super::events::SequenceEvent;
use super::executor::{run_sequence, SequenceOutcome, Trajectory};
use super::BlochError;
use crate::spincore::Axis;
use crate::tol;
use serde::Serialize;

/// Fraction of T1 after which longitudinal recovery from zero reaches one
/// half (ln 2 to three decimals, as the sequence is specified).
pub const COINCIDENCE_DELAY_FACTOR: f64 = 0.693;

/// Result of a 90–τ–180–τ spin echo.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpinEchoResult {
    /// Net transverse magnitude right after the excitation pulse.
    pub initial_transverse: f64,
    /// Net transverse magnitude at the echo time 2τ.
    pub echo_amplitude: f64,
}

/// Excite with 90°x, dephase for τ, refocus with 180°x, rephase for τ.
/// Static off-resonance spread cancels at the echo; only T2 decay remains.
pub fn spin_echo(ensemble: &mut Ensemble, tau: f64) -> Result<SpinEchoResult, BlochError> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(BlochError::Domain(format!("tau must be finite and nonnegative, got {tau} s")));
    }
    super::executor::apply_pulse(ensemble, Axis::X, std::f64::consts::FRAC_PI_2);
    let initial = ensemble.net_transverse_magnitude();
    super::executor::free_evolve(ensemble, tau);
    super::executor::apply_pulse(ensemble, Axis::X, std::f64::consts::PI);
    super::executor::free_evolve(ensemble, tau);
    Ok(SpinEchoResult { initial_transverse: initial, echo_amplitude: ensemble.net_transverse_magnitude() })
}

/// Dephasing/rephasing intervals of the purification sequence. The two
/// dephasing intervals must match so the two refocusing pulses cancel phase
/// errors accumulated between the excitation pulses.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SteTimings {
    pub t_a1: f64,
    pub t_a2: f64,
    pub t_a3: f64,
    pub t_a4: f64,
}

impl SteTimings {
    /// All four intervals equal; the fully compensated layout.
    pub fn symmetric(tau: f64) -> Self {
        Self { t_a1: tau, t_a2: tau, t_a3: tau, t_a4: tau }
    }

    pub fn validate(&self) -> Result<(), BlochError> {
        for (name, v) in [
            ("t_a1", self.t_a1),
            ("t_a2", self.t_a2),
            ("t_a3", self.t_a3),
            ("t_a4", self.t_a4),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(BlochError::Timing(format!(
                    "{name} must be finite and nonnegative, got {v} s"
                )));
            }
        }
        let scale = self.t_a1.abs().max(1.0);
        if (self.t_a1 - self.t_a3).abs() > tol::TIMING_EQUALITY * scale {
            return Err(BlochError::Timing(format!(
                "dephasing intervals must match: t_a1 = {} s but t_a3 = {} s",
                self.t_a1, self.t_a3
            )));
        }
        Ok(())
    }
}

/// Knobs for [`stimulated_echo_with_options`].
#[derive(Debug, Clone, Copy)]
pub struct SteOptions {
    /// Center of the selection window; `None` centers it on the net
    /// transverse phase at the selection instant (the rephased direction).
    pub selection_phase: Option<f64>,
    /// When false the two refocusing pulses are omitted, which exposes the
    /// sequence to constant off-resonance errors.
    pub compensation_pulses: bool,
}

impl Default for SteOptions {
    fn default() -> Self {
        Self { selection_phase: None, compensation_pulses: true }
    }
}

/// Outcome of one purification pass.
#[derive(Debug, Clone, Serialize)]
pub struct PurificationTrace {
    /// Selected mass fraction of each selection stage, in order.
    pub stage_fractions: Vec<f64>,
    /// Product of the stage fractions.
    pub cumulative_factor: f64,
    pub final_magnetization: [f64; 3],
    pub final_transverse: f64,
    pub final_phase: f64,
    /// True when selection discarded the whole ensemble.
    pub empty: bool,
    pub trajectory: Trajectory,
}

/// Purification pass built from three 90°x excitations with two refocusing
/// 180°x pulses:
/// `90°x → t_a1 → 180°x → t_a2 → select+90°x → t_a3 → 180°x → t_a4 → 90°x`.
///
/// Selection happens at the dephased instant just before the middle
/// excitation (select-then-rotate). With the refocusing pulses present and
/// symmetric intervals, a constant off-resonance shift common to all
/// isochromats leaves the selected ensemble's final phase unchanged.
pub fn modified_stimulated_echo(
    ensemble: &mut Ensemble,
    timings: &SteTimings,
    window_half_width: f64,
    sample_dt: f64,
) -> Result<PurificationTrace, BlochError> {
    stimulated_echo_with_options(ensemble, timings, window_half_width, SteOptions::default(), sample_dt)
}

/// [`modified_stimulated_echo`] with an explicit selection phase and the
/// option to drop the refocusing pulses (for compensation comparisons).
pub fn stimulated_echo_with_options(
    ensemble: &mut Ensemble,
    timings: &SteTimings,
    window_half_width: f64,
    options: SteOptions,
    sample_dt: f64,
) -> Result<PurificationTrace, BlochError> {
    timings.validate()?;
    let quarter = std::f64::consts::FRAC_PI_2;
    let half = std::f64::consts::PI;
    let mut events = Vec::new();
    events.push(SequenceEvent::RfPulse { axis: Axis::X, angle_rad: quarter });
    events.push(SequenceEvent::Delay { duration_s: timings.t_a1 });
    if options.compensation_pulses {
        events.push(SequenceEvent::RfPulse { axis: Axis::X, angle_rad: half });
    }
    events.push(SequenceEvent::Delay { duration_s: timings.t_a2 });
    events.push(SequenceEvent::Select {
        phase_rad: options.selection_phase,
        half_width_rad: window_half_width,
    });
    events.push(SequenceEvent::RfPulse { axis: Axis::X, angle_rad: quarter });
    events.push(SequenceEvent::Delay { duration_s: timings.t_a3 });
    if options.compensation_pulses {
        events.push(SequenceEvent::RfPulse { axis: Axis::X, angle_rad: half });
    }
    events.push(SequenceEvent::Delay { duration_s: timings.t_a4 });
    events.push(SequenceEvent::RfPulse { axis: Axis::X, angle_rad: quarter });

    let SequenceOutcome { trajectory, selections } = run_sequence(ensemble, &events, sample_dt)?;
    let stage_fractions: Vec<f64> = selections.iter().map(|s| s.selected_fraction).collect();
    let cumulative_factor = stage_fractions.iter().product();
    let m = ensemble.net_magnetization();
    Ok(PurificationTrace {
        stage_fractions,
        cumulative_factor,
        final_magnetization: m,
        final_transverse: m[0].hypot(m[1]),
        final_phase: m[1].atan2(m[0]),
        empty: ensemble.is_empty(),
        trajectory,
    })
}

/// Report of the T1-recovery Hadamard-like sequence.
#[derive(Debug, Clone, Serialize)]
pub struct T1HadamardReport {
    /// Delay between the two 90°y pulses.
    pub coincidence_delay_s: f64,
    /// Net Mz immediately before the second pulse.
    pub mz_at_coincidence: f64,
    pub final_magnetization: [f64; 3],
    pub trajectory: Trajectory,
}

/// `90°y → delay(0.693·T1) → 90°y`: the delay lets Mz recover to one half,
/// and the second pulse folds the recovered component into the transverse
/// plane alongside what survived of the first excitation.
///
/// This reproduces the superposition-like magnetization split; it is a
/// magnetization-level analogue, not a literal qubit unitary.
pub fn t1_recovery_hadamard(
    ensemble: &mut Ensemble,
    sample_dt: f64,
) -> Result<T1HadamardReport, BlochError> {
    if !ensemble.t1().is_finite() {
        return Err(BlochError::Domain(
            "T1 must be finite for the recovery sequence; pass an explicit delay otherwise".into(),
        ));
    }
    let delay = COINCIDENCE_DELAY_FACTOR * ensemble.t1();
    t1_recovery_hadamard_with_delay(ensemble, delay, sample_dt)
}

/// [`t1_recovery_hadamard`] with an explicit inter-pulse delay. Useful when
/// the recovery time is configured rather than derived from T1 (e.g. for
/// effectively infinite T1, where the sequence degenerates to a net 180°y).
pub fn t1_recovery_hadamard_with_delay(
    ensemble: &mut Ensemble,
    delay: f64,
    sample_dt: f64,
) -> Result<T1HadamardReport, BlochError> {
    if !(delay >= 0.0) || !delay.is_finite() {
        return Err(BlochError::Domain(format!(
            "coincidence delay must be finite and nonnegative, got {delay} s"
        )));
    }
    let quarter = std::f64::consts::FRAC_PI_2;
    let events = [
        SequenceEvent::RfPulse { axis: Axis::Y, angle_rad: quarter },
        SequenceEvent::Delay { duration_s: delay },
    ];
    let first = run_sequence(ensemble, &events, sample_dt)?;
    let mz_at_coincidence = ensemble.net_magnetization()[2];
    let mut trajectory = first.trajectory;
    super::executor::apply_pulse(ensemble, Axis::Y, quarter);
    let m = ensemble.net_magnetization();
    trajectory.points.push(super::executor::TrajectoryPoint {
        t_s: delay,
        mx: m[0],
        my: m[1],
        mz: m[2],
    });
    Ok(T1HadamardReport {
        coincidence_delay_s: delay,
        mz_at_coincidence,
        final_magnetization: m,
        trajectory,
    })
}
