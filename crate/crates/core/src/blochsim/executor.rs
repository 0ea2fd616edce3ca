//! Closed-form event execution over isochromat ensembles.

use super::ensemble::{Ensemble, Isochromat};
use super::events::{validate_events, SequenceEvent};
use super::BlochError;
use crate::spincore::Axis;
use rayon::prelude::*;
use serde::Serialize;

/// Leaf size of the pairwise reduction tree. The tree shape depends only on
/// the ensemble length, never on thread count, so sums are bit-stable.
const PAIRWISE_LEAF: usize = 128;

/// Threshold below which per-isochromat loops stay sequential.
const PAR_THRESHOLD: usize = 4096;

pub(crate) fn pairwise_weighted_sum(items: &[Isochromat]) -> [f64; 3] {
    if items.len() <= PAIRWISE_LEAF {
        let mut acc = [0.0; 3];
        for iso in items {
            acc[0] += iso.weight * iso.m[0];
            acc[1] += iso.weight * iso.m[1];
            acc[2] += iso.weight * iso.m[2];
        }
        return acc;
    }
    let (left, right) = items.split_at(items.len() / 2);
    let (a, b) = rayon::join(|| pairwise_weighted_sum(left), || pairwise_weighted_sum(right));
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn rotate(m: [f64; 3], axis: Axis, angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    match axis {
        Axis::X => [m[0], c * m[1] - s * m[2], s * m[1] + c * m[2]],
        Axis::Y => [c * m[0] + s * m[2], m[1], -s * m[0] + c * m[2]],
        Axis::Z => [c * m[0] - s * m[1], s * m[0] + c * m[1], m[2]],
    }
}

fn for_each_isochromat(ensemble: &mut Ensemble, f: impl Fn(&mut Isochromat) + Sync + Send) {
    let isochromats = ensemble.isochromats_mut();
    if isochromats.len() >= PAR_THRESHOLD {
        isochromats.par_iter_mut().for_each(f);
    } else {
        isochromats.iter_mut().for_each(f);
    }
}

/// Hard RF pulse: every isochromat rotates by `angle` about `axis`, with no
/// relaxation or precession during the pulse.
pub fn apply_pulse(ensemble: &mut Ensemble, axis: Axis, angle: f64) {
    for_each_isochromat(ensemble, move |iso| {
        iso.m = rotate(iso.m, axis, angle);
    });
}

/// Free precession with relaxation for `duration` seconds: transverse phase
/// advances by `−Δω·duration` about +z and decays by `exp(−duration/T2)`;
/// Mz relaxes toward 1 as `1 − (1 − Mz)·exp(−duration/T1)`.
pub fn free_evolve(ensemble: &mut Ensemble, duration: f64) {
    debug_assert!(duration >= 0.0);
    if duration == 0.0 {
        return;
    }
    let e1 = if ensemble.t1().is_finite() { (-duration / ensemble.t1()).exp() } else { 1.0 };
    let e2 = if ensemble.t2().is_finite() { (-duration / ensemble.t2()).exp() } else { 1.0 };
    for_each_isochromat(ensemble, move |iso| {
        let phase = -iso.delta_omega * duration;
        let (s, c) = phase.sin_cos();
        let mx = (c * iso.m[0] - s * iso.m[1]) * e2;
        let my = (s * iso.m[0] + c * iso.m[1]) * e2;
        let mz = 1.0 - (1.0 - iso.m[2]) * e1;
        iso.m = [mx, my, mz];
    });
}

/// Result of a phase-window selection.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SelectionOutcome {
    /// Ensemble mass kept by the window, as a fraction of the mass before.
    pub selected_fraction: f64,
    /// Ensemble mass discarded, `1 − selected_fraction`.
    pub discarded_fraction: f64,
    /// True when nothing survived; the ensemble is then explicitly empty.
    pub empty: bool,
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

/// Keeps only isochromats whose transverse phase lies within `±half_width`
/// of `axis_phase`, renormalizing the surviving weights. An exhaustive
/// selection yields an explicitly empty ensemble, not an error.
pub fn select_phase_window(
    ensemble: &mut Ensemble,
    axis_phase: f64,
    half_width: f64,
) -> Result<SelectionOutcome, BlochError> {
    if !(half_width > 0.0 && half_width <= std::f64::consts::PI) {
        return Err(BlochError::Domain(format!(
            "selection half-width must lie in (0, π], got {half_width}"
        )));
    }
    if !axis_phase.is_finite() {
        return Err(BlochError::Domain(format!("selection phase must be finite, got {axis_phase}")));
    }
    let isochromats = ensemble.isochromats_mut();
    let before: f64 = isochromats.iter().map(|i| i.weight).sum();
    isochromats.retain(|iso| wrap_phase(iso.transverse_phase() - axis_phase).abs() <= half_width);
    let kept: f64 = isochromats.iter().map(|i| i.weight).sum();
    let selected_fraction = if before > 0.0 { kept / before } else { 0.0 };
    if kept > 0.0 {
        for iso in isochromats.iter_mut() {
            iso.weight /= kept;
        }
    }
    Ok(SelectionOutcome {
        selected_fraction,
        discarded_fraction: 1.0 - selected_fraction,
        empty: isochromats.is_empty(),
    })
}

/// One sample of the weighted ensemble magnetization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectoryPoint {
    pub t_s: f64,
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
}

/// Sampled (t, Mx, My, Mz) history of the weighted ensemble sum.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    fn push(&mut self, t: f64, ensemble: &Ensemble) {
        let m = ensemble.net_magnetization();
        self.points.push(TrajectoryPoint { t_s: t, mx: m[0], my: m[1], mz: m[2] });
    }

    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }
}

/// Everything produced by one sequence run.
#[derive(Debug, Clone, Serialize)]
pub struct SequenceOutcome {
    pub trajectory: Trajectory,
    /// One entry per `Select` event, in order.
    pub selections: Vec<SelectionOutcome>,
}

/// Validates, then executes an event list, sampling the net magnetization at
/// event boundaries and every `sample_dt` seconds inside delays. An empty
/// sequence yields the single initial sample.
pub fn run_sequence(
    ensemble: &mut Ensemble,
    events: &[SequenceEvent],
    sample_dt: f64,
) -> Result<SequenceOutcome, BlochError> {
    if !(sample_dt > 0.0) {
        return Err(BlochError::Domain(format!(
            "sample_dt must be positive, got {sample_dt} s"
        )));
    }
    validate_events(events)?;

    let mut trajectory = Trajectory { points: Vec::new() };
    let mut selections = Vec::new();
    let mut now = 0.0;
    trajectory.push(now, ensemble);

    for event in events {
        match *event {
            SequenceEvent::RfPulse { axis, angle_rad } => {
                apply_pulse(ensemble, axis, angle_rad);
                trajectory.push(now, ensemble);
            }
            SequenceEvent::Delay { duration_s } => {
                let mut remaining = duration_s;
                while remaining > sample_dt {
                    free_evolve(ensemble, sample_dt);
                    now += sample_dt;
                    remaining -= sample_dt;
                    trajectory.push(now, ensemble);
                }
                free_evolve(ensemble, remaining);
                now += remaining;
                trajectory.push(now, ensemble);
            }
            SequenceEvent::Select { phase_rad, half_width_rad } => {
                let phase = phase_rad.unwrap_or_else(|| ensemble.net_transverse_phase());
                selections.push(select_phase_window(ensemble, phase, half_width_rad)?);
                trajectory.push(now, ensemble);
            }
        }
    }
    Ok(SequenceOutcome { trajectory, selections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blochsim::OffResonance;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn quarter_turn_about_x_sends_z_to_minus_y() {
        let mut ens = Ensemble::single(0.0, INF, INF).unwrap();
        apply_pulse(&mut ens, Axis::X, std::f64::consts::FRAC_PI_2);
        let m = ens.net_magnetization();
        assert!((m[0]).abs() < 1e-15);
        assert!((m[1] + 1.0).abs() < 1e-15);
        assert!((m[2]).abs() < 1e-15);
    }

    #[test]
    fn full_turn_is_identity() {
        let mut ens = Ensemble::single(0.0, INF, INF).unwrap();
        apply_pulse(&mut ens, Axis::X, std::f64::consts::FRAC_PI_3);
        let before = ens.net_magnetization();
        apply_pulse(&mut ens, Axis::Y, 2.0 * std::f64::consts::PI);
        let after = ens.net_magnetization();
        for k in 0..3 {
            assert!((before[k] - after[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn two_quarter_turns_equal_a_half_turn() {
        let mut a = Ensemble::single(0.0, INF, INF).unwrap();
        apply_pulse(&mut a, Axis::X, std::f64::consts::FRAC_PI_2);
        apply_pulse(&mut a, Axis::X, std::f64::consts::FRAC_PI_2);
        let mut b = Ensemble::single(0.0, INF, INF).unwrap();
        apply_pulse(&mut b, Axis::X, std::f64::consts::PI);
        let (ma, mb) = (a.net_magnetization(), b.net_magnetization());
        for k in 0..3 {
            assert!((ma[k] - mb[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_duration_evolution_is_identity() {
        let mut ens = Ensemble::single(100.0, 1.0, 0.1).unwrap();
        apply_pulse(&mut ens, Axis::X, std::f64::consts::FRAC_PI_2);
        let before = ens.net_magnetization();
        free_evolve(&mut ens, 0.0);
        let after = ens.net_magnetization();
        assert_eq!(before, after);
    }

    #[test]
    fn longitudinal_recovery_reaches_half_at_coincidence_delay() {
        let mut ens = Ensemble::single(0.0, 2.0, INF).unwrap();
        apply_pulse(&mut ens, Axis::Y, std::f64::consts::FRAC_PI_2); // Mz → 0
        free_evolve(&mut ens, 0.693 * 2.0);
        let mz = ens.net_magnetization()[2];
        assert!((mz - 0.5).abs() < 1e-3, "Mz = {mz}");
    }

    #[test]
    fn transverse_phase_advances_by_minus_delta_omega_t() {
        // Δω = 2π·100 rad/s over 2.5 ms accumulates |Δφ| = π/2.
        let delta = 2.0 * std::f64::consts::PI * 100.0;
        let mut ens = Ensemble::single(delta, INF, INF).unwrap();
        apply_pulse(&mut ens, Axis::X, std::f64::consts::FRAC_PI_2);
        let phase_before = ens.net_transverse_phase();
        free_evolve(&mut ens, 2.5e-3);
        let phase_after = ens.net_transverse_phase();
        let advance = wrap_phase(phase_after - phase_before);
        assert!((advance + std::f64::consts::FRAC_PI_2).abs() < 1e-12, "advance {advance}");
        assert!((ens.net_transverse_magnitude() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn relaxation_fixed_point_is_equilibrium() {
        let mut ens = Ensemble::single(250.0, 0.8, 0.3).unwrap();
        for duration in [1e-6, 0.01, 0.5, 3.0] {
            free_evolve(&mut ens, duration);
            let m = ens.net_magnetization();
            assert_eq!(m[0], 0.0);
            assert_eq!(m[1], 0.0);
            assert!((m[2] - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn full_window_selects_everything() {
        let mut ens = Ensemble::uniform_transverse_phases(512, INF, INF, 11).unwrap();
        let outcome = select_phase_window(&mut ens, 0.0, std::f64::consts::PI).unwrap();
        assert_eq!(outcome.selected_fraction, 1.0);
        assert!(!outcome.empty);
    }

    #[test]
    fn narrow_window_selects_matching_fraction() {
        let n = 200_000;
        let mut ens = Ensemble::uniform_transverse_phases(n, INF, INF, 5).unwrap();
        let half_width = 0.05;
        let expected = half_width / std::f64::consts::PI;
        let outcome = select_phase_window(&mut ens, 1.0, half_width).unwrap();
        let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!(
            (outcome.selected_fraction - expected).abs() < 4.0 * sigma,
            "fraction {} expected {expected}",
            outcome.selected_fraction
        );
        let total: f64 = ens.isochromats().iter().map(|i| i.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_window_empties_the_ensemble() {
        // All isochromats at phase 0; window at π/2 with half-width π/4.
        let ens_src = vec![Isochromat { m: [1.0, 0.0, 0.0], delta_omega: 0.0, weight: 1.0 }; 8];
        let mut ens = Ensemble::new(ens_src, INF, INF).unwrap();
        let outcome = select_phase_window(
            &mut ens,
            std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_4,
        )
        .unwrap();
        assert!(outcome.empty);
        assert_eq!(outcome.selected_fraction, 0.0);
        assert!(ens.is_empty());
    }

    #[test]
    fn selection_fraction_is_monotone_in_half_width() {
        let base = Ensemble::uniform_transverse_phases(4096, INF, INF, 23).unwrap();
        let mut last = 0.0;
        for k in 1..=10 {
            let hw = k as f64 * std::f64::consts::PI / 10.0;
            let mut ens = base.clone();
            let outcome = select_phase_window(&mut ens, 0.3, hw).unwrap();
            assert!(outcome.selected_fraction >= last, "half-width {hw}");
            last = outcome.selected_fraction;
        }
        assert_eq!(last, 1.0);
    }

    #[test]
    fn empty_sequence_yields_single_initial_sample() {
        let mut ens = Ensemble::single(0.0, INF, INF).unwrap();
        let outcome = run_sequence(&mut ens, &[], 0.1).unwrap();
        assert_eq!(outcome.trajectory.points.len(), 1);
        let p = &outcome.trajectory.points[0];
        assert_eq!((p.t_s, p.mx, p.my, p.mz), (0.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn on_resonance_excitation_keeps_unit_transverse() {
        let mut ens = Ensemble::single(0.0, INF, INF).unwrap();
        let events = [
            SequenceEvent::RfPulse { axis: Axis::X, angle_rad: std::f64::consts::FRAC_PI_2 },
            SequenceEvent::Delay { duration_s: 1.0 },
        ];
        let outcome = run_sequence(&mut ens, &events, 0.05).unwrap();
        for p in &outcome.trajectory.points[1..] {
            assert!((p.mx.hypot(p.my) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_happens_before_any_execution() {
        let mut ens = Ensemble::single(0.0, INF, INF).unwrap();
        let events = [
            SequenceEvent::RfPulse { axis: Axis::X, angle_rad: std::f64::consts::PI },
            SequenceEvent::Delay { duration_s: -1.0 },
        ];
        assert!(run_sequence(&mut ens, &events, 0.1).is_err());
        // The invalid list must not have touched the ensemble.
        assert_eq!(ens.net_magnetization(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn pairwise_sum_matches_sequential_sum() {
        let ens =
            Ensemble::sampled(10_000, OffResonance::Uniform { max_rad_per_s: 50.0 }, 1.0, 0.5, 9)
                .unwrap();
        let seq: [f64; 3] = ens.isochromats().iter().fold([0.0; 3], |mut acc, iso| {
            acc[0] += iso.weight * iso.m[0];
            acc[1] += iso.weight * iso.m[1];
            acc[2] += iso.weight * iso.m[2];
            acc
        });
        let pair = ens.net_magnetization();
        for k in 0..3 {
            assert!((seq[k] - pair[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn magnetization_norm_never_exceeds_equilibrium_when_t1_equals_t2() {
        let mut ens =
            Ensemble::sampled(256, OffResonance::Uniform { max_rad_per_s: 300.0 }, 0.7, 0.7, 4)
                .unwrap();
        apply_pulse(&mut ens, Axis::X, 1.1);
        for _ in 0..50 {
            free_evolve(&mut ens, 0.02);
            apply_pulse(&mut ens, Axis::Y, 0.2);
            for iso in ens.isochromats() {
                let norm = (iso.m[0].powi(2) + iso.m[1].powi(2) + iso.m[2].powi(2)).sqrt();
                assert!(norm <= 1.0 + crate::tol::MAGNETIZATION_NORM, "norm {norm}");
            }
        }
    }
}
