//! Slow step-wise reference integrator.
//!
//! Tests use this to cross-check the closed-form executor; production code
//! never does. Free precession with relaxation is integrated with classical
//! RK4 on
//!
//! ```text
//! dMx/dt =  Δω·My − Mx/T2
//! dMy/dt = −Δω·Mx − My/T2
//! dMz/dt = (1 − Mz)/T1
//! ```
//!
//! which encodes the same right-hand precession convention as the executor
//! (transverse phase −Δω·t about +z). Pulses stay instantaneous rotations in
//! both paths.

use crate::spincore::Axis;

fn derivative(m: [f64; 3], delta_omega: f64, t1: f64, t2: f64) -> [f64; 3] {
    let r2 = if t2.is_finite() { 1.0 / t2 } else { 0.0 };
    let r1 = if t1.is_finite() { 1.0 / t1 } else { 0.0 };
    [
        delta_omega * m[1] - m[0] * r2,
        -delta_omega * m[0] - m[1] * r2,
        (1.0 - m[2]) * r1,
    ]
}

/// RK4 integration of free precession with relaxation over `duration`,
/// split into `steps` uniform substeps.
pub fn evolve_reference(
    mut m: [f64; 3],
    delta_omega: f64,
    t1: f64,
    t2: f64,
    duration: f64,
    steps: usize,
) -> [f64; 3] {
    assert!(steps > 0);
    let h = duration / steps as f64;
    for _ in 0..steps {
        let k1 = derivative(m, delta_omega, t1, t2);
        let m2 = [m[0] + 0.5 * h * k1[0], m[1] + 0.5 * h * k1[1], m[2] + 0.5 * h * k1[2]];
        let k2 = derivative(m2, delta_omega, t1, t2);
        let m3 = [m[0] + 0.5 * h * k2[0], m[1] + 0.5 * h * k2[1], m[2] + 0.5 * h * k2[2]];
        let k3 = derivative(m3, delta_omega, t1, t2);
        let m4 = [m[0] + h * k3[0], m[1] + h * k3[1], m[2] + h * k3[2]];
        let k4 = derivative(m4, delta_omega, t1, t2);
        for i in 0..3 {
            m[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    m
}

/// The same instantaneous rotation the executor applies, restated here so
/// reference trajectories do not borrow executor code.
pub fn rotate_reference(m: [f64; 3], axis: Axis, angle: f64) -> [f64; 3] {
    let (s, c) = angle.sin_cos();
    match axis {
        Axis::X => [m[0], c * m[1] - s * m[2], s * m[1] + c * m[2]],
        Axis::Y => [c * m[0] + s * m[2], m[1], -s * m[0] + c * m[2]],
        Axis::Z => [c * m[0] - s * m[1], s * m[0] + c * m[1], m[2]],
    }
}
