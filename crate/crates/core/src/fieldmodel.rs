//! Local magnetic fields and Larmor frequencies for gradient-defined qubit sites.
//!
//! A site sits inside the main field `B0` plus a main gradient; a local
//! reverse gradient cancels the main gradient's slope across the site so the
//! site sees a homogeneous field and therefore a single precession frequency.
//! Gradients are ideal field-offset maps; there is no coil physics here.

use serde::Serialize;
use thiserror::Error;

/// Proton gyromagnetic ratio, 2π × 42.577 MHz/T, in rad/s/T.
pub const PROTON_GAMMA: f64 = 2.0 * std::f64::consts::PI * 42.577e6;

/// Default relative frequency spread below which a site counts as qubit-grade.
pub const DEFAULT_HOMOGENEITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("position {z} m is outside site {site} interval [{lo} m, {hi} m]")]
    OutOfDomain { site: usize, z: f64, lo: f64, hi: f64 },
    #[error("no site with index {0}")]
    UnknownSite(usize),
    #[error("invalid magnet configuration: {0}")]
    Config(String),
}

/// Piecewise-linear map from position (m) to field offset (T).
///
/// Values interpolate linearly between breakpoints; outside the table the end
/// segments extrapolate, so a two-point table is a global linear ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, FieldError> {
        if points.is_empty() {
            return Err(FieldError::Config("gradient map needs at least one breakpoint".into()));
        }
        if points.iter().any(|(z, v)| !z.is_finite() || !v.is_finite()) {
            return Err(FieldError::Config("gradient breakpoints must be finite".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(FieldError::Config(
                "gradient breakpoints must be strictly increasing in z".into(),
            ));
        }
        Ok(Self { points })
    }

    /// Constant offset everywhere.
    pub fn constant(value: f64) -> Self {
        Self { points: vec![(0.0, value)] }
    }

    /// Global ramp `offset + slope·z`.
    pub fn linear(slope: f64, offset: f64) -> Self {
        if slope == 0.0 {
            return Self::constant(offset);
        }
        Self { points: vec![(0.0, offset), (1.0, offset + slope)] }
    }

    /// Field offset at position `z`.
    pub fn eval(&self, z: f64) -> f64 {
        let pts = &self.points;
        if pts.len() == 1 {
            return pts[0].1;
        }
        // Pick the segment containing z; clamp to the end segments so the
        // map extrapolates linearly.
        let seg = match pts.iter().position(|(zp, _)| z < *zp) {
            Some(0) => 0,
            Some(i) => i - 1,
            None => pts.len() - 2,
        };
        let (z0, v0) = pts[seg];
        let (z1, v1) = pts[seg + 1];
        let t = (z - z0) / (z1 - z0);
        v0 + t * (v1 - v0)
    }

    /// Same map with every offset scaled by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self { points: self.points.iter().map(|&(z, v)| (z, c * v)).collect() }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// One gradient-defined qubit site.
#[derive(Debug, Clone)]
pub struct QubitSite {
    pub index: usize,
    pub z_center: f64,
    pub half_width: f64,
    /// Reverse gradient local to `[z_center ± half_width]`.
    pub reverse_gradient: PiecewiseLinear,
}

impl QubitSite {
    pub fn interval(&self) -> (f64, f64) {
        (self.z_center - self.half_width, self.z_center + self.half_width)
    }

    pub fn contains(&self, z: f64) -> bool {
        let (lo, hi) = self.interval();
        z >= lo && z <= hi
    }
}

/// Main field, main gradient and the ordered list of qubit sites.
#[derive(Debug, Clone)]
pub struct MagnetSystem {
    b0: f64,
    gamma: f64,
    main_gradient: PiecewiseLinear,
    sites: Vec<QubitSite>,
}

impl MagnetSystem {
    pub fn new(
        b0: f64,
        gamma: f64,
        main_gradient: PiecewiseLinear,
        sites: Vec<QubitSite>,
    ) -> Result<Self, FieldError> {
        if !(b0 > 0.0) || !b0.is_finite() {
            return Err(FieldError::Config(format!("b0 must be positive and finite, got {b0} T")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(FieldError::Config(format!(
                "gamma must be positive and finite, got {gamma} rad/s/T"
            )));
        }
        for site in &sites {
            if !(site.half_width > 0.0) || !site.half_width.is_finite() {
                return Err(FieldError::Config(format!(
                    "site {} half_width must be positive, got {} m",
                    site.index, site.half_width
                )));
            }
        }
        for pair in sites.windows(2) {
            if pair[0].z_center >= pair[1].z_center {
                return Err(FieldError::Config(format!(
                    "site centers must be strictly increasing in z (site {} at {} m, site {} at {} m)",
                    pair[0].index, pair[0].z_center, pair[1].index, pair[1].z_center
                )));
            }
            if pair[0].interval().1 >= pair[1].interval().0 {
                return Err(FieldError::Config(format!(
                    "site intervals overlap (site {} ends at {} m, site {} starts at {} m)",
                    pair[0].index,
                    pair[0].interval().1,
                    pair[1].index,
                    pair[1].interval().0
                )));
            }
        }
        let mut indices: Vec<usize> = sites.iter().map(|s| s.index).collect();
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != sites.len() {
            return Err(FieldError::Config("site indices must be unique".into()));
        }
        Ok(Self { b0, gamma, main_gradient, sites })
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn main_gradient(&self) -> &PiecewiseLinear {
        &self.main_gradient
    }

    pub fn sites(&self) -> &[QubitSite] {
        &self.sites
    }

    pub fn site(&self, index: usize) -> Result<&QubitSite, FieldError> {
        self.sites.iter().find(|s| s.index == index).ok_or(FieldError::UnknownSite(index))
    }
}

/// Per-site entry of a [`FieldReport`]. Frequencies are reported both as
/// angular (rad/s) and ordinary (Hz).
#[derive(Debug, Clone, Serialize)]
pub struct SiteFieldReport {
    pub index: usize,
    pub z_center_m: f64,
    pub local_field_tesla: f64,
    pub larmor_rad_per_s: f64,
    pub larmor_hz: f64,
    pub frequency_spread_rad_per_s: f64,
    pub frequency_spread_hz: f64,
    pub relative_spread: f64,
    pub qubit_grade: bool,
    pub separation_to_prev_rad_per_s: Option<f64>,
    pub separation_to_next_rad_per_s: Option<f64>,
}

/// Homogeneity and separation summary for every site of a magnet system.
#[derive(Debug, Clone, Serialize)]
pub struct FieldReport {
    pub b0_tesla: f64,
    pub gamma_rad_per_s_per_tesla: f64,
    pub samples_per_site: usize,
    pub homogeneity_tolerance: f64,
    pub sites: Vec<SiteFieldReport>,
}

/// Local field `B0 + main(z) − reverse(z)` at a position inside a site.
pub fn local_field(system: &MagnetSystem, site_index: usize, z: f64) -> Result<f64, FieldError> {
    let site = system.site(site_index)?;
    if !site.contains(z) {
        let (lo, hi) = site.interval();
        return Err(FieldError::OutOfDomain { site: site_index, z, lo, hi });
    }
    Ok(system.b0 + system.main_gradient.eval(z) - site.reverse_gradient.eval(z))
}

/// Angular precession frequency `gamma · B` at the site center.
pub fn larmor_frequency(system: &MagnetSystem, site_index: usize) -> Result<f64, FieldError> {
    let site = system.site(site_index)?;
    Ok(system.gamma * local_field(system, site_index, site.z_center)?)
}

/// Sample every site on a uniform grid and report spreads and separations
/// with the default qubit-grade tolerance.
pub fn field_report(system: &MagnetSystem, samples_per_site: usize) -> Result<FieldReport, FieldError> {
    field_report_with_tolerance(system, samples_per_site, DEFAULT_HOMOGENEITY_TOLERANCE)
}

/// [`field_report`] with an explicit relative homogeneity tolerance.
pub fn field_report_with_tolerance(
    system: &MagnetSystem,
    samples_per_site: usize,
    homogeneity_tolerance: f64,
) -> Result<FieldReport, FieldError> {
    if samples_per_site < 2 {
        return Err(FieldError::Config(format!(
            "samples_per_site must be at least 2, got {samples_per_site}"
        )));
    }
    let mut sites = Vec::with_capacity(system.sites.len());
    for site in &system.sites {
        let (lo, hi) = site.interval();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for k in 0..samples_per_site {
            let z = lo + (hi - lo) * (k as f64) / ((samples_per_site - 1) as f64);
            let b = local_field(system, site.index, z)?;
            min = min.min(b);
            max = max.max(b);
        }
        let spread = system.gamma * (max - min);
        let center_field = local_field(system, site.index, site.z_center)?;
        let omega = system.gamma * center_field;
        let relative_spread = if omega != 0.0 { spread / omega.abs() } else { f64::INFINITY };
        sites.push(SiteFieldReport {
            index: site.index,
            z_center_m: site.z_center,
            local_field_tesla: center_field,
            larmor_rad_per_s: omega,
            larmor_hz: omega / (2.0 * std::f64::consts::PI),
            frequency_spread_rad_per_s: spread,
            frequency_spread_hz: spread / (2.0 * std::f64::consts::PI),
            relative_spread,
            qubit_grade: relative_spread <= homogeneity_tolerance,
            separation_to_prev_rad_per_s: None,
            separation_to_next_rad_per_s: None,
        });
    }
    for i in 0..sites.len() {
        if i > 0 {
            sites[i].separation_to_prev_rad_per_s =
                Some((sites[i].larmor_rad_per_s - sites[i - 1].larmor_rad_per_s).abs());
        }
        if i + 1 < sites.len() {
            sites[i].separation_to_next_rad_per_s =
                Some((sites[i + 1].larmor_rad_per_s - sites[i].larmor_rad_per_s).abs());
        }
    }
    Ok(FieldReport {
        b0_tesla: system.b0,
        gamma_rad_per_s_per_tesla: system.gamma,
        samples_per_site,
        homogeneity_tolerance,
        sites,
    })
}
