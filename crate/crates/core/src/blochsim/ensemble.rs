//! Isochromat ensembles and spin-population bookkeeping.

use super::BlochError;
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One sub-ensemble of spins sharing an off-resonance frequency, represented
/// by a classical magnetization vector relative to equilibrium `M0 = 1`.
#[derive(Debug, Clone, Copy)]
pub struct Isochromat {
    /// Magnetization (Mx, My, Mz).
    pub m: [f64; 3],
    /// Off-resonance in rad/s.
    pub delta_omega: f64,
    /// Nonnegative fraction of the ensemble mass.
    pub weight: f64,
}

impl Isochromat {
    pub fn at_equilibrium(delta_omega: f64, weight: f64) -> Self {
        Self { m: [0.0, 0.0, 1.0], delta_omega, weight }
    }

    pub fn transverse_magnitude(&self) -> f64 {
        self.m[0].hypot(self.m[1])
    }

    /// Transverse phase `atan2(My, Mx)`; zero magnetization maps to phase 0.
    pub fn transverse_phase(&self) -> f64 {
        self.m[1].atan2(self.m[0])
    }
}

/// Spin-count bookkeeping carried alongside an ensemble. These are narrative
/// quantities (total, Zeeman-split and selected populations); they have no
/// dynamics of their own.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSummary {
    pub n_total: f64,
    pub n_low: f64,
    pub n_high: f64,
    #[serde(default)]
    pub selected_x: f64,
    #[serde(default)]
    pub selected_y: f64,
}

impl PopulationSummary {
    pub fn validate(&self) -> Result<(), BlochError> {
        if self.n_total < 0.0 || self.n_low < 0.0 || self.n_high < 0.0 {
            return Err(BlochError::Ensemble("population counts must be nonnegative".into()));
        }
        if self.n_low + self.n_high > self.n_total {
            return Err(BlochError::Ensemble(format!(
                "polarized populations exceed the total: {} + {} > {}",
                self.n_low, self.n_high, self.n_total
            )));
        }
        if self.n_low < self.n_high {
            return Err(BlochError::Ensemble(format!(
                "low-energy population must dominate in a positive field: {} < {}",
                self.n_low, self.n_high
            )));
        }
        Ok(())
    }
}

/// Off-resonance distribution used when sampling an ensemble.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "lowercase", deny_unknown_fields)]
pub enum OffResonance {
    /// Uniform over `[−max, +max]` rad/s.
    Uniform { max_rad_per_s: f64 },
    /// Zero-mean Gaussian with the given standard deviation in rad/s.
    Gaussian { sigma_rad_per_s: f64 },
    /// Every isochromat exactly on resonance.
    None,
}

/// A weighted collection of isochromats sharing T1/T2.
#[derive(Debug, Clone)]
pub struct Ensemble {
    isochromats: Vec<Isochromat>,
    t1: f64,
    t2: f64,
    population: Option<PopulationSummary>,
}

impl Ensemble {
    /// Validates relaxation times and weights, then normalizes weights to
    /// sum to one. An empty isochromat list is allowed (it is the documented
    /// result of an exhaustive selection).
    pub fn new(isochromats: Vec<Isochromat>, t1: f64, t2: f64) -> Result<Self, BlochError> {
        if !(t1 > 0.0) {
            return Err(BlochError::Ensemble(format!("t1 must be positive, got {t1} s")));
        }
        if !(t2 > 0.0) {
            return Err(BlochError::Ensemble(format!("t2 must be positive, got {t2} s")));
        }
        if isochromats.iter().any(|iso| !(iso.weight >= 0.0) || !iso.weight.is_finite()) {
            return Err(BlochError::Ensemble("weights must be finite and nonnegative".into()));
        }
        let mut ensemble = Self { isochromats, t1, t2, population: None };
        if !ensemble.isochromats.is_empty() {
            let total: f64 = ensemble.isochromats.iter().map(|i| i.weight).sum();
            if total <= 0.0 {
                return Err(BlochError::Ensemble("total weight must be positive".into()));
            }
            if (total - 1.0).abs() > tol::WEIGHT_SUM {
                for iso in &mut ensemble.isochromats {
                    iso.weight /= total;
                }
            }
        }
        Ok(ensemble)
    }

    /// Equilibrium ensemble with off-resonances drawn from `dist` using a
    /// seeded generator, so identical seeds reproduce identical ensembles.
    pub fn sampled(
        n: usize,
        dist: OffResonance,
        t1: f64,
        t2: f64,
        seed: u64,
    ) -> Result<Self, BlochError> {
        if n == 0 {
            return Err(BlochError::Ensemble("ensemble size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weight = 1.0 / n as f64;
        let isochromats = (0..n)
            .map(|_| {
                let delta = match dist {
                    OffResonance::Uniform { max_rad_per_s } => {
                        if max_rad_per_s == 0.0 {
                            0.0
                        } else {
                            rng.random_range(-max_rad_per_s..=max_rad_per_s)
                        }
                    }
                    OffResonance::Gaussian { sigma_rad_per_s } => {
                        gaussian_sample(&mut rng) * sigma_rad_per_s
                    }
                    OffResonance::None => 0.0,
                };
                Isochromat::at_equilibrium(delta, weight)
            })
            .collect();
        Self::new(isochromats, t1, t2)
    }

    /// On-resonance ensemble lying in the transverse plane with phases drawn
    /// uniformly over (−π, π]; used to exercise phase-window selection.
    pub fn uniform_transverse_phases(
        n: usize,
        t1: f64,
        t2: f64,
        seed: u64,
    ) -> Result<Self, BlochError> {
        if n == 0 {
            return Err(BlochError::Ensemble("ensemble size must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weight = 1.0 / n as f64;
        let isochromats = (0..n)
            .map(|_| {
                let phase = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                Isochromat { m: [phase.cos(), phase.sin(), 0.0], delta_omega: 0.0, weight }
            })
            .collect();
        Self::new(isochromats, t1, t2)
    }

    /// Single equilibrium isochromat, handy for scalar checks.
    pub fn single(delta_omega: f64, t1: f64, t2: f64) -> Result<Self, BlochError> {
        Self::new(vec![Isochromat::at_equilibrium(delta_omega, 1.0)], t1, t2)
    }

    /// Copy with `shift` rad/s added to every isochromat's off-resonance.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for iso in &mut out.isochromats {
            iso.delta_omega += shift;
        }
        out
    }

    pub fn with_population(mut self, population: PopulationSummary) -> Result<Self, BlochError> {
        population.validate()?;
        self.population = Some(population);
        Ok(self)
    }

    pub fn population(&self) -> Option<&PopulationSummary> {
        self.population.as_ref()
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }

    pub fn len(&self) -> usize {
        self.isochromats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.isochromats.is_empty()
    }

    pub fn isochromats(&self) -> &[Isochromat] {
        &self.isochromats
    }

    pub(crate) fn isochromats_mut(&mut self) -> &mut Vec<Isochromat> {
        &mut self.isochromats
    }

    /// Configuration warnings that do not block execution.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.t2 > self.t1 {
            out.push(format!(
                "t2 ({} s) exceeds t1 ({} s); transverse coherence normally decays at least as fast as longitudinal recovery",
                self.t2, self.t1
            ));
        }
        out
    }

    /// Weighted net magnetization, reduced with a fixed pairwise tree.
    pub fn net_magnetization(&self) -> [f64; 3] {
        super::executor::pairwise_weighted_sum(&self.isochromats)
    }

    pub fn net_transverse_magnitude(&self) -> f64 {
        let m = self.net_magnetization();
        m[0].hypot(m[1])
    }

    /// Phase of the net transverse magnetization; 0 when there is none.
    pub fn net_transverse_phase(&self) -> f64 {
        let m = self.net_magnetization();
        m[1].atan2(m[0])
    }
}

/// Box–Muller sample from a seeded uniform generator.
fn gaussian_sample(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_normalize_to_one() {
        let ens = Ensemble::new(
            vec![
                Isochromat::at_equilibrium(0.0, 2.0),
                Isochromat::at_equilibrium(1.0, 2.0),
            ],
            1.0,
            0.5,
        )
        .unwrap();
        let total: f64 = ens.isochromats().iter().map(|i| i.weight).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_reproducible_for_a_seed() {
        let a = Ensemble::sampled(64, OffResonance::Uniform { max_rad_per_s: 100.0 }, 1.0, 0.5, 7)
            .unwrap();
        let b = Ensemble::sampled(64, OffResonance::Uniform { max_rad_per_s: 100.0 }, 1.0, 0.5, 7)
            .unwrap();
        for (x, y) in a.isochromats().iter().zip(b.isochromats()) {
            assert_eq!(x.delta_omega, y.delta_omega);
        }
    }

    #[test]
    fn invalid_relaxation_times_rejected() {
        assert!(Ensemble::single(0.0, 0.0, 1.0).is_err());
        assert!(Ensemble::single(0.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn t2_longer_than_t1_warns() {
        let ens = Ensemble::single(0.0, 1.0, 2.0).unwrap();
        assert_eq!(ens.warnings().len(), 1);
        assert!(Ensemble::single(0.0, 1.0, 0.5).unwrap().warnings().is_empty());
    }

    #[test]
    fn population_invariants() {
        let ok = PopulationSummary {
            n_total: 6.7e22,
            n_low: 4.0e17,
            n_high: 3.9e17,
            selected_x: 1.0e11,
            selected_y: 1.0e11,
        };
        assert!(ok.validate().is_ok());
        let inverted = PopulationSummary { n_low: 1.0, n_high: 2.0, ..ok };
        assert!(inverted.validate().is_err());
        let overfull =
            PopulationSummary { n_total: 1.0, n_low: 1.0, n_high: 0.5, ..ok };
        assert!(overfull.validate().is_err());
    }

    #[test]
    fn uniform_phase_ensemble_is_transverse() {
        let ens = Ensemble::uniform_transverse_phases(128, 1.0, 1.0, 3).unwrap();
        for iso in ens.isochromats() {
            assert_eq!(iso.m[2], 0.0);
            assert!((iso.transverse_magnitude() - 1.0).abs() < 1e-12);
        }
    }
}
