//! End-to-end evaluation of one operating point `(modulation, Ns, N)`.

use rayon::prelude::*;

use crate::baseline::helstrom_binary_pe;
use crate::constellation::{Constellation, Modulation};
use crate::glauber::{choose_truncation, thermal_density, ThermalNoise};
use crate::gus::{gus_blocks, gus_transition};
use crate::hermitian::{RankMetric, StateFactor};
use crate::srm::{transition_matrix, DetectionResult, Route, StateMatrix};
use crate::{Error, Result};

/// Default truncation accuracy: `1e-5` for PSK, `1e-7` for QAM.
pub fn default_epsilon(modulation: Modulation) -> f64 {
    match modulation {
        Modulation::Psk { .. } => 1e-5,
        Modulation::Qam { .. } => 1e-7,
    }
}

pub const DEFAULT_NU: f64 = 1e-5;

/// How many eigenvalues each state factor keeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankRule {
    /// Smallest rank reconstructing `ρ` within `nu` under `metric`.
    Accuracy { nu: f64, metric: RankMetric },
    /// Exactly this many (capped at `n`).
    Fixed(usize),
}

impl RankRule {
    pub fn factor(self, rho: &crate::DensityMatrix) -> Result<StateFactor> {
        match self {
            RankRule::Accuracy { nu, metric } => rho.factor(nu, metric),
            RankRule::Fixed(r) => rho.factor_with_rank(r.min(rho.dim())),
        }
    }
}

/// Parameters of a single detection point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfig {
    pub modulation: Modulation,
    pub ns: f64,
    pub noise: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub metric: RankMetric,
    /// Route of the general SRM. PSK uses the circulant shortcut unless
    /// `force_general` is set.
    pub route: Route,
    pub force_general: bool,
    /// Fixed rank per state instead of the `nu` rule.
    pub rank: Option<usize>,
    /// Fixed Fock dimension instead of the `epsilon` rule.
    pub dim: Option<usize>,
}

impl PointConfig {
    pub fn new(modulation: Modulation, ns: f64, noise: f64) -> Self {
        PointConfig {
            modulation,
            ns,
            noise,
            epsilon: default_epsilon(modulation),
            nu: DEFAULT_NU,
            metric: RankMetric::default(),
            route: Route::Auto,
            force_general: false,
            rank: None,
            dim: None,
        }
    }

    pub fn psk(order: usize, ns: f64, noise: f64) -> Self {
        PointConfig::new(Modulation::Psk { order }, ns, noise)
    }

    pub fn qam(side: usize, ns: f64, noise: f64) -> Self {
        PointConfig::new(Modulation::Qam { side }, ns, noise)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.dim = Some(n);
        self
    }

    pub fn with_rank(mut self, r: usize) -> Self {
        self.rank = Some(r);
        self
    }

    /// Evaluate through the general SRM even when a circulant shortcut exists.
    pub fn general(mut self, route: Route) -> Self {
        self.force_general = true;
        self.route = route;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.modulation.validate()?;
        if !(self.ns > 0.0 && self.ns.is_finite()) {
            return Err(Error::param("ns", format!("must be > 0, got {}", self.ns)));
        }
        ThermalNoise::new(self.noise)?;
        if !(self.epsilon > 0.0 && self.epsilon < 0.1) {
            return Err(Error::param(
                "eps",
                format!("must lie in (0, 0.1), got {}", self.epsilon),
            ));
        }
        if !(self.nu > 0.0 && self.nu < 0.1) {
            return Err(Error::param("nu", format!("must lie in (0, 0.1), got {}", self.nu)));
        }
        if self.dim == Some(0) {
            return Err(Error::param("n", "dimension must be >= 1"));
        }
        if self.rank == Some(0) {
            return Err(Error::param("rank", "rank must be >= 1"));
        }
        Ok(())
    }

    pub fn rank_rule(&self) -> RankRule {
        match self.rank {
            Some(r) => RankRule::Fixed(r),
            None => RankRule::Accuracy {
                nu: self.nu,
                metric: self.metric,
            },
        }
    }
}

/// Shared Fock dimension: the largest per-state truncation.
pub fn shared_truncation(c: &Constellation, noise: ThermalNoise, epsilon: f64) -> Result<usize> {
    c.amplitudes()
        .iter()
        .map(|&a| choose_truncation(a, noise, epsilon))
        .try_fold(0, |n, t| t.map(|t| n.max(t)))
}

/// Factors of every state of `c`, computed concurrently.
pub fn state_factors(c: &Constellation, noise: ThermalNoise, n: usize, rule: RankRule) -> Result<Vec<StateFactor>> {
    c.amplitudes()
        .par_iter()
        .map(|&a| rule.factor(&thermal_density(a, noise, n)?))
        .collect()
}

/// General SRM of an arbitrary constellation in dimension `n`.
pub fn evaluate_constellation(
    c: &Constellation,
    noise: ThermalNoise,
    n: usize,
    rule: RankRule,
    route: Route,
) -> Result<DetectionResult> {
    let states = StateMatrix::new(state_factors(c, noise, n, rule)?)?;
    transition_matrix(&states, c.priors(), route)
}

/// Circulant SRM of a rotation-generated constellation in dimension `n`.
pub fn evaluate_gus(c: &Constellation, noise: ThermalNoise, n: usize, rule: RankRule) -> Result<DetectionResult> {
    let m = c
        .gus_order()
        .ok_or_else(|| Error::param("modulation", "constellation is not rotation-generated"))?;
    let f0 = rule.factor(&thermal_density(c.amplitudes()[0], noise, n)?)?;
    gus_transition(&gus_blocks(&f0, m)?)
}

/// SRM detection result of one operating point.
pub fn evaluate(cfg: &PointConfig) -> Result<DetectionResult> {
    cfg.validate()?;
    let c = cfg.modulation.constellation(cfg.ns)?;
    let noise = ThermalNoise::new(cfg.noise)?;
    let n = match cfg.dim {
        Some(n) => n,
        None => shared_truncation(&c, noise, cfg.epsilon)?,
    };
    let rule = cfg.rank_rule();
    let result = if c.gus_order().is_some() && !cfg.force_general {
        evaluate_gus(&c, noise, n, rule)?
    } else {
        evaluate_constellation(&c, noise, n, rule, cfg.route)?
    };
    let epsilon = cfg.dim.is_none().then_some(cfg.epsilon);
    let nu = cfg.rank.is_none().then_some(cfg.nu);
    Ok(result.with_accuracy(epsilon, nu))
}

/// Helstrom error probability of a two-symbol constellation in dimension `n`.
pub fn binary_helstrom(c: &Constellation, noise: ThermalNoise, n: usize) -> Result<f64> {
    if c.len() != 2 {
        return Err(Error::param("modulation", "Helstrom bound needs exactly two symbols"));
    }
    let rho0 = thermal_density(c.amplitudes()[0], noise, n)?;
    let rho1 = thermal_density(c.amplitudes()[1], noise, n)?;
    helstrom_binary_pe(&rho0, &rho1, c.priors()[0], c.priors()[1])
}
