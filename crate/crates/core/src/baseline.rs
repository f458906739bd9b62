//! Comparison baselines: classical homodyne detection and the exact binary
//! (Helstrom) optimum.
//!
//! Homodyne detection observes both quadratures of the received amplitude
//! with independent Gaussian noise of variance `(1+2N)/4`, so that antipodal
//! signalling has `SNR = 4Ns/(1+2N)`. Decisions are minimum distance.

use std::f64::consts::PI;

use libm::erfc;

use crate::constellation::{qam_scale, Modulation};
use crate::glauber::DensityMatrix;
use crate::hermitian::herm_eig;
use crate::{Error, Result, C64};

const CRAIG_TARGET: f64 = 1e-12;

/// Gaussian quadrature-noise model of a homodyne receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneModel {
    pub snr: f64,
    pub per_quadrature_sigma2: f64,
}

impl HomodyneModel {
    pub fn new(ns: f64, noise: f64) -> Result<Self> {
        if !(ns > 0.0 && ns.is_finite()) {
            return Err(Error::param("ns", format!("must be > 0, got {ns}")));
        }
        if !(noise >= 0.0 && noise.is_finite()) {
            return Err(Error::param("noise", format!("must be >= 0, got {noise}")));
        }
        Ok(HomodyneModel {
            snr: 4.0 * ns / (1.0 + 2.0 * noise),
            per_quadrature_sigma2: (1.0 + 2.0 * noise) / 4.0,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.per_quadrature_sigma2.sqrt()
    }
}

/// Gaussian tail `Q(x) = P(Z > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Craig's form of the `m`-PSK symbol error probability with
/// `ρ = |γ|²/(2σ²)`:
/// `(1/π)∫_0^{(m-1)π/m} exp(-ρ sin²(π/m)/sin²φ) dφ`.
pub fn psk_craig_pe(m: usize, rho: f64) -> f64 {
    let s2 = (PI / m as f64).sin().powi(2);
    let upper = (m as f64 - 1.0) * PI / m as f64;
    let f = |phi: f64| {
        let sp = phi.sin();
        if sp == 0.0 {
            0.0
        } else {
            (-rho * s2 / (sp * sp)).exp()
        }
    };
    quadrature::double_exponential::integrate(f, 0.0, upper, CRAIG_TARGET).integral / PI
}

/// Homodyne symbol error probability of `modulation` at `ns` signal and
/// `noise` thermal photons.
pub fn homodyne_pe(modulation: Modulation, ns: f64, noise: f64) -> Result<f64> {
    modulation.validate()?;
    let model = HomodyneModel::new(ns, noise)?;
    Ok(match modulation {
        Modulation::Psk { order: 2 } => q_function(model.snr.sqrt()),
        Modulation::Psk { order } => psk_craig_pe(order, ns / (2.0 * model.per_quadrature_sigma2)),
        Modulation::Qam { side } => {
            // neighbouring levels are 2Δ apart
            let p = 2.0 * (1.0 - 1.0 / side as f64) * q_function(qam_scale(side, ns) / model.sigma());
            1.0 - (1.0 - p).powi(2)
        }
    })
}

fn check_priors(q0: f64, q1: f64) -> Result<()> {
    if !(q0 >= 0.0 && q1 >= 0.0) || (q0 + q1 - 1.0).abs() > 1e-12 {
        return Err(Error::param("priors", format!("q0 + q1 must be 1, got {q0} + {q1}")));
    }
    Ok(())
}

/// Minimum error probability of deciding between `rho0` and `rho1`:
/// `1 - q0·Tr ρ0 - Σ_{λ>0} λ(q1ρ1 - q0ρ0)`. Mass lost to truncation counts
/// as error.
pub fn helstrom_binary_pe(rho0: &DensityMatrix, rho1: &DensityMatrix, q0: f64, q1: f64) -> Result<f64> {
    check_priors(q0, q1)?;
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            got: rho1.dim(),
        });
    }
    let diff = rho1.matrix() * C64::new(q1, 0.0) - rho0.matrix() * C64::new(q0, 0.0);
    let eig = herm_eig(&diff)?;
    let positive: f64 = eig.eigenvalues.iter().filter(|&&l| l > 0.0).sum();
    Ok(1.0 - q0 * rho0.trace() - positive)
}

/// Helstrom bound for two pure states with `|⟨ψ0|ψ1⟩|² = overlap_sq`.
pub fn helstrom_pure_pe(overlap_sq: f64, q0: f64, q1: f64) -> Result<f64> {
    check_priors(q0, q1)?;
    Ok(0.5 * (1.0 - (1.0 - 4.0 * q0 * q1 * overlap_sq).max(0.0).sqrt()))
}

/// Smallest `Ns` in `[lo, hi]` at which the decreasing `pe(Ns)` reaches
/// `target`, by bisection to `tol`.
pub fn required_photons(pe: impl Fn(f64) -> f64, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::param("ns", format!("bad bracket [{lo}, {hi}]")));
    }
    if pe(lo) < target || pe(hi) > target {
        return Err(Error::param(
            "target",
            format!("{target} not bracketed by [{lo}, {hi}]"),
        ));
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if pe(mid) > target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
