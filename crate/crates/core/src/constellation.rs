//! QAM and PSK amplitude constellations parameterized by the mean number of
//! signal photons per symbol `Ns`.

use std::fmt;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::glauber::CoherentAmplitude;
use crate::gus::root_of_unity;
use crate::{Error, Result, C64};

/// Modulation format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    /// Square `L²`-QAM.
    Qam { side: usize },
    /// `m`-PSK.
    Psk { order: usize },
}

impl Modulation {
    /// Number of symbols.
    pub fn order(&self) -> usize {
        match *self {
            Modulation::Qam { side } => side * side,
            Modulation::Psk { order } => order,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Modulation::Qam { side } => format!("qam-{}", side * side),
            Modulation::Psk { order } => format!("psk-{order}"),
        }
    }

    pub fn constellation(&self, ns: f64) -> Result<Constellation> {
        match *self {
            Modulation::Qam { side } => qam(side, ns),
            Modulation::Psk { order } => psk(order, ns),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Modulation::Qam { side } if side < 2 => {
                Err(Error::param("l", format!("QAM side must be >= 2, got {side}")))
            }
            Modulation::Psk { order } if order < 2 => {
                Err(Error::param("m", format!("PSK order must be >= 2, got {order}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Ordered coherent-state amplitudes with prior probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    amplitudes: Vec<CoherentAmplitude>,
    priors: Vec<f64>,
    gus_order: Option<usize>,
    label: String,
}

impl Constellation {
    /// Arbitrary constellation. Priors must be nonnegative and sum to one
    /// within `1e-12`.
    pub fn new(amplitudes: Vec<CoherentAmplitude>, priors: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::param("amplitudes", "constellation is empty"));
        }
        if priors.len() != amplitudes.len() {
            return Err(Error::DimensionMismatch {
                expected: amplitudes.len(),
                got: priors.len(),
            });
        }
        if priors.iter().any(|&q| q.is_nan() || q < 0.0) || (priors.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::param("priors", "must be nonnegative and sum to 1"));
        }
        Ok(Constellation {
            amplitudes,
            priors,
            gus_order: None,
            label: label.into(),
        })
    }

    /// Arbitrary constellation with uniform priors.
    pub fn uniform(amplitudes: Vec<CoherentAmplitude>, label: impl Into<String>) -> Result<Self> {
        let m = amplitudes.len().max(1);
        Constellation::new(amplitudes, vec![1.0 / m as f64; m], label)
    }

    pub fn amplitudes(&self) -> &[CoherentAmplitude] {
        &self.amplitudes
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `Some(m)` when the set is generated by a rotation of order `m`
    /// (`γ_i = γ_0 W_m^i`).
    pub fn gus_order(&self) -> Option<usize> {
        self.gus_order
    }

    pub fn mean_photons(&self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.priors)
            .map(|(a, q)| q * a.photon_mean())
            .sum()
    }

    pub fn max_photons(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.photon_mean()).fold(0.0, f64::max)
    }
}

impl Serialize for Constellation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let amps: Vec<[f64; 2]> = self.amplitudes.iter().map(|a| [a.value().re, a.value().im]).collect();
        let mut s = serializer.serialize_struct("Constellation", 3)?;
        s.serialize_field("label", &self.label)?;
        s.serialize_field("amplitudes", &amps)?;
        s.serialize_field("priors", &self.priors)?;
        s.end()
    }
}

fn check_ns(ns: f64) -> Result<()> {
    if !(ns > 0.0 && ns.is_finite()) {
        return Err(Error::param("ns", format!("photons per symbol must be > 0, got {ns}")));
    }
    Ok(())
}

/// Scale `Δ` of an `L²`-QAM with mean photon number `ns`:
/// `Ns = (2/3)(L²-1)Δ²`.
pub fn qam_scale(side: usize, ns: f64) -> f64 {
    let m = (side * side) as f64;
    (3.0 * ns / (2.0 * (m - 1.0))).sqrt()
}

/// `L²`-QAM: amplitudes `Δ(u + iv)`, `u, v ∈ {-(L-1), -(L-3), …, L-1}`, in
/// lexicographic `(u, v)` order, uniform priors.
pub fn qam(side: usize, ns: f64) -> Result<Constellation> {
    Modulation::Qam { side }.validate()?;
    check_ns(ns)?;
    let delta = qam_scale(side, ns);
    let levels: Vec<f64> = (0..side).map(|i| 2.0 * i as f64 - (side as f64 - 1.0)).collect();
    let amplitudes = levels
        .iter()
        .flat_map(|&u| {
            levels
                .iter()
                .map(move |&v| CoherentAmplitude::new(C64::new(delta * u, delta * v)))
        })
        .collect();
    Constellation::uniform(amplitudes, Modulation::Qam { side }.label())
}

/// `m`-PSK: `γ_k = √Ns · e^{i2πk/m}`, uniform priors, rotation-generated.
pub fn psk(order: usize, ns: f64) -> Result<Constellation> {
    Modulation::Psk { order }.validate()?;
    check_ns(ns)?;
    let r = ns.sqrt();
    let amplitudes = (0..order)
        .map(|k| CoherentAmplitude::new(root_of_unity(order, k as i64) * r))
        .collect();
    let mut c = Constellation::uniform(amplitudes, Modulation::Psk { order }.label())?;
    c.gus_order = Some(order);
    Ok(c)
}
