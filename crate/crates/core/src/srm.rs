//! Square root measurement on arbitrary (mixed) states.
//!
//! With state factors `ρ_i = γ_iγ_i*` stacked as `Γ = [γ_0 … γ_{m-1}]`
//! (`n × k`), the measurement is `M = T^{-1/2}Γ = ΓG^{-1/2}` where
//! `G = Γ*Γ` and `T = ΓΓ*`. The transition probabilities follow from
//! `G^{1/2} = M*Γ`: `p(j|i) = ‖B_ji‖²_F` with `B_ji` the `(j, i)` block.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::glauber::{inner_product, CoherentAmplitude};
use crate::hermitian::{herm_eig, psd_root_from_eig, RootPower, StateFactor};
use crate::{ComplexMatrix, Error, Result, C64};

/// Column-stacked state factors sharing one row dimension.
#[derive(Debug, Clone)]
pub struct StateMatrix {
    blocks: Vec<StateFactor>,
    offsets: Vec<usize>,
    n: usize,
}

impl StateMatrix {
    pub fn new(blocks: Vec<StateFactor>) -> Result<Self> {
        let n = match blocks.first() {
            Some(b) => b.dim(),
            None => return Err(Error::param("states", "no states given")),
        };
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        offsets.push(0);
        for b in &blocks {
            if b.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.dim(),
                });
            }
            offsets.push(offsets.last().unwrap() + b.rank());
        }
        Ok(StateMatrix { blocks, offsets, n })
    }

    /// Pure states given as `n × 1` kets.
    pub fn from_kets(kets: &[ComplexMatrix]) -> Result<Self> {
        StateMatrix::new(kets.iter().cloned().map(StateFactor::new).collect())
    }

    /// Row dimension `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total column count `k = Σ r_i`.
    pub fn k(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Number of states `m`.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[StateFactor] {
        &self.blocks
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.blocks.iter().map(StateFactor::rank).collect()
    }

    /// Column offsets of each block, with a final entry equal to `k`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// The full `n × k` matrix `Γ`.
    pub fn gamma(&self) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(self.n, self.k());
        for (b, &off) in self.blocks.iter().zip(&self.offsets) {
            g.columns_mut(off, b.rank()).copy_from(b.matrix());
        }
        g
    }
}

/// `G = Γ*Γ` (`k × k`).
pub fn gram_matrix(states: &StateMatrix) -> ComplexMatrix {
    let g = states.gamma();
    g.adjoint() * g
}

/// `T = ΓΓ*` (`n × n`).
pub fn gram_operator(states: &StateMatrix) -> ComplexMatrix {
    let g = states.gamma();
    &g * g.adjoint()
}

/// Exact Gram matrix `⟨γ_i|γ_j⟩` of untruncated coherent states.
pub fn coherent_gram(amplitudes: &[CoherentAmplitude]) -> ComplexMatrix {
    let m = amplitudes.len();
    ComplexMatrix::from_fn(m, m, |i, j| inner_product(amplitudes[i], amplitudes[j]))
}

/// Which Gram object is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// `T^{-1/2}` (`n × n`).
    ViaT,
    /// `G^{±1/2}` (`k × k`).
    ViaG,
    /// The smaller of the two: `T` when `k > n`.
    #[default]
    Auto,
}

impl Route {
    pub fn resolve(self, n: usize, k: usize) -> Route {
        match self {
            Route::Auto if k > n => Route::ViaT,
            Route::Auto => Route::ViaG,
            r => r,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Route::ViaT => "via_t",
            Route::ViaG => "via_g",
            Route::Auto => "auto",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Route {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "via_t" | "t" => Ok(Route::ViaT),
            "via_g" | "g" => Ok(Route::ViaG),
            "auto" => Ok(Route::Auto),
            other => Err(format!("unknown route `{other}` (via_t|via_g|auto)")),
        }
    }
}

/// Roots of Gram objects. Only eigenvalues at rounding level count as zero:
/// dropping an eigenvalue `λ` removes `√λ` from `G^{1/2}`, so a coarse
/// cutoff would bias the probabilities of nearly dependent states.
fn pm_root(a: &ComplexMatrix, power: RootPower) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    psd_root_from_eig(&eig, power, gram_cutoff(eig.dim(), eig.spectral_radius()))
}

/// Eigenvalue below which a Gram spectrum of size `dim` counts as zero.
pub(crate) fn gram_cutoff(dim: usize, spectral_radius: f64) -> f64 {
    (dim as f64 * f64::EPSILON).max(1e-14) * spectral_radius
}

fn split_columns(m: &ComplexMatrix, offsets: &[usize]) -> Vec<ComplexMatrix> {
    offsets
        .windows(2)
        .map(|w| m.columns(w[0], w[1] - w[0]).into_owned())
        .collect()
}

/// Measurement factors `μ_i` (`n × r_i`), `Π_i = μ_iμ_i*`.
pub fn measurement_factors(states: &StateMatrix, route: Route) -> Result<Vec<ComplexMatrix>> {
    let gamma = states.gamma();
    let m = match route.resolve(states.n(), states.k()) {
        Route::ViaT => pm_root(&(&gamma * gamma.adjoint()), RootPower::InvSqrt)? * &gamma,
        _ => {
            let g = gamma.adjoint() * &gamma;
            &gamma * pm_root(&g, RootPower::InvSqrt)?
        }
    };
    Ok(split_columns(&m, states.offsets()))
}

/// `G^{1/2}` through the chosen route (`Γ*T^{-1/2}Γ` or the root of `G`).
pub fn sqrt_gram(states: &StateMatrix, route: Route) -> Result<ComplexMatrix> {
    let gamma = states.gamma();
    match route.resolve(states.n(), states.k()) {
        Route::ViaT => {
            let t_inv = pm_root(&(&gamma * gamma.adjoint()), RootPower::InvSqrt)?;
            Ok(gamma.adjoint() * t_inv * &gamma)
        }
        _ => pm_root(&(gamma.adjoint() * &gamma), RootPower::Sqrt),
    }
}

/// Bookkeeping attached to a [`DetectionResult`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionMeta {
    pub n: usize,
    pub epsilon: Option<f64>,
    pub nu: Option<f64>,
    pub ranks: Vec<usize>,
    pub route: String,
}

impl DetectionMeta {
    pub fn new(n: usize, ranks: Vec<usize>, route: impl Into<String>) -> Self {
        DetectionMeta {
            n,
            epsilon: None,
            nu: None,
            ranks,
            route: route.into(),
        }
    }
}

/// Transition probabilities and error probability of a measurement.
///
/// `transition[i][j] = p(j|i)`: row `i` is the transmitted symbol.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionResult {
    pub transition: Vec<Vec<f64>>,
    pub pc: f64,
    pub pe: f64,
    pub meta: DetectionMeta,
}

impl DetectionResult {
    pub fn new(transition: Vec<Vec<f64>>, priors: &[f64], meta: DetectionMeta) -> Result<Self> {
        if priors.len() != transition.len() {
            return Err(Error::DimensionMismatch {
                expected: transition.len(),
                got: priors.len(),
            });
        }
        let pc: f64 = priors.iter().enumerate().map(|(i, q)| q * transition[i][i]).sum();
        Ok(DetectionResult {
            transition,
            pc,
            pe: 1.0 - pc,
            meta,
        })
    }

    pub fn order(&self) -> usize {
        self.transition.len()
    }

    /// `p(j|i)`.
    pub fn p(&self, j: usize, i: usize) -> f64 {
        self.transition[i][j]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.transition.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn with_accuracy(mut self, epsilon: Option<f64>, nu: Option<f64>) -> Self {
        self.meta.epsilon = epsilon;
        self.meta.nu = nu;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("detection result is always serializable")
    }
}

/// Transition probabilities read off a `G^{1/2}` with the given block offsets.
pub fn transition_from_sqrt(b: &ComplexMatrix, offsets: &[usize]) -> Vec<Vec<f64>> {
    let m = offsets.len() - 1;
    (0..m)
        .map(|i| {
            let (ci, wi) = (offsets[i], offsets[i + 1] - offsets[i]);
            (0..m)
                .map(|j| {
                    let (rj, wj) = (offsets[j], offsets[j + 1] - offsets[j]);
                    b.view((rj, ci), (wj, wi)).iter().map(C64::norm_sqr).sum()
                })
                .collect()
        })
        .collect()
}

/// SRM transition probabilities of `states` with prior weights `priors`.
pub fn transition_matrix(states: &StateMatrix, priors: &[f64], route: Route) -> Result<DetectionResult> {
    let resolved = route.resolve(states.n(), states.k());
    let b = sqrt_gram(states, resolved)?;
    let t = transition_from_sqrt(&b, states.offsets());
    DetectionResult::new(
        t,
        priors,
        DetectionMeta::new(states.n(), states.ranks(), resolved.name()),
    )
}

/// SRM of pure states from their Gram matrix alone (`G^{1/2}` route, `n`
/// unknown and reported as 0).
pub fn transition_from_gram(gram: &ComplexMatrix, priors: &[f64]) -> Result<DetectionResult> {
    let m = gram.nrows();
    let b = pm_root(gram, RootPower::Sqrt)?;
    let offsets: Vec<usize> = (0..=m).collect();
    let t = transition_from_sqrt(&b, &offsets);
    DetectionResult::new(t, priors, DetectionMeta::new(0, vec![1; m], "gram"))
}
