//! Coherent (Glauber) states and thermal-noise density operators in the
//! photon-number basis.
//!
//! A laser mode with complex envelope `γ` in the presence of thermal noise
//! with `N` mean background photons is the displaced thermal state
//! `ρ(γ)`. Its number-basis entries are, for `m ≤ k`,
//!
//! ```text
//! ρ_mk = (1-v) v^k sqrt(m!/k!) (γ*/N)^(k-m) exp(-(1-v)|γ|²) L_m^(k-m)(-|γ|²/(N(N+1)))
//! ```
//!
//! with `v = N/(1+N)`, and `ρ_km = conj(ρ_mk)`. The diagonal is the Laguerre
//! photon-count distribution with mean `|γ|² + N`.
//!
//! All magnitudes are assembled in the log domain: factorial ratios, the
//! powers of `γ*/N` and the Laguerre values each overflow well before the
//! dimensions used for high photon numbers.

use statrs::function::factorial::ln_factorial;

use crate::hermitian::{self, RankMetric, StateFactor};
use crate::{ComplexMatrix, Error, Result, C64};

/// Search limit for [`choose_truncation`].
pub const MAX_TRUNCATION: usize = 4096;

/// Complex field amplitude `γ` of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude(C64);

impl CoherentAmplitude {
    pub fn new(value: C64) -> Self {
        CoherentAmplitude(value)
    }

    pub fn real(x: f64) -> Self {
        CoherentAmplitude(C64::new(x, 0.0))
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        CoherentAmplitude(C64::from_polar(r, theta))
    }

    pub fn value(&self) -> C64 {
        self.0
    }

    /// Mean photon number `N_γ = |γ|²`.
    pub fn photon_mean(&self) -> f64 {
        self.0.norm_sqr()
    }
}

impl From<C64> for CoherentAmplitude {
    fn from(z: C64) -> Self {
        CoherentAmplitude(z)
    }
}

/// Thermal background with `N` mean photons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalNoise {
    mean_photons: f64,
}

impl ThermalNoise {
    pub fn new(mean_photons: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return Err(Error::param(
                "noise",
                format!("must be finite and >= 0, got {mean_photons}"),
            ));
        }
        Ok(ThermalNoise { mean_photons })
    }

    pub fn noiseless() -> Self {
        ThermalNoise { mean_photons: 0.0 }
    }

    pub fn mean_photons(&self) -> f64 {
        self.mean_photons
    }

    /// `v = N/(1+N)`, in `[0, 1)`.
    pub fn v(&self) -> f64 {
        self.mean_photons / (1.0 + self.mean_photons)
    }

    pub fn is_noiseless(&self) -> bool {
        self.mean_photons == 0.0
    }
}

/// Truncated density matrix in the photon-number basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Wraps a square matrix after Hermitian symmetrization.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        Ok(DensityMatrix {
            matrix: hermitian::hermitize(&matrix),
        })
    }

    /// Pure state `|ψ⟩⟨ψ|`.
    pub fn pure(ket: &ComplexMatrix) -> Self {
        DensityMatrix {
            matrix: ket * ket.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// Practical-rank factor, see [`hermitian::low_rank_factor`].
    pub fn factor(&self, nu: f64, metric: RankMetric) -> Result<StateFactor> {
        hermitian::low_rank_factor(&self.matrix, nu, metric)
    }

    pub fn factor_with_rank(&self, rank: usize) -> Result<StateFactor> {
        hermitian::factor_with_rank(&self.matrix, rank)
    }
}

/// Truncated ket `|γ⟩`, components `exp(-|γ|²/2) γ^k / sqrt(k!)` for `k < n`.
pub fn coherent_ket(gamma: CoherentAmplitude, n: usize) -> ComplexMatrix {
    let g = gamma.value();
    let mut ket = ComplexMatrix::zeros(n, 1);
    if n == 0 {
        return ket;
    }
    if g.norm() == 0.0 {
        ket[(0, 0)] = C64::new(1.0, 0.0);
        return ket;
    }
    let (r, theta) = g.to_polar();
    let half_mean = 0.5 * r * r;
    for k in 0..n {
        let ln_mag = -half_mean + k as f64 * r.ln() - 0.5 * ln_factorial(k as u64);
        ket[(k, 0)] = C64::from_polar(ln_mag.exp(), k as f64 * theta);
    }
    ket
}

/// `⟨α|β⟩ = exp(-(|α|² + |β|² - 2 α* β)/2)`.
pub fn inner_product(alpha: CoherentAmplitude, beta: CoherentAmplitude) -> C64 {
    let (a, b) = (alpha.value(), beta.value());
    (-(a.norm_sqr() + b.norm_sqr() - 2.0 * a.conj() * b) * 0.5).exp()
}

/// Generalized Laguerre polynomial `L_m^k(x)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}`.
pub fn laguerre(m: usize, k: usize, x: f64) -> f64 {
    let a = k as f64;
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln L_j^order(-y)` for `j = 0, 1, 2, …` and `y ≥ 0`.
///
/// For a negative argument every coefficient is positive, so the sequence is
/// positive and can be tracked as a scaled pair plus a log offset.
struct LnLaguerreNeg {
    order: f64,
    y: f64,
    j: usize,
    prev: f64,
    cur: f64,
    offset: f64,
}

impl LnLaguerreNeg {
    fn new(order: usize, y: f64) -> Self {
        LnLaguerreNeg {
            order: order as f64,
            y,
            j: 0,
            prev: 0.0,
            cur: 1.0,
            offset: 0.0,
        }
    }
}

impl Iterator for LnLaguerreNeg {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.cur.ln() + self.offset;
        let (a, y, jf) = (self.order, self.y, self.j as f64);
        let next = if self.j == 0 {
            1.0 + a + y
        } else {
            ((2.0 * jf + 1.0 + a + y) * self.cur - (jf + a) * self.prev) / (jf + 1.0)
        };
        self.prev = self.cur;
        self.cur = next;
        if self.cur > 1e200 {
            self.offset += self.cur.ln();
            self.prev /= self.cur;
            self.cur = 1.0;
        }
        self.j += 1;
        Some(out)
    }
}

/// Argument magnitude `|γ|²/(N(N+1))` of the Laguerre factor.
fn laguerre_scale(gamma: CoherentAmplitude, noise: ThermalNoise) -> f64 {
    let n = noise.mean_photons();
    gamma.photon_mean() / (n * (n + 1.0))
}

/// Thermal-noise density matrix `ρ(γ)` truncated to `n × n`.
///
/// `γ = 0` gives the diagonal thermal state `(1-v) v^k`; `N = 0` gives the
/// pure state `|γ⟩⟨γ|`. Fails when the retained trace is below 1/2.
pub fn thermal_density(gamma: CoherentAmplitude, noise: ThermalNoise, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::param("n", "dimension must be >= 1"));
    }
    let rho = thermal_density_unchecked(gamma, noise, n);
    let trace = rho.trace();
    if trace < 0.5 {
        return Err(Error::DimensionTooSmall { dim: n, trace });
    }
    Ok(rho)
}

/// Same as [`thermal_density`] without the trace sanity check, for
/// deliberately coarse truncations.
pub fn thermal_density_unchecked(gamma: CoherentAmplitude, noise: ThermalNoise, n: usize) -> DensityMatrix {
    if noise.is_noiseless() {
        DensityMatrix::pure(&coherent_ket(gamma, n))
    } else if gamma.value().norm() == 0.0 {
        let v = noise.v();
        let diag = nalgebra::DVector::from_iterator(n, (0..n).map(|k| C64::new((1.0 - v) * v.powi(k as i32), 0.0)));
        DensityMatrix {
            matrix: ComplexMatrix::from_diagonal(&diag),
        }
    } else {
        displaced_thermal(gamma, noise, n)
    }
}

fn displaced_thermal(gamma: CoherentAmplitude, noise: ThermalNoise, n: usize) -> DensityMatrix {
    let big_n = noise.mean_photons();
    let v = noise.v();
    let (r, theta) = gamma.value().to_polar();
    let y = laguerre_scale(gamma, noise);
    let ln_front = (1.0 - v).ln() - (1.0 - v) * r * r;
    let (ln_r, ln_n, ln_1pn) = (r.ln(), big_n.ln(), big_n.ln_1p());
    let ln_fact: Vec<f64> = (0..n).map(|k| ln_factorial(k as u64)).collect();

    let mut matrix = ComplexMatrix::zeros(n, n);
    // walk each super-diagonal d = k - m with one Laguerre recurrence
    for d in 0..n {
        let lag = LnLaguerreNeg::new(d, y);
        for (m, ln_l) in (0..n - d).zip(lag) {
            let k = m + d;
            // v^k / N^(k-m) = N^m / (1+N)^k
            let ln_mag = ln_front + m as f64 * ln_n - k as f64 * ln_1pn
                + 0.5 * (ln_fact[m] - ln_fact[k])
                + d as f64 * ln_r
                + ln_l;
            let z = C64::from_polar(ln_mag.exp(), -(d as f64) * theta);
            matrix[(m, k)] = z;
            matrix[(k, m)] = z.conj();
        }
    }
    DensityMatrix { matrix }
}

/// Photon-count probabilities `p_L(0..n)` of `ρ(γ)` (the diagonal of
/// [`thermal_density`]).
pub fn photon_distribution(gamma: CoherentAmplitude, noise: ThermalNoise, n: usize) -> Vec<f64> {
    PhotonCounts::new(gamma, noise).take(n).collect()
}

/// Probability of exactly `m` photons: `(1-v) v^m e^{-(1-v)N_γ} L_m(-(1-v)²N_γ/v)`.
pub fn laguerre_pmf(m: usize, gamma: CoherentAmplitude, noise: ThermalNoise) -> f64 {
    PhotonCounts::new(gamma, noise).nth(m).unwrap_or(0.0)
}

/// Streaming photon-count distribution.
struct PhotonCounts {
    gamma: CoherentAmplitude,
    noise: ThermalNoise,
    m: usize,
    lag: Option<LnLaguerreNeg>,
}

impl PhotonCounts {
    fn new(gamma: CoherentAmplitude, noise: ThermalNoise) -> Self {
        let lag = (!noise.is_noiseless() && gamma.photon_mean() > 0.0)
            .then(|| LnLaguerreNeg::new(0, laguerre_scale(gamma, noise)));
        PhotonCounts {
            gamma,
            noise,
            m: 0,
            lag,
        }
    }
}

impl Iterator for PhotonCounts {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let m = self.m as f64;
        let mean = self.gamma.photon_mean();
        let p = if self.noise.is_noiseless() {
            // Poisson
            if mean == 0.0 {
                if self.m == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-mean + m * mean.ln() - ln_factorial(self.m as u64)).exp()
            }
        } else {
            let v = self.noise.v();
            let ln_geo = (1.0 - v).ln() + m * v.ln();
            match self.lag.as_mut() {
                None => ln_geo.exp(),
                Some(lag) => {
                    let ln_l = lag.next().unwrap_or(f64::NEG_INFINITY);
                    (ln_geo - (1.0 - v) * mean + ln_l).exp()
                }
            }
        };
        self.m += 1;
        Some(p)
    }
}

/// Smallest `n` with `Σ_{m<n} p_L(m) ≥ 1 - ε` (quasi-unitary trace rule).
pub fn choose_truncation(gamma: CoherentAmplitude, noise: ThermalNoise, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param("eps", format!("must lie in (0, 1), got {epsilon}")));
    }
    let mut mass = 0.0;
    for (i, p) in PhotonCounts::new(gamma, noise).take(MAX_TRUNCATION).enumerate() {
        mass += p;
        if mass >= 1.0 - epsilon {
            return Ok(i + 1);
        }
    }
    Err(Error::TruncationLimit {
        epsilon,
        limit: MAX_TRUNCATION,
    })
}
