//! SRM for geometrically uniform (GUS) constellations.
//!
//! When `γ_i = S^iγ_0` with `S = diag(W_m^k)` (`W_m = e^{i2π/m}`) the Gram
//! matrix is block circulant. Its DFT blocks are
//! `D_k = m·γ_0*L_kγ_0`, `L_k = diag[δ(i mod m = k)]`, and block `(r, s)` of
//! `G^{1/2}` is `(1/m)Σ_k W_m^{(s-r)k}D_k^{1/2}`. Only `m` Hermitian `h × h`
//! problems are solved instead of one of size `mh`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::hermitian::{herm_eig, psd_root_from_eig, RootPower, StateFactor};
use crate::srm::{gram_cutoff, DetectionMeta, DetectionResult};
use crate::{ComplexMatrix, Error, Result, C64};

/// The `m` DFT blocks `D_k` of a block-circulant Gram matrix.
#[derive(Debug, Clone)]
pub struct GusSpectrum {
    m: usize,
    h: usize,
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

/// `W_m^p`.
pub fn root_of_unity(m: usize, p: i64) -> C64 {
    let r = p.rem_euclid(m as i64) as usize;
    match (4 * r) % m {
        0 => [
            C64::new(1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, -1.0),
        ][4 * r / m],
        _ => C64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64),
    }
}

impl GusSpectrum {
    /// Spectrum from explicit blocks. `n` is the Fock dimension they came
    /// from, only used for reporting.
    pub fn new(blocks: Vec<ComplexMatrix>, n: usize) -> Result<Self> {
        let h = match blocks.first() {
            Some(b) => b.nrows(),
            None => return Err(Error::param("m", "no blocks")),
        };
        for b in &blocks {
            if b.nrows() != h || b.ncols() != h {
                return Err(Error::DimensionMismatch {
                    expected: h,
                    got: if b.nrows() != h { b.nrows() } else { b.ncols() },
                });
            }
        }
        Ok(GusSpectrum {
            m: blocks.len(),
            h,
            n,
            blocks,
        })
    }

    /// Scalar blocks (pure states).
    pub fn from_scalars(d: &[f64]) -> Result<Self> {
        GusSpectrum::new(
            d.iter()
                .map(|&x| ComplexMatrix::from_element(1, 1, C64::new(x, 0.0)))
                .collect(),
            0,
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Blocks of the prior-weighted factor `γ_0/√m`, i.e. `D_k/m`.
    pub fn prior_weighted(&self) -> GusSpectrum {
        let s = C64::new(1.0 / self.m as f64, 0.0);
        GusSpectrum {
            blocks: self.blocks.iter().map(|b| b * s).collect(),
            ..self.clone()
        }
    }

    /// `Σ_k D_k`, which equals `m·γ_0*γ_0`.
    pub fn block_sum(&self) -> ComplexMatrix {
        self.blocks
            .iter()
            .fold(ComplexMatrix::zeros(self.h, self.h), |acc, b| acc + b)
    }
}

/// `D_k` by selecting the rows of `γ_0` whose photon number is `≡ k (mod m)`.
pub fn gus_blocks(gamma0: &StateFactor, m: usize) -> Result<GusSpectrum> {
    if m == 0 {
        return Err(Error::param("m", "order must be >= 1"));
    }
    let g = gamma0.matrix();
    let (n, h) = (g.nrows(), g.ncols());
    if h == 0 {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let scale = C64::new(m as f64, 0.0);
    let blocks = (0..m)
        .map(|k| {
            let mut d = ComplexMatrix::zeros(h, h);
            for row in (k..n).step_by(m) {
                let r = g.row(row);
                d += r.adjoint() * r;
            }
            d * scale
        })
        .collect();
    GusSpectrum::new(blocks, n)
}

/// `D_k = Σ_s G_{0s}W_m^{-ks}` from the first block row `G_{0s} = γ_0*γ_s`.
pub fn blocks_from_first_row(row: &[ComplexMatrix]) -> Result<GusSpectrum> {
    let m = row.len();
    let h = row.first().map_or(0, |b| b.nrows());
    let blocks = (0..m)
        .map(|k| {
            row.iter().enumerate().fold(ComplexMatrix::zeros(h, h), |acc, (s, g)| {
                acc + g * root_of_unity(m, -((k * s) as i64))
            })
        })
        .collect();
    GusSpectrum::new(blocks, 0)
}

/// `D_k^{1/2}`. The blocks together carry the spectrum of `G`, so eigenvalues
/// are clipped with the general route's rule relative to the largest across
/// all blocks. An all-zero block yields a zero root.
pub fn gus_sqrt_blocks(spec: &GusSpectrum) -> Result<Vec<ComplexMatrix>> {
    let eigs = spec.blocks.par_iter().map(herm_eig).collect::<Result<Vec<_>>>()?;
    let scale = eigs.iter().map(|e| e.spectral_radius()).fold(0.0, f64::max);
    let cutoff = gram_cutoff(spec.m * spec.h, scale);
    eigs.par_iter()
        .map(|e| psd_root_from_eig(e, RootPower::Sqrt, cutoff))
        .collect()
}

/// Blocks `B_d = (1/m)Σ_k W_m^{dk}D_k^{1/2}`; block `(r, s)` of `G^{1/2}` is
/// `B_{s-r}`.
pub fn circulant_sqrt_blocks(roots: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let m = roots.len();
    let h = roots.first().map_or(0, |b| b.nrows());
    let inv_m = C64::new(1.0 / m as f64, 0.0);
    (0..m)
        .map(|d| {
            roots
                .iter()
                .enumerate()
                .fold(ComplexMatrix::zeros(h, h), |acc, (k, r)| {
                    acc + r * root_of_unity(m, (d * k) as i64)
                })
                * inv_m
        })
        .collect()
}

/// Full `mh × mh` matrix `G^{1/2}`.
pub fn assemble_sqrt_gram(spec: &GusSpectrum) -> Result<ComplexMatrix> {
    let b = circulant_sqrt_blocks(&gus_sqrt_blocks(spec)?);
    let (m, h) = (spec.m, spec.h);
    let mut out = ComplexMatrix::zeros(m * h, m * h);
    for r in 0..m {
        for s in 0..m {
            out.view_mut((r * h, s * h), (h, h)).copy_from(&b[(s + m - r) % m]);
        }
    }
    Ok(out)
}

/// SRM transition matrix of an equiprobable GUS constellation.
///
/// `p(j|i) = ‖B_{i-j}‖²_F`, so the matrix is circulant and `p(i|i)` is the
/// same for every symbol.
pub fn gus_transition(spec: &GusSpectrum) -> Result<DetectionResult> {
    let m = spec.m;
    let b = circulant_sqrt_blocks(&gus_sqrt_blocks(spec)?);
    let weights: Vec<f64> = b.iter().map(|x| x.iter().map(C64::norm_sqr).sum()).collect();
    let transition = (0..m)
        .map(|i| (0..m).map(|j| weights[(i + m - j) % m]).collect())
        .collect();
    let priors = vec![1.0 / m as f64; m];
    DetectionResult::new(transition, &priors, DetectionMeta::new(spec.n, vec![spec.h; m], "gus"))
}

/// Scalar DFT eigenvalues of pure `m`-PSK:
/// `D_k = Σ_s exp[-Ns(1-W_m^s)]·W_m^{-ks}`.
pub fn pure_psk_spectrum(m: usize, ns: f64) -> Vec<f64> {
    let g: Vec<C64> = (0..m)
        .map(|s| (-(C64::new(1.0, 0.0) - root_of_unity(m, s as i64)) * ns).exp())
        .collect();
    (0..m)
        .map(|k| {
            let d: C64 = g
                .iter()
                .enumerate()
                .map(|(s, x)| x * root_of_unity(m, -((k * s) as i64)))
                .sum();
            d.re.max(0.0)
        })
        .collect()
}

/// Closed-form SRM error probability of pure equiprobable `m`-PSK,
/// `1 - (1/m²)(Σ_k √D_k)²`.
pub fn pure_psk_pe(m: usize, ns: f64) -> f64 {
    let s: f64 = pure_psk_spectrum(m, ns).iter().map(|d| d.sqrt()).sum();
    1.0 - (s / m as f64).powi(2)
}
