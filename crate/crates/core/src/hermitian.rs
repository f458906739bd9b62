//! Hermitian eigendecomposition, PSD square roots and low-rank factors.
//!
//! Every routine works on dense complex matrices and symmetrizes its input
//! as `(a + a*)/2` before decomposing, so small asymmetric rounding in the
//! caller is tolerated. Inputs whose asymmetry exceeds
//! [`HERMITIAN_TOL`]`·‖a‖` (max-entry norm) are rejected.

use nalgebra::SymmetricEigen;

use crate::{max_abs, ComplexMatrix, Error, Result, C64};

/// Accepted asymmetry, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Eigenvalues below this fraction of the spectral radius are treated as zero
/// by the pseudo-inverse square root.
pub const DEFAULT_REL_CUTOFF: f64 = 1e-12;

/// Eigenvalues more negative than this fraction of the spectral radius mark
/// a matrix as not positive semidefinite.
pub const PSD_REL_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector's
/// largest-magnitude component is real and positive, which makes the output
/// reproducible.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Largest eigenvalue magnitude.
    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// `V·diag(f(λ))·V*`.
    pub fn recompose_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut scaled = self.eigenvectors.clone();
        for (j, &l) in self.eigenvalues.iter().enumerate() {
            let s = f(l);
            scaled.column_mut(j).scale_mut(s);
        }
        let out = scaled * self.eigenvectors.adjoint();
        debug_assert_eq!(out.nrows(), n);
        out
    }

    pub fn recompose(&self) -> ComplexMatrix {
        self.recompose_with(|l| l)
    }
}

/// Returns `(a + a*)/2`.
pub fn hermitize(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()).scale(0.5)
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare(a.nrows(), a.ncols()));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = a.nrows();
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            asym = asym.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    if asym > HERMITIAN_TOL * max_abs(a).max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(asym));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermEig> {
    check_hermitian(a)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(HermEig {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(hermitize(a), f64::EPSILON, MAX_SWEEPS).ok_or(Error::NoConvergence)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut vectors = ComplexMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let col = eig.eigenvectors.column(src);
        let (pivot, _) = col.iter().enumerate().fold((0, -1.0), |(bi, bm), (i, z)| {
            let m = z.norm();
            if m > bm {
                (i, m)
            } else {
                (bi, bm)
            }
        });
        let p = col[pivot];
        let phase = if p.norm() > 0.0 {
            p.conj() / p.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        vectors.set_column(dst, &(col * phase));
        vectors[(pivot, dst)] = C64::new(p.norm(), 0.0);
    }
    Ok(HermEig {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

/// Exponent of a PSD matrix root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPower {
    /// `a^{1/2}`
    Sqrt,
    /// Moore–Penrose `a^{-1/2}`
    InvSqrt,
}

/// `a^{±1/2}` for a Hermitian PSD matrix.
///
/// Eigenvalues in `[-cutoff, 0)` are clipped to zero; anything below
/// `-cutoff` is an error. For [`RootPower::InvSqrt`] eigenvalues `≤ cutoff`
/// map to zero (pseudo-inverse).
pub fn psd_sqrt_pm(a: &ComplexMatrix, power: RootPower, cutoff: f64) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    psd_root_from_eig(&eig, power, cutoff)
}

pub fn psd_root_from_eig(eig: &HermEig, power: RootPower, cutoff: f64) -> Result<ComplexMatrix> {
    if let Some(&min) = eig.eigenvalues.last() {
        if min < -cutoff {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    Ok(match power {
        RootPower::Sqrt => eig.recompose_with(|l| l.max(0.0).sqrt()),
        RootPower::InvSqrt => eig.recompose_with(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }),
    })
}

fn default_cutoff(eig: &HermEig) -> f64 {
    DEFAULT_REL_CUTOFF * eig.spectral_radius()
}

/// `a^{1/2}` with the default relative cutoff.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    psd_root_from_eig(&eig, RootPower::Sqrt, default_cutoff(&eig))
}

/// Pseudo-inverse `a^{-1/2}` with the default relative cutoff.
pub fn psd_inv_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    psd_root_from_eig(&eig, RootPower::InvSqrt, default_cutoff(&eig))
}

/// How the reconstruction error `Δρ = ρ - γγ*` is measured when choosing the
/// practical rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankMetric {
    /// `sqrt(Σ|Δρ_ij|²)`
    #[default]
    Frobenius,
    /// `max |Δρ_ij|`
    MaxAbs,
    /// `Σ|Δρ_ij|² / n²`
    MeanSquare,
}

impl RankMetric {
    pub fn measure(self, delta: &ComplexMatrix) -> f64 {
        match self {
            RankMetric::Frobenius => delta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            RankMetric::MaxAbs => max_abs(delta),
            RankMetric::MeanSquare => {
                let n = delta.nrows().max(1) as f64;
                delta.iter().map(|z| z.norm_sqr()).sum::<f64>() / (n * n)
            }
        }
    }
}

impl std::str::FromStr for RankMetric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "frobenius" | "fro" => Ok(RankMetric::Frobenius),
            "max" => Ok(RankMetric::MaxAbs),
            "mse" => Ok(RankMetric::MeanSquare),
            other => Err(format!("unknown rank metric `{other}` (frobenius|max|mse)")),
        }
    }
}

/// State factor `γ` (`n × r`) with `ρ ≈ γγ*`.
///
/// Columns are `sqrt(λ_i)·u_i` in order of decreasing eigenvalue. Any `γQ`
/// with `Q` unitary factors the same matrix.
#[derive(Debug, Clone)]
pub struct StateFactor {
    matrix: ComplexMatrix,
}

impl StateFactor {
    pub fn new(matrix: ComplexMatrix) -> Self {
        StateFactor { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `γγ*`
    pub fn reconstruct(&self) -> ComplexMatrix {
        &self.matrix * self.matrix.adjoint()
    }

    /// Right-multiplies by `q` (gauge change when `q` is unitary).
    pub fn gauge(&self, q: &ComplexMatrix) -> Result<StateFactor> {
        if q.nrows() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: q.nrows(),
            });
        }
        Ok(StateFactor::new(&self.matrix * q))
    }
}

fn check_psd(eig: &HermEig) -> Result<()> {
    let scale = eig.spectral_radius();
    match eig.eigenvalues.last() {
        Some(&min) if min < -PSD_REL_TOL * scale => Err(Error::NotPsd(min)),
        _ => Ok(()),
    }
}

fn factor_from_eig(eig: &HermEig, rank: usize) -> StateFactor {
    let n = eig.dim();
    let mut m = ComplexMatrix::zeros(n, rank);
    for j in 0..rank {
        let s = eig.eigenvalues[j].max(0.0).sqrt();
        m.set_column(j, &(eig.eigenvectors.column(j) * C64::new(s, 0.0)));
    }
    StateFactor::new(m)
}

/// Reconstruction error for every candidate rank `1..=p`, `p` being the number
/// of positive eigenvalues.
pub fn rank_profile(a: &ComplexMatrix, metric: RankMetric) -> Result<Vec<f64>> {
    let eig = herm_eig(a)?;
    check_psd(&eig)?;
    Ok(residuals(a, &eig, metric).collect())
}

fn residuals<'a>(a: &ComplexMatrix, eig: &'a HermEig, metric: RankMetric) -> impl Iterator<Item = f64> + 'a {
    let positive = eig.eigenvalues.iter().take_while(|&&l| l > 0.0).count();
    let mut residual = hermitize(a);
    (0..positive).map(move |j| {
        let u = eig.eigenvectors.column(j);
        let outer = u * u.adjoint();
        residual -= outer * C64::new(eig.eigenvalues[j], 0.0);
        metric.measure(&residual)
    })
}

/// Practical-rank factor: the smallest `r` whose reconstruction error is
/// `≤ nu` under `metric`. Falls back to all positive eigenvalues when no
/// prefix meets `nu`.
pub fn low_rank_factor(a: &ComplexMatrix, nu: f64, metric: RankMetric) -> Result<StateFactor> {
    let eig = herm_eig(a)?;
    check_psd(&eig)?;
    let positive = eig.eigenvalues.iter().take_while(|&&l| l > 0.0).count();
    let rank = residuals(a, &eig, metric)
        .position(|err| err <= nu)
        .map_or(positive, |i| i + 1);
    Ok(factor_from_eig(&eig, rank))
}

/// Factor keeping exactly the `rank` largest eigenvalues.
pub fn factor_with_rank(a: &ComplexMatrix, rank: usize) -> Result<StateFactor> {
    let eig = herm_eig(a)?;
    check_psd(&eig)?;
    if rank > eig.dim() {
        return Err(Error::DimensionMismatch {
            expected: eig.dim(),
            got: rank,
        });
    }
    Ok(factor_from_eig(&eig, rank))
}
