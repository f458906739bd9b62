//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsrm::baseline::{homodyne_pe, required_photons};
use qsrm::constellation::{psk, Constellation};
use qsrm::glauber::{choose_truncation, photon_distribution, thermal_density, thermal_density_unchecked};
use qsrm::gus::{gus_blocks, gus_transition};
use qsrm::hermitian::herm_eig;
use qsrm::srm::{gram_matrix, sqrt_gram, transition_from_sqrt, transition_matrix};
use qsrm::system::{binary_helstrom, shared_truncation, state_factors, RankRule, DEFAULT_NU};
use qsrm::worked::{psk4_worked_matrices, qam16_at_delta};
use qsrm::{
    evaluate, CoherentAmplitude, ComplexMatrix, Modulation, PointConfig, RankMetric, Result, Route, StateFactor,
    StateMatrix, ThermalNoise, C64,
};

const SEED: u64 = 0x5EED_0005;
const DRAWS: usize = 50;

type Draw = (Constellation, ThermalNoise, usize);
type Check = fn() -> Result<Verdict>;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn table_dev<const C: usize>(computed: &ComplexMatrix, printed: &[[f64; C]]) -> f64 {
    assert_eq!((computed.nrows(), computed.ncols()), (printed.len(), C));
    let mut dev: f64 = 0.0;
    for (i, row) in printed.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            dev = dev.max((computed[(i, j)] - C64::new(x, 0.0)).norm());
        }
    }
    dev
}

// ---------------------------------------------------------------- 1

fn worked_psk4() -> Result<Verdict> {
    let start = Instant::now();
    let r = evaluate(&PointConfig::psk(4, 1.0, 0.1).with_dim(8))?;
    let secs = start.elapsed().as_secs_f64();
    let h = r.meta.ranks[0];
    let dev = [(1, 0.08622), (2, 0.02034), (3, 0.08622)]
        .iter()
        .map(|&(j, e)| (r.p(j, 0) - e).abs())
        .fold((r.pc - 0.80703).abs(), f64::max);
    Ok(Verdict::new(
        h == 5 && dev <= 1e-4 && secs < 1.0,
        format!(
            "h = {h}, Pc = {:.6}, p(1|0) = {:.6}, p(2|0) = {:.6}, max dev {dev:.2e}, {secs:.3} s",
            r.pc,
            r.p(1, 0),
            r.p(2, 0)
        ),
    ))
}

// ---------------------------------------------------------------- 2

fn worked_qam16() -> Result<Verdict> {
    const DIAG: [(usize, f64); 3] = [(5, 0.875749), (1, 0.916501), (0, 0.947767)];
    let start = Instant::now();
    let r = evaluate(&PointConfig::qam(4, 4.0, 0.1).with_dim(40))?;
    let secs = start.elapsed().as_secs_f64();
    let dev = DIAG
        .iter()
        .map(|&(i, e)| (r.p(i, i) - e).abs())
        .fold((r.pe - 0.08587).abs(), f64::max);
    let alt = qam16_at_delta(1.0, 0.1)?;
    let alt_dev = DIAG
        .iter()
        .map(|&(i, e)| (alt.p(i, i) - e).abs())
        .fold((alt.pe - 0.08587).abs(), f64::max);
    Ok(Verdict::new(
        dev <= 2e-4 && secs < 30.0,
        format!(
            "Ns = 4: p(i|i) = {:.6}/{:.6}/{:.6}, Pe = {:.6}, max dev {dev:.2e}, {secs:.2} s \
             [info: Ns = 10 gives Pe = {:.6}, max dev {alt_dev:.2e}]",
            r.p(5, 5),
            r.p(1, 1),
            r.p(0, 0),
            r.pe,
            alt.pe
        ),
    ))
}

// ---------------------------------------------------------------- 3

fn density_spectrum() -> Result<Verdict> {
    const PRINTED: [f64; 3] = [0.150285, 0.00231095, 3.53779e-5];
    let noise = ThermalNoise::new(0.1)?;
    let rel = |eig: &[f64]| {
        PRINTED
            .iter()
            .zip(eig)
            .map(|(e, x)| ((x - e) / e).abs())
            .fold(0.0, f64::max)
    };
    let rho = thermal_density(CoherentAmplitude::real(5f64.sqrt()), noise, 20)?;
    let eig = herm_eig(rho.matrix())?.eigenvalues;
    let rank = rho.factor(1e-5, RankMetric::Frobenius)?.rank();
    let dev = rel(&eig);
    let big = thermal_density_unchecked(CoherentAmplitude::real(5.0), noise, 20);
    let big_eig = herm_eig(big.matrix())?.eigenvalues;
    let big_rank = big.factor(1e-5, RankMetric::Frobenius)?.rank();
    Ok(Verdict::new(
        dev <= 1e-6 && rank == 3,
        format!(
            "eigenvalues {:.6e} {:.6e} {:.6e}, rank {rank}, max rel dev {dev:.2e} \
             [info: gamma = 5 gives max rel dev {:.2e}, rank {big_rank}]",
            eig[0],
            eig[1],
            eig[2],
            rel(&big_eig)
        ),
    ))
}

// ---------------------------------------------------------------- 4

fn truncation_goldens() -> Result<Verdict> {
    let noise = ThermalNoise::new(0.1)?;
    let cases = [(5.0, 1e-5, 20), (7.2, 1e-7, 40), (1.0, 1e-5, 8)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (mean, eps, expected) in cases {
        let n = choose_truncation(CoherentAmplitude::real(f64::sqrt(mean)), noise, eps)?;
        pass &= n == expected;
        parts.push(format!("N_gamma {mean} eps {eps:e}: {n} (expected {expected})"));
    }
    Ok(Verdict::new(pass, parts.join(", ")))
}

// ---------------------------------------------------------------- 5

/// Pure-state m-PSK error probability from the eigenvalues of the circulant
/// Gram matrix, built directly from coherent-state inner products.
fn pure_psk_oracle(m: usize, ns: f64) -> f64 {
    let gamma = |k: usize| C64::from_polar(ns.sqrt(), 2.0 * PI * k as f64 / m as f64);
    let first_row: Vec<C64> = (0..m)
        .map(|s| {
            let (a, b) = (gamma(0), gamma(s));
            (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
        })
        .collect();
    let root_sum: f64 = (0..m)
        .map(|k| {
            let lambda: C64 = first_row
                .iter()
                .enumerate()
                .map(|(s, g)| g * C64::from_polar(1.0, 2.0 * PI * (k * s) as f64 / m as f64))
                .sum();
            lambda.re.max(0.0).sqrt()
        })
        .sum();
    1.0 - (root_sum / m as f64).powi(2)
}

fn noiseless_reduction() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut at = (0, 0.0);
    for m in [2, 4, 8] {
        for ns in [0.5, 1.0, 2.0, 4.0] {
            let r = evaluate(&PointConfig::psk(m, ns, 0.0).with_epsilon(1e-12))?;
            let dev = (r.pe - pure_psk_oracle(m, ns)).abs();
            if dev > worst {
                worst = dev;
                at = (m, ns);
            }
        }
    }
    Ok(Verdict::new(
        worst <= 1e-8,
        format!(
            "12 points, eps 1e-12, max |Pe - closed form| {worst:.2e} (m = {}, Ns = {})",
            at.0, at.1
        ),
    ))
}

// ---------------------------------------------------------------- 6

const RHO0: [[f64; 8]; 8] = [
    [0.366, 0.333, 0.214, 0.112, 0.051, 0.021, 0.008, 0.003],
    [0.333, 0.336, 0.237, 0.136, 0.067, 0.029, 0.012, 0.004],
    [0.214, 0.237, 0.183, 0.114, 0.060, 0.028, 0.012, 0.005],
    [0.112, 0.136, 0.114, 0.076, 0.044, 0.022, 0.010, 0.004],
    [0.051, 0.067, 0.060, 0.044, 0.027, 0.014, 0.007, 0.003],
    [0.021, 0.029, 0.028, 0.022, 0.014, 0.008, 0.004, 0.002],
    [0.008, 0.012, 0.012, 0.010, 0.007, 0.004, 0.002, 0.001],
    [0.003, 0.004, 0.005, 0.004, 0.003, 0.002, 0.001, 0.001],
];

const D0: [[f64; 5]; 5] = [
    [0.348, -0.088, 0.026, 0.004, 0.000],
    [-0.088, 0.042, -0.002, -0.001, 0.000],
    [0.026, -0.002, 0.003, 0.000, 0.000],
    [0.004, -0.001, 0.000, 0.000, 0.000],
    [0.000, 0.000, 0.000, 0.000, 0.000],
];

const D0_SQRT: [[f64; 5]; 5] = [
    [0.576, -0.121, 0.048, 0.006, 0.000],
    [-0.121, 0.164, 0.020, -0.002, -0.003],
    [0.048, 0.020, 0.010, 0.000, -0.001],
    [0.006, -0.002, 0.000, 0.000, 0.000],
    [0.000, -0.003, -0.001, 0.000, 0.000],
];

fn worked_matrices() -> Result<Verdict> {
    let w = psk4_worked_matrices()?;
    let devs = [
        table_dev(&w.rho0, &RHO0),
        table_dev(&w.d0, &D0),
        table_dev(&w.d0_sqrt, &D0_SQRT),
    ];
    Ok(Verdict::new(
        devs.iter().all(|&d| d <= 5e-4),
        format!(
            "max entry dev rho0 {:.2e}, D0 {:.2e}, D0^(1/2) {:.2e}",
            devs[0], devs[1], devs[2]
        ),
    ))
}

// ---------------------------------------------------------------- 7

fn random_amplitude(rng: &mut ChaCha8Rng) -> CoherentAmplitude {
    let r = 3.0 * rng.random::<f64>().sqrt();
    CoherentAmplitude::from_polar(r, 2.0 * PI * rng.random::<f64>())
}

fn random_constellation(rng: &mut ChaCha8Rng) -> Result<Constellation> {
    let m = rng.random_range(2..=6);
    let amplitudes: Vec<_> = (0..m).map(|_| random_amplitude(rng)).collect();
    let weights: Vec<f64> = (0..m).map(|_| 0.2 + rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let mut priors: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let head: f64 = priors[..m - 1].iter().sum();
    priors[m - 1] = 1.0 - head;
    Constellation::new(amplitudes, priors, "random")
}

/// Draws `(constellation, noise, n)` until `DRAWS` of them need at most 40
/// Fock states at accuracy `eps`. Returns the draws and the number rejected.
fn accepted_draws(rng: &mut ChaCha8Rng, eps: f64) -> Result<(Vec<Draw>, usize)> {
    let mut out = Vec::new();
    let mut rejected = 0;
    while out.len() < DRAWS {
        let c = random_constellation(rng)?;
        let noise = ThermalNoise::new(2.0 * rng.random::<f64>())?;
        match shared_truncation(&c, noise, eps) {
            Ok(n) if n <= 40 => out.push((c, noise, n)),
            _ => rejected += 1,
        }
    }
    Ok((out, rejected))
}

fn random_unitary(rng: &mut ChaCha8Rng, r: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(r, r, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    a.qr().q()
}

fn rotated(factor: &StateFactor, m: usize, k: usize) -> StateFactor {
    let s = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_fn(factor.dim(), |j, _| {
        C64::from_polar(1.0, 2.0 * PI * (j * k % m) as f64 / m as f64)
    }));
    StateFactor::new(s * factor.matrix())
}

fn properties() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let accuracy = RankRule::Accuracy {
        nu: DEFAULT_NU,
        metric: RankMetric::Frobenius,
    };

    // row sums at tight truncation and rank accuracy
    let (draws, rejected) = accepted_draws(&mut rng, 1e-9)?;
    let mut row_dev: f64 = 0.0;
    for (c, noise, n) in &draws {
        let rule = RankRule::Accuracy {
            nu: 1e-9,
            metric: RankMetric::Frobenius,
        };
        let states = StateMatrix::new(state_factors(c, *noise, *n, rule)?)?;
        let r = transition_matrix(&states, c.priors(), Route::Auto)?;
        row_dev = r.row_sums().iter().fold(row_dev, |m, s| m.max((s - 1.0).abs()));
    }

    // T route against G route, and gauge invariance
    let (draws, _) = accepted_draws(&mut rng, 1e-7)?;
    let mut route_dev: f64 = 0.0;
    let mut gauge_dev: f64 = 0.0;
    for (c, noise, n) in &draws {
        let factors = state_factors(c, *noise, *n, accuracy)?;
        let states = StateMatrix::new(factors.clone())?;
        let via_t = transition_matrix(&states, c.priors(), Route::ViaT)?;
        let via_g = transition_matrix(&states, c.priors(), Route::ViaG)?;
        route_dev = route_dev.max(max_diff(&via_t.transition, &via_g.transition));
        let plain = transition_matrix(&states, c.priors(), Route::Auto)?;
        let turned: Vec<StateFactor> = factors
            .iter()
            .map(|f| f.gauge(&random_unitary(&mut rng, f.rank())))
            .collect::<Result<_>>()?;
        let turned = transition_matrix(&StateMatrix::new(turned)?, c.priors(), Route::Auto)?;
        gauge_dev = gauge_dev.max(max_diff(&turned.transition, &plain.transition));
    }

    // rotation-generated constellations: block-circulant Gram matrix, its
    // block DFT against the circulant blocks, circulant transitions, and the
    // general pipeline against the circulant pipeline
    let mut circ_dev: f64 = 0.0;
    let mut root_circ_dev: f64 = 0.0;
    let mut psk_dev: f64 = 0.0;
    for _ in 0..DRAWS {
        let m = rng.random_range(2..=8);
        let radius = 3.0 * rng.random::<f64>().sqrt().max(0.1);
        let ns = radius * radius;
        let noise = 2.0 * rng.random::<f64>();
        let base = psk(m, ns)?;
        let noise_model = ThermalNoise::new(noise)?;
        let n = choose_truncation(base.amplitudes()[0], noise_model, 1e-7)?.min(40);

        let f0 = thermal_density_unchecked(base.amplitudes()[0], noise_model, n)
            .factor(DEFAULT_NU, RankMetric::Frobenius)?;
        let h = f0.rank();
        let states = StateMatrix::new((0..m).map(|k| rotated(&f0, m, k)).collect())?;
        let g = gram_matrix(&states);
        let block = |r: usize, s: usize| g.view((r * h, s * h), (h, h)).into_owned();
        for r in 0..m {
            for s in 0..m {
                circ_dev = circ_dev.max(qsrm::max_abs(&(block(r, s) - block(0, (s + m - r) % m))));
            }
        }
        let spectrum = gus_blocks(&f0, m)?;
        for (k, d) in spectrum.blocks().iter().enumerate() {
            let dft = (0..m).fold(ComplexMatrix::zeros(h, h), |acc, s| {
                acc + block(0, s) * C64::from_polar(1.0, -2.0 * PI * (k * s) as f64 / m as f64)
            });
            circ_dev = circ_dev.max(qsrm::max_abs(&(d - dft)));
        }
        let t = gus_transition(&spectrum)?.transition;
        for i in 0..m {
            for j in 0..m {
                circ_dev = circ_dev.max((t[i][j] - t[0][(j + m - i) % m]).abs());
            }
        }
        let general = transition_from_sqrt(&sqrt_gram(&states, Route::ViaG)?, states.offsets());
        for i in 0..m {
            for j in 0..m {
                root_circ_dev = root_circ_dev.max((general[i][j] - general[0][(j + m - i) % m]).abs());
            }
        }

        let cfg = PointConfig::psk(m, ns, noise).with_dim(n);
        let gus = evaluate(&cfg)?;
        let full = evaluate(&cfg.general(Route::Auto))?;
        psk_dev = psk_dev.max(max_diff(&gus.transition, &full.transition));
    }

    let pass = row_dev <= 1e-6 && route_dev <= 1e-7 && gauge_dev <= 1e-8 && circ_dev <= 1e-9 && psk_dev <= 1e-7;
    Ok(Verdict::new(
        pass,
        format!(
            "{DRAWS} draws each: row sums {row_dev:.1e} ({rejected} draws over n = 40 rejected), \
             T vs G {route_dev:.1e}, gauge {gauge_dev:.1e}, circulant structure {circ_dev:.1e} [info: general-route transitions circulant to {root_circ_dev:.1e}], \
             PSK general vs circulant {psk_dev:.1e}"
        ),
    ))
}

// ---------------------------------------------------------------- 8

fn binary_optimality() -> Result<Verdict> {
    let mut pure_dev: f64 = 0.0;
    for ns in [0.25, 0.5, 1.0, 2.0] {
        let r = evaluate(&PointConfig::psk(2, ns, 0.0).with_epsilon(1e-12))?;
        let helstrom = binary_helstrom(&psk(2, ns)?, ThermalNoise::noiseless(), r.meta.n)?;
        let closed = 0.5 * (1.0 - (1.0 - (-4.0 * ns).exp()).sqrt());
        pure_dev = pure_dev.max((r.pe - helstrom).abs()).max((r.pe - closed).abs());
    }
    let mut min_gap = f64::INFINITY;
    let mut min_ratio = f64::INFINITY;
    for noise in [0.05, 0.1, 0.2] {
        for ns in [0.5, 1.0, 2.0] {
            let r = evaluate(&PointConfig::psk(2, ns, noise).with_epsilon(1e-10))?;
            let helstrom = binary_helstrom(&psk(2, ns)?, ThermalNoise::new(noise)?, r.meta.n)?;
            min_gap = min_gap.min(r.pe - helstrom);
            min_ratio = min_ratio.min(r.pe / helstrom);
        }
    }
    Ok(Verdict::new(
        pure_dev <= 1e-9 && min_gap > 0.0,
        format!("pure |SRM - Helstrom| {pure_dev:.1e}; mixed min gap {min_gap:.3e}, min ratio {min_ratio:.3}"),
    ))
}

// ---------------------------------------------------------------- 9

fn three_db() -> Result<Verdict> {
    let quantum = |ns: f64| {
        evaluate(&PointConfig::psk(2, ns, 0.0).with_epsilon(1e-12))
            .map(|r| r.pe)
            .unwrap_or(f64::NAN)
    };
    let classical = |ns: f64| homodyne_pe(Modulation::Psk { order: 2 }, ns, 0.0).unwrap_or(f64::NAN);
    let q = required_photons(quantum, 1e-2, 0.01, 10.0, 1e-4)?;
    let c = required_photons(classical, 1e-2, 0.01, 10.0, 1e-4)?;
    let ratio = q / c;
    Ok(Verdict::new(
        (0.4..=0.6).contains(&ratio),
        format!("Ns quantum {q:.4}, homodyne {c:.4}, ratio {ratio:.4}"),
    ))
}

// ---------------------------------------------------------------- 10

fn photon_moments() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for mean in [0.25, 1.0, 2.5, 5.0, 7.2] {
        for thermal in [0.0, 0.05, 0.1, 0.5, 1.0] {
            let gamma = CoherentAmplitude::real(f64::sqrt(mean));
            let noise = ThermalNoise::new(thermal)?;
            let n = choose_truncation(gamma, noise, 1e-10)?;
            let p = photon_distribution(gamma, noise, n);
            let m1: f64 = p.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
            let m2: f64 = p.iter().enumerate().map(|(k, x)| (k * k) as f64 * x).sum();
            let var = m2 - m1 * m1;
            let want_var = mean + 2.0 * mean * thermal + thermal * (thermal + 1.0);
            worst = worst.max((m1 - (mean + thermal)).abs()).max((var - want_var).abs());
        }
    }
    Ok(Verdict::new(
        worst <= 1e-6,
        format!("25 points, eps 1e-10, max moment dev {worst:.2e}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("4-PSK worked point", worked_psk4),
        ("16-QAM worked point", worked_qam16),
        ("density matrix spectrum and rank", density_spectrum),
        ("truncation goldens", truncation_goldens),
        ("noiseless PSK reduction", noiseless_reduction),
        ("printed 4-PSK matrices", worked_matrices),
        ("randomized invariants", properties),
        ("binary optimality", binary_optimality),
        ("quantum vs homodyne BPSK photon ratio", three_db),
        ("photon number moments", photon_moments),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        failed += usize::from(!v.pass);
        println!(
            "{} criterion {:>2} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
