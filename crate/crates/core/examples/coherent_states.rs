//! Glauber states with and without thermal noise in the photon-number basis.
//!
//! ```text
//! cargo run --example coherent_states -- [amplitude] [noise]
//! ```

use qsrm::glauber::{choose_truncation, photon_distribution, thermal_density};
use qsrm::{CoherentAmplitude, RankMetric, ThermalNoise};

fn main() -> qsrm::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let amp = args.next().transpose().ok().flatten().unwrap_or(5f64.sqrt());
    let noise = args.next().transpose().ok().flatten().unwrap_or(0.1);

    let gamma = CoherentAmplitude::real(amp);
    let noise = ThermalNoise::new(noise)?;
    println!(
        "gamma = {amp}, N_gamma = {:.4}, N = {}",
        gamma.photon_mean(),
        noise.mean_photons()
    );

    for eps in [1e-3, 1e-5, 1e-7, 1e-10] {
        println!(
            "  truncation for eps = {eps:e}: n = {}",
            choose_truncation(gamma, noise, eps)?
        );
    }

    let n = choose_truncation(gamma, noise, 1e-12)?;
    let p = photon_distribution(gamma, noise, n);
    let mean: f64 = p.iter().enumerate().map(|(m, q)| m as f64 * q).sum();
    let var: f64 = p.iter().enumerate().map(|(m, q)| (m as f64 - mean).powi(2) * q).sum();
    let (ng, nn) = (gamma.photon_mean(), noise.mean_photons());
    println!("photon counts over n = {n}:");
    println!("  mean     {mean:.8}  (N_gamma + N = {:.8})", ng + nn);
    println!(
        "  variance {var:.8}  (N_gamma + 2 N_gamma N + N(N+1) = {:.8})",
        ng + 2.0 * ng * nn + nn * (nn + 1.0)
    );

    let n = choose_truncation(gamma, noise, 1e-5)?;
    let rho = thermal_density(gamma, noise, n)?;
    println!("rho: {n} x {n}, trace {:.7}", rho.trace());
    for nu in [1e-3, 1e-5, 1e-7] {
        let f = rho.factor(nu, RankMetric::Frobenius)?;
        println!("  practical rank at nu = {nu:e}: {}", f.rank());
    }
    Ok(())
}
