//! Practical rank of a thermal density matrix: eigenvalues and the
//! reconstruction error of every truncated factor.
//!
//! ```text
//! cargo run --example rank_demo
//! ```

use qsrm::glauber::{thermal_density_unchecked, CoherentAmplitude};
use qsrm::hermitian::rank_profile;
use qsrm::{worked, RankMetric, ThermalNoise};

fn main() -> qsrm::Result<()> {
    let report = worked::rank_demo()?;
    print!("{}", report.render());

    let noise = ThermalNoise::new(0.1)?;
    for amp in [5f64.sqrt(), 5.0] {
        let rho = thermal_density_unchecked(CoherentAmplitude::real(amp), noise, 20);
        println!("\nreconstruction error of rank-r factors, gamma = {amp:.4}:");
        println!("   r   frobenius        max              mse");
        let fro = rank_profile(rho.matrix(), RankMetric::Frobenius)?;
        let max = rank_profile(rho.matrix(), RankMetric::MaxAbs)?;
        let mse = rank_profile(rho.matrix(), RankMetric::MeanSquare)?;
        for r in 0..8.min(fro.len()) {
            println!("  {:>2}   {:<16.6e} {:<16.6e} {:.6e}", r + 1, fro[r], max[r], mse[r]);
        }
    }
    Ok(())
}
