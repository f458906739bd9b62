//! Binary PSK: SRM against the exact Helstrom optimum. The SRM is optimal for
//! pure states and slightly worse once thermal noise mixes them.
//!
//! ```text
//! cargo run --example binary_helstrom
//! ```

use qsrm::constellation::psk;
use qsrm::system::{binary_helstrom, shared_truncation};
use qsrm::{evaluate, PointConfig, ThermalNoise};

fn main() -> qsrm::Result<()> {
    println!("   N     Ns    n   Pe SRM          Pe Helstrom     ratio");
    for noise in [0.0, 0.05, 0.1, 0.2] {
        for ns in [0.5, 1.0, 2.0] {
            let c = psk(2, ns)?;
            let thermal = ThermalNoise::new(noise)?;
            let n = shared_truncation(&c, thermal, 1e-12)?;
            let srm = evaluate(&PointConfig::psk(2, ns, noise).with_dim(n).with_nu(1e-10))?;
            let hel = binary_helstrom(&c, thermal, n)?;
            println!(
                "  {noise:<5} {ns:<4} {n:>3}   {:<15.9e} {:<15.9e} {:.6}",
                srm.pe,
                hel,
                srm.pe / hel
            );
        }
    }
    Ok(())
}
