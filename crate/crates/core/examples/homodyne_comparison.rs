//! Quantum detection against classical homodyne detection, and the photon
//! saving of the quantum receiver for binary PSK at `Pe = 1e-2`.
//!
//! ```text
//! cargo run --release --example homodyne_comparison
//! ```

use qsrm::baseline::{helstrom_pure_pe, homodyne_pe, required_photons};
use qsrm::{evaluate, Modulation, PointConfig};

fn main() -> qsrm::Result<()> {
    let bpsk = Modulation::Psk { order: 2 };
    let quantum = |ns: f64| helstrom_pure_pe((-4.0 * ns).exp(), 0.5, 0.5).unwrap();
    let classical = |ns: f64| homodyne_pe(bpsk, ns, 0.0).unwrap();
    let nq = required_photons(quantum, 1e-2, 1e-3, 20.0, 1e-6)?;
    let nh = required_photons(classical, 1e-2, 1e-3, 20.0, 1e-6)?;
    println!("BPSK at Pe = 1e-2, N = 0:");
    println!("  quantum  Ns = {nq:.5}");
    println!("  homodyne Ns = {nh:.5}");
    println!("  ratio {:.4} ({:.2} dB)", nq / nh, 10.0 * (nh / nq).log10());

    for modulation in [
        Modulation::Psk { order: 4 },
        Modulation::Psk { order: 8 },
        Modulation::Qam { side: 4 },
    ] {
        println!("\n{modulation}, N = 0.1");
        println!("   Ns    Pe SRM        Pe homodyne");
        for ns in [1.0, 2.0, 4.0, 8.0] {
            let srm = evaluate(&PointConfig::new(modulation, ns, 0.1))?;
            let hom = homodyne_pe(modulation, ns, 0.1)?;
            println!("  {ns:<4}  {:<12.6e}  {hom:.6e}", srm.pe);
        }
    }
    Ok(())
}
