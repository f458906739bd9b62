//! The 4-PSK worked point: `ρ_0`, its factor, the circulant blocks `D_0`,
//! `D_0^{1/2}` and the transition probabilities, then the same point through
//! the general (non-circulant) SRM.
//!
//! ```text
//! cargo run --example psk4_worked
//! ```

use qsrm::srm::Route;
use qsrm::{evaluate, worked, PointConfig};

fn main() -> qsrm::Result<()> {
    let report = worked::psk4_worked()?;
    print!("{}", report.render());

    let circulant = evaluate(&PointConfig::psk(4, 1.0, 0.1).with_dim(8))?;
    for route in [Route::ViaT, Route::ViaG] {
        let general = evaluate(&PointConfig::psk(4, 1.0, 0.1).with_dim(8).general(route))?;
        println!(
            "general SRM ({route}): Pe = {:.8}, circulant Pe = {:.8}, difference {:.1e}",
            general.pe,
            circulant.pe,
            (general.pe - circulant.pe).abs()
        );
    }
    if !report.passed() {
        std::process::exit(4);
    }
    Ok(())
}
