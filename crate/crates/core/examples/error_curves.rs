//! Error-probability curves `Pe(Ns)` for several noise levels, as CSV on
//! stdout. Set `QSRM_THREADS` to limit the worker count.
//!
//! ```text
//! cargo run --release --example error_curves -- [psk|qam] > curves.csv
//! ```

use qsrm::sweep::{run, write_csv, SweepSpec};
use qsrm::Modulation;

fn main() -> qsrm::Result<()> {
    let modulation = match std::env::args().nth(1).as_deref() {
        Some("qam") => Modulation::Qam { side: 4 },
        _ => Modulation::Psk { order: 4 },
    };
    let ns: Vec<f64> = (1..=16).map(|k| 0.5 * k as f64).collect();
    let spec = SweepSpec::new(modulation, ns, vec![0.0, 0.05, 0.1, 0.2]);
    let rows = run(&spec)?;
    write_csv(&rows, std::io::stdout().lock())?;

    for noise in &spec.noise_list {
        let series: Vec<f64> = rows.iter().filter(|r| r.noise == *noise).map(|r| r.pe_srm).collect();
        let monotone = series.windows(2).all(|w| w[1] <= w[0]);
        eprintln!("N = {noise}: {} points, non-increasing: {monotone}", series.len());
    }
    Ok(())
}
