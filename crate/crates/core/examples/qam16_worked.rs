//! The 16-QAM worked point through the general SRM (`T^{-1/2}` route).
//!
//! ```text
//! cargo run --release --example qam16_worked
//! ```

use qsrm::worked;

fn main() -> qsrm::Result<()> {
    let report = worked::qam16_worked()?;
    print!("{}", report.render());

    let r = worked::qam16_at_delta(1.0, 0.1)?;
    println!("\ntransition matrix at delta = 1 (rows: sent symbol, lexicographic order):");
    for row in &r.transition {
        let cells: Vec<String> = row.iter().map(|p| format!("{p:.4}")).collect();
        println!("  {}", cells.join(" "));
    }
    if !report.passed() {
        std::process::exit(4);
    }
    Ok(())
}
