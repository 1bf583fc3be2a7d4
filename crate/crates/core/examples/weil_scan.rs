// Normalized character sums over irreducibles for non-square arguments.
//
// cargo run --example weil_scan > weil.csv

use ffq::quadchar::weil_ratio_scan;
use ffq::verify::WEIL_RATIO_THRESHOLD;
use ffq::{FieldSpec, Result};

pub fn run_example() -> Result<()> {
    let scan = weil_ratio_scan(FieldSpec::new(3)?, 3, 1..=5)?;
    scan.write_csv(std::io::stdout().lock())
        .map_err(|source| ffq::Error::Csv { path: "<stdout>".into(), source })?;
    eprintln!("{} rows, max ratio {:.6}", scan.rows.len(), scan.max_ratio);
    assert!(scan.max_ratio <= WEIL_RATIO_THRESHOLD);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
