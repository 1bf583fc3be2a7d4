// The resonated moments over the family of degree 2g+1 and the report.
//
// cargo run --release --example resonance_experiment -- 4

use ffq::experiment::{max_scan, run_experiment, ExperimentConfig};
use ffq::io::{render_report, write_report};
use ffq::{FieldSpec, Result};

pub fn run_example() -> Result<()> {
    run(3)
}

pub fn run(g: usize) -> Result<()> {
    let field = FieldSpec::new(3)?;

    let scan = max_scan(field, g);
    println!("max |L(1/2)| over {} moduli: {} at P = {}", scan.family_size, scan.max_abs_l, scan.argmax_p);

    let report = run_experiment(&ExperimentConfig::new(field, g))?;
    println!("{}", render_report(&report));
    assert!(report.ratio.0 <= scan.max_abs_l.0 * (1.0 + 1e-12));

    let out = std::env::temp_dir().join(format!("ffq-example-resonate-g{g}"));
    let paths = write_report(&report, &out)?;
    println!("report written to {}", paths.json.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    match std::env::args().nth(1) {
        Some(a) => run(a.parse().map_err(|_| ffq::Error::Parse(format!("bad genus {a:?}")))?),
        None => run_example(),
    }
}
