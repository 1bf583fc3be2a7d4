// The approximate functional equation as an exact identity and as the fast
// evaluation path for L(1/2, chi_P).
//
// cargo run --example approximate_functional_equation

use ffq::lseries::{compute_coefficients, eval_half_exact, AfeEvaluator};
use ffq::poly::irreducibles;
use ffq::{FieldSpec, Result};

pub fn run_example() -> Result<()> {
    let f3 = FieldSpec::new(3)?;
    for n in 1..=7 {
        let family = irreducibles(f3, n);
        let afe = AfeEvaluator::new(f3, (n - 1) / 2);
        for p in &family {
            assert_eq!(afe.eval(p)?, eval_half_exact(&compute_coefficients(p)?));
        }
        println!("degree {n}: AFE equals the full L-polynomial on all {} moduli", family.len());
    }

    // the fast path only needs monic f of degree <= g
    let g = 5;
    let family = irreducibles(f3, 2 * g + 1);
    let afe = AfeEvaluator::new(f3, g);
    let sample = &family[..family.len().min(64)];
    let values: Vec<f64> = sample.iter().map(|p| afe.eval(p).map(|v| v.to_f64())).collect::<Result<_>>()?;
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("g = {g}: largest L(1/2) among the first {} moduli is {best:.6}", sample.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
