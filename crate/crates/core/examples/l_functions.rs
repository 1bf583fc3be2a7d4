// L-polynomials of quadratic characters: coefficients, the functional
// equation, zeros on the circle, and the exact central value.
//
// cargo run --example l_functions

use ffq::lseries::{compute_coefficients, eval_half_exact, verify_functional_equation, verify_rh};
use ffq::poly::irreducibles;
use ffq::{FieldSpec, Poly, Result};

pub fn run_example() -> Result<()> {
    let f3 = FieldSpec::new(3)?;
    let p = Poly::parse(f3, "1,2,0,1")?;
    let l = compute_coefficients(&p)?;
    println!("P = {p}");
    println!("  coefficients {:?}, lambda {}, genus {}", l.coeffs, l.lambda, l.genus);
    println!("  L(1/2) = {} ~ {:.12}", eval_half_exact(&l), eval_half_exact(&l).to_f64());

    // even degree: trivial zero at u = 1
    let even = compute_coefficients(&Poly::parse(f3, "2,1,0,0,1")?)?;
    println!("even-degree modulus: L = {:?}, completed {:?}", even.coeffs, even.completed_coeffs);
    assert_eq!(even.coeffs.iter().sum::<i64>(), 0);

    for d in 5..=7 {
        let family = irreducibles(f3, d);
        let mut worst = 0.0f64;
        for p in &family {
            let l = compute_coefficients(p)?;
            assert!(verify_functional_equation(&l));
            let rh = verify_rh(&l, 1e-9)?;
            assert!(rh.ok);
            worst = worst.max(rh.max_deviation);
        }
        println!(
            "degree {d}: {} moduli, functional equation exact, zeros within {worst:.1e} of |u| = 3^(-1/2)",
            family.len()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
