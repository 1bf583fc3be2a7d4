// Arithmetic in F_q[t]: parsing, products, division, gcd and factoring.
//
// cargo run --example polynomial_arithmetic

use ffq::poly::{factor, factor_shape, gcd};
use ffq::{FieldSpec, Poly, Result};

pub fn run_example() -> Result<()> {
    let f3 = FieldSpec::new(3)?;
    // coefficients are listed low degree first: "1,2,0,1" is t^3 + 2t + 1
    let a = Poly::parse(f3, "1,2,0,1")?;
    let b = Poly::parse(f3, "2,1")?;
    let prod = a.checked_mul(&b)?;
    let (quot, rem) = prod.divrem(&b)?;
    println!("a = {a}, b = {b}");
    println!("a * b = {prod}");
    println!("(a * b) / b = {quot} remainder {rem}");
    assert_eq!(quot, a);
    assert!(rem.is_zero());

    let c = Poly::parse(f3, "1,0,1")?;
    let g = gcd(&a.checked_mul(&c)?, &b.checked_mul(&c)?)?;
    println!("gcd(a c, b c) = {g}");
    assert_eq!(g, c);

    let messy = a.pow(2).checked_mul(&b)?.checked_mul(&c)?;
    println!("{messy} factors as:");
    for (p, e) in factor(&messy)? {
        println!("  ({p})^{e}");
    }
    let shape = factor_shape(&messy)?;
    println!("squarefree part {}, square: {}", shape.squarefree_part, shape.is_square());

    println!("norm |a| = q^deg a = {}", a.norm());
    println!("a(2) = {}", a.eval(2));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
