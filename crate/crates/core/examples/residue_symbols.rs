// Quadratic residue symbols and character sums over irreducible families.
//
// cargo run --example residue_symbols

use ffq::poly::{enumerate_monic, irreducibles};
use ffq::quadchar::{char_sum_irreducibles, square_case_count, symbol_euler, symbol_fast};
use ffq::{FieldSpec, Poly, Result};

pub fn run_example() -> Result<()> {
    let f3 = FieldSpec::new(3)?;
    let t = Poly::t(f3);

    for m in ["1,0,1", "2,1,1"] {
        let p = Poly::parse(f3, m)?;
        println!("(t / {p}) = {}", symbol_euler(&t, &p)?.as_i8());
    }

    // reciprocity agrees with the Euler criterion
    let mut checked = 0;
    for dp in 1..=4 {
        for p in irreducibles(f3, dp) {
            for df in 0..=4 {
                for f in enumerate_monic(f3, df) {
                    assert_eq!(symbol_fast(&f, &p)?, symbol_euler(&f, &p)?);
                    checked += 1;
                }
            }
        }
    }
    println!("{checked} symbol pairs agree");

    println!("sums of chi_P(t) over P of degree n:");
    for n in 1..=6 {
        let s = char_sum_irreducibles(&t, n)?;
        println!("  n = {n}: {}", s.sum);
    }

    let l = Poly::parse(f3, "1,1")?;
    let square = l.checked_mul(&l)?;
    for n in 1..=4 {
        let s = char_sum_irreducibles(&square, n)?;
        assert!(s.is_square_case);
        assert_eq!(s.sum, square_case_count(&l, n)?);
        println!("square argument ({square}), n = {n}: {}", s.sum);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
