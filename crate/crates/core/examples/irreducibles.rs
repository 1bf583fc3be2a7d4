// Monic irreducibles: enumeration, counting, and the on-disk table.
//
// cargo run --example irreducibles

use ffq::io::IrreducibleTable;
use ffq::poly::{count_irreducibles, irreducibles, is_irreducible};
use ffq::{FieldSpec, Poly, Result};

pub fn run_example() -> Result<()> {
    for q in [3u64, 5] {
        let field = FieldSpec::new(q)?;
        println!("q = {q}");
        println!("  n  |P_n|   q^n/n      error / (q^(n/2)/n)");
        for n in 1..=8 {
            let count = count_irreducibles(field, n);
            let main = (q as f64).powi(n as i32) / n as f64;
            let scale = (q as f64).powf(n as f64 / 2.0) / n as f64;
            println!("  {n:<2} {count:<7} {main:<10.1} {:+.3}", (count as f64 - main) / scale);
        }
    }

    let f3 = FieldSpec::new(3)?;
    let quadratics = irreducibles(f3, 2);
    println!("monic irreducible quadratics over F_3:");
    for p in &quadratics {
        println!("  {p}   [{}]", p.to_coeff_string());
    }
    assert_eq!(quadratics.len(), 3);
    assert!(!is_irreducible(&Poly::parse(f3, "2,0,1")?)?);

    let dir = std::env::temp_dir().join("ffq-example-irreducibles");
    std::fs::create_dir_all(&dir).map_err(|e| ffq::Error::Io { path: dir.clone(), source: e })?;
    let path = dir.join(IrreducibleTable::file_name(3, 4));
    let table = IrreducibleTable { field: f3, degree: 4, polys: irreducibles(f3, 4) };
    table.write(&path)?;
    assert_eq!(IrreducibleTable::read(&path)?, table);
    println!("wrote {} quartics to {}", table.polys.len(), path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
