// Building a resonator: the prime window, its groups and caps, the weights,
// the capped support set, and the strength A_N.
//
// cargo run --example resonator

use ffq::resonator::{
    a_n_divisor_sum, a_n_product, build_groups, PsiTable, ResonatorParams, ResonatorSet,
    ResonatorSpec, DEFAULT_MEMBER_BUDGET,
};
use ffq::{FieldSpec, Poly, Result};

pub fn run_example() -> Result<()> {
    let f3 = FieldSpec::new(3)?;
    let params = ResonatorParams::default();
    let groups = build_groups(&params, f3)?;
    let table = PsiTable::new(&groups);
    let set = ResonatorSet::enumerate(&groups, &table, DEFAULT_MEMBER_BUDGET)?;
    for g in groups.groups() {
        println!("group {}: degrees {:?}, {} primes, cap {}", g.k, g.degrees, g.members.len(), g.cap);
    }
    println!("set size {}", set.size());
    println!("A_N: product {:.12}, divisor sum {:.12}", a_n_product(&table), a_n_divisor_sum(&table)?);

    let p = Poly::parse(f3, "1,2,0,1,0,1,0,1,1")?;
    println!("R(chi_P) for P = {p}: {:.12}", set.value(&set.window_characters(&p)));

    let spec = ResonatorSpec::from_groups(&groups);
    assert!(spec.digest_is_valid());
    println!("spec digest {}", spec.digest);

    // asymptotic mode derives everything from N
    let asym = ResonatorParams::asymptotic(1e40, 0.5, 1.5)?;
    let g2 = build_groups(&asym, f3)?;
    println!(
        "N = 1e40: window {:?}, group sizes {:?}, caps {:?}",
        g2.window_degrees(),
        g2.group_sizes(),
        g2.caps()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run_example()
}
