use super::irreducible::enumerate_irreducibles;
use super::{gcd, Poly};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// `f = unit * squarefree_part * square_root_part^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorShape {
    pub unit: u32,
    pub squarefree_part: Poly,
    pub square_root_part: Poly,
}

impl FactorShape {
    pub fn is_square(&self) -> bool {
        self.squarefree_part.is_one()
    }

    pub fn reconstruct(&self) -> Poly {
        let l = &self.square_root_part;
        (&self.squarefree_part * &(l * l)).scale(self.unit)
    }
}

/// Squarefree factorization `f = lc * prod g_i^{e_i}` with the `g_i` monic,
/// squarefree and pairwise coprime. Handles the characteristic-p case where
/// `f' = 0` by recursing on the p-th root.
pub fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    sqf_into(&f.monic(), 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    Ok(out)
}

fn sqf_into(f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) {
    let field = f.field();
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative();
    let mut c = if df.is_zero() {
        f.clone()
    } else {
        gcd(f, &df).expect("nonzero")
    };
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = gcd(&w, &c).expect("nonzero");
        let z = w.exact_div(&y);
        if !z.is_one() {
            out.push((z, i * mult));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        sqf_into(&pth_root(field, &c), mult * field.q() as usize, out);
    }
}

/// For `f` in `F_q[t^p]` over a prime field, the unique `g` with `g^p = f`.
fn pth_root(field: FieldSpec, f: &Poly) -> Poly {
    let p = field.q() as usize;
    let coeffs = f.coeffs().iter().step_by(p).copied().collect();
    Poly::new(field, coeffs)
}

/// Splits a nonzero `f` into its squarefree kernel and square part.
pub fn factor_shape(f: &Poly) -> Result<FactorShape> {
    let field = f.field();
    let parts = squarefree_decomposition(f)?;
    let mut squarefree_part = Poly::one(field);
    let mut square_root_part = Poly::one(field);
    for (g, e) in &parts {
        if e % 2 == 1 {
            squarefree_part = &squarefree_part * g;
        }
        if e / 2 > 0 {
            square_root_part = &square_root_part * &g.pow((e / 2) as u64);
        }
    }
    Ok(FactorShape {
        unit: f.leading(),
        squarefree_part,
        square_root_part,
    })
}

/// Complete factorization into monic irreducibles with multiplicities, sorted.
///
/// Squarefree split, then distinct-degree split, then equal-degree pieces are
/// broken by trial division against the irreducibles of that degree.
pub fn factor(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(f)? {
        for (d, block) in distinct_degree(&g) {
            for p in equal_degree_by_trial(&block, d) {
                out.push((p, e));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let q = field.q() as u128;
    let t = Poly::t(field);
    let mut rest = f.clone();
    let mut frob = t.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        frob = frob.powmod(q, &rest).expect("deg >= 1");
        let g = gcd(&(&frob - &t), &rest).expect("nonzero");
        if !g.is_one() {
            rest = rest.exact_div(&g);
            frob = frob.rem(&rest).unwrap_or_else(|_| Poly::zero(field));
            out.push((d, g));
        }
    }
    if let Some(deg) = rest.degree().filter(|&deg| deg > 0) {
        out.push((deg, rest));
    }
    out
}

fn equal_degree_by_trial(block: &Poly, d: usize) -> Vec<Poly> {
    let k = block.degree().unwrap_or(0) / d;
    if k <= 1 {
        return vec![block.clone()];
    }
    let mut rest = block.clone();
    let mut out = Vec::with_capacity(k);
    for p in enumerate_irreducibles(block.field(), d) {
        if rest.rem(&p).expect("nonzero").is_zero() {
            rest = rest.exact_div(&p);
            out.push(p);
            if rest.degree() == Some(0) {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_monic, is_irreducible};

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(f3(), c)
    }

    #[test]
    fn shape_examples() {
        let a = p(&[1, 0, 1]);
        let sq = factor_shape(&(&a * &a)).unwrap();
        assert!(sq.is_square());
        assert_eq!(sq.square_root_part, a);

        let s = factor_shape(&p(&[0, 1, 1])).unwrap();
        assert_eq!(s.squarefree_part, p(&[0, 1, 1]));
        assert!(s.square_root_part.is_one());

        let cube = factor_shape(&p(&[0, 0, 0, 1])).unwrap();
        assert_eq!(cube.squarefree_part, Poly::t(f3()));
        assert_eq!(cube.square_root_part, Poly::t(f3()));

        assert!(matches!(
            factor_shape(&Poly::zero(f3())),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn pth_powers_are_handled() {
        // (t + 1)^9 * (t^2 + 1)^3 over F_3 has a vanishing derivative
        let f = &p(&[1, 1]).pow(9) * &p(&[1, 0, 1]).pow(3);
        assert!(f.derivative().is_zero());
        let parts = squarefree_decomposition(&f).unwrap();
        assert_eq!(parts, vec![(p(&[1, 0, 1]), 3), (p(&[1, 1]), 9)]);
        let shape = factor_shape(&f).unwrap();
        assert_eq!(shape.reconstruct(), f);
        assert_eq!(shape.squarefree_part, &p(&[1, 1]) * &p(&[1, 0, 1]));
    }

    #[test]
    fn factor_reconstructs_every_small_monic() {
        for n in 1..=5 {
            for f in enumerate_monic(f3(), n) {
                let fac = factor(&f).unwrap();
                let mut prod = Poly::one(f3());
                for (g, e) in &fac {
                    assert!(is_irreducible(g).unwrap(), "{g}");
                    prod = &prod * &g.pow(*e as u64);
                }
                assert_eq!(prod, f);
                let shape = factor_shape(&f).unwrap();
                let expect_sqf = fac
                    .iter()
                    .filter(|(_, e)| e % 2 == 1)
                    .fold(Poly::one(f3()), |acc, (g, _)| &acc * g);
                assert_eq!(shape.squarefree_part, expect_sqf);
            }
        }
    }

    #[test]
    fn non_monic_input_keeps_its_unit() {
        let f = p(&[2, 0, 2]); // 2(t^2 + 1)
        let s = factor_shape(&f).unwrap();
        assert_eq!(s.unit, 2);
        assert_eq!(s.reconstruct(), f);
    }
}
