//! Quadratic residue symbols over F_q[t] and exact character sums over
//! families of irreducibles.
//!
//! Two independent routes compute `(f / P)`:
//!
//! * [`symbol_euler`] evaluates `f^((|P| - 1) / 2) mod P` directly;
//! * [`symbol_fast`] runs a Euclid-style loop driven by polynomial quadratic
//!   reciprocity. For coprime monic `a`, `b`,
//!   `(a/b) = (-1)^{((q-1)/2) deg a deg b} (b/a)`, and a constant `c` has
//!   `(c/b) = legendre(c)^{deg b}`.
//!
//! The Euler route is the permanent oracle for the reciprocity route.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{self, factor_shape, irreducible_factor_count_of_degree, irreducibles, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolValue {
    MinusOne,
    Zero,
    One,
}

impl SymbolValue {
    pub fn from_i8(v: i8) -> SymbolValue {
        match v {
            0 => SymbolValue::Zero,
            v if v > 0 => SymbolValue::One,
            _ => SymbolValue::MinusOne,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            SymbolValue::MinusOne => -1,
            SymbolValue::Zero => 0,
            SymbolValue::One => 1,
        }
    }
}

impl fmt::Display for SymbolValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i8())
    }
}

/// `(f / P)` by Euler's criterion. `P` must be monic irreducible.
pub fn symbol_euler(f: &Poly, p: &Poly) -> Result<SymbolValue> {
    if !poly::is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(SymbolValue::from_i8(euler_unchecked(f, p)))
}

pub(crate) fn euler_unchecked(f: &Poly, p: &Poly) -> i8 {
    let field = p.field();
    let exponent = (p.norm() - 1) / 2;
    let r = poly::powmod(field, f.rem(p).expect("nonzero").coeffs(), exponent, p.coeffs());
    match r.as_slice() {
        [] => 0,
        [1] => 1,
        [c] if *c == field.q() - 1 => -1,
        other => unreachable!("Euler criterion produced {other:?} for an irreducible modulus"),
    }
}

/// The Jacobi-style symbol `(f / m)` for monic squarefree `m` of degree >= 1,
/// computed by reciprocity.
pub fn symbol_fast(f: &Poly, m: &Poly) -> Result<SymbolValue> {
    f.checked_add(m)?;
    match m.degree() {
        Some(d) if d >= 1 && m.is_monic() => {}
        Some(0) => return Err(Error::ConstantModulus),
        _ => return Err(Error::NotMonic(m.to_string())),
    }
    let dm = m.derivative();
    if !dm.is_zero() && !poly::gcd(m, &dm)?.is_one() || dm.is_zero() {
        return Err(Error::NotSquarefree(m.to_string()));
    }
    Ok(SymbolValue::from_i8(jacobi(m.field(), f.coeffs(), m.coeffs())))
}

/// Reciprocity loop on raw coefficient slices. `m` must be monic with
/// degree >= 1; no squarefreeness requirement (the symbol is then the product
/// over prime factors with multiplicity).
pub(crate) fn jacobi(field: FieldSpec, f: &[u32], m: &[u32]) -> i8 {
    let odd_half = field.half_order_is_odd();
    let mut sign = 1i8;
    let mut a = f.to_vec();
    let mut b = m.to_vec();
    loop {
        // invariant: result = sign * (a / b), b monic, deg b >= 1
        poly::rem_in_place(field, &mut a, &b);
        if a.is_empty() {
            return 0;
        }
        let deg_b = b.len() - 1;
        let lc = *a.last().unwrap();
        if lc != 1 {
            if deg_b % 2 == 1 {
                sign *= field.legendre(lc);
            }
            poly::make_monic(field, &mut a);
        }
        let deg_a = a.len() - 1;
        if deg_a == 0 {
            return sign;
        }
        if odd_half && deg_a % 2 == 1 && deg_b % 2 == 1 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// `chi_P(f)` on the hot path. Uses reciprocity unless the `oracle-symbols`
/// feature routes it through Euler's criterion.
#[inline]
pub(crate) fn chi(field: FieldSpec, f: &[u32], p: &Poly) -> i8 {
    #[cfg(feature = "oracle-symbols")]
    {
        euler_unchecked(&Poly::new(field, f.to_vec()), p)
    }
    #[cfg(not(feature = "oracle-symbols"))]
    {
        jacobi(field, f, p.coeffs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharSumResult {
    pub f: String,
    pub n: usize,
    pub sum: i64,
    pub is_square_case: bool,
}

/// `sum_{P in P_n} chi_P(f)` over a precomputed family.
pub fn char_sum_over(f: &Poly, family: &[Poly]) -> i64 {
    let field = f.field();
    family
        .par_chunks(256)
        .map(|chunk| {
            chunk
                .iter()
                .map(|p| chi(field, f.coeffs(), p) as i64)
                .sum::<i64>()
        })
        .sum()
}

/// Exact `sum_{P in P_n} chi_P(f)` for monic `f`.
pub fn char_sum_irreducibles(f: &Poly, n: usize) -> Result<CharSumResult> {
    if !f.is_monic() {
        return Err(Error::NotMonic(f.to_string()));
    }
    let family = irreducibles(f.field(), n);
    let sum = char_sum_over(f, &family);
    Ok(CharSumResult {
        f: f.to_coeff_string(),
        n,
        sum,
        is_square_case: factor_shape(f)?.is_square(),
    })
}

/// Value the square case must take: `|P_n| - #{P in P_n : P | l}` for `f = l^2`.
pub fn square_case_count(l: &Poly, n: usize) -> Result<i64> {
    let total = poly::count_irreducibles(l.field(), n) as i64;
    Ok(total - irreducible_factor_count_of_degree(l, n)? as i64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilRow {
    pub f: String,
    pub n: usize,
    pub sum: i64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilScan {
    pub q: u32,
    pub rows: Vec<WeilRow>,
    pub max_ratio: f64,
}

/// Ratios `|sum| * n / (deg f * q^(n/2))` for every monic non-square `f` with
/// `1 <= deg f <= max_deg_f`, over the families `P_n` for each `n` in `degrees`.
pub fn weil_ratio_scan(
    field: FieldSpec,
    max_deg_f: usize,
    degrees: impl IntoIterator<Item = usize>,
) -> Result<WeilScan> {
    let mut candidates = Vec::new();
    for d in 1..=max_deg_f {
        for f in poly::enumerate_monic(field, d) {
            if !factor_shape(&f)?.is_square() {
                candidates.push(f);
            }
        }
    }
    let q = field.q() as f64;
    let mut rows = Vec::new();
    for n in degrees {
        let family = irreducibles(field, n);
        let sums: Vec<i64> = candidates
            .par_iter()
            .map(|f| {
                family
                    .iter()
                    .map(|p| chi(field, f.coeffs(), p) as i64)
                    .sum()
            })
            .collect();
        for (f, sum) in candidates.iter().zip(sums) {
            let d = f.degree().unwrap() as f64;
            rows.push(WeilRow {
                f: f.to_coeff_string(),
                n,
                sum,
                ratio: sum.unsigned_abs() as f64 * n as f64 / (d * q.powf(n as f64 / 2.0)),
            });
        }
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(WeilScan {
        q: field.q(),
        rows,
        max_ratio,
    })
}

impl WeilScan {
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["f", "n", "sum", "ratio"])?;
        for r in &self.rows {
            w.write_record([
                r.f.clone(),
                r.n.to_string(),
                r.sum.to_string(),
                format!("{:.17e}", r.ratio),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::enumerate_monic;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn p3(c: &[i64]) -> Poly {
        Poly::from_i64(f(3), c)
    }

    /// Residue test by listing every square in F_q[t]/P.
    fn by_squares(a: &Poly, p: &Poly) -> i8 {
        let a = a.rem(p).unwrap();
        if a.is_zero() {
            return 0;
        }
        let d = p.degree().unwrap();
        let field = p.field();
        for deg in 0..d {
            for mut x in enumerate_monic(field, deg) {
                for c in 1..field.q() {
                    x = x.scale(c);
                    if x.mulmod(&x, p).unwrap() == a {
                        return 1;
                    }
                    x = x.monic();
                }
            }
        }
        -1
    }

    #[test]
    fn euler_examples() {
        let p = p3(&[1, 0, 1]);
        let t = Poly::t(f(3));
        assert_eq!(symbol_euler(&t, &p).unwrap(), SymbolValue::One);
        assert_eq!(by_squares(&t, &p), 1);
        let p2 = p3(&[2, 1, 1]);
        assert_eq!(symbol_euler(&t, &p2).unwrap(), SymbolValue::MinusOne);
        assert_eq!(by_squares(&t, &p2), -1);
        assert_eq!(symbol_euler(&(&t * &p), &p).unwrap(), SymbolValue::Zero);
        assert!(matches!(
            symbol_euler(&t, &p3(&[2, 0, 1])),
            Err(Error::NotIrreducible(_))
        ));
    }

    #[test]
    fn euler_agrees_with_square_listing() {
        let field = f(3);
        for n in 1..=3 {
            for p in irreducibles(field, n) {
                for d in 0..=3 {
                    for a in enumerate_monic(field, d) {
                        assert_eq!(euler_unchecked(&a, &p), by_squares(&a, &p), "{a} / {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn fast_symbol_special_values() {
        let field = f(5);
        let m = Poly::from_i64(field, &[1, 2, 0, 1]); // squarefree cubic
        assert_eq!(symbol_fast(&Poly::one(field), &m).unwrap(), SymbolValue::One);
        let g = Poly::from_i64(field, &[3, 1, 1]);
        let g2 = &g * &g;
        assert!(poly::gcd(&g, &m).unwrap().is_one());
        assert_eq!(symbol_fast(&g2, &m).unwrap(), SymbolValue::One);
        assert!(matches!(
            symbol_fast(&g, &Poly::constant(field, 1)),
            Err(Error::ConstantModulus)
        ));
        assert!(matches!(symbol_fast(&g, &g2), Err(Error::NotSquarefree(_))));
    }

    #[test]
    fn fast_symbol_multiplies_over_prime_factors() {
        let field = f(3);
        let a = p3(&[1, 0, 1]);
        let b = p3(&[1, 2, 0, 1]);
        let m = &a * &b;
        for d in 0..=4 {
            for x in enumerate_monic(field, d) {
                let expect = euler_unchecked(&x, &a) * euler_unchecked(&x, &b);
                assert_eq!(symbol_fast(&x, &m).unwrap().as_i8(), expect, "{x}");
            }
        }
    }

    #[test]
    fn non_monic_arguments() {
        for q in [3, 5, 7] {
            let field = f(q);
            for p in irreducibles(field, 2).into_iter().chain(irreducibles(field, 3)) {
                for x in enumerate_monic(field, 2) {
                    for c in 1..field.q() {
                        let y = x.scale(c);
                        assert_eq!(
                            jacobi(field, y.coeffs(), p.coeffs()),
                            euler_unchecked(&y, &p),
                            "{y} / {p}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        let field = f(3);
        let t = Poly::t(field);
        let r = char_sum_irreducibles(&(&t * &t), 2).unwrap();
        assert_eq!(r.sum, 3);
        assert!(r.is_square_case);
        assert_eq!(square_case_count(&t, 2).unwrap(), 3);
        for n in 1..=5 {
            assert_eq!(
                char_sum_irreducibles(&Poly::one(field), n).unwrap().sum as u128,
                poly::count_irreducibles(field, n)
            );
        }
        // direct summation: +1 - 1 - 1 over t^2+1, t^2+t+2, t^2+2t+2
        let direct: Vec<i8> = irreducibles(field, 2)
            .iter()
            .map(|p| euler_unchecked(&t, p))
            .collect();
        assert_eq!(direct, vec![1, -1, -1]);
        let r = char_sum_irreducibles(&t, 2).unwrap();
        assert_eq!(r.sum, -1);
        assert!(!r.is_square_case);
        assert!(char_sum_irreducibles(&p3(&[1, 2]), 2).is_err());
    }

    #[test]
    fn weil_scan_example_row() {
        let scan = weil_ratio_scan(f(3), 1, [2]).unwrap();
        let row = scan.rows.iter().find(|r| r.f == "0,1").unwrap();
        assert_eq!(row.sum, -1);
        assert!((row.ratio - 2.0 / 3.0).abs() < 1e-15);
        // squares are excluded
        let scan = weil_ratio_scan(f(3), 2, [2]).unwrap();
        assert!(scan.rows.iter().all(|r| r.f != "0,0,1" && r.f != "1,2,1"));
    }
}
