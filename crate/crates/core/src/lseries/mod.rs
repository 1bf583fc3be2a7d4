//! L-polynomials of quadratic characters `chi_P`.
//!
//! For monic irreducible `P` of degree `d`, `L(u, chi_P) = sum_f chi_P(f) u^deg f`
//! is a polynomial of degree `< d`. With `lambda = 1` iff `d` is even and
//! `2g = d - 1 - lambda`, `L(u) = (1 - u)^lambda L*(u)` where `L*` has degree
//! `2g` and satisfies `c*_{2g-i} = q^{g-i} c*_i`.

mod roots;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use roots::{find_roots, RhCheck};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{self, MonicSieve, Poly};
use crate::qsqrt::QSqrtValue;
use crate::quadchar;

/// Largest residue table `compute_coefficients` will allocate.
pub const RESIDUE_TABLE_LIMIT: u128 = 1 << 28;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LSeries {
    pub modulus: String,
    pub q: u32,
    /// `c_0 .. c_{d-1}`
    pub coeffs: Vec<i64>,
    pub lambda: u8,
    pub genus: usize,
    /// `c*_0 .. c*_{2g}`
    pub completed_coeffs: Vec<i64>,
}

/// `(lambda, g)` for a modulus of degree `d >= 1`.
pub fn lambda_and_genus(d: usize) -> (u8, usize) {
    assert!(d >= 1);
    let lambda = d.is_multiple_of(2) as u8;
    (lambda, (d - 1 - lambda as usize) / 2)
}

impl LSeries {
    /// Builds the series from raw `c_n`, dividing out the trivial zero when
    /// `deg P` is even. Fails if `(1 - u)` does not divide.
    pub fn from_coefficients(modulus: &Poly, coeffs: Vec<i64>) -> Result<LSeries> {
        let d = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::NotMonic(modulus.to_string()))?;
        let (lambda, genus) = lambda_and_genus(d);
        if coeffs.len() != d {
            return Err(Error::InconsistentLSeries(format!(
                "expected {d} coefficients, got {}",
                coeffs.len()
            )));
        }
        let completed = if lambda == 1 {
            // L* = L / (1 - u): prefix sums, with L(1) = 0 as the remainder check
            let mut acc = 0i64;
            let prefix: Vec<i64> = coeffs
                .iter()
                .map(|c| {
                    acc += c;
                    acc
                })
                .collect();
            if acc != 0 {
                return Err(Error::InconsistentLSeries(format!(
                    "L(1) = {acc} but deg P is even"
                )));
            }
            prefix[..=2 * genus].to_vec()
        } else {
            coeffs.clone()
        };
        Ok(LSeries {
            modulus: modulus.to_coeff_string(),
            q: modulus.field().q(),
            coeffs,
            lambda,
            genus,
            completed_coeffs: completed,
        })
    }

    pub fn degree_of_modulus(&self) -> usize {
        self.coeffs.len()
    }

    /// `L(u)` in floating point by Horner's rule.
    pub fn eval_f64(&self, u: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c as f64)
    }

    /// `L*(u)` expanded back through `(1 - u)^lambda`.
    pub fn reconstruct(&self) -> Vec<i64> {
        if self.lambda == 0 {
            return self.completed_coeffs.clone();
        }
        let mut out = vec![0i64; self.completed_coeffs.len() + 1];
        for (i, &c) in self.completed_coeffs.iter().enumerate() {
            out[i] += c;
            out[i + 1] -= c;
        }
        out
    }
}

/// `c_n = sum_{f in M_n} chi_P(f)` for `0 <= n < deg P`, by tabulating the
/// squares of `F_q[t]/P`. This route does not use reciprocity.
pub fn compute_coefficients(p: &Poly) -> Result<LSeries> {
    if !poly::is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let field = p.field();
    let d = p.degree().unwrap();
    let size = field.pow_q(d);
    if size > RESIDUE_TABLE_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "residue table",
            needed: size,
            budget: RESIDUE_TABLE_LIMIT,
        });
    }
    let is_square = residue_squares(field, p, size as usize);
    let q = field.q() as usize;
    let mut coeffs = Vec::with_capacity(d);
    let mut block = 1usize; // q^n
    for _ in 0..d {
        // monic f of degree n has residue index low + q^n, low < q^n
        let c: i64 = (0..block)
            .map(|low| if is_square[low + block] { 1 } else { -1 })
            .sum();
        coeffs.push(c);
        block *= q;
    }
    LSeries::from_coefficients(p, coeffs)
}

/// Marks every nonzero square of `F_q[t]/P`, residues indexed little-endian
/// base q.
fn residue_squares(field: FieldSpec, p: &Poly, size: usize) -> Vec<bool> {
    let q = field.q() as usize;
    let d = p.degree().unwrap();
    let mut marks = vec![false; size];
    let mut x = vec![0u32; d];
    for _ in 1..size {
        // increment x as a base-q counter
        let mut k = 0;
        loop {
            x[k] += 1;
            if x[k] as usize == q {
                x[k] = 0;
                k += 1;
            } else {
                break;
            }
        }
        let mut xs = x.clone();
        poly::trim(&mut xs);
        let sq = poly::mulmod(field, &xs, &xs, p.coeffs());
        let target = sq.iter().rev().fold(0usize, |acc, &c| acc * q + c as usize);
        marks[target] = true;
    }
    marks
}

/// `sum_i c_i q^(-i/2)` as an exact element of Q(sqrt q).
pub fn eval_u_powers(q: u32, coeffs: &[i64]) -> QSqrtValue {
    let qb = BigInt::from(q);
    let mut x = BigRational::zero();
    let mut y = BigRational::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let term = BigRational::new(c.into(), qb.pow((i / 2) as u32));
        if i % 2 == 0 {
            x += term;
        } else {
            y += term;
        }
    }
    QSqrtValue::new(q, x, y)
}

/// `L(1/2, chi_P) = sum_i c_i q^(-i/2)`, exactly.
pub fn eval_half_exact(l: &LSeries) -> QSqrtValue {
    eval_u_powers(l.q, &l.coeffs)
}

/// `c*_{2g-i} = q^{g-i} c*_i` for every `i`, compared exactly.
pub fn verify_functional_equation(l: &LSeries) -> bool {
    let c = &l.completed_coeffs;
    let g = l.genus;
    if c.len() != 2 * g + 1 {
        return false;
    }
    let q = l.q as i128;
    (0..=2 * g).all(|i| {
        let lhs = c[2 * g - i] as i128;
        let rhs = c[i] as i128;
        // q^{g-i} may be a negative power: compare c_{2g-i} q^{i} = c_i q^{g}
        lhs * q.pow(i as u32) == rhs * q.pow(g as u32)
    })
}

/// Checks that every root of `L*` lies within `tol` of `|u| = q^(-1/2)`.
pub fn verify_rh(l: &LSeries, tol: f64) -> Result<RhCheck> {
    roots::check_rh(l.q, &l.completed_coeffs, tol)
}

/// Evaluates `L(1/2, chi_P)` through the approximate functional equation,
/// touching only `M_{<= g}`.
///
/// Holds a factor sieve over `M_{<= g}` so character tables for many moduli
/// can be built from prime values alone.
#[derive(Clone, Debug)]
pub struct AfeEvaluator {
    sieve: MonicSieve,
}

impl AfeEvaluator {
    /// Supports every modulus of degree `<= 2 * max_genus + 2`.
    pub fn new(field: FieldSpec, max_genus: usize) -> AfeEvaluator {
        AfeEvaluator {
            sieve: MonicSieve::new(field, max_genus),
        }
    }

    pub fn sieve(&self) -> &MonicSieve {
        &self.sieve
    }

    /// `chi_P(f)` for every monic `f` of degree `<= g` (sieve order).
    pub fn character_table(&self, p: &Poly) -> Vec<i8> {
        let field = self.sieve.field();
        let prime_values: Vec<i8> = self
            .sieve
            .primes()
            .iter()
            .map(|r| quadchar::chi(field, r.coeffs(), p))
            .collect();
        self.sieve.tabulate(&prime_values, 1i8, |a, b| a * b)
    }

    /// `A_i = sum_{f in M_i} chi_P(f)` for `0 <= i <= g`.
    pub fn degree_sums(&self, p: &Poly, g: usize) -> Vec<i64> {
        self.sums_from_table(&self.character_table(p), g)
    }

    /// Degree sums from a table produced by `character_table`.
    pub fn sums_from_table(&self, table: &[i8], g: usize) -> Vec<i64> {
        assert!(g <= self.sieve.max_degree(), "sieve too small for genus {g}");
        (0..=g)
            .map(|i| {
                table[self.sieve.degree_range(i)]
                    .iter()
                    .map(|&v| v as i64)
                    .sum()
            })
            .collect()
    }

    pub fn eval(&self, p: &Poly) -> Result<QSqrtValue> {
        let d = p
            .degree()
            .filter(|&d| d >= 1 && p.is_monic())
            .ok_or_else(|| Error::NotMonic(p.to_string()))?;
        let (lambda, g) = lambda_and_genus(d);
        let sums = self.degree_sums(p, g);
        Ok(afe_from_degree_sums(p.field().q(), &sums, lambda))
    }
}

/// Combines the four AFE terms from the degree sums `A_0..A_g`:
///
/// `sum_{i<=g} A_i r^i + sum_{i<=g-1} A_i r^i
///   - lambda r^{g+1} sum_{i<=g} A_i - lambda r^g sum_{i<=g-1} A_i`, `r = q^(-1/2)`.
pub fn afe_from_degree_sums(q: u32, sums: &[i64], lambda: u8) -> QSqrtValue {
    let g = sums.len() - 1;
    let mut weights = vec![0i64; g + 2];
    for (i, &a) in sums.iter().enumerate() {
        weights[i] += a;
        if i < g {
            weights[i] += a;
        }
    }
    if lambda == 1 {
        let total_g: i64 = sums.iter().sum();
        let total_g1: i64 = sums[..g].iter().sum();
        weights[g + 1] -= total_g;
        weights[g] -= total_g1;
    }
    eval_u_powers(q, &weights)
}

/// One-shot AFE evaluation; builds a sieve for this modulus only.
pub fn eval_half_afe(p: &Poly) -> Result<QSqrtValue> {
    if !poly::is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    let (_, g) = lambda_and_genus(p.degree().unwrap());
    AfeEvaluator::new(p.field(), g).eval(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_monic, irreducibles};
    use crate::quadchar::euler_unchecked;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    fn qs(x: i64, y: i64) -> QSqrtValue {
        QSqrtValue::new(
            3,
            BigRational::from_integer(x.into()),
            BigRational::from_integer(y.into()),
        )
    }

    /// Coefficients straight from the definition, Euler criterion per term.
    fn coefficients_by_definition(p: &Poly) -> Vec<i64> {
        let d = p.degree().unwrap();
        (0..d)
            .map(|n| {
                enumerate_monic(p.field(), n)
                    .map(|f| euler_unchecked(&f, p) as i64)
                    .sum()
            })
            .collect()
    }

    #[test]
    fn linear_modulus_has_trivial_series() {
        for q in [3, 5, 7] {
            let field = FieldSpec::new(q).unwrap();
            let l = compute_coefficients(&Poly::t(field)).unwrap();
            assert_eq!(l.coeffs, vec![1]);
            assert_eq!((l.lambda, l.genus), (0, 0));
            assert_eq!(eval_half_exact(&l), QSqrtValue::one(q as u32));
            assert!(verify_functional_equation(&l));
        }
    }

    #[test]
    fn quadratic_moduli_have_trivial_zero() {
        for p in irreducibles(f3(), 2) {
            let l = compute_coefficients(&p).unwrap();
            assert_eq!(l.coeffs, vec![1, -1]);
            assert_eq!((l.lambda, l.genus), (1, 0));
            assert_eq!(l.completed_coeffs, vec![1]);
            let v = eval_half_exact(&l);
            assert_eq!(v, qs(1, -1));
            assert_eq!(eval_half_afe(&p).unwrap(), v);
        }
    }

    #[test]
    fn cubic_example() {
        let p = Poly::from_i64(f3(), &[1, 2, 0, 1]);
        let l = compute_coefficients(&p).unwrap();
        assert_eq!(l.coeffs, coefficients_by_definition(&p));
        assert_eq!(l.coeffs[2], 3);
        let c1: i64 = (0..3)
            .map(|a| euler_unchecked(&Poly::from_i64(f3(), &[a, 1]), &p) as i64)
            .sum();
        assert_eq!(l.coeffs[1], c1);
        let v = eval_half_exact(&l);
        assert_eq!(v, qs(2, c1));
        assert_eq!(eval_half_afe(&p).unwrap(), v);
    }

    #[test]
    fn residue_table_matches_definition() {
        for q in [3, 5] {
            let field = FieldSpec::new(q).unwrap();
            for n in 1..=4 {
                for p in irreducibles(field, n).into_iter().take(6) {
                    assert_eq!(
                        compute_coefficients(&p).unwrap().coeffs,
                        coefficients_by_definition(&p),
                        "{p}"
                    );
                }
            }
        }
    }

    #[test]
    fn functional_equation_rejects_corruption() {
        let p = Poly::from_i64(f3(), &[1, 2, 0, 1]);
        let mut l = compute_coefficients(&p).unwrap();
        assert!(verify_functional_equation(&l));
        l.completed_coeffs[2] += 1;
        assert!(!verify_functional_equation(&l));
    }

    #[test]
    fn reconstruction_and_float_eval() {
        for n in 1..=6 {
            for p in irreducibles(f3(), n).into_iter().take(10) {
                let l = compute_coefficients(&p).unwrap();
                assert_eq!(l.reconstruct(), l.coeffs);
                let exact = eval_half_exact(&l).to_f64();
                let float = l.eval_f64(3f64.sqrt().recip());
                assert!((exact - float).abs() <= 1e-10 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn afe_fe_and_rh_hold_for_every_small_modulus() {
        let evaluator = AfeEvaluator::new(f3(), 3);
        for n in 1..=7 {
            for p in irreducibles(f3(), n) {
                let l = compute_coefficients(&p).unwrap();
                assert!(verify_functional_equation(&l), "{p}");
                assert_eq!(evaluator.eval(&p).unwrap(), eval_half_exact(&l), "{p}");
                let rh = verify_rh(&l, 1e-9).unwrap();
                assert!(rh.ok, "{p}: {rh:?}");
                assert_eq!(rh.moduli.len(), 2 * l.genus);
            }
        }
    }

    #[test]
    fn corrupted_series_fails_rh() {
        let p = Poly::from_i64(f3(), &[1, 2, 0, 1]);
        let l = compute_coefficients(&p).unwrap();
        let mut coeffs = l.coeffs.clone();
        coeffs[1] += 10;
        let bad = LSeries::from_coefficients(&p, coeffs).unwrap();
        assert!(!verify_rh(&bad, 1e-9).unwrap().ok);
    }

    #[test]
    fn odd_trivial_zero_is_rejected() {
        let p = Poly::from_i64(f3(), &[1, 0, 1]);
        assert!(matches!(
            LSeries::from_coefficients(&p, vec![1, 0]),
            Err(Error::InconsistentLSeries(_))
        ));
    }
}
