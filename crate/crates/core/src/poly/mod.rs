//! Dense polynomials over a prime field F_q.
//!
//! Coefficients are stored lowest degree first and kept trimmed, so the zero
//! polynomial is the empty vector and every other polynomial has a nonzero
//! leading coefficient.

mod enumerate;
mod factor;
mod irreducible;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use enumerate::{enumerate_monic, monic_count, MonicRange};
pub use factor::{factor, factor_shape, squarefree_decomposition, FactorShape};
pub use irreducible::{
    count_irreducibles, enumerate_irreducibles, irreducible_factor_count_of_degree,
    irreducibles, irreducibles_by_test, is_irreducible, sieve_irreducibles, IrreducibleIter,
    MonicSieve,
};

use crate::error::{Error, Result};
use crate::field::FieldSpec;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from residues, lowest degree first. Values are
    /// reduced mod q and trailing zeros dropped.
    pub fn new(field: FieldSpec, mut coeffs: Vec<u32>) -> Self {
        let q = field.q();
        for c in coeffs.iter_mut() {
            *c %= q;
        }
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        Poly::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub(crate) fn from_trimmed(field: FieldSpec, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.last() != Some(&0));
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly::constant(field, 1)
    }

    pub fn constant(field: FieldSpec, c: u32) -> Self {
        Poly::new(field, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(field: FieldSpec) -> Self {
        Poly::monomial(field, 1, 1)
    }

    pub fn monomial(field: FieldSpec, c: u32, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = c;
        Poly::new(field, coeffs)
    }

    /// Parses the comma-separated coefficient syntax, lowest degree first
    /// (`"1,2,0,1"` is `t^3 + 2t + 1`). Negative entries are reduced mod q.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Poly::zero(field));
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_i64(field, &coeffs))
    }

    /// Inverse of [`Poly::parse`].
    pub fn to_coeff_string(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient, 0 for the zero polynomial.
    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// `|f| = q^deg f`, and `|0| = 0`.
    pub fn norm(&self) -> u128 {
        match self.degree() {
            None => 0,
            Some(d) => self.field.pow_q(d),
        }
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(Poly::from_trimmed(self.field, add(self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(Poly::from_trimmed(self.field, sub(self.field, &self.coeffs, &other.coeffs)))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        Ok(Poly::from_trimmed(self.field, mul(self.field, &self.coeffs, &other.coeffs)))
    }

    /// Euclidean division: `(quotient, remainder)` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (quot, rem) = divrem(self.field, &self.coeffs, &divisor.coeffs);
        Ok((
            Poly::from_trimmed(self.field, quot),
            Poly::from_trimmed(self.field, rem),
        ))
    }

    pub fn rem(&self, modulus: &Poly) -> Result<Poly> {
        self.check_field(modulus)?;
        if modulus.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = self.coeffs.clone();
        rem_in_place(self.field, &mut r, &modulus.coeffs);
        Ok(Poly::from_trimmed(self.field, r))
    }

    /// Exact quotient; panics when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (quot, rem) = self.divrem(divisor).expect("exact_div");
        assert!(rem.is_zero(), "{divisor} does not divide {self}");
        quot
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => self.scale(self.field.inv(lc)),
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, (i as u64 % f.q() as u64) as u32))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.checked_mul(other)?.rem(modulus)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn powmod(&self, e: u128, m: &Poly) -> Result<Poly> {
        self.check_field(m)?;
        match m.degree() {
            None => return Err(Error::DivisionByZero),
            Some(0) => return Err(Error::ConstantModulus),
            _ => {}
        }
        Ok(Poly::from_trimmed(
            self.field,
            powmod(self.field, &self.coeffs, e, &m.coeffs),
        ))
    }

    /// Position of a monic polynomial inside the enumeration of its degree.
    pub fn monic_index(&self) -> Option<u64> {
        if !self.is_monic() {
            return None;
        }
        Some(monic_index(self.field.q(), &self.coeffs))
    }
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::GcdOfZeros);
    }
    Ok(Poly::from_trimmed(a.field, gcd_raw(a.field, &a.coeffs, &b.coeffs)))
}

/// Order: by degree, then lexicographically on the coefficient tuple read
/// lowest degree first. This is the enumeration order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .cmp(&other.field)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[q={}]({})", self.field.q(), self)
    }
}

// Operator sugar; mismatched fields are a programming error here.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_trimmed(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

// ---------------------------------------------------------------------------
// Raw coefficient-slice kernels. Inputs are trimmed, outputs are trimmed.
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn add(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out.push(f.sub(x, y));
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let q = f.q() as u64;
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + x as u64 * y as u64) % q;
        }
    }
    let mut out: Vec<u32> = acc.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

/// Reduces `r` modulo the nonzero `m` in place.
pub(crate) fn rem_in_place(f: FieldSpec, r: &mut Vec<u32>, m: &[u32]) {
    let dm = m.len() - 1;
    let lc_inv = f.inv(m[dm]);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lc_inv);
        if c != 0 {
            let shift = top - dm;
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = f.sub(r[shift + k], f.mul(c, mk));
            }
        }
        r.pop();
        trim(r);
    }
}

pub(crate) fn divrem(f: FieldSpec, a: &[u32], m: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let dm = m.len() - 1;
    if a.len() <= dm {
        return (Vec::new(), a.to_vec());
    }
    let lc_inv = f.inv(m[dm]);
    let mut r = a.to_vec();
    let mut quot = vec![0u32; a.len() - dm];
    while r.len() > dm {
        let top = r.len() - 1;
        let c = f.mul(r[top], lc_inv);
        let shift = top - dm;
        quot[shift] = c;
        if c != 0 {
            for (k, &mk) in m.iter().enumerate() {
                r[shift + k] = f.sub(r[shift + k], f.mul(c, mk));
            }
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut quot);
    (quot, r)
}

pub(crate) fn mulmod(f: FieldSpec, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let mut p = mul(f, a, b);
    rem_in_place(f, &mut p, m);
    p
}

pub(crate) fn powmod(f: FieldSpec, a: &[u32], mut e: u128, m: &[u32]) -> Vec<u32> {
    let mut base = a.to_vec();
    rem_in_place(f, &mut base, m);
    let mut acc = vec![1u32];
    rem_in_place(f, &mut acc, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, m);
        }
    }
    acc
}

pub(crate) fn make_monic(f: FieldSpec, a: &mut [u32]) {
    if let Some(&lc) = a.last() {
        if lc != 1 {
            let inv = f.inv(lc);
            for c in a.iter_mut() {
                *c = f.mul(*c, inv);
            }
        }
    }
}

pub(crate) fn gcd_raw(f: FieldSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        rem_in_place(f, &mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    make_monic(f, &mut x);
    x
}

/// Index of a monic polynomial among the monics of its degree: the tuple
/// `(a_0, ..., a_{n-1})` read as a base-q number with `a_0` most significant.
pub(crate) fn monic_index(q: u32, coeffs: &[u32]) -> u64 {
    let n = coeffs.len() - 1;
    coeffs[..n]
        .iter()
        .fold(0u64, |acc, &c| acc * q as u64 + c as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    fn p(c: &[i64]) -> Poly {
        Poly::from_i64(f3(), c)
    }

    #[test]
    fn product_of_linears() {
        // (t+1)(t+2) = t^2 + 3t + 2 = t^2 + 2 over F_3
        assert_eq!(&p(&[1, 1]) * &p(&[2, 1]), p(&[2, 0, 1]));
    }

    #[test]
    fn divrem_cube_by_quadratic() {
        let (quot, rem) = p(&[0, 0, 0, 1]).divrem(&p(&[1, 0, 1])).unwrap();
        assert_eq!(quot, p(&[0, 1]));
        assert_eq!(rem, p(&[0, 2]));
    }

    #[test]
    fn additive_identity() {
        let f = p(&[2, 1, 0, 1]);
        assert_eq!(&f + &Poly::zero(f3()), f);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            p(&[1, 1]).divrem(&Poly::zero(f3())),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mismatched_fields_are_an_error() {
        let g = Poly::t(FieldSpec::new(5).unwrap());
        assert!(matches!(
            p(&[1, 1]).checked_add(&g),
            Err(Error::FieldMismatch { left: 3, right: 5 })
        ));
    }

    #[test]
    fn gcd_examples() {
        // gcd(t^2 - 1, t - 1) = t + 2 over F_3
        assert_eq!(gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[2, 1]));
        assert!(gcd(&p(&[1, 2, 0, 1]), &Poly::one(f3())).unwrap().is_one());
        assert!(gcd(&p(&[1, 0, 1]), &p(&[2, 1, 1])).unwrap().is_one());
        assert!(matches!(
            gcd(&Poly::zero(f3()), &Poly::zero(f3())),
            Err(Error::GcdOfZeros)
        ));
        // gcd with zero is the monic associate
        assert_eq!(gcd(&p(&[2, 2]), &Poly::zero(f3())).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn powmod_examples() {
        let m = p(&[1, 0, 1]);
        let t = Poly::t(f3());
        assert!(t.powmod(4, &m).unwrap().is_one());
        // oracle: repeated multiplication
        let mut acc = Poly::one(f3());
        for _ in 0..4 {
            acc = acc.mulmod(&t, &m).unwrap();
        }
        assert!(acc.is_one());
        let f = p(&[2, 1, 1, 1]);
        assert!(f.powmod(0, &m).unwrap().is_one());
        assert_eq!(f.powmod(1, &m).unwrap(), f.rem(&m).unwrap());
        assert!(matches!(f.powmod(3, &p(&[2])), Err(Error::ConstantModulus)));
        assert!(matches!(
            f.powmod(3, &Poly::zero(f3())),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn norm_and_degree() {
        assert_eq!(Poly::zero(f3()).norm(), 0);
        assert_eq!(Poly::zero(f3()).degree(), None);
        assert_eq!(p(&[1, 0, 1]).norm(), 9);
        assert_eq!(Poly::one(f3()).norm(), 1);
    }

    #[test]
    fn parse_and_display() {
        let f = Poly::parse(f3(), "1,2,0,1").unwrap();
        assert_eq!(f, p(&[1, 2, 0, 1]));
        assert_eq!(f.to_string(), "t^3 + 2t + 1");
        assert_eq!(f.to_coeff_string(), "1,2,0,1");
        assert_eq!(Poly::parse(f3(), "-1, 1").unwrap(), p(&[2, 1]));
        assert!(Poly::parse(f3(), "1,x").is_err());
    }

    #[test]
    fn derivative_vanishes_on_pth_powers() {
        // t^3 + 1 over F_3
        assert!(p(&[1, 0, 0, 1]).derivative().is_zero());
        assert_eq!(p(&[1, 1, 1]).derivative(), p(&[1, 2]));
    }
}
