//! Exact arithmetic in Q(sqrt q), written as `x + y * q^(-1/2)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `rational_part + sqrt_part * q^(-1/2)` with exact rational parts.
///
/// The representation is unique because `q^(-1/2)` is irrational for prime q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrtValue {
    q: u32,
    rational_part: BigRational,
    sqrt_part: BigRational,
}

impl QSqrtValue {
    pub fn new(q: u32, rational_part: BigRational, sqrt_part: BigRational) -> Self {
        QSqrtValue {
            q,
            rational_part,
            sqrt_part,
        }
    }

    pub fn zero(q: u32) -> Self {
        QSqrtValue::from_integer(q, 0)
    }

    pub fn one(q: u32) -> Self {
        QSqrtValue::from_integer(q, 1)
    }

    pub fn from_integer(q: u32, n: i64) -> Self {
        QSqrtValue::from_rational(q, BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: u32, x: BigRational) -> Self {
        QSqrtValue::new(q, x, BigRational::zero())
    }

    /// Exact image of a finite float (every f64 is a dyadic rational).
    pub fn from_f64(q: u32, v: f64) -> Self {
        QSqrtValue::from_rational(q, rational_from_f64(v))
    }

    /// `q^(-k/2) = |f|^(-1/2)` for `deg f = k`.
    pub fn inv_sqrt_norm(q: u32, k: usize) -> Self {
        let denom = BigInt::from(q).pow((k / 2) as u32);
        let unit = BigRational::new(BigInt::one(), denom);
        if k.is_multiple_of(2) {
            QSqrtValue::new(q, unit, BigRational::zero())
        } else {
            QSqrtValue::new(q, BigRational::zero(), unit)
        }
    }

    /// `q^(k/2) = |f|^(1/2)` for `deg f = k`.
    pub fn sqrt_norm(q: u32, k: usize) -> Self {
        let qb = BigInt::from(q);
        if k.is_multiple_of(2) {
            QSqrtValue::from_rational(q, BigRational::from_integer(qb.pow((k / 2) as u32)))
        } else {
            // q^(k/2) = q^((k+1)/2) * q^(-1/2)
            QSqrtValue::new(
                q,
                BigRational::zero(),
                BigRational::from_integer(qb.pow(k.div_ceil(2) as u32)),
            )
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational_part
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.sqrt_part
    }

    pub fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.sqrt_part.is_zero()
    }

    /// -1, 0 or +1, decided exactly.
    pub fn signum(&self) -> i8 {
        let sx = sign(&self.rational_part);
        let sy = sign(&self.sqrt_part);
        if sx == 0 || sx == sy {
            return sy;
        }
        if sy == 0 {
            return sx;
        }
        // opposite signs: compare x^2 with y^2 / q
        let x2 = &self.rational_part * &self.rational_part;
        let y2q = &self.sqrt_part * &self.sqrt_part / BigRational::from_integer(self.q.into());
        match x2.cmp(&y2q) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => unreachable!("sqrt(q) is irrational"),
        }
    }

    pub fn abs(&self) -> QSqrtValue {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, c: &BigRational) -> QSqrtValue {
        QSqrtValue::new(self.q, &self.rational_part * c, &self.sqrt_part * c)
    }

    /// Nearest-double evaluation. Opposite-sign parts are combined through
    /// the conjugate so cancellation does not cost precision.
    pub fn to_f64(&self) -> f64 {
        let x = &self.rational_part;
        let y = &self.sqrt_part;
        let r = (self.q as f64).sqrt().recip();
        if sign(x) * sign(y) >= 0 {
            return to_f64(x) + to_f64(y) * r;
        }
        // x + y r = (x^2 - y^2/q) / (x - y r)
        let num = x * x - y * y / BigRational::from_integer(self.q.into());
        to_f64(&num) / (to_f64(x) - to_f64(y) * r)
    }

    fn check(&self, other: &QSqrtValue) {
        assert_eq!(self.q, other.q, "mixing Q(sqrt {}) with Q(sqrt {})", self.q, other.q);
    }

    /// Serialized as `"x y"` with each part a `num/den` string.
    pub fn to_fraction_strings(&self) -> (String, String) {
        (fraction_string(&self.rational_part), fraction_string(&self.sqrt_part))
    }

    pub fn from_fraction_strings(q: u32, x: &str, y: &str) -> Result<Self> {
        Ok(QSqrtValue::new(q, parse_fraction(x)?, parse_fraction(y)?))
    }
}

fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Running sum of terms `r * q^(-k/2)`, kept as two rational parts.
#[derive(Clone, Debug)]
pub struct InvSqrtSum {
    q: u32,
    powers: Vec<BigInt>,
    even: BigRational,
    odd: BigRational,
}

impl InvSqrtSum {
    pub fn new(q: u32) -> Self {
        InvSqrtSum {
            q,
            powers: vec![BigInt::one()],
            even: BigRational::zero(),
            odd: BigRational::zero(),
        }
    }

    fn power(&mut self, e: usize) -> &BigInt {
        while self.powers.len() <= e {
            let next = self.powers.last().unwrap() * self.q;
            self.powers.push(next);
        }
        &self.powers[e]
    }

    /// Adds `r * q^(-k/2)`.
    pub fn add(&mut self, r: &BigRational, k: usize) {
        if r.is_zero() {
            return;
        }
        let d = self.power(k / 2).clone();
        let term = r / BigRational::from_integer(d);
        if k.is_multiple_of(2) {
            self.even += term;
        } else {
            self.odd += term;
        }
    }

    pub fn add_value(&mut self, v: &QSqrtValue) {
        self.even += &v.rational_part;
        self.odd += &v.sqrt_part;
    }

    pub fn value(&self) -> QSqrtValue {
        QSqrtValue::new(self.q, self.even.clone(), self.odd.clone())
    }
}

pub(crate) fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn rational_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(|| panic!("non-finite weight {v}"))
}

/// Always `num/den`, also for integers.
pub fn fraction_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |e: &dyn fmt::Display| Error::Parse(format!("bad fraction {s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(&e))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(&e))?;
            if d.is_zero() {
                return Err(bad(&"zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|e| bad(&e))?)),
    }
}

impl fmt::Display for QSqrtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + ({})/sqrt({})",
            self.rational_part, self.sqrt_part, self.q
        )
    }
}

impl Add for &QSqrtValue {
    type Output = QSqrtValue;
    fn add(self, rhs: &QSqrtValue) -> QSqrtValue {
        self.check(rhs);
        QSqrtValue::new(
            self.q,
            &self.rational_part + &rhs.rational_part,
            &self.sqrt_part + &rhs.sqrt_part,
        )
    }
}

impl Add for QSqrtValue {
    type Output = QSqrtValue;
    fn add(self, rhs: QSqrtValue) -> QSqrtValue {
        &self + &rhs
    }
}

impl AddAssign<&QSqrtValue> for QSqrtValue {
    fn add_assign(&mut self, rhs: &QSqrtValue) {
        self.check(rhs);
        self.rational_part += &rhs.rational_part;
        self.sqrt_part += &rhs.sqrt_part;
    }
}

impl Sub for &QSqrtValue {
    type Output = QSqrtValue;
    fn sub(self, rhs: &QSqrtValue) -> QSqrtValue {
        self.check(rhs);
        QSqrtValue::new(
            self.q,
            &self.rational_part - &rhs.rational_part,
            &self.sqrt_part - &rhs.sqrt_part,
        )
    }
}

impl Sub for QSqrtValue {
    type Output = QSqrtValue;
    fn sub(self, rhs: QSqrtValue) -> QSqrtValue {
        &self - &rhs
    }
}

impl Mul for &QSqrtValue {
    type Output = QSqrtValue;
    fn mul(self, rhs: &QSqrtValue) -> QSqrtValue {
        self.check(rhs);
        let q = BigRational::from_integer(self.q.into());
        let x = &self.rational_part * &rhs.rational_part + &self.sqrt_part * &rhs.sqrt_part / q;
        let y = &self.rational_part * &rhs.sqrt_part + &rhs.rational_part * &self.sqrt_part;
        QSqrtValue::new(self.q, x, y)
    }
}

impl Mul for QSqrtValue {
    type Output = QSqrtValue;
    fn mul(self, rhs: QSqrtValue) -> QSqrtValue {
        &self * &rhs
    }
}

impl Neg for QSqrtValue {
    type Output = QSqrtValue;
    fn neg(self) -> QSqrtValue {
        QSqrtValue::new(self.q, -self.rational_part, -self.sqrt_part)
    }
}

impl PartialOrd for QSqrtValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.q != other.q {
            return None;
        }
        Some((self - other).signum().cmp(&0))
    }
}

impl Serialize for QSqrtValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let (x, y) = self.to_fraction_strings();
        let mut st = s.serialize_struct("QSqrtValue", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("x", &x)?;
        st.serialize_field("y", &y)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for QSqrtValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            q: u32,
            x: String,
            y: String,
        }
        let raw = Raw::deserialize(d)?;
        QSqrtValue::from_fraction_strings(raw.q, &raw.x, &raw.y).map_err(serde::de::Error::custom)
    }
}
