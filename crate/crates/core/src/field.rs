//! The prime field F_q.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd prime field order `q >= 3`.
///
/// Elements are represented as residues in `0..q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldSpec {
    q: u32,
}

impl FieldSpec {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || q > u32::MAX as u64 || q.is_multiple_of(2) || !is_prime(q) {
            return Err(Error::InvalidField(q));
        }
        Ok(FieldSpec { q: q as u32 })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.q as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.q as u64 - b as u64;
        (s % self.q as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let q = self.q as u64;
        let mut base = a as u64 % q;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc as u32
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.q), "inverse of zero in F_{}", self.q);
        self.pow(a, self.q as u64 - 2)
    }

    /// The Legendre symbol of `a` in F_q: 0, +1 or -1.
    pub fn legendre(self, a: u32) -> i8 {
        let a = a % self.q;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.q as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Parity of `(q - 1) / 2`, the exponent in the reciprocity sign.
    #[inline]
    pub fn half_order_is_odd(self) -> bool {
        (self.q / 2) % 2 == 1
    }

    /// `q^n`, panicking on overflow.
    pub fn pow_q(self, n: usize) -> u128 {
        (self.q as u128)
            .checked_pow(n as u32)
            .unwrap_or_else(|| panic!("q^{n} overflows u128 for q = {}", self.q))
    }
}

impl TryFrom<u64> for FieldSpec {
    type Error = Error;
    fn try_from(q: u64) -> Result<Self> {
        FieldSpec::new(q)
    }
}

impl From<FieldSpec> for u64 {
    fn from(f: FieldSpec) -> u64 {
        f.q as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
