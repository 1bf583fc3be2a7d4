use std::ops::Range;

use super::Poly;
use crate::field::FieldSpec;

/// Number of monic polynomials of degree `n`, i.e. `q^n`.
pub fn monic_count(field: FieldSpec, n: usize) -> u64 {
    u64::try_from(field.pow_q(n)).expect("q^n exceeds u64")
}

/// All monic polynomials of degree `n` in lexicographic order of the lower
/// coefficient tuple `(a_0, ..., a_{n-1})`.
pub fn enumerate_monic(field: FieldSpec, n: usize) -> MonicRange {
    MonicRange {
        field,
        degree: n,
        indices: 0..monic_count(field, n),
    }
}

/// A contiguous slice of the monic enumeration of one degree.
///
/// Ranges are cheap to clone and split, so parallel workers can each own a
/// disjoint piece of the same ordered stream.
#[derive(Clone, Debug)]
pub struct MonicRange {
    field: FieldSpec,
    degree: usize,
    indices: Range<u64>,
}

impl MonicRange {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn indices(&self) -> Range<u64> {
        self.indices.clone()
    }

    /// Restricts to the sub-range `[start, end)` of enumeration indices.
    pub fn slice(&self, start: u64, end: u64) -> MonicRange {
        let lo = self.indices.start.max(start);
        let hi = self.indices.end.min(end).max(lo);
        MonicRange {
            field: self.field,
            degree: self.degree,
            indices: lo..hi,
        }
    }

    /// Splits into `parts` contiguous ranges of near-equal size, in order.
    pub fn split_into(&self, parts: usize) -> Vec<MonicRange> {
        let parts = parts.max(1) as u64;
        let total = self.indices.end - self.indices.start;
        (0..parts)
            .map(|k| {
                let lo = self.indices.start + total * k / parts;
                let hi = self.indices.start + total * (k + 1) / parts;
                self.slice(lo, hi)
            })
            .collect()
    }

    pub fn poly_at(&self, index: u64) -> Poly {
        monic_from_index(self.field, self.degree, index)
    }
}

impl Iterator for MonicRange {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let idx = self.indices.next()?;
        Some(monic_from_index(self.field, self.degree, idx))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.indices.size_hint()
    }
}

impl ExactSizeIterator for MonicRange {}

impl DoubleEndedIterator for MonicRange {
    fn next_back(&mut self) -> Option<Poly> {
        let idx = self.indices.next_back()?;
        Some(monic_from_index(self.field, self.degree, idx))
    }
}

pub(crate) fn monic_from_index(field: FieldSpec, n: usize, mut index: u64) -> Poly {
    let q = field.q() as u64;
    let mut coeffs = vec![0u32; n + 1];
    coeffs[n] = 1;
    for i in (0..n).rev() {
        coeffs[i] = (index % q) as u32;
        index /= q;
    }
    Poly::from_trimmed(field, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_powers_of_q() {
        let f3 = FieldSpec::new(3).unwrap();
        let f5 = FieldSpec::new(5).unwrap();
        let zero: Vec<_> = enumerate_monic(f3, 0).collect();
        assert_eq!(zero, vec![Poly::one(f3)]);
        assert_eq!(enumerate_monic(f3, 2).count(), 9);
        assert_eq!(enumerate_monic(f5, 3).count(), 125);
    }

    #[test]
    fn order_is_lexicographic_and_indices_roundtrip() {
        let f3 = FieldSpec::new(3).unwrap();
        let all: Vec<Poly> = enumerate_monic(f3, 3).collect();
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].coeffs()[..3] < w[1].coeffs()[..3]);
        }
        for (i, f) in all.iter().enumerate() {
            assert!(f.is_monic() && f.degree() == Some(3));
            assert_eq!(f.monic_index(), Some(i as u64));
        }
    }

    #[test]
    fn partitions_cover_the_range_in_order() {
        let f5 = FieldSpec::new(5).unwrap();
        let whole: Vec<Poly> = enumerate_monic(f5, 3).collect();
        for parts in [1, 2, 7, 125, 200] {
            let glued: Vec<Poly> = enumerate_monic(f5, 3)
                .split_into(parts)
                .into_iter()
                .flatten()
                .collect();
            assert_eq!(glued, whole, "parts = {parts}");
        }
    }
}
