use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::enumerate::{enumerate_monic, monic_count, monic_from_index, MonicRange};
use super::{gcd_raw, monic_index, mul, powmod, sub, Poly};
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Rabin's test: `f` of degree n is irreducible iff `t^(q^n) = t (mod f)` and
/// `gcd(t^(q^(n/r)) - t, f) = 1` for every prime `r | n`.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        Some(d) if d >= 1 && f.is_monic() => d,
        _ => return Err(Error::NotMonic(f.to_string())),
    };
    Ok(rabin(f.field(), f.coeffs(), n))
}

pub(crate) fn rabin(field: FieldSpec, m: &[u32], n: usize) -> bool {
    if n == 1 {
        return true;
    }
    let q = field.q() as u128;
    let t = [0u32, 1];
    let maximal: Vec<usize> = prime_factors(n).into_iter().map(|r| n / r).collect();
    // frob[k] = t^(q^k) mod m
    let mut frob = powmod(field, &t, 1, m);
    for k in 1..=n {
        frob = powmod(field, &frob, q, m);
        if maximal.contains(&k) {
            let diff = sub(field, &frob, &t);
            if diff.is_empty() {
                return false;
            }
            if gcd_raw(field, &diff, m).len() != 1 {
                return false;
            }
        }
    }
    frob == t
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `|P_n| = (1/n) * sum_{d | n} mu(d) q^(n/d)`.
pub fn count_irreducibles(field: FieldSpec, n: usize) -> u128 {
    assert!(n >= 1, "count_irreducibles needs n >= 1");
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        total += mobius(d) as i128 * field.pow_q(n / d) as i128;
    }
    debug_assert!(total % n as i128 == 0);
    (total / n as i128) as u128
}

/// Lazily filters a monic range down to its irreducible members.
#[derive(Clone, Debug)]
pub struct IrreducibleIter {
    range: MonicRange,
}

impl IrreducibleIter {
    /// Splits the underlying lexicographic order into `parts` contiguous pieces.
    pub fn split_into(&self, parts: usize) -> Vec<IrreducibleIter> {
        self.range
            .split_into(parts)
            .into_iter()
            .map(|range| IrreducibleIter { range })
            .collect()
    }
}

impl Iterator for IrreducibleIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let field = self.range.field();
        let n = self.range.degree();
        self.range.find(|p| rabin(field, p.coeffs(), n))
    }
}

/// The monic irreducibles of degree `n >= 1`, in enumeration order.
pub fn enumerate_irreducibles(field: FieldSpec, n: usize) -> IrreducibleIter {
    assert!(n >= 1, "enumerate_irreducibles needs n >= 1");
    IrreducibleIter {
        range: enumerate_monic(field, n),
    }
}

/// Materializes `P_n` with [`sieve_irreducibles`]; order matches
/// [`enumerate_irreducibles`].
pub fn irreducibles(field: FieldSpec, n: usize) -> Vec<Poly> {
    sieve_irreducibles(field, n)
}

/// `P_n` by the Rabin test on every monic of degree `n`, in parallel.
pub fn irreducibles_by_test(field: FieldSpec, n: usize) -> Vec<Poly> {
    let total = enumerate_monic(field, n).len();
    let parts = (total / 4096).clamp(1, 4096);
    enumerate_irreducibles(field, n)
        .split_into(parts)
        .into_par_iter()
        .flat_map_iter(|it| it.collect::<Vec<_>>())
        .collect()
}

const SIEVE_BLOCK: u64 = 1 << 14;

/// `P_n` by sieving: every product of an irreducible of degree `d <= n/2`
/// with a monic cofactor of degree `n - d` is marked in a bitmap over the
/// `q^n` monics, and the unmarked ones are returned in enumeration order.
pub fn sieve_irreducibles(field: FieldSpec, n: usize) -> Vec<Poly> {
    assert!(n >= 1, "sieve_irreducibles needs n >= 1");
    let total = monic_count(field, n);
    let marks: Vec<AtomicU64> = (0..total.div_ceil(64)).map(|_| AtomicU64::new(0)).collect();
    let mut tasks = Vec::new();
    let small: Vec<Vec<Poly>> = (1..=n / 2).map(|d| irreducibles(field, d)).collect();
    for p in small.iter().flatten() {
        let m = n - p.degree().unwrap();
        let cofactors = monic_count(field, m);
        let mut start = 0;
        while start < cofactors {
            tasks.push((p, start, (start + SIEVE_BLOCK).min(cofactors)));
            start += SIEVE_BLOCK;
        }
    }
    tasks
        .par_iter()
        .for_each(|&(p, lo, hi)| mark_products(field, p.coeffs(), n, lo, hi, &marks));
    (0..total)
        .into_par_iter()
        .filter(|&i| marks[(i / 64) as usize].load(Ordering::Relaxed) >> (i % 64) & 1 == 0)
        .map(|i| monic_from_index(field, n, i))
        .collect()
}

/// Marks `p * b` for the monic cofactors `b` with indices in `[lo, hi)`.
fn mark_products(field: FieldSpec, p: &[u32], n: usize, lo: u64, hi: u64, marks: &[AtomicU64]) {
    let q = field.q();
    let d = p.len() - 1;
    let m = n - d;
    let b = monic_from_index(field, m, lo);
    let mut digits = b.coeffs().to_vec();
    let mut c = mul(field, p, &digits);
    for _ in lo..hi {
        let idx = monic_index(q, &c);
        marks[(idx / 64) as usize].fetch_or(1 << (idx % 64), Ordering::Relaxed);
        // odometer step on the cofactor; each unit step at digit j adds p t^j,
        // and q such steps cancel, so wrapping needs no correction
        let mut j = m;
        while j > 0 {
            j -= 1;
            for (k, &pk) in p.iter().enumerate() {
                let v = c[j + k] + pk;
                c[j + k] = if v >= q { v - q } else { v };
            }
            digits[j] += 1;
            if digits[j] < q {
                break;
            }
            digits[j] = 0;
        }
    }
}

/// Number of distinct monic irreducible factors of degree exactly `n` dividing `l`.
pub fn irreducible_factor_count_of_degree(l: &Poly, n: usize) -> Result<usize> {
    if l.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(n >= 1);
    let field = l.field();
    let m = l.monic();
    if m.degree() == Some(0) {
        return Ok(0);
    }
    let q = field.q() as u128;
    let t = [0u32, 1];
    // deg gcd(t^(q^d) - t, l) = sum_{e | d} e * N_e
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut counts: Vec<(usize, usize)> = Vec::new();
    let mut frob = powmod(field, &t, 1, m.coeffs());
    let mut k = 0;
    for &d in &divisors {
        while k < d {
            frob = powmod(field, &frob, q, m.coeffs());
            k += 1;
        }
        let diff = sub(field, &frob, &t);
        let g = if diff.is_empty() {
            m.coeffs().to_vec()
        } else {
            gcd_raw(field, &diff, m.coeffs())
        };
        let g_deg = g.len() - 1;
        let lower: usize = counts
            .iter()
            .filter(|(e, _)| d % e == 0)
            .map(|(e, c)| e * c)
            .sum();
        counts.push((d, (g_deg - lower) / d));
    }
    Ok(counts.last().map(|&(_, c)| c).unwrap_or(0))
}

/// A factor sieve over every monic polynomial of degree `<= max_degree`.
///
/// Each composite monic is linked to one irreducible factor and the
/// corresponding cofactor, both of strictly smaller degree, so completely
/// multiplicative functions can be tabulated from their prime values in a
/// single pass.
#[derive(Clone, Debug)]
pub struct MonicSieve {
    field: FieldSpec,
    max_degree: usize,
    offsets: Vec<u64>,
    links: Vec<Link>,
    primes: Vec<Poly>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum Link {
    Unit,
    Prime(u32),
    Composite { prime: u32, cofactor: u32 },
}

impl MonicSieve {
    pub fn new(field: FieldSpec, max_degree: usize) -> MonicSieve {
        let q = field.q() as u64;
        let mut offsets = vec![0u64; max_degree + 2];
        for n in 0..=max_degree {
            offsets[n + 1] = offsets[n] + q.pow(n as u32);
        }
        let total = offsets[max_degree + 1] as usize;
        assert!(total < u32::MAX as usize, "sieve too large");
        let mut links: Vec<Option<Link>> = vec![None; total];
        links[0] = Some(Link::Unit);
        let mut primes = Vec::new();
        for n in 1..=max_degree {
            for idx in 0..q.pow(n as u32) {
                let gi = (offsets[n] + idx) as usize;
                if links[gi].is_some() {
                    continue;
                }
                let pid = primes.len() as u32;
                links[gi] = Some(Link::Prime(pid));
                let p = monic_from_index(field, n, idx);
                // Mark p * c for monic c with deg p <= deg c; every composite
                // has such a factorization through its smallest-degree prime.
                for m in n..=max_degree.saturating_sub(n) {
                    if n + m > max_degree {
                        break;
                    }
                    for cidx in 0..q.pow(m as u32) {
                        let c = monic_from_index(field, m, cidx);
                        let prod = mul(field, p.coeffs(), c.coeffs());
                        let target = (offsets[n + m] + monic_index(field.q(), &prod)) as usize;
                        if links[target].is_none() {
                            links[target] = Some(Link::Composite {
                                prime: pid,
                                cofactor: (offsets[m] + cidx) as u32,
                            });
                        }
                    }
                }
                primes.push(p);
            }
        }
        MonicSieve {
            field,
            max_degree,
            offsets,
            links: links.into_iter().map(|l| l.expect("unlinked")).collect(),
            primes,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Number of monic polynomials covered, `|M_{<= max_degree}|`.
    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Irreducibles of degree `<= max_degree`, ordered by degree then index.
    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    /// Global index range of the monics of degree `n`.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        self.offsets[n] as usize..self.offsets[n + 1] as usize
    }

    pub fn index_of(&self, f: &Poly) -> Option<usize> {
        let d = f.degree()?;
        if d > self.max_degree || !f.is_monic() {
            return None;
        }
        Some((self.offsets[d] + monic_index(self.field.q(), f.coeffs())) as usize)
    }

    pub fn poly_at(&self, global: usize) -> Poly {
        let n = self.offsets.partition_point(|&o| o <= global as u64) - 1;
        monic_from_index(self.field, n, global as u64 - self.offsets[n])
    }

    pub fn is_irreducible_at(&self, global: usize) -> bool {
        matches!(self.links[global], Link::Prime(_))
    }

    pub fn irreducibles_of_degree(&self, n: usize) -> Vec<Poly> {
        self.degree_range(n)
            .filter(|&gi| self.is_irreducible_at(gi))
            .map(|gi| self.poly_at(gi))
            .collect()
    }

    /// Tabulates a completely multiplicative function on every covered monic,
    /// given its values on the irreducibles (in `primes()` order). The unit
    /// maps to `one`.
    pub fn tabulate<T: Copy>(&self, prime_values: &[T], one: T, mul: impl Fn(T, T) -> T) -> Vec<T> {
        assert_eq!(prime_values.len(), self.primes.len());
        let mut out: Vec<T> = Vec::with_capacity(self.links.len());
        for link in &self.links {
            let v = match *link {
                Link::Unit => one,
                Link::Prime(p) => prime_values[p as usize],
                Link::Composite { prime, cofactor } => {
                    mul(prime_values[prime as usize], out[cofactor as usize])
                }
            };
            out.push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn bitmap_sieve_matches_rabin() {
        for (q, max_n) in [(3, 8), (5, 5), (7, 4)] {
            for n in 1..=max_n {
                assert_eq!(sieve_irreducibles(f(q), n), irreducibles_by_test(f(q), n), "q={q} n={n}");
            }
        }
    }

    /// Irreducibility by trial division against every monic of degree <= n/2.
    fn trial_division(p: &Poly) -> bool {
        let n = p.degree().unwrap();
        for d in 1..=n / 2 {
            for g in enumerate_monic(p.field(), d) {
                if p.rem(&g).unwrap().is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division_up_to_degree_6() {
        let f3 = f(3);
        for n in 1..=6 {
            for p in enumerate_monic(f3, n) {
                assert_eq!(is_irreducible(&p).unwrap(), trial_division(&p), "{p}");
            }
        }
    }

    #[test]
    fn irreducible_examples() {
        let f3 = f(3);
        assert!(is_irreducible(&Poly::from_i64(f3, &[1, 2, 0, 1])).unwrap());
        assert!(!is_irreducible(&Poly::from_i64(f3, &[-1, 0, 1])).unwrap());
        assert!(is_irreducible(&Poly::t(f3)).unwrap());
        assert!(is_irreducible(&Poly::from_i64(f3, &[1, 2])).is_err());
        assert!(is_irreducible(&Poly::one(f3)).is_err());
    }

    #[test]
    fn quadratic_irreducibles_over_f3() {
        let f3 = f(3);
        // oracle: a monic quadratic is irreducible iff it has no root in F_3
        let by_roots: Vec<Poly> = enumerate_monic(f3, 2)
            .filter(|p| (0..3).all(|x| p.eval(x) != 0))
            .collect();
        let expected = vec![
            Poly::from_i64(f3, &[1, 0, 1]),
            Poly::from_i64(f3, &[2, 1, 1]),
            Poly::from_i64(f3, &[2, 2, 1]),
        ];
        assert_eq!(by_roots, expected);
        assert_eq!(enumerate_irreducibles(f3, 2).collect::<Vec<_>>(), expected);
        assert_eq!(
            enumerate_irreducibles(f3, 1).collect::<Vec<_>>(),
            vec![Poly::t(f3), Poly::from_i64(f3, &[1, 1]), Poly::from_i64(f3, &[2, 1])]
        );
    }

    #[test]
    fn counts_match_formula_and_enumeration() {
        let f3 = f(3);
        assert_eq!(count_irreducibles(f3, 1), 3);
        assert_eq!(count_irreducibles(f3, 3), 8);
        assert_eq!(count_irreducibles(f3, 4), 18);
        assert_eq!(count_irreducibles(f3, 13), 122_640);
        assert_eq!((3u128.pow(13) - 3) / 13, 122_640);
        assert_eq!(enumerate_irreducibles(f3, 4).count(), 18);
        for q in [3, 5, 7] {
            let fq = f(q);
            let max_n = match q {
                3 => 8,
                5 => 6,
                _ => 5,
            };
            for n in 1..=max_n {
                assert_eq!(
                    irreducibles(fq, n).len() as u128,
                    count_irreducibles(fq, n),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn parallel_materialization_keeps_order() {
        let f3 = f(3);
        let serial: Vec<Poly> = enumerate_irreducibles(f3, 7).collect();
        assert_eq!(irreducibles(f3, 7), serial);
        let glued: Vec<Poly> = enumerate_irreducibles(f3, 7)
            .split_into(13)
            .into_iter()
            .flatten()
            .collect();
        assert_eq!(glued, serial);
    }

    #[test]
    fn sieve_agrees_with_rabin() {
        let f3 = f(3);
        let sieve = MonicSieve::new(f3, 7);
        assert_eq!(sieve.len(), (0..=7).map(|n| 3usize.pow(n)).sum::<usize>());
        for n in 1..=7 {
            assert_eq!(sieve.irreducibles_of_degree(n), irreducibles(f3, n));
        }
        for gi in 0..sieve.len() {
            let p = sieve.poly_at(gi);
            assert_eq!(sieve.index_of(&p), Some(gi));
        }
        // degree is completely additive, so tabulating q^deg gives the norm
        let norms = sieve.tabulate(
            &sieve.primes().iter().map(|p| p.norm() as u64).collect::<Vec<_>>(),
            1u64,
            |a, b| a * b,
        );
        for (gi, n) in norms.iter().enumerate() {
            assert_eq!(*n as u128, sieve.poly_at(gi).norm());
        }
    }

    #[test]
    fn factor_count_of_degree() {
        let f3 = f(3);
        let a = Poly::from_i64(f3, &[1, 0, 1]);
        let b = Poly::from_i64(f3, &[2, 1, 1]);
        let c = Poly::from_i64(f3, &[1, 2, 0, 1]);
        let l = &(&(&a * &a) * &b) * &(&c * &Poly::t(f3));
        assert_eq!(irreducible_factor_count_of_degree(&l, 2).unwrap(), 2);
        assert_eq!(irreducible_factor_count_of_degree(&l, 3).unwrap(), 1);
        assert_eq!(irreducible_factor_count_of_degree(&l, 1).unwrap(), 1);
        assert_eq!(irreducible_factor_count_of_degree(&l, 4).unwrap(), 0);
        assert_eq!(irreducible_factor_count_of_degree(&Poly::one(f3), 2).unwrap(), 0);
    }
}
