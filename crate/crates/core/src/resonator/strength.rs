use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{PsiTable, ResonatorSet, Scales};
use crate::error::{Error, Result};
use crate::qsqrt::QSqrtValue;
use crate::sum::NeumaierSum;

/// Divisor-sum forms enumerate all `2^n` support elements and `3^n`
/// divisor pairs; larger windows are refused.
pub const SUPPORT_PRIME_LIMIT: usize = 16;

/// `exp(gamma sqrt(L1 L3 / L2))`
pub fn le2_reference(s: &Scales) -> f64 {
    (s.gamma * (s.l1 * s.l3 / s.l2).sqrt()).exp()
}

/// Euler-product form: `prod_P (1 + psi^2 + psi |P|^{-1/2}) / (1 + psi^2)`.
pub fn a_n_product(table: &PsiTable) -> f64 {
    let q = table.field().q() as f64;
    (0..table.len())
        .map(|i| {
            let w = table.weight(i);
            let w2 = w * w;
            (1.0 + w2 + w * q.powf(-(table.degree(i) as f64) / 2.0)) / (1.0 + w2)
        })
        .product()
}

pub fn a_n_product_exact(table: &PsiTable) -> QSqrtValue {
    let q = table.field().q();
    let mut num = QSqrtValue::one(q);
    let mut den = BigRational::one();
    for i in 0..table.len() {
        let w = table.exact_weight(i);
        let base = BigRational::one() + w * w;
        let factor = QSqrtValue::from_rational(q, base.clone())
            + QSqrtValue::inv_sqrt_norm(q, table.degree(i)).scale(w);
        num = &num * &factor;
        den *= base;
    }
    num.scale(&den.recip())
}

struct Support {
    psi: Vec<f64>,
    degree: Vec<usize>,
}

fn support(table: &PsiTable) -> Result<Support> {
    let n = table.len();
    if n > SUPPORT_PRIME_LIMIT {
        return Err(Error::BudgetExceeded {
            what: "divisor-sum support primes",
            needed: n as u128,
            budget: SUPPORT_PRIME_LIMIT as u128,
        });
    }
    let size = 1usize << n;
    let mut psi = vec![1.0; size];
    let mut degree = vec![0; size];
    for mask in 1..size {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        psi[mask] = psi[rest] * table.weight(i);
        degree[mask] = degree[rest] + table.degree(i);
    }
    Ok(Support { psi, degree })
}

/// Every submask of `mask`, including 0 and `mask`.
fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = (cur != 0).then(|| (cur - 1) & mask);
        Some(cur)
    })
}

/// `(1 / sum_h psi(h)^2) sum_f psi(f) |f|^{-1/2} sum_{g | f} psi(g) |g|^{1/2}`
/// over the full uncapped support.
pub fn a_n_divisor_sum(table: &PsiTable) -> Result<f64> {
    let s = support(table)?;
    let sqrt_q = (table.field().q() as f64).sqrt();
    let norm: NeumaierSum = s.psi.iter().map(|p| p * p).collect();
    let mut total = NeumaierSum::new();
    for f in 0..s.psi.len() {
        let inner: NeumaierSum = submasks(f)
            .map(|g| s.psi[g] * sqrt_q.powi(s.degree[g] as i32))
            .collect();
        total.add(s.psi[f] * sqrt_q.powi(-(s.degree[f] as i32)) * inner.value());
    }
    Ok(total.value() / norm.value())
}

/// Exact divisor-sum form in `Q(sqrt q)`, using the table's exact weights.
pub fn a_n_divisor_sum_exact(table: &PsiTable) -> Result<QSqrtValue> {
    let s = support(table)?;
    let q = table.field().q();
    let qb = BigInt::from(q);
    let size = s.psi.len();
    let mut psi = vec![BigRational::one(); size];
    for mask in 1..size {
        let i = mask.trailing_zeros() as usize;
        psi[mask] = &psi[mask & (mask - 1)] * table.exact_weight(i);
    }
    let norm: BigRational = psi.iter().map(|p| p * p).sum();
    // psi(f) psi(g) q^{-(d(f) - d(g))/2}, split by parity of the exponent
    let mut even = BigRational::zero();
    let mut odd = BigRational::zero();
    for f in 0..size {
        for g in submasks(f) {
            let k = s.degree[f] - s.degree[g];
            let term = BigRational::new(BigInt::one(), qb.pow((k / 2) as u32)) * &psi[f] * &psi[g];
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
    }
    Ok(QSqrtValue::new(q, even / &norm, odd / norm))
}

/// Finite-scale values of the two tail quantities the construction relies
/// on being small, each as a ratio to `A_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailDiagnostics {
    #[serde(with = "crate::real::string")]
    pub a_n: f64,
    /// Divisor-sum mass from support elements outside the capped set.
    #[serde(with = "crate::real::string")]
    pub outside_set_ratio: f64,
    /// Mass from divisors `g | f` with `d(g) <= d(f) - eps log_q N`, `f` in the set.
    #[serde(with = "crate::real::string")]
    pub short_divisor_ratio: f64,
    #[serde(with = "crate::real::string")]
    pub eps: f64,
    #[serde(with = "crate::real::string")]
    pub degree_gap: f64,
}

pub fn tail_diagnostics(set: &ResonatorSet, eps: f64) -> Result<TailDiagnostics> {
    let table = set.table();
    let s = support(table)?;
    let q = table.field().q() as f64;
    let sqrt_q = q.sqrt();
    let degree_gap = eps * set.groups().scales().l1 / q.ln();
    let norm: NeumaierSum = s.psi.iter().map(|p| p * p).collect();
    let mut outside = NeumaierSum::new();
    let mut short = NeumaierSum::new();
    let mut all = NeumaierSum::new();
    for f in 0..s.psi.len() {
        let factors: Vec<usize> = (0..table.len()).filter(|i| f >> i & 1 == 1).collect();
        let in_set = set.contains_factors(&factors);
        let lead = s.psi[f] * sqrt_q.powi(-(s.degree[f] as i32));
        let mut inner = NeumaierSum::new();
        let mut inner_short = NeumaierSum::new();
        for g in submasks(f) {
            let t = s.psi[g] * sqrt_q.powi(s.degree[g] as i32);
            inner.add(t);
            if (s.degree[g] as f64) <= s.degree[f] as f64 - degree_gap {
                inner_short.add(t);
            }
        }
        all.add(lead * inner.value());
        if in_set {
            short.add(lead * inner_short.value());
        } else {
            outside.add(lead * inner.value());
        }
    }
    let a_n = all.value() / norm.value();
    let scale = a_n * norm.value();
    Ok(TailDiagnostics {
        a_n,
        outside_set_ratio: outside.value() / scale,
        short_divisor_ratio: short.value() / scale,
        eps,
        degree_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::{irreducibles, Poly};
    use crate::resonator::{build_groups, ResonatorParams, DEFAULT_MEMBER_BUDGET};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn single_prime_by_hand() {
        let f = FieldSpec::new(3).unwrap();
        let p0 = Poly::from_i64(f, &[1, 0, 1]);
        let w = r(1, 3);
        let t = PsiTable::from_rationals(f, vec![p0], vec![w.clone()]);
        // (1 + w^2 + w/3) / (1 + w^2) with |P0| = 9
        let expect = (r(1, 1) + &w * &w + &w * r(1, 3)) / (r(1, 1) + &w * &w);
        let exact = QSqrtValue::from_rational(3, expect);
        assert_eq!(a_n_product_exact(&t), exact);
        assert_eq!(a_n_divisor_sum_exact(&t).unwrap(), exact);
        assert!((a_n_product(&t) - exact.to_f64()).abs() < 1e-15);
    }

    #[test]
    fn empty_window_is_one() {
        let f = FieldSpec::new(5).unwrap();
        let t = PsiTable::from_f64(f, vec![], vec![]);
        assert_eq!(a_n_product(&t), 1.0);
        assert_eq!(a_n_divisor_sum(&t).unwrap(), 1.0);
        assert_eq!(a_n_product_exact(&t), QSqrtValue::one(5));
    }

    #[test]
    fn two_primes_odd_degrees_exact() {
        let f = FieldSpec::new(3).unwrap();
        let primes = vec![Poly::t(f), irreducibles(f, 3)[2].clone()];
        let t = PsiTable::from_rationals(f, primes, vec![r(2, 5), r(7, 4)]);
        assert_eq!(a_n_product_exact(&t), a_n_divisor_sum_exact(&t).unwrap());
        let float = a_n_divisor_sum(&t).unwrap();
        assert!((float - a_n_product(&t)).abs() <= 1e-12 * float);
    }

    #[test]
    fn default_window_strength_and_tails() {
        let f = FieldSpec::new(3).unwrap();
        let g = build_groups(&ResonatorParams::default(), f).unwrap();
        let t = PsiTable::new(&g);
        let set = ResonatorSet::enumerate(&g, &t, DEFAULT_MEMBER_BUDGET).unwrap();
        let prod = a_n_product(&t);
        assert!((a_n_divisor_sum(&t).unwrap() - prod).abs() <= 1e-10 * prod);
        assert!(prod > 1.0);
        let tails = tail_diagnostics(&set, 0.25).unwrap();
        assert!((tails.a_n - prod).abs() <= 1e-10 * prod);
        assert!(tails.outside_set_ratio > 0.0 && tails.outside_set_ratio < 1.0);
        assert!(tails.short_divisor_ratio >= 0.0);
    }
}
