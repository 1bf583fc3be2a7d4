//! Both moments rewritten as sums of prime character sums.
//!
//! For members `h1, h2` write `s` for the primes in exactly one of them and
//! `l` for the shared primes, so `chi_P(h1 h2) = chi_P(s) chi_P(l)^2`. The
//! tensor `T[key][f] = sum_P chi_P(f s l^2)` over `f` in `M_{<= g}` carries
//! everything both moments need.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::report::{Decomposition, ExactTotals, Real};
use crate::lseries::AfeEvaluator;
use crate::poly::{factor_shape, Poly};
use crate::qsqrt::{fraction_string, InvSqrtSum, QSqrtValue};
use crate::resonator::ResonatorSet;
use crate::sum::NeumaierSum;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key {
    /// Window primes dividing `h1 h2` exactly once.
    s: Vec<usize>,
    /// Shared window primes of the family degree; only these can make
    /// `chi_P(l)^2` vanish.
    l: Vec<usize>,
}

/// Pair weights grouped by key, plus what the tensor pass needs.
pub(crate) struct PairKeys {
    keys: Vec<Key>,
    weights: Vec<NeumaierSum>,
    /// `sum psi(h1) psi(h2) (d(h1) + d(h2))`, for the Weil budget.
    degree_weights: Vec<NeumaierSum>,
    exact: Option<Vec<BigRational>>,
    overlapping_primes: usize,
    n: usize,
}

fn symmetric_split(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let (mut i, mut j) = (0, 0);
    let mut s = Vec::new();
    let mut l = Vec::new();
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                l.push(*x);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                s.push(*x);
                i += 1;
            }
            (Some(x), None) => {
                s.push(*x);
                i += 1;
            }
            (_, Some(y)) => {
                s.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (s, l)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

impl PairKeys {
    pub fn build(set: &ResonatorSet, n: usize, exact: bool) -> PairKeys {
        let members = set.members().expect("decomposition needs materialized members");
        let table = set.table();
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys = Vec::new();
        let mut weights: Vec<NeumaierSum> = Vec::new();
        let mut degree_weights: Vec<NeumaierSum> = Vec::new();
        let mut exact_w: Vec<BigRational> = Vec::new();
        let exact_psi: Vec<BigRational> = if exact {
            members.iter().map(|m| table.exact_product(&m.factors)).collect()
        } else {
            Vec::new()
        };
        for (a, m1) in members.iter().enumerate() {
            for (b, m2) in members.iter().enumerate() {
                let (s, mut l) = symmetric_split(&m1.factors, &m2.factors);
                l.retain(|&i| table.degree(i) == n);
                let key = Key { s, l };
                let k = *index.entry(key.clone()).or_insert_with(|| {
                    keys.push(key);
                    weights.push(NeumaierSum::new());
                    degree_weights.push(NeumaierSum::new());
                    exact_w.push(BigRational::zero());
                    keys.len() - 1
                });
                let w = m1.psi * m2.psi;
                weights[k].add(w);
                degree_weights[k].add(w * (m1.degree + m2.degree) as f64);
                if exact {
                    exact_w[k] += &exact_psi[a] * &exact_psi[b];
                }
            }
        }
        let overlapping_primes = table.primes().iter().filter(|p| p.degree() == Some(n)).count();
        PairKeys {
            keys,
            weights,
            degree_weights,
            exact: exact.then_some(exact_w),
            overlapping_primes,
            n,
        }
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    /// `chi_P(s) chi_P(l)^2` for every key.
    pub fn key_characters(&self, chars: &[i8]) -> Vec<i8> {
        self.keys
            .iter()
            .map(|k| {
                let s: i8 = k.s.iter().map(|&i| chars[i]).product();
                let l: i8 = k.l.iter().map(|&i| chars[i] * chars[i]).product();
                s * l
            })
            .collect()
    }
}

/// Adds one modulus' contribution: `T[k][f] += chi_P(f) c_k`.
pub(crate) fn accumulate(tensor: &mut [i64], f_count: usize, key_chars: &[i8], f_chars: &[i8]) {
    for (k, &c) in key_chars.iter().enumerate() {
        let row = &mut tensor[k * f_count..(k + 1) * f_count];
        match c {
            1 => row.iter_mut().zip(f_chars).for_each(|(t, &x)| *t += x as i64),
            -1 => row.iter_mut().zip(f_chars).for_each(|(t, &x)| *t -= x as i64),
            _ => {}
        }
    }
}

pub(crate) struct Analysis {
    pub decomposition: Decomposition,
    pub exact: Option<ExactTotals>,
    pub s1_exact: Option<BigRational>,
    pub s2_exact: Option<QSqrtValue>,
    pub split_consistent: bool,
    pub positivity_pick: bool,
    pub weil_budget_respected: bool,
    pub square_counts_exact: bool,
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn pair_strings(v: &QSqrtValue) -> [String; 2] {
    [fraction_string(v.rational_part()), fraction_string(v.sqrt_part())]
}

/// Turns the reduced tensor into both moments, their square/non-square
/// split, the positivity pick and the Weil budget.
pub(crate) fn analyze(
    set: &ResonatorSet,
    pairs: &PairKeys,
    afe: &AfeEvaluator,
    g: usize,
    family_size: u64,
    tensor: &[i64],
    weil_ratio: f64,
) -> Analysis {
    let field = afe.sieve().field();
    let q = field.q();
    let qf = q as f64;
    let n = pairs.n;
    let sieve = afe.sieve();
    let f_count = sieve.degree_range(g).end;
    let family = family_size as i64;

    let f_polys: Vec<Poly> = (0..f_count).map(|i| sieve.poly_at(i)).collect();
    let f_degree: Vec<usize> = f_polys.iter().map(|f| f.degree().unwrap()).collect();
    let kernels: Vec<Poly> = f_polys
        .iter()
        .map(|f| factor_shape(f).expect("monic").squarefree_part)
        .collect();

    let table = set.table();
    let s_poly: Vec<Poly> = pairs
        .keys
        .iter()
        .map(|k| k.s.iter().fold(Poly::one(field), |acc, &i| &acc * &table.primes()[i]))
        .collect();

    let inv_sqrt: Vec<f64> = (0..=g).map(|d| qf.powf(-(d as f64) / 2.0)).collect();
    let weil_scale = weil_ratio * qf.powf(n as f64 / 2.0) / n as f64;

    let mut s1 = NeumaierSum::new();
    let mut s1_sq = NeumaierSum::new();
    let mut s1_nsq = NeumaierSum::new();
    let mut s1_budget = NeumaierSum::new();
    let mut s21 = NeumaierSum::new();
    let mut s22 = NeumaierSum::new();
    let mut s21_sq = NeumaierSum::new();
    let mut s22_sq = NeumaierSum::new();
    let mut s2_sq = NeumaierSum::new();
    let mut s2_nsq = NeumaierSum::new();
    let mut s2_budget = NeumaierSum::new();
    let mut square_counts_exact = true;

    let exact = pairs.exact.as_ref();
    let mut e_s1 = BigRational::zero();
    let mut e_s21 = InvSqrtSum::new(q);
    let mut e_s22 = InvSqrtSum::new(q);
    let mut e_s21_sq = InvSqrtSum::new(q);
    let mut e_s22_sq = InvSqrtSum::new(q);

    for (k, key) in pairs.keys.iter().enumerate() {
        let w = pairs.weights[k].value();
        let dw = pairs.degree_weights[k].value();
        let row = &tensor[k * f_count..(k + 1) * f_count];
        let square_count = family - key.l.len() as i64;
        // per-degree integer sums, for the exact path
        let mut by_degree = vec![0i64; g + 1];
        let mut by_degree_sq = vec![0i64; g + 1];
        for f in 0..f_count {
            let t = row[f];
            let d = f_degree[f];
            let square = kernels[f] == s_poly[k];
            if square && t != square_count {
                square_counts_exact = false;
            }
            by_degree[d] += t;
            let c = inv_sqrt[d];
            let term = w * c * t as f64;
            let weight = if d < g { 2.0 } else { 1.0 };
            s21.add(term);
            if d < g {
                s22.add(term);
            }
            if square {
                by_degree_sq[d] += t;
                s21_sq.add(term);
                if d < g {
                    s22_sq.add(term);
                }
                s2_sq.add(weight * term);
            } else {
                s2_nsq.add(weight * term);
                s2_budget.add(weight * c * (w * d as f64 + dw) * weil_scale);
            }
            if f == 0 {
                s1.add(w * t as f64);
                if key.s.is_empty() {
                    s1_sq.add(w * t as f64);
                } else {
                    s1_nsq.add(w * t as f64);
                    s1_budget.add(dw * weil_scale);
                }
            }
        }
        if let Some(ew) = exact {
            let ew = &ew[k];
            e_s1 += ew * BigRational::from_integer(row[0].into());
            for d in 0..=g {
                let total = ew * BigRational::from_integer(by_degree[d].into());
                let sq = ew * BigRational::from_integer(by_degree_sq[d].into());
                e_s21.add(&total, d);
                e_s21_sq.add(&sq, d);
                if d < g {
                    e_s22.add(&total, d);
                    e_s22_sq.add(&sq, d);
                }
            }
        }
    }

    // positivity pick: pairs with h1 | h2 and d(h2 / h1) within the AFE range
    let members = set.members().expect("materialized");
    let mut picked21 = NeumaierSum::new();
    let mut picked22 = NeumaierSum::new();
    let mut e_p21 = InvSqrtSum::new(q);
    let mut e_p22 = InvSqrtSum::new(q);
    for m1 in members {
        for m2 in members {
            if m1.degree > m2.degree || !is_subset(&m1.factors, &m2.factors) {
                continue;
            }
            let d = m2.degree - m1.degree;
            if d > g {
                continue;
            }
            let count = family
                - m2.factors.iter().filter(|&&i| table.degree(i) == n).count() as i64;
            let term = m1.psi * m2.psi * inv_sqrt[d] * count as f64;
            picked21.add(term);
            if d < g {
                picked22.add(term);
            }
            if exact.is_some() {
                let r = table.exact_product(&m1.factors)
                    * table.exact_product(&m2.factors)
                    * BigRational::from_integer(count.into());
                e_p21.add(&r, d);
                if d < g {
                    e_p22.add(&r, d);
                }
            }
        }
    }

    let s2_total = s21.value() + s22.value();
    let split_consistent = rel_close(s1_sq.value() + s1_nsq.value(), s1.value(), 1e-9)
        && rel_close(s2_sq.value() + s2_nsq.value(), s2_total, 1e-9);
    let weil_budget_respected =
        s1_nsq.value().abs() <= s1_budget.value() && s2_nsq.value().abs() <= s2_budget.value();

    let (exact_totals, s1_exact, s2_exact, positivity_pick) = match exact {
        Some(_) => {
            let s2e = e_s21.value() + e_s22.value();
            let sq21 = e_s21_sq.value();
            let sq22 = e_s22_sq.value();
            let p21 = e_p21.value();
            let p22 = e_p22.value();
            let pick_ok = (&sq21 - &p21).signum() >= 0 && (&sq22 - &p22).signum() >= 0;
            let totals = ExactTotals {
                s1_direct: String::new(),
                s1_decomposition: fraction_string(&e_s1),
                s2_direct: [String::new(), String::new()],
                s2_decomposition: pair_strings(&s2e),
                square_part_s21: pair_strings(&sq21),
                picked_s21: pair_strings(&p21),
                square_part_s22: pair_strings(&sq22),
                picked_s22: pair_strings(&p22),
            };
            debug_assert!(!e_s1.is_negative());
            (Some(totals), Some(e_s1), Some(s2e), pick_ok)
        }
        None => {
            let pick_ok = s21_sq.value() >= picked21.value() * (1.0 - 1e-12)
                && s22_sq.value() >= picked22.value() * (1.0 - 1e-12);
            (None, None, None, pick_ok)
        }
    };

    Analysis {
        decomposition: Decomposition {
            s1: Real(s1.value()),
            s1_square_part: Real(s1_sq.value()),
            s1_nonsquare_part: Real(s1_nsq.value()),
            s1_weil_budget: Real(s1_budget.value()),
            s2: Real(s2_total),
            s2_square_part: Real(s2_sq.value()),
            s2_nonsquare_part: Real(s2_nsq.value()),
            s2_weil_budget: Real(s2_budget.value()),
            s21: Real(s21.value()),
            s22: Real(s22.value()),
            s21_square_part: Real(s21_sq.value()),
            s22_square_part: Real(s22_sq.value()),
            picked_s21: Real(picked21.value()),
            picked_s22: Real(picked22.value()),
            weil_ratio: Real(weil_ratio),
            keys: pairs.len(),
            overlapping_primes: pairs.overlapping_primes,
        },
        exact: exact_totals,
        s1_exact,
        s2_exact,
        split_consistent,
        positivity_pick,
        weil_budget_respected,
        square_counts_exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_of_factor_sets() {
        assert_eq!(symmetric_split(&[1, 3, 5], &[3, 4]), (vec![1, 4, 5], vec![3]));
        assert_eq!(symmetric_split(&[], &[2]), (vec![2], vec![]));
        assert_eq!(symmetric_split(&[2], &[2]), (vec![], vec![2]));
        assert!(is_subset(&[2, 5], &[1, 2, 5]));
        assert!(!is_subset(&[2, 6], &[1, 2, 5]));
    }
}
