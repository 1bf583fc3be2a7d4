use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PrimeGroups, PsiTable};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::quadchar;
use crate::sum::NeumaierSum;

/// Largest support set `enumerate` will materialize by default.
pub const DEFAULT_MEMBER_BUDGET: u128 = 1 << 20;

/// One element of the support set, as window-prime indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub factors: Vec<usize>,
    pub psi: f64,
    pub degree: usize,
}

/// Squarefree products of window primes with at most `cap_k` factors from
/// each group.
#[derive(Clone, Debug)]
pub struct ResonatorSet {
    groups: PrimeGroups,
    table: PsiTable,
    members: Option<Vec<Member>>,
    size: u128,
}

fn binomial_prefix_sum(n: usize, cap: u64) -> u128 {
    let top = (cap.min(n as u64)) as usize;
    let mut c: u128 = 1;
    let mut total: u128 = 1;
    for j in 1..=top {
        c = c.saturating_mul((n + 1 - j) as u128) / j as u128;
        total = total.saturating_add(c);
    }
    total
}

/// Subsets of `items` with at most `cap` elements, smallest first, each in
/// lexicographic order.
fn bounded_subsets(items: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 0usize)];
    for _ in 0..cap.min(items.len()) {
        let mut next = Vec::new();
        for (set, start) in frontier {
            for i in start..items.len() {
                let mut s: Vec<usize> = set.clone();
                s.push(items[i]);
                out.push(s.clone());
                next.push((s, i + 1));
            }
        }
        frontier = next;
    }
    out
}

impl ResonatorSet {
    /// Materializes every member, refusing when the count exceeds `budget`.
    pub fn enumerate(groups: &PrimeGroups, table: &PsiTable, budget: u128) -> Result<ResonatorSet> {
        let size = Self::count(groups);
        if size > budget {
            return Err(Error::BudgetExceeded {
                what: "resonator members (use the membership predicate instead)",
                needed: size,
                budget,
            });
        }
        let mut members = vec![Member {
            factors: Vec::new(),
            psi: 1.0,
            degree: 0,
        }];
        for g in groups.groups() {
            let choices = bounded_subsets(&g.members, g.cap.min(usize::MAX as u64) as usize);
            let mut next = Vec::with_capacity(members.len() * choices.len());
            for m in &members {
                for c in &choices {
                    let mut factors = m.factors.clone();
                    factors.extend_from_slice(c);
                    next.push(Member {
                        psi: m.psi * table.product(c),
                        degree: m.degree + c.iter().map(|&i| table.degree(i)).sum::<usize>(),
                        factors,
                    });
                }
            }
            members = next;
        }
        debug_assert_eq!(members.len() as u128, size);
        Ok(ResonatorSet {
            groups: groups.clone(),
            table: table.clone(),
            members: Some(members),
            size,
        })
    }

    /// A set known only through its membership predicate.
    pub fn predicate(groups: &PrimeGroups, table: &PsiTable) -> ResonatorSet {
        ResonatorSet {
            groups: groups.clone(),
            table: table.clone(),
            members: None,
            size: Self::count(groups),
        }
    }

    /// `prod_k sum_{j <= cap_k} C(|group_k|, j)`, saturating.
    pub fn count(groups: &PrimeGroups) -> u128 {
        groups
            .groups()
            .iter()
            .map(|g| binomial_prefix_sum(g.members.len(), g.cap))
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    pub fn groups(&self) -> &PrimeGroups {
        &self.groups
    }

    pub fn table(&self) -> &PsiTable {
        &self.table
    }

    pub fn members(&self) -> Option<&[Member]> {
        self.members.as_deref()
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn caps_binding(&self) -> bool {
        self.groups.caps_binding()
    }

    pub fn member_poly(&self, m: &Member) -> Poly {
        let field = self.table.field();
        m.factors
            .iter()
            .fold(Poly::one(field), |acc, &i| &acc * &self.table.primes()[i])
    }

    pub fn contains_factors(&self, factors: &[usize]) -> bool {
        let mut counts = vec![0u64; self.groups.groups().len()];
        for w in factors.windows(2) {
            if w[0] >= w[1] {
                return false;
            }
        }
        for &i in factors {
            if i >= self.table.len() {
                return false;
            }
            counts[self.groups.group_of(i)] += 1;
        }
        counts
            .iter()
            .zip(self.groups.groups())
            .all(|(&c, g)| c <= g.cap)
    }

    pub fn contains(&self, h: &Poly) -> bool {
        self.table
            .support_factors(h)
            .is_some_and(|f| self.contains_factors(&f))
    }

    /// `sum_k cap_k * (largest degree in group k)`.
    pub fn degree_bound(&self) -> u128 {
        self.groups
            .groups()
            .iter()
            .map(|g| {
                let dmax = g.members.iter().map(|&i| self.table.degree(i)).max().unwrap_or(0);
                (g.cap.min(g.members.len() as u64) as u128) * dmax as u128
            })
            .sum()
    }

    /// `chi_P` on every window prime.
    pub fn window_characters(&self, p: &Poly) -> Vec<i8> {
        let field = self.table.field();
        self.table
            .primes()
            .iter()
            .map(|r| quadchar::chi(field, r.coeffs(), p))
            .collect()
    }

    fn member_character(m: &Member, chars: &[i8]) -> i8 {
        m.factors.iter().map(|&i| chars[i]).product()
    }

    /// `sum_h psi(h) chi_P(h)` over the materialized members.
    pub fn value_direct(&self, chars: &[i8]) -> Option<f64> {
        let members = self.members.as_ref()?;
        let mut s = NeumaierSum::new();
        for m in members {
            match Self::member_character(m, chars) {
                0 => {}
                c => s.add(c as f64 * m.psi),
            }
        }
        Some(s.value())
    }

    /// `prod_P (1 + psi(P) chi_P)`, valid only when no cap binds.
    pub fn value_product(&self, chars: &[i8]) -> Option<f64> {
        if self.caps_binding() {
            return None;
        }
        Some(
            self.table
                .weights()
                .iter()
                .zip(chars)
                .map(|(w, &c)| 1.0 + w * c as f64)
                .product(),
        )
    }

    /// Per-group elementary symmetric sums, `prod_k sum_{j <= cap_k} e_j`.
    /// Works for predicate-only sets.
    pub fn value_grouped(&self, chars: &[i8]) -> f64 {
        self.groups
            .groups()
            .iter()
            .map(|g| {
                let top = g.cap.min(g.members.len() as u64) as usize;
                let mut e = vec![0.0f64; top + 1];
                e[0] = 1.0;
                for &i in &g.members {
                    let x = self.table.weight(i) * chars[i] as f64;
                    for j in (1..=top).rev() {
                        e[j] += e[j - 1] * x;
                    }
                }
                e.iter().copied().collect::<NeumaierSum>().value()
            })
            .product()
    }

    pub fn value(&self, chars: &[i8]) -> f64 {
        self.value_direct(chars)
            .unwrap_or_else(|| self.value_grouped(chars))
    }

    /// The resonator value with exact weights.
    pub fn value_exact(&self, chars: &[i8]) -> BigRational {
        let groups = self.groups.groups();
        let mut total = BigRational::one();
        for g in groups {
            let top = g.cap.min(g.members.len() as u64) as usize;
            let mut e = vec![BigRational::zero(); top + 1];
            e[0] = BigRational::one();
            for &i in &g.members {
                if chars[i] == 0 {
                    continue;
                }
                let x = self.table.exact_weight(i) * BigRational::from_integer(chars[i].into());
                for j in (1..=top).rev() {
                    let add = &e[j - 1] * &x;
                    e[j] += add;
                }
            }
            total *= e.into_iter().fold(BigRational::zero(), |a, b| a + b);
        }
        total
    }

    /// `sum_{h} psi(h)^2` over the set.
    pub fn psi_square_sum(&self) -> f64 {
        self.groups
            .groups()
            .iter()
            .map(|g| {
                let top = g.cap.min(g.members.len() as u64) as usize;
                let mut e = vec![0.0f64; top + 1];
                e[0] = 1.0;
                for &i in &g.members {
                    let x = self.table.weight(i).powi(2);
                    for j in (1..=top).rev() {
                        e[j] += e[j - 1] * x;
                    }
                }
                e.iter().sum::<f64>()
            })
            .product()
    }
}

/// `R(chi_P) = sum_{h in set} psi(h) chi_P(h)`.
pub fn resonator_value(p: &Poly, set: &ResonatorSet) -> f64 {
    set.value(&set.window_characters(p))
}
