use std::collections::HashMap;

use num_rational::BigRational;

use super::PrimeGroups;
use crate::field::FieldSpec;
use crate::poly::{factor, Poly};
use crate::qsqrt::{rational_from_f64, to_f64};

/// Weights `psi(P)` on the window primes.
///
/// Float weights drive the experiment. Exact rational weights are always
/// present: for weights derived from the formula they are the exact binary
/// values of the floats, and test tables can supply arbitrary rationals.
#[derive(Clone, Debug)]
pub struct PsiTable {
    field: FieldSpec,
    primes: Vec<Poly>,
    index: HashMap<Poly, usize>,
    weights: Vec<f64>,
    exact: Vec<BigRational>,
}

impl PsiTable {
    /// `psi(P) = scale |P|^{-1/2} (d(P) - log_q(L1 L2))^{-1}`.
    pub fn new(groups: &PrimeGroups) -> PsiTable {
        let q = groups.field().q() as f64;
        let weights = groups
            .primes()
            .iter()
            .map(|p| {
                let d = p.degree().unwrap() as f64;
                groups.psi_scale() * q.powf(-d / 2.0) / (d - groups.offset())
            })
            .collect();
        PsiTable::from_f64(groups.field(), groups.primes().to_vec(), weights)
    }

    pub fn from_f64(field: FieldSpec, primes: Vec<Poly>, weights: Vec<f64>) -> PsiTable {
        assert_eq!(primes.len(), weights.len());
        let exact = weights.iter().map(|&w| rational_from_f64(w)).collect();
        PsiTable::build(field, primes, weights, exact)
    }

    /// Test mode: weights given as exact rationals.
    pub fn from_rationals(field: FieldSpec, primes: Vec<Poly>, exact: Vec<BigRational>) -> PsiTable {
        assert_eq!(primes.len(), exact.len());
        let weights = exact.iter().map(to_f64).collect();
        PsiTable::build(field, primes, weights, exact)
    }

    fn build(
        field: FieldSpec,
        primes: Vec<Poly>,
        weights: Vec<f64>,
        exact: Vec<BigRational>,
    ) -> PsiTable {
        let index = primes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        PsiTable {
            field,
            primes,
            index,
            weights,
            exact,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn weight(&self, prime: usize) -> f64 {
        self.weights[prime]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_weight(&self, prime: usize) -> &BigRational {
        &self.exact[prime]
    }

    pub fn degree(&self, prime: usize) -> usize {
        self.primes[prime].degree().unwrap()
    }

    pub fn index_of(&self, p: &Poly) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Window-prime indices of a squarefree support element, or `None` when
    /// `h` is outside the support.
    pub fn support_factors(&self, h: &Poly) -> Option<Vec<usize>> {
        if h.is_zero() || !h.is_monic() {
            return None;
        }
        let mut out = Vec::new();
        for (p, e) in factor(h).ok()? {
            if e != 1 {
                return None;
            }
            out.push(self.index_of(&p)?);
        }
        out.sort_unstable();
        Some(out)
    }

    /// `psi(h)`: the product of prime weights on the support, 0 elsewhere.
    pub fn psi(&self, h: &Poly) -> f64 {
        self.support_factors(h)
            .map_or(0.0, |f| self.product(&f))
    }

    pub fn product(&self, factors: &[usize]) -> f64 {
        factors.iter().map(|&i| self.weights[i]).product()
    }

    pub fn exact_product(&self, factors: &[usize]) -> BigRational {
        factors.iter().map(|&i| self.exact[i].clone()).product()
    }

    /// `max_P psi(P)`, 0 for an empty window.
    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonator::{build_groups, ResonatorParams};

    fn table() -> PsiTable {
        let f = FieldSpec::new(3).unwrap();
        PsiTable::new(&build_groups(&ResonatorParams::default(), f).unwrap())
    }

    #[test]
    fn weights_follow_the_formula() {
        let t = table();
        let x = 2f64.ln() / 3f64.ln();
        for i in 0..t.len() {
            let d = t.degree(i) as f64;
            let expect = 2f64.sqrt() * 3f64.powf(-d / 2.0) / (d - x);
            assert!((t.weight(i) - expect).abs() < 1e-15);
            assert!(t.weight(i) > 0.0);
            assert_eq!(to_f64(t.exact_weight(i)), t.weight(i));
        }
    }

    #[test]
    fn support_and_multiplicativity() {
        let t = table();
        let f = t.field();
        assert_eq!(t.psi(&Poly::one(f)), 1.0);
        let p1 = t.primes()[0].clone();
        let p2 = t.primes()[5].clone();
        assert_eq!(t.psi(&(&p1 * &p1)), 0.0);
        let outside = Poly::parse(f, "1,2,0,1").unwrap();
        assert_eq!(t.psi(&outside), 0.0);
        let both = t.psi(&(&p1 * &p2));
        assert!((both - t.psi(&p1) * t.psi(&p2)).abs() < 1e-16);
        assert_eq!(t.psi(&(&(&p1 * &p2) * &outside)), 0.0);
    }
}
