use serde::{Deserialize, Serialize};

pub use crate::real::Real;
use crate::resonator::{ResonatorSpec, TailDiagnostics};

pub const SCHEMA_VERSION: u32 = 1;
pub const HISTOGRAM_BINS: usize = 64;

/// Uniform bins over `[0, max]`; values equal to `max` land in the last bin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<Real>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn build(values: &[f64], max: f64, bins: usize) -> Histogram {
        let edges = (0..=bins).map(|i| Real(max * i as f64 / bins as f64)).collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            let b = if max > 0.0 {
                ((v / max * bins as f64).floor() as usize).min(bins - 1)
            } else {
                0
            };
            counts[b] += 1;
        }
        Histogram { edges, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Exact values of both paths, as `num/den` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactTotals {
    pub s1_direct: String,
    pub s1_decomposition: String,
    /// `[x, y]` with the value `x + y q^(-1/2)`.
    pub s2_direct: [String; 2],
    pub s2_decomposition: [String; 2],
    pub square_part_s21: [String; 2],
    pub picked_s21: [String; 2],
    pub square_part_s22: [String; 2],
    pub picked_s22: [String; 2],
}

/// The square/non-square split of both moments via the character-sum
/// tensor, plus the positivity pick and the Weil budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub s1: Real,
    pub s1_square_part: Real,
    pub s1_nonsquare_part: Real,
    pub s1_weil_budget: Real,
    pub s2: Real,
    pub s2_square_part: Real,
    pub s2_nonsquare_part: Real,
    pub s2_weil_budget: Real,
    pub s21: Real,
    pub s22: Real,
    pub s21_square_part: Real,
    pub s22_square_part: Real,
    pub picked_s21: Real,
    pub picked_s22: Real,
    pub weil_ratio: Real,
    pub keys: usize,
    /// Window primes of the family degree, where `chi_P` can vanish.
    pub overlapping_primes: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checks {
    /// `S2 / S1 <= max |L|`
    pub ratio_at_most_max: bool,
    /// `S2 / S1 >= mean L`
    pub ratio_at_least_mean: bool,
    /// Direct and decomposition totals within `1e-9` relative.
    pub paths_agree: Option<bool>,
    pub exact_paths_equal: Option<bool>,
    /// Square and non-square parts reproduce each total.
    pub split_consistent: Option<bool>,
    /// Square parts of both AFE sums dominate their picked sub-sums.
    pub positivity_pick: Option<bool>,
    pub weil_budget_respected: Option<bool>,
    /// Square-case tensor entries equal the exact square counts.
    pub square_counts_exact: Option<bool>,
    /// `|set| <= N`, asymptotic mode only.
    pub set_size_at_most_n: Option<bool>,
    /// `max psi(P) < L3^(-1/2)`.
    pub psi_below_l3_bound: bool,
}

impl Checks {
    /// Every assertion that was evaluated holds.
    pub fn all_hold(&self) -> bool {
        self.ratio_at_most_max
            && [
                self.paths_agree,
                self.exact_paths_equal,
                self.split_consistent,
                self.positivity_pick,
                self.weil_budget_respected,
                self.square_counts_exact,
            ]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub workers: usize,
    pub chunks: usize,
    pub family_seconds: Real,
    pub scan_seconds: Real,
    pub decomposition_seconds: Real,
    pub total_seconds: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub schema_version: u32,
    pub q: u32,
    pub g: usize,
    pub family_degree: usize,
    pub family_size: u64,
    pub epsilon_prime: Real,
    pub resonator: ResonatorSpec,
    pub s1: Real,
    pub s2: Real,
    /// `sum |L| R^2`
    pub s2_abs: Real,
    pub ratio: Real,
    pub max_abs_l: Real,
    pub argmax_p: String,
    pub mean_l: Real,
    pub mean_abs_l: Real,
    pub theorem_bound: Option<Real>,
    pub fgh_value: Real,
    pub a_n: Real,
    pub le2_reference: Real,
    pub psi_square_sum: Real,
    pub tails: Option<TailDiagnostics>,
    pub decomposition: Option<Decomposition>,
    pub exact: Option<ExactTotals>,
    pub checks: Checks,
    pub histogram: Histogram,
    pub warnings: Vec<String>,
    pub timings: Option<Timings>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_conserves_count() {
        let vals = [0.0, 0.5, 1.0, 2.0, 2.0, 1.99];
        let h = Histogram::build(&vals, 2.0, HISTOGRAM_BINS);
        assert_eq!(h.total(), vals.len() as u64);
        assert_eq!(h.edges.len(), HISTOGRAM_BINS + 1);
        assert_eq!(h.counts[HISTOGRAM_BINS - 1], 3);
        assert_eq!(Histogram::build(&[0.0, 0.0], 0.0, 4).counts, vec![2, 0, 0, 0]);
    }
}
