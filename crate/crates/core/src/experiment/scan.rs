use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{Histogram, Real, HISTOGRAM_BINS};
use super::CHUNK_SIZE;
use crate::field::FieldSpec;
use crate::lseries::{afe_from_degree_sums, AfeEvaluator};
use crate::poly::{irreducibles, Poly};
use crate::qsqrt::QSqrtValue;
use crate::sum::NeumaierSum;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxScan {
    pub q: u32,
    pub g: usize,
    pub family_size: u64,
    pub max_abs_l: Real,
    pub argmax_p: String,
    pub mean_l: Real,
    pub mean_abs_l: Real,
    pub histogram: Histogram,
}

/// Keeps the larger `|L|`, preferring the earlier family index on ties.
pub(crate) fn better(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// `L(1/2, chi_P)` for every `P` in the family through the AFE.
pub(crate) fn central_values(afe: &AfeEvaluator, family: &[Poly], g: usize) -> Vec<QSqrtValue> {
    family
        .par_chunks(CHUNK_SIZE)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|p| {
                let sums = afe.degree_sums(p, g);
                afe_from_degree_sums(p.field().q(), &sums, 0)
            })
        })
        .collect()
}

/// Exact scan of `|L(1/2, chi_P)|` over all monic irreducible `P` of degree
/// `2g + 1`. Runs on the current rayon pool.
pub fn max_scan(field: FieldSpec, g: usize) -> MaxScan {
    let family = irreducibles(field, 2 * g + 1);
    let afe = AfeEvaluator::new(field, g);
    let values: Vec<f64> = central_values(&afe, &family, g)
        .iter()
        .map(QSqrtValue::to_f64)
        .collect();
    summarize(field.q(), g, &family, &values)
}

pub(crate) fn summarize(q: u32, g: usize, family: &[Poly], values: &[f64]) -> MaxScan {
    let abs: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let (max, arg) = abs
        .iter()
        .enumerate()
        .fold((f64::NEG_INFINITY, usize::MAX), |acc, (i, &v)| better(acc, (v, i)));
    let n = values.len().max(1) as f64;
    MaxScan {
        q,
        g,
        family_size: values.len() as u64,
        max_abs_l: Real(max),
        argmax_p: family.get(arg).map(Poly::to_coeff_string).unwrap_or_default(),
        mean_l: Real(values.iter().copied().collect::<NeumaierSum>().value() / n),
        mean_abs_l: Real(abs.iter().copied().collect::<NeumaierSum>().value() / n),
        histogram: Histogram::build(&abs, max, HISTOGRAM_BINS),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lseries::{compute_coefficients, eval_half_exact};

    #[test]
    fn genus_zero_is_flat() {
        for q in [3, 5] {
            let f = FieldSpec::new(q).unwrap();
            let s = max_scan(f, 0);
            assert_eq!(s.max_abs_l.0, 1.0);
            assert_eq!(s.argmax_p, "0,1");
            assert_eq!(s.histogram.total(), q);
        }
    }

    #[test]
    fn genus_one_matches_direct_coefficients() {
        let f = FieldSpec::new(3).unwrap();
        let s = max_scan(f, 1);
        assert_eq!(s.family_size, 8);
        assert_eq!(s.histogram.total(), 8);
        let best = irreducibles(f, 3)
            .iter()
            .map(|p| {
                let l = compute_coefficients(p).unwrap();
                assert_eq!(l.coeffs[2], 3);
                (2.0 + l.coeffs[1] as f64 / 3f64.sqrt()).abs()
            })
            .fold(0.0, f64::max);
        assert!((s.max_abs_l.0 - best).abs() < 1e-15);
        let arg = Poly::parse(f, &s.argmax_p).unwrap();
        let v = eval_half_exact(&compute_coefficients(&arg).unwrap()).to_f64().abs();
        assert_eq!(v, s.max_abs_l.0);
    }

    #[test]
    fn ties_prefer_earlier() {
        assert_eq!(better((1.0, 5), (1.0, 2)), (1.0, 2));
        assert_eq!(better((1.0, 2), (1.0, 5)), (1.0, 2));
        assert_eq!(better((1.0, 2), (1.5, 9)), (1.5, 9));
    }
}
