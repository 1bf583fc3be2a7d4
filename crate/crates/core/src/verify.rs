//! Identity and bound suites run by `ffq verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::FieldSpec;
use crate::lseries::{
    compute_coefficients, eval_half_afe, eval_half_exact, verify_functional_equation, verify_rh,
};
use crate::poly::{enumerate_monic, irreducibles, is_irreducible, Poly};
use crate::quadchar::{char_sum_irreducibles, square_case_count, weil_ratio_scan, WeilScan};

/// Cap asserted on the normalized non-square character sums.
pub const WEIL_RATIO_THRESHOLD: f64 = 2.0;
pub const RH_TOLERANCE: f64 = 1e-8;
pub const RH_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fe,
    Rh,
    Afe,
    Le4,
    Weil,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Fe, Suite::Rh, Suite::Afe, Suite::Le4, Suite::Weil];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Fe => "fe",
            Suite::Rh => "rh",
            Suite::Afe => "afe",
            Suite::Le4 => "le4",
            Suite::Weil => "weil",
        }
    }

    /// Largest degree checked when none is given.
    pub fn default_max_degree(self) -> usize {
        match self {
            Suite::Fe | Suite::Afe => 7,
            Suite::Rh => 9,
            Suite::Le4 | Suite::Weil => 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub q: u32,
    pub max_degree: usize,
    pub checked: usize,
    pub failures: Vec<String>,
    /// Worst deviation or ratio seen, where the suite has one.
    pub worst: Option<f64>,
}

impl SuiteOutcome {
    pub fn empty(suite: Suite, opts: &SuiteOptions) -> SuiteOutcome {
        SuiteOutcome {
            suite,
            q: opts.field.q(),
            max_degree: opts.max_degree,
            checked: 0,
            failures: Vec::new(),
            worst: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let worst = self.worst.map(|w| format!(", worst {w:.3e}")).unwrap_or_default();
        format!(
            "{} q={} max_deg={}: {} checked, {} failed{}",
            self.suite.name(),
            self.q,
            self.max_degree,
            self.checked,
            self.failures.len(),
            worst
        )
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub field: FieldSpec,
    pub max_degree: usize,
    /// RH: number of sampled moduli.
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Weil and Le4: largest degree of the argument `f` or `l`.
    pub max_arg_degree: usize,
    pub threshold: f64,
}

impl SuiteOptions {
    pub fn new(field: FieldSpec, suite: Suite) -> SuiteOptions {
        SuiteOptions {
            field,
            max_degree: suite.default_max_degree(),
            samples: RH_SAMPLES,
            seed: DEFAULT_SEED,
            tolerance: RH_TOLERANCE,
            max_arg_degree: 4,
            threshold: WEIL_RATIO_THRESHOLD,
        }
    }
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::empty(suite, opts);
    match suite {
        Suite::Fe => fe(opts, &mut out)?,
        Suite::Rh => rh(opts, &mut out)?,
        Suite::Afe => afe(opts, &mut out)?,
        Suite::Le4 => le4(opts, &mut out)?,
        Suite::Weil => {
            weil(opts, &mut out)?;
        }
    }
    Ok(out)
}

fn all_moduli(field: FieldSpec, max_degree: usize) -> Vec<Poly> {
    (1..=max_degree).flat_map(|d| irreducibles(field, d)).collect()
}

fn fe(opts: &SuiteOptions, out: &mut SuiteOutcome) -> Result<()> {
    let moduli = all_moduli(opts.field, opts.max_degree);
    let bad: Vec<String> = moduli
        .par_iter()
        .map(|p| compute_coefficients(p).map(|l| (!verify_functional_equation(&l)).then(|| p.to_coeff_string())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.checked = moduli.len();
    out.failures = bad;
    Ok(())
}

/// A uniformly random monic irreducible of degree `d`.
pub fn random_irreducible(field: FieldSpec, d: usize, rng: &mut impl Rng) -> Poly {
    let q = field.q();
    loop {
        let mut c: Vec<u32> = (0..d).map(|_| rng.gen_range(0..q)).collect();
        c.push(1);
        let p = Poly::new(field, c);
        if is_irreducible(&p).unwrap_or(false) {
            return p;
        }
    }
}

/// `samples` moduli with degrees cycling through `1..=max_degree`.
pub fn sample_moduli(field: FieldSpec, max_degree: usize, samples: usize, seed: u64) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|i| random_irreducible(field, 1 + i % max_degree, &mut rng))
        .collect()
}

fn rh(opts: &SuiteOptions, out: &mut SuiteOutcome) -> Result<()> {
    let moduli = sample_moduli(opts.field, opts.max_degree, opts.samples, opts.seed);
    let checks = moduli
        .par_iter()
        .map(|p| verify_rh(&compute_coefficients(p)?, opts.tolerance).map(|c| (p, c)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (p, c) in checks {
        worst = worst.max(c.max_deviation);
        if !c.ok {
            out.failures
                .push(format!("{}: deviation {:.3e}", p.to_coeff_string(), c.max_deviation));
        }
    }
    out.checked = moduli.len();
    out.worst = Some(worst);
    Ok(())
}

fn afe(opts: &SuiteOptions, out: &mut SuiteOutcome) -> Result<()> {
    let moduli = all_moduli(opts.field, opts.max_degree);
    let bad: Vec<String> = moduli
        .par_iter()
        .map(|p| {
            let exact = eval_half_exact(&compute_coefficients(p)?);
            Ok((eval_half_afe(p)? != exact).then(|| p.to_coeff_string()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    out.checked = moduli.len();
    out.failures = bad;
    Ok(())
}

fn le4(opts: &SuiteOptions, out: &mut SuiteOutcome) -> Result<()> {
    for dl in 0..=opts.max_arg_degree {
        for l in enumerate_monic(opts.field, dl) {
            let square = l.checked_mul(&l)?;
            for n in 1..=opts.max_degree {
                let got = char_sum_irreducibles(&square, n)?.sum;
                let want = square_case_count(&l, n)?;
                out.checked += 1;
                if got != want {
                    out.failures.push(format!(
                        "l={} n={n}: sum {got}, expected {want}",
                        l.to_coeff_string()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Runs the Weil-ratio scan and records rows above the threshold as failures.
pub fn weil(opts: &SuiteOptions, out: &mut SuiteOutcome) -> Result<WeilScan> {
    let scan = weil_ratio_scan(opts.field, opts.max_arg_degree, 1..=opts.max_degree)?;
    out.checked = scan.rows.len();
    out.worst = Some(scan.max_ratio);
    out.failures = scan
        .rows
        .iter()
        .filter(|r| r.ratio > opts.threshold)
        .map(|r| format!("f={} n={}: ratio {:.6}", r.f, r.n, r.ratio))
        .collect();
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldSpec {
        FieldSpec::new(3).unwrap()
    }

    #[test]
    fn small_suites_pass() {
        for suite in Suite::ALL {
            let mut opts = SuiteOptions::new(f3(), suite);
            opts.max_degree = 4;
            opts.samples = 20;
            opts.max_arg_degree = 2;
            let o = run_suite(suite, &opts).unwrap();
            assert!(o.passed(), "{}", o.summary());
            assert!(o.checked > 0);
        }
    }

    #[test]
    fn weil_threshold_can_fail() {
        let mut opts = SuiteOptions::new(f3(), Suite::Weil);
        opts.max_degree = 3;
        opts.max_arg_degree = 2;
        opts.threshold = 1e-3;
        assert!(!run_suite(Suite::Weil, &opts).unwrap().passed());
    }

    #[test]
    fn sampling_is_seeded() {
        let a = sample_moduli(f3(), 9, 30, 7);
        assert_eq!(a, sample_moduli(f3(), 9, 30, 7));
        assert_ne!(a, sample_moduli(f3(), 9, 30, 8));
        assert!(a.iter().all(|p| is_irreducible(p).unwrap()));
        assert_eq!(a[8].degree(), Some(9));
    }
}
