//! Resonated moments over the family of monic irreducibles of degree `2g+1`:
//! `S1 = sum R(chi_P)^2`, `S2 = sum L(1/2, chi_P) R(chi_P)^2`, and the bound
//! `max |L(1/2, chi_P)| >= S2 / S1`.
//!
//! The family is cut into fixed chunks of `CHUNK_SIZE` moduli. Float partials
//! are reduced in chunk order and integer partials are exact, so reports do
//! not depend on the worker count.

mod bounds;
mod cache;
mod decompose;
mod report;
mod scan;

use std::path::PathBuf;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lseries::{afe_from_degree_sums, AfeEvaluator};
use crate::poly::{irreducibles, Poly};
use crate::qsqrt::{fraction_string, InvSqrtSum, QSqrtValue};
use crate::resonator::{
    a_n_product, build_groups, tail_diagnostics, PsiTable, ResonatorParams, ResonatorSet,
    ResonatorSpec, SUPPORT_PRIME_LIMIT,
};
use crate::sum::NeumaierSum;

pub use bounds::{fgh_value, theorem_bound};
pub use cache::LValueCache;
pub use report::{
    Checks, Decomposition, ExactTotals, Histogram, Real, ResonanceReport, Timings,
    HISTOGRAM_BINS, SCHEMA_VERSION,
};
pub use scan::{max_scan, MaxScan};

pub const CHUNK_SIZE: usize = 256;
const WAVE_CHUNKS: usize = 64;

/// Default cap on `|family| * |M_{<= g}| * keys` for the tensor pass.
pub const DEFAULT_DECOMPOSITION_BUDGET: u128 = 100_000_000_000;
/// Weil-ratio threshold used for the non-square budget.
pub const DEFAULT_WEIL_RATIO: f64 = crate::verify::WEIL_RATIO_THRESHOLD;
pub const DEFAULT_EPSILON_PRIME: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionMode {
    /// Run when within the budget.
    Auto,
    Always,
    Never,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub field: FieldSpec,
    pub genus: usize,
    pub resonator: ResonatorParams,
    pub epsilon_prime: f64,
    /// 0 uses the ambient rayon pool.
    pub workers: usize,
    pub cache_dir: Option<PathBuf>,
    pub member_budget: u128,
    pub decomposition: DecompositionMode,
    pub decomposition_budget: u128,
    /// Exact rational/`Q(sqrt q)` totals for both paths (needs the tensor).
    pub exact_check: bool,
    pub weil_ratio: f64,
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn new(field: FieldSpec, genus: usize) -> ExperimentConfig {
        ExperimentConfig {
            field,
            genus,
            resonator: ResonatorParams::default(),
            epsilon_prime: DEFAULT_EPSILON_PRIME,
            workers: 0,
            cache_dir: None,
            member_budget: crate::resonator::DEFAULT_MEMBER_BUDGET,
            decomposition: DecompositionMode::Auto,
            decomposition_budget: DEFAULT_DECOMPOSITION_BUDGET,
            exact_check: true,
            weil_ratio: DEFAULT_WEIL_RATIO,
            record_timings: false,
        }
    }

    pub fn with_resonator(mut self, params: ResonatorParams) -> Self {
        self.resonator = params;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus == 0 {
            return Err(Error::InvalidParams("genus must be at least 1".into()));
        }
        if !(self.epsilon_prime > 0.0 && self.epsilon_prime < 0.5) {
            return Err(Error::InvalidParams(format!(
                "epsilon' = {} not in (0, 1/2)",
                self.epsilon_prime
            )));
        }
        if !(self.weil_ratio > 0.0) {
            return Err(Error::InvalidParams("Weil ratio must be positive".into()));
        }
        self.resonator.validate()
    }

    pub fn family_degree(&self) -> usize {
        2 * self.genus + 1
    }

    /// `q^{g (1/2 - eps')}`, the scale `N` should match.
    pub fn target_n(&self) -> f64 {
        (self.field.q() as f64).powf(self.genus as f64 * (0.5 - self.epsilon_prime))
    }

    /// Warning text when an asymptotic `N` is off the target by more than 4x.
    pub fn n_consistency_warning(&self) -> Option<String> {
        let n = self.resonator.n_scale()?;
        let target = self.target_n();
        let ratio = n / target;
        (!(0.25..=4.0).contains(&ratio)).then(|| {
            format!("N = {n} is not within a factor 4 of q^(g(1/2 - eps')) = {target:.6}")
        })
    }
}

/// Per-chunk partial results.
struct ChunkOut {
    s1: NeumaierSum,
    s2: NeumaierSum,
    s2_abs: NeumaierSum,
    values: Vec<f64>,
    s1_exact: BigRational,
    s2_exact: InvSqrtSum,
    tensor: Option<Vec<i64>>,
    computed: Vec<(usize, QSqrtValue)>,
}

struct Shared<'a> {
    q: u32,
    g: usize,
    afe: &'a AfeEvaluator,
    set: &'a ResonatorSet,
    pairs: Option<&'a decompose::PairKeys>,
    cache: Option<&'a LValueCache>,
    exact: bool,
    f_count: usize,
}

fn process_chunk(sh: &Shared, start: usize, chunk: &[Poly]) -> ChunkOut {
    let mut out = ChunkOut {
        s1: NeumaierSum::new(),
        s2: NeumaierSum::new(),
        s2_abs: NeumaierSum::new(),
        values: Vec::with_capacity(chunk.len()),
        s1_exact: BigRational::zero(),
        s2_exact: InvSqrtSum::new(sh.q),
        tensor: sh.pairs.map(|p| vec![0i64; p.len() * sh.f_count]),
        computed: Vec::new(),
    };
    for (offset, p) in chunk.iter().enumerate() {
        let cached = sh.cache.and_then(|c| c.get(p)).cloned();
        let table = (cached.is_none() || sh.pairs.is_some()).then(|| sh.afe.character_table(p));
        let l_exact = match cached {
            Some(v) => v,
            None => {
                let sums = sh.afe.sums_from_table(table.as_ref().unwrap(), sh.g);
                let v = afe_from_degree_sums(sh.q, &sums, 0);
                out.computed.push((start + offset, v.clone()));
                v
            }
        };
        let chars = sh.set.window_characters(p);
        let r = sh.set.value(&chars);
        let l = l_exact.to_f64();
        out.s1.add(r * r);
        out.s2.add(l * r * r);
        out.s2_abs.add(l.abs() * r * r);
        out.values.push(l);
        if sh.exact {
            let re = sh.set.value_exact(&chars);
            let r2 = &re * &re;
            out.s2_exact.add_value(&l_exact.scale(&r2));
            out.s1_exact += r2;
        }
        if let (Some(pairs), Some(tensor)) = (sh.pairs, out.tensor.as_mut()) {
            let table = table.as_ref().unwrap();
            let key_chars = pairs.key_characters(&chars);
            decompose::accumulate(tensor, sh.f_count, &key_chars, &table[..sh.f_count]);
        }
    }
    out
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Runs the full experiment and assembles the report.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResonanceReport> {
    cfg.validate()?;
    if cfg.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
        pool.install(|| run_inner(cfg))
    } else {
        run_inner(cfg)
    }
}

fn run_inner(cfg: &ExperimentConfig) -> Result<ResonanceReport> {
    let t0 = Instant::now();
    let field = cfg.field;
    let q = field.q();
    let g = cfg.genus;
    let n = cfg.family_degree();
    let mut warnings = Vec::new();
    if let Some(w) = cfg.n_consistency_warning() {
        log::warn!("{w}");
        warnings.push(w);
    }

    let groups = build_groups(&cfg.resonator, field)?;
    if groups.is_degenerate() {
        warnings.push("resonator window is empty; R is identically 1".into());
    }
    let table = PsiTable::new(&groups);
    let set = match ResonatorSet::enumerate(&groups, &table, cfg.member_budget) {
        Ok(s) => s,
        Err(Error::BudgetExceeded { needed, .. }) => {
            warnings.push(format!(
                "resonator set of size {needed} not materialized; using the grouped product form"
            ));
            ResonatorSet::predicate(&groups, &table)
        }
        Err(e) => return Err(e),
    };
    let spec = ResonatorSpec::from_groups(&groups);

    let family = irreducibles(field, n);
    let family_size = family.len() as u64;
    let t_family = t0.elapsed();

    let afe = AfeEvaluator::new(field, g);
    let f_count = afe.sieve().degree_range(g).end;
    let key_budget_ok = set.members().is_some_and(|m| (m.len() as u128).pow(2) <= 10_000_000);
    let run_decomposition = match cfg.decomposition {
        DecompositionMode::Never => false,
        DecompositionMode::Always => key_budget_ok,
        DecompositionMode::Auto => key_budget_ok,
    };
    let pairs = run_decomposition.then(|| decompose::PairKeys::build(&set, n, cfg.exact_check));
    let pairs = match pairs {
        Some(p)
            if cfg.decomposition == DecompositionMode::Auto
                && family_size as u128 * f_count as u128 * p.len() as u128
                    > cfg.decomposition_budget =>
        {
            warnings.push(format!(
                "decomposition skipped: {} x {} x {} exceeds the budget {}",
                family_size,
                f_count,
                p.len(),
                cfg.decomposition_budget
            ));
            None
        }
        other => other,
    };
    if run_decomposition && !key_budget_ok {
        warnings.push("decomposition skipped: resonator set too large for pair keys".into());
    }
    let exact = cfg.exact_check && pairs.is_some();

    let mut cache = match &cfg.cache_dir {
        Some(dir) => {
            let c = LValueCache::open(dir, q)?;
            if c.was_rebuilt() {
                warnings.push(format!("L-value cache {} was corrupt and rebuilt", c.path().display()));
            }
            Some(c)
        }
        None => None,
    };

    let chunks: Vec<(usize, &[Poly])> = family
        .chunks(CHUNK_SIZE)
        .enumerate()
        .map(|(i, c)| (i * CHUNK_SIZE, c))
        .collect();
    let mut s1 = NeumaierSum::new();
    let mut s2 = NeumaierSum::new();
    let mut s2_abs = NeumaierSum::new();
    let mut values = Vec::with_capacity(family.len());
    let mut s1_exact = BigRational::zero();
    let mut s2_exact = InvSqrtSum::new(q);
    let mut tensor = pairs.as_ref().map(|p| vec![0i64; p.len() * f_count]);

    for wave in chunks.chunks(WAVE_CHUNKS) {
        let outs: Vec<ChunkOut> = {
            let shared = Shared {
                q,
                g,
                afe: &afe,
                set: &set,
                pairs: pairs.as_ref(),
                cache: cache.as_ref(),
                exact,
                f_count,
            };
            wave.par_iter()
                .map(|(start, chunk)| process_chunk(&shared, *start, chunk))
                .collect()
        };
        for out in outs {
            s1.merge(&out.s1);
            s2.merge(&out.s2);
            s2_abs.merge(&out.s2_abs);
            values.extend_from_slice(&out.values);
            if exact {
                s1_exact += out.s1_exact;
                s2_exact.add_value(&out.s2_exact.value());
            }
            if let (Some(t), Some(part)) = (tensor.as_mut(), out.tensor.as_ref()) {
                t.iter_mut().zip(part).for_each(|(a, b)| *a += b);
            }
            if let Some(c) = cache.as_mut() {
                for (i, v) in out.computed {
                    c.insert(&family[i], v);
                }
            }
        }
    }
    if let Some(c) = cache.as_mut() {
        c.flush()?;
    }
    let t_scan = t0.elapsed();

    let scan = scan::summarize(q, g, &family, &values);
    let s1v = s1.value();
    let s2v = s2.value();
    let ratio = s2v / s1v;
    let max_abs = scan.max_abs_l.0;

    let mut checks = Checks {
        ratio_at_most_max: ratio <= max_abs * (1.0 + 4.0 * f64::EPSILON),
        ratio_at_least_mean: ratio >= scan.mean_l.0,
        paths_agree: None,
        exact_paths_equal: None,
        split_consistent: None,
        positivity_pick: None,
        weil_budget_respected: None,
        square_counts_exact: None,
        set_size_at_most_n: cfg.resonator.n_scale().map(|big_n| set.size() as f64 <= big_n),
        psi_below_l3_bound: table.max_weight() < groups.scales().l3.powf(-0.5),
    };
    if checks.set_size_at_most_n == Some(false) {
        warnings.push(format!("resonator set size {} exceeds N", set.size()));
    }
    if !checks.psi_below_l3_bound {
        warnings.push("some psi(P) >= L3^(-1/2)".into());
    }

    let mut decomposition = None;
    let mut exact_totals = None;
    if let (Some(pairs), Some(tensor)) = (pairs.as_ref(), tensor.as_ref()) {
        let a = decompose::analyze(&set, pairs, &afe, g, family_size, tensor, cfg.weil_ratio);
        checks.paths_agree = Some(
            rel_close(a.decomposition.s1.0, s1v, 1e-9) && rel_close(a.decomposition.s2.0, s2v, 1e-9),
        );
        checks.split_consistent = Some(a.split_consistent);
        checks.positivity_pick = Some(a.positivity_pick);
        checks.weil_budget_respected = Some(a.weil_budget_respected);
        checks.square_counts_exact = Some(a.square_counts_exact);
        if let (Some(mut totals), Some(e1), Some(e2)) = (a.exact, a.s1_exact, a.s2_exact) {
            let direct2 = s2_exact.value();
            checks.exact_paths_equal = Some(e1 == s1_exact && e2 == direct2);
            totals.s1_direct = fraction_string(&s1_exact);
            totals.s2_direct = [
                fraction_string(direct2.rational_part()),
                fraction_string(direct2.sqrt_part()),
            ];
            exact_totals = Some(totals);
        }
        decomposition = Some(a.decomposition);
    }
    let t_decomp = t0.elapsed();

    let theorem = match theorem_bound(field, g, cfg.epsilon_prime) {
        Ok(v) => Some(Real(v)),
        Err(e) => {
            warnings.push(format!("theorem bound unavailable: {e}"));
            None
        }
    };
    let tails = (table.len() <= SUPPORT_PRIME_LIMIT)
        .then(|| tail_diagnostics(&set, 0.5 - cfg.epsilon_prime))
        .transpose()?;

    let report = ResonanceReport {
        schema_version: SCHEMA_VERSION,
        q,
        g,
        family_degree: n,
        family_size,
        epsilon_prime: Real(cfg.epsilon_prime),
        resonator: spec,
        s1: Real(s1v),
        s2: Real(s2v),
        s2_abs: Real(s2_abs.value()),
        ratio: Real(ratio),
        max_abs_l: scan.max_abs_l,
        argmax_p: scan.argmax_p,
        mean_l: scan.mean_l,
        mean_abs_l: scan.mean_abs_l,
        theorem_bound: theorem,
        fgh_value: Real(fgh_value(field, n)?),
        a_n: Real(a_n_product(&table)),
        le2_reference: Real(groups.le2_reference()),
        psi_square_sum: Real(set.psi_square_sum()),
        tails,
        decomposition,
        exact: exact_totals,
        checks,
        histogram: scan.histogram,
        warnings,
        timings: cfg.record_timings.then(|| Timings {
            workers: rayon::current_num_threads(),
            chunks: chunks.len(),
            family_seconds: Real(t_family.as_secs_f64()),
            scan_seconds: Real((t_scan - t_family).as_secs_f64()),
            decomposition_seconds: Real((t_decomp - t_scan).as_secs_f64()),
            total_seconds: Real(t0.elapsed().as_secs_f64()),
        }),
    };
    Ok(report)
}
