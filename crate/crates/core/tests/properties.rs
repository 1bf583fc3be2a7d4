use proptest::prelude::*;

use ffq::experiment::{run_experiment, DecompositionMode, ExperimentConfig};
use ffq::lseries::{compute_coefficients, eval_half_exact};
use ffq::poly::{count_irreducibles, enumerate_monic, factor_shape, irreducibles, is_irreducible, monic_count};
use ffq::quadchar::{symbol_euler, symbol_fast};
use ffq::resonator::{build_groups, PsiTable, ResonatorParams, ResonatorSet, DEFAULT_MEMBER_BUDGET};
use ffq::verify::random_irreducible;
use ffq::{FieldSpec, Poly};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(q: u64) -> FieldSpec {
    FieldSpec::new(q).unwrap()
}

fn poly(q: u64, max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q as u32, 1..=max_len).prop_map(move |c| Poly::new(field(q), c))
}

fn monic(q: u64, min_deg: usize, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..q as u32, min_deg..=max_deg).prop_map(move |mut c| {
        c.push(1);
        Poly::new(field(q), c)
    })
}

/// A monic irreducible drawn by seed.
fn prime(q: u64, max_deg: usize) -> impl Strategy<Value = Poly> {
    (1..=max_deg, any::<u64>()).prop_map(move |(d, seed)| {
        random_irreducible(field(q), d, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn characters_are_completely_multiplicative(
        (f, g, p) in prop_oneof![Just(3u64), Just(5), Just(7)]
            .prop_flat_map(|q| (poly(q, 7), poly(q, 7), prime(q, 5)))
    ) {
        let fg = &f * &g;
        let lhs = symbol_fast(&fg, &p).unwrap().as_i8();
        let rhs = symbol_fast(&f, &p).unwrap().as_i8() * symbol_fast(&g, &p).unwrap().as_i8();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn factor_shape_round_trips(f in prop_oneof![Just(3u64), Just(5), Just(7)].prop_flat_map(|q| monic(q, 0, 12))) {
        let shape = factor_shape(&f).unwrap();
        prop_assert_eq!(shape.reconstruct(), f.clone());
        let s = &shape.squarefree_part;
        if s.degree().unwrap_or(0) > 0 {
            let d = s.derivative();
            prop_assert!(!d.is_zero());
            prop_assert!(ffq::poly::gcd(s, &d).unwrap().is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn reciprocity_matches_euler_at_larger_q(
        (f, p) in prop_oneof![Just(5u64), Just(7)].prop_flat_map(|q| (poly(q, 9), prime(q, 6)))
    ) {
        prop_assert_eq!(symbol_fast(&f, &p).unwrap(), symbol_euler(&f, &p).unwrap());
    }

    #[test]
    fn l_polynomial_invariants(p in prop_oneof![Just(3u64), Just(5)].prop_flat_map(|q| prime(q, 6))) {
        let l = compute_coefficients(&p).unwrap();
        prop_assert_eq!(l.coeffs[0], 1);
        prop_assert_eq!(l.reconstruct(), l.coeffs.clone());
        let q = p.field().q() as f64;
        let float = l.eval_f64(q.powf(-0.5));
        let exact = eval_half_exact(&l).to_f64();
        prop_assert!((float - exact).abs() <= 1e-10 * exact.abs().max(1.0));
    }
}

#[test]
fn monic_counts_are_powers_of_q() {
    for q in [3u64, 5, 7] {
        for n in 0..=6 {
            assert_eq!(enumerate_monic(field(q), n).count() as u64, q.pow(n as u32));
            assert_eq!(monic_count(field(q), n), q.pow(n as u32));
        }
    }
}

#[test]
fn irreducible_counts_match_enumeration() {
    for q in [3u64, 5, 7] {
        for n in 1..=8 {
            assert_eq!(irreducibles(field(q), n).len() as u128, count_irreducibles(field(q), n));
        }
    }
}

#[test]
fn prime_polynomial_theorem_to_degree_13() {
    for q in [3u64, 5] {
        for n in 1..=13 {
            let c = count_irreducibles(field(q), n) as f64;
            let main = (q as f64).powi(n as i32) / n as f64;
            assert!((c - main).abs() <= 2.0 * (q as f64).powf(n as f64 / 2.0) / n as f64);
        }
    }
}

#[test]
fn irreducibility_matches_trial_division() {
    let f3 = field(3);
    for n in 1..=6 {
        for f in enumerate_monic(f3, n) {
            let by_division = (1..=n / 2)
                .all(|d| enumerate_monic(f3, d).all(|g| !f.rem(&g).unwrap().is_zero()));
            assert_eq!(is_irreducible(&f).unwrap(), by_division, "{f}");
        }
    }
}

fn character_sum(p: &Poly, n: usize) -> i64 {
    enumerate_monic(p.field(), n)
        .map(|f| symbol_fast(&f, p).unwrap().as_i8() as i64)
        .sum()
}

#[test]
fn orthogonality_beyond_the_modulus_degree() {
    for d in 1..=4 {
        for p in irreducibles(field(3), d) {
            for n in d..=d + 2 {
                assert_eq!(character_sum(&p, n), 0, "P={p} n={n}");
            }
        }
    }
}

#[test]
fn degree_bound_sums_vanish() {
    for d in 1..=7 {
        for p in irreducibles(field(3), d) {
            assert_eq!(character_sum(&p, d), 0, "P={p}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=7 {
        let ps: Vec<Poly> = if d <= 4 {
            irreducibles(field(5), d)
        } else {
            (0..8).map(|_| random_irreducible(field(5), d, &mut rng)).collect()
        };
        for p in ps {
            assert_eq!(character_sum(&p, d), 0, "P={p}");
        }
    }
}

fn explicit_params() -> impl Strategy<Value = ResonatorParams> {
    (1usize..=3, 0usize..=1, prop::collection::vec(0u64..=3, 3), 0.25f64..3.0).prop_map(|(lo, span, caps, s)| {
        let hi = lo + span;
        ResonatorParams::default()
            .with_window(lo, hi)
            .with_caps(caps[..=span].to_vec())
            .with_psi_scale(s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resonator_set_invariants(params in explicit_params()) {
        let f3 = field(3);
        let groups = build_groups(&params, f3).unwrap();
        let table = PsiTable::new(&groups);
        let set = ResonatorSet::enumerate(&groups, &table, DEFAULT_MEMBER_BUDGET).unwrap();
        prop_assert!(set.size() <= ResonatorSet::count(&groups));
        let pred = ResonatorSet::predicate(&groups, &table);
        for m in set.members().unwrap() {
            prop_assert!(pred.contains(&set.member_poly(m)));
        }
        let p = Poly::new(f3, vec![1, 0, 0, 2, 0, 1, 2, 1]);
        let chars = set.window_characters(&p);
        let direct = set.value_direct(&chars).unwrap();
        let grouped = set.value_grouped(&chars);
        prop_assert!((direct - grouped).abs() <= 1e-12 * direct.abs().max(1.0));
        if let Some(product) = set.value_product(&chars) {
            prop_assert!((direct - product).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn experiment_paths_agree_and_bound_holds(params in explicit_params(), g in 1usize..=3) {
        let mut cfg = ExperimentConfig::new(field(3), g).with_resonator(params);
        cfg.decomposition = DecompositionMode::Always;
        let r = run_experiment(&cfg).unwrap();
        prop_assert!(r.checks.ratio_at_most_max);
        if r.resonator.set_size <= 1000 {
            prop_assert_eq!(r.checks.paths_agree, Some(true));
            prop_assert_eq!(r.checks.exact_paths_equal, Some(true));
            prop_assert_eq!(r.checks.split_consistent, Some(true));
            prop_assert_eq!(r.checks.weil_budget_respected, Some(true));
        }
        let again = run_experiment(&cfg).unwrap();
        prop_assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }
}

#[test]
fn trivial_resonator_gives_the_mean() {
    let params = ResonatorParams::default().with_caps(vec![0, 0]);
    for g in 1..=3 {
        let r = run_experiment(&ExperimentConfig::new(field(3), g).with_resonator(params.clone())).unwrap();
        assert_eq!(r.resonator.set_size, 1);
        assert!((r.ratio.0 - r.mean_l.0).abs() <= 1e-12 * r.mean_l.0);
    }
}

#[test]
fn default_resonator_beats_the_mean() {
    for g in 1..=5 {
        let r = run_experiment(&ExperimentConfig::new(field(3), g)).unwrap();
        assert!(r.checks.ratio_at_least_mean, "g={g}: {} < {}", r.ratio.0, r.mean_l.0);
    }
}
