//! Property suites: metric axioms, counting invariants, cover monotonicity,
//! dimension realizations, shift stability, and the orchestration-level
//! behaviours (fault injection, empty runs, grid shapes).

mod common;

use num::rational::Ratio;
use num::{BigRational, BigUint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use slowentropy::config::parse_config;
use slowentropy::cover::{caratheodory_value, vitali_5r_select, ClassifySchedule};
use slowentropy::dims::{slow_entropy_dimension, Tolerances};
use slowentropy::lattice::{
    bowen_ball_as_cylinder, metric_distance, ActionSpec, Alphabet, BowenBall, PeriodicPoint, Word,
};
use slowentropy::measures::{local_slow_entropy, uniform_on_sparse, SamplePoint};
use slowentropy::scalar::Radical;
use slowentropy::subsets::{benchmarks, SubsetDescriptor};

fn line() -> ActionSpec {
    ActionSpec::one_sided_line()
}

fn r(p: u64, q: u64) -> Ratio<u64> {
    Ratio::new(p, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metric_axioms(
        a in proptest::collection::vec(0u8..3, 6),
        b in proptest::collection::vec(0u8..3, 6),
        c in proptest::collection::vec(0u8..3, 6),
    ) {
        let action = line();
        let (wa, wb, wc) = (Word(a), Word(b), Word(c));
        let dab = metric_distance(&action, &wa, &wb).unwrap();
        let dba = metric_distance(&action, &wb, &wa).unwrap();
        prop_assert_eq!(&dab, &dba);
        prop_assert_eq!(dab == num::rational::Ratio::from_integer(BigUint::ZERO), wa == wb);
        let dac = metric_distance(&action, &wa, &wc).unwrap();
        let dcb = metric_distance(&action, &wc, &wb).unwrap();
        prop_assert!(dab <= dac + dcb);
    }

    #[test]
    fn ball_cylinder_correspondence(
        pre in proptest::collection::vec(0u8..2, 0..4),
        order in 1u64..5,
        eps_num in 1u64..9,
    ) {
        // every radius p/10 < 1; both routes decide membership identically
        let action = line();
        let eps = Ratio::new(eps_num, 10);
        let x = PeriodicPoint::new(pre.clone(), vec![0]).unwrap();
        let y = PeriodicPoint::new(pre, vec![1]).unwrap();
        let n_eps = action.cylinder_depth_for_radius(eps).unwrap();
        let depth = (order + n_eps - 1) as u32;
        let member =
            slowentropy::lattice::power_ball_member(&action, 1, &x, &y, order, eps).unwrap();
        prop_assert_eq!(member, x.prefix(depth) == y.prefix(depth));
    }

    #[test]
    fn prefix_enumeration_invariants(n in 1u64..9) {
        for desc in [
            benchmarks::zeros_then_ones(Alphabet::new(2).unwrap()),
            benchmarks::golden_mean(Alphabet::new(2).unwrap()),
            benchmarks::sparse_powers_of_two(2),
        ] {
            let words = desc.enumerate_prefixes(n, 100_000).unwrap();
            // cardinality matches the exact count
            prop_assert_eq!(
                BigUint::from(words.len()),
                desc.prefix_count(n)
            );
            // pairwise distinct and sorted
            prop_assert!(words.windows(2).all(|w| w[0] < w[1]));
            // closed sets: every prefix extends one level deeper
            let deeper = desc.enumerate_prefixes(n + 1, 200_000).unwrap();
            for w in &words {
                prop_assert!(deeper.iter().any(|d| w.is_prefix_of(d)));
            }
        }
    }

    #[test]
    fn union_counts_subadditive(n in 0u64..10) {
        let a = benchmarks::sparse_powers_of_two(2);
        let b = benchmarks::zeros_then_ones(Alphabet::new(2).unwrap());
        let u = SubsetDescriptor::union(vec![a.clone(), b.clone()]);
        prop_assert!(u.prefix_count(n) <= a.prefix_count(n) + b.prefix_count(n));
    }

    #[test]
    fn cover_value_monotonicity(
        min_order in 1u64..6,
        cap_exp in 5u32..9,
        eps_den in 2u64..8,
    ) {
        // nonincreasing in the cap, nondecreasing in the minimum order,
        // nondecreasing as the radius shrinks; all compares exact
        let desc = benchmarks::sparse_powers_of_two(2);
        let s = r(1, 1);
        let eps = Ratio::new(1, eps_den);
        let cap = 1u64 << cap_exp;
        let base = caratheodory_value::<Radical>(&line(), &desc, s, min_order, eps, cap)
            .unwrap()
            .value;
        let deeper = caratheodory_value::<Radical>(&line(), &desc, s, min_order, eps, 2 * cap)
            .unwrap()
            .value;
        prop_assert!(deeper <= base);
        let stricter =
            caratheodory_value::<Radical>(&line(), &desc, s, min_order + 1, eps, cap)
                .unwrap()
                .value;
        prop_assert!(stricter >= base);
        let finer = caratheodory_value::<Radical>(
            &line(),
            &desc,
            s,
            min_order,
            Ratio::new(1, eps_den + 1),
            cap,
        )
        .unwrap()
        .value;
        prop_assert!(finer >= base);
    }

    #[test]
    fn vitali_postconditions_random(seed in 0u64..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x517a);
        rng.set_stream(seed);
        let (ok, why) =
            slowentropy::cli::covering_selection_trial(&line(), 2, &mut rng).unwrap();
        prop_assert!(ok, "{}", why);
    }

    #[test]
    fn local_estimate_below_tail(choice_seed in 0u64..64) {
        // the lim inf estimate never exceeds any recorded tail value
        let desc = benchmarks::sparse_powers_of_two(2);
        let SubsetDescriptor::Sparse(sp) = &desc else { unreachable!() };
        let mu = uniform_on_sparse(sp);
        let mut prefix = vec![0u8; 1 << 11];
        let mut bit = choice_seed;
        for (i, slot) in prefix.iter_mut().enumerate() {
            if sp.generator.is_free(i as u64) {
                *slot = (bit & 1) as u8;
                bit = bit.rotate_right(1);
            }
        }
        let est = local_slow_entropy(
            &line(),
            &mu,
            &SamplePoint::Prefix(prefix),
            r(2, 5),
            &[62, 254, 1022],
        )
        .unwrap();
        let tail_min = est.values[est.values.len() - 2..]
            .iter()
            .map(|&(_, v)| v)
            .fold(f64::INFINITY, f64::min);
        prop_assert!(est.liminf_estimate <= tail_min + 1e-12);
    }
}

#[test]
fn nested_balls_select_the_shallower() {
    let eps = r(1, 10);
    let mut deep = vec![0u8; 13];
    deep.extend_from_slice(&[1, 0]);
    deep.resize(24, 0);
    let balls = vec![
        BowenBall::new(Word(vec![0; 24]), 5, eps).unwrap(),
        BowenBall::new(Word(deep), 7, eps).unwrap(),
    ];
    let kept = vitali_5r_select(&line(), &balls).unwrap();
    assert_eq!(kept, vec![0]);
    let kept_cyl = bowen_ball_as_cylinder(&line(), &balls[0]).unwrap();
    let swallowed = bowen_ball_as_cylinder(&line(), &balls[1]).unwrap();
    assert!(kept_cyl.contains(&swallowed));
}

/// Tunable-dimension realizations: free positions at powers of `base` with
/// `branching` choices hit the target exponent within 0.1.
#[test]
fn realized_dimensions_hit_targets() {
    let schedule = ClassifySchedule::default_ladder(1 << 12);
    let tol = Tolerances::default();
    let eps = [r(1, 2), r(1, 4)];
    let cases: Vec<(u32, u8, f64)> = vec![
        (4, 2, 0.5),
        (2, 2, 1.0),
        (2, 3, 3f64.log2()),
        (2, 4, 2.0),
    ];
    for (base, branching, target) in cases {
        let desc = benchmarks::sparse_powers(base, branching);
        let (e, _, _, _) =
            slow_entropy_dimension(&line(), &desc, &eps, &schedule, tol).unwrap();
        assert!(
            (e.as_f64() - target).abs() <= 0.1,
            "base {base} branching {branching}: {e:?} vs {target}"
        );
    }
}

/// Shift-union stability: the dimension of `Z + sigma Z + sigma^2 Z` matches
/// the dimension of `Z` for the sparse benchmarks.
#[test]
fn shift_union_preserves_dimension() {
    let schedule = ClassifySchedule::default_ladder(1 << 10);
    let tol = Tolerances::default();
    let eps = [r(1, 2), r(1, 4)];
    for b in [2u8, 4] {
        let z = benchmarks::sparse_powers_of_two(b);
        let union = SubsetDescriptor::union(vec![
            z.clone(),
            z.shift_image(1),
            z.shift_image(2),
        ]);
        let (base, _, _, _) =
            slow_entropy_dimension(&line(), &z, &eps, &schedule, tol).unwrap();
        let (shifted, _, _, _) =
            slow_entropy_dimension(&line(), &union, &eps, &schedule, tol).unwrap();
        assert!(
            (base.as_f64() - shifted.as_f64()).abs() <= 0.1,
            "b={b}: {base:?} vs {shifted:?}"
        );
    }
}

/// Diameter-weighted cover values: vanishing for a countable set as the cap
/// grows, divergent for a sparse product below its dimension as the diameter
/// bound shrinks.
#[test]
fn hausdorff_value_trends() {
    use slowentropy::cover::hausdorff_value;
    let zo = benchmarks::zeros_then_ones(Alphabet::new(2).unwrap());
    let mut prev: Option<Radical> = None;
    for cap in [64u64, 256, 1024, 4096] {
        let v = hausdorff_value::<Radical>(&line(), &zo, r(1, 2), r(1, 4), cap)
            .unwrap()
            .value;
        if let Some(p) = &prev {
            assert!(v < *p, "countable set must decay with the cap");
        }
        prev = Some(v);
    }
    // singleton: one cylinder of the full depth, diameter weight (1/51)
    let single = benchmarks::singleton_zero();
    let v = hausdorff_value::<Radical>(&line(), &single, r(1, 1), r(1, 4), 50)
        .unwrap()
        .value;
    assert_eq!(v, Radical::ball_weight(51, r(1, 1)));
    // sp2 below its dimension: the value grows as the diameter bound shrinks
    let sp2 = benchmarks::sparse_powers_of_two(2);
    let mut prev: Option<f64> = None;
    for delta_den in [4u64, 16, 64, 256] {
        let v: f64 = hausdorff_value::<f64>(&line(), &sp2, r(1, 2), r(1, delta_den), 4096)
            .unwrap()
            .value;
        if let Some(p) = prev {
            assert!(v > p, "sub-dimensional weight must grow as delta shrinks");
        }
        prev = Some(v);
    }
}

/// Point-mass distribution principle: local values vanish, so the upper
/// direction holds at s = 0 and matches the computed exponent.
#[test]
fn point_mass_distribution_principle() {
    use slowentropy::measures::{distribution_principle_check, Direction, MeasureDescriptor};
    let single = benchmarks::singleton_zero();
    let mu = MeasureDescriptor::PointMass {
        point: PeriodicPoint::constant(0),
    };
    let check = distribution_principle_check(
        &line(),
        &mu,
        &single,
        0.0,
        Direction::Upper,
        r(2, 5),
        &[8, 10, 12],
        16,
        3,
        &ClassifySchedule::default_ladder(1 << 10),
        Tolerances::default(),
    )
    .unwrap();
    assert!(check.holds);
    assert!(check.implication_consistent);
    assert_eq!(check.computed_exponent.as_f64(), 0.0);
}

/// On the full shift both sides of the variational comparison are infinite:
/// the classifier fires on the cover side and the fair-coin measure drives
/// the measure side beyond any threshold.
#[test]
fn full_shift_both_sides_infinite() {
    use slowentropy::measures::{measure_slow_entropy, IntegrationSpec, MeasureDescriptor};
    let full = benchmarks::full_shift(Alphabet::new(2).unwrap());
    let (e, _, _, _) = slow_entropy_dimension(
        &line(),
        &full,
        &[r(1, 2)],
        &ClassifySchedule::default_ladder(1 << 10),
        Tolerances::default(),
    )
    .unwrap();
    assert!(e.is_infinite());
    let coin = MeasureDescriptor::Bernoulli {
        probs: vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
        ],
    };
    let mse = measure_slow_entropy(
        &line(),
        &coin,
        &[r(2, 5)],
        &[8, 9, 10],
        &IntegrationSpec::MonteCarlo {
            samples: 32,
            seed: 9,
        },
    )
    .unwrap();
    assert!(mse.value.as_f64().is_infinite());
}

/// The generator-cover value is bounded by every uniform-depth cover.
#[test]
fn generator_cover_uniform_bound() {
    let desc = benchmarks::golden_mean(Alphabet::new(2).unwrap());
    let s = r(2, 1);
    let bv =
        slowentropy::cover::bowen_cover_slow_value::<Radical>(&desc, s, 2, 32).unwrap();
    for n in [2u64, 8, 32] {
        let bound = Radical::ball_weight(n, s)
            .scale(&BigRational::from_integer(num::BigInt::from_biguint(
                num::bigint::Sign::Plus,
                desc.prefix_count(n),
            )));
        assert!(bv.value <= bound);
    }
}

// ---------------------------------------------------------------------------
// orchestration-level behaviours
// ---------------------------------------------------------------------------

const MINIMAL: &str = r#"
[action]
d = 1
sided = "one-sided"

[alphabet]
k = 2
"#;

#[test]
fn empty_subset_list_reports_cleanly() {
    let cfg = parse_config(MINIMAL).unwrap();
    let report = slowentropy::cli::run_analyze(&cfg);
    assert_eq!(report.failure_count(), 0);
    assert!(report.subsets.is_empty());
}

#[test]
fn fault_injection_breaks_the_chain() {
    let text = format!(
        "{MINIMAL}
[subsets.sp2]
kind = \"sparse-product\"
branching = 2
generator = {{ kind = \"powers\", base = 2 }}

[verify]
chain-s = [\"1/2\"]
chain-delta = [\"1/10\"]
inject-fault = true
ball-families = 5
"
    );
    let cfg = parse_config(&text).unwrap();
    let report = slowentropy::cli::run_verify(&cfg, 0);
    let chain_failures: Vec<_> = report
        .checks
        .iter()
        .filter(|c| c.name.starts_with("weighted-chain/") && !c.passed)
        .collect();
    assert!(
        !chain_failures.is_empty(),
        "an injected weight fault must surface in the chain checks"
    );
    // and the honest run passes
    let honest = text.replace("inject-fault = true", "inject-fault = false");
    let cfg = parse_config(&honest).unwrap();
    let report = slowentropy::cli::run_verify(&cfg, 0);
    assert_eq!(report.failure_count(), 0, "{:#?}", report.checks);
}

#[test]
fn sweep_grid_shape_and_determinism() {
    let text = format!(
        "{MINIMAL}
[subsets.sp2]
kind = \"sparse-product\"
branching = 2
generator = {{ kind = \"powers\", base = 2 }}

[subsets.single]
kind = \"finite\"
points = [{{ period = [0] }}]

[sweep]
subsets = [\"sp2\", \"single\"]
s-values = [\"1/2\", \"1\", \"3/2\"]
min-orders = [2]
epsilons = [\"2/5\"]
caps = [64, 128]
"
    );
    let cfg = parse_config(&text).unwrap();
    let out = slowentropy::cli::run_sweep(&cfg).unwrap();
    let rows: Vec<&str> = out.csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2 * 3 * 2, "one row per grid cell");
    assert!(!out.truncated);
    let cfg2 = parse_config(&text).unwrap();
    let again = slowentropy::cli::run_sweep(&cfg2).unwrap();
    assert_eq!(out.csv, again.csv);
}

#[test]
fn analyze_full_benchmark_identities_hold() {
    let text = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/benchmark.toml"
    ));
    let cfg = parse_config(text).unwrap();
    let report = slowentropy::cli::run_analyze(&cfg);
    assert_eq!(report.failure_count(), 0, "{:#?}", report.summary_lines());
    for (name, doc) in &report.subsets {
        assert!(doc.identity_dim_vs_hausdorff, "{name}");
        assert!(doc.identity_box_vs_cover, "{name}");
        assert!(doc.order_generator_vs_cover, "{name}");
    }
}
