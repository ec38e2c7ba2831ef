use proptest::prelude::*;

use tsyb_core::dist::{d_delta, QuadSpec, TsybakovDistribution};
use tsyb_core::nn::{concatenate, count_bound, parallelize, random_network, ClassBudget};
use tsyb_core::rng;
use tsyb_core::sets::{BoundaryFn, BoundaryFragmentSet};

fn sine(offset: f64, amplitude: f64) -> BoundaryFn {
    BoundaryFn::Sine { offset, amplitude, frequency: 1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn concatenation_is_composition(seed in any::<u64>(), x0 in 0.0..1.0f64, x1 in 0.0..1.0f64) {
        let mut r = rng::stream(seed, 0, 0);
        let inner = random_network(&mut r, &[2, 3, 2], 4);
        let outer = random_network(&mut r, &[2, 2, 1], 4);
        let h = concatenate(&outer, &inner).unwrap();
        let x = [x0, x1];
        prop_assert!((h.eval(&x)[0] - outer.eval(&inner.eval(&x))[0]).abs() <= 1e-9);
        prop_assert_eq!(h.depth(), outer.depth() + inner.depth() + 1);
    }

    #[test]
    fn parallelization_stacks_outputs(seed in any::<u64>(), x0 in 0.0..1.0f64, x1 in 0.0..1.0f64) {
        let mut r = rng::stream(seed, 1, 0);
        let a = random_network(&mut r, &[2, 3, 3, 1], 3);
        let b = random_network(&mut r, &[2, 2, 1], 3);
        let p = parallelize(&a, &b).unwrap();
        let x = [x0, x1];
        prop_assert_eq!(p.eval(&x), vec![a.eval(&x)[0], b.eval(&x)[0]]);
    }

    #[test]
    fn count_bound_grows_with_budget(d in 1usize..4, l0 in 1usize..4, s0 in 2usize..6, c in 0u32..6) {
        let b = count_bound(&ClassBudget::new(d, l0, s0, c));
        prop_assert!(count_bound(&ClassBudget::new(d, l0, s0 + 1, c)) > b);
        prop_assert!(count_bound(&ClassBudget::new(d, l0, s0, c + 1)) > b);
        prop_assert!(count_bound(&ClassBudget::new(d, l0 + 1, s0, c)) >= b);
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), n in 1usize..64) {
        let q = TsybakovDistribution::single_boundary(2, sine(0.5, 0.2), 1.0, 0.5).unwrap();
        prop_assert_eq!(q.sample(n, seed), q.sample(n, seed));
        prop_assert_eq!(q.sample(n + 5, seed).prefix(n), q.sample(n, seed));
    }

    #[test]
    fn sym_diff_metric_is_symmetric_and_triangular(a in 0.3..0.7f64, b in 0.3..0.7f64, c in 0.3..0.7f64) {
        let q = TsybakovDistribution::single_boundary(2, sine(0.5, 0.1), 0.0, 0.5).unwrap();
        let set = |o: f64| BoundaryFragmentSet::single(2, sine(o, 0.1)).unwrap();
        let (ga, gb, gc) = (set(a), set(b), set(c));
        let spec = QuadSpec::lines(64);
        let ab = d_delta(&q, &ga, &gb, &spec).value;
        let ba = d_delta(&q, &gb, &ga, &spec).value;
        let ac = d_delta(&q, &ga, &gc, &spec).value;
        let cb = d_delta(&q, &gc, &gb, &spec).value;
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!(ab <= ac + cb + 1e-9);
        prop_assert!((ab - (a - b).abs()).abs() < 1e-9);
    }
}
