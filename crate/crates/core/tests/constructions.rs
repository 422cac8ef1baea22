use proptest::prelude::*;

use gerechte::framework::{begin_counts, classify, generate, GenerateRequest};
use gerechte::realize::{
    divides_square, realize, realize_columns, realize_mixed, realize_tree_traced, realize_uniform,
    reduced_fill, row_realization, Method, RealizeOptions,
};
use gerechte::verify::{verify_realization, verify_row_realization};

fn mixed_params() -> impl Strategy<Value = (usize, usize)> {
    prop::sample::select(vec![
        (1, 2),
        (1, 3),
        (2, 3),
        (2, 4),
        (2, 6),
        (3, 4),
        (3, 6),
        (4, 6),
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mixed_frameworks_realize((s, t) in mixed_params(), seed in any::<u64>()) {
        let f = generate(GenerateRequest::Mixed { s, t }, seed).unwrap();
        prop_assert_eq!(classify(&f).mixed, Some((s, t)));
        let fill = reduced_fill(&f).unwrap();
        prop_assert!(fill.check().is_ok());
        let square = realize_mixed(&f).unwrap();
        prop_assert!(verify_realization(square.grid(), &f).unwrap().ok());
    }

    #[test]
    fn begin_counts_are_divisible((s, t) in mixed_params(), seed in any::<u64>()) {
        let f = generate(GenerateRequest::Mixed { s, t }, seed).unwrap();
        let counts = begin_counts(&f, s, t).unwrap();
        for i in 0..f.order() {
            prop_assert_eq!(counts.landscape_by_row[i] % counts.s_prime, 0);
            prop_assert_eq!(counts.portrait_by_row[i] % counts.t_prime, 0);
            prop_assert_eq!(counts.landscape_by_col[i] % counts.t_prime, 0);
            prop_assert_eq!(counts.portrait_by_col[i] % counts.s_prime, 0);
        }
    }

    #[test]
    fn divides_square_ignores_layout(pick in 0usize..3, seed in any::<u64>()) {
        let (s, c) = [(1, 3), (2, 2), (2, 3)][pick];
        let square = divides_square(s, c).unwrap();
        let f = generate(GenerateRequest::Mixed { s, t: c * s }, seed).unwrap();
        prop_assert!(verify_realization(square.grid(), &f).unwrap().ok());
    }

    #[test]
    fn columns_frameworks_realize(n in 1usize..=24, seed in any::<u64>()) {
        let f = generate(GenerateRequest::Columns { n }, seed).unwrap();
        prop_assert!(classify(&f).columns);
        let square = realize_columns(&f).unwrap();
        prop_assert!(verify_realization(square.grid(), &f).unwrap().ok());
    }

    #[test]
    fn tree_frameworks_realize(n in 1usize..=24, seed in any::<u64>()) {
        let f = generate(GenerateRequest::Tree { n }, seed).unwrap();
        prop_assert!(classify(&f).tree);
        let (square, trace) = realize_tree_traced(&f).unwrap();
        prop_assert!(verify_realization(square.grid(), &f).unwrap().ok());
        for step in &trace.steps {
            prop_assert!(verify_row_realization(step.square.grid(), &f).unwrap().ok());
        }
    }

    #[test]
    fn row_realization_is_row_latin(n in 1usize..=16, seed in any::<u64>()) {
        let f = generate(GenerateRequest::Tree { n }, seed).unwrap();
        let w = row_realization(&f).unwrap();
        prop_assert!(verify_row_realization(w.grid(), &f).unwrap().ok());
    }

    #[test]
    fn auto_is_deterministic(n in 1usize..=16, seed in any::<u64>()) {
        let f = generate(GenerateRequest::Tree { n }, seed).unwrap();
        let a = realize(&f, Method::Auto, &RealizeOptions::default()).unwrap();
        let b = realize(&f, Method::Auto, &RealizeOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn uniform_boxes_up_to_order_thirty_six() {
    for s in 1..=6 {
        for t in s..=36 / s {
            for (h, w) in [(s, t), (t, s)] {
                let f = generate(
                    GenerateRequest::Uniform {
                        height: h,
                        width: w,
                    },
                    0,
                )
                .unwrap();
                let square = realize_uniform(&f).unwrap();
                assert!(
                    verify_realization(square.grid(), &f).unwrap().ok(),
                    "{h}x{w}"
                );
            }
        }
    }
}

#[test]
fn auto_rejects_non_gerechte() {
    let f = gerechte::RegionPartition::parse("2\n1 1\n1 2\n").unwrap();
    assert!(realize(&f, Method::Auto, &RealizeOptions::default()).is_err());
}
