//! Property tests for the structural invariants.

use proptest::prelude::*;
use spherex::decompose::{collapse, fold_quadratic, multilinear_parts, FoldScaling};
use spherex::poly::{orbit_size, sos_matrix, tuple_count, HomogPoly, MultiIndex};
use spherex::Capacity;

fn poly_strategy(n: usize, d: u32) -> impl Strategy<Value = HomogPoly<f64>> {
    let monos = MultiIndex::enumerate(n, d);
    let len = monos.len();
    proptest::collection::vec(-4i32..=4, len).prop_map(move |coeffs| {
        let terms = monos
            .iter()
            .cloned()
            .zip(coeffs.iter().map(|&c| c as f64 / 4.0));
        HomogPoly::from_terms(n, d, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Orbit sizes over a degree shell sum to the number of tuples.
    #[test]
    fn orbit_sizes_partition_tuples(n in 1usize..=4, d in 0u32..=6) {
        let total: u128 = MultiIndex::enumerate(n, d)
            .iter()
            .map(|a| orbit_size(a).unwrap())
            .sum();
        prop_assert_eq!(total, tuple_count(n, d as usize).unwrap());
    }

    /// pow agrees pointwise with scalar powers.
    #[test]
    fn pow_is_pointwise_power(f in poly_strategy(3, 2), r in 1u32..=3, x in proptest::collection::vec(-1.0f64..1.0, 3)) {
        let cap = Capacity::default();
        let g = f.pow(r, &cap).unwrap();
        let fx = f.eval(&x).unwrap();
        let gx = g.eval(&x).unwrap();
        let want = fx.powi(r as i32);
        prop_assert!((gx - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    /// The SoS-symmetric matrix represents the polynomial and passes the
    /// exhaustive symmetry scan.
    #[test]
    fn sos_matrix_represents(f in poly_strategy(3, 4), x in proptest::collection::vec(-1.0f64..1.0, 3)) {
        let cap = Capacity::default();
        let m = sos_matrix(&f, &cap).unwrap();
        prop_assert_eq!(m.sos_symmetry_defect(), 0.0);
        let got = m.quadratic_form(&x).unwrap();
        let want = f.eval(&x).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    /// Exact fold round-trip on dyadic coefficients.
    #[test]
    fn fold_round_trip_exact(f in poly_strategy(2, 4)) {
        let cap = Capacity::default();
        let fr = f.to_rational();
        let h = fold_quadratic(&fr, FoldScaling::UnfoldExact, &cap).unwrap();
        prop_assert_eq!(h.unfold(), fr);
    }

    /// Multilinear parts are multilinear and reconstruct f.
    #[test]
    fn parts_reconstruct(f in poly_strategy(4, 5), x in proptest::collection::vec(-1.0f64..1.0, 4)) {
        let parts = multilinear_parts(&f);
        for (_, g) in parts.parts() {
            prop_assert!(g.is_multilinear());
        }
        let got = parts.reconstruct_eval(&x).unwrap();
        let want = f.eval(&x).unwrap();
        prop_assert!((got - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    /// Collapse preserves the coefficient sum (both equal f(𝟙)).
    #[test]
    fn collapse_total_at_ones(f in poly_strategy(3, 4), k in 0u32..=4) {
        let g = collapse(&f, k).unwrap();
        let ones = vec![1.0; 3];
        // g(𝟙) counts each f_β once per α ≤ β with |α| = k
        let direct: f64 = f
            .terms()
            .map(|(beta, c)| {
                let ways = MultiIndex::enumerate(3, k)
                    .into_iter()
                    .filter(|a| beta.checked_sub(a).is_some())
                    .count();
                c * ways as f64
            })
            .sum();
        let got = g.eval(&ones).unwrap();
        prop_assert!((got - direct).abs() <= 1e-9 * (1.0 + direct.abs()));
    }
}
