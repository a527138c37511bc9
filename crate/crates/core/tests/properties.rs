use proptest::prelude::*;

use wavedim::construction::{Params, WaveletSet};
use wavedim::dimension::{
    dimension_at, dimension_profile, dimension_profile_with, profile_stats, FiniteOracle,
};
use wavedim::scalar::{int, rat};
use wavedim::{
    fold_dyadic, fold_mod_2pi, EpsBinding, Exec, FoldReport, Interval, IntervalSet, Rational,
    Scalar, Sign,
};

fn r(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
        .prop_map(|(a, b, c, d)| Scalar::new(r(a, b), r(c, d)))
}

/// Random finite set with endpoints on a `π/12` grid inside `[−6π, 6π)`.
fn grid_set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((-72i64..72, 1i64..30), 0..6).prop_map(|raw| {
        let ivs = raw
            .into_iter()
            .map(|(lo, len)| {
                Interval::new(
                    Scalar::pi_frac(lo, 12),
                    Scalar::pi_frac(lo + len, 12),
                    &EpsBinding::unbound(),
                )
                .unwrap()
            })
            .collect();
        IntervalSet::normalize(ivs, EpsBinding::unbound()).unwrap()
    })
}

/// Set whose positive and negative parts are each a partition of the
/// dyadic cell, piecewise dilated, so every dilation fold is exact.
fn dyadic_partition() -> impl Strategy<Value = IntervalSet> {
    let side = (
        prop::collection::btree_set(13i64..24, 0..4),
        prop::collection::vec(-2i64..3, 5),
    );
    (side.clone(), side).prop_map(|((cuts_p, m_p), (cuts_n, m_n))| {
        let mut ivs = Vec::new();
        for (cuts, ms, sign) in [(cuts_p, m_p, 1i64), (cuts_n, m_n, -1i64)] {
            let pts: Vec<i64> = std::iter::once(12)
                .chain(cuts)
                .chain(std::iter::once(24))
                .collect();
            for (w, m) in pts.windows(2).zip(ms) {
                let iv = Interval::new(
                    Scalar::pi_frac(w[0], 12),
                    Scalar::pi_frac(w[1], 12),
                    &EpsBinding::unbound(),
                )
                .unwrap();
                let scale = if m >= 0 { int(1 << m) } else { r(1, 1 << -m) };
                ivs.push(iv.scale(&(scale * int(sign))));
            }
        }
        IntervalSet::normalize(ivs, EpsBinding::unbound()).unwrap()
    })
}

/// Points on a `π/(12·1009)` grid never hit a `π/12·2^m` endpoint.
fn probe() -> impl Strategy<Value = Rational> {
    (-12 * 1009 * 8..12 * 1009 * 8i64)
        .prop_filter("odd multiple", |k| k % 1009 != 0)
        .prop_map(|k| r(k, 12 * 1009))
}

fn same_report(a: &FoldReport, b: &FoldReport) -> bool {
    a.cover == b.cover
        && a.gap == b.gap
        && a.overlap == b.overlap
        && a.gap_measure == b.gap_measure
        && a.overlap_measure == b.overlap_measure
        && a.failure_reason == b.failure_reason
}

proptest! {
    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
        let k = r(3, 7);
        prop_assert_eq!((&a + &b).scale(&k), &a.scale(&k) + &b.scale(&k));
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a.clone());
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Scalar>(&json).unwrap(), a);
    }

    #[test]
    fn booleans_match_pointwise(a in grid_set(), b in grid_set(), x in probe()) {
        let x = Scalar::pi(x);
        let (ia, ib) = (a.contains(&x), b.contains(&x));
        prop_assert_eq!(a.union(&b).unwrap().contains(&x), ia || ib);
        prop_assert_eq!(a.intersect(&b).unwrap().contains(&x), ia && ib);
        prop_assert_eq!(a.difference(&b).unwrap().contains(&x), ia && !ib);
    }

    #[test]
    fn canonical_form_is_idempotent(a in grid_set()) {
        let again = IntervalSet::normalize(a.intervals().to_vec(), a.binding().clone()).unwrap();
        prop_assert_eq!(again.intervals(), a.intervals());
        prop_assert!(IntervalSet::is_canonical_list(a.intervals(), a.binding()));
    }

    #[test]
    fn translation_fold_is_shift_invariant(a in grid_set(), k in -3i64..4) {
        prop_assert!(same_report(&fold_mod_2pi(&a), &fold_mod_2pi(&a.translate_2pi(k))));
    }

    #[test]
    fn dyadic_fold_is_dilation_invariant(a in grid_set(), m in -3i64..4) {
        for sign in [Sign::Positive, Sign::Negative] {
            prop_assert!(same_report(&fold_dyadic(&a, sign), &fold_dyadic(&a.dilate_pow2(m), sign)));
        }
    }

    #[test]
    fn folds_balance_mass(a in grid_set()) {
        let (pos, neg) = a.split_sign();
        let t = fold_mod_2pi(&a);
        prop_assert_eq!(&t.piece_mass, &a.measure());
        for (rep, part) in [
            (t, &a),
            (fold_dyadic(&a, Sign::Positive), &pos),
            (fold_dyadic(&a, Sign::Negative), &neg),
        ] {
            if rep.failure_reason.is_some() {
                prop_assert!(part.touches_zero() || a.touches_zero());
                continue;
            }
            prop_assert_eq!(rep.piece_mass.clone(), &rep.cover.measure() + &rep.excess_mass);
            prop_assert_eq!(&rep.gap_measure, &rep.gap.measure());
            prop_assert_eq!(&rep.overlap_measure, &rep.overlap.measure());
        }
    }

    #[test]
    fn dimension_is_periodic(a in dyadic_partition(), x in probe(), k in -3i64..4) {
        let o = FiniteOracle::new(&a);
        let x = Scalar::pi(x);
        prop_assert_eq!(dimension_at(&o, &x), dimension_at(&o, &x.shift_2pi(&k.into())));
    }

    #[test]
    fn profile_matches_pointwise(a in dyadic_partition(), xs in prop::collection::vec(probe(), 20)) {
        let prof = dimension_profile(&a).unwrap();
        let o = FiniteOracle::new(&a);
        for x in xs {
            let x = Scalar::pi(x);
            prop_assert_eq!(prof.value_at(&x), dimension_at(&o, &x), "at {}", x);
        }
        // the periodization of a set of measure |A| integrates to |A|
        prop_assert_eq!(profile_stats(&prof).integral, a.measure());
    }

    #[test]
    fn sequential_and_parallel_agree(a in dyadic_partition()) {
        prop_assert_eq!(
            dimension_profile_with(&a, Exec::Sequential).unwrap(),
            dimension_profile_with(&a, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn dyadic_partitions_are_stationary(a in dyadic_partition()) {
        prop_assert!(fold_dyadic(&a, Sign::Positive).is_exact());
        prop_assert!(fold_dyadic(&a, Sign::Negative).is_exact());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wavelet_set_membership_is_dyadic_partition(num in 1i64..100) {
        // every positive point has exactly one dyadic image in W
        let p = Params::new(3, rat(1, 10)).unwrap();
        let w = WaveletSet::new(&p);
        let x = r(num, 97);
        let hits = (-12..=12).filter(|&j| w.contains_value(&(&x * wavedim::scalar::pow2(j)))).count();
        prop_assert_eq!(hits, 1);
    }
}
