use fmclp_core::{Interval, OrderRelation, Tfn};
use proptest::prelude::*;

fn sorted(range: core::ops::Range<f64>) -> impl Strategy<Value = Tfn> {
    prop_oneof![
        4 => prop::array::uniform3(range.clone()).prop_map(|mut a| {
            a.sort_by(f64::total_cmp);
            Tfn::new(a[0], a[1], a[2]).unwrap()
        }),
        1 => range.prop_map(Tfn::crisp),
    ]
}

fn any_tfn() -> impl Strategy<Value = Tfn> {
    sorted(-1e3..1e3)
}

fn nonneg_tfn() -> impl Strategy<Value = Tfn> {
    sorted(0.0..1e3)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn close_iv(a: Interval, b: Interval) -> bool {
    close(a.lo, b.lo) && close(a.hi, b.hi)
}

proptest! {
    #[test]
    fn order_is_a_partial_order(a in any_tfn(), b in any_tfn(), c in any_tfn()) {
        prop_assert!(a.le(&a));
        prop_assert_eq!(a.compare(&a), OrderRelation::Equal);
        if a.le(&b) && b.le(&a) {
            prop_assert_eq!(a, b);
        }
        if a.le(&b) && b.le(&c) {
            prop_assert!(a.le(&c));
        }
    }

    #[test]
    fn compare_is_antisymmetric(a in any_tfn(), b in any_tfn()) {
        let flipped = match a.compare(&b) {
            OrderRelation::LessOrEqual => OrderRelation::GreaterOrEqual,
            OrderRelation::GreaterOrEqual => OrderRelation::LessOrEqual,
            other => other,
        };
        prop_assert_eq!(b.compare(&a), flipped);
        let componentwise = (0..3).all(|r| a.triplet()[r] <= b.triplet()[r]);
        prop_assert_eq!(a.le(&b), componentwise);
    }

    #[test]
    fn alpha_cuts_are_nested(a in any_tfn(), x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let outer = a.alpha_cut(lo).unwrap();
        let inner = a.alpha_cut(hi).unwrap();
        prop_assert!(outer.lo <= inner.lo && inner.hi <= outer.hi);
        prop_assert!(inner.lo <= inner.hi);
        prop_assert_eq!(a.alpha_cut(0.0).unwrap(), Interval { lo: a.lo(), hi: a.hi() });
        prop_assert_eq!(a.alpha_cut(1.0).unwrap(), Interval { lo: a.mid(), hi: a.mid() });
    }

    #[test]
    fn alpha_outside_unit_interval_is_rejected(a in any_tfn(), alpha in prop_oneof![-10.0f64..-1e-12, 1.0000001f64..10.0]) {
        prop_assert!(a.alpha_cut(alpha).is_err());
    }

    #[test]
    fn sum_cuts_are_interval_sums(a in any_tfn(), b in any_tfn(), alpha in 0.0f64..=1.0) {
        let s = a + b;
        let expected = a.alpha_cut(alpha).unwrap().add(&b.alpha_cut(alpha).unwrap());
        prop_assert!(close_iv(s.alpha_cut(alpha).unwrap(), expected));
    }

    #[test]
    fn product_matches_interval_product_at_support_and_apex(a in nonneg_tfn(), b in nonneg_tfn()) {
        let p = a.mul_nonneg(&b).unwrap();
        prop_assert!(p.is_nonnegative());
        for alpha in [0.0, 1.0] {
            let expected = a.alpha_cut(alpha).unwrap().mul(&b.alpha_cut(alpha).unwrap());
            prop_assert!(close_iv(p.alpha_cut(alpha).unwrap(), expected));
        }
    }

    #[test]
    fn product_rejects_negative_factors(a in sorted(-1e3..-1e-6), b in nonneg_tfn()) {
        prop_assert!(a.mul_nonneg(&b).is_err());
        prop_assert!(b.mul_nonneg(&a).is_err());
    }

    #[test]
    fn scaling_composes(a in any_tfn(), x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let twice = a.scale(x).scale(y);
        let once = a.scale(x * y);
        for r in 0..3 {
            prop_assert!(close(twice.triplet()[r], once.triplet()[r]));
        }
        let s = a.scale(x);
        prop_assert!(s.lo() <= s.mid() && s.mid() <= s.hi());
    }

    #[test]
    fn nonnegative_means_above_zero(a in any_tfn()) {
        prop_assert_eq!(a.is_nonnegative(), Tfn::ZERO.le(&a));
    }

    #[test]
    fn addition_preserves_order(a in any_tfn(), b in any_tfn(), c in any_tfn()) {
        if a.le(&b) {
            prop_assert!((a + c).le(&(b + c)));
        }
    }
}
