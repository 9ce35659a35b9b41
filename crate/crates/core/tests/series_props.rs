mod common;

use common::{random_curve, rng};
use ewtree_core::puiseux::intersection_oracle;
use ewtree_core::{Ext, PuiseuxSeries};
use proptest::prelude::*;

fn double_max(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Ext {
    let mut best = Ext::zero();
    for j in 0..a.ramification_index() {
        for k in 0..b.ramification_index() {
            best = best.max(a.conjugate(j).sub(&b.conjugate(k)).order());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conjugation_is_a_group_action(seed in any::<u64>(), j in 0u64..30, k in 0u64..30) {
        let curve = random_curve(&mut rng(seed), 1);
        let s = curve[0].as_series().unwrap();
        let n = s.ramification_index();
        prop_assert_eq!(&s.conjugate(j).conjugate(k), &s.conjugate(j + k));
        prop_assert_eq!(&s.conjugate(n), s);
        prop_assert_eq!(&s.conjugate(0), s);
        let c = s.conjugate(j);
        prop_assert_eq!(c.characteristic_exponents(), s.characteristic_exponents());
        prop_assert_eq!(c.ramification_index(), n);
        prop_assert!(c.same_branch(s));
        prop_assert_eq!(s.index_at(&Ext::Infinite), n);
    }

    #[test]
    fn coincidence_orders(seed in any::<u64>()) {
        let curve = random_curve(&mut rng(seed), 3);
        let s: Vec<&PuiseuxSeries> = curve.iter().map(|r| r.as_series().unwrap()).collect();
        for a in &s {
            for b in &s {
                let k = a.coincidence_order(b);
                prop_assert_eq!(&k, &b.coincidence_order(a));
                prop_assert_eq!(&k, &double_max(a, b));
                for c in &s {
                    let lhs = a.coincidence_order(c);
                    prop_assert!(lhs >= k.clone().min(b.coincidence_order(c)));
                }
            }
        }
    }

    #[test]
    fn intersection_oracle_is_symmetric_and_positive(seed in any::<u64>()) {
        let curve = random_curve(&mut rng(seed), 3);
        for a in &curve {
            for b in &curve {
                let v = intersection_oracle(a, b);
                prop_assert_eq!(&v, &intersection_oracle(b, a));
                if a.name() != b.name() {
                    prop_assert!(v.to_u64().is_some_and(|v| v > 0));
                }
            }
        }
    }

    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        let curve = random_curve(&mut rng(seed), 1);
        let s = curve[0].as_series().unwrap();
        let text = s.to_string();
        prop_assert_eq!(&ewtree_core::parse_branch(&text).unwrap(), s);
    }
}
