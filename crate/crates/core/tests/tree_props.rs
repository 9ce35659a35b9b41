mod common;

use common::{random_curve, random_tree, rng, with_l};
use ewtree_core::arith::uint;
use ewtree_core::inversion::invert;
use ewtree_core::puiseux::intersection_oracle;
use ewtree_core::splice::{splice_via_generic, to_splice};
use ewtree_core::{parse_branch, BranchRecord, Ext, EwTree};
use proptest::prelude::*;
use rand::Rng;

fn smooth_branch(seed: u64) -> BranchRecord {
    let mut r = rng(seed);
    let text = match r.gen_range(0..4) {
        0 => format!("{}*x", r.gen_range(1..4)),
        1 => format!("x + {}*x^{}", r.gen_range(1..4), r.gen_range(2..4)),
        2 => format!("x^{}", r.gen_range(2..4)),
        _ => format!("x^(1/{})", r.gen_range(2..4)),
    };
    BranchRecord::series("S", parse_branch(&text).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edges_satisfy_exponent_contact_relation(seed in any::<u64>()) {
        let t = random_tree(&mut rng(seed), 4);
        for (p, v) in t.edges() {
            let (x, y) = (t.vertex(p), t.vertex(v));
            prop_assert!(x.exponent() < y.exponent());
            prop_assert_eq!(y.index() % x.index().max(1), 0);
            if let (Some(e1), Some(e2)) = (x.exponent().finite(), y.exponent().finite()) {
                let dc = y.contact().finite().unwrap() - x.contact().finite().unwrap();
                prop_assert_eq!(e2 - e1, dc * uint(y.index()));
            }
        }
    }

    #[test]
    fn tree_intersections_match_oracle(seed in any::<u64>()) {
        let curve = with_l(random_curve(&mut rng(seed), 4));
        let t = EwTree::build(curve.clone()).unwrap();
        let l = t.root_label();
        for i in 0..curve.len() {
            for j in 0..curve.len() {
                let tree = t.intersection(i, j).unwrap();
                if i == j {
                    prop_assert_eq!(tree, Ext::Infinite);
                } else if i == l || j == l {
                    let other = if i == l { j } else { i };
                    prop_assert_eq!(tree, Ext::Finite(uint(curve[other].ramification_index().unwrap())));
                } else {
                    prop_assert_eq!(tree, intersection_oracle(&curve[i], &curve[j]));
                    let k = t.coincidence_order(i, j).unwrap();
                    prop_assert_eq!(k, curve[i].as_series().unwrap().coincidence_order(curve[j].as_series().unwrap()));
                }
            }
        }
    }

    #[test]
    fn retractions_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let curve = random_curve(&mut r, 4);
        let n = curve.len();
        let mid_len = r.gen_range(1..=n);
        let small_len = r.gen_range(1..=mid_len);
        let big = EwTree::build(curve.clone()).unwrap();
        let mid = EwTree::build(curve[..mid_len].to_vec()).unwrap();
        let small = EwTree::build(curve[..small_len].to_vec()).unwrap();
        for v in 0..big.vertices().len() {
            let p = big.point_of(v);
            let direct = EwTree::retraction(&big, &small, &p).unwrap();
            let staged = EwTree::retraction(&mid, &small, &EwTree::retraction(&big, &mid, &p).unwrap()).unwrap();
            prop_assert_eq!(direct, staged);
        }
    }

    #[test]
    fn inversion_round_trip(seed in any::<u64>(), s in any::<u64>()) {
        let mut curve = with_l(random_curve(&mut rng(seed), 3));
        let smooth = smooth_branch(s);
        if curve.iter().any(|c| c.same_branch(&smooth)) {
            return Ok(());
        }
        curve.push(smooth);
        let lp = curve.len() - 1;
        let t = EwTree::build(curve.clone()).unwrap();
        let t = t.mark(&t.unit_point().unwrap()).unwrap();
        let inv = invert(&t, lp).unwrap();
        prop_assert_eq!(&invert(&inv, t.root_label()).unwrap(), &t);
        for i in 0..curve.len() {
            for j in 0..curve.len() {
                prop_assert_eq!(inv.intersection(i, j).unwrap(), t.intersection(i, j).unwrap());
            }
        }
    }

    #[test]
    fn splice_linking_matches_intersection(seed in any::<u64>()) {
        let curve = random_curve(&mut rng(seed), 3);
        let d = splice_via_generic(&curve).unwrap();
        prop_assert!(d.validate().is_valid(), "{:?}", d.validate());
        let t = EwTree::build(with_l(curve.clone())).unwrap();
        let names: Vec<String> = t.branches().iter().map(|b| b.name().to_string()).collect();
        for i in 0..names.len() {
            for j in 0..i {
                let link = d.linking(&names[i], &names[j]).unwrap();
                prop_assert_eq!(Ext::Finite(uint(link)), t.intersection(i, j).unwrap());
            }
        }
        if let Ok(direct) = to_splice(&t) {
            prop_assert!(direct.validate().is_valid());
            prop_assert_eq!(direct.canonical_form("L").unwrap(), d.canonical_form("L").unwrap());
        }
    }
}
