#![allow(dead_code)]

use ewtree_core::arith::{rat, uint};
use ewtree_core::valuation::observer_point;
use ewtree_core::{embed_root, BranchId, BranchRecord, CyclotomicNumber, Ext, EwTree, Observer, PuiseuxSeries, Rational, TreePoint};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub const RAMIFICATIONS: [u64; 7] = [1, 2, 3, 4, 6, 8, 12];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ±1, ±2, or a root of unity of order 3 or 4.
pub fn coefficient(rng: &mut ChaCha8Rng) -> CyclotomicNumber {
    match rng.gen_range(0..8) {
        0 => CyclotomicNumber::from_rational(1, rat(1, 1)),
        1 => CyclotomicNumber::from_rational(1, rat(-1, 1)),
        2 => CyclotomicNumber::from_rational(1, rat(2, 1)),
        3 => CyclotomicNumber::from_rational(1, rat(-2, 1)),
        4 => embed_root(3, 1, 3).unwrap(),
        5 => embed_root(3, 2, 3).unwrap(),
        6 => embed_root(4, 1, 4).unwrap(),
        _ => embed_root(4, 3, 4).unwrap(),
    }
}

fn fresh_terms(
    rng: &mut ChaCha8Rng,
    denom: u64,
    after: u64,
    count: usize,
) -> Vec<(u64, CyclotomicNumber)> {
    let mut out = Vec::new();
    let mut p = after;
    for _ in 0..count {
        p += rng.gen_range(1..=denom.max(2));
        out.push((p, coefficient(rng)));
    }
    out
}

fn series(denom: u64, terms: &[(u64, CyclotomicNumber)]) -> PuiseuxSeries {
    let terms = terms
        .iter()
        .map(|(p, c)| (Rational::new((*p as i64).into(), (denom as i64).into()), c.clone()))
        .collect();
    PuiseuxSeries::new(terms).unwrap()
}

/// A curve of `1..=max_branches` distinct branches sharing random prefixes, so
/// that trees have nontrivial shape. Every exponent has denominator dividing
/// one `n` from [`RAMIFICATIONS`], and each branch has at most 5 terms.
pub fn random_curve(rng: &mut ChaCha8Rng, max_branches: usize) -> Vec<BranchRecord> {
    loop {
        let denom = *RAMIFICATIONS.choose(rng).unwrap();
        let base_len = rng.gen_range(1..=4);
        let base = fresh_terms(rng, denom, 0, base_len);
        let count = rng.gen_range(1..=max_branches);
        let mut out: Vec<BranchRecord> = Vec::new();
        for b in 0..count {
            let keep = rng.gen_range(0..=base.len());
            let mut terms: Vec<_> = base[..keep].to_vec();
            let after = terms.last().map_or(0, |t| t.0);
            let extra = rng.gen_range(if keep == 0 { 1 } else { 0 }..=(5 - keep).min(2));
            terms.extend(fresh_terms(rng, denom, after, extra));
            out.push(BranchRecord::series(format!("C{}", b + 1), series(denom, &terms)));
        }
        let distinct = (0..out.len()).all(|i| (0..i).all(|j| !out[i].same_branch(&out[j])));
        if distinct {
            return out;
        }
    }
}

pub fn with_l(mut curve: Vec<BranchRecord>) -> Vec<BranchRecord> {
    curve.push(BranchRecord::reference("L"));
    curve
}

pub fn random_tree(rng: &mut ChaCha8Rng, max_branches: usize) -> EwTree {
    EwTree::build(with_l(random_curve(rng, max_branches))).unwrap()
}

pub fn ewmany() -> Vec<BranchRecord> {
    [
        ("C1", "x^2"),
        ("C2", "x^(5/2) + x^(8/3)"),
        ("C3", "-x^(5/2) + x^(11/4)"),
        ("C4", "x^(7/2) + x^(17/4)"),
        ("C5", "x^(7/2) + 2*x^(17/4) + x^(14/3)"),
    ]
    .iter()
    .map(|(n, s)| BranchRecord::series(*n, ewtree_core::parse_branch(s).unwrap()))
    .collect()
}

pub fn on_path(t: &EwTree, p: &TreePoint, x: &TreePoint, y: &TreePoint) -> bool {
    let m = t.meet(x, y).unwrap();
    t.precedes(&m, p).unwrap() && (t.precedes(p, x).unwrap() || t.precedes(p, y).unwrap())
}

/// `min ⟨I^R, C⟩` over branches `C` with `P` on `[R, C]`, where `C` ranges
/// over the leaves, `L`, and one probe leaving the tree at each internal
/// vertex `V` in a new direction. The probe has index `i_L(V)` unless that
/// forces a zero coefficient at `e_L(V)` already used by a child, in which
/// case it ramifies to `lcm(i_L(V), den e_L(V))`. The tree must contain the
/// generic line `lg`.
pub fn multiplicity_oracle(t: &EwTree, p: &TreePoint, r: Observer, lg: BranchId) -> Ext {
    let rp = observer_point(t, r).unwrap();
    let lg_leaf = t.leaf_point(lg).unwrap();
    let one = Ext::from_int(1);
    let n_r = match r {
        Observer::Leaf(a) => t.intersection(t.root_label(), a).unwrap(),
        _ => one.clone(),
    };
    let mut best = Ext::Infinite;
    if r != Observer::L && on_path(t, p, &rp, &t.root_point()) {
        best = n_r.clone();
    }
    for v in 1..t.vertices().len() {
        let x = t.vertex(v);
        if x.label() == Some(t.root_label()) || matches!(r, Observer::Leaf(a) if x.label() == Some(a)) {
            continue;
        }
        let d = t.point_of(v);
        if !on_path(t, p, &rp, &d) {
            continue;
        }
        let n = uint(probe_index(t, v));
        let value = match r {
            Observer::L => Ext::Finite(n),
            Observer::Origin if x.label() == Some(lg) => one.clone(),
            Observer::Origin => t.contact(&t.meet(&d, &lg_leaf).unwrap()).unwrap().min(one.clone()).scale(&n),
            _ => t.contact(&t.meet(&d, &rp).unwrap()).unwrap().checked_mul(&n_r).unwrap().scale(&n),
        };
        best = best.min(value);
    }
    best
}

pub fn probe_index(t: &EwTree, v: usize) -> u64 {
    let x = t.vertex(v);
    let Some(e) = x.exponent().finite() else { return x.index() };
    let den: u64 = e.denom().try_into().unwrap();
    let i = x.index();
    if i % den == 0 || x.children().iter().all(|&w| t.vertex(w).index() != i) {
        i
    } else {
        num_integer::lcm(i, den)
    }
}

pub fn marked_tree(curve: &[BranchRecord]) -> EwTree {
    let t = EwTree::build(curve.to_vec()).unwrap();
    t.mark(&t.unit_point().unwrap()).unwrap()
}

pub fn observers(t: &EwTree) -> Vec<Observer> {
    let mut out = vec![Observer::L, Observer::Origin];
    for leaf in t.leaves() {
        if t.is_smooth_leaf(leaf).unwrap() {
            out.push(Observer::Leaf(leaf));
        }
    }
    out
}
