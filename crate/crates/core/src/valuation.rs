//! Semivaluations attached to points of an Eggers-Wall tree, their brackets,
//! and the coordinates `(l, s, m)` seen by the observers `L`, a smooth branch
//! of the curve, or the origin `O`.

use alloc::vec::Vec;

use crate::arith::{uint, Ext};
use crate::error::{Error, Result};
use crate::puiseux::BranchRecord;
use crate::tree::{BranchId, EwTree, TreePoint};

/// An observer of the valuative tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observer {
    /// The root branch of the tree.
    L,
    /// A smooth branch of the curve.
    Leaf(BranchId),
    /// The origin, placed at the unit point.
    Origin,
}

/// An effective divisor: distinct branches with positive multiplicities.
#[derive(Clone, Debug, Default)]
pub struct Divisor {
    terms: Vec<(BranchRecord, u64)>,
}

impl Divisor {
    pub fn new(terms: Vec<(BranchRecord, u64)>) -> Result<Self> {
        let mut d = Self::default();
        for (b, m) in terms {
            if m == 0 {
                return Err(Error::precondition("divisor multiplicities must be positive"));
            }
            if let Some((prev, _)) = d.terms.iter().find(|(a, _)| a.same_branch(&b)) {
                return Err(Error::DuplicateBranch(prev.name().into(), b.name().into()));
            }
            d.terms.push((b, m));
        }
        Ok(d)
    }

    pub fn branch(b: BranchRecord) -> Self {
        Self { terms: alloc::vec![(b, 1)] }
    }

    pub fn terms(&self) -> &[(BranchRecord, u64)] {
        &self.terms
    }

    /// The sum of two divisors; common branches add their multiplicities.
    pub fn sum(&self, other: &Divisor) -> Divisor {
        let mut terms = self.terms.clone();
        for (b, m) in &other.terms {
            match terms.iter_mut().find(|(a, _)| a.same_branch(b)) {
                Some((_, k)) => *k += m,
                None => terms.push((b.clone(), *m)),
            }
        }
        Divisor { terms }
    }
}

/// Coordinates of a point relative to an observer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coordinates {
    /// Log-discrepancy.
    pub l: Ext,
    /// Self-interaction.
    pub s: Ext,
    /// Relative multiplicity.
    pub m: Ext,
}

fn mul(a: &Ext, b: &Ext) -> Ext {
    a.checked_mul(b).unwrap_or(Ext::Infinite)
}

/// Value at `p` of the semivaluation normalized by `ν(L) = 1`, on a branch.
fn eval_branch(t: &EwTree, p: &TreePoint, a: &BranchRecord) -> Result<Ext> {
    if a.is_l() {
        return Ok(Ext::from_int(1));
    }
    let n = a.ramification_index().ok_or_else(|| Error::Internal("series branch without index".into()))?;
    let (at, _) = t.attach_branch(a)?;
    let tripod = t.meet(p, &at)?;
    Ok(t.contact(&tripod)?.scale(&uint(n)))
}

/// `Σ m · (L·A) · c_L(min{P, ⟨L, P, A⟩})` over the divisor, with `1` for `L`.
pub fn eval_point(t: &EwTree, p: &TreePoint, d: &Divisor) -> Result<Ext> {
    t.locate(p)?;
    let mut total = Ext::zero();
    for (a, m) in d.terms() {
        total = total.add(&eval_branch(t, p, a)?.scale(&uint(*m)));
    }
    Ok(total)
}

/// The bracket relative to `L`: contact complexity of the tripod point.
pub fn bracket(t: &EwTree, p: &TreePoint, q: &TreePoint) -> Result<Ext> {
    t.contact(&t.meet(p, q)?)
}

fn normalize(t: &EwTree, r: Observer) -> Result<Observer> {
    match r {
        Observer::Leaf(id) if id == t.root_label() => Ok(Observer::L),
        Observer::Leaf(id) => {
            if !t.is_smooth_leaf(id)? {
                return Err(Error::precondition(alloc::format!(
                    "observer {} is not a smooth branch",
                    t.branch(id).name()
                )));
            }
            Ok(r)
        }
        _ => Ok(r),
    }
}

/// The tree point standing for the observer.
pub fn observer_point(t: &EwTree, r: Observer) -> Result<TreePoint> {
    match normalize(t, r)? {
        Observer::L => Ok(t.root_point()),
        Observer::Leaf(id) => t.leaf_point(id),
        Observer::Origin => t.unit_point(),
    }
}

/// `⟨I^R, I^R′⟩`: intersection numbers between branches, `1` between `L` and
/// `O`, and the multiplicity at the origin between a branch and `O`.
pub fn observer_pairing(t: &EwTree, r: Observer, rp: Observer) -> Result<Ext> {
    let (r, rp) = (normalize(t, r)?, normalize(t, rp)?);
    let l = t.root_label();
    match (r, rp) {
        (a, b) if a == b => Ok(Ext::Infinite),
        (Observer::L, Observer::Origin) | (Observer::Origin, Observer::L) => Ok(Ext::from_int(1)),
        (Observer::L, Observer::Leaf(a)) | (Observer::Leaf(a), Observer::L) => t.intersection(l, a),
        (Observer::Leaf(a), Observer::Leaf(b)) => t.intersection(a, b),
        (Observer::Leaf(a), Observer::Origin) | (Observer::Origin, Observer::Leaf(a)) => {
            let n = t.intersection(l, a)?;
            let c = t.contact(&t.meet(&t.leaf_point(a)?, &t.unit_point()?)?)?;
            Ok(mul(&n, &c.min(Ext::from_int(1))))
        }
        _ => unreachable!(),
    }
}

/// `s_R` at a point.
fn self_interaction(t: &EwTree, q: &TreePoint, r: Observer) -> Result<Ext> {
    let c = t.contact(q)?;
    if r == Observer::L {
        return Ok(c);
    }
    let g = gamma_from_l(t, q, r)?;
    Ok(mul(&mul(&g, &g), &c))
}

/// `γ^L_R(P) = (⟨I^L, I^R⟩ · c_L(⟨L, R, P⟩))⁻¹`.
fn gamma_from_l(t: &EwTree, p: &TreePoint, r: Observer) -> Result<Ext> {
    let pair = observer_pairing(t, Observer::L, r)?;
    let tripod = t.meet(&observer_point(t, r)?, p)?;
    Ok(mul(&pair, &t.contact(&tripod)?).recip())
}

/// The change-of-observer factor `γ^R_R′(P) = (⟨I^R, I^R′⟩ · s_R(⟨R, R′, P⟩))⁻¹`.
pub fn gamma(t: &EwTree, p: &TreePoint, r: Observer, rp: Observer) -> Result<Ext> {
    let (r, rp) = (normalize(t, r)?, normalize(t, rp)?);
    if r == rp {
        return Err(Error::precondition("the two observers coincide"));
    }
    t.locate(p)?;
    let m = t.median(&observer_point(t, r)?, &observer_point(t, rp)?, p)?;
    let pair = observer_pairing(t, r, rp)?;
    Ok(mul(&pair, &self_interaction(t, &m, r)?).recip())
}

/// `m_R(P)`: the index for `L`, otherwise the three-zone formula around
/// `M = ⟨L, R, O⟩`.
pub fn rel_multiplicity(t: &EwTree, p: &TreePoint, r: Observer) -> Result<Ext> {
    let r = normalize(t, r)?;
    t.locate(p)?;
    if r == Observer::L {
        return Ok(Ext::from_int(t.index_at(p)? as i64));
    }
    let rp = observer_point(t, r)?;
    let m = t.meet(&rp, &t.unit_point()?)?;
    let p = t.canonical(p)?;
    if t.precedes(&m, &p)? && t.precedes(&p, &rp)? {
        return Ok(Ext::from_int(1));
    }
    if t.precedes(&p, &m)? {
        return observer_pairing(t, Observer::L, r);
    }
    let g = gamma(t, &p, r, Observer::L)?;
    let value = g.scale(&uint(t.index_at(&p)?));
    match value.to_u64() {
        Some(_) => Ok(value),
        None => Err(Error::Internal(alloc::format!("non-integral relative multiplicity {}", value))),
    }
}

/// `(l_R, s_R, m_R)` at `p`.
pub fn coordinates(t: &EwTree, p: &TreePoint, r: Observer) -> Result<Coordinates> {
    let r = normalize(t, r)?;
    let loc = t.locate(p)?;
    let e = loc.exponent.clone();
    let c = t.contact(p)?;
    let m = rel_multiplicity(t, p, r)?;
    let (l, s) = (e.add(&Ext::from_int(1)), c);
    if r == Observer::L {
        return Ok(Coordinates { l, s, m });
    }
    let g = gamma(t, p, Observer::L, r)?;
    if g.is_infinite() {
        return Ok(Coordinates { l: Ext::Infinite, s: Ext::Infinite, m });
    }
    Ok(Coordinates { l: mul(&g, &l), s: mul(&mul(&g, &g), &s), m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::fixtures::{ewmany, ewmany_with_l, records};

    fn tree() -> EwTree {
        EwTree::build(ewmany_with_l()).unwrap()
    }

    fn pt(b: BranchId, n: i64, d: i64) -> TreePoint {
        TreePoint::new(b, Ext::from_ratio(n, d))
    }

    #[test]
    fn eval_examples() {
        let t = tree();
        let c = ewmany();
        let d5 = Divisor::branch(c[4].clone());
        assert_eq!(eval_point(&t, &pt(1, 5, 2), &d5).unwrap(), Ext::from_int(30));
        assert_eq!(eval_point(&t, &t.leaf_point(0).unwrap(), &Divisor::branch(c[1].clone())).unwrap(), Ext::from_int(12));
        assert_eq!(eval_point(&t, &t.root_point(), &d5).unwrap(), Ext::zero());
        let l = Divisor::branch(BranchRecord::reference("L"));
        assert_eq!(eval_point(&t, &pt(3, 4, 1), &l).unwrap(), Ext::from_int(1));
        assert_eq!(eval_point(&t, &t.leaf_point(4).unwrap(), &d5).unwrap(), Ext::Infinite);
        // a branch outside the curve
        let extra = Divisor::branch(records(&[("X", "x^(5/2)")]).remove(0));
        assert_eq!(eval_point(&t, &t.leaf_point(1).unwrap(), &extra).unwrap(), Ext::Finite(rat(31, 6)));
        let both = Divisor::new(alloc::vec![(c[4].clone(), 2), (c[0].clone(), 1)]).unwrap();
        assert_eq!(eval_point(&t, &pt(1, 5, 2), &both).unwrap(), Ext::from_int(62));
        assert!(Divisor::new(alloc::vec![(c[0].clone(), 1), (c[0].clone(), 2)]).is_err());
    }

    #[test]
    fn bracket_examples() {
        let t = tree();
        let (a, b) = (t.leaf_point(3).unwrap(), t.leaf_point(4).unwrap());
        assert_eq!(bracket(&t, &a, &b).unwrap(), Ext::Finite(rat(31, 8)));
        assert_eq!(bracket(&t, &pt(1, 8, 3), &pt(1, 8, 3)).unwrap(), Ext::Finite(rat(31, 12)));
        assert_eq!(bracket(&t, &t.root_point(), &b).unwrap(), Ext::zero());
    }

    #[test]
    fn coordinates_examples() {
        let t = tree();
        let root = coordinates(&t, &t.root_point(), Observer::L).unwrap();
        assert_eq!(root, Coordinates { l: Ext::from_int(1), s: Ext::zero(), m: Ext::from_int(1) });
        let u = t.unit_point().unwrap();
        assert_eq!(coordinates(&t, &u, Observer::Origin).unwrap().l, Ext::from_int(2));
        assert_eq!(gamma(&t, &u, Observer::L, Observer::Origin).unwrap(), Ext::from_int(1));
        let p = pt(1, 5, 2);
        assert_eq!(gamma(&t, &p, Observer::L, Observer::Leaf(0)).unwrap(), Ext::from_ratio(1, 2));
        assert_eq!(coordinates(&t, &p, Observer::Leaf(0)).unwrap().l, Ext::from_ratio(7, 4));
        assert!(gamma(&t, &p, Observer::L, Observer::L).is_err());
        assert!(coordinates(&t, &p, Observer::Leaf(1)).is_err());
    }

    #[test]
    fn relative_multiplicity_examples() {
        let t = tree();
        assert_eq!(rel_multiplicity(&t, &pt(0, 1, 2), Observer::Leaf(0)).unwrap(), Ext::from_int(1));
        assert_eq!(rel_multiplicity(&t, &t.leaf_point(4).unwrap(), Observer::Leaf(0)).unwrap(), Ext::from_int(24));
        assert_eq!(rel_multiplicity(&t, &pt(0, 1, 2), Observer::Origin).unwrap(), Ext::from_int(1));
        assert_eq!(rel_multiplicity(&t, &pt(4, 17, 4), Observer::L).unwrap(), Ext::from_int(2));
        assert_eq!(rel_multiplicity(&t, &t.leaf_point(0).unwrap(), Observer::Leaf(0)).unwrap(), Ext::from_int(1));
    }

    #[test]
    fn gamma_reciprocity() {
        let t = tree().mark(&tree().unit_point().unwrap()).unwrap();
        let observers = [Observer::L, Observer::Leaf(0), Observer::Origin];
        for v in 1..t.vertices().len() {
            if t.vertex(v).is_leaf() {
                continue;
            }
            let p = t.point_of(v);
            for &r in &observers {
                for &rp in &observers {
                    if r == rp {
                        continue;
                    }
                    let g = gamma(&t, &p, r, rp).unwrap();
                    let h = gamma(&t, &p, rp, r).unwrap();
                    assert_eq!(g.checked_mul(&h), Some(Ext::from_int(1)), "{r:?} {rp:?} at {}", t.describe(&p));
                }
            }
        }
    }
}
