//! Re-rooting an Eggers-Wall tree at another smooth branch.
//!
//! With `n = (L·L')` and `π` the attaching map of the segment `[L, L']`:
//!
//! ```text
//! e' + 1 = (e + 1) / (n · c∘π)        c' = c / (n · c∘π)²
//! ```
//!
//! and the new index is 1 on `[π(U), L']`, `n` on `[L, π(U))` and
//! `n · (c∘π) · i` elsewhere, where `U` is the unit point.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::arith::{rat, to_u64_exact, uint, Ext, Rational};
use crate::error::{Error, Result};
use crate::puiseux::BranchRecord;
use crate::tree::{BranchId, EwTree, TreePoint};

/// `Θ_{L'}(C)` from `Θ_L(C)`, where `L'` is a smooth leaf and the root is a
/// component of `C`.
///
/// The underlying vertex set and adjacency are unchanged; the old root becomes
/// a leaf and `L'` the new root.
pub fn invert(t: &EwTree, lp: BranchId) -> Result<EwTree> {
    invert_mapped(t, lp).map(|(tree, _)| tree)
}

/// [`invert`], also returning the image of each vertex id.
pub(crate) fn invert_mapped(t: &EwTree, lp: BranchId) -> Result<(EwTree, Vec<usize>)> {
    if !t.root_is_component() {
        return Err(Error::precondition("the root branch must be a component of the curve"));
    }
    if lp == t.root_label() {
        return Err(Error::precondition("new root equals the current root"));
    }
    let leaf = t.vertex_of(lp)?;
    if !t.is_smooth_leaf(lp)? {
        return Err(Error::precondition(alloc::format!("{} is not smooth", t.branch(lp).name())));
    }
    let n = t.vertex(leaf).index();
    let nq = uint(n);
    let threshold = Ext::Finite(rat(1, n as i64));
    let path = t.path_to(leaf);
    let mut on_path = alloc::vec![false; t.vertices().len()];
    for &v in &path {
        on_path[v] = true;
    }

    let mut raw = t.raw_vertices();
    for (v, r) in raw.iter_mut().enumerate() {
        if v == EwTree::ROOT {
            r.exponent = Ext::Infinite;
            r.contact = Ext::Infinite;
            continue;
        }
        if v == leaf {
            r.exponent = Ext::zero();
            r.contact = Ext::zero();
            continue;
        }
        let pi = t.lca(v, leaf);
        let cpi = t
            .vertex(pi)
            .contact()
            .finite()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Internal("degenerate attaching point".into()))?
            .clone();
        let scale: Rational = &nq * &cpi;
        r.exponent = match &r.exponent {
            Ext::Finite(e) => Ext::Finite((e + Rational::from_integer(1.into())) / &scale - Rational::from_integer(1.into())),
            Ext::Infinite => Ext::Infinite,
        };
        r.contact = match &r.contact {
            Ext::Finite(c) => Ext::Finite(c / (&scale * &scale)),
            Ext::Infinite => Ext::Infinite,
        };
        if !on_path[v] {
            let idx = &scale * uint(r.index);
            r.index = to_u64_exact(&idx)
                .ok_or_else(|| Error::Internal(alloc::format!("non-integral index {}", idx)))?;
        }
    }
    // Along [L, L'] the edges reverse: the edge (P_{j+1}, P_j] takes the index
    // of the point P_j.
    for w in path.windows(2) {
        let (lower, upper) = (w[0], w[1]);
        let index = if n == 1 || t.vertex(lower).exponent() >= &threshold { 1 } else { n };
        raw[lower].parent = Some(upper);
        raw[lower].index = index;
    }
    raw[leaf].parent = None;
    raw[leaf].index = 1;
    let old_root = t.root_label();
    raw[EwTree::ROOT].label = Some(old_root);
    raw[leaf].label = Some(lp);
    t.derived_mapped(lp, true, raw)
}

/// `Θ_{L'}(C)` for a smooth `L'` that need not be a component of `C`: built
/// from `Θ_L(C + L + L')` by inversion and restriction.
pub fn invert_general(curve: &[BranchRecord], lp: &BranchRecord) -> Result<EwTree> {
    if !lp.is_smooth() {
        return Err(Error::precondition(alloc::format!("{} is not smooth", lp.name())));
    }
    let mut records: Vec<BranchRecord> = curve.to_vec();
    let mut keep: Vec<BranchId> = (0..records.len()).collect();
    if lp.is_l() {
        return EwTree::build_with_l(records, curve.iter().any(BranchRecord::is_l));
    }
    if !records.iter().any(BranchRecord::is_l) {
        records.push(BranchRecord::reference("L"));
    }
    let lp_id = match records.iter().position(|r| r.same_branch(lp)) {
        Some(id) => id,
        None => {
            let mut rec = lp.clone();
            if records.iter().any(|r| r.name() == rec.name()) {
                rec = BranchRecord::new(alloc::format!("{}'", rec.name()), rec.branch().clone());
            }
            records.push(rec);
            records.len() - 1
        }
    };
    keep.retain(|&id| id != lp_id);
    let full = EwTree::build(records)?;
    invert(&full, lp_id)?.restrict(&keep)
}

/// One vertex of `[L, L']` in the transversal check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentCheck {
    pub point: TreePoint,
    pub exponent: Ext,
    pub contact: Ext,
    pub new_exponent: Ext,
    pub new_contact: Ext,
    pub holds: bool,
}

/// For a transversal pair `(L·L') = 1`, checks `c' = e' = 1/e = 1/c` at
/// every vertex of `[L, L']`.
pub fn transversal_segment_check(t: &EwTree, lp: BranchId) -> Result<Vec<SegmentCheck>> {
    let leaf = t.vertex_of(lp)?;
    if t.vertex(leaf).index() != 1 {
        return Err(Error::precondition("the two smooth branches are not transversal"));
    }
    let (inverted, image) = invert_mapped(t, lp)?;
    let mut out = Vec::new();
    for v in t.path_to(leaf) {
        let x = t.vertex(v);
        let point = t.point_of(v);
        let y = inverted.vertex(image[v]);
        let holds = y.contact() == y.exponent()
            && y.exponent() == &x.exponent().recip()
            && x.exponent().recip() == x.contact().recip();
        out.push(SegmentCheck {
            point,
            exponent: x.exponent().clone(),
            contact: x.contact().clone(),
            new_exponent: y.exponent().clone(),
            new_contact: y.contact().clone(),
            holds,
        });
    }
    Ok(out)
}
