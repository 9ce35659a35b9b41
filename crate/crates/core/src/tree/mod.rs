//! Eggers-Wall trees: rooted finite trees whose vertices carry exponent,
//! index and contact complexity.
//!
//! A tree is either built from series relative to `L = Z(x)` (and then keeps
//! the pairwise orders of coincidence, so branches can be attached to it), or
//! derived from another tree by re-rooting or restriction. Every query below
//! the construction layer is purely combinatorial and works for both.

mod build;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{uint, Ext, Rational};
use crate::error::{Error, Result};
use crate::puiseux::BranchRecord;

pub type BranchId = usize;
pub type VertexId = usize;

/// A point of the tree: the point of exponent `exponent` on the path from the
/// root to the branch `branch`.
///
/// Points produced by the tree are canonical: `branch` is the smallest label
/// whose path contains the point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    pub branch: BranchId,
    pub exponent: Ext,
}

impl TreePoint {
    pub fn new(branch: BranchId, exponent: Ext) -> Self {
        TreePoint { branch, exponent }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    parent: Option<VertexId>,
    children: Vec<VertexId>,
    exponent: Ext,
    /// Index on the half-open edge `(parent, self]`; 1 at the root.
    index: u64,
    contact: Ext,
    label: Option<BranchId>,
    marked: bool,
    depth: usize,
    min_label: BranchId,
}

impl Vertex {
    pub fn parent(&self) -> Option<VertexId> {
        self.parent
    }
    pub fn children(&self) -> &[VertexId] {
        &self.children
    }
    pub fn exponent(&self) -> &Ext {
        &self.exponent
    }
    pub fn index(&self) -> u64 {
        self.index
    }
    pub fn contact(&self) -> &Ext {
        &self.contact
    }
    pub fn label(&self) -> Option<BranchId> {
        self.label
    }
    pub fn is_marked(&self) -> bool {
        self.marked
    }
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty() && self.parent.is_some()
    }
}

/// A point located on the edge `(parent(vertex), vertex]`, or at the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub vertex: VertexId,
    pub exponent: Ext,
}

#[derive(Clone, Debug)]
pub struct EwTree {
    branches: Vec<BranchRecord>,
    root_label: BranchId,
    root_is_component: bool,
    vertices: Vec<Vertex>,
    vertex_of: Vec<Option<VertexId>>,
    /// Pairwise orders of coincidence, present when built from series.
    coincidence: Option<Vec<Vec<Ext>>>,
    marks: Vec<TreePoint>,
}

impl PartialEq for EwTree {
    fn eq(&self, other: &Self) -> bool {
        self.root_label == other.root_label
            && self.root_is_component == other.root_is_component
            && self.vertices == other.vertices
            && self.branches.len() == other.branches.len()
            && self.branches.iter().zip(&other.branches).all(|(a, b)| a.name() == b.name())
    }
}

impl EwTree {
    pub const ROOT: VertexId = 0;

    pub fn branches(&self) -> &[BranchRecord] {
        &self.branches
    }

    pub fn branch(&self, id: BranchId) -> &BranchRecord {
        &self.branches[id]
    }

    pub fn branch_id(&self, name: &str) -> Result<BranchId> {
        self.branches
            .iter()
            .position(|b| b.name() == name)
            .filter(|&id| self.vertex_of[id].is_some())
            .ok_or_else(|| Error::UnknownBranch(name.into()))
    }

    pub fn root_label(&self) -> BranchId {
        self.root_label
    }

    pub fn root_is_component(&self) -> bool {
        self.root_is_component
    }

    /// Whether the tree still knows the series it was built from.
    pub fn has_series(&self) -> bool {
        self.coincidence.is_some()
    }

    /// Labels of the leaves, in id order.
    pub fn leaves(&self) -> Vec<BranchId> {
        (0..self.branches.len())
            .filter(|&id| id != self.root_label && self.vertex_of[id].is_some())
            .collect()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v]
    }

    pub fn vertex_of(&self, label: BranchId) -> Result<VertexId> {
        self.vertex_of
            .get(label)
            .copied()
            .flatten()
            .ok_or_else(|| Error::UnknownBranch(alloc::format!("#{}", label)))
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.vertices
            .iter()
            .enumerate()
            .filter_map(|(v, x)| x.parent.map(|p| (p, v)))
            .collect()
    }

    /// The vertices from the root to `v`, both included.
    pub fn path_to(&self, mut v: VertexId) -> Vec<VertexId> {
        let mut path = alloc::vec![v];
        while let Some(p) = self.vertices[v].parent {
            path.push(p);
            v = p;
        }
        path.reverse();
        path
    }

    pub fn is_ancestor(&self, a: VertexId, mut b: VertexId) -> bool {
        while self.vertices[b].depth > self.vertices[a].depth {
            b = self.vertices[b].parent.expect("non-root");
        }
        a == b
    }

    pub fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        while self.vertices[a].depth > self.vertices[b].depth {
            a = self.vertices[a].parent.expect("non-root");
        }
        while self.vertices[b].depth > self.vertices[a].depth {
            b = self.vertices[b].parent.expect("non-root");
        }
        while a != b {
            a = self.vertices[a].parent.expect("non-root");
            b = self.vertices[b].parent.expect("non-root");
        }
        a
    }

    /// The canonical point of a vertex.
    pub fn point_of(&self, v: VertexId) -> TreePoint {
        let x = &self.vertices[v];
        TreePoint::new(x.min_label, x.exponent.clone())
    }

    pub fn point_of_location(&self, loc: &Location) -> TreePoint {
        TreePoint::new(self.vertices[loc.vertex].min_label, loc.exponent.clone())
    }

    /// The point of exponent `exponent` on the path to `branch`.
    pub fn locate(&self, p: &TreePoint) -> Result<Location> {
        let target = self.vertex_of(p.branch)?;
        let not_in_tree = || Error::PointNotInTree(self.describe(p));
        if p.exponent.is_zero() {
            return Ok(Location { vertex: Self::ROOT, exponent: Ext::zero() });
        }
        if p.exponent < Ext::zero() {
            return Err(not_in_tree());
        }
        self.path_to(target)
            .into_iter()
            .skip(1)
            .find(|&v| self.vertices[v].exponent >= p.exponent)
            .map(|vertex| Location { vertex, exponent: p.exponent.clone() })
            .ok_or_else(not_in_tree)
    }

    pub fn canonical(&self, p: &TreePoint) -> Result<TreePoint> {
        self.locate(p).map(|loc| self.point_of_location(&loc))
    }

    /// The vertex at the point, if the point is a vertex.
    pub fn vertex_at(&self, p: &TreePoint) -> Result<Option<VertexId>> {
        let loc = self.locate(p)?;
        Ok((self.vertices[loc.vertex].exponent == loc.exponent).then_some(loc.vertex))
    }

    pub fn describe(&self, p: &TreePoint) -> String {
        match self.branches.get(p.branch) {
            Some(b) => alloc::format!("{}@{}", b.name(), p.exponent),
            None => alloc::format!("#{}@{}", p.branch, p.exponent),
        }
    }

    pub fn contact_at(&self, loc: &Location) -> Ext {
        let v = &self.vertices[loc.vertex];
        if v.exponent == loc.exponent {
            return v.contact.clone();
        }
        let p = &self.vertices[v.parent.expect("interior points lie below a parent")];
        let de = loc.exponent.finite().expect("finite") - p.exponent.finite().expect("finite");
        p.contact.add_rational(&(de / uint(v.index)))
    }

    /// Contact complexity `c(P)`.
    pub fn contact(&self, p: &TreePoint) -> Result<Ext> {
        self.locate(p).map(|loc| self.contact_at(&loc))
    }

    /// The index at the point, i.e. on the half-open edge containing it.
    pub fn index_at(&self, p: &TreePoint) -> Result<u64> {
        self.locate(p).map(|loc| self.vertices[loc.vertex].index)
    }

    /// The exponent of the point on the path to `branch` with contact `c`.
    pub fn exponent_from_contact(&self, branch: BranchId, c: &Rational) -> Result<Rational> {
        let out_of_range = || Error::OutOfRange(alloc::format!("contact {} on {}", c, self.branches[branch].name()));
        if c < &Rational::zero() {
            return Err(out_of_range());
        }
        if c.is_zero() {
            return Ok(Rational::zero());
        }
        let target = self.vertex_of(branch)?;
        let cc = Ext::Finite(c.clone());
        for v in self.path_to(target).into_iter().skip(1) {
            let x = &self.vertices[v];
            if x.contact >= cc {
                let p = &self.vertices[x.parent.expect("non-root")];
                let pc = p.contact.finite().expect("finite below a vertex");
                let pe = p.exponent.finite().expect("finite below a vertex");
                return Ok(pe + (c - pc) * uint(x.index));
            }
        }
        Err(out_of_range())
    }

    /// The meet of two located points for the order rooted at the root.
    pub fn meet_locations(&self, a: &Location, b: &Location) -> Location {
        if a.vertex == b.vertex {
            let exponent = core::cmp::min(&a.exponent, &b.exponent).clone();
            return Location { vertex: a.vertex, exponent };
        }
        let m = self.lca(a.vertex, b.vertex);
        if m == a.vertex {
            a.clone()
        } else if m == b.vertex {
            b.clone()
        } else {
            Location { vertex: m, exponent: self.vertices[m].exponent.clone() }
        }
    }

    /// The tripod `⟨root, P, Q⟩`, the infimum of `P` and `Q`.
    pub fn meet(&self, p: &TreePoint, q: &TreePoint) -> Result<TreePoint> {
        let (a, b) = (self.locate(p)?, self.locate(q)?);
        Ok(self.point_of_location(&self.meet_locations(&a, &b)))
    }

    /// The center of the tripod spanned by three points.
    pub fn median(&self, p: &TreePoint, q: &TreePoint, r: &TreePoint) -> Result<TreePoint> {
        let (a, b, c) = (self.locate(p)?, self.locate(q)?, self.locate(r)?);
        let m = [self.meet_locations(&a, &b), self.meet_locations(&a, &c), self.meet_locations(&b, &c)]
            .into_iter()
            .max_by(|x, y| x.exponent.cmp(&y.exponent))
            .expect("three meets");
        Ok(self.point_of_location(&m))
    }

    /// Whether `p` lies on the segment from the root to `q`.
    pub fn precedes(&self, p: &TreePoint, q: &TreePoint) -> Result<bool> {
        let (a, b) = (self.locate(p)?, self.locate(q)?);
        Ok(self.meet_locations(&a, &b) == a)
    }

    pub fn leaf_point(&self, label: BranchId) -> Result<TreePoint> {
        self.vertex_of(label).map(|v| self.point_of(v))
    }

    pub fn root_point(&self) -> TreePoint {
        self.point_of(Self::ROOT)
    }

    /// The stored order of coincidence of two series branches.
    pub fn coincidence_order(&self, i: BranchId, j: BranchId) -> Result<Ext> {
        let table = self
            .coincidence
            .as_ref()
            .ok_or_else(|| Error::precondition("tree carries no series data"))?;
        if self.branches[i].is_l() || self.branches[j].is_l() {
            return Err(Error::precondition("order of coincidence with the root branch"));
        }
        Ok(table[i][j].clone())
    }

    /// Intersection multiplicity of two labels by the tripod formula
    /// `(C_i·C_j) = i(C_i)·i(C_j)·c(C_i ∧ C_j)`; with the root label it is the
    /// index of the other leaf.
    pub fn intersection(&self, i: BranchId, j: BranchId) -> Result<Ext> {
        let (vi, vj) = (self.vertex_of(i)?, self.vertex_of(j)?);
        if i == j {
            return Ok(Ext::Infinite);
        }
        if i == self.root_label {
            return Ok(Ext::Finite(uint(self.vertices[vj].index)));
        }
        if j == self.root_label {
            return Ok(Ext::Finite(uint(self.vertices[vi].index)));
        }
        let m = self.lca(vi, vj);
        let factor = uint(self.vertices[vi].index * self.vertices[vj].index);
        Ok(self.vertices[m].contact.scale(&factor))
    }

    /// The attaching point of a generic smooth branch: the point of exponent 1
    /// of the index-1 locus, or the highest point of that locus.
    pub fn unit_point(&self) -> Result<TreePoint> {
        if self.vertices.len() < 2 {
            return Err(Error::precondition("unit point of the trivial tree"));
        }
        let one = Ext::from_int(1);
        let mut best = Self::ROOT;
        let mut stack = alloc::vec![Self::ROOT];
        while let Some(v) = stack.pop() {
            let x = &self.vertices[v];
            if x.exponent == one {
                return Ok(self.point_of(v));
            }
            if x.exponent > self.vertices[best].exponent
                || (x.exponent == self.vertices[best].exponent && x.min_label < self.vertices[best].min_label)
            {
                best = v;
            }
            for &w in x.children.iter().rev() {
                let y = &self.vertices[w];
                if y.index != 1 {
                    continue;
                }
                if x.exponent < one && one < y.exponent {
                    return Ok(self.point_of_location(&Location { vertex: w, exponent: one }));
                }
                stack.push(w);
            }
        }
        Ok(self.point_of(best))
    }

    /// Whether the leaf has the index profile of a smooth branch: constant 1,
    /// or a single jump to `n` at exponent `1/n`.
    pub fn is_smooth_leaf(&self, label: BranchId) -> Result<bool> {
        let leaf = self.vertex_of(label)?;
        if label == self.root_label {
            return Ok(true);
        }
        let n = self.vertices[leaf].index;
        let path = self.path_to(leaf);
        let mut jumped = false;
        for w in path.windows(2) {
            let (p, v) = (&self.vertices[w[0]], &self.vertices[w[1]]);
            if v.index == 1 && !jumped {
                continue;
            }
            if !jumped {
                jumped = true;
                if v.index != n || p.exponent != Ext::Finite(Rational::new(1.into(), n.into())) {
                    return Ok(false);
                }
            } else if v.index != n {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Attaching point of `a` on the tree: the point of exponent
    /// `max_i k(a, C_i)` on a branch realizing the maximum. The flag is set
    /// when `a` is already a branch of the tree.
    pub fn attach_branch(&self, a: &BranchRecord) -> Result<(TreePoint, bool)> {
        if self.coincidence.is_none() {
            return Err(Error::precondition("attaching needs a tree built from series"));
        }
        if a.is_l() {
            return Ok((self.root_point(), self.root_is_component));
        }
        let series = a.as_series().expect("not L");
        let mut best: Option<(Ext, BranchId)> = None;
        for id in self.leaves() {
            let other = match self.branches[id].as_series() {
                Some(s) => s,
                None => continue,
            };
            if series.same_branch(other) {
                return Ok((self.leaf_point(id)?, true));
            }
            let k = series.coincidence_order(other);
            if best.as_ref().map_or(true, |(b, _)| &k > b) {
                best = Some((k, id));
            }
        }
        match best {
            None => Ok((self.root_point(), false)),
            Some((k, id)) => Ok((self.canonical(&TreePoint::new(id, k))?, false)),
        }
    }

    /// The retraction of a point of `big` onto the subtree `small` spanned by
    /// a subset of its branches.
    pub fn retraction(big: &EwTree, small: &EwTree, p: &TreePoint) -> Result<TreePoint> {
        if !big.has_series() || !small.has_series() {
            return Err(Error::precondition("retraction needs trees built from series"));
        }
        let mut matched = Vec::new();
        for s in small.leaves() {
            let rec = small.branch(s);
            let b = big
                .leaves()
                .into_iter()
                .find(|&b| big.branch(b).same_branch(rec))
                .ok_or_else(|| Error::precondition(alloc::format!("{} is not a branch of the larger tree", rec.name())))?;
            matched.push((s, b));
        }
        let p = big.canonical(p)?;
        if p.exponent.is_zero() || p.branch == big.root_label || matched.is_empty() {
            return Ok(small.root_point());
        }
        if let Some(&(s, _)) = matched.iter().find(|(_, b)| *b == p.branch) {
            return small.canonical(&TreePoint::new(s, p.exponent));
        }
        let mut best: Option<(Ext, BranchId)> = None;
        for &(s, b) in &matched {
            let k = big.coincidence_order(p.branch, b)?;
            if best.as_ref().map_or(true, |(x, _)| &k > x) {
                best = Some((k, s));
            }
        }
        let (k, s) = best.expect("nonempty");
        small.canonical(&TreePoint::new(s, core::cmp::min(p.exponent, k)))
    }
}

impl fmt::Display for EwTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, x) in self.vertices.iter().enumerate() {
            let p = self.point_of(v);
            write!(f, "{} e={} i={} c={}", self.describe(&p), x.exponent, x.index, x.contact)?;
            if let Some(parent) = x.parent {
                write!(f, " parent={}", self.describe(&self.point_of(parent)))?;
            }
            if let Some(l) = x.label {
                write!(f, " [{}]", self.branches[l].name())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
