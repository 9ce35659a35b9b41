use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{BranchId, EwTree, TreePoint, Vertex, VertexId};
use crate::arith::{uint, Ext};
use crate::error::{Error, Result};
use crate::puiseux::BranchRecord;

/// Vertex data before the derived fields (children, depth, labels) are filled
/// in.
#[derive(Clone, Debug)]
pub(crate) struct RawVertex {
    pub parent: Option<VertexId>,
    pub exponent: Ext,
    pub index: u64,
    pub contact: Ext,
    pub label: Option<BranchId>,
    pub marked: bool,
}

impl EwTree {
    /// Builds `Θ_L(C)`. A record tagged `L` among `records` makes `L` a
    /// component of `C`; otherwise an unlabelled-component root named `L` is
    /// appended.
    pub fn build(records: Vec<BranchRecord>) -> Result<EwTree> {
        let include_l = records.iter().any(BranchRecord::is_l);
        Self::build_with_l(records, include_l)
    }

    /// Builds `Θ_L(C)`, adding `L` as a component when `include_l` is set and
    /// no `L` record is given.
    pub fn build_with_l(mut records: Vec<BranchRecord>, include_l: bool) -> Result<EwTree> {
        let ls: Vec<usize> = (0..records.len()).filter(|&i| records[i].is_l()).collect();
        if ls.len() > 1 {
            return Err(Error::DuplicateBranch(
                records[ls[0]].name().into(),
                records[ls[1]].name().into(),
            ));
        }
        let root_label = match ls.first() {
            Some(&i) => i,
            None => {
                if records.is_empty() && !include_l {
                    return Err(Error::EmptyCurve);
                }
                records.push(BranchRecord::reference("L"));
                records.len() - 1
            }
        };
        Self::from_series(records, root_label, include_l || !ls.is_empty(), Vec::new())
    }

    pub(crate) fn from_series(
        branches: Vec<BranchRecord>,
        root_label: BranchId,
        root_is_component: bool,
        marks: Vec<TreePoint>,
    ) -> Result<EwTree> {
        for i in 0..branches.len() {
            for j in 0..i {
                if branches[i].name() == branches[j].name() {
                    return Err(Error::precondition(alloc::format!("duplicate name {}", branches[i].name())));
                }
            }
        }
        let series: Vec<BranchId> = (0..branches.len()).filter(|&i| i != root_label).collect();
        let m = branches.len();
        let mut k = alloc::vec![alloc::vec![Ext::zero(); m]; m];
        for (a, &i) in series.iter().enumerate() {
            k[i][i] = Ext::Infinite;
            for &j in &series[..a] {
                let si = branches[i].as_series().expect("series branch");
                let sj = branches[j].as_series().expect("series branch");
                let kij = si.coincidence_order(sj);
                if kij.is_infinite() && si.same_branch(sj) {
                    return Err(Error::DuplicateBranch(branches[j].name().into(), branches[i].name().into()));
                }
                k[i][j] = kij.clone();
                k[j][i] = kij;
            }
        }

        // Gluing classes: (b, e) ~ (j, e) iff e <= k(b, j).
        let canon = |b: BranchId, e: &Ext| -> BranchId {
            series.iter().copied().find(|&j| j == b || &k[b][j] >= e).expect("b itself")
        };
        let mut points: BTreeSet<(Ext, BranchId)> = BTreeSet::new();
        for &b in &series {
            let s = branches[b].as_series().expect("series branch");
            points.insert((Ext::Infinite, b));
            for e in s.characteristic_exponents() {
                points.insert((Ext::Finite(e.clone()), canon(b, &Ext::Finite(e))));
            }
            for &j in &series {
                if j != b {
                    points.insert((k[b][j].clone(), canon(b, &k[b][j])));
                }
            }
        }
        let points: Vec<(Ext, BranchId)> = points.into_iter().collect();

        let mut raw = alloc::vec![RawVertex {
            parent: None,
            exponent: Ext::zero(),
            index: 1,
            contact: Ext::zero(),
            label: Some(root_label),
            marked: false,
        }];
        for (idx, (e, b)) in points.iter().enumerate() {
            // Points are sorted by exponent, so the parent is already placed.
            let parent = points[..idx]
                .iter()
                .enumerate()
                .rev()
                .find(|(_, (f, j))| f < e && canon(*b, f) == *j)
                .map_or(0, |(pi, _)| pi + 1);
            let s = branches[*b].as_series().expect("series branch");
            let index = s.index_at(e);
            let contact = if e.is_infinite() {
                Ext::Infinite
            } else {
                let p = &raw[parent];
                let de = e.finite().expect("finite") - p.exponent.finite().expect("finite");
                p.contact.add_rational(&(de / uint(index)))
            };
            raw.push(RawVertex {
                parent: Some(parent),
                exponent: e.clone(),
                index,
                contact,
                label: e.is_infinite().then_some(*b),
                marked: false,
            });
        }

        let mut tree = EwTree::from_raw(branches, root_label, root_is_component, raw)?;
        tree.coincidence = Some(k);
        for p in marks {
            tree = tree.mark(&p)?;
        }
        Ok(tree)
    }

    /// Assembles a tree from raw vertices and normalizes the vertex order:
    /// increasing exponent, ties broken by canonical branch.
    pub(crate) fn from_raw(
        branches: Vec<BranchRecord>,
        root_label: BranchId,
        root_is_component: bool,
        raw: Vec<RawVertex>,
    ) -> Result<EwTree> {
        Self::from_raw_mapped(branches, root_label, root_is_component, raw).map(|(t, _)| t)
    }

    /// As [`EwTree::from_raw`], also returning the new id of each raw vertex.
    pub(crate) fn from_raw_mapped(
        branches: Vec<BranchRecord>,
        root_label: BranchId,
        root_is_component: bool,
        raw: Vec<RawVertex>,
    ) -> Result<(EwTree, Vec<VertexId>)> {
        let roots: Vec<_> = (0..raw.len()).filter(|&v| raw[v].parent.is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Internal(alloc::format!("{} roots", roots.len())));
        }
        let mut tree = EwTree {
            vertex_of: alloc::vec![None; branches.len()],
            branches,
            root_label,
            root_is_component,
            vertices: raw
                .into_iter()
                .map(|r| Vertex {
                    parent: r.parent,
                    children: Vec::new(),
                    exponent: r.exponent,
                    index: r.index,
                    contact: r.contact,
                    label: r.label,
                    marked: r.marked,
                    depth: 0,
                    min_label: usize::MAX,
                })
                .collect(),
            coincidence: None,
            marks: Vec::new(),
        };
        tree.refresh(roots[0])?;
        let mut order: Vec<VertexId> = (0..tree.vertices.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&tree.vertices[a], &tree.vertices[b]);
            (x.parent.is_some(), &x.exponent, x.min_label).cmp(&(y.parent.is_some(), &y.exponent, y.min_label))
        });
        let mut new_id = alloc::vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let mut vertices: Vec<Vertex> = order.iter().map(|&old| tree.vertices[old].clone()).collect();
        for v in &mut vertices {
            v.parent = v.parent.map(|p| new_id[p]);
        }
        tree.vertices = vertices;
        tree.refresh(Self::ROOT)?;
        tree.check()?;
        Ok((tree, new_id))
    }

    /// Recomputes children, depths, label lookup and minimal labels.
    fn refresh(&mut self, root: VertexId) -> Result<()> {
        for v in &mut self.vertices {
            v.children.clear();
        }
        for v in 0..self.vertices.len() {
            if let Some(p) = self.vertices[v].parent {
                self.vertices[p].children.push(v);
            }
        }
        self.vertex_of = alloc::vec![None; self.branches.len()];
        for (v, x) in self.vertices.iter().enumerate() {
            if let Some(l) = x.label {
                if self.vertex_of[l].replace(v).is_some() {
                    return Err(Error::Internal(alloc::format!("label {} used twice", l)));
                }
            }
        }
        let mut order = Vec::with_capacity(self.vertices.len());
        let mut stack = alloc::vec![(root, 0usize)];
        while let Some((v, d)) = stack.pop() {
            self.vertices[v].depth = d;
            order.push(v);
            for &w in &self.vertices[v].children {
                stack.push((w, d + 1));
            }
        }
        if order.len() != self.vertices.len() {
            return Err(Error::Internal("disconnected vertices".into()));
        }
        for &v in order.iter().rev() {
            let own = if v == root || self.vertices[v].children.is_empty() {
                self.vertices[v].label.unwrap_or(usize::MAX)
            } else {
                usize::MAX
            };
            let m = self.vertices[v]
                .children
                .iter()
                .map(|&w| self.vertices[w].min_label)
                .fold(own, usize::min);
            self.vertices[v].min_label = m;
        }
        Ok(())
    }

    /// Structural invariants: exponents strictly increase away from the root,
    /// indices divide along paths, and `Δe = i·Δc` on every finite edge.
    fn check(&self) -> Result<()> {
        for (p, v) in self.edges() {
            let (x, y) = (&self.vertices[p], &self.vertices[v]);
            let bad = |what: &str| Err(Error::Internal(alloc::format!("{} on edge {}→{}", what, p, v)));
            if x.exponent >= y.exponent {
                return bad("exponent not increasing");
            }
            if y.index % x.index != 0 {
                return bad("index not divisible");
            }
            if let (Ext::Finite(e1), Ext::Finite(e2)) = (&x.exponent, &y.exponent) {
                match (&x.contact, &y.contact) {
                    (Ext::Finite(c1), Ext::Finite(c2)) => {
                        if e2 - e1 != (c2 - c1) * uint(y.index) {
                            return bad("Δe ≠ i·Δc");
                        }
                    }
                    _ => return bad("infinite contact at finite exponent"),
                }
            }
        }
        Ok(())
    }

    /// The same tree with the point `p` made a vertex.
    pub fn mark(&self, p: &TreePoint) -> Result<EwTree> {
        let loc = self.locate(p)?;
        let mut out = self.clone();
        if self.vertices[loc.vertex].exponent == loc.exponent {
            out.vertices[loc.vertex].marked = true;
        } else {
            let contact = self.contact_at(&loc);
            let raw = out.raw_vertices();
            let mut raw = raw;
            let v = loc.vertex;
            raw.push(RawVertex {
                parent: raw[v].parent,
                exponent: loc.exponent.clone(),
                index: raw[v].index,
                contact,
                label: None,
                marked: true,
            });
            raw[v].parent = Some(raw.len() - 1);
            let mut rebuilt = EwTree::from_raw(out.branches.clone(), out.root_label, out.root_is_component, raw)?;
            rebuilt.coincidence = out.coincidence.take();
            rebuilt.marks = out.marks.clone();
            out = rebuilt;
        }
        out.marks.push(self.point_of_location(&loc));
        Ok(out)
    }

    /// Rebuilds from series with extra branches appended; branches already
    /// present are reused. Returns the ids of `extra` in the new tree.
    pub fn augmented(&self, extra: &[BranchRecord]) -> Result<(EwTree, Vec<BranchId>)> {
        if self.coincidence.is_none() {
            return Err(Error::precondition("augmenting needs a tree built from series"));
        }
        let mut branches = self.branches.clone();
        let mut ids = Vec::with_capacity(extra.len());
        let mut root_is_component = self.root_is_component;
        for rec in extra {
            if rec.is_l() {
                root_is_component = true;
                ids.push(self.root_label);
                continue;
            }
            match branches.iter().position(|b| b.same_branch(rec)) {
                Some(id) => ids.push(id),
                None => {
                    let mut rec = rec.clone();
                    if branches.iter().any(|b| b.name() == rec.name()) {
                        rec = BranchRecord::new(alloc::format!("{}'", rec.name()), rec.branch().clone());
                    }
                    branches.push(rec);
                    ids.push(branches.len() - 1);
                }
            }
        }
        if ids.iter().all(|&id| id < self.branches.len()) && root_is_component == self.root_is_component {
            return Ok((self.clone(), ids));
        }
        let tree = EwTree::from_series(branches, self.root_label, root_is_component, self.marks.clone())?;
        Ok((tree, ids))
    }

    pub(crate) fn raw_vertices(&self) -> Vec<RawVertex> {
        self.vertices
            .iter()
            .map(|v| RawVertex {
                parent: v.parent,
                exponent: v.exponent.clone(),
                index: v.index,
                contact: v.contact.clone(),
                label: v.label,
                marked: v.marked,
            })
            .collect()
    }

    /// Reassembles a tree from modified raw data, dropping series data.
    pub(crate) fn derived(
        &self,
        root_label: BranchId,
        root_is_component: bool,
        raw: Vec<RawVertex>,
    ) -> Result<EwTree> {
        EwTree::from_raw(self.branches.clone(), root_label, root_is_component, raw)
    }

    pub(crate) fn derived_mapped(
        &self,
        root_label: BranchId,
        root_is_component: bool,
        raw: Vec<RawVertex>,
    ) -> Result<(EwTree, Vec<VertexId>)> {
        EwTree::from_raw_mapped(self.branches.clone(), root_label, root_is_component, raw)
    }

    /// The subtree spanned by the root and the leaves labelled by `keep`,
    /// with unmarked valency-2 vertices that carry no index jump removed.
    pub fn restrict(&self, keep: &[BranchId]) -> Result<EwTree> {
        let mut alive = alloc::vec![false; self.vertices.len()];
        alive[Self::ROOT] = true;
        for &label in keep {
            if label == self.root_label {
                continue;
            }
            let v = self.vertex_of(label)?;
            for w in self.path_to(v) {
                alive[w] = true;
            }
        }
        let mut raw = self.raw_vertices();
        let kept_children = |v: VertexId| self.vertices[v].children.iter().filter(|&&w| alive[w]).count();
        let mut removed = alloc::vec![false; raw.len()];
        for v in 0..raw.len() {
            if !alive[v] {
                removed[v] = true;
            }
        }
        for v in 1..raw.len() {
            if removed[v] || raw[v].label.is_some() || raw[v].marked || kept_children(v) != 1 {
                continue;
            }
            let child = *self.vertices[v].children.iter().find(|&&w| alive[w]).expect("one child");
            if raw[child].index == raw[v].index {
                removed[v] = true;
            }
        }
        // Reattach every kept vertex to its nearest kept ancestor.
        for v in 0..raw.len() {
            if removed[v] {
                continue;
            }
            let mut p = raw[v].parent;
            while let Some(q) = p {
                if !removed[q] {
                    break;
                }
                p = self.vertices[q].parent;
            }
            raw[v].parent = p;
        }
        let keep_set: BTreeSet<BranchId> = keep.iter().copied().collect();
        let mut new_id = alloc::vec![usize::MAX; raw.len()];
        let mut out = Vec::new();
        for v in 0..raw.len() {
            if !removed[v] {
                new_id[v] = out.len();
                let mut r = raw[v].clone();
                if v != Self::ROOT && r.label.map_or(false, |l| !keep_set.contains(&l)) {
                    r.label = None;
                }
                out.push(r);
            }
        }
        for r in &mut out {
            r.parent = r.parent.map(|p| new_id[p]);
        }
        let root_is_component = self.root_is_component && keep_set.contains(&self.root_label);
        self.derived(self.root_label, root_is_component, out)
    }
}
