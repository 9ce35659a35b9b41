//! Splice diagrams of `C + L` read off the Eggers-Wall tree, and linking
//! numbers computed on them.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::arith::{to_u64_exact, uint, Ext, Rational};
use crate::error::{Error, Result};
use crate::inversion::invert;
use crate::puiseux::{BranchRecord, PuiseuxSeries};
use crate::tree::{EwTree, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpliceVertex {
    /// An internal node; every node carries the sign `+`.
    Node,
    /// An arrowhead, i.e. a component of the link.
    Arrow(String),
    /// A leaf that is not an arrowhead.
    Phantom,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpliceDiagram {
    vertices: Vec<SpliceVertex>,
    edges: Vec<[usize; 2]>,
    /// Germ weights, keyed by (node, edge).
    weights: BTreeMap<(usize, usize), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonPositive { node: usize, edge: usize },
    MissingWeight { node: usize, edge: usize },
    NotCoprime { node: usize, a: u64, b: u64 },
    NotATree,
}

/// Outcome of [`SpliceDiagram::validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpliceReport {
    pub violations: Vec<Violation>,
}

impl SpliceReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl SpliceDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: SpliceVertex) -> usize {
        self.vertices.push(v);
        self.vertices.len() - 1
    }

    pub fn connect(&mut self, a: usize, b: usize) -> usize {
        self.edges.push([a, b]);
        self.edges.len() - 1
    }

    pub fn set_weight(&mut self, node: usize, edge: usize, weight: u64) {
        self.weights.insert((node, edge), weight);
    }

    pub fn vertices(&self) -> &[SpliceVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn weight(&self, node: usize, edge: usize) -> Option<u64> {
        self.weights.get(&(node, edge)).copied()
    }

    pub fn nodes(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&v| self.vertices[v] == SpliceVertex::Node).collect()
    }

    pub fn arrow(&self, name: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| matches!(v, SpliceVertex::Arrow(n) if n == name))
            .ok_or_else(|| Error::UnknownBranch(name.into()))
    }

    pub fn arrows(&self) -> Vec<&str> {
        self.vertices
            .iter()
            .filter_map(|v| match v {
                SpliceVertex::Arrow(n) => Some(n.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Edges incident to `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].contains(&v)).collect()
    }

    fn other_end(&self, edge: usize, v: usize) -> usize {
        let [a, b] = self.edges[edge];
        if a == v {
            b
        } else {
            a
        }
    }

    /// The germ weights at a node, sorted.
    pub fn node_weights(&self, node: usize) -> Vec<u64> {
        let mut w: Vec<u64> = self.incident(node).into_iter().filter_map(|e| self.weight(node, e)).collect();
        w.sort_unstable();
        w
    }

    /// Edges on the path between two vertices.
    fn path_edges(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut via: Vec<Option<usize>> = alloc::vec![None; self.vertices.len()];
        let mut seen = alloc::vec![false; self.vertices.len()];
        let mut queue = alloc::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.incident(v) {
                let w = self.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut out = Vec::new();
        let mut v = to;
        while v != from {
            let e = via[v].expect("reached");
            out.push(e);
            v = self.other_end(e, v);
        }
        out.reverse();
        Some(out)
    }

    /// Linking number of two arrowheads: the product of the germ weights
    /// adjacent to, but not on, the path joining them.
    pub fn linking(&self, a: &str, b: &str) -> Result<u64> {
        let (va, vb) = (self.arrow(a)?, self.arrow(b)?);
        if va == vb {
            return Err(Error::precondition("linking number of an arrowhead with itself"));
        }
        let path = self.path_edges(va, vb).ok_or_else(|| Error::Internal("disconnected diagram".into()))?;
        let mut product = 1u64;
        let mut v = va;
        for (k, &e) in path.iter().enumerate() {
            if k > 0 && self.vertices[v] == SpliceVertex::Node {
                for f in self.incident(v) {
                    if f != e && f != path[k - 1] {
                        let w = self.weight(v, f).ok_or_else(|| Error::Internal("missing germ weight".into()))?;
                        product = product
                            .checked_mul(w)
                            .ok_or_else(|| Error::OutOfRange("linking number overflows u64".into()))?;
                    }
                }
            }
            v = self.other_end(e, v);
        }
        Ok(product)
    }

    /// Checks that the graph is a tree and that at every node the germ weights
    /// are positive and pairwise coprime.
    pub fn validate(&self) -> SpliceReport {
        let mut report = SpliceReport::default();
        if !self.vertices.is_empty() {
            let connected = (0..self.vertices.len()).all(|v| self.path_edges(0, v).is_some());
            if !connected || self.edges.len() + 1 != self.vertices.len() {
                report.violations.push(Violation::NotATree);
            }
        }
        for node in self.nodes() {
            let mut ws = Vec::new();
            for edge in self.incident(node) {
                match self.weight(node, edge) {
                    None => report.violations.push(Violation::MissingWeight { node, edge }),
                    Some(0) => report.violations.push(Violation::NonPositive { node, edge }),
                    Some(w) => ws.push(w),
                }
            }
            for i in 0..ws.len() {
                for j in 0..i {
                    if ws[i].gcd(&ws[j]) != 1 {
                        report.violations.push(Violation::NotCoprime { node, a: ws[j], b: ws[i] });
                    }
                }
            }
        }
        report
    }

    /// A string that identifies the diagram up to isomorphism, read from the
    /// arrowhead `root`.
    pub fn canonical_form(&self, root: &str) -> Result<String> {
        let start = self.arrow(root)?;
        Ok(self.encode(start, None))
    }

    fn encode(&self, v: usize, from: Option<usize>) -> String {
        let mut parts: Vec<String> = Vec::new();
        for e in self.incident(v) {
            if Some(e) == from {
                continue;
            }
            let w = self.other_end(e, v);
            let near = self.weight(v, e).map_or(String::from("-"), |x| alloc::format!("{}", x));
            let far = self.weight(w, e).map_or(String::from("-"), |x| alloc::format!("{}", x));
            parts.push(alloc::format!("{}:{}>{}", near, far, self.encode(w, Some(e))));
        }
        parts.sort();
        let head = match &self.vertices[v] {
            SpliceVertex::Node => String::from("N"),
            SpliceVertex::Arrow(n) => alloc::format!("A({})", n),
            SpliceVertex::Phantom => String::from("P"),
        };
        alloc::format!("{}[{}]", head, parts.join(","))
    }

    /// Forgets an arrowhead, removes weight-1 phantom tips and absorbs nodes
    /// left with two germs of weight 1.
    fn forget_and_simplify(&mut self, name: &str) -> Result<()> {
        let v = self.arrow(name)?;
        self.vertices[v] = SpliceVertex::Phantom;
        loop {
            let mut changed = false;
            for v in 0..self.vertices.len() {
                if self.vertices[v] != SpliceVertex::Phantom {
                    continue;
                }
                let inc = self.incident(v);
                if inc.len() != 1 {
                    continue;
                }
                let node = self.other_end(inc[0], v);
                if self.vertices[node] == SpliceVertex::Node && self.weight(node, inc[0]) == Some(1) {
                    self.remove_vertex(v);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            for v in 0..self.vertices.len() {
                if self.vertices[v] != SpliceVertex::Node {
                    continue;
                }
                let inc = self.incident(v);
                if inc.len() == 2 && inc.iter().all(|&e| self.weight(v, e) == Some(1)) {
                    let (a, b) = (self.other_end(inc[0], v), self.other_end(inc[1], v));
                    let (wa, wb) = (self.weight(a, inc[0]), self.weight(b, inc[1]));
                    let e = self.connect(a, b);
                    if let Some(w) = wa {
                        self.set_weight(a, e, w);
                    }
                    if let Some(w) = wb {
                        self.set_weight(b, e, w);
                    }
                    self.remove_vertex(v);
                    changed = true;
                    break;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn remove_vertex(&mut self, v: usize) {
        let keep_edges: Vec<usize> = (0..self.edges.len()).filter(|&e| !self.edges[e].contains(&v)).collect();
        let mut edge_id = alloc::vec![usize::MAX; self.edges.len()];
        for (new, &old) in keep_edges.iter().enumerate() {
            edge_id[old] = new;
        }
        let vid = |x: usize| if x > v { x - 1 } else { x };
        self.edges = keep_edges.iter().map(|&e| {
            let [a, b] = self.edges[e];
            [vid(a), vid(b)]
        }).collect();
        self.weights = core::mem::take(&mut self.weights)
            .into_iter()
            .filter(|&((n, e), _)| n != v && edge_id[e] != usize::MAX)
            .map(|((n, e), w)| ((vid(n), edge_id[e]), w))
            .collect();
        self.vertices.remove(v);
    }
}

fn integral(q: &Rational, what: &str) -> Result<u64> {
    to_u64_exact(q).filter(|&w| w > 0).ok_or_else(|| Error::Internal(alloc::format!("{} weight {} is not a positive integer", what, q)))
}

/// The splice diagram of `C + L` for a tree in which every branch is
/// transversal to the root branch.
pub fn to_splice(t: &EwTree) -> Result<SpliceDiagram> {
    let one = Ext::from_int(1);
    for (p, v) in t.edges() {
        if t.vertex(v).index() > 1 && t.vertex(p).exponent() < &one {
            return Err(Error::precondition(
                "a branch is tangent to the root branch; use the generic-observer route",
            ));
        }
    }
    let mut d = SpliceDiagram::new();
    let mut image: Vec<Option<usize>> = alloc::vec![None; t.vertices().len()];
    let is_node = |v: VertexId| {
        let x = t.vertex(v);
        v != EwTree::ROOT
            && !x.children().is_empty()
            && (x.children().len() >= 2 || x.children().iter().any(|&w| t.vertex(w).index() != x.index()))
    };
    for v in 0..t.vertices().len() {
        let x = t.vertex(v);
        let kind = if v == EwTree::ROOT || x.children().is_empty() {
            SpliceVertex::Arrow(t.branch(x.label().expect("root and leaves are labelled")).name().into())
        } else if is_node(v) {
            SpliceVertex::Node
        } else {
            continue;
        };
        image[v] = Some(d.add_vertex(kind));
    }
    // Edge from each diagram vertex up to its nearest diagram ancestor,
    // remembering which child direction of that ancestor it leaves through.
    let mut up_edge: Vec<Option<usize>> = alloc::vec![None; t.vertices().len()];
    let mut child_edge: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for v in 0..t.vertices().len() {
        let Some(dv) = image[v] else { continue };
        let Some(mut p) = t.vertex(v).parent() else { continue };
        let mut direction = v;
        while image[p].is_none() {
            direction = p;
            p = t.vertex(p).parent().expect("root is in the diagram");
        }
        let e = d.connect(image[p].expect("diagram vertex"), dv);
        up_edge[v] = Some(e);
        child_edge.insert((p, direction), e);
    }
    for v in 0..t.vertices().len() {
        if !is_node(v) {
            continue;
        }
        let node = image[v].expect("node");
        let x = t.vertex(v);
        let di = x.index();
        let s = x.contact().finite().expect("internal contact is finite").clone();
        let jumps: Vec<VertexId> = x.children().iter().copied().filter(|&w| t.vertex(w).index() > di).collect();
        let cont: Vec<VertexId> = x.children().iter().copied().filter(|&w| t.vertex(w).index() == di).collect();
        let up = up_edge[v].expect("non-root node");
        if jumps.is_empty() {
            d.set_weight(node, up, integral(&(uint(di * di) * &s), "root-side")?);
            for &w in &cont {
                d.set_weight(node, child_edge[&(v, w)], 1);
            }
            continue;
        }
        let dp = t.vertex(jumps[0]).index();
        if jumps.iter().any(|&w| t.vertex(w).index() != dp) {
            return Err(Error::Internal("outgoing indices disagree".into()));
        }
        d.set_weight(node, up, integral(&(uint(di * dp) * &s), "root-side")?);
        for &w in &jumps {
            d.set_weight(node, child_edge[&(v, w)], 1);
        }
        let ratio = integral(&Rational::new(dp.into(), di.into()), "ramification")?;
        match cont.as_slice() {
            [] => {
                let tip = d.add_vertex(SpliceVertex::Phantom);
                let e = d.connect(node, tip);
                d.set_weight(node, e, ratio);
            }
            [w] => d.set_weight(node, child_edge[&(v, *w)], ratio),
            _ => return Err(Error::Internal("several index-continuous directions at a jump".into())),
        }
    }
    Ok(d)
}

/// The generic line `c·x` used as auxiliary observer: `c` starts at 2 and is
/// bumped past any branch with tangent `y = c·x`.
pub fn generic_line(curve: &[BranchRecord]) -> BranchRecord {
    let one = Rational::from_integer(1.into());
    let mut c = 2i64;
    while curve.iter().any(|r| {
        r.as_series()
            .and_then(|s| s.coefficient(&one))
            .and_then(|k| k.as_rational().cloned())
            == Some(Rational::from_integer(c.into()))
    }) {
        c += 1;
    }
    let series = PuiseuxSeries::from_rational_terms(&[(one, Rational::from_integer(c.into()))]).expect("valid");
    let mut name = String::from("Lg");
    while curve.iter().any(|r| r.name() == name) {
        name.push('\'');
    }
    BranchRecord::series(name, series)
}

/// The splice diagram of `C + L` for any curve, through a generic transversal
/// observer: re-root `Θ_L(C + L + Lg)` at `Lg`, read the diagram of
/// `C + L + Lg`, then forget `Lg`.
pub fn splice_via_generic(curve: &[BranchRecord]) -> Result<SpliceDiagram> {
    let mut records: Vec<BranchRecord> = curve.to_vec();
    if !records.iter().any(BranchRecord::is_l) {
        records.push(BranchRecord::reference("L"));
    }
    let lg = generic_line(&records);
    let lg_name: String = lg.name().into();
    records.push(lg);
    let lg_id = records.len() - 1;
    let keep: Vec<usize> = (0..lg_id).collect();
    let tree = EwTree::build(records)?;
    let rerooted = invert(&tree, lg_id)?.restrict(&keep)?;
    let mut d = to_splice(&rerooted)?;
    d.forget_and_simplify(&lg_name)?;
    Ok(d)
}
