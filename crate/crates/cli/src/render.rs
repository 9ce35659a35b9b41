//! JSON and DOT renderings. Every number is written as an exact string:
//! `"p/q"`, an integer, or `"inf"`.

use std::fmt::Write;

use ewtree_core::splice::SpliceVertex;
use ewtree_core::{EwTree, SpliceDiagram, TreePoint};
use serde_json::{json, Value};

pub fn tree_json(t: &EwTree) -> Value {
    let vertices: Vec<Value> = (0..t.vertices().len())
        .map(|v| {
            let x = t.vertex(v);
            json!({
                "id": v,
                "point": t.describe(&t.point_of(v)),
                "e": x.exponent().to_string(),
                "i": x.index().to_string(),
                "c": x.contact().to_string(),
                "parent": x.parent(),
                "label": x.label().map(|l| t.branch(l).name()),
                "marked": x.is_marked(),
            })
        })
        .collect();
    let branches: Vec<Value> = t
        .branches()
        .iter()
        .map(|b| {
            json!({
                "name": b.name(),
                "series": b.as_series().map_or("L".to_string(), |s| s.to_string()),
                "characteristic_exponents": b.char_exponents().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "root": t.branch(t.root_label()).name(),
        "root_is_component": t.root_is_component(),
        "branches": if t.has_series() { Value::Array(branches) } else { Value::Null },
        "vertices": vertices,
        "edges": t.edges().iter().map(|(p, v)| json!([p, v])).collect::<Vec<_>>(),
    })
}

fn vertex_order(t: &EwTree) -> Vec<usize> {
    let mut order: Vec<usize> = (0..t.vertices().len()).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (t.point_of(a), t.point_of(b));
        let key = |p: &TreePoint| (t.branch(p.branch).name().to_string(), p.exponent.clone());
        (a != 0, key(&pa)).cmp(&(b != 0, key(&pb)))
    });
    order
}

/// Leaves carry their branch name, other vertices their exponent and contact;
/// edges carry the index of the segment above them.
pub fn tree_dot(t: &EwTree) -> String {
    let mut out = String::from("digraph ewtree {\n  rankdir=BT;\n  node [shape=circle, fontsize=10];\n");
    let order = vertex_order(t);
    for &v in &order {
        let x = t.vertex(v);
        let mut label = match x.label() {
            Some(l) => format!("{}\\n", t.branch(l).name()),
            None => String::new(),
        };
        let _ = write!(label, "e={}\\nc={}", x.exponent(), x.contact());
        let shape = if x.label().is_some() { "box" } else if x.is_marked() { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  v{} [shape={}, label=\"{}\"];", v, shape, label);
    }
    for &v in &order {
        if let Some(p) = t.vertex(v).parent() {
            let _ = writeln!(out, "  v{} -> v{} [label=\"{}\"];", p, v, t.vertex(v).index());
        }
    }
    out.push_str("}\n");
    out
}

pub fn splice_json(d: &SpliceDiagram) -> Value {
    let vertices: Vec<Value> = d
        .vertices()
        .iter()
        .enumerate()
        .map(|(k, v)| match v {
            SpliceVertex::Node => json!({"id": k, "kind": "node"}),
            SpliceVertex::Arrow(name) => json!({"id": k, "kind": "arrow", "name": name}),
            SpliceVertex::Phantom => json!({"id": k, "kind": "leaf"}),
        })
        .collect();
    let edges: Vec<Value> = d
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| {
            let w = |v: usize| d.weight(v, e).map(|w| w.to_string());
            json!({"ends": [a, b], "weights": [w(a), w(b)]})
        })
        .collect();
    let report = d.validate();
    json!({
        "vertices": vertices,
        "edges": edges,
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| format!("{:?}", v)).collect::<Vec<_>>(),
    })
}

pub fn splice_dot(d: &SpliceDiagram) -> String {
    let mut out = String::from("graph splice {\n  node [fontsize=10];\n");
    for (k, v) in d.vertices().iter().enumerate() {
        let attrs = match v {
            SpliceVertex::Node => "shape=point, width=0.12".to_string(),
            SpliceVertex::Arrow(name) => format!("shape=plaintext, label=\"{}\"", name),
            SpliceVertex::Phantom => "shape=point, width=0.06".to_string(),
        };
        let _ = writeln!(out, "  s{} [{}];", k, attrs);
    }
    for (e, &[a, b]) in d.edges().iter().enumerate() {
        let (a, b) = if matches!(d.vertices()[a], SpliceVertex::Arrow(_)) { (b, a) } else { (a, b) };
        let w = |v: usize| d.weight(v, e).map_or(String::new(), |w| w.to_string());
        let arrow = if matches!(d.vertices()[b], SpliceVertex::Arrow(_)) { ", dir=forward" } else { "" };
        let _ = writeln!(out, "  s{} -- s{} [taillabel=\"{}\", headlabel=\"{}\"{}];", a, b, w(a), w(b), arrow);
    }
    out.push_str("}\n");
    out
}

pub fn splice_text(d: &SpliceDiagram) -> String {
    let mut out = String::new();
    for node in d.nodes() {
        let weights: Vec<String> = d
            .incident(node)
            .into_iter()
            .map(|e| {
                let [a, b] = d.edges()[e];
                let other = if a == node { b } else { a };
                let towards = match &d.vertices()[other] {
                    SpliceVertex::Node => format!("node {}", other),
                    SpliceVertex::Arrow(n) => n.clone(),
                    SpliceVertex::Phantom => "leaf".into(),
                };
                format!("{} -> {}", d.weight(node, e).map_or("?".into(), |w| w.to_string()), towards)
            })
            .collect();
        let _ = writeln!(out, "node {}: {}", node, weights.join(", "));
    }
    out
}
