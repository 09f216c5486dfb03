//! Canned example networks.

use std::collections::BTreeSet;

use crate::graph::{Multigraph, Network};
use crate::scalar::Scalar;
use crate::Rational;

fn build(vertices: &[&str], terminals: &[&str], edges: &[(&str, &str, &str, i64)]) -> Network<Rational> {
    let mut g = Multigraph::new();
    for v in vertices {
        g.add_vertex(*v);
    }
    let mut cap = Vec::new();
    for &(name, u, v, c) in edges {
        let (u, v) = (g.vertex_by_name(u).unwrap(), g.vertex_by_name(v).unwrap());
        g.add_edge(name, u, v).unwrap();
        cap.push(Rational::from_int(c));
    }
    let t: BTreeSet<_> = terminals.iter().map(|t| g.vertex_by_name(t).unwrap()).collect();
    Network::new(g, t, cap).unwrap()
}

/// Single edge `s–t`, capacity 2.
pub fn i1() -> Network<Rational> {
    build(&["s", "t"], &["s", "t"], &[("st", "s", "t", 2)])
}

/// Path `s–v–t`, capacities 2.
pub fn i2() -> Network<Rational> {
    build(
        &["s", "v", "t"],
        &["s", "t"],
        &[("sv", "s", "v", 2), ("vt", "v", "t", 2)],
    )
}

/// Triangle on `s, t, u` with `T = {s, t}`, capacities 2.
pub fn i3() -> Network<Rational> {
    build(
        &["s", "t", "u"],
        &["s", "t"],
        &[("st", "s", "t", 2), ("su", "s", "u", 2), ("ut", "u", "t", 2)],
    )
}

/// Star with non-terminal centre `v` and terminals `t1..t4`, capacities 2.
pub fn i4() -> Network<Rational> {
    star(4, 2)
}

/// Star with non-terminal centre `v` and `k` terminal leaves.
pub fn star(k: usize, cap: i64) -> Network<Rational> {
    let names: Vec<String> = (1..=k).map(|i| format!("t{i}")).collect();
    let edge_names: Vec<String> = names.iter().map(|t| format!("v{t}")).collect();
    let mut vertices = vec!["v"];
    vertices.extend(names.iter().map(String::as_str));
    let terms: Vec<&str> = names.iter().map(String::as_str).collect();
    let edges: Vec<(&str, &str, &str, i64)> = names
        .iter()
        .zip(&edge_names)
        .map(|(t, e)| (e.as_str(), "v", t.as_str(), cap))
        .collect();
    build(&vertices, &terms, &edges)
}
