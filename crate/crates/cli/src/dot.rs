//! Graphviz rendering of instances with optional barrier and packing overlays.

use std::collections::BTreeSet;
use std::fmt::Write;

use oddpack::graph::EdgeId;
use oddpack::{Barrier, Network, Packing, Rational};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Terminals are boxes. Barrier edges are solid, `I(B)` edges dashed blue,
/// `U(B)` edges bold red, everything else dotted grey. With a packing, each
/// edge label lists the indices of the items using it.
pub fn export_dot(n: &Network<Rational>, barrier: Option<&Barrier>, packing: Option<&Packing<Rational>>) -> String {
    let g = n.graph();
    let mut out = String::from("graph oddpack {\n  node [shape=circle];\n");
    for v in g.vertices() {
        let shape = if n.is_terminal(v) { "box" } else { "circle" };
        let fill = match barrier {
            Some(b) if b.vertices.contains(&v) => ", style=filled, fillcolor=lightgrey",
            _ => "",
        };
        writeln!(out, "  {} [shape={shape}{fill}];", quote(g.vertex_name(v))).unwrap();
    }
    let (i_edges, u_edges): (BTreeSet<EdgeId>, BTreeSet<EdgeId>) = match barrier {
        Some(b) => (b.i_edges(g).into_iter().collect(), b.u_edges(g).into_iter().collect()),
        None => Default::default(),
    };
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let mut label = format!("{} ({})", edge.name, n.cap(e));
        if let Some(p) = packing {
            let users: Vec<String> = p
                .items
                .iter()
                .enumerate()
                .filter(|(_, it)| it.walk.occurrences(e) > 0)
                .map(|(i, _)| i.to_string())
                .collect();
            if !users.is_empty() {
                write!(label, " [{}]", users.join(",")).unwrap();
            }
        }
        let style = match barrier {
            None => String::new(),
            Some(b) if b.edges.contains(&e) => ", style=solid".into(),
            Some(_) if i_edges.contains(&e) => ", style=dashed, color=blue".into(),
            Some(_) if u_edges.contains(&e) => ", style=bold, color=red".into(),
            Some(_) => ", style=dotted, color=grey".into(),
        };
        writeln!(
            out,
            "  {} -- {} [label={}{style}];",
            quote(g.vertex_name(edge.u)),
            quote(g.vertex_name(edge.v)),
            quote(&label)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
