//! JSON formats for instances, packings and certificates.
//!
//! Rational values are written as strings (`"3/2"`, `"2"`). Syntax errors
//! carry the line and column reported by the JSON parser.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::barrier::{barrier_capacity, Barrier};
use crate::cover::DoubleCover;
use crate::error::{Error, Result};
use crate::graph::{Multigraph, Network, Packing, Step, VertexId, Walk};
use crate::multiflow::{PartitionPart, ProperPartition};
use crate::scalar::Scalar;

/// A capacity or weight: a decimal integer, a `"p/q"` string, or a JSON
/// integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Text(String),
    Int(i64),
}

impl RationalJson {
    pub fn of<S: Scalar>(x: &S) -> Self {
        RationalJson::Text(x.to_string())
    }

    pub fn parse<S: Scalar>(&self) -> Result<S> {
        match self {
            RationalJson::Int(n) => Ok(S::from_int(*n)),
            RationalJson::Text(s) => s
                .trim()
                .parse::<S>()
                .map_err(|_| Error::Input(format!("`{s}` is not a rational number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub id: String,
    pub u: String,
    pub v: String,
    pub cap: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceJson {
    pub vertices: Vec<String>,
    pub terminals: Vec<String>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemJson {
    pub weight: RationalJson,
    /// `[edge id, from, to]` per step.
    pub edges: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingJson {
    pub value: RationalJson,
    pub items: Vec<ItemJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierJson {
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub i_edges: Vec<String>,
    pub u_edges: Vec<String>,
    pub capacity: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartJson {
    pub terminals: Vec<String>,
    pub cut: Vec<String>,
}

/// A proper partition of the double cover, named by cover vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    pub parts: Vec<PartJson>,
    pub capacity: RationalJson,
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

struct Names<'a> {
    vertices: BTreeMap<&'a str, VertexId>,
    edges: BTreeMap<&'a str, crate::graph::EdgeId>,
}

impl<'a> Names<'a> {
    fn of(g: &'a Multigraph) -> Self {
        Self {
            vertices: g.vertices().map(|v| (g.vertex_name(v), v)).collect(),
            edges: g.edge_ids().map(|e| (g.edge(e).name.as_str(), e)).collect(),
        }
    }

    fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertices
            .get(name)
            .copied()
            .ok_or_else(|| Error::Input(format!("unknown vertex `{name}`")))
    }

    fn edge(&self, name: &str) -> Result<crate::graph::EdgeId> {
        self.edges
            .get(name)
            .copied()
            .ok_or_else(|| Error::Input(format!("unknown edge `{name}`")))
    }

    fn vertex_set(&self, names: &[String]) -> Result<BTreeSet<VertexId>> {
        names.iter().map(|n| self.vertex(n)).collect()
    }
}

pub fn instance_from_json<S: Scalar>(x: &InstanceJson) -> Result<Network<S>> {
    let mut g = Multigraph::new();
    let mut seen = BTreeSet::new();
    for v in &x.vertices {
        if !seen.insert(v.as_str()) {
            return Err(Error::Input(format!("duplicate vertex `{v}`")));
        }
        g.add_vertex(v.clone());
    }
    let mut caps = Vec::new();
    let mut ids = BTreeSet::new();
    for e in &x.edges {
        if !ids.insert(e.id.as_str()) {
            return Err(Error::Input(format!("duplicate edge id `{}`", e.id)));
        }
        let find = |n: &str| {
            g.vertex_by_name(n)
                .ok_or_else(|| Error::Input(format!("edge `{}` uses unknown vertex `{n}`", e.id)))
        };
        let (u, v) = (find(&e.u)?, find(&e.v)?);
        g.add_edge(e.id.clone(), u, v)?;
        caps.push(e.cap.parse::<S>()?);
    }
    let mut terminals = BTreeSet::new();
    for t in &x.terminals {
        let v = g
            .vertex_by_name(t)
            .ok_or_else(|| Error::Input(format!("unknown terminal `{t}`")))?;
        if !terminals.insert(v) {
            return Err(Error::Input(format!("duplicate terminal `{t}`")));
        }
    }
    Network::new(g, terminals, caps)
}

pub fn instance_to_json<S: Scalar>(n: &Network<S>) -> InstanceJson {
    let g = n.graph();
    InstanceJson {
        vertices: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
        terminals: n.terminals().iter().map(|&t| g.vertex_name(t).to_string()).collect(),
        edges: g
            .edge_ids()
            .map(|e| {
                let edge = g.edge(e);
                EdgeJson {
                    id: edge.name.clone(),
                    u: g.vertex_name(edge.u).to_string(),
                    v: g.vertex_name(edge.v).to_string(),
                    cap: RationalJson::of(n.cap(e)),
                }
            })
            .collect(),
    }
}

pub fn parse_instance<S: Scalar>(text: &str) -> Result<Network<S>> {
    instance_from_json(&from_json::<InstanceJson>(text)?)
}

pub fn packing_to_json<S: Scalar>(n: &Network<S>, p: &Packing<S>) -> PackingJson {
    let g = n.graph();
    PackingJson {
        value: RationalJson::of(&p.value()),
        items: p
            .items
            .iter()
            .map(|i| ItemJson {
                weight: RationalJson::of(&i.weight),
                edges: i
                    .walk
                    .steps()
                    .iter()
                    .map(|s| {
                        [
                            g.edge(s.edge).name.clone(),
                            g.vertex_name(s.from).to_string(),
                            g.vertex_name(s.to).to_string(),
                        ]
                    })
                    .collect(),
            })
            .collect(),
    }
}

pub fn packing_from_json<S: Scalar>(n: &Network<S>, x: &PackingJson) -> Result<Packing<S>> {
    let names = Names::of(n.graph());
    let mut p = Packing::new();
    for (i, item) in x.items.iter().enumerate() {
        if item.edges.is_empty() {
            return Err(Error::Input(format!("packing item {i} has no edges")));
        }
        let steps = item
            .edges
            .iter()
            .map(|[e, a, b]| {
                Ok(Step {
                    edge: names.edge(e)?,
                    from: names.vertex(a)?,
                    to: names.vertex(b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        p.push(item.weight.parse()?, Walk::new(n.graph(), steps)?);
    }
    let stated: S = x.value.parse()?;
    if stated != p.value() {
        return Err(Error::Input(format!(
            "stated value {stated} differs from the item weights sum {}",
            p.value()
        )));
    }
    Ok(p)
}

pub fn parse_packing<S: Scalar>(n: &Network<S>, text: &str) -> Result<Packing<S>> {
    packing_from_json(n, &from_json(text)?)
}

pub fn barrier_to_json<S: Scalar>(n: &Network<S>, b: &Barrier) -> BarrierJson {
    let g = n.graph();
    let en = |e: crate::graph::EdgeId| g.edge(e).name.clone();
    BarrierJson {
        vertices: b.vertices.iter().map(|&v| g.vertex_name(v).to_string()).collect(),
        edges: b.edges.iter().copied().map(en).collect(),
        i_edges: b.i_edges(g).into_iter().map(en).collect(),
        u_edges: b.u_edges(g).into_iter().map(en).collect(),
        capacity: RationalJson::of(&barrier_capacity(n, b)),
    }
}

/// The `I`, `U` lists and the capacity are derived data and must agree
/// with the vertex and edge lists.
pub fn barrier_from_json<S: Scalar>(n: &Network<S>, x: &BarrierJson) -> Result<Barrier> {
    let names = Names::of(n.graph());
    let vertices = names.vertex_set(&x.vertices)?;
    let edges = x.edges.iter().map(|e| names.edge(e)).collect::<Result<BTreeSet<_>>>()?;
    let b = Barrier::new(n.graph(), vertices, edges)?;
    let again = barrier_to_json(n, &b);
    let sorted = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    if sorted(&again.i_edges) != sorted(&x.i_edges) || sorted(&again.u_edges) != sorted(&x.u_edges) {
        return Err(Error::Input(
            "barrier I/U edge lists do not match its vertices and edges".into(),
        ));
    }
    let stated: S = x.capacity.parse()?;
    if stated != barrier_capacity(n, &b) {
        return Err(Error::Input(format!("stated barrier capacity {stated} is wrong")));
    }
    Ok(b)
}

pub fn parse_barrier<S: Scalar>(n: &Network<S>, text: &str) -> Result<Barrier> {
    barrier_from_json(n, &from_json(text)?)
}

pub fn partition_to_json<S: Scalar>(dc: &DoubleCover<S>, x: &ProperPartition<S>) -> PartitionJson {
    let g = dc.cover().graph();
    let names = |s: &BTreeSet<VertexId>| s.iter().map(|&v| g.vertex_name(v).to_string()).collect();
    PartitionJson {
        parts: x
            .parts
            .iter()
            .map(|p| PartJson {
                terminals: names(&p.terminals),
                cut: names(&p.cut),
            })
            .collect(),
        capacity: RationalJson::of(&x.capacity),
    }
}

pub fn partition_from_json<S: Scalar>(dc: &DoubleCover<S>, x: &PartitionJson) -> Result<ProperPartition<S>> {
    let names = Names::of(dc.cover().graph());
    let parts = x
        .parts
        .iter()
        .map(|p| {
            Ok(PartitionPart {
                terminals: names.vertex_set(&p.terminals)?,
                cut: names.vertex_set(&p.cut)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let out = ProperPartition {
        parts,
        capacity: x.capacity.parse()?,
    };
    if !out.is_proper(dc) {
        return Err(Error::Input("partition is not proper".into()));
    }
    Ok(out)
}

pub fn parse_partition<S: Scalar>(dc: &DoubleCover<S>, text: &str) -> Result<ProperPartition<S>> {
    partition_from_json(dc, &from_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::build_double_cover;
    use crate::multiflow::min_proper_partition;
    use crate::{fixtures, max_odd_walk_packing, Rational};

    #[test]
    fn instance_round_trip() {
        for n in [fixtures::i1(), fixtures::i2(), fixtures::i3(), fixtures::i4()] {
            let text = to_json(&instance_to_json(&n));
            let back: Network<Rational> = parse_instance(&text).unwrap();
            assert_eq!(back, n);
        }
    }

    #[test]
    fn instance_formats() {
        let text = r#"{"vertices":["s","t","u"],"terminals":["s","t"],
            "edges":[{"id":"e1","u":"s","v":"t","cap":"3/2"},{"id":"e2","u":"t","v":"u","cap":4}]}"#;
        let n: Network<Rational> = parse_instance(text).unwrap();
        assert_eq!(n.caps(), &[Rational::new(3.into(), 2.into()), Rational::from_int(4)]);

        match parse_instance::<Rational>("{\n  \"vertices\": [,\n}") {
            Err(Error::Json(e)) => assert_eq!((e.line(), e.column()), (2, 16)),
            other => panic!("{other:?}"),
        }
        let bad = r#"{"vertices":["s"],"terminals":["x"],"edges":[]}"#;
        assert!(matches!(parse_instance::<Rational>(bad), Err(Error::Input(_))));
        let bad = r#"{"vertices":["s","t"],"terminals":[],"edges":[{"id":"e","u":"s","v":"t","cap":"-1"}]}"#;
        assert!(matches!(parse_instance::<Rational>(bad), Err(Error::Input(_))));
    }

    #[test]
    fn certificate_round_trips() {
        let n = fixtures::i3();
        let (p, b) = max_odd_walk_packing(&n).unwrap();
        let pj = to_json(&packing_to_json(&n, &p));
        assert_eq!(parse_packing(&n, &pj).unwrap(), p);
        let bj = to_json(&barrier_to_json(&n, &b));
        assert_eq!(parse_barrier(&n, &bj).unwrap(), b);

        let dc = build_double_cover(&n);
        let x = min_proper_partition(&dc).unwrap();
        let xj = to_json(&partition_to_json(&dc, &x));
        assert_eq!(parse_partition(&dc, &xj).unwrap(), x);
    }

    #[test]
    fn packing_item_text() {
        let n = fixtures::i1();
        let (p, _) = max_odd_walk_packing(&n).unwrap();
        let j = serde_json::to_string(&packing_to_json(&n, &p)).unwrap();
        assert_eq!(j, r#"{"value":"2","items":[{"weight":"2","edges":[["st","s","t"]]}]}"#);
    }
}
