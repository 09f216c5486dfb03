//! The bipartite double cover of a network and the commodity graph `H_T`.
//!
//! Base vertex `i` has images `i` and `n + i` (the primed copy). Base edge
//! `e = uv` has images `2e = uv'` and `2e + 1 = u'v`, each carrying half the
//! capacity of `e`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Network, Packing, Step, VertexId, Walk};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCover<S> {
    base: Network<S>,
    cover: Network<S>,
}

pub fn build_double_cover<S: Scalar>(n: &Network<S>) -> DoubleCover<S> {
    let g = n.graph();
    let nv = g.vertex_count();
    let mut h = Multigraph::new();
    for v in g.vertices() {
        h.add_vertex(g.vertex_name(v));
    }
    for v in g.vertices() {
        h.add_vertex(format!("{}'", g.vertex_name(v)));
    }
    let mut cap = Vec::with_capacity(2 * g.edge_count());
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let half = n.cap(e).half();
        h.add_edge(format!("{}#0", edge.name), edge.u, VertexId(nv + edge.v.0))
            .expect("cover edge endpoints exist");
        h.add_edge(format!("{}#1", edge.name), VertexId(nv + edge.u.0), edge.v)
            .expect("cover edge endpoints exist");
        cap.push(half.clone());
        cap.push(half);
    }
    let terminals = n.terminals().iter().flat_map(|&t| [t, VertexId(nv + t.0)]).collect();
    let cover = Network::new(h, terminals, cap).expect("cover network is well formed");
    DoubleCover { base: n.clone(), cover }
}

impl<S: Scalar> DoubleCover<S> {
    pub fn base(&self) -> &Network<S> {
        &self.base
    }

    pub fn cover(&self) -> &Network<S> {
        &self.cover
    }

    pub fn base_vertex_count(&self) -> usize {
        self.base.graph().vertex_count()
    }

    /// `v ↦ v'`, an involution on cover vertices.
    pub fn prime(&self, v: VertexId) -> VertexId {
        let n = self.base_vertex_count();
        if v.0 < n {
            VertexId(v.0 + n)
        } else {
            VertexId(v.0 - n)
        }
    }

    pub fn is_primed(&self, v: VertexId) -> bool {
        v.0 >= self.base_vertex_count()
    }

    pub fn base_vertex(&self, v: VertexId) -> VertexId {
        VertexId(v.0 % self.base_vertex_count())
    }

    /// Symmetric image of a cover edge.
    pub fn mirror_edge(&self, e: EdgeId) -> EdgeId {
        EdgeId(e.0 ^ 1)
    }

    pub fn base_edge(&self, e: EdgeId) -> EdgeId {
        EdgeId(e.0 / 2)
    }

    pub fn cover_edges(&self, e: EdgeId) -> [EdgeId; 2] {
        [EdgeId(2 * e.0), EdgeId(2 * e.0 + 1)]
    }

    /// The fixed-point-free involution as `(vertex, image)` and
    /// `(edge, image)` name pairs.
    pub fn symmetry_table(&self) -> (Vec<(String, String)>, Vec<(String, String)>) {
        let g = self.cover.graph();
        let vs = g
            .vertices()
            .map(|v| (g.vertex_name(v).to_string(), g.vertex_name(self.prime(v)).to_string()))
            .collect();
        let es = g
            .edge_ids()
            .map(|e| (g.edge(e).name.clone(), g.edge(self.mirror_edge(e)).name.clone()))
            .collect();
        (vs, es)
    }

    /// True when `a`, `b` form an edge `t_i t_j'` of `H_T` (`i ≠ j`).
    pub fn is_commodity_pair(&self, a: VertexId, b: VertexId) -> bool {
        self.cover.is_terminal(a)
            && self.cover.is_terminal(b)
            && self.is_primed(a) != self.is_primed(b)
            && self.base_vertex(a) != self.base_vertex(b)
    }

    pub fn mirror_walk(&self, w: &Walk) -> Walk {
        Walk::from_steps_unchecked(
            w.steps()
                .iter()
                .map(|s| Step {
                    edge: self.mirror_edge(s.edge),
                    from: self.prime(s.from),
                    to: self.prime(s.to),
                })
                .collect(),
        )
    }

    /// Image of a cover walk in the base graph.
    pub fn project_walk(&self, w: &Walk) -> Walk {
        Walk::from_steps_unchecked(
            w.steps()
                .iter()
                .map(|s| Step {
                    edge: self.base_edge(s.edge),
                    from: self.base_vertex(s.from),
                    to: self.base_vertex(s.to),
                })
                .collect(),
        )
    }
}

/// `H_T`: complete bipartite graph on `(T, T')` minus the matching `{t t'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommodityGraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticliqueFamilies {
    /// `{T, T'}`.
    pub a1: Vec<BTreeSet<VertexId>>,
    /// `{{t, t'} : t ∈ T}`.
    pub a2: Vec<BTreeSet<VertexId>>,
}

pub fn build_commodity_graph<S: Scalar>(dc: &DoubleCover<S>) -> Result<(CommodityGraph, AnticliqueFamilies)> {
    let t: Vec<VertexId> = dc.base().terminals().iter().copied().collect();
    if t.len() < 2 {
        return Err(Error::Precondition(
            "the commodity graph needs at least two terminals".into(),
        ));
    }
    let mut vertices = t.clone();
    vertices.extend(t.iter().map(|&x| dc.prime(x)));
    let mut edges = Vec::new();
    for &a in &t {
        for &b in &t {
            if a != b {
                edges.push((a, dc.prime(b)));
            }
        }
    }
    let a1 = vec![t.iter().copied().collect(), t.iter().map(|&x| dc.prime(x)).collect()];
    let a2 = t.iter().map(|&x| [x, dc.prime(x)].into_iter().collect()).collect();
    Ok((CommodityGraph { vertices, edges }, AnticliqueFamilies { a1, a2 }))
}

/// Lifts an odd T-walk `x -> y` to the cover walk `x -> y'` starting on the
/// unprimed side.
pub fn lift_walk<S: Scalar>(dc: &DoubleCover<S>, w: &Walk) -> Result<Walk> {
    if !w.is_odd() {
        return Err(Error::Precondition("only odd walks lift to T-T' walks".into()));
    }
    if !w.is_t_walk(dc.base().terminals()) {
        return Err(Error::Precondition("walk is not a T-walk".into()));
    }
    let g = dc.base().graph();
    let n = dc.base_vertex_count();
    let steps = w
        .steps()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let edge = g.edge(s.edge);
            let primed_start = i % 2 == 1;
            // 2e joins u and v', 2e+1 joins u' and v.
            let slot = usize::from((s.from == edge.u) == primed_start);
            let lift = |v: VertexId, primed: bool| if primed { VertexId(v.0 + n) } else { v };
            Step {
                edge: EdgeId(2 * s.edge.0 + slot),
                from: lift(s.from, primed_start),
                to: lift(s.to, !primed_start),
            }
        })
        .collect();
    Walk::new(dc.cover().graph(), steps)
}

/// Maps a packing of `H_T`-walks in the cover to a packing of odd T-walks in
/// the base network.
pub fn project_packing<S: Scalar>(dc: &DoubleCover<S>, q: &Packing<S>) -> Result<Packing<S>> {
    let mut out = Packing::new();
    for item in &q.items {
        let w = &item.walk;
        if !dc.is_commodity_pair(w.start(), w.end()) {
            return Err(Error::Precondition(format!(
                "cover walk {} -> {} does not join an edge of the commodity graph",
                dc.cover().graph().vertex_name(w.start()),
                dc.cover().graph().vertex_name(w.end())
            )));
        }
        out.push(item.weight.clone(), dc.project_walk(w));
    }
    Ok(out)
}

/// `½(P + P')`.
pub fn symmetrize<S: Scalar>(dc: &DoubleCover<S>, p: &Packing<S>) -> Packing<S> {
    let mut out = Packing::new();
    for item in &p.items {
        out.push(item.weight.half(), item.walk.clone());
    }
    for item in &p.items {
        out.push(item.weight.half(), dc.mirror_walk(&item.walk));
    }
    out.merged()
}
