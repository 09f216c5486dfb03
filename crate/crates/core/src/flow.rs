//! Max-flow/min-cut on undirected multigraphs, flow and Eulerian
//! decompositions, and the splitting-off primitive.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Packing, Step, VertexId, Walk};
use crate::scalar::{self, Scalar};

/// Integer type a [`FlowNetwork`] computes with.
pub trait FlowValue: Clone + Ord + Debug + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl FlowValue for i64 {}
impl FlowValue for BigInt {}

/// Dinic's algorithm on an undirected multigraph. Edge `i` becomes arcs
/// `2i` and `2i + 1`, each with the full capacity. Arcs are scanned in
/// insertion order, so results are deterministic.
#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork<C> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    res: Vec<C>,
    cap: Vec<C>,
    level: Vec<usize>,
    iter: Vec<usize>,
}

impl<C: FlowValue> FlowNetwork<C> {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            res: Vec::new(),
            cap: Vec::new(),
            level: vec![usize::MAX; n],
            iter: vec![0; n],
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize, c: C) -> usize {
        let i = self.cap.len();
        self.adj[u].push(2 * i);
        self.adj[v].push(2 * i + 1);
        self.to.push(v);
        self.to.push(u);
        self.res.push(c.clone());
        self.res.push(c.clone());
        self.cap.push(c);
        i
    }

    fn bfs(&mut self, sources: &[bool], sinks: &[bool]) -> bool {
        self.level.iter_mut().for_each(|l| *l = usize::MAX);
        let mut queue = std::collections::VecDeque::new();
        for (v, &s) in sources.iter().enumerate() {
            if s {
                self.level[v] = 0;
                queue.push_back(v);
            }
        }
        let mut reached = false;
        while let Some(v) = queue.pop_front() {
            if sinks[v] {
                reached = true;
                continue;
            }
            for &a in &self.adj[v] {
                let w = self.to[a];
                if self.level[w] == usize::MAX && self.res[a] > C::zero() {
                    self.level[w] = self.level[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        reached
    }

    fn dfs(&mut self, v: usize, limit: Option<C>, sinks: &[bool]) -> C {
        if sinks[v] {
            return limit.expect("a source is never a sink");
        }
        let mut pushed = C::zero();
        while self.iter[v] < self.adj[v].len() {
            let a = self.adj[v][self.iter[v]];
            let w = self.to[a];
            if self.level[w] == self.level[v] + 1 && self.res[a] > C::zero() {
                let room = match &limit {
                    Some(l) => std::cmp::min(l.clone() - pushed.clone(), self.res[a].clone()),
                    None => self.res[a].clone(),
                };
                let d = self.dfs(w, Some(room), sinks);
                if d > C::zero() {
                    self.res[a] = self.res[a].clone() - d.clone();
                    self.res[a ^ 1] = self.res[a ^ 1].clone() + d.clone();
                    pushed = pushed + d;
                    if limit.as_ref() == Some(&pushed) {
                        return pushed;
                    }
                    continue;
                }
            }
            self.iter[v] += 1;
        }
        pushed
    }

    pub(crate) fn max_flow(&mut self, sources: &[bool], sinks: &[bool]) -> C {
        let mut total = C::zero();
        while self.bfs(sources, sinks) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            for s in 0..sources.len() {
                if sources[s] {
                    let d = self.dfs(s, None, sinks);
                    total = total + d;
                }
            }
        }
        total
    }

    /// Vertices reachable from the sources in the residual graph: the
    /// inclusion-minimal minimum cut after [`Self::max_flow`].
    pub(crate) fn source_side(&self, sources: &[bool]) -> Vec<bool> {
        let mut seen = sources.to_vec();
        let mut stack: Vec<usize> = (0..seen.len()).filter(|&v| seen[v]).collect();
        while let Some(v) = stack.pop() {
            for &a in &self.adj[v] {
                let w = self.to[a];
                if !seen[w] && self.res[a] > C::zero() {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Net flow along edge `i` from its first to its second endpoint.
    pub(crate) fn edge_flow(&self, i: usize) -> C {
        self.cap[i].clone() - self.res[2 * i].clone()
    }
}

/// Minimum cut between vertex sets given as flags, on integer capacities.
/// Returns the cut value and the minimal source side.
pub(crate) fn min_cut_i64(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize, i64)>,
    sources: &[bool],
    sinks: &[bool],
) -> (i64, Vec<bool>) {
    let mut net = FlowNetwork::<i64>::new(n);
    for (u, v, c) in edges {
        if u != v && c > 0 {
            net.add_edge(u, v, c);
        }
    }
    let value = net.max_flow(sources, sinks);
    (value, net.source_side(sources))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutResult<S> {
    pub value: S,
    /// Minimal source side `Y`, with `S ⊆ Y ⊆ V - T_sink`.
    pub cut: BTreeSet<VertexId>,
    /// Net flow per edge, positive in the direction `u -> v` of the edge.
    pub flow: Vec<S>,
}

fn flags(n: usize, set: &BTreeSet<VertexId>) -> Result<Vec<bool>> {
    let mut f = vec![false; n];
    for v in set {
        if v.0 >= n {
            return Err(Error::Input(format!("vertex {v} out of range")));
        }
        f[v.0] = true;
    }
    Ok(f)
}

fn run_flow<C: FlowValue>(g: &Multigraph, caps: Vec<C>, src: &[bool], snk: &[bool]) -> (C, Vec<bool>, Vec<C>) {
    let mut net = FlowNetwork::new(g.vertex_count());
    for (e, c) in g.edges().iter().zip(caps) {
        net.add_edge(e.u.0, e.v.0, c);
    }
    let value = net.max_flow(src, snk);
    let side = net.source_side(src);
    let flow = (0..g.edge_count()).map(|i| net.edge_flow(i)).collect();
    (value, side, flow)
}

/// Maximum flow and minimal minimum cut between `sources` and `sinks`.
/// Rational capacities are scaled by their common denominator; the work is
/// done in `i64` when it fits and in `BigInt` otherwise.
pub fn max_flow_min_cut<S: Scalar>(
    g: &Multigraph,
    cap: &[S],
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
) -> Result<CutResult<S>> {
    if cap.len() != g.edge_count() {
        return Err(Error::Input("capacity vector length differs from edge count".into()));
    }
    if let Some(v) = sources.intersection(sinks).next() {
        return Err(Error::Precondition(format!("vertex {v} is both a source and a sink")));
    }
    let n = g.vertex_count();
    let src = flags(n, sources)?;
    let snk = flags(n, sinks)?;
    let d = scalar::common_denominator(cap);
    let back = |x: BigInt| -> Result<S> {
        S::from_big(&BigRational::new(x, d.clone()))
            .ok_or_else(|| Error::Input("flow value does not fit the scalar type".into()))
    };
    let (value, side, flow) = match scalar::scaled_to_i64(cap, &d)
        .filter(|c| c.iter().try_fold(0i64, |acc, &x| acc.checked_add(x)).is_some())
    {
        Some(ints) => {
            let (v, s, f) = run_flow(g, ints, &src, &snk);
            (BigInt::from(v), s, f.into_iter().map(BigInt::from).collect::<Vec<_>>())
        }
        None => {
            let ints = cap
                .iter()
                .map(|c| (c.to_big() * BigRational::from_integer(d.clone())).to_integer())
                .collect();
            run_flow(g, ints, &src, &snk)
        }
    };
    Ok(CutResult {
        value: back(value)?,
        cut: side
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| VertexId(i))
            .collect(),
        flow: flow.into_iter().map(back).collect::<Result<_>>()?,
    })
}

/// Result of [`decompose_flow`]: source-to-sink paths plus leftover cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowDecomposition<S> {
    pub paths: Packing<S>,
    pub cycles: Packing<S>,
}

/// Splits a flow (signed per edge, as in [`CutResult::flow`]) into weighted
/// simple paths from `sources` to `sinks` and cycles. Edge usage of the
/// output reproduces `flow` exactly.
pub fn decompose_flow<S: Scalar>(
    g: &Multigraph,
    flow: &[S],
    sources: &BTreeSet<VertexId>,
    sinks: &BTreeSet<VertexId>,
) -> Result<FlowDecomposition<S>> {
    if flow.len() != g.edge_count() {
        return Err(Error::Input("flow vector length differs from edge count".into()));
    }
    // Remaining amount per edge, oriented by sign.
    let mut rem: Vec<S> = flow.iter().map(|f| f.abs()).collect();
    let head = |e: usize, f: &S| -> (VertexId, VertexId) {
        let edge = g.edge(EdgeId(e));
        if f.is_negative() {
            (edge.v, edge.u)
        } else {
            (edge.u, edge.v)
        }
    };
    for v in g.vertices() {
        if sources.contains(&v) || sinks.contains(&v) {
            continue;
        }
        let mut balance = S::zero();
        for &e in g.incident(v) {
            let (from, _) = head(e.0, &flow[e.0]);
            if from == v {
                balance = balance - rem[e.0].clone();
            } else {
                balance = balance + rem[e.0].clone();
            }
        }
        if !balance.is_zero() {
            return Err(Error::Precondition(format!(
                "flow is not conserved at {}",
                g.vertex_name(v)
            )));
        }
    }
    let out_arc = |v: VertexId, rem: &[S]| -> Option<usize> {
        g.incident(v)
            .iter()
            .map(|e| e.0)
            .find(|&e| rem[e].is_positive() && head(e, &flow[e]).0 == v)
    };
    let mut paths = Packing::new();
    let mut cycles = Packing::new();
    let take = |steps: Vec<Step>, rem: &mut Vec<S>, out: &mut Packing<S>| {
        let w = steps.iter().map(|s| rem[s.edge.0].clone()).min().expect("nonempty");
        for s in &steps {
            rem[s.edge.0] = rem[s.edge.0].clone() - w.clone();
        }
        out.push(w, Walk::from_steps_unchecked(steps));
    };

    // Sources first (paths and the cycles met on the way), then whatever
    // circulation is left.
    let mut starts: Vec<VertexId> = sources.iter().copied().collect();
    starts.extend(g.vertices().filter(|v| !sources.contains(v)));
    for start in starts {
        let from_source = sources.contains(&start);
        while let Some(first) = out_arc(start, &rem) {
            let mut steps: Vec<Step> = Vec::new();
            let mut arc = first;
            loop {
                let (from, to) = head(arc, &flow[arc]);
                steps.push(Step {
                    edge: EdgeId(arc),
                    from,
                    to,
                });
                if let Some(pos) = steps.iter().position(|s| s.from == to) {
                    let cyc = steps.split_off(pos);
                    take(cyc, &mut rem, &mut cycles);
                } else if from_source && sinks.contains(&to) {
                    take(std::mem::take(&mut steps), &mut rem, &mut paths);
                }
                if steps.is_empty() {
                    break;
                }
                let at = steps[steps.len() - 1].to;
                arc = match out_arc(at, &rem) {
                    Some(a) => a,
                    None => return Err(Error::Precondition(format!("flow stops at {}", g.vertex_name(at)))),
                };
            }
        }
    }
    Ok(FlowDecomposition { paths, cycles })
}

/// Splits the edge set into edge-disjoint trails by pairing edges at every
/// non-terminal in increasing id order. Returns the trails between
/// terminals and the closed trails (including terminal-to-same-terminal
/// ones).
pub fn eulerian_decompose(g: &Multigraph, terminals: &BTreeSet<VertexId>) -> Result<(Vec<Walk>, Vec<Walk>)> {
    // partner[e][side]: edge paired with e at its endpoint on `side`.
    let mut partner = vec![[None::<EdgeId>; 2]; g.edge_count()];
    for v in g.vertices() {
        if terminals.contains(&v) {
            continue;
        }
        let inc = g.incident(v);
        if inc.len() % 2 == 1 {
            return Err(Error::Precondition(format!(
                "vertex {} has odd degree {}",
                g.vertex_name(v),
                inc.len()
            )));
        }
        for pair in inc.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            partner[a.0][side_of(g, a, v)] = Some(b);
            partner[b.0][side_of(g, b, v)] = Some(a);
        }
    }
    let mut used = vec![false; g.edge_count()];
    let follow = |start: VertexId, first: EdgeId, used: &mut Vec<bool>| -> Vec<Step> {
        let mut steps = Vec::new();
        let mut at = start;
        let mut e = first;
        loop {
            used[e.0] = true;
            let to = g.edge(e).other(at).expect("incident");
            steps.push(Step { edge: e, from: at, to });
            at = to;
            match partner[e.0][side_of(g, e, at)] {
                Some(next) if !used[next.0] => e = next,
                _ => return steps,
            }
        }
    };
    let mut open = Vec::new();
    let mut closed = Vec::new();
    for &t in terminals {
        for &e in g.incident(t) {
            if !used[e.0] {
                let w = Walk::from_steps_unchecked(follow(t, e, &mut used));
                if w.is_cyclic() {
                    closed.push(w);
                } else {
                    open.push(w);
                }
            }
        }
    }
    for e in g.edge_ids() {
        if !used[e.0] {
            let start = g.edge(e).u;
            closed.push(Walk::from_steps_unchecked(follow(start, e, &mut used)));
        }
    }
    Ok((open, closed))
}

fn side_of(g: &Multigraph, e: EdgeId, v: VertexId) -> usize {
    if g.edge(e).u == v {
        0
    } else {
        1
    }
}

/// Everything needed to undo one [`split_off`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub vertex: VertexId,
    pub removed: [(EdgeId, crate::graph::Edge); 2],
    /// Id of the new edge `ab` in the split graph; `None` when `a = b`.
    pub added: Option<EdgeId>,
}

/// Replaces `e1 = av`, `e2 = vb` by a new edge `ab` (dropped when `a = b`).
/// Remaining edges keep their relative order; ids after the removed ones
/// shift down and the new edge is appended.
pub fn split_off(g: &Multigraph, v: VertexId, e1: EdgeId, e2: EdgeId) -> Result<(Multigraph, SplitRecord)> {
    if e1 == e2 {
        return Err(Error::Precondition("split edges must differ".into()));
    }
    let (a, b) = match (
        g.get_edge(e1).and_then(|e| e.other(v)),
        g.get_edge(e2).and_then(|e| e.other(v)),
    ) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Precondition(format!("edges are not both incident to {v}"))),
    };
    let mut h = Multigraph::new();
    for x in g.vertices() {
        h.add_vertex(g.vertex_name(x));
    }
    for id in g.edge_ids() {
        if id != e1 && id != e2 {
            let e = g.edge(id);
            h.add_edge(e.name.clone(), e.u, e.v)?;
        }
    }
    let added = if a != b {
        let name = format!("{}+{}", g.edge(e1).name, g.edge(e2).name);
        Some(h.add_edge(name, a, b)?)
    } else {
        None
    };
    let record = SplitRecord {
        vertex: v,
        removed: [(e1, g.edge(e1).clone()), (e2, g.edge(e2).clone())],
        added,
    };
    Ok((h, record))
}

/// Inverse of [`split_off`].
pub fn unsplit(h: &Multigraph, record: &SplitRecord) -> Result<Multigraph> {
    let mut kept: Vec<crate::graph::Edge> = h
        .edge_ids()
        .filter(|&e| Some(e) != record.added)
        .map(|e| h.edge(e).clone())
        .collect();
    let mut removed = record.removed.clone();
    removed.sort_by_key(|(id, _)| *id);
    for (id, edge) in removed {
        if id.0 > kept.len() {
            return Err(Error::Precondition("split record does not match the graph".into()));
        }
        kept.insert(id.0, edge);
    }
    let mut g = Multigraph::new();
    for x in h.vertices() {
        g.add_vertex(h.vertex_name(x));
    }
    for e in kept {
        g.add_edge(e.name, e.u, e.v)?;
    }
    Ok(g)
}
