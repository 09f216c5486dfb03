//! Multigraphs, networks, walks and weighted walk packings.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// Loopless undirected multigraph. Parallel edges are distinguished by their
/// [`EdgeId`], which is the insertion index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<EdgeId>>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.vertex_names.push(name.into());
        self.incidence.push(Vec::new());
        VertexId(self.vertex_names.len() - 1)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let name = name.into();
        if u.0 >= self.vertex_count() || v.0 >= self.vertex_count() {
            return Err(Error::Input(format!("edge {name} references an unknown vertex")));
        }
        if u == v {
            return Err(Error::Input(format!("edge {name} is a loop")));
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(Edge { name, u, v });
        self.incidence[u.0].push(id);
        self.incidence[v.0].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn get_edge(&self, e: EdgeId) -> Option<&Edge> {
        self.edges.get(e.0)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    /// Incident edges of `v` in increasing [`EdgeId`] order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    /// Connected component label for every vertex, labels in first-seen order.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.vertex_count()];
        let mut next = 0;
        for s in self.vertices() {
            if label[s.0] != usize::MAX {
                continue;
            }
            label[s.0] = next;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &e in self.incident(x) {
                    let y = self.edge(e).other(x).expect("incident edge");
                    if label[y.0] == usize::MAX {
                        label[y.0] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// A multigraph with a terminal set and non-negative exact capacities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network<S> {
    graph: Multigraph,
    terminals: BTreeSet<VertexId>,
    cap: Vec<S>,
}

impl<S: Scalar> Network<S> {
    pub fn new(graph: Multigraph, terminals: BTreeSet<VertexId>, cap: Vec<S>) -> Result<Self> {
        if cap.len() != graph.edge_count() {
            return Err(Error::Input(format!(
                "{} capacities for {} edges",
                cap.len(),
                graph.edge_count()
            )));
        }
        if let Some(t) = terminals.iter().find(|t| t.0 >= graph.vertex_count()) {
            return Err(Error::Input(format!("terminal {t} is not a vertex")));
        }
        if let Some(i) = cap.iter().position(|c| c.is_negative()) {
            return Err(Error::Input(format!(
                "edge {} has negative capacity",
                graph.edge(EdgeId(i)).name
            )));
        }
        Ok(Self { graph, terminals, cap })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn terminals(&self) -> &BTreeSet<VertexId> {
        &self.terminals
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(&v)
    }

    pub fn cap(&self, e: EdgeId) -> &S {
        &self.cap[e.0]
    }

    pub fn caps(&self) -> &[S] {
        &self.cap
    }

    pub fn cap_sum(&self, edges: impl IntoIterator<Item = EdgeId>) -> S {
        edges.into_iter().fold(S::zero(), |acc, e| acc + self.cap[e.0].clone())
    }

    /// `cap(δ(v))`.
    pub fn cap_delta(&self, v: VertexId) -> S {
        self.cap_sum(self.graph.incident(v).iter().copied())
    }

    pub fn non_terminals(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.graph.vertices().filter(|v| !self.is_terminal(*v))
    }

    /// Same graph and terminals with new capacities.
    pub fn with_caps<R: Scalar>(&self, cap: Vec<R>) -> Result<Network<R>> {
        Network::new(self.graph.clone(), self.terminals.clone(), cap)
    }

    pub fn all_caps_equal(&self, value: &S) -> bool {
        self.cap.iter().all(|c| c == value)
    }

    /// True when every capacity is an even integer.
    pub fn has_even_integer_caps(&self) -> bool {
        self.cap.iter().all(|c| c.is_integral() && c.half().is_integral())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(len: usize) -> Self {
        if len % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// One traversal of an edge, in the direction `from -> to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
}

impl Step {
    pub fn reversed(self) -> Step {
        Step {
            edge: self.edge,
            from: self.to,
            to: self.from,
        }
    }
}

/// A nonempty walk. Each step records its traversal direction so parallel
/// edges and self-intersections are unambiguous.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Walk {
    steps: Vec<Step>,
}

fn check_steps(g: &Multigraph, steps: &[Step]) -> Result<()> {
    if steps.is_empty() {
        return Err(Error::MalformedWalk {
            index: 0,
            reason: "empty walk".into(),
        });
    }
    for (i, s) in steps.iter().enumerate() {
        let edge = g.get_edge(s.edge).ok_or(Error::UnknownEdge(s.edge.0))?;
        if !edge.joins(s.from, s.to) {
            return Err(Error::MalformedWalk {
                index: i,
                reason: format!("edge {} does not join the stated endpoints", edge.name),
            });
        }
        if i > 0 && steps[i - 1].to != s.from {
            return Err(Error::MalformedWalk {
                index: i,
                reason: "step does not start where the previous one ended".into(),
            });
        }
    }
    Ok(())
}

impl Walk {
    pub fn new(g: &Multigraph, steps: Vec<Step>) -> Result<Self> {
        check_steps(g, &steps)?;
        Ok(Self { steps })
    }

    /// Follows `edges` from `start`, deriving each traversal direction.
    pub fn from_edges(g: &Multigraph, start: VertexId, edges: &[EdgeId]) -> Result<Self> {
        let mut at = start;
        let mut steps = Vec::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            let edge = g.get_edge(e).ok_or(Error::UnknownEdge(e.0))?;
            let next = edge.other(at).ok_or_else(|| Error::MalformedWalk {
                index: i,
                reason: format!("edge {} is not incident to the current vertex", edge.name),
            })?;
            steps.push(Step {
                edge: e,
                from: at,
                to: next,
            });
            at = next;
        }
        Self::new(g, steps)
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        debug_assert!(!steps.is_empty());
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.steps[0].from
    }

    pub fn end(&self) -> VertexId {
        self.steps[self.steps.len() - 1].to
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.len())
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == Parity::Odd
    }

    pub fn is_cyclic(&self) -> bool {
        self.start() == self.end()
    }

    pub fn is_trail(&self) -> bool {
        let mut seen = HashSet::new();
        self.steps.iter().all(|s| seen.insert(s.edge))
    }

    pub fn is_path(&self) -> bool {
        let mut seen = HashSet::new();
        self.vertices().into_iter().all(|v| seen.insert(v))
    }

    /// Endpoints are two distinct terminals.
    pub fn is_t_walk(&self, terminals: &BTreeSet<VertexId>) -> bool {
        !self.is_cyclic() && terminals.contains(&self.start()) && terminals.contains(&self.end())
    }

    /// `v_0, v_1, ..., v_l`.
    pub fn vertices(&self) -> Vec<VertexId> {
        std::iter::once(self.start())
            .chain(self.steps.iter().map(|s| s.to))
            .collect()
    }

    pub fn reversed(&self) -> Walk {
        Walk {
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
        }
    }

    /// `n(e)`, the number of occurrences of `e`.
    pub fn occurrences(&self, e: EdgeId) -> usize {
        self.steps.iter().filter(|s| s.edge == e).count()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().map(|s| s.edge)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkKind {
    Walk,
    Trail,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkClass {
    pub kind: WalkKind,
    pub t_walk: bool,
    pub cyclic: bool,
}

pub fn walk_parity(w: &Walk) -> Parity {
    w.parity()
}

/// Classifies a raw step sequence; malformed sequences are reported with the
/// offending step index.
pub fn classify_walk(g: &Multigraph, steps: &[Step], terminals: &BTreeSet<VertexId>) -> Result<WalkClass> {
    let w = Walk::new(g, steps.to_vec())?;
    let kind = if w.is_path() {
        WalkKind::Path
    } else if w.is_trail() {
        WalkKind::Trail
    } else {
        WalkKind::Walk
    };
    Ok(WalkClass {
        kind,
        t_walk: w.is_t_walk(terminals),
        cyclic: w.is_cyclic(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingItem<S> {
    pub weight: S,
    pub walk: Walk,
}

/// Weighted multiset of walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packing<S> {
    pub items: Vec<PackingItem<S>>,
}

impl<S> Default for Packing<S> {
    fn default() -> Self {
        Self { items: Vec::new() }
    }
}

impl<S: Scalar> Packing<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, weight: S, walk: Walk) {
        self.items.push(PackingItem { weight, walk });
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn value(&self) -> S {
        scalar::sum(self.items.iter().map(|i| &i.weight))
    }

    /// `load(e) = sum_i weight_i * n_i(e)`, indexed by edge id.
    pub fn loads(&self, edge_count: usize) -> Vec<S> {
        let mut loads = vec![S::zero(); edge_count];
        for item in &self.items {
            for s in item.walk.steps() {
                loads[s.edge.0] = loads[s.edge.0].clone() + item.weight.clone();
            }
        }
        loads
    }

    pub fn scaled(&self, factor: &S) -> Self {
        Self {
            items: self
                .items
                .iter()
                .map(|i| PackingItem {
                    weight: i.weight.clone() * factor.clone(),
                    walk: i.walk.clone(),
                })
                .collect(),
        }
    }

    /// Combines items carrying the same walk, keeping first-occurrence order.
    /// Combines items whose walks agree up to reversal. Each walk is kept in
    /// the smaller of its two orientations.
    pub fn merged(&self) -> Self {
        let mut out: Vec<PackingItem<S>> = Vec::new();
        for item in &self.items {
            let rev = item.walk.reversed();
            let walk = if rev < item.walk { rev } else { item.walk.clone() };
            match out.iter_mut().find(|o| o.walk == walk) {
                Some(o) => o.weight = o.weight.clone() + item.weight.clone(),
                None => out.push(PackingItem {
                    weight: item.weight.clone(),
                    walk,
                }),
            }
        }
        Self { items: out }
    }

    /// Merged and sorted by walk; equal packings have equal canonical forms.
    pub fn canonical(&self) -> Self {
        let mut m = self.merged();
        m.items.sort_by(|a, b| a.walk.cmp(&b.walk));
        m
    }

    pub fn is_integer(&self) -> bool {
        self.items.iter().all(|i| i.weight.is_integral())
    }

    pub fn is_half_integer(&self) -> bool {
        self.items
            .iter()
            .all(|i| (i.weight.clone() + i.weight.clone()).is_integral())
    }
}

impl<S: Scalar> Add for Packing<S> {
    type Output = Packing<S>;

    fn add(mut self, rhs: Packing<S>) -> Packing<S> {
        self.items.extend(rhs.items);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<S> {
    pub edge: EdgeId,
    pub load: S,
    pub cap: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCheck<S> {
    pub value: S,
    pub loads: Vec<S>,
    pub violations: Vec<Violation<S>>,
    /// Indices of items whose weight is not strictly positive.
    pub bad_weights: Vec<usize>,
}

impl<S> PackingCheck<S> {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty() && self.bad_weights.is_empty()
    }
}

/// Checks every walk against the graph and every edge load against its
/// capacity.
pub fn validate_packing<S: Scalar>(n: &Network<S>, p: &Packing<S>) -> Result<PackingCheck<S>> {
    for item in &p.items {
        check_steps(n.graph(), item.walk.steps())?;
    }
    let loads = p.loads(n.graph().edge_count());
    let violations = loads
        .iter()
        .enumerate()
        .filter(|(i, l)| *l > n.cap(EdgeId(*i)))
        .map(|(i, l)| Violation {
            edge: EdgeId(i),
            load: l.clone(),
            cap: n.cap(EdgeId(i)).clone(),
        })
        .collect();
    let bad_weights = p
        .items
        .iter()
        .enumerate()
        .filter(|(_, it)| !it.weight.is_positive())
        .map(|(i, _)| i)
        .collect();
    Ok(PackingCheck {
        value: p.value(),
        loads,
        violations,
        bad_weights,
    })
}

/// Non-terminal vertices of odd degree.
pub fn odd_inner_vertices<S: Scalar>(n: &Network<S>) -> Vec<VertexId> {
    n.non_terminals().filter(|&v| n.graph().degree(v) % 2 == 1).collect()
}

pub fn is_inner_eulerian<S: Scalar>(n: &Network<S>) -> bool {
    odd_inner_vertices(n).is_empty()
}
