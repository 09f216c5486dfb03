//! Valence graphs, signings, alternating trails and bidirected graphs.
//!
//! Every edge `e` of the underlying graph carries two valencies with ids
//! `2e` and `2e + 1`. A signed valence network stores its own underlying
//! graph so the trail pipeline can add vertices, reattach edges and remove
//! edges while keeping ids stable.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::splitting::{self, End, Policy, SEdge, SplitGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of position `i` in an alternating sequence starting with `first`.
    pub fn alternate(first: Sign, i: usize) -> Sign {
        if i % 2 == 0 {
            first
        } else {
            first.flip()
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Valence(pub usize);

impl Valence {
    pub fn of(e: EdgeId, slot: usize) -> Valence {
        Valence(2 * e.0 + slot)
    }

    pub fn edge(self) -> EdgeId {
        EdgeId(self.0 / 2)
    }

    pub fn slot(self) -> usize {
        self.0 % 2
    }

    /// The other valence of the same edge.
    pub fn twin(self) -> Valence {
        Valence(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VStep {
    pub valence: Valence,
    pub from: VertexId,
    pub to: VertexId,
}

/// A trail in a valence graph: no valence repeats.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValenceTrail {
    pub steps: Vec<VStep>,
}

impl ValenceTrail {
    pub fn new(steps: Vec<VStep>) -> Self {
        Self { steps }
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

    pub fn is_odd(&self) -> bool {
        self.steps.len() % 2 == 1
    }

    pub fn reversed(&self) -> ValenceTrail {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| VStep {
                valence: s.valence,
                from: s.to,
                to: s.from,
            })
            .collect();
        ValenceTrail { steps }
    }

    /// True if some underlying edge is used through both valencies.
    pub fn has_irregular_edge(&self) -> bool {
        let mut seen = BTreeSet::new();
        !self.steps.iter().all(|s| seen.insert(s.valence.edge()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VEdge {
    pub name: String,
    pub ends: [VertexId; 2],
    pub alive: bool,
}

impl VEdge {
    pub fn other(&self, x: VertexId) -> VertexId {
        if self.ends[0] == x {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    pub p: usize,
    pub q: usize,
}

/// `(G¹², M, T, 1)` with optional `(p, q)`-tightness data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedValenceNetwork {
    pub vertex_names: Vec<String>,
    pub edges: Vec<VEdge>,
    /// Indexed by valence id.
    pub signs: Vec<Sign>,
    pub terminals: BTreeSet<VertexId>,
    pub tightness: Option<Tightness>,
}

impl SignedValenceNetwork {
    /// Valence network of `g` with every valence signed `+`.
    pub fn from_graph(g: &Multigraph, terminals: BTreeSet<VertexId>) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|e| VEdge {
                name: e.name.clone(),
                ends: [e.u, e.v],
                alive: true,
            })
            .collect::<Vec<_>>();
        let signs = vec![Sign::Plus; 2 * edges.len()];
        Self {
            vertex_names: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
            edges,
            signs,
            terminals,
            tightness: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.vertex_names.push(name.into());
        VertexId(self.vertex_names.len() - 1)
    }

    pub fn add_edge(&mut self, name: impl Into<String>, u: VertexId, v: VertexId, signs: [Sign; 2]) -> EdgeId {
        self.edges.push(VEdge {
            name: name.into(),
            ends: [u, v],
            alive: true,
        });
        self.signs.extend(signs);
        EdgeId(self.edges.len() - 1)
    }

    pub fn edge(&self, e: EdgeId) -> &VEdge {
        &self.edges[e.0]
    }

    pub fn sign(&self, x: Valence) -> Sign {
        self.signs[x.0]
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.terminals.contains(&v)
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.alive)
            .map(|(i, _)| EdgeId(i))
    }

    pub fn alive_edge_count(&self) -> usize {
        self.alive_edges().count()
    }

    /// Live edges at `v`, by id.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        self.alive_edges()
            .filter(|&e| self.edges[e.0].ends.contains(&v))
            .collect()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn valencies_at(&self, v: VertexId) -> Vec<Valence> {
        self.incident(v)
            .into_iter()
            .flat_map(|e| [Valence::of(e, 0), Valence::of(e, 1)])
            .collect()
    }

    pub fn non_terminals(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_count()).map(VertexId).filter(|v| !self.is_terminal(*v))
    }

    /// Checks that `w` is a trail of live valencies; `Err` names the step.
    pub fn check_trail(&self, w: &ValenceTrail) -> Result<()> {
        let bad = |index: usize, reason: &str| Error::MalformedWalk {
            index,
            reason: reason.into(),
        };
        if w.is_empty() {
            return Err(bad(0, "empty trail"));
        }
        let mut seen = BTreeSet::new();
        for (i, s) in w.steps.iter().enumerate() {
            let e = self
                .edges
                .get(s.valence.edge().0)
                .ok_or(Error::UnknownEdge(s.valence.edge().0))?;
            if !e.alive {
                return Err(bad(i, "valence of a removed edge"));
            }
            if !(e.ends == [s.from, s.to] || e.ends == [s.to, s.from]) {
                return Err(bad(i, "step does not match its edge"));
            }
            if i > 0 && w.steps[i - 1].to != s.from {
                return Err(bad(i, "steps are not consecutive"));
            }
            if !seen.insert(s.valence) {
                return Err(bad(i, "valence repeated"));
            }
        }
        Ok(())
    }

    /// `T`-trail with distinct terminal ends.
    pub fn is_t_trail(&self, w: &ValenceTrail) -> bool {
        !w.is_empty() && w.start() != w.end() && self.is_terminal(w.start()) && self.is_terminal(w.end())
    }
}

/// Equal numbers of `+` and `-` valencies at every non-terminal.
pub fn is_inner_balanced(svn: &SignedValenceNetwork) -> bool {
    first_unbalanced(svn).is_none()
}

fn first_unbalanced(svn: &SignedValenceNetwork) -> Option<VertexId> {
    let mut bal = vec![0i64; svn.vertex_count()];
    for e in svn.alive_edges() {
        for slot in 0..2 {
            let d = if svn.sign(Valence::of(e, slot)) == Sign::Plus {
                1
            } else {
                -1
            };
            for v in svn.edges[e.0].ends {
                bal[v.0] += d;
            }
        }
    }
    svn.non_terminals().find(|v| bal[v.0] != 0)
}

/// Consecutive valence signs differ.
pub fn is_alternating(svn: &SignedValenceNetwork, w: &ValenceTrail) -> bool {
    w.steps
        .windows(2)
        .all(|p| svn.sign(p[0].valence) != svn.sign(p[1].valence))
}

/// `-` valencies at terminals, counted once per terminal endpoint.
pub fn count_minus_at_terminals(svn: &SignedValenceNetwork) -> usize {
    let mut count = 0;
    for e in svn.alive_edges() {
        for slot in 0..2 {
            if svn.sign(Valence::of(e, slot)) == Sign::Minus {
                count += svn.edges[e.0].ends.iter().filter(|v| svn.is_terminal(**v)).count();
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiEnd {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiKind {
    /// Ingoing at both ends.
    Positive,
    /// Outgoing at both ends.
    Negative,
    /// Outgoing at `ends[0]`, ingoing at `ends[1]`.
    Directed,
    /// Ingoing at `ends[0]`, outgoing at `ends[1]`.
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BiEdge {
    pub ends: [VertexId; 2],
    pub kinds: [BiEnd; 2],
}

impl BiEdge {
    pub fn positive(u: VertexId, v: VertexId) -> Self {
        Self {
            ends: [u, v],
            kinds: [BiEnd::In, BiEnd::In],
        }
    }

    pub fn negative(u: VertexId, v: VertexId) -> Self {
        Self {
            ends: [u, v],
            kinds: [BiEnd::Out, BiEnd::Out],
        }
    }

    pub fn directed(from: VertexId, to: VertexId) -> Self {
        Self {
            ends: [from, to],
            kinds: [BiEnd::Out, BiEnd::In],
        }
    }

    pub fn kind(&self) -> BiKind {
        match self.kinds {
            [BiEnd::In, BiEnd::In] => BiKind::Positive,
            [BiEnd::Out, BiEnd::Out] => BiKind::Negative,
            [BiEnd::Out, BiEnd::In] => BiKind::Directed,
            [BiEnd::In, BiEnd::Out] => BiKind::Reversed,
        }
    }

    /// Kind of the end at `x` when leaving `x` along this edge from `side`.
    fn end_kind(&self, side: usize) -> BiEnd {
        self.kinds[side]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BidirectedGraph {
    pub vertex_count: usize,
    pub edges: Vec<BiEdge>,
}

impl BidirectedGraph {
    /// Ingoing and outgoing end counts agree at every non-terminal.
    pub fn is_inner_eulerian(&self, terminals: &BTreeSet<VertexId>) -> bool {
        self.first_unbalanced(terminals).is_none()
    }

    fn first_unbalanced(&self, terminals: &BTreeSet<VertexId>) -> Option<VertexId> {
        let mut bal = vec![0i64; self.vertex_count];
        for e in &self.edges {
            for side in 0..2 {
                bal[e.ends[side].0] += if e.kinds[side] == BiEnd::In { 1 } else { -1 };
            }
        }
        (0..self.vertex_count)
            .map(VertexId)
            .find(|v| !terminals.contains(v) && bal[v.0] != 0)
    }

    /// The underlying undirected graph with edge `i` named `b{i}`.
    pub fn underlying(&self) -> Result<Multigraph> {
        let mut g = Multigraph::new();
        for i in 0..self.vertex_count {
            g.add_vertex(format!("v{i}"));
        }
        for (i, e) in self.edges.iter().enumerate() {
            g.add_edge(format!("b{i}"), e.ends[0], e.ends[1])?;
        }
        Ok(g)
    }
}

/// Traversal of bidirected edge `edge` from `from` to `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BiStep {
    pub edge: usize,
    pub from: VertexId,
    pub to: VertexId,
}

fn side_of(e: &BiEdge, from: VertexId, to: VertexId) -> Option<usize> {
    if e.ends == [from, to] {
        Some(0)
    } else if e.ends == [to, from] {
        Some(1)
    } else {
        None
    }
}

/// Edge-simple walk that is ingoing on one side and outgoing on the other
/// at every interior vertex.
pub fn is_bidirected_trail(bg: &BidirectedGraph, steps: &[BiStep]) -> bool {
    if steps.is_empty() {
        return false;
    }
    let mut seen = BTreeSet::new();
    let mut prev_in: Option<BiEnd> = None;
    for (i, s) in steps.iter().enumerate() {
        let Some(e) = bg.edges.get(s.edge) else { return false };
        let Some(side) = side_of(e, s.from, s.to) else {
            return false;
        };
        if !seen.insert(s.edge) || (i > 0 && steps[i - 1].to != s.from) {
            return false;
        }
        if let Some(k) = prev_in {
            if k == e.end_kind(side) {
                return false;
            }
        }
        prev_in = Some(e.end_kind(1 - side));
    }
    true
}

/// Bidirected graph with one edge per live valence: positive for `+`,
/// negative for `-`. Returns the valence of each edge.
pub fn to_bidirected(svn: &SignedValenceNetwork) -> Result<(BidirectedGraph, Vec<Valence>)> {
    if let Some(v) = first_unbalanced(svn) {
        return Err(Error::Precondition(format!(
            "signing is not inner balanced at {}",
            svn.vertex_names[v.0]
        )));
    }
    let mut edges = Vec::new();
    let mut map = Vec::new();
    for e in svn.alive_edges() {
        let [u, v] = svn.edges[e.0].ends;
        for slot in 0..2 {
            let x = Valence::of(e, slot);
            edges.push(match svn.sign(x) {
                Sign::Plus => BiEdge::positive(u, v),
                Sign::Minus => BiEdge::negative(u, v),
            });
            map.push(x);
        }
    }
    Ok((
        BidirectedGraph {
            vertex_count: svn.vertex_count(),
            edges,
        },
        map,
    ))
}

fn end_of(k: BiEnd) -> End {
    match k {
        BiEnd::In => End::In,
        BiEnd::Out => End::Out,
    }
}

/// Maximum integer packing of bidirected `T`-trails in an inner Eulerian
/// bidirected graph with unit capacities.
///
/// Splits one ingoing and one outgoing end at non-terminals while
/// `Σ_t λ({t}, T - {t})` on the underlying graph is unchanged, until every
/// remaining edge joins two terminals. The value is checked against
/// `½ Σ_t λ({t}, T - {t})`.
pub fn bidirected_trail_packing(bg: &BidirectedGraph, terminals: &BTreeSet<VertexId>) -> Result<Vec<Vec<BiStep>>> {
    if terminals.len() < 2 {
        return Ok(Vec::new());
    }
    if let Some(v) = bg.first_unbalanced(terminals) {
        return Err(Error::Precondition(format!(
            "bidirected graph is not inner Eulerian at vertex {v}"
        )));
    }
    let n = bg.vertex_count;
    let mut g = SplitGraph::new(n);
    for (i, e) in bg.edges.iter().enumerate() {
        g.add_base(e.ends[0].0, e.ends[1].0, [end_of(e.kinds[0]), end_of(e.kinds[1])], 1, i);
    }
    let terms: Vec<usize> = terminals.iter().map(|t| t.0).collect();
    let is_t: Vec<bool> = (0..n).map(|v| terminals.contains(&VertexId(v))).collect();
    let objective = |g: &SplitGraph| splitting::terminal_lambda_sum(g, &terms);
    let done = |g: &SplitGraph, _| g.live().all(|(_, e)| e.ends.iter().all(|&v| is_t[v]));
    let pair_ok = |g: &SplitGraph, a: (usize, usize), b: (usize, usize)| {
        let ka = g.edges[a.0].kinds[a.1];
        let kb = g.edges[b.0].kinds[b.1];
        (ka == End::In && kb == End::Out) || (ka == End::Out && kb == End::In)
    };
    let keep_loop = |e: &SEdge| !is_t[e.ends[0]] && e.kinds[0] == e.kinds[1];
    let policy = Policy {
        objective: &objective,
        done: &done,
        vertices: (0..n).filter(|&v| !is_t[v]).collect(),
        pair_ok: &pair_ok,
        keep_loop: &keep_loop,
    };
    let stats = splitting::run(&mut g, &policy)?;
    let mut out = Vec::new();
    for (i, e) in g.live() {
        if e.is_loop() {
            continue;
        }
        for _ in 0..e.cap {
            let steps: Vec<BiStep> = g
                .expand(i, 0)
                .into_iter()
                .map(|(edge, from, to)| BiStep {
                    edge,
                    from: VertexId(from),
                    to: VertexId(to),
                })
                .collect();
            ensure!(
                is_bidirected_trail(bg, &steps),
                "split edge expands to an invalid bidirected trail"
            );
            out.push(steps);
        }
    }
    ensure!(
        2 * out.len() as i64 == stats.objective,
        "bidirected packing value {} differs from half the terminal cut sum {}",
        out.len(),
        stats.objective
    );
    Ok(out)
}

/// Integer packing `P + Q` of alternating `T`-trails of total value `p + q`
/// with `|P| ≥ p` odd and `|Q| ≤ q` even trails, none passing a terminal
/// internally.
pub fn alternating_packing(svn: &SignedValenceNetwork) -> Result<(Vec<ValenceTrail>, Vec<ValenceTrail>)> {
    let t = svn
        .tightness
        .ok_or_else(|| Error::Precondition("network carries no tightness data".into()))?;
    if t.p + t.q == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let (bg, map) = to_bidirected(svn)?;
    let trails = bidirected_trail_packing(&bg, &svn.terminals)?;
    let mut odd = Vec::new();
    let mut even = Vec::new();
    for steps in trails {
        let w = ValenceTrail::new(
            steps
                .iter()
                .map(|s| VStep {
                    valence: map[s.edge],
                    from: s.from,
                    to: s.to,
                })
                .collect(),
        );
        let w = split_at_terminals(svn, w);
        ensure!(
            is_alternating(svn, &w),
            "bidirected trail maps to a non-alternating trail"
        );
        if w.is_odd() {
            odd.push(w);
        } else {
            even.push(w);
        }
    }
    ensure!(
        odd.len() + even.len() >= t.p + t.q,
        "alternating packing is smaller than p + q"
    );
    ensure!(
        odd.len() >= t.p,
        "alternating packing has {} odd trails, expected at least {}",
        odd.len(),
        t.p
    );
    let keep_even = (t.p + t.q).saturating_sub(odd.len()).min(even.len());
    even.truncate(keep_even);
    odd.truncate(t.p + t.q - even.len());
    Ok((odd, even))
}

/// Shortens `w` until it has no terminal as an interior vertex, keeping a
/// subtrail whose ends are distinct terminals.
pub fn split_at_terminals(svn: &SignedValenceNetwork, mut w: ValenceTrail) -> ValenceTrail {
    while let Some(i) = (0..w.len() - 1).find(|&i| svn.is_terminal(w.steps[i].to)) {
        let t = w.steps[i].to;
        if w.start() != t {
            w.steps.truncate(i + 1);
        } else {
            w.steps.drain(..=i);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn svn_of(g: &Multigraph, terminals: &[&str]) -> SignedValenceNetwork {
        SignedValenceNetwork::from_graph(g, terminals.iter().map(|t| g.vertex_by_name(t).unwrap()).collect())
    }

    fn step(e: usize, slot: usize, from: usize, to: usize) -> VStep {
        VStep {
            valence: Valence::of(EdgeId(e), slot),
            from: VertexId(from),
            to: VertexId(to),
        }
    }

    #[test]
    fn balance_examples() {
        let i1 = fixtures::i1();
        let mut s = svn_of(i1.graph(), &["s", "t"]);
        s.signs = vec![Sign::Plus, Sign::Minus];
        assert!(is_inner_balanced(&s));

        let i4 = fixtures::i4();
        let mut s = svn_of(i4.graph(), &["t1", "t2", "t3", "t4"]);
        s.signs = vec![
            Sign::Plus,
            Sign::Plus,
            Sign::Minus,
            Sign::Minus,
            Sign::Plus,
            Sign::Minus,
            Sign::Plus,
            Sign::Minus,
        ];
        assert!(is_inner_balanced(&s));
        s.signs[3] = Sign::Plus;
        assert!(!is_inner_balanced(&s));
    }

    #[test]
    fn alternation_examples() {
        let i2 = fixtures::i2();
        let mut s = svn_of(i2.graph(), &["s", "t"]);
        s.signs = vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus];
        let w = ValenceTrail::new(vec![step(0, 0, 0, 1), step(1, 1, 1, 2)]);
        assert!(is_alternating(&s, &w));
        let w = ValenceTrail::new(vec![step(0, 0, 0, 1), step(1, 0, 1, 2)]);
        assert!(!is_alternating(&s, &w));
        assert!(is_alternating(&s, &ValenceTrail::new(vec![step(0, 0, 0, 1)])));
    }

    #[test]
    fn alternating_parity_follows_end_signs() {
        for len in 1..=8usize {
            for first in [Sign::Plus, Sign::Minus] {
                let last = Sign::alternate(first, len - 1);
                assert_eq!(len % 2 == 1, first == last);
            }
        }
    }

    #[test]
    fn minus_count_convention() {
        let i1 = fixtures::i1();
        let mut s = svn_of(i1.graph(), &["s", "t"]);
        assert_eq!(count_minus_at_terminals(&s), 0);
        s.signs[1] = Sign::Minus;
        assert_eq!(count_minus_at_terminals(&s), 2);
        let i2 = fixtures::i2();
        let mut s = svn_of(i2.graph(), &["s", "t"]);
        s.signs[0] = Sign::Minus;
        assert_eq!(count_minus_at_terminals(&s), 1);
    }

    #[test]
    fn bidirected_correspondence() {
        let i1 = fixtures::i1();
        let s = svn_of(i1.graph(), &["s", "t"]);
        let (bg, map) = to_bidirected(&s).unwrap();
        assert!(bg.edges.iter().all(|e| e.kind() == BiKind::Positive));
        assert_eq!(map, vec![Valence(0), Valence(1)]);

        let i2 = fixtures::i2();
        let mut s = svn_of(i2.graph(), &["s", "t"]);
        s.signs = vec![Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus];
        let (bg, _) = to_bidirected(&s).unwrap();
        assert!(bg.is_inner_eulerian(&s.terminals));
        let und = bg.underlying().unwrap();
        for (i, e) in und.edges().iter().enumerate() {
            let orig = s.edge(Valence(i).edge());
            assert_eq!([e.u, e.v], orig.ends);
        }

        s.signs[1] = Sign::Plus;
        assert!(to_bidirected(&s).is_err());
    }

    #[test]
    fn bidirected_packing_examples() {
        let (s, t) = (VertexId(0), VertexId(1));
        let terms: BTreeSet<_> = [s, t].into();
        let bg = BidirectedGraph {
            vertex_count: 2,
            edges: vec![BiEdge::positive(s, t), BiEdge::directed(s, t)],
        };
        assert_eq!(bidirected_trail_packing(&bg, &terms).unwrap().len(), 2);
        let bg = BidirectedGraph {
            vertex_count: 2,
            edges: vec![BiEdge::directed(s, t)],
        };
        assert_eq!(bidirected_trail_packing(&bg, &terms).unwrap().len(), 1);
        assert!(bidirected_trail_packing(&bg, &BTreeSet::new()).unwrap().is_empty());

        // s → v → t with v balanced, and a positive/negative pair through v.
        let v = VertexId(2);
        let bg = BidirectedGraph {
            vertex_count: 3,
            edges: vec![
                BiEdge::directed(s, v),
                BiEdge::directed(v, t),
                BiEdge::positive(s, v),
                BiEdge::negative(v, t),
            ],
        };
        let p = bidirected_trail_packing(&bg, &terms).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|w| is_bidirected_trail(&bg, w)));

        // Unbalanced non-terminal.
        let bg = BidirectedGraph {
            vertex_count: 3,
            edges: vec![BiEdge::positive(s, v), BiEdge::positive(v, t)],
        };
        assert!(bidirected_trail_packing(&bg, &terms).is_err());
    }

    #[test]
    fn alternating_packing_examples() {
        let i1 = fixtures::i1();
        let mut s = svn_of(i1.graph(), &["s", "t"]);
        s.tightness = Some(Tightness { p: 0, q: 0 });
        assert_eq!(alternating_packing(&s).unwrap(), (vec![], vec![]));
        s.tightness = Some(Tightness { p: 2, q: 0 });
        let (p, q) = alternating_packing(&s).unwrap();
        assert_eq!((p.len(), q.len()), (2, 0));
        s.tightness = None;
        assert!(alternating_packing(&s).is_err());
    }

    #[test]
    fn splitting_at_terminals() {
        // s - t - u with all three terminals: the trail s,t,u splits at t.
        let mut g = Multigraph::new();
        let vs: Vec<_> = ["s", "t", "u"].iter().map(|n| g.add_vertex(*n)).collect();
        g.add_edge("a", vs[0], vs[1]).unwrap();
        g.add_edge("b", vs[1], vs[2]).unwrap();
        let s = svn_of(&g, &["s", "t", "u"]);
        let w = ValenceTrail::new(vec![step(0, 0, 0, 1), step(1, 0, 1, 2)]);
        assert_eq!(split_at_terminals(&s, w).len(), 1);
    }

    #[test]
    fn irregularity() {
        let w = ValenceTrail::new(vec![step(0, 0, 0, 1), step(0, 1, 1, 0)]);
        assert!(w.has_irregular_edge());
        assert!(!ValenceTrail::new(vec![step(0, 0, 0, 1)]).has_irregular_edge());
    }
}
