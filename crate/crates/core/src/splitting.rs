//! Objective-preserving splitting-off on an integer-capacitated multigraph.
//!
//! A split at `x` takes `k` units from two edge ends `ax`, `xb` and adds an
//! edge `ab` of capacity `k` that remembers where it came from. Any walk
//! system in the final graph expands to one in the original graph.

use crate::error::{Error, Result};
use crate::flow::min_cut_i64;

/// Orientation of an edge end, used for bidirected graphs only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum End {
    Plain,
    In,
    Out,
}

#[derive(Clone, Copy, Debug)]
enum Origin {
    Base(usize),
    /// `first` and `second` are `(edge, side at mid)`.
    Split {
        first: (usize, usize),
        second: (usize, usize),
    },
}

#[derive(Clone, Debug)]
pub(crate) struct SEdge {
    pub ends: [usize; 2],
    pub kinds: [End; 2],
    pub cap: i64,
    origin: Origin,
}

impl SEdge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

/// A traversal of an original edge: `(base id, from, to)`.
pub(crate) type BaseStep = (usize, usize, usize);

#[derive(Clone, Debug)]
pub(crate) struct SplitGraph {
    pub n: usize,
    pub edges: Vec<SEdge>,
}

impl SplitGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new() }
    }

    pub fn add_base(&mut self, u: usize, v: usize, kinds: [End; 2], cap: i64, base: usize) {
        self.edges.push(SEdge {
            ends: [u, v],
            kinds,
            cap,
            origin: Origin::Base(base),
        });
    }

    pub fn live(&self) -> impl Iterator<Item = (usize, &SEdge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.cap > 0)
    }

    pub fn lambda(&self, sources: &[bool], sinks: &[bool]) -> i64 {
        let edges = self
            .live()
            .filter(|(_, e)| !e.is_loop())
            .map(|(_, e)| (e.ends[0], e.ends[1], e.cap));
        min_cut_i64(self.n, edges, sources, sinks).0
    }

    /// Live edge ends located at `x`, as `(edge, side)`.
    pub fn ends_at(&self, x: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, e) in self.live() {
            for side in 0..2 {
                if e.ends[side] == x {
                    out.push((i, side));
                }
            }
        }
        out
    }

    pub fn has_live_edge_at(&self, x: usize) -> bool {
        self.live().any(|(_, e)| e.ends.contains(&x))
    }

    fn split(&mut self, a: (usize, usize), b: (usize, usize), k: i64) {
        let ea = &self.edges[a.0];
        let eb = &self.edges[b.0];
        let new = SEdge {
            ends: [ea.ends[1 - a.1], eb.ends[1 - b.1]],
            kinds: [ea.kinds[1 - a.1], eb.kinds[1 - b.1]],
            cap: k,
            origin: Origin::Split { first: a, second: b },
        };
        self.edges[a.0].cap -= k;
        self.edges[b.0].cap -= k;
        self.edges.push(new);
    }

    fn undo_split(&mut self, a: (usize, usize), b: (usize, usize), k: i64) {
        self.edges.pop();
        self.edges[a.0].cap += k;
        self.edges[b.0].cap += k;
    }

    /// Original edge traversals making up edge `e` entered from `from_side`.
    pub fn expand(&self, e: usize, from_side: usize) -> Vec<BaseStep> {
        let mut out = Vec::new();
        self.expand_into(e, from_side, &mut out);
        out
    }

    fn expand_into(&self, e: usize, from_side: usize, out: &mut Vec<BaseStep>) {
        let edge = &self.edges[e];
        match edge.origin {
            Origin::Base(b) => out.push((b, edge.ends[from_side], edge.ends[1 - from_side])),
            Origin::Split { first, second } => {
                if from_side == 0 {
                    self.expand_into(first.0, 1 - first.1, out);
                    self.expand_into(second.0, second.1, out);
                } else {
                    self.expand_into(second.0, 1 - second.1, out);
                    self.expand_into(first.0, first.1, out);
                }
            }
        }
    }
}

pub(crate) struct Policy<'a> {
    /// Integer quantity every split must preserve.
    pub objective: &'a dyn Fn(&SplitGraph) -> i64,
    pub done: &'a dyn Fn(&SplitGraph, i64) -> bool,
    /// Vertices where splitting is allowed, in priority order.
    pub vertices: Vec<usize>,
    pub pair_ok: &'a dyn Fn(&SplitGraph, (usize, usize), (usize, usize)) -> bool,
    /// Whether a loop created by a split is kept; dropped loops lose their
    /// capacity.
    pub keep_loop: &'a dyn Fn(&SEdge) -> bool,
}

/// Statistics of one engine run.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct RunStats {
    pub splits: usize,
    pub objective: i64,
}

/// Splits greedily, always taking the first admissible pair in the policy's
/// order with the largest admissible amount, until `done` holds.
pub(crate) fn run(g: &mut SplitGraph, policy: &Policy<'_>) -> Result<RunStats> {
    let target = (policy.objective)(g);
    let mut stats = RunStats {
        splits: 0,
        objective: target,
    };
    while !(policy.done)(g, target) {
        if !split_once(g, policy, target) {
            return Err(Error::Invariant(
                "no objective-preserving split exists; splitting-off got stuck".into(),
            ));
        }
        stats.splits += 1;
    }
    Ok(stats)
}

fn split_once(g: &mut SplitGraph, policy: &Policy<'_>, target: i64) -> bool {
    for &x in &policy.vertices {
        let ends = g.ends_at(x);
        for i in 0..ends.len() {
            for j in i + 1..ends.len() {
                let (a, b) = (ends[i], ends[j]);
                if a.0 == b.0 || !(policy.pair_ok)(g, a, b) {
                    continue;
                }
                let kmax = g.edges[a.0].cap.min(g.edges[b.0].cap);
                let ok = |g: &mut SplitGraph, k: i64| {
                    g.split(a, b, k);
                    let good = (policy.objective)(g) == target;
                    g.undo_split(a, b, k);
                    good
                };
                if !ok(g, 1) {
                    continue;
                }
                let (mut lo, mut hi) = (1, kmax);
                while lo < hi {
                    let mid = lo + (hi - lo + 1) / 2;
                    if ok(g, mid) {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                g.split(a, b, lo);
                let last = g.edges.len() - 1;
                if g.edges[last].is_loop() && !(policy.keep_loop)(&g.edges[last]) {
                    g.edges[last].cap = 0;
                }
                return true;
            }
        }
    }
    false
}

/// `Σ_t λ({t}, T - {t})`.
pub(crate) fn terminal_lambda_sum(g: &SplitGraph, terminals: &[usize]) -> i64 {
    let mut total = 0;
    for &t in terminals {
        let mut src = vec![false; g.n];
        let mut snk = vec![false; g.n];
        src[t] = true;
        for &s in terminals {
            if s != t {
                snk[s] = true;
            }
        }
        total += g.lambda(&src, &snk);
    }
    total
}
