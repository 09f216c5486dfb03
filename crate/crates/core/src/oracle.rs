//! Brute-force ground truth for small networks.
//!
//! Every search here runs in a fixed enumeration order, so results are
//! deterministic. Inputs larger than the [`OracleBudget`] are refused with
//! [`Error::Budget`].

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::barrier::{barrier_capacity, barrier_check, Barrier};
use crate::cover::DoubleCover;
use crate::error::{Error, Result};
use crate::flow::max_flow_min_cut;
use crate::graph::{validate_packing, EdgeId, Network, Packing, Step, VertexId, Violation, Walk};
use crate::scalar::Scalar;

pub const BUDGET_ENV: &str = "ODDPACK_ORACLE_BUDGET";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_terminals: usize,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_vertices: 8,
            max_edges: 12,
            max_terminals: 6,
            time_limit: Duration::from_secs(60),
        }
    }
}

impl OracleBudget {
    /// Parses `vertices=8,edges=12,terminals=6,seconds=60`; missing keys
    /// keep their default.
    pub fn parse(s: &str) -> Result<Self> {
        let mut b = Self::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("budget entry `{item}` is not key=value")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("budget value `{v}` is not a number")))?;
            match k.trim() {
                "vertices" => b.max_vertices = v as usize,
                "edges" => b.max_edges = v as usize,
                "terminals" => b.max_terminals = v as usize,
                "seconds" => b.time_limit = Duration::from_secs(v),
                other => return Err(Error::Input(format!("unknown budget key `{other}`"))),
            }
        }
        Ok(b)
    }

    /// Default budget overridden by `ODDPACK_ORACLE_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn check<S: Scalar>(&self, n: &Network<S>) -> Result<()> {
        let g = n.graph();
        let over = |what: &str, have: usize, max: usize| {
            Err(Error::Budget(format!(
                "{have} {what} exceed the oracle budget of {max}"
            )))
        };
        if g.vertex_count() > self.max_vertices {
            return over("vertices", g.vertex_count(), self.max_vertices);
        }
        if g.edge_count() > self.max_edges {
            return over("edges", g.edge_count(), self.max_edges);
        }
        if n.terminals().len() > self.max_terminals {
            return over("terminals", n.terminals().len(), self.max_terminals);
        }
        Ok(())
    }
}

struct Clock {
    deadline: Instant,
    ticks: u32,
}

impl Clock {
    fn new(b: &OracleBudget) -> Self {
        Self {
            deadline: Instant::now() + b.time_limit,
            ticks: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.ticks = self.ticks.wrapping_add(1);
        if self.ticks % 4096 == 0 && Instant::now() > self.deadline {
            return Err(Error::Budget("oracle time limit reached".into()));
        }
        Ok(())
    }
}

/// Union-find with parity, for checking a barrier candidate on bitmasks.
fn barrier_ok(n: usize, ends: &[(usize, usize)], vmask: u32, emask: u32, tmask: u32) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut par = vec![0u8; n];
    let mut bad = vec![false; n];
    fn find(parent: &mut [usize], par: &mut [u8], x: usize) -> (usize, u8) {
        let mut p = 0;
        let mut r = x;
        while parent[r] != r {
            p ^= par[r];
            r = parent[r];
        }
        // Path compression with parity fix-up.
        let (mut y, mut py) = (x, p);
        while parent[y] != y {
            let next = parent[y];
            let pn = py ^ par[y];
            parent[y] = r;
            par[y] = py;
            y = next;
            py = pn;
        }
        (r, p)
    }
    for (i, &(u, v)) in ends.iter().enumerate() {
        if emask >> i & 1 == 0 {
            continue;
        }
        let (ru, pu) = find(&mut parent, &mut par, u);
        let (rv, pv) = find(&mut parent, &mut par, v);
        if ru == rv {
            if pu == pv {
                bad[ru] = true;
            }
        } else {
            parent[ru] = rv;
            par[ru] = pu ^ pv ^ 1;
            bad[rv] |= bad[ru];
        }
    }
    // Per component: the side of its first terminal, or 2 when a component
    // is non-bipartite.
    let mut seen: Vec<Option<u8>> = vec![None; n];
    for t in (0..n).filter(|&t| tmask >> t & 1 == 1 && vmask >> t & 1 == 1) {
        let (r, p) = find(&mut parent, &mut par, t);
        match seen[r] {
            None => {
                if bad[r] {
                    seen[r] = Some(2);
                } else {
                    seen[r] = Some(p);
                }
            }
            Some(2) => return false,
            Some(s) if s != p => return false,
            Some(_) => {}
        }
    }
    true
}

/// Minimum-capacity odd T-walk barrier by enumerating every vertex set
/// containing `T` and every edge subset of its induced edges.
pub fn min_barrier_exhaustive<S: Scalar>(n: &Network<S>, budget: &OracleBudget) -> Result<(Barrier, S)> {
    budget.check(n)?;
    let g = n.graph();
    let nv = g.vertex_count();
    if nv > 31 || g.edge_count() > 31 {
        return Err(Error::Budget("graph too large for bitmask enumeration".into()));
    }
    let mut clock = Clock::new(budget);
    let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u.0, e.v.0)).collect();
    let tmask: u32 = n.terminals().iter().fold(0, |m, t| m | 1 << t.0);
    let free: Vec<usize> = (0..nv).filter(|v| tmask >> v & 1 == 0).collect();
    let mut best: Option<(S, u32, u32)> = None;
    for sub in 0u32..(1 << free.len()) {
        let vmask = free
            .iter()
            .enumerate()
            .fold(tmask, |m, (i, &v)| if sub >> i & 1 == 1 { m | 1 << v } else { m });
        let inside = |v: usize| vmask >> v & 1 == 1;
        let induced: Vec<usize> = (0..ends.len())
            .filter(|&i| inside(ends[i].0) && inside(ends[i].1))
            .collect();
        let i_cap = n.cap_sum(
            (0..ends.len())
                .filter(|&i| inside(ends[i].0) != inside(ends[i].1))
                .map(EdgeId),
        );
        let base = i_cap.half();
        for pick in 0u32..(1 << induced.len()) {
            clock.tick()?;
            let emask = induced
                .iter()
                .enumerate()
                .fold(0u32, |m, (i, &e)| if pick >> i & 1 == 1 { m | 1 << e } else { m });
            if !barrier_ok(nv, &ends, vmask, emask, tmask) {
                continue;
            }
            let u = n.cap_sum(induced.iter().filter(|&&e| emask >> e & 1 == 0).map(|&e| EdgeId(e)));
            let cap = base.clone() + u;
            if best.as_ref().map_or(true, |(b, _, _)| cap < *b) {
                best = Some((cap, vmask, emask));
            }
        }
    }
    let (cap, vmask, emask) = best.ok_or_else(|| Error::Invariant("the whole graph was not a candidate".into()))?;
    let vertices = (0..nv).filter(|v| vmask >> v & 1 == 1).map(VertexId).collect();
    let edges = (0..ends.len()).filter(|e| emask >> e & 1 == 1).map(EdgeId).collect();
    let b = Barrier::new(g, vertices, edges)?;
    debug_assert!(barrier_check(n, &b).unwrap_or(false));
    debug_assert!(barrier_capacity(n, &b) == cap);
    Ok((b, cap))
}

/// Which trail lengths count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityFilter {
    Odd,
    Even,
    Any,
}

impl ParityFilter {
    fn accepts(self, len: usize) -> bool {
        match self {
            ParityFilter::Odd => len % 2 == 1,
            ParityFilter::Even => len % 2 == 0,
            ParityFilter::Any => true,
        }
    }
}

/// Trails of `G` use every edge at most once; trails of the valence graph
/// (every edge doubled) at most twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrailFamily {
    Graph,
    Valence,
}

fn integer_caps<S: Scalar>(n: &Network<S>) -> Result<Vec<i64>> {
    n.caps()
        .iter()
        .map(|c| {
            let b = c.to_big();
            if !b.is_integer() {
                return Err(Error::Precondition(format!("capacity {c} is not an integer")));
            }
            num_traits::ToPrimitive::to_i64(&b.to_integer())
                .ok_or_else(|| Error::Budget(format!("capacity {c} is too large")))
        })
        .collect()
}

/// Walks between distinct terminals, each kept in the smaller orientation,
/// sorted by length then lexicographically.
fn enumerate_walks(
    g: &crate::graph::Multigraph,
    caps: &[i64],
    pairs: &dyn Fn(VertexId, VertexId) -> bool,
    terminals: &BTreeSet<VertexId>,
    max_uses: i64,
    vertex_simple: bool,
    parity: ParityFilter,
    clock: &mut Clock,
) -> Result<Vec<Vec<Step>>> {
    struct St<'a> {
        g: &'a crate::graph::Multigraph,
        limit: Vec<i64>,
        used: Vec<i64>,
        visited: Vec<bool>,
        steps: Vec<Step>,
        out: Vec<Vec<Step>>,
    }
    fn go(
        st: &mut St,
        start: VertexId,
        at: VertexId,
        pairs: &dyn Fn(VertexId, VertexId) -> bool,
        vertex_simple: bool,
        parity: ParityFilter,
        clock: &mut Clock,
    ) -> Result<()> {
        clock.tick()?;
        if !st.steps.is_empty() && pairs(start, at) && parity.accepts(st.steps.len()) {
            let rev: Vec<Step> = st.steps.iter().rev().map(|s| s.reversed()).collect();
            if st.steps <= rev {
                st.out.push(st.steps.clone());
            }
        }
        for &e in st.g.incident(at) {
            if st.used[e.0] >= st.limit[e.0] {
                continue;
            }
            let to = st.g.edge(e).other(at).expect("incident edge");
            if vertex_simple && st.visited[to.0] {
                continue;
            }
            st.used[e.0] += 1;
            st.visited[to.0] = true;
            st.steps.push(Step { edge: e, from: at, to });
            go(st, start, to, pairs, vertex_simple, parity, clock)?;
            st.steps.pop();
            st.visited[to.0] = vertex_simple && to == start;
            st.used[e.0] -= 1;
        }
        Ok(())
    }
    let mut st = St {
        g,
        limit: caps.iter().map(|&c| c.min(max_uses)).collect(),
        used: vec![0; g.edge_count()],
        visited: vec![false; g.vertex_count()],
        steps: Vec::new(),
        out: Vec::new(),
    };
    for &s in terminals {
        st.visited[s.0] = true;
        go(&mut st, s, s, pairs, vertex_simple, parity, clock)?;
        st.visited[s.0] = false;
    }
    let mut out = st.out;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Branch and bound for a maximum-cardinality multiset of walks within
/// integer capacities. Stops early when `target` is reached.
struct PackSearch<'a> {
    walks: &'a [Vec<Step>],
    uses: Vec<Vec<(usize, i64)>>,
    /// Last walk index ending at each terminal.
    last_end: Vec<usize>,
    term_edges: Vec<Vec<usize>>,
    res: Vec<i64>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    target: usize,
    clock: Clock,
}

impl PackSearch<'_> {
    fn bound(&self, i: usize, cur: usize) -> usize {
        let mut s = 0;
        for (t, edges) in self.term_edges.iter().enumerate() {
            if self.last_end[t] != usize::MAX && self.last_end[t] >= i {
                s += edges.iter().map(|&e| self.res[e]).sum::<i64>();
            }
        }
        cur + (s / 2) as usize
    }

    fn fits(&self, i: usize) -> bool {
        self.uses[i].iter().all(|&(e, k)| self.res[e] >= k)
    }

    fn dfs(&mut self, start: usize) -> Result<()> {
        self.clock.tick()?;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        for i in start..self.walks.len() {
            if self.best.len() >= self.target || self.bound(i, self.chosen.len()) <= self.best.len() {
                return Ok(());
            }
            if !self.fits(i) {
                continue;
            }
            for &(e, k) in &self.uses[i] {
                self.res[e] -= k;
            }
            self.chosen.push(i);
            self.dfs(i)?;
            self.chosen.pop();
            for &(e, k) in &self.uses[i] {
                self.res[e] += k;
            }
        }
        Ok(())
    }
}

fn best_packing<S: Scalar>(
    g: &crate::graph::Multigraph,
    terminals: &BTreeSet<VertexId>,
    caps: Vec<i64>,
    walks: &[Vec<Step>],
    target: usize,
    clock: Clock,
) -> Result<Packing<S>> {
    let tindex: Vec<usize> = {
        let mut v = vec![usize::MAX; g.vertex_count()];
        for (i, t) in terminals.iter().enumerate() {
            v[t.0] = i;
        }
        v
    };
    let mut last_end = vec![usize::MAX; terminals.len()];
    let mut uses = Vec::new();
    for (i, w) in walks.iter().enumerate() {
        let pair = [tindex[w[0].from.0], tindex[w[w.len() - 1].to.0]];
        for &t in &pair {
            last_end[t] = i;
        }
        let mut u: Vec<(usize, i64)> = Vec::new();
        for s in w {
            match u.iter_mut().find(|x| x.0 == s.edge.0) {
                Some(x) => x.1 += 1,
                None => u.push((s.edge.0, 1)),
            }
        }
        uses.push(u);
    }
    let term_edges = terminals
        .iter()
        .map(|&t| g.incident(t).iter().map(|e| e.0).collect())
        .collect();
    let mut search = PackSearch {
        walks,
        uses,
        last_end,
        term_edges,
        res: caps,
        chosen: Vec::new(),
        best: Vec::new(),
        target,
        clock,
    };
    search.dfs(0)?;
    let mut p = Packing::new();
    for &i in &search.best {
        p.push(S::one(), Walk::new(g, walks[i].clone())?);
    }
    Ok(p.canonical())
}

/// Maximum integer packing of trails joining distinct terminals, by
/// enumerating all such trails and searching capacity-respecting multisets.
pub fn max_trail_packing_exhaustive<S: Scalar>(
    n: &Network<S>,
    parity: ParityFilter,
    family: TrailFamily,
    budget: &OracleBudget,
) -> Result<Packing<S>> {
    budget.check(n)?;
    let caps = integer_caps(n)?;
    let g = n.graph();
    let mut clock = Clock::new(budget);
    let terminals = n.terminals();
    let pairs = |a: VertexId, b: VertexId| a != b && terminals.contains(&b);
    let max_uses = match family {
        TrailFamily::Graph => 1,
        TrailFamily::Valence => 2,
    };
    let walks = enumerate_walks(g, &caps, &pairs, terminals, max_uses, false, parity, &mut clock)?;
    let mut target = terminals
        .iter()
        .map(|&t| g.incident(t).iter().map(|e| caps[e.0]).sum::<i64>())
        .sum::<i64>() as usize
        / 2;
    if parity == ParityFilter::Odd {
        let (_, cap) = min_barrier_exhaustive(n, budget)?;
        let floor = num_traits::ToPrimitive::to_usize(&cap.to_big().floor().to_integer()).unwrap_or(usize::MAX);
        target = target.min(floor);
    }
    best_packing(g, terminals, caps, &walks, target, clock)
}

/// Maximum integer multiflow in the double cover for the commodity graph
/// `H_T`, by exhaustive search over systems of paths between commodity
/// pairs.
pub fn max_multiflow_exhaustive<S: Scalar>(dc: &DoubleCover<S>, budget: &OracleBudget) -> Result<Packing<S>> {
    budget.check(dc.base())?;
    let cover = dc.cover();
    let caps = integer_caps(cover)?;
    let g = cover.graph();
    let mut clock = Clock::new(budget);
    let pairs = |a: VertexId, b: VertexId| dc.is_commodity_pair(a, b);
    let walks = enumerate_walks(
        g,
        &caps,
        &pairs,
        cover.terminals(),
        1,
        true,
        ParityFilter::Any,
        &mut clock,
    )?;
    // Half the sum, over terminals x, of the cut separating x from its
    // commodity partners.
    let mut sum = S::zero();
    for &x in cover.terminals() {
        let partners: BTreeSet<VertexId> = cover
            .terminals()
            .iter()
            .copied()
            .filter(|&y| dc.is_commodity_pair(x, y))
            .collect();
        if partners.is_empty() {
            continue;
        }
        sum = sum + max_flow_min_cut(g, cover.caps(), &[x].into(), &partners)?.value;
    }
    let target = num_traits::ToPrimitive::to_usize(&sum.half().to_big().floor().to_integer()).unwrap_or(usize::MAX);
    best_packing(g, cover.terminals(), caps, &walks, target, clock)
}

/// Outcome of checking a packing against a barrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyReport<S> {
    pub value: S,
    pub capacity: S,
    pub violations: Vec<Violation<S>>,
    pub failures: Vec<String>,
}

impl<S: Scalar> CertifyReport<S> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `capacity - value`.
    pub fn gap(&self) -> S {
        self.capacity.clone() - self.value.clone()
    }
}

/// Checks feasibility of an odd T-walk packing, validity of a barrier, and
/// equality of value and capacity. Every failure is listed.
pub fn certify<S: Scalar>(n: &Network<S>, packing: &Packing<S>, barrier: &Barrier) -> Result<CertifyReport<S>> {
    let mut failures = Vec::new();
    let check = validate_packing(n, packing)?;
    for v in &check.violations {
        failures.push(format!(
            "edge {} carries load {} above capacity {}",
            n.graph().edge(v.edge).name,
            v.load,
            v.cap
        ));
    }
    for &i in &check.bad_weights {
        failures.push(format!("item {i} has a non-positive weight"));
    }
    for (i, item) in packing.items.iter().enumerate() {
        if !item.walk.is_odd() || !item.walk.is_t_walk(n.terminals()) {
            failures.push(format!("item {i} is not an odd T-walk"));
        }
    }
    match barrier_check(n, barrier) {
        Ok(true) => {}
        Ok(false) => failures.push("barrier contains an odd T-walk".into()),
        Err(e) => failures.push(format!("barrier is malformed: {e}")),
    }
    let capacity = barrier_capacity(n, barrier);
    if check.value != capacity {
        failures.push(format!(
            "value {} differs from barrier capacity {}",
            check.value, capacity
        ));
    }
    Ok(CertifyReport {
        value: check.value,
        capacity,
        violations: check.violations,
        failures,
    })
}
