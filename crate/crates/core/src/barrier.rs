//! Odd T-walk barriers, slices, certificate conversions and the maximum odd
//! T-walk packing.

use std::collections::{BTreeMap, BTreeSet};

use crate::cover::{build_double_cover, project_packing, symmetrize, DoubleCover};
use crate::error::{ensure, Error, Result};
use crate::graph::{validate_packing, EdgeId, Multigraph, Network, Packing, VertexId};
use crate::multiflow::{max_multiflow_fractional, ProperPartition};
use crate::scalar::Scalar;

/// A subgraph `B` of `G` with `T ⊆ V(B)` and `E(B) ⊆ γ(V(B))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Barrier {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

/// A connected component of a subgraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
    /// Side (0 or 1) of every vertex when the component is bipartite.
    pub sides: Option<BTreeMap<VertexId, u8>>,
}

impl Barrier {
    pub fn new(g: &Multigraph, vertices: BTreeSet<VertexId>, edges: BTreeSet<EdgeId>) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| v.0 >= g.vertex_count()) {
            return Err(Error::Input(format!("unknown vertex {v}")));
        }
        for &e in &edges {
            let edge = g.get_edge(e).ok_or(Error::UnknownEdge(e.0))?;
            if !vertices.contains(&edge.u) || !vertices.contains(&edge.v) {
                return Err(Error::Input(format!("edge {} leaves the subgraph", edge.name)));
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn whole(g: &Multigraph) -> Self {
        Self {
            vertices: g.vertices().collect(),
            edges: g.edge_ids().collect(),
        }
    }

    /// Edges with exactly one endpoint in `V(B)`.
    pub fn i_edges(&self, g: &Multigraph) -> Vec<EdgeId> {
        g.edge_ids()
            .filter(|&e| {
                let edge = g.edge(e);
                self.vertices.contains(&edge.u) != self.vertices.contains(&edge.v)
            })
            .collect()
    }

    /// Edges with both endpoints in `V(B)` that are not in `E(B)`.
    pub fn u_edges(&self, g: &Multigraph) -> Vec<EdgeId> {
        g.edge_ids()
            .filter(|&e| {
                let edge = g.edge(e);
                self.vertices.contains(&edge.u) && self.vertices.contains(&edge.v) && !self.edges.contains(&e)
            })
            .collect()
    }

    pub fn components(&self, g: &Multigraph) -> Vec<Component> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for &s in &self.vertices {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = Component {
                vertices: [s].into(),
                edges: BTreeSet::new(),
                sides: None,
            };
            let mut side: BTreeMap<VertexId, u8> = [(s, 0)].into();
            let mut bipartite = true;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &e in g.incident(x) {
                    if !self.edges.contains(&e) {
                        continue;
                    }
                    comp.edges.insert(e);
                    let y = g.edge(e).other(x).expect("incident");
                    match side.get(&y) {
                        Some(&sy) => bipartite &= sy != side[&x],
                        None => {
                            side.insert(y, 1 - side[&x]);
                            seen.insert(y);
                            comp.vertices.insert(y);
                            stack.push(y);
                        }
                    }
                }
            }
            if bipartite {
                comp.sides = Some(side);
            }
            out.push(comp);
        }
        out
    }
}

/// Every component of `B` is terminal-free, has a single terminal, or is
/// bipartite with all its terminals on one side. This is equivalent to `B`
/// containing no odd T-walk.
pub fn barrier_check<S: Scalar>(n: &Network<S>, b: &Barrier) -> Result<bool> {
    if let Some(t) = n.terminals().iter().find(|t| !b.vertices.contains(t)) {
        return Err(Error::Precondition(format!(
            "terminal {} is outside the subgraph",
            n.graph().vertex_name(*t)
        )));
    }
    Ok(b.components(n.graph()).iter().all(|c| component_ok(n, c)))
}

fn component_ok<S: Scalar>(n: &Network<S>, c: &Component) -> bool {
    let ts: Vec<VertexId> = c.vertices.iter().copied().filter(|v| n.is_terminal(*v)).collect();
    if ts.len() <= 1 {
        return true;
    }
    match &c.sides {
        Some(side) => ts.iter().all(|t| side[t] == side[&ts[0]]),
        None => false,
    }
}

/// `½ cap(I(B)) + cap(U(B))`.
pub fn barrier_capacity<S: Scalar>(n: &Network<S>, b: &Barrier) -> S {
    let g = n.graph();
    n.cap_sum(b.i_edges(g)).half() + n.cap_sum(b.u_edges(g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceValue {
    Zero,
    Half,
    One,
}

/// Edge weighting `1` on `U(H)`, `½` on `I(H)`, `0` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub values: Vec<SliceValue>,
}

impl Slice {
    /// Scalar product with a capacity vector.
    pub fn dot<S: Scalar>(&self, cap: &[S]) -> S {
        self.values.iter().zip(cap).fold(S::zero(), |acc, (v, c)| match v {
            SliceValue::Zero => acc,
            SliceValue::Half => acc + c.half(),
            SliceValue::One => acc + c.clone(),
        })
    }

    /// Entrywise sum as rationals with denominator 2 (numerators returned).
    pub fn doubled(&self) -> Vec<u32> {
        self.values
            .iter()
            .map(|v| match v {
                SliceValue::Zero => 0,
                SliceValue::Half => 1,
                SliceValue::One => 2,
            })
            .collect()
    }
}

pub fn slice<S: Scalar>(n: &Network<S>, h: &Barrier) -> Slice {
    let g = n.graph();
    let mut values = vec![SliceValue::Zero; g.edge_count()];
    for e in h.i_edges(g) {
        values[e.0] = SliceValue::Half;
    }
    for e in h.u_edges(g) {
        values[e.0] = SliceValue::One;
    }
    Slice { values }
}

/// Drops terminal-free components; this never increases the capacity.
pub fn normalize_barrier<S: Scalar>(n: &Network<S>, b: &Barrier) -> Barrier {
    let mut out = Barrier {
        vertices: BTreeSet::new(),
        edges: BTreeSet::new(),
    };
    for c in b.components(n.graph()) {
        if c.vertices.iter().any(|v| n.is_terminal(*v)) {
            out.vertices.extend(c.vertices);
            out.edges.extend(c.edges);
        }
    }
    out
}

/// Barrier built from a normalized proper partition: the induced subgraph
/// on the preimage of each singular cut, and for each pair `(X, X')` with
/// `X ⊆ T` and cut `Y = L ⊔ R'`, the bipartite subgraph between `L` and `R`.
pub fn partition_to_barrier<S: Scalar>(dc: &DoubleCover<S>, x: &ProperPartition<S>) -> Result<Barrier> {
    let base = dc.base();
    let g = base.graph();
    let non_normal = |why: &str| Error::Precondition(format!("partition is not normalized: {why}"));
    let mut vertices = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let claim = |vs: &BTreeSet<VertexId>, vertices: &mut BTreeSet<VertexId>| -> Result<()> {
        if !vertices.is_disjoint(vs) {
            return Err(non_normal("cut preimages overlap"));
        }
        vertices.extend(vs.iter().copied());
        Ok(())
    };
    for part in &x.parts {
        let has_plain = part.terminals.iter().any(|&t| !dc.is_primed(t));
        let has_primed = part.terminals.iter().any(|&t| dc.is_primed(t));
        if has_plain && has_primed {
            if part.cut.iter().any(|&v| !part.cut.contains(&dc.prime(v))) {
                return Err(non_normal("singular cut is not self-symmetric"));
            }
            let c: BTreeSet<VertexId> = part.cut.iter().filter(|&&v| !dc.is_primed(v)).copied().collect();
            claim(&c, &mut vertices)?;
            for e in g.edge_ids() {
                let edge = g.edge(e);
                if c.contains(&edge.u) && c.contains(&edge.v) {
                    edges.insert(e);
                }
            }
        } else if has_plain {
            let mirror: BTreeSet<VertexId> = part.terminals.iter().map(|&t| dc.prime(t)).collect();
            let partner = x.parts.iter().find(|p| p.terminals == mirror);
            match partner {
                Some(p) if p.cut == part.cut.iter().map(|&v| dc.prime(v)).collect() => {}
                _ => return Err(non_normal("pair part without a mirrored partner")),
            }
            let l: BTreeSet<VertexId> = part.cut.iter().filter(|&&v| !dc.is_primed(v)).copied().collect();
            let r: BTreeSet<VertexId> = part
                .cut
                .iter()
                .filter(|&&v| dc.is_primed(v))
                .map(|&v| dc.base_vertex(v))
                .collect();
            if !l.is_disjoint(&r) {
                return Err(non_normal("pair cut meets its mirror"));
            }
            claim(&l, &mut vertices)?;
            claim(&r, &mut vertices)?;
            for e in g.edge_ids() {
                let edge = g.edge(e);
                if (l.contains(&edge.u) && r.contains(&edge.v)) || (r.contains(&edge.u) && l.contains(&edge.v)) {
                    edges.insert(e);
                }
            }
        }
    }
    let b = normalize_barrier(base, &Barrier { vertices, edges });
    ensure!(
        barrier_check(base, &b)?,
        "partition produced a subgraph with an odd T-walk"
    );
    ensure!(
        barrier_capacity(base, &b) <= x.cut_capacity(dc),
        "barrier capacity {} exceeds partition capacity {}",
        barrier_capacity(base, &b),
        x.cut_capacity(dc)
    );
    Ok(b)
}

/// Proper partition read off a barrier: terminal-free components give
/// nothing, a single-terminal component `C` gives `{t, t'}`, and a bipartite
/// component with terminals `X` on side `L` gives the pair `(X, X')`. Cuts
/// are then tightened to minimal minimum cuts.
pub fn barrier_to_partition<S: Scalar>(dc: &DoubleCover<S>, b: &Barrier) -> Result<ProperPartition<S>> {
    let base = dc.base();
    if !barrier_check(base, b)? {
        return Err(Error::Precondition("subgraph contains an odd T-walk".into()));
    }
    let mut parts = Vec::new();
    for c in b.components(base.graph()) {
        let ts: Vec<VertexId> = c.vertices.iter().copied().filter(|v| base.is_terminal(*v)).collect();
        match ts.len() {
            0 => {}
            1 => parts.push([ts[0], dc.prime(ts[0])].into_iter().collect()),
            _ => {
                parts.push(ts.iter().copied().collect());
                parts.push(ts.iter().map(|&t| dc.prime(t)).collect());
            }
        }
    }
    let x = crate::multiflow::partition_with_min_cuts(dc, parts)?;
    ensure!(
        x.capacity <= barrier_capacity(base, b),
        "partition capacity {} exceeds barrier capacity {}",
        x.capacity,
        barrier_capacity(base, b)
    );
    Ok(x)
}

/// Maximum fractional odd T-walk packing with a minimum barrier of equal
/// capacity.
pub fn max_odd_walk_packing<S: Scalar>(n: &Network<S>) -> Result<(Packing<S>, Barrier)> {
    if n.terminals().len() < 2 {
        return Ok((Packing::new(), normalize_barrier(n, &Barrier::whole(n.graph()))));
    }
    let dc = build_double_cover(n);
    let flow = max_multiflow_fractional(&dc)?;
    let sym = symmetrize(&dc, &flow.packing);
    let packing = project_packing(&dc, &sym)?.merged();
    let barrier = partition_to_barrier(&dc, &flow.certificate)?;
    let check = validate_packing(n, &packing)?;
    ensure!(
        check.is_feasible(),
        "projected packing violates capacities: {:?}",
        check.violations
    );
    ensure!(
        packing
            .items
            .iter()
            .all(|i| i.walk.is_odd() && i.walk.is_t_walk(n.terminals())),
        "projected packing contains a walk that is not an odd T-walk"
    );
    ensure!(
        packing.value() == barrier_capacity(n, &barrier),
        "packing value {} differs from barrier capacity {}",
        packing.value(),
        barrier_capacity(n, &barrier)
    );
    Ok((packing, barrier))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityCondition {
    /// Capacities are not all even integers; nothing is implied.
    None,
    /// Even integer capacities: the optimum is an integer.
    Integer,
    /// Additionally `cap(δ(v)) ≡ 0 (mod 4)` at non-terminals: the optimum is
    /// an even integer.
    EvenInteger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub condition: ParityCondition,
    pub holds: bool,
}

pub fn parity_condition<S: Scalar>(n: &Network<S>) -> ParityCondition {
    if !n.has_even_integer_caps() {
        return ParityCondition::None;
    }
    let four = S::from_int(4);
    let mod4 = n.non_terminals().all(|v| (n.cap_delta(v) / four.clone()).is_integral());
    if mod4 {
        ParityCondition::EvenInteger
    } else {
        ParityCondition::Integer
    }
}

pub fn value_parity_check<S: Scalar>(n: &Network<S>, value: &S) -> ParityReport {
    let condition = parity_condition(n);
    let holds = match condition {
        ParityCondition::None => true,
        ParityCondition::Integer => value.is_integral(),
        ParityCondition::EvenInteger => value.half().is_integral(),
    };
    ParityReport { condition, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::multiflow::{min_proper_partition, PartitionPart};
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn sub(g: &Multigraph, vs: &[&str], es: &[&str]) -> Barrier {
        Barrier::new(
            g,
            vs.iter().map(|v| g.vertex_by_name(v).unwrap()).collect(),
            es.iter().map(|e| g.edge_by_name(e).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn barrier_check_examples() {
        let i2 = fixtures::i2();
        assert!(barrier_check(&i2, &Barrier::whole(i2.graph())).unwrap());
        let i3 = fixtures::i3();
        assert!(!barrier_check(&i3, &Barrier::whole(i3.graph())).unwrap());
        assert!(barrier_check(&i3, &sub(i3.graph(), &["s", "t", "u"], &["su", "ut"])).unwrap());
        assert!(barrier_check(&i3, &sub(i3.graph(), &["s", "u"], &["su"])).is_err());
    }

    #[test]
    fn capacity_examples() {
        let i2 = fixtures::i2();
        assert_eq!(barrier_capacity(&i2, &Barrier::whole(i2.graph())), q(0));
        let i3 = fixtures::i3();
        let b = sub(i3.graph(), &["s", "t", "u"], &["su", "ut"]);
        assert_eq!(barrier_capacity(&i3, &b), q(2));
        assert_eq!(slice(&i3, &b).dot(i3.caps()), q(2));
        let i1 = fixtures::i1();
        assert_eq!(barrier_capacity(&i1, &sub(i1.graph(), &["s", "t"], &[])), q(2));
    }

    #[test]
    fn slice_examples() {
        let i3 = fixtures::i3();
        let whole = slice(&i3, &Barrier::whole(i3.graph()));
        assert!(whole.values.iter().all(|v| *v == SliceValue::Zero));
        let s = slice(&i3, &sub(i3.graph(), &["s", "t", "u"], &["su", "ut"]));
        assert_eq!(s.values, vec![SliceValue::One, SliceValue::Zero, SliceValue::Zero]);
        let i1 = fixtures::i1();
        let s = slice(&i1, &sub(i1.graph(), &["s"], &[]));
        assert_eq!(s.values, vec![SliceValue::Half]);
    }

    #[test]
    fn odd_walk_examples() {
        let (p, b) = max_odd_walk_packing(&fixtures::i1()).unwrap();
        assert_eq!(p.value(), q(2));
        assert!(p.is_integer());
        assert_eq!(p.len(), 1);
        assert_eq!(b, sub(fixtures::i1().graph(), &["s", "t"], &[]));

        let i2 = fixtures::i2();
        let (p, b) = max_odd_walk_packing(&i2).unwrap();
        assert!(p.is_empty());
        assert_eq!(b, Barrier::whole(i2.graph()));

        let i3 = fixtures::i3();
        let (p, b) = max_odd_walk_packing(&i3).unwrap();
        assert_eq!(p.value(), q(2));
        assert_eq!(barrier_capacity(&i3, &b), q(2));
    }

    #[test]
    fn conversions() {
        let i2 = fixtures::i2();
        let dc2 = build_double_cover(&i2);
        let x = min_proper_partition(&dc2).unwrap();
        let b = partition_to_barrier(&dc2, &x).unwrap();
        assert_eq!(b, Barrier::whole(i2.graph()));
        let back = barrier_to_partition(&dc2, &b).unwrap();
        assert_eq!(back.capacity, q(0));
        assert_eq!(back.parts.len(), 2);

        let i1 = fixtures::i1();
        let dc1 = build_double_cover(&i1);
        let x = min_proper_partition(&dc1).unwrap();
        let b = partition_to_barrier(&dc1, &x).unwrap();
        assert_eq!(barrier_capacity(&i1, &b), q(2));
        let back = barrier_to_partition(&dc1, &b).unwrap();
        assert_eq!(back.capacity, q(2));
        assert_eq!(back.parts.len(), 2);

        let i3 = fixtures::i3();
        let dc3 = build_double_cover(&i3);
        let b = partition_to_barrier(&dc3, &min_proper_partition(&dc3).unwrap()).unwrap();
        assert_eq!(barrier_capacity(&i3, &b), q(2));
    }

    #[test]
    fn redundant_component_gives_no_part() {
        // I1 plus an isolated non-terminal.
        let mut g = fixtures::i1().graph().clone();
        let x = g.add_vertex("x");
        let n = Network::new(g.clone(), fixtures::i1().terminals().clone(), vec![q(2)]).unwrap();
        let dc = build_double_cover(&n);
        let plain = sub(&g, &["s", "t"], &[]);
        let mut with_x = plain.clone();
        with_x.vertices.insert(x);
        let a = barrier_to_partition(&dc, &plain).unwrap();
        let b = barrier_to_partition(&dc, &with_x).unwrap();
        assert_eq!(
            a.parts.iter().map(|p| &p.terminals).collect::<Vec<_>>(),
            b.parts.iter().map(|p| &p.terminals).collect::<Vec<_>>()
        );
        assert_eq!(a.capacity, b.capacity);
    }

    #[test]
    fn parity_examples() {
        let r = value_parity_check(&fixtures::i1(), &q(2));
        assert_eq!(
            r,
            ParityReport {
                condition: ParityCondition::EvenInteger,
                holds: true
            }
        );
        let r = value_parity_check(&fixtures::i3(), &q(2));
        assert_eq!(r.condition, ParityCondition::EvenInteger);
        assert!(r.holds);
        assert!(value_parity_check(&fixtures::i2(), &q(0)).holds);
        assert!(!value_parity_check(&fixtures::i3(), &q(1)).holds);
    }

    #[test]
    fn unused_part_fields_are_consistent() {
        let dc = build_double_cover(&fixtures::i3());
        let x = min_proper_partition(&dc).unwrap();
        let parts: Vec<&PartitionPart> = x.parts.iter().collect();
        assert!(parts.iter().all(|p| !p.cut.is_empty()));
    }
}
