//! Maximum multiflows for the commodity graph `H_T` with proper-partition
//! certificates, and Lovász–Cherkassky T-trail packings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cover::DoubleCover;
use crate::error::{ensure, Error, Result};
use crate::graph::{is_inner_eulerian, EdgeId, Network, Packing, Step, VertexId, Walk};
use crate::scalar::{self, Scalar};
use crate::splitting::{self, End, Policy, SEdge, SplitGraph};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionPart {
    pub terminals: BTreeSet<VertexId>,
    pub cut: BTreeSet<VertexId>,
}

/// Partition of the cover terminals into anticliques of `H_T`, each part
/// with a cut `X_i ⊆ Y_i ⊆ V - (T̃ - X_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperPartition<S> {
    pub parts: Vec<PartitionPart>,
    pub capacity: S,
}

impl<S: Scalar> ProperPartition<S> {
    /// `½ Σ cap(δ(Y_i))` for the stored cuts.
    pub fn cut_capacity(&self, dc: &DoubleCover<S>) -> S {
        let c = dc.cover();
        let mut total = S::zero();
        for part in &self.parts {
            for e in c.graph().edge_ids() {
                let edge = c.graph().edge(e);
                if part.cut.contains(&edge.u) != part.cut.contains(&edge.v) {
                    total = total + c.cap(e).clone();
                }
            }
        }
        total.half()
    }

    /// Parts are disjoint anticliques covering `T̃` and each cut separates
    /// its part from the other terminals.
    pub fn is_proper(&self, dc: &DoubleCover<S>) -> bool {
        let tt = dc.cover().terminals();
        let mut seen = BTreeSet::new();
        for part in &self.parts {
            if part.terminals.is_empty() {
                return false;
            }
            for &x in &part.terminals {
                if !tt.contains(&x) || !seen.insert(x) || !part.cut.contains(&x) {
                    return false;
                }
                for &y in &part.terminals {
                    if dc.is_commodity_pair(x, y) {
                        return false;
                    }
                }
            }
            if part.cut.iter().any(|v| tt.contains(v) && !part.terminals.contains(v)) {
                return false;
            }
        }
        seen.len() == tt.len()
    }

    /// Parts with two elements `{t, t'}`.
    pub fn singular_parts(&self, dc: &DoubleCover<S>) -> impl Iterator<Item = &PartitionPart> + '_ {
        let dc_n = dc.base_vertex_count();
        self.parts.iter().filter(move |p| {
            let v: Vec<_> = p.terminals.iter().collect();
            v.len() == 2 && v[0].0 + dc_n == v[1].0
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiflowResult<S> {
    /// Walks in the cover joining edges of `H_T`.
    pub packing: Packing<S>,
    pub certificate: ProperPartition<S>,
}

/// Candidate non-singular parts `S ⊆ T`: the empty set (all parts
/// singular) first, then every `S` with `|S| ≥ 2` in lexicographic order.
fn candidates(terms: &[usize]) -> Vec<Vec<usize>> {
    let k = terms.len();
    let mut out: Vec<Vec<usize>> = (0u32..(1 << k))
        .filter(|m| m.count_ones() >= 2)
        .map(|m| (0..k).filter(|i| m & (1 << i) != 0).map(|i| terms[i]).collect())
        .collect();
    out.sort();
    out.insert(0, Vec::new());
    out
}

struct Evaluation {
    two_mu: i64,
    best: Vec<usize>,
}

/// Minimises `Σ_{t ∉ S} λ({t, t'}) + λ(S) + λ(S')` over the candidate shapes.
/// `lambda(sources, sinks)` evaluates a cut in the cover numbering.
fn evaluate(nv: usize, n: usize, terms: &[usize], lambda: &dyn Fn(&[bool], &[bool]) -> i64) -> Evaluation {
    let mut all = vec![false; nv];
    for &t in terms {
        all[t] = true;
        all[t + n] = true;
    }
    let split = |src: &[usize]| {
        let mut s = vec![false; nv];
        for &x in src {
            s[x] = true;
        }
        let sinks: Vec<bool> = (0..nv).map(|v| all[v] && !s[v]).collect();
        (s, sinks)
    };
    let singular: Vec<i64> = terms
        .iter()
        .map(|&t| {
            let (s, k) = split(&[t, t + n]);
            lambda(&s, &k)
        })
        .collect();
    let mut best: Option<Evaluation> = None;
    for cand in candidates(terms) {
        let mut value: i64 = terms
            .iter()
            .zip(&singular)
            .filter(|(t, _)| !cand.contains(t))
            .map(|(_, l)| *l)
            .sum();
        if !cand.is_empty() {
            // Splits break the cover symmetry, so both halves are cut.
            let (s, k) = split(&cand);
            let primed: Vec<usize> = cand.iter().map(|&t| t + n).collect();
            let (s2, k2) = split(&primed);
            value += lambda(&s, &k) + lambda(&s2, &k2);
        }
        if best.as_ref().map_or(true, |b| value < b.two_mu) {
            best = Some(Evaluation {
                two_mu: value,
                best: cand,
            });
        }
    }
    best.unwrap_or(Evaluation {
        two_mu: 0,
        best: Vec::new(),
    })
}

fn cover_edges_i64<S: Scalar>(dc: &DoubleCover<S>) -> Result<(BigInt, Vec<(usize, usize, i64)>)> {
    let c = dc.cover();
    let d = scalar::common_denominator(c.caps());
    let ints = scalar::scaled_to_i64(c.caps(), &d)
        .ok_or_else(|| Error::Precondition("scaled capacities do not fit in 64 bits".into()))?;
    let edges = c
        .graph()
        .edges()
        .iter()
        .zip(ints)
        .map(|(e, k)| (e.u.0, e.v.0, k))
        .collect();
    Ok((d, edges))
}

fn terminal_indices<S: Scalar>(dc: &DoubleCover<S>) -> Vec<usize> {
    dc.base().terminals().iter().map(|t| t.0).collect()
}

/// Minimum-capacity proper partition made of singular
/// parts `{t, t'}` plus at most one symmetric pair `(S, S')`. Cuts are the
/// inclusion-minimal minimum cuts, which are symmetric and pairwise
/// disjoint; both facts are checked.
pub fn min_proper_partition<S: Scalar>(dc: &DoubleCover<S>) -> Result<ProperPartition<S>> {
    let n = dc.base_vertex_count();
    let nv = 2 * n;
    let terms = terminal_indices(dc);
    let (d, edges) = cover_edges_i64(dc)?;
    let lambda = |s: &[bool], k: &[bool]| crate::flow::min_cut_i64(nv, edges.iter().copied(), s, k).0;
    let ev = evaluate(nv, n, &terms, &lambda);

    let mut all = vec![false; nv];
    for &t in &terms {
        all[t] = true;
        all[t + n] = true;
    }
    let cut_of = |part: &BTreeSet<VertexId>| -> BTreeSet<VertexId> {
        let src: Vec<bool> = (0..nv).map(|v| part.contains(&VertexId(v))).collect();
        let snk: Vec<bool> = (0..nv).map(|v| all[v] && !src[v]).collect();
        let side = crate::flow::min_cut_i64(nv, edges.iter().copied(), &src, &snk).1;
        (0..nv).filter(|&v| side[v]).map(VertexId).collect()
    };
    let mut parts = Vec::new();
    if !ev.best.is_empty() {
        let x: BTreeSet<VertexId> = ev.best.iter().map(|&t| VertexId(t)).collect();
        let xp: BTreeSet<VertexId> = x.iter().map(|&t| dc.prime(t)).collect();
        let y = cut_of(&x);
        let yp = cut_of(&xp);
        let mirrored: BTreeSet<VertexId> = y.iter().map(|&v| dc.prime(v)).collect();
        ensure!(mirrored == yp, "minimal cuts of S and S' are not mirror images");
        parts.push(PartitionPart { terminals: x, cut: y });
        parts.push(PartitionPart { terminals: xp, cut: yp });
    }
    for &t in &terms {
        if ev.best.contains(&t) {
            continue;
        }
        let x: BTreeSet<VertexId> = [VertexId(t), VertexId(t + n)].into_iter().collect();
        let y = cut_of(&x);
        ensure!(
            y.iter().all(|&v| y.contains(&dc.prime(v))),
            "minimal cut of a singular part is not self-symmetric"
        );
        parts.push(PartitionPart { terminals: x, cut: y });
    }
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            ensure!(
                parts[i].cut.is_disjoint(&parts[j].cut),
                "minimal cuts of two parts intersect"
            );
        }
    }
    let capacity = S::from_big(&BigRational::new(BigInt::from(ev.two_mu), d * 2))
        .ok_or_else(|| Error::Precondition("capacity does not fit the scalar type".into()))?;
    let partition = ProperPartition { parts, capacity };
    ensure!(
        partition.cut_capacity(dc) == partition.capacity,
        "partition capacity differs from its cuts"
    );
    Ok(partition)
}

/// Proper partition with the given terminal parts, each paired with its
/// inclusion-minimal minimum cut.
pub fn partition_with_min_cuts<S: Scalar>(
    dc: &DoubleCover<S>,
    parts: Vec<BTreeSet<VertexId>>,
) -> Result<ProperPartition<S>> {
    let nv = 2 * dc.base_vertex_count();
    let (_, edges) = cover_edges_i64(dc)?;
    let tt = dc.cover().terminals();
    let parts: Vec<PartitionPart> = parts
        .into_iter()
        .map(|x| {
            let src: Vec<bool> = (0..nv).map(|v| x.contains(&VertexId(v))).collect();
            let snk: Vec<bool> = (0..nv).map(|v| tt.contains(&VertexId(v)) && !src[v]).collect();
            let side = crate::flow::min_cut_i64(nv, edges.iter().copied(), &src, &snk).1;
            PartitionPart {
                terminals: x,
                cut: (0..nv).filter(|&v| side[v]).map(VertexId).collect(),
            }
        })
        .collect();
    let mut partition = ProperPartition {
        parts,
        capacity: S::zero(),
    };
    partition.capacity = partition.cut_capacity(dc);
    if !partition.is_proper(dc) {
        return Err(Error::Precondition("parts do not form a proper partition".into()));
    }
    Ok(partition)
}

fn two_mu_of(g: &SplitGraph, n: usize, terms: &[usize]) -> i64 {
    evaluate(g.n, n, terms, &|s, k| g.lambda(s, k)).two_mu
}

/// Maximum integer multiflow for `H_T` in a cover with integer capacities
/// and even capacity at every non-terminal.
///
/// Splitting-off is applied while `2μ` stays fixed, first at non-terminals
/// and then at terminals, until the capacity of edges joining `H_T` pairs
/// reaches `μ`. Those edges then expand into the multiflow.
pub fn max_multiflow_integer<S: Scalar>(dc: &DoubleCover<S>) -> Result<MultiflowResult<S>> {
    let c = dc.cover();
    let g = c.graph();
    if let Some(i) = c.caps().iter().position(|x| !x.is_integral()) {
        return Err(Error::Precondition(format!(
            "cover edge {} has non-integer capacity",
            g.edge(EdgeId(i)).name
        )));
    }
    if let Some(v) = c.non_terminals().find(|&v| !c.cap_delta(v).half().is_integral()) {
        return Err(Error::Precondition(format!(
            "cover vertex {} has odd capacity {}",
            g.vertex_name(v),
            c.cap_delta(v)
        )));
    }
    let certificate = min_proper_partition(dc)?;
    let terms = terminal_indices(dc);
    let mut packing = Packing::new();
    if terms.len() >= 2 {
        let (_, edges) = cover_edges_i64(dc)?;
        let n = dc.base_vertex_count();
        let mut sg = SplitGraph::new(2 * n);
        for (i, &(u, v, k)) in edges.iter().enumerate() {
            sg.add_base(u, v, [End::Plain; 2], k, i);
        }
        let is_pair = |e: &SEdge| dc.is_commodity_pair(VertexId(e.ends[0]), VertexId(e.ends[1]));
        let objective = |g: &SplitGraph| two_mu_of(g, n, &terms);
        let done = |g: &SplitGraph, target: i64| {
            2 * g.live().filter(|(_, e)| is_pair(e)).map(|(_, e)| e.cap).sum::<i64>() == target
        };
        let any = |_: &SplitGraph, _, _| true;
        let drop_loops = |_: &SEdge| false;
        let mut order: Vec<usize> = c.non_terminals().map(|v| v.0).collect();
        order.extend(c.terminals().iter().map(|v| v.0));
        let policy = Policy {
            objective: &objective,
            done: &done,
            vertices: order,
            pair_ok: &any,
            keep_loop: &drop_loops,
        };
        splitting::run(&mut sg, &policy)?;
        for (i, e) in sg.live() {
            if is_pair(e) {
                let side = usize::from(dc.is_primed(VertexId(e.ends[0])));
                packing.push(S::from_int(e.cap), walk_of(&sg.expand(i, side)));
            }
        }
        packing = packing.merged();
    }
    ensure!(
        packing.value() == certificate.capacity,
        "multiflow value {} differs from partition capacity {}",
        packing.value(),
        certificate.capacity
    );
    Ok(MultiflowResult { packing, certificate })
}

pub(crate) fn walk_of(steps: &[splitting::BaseStep]) -> Walk {
    Walk::from_steps_unchecked(
        steps
            .iter()
            .map(|&(e, a, b)| Step {
                edge: EdgeId(e),
                from: VertexId(a),
                to: VertexId(b),
            })
            .collect(),
    )
}

/// Maximum multiflow for arbitrary rational capacities: capacities are
/// scaled to integers, doubled if needed for the parity condition, solved
/// integrally and scaled back.
pub fn max_multiflow_fractional<S: Scalar>(dc: &DoubleCover<S>) -> Result<MultiflowResult<S>> {
    let c = dc.cover();
    let d = scalar::common_denominator(c.caps());
    let d = S::from_big(&BigRational::from_integer(d))
        .ok_or_else(|| Error::Precondition("common denominator does not fit the scalar type".into()))?;
    let even = c
        .non_terminals()
        .all(|v| (c.cap_delta(v) * d.clone()).half().is_integral());
    let factor = if even { d } else { d.clone() + d };
    let scaled_base = dc
        .base()
        .with_caps(dc.base().caps().iter().map(|x| x.clone() * factor.clone()).collect())?;
    let scaled = crate::cover::build_double_cover(&scaled_base);
    let r = max_multiflow_integer(&scaled)?;
    let inv = S::one() / factor;
    let packing = r.packing.scaled(&inv);
    let certificate = min_proper_partition(dc)?;
    ensure!(
        packing.value() == certificate.capacity,
        "scaled multiflow value {} differs from partition capacity {}",
        packing.value(),
        certificate.capacity
    );
    Ok(MultiflowResult { packing, certificate })
}

/// `½ Σ_{t ∈ T} λ({t}, T - {t})` for an integer-capacitated network.
pub fn half_terminal_lambda_sum<S: Scalar>(n: &Network<S>) -> Result<S> {
    let sg = split_graph_of(n)?;
    let terms: Vec<usize> = n.terminals().iter().map(|t| t.0).collect();
    Ok(S::from_int(splitting::terminal_lambda_sum(&sg, &terms)).half())
}

fn split_graph_of<S: Scalar>(n: &Network<S>) -> Result<SplitGraph> {
    let g = n.graph();
    let mut sg = SplitGraph::new(g.vertex_count());
    for e in g.edge_ids() {
        let edge = g.edge(e);
        let c = n.cap(e);
        if !c.is_integral() {
            return Err(Error::Precondition(format!(
                "edge {} has non-integer capacity",
                edge.name
            )));
        }
        let k = scalar::scaled_to_i64(std::slice::from_ref(c), &BigInt::from(1))
            .ok_or_else(|| Error::Precondition("capacity does not fit in 64 bits".into()))?[0];
        sg.add_base(edge.u.0, edge.v.0, [End::Plain; 2], k, e.0);
    }
    Ok(sg)
}

/// Maximum T-trail packing of an inner Eulerian unit-capacity network, of
/// value `½ Σ_t λ({t}, T - {t})`, by `λ`-preserving splitting at
/// non-terminals.
pub fn lc_trail_packing<S: Scalar>(n: &Network<S>) -> Result<Packing<S>> {
    if !n.all_caps_equal(&S::one()) {
        return Err(Error::Precondition("all capacities must be 1".into()));
    }
    let terms: Vec<usize> = n.terminals().iter().map(|t| t.0).collect();
    if terms.len() < 2 {
        return Ok(Packing::new());
    }
    if !is_inner_eulerian(n) {
        return Err(Error::Precondition("network is not inner Eulerian".into()));
    }
    let mut sg = split_graph_of(n)?;
    let inner: Vec<usize> = n.non_terminals().map(|v| v.0).collect();
    let objective = |g: &SplitGraph| splitting::terminal_lambda_sum(g, &terms);
    let done = |g: &SplitGraph, _| inner.iter().all(|&v| !g.has_live_edge_at(v));
    let any = |_: &SplitGraph, _, _| true;
    let drop_loops = |_: &SEdge| false;
    let policy = Policy {
        objective: &objective,
        done: &done,
        vertices: inner.clone(),
        pair_ok: &any,
        keep_loop: &drop_loops,
    };
    let stats = splitting::run(&mut sg, &policy)?;
    let mut p = Packing::new();
    for (i, e) in sg.live() {
        if !e.is_loop() {
            for _ in 0..e.cap {
                p.push(S::one(), walk_of(&sg.expand(i, 0)));
            }
        }
    }
    ensure!(
        2 * p.len() as i64 == stats.objective,
        "trail packing has {} trails, expected {}/2",
        p.len(),
        stats.objective
    );
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_double_cover, project_packing};
    use crate::fixtures;
    use crate::graph::validate_packing;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn scaled(net: &Network<Rational>, f: i64) -> Network<Rational> {
        net.with_caps(net.caps().iter().map(|c| c * q(f)).collect()).unwrap()
    }

    #[test]
    fn partition_examples() {
        let dc1 = build_double_cover(&fixtures::i1());
        let p1 = min_proper_partition(&dc1).unwrap();
        assert_eq!(p1.capacity, q(2));
        assert_eq!(p1.parts.len(), 2);
        assert!(p1.is_proper(&dc1));

        let dc2 = build_double_cover(&fixtures::i2());
        let p2 = min_proper_partition(&dc2).unwrap();
        assert_eq!(p2.capacity, q(0));
        let g = dc2.cover().graph();
        let names: BTreeSet<&str> = p2.parts[0].cut.iter().map(|&v| g.vertex_name(v)).collect();
        assert_eq!(names, ["s", "t", "v'"].into_iter().collect());

        let dc3 = build_double_cover(&fixtures::i3());
        assert_eq!(min_proper_partition(&dc3).unwrap().capacity, q(2));
    }

    #[test]
    fn integer_multiflow_examples() {
        let dc1 = build_double_cover(&scaled(&fixtures::i1(), 2));
        let r = max_multiflow_integer(&dc1).unwrap();
        assert_eq!(r.packing.value(), q(4));
        assert!(r.packing.is_integer());
        assert!(validate_packing(dc1.cover(), &r.packing).unwrap().is_feasible());

        let dc2 = build_double_cover(&scaled(&fixtures::i2(), 2));
        let r = max_multiflow_integer(&dc2).unwrap();
        assert!(r.packing.is_empty());
        assert_eq!(r.certificate.capacity, q(0));

        let dc3 = build_double_cover(&fixtures::i3());
        let r = max_multiflow_integer(&dc3).unwrap();
        assert_eq!(r.packing.value(), q(2));
        assert!(project_packing(&dc3, &r.packing).is_ok());
    }

    #[test]
    fn integer_multiflow_checks_parity() {
        let dc = build_double_cover(&scaled(&fixtures::i2(), 1).with_caps(vec![q(2), q(4)]).unwrap());
        // v has cover capacity 1 + 2 = 3.
        assert!(matches!(max_multiflow_integer(&dc), Err(Error::Precondition(_))));
    }

    #[test]
    fn fractional_multiflow_examples() {
        let dc1 = build_double_cover(&fixtures::i1());
        assert_eq!(max_multiflow_fractional(&dc1).unwrap().packing.value(), q(2));
        let dc3 = build_double_cover(&fixtures::i3());
        let r = max_multiflow_fractional(&dc3).unwrap();
        assert_eq!(r.packing.value(), q(2));
        assert!(r.packing.is_half_integer());
        let one = build_double_cover(&fixtures::star(1, 2));
        assert_eq!(max_multiflow_fractional(&one).unwrap().packing.value(), q(0));
    }

    #[test]
    fn lc_examples() {
        let unit = |n: Network<Rational>| scaled(&n, 1).with_caps(vec![q(1); n.graph().edge_count()]).unwrap();
        let i3 = unit(fixtures::i3());
        let p = lc_trail_packing(&i3).unwrap();
        assert_eq!(p.value(), q(2));
        assert!(p
            .items
            .iter()
            .all(|i| i.walk.is_trail() && i.walk.is_t_walk(i3.terminals())));
        assert!(validate_packing(&i3, &p).unwrap().is_feasible());
        assert_eq!(half_terminal_lambda_sum(&i3).unwrap(), q(2));

        let i2 = unit(fixtures::i2());
        assert_eq!(lc_trail_packing(&i2).unwrap().value(), q(1));
        assert!(lc_trail_packing(&unit(fixtures::star(1, 2))).unwrap().is_empty());
        assert!(lc_trail_packing(&fixtures::i3()).is_err());
    }
}
