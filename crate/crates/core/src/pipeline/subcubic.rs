//! Subcubization: splitting inner vertices of degree at least 4.

use std::collections::BTreeSet;

use crate::error::{ensure, Error, Result};
use crate::graph::{EdgeId, VertexId};
use crate::valence::{is_alternating, is_inner_balanced, Sign, SignedValenceNetwork, VStep, Valence, ValenceTrail};

use super::{Lineage, TraceStep};

/// `Σ_{v ∉ T} max(0, deg v - 3)`.
pub fn supercubicity(svn: &SignedValenceNetwork) -> usize {
    svn.non_terminals().map(|v| svn.degree(v).saturating_sub(3)).sum()
}

/// Two valencies at a vertex used consecutively by a trail, or paired
/// because neither is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransitPair {
    pub a: Valence,
    pub b: Valence,
    /// `(trail, position of the step entering the vertex)`.
    pub pass: Option<(usize, usize)>,
}

impl TransitPair {
    /// Underlying edges as an ordered pair.
    pub fn edges(&self) -> (EdgeId, EdgeId) {
        let (x, y) = (self.a.edge(), self.b.edge());
        (x.min(y), x.max(y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitPlan {
    pub vertex: VertexId,
    pub pairs: Vec<TransitPair>,
}

/// Transit pairs at `v`: trail passes in trail order, then unused valencies
/// paired `+` with `-` in valence-id order.
pub fn transit_plan(svn: &SignedValenceNetwork, witness: &[ValenceTrail], v: VertexId) -> Result<TransitPlan> {
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for (t, w) in witness.iter().enumerate() {
        ensure!(
            w.start() != v && w.end() != v,
            "a witness trail ends at an inner vertex"
        );
        for i in 0..w.len() - 1 {
            if w.steps[i].to == v {
                let (a, b) = (w.steps[i].valence, w.steps[i + 1].valence);
                ensure!(
                    svn.sign(a) != svn.sign(b),
                    "a trail passes a vertex without alternating"
                );
                used.insert(a);
                used.insert(b);
                pairs.push(TransitPair {
                    a,
                    b,
                    pass: Some((t, i)),
                });
            }
        }
    }
    let free: Vec<Valence> = svn.valencies_at(v).into_iter().filter(|x| !used.contains(x)).collect();
    let plus: Vec<Valence> = free.iter().copied().filter(|&x| svn.sign(x) == Sign::Plus).collect();
    let minus: Vec<Valence> = free.iter().copied().filter(|&x| svn.sign(x) == Sign::Minus).collect();
    ensure!(
        plus.len() == minus.len(),
        "unused valencies at an inner vertex are unbalanced"
    );
    pairs.extend(
        plus.into_iter()
            .zip(minus)
            .map(|(a, b)| TransitPair { a, b, pass: None }),
    );
    ensure!(
        pairs.len() == svn.degree(v),
        "transit pair count differs from the degree"
    );
    Ok(TransitPlan { vertex: v, pairs })
}

/// Replaces `v` by `u – m – w`, moving the edges of `L` to `u` and the rest
/// to `w`, and reroutes the (zero or two) witness trails whose transit pair
/// is split through the new edges.
pub fn subcubize_step(
    svn: &mut SignedValenceNetwork,
    witness: &mut [ValenceTrail],
    v: VertexId,
    lineage: &mut Lineage,
) -> Result<TraceStep> {
    let d = svn.degree(v);
    if svn.is_terminal(v) || d < 4 {
        return Err(Error::Precondition(
            "subcubization needs an inner vertex of degree at least 4".into(),
        ));
    }
    let before = supercubicity(svn);
    let plan = transit_plan(svn, witness, v)?;
    let incident = svn.incident(v);
    let left: BTreeSet<EdgeId> = match plan.pairs.iter().map(TransitPair::edges).filter(|(x, y)| x != y).min() {
        Some((x, y)) => [x, y].into(),
        None => incident[..2].iter().copied().collect(),
    };
    let right: BTreeSet<EdgeId> = incident.iter().copied().filter(|e| !left.contains(e)).collect();
    ensure!(
        left.len() >= 2 && right.len() >= 2,
        "no balanced L/R partition at a vertex of degree {d}"
    );
    let split: Vec<TransitPair> = plan
        .pairs
        .iter()
        .copied()
        .filter(|p| left.contains(&p.a.edge()) != left.contains(&p.b.edge()))
        .collect();
    ensure!(
        split.len() == 0 || split.len() == 2,
        "{} split transit pairs",
        split.len()
    );

    let name = svn.vertex_names[v.0].clone();
    let origin = lineage.vertex_origin[v.0];
    let u = svn.add_vertex(format!("{name}.u"));
    let m = svn.add_vertex(format!("{name}.m"));
    let w = svn.add_vertex(format!("{name}.w"));
    lineage.vertex_origin.extend([origin; 3]);
    for &e in &incident {
        let to = if left.contains(&e) { u } else { w };
        for end in svn.edges[e.0].ends.iter_mut() {
            if *end == v {
                *end = to;
            }
        }
    }
    let (mut f_signs, mut g_signs) = ([Sign::Plus, Sign::Minus], [Sign::Plus, Sign::Minus]);
    for (k, p) in split.iter().enumerate() {
        let l = if left.contains(&p.a.edge()) { p.a } else { p.b };
        f_signs[k] = svn.sign(l).flip();
        g_signs[k] = svn.sign(l);
    }
    let f = svn.add_edge(format!("{name}.um"), u, m, f_signs);
    let g = svn.add_edge(format!("{name}.mw"), m, w, g_signs);
    lineage.edge_origin.extend([None, None]);

    let side = |e: EdgeId| if left.contains(&e) { u } else { w };
    for t in witness.iter_mut() {
        for s in t.steps.iter_mut() {
            if s.from == v {
                s.from = side(s.valence.edge());
            }
            if s.to == v {
                s.to = side(s.valence.edge());
            }
        }
    }
    let mut inserts: Vec<(usize, usize, usize)> = split
        .iter()
        .enumerate()
        .filter_map(|(k, p)| p.pass.map(|(t, i)| (t, i, k)))
        .collect();
    inserts.sort_by(|a, b| b.cmp(a));
    for (t, i, k) in inserts {
        let (fv, gv) = (Valence::of(f, k), Valence::of(g, k));
        let prev_left = left.contains(&witness[t].steps[i].valence.edge());
        let extra = if prev_left {
            [
                VStep {
                    valence: fv,
                    from: u,
                    to: m,
                },
                VStep {
                    valence: gv,
                    from: m,
                    to: w,
                },
            ]
        } else {
            [
                VStep {
                    valence: gv,
                    from: w,
                    to: m,
                },
                VStep {
                    valence: fv,
                    from: m,
                    to: u,
                },
            ]
        };
        witness[t].steps.splice(i + 1..i + 1, extra);
    }

    let after = supercubicity(svn);
    ensure!(after + 1 == before, "supercubicity went from {before} to {after}");
    ensure!(is_inner_balanced(svn), "subcubization broke inner balance");
    for t in witness.iter() {
        svn.check_trail(t)?;
        ensure!(is_alternating(svn, t), "subcubization broke alternation");
    }
    let names = |s: &BTreeSet<EdgeId>| s.iter().map(|e| svn.edges[e.0].name.clone()).collect();
    Ok(TraceStep::Subcubize {
        vertex: name,
        u: svn.vertex_names[u.0].clone(),
        m: svn.vertex_names[m.0].clone(),
        w: svn.vertex_names[w.0].clone(),
        left: names(&left),
        right: names(&right),
        split_pairs: split.len(),
        supercubicity_before: before,
        supercubicity_after: after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Multigraph;
    use crate::valence::{Tightness, VStep};

    /// Inner vertex `v` joined to terminals `a, b, c, d`; signs make `v`
    /// balanced.
    fn cross() -> (SignedValenceNetwork, Lineage) {
        let mut g = Multigraph::new();
        let v = g.add_vertex("v");
        for (i, n) in ["a", "b", "c", "d"].iter().enumerate() {
            let t = g.add_vertex(*n);
            g.add_edge(format!("e{}", i + 1), v, t).unwrap();
        }
        let terms = (1..=4).map(VertexId).collect();
        let mut svn = SignedValenceNetwork::from_graph(&g, terms);
        for e in 0..4 {
            svn.signs[2 * e + 1] = Sign::Minus;
        }
        svn.tightness = Some(Tightness { p: 0, q: 0 });
        let lineage = Lineage {
            vertex_origin: g.vertices().collect(),
            edge_origin: g.edge_ids().map(Some).collect(),
        };
        (svn, lineage)
    }

    fn st(x: usize, from: usize, to: usize) -> VStep {
        VStep {
            valence: Valence(x),
            from: VertexId(from),
            to: VertexId(to),
        }
    }

    #[test]
    fn supercubicity_examples() {
        let (svn, _) = cross();
        assert_eq!(supercubicity(&svn), 1);
        let mut g = Multigraph::new();
        let a = g.add_vertex("a");
        let b = g.add_vertex("b");
        for i in 0..5 {
            g.add_edge(format!("p{i}"), a, b).unwrap();
        }
        let svn = SignedValenceNetwork::from_graph(&g, BTreeSet::new());
        assert_eq!(supercubicity(&svn), 4);
    }

    #[test]
    fn split_pairs_are_rerouted() {
        let (mut svn, mut lineage) = cross();
        // a→v→c on (e1+, e3-), b→v→a on (e2+, e1-), d→v→c on (e4-, e3+).
        let mut witness = vec![
            ValenceTrail::new(vec![st(0, 1, 0), st(5, 0, 3)]),
            ValenceTrail::new(vec![st(2, 2, 0), st(1, 0, 1)]),
            ValenceTrail::new(vec![st(7, 4, 0), st(4, 0, 3)]),
        ];
        let step = subcubize_step(&mut svn, &mut witness, VertexId(0), &mut lineage).unwrap();
        match step {
            TraceStep::Subcubize {
                left,
                split_pairs,
                supercubicity_after,
                ..
            } => {
                assert_eq!(left, vec!["e1".to_string(), "e2".to_string()]);
                assert_eq!(split_pairs, 2);
                assert_eq!(supercubicity_after, 0);
            }
            _ => unreachable!(),
        }
        let lens: Vec<usize> = witness.iter().map(ValenceTrail::len).collect();
        assert_eq!(lens, vec![4, 2, 2]);
        let degs: Vec<usize> = (5..8).map(|x| svn.degree(VertexId(x))).collect();
        assert_eq!(degs, vec![3, 2, 3]);
    }

    #[test]
    fn unused_valencies_give_no_split() {
        let (mut svn, mut lineage) = cross();
        let mut witness: Vec<ValenceTrail> = vec![];
        let step = subcubize_step(&mut svn, &mut witness, VertexId(0), &mut lineage).unwrap();
        assert!(matches!(step, TraceStep::Subcubize { split_pairs: 0, .. }));
        let f = svn.edges.len() - 2;
        assert_eq!(svn.signs[2 * f..2 * f + 2], [Sign::Plus, Sign::Minus]);
        assert!(is_inner_balanced(&svn));
    }
}
