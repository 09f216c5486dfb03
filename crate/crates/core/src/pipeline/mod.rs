//! Maximum integer packing of odd T-trails in `(G, T, 2)` for inner
//! Eulerian `G`.
//!
//! The stages are: initial signing from a maximum multiflow in the double
//! cover, terminal evacuation, subcubization and regularization. Every stage
//! records what it did in a [`PipelineTrace`], and a [`Lineage`] maps the
//! final trails back to the input network.

mod classify;
mod regularize;
mod subcubic;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::graph::{is_inner_eulerian, odd_inner_vertices, EdgeId, Network, Packing, Step, VertexId, Walk};
use crate::scalar::Scalar;
use crate::valence::{SignedValenceNetwork, ValenceTrail};

pub use classify::{initial_classify, terminal_evacuation, ComponentClassification, Evacuation};
pub use regularize::{apply_case_1_2_3, apply_case_4, classify_case, find_irregular, regularize, Irregular};
pub use subcubic::{subcubize_step, supercubicity, transit_plan, TransitPair, TransitPlan};

/// One audited pipeline step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    Classify {
        p: usize,
        q: usize,
        r: usize,
        e: usize,
    },
    Evacuate {
        terminal: String,
        new_terminal: String,
        added_edges: Vec<String>,
    },
    Subcubize {
        vertex: String,
        u: String,
        m: String,
        w: String,
        left: Vec<String>,
        right: Vec<String>,
        split_pairs: usize,
        supercubicity_before: usize,
        supercubicity_after: usize,
    },
    Regularize {
        case: u8,
        trail: usize,
        edge: String,
        fragment_len: usize,
        /// Edge count and total odd-trail length before the step.
        measure_before: (usize, usize),
        measure_after: (usize, usize),
        removed_edge: Option<String>,
        subcase: Option<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PipelineTrace {
    pub steps: Vec<TraceStep>,
}

/// Where each vertex and edge of the working network came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lineage {
    pub vertex_origin: Vec<VertexId>,
    /// `None` for edges added by evacuation or subcubization.
    pub edge_origin: Vec<Option<EdgeId>>,
}

impl Lineage {
    /// Maps a trail of the working network to a walk of the input graph by
    /// dropping added edges and merging split vertices.
    pub fn map_back<S: Scalar>(&self, n: &Network<S>, w: &ValenceTrail) -> Result<Walk> {
        let steps: Vec<Step> = w
            .steps
            .iter()
            .filter_map(|s| {
                self.edge_origin[s.valence.edge().0].map(|edge| Step {
                    edge,
                    from: self.vertex_origin[s.from.0],
                    to: self.vertex_origin[s.to.0],
                })
            })
            .collect();
        Walk::new(n.graph(), steps)
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput<S> {
    pub packing: Packing<S>,
    pub trace: PipelineTrace,
    pub p: usize,
    pub q: usize,
}

/// `(|E|, Σ length of odd trails)`, the regularization measure.
pub(crate) fn measure(svn: &SignedValenceNetwork, odd: &[ValenceTrail]) -> (usize, usize) {
    (svn.alive_edge_count(), odd.iter().map(ValenceTrail::len).sum())
}

pub(crate) fn check_preconditions<S: Scalar>(n: &Network<S>) -> Result<()> {
    let two = S::from_int(2);
    if let Some(e) = n.graph().edge_ids().find(|&e| *n.cap(e) != two) {
        return Err(Error::Precondition(format!(
            "edge {} has capacity {}, every capacity must be 2",
            n.graph().edge(e).name,
            n.cap(e)
        )));
    }
    if !is_inner_eulerian(n) {
        let names: Vec<&str> = odd_inner_vertices(n)
            .into_iter()
            .map(|v| n.graph().vertex_name(v))
            .collect();
        return Err(Error::Precondition(format!(
            "network is not inner Eulerian: odd degree at {}",
            names.join(", ")
        )));
    }
    Ok(())
}

/// Maximum integer packing of edge-simple odd T-trails in `(G, T, 2)`.
pub fn run_pipeline<S: Scalar>(n: &Network<S>) -> Result<PipelineOutput<S>> {
    check_preconditions(n)?;
    let mut trace = PipelineTrace::default();
    if n.terminals().len() < 2 {
        return Ok(PipelineOutput {
            packing: Packing::new(),
            trace,
            p: 0,
            q: 0,
        });
    }
    let cc = initial_classify(n)?;
    trace.steps.push(TraceStep::Classify {
        p: cc.p.len(),
        q: cc.q.len(),
        r: cc.r.len(),
        e: cc.e.len(),
    });
    let Evacuation {
        mut svn,
        mut odd,
        mut even,
        mut lineage,
        steps,
    } = terminal_evacuation(&cc)?;
    trace.steps.extend(steps);

    loop {
        let Some(v) = svn.non_terminals().find(|&v| svn.degree(v) >= 4) else {
            break;
        };
        let k = odd.len();
        let mut witness: Vec<ValenceTrail> = odd.drain(..).chain(even.drain(..)).collect();
        trace
            .steps
            .push(subcubize_step(&mut svn, &mut witness, v, &mut lineage)?);
        even = witness.split_off(k);
        odd = witness;
    }

    let (p, q) = (cc.p.len(), cc.q.len());
    let final_odd = regularize(&mut svn, odd, even, &mut trace)?;
    ensure!(final_odd.len() >= p, "regularization lost odd trails");

    let mut packing = Packing::new();
    let one = S::from_int(1);
    for w in final_odd.iter().take(p) {
        let walk = lineage.map_back(n, w)?;
        ensure!(walk.is_odd(), "mapped trail is even");
        ensure!(walk.is_trail(), "mapped trail repeats an edge");
        ensure!(
            walk.is_t_walk(n.terminals()),
            "mapped trail does not join two distinct terminals"
        );
        packing.push(one.clone(), walk);
    }
    let packing = packing.merged();
    let check = crate::graph::validate_packing(n, &packing)?;
    ensure!(
        check.is_feasible(),
        "trail packing violates capacities: {:?}",
        check.violations
    );
    ensure!(
        packing.value() == S::from_int(p as i64),
        "trail packing value differs from the multiflow value"
    );
    Ok(PipelineOutput { packing, trace, p, q })
}

/// Odd T-trails of a witness must avoid terminals internally.
pub(crate) fn internal_terminals(svn: &SignedValenceNetwork, w: &ValenceTrail) -> BTreeSet<VertexId> {
    w.steps[..w.len() - 1]
        .iter()
        .map(|s| s.to)
        .filter(|v| svn.is_terminal(*v))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::Rational;

    #[test]
    fn fixture_pipelines() {
        let out = run_pipeline(&fixtures::i1()).unwrap();
        assert_eq!(out.packing.value(), Rational::from_int(2));
        assert_eq!(out.packing.len(), 1);

        let out = run_pipeline(&fixtures::i2()).unwrap();
        assert!(out.packing.is_empty());

        let i3 = fixtures::i3();
        let out = run_pipeline(&i3).unwrap();
        assert_eq!(out.packing.value(), Rational::from_int(2));
        let st = i3.graph().edge_by_name("st").unwrap();
        assert_eq!(out.packing.items.len(), 1);
        assert_eq!(out.packing.items[0].walk.edge_ids().collect::<Vec<_>>(), vec![st]);
    }

    #[test]
    fn star_pipeline() {
        let out = run_pipeline(&fixtures::i4()).unwrap();
        assert!(out.packing.is_empty());
        assert!(out.trace.steps.iter().any(|s| matches!(s, TraceStep::Subcubize { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        let n = fixtures::star(3, 2);
        assert!(matches!(run_pipeline(&n), Err(Error::Precondition(_))));
        let n = fixtures::star(2, 4);
        assert!(matches!(run_pipeline(&n), Err(Error::Precondition(_))));
    }
}
