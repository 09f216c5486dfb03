//! Initial signing: the multiflow in the unit double cover, leftover trail
//! classification and terminal evacuation.

use std::collections::{BTreeMap, BTreeSet};

use crate::cover::build_double_cover;
use crate::error::{ensure, Error, Result};
use crate::flow::eulerian_decompose;
use crate::graph::{Multigraph, Network, VertexId, Walk};
use crate::multiflow::max_multiflow_integer;
use crate::scalar::Scalar;
use crate::valence::{
    count_minus_at_terminals, is_alternating, is_inner_balanced, Sign, SignedValenceNetwork, Tightness, VStep, Valence,
    ValenceTrail,
};

use super::{check_preconditions, internal_terminals, Lineage, TraceStep};

/// The four trail families of the valence graph `G¹²` obtained from a
/// maximum multiflow in the double cover and the decomposition of the
/// unused cover edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClassification {
    pub graph: Multigraph,
    pub terminals: BTreeSet<VertexId>,
    /// Odd T-trails, preimages of the multiflow.
    pub p: Vec<ValenceTrail>,
    /// Even T-trails.
    pub q: Vec<ValenceTrail>,
    /// Odd closed trails through a terminal.
    pub r: Vec<ValenceTrail>,
    /// Even closed trails.
    pub e: Vec<ValenceTrail>,
}

/// Cover edge `2e + s` is valence `(e, s)`.
fn to_valence_trail<S: Scalar>(dc: &crate::cover::DoubleCover<S>, w: &Walk) -> ValenceTrail {
    ValenceTrail::new(
        w.steps()
            .iter()
            .map(|s| VStep {
                valence: Valence(s.edge.0),
                from: dc.base_vertex(s.from),
                to: dc.base_vertex(s.to),
            })
            .collect(),
    )
}

pub fn initial_classify<S: Scalar>(n: &Network<S>) -> Result<ComponentClassification> {
    check_preconditions(n)?;
    if n.terminals().len() < 2 {
        return Err(Error::Precondition("at least two terminals are required".into()));
    }
    let dc = build_double_cover(n);
    let flow = max_multiflow_integer(&dc)?;
    let cover = dc.cover().graph();
    let mut used = vec![false; cover.edge_count()];
    let mut p = Vec::new();
    for item in &flow.packing.items {
        ensure!(
            item.weight.is_integral(),
            "unit cover multiflow has a fractional weight"
        );
        let copies = item.weight.to_big().to_integer();
        let mut k = num_bigint::BigInt::from(0);
        while k < copies {
            for e in item.walk.edge_ids() {
                ensure!(!used[e.0], "unit cover multiflow uses an edge twice");
                used[e.0] = true;
            }
            p.push(to_valence_trail(&dc, &item.walk));
            k += 1;
        }
    }

    let mut zg = Multigraph::new();
    for v in cover.vertices() {
        zg.add_vertex(cover.vertex_name(v));
    }
    let mut z_to_cover = Vec::new();
    for e in cover.edge_ids().filter(|e| !used[e.0]) {
        let edge = cover.edge(e);
        zg.add_edge(edge.name.clone(), edge.u, edge.v)?;
        z_to_cover.push(e);
    }
    let relabel = |w: &Walk| -> ValenceTrail {
        ValenceTrail::new(
            w.steps()
                .iter()
                .map(|s| VStep {
                    valence: Valence(z_to_cover[s.edge.0].0),
                    from: dc.base_vertex(s.from),
                    to: dc.base_vertex(s.to),
                })
                .collect(),
        )
    };
    let (open, closed) = eulerian_decompose(&zg, dc.cover().terminals())?;
    let (mut q, mut r) = (Vec::new(), Vec::new());
    for w in &open {
        let (a, b) = (w.start(), w.end());
        if dc.base_vertex(a) == dc.base_vertex(b) {
            r.push(relabel(w));
        } else if dc.is_primed(a) == dc.is_primed(b) {
            q.push(relabel(w));
        } else {
            return Err(Error::Invariant(format!(
                "leftover trail joins {} and {}, so the multiflow was not maximum",
                cover.vertex_name(a),
                cover.vertex_name(b)
            )));
        }
    }
    let e = closed.iter().map(relabel).collect();
    let cc = ComponentClassification {
        graph: n.graph().clone(),
        terminals: n.terminals().clone(),
        p,
        q,
        r,
        e,
    };
    let mut count = vec![0usize; 2 * cc.graph.edge_count()];
    for w in cc.p.iter().chain(&cc.q).chain(&cc.r).chain(&cc.e) {
        for s in &w.steps {
            count[s.valence.0] += 1;
        }
    }
    ensure!(
        count.iter().all(|&c| c == 1),
        "trail families do not use every valence exactly once"
    );
    Ok(cc)
}

/// Result of terminal evacuation.
#[derive(Clone, Debug)]
pub struct Evacuation {
    pub svn: SignedValenceNetwork,
    /// Witness odd trails `P'`.
    pub odd: Vec<ValenceTrail>,
    /// Witness even trails `Q'`.
    pub even: Vec<ValenceTrail>,
    pub lineage: Lineage,
    pub steps: Vec<TraceStep>,
}

fn fresh_name(taken: &BTreeSet<String>, base: &str) -> String {
    let mut name = format!("{base}*");
    while taken.contains(&name) {
        name.push('*');
    }
    name
}

/// Adds a new terminal `t*` per terminal `t`, extends every trail of `P`,
/// `Q` and `R` by an evacuation valence at each end, and signs all trails
/// alternately. The old terminals become inner vertices.
pub fn terminal_evacuation(cc: &ComponentClassification) -> Result<Evacuation> {
    let mut svn = SignedValenceNetwork::from_graph(&cc.graph, BTreeSet::new());
    let mut lineage = Lineage {
        vertex_origin: cc.graph.vertices().collect(),
        edge_origin: cc.graph.edge_ids().map(Some).collect(),
    };
    let families: [&[ValenceTrail]; 3] = [&cc.p, &cc.q, &cc.r];
    // Trail ends at each terminal, as (family, trail, is_start).
    let mut ends: BTreeMap<VertexId, Vec<(usize, usize, bool)>> = BTreeMap::new();
    for (f, fam) in families.iter().enumerate() {
        for (i, w) in fam.iter().enumerate() {
            ends.entry(w.start()).or_default().push((f, i, true));
            ends.entry(w.end()).or_default().push((f, i, false));
        }
    }
    let mut taken: BTreeSet<String> = svn.vertex_names.iter().cloned().collect();
    let mut evac: BTreeMap<(usize, usize, bool), (Valence, VertexId)> = BTreeMap::new();
    let mut steps = Vec::new();
    for &t in &cc.terminals {
        let name = cc.graph.vertex_name(t).to_string();
        let star_name = fresh_name(&taken, &name);
        taken.insert(star_name.clone());
        let star = svn.add_vertex(star_name.clone());
        lineage.vertex_origin.push(t);
        svn.terminals.insert(star);
        let list = ends.remove(&t).unwrap_or_default();
        if list.len() % 2 != 0 {
            return Err(Error::Invariant(format!(
                "terminal {name} ends an odd number of trails"
            )));
        }
        let mut added = Vec::new();
        for (k, pair) in list.chunks(2).enumerate() {
            let edge_name = format!("{star_name}{name}#{k}");
            let e = svn.add_edge(edge_name.clone(), star, t, [Sign::Plus; 2]);
            lineage.edge_origin.push(None);
            added.push(edge_name);
            for (slot, key) in pair.iter().enumerate() {
                evac.insert(*key, (Valence::of(e, slot), star));
            }
        }
        steps.push(TraceStep::Evacuate {
            terminal: name,
            new_terminal: star_name,
            added_edges: added,
        });
    }
    ensure!(ends.is_empty(), "a trail ends at a non-terminal");

    let mut assigned: Vec<Option<Sign>> = vec![None; svn.signs.len()];
    let sign_trail = |w: &ValenceTrail, assigned: &mut Vec<Option<Sign>>| -> Result<()> {
        for (i, s) in w.steps.iter().enumerate() {
            ensure!(assigned[s.valence.0].is_none(), "valence signed twice");
            assigned[s.valence.0] = Some(Sign::alternate(Sign::Plus, i));
        }
        Ok(())
    };
    let mut extended: [Vec<ValenceTrail>; 3] = Default::default();
    for (f, fam) in families.iter().enumerate() {
        for (i, w) in fam.iter().enumerate() {
            let (a, sa) = evac[&(f, i, true)];
            let (b, sb) = evac[&(f, i, false)];
            let mut st = vec![VStep {
                valence: a,
                from: sa,
                to: w.start(),
            }];
            st.extend(w.steps.iter().copied());
            st.push(VStep {
                valence: b,
                from: w.end(),
                to: sb,
            });
            let ext = ValenceTrail::new(st);
            sign_trail(&ext, &mut assigned)?;
            extended[f].push(ext);
        }
    }
    for w in &cc.e {
        ensure!(w.len() % 2 == 0, "closed leftover trail has odd length");
        sign_trail(w, &mut assigned)?;
    }
    for (i, s) in assigned.into_iter().enumerate() {
        svn.signs[i] = s.ok_or_else(|| Error::Invariant(format!("valence {i} was not signed")))?;
    }
    let [odd, even, _] = extended;
    svn.tightness = Some(Tightness {
        p: odd.len(),
        q: even.len(),
    });
    ensure!(is_inner_balanced(&svn), "evacuated signing is not inner balanced");
    ensure!(
        count_minus_at_terminals(&svn) == even.len(),
        "minus count at terminals differs from q"
    );
    for w in odd.iter().chain(&even) {
        svn.check_trail(w)?;
        ensure!(is_alternating(&svn, w), "witness trail is not alternating");
        ensure!(
            svn.is_t_trail(w) && internal_terminals(&svn, w).is_empty(),
            "witness trail is not a clean T-trail"
        );
    }
    ensure!(
        odd.iter().all(ValenceTrail::is_odd) && even.iter().all(|w| !w.is_odd()),
        "witness parity mismatch"
    );
    Ok(Evacuation {
        svn,
        odd,
        even,
        lineage,
        steps,
    })
}
