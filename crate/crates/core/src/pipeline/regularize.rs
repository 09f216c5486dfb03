//! Regularization: removing irregular edges from the odd witness trails.

use crate::error::{ensure, Result};
use crate::graph::EdgeId;
use crate::valence::{
    alternating_packing, count_minus_at_terminals, is_alternating, is_inner_balanced, Sign, SignedValenceNetwork,
    ValenceTrail,
};

use super::{internal_terminals, measure, PipelineTrace, TraceStep};

/// An edge whose two valencies are used by one trail, at positions `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Irregular {
    pub trail: usize,
    pub i: usize,
    pub j: usize,
    pub case: u8,
}

impl Irregular {
    pub fn edge(&self, trails: &[ValenceTrail]) -> EdgeId {
        trails[self.trail].steps[self.i].valence.edge()
    }

    /// Length of the fragment strictly between the two occurrences.
    pub fn fragment_len(&self) -> usize {
        self.j - self.i - 1
    }
}

pub fn classify_case(s1: Sign, s2: Sign, same_direction: bool) -> u8 {
    match (s1 == s2, same_direction) {
        (false, true) => 1,
        (false, false) => 2,
        (true, true) => 3,
        (true, false) => 4,
    }
}

/// The first Case 1–3 irregularity by trail index and position, otherwise
/// the Case 4 irregularity with the shortest fragment.
pub fn find_irregular(svn: &SignedValenceNetwork, trails: &[ValenceTrail]) -> Result<Option<Irregular>> {
    let mut best4: Option<Irregular> = None;
    for (t, w) in trails.iter().enumerate() {
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                let (a, b) = (w.steps[i], w.steps[j]);
                if a.valence.edge() != b.valence.edge() {
                    continue;
                }
                let e = svn.edge(a.valence.edge());
                ensure!(
                    e.ends.iter().all(|v| !svn.is_terminal(*v)),
                    "irregular edge {} is incident to a terminal",
                    e.name
                );
                let case = classify_case(svn.sign(a.valence), svn.sign(b.valence), a.from == b.from);
                let found = Irregular { trail: t, i, j, case };
                if case != 4 {
                    return Ok(Some(found));
                }
                if best4.map_or(true, |b| found.fragment_len() < b.fragment_len()) {
                    best4 = Some(found);
                }
            }
        }
    }
    Ok(best4)
}

/// Shortens `w` at an irregularity of Case 1, 2 or 3.
pub fn apply_case_1_2_3(svn: &SignedValenceNetwork, w: &ValenceTrail, irr: &Irregular) -> Result<ValenceTrail> {
    let (i, j) = (irr.i, irr.j);
    let a = &w.steps[..i];
    let c = ValenceTrail::new(w.steps[i + 1..j].to_vec());
    let b = &w.steps[j + 1..];
    let mut steps = a.to_vec();
    match irr.case {
        1 => steps.extend(c.reversed().steps),
        2 => {}
        3 => steps.push(w.steps[j]),
        other => {
            return Err(crate::Error::Precondition(format!(
                "case {other} is not a simplification case"
            )))
        }
    }
    steps.extend_from_slice(b);
    let out = ValenceTrail::new(steps);
    svn.check_trail(&out)?;
    ensure!(
        is_alternating(svn, &out),
        "case {} produced a non-alternating trail",
        irr.case
    );
    ensure!(
        out.start() == w.start() && out.end() == w.end(),
        "case {} moved an endpoint",
        irr.case
    );
    ensure!(
        out.len() < w.len() && (w.len() - out.len()) % 2 == 0,
        "case {} changed parity",
        irr.case
    );
    Ok(out)
}

/// Case 4 repair: removes the redundant edge at `y` and rewrites the
/// witness so no trail uses it. `trails` holds the odd trails followed by
/// the even ones. Returns the removed edge and the subcase label.
pub fn apply_case_4(
    svn: &mut SignedValenceNetwork,
    trails: &mut [ValenceTrail],
    irr: &Irregular,
) -> Result<(EdgeId, &'static str)> {
    let w = trails[irr.trail].clone();
    let (e1, e2) = (w.steps[irr.i], w.steps[irr.j]);
    ensure!(irr.case == 4, "case 4 repair called on case {}", irr.case);
    let y = e1.to;
    ensure!(e2.from == y, "case 4 occurrences are not in opposite directions");
    let sigma = svn.sign(e1.valence);
    let c = &w.steps[irr.i + 1..irr.j];
    ensure!(svn.degree(y) == 3, "case 4 with deg(y) = {}", svn.degree(y));
    ensure!(c.len() >= 2, "case 4 fragment of length {}", c.len());
    let (first, last) = (c[0].valence, c[c.len() - 1].valence);
    ensure!(
        svn.sign(first) == sigma.flip() && svn.sign(last) == sigma.flip(),
        "case 4 fragment does not start and end with the opposite sign"
    );
    ensure!(
        first.edge() != last.edge(),
        "case 4 fragment starts and ends on the same edge"
    );

    let qualifies = |x: crate::valence::Valence| svn.sign(x.twin()) == sigma;
    let use_first = match (qualifies(first), qualifies(last)) {
        (true, true) => first.edge() < last.edge(),
        (true, false) => true,
        (false, true) => false,
        (false, false) => return Err(crate::Error::Invariant("case 4 has no redundant edge".into())),
    };
    let (used_here, rest) = if use_first {
        (first, ValenceTrail::new(c[1..].to_vec()))
    } else {
        (last, ValenceTrail::new(c[..c.len() - 1].to_vec()))
    };
    let r = used_here.edge();
    let twin = used_here.twin();
    ensure!(
        svn.edge(r).ends.iter().all(|v| !svn.is_terminal(*v)),
        "redundant edge is incident to a terminal"
    );

    let mut shortened = w.steps[..irr.i].to_vec();
    shortened.extend_from_slice(&w.steps[irr.j + 1..]);
    trails[irr.trail] = ValenceTrail::new(shortened);

    let in_c = c.iter().any(|s| s.valence == twin);
    let holder = trails.iter().position(|t| t.steps.iter().any(|s| s.valence == twin));
    let subcase = match (in_c, holder) {
        (true, _) => "ii",
        (false, None) => "i",
        (false, Some(h)) => {
            let pos = trails[h].steps.iter().position(|s| s.valence == twin).expect("holder");
            let step = trails[h].steps[pos];
            let detour = if rest.start() == step.from {
                rest.clone()
            } else {
                rest.reversed()
            };
            ensure!(
                detour.start() == step.from && detour.end() == step.to,
                "case 4 detour does not match the replaced valence"
            );
            trails[h].steps.splice(pos..=pos, detour.steps);
            if h == irr.trail {
                "iii"
            } else {
                "iv"
            }
        }
    };
    let minus_before = count_minus_at_terminals(svn);
    svn.edges[r.0].alive = false;
    ensure!(
        is_inner_balanced(svn),
        "removing the redundant edge broke inner balance"
    );
    ensure!(
        count_minus_at_terminals(svn) == minus_before,
        "removing the redundant edge changed q"
    );
    for t in trails.iter() {
        svn.check_trail(t)?;
        ensure!(svn.is_t_trail(t), "case 4 repair produced a non-T-trail");
    }
    Ok((r, subcase))
}

/// Removes every irregular edge from the odd trails. Returns odd alternating
/// T-trails of the final network, at least `p` of them, none irregular.
pub fn regularize(
    svn: &mut SignedValenceNetwork,
    mut odd: Vec<ValenceTrail>,
    mut even: Vec<ValenceTrail>,
    trace: &mut PipelineTrace,
) -> Result<Vec<ValenceTrail>> {
    let t = svn
        .tightness
        .ok_or_else(|| crate::Error::Precondition("network carries no tightness data".into()))?;
    ensure!(
        odd.len() >= t.p && even.len() <= t.q,
        "witness does not match the tightness data"
    );
    loop {
        let Some(irr) = find_irregular(svn, &odd)? else { break };
        let before = measure(svn, &odd);
        let edge = svn.edge(irr.edge(&odd)).name.clone();
        let (removed, subcase) = if irr.case == 4 {
            let mut all: Vec<ValenceTrail> = odd.iter().chain(&even).cloned().collect();
            let (r, sub) = apply_case_4(svn, &mut all, &irr)?;
            ensure!(
                all.len() == t.p + t.q || all.len() == odd.len() + even.len(),
                "witness size changed"
            );
            let (p_new, q_new) = alternating_packing(svn)?;
            odd = p_new;
            even = q_new;
            (Some(svn.edges[r.0].name.clone()), Some(sub.to_string()))
        } else {
            odd[irr.trail] = apply_case_1_2_3(svn, &odd[irr.trail], &irr)?;
            (None, None)
        };
        let after = measure(svn, &odd);
        ensure!(
            after < before,
            "regularization measure did not decrease: {before:?} -> {after:?}"
        );
        ensure!(odd.len() >= t.p, "regularization lost odd trails");
        for w in &odd {
            ensure!(
                w.is_odd() && internal_terminals(svn, w).is_empty(),
                "odd witness trail became invalid"
            );
        }
        trace.steps.push(TraceStep::Regularize {
            case: irr.case,
            trail: irr.trail,
            edge,
            fragment_len: irr.fragment_len(),
            measure_before: before,
            measure_after: after,
            removed_edge: removed,
            subcase,
        });
    }
    Ok(odd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Multigraph, VertexId};
    use crate::valence::{Tightness, VStep, Valence};

    #[test]
    fn case_table() {
        assert_eq!(classify_case(Sign::Plus, Sign::Minus, true), 1);
        assert_eq!(classify_case(Sign::Plus, Sign::Minus, false), 2);
        assert_eq!(classify_case(Sign::Plus, Sign::Plus, true), 3);
        assert_eq!(classify_case(Sign::Plus, Sign::Plus, false), 4);
        assert_eq!(classify_case(Sign::Minus, Sign::Minus, false), 4);
    }

    fn st(x: usize, from: usize, to: usize) -> VStep {
        VStep {
            valence: Valence(x),
            from: VertexId(from),
            to: VertexId(to),
        }
    }

    /// Terminals `s` (0), `t` (1); inner `x` (2), `y` (3); edges
    /// `s–x`, `x–y`, `y–t`, and a second `x–y`.
    fn ladder(signs: &[Sign]) -> SignedValenceNetwork {
        let mut g = Multigraph::new();
        let v: Vec<_> = ["s", "t", "x", "y"].iter().map(|n| g.add_vertex(*n)).collect();
        g.add_edge("sx", v[0], v[2]).unwrap();
        g.add_edge("xy", v[2], v[3]).unwrap();
        g.add_edge("yt", v[3], v[1]).unwrap();
        g.add_edge("xy2", v[2], v[3]).unwrap();
        let mut svn = SignedValenceNetwork::from_graph(&g, [v[0], v[1]].into());
        svn.signs = signs.to_vec();
        svn.tightness = Some(Tightness { p: 1, q: 0 });
        svn
    }

    #[test]
    fn case_1_reverses_the_middle() {
        use Sign::{Minus as M, Plus as P};
        // s–x, x–y, y–z, z–x, y–t with terminals s, t.
        let mut g = Multigraph::new();
        let v: Vec<_> = ["s", "t", "x", "y", "z"].iter().map(|n| g.add_vertex(*n)).collect();
        for (n, a, b) in [("sx", 0, 2), ("xy", 2, 3), ("yz", 3, 4), ("zx", 4, 2), ("yt", 3, 1)] {
            g.add_edge(n, v[a], v[b]).unwrap();
        }
        let mut svn = SignedValenceNetwork::from_graph(&g, [v[0], v[1]].into());
        svn.signs = vec![P, M, M, P, P, M, M, P, M, P];
        let w = ValenceTrail::new(vec![
            st(0, 0, 2),
            st(2, 2, 3),
            st(4, 3, 4),
            st(6, 4, 2),
            st(3, 2, 3),
            st(8, 3, 1),
        ]);
        assert!(is_alternating(&svn, &w));
        let irr = find_irregular(&svn, std::slice::from_ref(&w)).unwrap().unwrap();
        assert_eq!((irr.i, irr.j, irr.case), (1, 4, 1));
        let out = apply_case_1_2_3(&svn, &w, &irr).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(out.steps[1], st(6, 2, 4));
    }

    #[test]
    fn case_2_drops_both_occurrences() {
        use Sign::{Minus as M, Plus as P};
        let svn = ladder(&[P, M, M, P, P, M, P, M]);
        let w = ValenceTrail::new(vec![st(0, 0, 2), st(2, 2, 3), st(3, 3, 2), st(7, 2, 3), st(4, 3, 1)]);
        assert!(is_alternating(&svn, &w));
        let irr = find_irregular(&svn, std::slice::from_ref(&w)).unwrap().unwrap();
        assert_eq!(irr.case, 2);
        let out = apply_case_1_2_3(&svn, &w, &irr).unwrap();
        assert_eq!(out.len(), 3);
        assert!(!out.has_irregular_edge());
    }

    #[test]
    fn case_3_keeps_one_occurrence() {
        use Sign::{Minus as M, Plus as P};
        let svn = ladder(&[P, P, M, M, P, P, P, M]);
        let w = ValenceTrail::new(vec![st(0, 0, 2), st(2, 2, 3), st(6, 3, 2), st(3, 2, 3), st(4, 3, 1)]);
        assert!(is_alternating(&svn, &w));
        let irr = find_irregular(&svn, std::slice::from_ref(&w)).unwrap().unwrap();
        assert_eq!((irr.i, irr.j, irr.case), (1, 3, 3));
        let out = apply_case_1_2_3(&svn, &w, &irr).unwrap();
        assert_eq!(out.steps, vec![st(0, 0, 2), st(3, 2, 3), st(4, 3, 1)]);
    }

    #[test]
    fn regularize_without_irregular_edges_is_identity() {
        use Sign::{Minus as M, Plus as P};
        let mut svn = ladder(&[P, P, M, P, P, M, P, M]);
        let w = ValenceTrail::new(vec![st(0, 0, 2), st(2, 2, 3), st(4, 3, 1)]);
        let mut trace = PipelineTrace::default();
        let out = regularize(&mut svn, vec![w.clone()], vec![], &mut trace).unwrap();
        assert_eq!(out, vec![w]);
        assert!(trace.steps.is_empty());
    }
}
