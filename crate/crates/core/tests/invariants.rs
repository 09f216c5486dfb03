use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;
use oddpack::flow::max_flow_min_cut;
use oddpack::graph::{Multigraph, Step, VertexId, Walk};
use oddpack::io;
use oddpack::{
    barrier_capacity, barrier_check, build_double_cover, max_odd_walk_packing, min_barrier_exhaustive,
    min_proper_partition, validate_packing, Barrier, Network, OracleBudget, Rational, Rational64, Scalar,
};
use proptest::prelude::*;

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

/// Networks with 2 to 6 vertices, up to 9 edges, integer capacities 1 to 4
/// and at least two terminals.
fn network() -> impl Strategy<Value = Network<Rational>> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let edge = (0..n, 0..n, 1i64..=4).prop_filter("no loops", |(u, v, _)| u != v);
            (
                Just(n),
                prop::collection::vec(edge, 0..=9),
                prop::collection::btree_set(0..n, 2..=n.min(4)),
            )
        })
        .prop_map(|(n, edges, terms)| {
            let mut g = Multigraph::new();
            for i in 0..n {
                g.add_vertex(format!("x{i}"));
            }
            let mut caps = Vec::new();
            for (i, (u, v, c)) in edges.into_iter().enumerate() {
                g.add_edge(format!("e{i}"), VertexId(u), VertexId(v)).unwrap();
                caps.push(q(c));
            }
            Network::new(g, terms.into_iter().map(VertexId).collect(), caps).unwrap()
        })
}

/// A random walk of up to `len` steps from vertex `start`, stopping at
/// dead ends.
fn random_walk(g: &Multigraph, start: usize, choices: &[usize]) -> Option<Walk> {
    let mut at = VertexId(start);
    let mut steps = Vec::new();
    for &c in choices {
        let inc = g.incident(at);
        if inc.is_empty() {
            break;
        }
        let e = inc[c % inc.len()];
        let to = g.edge(e).other(at).unwrap();
        steps.push(Step { edge: e, from: at, to });
        at = to;
    }
    if steps.is_empty() {
        None
    } else {
        Some(Walk::new(g, steps).unwrap())
    }
}

/// Odd T-walk inside `B` by breadth-first search over (vertex, parity).
fn has_odd_t_walk(n: &Network<Rational>, b: &Barrier) -> bool {
    let g = n.graph();
    for &s in n.terminals() {
        let mut seen = BTreeSet::from([(s, 0u8)]);
        let mut queue = VecDeque::from([(s, 0u8)]);
        while let Some((x, p)) = queue.pop_front() {
            if p == 1 && x != s && n.is_terminal(x) {
                return true;
            }
            for &e in g.incident(x) {
                if b.edges.contains(&e) {
                    let y = g.edge(e).other(x).unwrap();
                    if seen.insert((y, 1 - p)) {
                        queue.push_back((y, 1 - p));
                    }
                }
            }
        }
    }
    false
}

fn brute_min_cut(n: &Network<Rational>, src: &BTreeSet<VertexId>, snk: &BTreeSet<VertexId>) -> Rational {
    let g = n.graph();
    let free: Vec<VertexId> = g.vertices().filter(|v| !src.contains(v) && !snk.contains(v)).collect();
    let mut best: Option<Rational> = None;
    for mask in 0u32..(1 << free.len()) {
        let side: BTreeSet<VertexId> = src
            .iter()
            .copied()
            .chain(
                free.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v),
            )
            .collect();
        let cut = n.cap_sum(
            g.edge_ids()
                .filter(|&e| side.contains(&g.edge(e).u) != side.contains(&g.edge(e).v)),
        );
        if best.as_ref().map_or(true, |b| cut < *b) {
            best = Some(cut);
        }
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn reversal_preserves_walk_properties(n in network(), start in 0usize..6, choices in prop::collection::vec(0usize..8, 1..8)) {
        let g = n.graph();
        if let Some(w) = random_walk(g, start % g.vertex_count(), &choices) {
            let r = w.reversed();
            prop_assert_eq!(r.len(), w.len());
            prop_assert_eq!(r.is_odd(), w.is_odd());
            prop_assert_eq!(r.is_trail(), w.is_trail());
            prop_assert_eq!(r.is_t_walk(n.terminals()), w.is_t_walk(n.terminals()));
            prop_assert_eq!(r.reversed(), w);
        }
    }

    #[test]
    fn loads_are_additive(n in network(), a in prop::collection::vec(0usize..8, 1..6), b in prop::collection::vec(0usize..8, 1..6), k in 1i64..4) {
        let g = n.graph();
        let (Some(w1), Some(w2)) = (random_walk(g, 0, &a), random_walk(g, 1, &b)) else { return Ok(()) };
        let mut p = oddpack::Packing::new();
        p.push(Ratio::new(1.into(), 2.into()), w1);
        let mut r = oddpack::Packing::new();
        r.push(q(k), w2);
        let m = g.edge_count();
        let sum: Vec<Rational> = p.loads(m).into_iter().zip(r.loads(m)).map(|(x, y)| x + y).collect();
        prop_assert_eq!((p.clone() + r.clone()).loads(m), sum);
        let alpha = Ratio::new(3.into(), 7.into());
        prop_assert_eq!(p.scaled(&alpha).value(), p.value() * alpha);
        // Brute-force recount of occurrences.
        let loads = r.loads(m);
        for e in g.edge_ids() {
            prop_assert_eq!(loads[e.0].clone(), q(k) * q(r.items[0].walk.occurrences(e) as i64));
        }
    }

    #[test]
    fn max_flow_matches_cut_enumeration(n in network()) {
        let ts: Vec<VertexId> = n.terminals().iter().copied().collect();
        let src = BTreeSet::from([ts[0]]);
        let snk: BTreeSet<VertexId> = ts[1..].iter().copied().collect();
        let r = max_flow_min_cut(n.graph(), n.caps(), &src, &snk).unwrap();
        prop_assert_eq!(r.value, brute_min_cut(&n, &src, &snk));
    }

    #[test]
    fn barrier_check_matches_parity_search(n in network(), vmask in any::<u8>(), emask in any::<u16>()) {
        let g = n.graph();
        let vertices: BTreeSet<VertexId> =
            g.vertices().filter(|v| n.is_terminal(*v) || vmask >> v.0 & 1 == 1).collect();
        let edges = g
            .edge_ids()
            .filter(|&e| emask >> e.0 & 1 == 1 && vertices.contains(&g.edge(e).u) && vertices.contains(&g.edge(e).v))
            .collect();
        let b = Barrier::new(g, vertices, edges).unwrap();
        prop_assert_eq!(barrier_check(&n, &b).unwrap(), !has_odd_t_walk(&n, &b));
    }

    #[test]
    fn strong_duality_against_oracle(n in network()) {
        let (p, b) = max_odd_walk_packing(&n).unwrap();
        let check = validate_packing(&n, &p).unwrap();
        prop_assert!(check.is_feasible());
        prop_assert!(barrier_check(&n, &b).unwrap());
        prop_assert_eq!(p.value(), barrier_capacity(&n, &b));
        let (_, cap) = min_barrier_exhaustive(&n, &OracleBudget::default()).unwrap();
        prop_assert_eq!(p.value(), cap);
        let dc = build_double_cover(&n);
        prop_assert_eq!(min_proper_partition(&dc).unwrap().capacity, p.value());
    }

    #[test]
    fn formats_round_trip(n in network()) {
        let back: Network<Rational> = io::parse_instance(&io::to_json(&io::instance_to_json(&n))).unwrap();
        prop_assert_eq!(&back, &n);
        let (p, b) = max_odd_walk_packing(&n).unwrap();
        prop_assert_eq!(io::parse_packing(&n, &io::to_json(&io::packing_to_json(&n, &p))).unwrap(), p);
        prop_assert_eq!(io::parse_barrier(&n, &io::to_json(&io::barrier_to_json(&n, &b))).unwrap(), b);
        let dc = build_double_cover(&n);
        let x = min_proper_partition(&dc).unwrap();
        prop_assert_eq!(io::parse_partition(&dc, &io::to_json(&io::partition_to_json(&dc, &x))).unwrap(), x);
    }

    #[test]
    fn fixed_width_scalar_agrees(n in network()) {
        let small: Network<Rational64> =
            n.with_caps(n.caps().iter().map(|c| Rational64::from_big(&c.to_big()).unwrap()).collect()).unwrap();
        let (p, b) = max_odd_walk_packing(&small).unwrap();
        let (p2, _) = max_odd_walk_packing(&n).unwrap();
        prop_assert_eq!(p.value().to_big(), p2.value());
        prop_assert_eq!(barrier_capacity(&small, &b).to_big(), p2.value());
    }
}
