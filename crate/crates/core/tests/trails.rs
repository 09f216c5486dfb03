use oddpack::pipeline::TraceStep;
use oddpack::{
    fixtures, io, max_odd_walk_packing, max_trail_packing_exhaustive, odd_trail_packing, validate_packing, Network,
    OracleBudget, ParityFilter, Rational, Scalar, TrailFamily,
};

fn load(name: &str) -> Network<Rational> {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    io::parse_instance(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn check_trails(n: &Network<Rational>) -> Vec<TraceStep> {
    let out = odd_trail_packing(n).unwrap();
    let p = &out.packing;
    assert!(p.is_integer());
    assert!(validate_packing(n, p).unwrap().is_feasible());
    for item in &p.items {
        assert!(item.walk.is_trail() && item.walk.is_odd() && item.walk.is_t_walk(n.terminals()));
    }
    let oracle = max_trail_packing_exhaustive(n, ParityFilter::Odd, TrailFamily::Graph, &OracleBudget::default())
        .unwrap()
        .value();
    assert_eq!(p.value(), oracle);
    assert_eq!(p.value(), max_odd_walk_packing(n).unwrap().0.value());
    out.trace.steps
}

#[test]
fn shipped_fixtures() {
    for (name, want) in [("i1.json", 2), ("i2.json", 0), ("i3.json", 2), ("i4.json", 0)] {
        let n = load(name);
        check_trails(&n);
        assert_eq!(
            odd_trail_packing(&n).unwrap().packing.value(),
            Rational::from_int(want),
            "{name}"
        );
    }
    assert_eq!(load("i3.json"), fixtures::i3());
}

#[test]
fn forced_case_four() {
    let n = load("case4.json");
    let steps = check_trails(&n);
    let hits: Vec<&TraceStep> = steps
        .iter()
        .filter(|s| matches!(s, TraceStep::Regularize { case: 4, .. }))
        .collect();
    assert!(!hits.is_empty());
    for s in hits {
        match s {
            TraceStep::Regularize {
                measure_before,
                measure_after,
                removed_edge,
                subcase,
                ..
            } => {
                assert!(measure_after.0 + 1 == measure_before.0);
                assert!(removed_edge.is_some() && subcase.is_some());
            }
            _ => unreachable!(),
        }
    }
}

#[test]
fn trace_is_monotone() {
    let steps = check_trails(&load("case4.json"));
    for s in &steps {
        match s {
            TraceStep::Subcubize {
                supercubicity_before,
                supercubicity_after,
                ..
            } => {
                assert_eq!(*supercubicity_after + 1, *supercubicity_before)
            }
            TraceStep::Regularize {
                measure_before,
                measure_after,
                ..
            } => assert!(measure_after < measure_before),
            _ => {}
        }
    }
    let json = serde_json::to_string(&steps).unwrap();
    assert!(json.contains("\"step\":\"subcubize\""));
}
