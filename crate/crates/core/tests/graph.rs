use kex::graph::{
    decompose_components, parse_instance, serialize_instance, symmetric_difference, utilities, ComponentKind, Origin,
};
use kex::harness::{gen_instance, GeneratorSpec};
use kex::{Edge, Instance, Matching};
use proptest::prelude::*;

fn greedy(inst: &Instance, skip: &[bool]) -> Matching {
    let mut used = vec![false; inst.vertex_count() + 1];
    let mut chosen = Vec::new();
    for (i, &e) in inst.edges().iter().enumerate() {
        if !skip[i % skip.len()] && !used[e.u()] && !used[e.v()] {
            used[e.u()] = true;
            used[e.v()] = true;
            chosen.push(e);
        }
    }
    Matching::new(inst, chosen).unwrap()
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..=5, 1usize..=20, 0.0f64..0.7, any::<u64>()).prop_filter_map("needs n >= m", |(m, n, p, seed)| {
        (n >= m).then(|| gen_instance(&GeneratorSpec::random(n, m, p, seed)).unwrap())
    })
}

proptest! {
    #[test]
    fn round_trip_is_stable(inst in arb_instance()) {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn utilities_sum_to_welfare(inst in arb_instance(), skip in prop::collection::vec(any::<bool>(), 1..8)) {
        let m = greedy(&inst, &skip);
        prop_assert_eq!(utilities(&inst, &m).iter().sum::<usize>(), m.welfare());
    }

    #[test]
    fn difference_partitions(
        inst in arb_instance(),
        s1 in prop::collection::vec(any::<bool>(), 1..8),
        s2 in prop::collection::vec(any::<bool>(), 1..8),
    ) {
        let (m1, m2) = (greedy(&inst, &s1), greedy(&inst, &s2));
        let d12 = symmetric_difference(&inst, &m1, &m2).unwrap();
        let d21 = symmetric_difference(&inst, &m2, &m1).unwrap();
        let edges = |d: &[kex::graph::TaggedEdge]| d.iter().map(|t| t.edge).collect::<Vec<_>>();
        prop_assert_eq!(edges(&d12), edges(&d21));
        prop_assert!(symmetric_difference(&inst, &m1, &m1).unwrap().is_empty());

        let comps = decompose_components(&inst, &d12).unwrap();
        let mut all: Vec<Edge> = comps.iter().flat_map(|c| c.edges.iter().map(|t| t.edge)).collect();
        all.sort();
        prop_assert_eq!(all, edges(&d12));
        let mins: Vec<usize> = comps.iter().map(|c| c.min_vertex()).collect();
        prop_assert!(mins.windows(2).all(|w| w[0] < w[1]));
        for c in &comps {
            let len = c.edges.len();
            prop_assert!(c.edges.windows(2).all(|w| w[0].origin != w[1].origin));
            match c.kind {
                ComponentKind::Cycle => prop_assert!(len % 2 == 0 && len >= 4),
                ComponentKind::EvenPath => prop_assert!(len % 2 == 0 && len >= 2),
                ComponentKind::OddPath => {
                    prop_assert!(len % 2 == 1);
                    prop_assert_eq!(c.edges[0].origin, c.edges[len - 1].origin);
                }
            }
            if c.is_path() {
                let (s, e) = c.endpoints();
                prop_assert!(s < e);
            }
            for t in &c.edges {
                let in_first = m1.contains(t.edge);
                prop_assert_eq!(in_first, t.origin == Origin::First);
            }
        }
    }
}
