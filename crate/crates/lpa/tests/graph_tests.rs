//! Structural pins for the graph layer: closures, breaking vertices,
//! quotients, and the chain conditions, all computed by hand on the
//! fixture graphs, plus generated invariants for the closure operator.

use lpa::fixtures;
use lpa::graph::{Graph, Multiplicity, VertexId, VertexSet};
use proptest::prelude::*;

fn v(g: &Graph, name: &str) -> VertexId {
    g.vertex_by_name(name).expect("known vertex")
}

fn set(g: &Graph, names: &[&str]) -> VertexSet {
    names.iter().map(|n| v(g, n)).collect()
}

#[test]
fn closure_pins() {
    let g = fixtures::emitter_web();
    assert_eq!(g.hs_closure(&set(&g, &["v1"])), set(&g, &["v1"]));
    assert_eq!(
        g.hs_closure(&set(&g, &["v5"])),
        set(&g, &["v4", "v5", "v6", "v7"])
    );
    assert_eq!(
        g.hs_closure(&set(&g, &["v6"])),
        set(&g, &["v4", "v5", "v6", "v7"])
    );
    assert_eq!(
        g.hs_closure(&set(&g, &["v2"])),
        g.vertices().collect::<VertexSet>()
    );

    let f = fixtures::loop_fork();
    assert_eq!(g.name(), "emitter_web");
    assert_eq!(
        f.hs_closure(&set(&f, &["v", "z"])),
        set(&f, &["v", "w", "z"])
    );
    assert_eq!(f.hs_closure(&set(&f, &["u"])), set(&f, &["u", "v"]));
}

#[test]
fn hereditary_saturated_counts() {
    let cases = [
        (fixtures::single_loop(), 2),
        (fixtures::fork(), 4),
        (fixtures::loop_chain(), 3),
        (fixtures::rose2(), 2),
        (fixtures::twin_roses(), 3),
        (fixtures::rose_fork(), 4),
        (fixtures::emitter_web(), 13),
        (fixtures::loop_fork(), 6),
    ];
    for (g, want) in cases {
        let subsets = g.hereditary_saturated_subsets().unwrap();
        assert_eq!(subsets.len(), want, "{}", g.name());
        assert!(subsets.contains(&VertexSet::new()));
        assert!(subsets.contains(&g.vertices().collect()));
    }
}

#[test]
fn breaking_vertex_pins() {
    let g = fixtures::emitter_web();
    assert_eq!(g.breaking_vertices(&set(&g, &["v1"])), set(&g, &["v2"]));
    assert_eq!(g.breaking_vertices(&set(&g, &["v7"])), set(&g, &["v6"]));
    assert_eq!(
        g.breaking_vertices(&set(&g, &["v1", "v7"])),
        set(&g, &["v2", "v6"])
    );
    assert_eq!(
        g.breaking_vertices(&set(&g, &["v4", "v5", "v6", "v7"])),
        VertexSet::new()
    );
    assert_eq!(g.breaking_vertices(&VertexSet::new()), VertexSet::new());

    let swallowing = set(&g, &["v1", "v3", "v4", "v5", "v6", "v7"]);
    assert_eq!(g.breaking_vertices(&swallowing), VertexSet::new());
    assert_eq!(g.swallowed_emitters(&swallowing), set(&g, &["v2"]));
}

#[test]
fn admissible_pair_count_on_emitter_web() {
    let g = fixtures::emitter_web();
    let pairs = lpa::pairs::enumerate_pairs(&g).unwrap();
    assert_eq!(pairs.len(), 21);
}

#[test]
fn quotient_pins() {
    let g = fixtures::emitter_web();
    let q = g.quotient(&set(&g, &["v1"]), &VertexSet::new());
    let names: Vec<&str> = q.graph.vertices().map(|x| q.graph.vertex_name(x)).collect();
    assert!(names.contains(&"v2'"));
    let primed = q.graph.vertex_by_name("v2'").unwrap();
    assert!(q.graph.is_sink(primed));
    assert_eq!(
        q.graph
            .in_bundles(primed)
            .map(|e| e.mult)
            .collect::<Vec<_>>(),
        Vec::<Multiplicity>::new()
    );

    let f = fixtures::loop_fork();
    let qf = f.quotient(&set(&f, &["v"]), &VertexSet::new());
    assert_eq!(qf.graph.vertex_count(), 3);
    let qu = qf.graph.vertex_by_name("u").unwrap();
    let qw = qf.graph.vertex_by_name("w").unwrap();
    let qz = qf.graph.vertex_by_name("z").unwrap();
    assert!(qf.graph.bundle(qu, qu).is_some());
    assert!(qf.graph.bundle(qw, qz).is_some());
    assert!(qf.graph.bundle(qw, qu).is_none());
    assert!(!qf.graph.is_downward_directed());
}

#[test]
fn condition_pins() {
    let chain = fixtures::loop_chain();
    assert!(!chain.condition_l().unwrap());
    assert!(!chain.condition_k().unwrap());
    assert!(chain.is_downward_directed());

    let rose = fixtures::rose2();
    assert!(rose.condition_l().unwrap());
    assert!(rose.condition_k().unwrap());

    let twins = fixtures::twin_roses();
    assert!(twins.condition_k().unwrap());

    let fork = fixtures::fork();
    assert!(fork.condition_l().unwrap());
    assert!(fork.condition_k().unwrap());
    assert!(!fork.is_downward_directed());

    let lf = fixtures::loop_fork();
    assert!(lf.condition_l().unwrap());
    assert!(!lf.condition_k().unwrap());
}

#[test]
fn cycle_enumeration() {
    let g = fixtures::loop_chain();
    let cycles = g.cycles().unwrap();
    assert_eq!(cycles.len(), 2);

    let rose = fixtures::rose2();
    assert_eq!(rose.cycles().unwrap().len(), 1);
    let c = &rose.cycles().unwrap()[0];
    assert!(!rose.is_exit_free(c, &VertexSet::new(), &VertexSet::new()));

    let chain_cycles = g.cycles().unwrap();
    let vloop = chain_cycles
        .iter()
        .find(|c| c.contains(v(&g, "v")))
        .unwrap();
    let uloop = chain_cycles
        .iter()
        .find(|c| c.contains(v(&g, "u")))
        .unwrap();
    assert!(g.is_exit_free(vloop, &VertexSet::new(), &VertexSet::new()));
    assert!(!g.is_exit_free(uloop, &VertexSet::new(), &VertexSet::new()));
    assert!(g.is_exit_free(uloop, &set(&g, &["v"]), &VertexSet::new()));
    assert_eq!(
        g.cycle_exit_ranges(uloop, &VertexSet::new()),
        set(&g, &["v"])
    );
}

#[test]
fn exit_free_depends_on_breaking_choice() {
    let g = fixtures::emitter_web();
    let cycles = g.cycles().unwrap();
    assert!(cycles.is_empty());
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (
        1usize..=6,
        proptest::collection::vec((0usize..6, 0usize..6, 0u8..4), 0..14),
    )
        .prop_map(|(n, raw_edges)| {
            let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let mut g = Graph::new("gen", &refs).unwrap();
            for (src, dst, kind) in raw_edges {
                if src < n && dst < n {
                    let mult = match kind {
                        0 | 1 => Multiplicity::Finite(1),
                        2 => Multiplicity::Finite(2),
                        _ => Multiplicity::Infinite,
                    };
                    g.add_edge(VertexId(src), VertexId(dst), mult).unwrap();
                }
            }
            g
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closure_is_a_closure_operator(g in arb_graph(), picks in proptest::collection::vec(0usize..6, 0..4)) {
        let gens: VertexSet = picks
            .into_iter()
            .filter(|&i| i < g.vertex_count())
            .map(VertexId)
            .collect();
        let c = g.hs_closure(&gens);
        prop_assert!(gens.is_subset(&c));
        prop_assert!(g.is_hereditary(&c));
        prop_assert!(g.is_saturated(&c));
        prop_assert_eq!(g.hs_closure(&c), c);
    }

    #[test]
    fn enumerated_subsets_are_exactly_the_closed_sets(g in arb_graph()) {
        let subsets = g.hereditary_saturated_subsets().unwrap();
        for h in &subsets {
            prop_assert!(g.is_hereditary(h));
            prop_assert!(g.is_saturated(h));
        }
        let mut dedup = subsets.clone();
        dedup.dedup();
        prop_assert_eq!(dedup.len(), subsets.len());

        let n = g.vertex_count();
        if n <= 6 {
            let mut count = 0;
            for mask in 0u32..(1 << n) {
                let s: VertexSet = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(VertexId)
                    .collect();
                if g.is_hereditary(&s) && g.is_saturated(&s) {
                    count += 1;
                }
            }
            prop_assert_eq!(count, subsets.len());
        }
    }

    #[test]
    fn breaking_vertices_are_outside_infinite_emitters(g in arb_graph(), picks in proptest::collection::vec(0usize..6, 0..4)) {
        let gens: VertexSet = picks
            .into_iter()
            .filter(|&i| i < g.vertex_count())
            .map(VertexId)
            .collect();
        let h = g.hs_closure(&gens);
        for b in g.breaking_vertices(&h) {
            prop_assert!(!h.contains(&b));
            prop_assert!(g.is_infinite_emitter(b));
            let outside: Vec<_> = g
                .out_bundles(b)
                .filter(|e| !h.contains(&e.dst))
                .collect();
            prop_assert!(!outside.is_empty());
            prop_assert!(outside.iter().all(|e| !e.mult.is_infinite()));
        }
    }
}
