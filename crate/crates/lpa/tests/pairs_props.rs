//! The admissible pairs of a graph form a lattice under the containment
//! order of the graded ideals they denote. These tests check the order
//! axioms and the extremal characterization of meet and join by exhaustive
//! search over the enumerated poset.

use lpa::fixtures;
use lpa::graph::{Graph, Multiplicity, VertexId};
use lpa::pairs::{enumerate_pairs, pair_join, pair_meet, AdmissiblePair};
use proptest::prelude::*;

fn check_lattice(g: &Graph) {
    let pairs = enumerate_pairs(g).unwrap();
    let bottom = AdmissiblePair::zero();
    let top = AdmissiblePair::whole(g);
    assert!(pairs.contains(&bottom));
    assert!(pairs.contains(&top));

    for a in &pairs {
        assert!(a.is_valid(g));
        assert!(a.leq(a));
        assert!(bottom.leq(a));
        assert!(a.leq(&top));
        for b in &pairs {
            if a.leq(b) && b.leq(a) {
                assert_eq!(a, b);
            }
            let m = pair_meet(&pairs, a, b);
            let j = pair_join(&pairs, a, b);
            assert!(m.leq(a) && m.leq(b));
            assert!(a.leq(&j) && b.leq(&j));
            for c in &pairs {
                if c.leq(a) && c.leq(b) {
                    assert!(c.leq(&m), "meet is not greatest on {}", g.name());
                }
                if a.leq(c) && b.leq(c) {
                    assert!(j.leq(c), "join is not least on {}", g.name());
                }
                if a.leq(b) && b.leq(c) {
                    assert!(a.leq(c), "order is not transitive on {}", g.name());
                }
            }
        }
    }
}

#[test]
fn fixture_lattices() {
    for g in fixtures::all() {
        check_lattice(&g);
    }
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (
        1usize..=5,
        proptest::collection::vec((0usize..5, 0usize..5, 0u8..4), 0..10),
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
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_lattices(g in arb_graph()) {
        check_lattice(&g);
    }
}
