//! The worked example graphs shipped with the crate, parsed from the same
//! files the command line examples and the fuzz corpus seeds use.

use crate::dsl::parse_graph;
use crate::graph::Graph;

fn must(src: &str) -> Graph {
    parse_graph(src).expect("fixture graph parses")
}

/// One vertex with a single loop; the algebra of Laurent polynomials.
pub fn single_loop() -> Graph {
    must(include_str!("../../../fixtures/loop.graph"))
}

/// One source feeding two sinks; acyclic.
pub fn fork() -> Graph {
    must(include_str!("../../../fixtures/fork.graph"))
}

/// A loop with an exit into a second, exit-free loop.
pub fn loop_chain() -> Graph {
    must(include_str!("../../../fixtures/loop_chain.graph"))
}

/// One vertex with a double loop; the Leavitt algebra of order two.
pub fn rose2() -> Graph {
    must(include_str!("../../../fixtures/rose2.graph"))
}

/// Two double loops in a row.
pub fn twin_roses() -> Graph {
    must(include_str!("../../../fixtures/twin_roses.graph"))
}

/// A source feeding a sink and a double loop.
pub fn rose_fork() -> Graph {
    must(include_str!("../../../fixtures/rose_fork.graph"))
}

/// Three infinite emitters feeding two sinks through a finite web.
pub fn emitter_web() -> Graph {
    must(include_str!("../../../fixtures/emitter_web.graph"))
}

/// A loop with an exit, plus a second source over the same sink.
pub fn loop_fork() -> Graph {
    must(include_str!("../../../fixtures/loop_fork.graph"))
}

pub fn all() -> Vec<Graph> {
    vec![
        single_loop(),
        fork(),
        loop_chain(),
        rose2(),
        twin_roses(),
        rose_fork(),
        emitter_web(),
        loop_fork(),
    ]
}
