//! Admissible pairs (h, s): a hereditary saturated vertex set together with
//! a chosen set of its breaking vertices. These index the graded ideals,
//! and containment of graded ideals is the coordinatewise-flavored order
//! implemented here. Meets and joins are found by searching the enumerated
//! poset and asserting the extremum is unique; the engine's arithmetic
//! never needs a closed formula for them.

use crate::graph::{Graph, GraphError, VertexSet};
use std::fmt;
use thiserror::Error;

pub const MAX_PAIRS: usize = 20_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has more than {0} admissible pairs")]
    TooManyPairs(usize),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct AdmissiblePair {
    pub h: VertexSet,
    pub s: VertexSet,
}

impl AdmissiblePair {
    pub fn zero() -> AdmissiblePair {
        AdmissiblePair {
            h: VertexSet::new(),
            s: VertexSet::new(),
        }
    }

    pub fn whole(graph: &Graph) -> AdmissiblePair {
        AdmissiblePair {
            h: graph.vertices().collect(),
            s: VertexSet::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_empty() && self.s.is_empty()
    }

    pub fn is_whole(&self, graph: &Graph) -> bool {
        self.h.len() == graph.vertex_count()
    }

    pub fn is_valid(&self, graph: &Graph) -> bool {
        graph.hs_closure(&self.h) == self.h && self.s.is_subset(&graph.breaking_vertices(&self.h))
    }

    /// Containment order on the graded ideals the pairs denote.
    pub fn leq(&self, other: &AdmissiblePair) -> bool {
        self.h.is_subset(&other.h)
            && self
                .s
                .iter()
                .all(|v| other.h.contains(v) || other.s.contains(v))
    }

    pub fn render(&self, graph: &Graph) -> String {
        let h_names: Vec<&str> = self.h.iter().map(|&v| graph.vertex_name(v)).collect();
        if self.s.is_empty() {
            format!("<H: {}>", h_names.join(", "))
        } else {
            let s_names: Vec<&str> = self.s.iter().map(|&v| graph.vertex_name(v)).collect();
            format!("<H: {}; S: {}>", h_names.join(", "), s_names.join(", "))
        }
    }
}

// Display without vertex names is only for debugging panics; rendering for
// users goes through `render`.
impl fmt::Display for AdmissiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h: Vec<String> = self.h.iter().map(|v| v.to_string()).collect();
        let s: Vec<String> = self.s.iter().map(|v| v.to_string()).collect();
        write!(f, "(h={{{}}}, s={{{}}})", h.join(","), s.join(","))
    }
}

/// Every admissible pair of the graph, ordered by (h, s).
pub fn enumerate_pairs(graph: &Graph) -> Result<Vec<AdmissiblePair>, PairError> {
    let mut out = Vec::new();
    for h in graph.hereditary_saturated_subsets()? {
        let breaking: Vec<_> = graph.breaking_vertices(&h).into_iter().collect();
        let b = breaking.len();
        assert!(b < 32, "breaking vertex count out of range");
        for mask in 0u32..(1u32 << b) {
            let s: VertexSet = breaking
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            out.push(AdmissiblePair { h: h.clone(), s });
            if out.len() > MAX_PAIRS {
                return Err(PairError::TooManyPairs(MAX_PAIRS));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Greatest lower bound in the pair order, found by poset search over the
/// enumerated pairs. Panics if the maximum of the lower bounds is not
/// unique; the order is a lattice, so that would be an engine defect.
pub fn pair_meet(
    pairs: &[AdmissiblePair],
    a: &AdmissiblePair,
    b: &AdmissiblePair,
) -> AdmissiblePair {
    let lower: Vec<&AdmissiblePair> = pairs.iter().filter(|p| p.leq(a) && p.leq(b)).collect();
    assert!(!lower.is_empty(), "no lower bound for {a} and {b}");
    let mut best = lower[0];
    for &p in &lower[1..] {
        if best.leq(p) {
            best = p;
        }
    }
    for p in &lower {
        assert!(
            p.leq(best),
            "meet of {a} and {b} is not unique: {p} and {best} are incomparable lower bounds"
        );
    }
    best.clone()
}

/// Least upper bound in the pair order, dual to `pair_meet`.
pub fn pair_join(
    pairs: &[AdmissiblePair],
    a: &AdmissiblePair,
    b: &AdmissiblePair,
) -> AdmissiblePair {
    let upper: Vec<&AdmissiblePair> = pairs.iter().filter(|p| a.leq(p) && b.leq(p)).collect();
    assert!(!upper.is_empty(), "no upper bound for {a} and {b}");
    let mut best = upper[0];
    for &p in &upper[1..] {
        if p.leq(best) {
            best = p;
        }
    }
    for p in &upper {
        assert!(
            best.leq(p),
            "join of {a} and {b} is not unique: {p} and {best} are incomparable upper bounds"
        );
    }
    best.clone()
}
