//! Finite directed graphs with edge multiplicities, and the vertex-set
//! machinery the ideal lattice is built from: hereditary saturated subsets,
//! breaking vertices of a subset, quotient graphs, cycles, and the classic
//! graph conditions (every cycle has an exit, every cycle vertex has two
//! distinct return paths, downward directedness).
//!
//! Parallel edges are stored as one bundle per (source, target) pair with a
//! multiplicity, which may be infinite. A cycle is a simple closed path and
//! is identified by its vertex sequence rotated to start at the smallest
//! vertex; bundles are unique per vertex pair, so the sequence determines
//! the edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

pub const MAX_SUBSET_VERTICES: usize = 16;
pub const MAX_CYCLES: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex name {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("graph has {0} vertices; subset enumeration is capped at {1}")]
    TooManyVertices(usize, usize),
    #[error("graph has more than {0} cycles")]
    TooManyCycles(usize),
    #[error("edge multiplicity must be at least 1")]
    ZeroMultiplicity,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Multiplicity::Infinite)
    }

    pub fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }

    pub fn at_least(&self, n: u64) -> bool {
        match self {
            Multiplicity::Finite(m) => *m >= n,
            Multiplicity::Infinite => true,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(m) => write!(f, "{m}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

/// One bundle of parallel edges.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
    pub mult: Multiplicity,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    name: String,
    vertex_names: Vec<String>,
    edges: Vec<Edge>,
}

pub type VertexSet = BTreeSet<VertexId>;

impl Graph {
    pub fn new(name: &str, vertex_names: &[&str]) -> Result<Graph, GraphError> {
        if vertex_names.is_empty() {
            return Err(GraphError::NoVertices);
        }
        let mut seen = BTreeSet::new();
        for n in vertex_names {
            if !seen.insert(n.to_string()) {
                return Err(GraphError::DuplicateVertex(n.to_string()));
            }
        }
        Ok(Graph {
            name: name.to_string(),
            vertex_names: vertex_names.iter().map(|s| s.to_string()).collect(),
            edges: Vec::new(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex_names
            .iter()
            .position(|n| n == name)
            .map(VertexId)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Adds a bundle; a repeated (src, dst) pair accumulates multiplicity.
    pub fn add_edge(
        &mut self,
        src: VertexId,
        dst: VertexId,
        mult: Multiplicity,
    ) -> Result<(), GraphError> {
        if let Multiplicity::Finite(0) = mult {
            return Err(GraphError::ZeroMultiplicity);
        }
        assert!(src.0 < self.vertex_count() && dst.0 < self.vertex_count());
        if let Some(e) = self.edges.iter_mut().find(|e| e.src == src && e.dst == dst) {
            e.mult = e.mult.add(mult);
        } else {
            self.edges.push(Edge { src, dst, mult });
            self.edges.sort_by_key(|e| (e.src, e.dst));
        }
        Ok(())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_bundles(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.src == v)
    }

    pub fn in_bundles(&self, v: VertexId) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.dst == v)
    }

    pub fn bundle(&self, src: VertexId, dst: VertexId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.src == src && e.dst == dst)
    }

    pub fn out_degree(&self, v: VertexId) -> Multiplicity {
        self.out_bundles(v)
            .fold(Multiplicity::Finite(0), |acc, e| acc.add(e.mult))
    }

    pub fn is_sink(&self, v: VertexId) -> bool {
        self.out_degree(v) == Multiplicity::Finite(0)
    }

    pub fn is_infinite_emitter(&self, v: VertexId) -> bool {
        self.out_degree(v).is_infinite()
    }

    /// Regular: emits at least one and finitely many edges.
    pub fn is_regular(&self, v: VertexId) -> bool {
        matches!(self.out_degree(v), Multiplicity::Finite(n) if n >= 1)
    }

    /// All vertices reachable from `v` along directed paths, including `v`.
    pub fn reachable_from(&self, v: VertexId) -> VertexSet {
        let mut seen: VertexSet = [v].into();
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for e in self.out_bundles(u) {
                if seen.insert(e.dst) {
                    queue.push_back(e.dst);
                }
            }
        }
        seen
    }

    pub fn reaches(&self, from: VertexId, to: VertexId) -> bool {
        self.reachable_from(from).contains(&to)
    }

    pub fn is_hereditary(&self, set: &VertexSet) -> bool {
        self.edges
            .iter()
            .all(|e| !set.contains(&e.src) || set.contains(&e.dst))
    }

    pub fn is_saturated(&self, set: &VertexSet) -> bool {
        self.vertices().all(|v| {
            set.contains(&v)
                || !self.is_regular(v)
                || self.out_bundles(v).any(|e| !set.contains(&e.dst))
        })
    }

    /// Smallest hereditary saturated superset: close downward under
    /// reachability, then repeatedly pull in every regular vertex all of
    /// whose edges land inside.
    pub fn hs_closure(&self, gens: &VertexSet) -> VertexSet {
        let mut h: VertexSet = VertexSet::new();
        for &v in gens {
            h.append(&mut self.reachable_from(v));
        }
        loop {
            let forced: Vec<VertexId> = self
                .vertices()
                .filter(|&v| {
                    !h.contains(&v)
                        && self.is_regular(v)
                        && self.out_bundles(v).all(|e| h.contains(&e.dst))
                })
                .collect();
            if forced.is_empty() {
                return h;
            }
            // Hereditary closure of the forced vertices adds nothing new:
            // their ranges are already inside.
            h.extend(forced);
        }
    }

    /// Every hereditary saturated subset, the empty set and the full vertex
    /// set included, ordered by size then contents.
    pub fn hereditary_saturated_subsets(&self) -> Result<Vec<VertexSet>, GraphError> {
        let n = self.vertex_count();
        if n > MAX_SUBSET_VERTICES {
            return Err(GraphError::TooManyVertices(n, MAX_SUBSET_VERTICES));
        }
        let mut out: BTreeSet<VertexSet> = BTreeSet::new();
        for mask in 0u32..(1u32 << n) {
            let gens: VertexSet = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(VertexId)
                .collect();
            out.insert(self.hs_closure(&gens));
        }
        let mut list: Vec<VertexSet> = out.into_iter().collect();
        list.sort_by_key(|s| (s.len(), s.iter().cloned().collect::<Vec<_>>()));
        Ok(list)
    }

    /// Infinite emitters outside `h` with at least one and finitely many
    /// edges landing outside `h`.
    pub fn breaking_vertices(&self, h: &VertexSet) -> VertexSet {
        self.vertices()
            .filter(|&v| !h.contains(&v) && self.is_infinite_emitter(v))
            .filter(|&v| {
                let outside = self
                    .out_bundles(v)
                    .filter(|e| !h.contains(&e.dst))
                    .fold(Multiplicity::Finite(0), |acc, e| acc.add(e.mult));
                matches!(outside, Multiplicity::Finite(k) if k >= 1)
            })
            .collect()
    }

    /// Infinite emitters outside `h` whose every edge lands inside `h`.
    pub fn swallowed_emitters(&self, h: &VertexSet) -> VertexSet {
        self.vertices()
            .filter(|&v| {
                !h.contains(&v)
                    && self.is_infinite_emitter(v)
                    && self.out_bundles(v).all(|e| h.contains(&e.dst))
            })
            .collect()
    }

    /// The quotient graph for the pair (h, s): vertices outside `h` plus a
    /// primed sink for each breaking vertex of `h` not in `s`; edges whose
    /// range survives, plus a primed twin into the sink for each edge whose
    /// range is a kept breaking vertex.
    pub fn quotient(&self, h: &VertexSet, s: &VertexSet) -> QuotientGraph {
        let breaking = self.breaking_vertices(h);
        let primed: Vec<VertexId> = breaking
            .iter()
            .filter(|v| !s.contains(v))
            .cloned()
            .collect();
        let mut names: Vec<String> = Vec::new();
        let mut base_of: Vec<QuotientVertex> = Vec::new();
        let mut unprimed_index: BTreeMap<VertexId, usize> = BTreeMap::new();
        let mut primed_index: BTreeMap<VertexId, usize> = BTreeMap::new();
        for v in self.vertices().filter(|v| !h.contains(v)) {
            unprimed_index.insert(v, names.len());
            names.push(self.vertex_name(v).to_string());
            base_of.push(QuotientVertex {
                base: v,
                primed: false,
            });
        }
        for &v in &primed {
            primed_index.insert(v, names.len());
            names.push(format!("{}'", self.vertex_name(v)));
            base_of.push(QuotientVertex {
                base: v,
                primed: true,
            });
        }
        let mut graph = Graph {
            name: format!("{}/quotient", self.name),
            vertex_names: names,
            edges: Vec::new(),
        };
        for e in &self.edges {
            if h.contains(&e.dst) {
                continue;
            }
            let src = VertexId(unprimed_index[&e.src]);
            graph
                .add_edge(src, VertexId(unprimed_index[&e.dst]), e.mult)
                .expect("quotient edge");
            if let Some(&pi) = primed_index.get(&e.dst) {
                graph
                    .add_edge(src, VertexId(pi), e.mult)
                    .expect("primed twin");
            }
        }
        QuotientGraph { graph, base_of }
    }

    /// Simple cycles as canonical vertex sequences, each starting at its
    /// smallest vertex.
    pub fn cycles(&self) -> Result<Vec<Cycle>, GraphError> {
        let mut out = Vec::new();
        for start in self.vertices() {
            let mut path = vec![start];
            self.cycle_dfs(start, start, &mut path, &mut out)?;
        }
        out.sort();
        Ok(out)
    }

    fn cycle_dfs(
        &self,
        start: VertexId,
        cur: VertexId,
        path: &mut Vec<VertexId>,
        out: &mut Vec<Cycle>,
    ) -> Result<(), GraphError> {
        for e in self.out_bundles(cur) {
            if e.dst == start {
                out.push(Cycle {
                    vertices: path.clone(),
                });
                if out.len() > MAX_CYCLES {
                    return Err(GraphError::TooManyCycles(MAX_CYCLES));
                }
            } else if e.dst > start && !path.contains(&e.dst) {
                path.push(e.dst);
                self.cycle_dfs(start, e.dst, path, out)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// Exits of a cycle within the subgraph that survives killing `h`: a
    /// bundle from a cycle vertex is an exit if it leaves the cycle's track
    /// or doubles it. Returns the ranges of surviving exits.
    pub fn cycle_exit_ranges(&self, cycle: &Cycle, h: &VertexSet) -> VertexSet {
        let mut ranges = VertexSet::new();
        let k = cycle.len();
        for (i, &v) in cycle.vertices.iter().enumerate() {
            let next = cycle.vertices[(i + 1) % k];
            for e in self.out_bundles(v) {
                if h.contains(&e.dst) {
                    continue;
                }
                if e.dst == next {
                    if e.mult.at_least(2) {
                        ranges.insert(e.dst);
                    }
                } else {
                    ranges.insert(e.dst);
                }
            }
        }
        ranges
    }

    /// Whether the cycle survives and has no exits in the quotient by
    /// (h, s); primed twins of the cycle's own edges count as exits.
    pub fn is_exit_free(&self, cycle: &Cycle, h: &VertexSet, s: &VertexSet) -> bool {
        if cycle.vertices.iter().any(|v| h.contains(v)) {
            return false;
        }
        if !self.cycle_exit_ranges(cycle, h).is_empty() {
            return false;
        }
        let breaking = self.breaking_vertices(h);
        !cycle
            .vertices
            .iter()
            .any(|v| breaking.contains(v) && !s.contains(v))
    }

    /// Whether every cycle has an exit.
    pub fn condition_l(&self) -> Result<bool, GraphError> {
        let empty = VertexSet::new();
        Ok(self
            .cycles()?
            .iter()
            .all(|c| !self.is_exit_free(c, &empty, &empty)))
    }

    /// Whether every vertex on a closed path lies on at least two distinct
    /// closed paths, counting parallel edges as distinct.
    pub fn condition_k(&self) -> Result<bool, GraphError> {
        let cycles = self.cycles()?;
        let mut on_cycle = VertexSet::new();
        for c in &cycles {
            on_cycle.extend(c.vertices.iter().cloned());
        }
        Ok(on_cycle.iter().all(|&v| self.return_paths_at_least_two(v)))
    }

    fn return_paths_at_least_two(&self, v: VertexId) -> bool {
        let mut count = 0u64;
        let mut path = vec![v];
        self.count_returns(v, v, &mut path, &mut count);
        count >= 2
    }

    fn count_returns(
        &self,
        start: VertexId,
        cur: VertexId,
        path: &mut Vec<VertexId>,
        count: &mut u64,
    ) {
        if *count >= 2 {
            return;
        }
        for e in self.out_bundles(cur) {
            let weight = match e.mult {
                Multiplicity::Finite(m) => m.min(2),
                Multiplicity::Infinite => 2,
            };
            if e.dst == start {
                *count += weight;
            } else if !path.contains(&e.dst) {
                path.push(e.dst);
                self.count_returns(start, e.dst, path, count);
                path.pop();
            }
            if *count >= 2 {
                return;
            }
        }
    }

    /// Whether any two vertices have a common descendant.
    pub fn is_downward_directed(&self) -> bool {
        let reach: Vec<VertexSet> = self.vertices().map(|v| self.reachable_from(v)).collect();
        self.vertices().all(|u| {
            self.vertices()
                .all(|v| !reach[u.0].is_disjoint(&reach[v.0]))
        })
    }

    pub fn render_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|&v| self.vertex_name(v)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// A stable fingerprint of the graph's structure, used to catch ideal
    /// forms applied to the wrong graph.
    pub fn fingerprint(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.vertex_names.hash(&mut h);
        for e in &self.edges {
            (e.src.0, e.dst.0).hash(&mut h);
            match e.mult {
                Multiplicity::Finite(m) => m.hash(&mut h),
                Multiplicity::Infinite => u64::MAX.hash(&mut h),
            }
        }
        h.finish()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuotientVertex {
    pub base: VertexId,
    pub primed: bool,
}

#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub base_of: Vec<QuotientVertex>,
}

/// A simple closed path, stored as the vertex sequence rotated so the
/// smallest vertex comes first. Bundles are unique per (src, dst), so this
/// sequence pins down the edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Cycle {
    vertices: Vec<VertexId>,
}

impl Cycle {
    /// Builds a cycle from any rotation of its vertex sequence, validating
    /// that each consecutive bundle exists in `graph` and that vertices do
    /// not repeat.
    pub fn new(graph: &Graph, vertices: &[VertexId]) -> Result<Cycle, String> {
        if vertices.is_empty() {
            return Err("a cycle needs at least one vertex".to_string());
        }
        let set: VertexSet = vertices.iter().cloned().collect();
        if set.len() != vertices.len() {
            return Err("cycle repeats a vertex".to_string());
        }
        for (i, &v) in vertices.iter().enumerate() {
            let next = vertices[(i + 1) % vertices.len()];
            if graph.bundle(v, next).is_none() {
                return Err(format!(
                    "no edge {} -> {}",
                    graph.vertex_name(v),
                    graph.vertex_name(next)
                ));
            }
        }
        let min_pos = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, v)| **v)
            .map(|(i, _)| i)
            .unwrap();
        let mut rotated = vertices[min_pos..].to_vec();
        rotated.extend_from_slice(&vertices[..min_pos]);
        Ok(Cycle { vertices: rotated })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn base(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().cloned().collect()
    }

    pub fn render(&self, graph: &Graph) -> String {
        let names: Vec<&str> = self
            .vertices
            .iter()
            .map(|&v| graph.vertex_name(v))
            .collect();
        format!("cycle({})", names.join(", "))
    }
}
