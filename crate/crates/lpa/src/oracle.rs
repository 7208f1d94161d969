//! Ground truth number one: the explicit finite-dimensional model of the
//! path algebra of a finite acyclic graph with finite multiplicities.
//!
//! Rewriting every non-sink vertex idempotent through the complete relation
//! v = sum of ee* leaves a basis of matrix units indexed by pairs of
//! sink-terminated paths with a common endpoint, so the algebra is a direct
//! sum of full matrix blocks, one per sink, of size the number of paths
//! into that sink. Nothing here assumes that block theory beyond the basis
//! itself: ideals are computed by brute-force two-sided closure with exact
//! sparse row reduction, and the symbolic engine is checked against the
//! result through the vertex-generator dictionary.

use crate::field::{Field, FieldElem};
use crate::graph::{Graph, GraphError, Multiplicity, VertexId, VertexSet};
use crate::ideal::{Engine, EngineError, IdealForm};
use std::collections::BTreeMap;
use thiserror::Error;

pub const MAX_CONCRETE_DIM: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the concrete model needs an acyclic graph")]
    Cyclic,
    #[error("the concrete model needs finite multiplicities")]
    Infinite,
    #[error("concrete dimension {0} exceeds the cap of {MAX_CONCRETE_DIM}")]
    TooBig(u128),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Sparse vector in the matrix-unit basis: index -> nonzero coefficient.
pub type SparseVec = BTreeMap<usize, FieldElem>;

fn add_scaled(target: &mut SparseVec, source: &SparseVec, scale: &FieldElem) {
    if scale.is_zero() {
        return;
    }
    for (&i, c) in source {
        let entry = target.entry(i);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let updated = e.get().add(&c.mul(scale));
                if updated.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = updated;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.mul(scale));
            }
        }
    }
}

/// Row-reduced spanning set with unit pivots and fully eliminated pivot
/// columns; the row list is a canonical form, so subspace equality is
/// structural equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    rows: Vec<SparseVec>,
}

impl Subspace {
    pub fn empty() -> Subspace {
        Subspace { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for row in &self.rows {
            let pivot = match row.keys().next() {
                Some(&p) => p,
                None => continue,
            };
            if let Some(c) = v.get(&pivot).cloned() {
                let neg = c.neg();
                add_scaled(&mut v, row, &neg);
            }
        }
        v
    }

    /// Inserts a vector, returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return false;
        }
        let (&pivot, lead) = v.iter().next().expect("nonempty reduced vector");
        let inv = lead.inv();
        let scaled: SparseVec = v
            .iter()
            .map(|(&i, c)| (i, c.mul(&inv)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        v = scaled;
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                let neg = c.neg();
                add_scaled(row, &v, &neg);
            }
        }
        let at = self
            .rows
            .partition_point(|r| r.keys().next().map(|&p| p < pivot).unwrap_or(false));
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// A path ending at a sink, as a start vertex plus edge copies
/// (src, dst, copy index within the bundle).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct SinkPath {
    start: VertexId,
    sink: VertexId,
    edges: Vec<(VertexId, VertexId, u64)>,
}

struct Block {
    #[allow(dead_code)]
    sink: VertexId,
    paths: Vec<SinkPath>,
    offset: usize,
}

pub struct ConcreteAlgebra {
    field: Field,
    blocks: Vec<Block>,
    dim: usize,
    decode: Vec<(usize, usize, usize)>,
    path_index: BTreeMap<SinkPath, (usize, usize)>,
    vertex_elems: BTreeMap<VertexId, SparseVec>,
    unit_multipliers: Vec<SparseVec>,
}

impl ConcreteAlgebra {
    pub fn build(graph: &Graph, field: Field) -> Result<ConcreteAlgebra, OracleError> {
        if !graph.cycles()?.is_empty() {
            return Err(OracleError::Cyclic);
        }
        if graph
            .edges()
            .iter()
            .any(|e| e.mult == Multiplicity::Infinite)
        {
            return Err(OracleError::Infinite);
        }

        let sinks: Vec<VertexId> = graph.vertices().filter(|&v| graph.is_sink(v)).collect();
        let mut dim_estimate: u128 = 0;
        for &s in &sinks {
            let mut n_s: u128 = 0;
            for v in graph.vertices() {
                n_s += count_paths(graph, v, s);
            }
            dim_estimate += n_s * n_s;
        }
        if dim_estimate > MAX_CONCRETE_DIM as u128 {
            return Err(OracleError::TooBig(dim_estimate));
        }

        let mut blocks = Vec::new();
        let mut offset = 0usize;
        for &s in &sinks {
            let mut paths = Vec::new();
            for v in graph.vertices() {
                enumerate_paths(graph, v, s, &mut Vec::new(), &mut paths);
            }
            paths.sort();
            let n = paths.len();
            blocks.push(Block {
                sink: s,
                paths,
                offset,
            });
            offset += n * n;
        }
        let dim = offset;

        let mut decode = vec![(0usize, 0usize, 0usize); dim];
        let mut path_index = BTreeMap::new();
        for (b, block) in blocks.iter().enumerate() {
            let n = block.paths.len();
            for (i, p) in block.paths.iter().enumerate() {
                path_index.insert(p.clone(), (b, i));
                for j in 0..n {
                    decode[block.offset + i * n + j] = (b, i, j);
                }
            }
        }

        let one = field.one();
        let mut vertex_elems: BTreeMap<VertexId, SparseVec> = BTreeMap::new();
        for v in graph.vertices() {
            vertex_elems.insert(v, SparseVec::new());
        }
        for block in &blocks {
            let n = block.paths.len();
            for (i, p) in block.paths.iter().enumerate() {
                let idx = block.offset + i * n + i;
                vertex_elems
                    .get_mut(&p.start)
                    .expect("every path starts at a vertex")
                    .insert(idx, one.clone());
            }
        }

        let mut unit_multipliers = Vec::new();
        for block in &blocks {
            let n = block.paths.len();
            for i in 0..n {
                let mut left = SparseVec::new();
                left.insert(block.offset + i * n, one.clone());
                unit_multipliers.push(left);
                if i > 0 {
                    let mut right = SparseVec::new();
                    right.insert(block.offset + i, one.clone());
                    unit_multipliers.push(right);
                }
            }
        }

        Ok(ConcreteAlgebra {
            field,
            blocks,
            dim,
            decode,
            path_index,
            vertex_elems,
            unit_multipliers,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.paths.len()).collect()
    }

    pub fn vertex_elem(&self, v: VertexId) -> &SparseVec {
        &self.vertex_elems[&v]
    }

    /// The element for one edge copy: the sum over paths q from the edge's
    /// range of the unit (e followed by q, q).
    pub fn edge_elem(&self, src: VertexId, dst: VertexId, copy: u64) -> SparseVec {
        let one = self.field.one();
        let mut out = SparseVec::new();
        for (b, block) in self.blocks.iter().enumerate() {
            let n = block.paths.len();
            for (j, q) in block.paths.iter().enumerate() {
                if q.start != dst {
                    continue;
                }
                let mut edges = vec![(src, dst, copy)];
                edges.extend(q.edges.iter().cloned());
                let extended = SinkPath {
                    start: src,
                    sink: q.sink,
                    edges,
                };
                let (b2, i) = self.path_index[&extended];
                assert_eq!(b, b2, "extension changed the sink");
                out.insert(block.offset + i * n + j, one.clone());
            }
        }
        out
    }

    pub fn ghost_elem(&self, src: VertexId, dst: VertexId, copy: u64) -> SparseVec {
        self.transpose(&self.edge_elem(src, dst, copy))
    }

    pub fn transpose(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&idx, c) in a {
            let (b, i, j) = self.decode[idx];
            let n = self.blocks[b].paths.len();
            out.insert(self.blocks[b].offset + j * n + i, c.clone());
        }
        out
    }

    /// Matrix-unit multiplication: (p,q)(q',r) is (p,r) when q = q' in the
    /// same block and zero otherwise.
    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&ia, ca) in a {
            let (ba, i, j) = self.decode[ia];
            let n = self.blocks[ba].paths.len();
            for (&ib, cb) in b {
                let (bb, k, l) = self.decode[ib];
                if ba != bb || j != k {
                    continue;
                }
                let idx = self.blocks[ba].offset + i * n + l;
                let prod = ca.mul(cb);
                match out.entry(idx) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let updated = e.get().add(&prod);
                        if updated.is_zero() {
                            e.remove();
                        } else {
                            *e.get_mut() = updated;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        if !prod.is_zero() {
                            e.insert(prod);
                        }
                    }
                }
            }
        }
        out
    }

    /// Brute-force two-sided ideal closure: the least subspace containing
    /// the generators and closed under left and right multiplication by
    /// the unit multipliers (which generate the algebra).
    pub fn ideal_closure(&self, generators: &[SparseVec]) -> Subspace {
        let mut space = Subspace::empty();
        let mut work: Vec<SparseVec> = Vec::new();
        for g in generators {
            if space.insert(g) {
                work.push(g.clone());
            }
        }
        while let Some(r) = work.pop() {
            for m in &self.unit_multipliers {
                for product in [self.mul(m, &r), self.mul(&r, m)] {
                    if product.is_empty() {
                        continue;
                    }
                    if space.insert(&product) {
                        work.push(product);
                    }
                }
            }
        }
        space
    }

    pub fn vertex_ideal(&self, vs: &VertexSet) -> Subspace {
        let gens: Vec<SparseVec> = vs.iter().map(|v| self.vertex_elems[v].clone()).collect();
        self.ideal_closure(&gens)
    }

    pub fn whole(&self) -> Subspace {
        let one = self.field.one();
        let mut space = Subspace::empty();
        for i in 0..self.dim {
            let mut v = SparseVec::new();
            v.insert(i, one.clone());
            space.insert(&v);
        }
        space
    }

    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = a.clone();
        for r in &b.rows {
            out.insert(r);
        }
        out
    }

    /// Product of two-sided ideals: the span of pairwise products of the
    /// spanning rows is already the ideal product.
    pub fn product(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut out = Subspace::empty();
        for x in &a.rows {
            for y in &b.rows {
                let p = self.mul(x, y);
                if !p.is_empty() {
                    out.insert(&p);
                }
            }
        }
        out
    }

    /// Intersection by the doubled-coordinate elimination trick.
    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut doubled = Subspace::empty();
        for r in &a.rows {
            let mut w = r.clone();
            for (&i, c) in r {
                w.insert(self.dim + i, c.clone());
            }
            doubled.insert(&w);
        }
        for r in &b.rows {
            doubled.insert(r);
        }
        let mut out = Subspace::empty();
        for row in &doubled.rows {
            let pivot = match row.keys().next() {
                Some(&p) => p,
                None => continue,
            };
            if pivot >= self.dim {
                let shifted: SparseVec = row
                    .iter()
                    .map(|(&i, c)| (i - self.dim, c.clone()))
                    .collect();
                out.insert(&shifted);
            }
        }
        out
    }

    /// The number of distinct ideals generated by vertex subsets. On an
    /// acyclic graph this must match the symbolic pair count.
    pub fn vertex_ideal_count(&self, graph: &Graph) -> usize {
        let vertices: Vec<VertexId> = graph.vertices().collect();
        assert!(vertices.len() <= 16, "vertex subset enumeration cap");
        let mut seen: Vec<Subspace> = Vec::new();
        for mask in 0u32..(1u32 << vertices.len()) {
            let vs: VertexSet = vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v)
                .collect();
            let space = self.vertex_ideal(&vs);
            if !seen.contains(&space) {
                seen.push(space);
            }
        }
        seen.len()
    }
}

fn count_paths(graph: &Graph, from: VertexId, sink: VertexId) -> u128 {
    if from == sink {
        return 1;
    }
    let mut total: u128 = 0;
    for e in graph.out_bundles(from) {
        let m = match e.mult {
            Multiplicity::Finite(m) => m as u128,
            Multiplicity::Infinite => unreachable!("infinite bundles rejected before counting"),
        };
        total += m * count_paths(graph, e.dst, sink);
    }
    total
}

fn enumerate_paths(
    graph: &Graph,
    from: VertexId,
    sink: VertexId,
    prefix: &mut Vec<(VertexId, VertexId, u64)>,
    out: &mut Vec<SinkPath>,
) {
    if from == sink {
        let start = prefix.first().map(|&(s, _, _)| s).unwrap_or(sink);
        out.push(SinkPath {
            start,
            sink,
            edges: prefix.clone(),
        });
        return;
    }
    for e in graph.out_bundles(from) {
        let m = match e.mult {
            Multiplicity::Finite(m) => m,
            Multiplicity::Infinite => unreachable!("infinite bundles rejected before enumeration"),
        };
        for copy in 0..m {
            prefix.push((e.src, e.dst, copy));
            enumerate_paths(graph, e.dst, sink, prefix, out);
            prefix.pop();
        }
    }
}

/// One oracle trial: two vertex generator sets, all three operations
/// computed on both sides of the dictionary. Returns mismatch descriptions.
pub fn check_against_symbolic(
    engine: &Engine,
    model: &ConcreteAlgebra,
    gens_a: &VertexSet,
    gens_b: &VertexSet,
) -> Result<Vec<String>, OracleError> {
    let mut mismatches = Vec::new();
    let graph = engine.graph();

    let sym_a = engine.ideal_from_vertices(gens_a)?;
    let sym_b = engine.ideal_from_vertices(gens_b)?;
    let con_a = model.vertex_ideal(gens_a);
    let con_b = model.vertex_ideal(gens_b);

    let image = |form: &IdealForm| -> Subspace { model.vertex_ideal(&form.pair().h) };

    if image(&sym_a) != con_a {
        mismatches.push(format!(
            "generators {} close to {} symbolically but to rank {} concretely",
            graph.render_set(gens_a),
            sym_a.render(graph),
            con_a.rank(),
        ));
    }
    if image(&sym_b) != con_b {
        mismatches.push(format!(
            "generators {} close to {} symbolically but to rank {} concretely",
            graph.render_set(gens_b),
            sym_b.render(graph),
            con_b.rank(),
        ));
    }

    let cases: [(&str, IdealForm, Subspace); 3] = [
        (
            "sum",
            engine.sum(&sym_a, &sym_b)?,
            model.sum(&con_a, &con_b),
        ),
        (
            "product",
            engine.product(&sym_a, &sym_b)?,
            model.product(&con_a, &con_b),
        ),
        (
            "intersection",
            engine.intersect(&sym_a, &sym_b)?,
            model.intersect(&con_a, &con_b),
        ),
    ];
    for (op, sym, con) in &cases {
        if &image(sym) != con {
            mismatches.push(format!(
                "{op} of {} and {}: symbolic {} has concrete rank {}, direct computation has rank {}",
                graph.render_set(gens_a),
                graph.render_set(gens_b),
                sym.render(graph),
                image(sym).rank(),
                con.rank(),
            ));
        }
    }
    Ok(mismatches)
}
