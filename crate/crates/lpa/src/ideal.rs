//! The ideal engine. Every two-sided ideal of the path algebra of a finite
//! graph has a unique normal form: a graded floor named by an admissible
//! pair (h, s), plus finitely many cycle parts (c, f) where c is a cycle
//! that survives the quotient by (h, s) with no exits there and f is a
//! monic polynomial with nonzero constant term. `normalize` reduces any
//! generator soup to that form; the lattice and ring operations are
//! computed by expanding both operands into graded and cycle summands and
//! combining summands by exact local rules:
//!
//! * graded times graded is the pair meet;
//! * graded against a cycle ideal is the cycle ideal itself when the cycle
//!   sits inside the graded side's vertex set, and the pair meet otherwise;
//! * two cycle ideals over the same cycle multiply through their
//!   polynomials (product of polynomials, or lcm for intersection);
//! * two cycle ideals over distinct cycles reduce to whichever is contained
//!   in the other's graded hull, or to the meet of the hulls when neither
//!   is.
//!
//! Sums always go back through `normalize`, which merges same-cycle parts
//! with a polynomial gcd.

use crate::field::Field;
use crate::graph::{Cycle, Graph, GraphError, Multiplicity, VertexSet};
use crate::pairs::{enumerate_pairs, pair_join, pair_meet, AdmissiblePair, PairError};
use crate::poly::{
    is_irreducible, laurent_canonical, poly_gcd, poly_lcm, sample_irreducibles, squarefree_part,
    Poly, PolyError,
};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("ideal was built for a different graph")]
    GraphMismatch,
    #[error("polynomial field does not match the engine's field")]
    FieldMismatch,
    #[error("vertex {0} emits infinitely many edges outside the floor and cannot carry a breaking relation")]
    InvalidBreakingVertex(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("not a prime power: {0}")]
    NotPrimeRadical(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclePart {
    pub cycle: Cycle,
    pub poly: Poly,
}

/// Canonical form of a two-sided ideal. Two ideals are equal exactly when
/// their forms are structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealForm {
    fingerprint: u64,
    pair: AdmissiblePair,
    parts: Vec<CyclePart>,
}

impl IdealForm {
    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn parts(&self) -> &[CyclePart] {
        &self.parts
    }

    pub fn is_graded(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.pair.is_zero() && self.parts.is_empty()
    }

    pub fn render(&self, graph: &Graph) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.pair.h.len() == graph.vertex_count() {
            return "whole".to_string();
        }
        let mut pieces = Vec::new();
        if !self.pair.h.is_empty() {
            pieces.push(self.pair.render(graph));
        }
        for part in &self.parts {
            pieces.push(format!("{}: {}", part.cycle.render(graph), part.poly));
        }
        pieces.join(" + ")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IdealOrder {
    Equal,
    Less,
    Greater,
    Incomparable,
}

impl fmt::Display for IdealOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IdealOrder::Equal => "equal",
            IdealOrder::Less => "less",
            IdealOrder::Greater => "greater",
            IdealOrder::Incomparable => "incomparable",
        };
        write!(f, "{s}")
    }
}

enum SameCycle {
    Product,
    Lcm,
}

#[derive(Default)]
struct Contributions {
    h: VertexSet,
    s: VertexSet,
    parts: Vec<(Cycle, Poly)>,
}

impl Contributions {
    fn add_pair(&mut self, p: &AdmissiblePair) {
        self.h.extend(p.h.iter().cloned());
        self.s.extend(p.s.iter().cloned());
    }

    fn add_form(&mut self, f: &IdealForm) {
        self.add_pair(&f.pair);
        for part in &f.parts {
            self.parts.push((part.cycle.clone(), part.poly.clone()));
        }
    }
}

pub struct Engine {
    graph: Graph,
    field: Field,
    pairs: Vec<AdmissiblePair>,
    cycles: Vec<Cycle>,
    fingerprint: u64,
}

impl Engine {
    pub fn new(graph: Graph, field: Field) -> Result<Engine, EngineError> {
        let pairs = enumerate_pairs(&graph)?;
        let cycles = graph.cycles()?;
        let fingerprint = graph.fingerprint();
        Ok(Engine {
            graph,
            field,
            pairs,
            cycles,
            fingerprint,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Every admissible pair, in sorted order; these name the graded ideals.
    pub fn pairs(&self) -> &[AdmissiblePair] {
        &self.pairs
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    fn check(&self, form: &IdealForm) -> Result<(), EngineError> {
        if form.fingerprint != self.fingerprint {
            return Err(EngineError::GraphMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> IdealForm {
        IdealForm {
            fingerprint: self.fingerprint,
            pair: AdmissiblePair::zero(),
            parts: Vec::new(),
        }
    }

    pub fn whole(&self) -> IdealForm {
        IdealForm {
            fingerprint: self.fingerprint,
            pair: AdmissiblePair::whole(&self.graph),
            parts: Vec::new(),
        }
    }

    pub fn is_whole(&self, form: &IdealForm) -> bool {
        form.pair.is_whole(&self.graph)
    }

    pub fn graded(&self, pair: &AdmissiblePair) -> Result<IdealForm, EngineError> {
        if !pair.is_valid(&self.graph) {
            return Err(EngineError::InvalidCycle(format!(
                "pair {pair} is not admissible"
            )));
        }
        Ok(IdealForm {
            fingerprint: self.fingerprint,
            pair: pair.clone(),
            parts: Vec::new(),
        })
    }

    pub fn ideal_from_vertices(&self, vs: &VertexSet) -> Result<IdealForm, EngineError> {
        self.normalize(vs, &VertexSet::new(), Vec::new())
    }

    pub fn graded_ideals(&self) -> Vec<IdealForm> {
        self.pairs
            .iter()
            .map(|p| IdealForm {
                fingerprint: self.fingerprint,
                pair: p.clone(),
                parts: Vec::new(),
            })
            .collect()
    }

    /// Reduces arbitrary generators to the canonical form: the floor is the
    /// closure of the vertex generators, cycle parts are absorbed when the
    /// floor swallows their cycle, promoted to vertices when their
    /// polynomial is a Laurent unit, and kept otherwise with every exit
    /// range pushed into the floor; breaking relations are dropped, kept,
    /// or promoted against the final floor; same-cycle parts merge by gcd.
    pub fn normalize(
        &self,
        h_gens: &VertexSet,
        s_gens: &VertexSet,
        parts: Vec<(Cycle, Poly)>,
    ) -> Result<IdealForm, EngineError> {
        for (cycle, poly) in &parts {
            if !poly.is_zero() && poly.field() != self.field {
                return Err(EngineError::FieldMismatch);
            }
            Cycle::new(&self.graph, cycle.vertices()).map_err(EngineError::InvalidCycle)?;
        }
        let mut h = self.graph.hs_closure(h_gens);
        let mut s = s_gens.clone();
        let mut parts: Vec<(Cycle, Poly)> =
            parts.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let mut guard = 0usize;
        loop {
            guard += 1;
            assert!(guard < 10_000, "normalization did not stabilize");
            let before = (h.clone(), s.clone(), parts.clone());

            let mut s_next = VertexSet::new();
            let mut promote = VertexSet::new();
            for &v in &s {
                if h.contains(&v) {
                    continue;
                }
                if !self.graph.is_infinite_emitter(v) {
                    continue;
                }
                let outside = self
                    .graph
                    .out_bundles(v)
                    .filter(|e| !h.contains(&e.dst))
                    .fold(Multiplicity::Finite(0), |acc, e| acc.add(e.mult));
                match outside {
                    Multiplicity::Finite(0) => {
                        promote.insert(v);
                    }
                    Multiplicity::Finite(_) => {
                        s_next.insert(v);
                    }
                    Multiplicity::Infinite => {
                        return Err(EngineError::InvalidBreakingVertex(
                            self.graph.vertex_name(v).to_string(),
                        ));
                    }
                }
            }
            s = s_next;
            if !promote.is_empty() {
                promote.extend(h.iter().cloned());
                h = self.graph.hs_closure(&promote);
            }

            let mut kept: Vec<(Cycle, Poly)> = Vec::new();
            for (cycle, poly) in parts.drain(..) {
                let poly = laurent_canonical(&poly)?;
                if cycle.vertices().iter().any(|v| h.contains(v)) {
                    continue;
                }
                if poly.is_one() {
                    let mut gens = h.clone();
                    gens.extend(cycle.vertices().iter().cloned());
                    h = self.graph.hs_closure(&gens);
                    continue;
                }
                let exits = self.graph.cycle_exit_ranges(&cycle, &h);
                if !exits.is_empty() {
                    let mut gens = h.clone();
                    gens.extend(exits);
                    h = self.graph.hs_closure(&gens);
                }
                let breaking = self.graph.breaking_vertices(&h);
                for v in cycle.vertices() {
                    if breaking.contains(v) {
                        s.insert(*v);
                    }
                }
                kept.push((cycle, poly));
            }

            let mut merged: BTreeMap<Cycle, Poly> = BTreeMap::new();
            for (cycle, poly) in kept {
                match merged.entry(cycle) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let g = poly_gcd(e.get(), &poly)?;
                        *e.get_mut() = g;
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(poly);
                    }
                }
            }
            parts = merged.into_iter().collect();

            if (h.clone(), s.clone(), parts.clone()) == before {
                break;
            }
        }

        let pair = AdmissiblePair { h, s };
        assert!(pair.is_valid(&self.graph), "normalized pair not admissible");
        for (i, (c, _)) in parts.iter().enumerate() {
            assert!(
                self.graph.is_exit_free(c, &pair.h, &pair.s),
                "kept cycle {} is not exit-free in its quotient",
                c.render(&self.graph)
            );
            for (d, _) in &parts[i + 1..] {
                assert!(
                    c.vertex_set().is_disjoint(&d.vertex_set()),
                    "distinct kept cycles share a vertex"
                );
            }
        }
        Ok(IdealForm {
            fingerprint: self.fingerprint,
            pair,
            parts: parts
                .into_iter()
                .map(|(cycle, poly)| CyclePart { cycle, poly })
                .collect(),
        })
    }

    /// The cycle ideal of one part on its own: its graded hull plus the
    /// part. The hull is the closure of the cycle's exit ranges.
    fn standalone(&self, part: &CyclePart) -> Result<IdealForm, EngineError> {
        let form = self.normalize(
            &VertexSet::new(),
            &VertexSet::new(),
            vec![(part.cycle.clone(), part.poly.clone())],
        )?;
        assert_eq!(form.parts.len(), 1, "standalone cycle ideal lost its part");
        assert_eq!(form.parts[0].cycle, part.cycle);
        Ok(form)
    }

    pub fn sum(&self, a: &IdealForm, b: &IdealForm) -> Result<IdealForm, EngineError> {
        self.check(a)?;
        self.check(b)?;
        let mut acc = Contributions::default();
        acc.add_form(a);
        acc.add_form(b);
        self.normalize(&acc.h, &acc.s, acc.parts)
    }

    pub fn product(&self, a: &IdealForm, b: &IdealForm) -> Result<IdealForm, EngineError> {
        self.combine(a, b, SameCycle::Product)
    }

    pub fn intersect(&self, a: &IdealForm, b: &IdealForm) -> Result<IdealForm, EngineError> {
        self.combine(a, b, SameCycle::Lcm)
    }

    fn combine(
        &self,
        a: &IdealForm,
        b: &IdealForm,
        same_cycle: SameCycle,
    ) -> Result<IdealForm, EngineError> {
        self.check(a)?;
        self.check(b)?;
        let mut acc = Contributions::default();
        acc.add_pair(&pair_meet(&self.pairs, &a.pair, &b.pair));
        for q in &b.parts {
            self.cross_graded_part(&a.pair, q, &mut acc)?;
        }
        for p in &a.parts {
            self.cross_graded_part(&b.pair, p, &mut acc)?;
        }
        for p in &a.parts {
            for q in &b.parts {
                if p.cycle == q.cycle {
                    let np = self.standalone(p)?;
                    let nq = self.standalone(q)?;
                    assert_eq!(np.pair, nq.pair, "one cycle with two different hulls");
                    acc.add_pair(&np.pair);
                    let poly = match same_cycle {
                        SameCycle::Product => p.poly.mul(&q.poly),
                        SameCycle::Lcm => poly_lcm(&p.poly, &q.poly)?,
                    };
                    acc.parts.push((p.cycle.clone(), poly));
                } else {
                    assert!(
                        p.cycle.vertex_set().is_disjoint(&q.cycle.vertex_set()),
                        "distinct canonical cycles share a vertex"
                    );
                    let np = self.standalone(p)?;
                    let nq = self.standalone(q)?;
                    let p_inside = p.cycle.vertices().iter().all(|v| nq.pair.h.contains(v));
                    let q_inside = q.cycle.vertices().iter().all(|v| np.pair.h.contains(v));
                    assert!(
                        !(p_inside && q_inside),
                        "two cycle ideals each inside the other's hull"
                    );
                    if p_inside {
                        acc.add_form(&np);
                    } else if q_inside {
                        acc.add_form(&nq);
                    } else {
                        acc.add_pair(&pair_meet(&self.pairs, &np.pair, &nq.pair));
                    }
                }
            }
        }
        self.normalize(&acc.h, &acc.s, acc.parts)
    }

    fn cross_graded_part(
        &self,
        g: &AdmissiblePair,
        part: &CyclePart,
        acc: &mut Contributions,
    ) -> Result<(), EngineError> {
        let n = self.standalone(part)?;
        let inside = part.cycle.vertices().iter().all(|v| g.h.contains(v));
        if inside {
            acc.add_form(&n);
        } else {
            assert!(
                part.cycle.vertices().iter().all(|v| !g.h.contains(v)),
                "cycle straddles a hereditary set"
            );
            acc.add_pair(&pair_meet(&self.pairs, g, &n.pair));
        }
        Ok(())
    }

    fn leq(&self, a: &IdealForm, b: &IdealForm) -> bool {
        if !a.pair.leq(&b.pair) {
            return false;
        }
        a.parts.iter().all(|p| {
            p.cycle.vertices().iter().all(|v| b.pair.h.contains(v))
                || b.parts
                    .iter()
                    .any(|q| q.cycle == p.cycle && q.poly.divides(&p.poly))
        })
    }

    pub fn compare(&self, a: &IdealForm, b: &IdealForm) -> Result<IdealOrder, EngineError> {
        self.check(a)?;
        self.check(b)?;
        let ab = self.leq(a, b);
        let ba = self.leq(b, a);
        Ok(match (ab, ba) {
            (true, true) => {
                assert_eq!(a, b, "mutually contained ideals with different forms");
                IdealOrder::Equal
            }
            (true, false) => IdealOrder::Less,
            (false, true) => IdealOrder::Greater,
            (false, false) => IdealOrder::Incomparable,
        })
    }

    /// The largest graded ideal inside: just the floor.
    pub fn gr(&self, a: &IdealForm) -> Result<IdealForm, EngineError> {
        self.check(a)?;
        Ok(IdealForm {
            fingerprint: self.fingerprint,
            pair: a.pair.clone(),
            parts: Vec::new(),
        })
    }

    pub fn radical(&self, a: &IdealForm) -> Result<IdealForm, EngineError> {
        self.check(a)?;
        let parts = a
            .parts
            .iter()
            .map(|p| Ok((p.cycle.clone(), squarefree_part(&p.poly)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        self.normalize(&a.pair.h, &a.pair.s, parts)
    }

    pub fn power(&self, a: &IdealForm, n: u32) -> Result<IdealForm, EngineError> {
        self.check(a)?;
        if n == 0 {
            return Ok(self.whole());
        }
        let mut acc = a.clone();
        for _ in 1..n {
            acc = self.product(&acc, a)?;
        }
        Ok(acc)
    }

    fn floor_quotient_downward_directed(&self, h: &VertexSet) -> bool {
        let bh = self.graph.breaking_vertices(h);
        self.graph.quotient(h, &bh).graph.is_downward_directed()
    }

    /// Primality: the floor must carry every breaking vertex, the quotient
    /// must be downward directed, and a nongraded ideal must have exactly
    /// one cycle part with an irreducible polynomial.
    pub fn is_prime(&self, a: &IdealForm) -> Result<bool, EngineError> {
        self.check(a)?;
        if self.is_whole(a) {
            return Ok(false);
        }
        if a.pair.s != self.graph.breaking_vertices(&a.pair.h) {
            return Ok(false);
        }
        if !self.floor_quotient_downward_directed(&a.pair.h) {
            return Ok(false);
        }
        match a.parts.len() {
            0 => Ok(true),
            1 => Ok(is_irreducible(&a.parts[0].poly)?),
            _ => Ok(false),
        }
    }

    /// All prime ideals: the graded ones listed outright, the nongraded
    /// ones described by frames (a floor with a downward directed quotient
    /// plus its unique exit-free cycle), each frame carrying a few sample
    /// irreducible polynomials from a fixed small family.
    pub fn enumerate_primes(&self) -> Result<PrimeEnumeration, EngineError> {
        let mut graded = Vec::new();
        let mut frames = Vec::new();
        for h in self.graph.hereditary_saturated_subsets()? {
            if h.len() == self.graph.vertex_count() {
                continue;
            }
            if !self.floor_quotient_downward_directed(&h) {
                continue;
            }
            let bh = self.graph.breaking_vertices(&h);
            let pair = AdmissiblePair {
                h: h.clone(),
                s: bh.clone(),
            };
            graded.push(IdealForm {
                fingerprint: self.fingerprint,
                pair: pair.clone(),
                parts: Vec::new(),
            });
            let exit_free: Vec<&Cycle> = self
                .cycles
                .iter()
                .filter(|c| self.graph.is_exit_free(c, &h, &bh))
                .collect();
            assert!(
                exit_free.len() <= 1,
                "downward directed quotient with two exit-free cycles"
            );
            if let Some(c) = exit_free.first() {
                frames.push(PrimeFrame {
                    pair,
                    cycle: (*c).clone(),
                    sample_polys: sample_irreducibles(self.field, 3)?,
                });
            }
        }
        Ok(PrimeEnumeration { graded, frames })
    }

    /// Writes the ideal as a power of a prime, if its radical is prime.
    pub fn prime_power_factor(&self, a: &IdealForm) -> Result<(IdealForm, u32), EngineError> {
        self.check(a)?;
        if self.is_whole(a) {
            return Err(EngineError::NotPrimeRadical(
                "the whole algebra is not a proper ideal".to_string(),
            ));
        }
        let r = self.radical(a)?;
        if !self.is_prime(&r)? {
            return Err(EngineError::NotPrimeRadical(format!(
                "radical {} is not prime",
                r.render(&self.graph)
            )));
        }
        if a.parts.is_empty() {
            assert_eq!(*a, r, "graded ideal differs from its radical");
            return Ok((r, 1));
        }
        assert_eq!(a.parts.len(), 1);
        assert_eq!(r.parts.len(), 1);
        let f = &a.parts[0].poly;
        let p = &r.parts[0].poly;
        let fd = f.degree().expect("canonical part polynomial is nonzero");
        let pd = p.degree().expect("squarefree part is nonzero");
        assert!(pd >= 1 && fd % pd == 0, "part polynomial not a prime power");
        let n = (fd / pd) as u32;
        assert_eq!(p.pow(n), f.monic(), "part polynomial not a prime power");
        let back = self.power(&r, n)?;
        assert_eq!(back, *a, "prime power does not rebuild the ideal");
        Ok((r, n))
    }

    /// Literal check of the two structural cancellation clauses.
    pub fn cancellation_check(&self) -> Result<CancellationReport, EngineError> {
        let n = self.graph.vertex_count();
        let proper: Vec<VertexSet> = self
            .graph
            .hereditary_saturated_subsets()?
            .into_iter()
            .filter(|h| !h.is_empty() && h.len() < n)
            .collect();
        let empty = VertexSet::new();

        let mut clause_a = None;
        for c in &self.cycles {
            if !self.graph.is_exit_free(c, &empty, &empty) {
                continue;
            }
            let v = c.base();
            if !self.graph.vertices().all(|u| self.graph.reaches(u, v)) {
                continue;
            }
            let hv = self.graph.hs_closure(&[v].into());
            if proper.len() == 1 && proper[0] == hv && self.graph.breaking_vertices(&hv).is_empty()
            {
                clause_a = Some(format!(
                    "exit-free {} with every vertex reaching {}; the only proper nonempty invariant vertex set is {} with no breaking vertices",
                    c.render(&self.graph),
                    self.graph.vertex_name(v),
                    self.graph.render_set(&hv),
                ));
                break;
            }
        }

        let condition_k = self.graph.condition_k()?;
        let mut clause_b = None;
        if condition_k && proper.len() <= 2 {
            let disjoint = proper
                .iter()
                .enumerate()
                .all(|(i, x)| proper[i + 1..].iter().all(|y| x.is_disjoint(y)));
            let floors_clean = proper.iter().all(|x| {
                self.graph.breaking_vertices(x).is_empty()
                    && x.iter().all(|&v| self.graph.hs_closure(&[v].into()) == *x)
            });
            if disjoint && floors_clean {
                let rendered: Vec<String> =
                    proper.iter().map(|x| self.graph.render_set(x)).collect();
                clause_b = Some(format!(
                    "every cycle vertex has two return paths; proper nonempty invariant vertex sets: [{}], pairwise disjoint, no breaking vertices, each generated by each of its vertices",
                    rendered.join(", "),
                ));
            }
        }

        Ok(CancellationReport {
            holds: clause_a.is_some() || clause_b.is_some(),
            clause_a,
            clause_b,
        })
    }

    fn verify_triple(
        &self,
        a: &IdealForm,
        b: &IdealForm,
        c: &IdealForm,
    ) -> Result<bool, EngineError> {
        for x in [a, b, c] {
            if x.is_zero() || self.is_whole(x) {
                return Ok(false);
            }
        }
        if b == c {
            return Ok(false);
        }
        Ok(self.product(a, b)? == self.product(a, c)?)
    }

    /// Searches for a verified failure of multiplicative cancellation:
    /// nonzero proper ideals with A*B = A*C and B distinct from C. Three
    /// structural patterns are tried in order (nested graded ideals, a
    /// graded ideal against two others it annihilates, a graded ideal under
    /// a cycle ideal sitting on top of it), then any caller-supplied random
    /// triples. Structural candidates that fail verification are counted as
    /// rejects; they would mean an engine defect.
    pub fn cancellation_counterexample(
        &self,
        random_candidates: &[(IdealForm, IdealForm, IdealForm)],
    ) -> Result<CounterexampleSearch, EngineError> {
        let mut rejected = 0usize;
        let zero = AdmissiblePair::zero();
        let whole = AdmissiblePair::whole(&self.graph);
        let proper: Vec<&AdmissiblePair> = self
            .pairs
            .iter()
            .filter(|p| **p != zero && **p != whole)
            .collect();

        for p1 in &proper {
            for p2 in &proper {
                if p1 == p2 || !p1.leq(p2) {
                    continue;
                }
                let a = self.graded(p1)?;
                let b = self.graded(p2)?;
                if self.verify_triple(&a, &b, &a)? {
                    return Ok(CounterexampleSearch {
                        found: Some(VerifiedTriple {
                            a: a.clone(),
                            b,
                            c: a,
                            pattern: "nested graded ideals",
                        }),
                        rejected,
                    });
                }
                rejected += 1;
            }
        }

        for pa in &proper {
            let disjoint: Vec<&&AdmissiblePair> =
                proper.iter().filter(|p| p.h.is_disjoint(&pa.h)).collect();
            for (i, pb) in disjoint.iter().enumerate() {
                for pc in &disjoint[i + 1..] {
                    let a = self.graded(pa)?;
                    let b = self.graded(pb)?;
                    let c = self.graded(pc)?;
                    if self.verify_triple(&a, &b, &c)? {
                        return Ok(CounterexampleSearch {
                            found: Some(VerifiedTriple {
                                a,
                                b,
                                c,
                                pattern: "one graded ideal annihilating two others",
                            }),
                            rejected,
                        });
                    }
                    rejected += 1;
                }
            }
        }

        let x_minus_one = Poly::x(self.field).sub(&Poly::one(self.field));
        for g in &proper {
            for cy in &self.cycles {
                if cy.vertices().iter().any(|v| g.h.contains(v)) {
                    continue;
                }
                if !self.graph.is_exit_free(cy, &g.h, &g.s) {
                    continue;
                }
                let a = self.graded(g)?;
                let b = self.normalize(&g.h, &g.s, vec![(cy.clone(), x_minus_one.clone())])?;
                if self.verify_triple(&a, &b, &a)? {
                    return Ok(CounterexampleSearch {
                        found: Some(VerifiedTriple {
                            a: a.clone(),
                            b,
                            c: a,
                            pattern: "cycle ideal over its graded floor",
                        }),
                        rejected,
                    });
                }
                rejected += 1;
            }
        }

        for (a, b, c) in random_candidates {
            if self.verify_triple(a, b, c)? {
                return Ok(CounterexampleSearch {
                    found: Some(VerifiedTriple {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                        pattern: "random search",
                    }),
                    rejected,
                });
            }
        }

        Ok(CounterexampleSearch {
            found: None,
            rejected,
        })
    }
}

pub struct PrimeFrame {
    pub pair: AdmissiblePair,
    pub cycle: Cycle,
    pub sample_polys: Vec<Poly>,
}

pub struct PrimeEnumeration {
    pub graded: Vec<IdealForm>,
    pub frames: Vec<PrimeFrame>,
}

#[derive(Clone, Debug)]
pub struct CancellationReport {
    pub holds: bool,
    pub clause_a: Option<String>,
    pub clause_b: Option<String>,
}

#[derive(Clone, Debug)]
pub struct VerifiedTriple {
    pub a: IdealForm,
    pub b: IdealForm,
    pub c: IdealForm,
    pub pattern: &'static str,
}

#[derive(Clone, Debug)]
pub struct CounterexampleSearch {
    pub found: Option<VerifiedTriple>,
    pub rejected: usize,
}

/// Auxiliary: the join of two pairs through the enumerated poset, exposed
/// so reports can cross-check sums of graded ideals against it.
pub fn graded_join(engine: &Engine, a: &AdmissiblePair, b: &AdmissiblePair) -> AdmissiblePair {
    pair_join(engine.pairs(), a, b)
}

/// Auxiliary dual of `graded_join`.
pub fn graded_meet(engine: &Engine, a: &AdmissiblePair, b: &AdmissiblePair) -> AdmissiblePair {
    pair_meet(engine.pairs(), a, b)
}
