//! Ground truth number two: Laurent polynomial arithmetic for cycle parts.
//!
//! A scenario fixes a graph, a floor (the graded ideal generated by some
//! vertices) and one cycle that has no exits once the floor is removed.
//! The ideals of the form floor + (cycle, f) then mirror the principal
//! ideals of K[x, x^-1]: sums go to gcds, products to polynomial products,
//! intersections to lcms, radicals to squarefree parts, and containment to
//! divisibility. Both sides of each check are computed independently; the
//! engine side through its rule tables, the expected side through plain
//! polynomial arithmetic plus the lift.

use crate::field::Field;
use crate::graph::{Cycle, Graph, VertexSet};
use crate::ideal::{Engine, EngineError, IdealForm, IdealOrder};
use crate::poly::{laurent_canonical, poly_gcd, poly_lcm, squarefree_part, Poly};

pub struct LaurentScenario {
    name: String,
    engine: Engine,
    floor_gens: VertexSet,
    cycle: Cycle,
}

impl LaurentScenario {
    pub fn new(
        name: &str,
        graph: Graph,
        field: Field,
        floor_names: &[&str],
        cycle_names: &[&str],
    ) -> Result<LaurentScenario, String> {
        let mut floor_gens = VertexSet::new();
        for n in floor_names {
            floor_gens.insert(graph.vertex_by_name(n).map_err(|e| e.to_string())?);
        }
        let mut cycle_ids = Vec::new();
        for n in cycle_names {
            cycle_ids.push(graph.vertex_by_name(n).map_err(|e| e.to_string())?);
        }
        let cycle = Cycle::new(&graph, &cycle_ids)?;
        let engine = Engine::new(graph, field).map_err(|e| e.to_string())?;
        Ok(LaurentScenario {
            name: name.to_string(),
            engine,
            floor_gens,
            cycle,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn engine(&self) -> &Engine {
        &self.engine
    }

    /// The ideal generated by the floor vertices and f evaluated on the
    /// cycle. Zero polynomials lift to the floor alone.
    pub fn lift(&self, f: &Poly) -> Result<IdealForm, EngineError> {
        if f.is_zero() {
            return self.engine.ideal_from_vertices(&self.floor_gens);
        }
        self.engine.normalize(
            &self.floor_gens,
            &VertexSet::new(),
            vec![(self.cycle.clone(), f.clone())],
        )
    }

    /// Runs every operation on a pair of lifted polynomials and compares
    /// against the Laurent-side expectation. Returns mismatch descriptions.
    pub fn check_pair(&self, f: &Poly, g: &Poly) -> Result<Vec<String>, EngineError> {
        let mut mismatches = Vec::new();
        let graph = self.engine.graph();
        let a = self.lift(f)?;
        let b = self.lift(g)?;

        let mut expect = |label: &str, got: &IdealForm, want: &IdealForm| {
            if got != want {
                mismatches.push(format!(
                    "{} on {}: engine {}, Laurent side {} (f = {}, g = {})",
                    label,
                    self.name,
                    got.render(graph),
                    want.render(graph),
                    f,
                    g,
                ));
            }
        };

        let sum = self.engine.sum(&a, &b)?;
        let expected_sum = if f.is_zero() && g.is_zero() {
            self.lift(&Poly::zero(self.engine.field()))?
        } else {
            self.lift(&poly_gcd(f, g)?)?
        };
        expect("sum vs gcd", &sum, &expected_sum);

        let product = self.engine.product(&a, &b)?;
        expect(
            "product vs polynomial product",
            &product,
            &self.lift(&f.mul(g))?,
        );

        let meet = self.engine.intersect(&a, &b)?;
        expect("intersection vs lcm", &meet, &self.lift(&poly_lcm(f, g)?)?);

        let radical = self.engine.radical(&a)?;
        let expected_radical = if f.is_zero() {
            self.lift(f)?
        } else {
            self.lift(&squarefree_part(f)?)?
        };
        expect("radical vs squarefree part", &radical, &expected_radical);

        if !f.is_zero() && !g.is_zero() {
            let engine_le = matches!(
                self.engine.compare(&a, &b)?,
                IdealOrder::Equal | IdealOrder::Less
            );
            let laurent_le = laurent_canonical(g)?.divides(&laurent_canonical(f)?);
            if engine_le != laurent_le {
                mismatches.push(format!(
                    "containment on {}: engine says {}, divisibility says {} (f = {}, g = {})",
                    self.name, engine_le, laurent_le, f, g,
                ));
            }
        }

        Ok(mismatches)
    }
}

/// The three loop scenarios used by the oracle suite, built from any graphs
/// with the right shape: a bare loop, a loop feeding a swallowed loop, and
/// a loop feeding a shared sink.
pub fn standard_scenarios(
    field: Field,
    graphs: Vec<(Graph, Vec<&str>, Vec<&str>)>,
) -> Result<Vec<LaurentScenario>, String> {
    graphs
        .into_iter()
        .map(|(g, floor, cycle)| {
            let name = g.name().to_string();
            LaurentScenario::new(&name, g, field, &floor, &cycle)
        })
        .collect()
}
