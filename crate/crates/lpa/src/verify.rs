//! Seeded random generation and the property suites. Every suite is
//! deterministic given (config, seed): each trial derives its own rng from
//! the master seed and the trial index, so reports are reproducible and
//! trials are order-independent. Failure cases carry a self-contained
//! shell reproduction script.
//!
//! The identity suites never use the identity under test to compute either
//! side; both sides go through the engine's frozen rule tables, and the
//! oracle suites check those tables against the two independent models.

use crate::dsl;
use crate::field::{Field, FieldElem};
use crate::graph::{Cycle, Graph, GraphError, Multiplicity, VertexId, VertexSet};
use crate::ideal::{Engine, EngineError, IdealForm, IdealOrder};
use crate::laurent::LaurentScenario;
use crate::oracle::{check_against_symbolic, ConcreteAlgebra, OracleError, SparseVec};
use crate::poly::Poly;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_vertices: usize,
    pub edge_density: f64,
    pub omega_prob: f64,
    pub cycle_bias: f64,
    pub field: Field,
    pub poly_degree_cap: usize,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_vertices: 6,
            edge_density: 0.35,
            omega_prob: 0.15,
            cycle_bias: 0.5,
            field: Field::Q,
            poly_degree_cap: 3,
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn render(&self) -> String {
        format!(
            "max_vertices={} edge_density={} omega_prob={} cycle_bias={} field={} poly_degree_cap={} seed={}",
            self.max_vertices,
            self.edge_density,
            self.omega_prob,
            self.cycle_bias,
            self.field,
            self.poly_degree_cap,
            self.seed,
        )
    }

    pub fn hash_hex(&self) -> String {
        let mut h = DefaultHasher::new();
        self.render().hash(&mut h);
        format!("{:016x}", h.finish())
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct FailureCase {
    pub trial: usize,
    pub description: String,
    pub repro: String,
}

#[derive(Serialize, Clone, Debug)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<FailureCase>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
    pub seed: u64,
    pub config: String,
    pub config_hash: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(trial as u64)))
}

enum Stratum {
    Acyclic,
    PlantedCycle,
    OmegaHeavy,
    Free,
}

fn stratum_for(trial: usize) -> Stratum {
    match trial % 20 {
        0..=4 => Stratum::Acyclic,
        5..=9 => Stratum::PlantedCycle,
        10..=13 => Stratum::OmegaHeavy,
        _ => Stratum::Free,
    }
}

fn random_mult(rng: &mut ChaCha8Rng, omega_prob: f64) -> Multiplicity {
    if rng.gen_bool(omega_prob.clamp(0.0, 1.0)) {
        Multiplicity::Infinite
    } else if rng.gen_bool(0.25) {
        Multiplicity::Finite(2)
    } else {
        Multiplicity::Finite(1)
    }
}

/// Random graph for one trial. The stratum rotates with the trial index:
/// a quarter acyclic, a quarter with a planted exit-free cycle, a fifth
/// with heavy infinite bundles, the rest free-form.
pub fn random_graph(
    cfg: &GenConfig,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Graph, GraphError> {
    random_graph_in(cfg, trial, rng, stratum_for(trial), cfg.edge_density)
}

fn random_graph_in(
    cfg: &GenConfig,
    trial: usize,
    rng: &mut ChaCha8Rng,
    stratum: Stratum,
    density: f64,
) -> Result<Graph, GraphError> {
    let cap = cfg.max_vertices.clamp(1, 8);
    let n = rng.gen_range(1..=cap);
    let names: Vec<String> = (0..n)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut g = Graph::new(&format!("r{trial}"), &refs)?;
    let density = density.clamp(0.0, 1.0);
    match stratum {
        Stratum::Acyclic => {
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(density) {
                        let m = if rng.gen_bool(0.25) { 2 } else { 1 };
                        g.add_edge(VertexId(i), VertexId(j), Multiplicity::Finite(m))?;
                    }
                }
            }
        }
        Stratum::PlantedCycle => {
            let len = rng.gen_range(1..=n);
            for i in 0..len {
                g.add_edge(
                    VertexId(i),
                    VertexId((i + 1) % len),
                    Multiplicity::Finite(1),
                )?;
            }
            for src in len..n {
                for dst in 0..n {
                    if src != dst && rng.gen_bool(density) {
                        g.add_edge(
                            VertexId(src),
                            VertexId(dst),
                            random_mult(rng, cfg.omega_prob),
                        )?;
                    }
                }
            }
        }
        Stratum::OmegaHeavy => {
            let omega = cfg.omega_prob.max(0.5);
            for src in 0..n {
                for dst in 0..n {
                    let allow = if dst > src {
                        density
                    } else {
                        density * cfg.cycle_bias
                    };
                    if rng.gen_bool(allow.clamp(0.0, 1.0)) {
                        g.add_edge(VertexId(src), VertexId(dst), random_mult(rng, omega))?;
                    }
                }
            }
        }
        Stratum::Free => {
            for src in 0..n {
                for dst in 0..n {
                    let allow = if dst > src {
                        density
                    } else {
                        density * cfg.cycle_bias
                    };
                    if rng.gen_bool(allow.clamp(0.0, 1.0)) {
                        g.add_edge(
                            VertexId(src),
                            VertexId(dst),
                            random_mult(rng, cfg.omega_prob),
                        )?;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// Builds the engine for a trial graph, regenerating with lower density
/// when a cap (cycle count, pair count) trips.
fn trial_engine(cfg: &GenConfig, trial: usize, rng: &mut ChaCha8Rng) -> Result<Engine, String> {
    let mut density = cfg.edge_density;
    for _ in 0..20 {
        let g = random_graph_in(cfg, trial, rng, stratum_for(trial), density)
            .map_err(|e| e.to_string())?;
        match Engine::new(g, cfg.field) {
            Ok(e) => return Ok(e),
            Err(EngineError::Graph(GraphError::TooManyCycles(_)))
            | Err(EngineError::Pair(crate::pairs::PairError::TooManyPairs(_))) => {
                density /= 2.0;
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Err("random graph stayed over the cycle and pair caps".to_string())
}

/// Random polynomial suitable for a cycle part: degree at least one,
/// nonzero constant term. Coefficients are small.
pub fn random_part_poly(field: Field, degree_cap: usize, rng: &mut ChaCha8Rng) -> Poly {
    let d = rng.gen_range(1..=degree_cap.max(1));
    let mut coeffs: Vec<i64> = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let c = match field {
            Field::Q => {
                if i == 0 || i == d {
                    *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap()
                } else {
                    rng.gen_range(-3..=3)
                }
            }
            Field::Fp(p) => {
                let p = p as i64;
                if i == 0 || i == d {
                    rng.gen_range(1..p.max(2))
                } else {
                    rng.gen_range(0..p.max(2))
                }
            }
        };
        coeffs.push(c);
    }
    Poly::from_i64s(field, &coeffs)
}

/// Random ideal: an admissible pair drawn uniformly from the enumerated
/// lattice, plus up to two cycle parts over exit-free cycles.
pub fn random_ideal(
    engine: &Engine,
    cfg: &GenConfig,
    rng: &mut ChaCha8Rng,
) -> Result<IdealForm, EngineError> {
    let pairs = engine.pairs();
    let pair = pairs[rng.gen_range(0..pairs.len())].clone();
    let candidates: Vec<&Cycle> = engine
        .cycles()
        .iter()
        .filter(|c| engine.graph().is_exit_free(c, &pair.h, &pair.s))
        .collect();
    let max_parts = candidates.len().min(2);
    let k = if max_parts == 0 {
        0
    } else {
        rng.gen_range(0..=max_parts)
    };
    let chosen: Vec<&&Cycle> = candidates.choose_multiple(rng, k).collect();
    let parts: Vec<(Cycle, Poly)> = chosen
        .into_iter()
        .map(|c| {
            (
                (*c).clone(),
                random_part_poly(cfg.field, cfg.poly_degree_cap, rng),
            )
        })
        .collect();
    engine.normalize(&pair.h, &pair.s, parts)
}

fn random_vertex_subset(graph: &Graph, rng: &mut ChaCha8Rng) -> VertexSet {
    graph.vertices().filter(|_| rng.gen_bool(0.4)).collect()
}

fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "'\\''"))
}

fn repro_script(graph: &Graph, field: Field, lets: &[(&str, String)], tail: &str) -> String {
    let mut s = String::new();
    s.push_str("f=$(mktemp /tmp/lpa-XXXXXX.graph)\n");
    s.push_str("cat > \"$f\" <<'GRAPH'\n");
    s.push_str(&dsl::print_graph(graph));
    s.push_str("GRAPH\n");
    s.push_str(&format!("lpa op \"$f\" --field {field}"));
    for (name, literal) in lets {
        s.push_str(&format!(" --let {name}={}", shell_quote(literal)));
    }
    s.push(' ');
    s.push_str(tail);
    s.push('\n');
    s
}

fn run_suite(
    name: &str,
    cfg: &GenConfig,
    trials: usize,
    mut body: impl FnMut(
        usize,
        &mut ChaCha8Rng,
        &mut Vec<String>,
    ) -> Result<Option<FailureCase>, String>,
) -> SuiteReport {
    let start = Instant::now();
    let mut failures = 0usize;
    let mut first_failure = None;
    let mut notes = Vec::new();
    for trial in 0..trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let outcome = body(trial, &mut rng, &mut notes);
        let failure = match outcome {
            Ok(None) => None,
            Ok(Some(f)) => Some(f),
            Err(e) => Some(FailureCase {
                trial,
                description: e,
                repro: String::new(),
            }),
        };
        if let Some(f) = failure {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(f);
            }
        }
    }
    SuiteReport {
        schema: "lpa/1".to_string(),
        suite: name.to_string(),
        trials,
        failures,
        first_failure,
        notes,
        elapsed_ms: start.elapsed().as_millis(),
        seed: cfg.seed,
        config: cfg.render(),
        config_hash: cfg.hash_hex(),
    }
}

fn trial_setup(
    cfg: &GenConfig,
    fixed: Option<&Graph>,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Engine, String> {
    match fixed {
        Some(g) => Engine::new(g.clone(), cfg.field).map_err(|e| e.to_string()),
        None => trial_engine(cfg, trial, rng),
    }
}

/// A(B&C) = AB & AC on random triples.
pub fn suite_distributivity(cfg: &GenConfig, fixed: Option<&Graph>, trials: usize) -> SuiteReport {
    run_suite("t4", cfg, trials, |trial, rng, _notes| {
        let engine = trial_setup(cfg, fixed, trial, rng)?;
        let a = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let b = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let c = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let run = || -> Result<(IdealForm, IdealForm), EngineError> {
            let lhs = engine.product(&a, &engine.intersect(&b, &c)?)?;
            let rhs = engine.intersect(&engine.product(&a, &b)?, &engine.product(&a, &c)?)?;
            Ok((lhs, rhs))
        };
        let (lhs, rhs) = run().map_err(|e| e.to_string())?;
        if lhs == rhs {
            return Ok(None);
        }
        let g = engine.graph();
        Ok(Some(FailureCase {
            trial,
            description: format!(
                "A(B&C) = {} but (A*B)&(A*C) = {} with A = {}, B = {}, C = {}",
                lhs.render(g),
                rhs.render(g),
                a.render(g),
                b.render(g),
                c.render(g),
            ),
            repro: repro_script(
                g,
                cfg.field,
                &[("A", a.render(g)), ("B", b.render(g)), ("C", c.render(g))],
                "--compare 'A*(B&C)' '(A*B)&(A*C)'",
            ),
        }))
    })
}

/// (A+B)(A&B) = AB on random pairs.
pub fn suite_sum_intersection_product(
    cfg: &GenConfig,
    fixed: Option<&Graph>,
    trials: usize,
) -> SuiteReport {
    run_suite("t5", cfg, trials, |trial, rng, _notes| {
        let engine = trial_setup(cfg, fixed, trial, rng)?;
        let a = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let b = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let run = || -> Result<(IdealForm, IdealForm), EngineError> {
            let lhs = engine.product(&engine.sum(&a, &b)?, &engine.intersect(&a, &b)?)?;
            let rhs = engine.product(&a, &b)?;
            Ok((lhs, rhs))
        };
        let (lhs, rhs) = run().map_err(|e| e.to_string())?;
        if lhs == rhs {
            return Ok(None);
        }
        let g = engine.graph();
        Ok(Some(FailureCase {
            trial,
            description: format!(
                "(A+B)(A&B) = {} but A*B = {} with A = {}, B = {}",
                lhs.render(g),
                rhs.render(g),
                a.render(g),
                b.render(g),
            ),
            repro: repro_script(
                g,
                cfg.field,
                &[("A", a.render(g)), ("B", b.render(g))],
                "--compare '(A+B)*(A&B)' 'A*B'",
            ),
        }))
    })
}

/// Prior-result sanity: commutativity, graded absorption, distributivity
/// of intersection over sum, the modular law, and the lattice absorptions.
pub fn suite_axioms(cfg: &GenConfig, fixed: Option<&Graph>, trials: usize) -> SuiteReport {
    run_suite("axioms", cfg, trials, |trial, rng, _notes| {
        let engine = trial_setup(cfg, fixed, trial, rng)?;
        let a = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let b = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let c = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
        let pair_idx = rng.gen_range(0..engine.pairs().len());
        let graded = engine
            .graded(&engine.pairs()[pair_idx].clone())
            .map_err(|e| e.to_string())?;
        let g = engine.graph();

        let mut checks: Vec<(&str, IdealForm, IdealForm, String)> = Vec::new();
        let run = || -> Result<Vec<(&str, IdealForm, IdealForm, String)>, EngineError> {
            let mut out = Vec::new();
            out.push((
                "commutativity",
                engine.product(&a, &b)?,
                engine.product(&b, &a)?,
                "--compare 'A*B' 'B*A'".to_string(),
            ));
            out.push((
                "graded product equals intersection",
                engine.product(&graded, &a)?,
                engine.intersect(&graded, &a)?,
                "--compare 'G*A' 'G&A'".to_string(),
            ));
            out.push((
                "intersection distributes over sum",
                engine.intersect(&a, &engine.sum(&b, &c)?)?,
                engine.sum(&engine.intersect(&a, &b)?, &engine.intersect(&a, &c)?)?,
                "--compare 'A&(B+C)' '(A&B)+(A&C)'".to_string(),
            ));
            let inside = engine.intersect(&c, &a)?;
            out.push((
                "modular law",
                engine.intersect(&a, &engine.sum(&b, &inside)?)?,
                engine.sum(&engine.intersect(&a, &b)?, &inside)?,
                "--compare 'A&(B+(C&A))' '(A&B)+(C&A)'".to_string(),
            ));
            out.push((
                "absorption over sum",
                engine.sum(&a, &engine.intersect(&a, &b)?)?,
                a.clone(),
                "--compare 'A+(A&B)' 'A'".to_string(),
            ));
            out.push((
                "absorption over intersection",
                engine.intersect(&a, &engine.sum(&a, &b)?)?,
                a.clone(),
                "--compare 'A&(A+B)' 'A'".to_string(),
            ));
            Ok(out)
        };
        checks.extend(run().map_err(|e| e.to_string())?);
        for (label, lhs, rhs, compare) in checks {
            if lhs != rhs {
                return Ok(Some(FailureCase {
                    trial,
                    description: format!(
                        "{label}: {} != {} with A = {}, B = {}, C = {}, G = {}",
                        lhs.render(g),
                        rhs.render(g),
                        a.render(g),
                        b.render(g),
                        c.render(g),
                        graded.render(g),
                    ),
                    repro: repro_script(
                        g,
                        cfg.field,
                        &[
                            ("A", a.render(g)),
                            ("B", b.render(g)),
                            ("C", c.render(g)),
                            ("G", graded.render(g)),
                        ],
                        &compare,
                    ),
                }));
            }
        }
        Ok(None)
    })
}

struct PrimePick {
    prime: IdealForm,
    frame_poly: Option<(Cycle, Poly)>,
    other_poly: Option<Poly>,
}

fn pick_prime(engine: &Engine, rng: &mut ChaCha8Rng) -> Result<Option<PrimePick>, EngineError> {
    let enumeration = engine.enumerate_primes()?;
    let want_frame =
        !enumeration.frames.is_empty() && (enumeration.graded.is_empty() || rng.gen_bool(0.7));
    if want_frame {
        let frame = &enumeration.frames[rng.gen_range(0..enumeration.frames.len())];
        if frame.sample_polys.is_empty() {
            return Ok(None);
        }
        let poly_idx = rng.gen_range(0..frame.sample_polys.len());
        let poly = frame.sample_polys[poly_idx].clone();
        let other = frame
            .sample_polys
            .iter()
            .enumerate()
            .find(|(i, _)| *i != poly_idx)
            .map(|(_, p)| p.clone());
        let prime = engine.normalize(
            &frame.pair.h,
            &frame.pair.s,
            vec![(frame.cycle.clone(), poly.clone())],
        )?;
        return Ok(Some(PrimePick {
            prime,
            frame_poly: Some((frame.cycle.clone(), poly)),
            other_poly: other,
        }));
    }
    if enumeration.graded.is_empty() {
        return Ok(None);
    }
    let prime = enumeration.graded[rng.gen_range(0..enumeration.graded.len())].clone();
    Ok(Some(PrimePick {
        prime,
        frame_poly: None,
        other_poly: None,
    }))
}

fn engine_with_prime(
    cfg: &GenConfig,
    fixed: Option<&Graph>,
    trial: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Engine, PrimePick), String> {
    for _ in 0..50 {
        let engine = trial_setup(cfg, fixed, trial, rng)?;
        if let Some(pick) = pick_prime(&engine, rng).map_err(|e| e.to_string())? {
            return Ok((engine, pick));
        }
        if fixed.is_some() {
            break;
        }
    }
    Err("no prime ideal found in fifty graphs".to_string())
}

/// Radical-prime ideals factor as prime powers, and a non-prime-radical
/// control is rejected.
pub fn suite_prime_powers(cfg: &GenConfig, fixed: Option<&Graph>, trials: usize) -> SuiteReport {
    run_suite("t6", cfg, trials, |trial, rng, _notes| {
        let (engine, pick) = engine_with_prime(cfg, fixed, trial, rng)?;
        let g = engine.graph();
        let n = rng.gen_range(1..=4u32);
        let run = || -> Result<Option<String>, EngineError> {
            let ideal = engine.power(&pick.prime, n)?;
            let (root, m) = engine.prime_power_factor(&ideal)?;
            let expected_m = if pick.frame_poly.is_some() { n } else { 1 };
            if root != pick.prime || m != expected_m {
                return Ok(Some(format!(
                    "power {} of {} factored as ({}, {}), expected ({}, {})",
                    n,
                    pick.prime.render(g),
                    root.render(g),
                    m,
                    pick.prime.render(g),
                    expected_m,
                )));
            }
            if let (Some((cycle, p)), Some(q)) = (&pick.frame_poly, &pick.other_poly) {
                let control = engine.normalize(
                    &pick.prime.pair().h,
                    &pick.prime.pair().s,
                    vec![(cycle.clone(), p.mul(q))],
                )?;
                match engine.prime_power_factor(&control) {
                    Err(EngineError::NotPrimeRadical(_)) => {}
                    Ok((r, k)) => {
                        return Ok(Some(format!(
                            "control {} wrongly factored as ({}, {})",
                            control.render(g),
                            r.render(g),
                            k,
                        )));
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(None)
        };
        match run().map_err(|e| e.to_string())? {
            None => Ok(None),
            Some(description) => Ok(Some(FailureCase {
                trial,
                description,
                repro: repro_script(
                    g,
                    cfg.field,
                    &[(
                        "I",
                        engine
                            .power(&pick.prime, n)
                            .map(|i| i.render(g))
                            .unwrap_or_default(),
                    )],
                    "--prime-power 'I'",
                ),
            })),
        }
    })
}

/// No ideal sits strictly between consecutive prime powers, and nongraded
/// prime power chains are strictly decreasing.
pub fn suite_power_gaps(cfg: &GenConfig, fixed: Option<&Graph>, trials: usize) -> SuiteReport {
    run_suite("c7", cfg, trials, |trial, rng, _notes| {
        let (engine, pick) = engine_with_prime(cfg, fixed, trial, rng)?;
        let g = engine.graph();
        let n = rng.gen_range(1..=3u32);
        let mut run = || -> Result<Option<String>, EngineError> {
            let pn = engine.power(&pick.prime, n)?;
            let pn1 = engine.power(&pick.prime, n + 1)?;
            let inner = match &pick.frame_poly {
                Some((cycle, p)) => {
                    let extra = random_part_poly(cfg.field, cfg.poly_degree_cap, rng);
                    let factor = if rng.gen_bool(0.5) {
                        extra
                    } else {
                        p.mul(&extra)
                    };
                    engine.normalize(
                        &pick.prime.pair().h,
                        &pick.prime.pair().s,
                        vec![(cycle.clone(), p.pow(n).mul(&factor))],
                    )?
                }
                None => {
                    let j = random_ideal(&engine, cfg, rng)?;
                    engine.intersect(&pn, &j)?
                }
            };
            assert!(
                matches!(
                    engine.compare(&inner, &pn)?,
                    IdealOrder::Less | IdealOrder::Equal
                ),
                "constructed perturbation escaped the prime power"
            );
            let a = engine.sum(&pn1, &inner)?;
            if a != pn && a != pn1 {
                return Ok(Some(format!(
                    "{} sits strictly between {} and {}",
                    a.render(g),
                    pn1.render(g),
                    pn.render(g),
                )));
            }
            if pick.frame_poly.is_some() {
                let p2 = engine.power(&pick.prime, 2)?;
                let p3 = engine.power(&pick.prime, 3)?;
                if engine.compare(&p2, &pick.prime)? != IdealOrder::Less
                    || engine.compare(&p3, &p2)? != IdealOrder::Less
                {
                    return Ok(Some(format!(
                        "powers of {} do not decrease strictly",
                        pick.prime.render(g),
                    )));
                }
            } else {
                let p2 = engine.power(&pick.prime, 2)?;
                if p2 != pick.prime {
                    return Ok(Some(format!(
                        "graded prime {} is not idempotent",
                        pick.prime.render(g),
                    )));
                }
            }
            Ok(None)
        };
        match run().map_err(|e| e.to_string())? {
            None => Ok(None),
            Some(description) => Ok(Some(FailureCase {
                trial,
                description,
                repro: format!(
                    "# rebuild with: lpa verify --random --suite c7 --trials {} --seed {} --field {}\n",
                    trial + 1,
                    cfg.seed,
                    cfg.field,
                ),
            })),
        }
    })
}

/// Cancellation analysis per graph: the literal structural verdict, plus a
/// verified counterexample search. A true verdict with a verified violation
/// or a false verdict with no witness found is recorded as a note, not a
/// failure: the engine is answering honestly in both cases and the notes
/// surface where the structural clauses and desk search disagree.
pub fn suite_cancellation(
    cfg: &GenConfig,
    fixed: Option<&Graph>,
    fixture_graphs: &[Graph],
    trials: usize,
    fuzz_triples: usize,
) -> SuiteReport {
    let mut graphs: Vec<Graph> = Vec::new();
    match fixed {
        Some(g) => graphs.push(g.clone()),
        None => graphs.extend(fixture_graphs.iter().cloned()),
    }
    let planned = graphs.len().max(trials);
    run_suite("cancel", cfg, planned, move |trial, rng, notes| {
        let engine = if trial < graphs.len() {
            Engine::new(graphs[trial].clone(), cfg.field).map_err(|e| e.to_string())?
        } else {
            trial_engine(cfg, trial, rng)?
        };
        let g = engine.graph();
        let report = engine.cancellation_check().map_err(|e| e.to_string())?;
        let mut randoms = Vec::new();
        for _ in 0..fuzz_triples {
            let a = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
            let b = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
            let c = random_ideal(&engine, cfg, rng).map_err(|e| e.to_string())?;
            randoms.push((a, b, c));
        }
        let search = engine
            .cancellation_counterexample(&randoms)
            .map_err(|e| e.to_string())?;
        if search.rejected > 0 {
            return Ok(Some(FailureCase {
                trial,
                description: format!(
                    "{}: {} structural counterexample candidates failed verification",
                    g.name(),
                    search.rejected,
                ),
                repro: format!(
                    "lpa cancel <{}.graph> --field {} --seed {}\n",
                    g.name(),
                    cfg.field,
                    cfg.seed,
                ),
            }));
        }
        match (&report.holds, &search.found) {
            (true, Some(t)) => notes.push(format!(
                "{}: structural verdict says cancellation holds, yet ({}, {}, {}) is a verified violation ({})",
                g.name(),
                t.a.render(g),
                t.b.render(g),
                t.c.render(g),
                t.pattern,
            )),
            (false, None) => notes.push(format!(
                "{}: structural verdict says cancellation fails, but no witness surfaced within the search budget",
                g.name(),
            )),
            _ => {}
        }
        Ok(None)
    })
}

/// Acyclic concrete-model equivalence plus associativity spot checks.
pub fn suite_oracle_acyclic(cfg: &GenConfig, graphs: usize, sets_per_graph: usize) -> SuiteReport {
    let mut total_sets = 0usize;
    let mut total_checks = 0usize;
    let mut report = run_suite("oracle-acyclic", cfg, graphs, |trial, rng, _notes| {
        let mut built: Option<(Engine, ConcreteAlgebra)> = None;
        let mut density = cfg.edge_density;
        for _ in 0..50 {
            let g = random_graph_in(cfg, trial, rng, Stratum::Acyclic, density)
                .map_err(|e| e.to_string())?;
            match ConcreteAlgebra::build(&g, cfg.field) {
                Ok(model) => {
                    let engine = Engine::new(g, cfg.field).map_err(|e| e.to_string())?;
                    built = Some((engine, model));
                    break;
                }
                Err(OracleError::TooBig(_)) => {
                    density /= 2.0;
                }
                Err(e) => return Err(e.to_string()),
            }
        }
        let (engine, model) = built.ok_or("could not build a concrete model")?;

        let expected_dim: usize = model.block_sizes().iter().map(|n| n * n).sum();
        if model.dim() != expected_dim {
            return Ok(Some(FailureCase {
                trial,
                description: format!(
                    "dimension {} does not match the block formula {}",
                    model.dim(),
                    expected_dim,
                ),
                repro: String::new(),
            }));
        }
        if model.vertex_ideal_count(engine.graph()) != engine.pairs().len() {
            return Ok(Some(FailureCase {
                trial,
                description: format!(
                    "{} concrete ideals but {} admissible pairs on {}",
                    model.vertex_ideal_count(engine.graph()),
                    engine.pairs().len(),
                    dsl::print_graph(engine.graph()),
                ),
                repro: String::new(),
            }));
        }
        for _ in 0..20 {
            let units = |rng: &mut ChaCha8Rng| -> SparseVec {
                let mut v = SparseVec::new();
                for _ in 0..rng.gen_range(1..=3usize) {
                    let idx = rng.gen_range(0..model.dim());
                    v.insert(idx, random_field_elem(cfg.field, rng));
                }
                v
            };
            let x = units(rng);
            let y = units(rng);
            let z = units(rng);
            if model.mul(&model.mul(&x, &y), &z) != model.mul(&x, &model.mul(&y, &z)) {
                return Ok(Some(FailureCase {
                    trial,
                    description: "concrete multiplication is not associative".to_string(),
                    repro: String::new(),
                }));
            }
        }
        for _ in 0..sets_per_graph {
            let gens_a = random_vertex_subset(engine.graph(), rng);
            let gens_b = random_vertex_subset(engine.graph(), rng);
            let mismatches = check_against_symbolic(&engine, &model, &gens_a, &gens_b)
                .map_err(|e| e.to_string())?;
            total_sets += 2;
            total_checks += 5;
            if let Some(m) = mismatches.first() {
                return Ok(Some(FailureCase {
                    trial,
                    description: format!("{m}\non graph:\n{}", dsl::print_graph(engine.graph()),),
                    repro: String::new(),
                }));
            }
        }
        Ok(None)
    });
    report.notes.push(format!(
        "{} generator sets, {} dictionary checks",
        total_sets, total_checks,
    ));
    report
}

fn random_field_elem(field: Field, rng: &mut ChaCha8Rng) -> FieldElem {
    match field {
        Field::Q => field.from_i64(*[-2i64, -1, 1, 2, 3].choose(rng).unwrap()),
        Field::Fp(p) => field.from_i64(rng.gen_range(1..p as i64)),
    }
}

/// Laurent-model equivalence over caller-supplied loop scenarios.
pub fn suite_oracle_laurent(
    cfg: &GenConfig,
    scenarios: &[LaurentScenario],
    pairs_per_scenario: usize,
) -> SuiteReport {
    let mut total_pairs = 0usize;
    let mut report = run_suite(
        "oracle-laurent",
        cfg,
        scenarios.len(),
        |trial, rng, _notes| {
            let scenario = &scenarios[trial];
            for _ in 0..pairs_per_scenario {
                let f = random_laurent_poly(cfg, rng);
                let g = random_laurent_poly(cfg, rng);
                total_pairs += 1;
                let mismatches = scenario.check_pair(&f, &g).map_err(|e| e.to_string())?;
                if let Some(m) = mismatches.first() {
                    return Ok(Some(FailureCase {
                        trial,
                        description: m.clone(),
                        repro: String::new(),
                    }));
                }
            }
            Ok(None)
        },
    );
    report.notes.push(format!("{total_pairs} polynomial pairs"));
    report
}

fn random_laurent_poly(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Poly {
    let roll: f64 = rng.gen();
    if roll < 0.05 {
        return Poly::zero(cfg.field);
    }
    if roll < 0.12 {
        return Poly::from_i64s(cfg.field, &[rng.gen_range(1..=3)]);
    }
    let base = random_part_poly(cfg.field, cfg.poly_degree_cap.max(2), rng);
    if rng.gen_bool(0.35) {
        let other = random_part_poly(cfg.field, 2, rng);
        base.mul(&other)
    } else {
        base
    }
}
