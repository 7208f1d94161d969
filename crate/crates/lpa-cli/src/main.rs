use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use lpa::dsl::{self, DslError};
use lpa::graph::VertexSet;
use lpa::ideal::{EngineError, IdealOrder};
use lpa::laurent::standard_scenarios;
use lpa::poly::{is_irreducible, Poly};
use lpa::verify::{
    random_ideal, suite_axioms, suite_cancellation, suite_distributivity, suite_oracle_acyclic,
    suite_oracle_laurent, suite_power_gaps, suite_prime_powers, suite_sum_intersection_product,
    trial_rng, GenConfig, SuiteReport,
};
use lpa::{fixtures, Engine, Field, Graph, IdealForm};
use serde_json::json;
use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

const SCHEMA: &str = "lpa/1";

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("unknown field `{s}`; use q or f<p> for a small prime"))
}

#[derive(Parser)]
#[command(
    name = "lpa",
    version,
    about = "Ideal lattice arithmetic for Leavitt path algebras"
)]
struct Cli {
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Coefficient field: q, or f<p> for a small prime p
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report vertex classes, graph conditions, and the graded lattice
    Analyze {
        /// Graph file (`-` reads stdin)
        file: String,
    },
    /// Enumerate prime ideals: graded primes plus nongraded cycle frames
    Primes {
        /// Graph file (`-` reads stdin)
        file: String,
        /// Instantiate each frame with irreducible polynomials up to this degree
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// Evaluate ideal expressions against a graph
    Op(OpArgs),
    /// Decide multiplicative cancellation and search for counterexamples
    Cancel {
        /// Graph file (`-` reads stdin)
        file: String,
        /// Random triples to try beyond the structural patterns
        #[arg(long, default_value_t = 500)]
        random_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a randomized identity suite and report pass/fail
    Verify {
        /// Graph file, or `random` (the default) for generated graphs
        file: Option<String>,
        #[arg(long, value_enum)]
        suite: VerifySuite,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random triples per graph in the cancel suite
        #[arg(long, default_value_t = 500)]
        fuzz: usize,
    },
    /// Run a ground-truth oracle suite against the symbolic engine
    Oracle {
        #[arg(long, value_enum)]
        suite: OracleSuite,
        /// Acyclic graphs to model
        #[arg(long, default_value_t = 50)]
        graphs: usize,
        /// Generator-set draws per acyclic graph
        #[arg(long, default_value_t = 2)]
        sets: usize,
        /// Polynomial pairs per Laurent scenario
        #[arg(long, default_value_t = 70)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("action").required(true).multiple(false)))]
struct OpArgs {
    /// Graph file (`-` reads stdin)
    file: String,
    /// Bind a name to an ideal expression, evaluated in order (repeatable)
    #[arg(long = "let", value_name = "NAME=EXPR")]
    lets: Vec<String>,
    /// Evaluate one expression and print its canonical form
    #[arg(long, group = "action")]
    expr: Option<String>,
    /// Compare two expressions; exits 1 unless they are equal
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"], group = "action")]
    compare: Option<Vec<String>>,
    /// Factor an expression as a power of a prime ideal
    #[arg(long, value_name = "EXPR", group = "action")]
    prime_power: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    T4,
    T5,
    T6,
    C7,
    Axioms,
    Cancel,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleSuite {
    Acyclic,
    Laurent,
}

fn main() -> ExitCode {
    // Die quietly when the consumer of a pipe closes early, like cat does.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Analyze { file } => analyze(cli, file),
        Command::Primes { file, max_degree } => primes(cli, file, *max_degree),
        Command::Op(args) => op(cli, args),
        Command::Cancel {
            file,
            random_trials,
            seed,
        } => cancel(cli, file, *random_trials, *seed),
        Command::Verify {
            file,
            suite,
            trials,
            seed,
            fuzz,
        } => verify(cli, file.as_deref(), *suite, *trials, *seed, *fuzz),
        Command::Oracle {
            suite,
            graphs,
            sets,
            pairs,
            seed,
        } => oracle(cli, *suite, *graphs, *sets, *pairs, *seed),
    }
}

fn load_graph(path: &str) -> Result<Graph, String> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?
    };
    dsl::parse_graph(&text).map_err(|e| format!("{path}: {e}"))
}

fn load_engine(path: &str, field: Field) -> Result<Engine, String> {
    let graph = load_graph(path)?;
    Engine::new(graph, field).map_err(|e| format!("{path}: {e}"))
}

fn vertex_class(g: &Graph, v: lpa::VertexId) -> &'static str {
    if g.is_sink(v) {
        "sink"
    } else if g.is_infinite_emitter(v) {
        "infinite emitter"
    } else {
        "regular"
    }
}

fn analyze(cli: &Cli, file: &str) -> Result<u8, String> {
    let engine = load_engine(file, cli.field)?;
    let g = engine.graph();
    let l = g.condition_l().map_err(|e| e.to_string())?;
    let k = g.condition_k().map_err(|e| e.to_string())?;
    let dd = g.is_downward_directed();
    let cycles = g.cycles().map_err(|e| e.to_string())?;
    let empty = VertexSet::new();
    let subsets = g
        .hereditary_saturated_subsets()
        .map_err(|e| e.to_string())?;

    if cli.json {
        let vertices: Vec<_> = g
            .vertices()
            .map(|v| json!({"name": g.vertex_name(v), "class": vertex_class(g, v)}))
            .collect();
        let cycle_rows: Vec<_> = cycles
            .iter()
            .map(|c| {
                json!({
                    "cycle": c.render(g),
                    "exit_free": g.is_exit_free(c, &empty, &empty),
                })
            })
            .collect();
        let set_rows: Vec<_> = subsets
            .iter()
            .map(|h| {
                json!({
                    "h": g.render_set(h),
                    "breaking": g.render_set(&g.breaking_vertices(h)),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": SCHEMA,
                "graph": g.name(),
                "field": cli.field.to_string(),
                "vertices": vertices,
                "edge_bundles": g.edges().len(),
                "conditions": {"l": l, "k": k, "downward_directed": dd},
                "cycles": cycle_rows,
                "hereditary_saturated": set_rows,
                "admissible_pairs": engine.pairs().len(),
            }))
            .map_err(|e| e.to_string())?
        );
        return Ok(0);
    }

    println!(
        "graph {}: {} vertices, {} edge bundles",
        g.name(),
        g.vertex_count(),
        g.edges().len()
    );
    println!("vertex classes:");
    for v in g.vertices() {
        println!("  {}: {}", g.vertex_name(v), vertex_class(g, v));
    }
    println!(
        "conditions: L = {}, K = {}, downward directed = {}",
        yes_no(l),
        yes_no(k),
        yes_no(dd)
    );
    if cycles.is_empty() {
        println!("cycles: none");
    } else {
        println!("cycles:");
        for c in &cycles {
            let tag = if g.is_exit_free(c, &empty, &empty) {
                "exit-free"
            } else {
                "has exits"
            };
            println!("  {}: {}", c.render(g), tag);
        }
    }
    println!("hereditary saturated sets: {}", subsets.len());
    for h in &subsets {
        let b = g.breaking_vertices(h);
        if b.is_empty() {
            println!("  {}", g.render_set(h));
        } else {
            println!("  {}  B = {}", g.render_set(h), g.render_set(&b));
        }
    }
    println!("admissible pairs: {}", engine.pairs().len());
    Ok(0)
}

fn frame_samples(field: Field, max_degree: usize) -> Result<Vec<Poly>, String> {
    let coeff_range: Vec<i64> = match field {
        Field::Q => (-2..=2).collect(),
        Field::Fp(p) => (0..p.min(5) as i64).collect(),
    };
    let mut out = Vec::new();
    for degree in 1..=max_degree {
        let mut found = 0usize;
        let mut idx = vec![0usize; degree];
        'odometer: loop {
            let mut coeffs: Vec<i64> = idx.iter().map(|&i| coeff_range[i]).collect();
            coeffs.push(1);
            if coeffs[0] != 0 {
                let cand = Poly::from_i64s(field, &coeffs);
                if !cand.constant_term().is_zero()
                    && is_irreducible(&cand).map_err(|e| e.to_string())?
                {
                    out.push(cand);
                    found += 1;
                    if found >= 4 {
                        break 'odometer;
                    }
                }
            }
            let mut k = 0;
            while k < degree {
                idx[k] += 1;
                if idx[k] < coeff_range.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == degree {
                break;
            }
        }
    }
    Ok(out)
}

fn primes(cli: &Cli, file: &str, max_degree: usize) -> Result<u8, String> {
    let engine = load_engine(file, cli.field)?;
    let g = engine.graph();
    let enumeration = engine.enumerate_primes().map_err(|e| e.to_string())?;
    let samples = frame_samples(cli.field, max_degree)?;
    let sample_texts: Vec<String> = samples.iter().map(|p| p.to_string()).collect();

    if cli.json {
        let graded: Vec<String> = enumeration.graded.iter().map(|p| p.render(g)).collect();
        let frames: Vec<_> = enumeration
            .frames
            .iter()
            .map(|f| {
                json!({
                    "floor": g.render_set(&f.pair.h),
                    "breaking": g.render_set(&f.pair.s),
                    "cycle": f.cycle.render(g),
                    "sample_polys": sample_texts,
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": SCHEMA,
                "graph": g.name(),
                "field": cli.field.to_string(),
                "max_degree": max_degree,
                "graded_primes": graded,
                "frames": frames,
            }))
            .map_err(|e| e.to_string())?
        );
        return Ok(0);
    }

    println!("graded primes: {}", enumeration.graded.len());
    for p in &enumeration.graded {
        println!("  {}", p.render(g));
    }
    println!("nongraded prime frames: {}", enumeration.frames.len());
    for f in &enumeration.frames {
        println!(
            "  floor {}, {}, f irreducible",
            g.render_set(&f.pair.h),
            f.cycle.render(g)
        );
        println!(
            "    samples up to degree {}: {}",
            max_degree,
            sample_texts.join(", ")
        );
    }
    Ok(0)
}

fn valid_binding_name(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return false;
    };
    if !(first.is_alphabetic() || first == '_') {
        return false;
    }
    if !chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        return false;
    }
    !matches!(name, "whole" | "rad" | "gr" | "cycle")
}

fn eval(
    engine: &Engine,
    bindings: &BTreeMap<String, IdealForm>,
    text: &str,
) -> Result<IdealForm, String> {
    let expr = dsl::parse_expr(text).map_err(|e| format!("in `{text}`: {e}"))?;
    dsl::eval_expr(engine, bindings, &expr).map_err(|e| match e {
        DslError::UnknownName(n) => format!("in `{text}`: unknown binding `{n}`"),
        other => format!("in `{text}`: {other}"),
    })
}

fn op(cli: &Cli, args: &OpArgs) -> Result<u8, String> {
    let engine = load_engine(&args.file, cli.field)?;
    let g = engine.graph();
    let mut bindings: BTreeMap<String, IdealForm> = BTreeMap::new();
    for binding in &args.lets {
        let Some((name, text)) = binding.split_once('=') else {
            return Err(format!("binding `{binding}` is not of the form NAME=EXPR"));
        };
        let name = name.trim();
        if !valid_binding_name(name) {
            return Err(format!("`{name}` is not a usable binding name"));
        }
        let value = eval(&engine, &bindings, text)?;
        bindings.insert(name.to_string(), value);
    }

    if let Some(text) = &args.expr {
        let result = eval(&engine, &bindings, text)?;
        if cli.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": SCHEMA,
                    "result": result.render(g),
                    "graded": result.is_graded(),
                }))
                .map_err(|e| e.to_string())?
            );
        } else {
            println!("{}", result.render(g));
        }
        return Ok(0);
    }

    if let Some(pair) = &args.compare {
        let left = eval(&engine, &bindings, &pair[0])?;
        let right = eval(&engine, &bindings, &pair[1])?;
        let relation = engine.compare(&left, &right).map_err(|e| e.to_string())?;
        if cli.json {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "schema": SCHEMA,
                    "left": left.render(g),
                    "right": right.render(g),
                    "relation": relation.to_string(),
                }))
                .map_err(|e| e.to_string())?
            );
        } else {
            println!("left:  {}", left.render(g));
            println!("right: {}", right.render(g));
            println!("relation: {relation}");
        }
        return Ok(if relation == IdealOrder::Equal { 0 } else { 1 });
    }

    let text = args.prime_power.as_ref().expect("clap enforces one action");
    let form = eval(&engine, &bindings, text)?;
    match engine.prime_power_factor(&form) {
        Ok((prime, exponent)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "schema": SCHEMA,
                        "prime": prime.render(g),
                        "exponent": exponent,
                    }))
                    .map_err(|e| e.to_string())?
                );
            } else {
                println!("prime: {}", prime.render(g));
                println!("exponent: {exponent}");
            }
            Ok(0)
        }
        Err(EngineError::NotPrimeRadical(reason)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "schema": SCHEMA,
                        "prime": serde_json::Value::Null,
                        "reason": reason,
                    }))
                    .map_err(|e| e.to_string())?
                );
            } else {
                println!("not a prime power: {reason}");
            }
            Ok(1)
        }
        Err(other) => Err(other.to_string()),
    }
}

fn cancel(cli: &Cli, file: &str, random_trials: usize, seed: u64) -> Result<u8, String> {
    let engine = load_engine(file, cli.field)?;
    let g = engine.graph();
    let report = engine.cancellation_check().map_err(|e| e.to_string())?;

    let cfg = GenConfig {
        field: cli.field,
        seed,
        ..GenConfig::default()
    };
    let mut rng = trial_rng(seed, 0);
    let mut randoms = Vec::new();
    for _ in 0..random_trials {
        let a = random_ideal(&engine, &cfg, &mut rng).map_err(|e| e.to_string())?;
        let b = random_ideal(&engine, &cfg, &mut rng).map_err(|e| e.to_string())?;
        let c = random_ideal(&engine, &cfg, &mut rng).map_err(|e| e.to_string())?;
        randoms.push((a, b, c));
    }
    let search = engine
        .cancellation_counterexample(&randoms)
        .map_err(|e| e.to_string())?;

    let branch = if report.clause_a.is_some() {
        "iii_a"
    } else if report.clause_b.is_some() {
        "iii_b"
    } else {
        "none"
    };
    let clause = report.clause_a.as_ref().or(report.clause_b.as_ref());
    let disagreement = report.holds == search.found.is_some();
    let code = if report.holds && search.found.is_none() {
        0
    } else {
        1
    };

    if cli.json {
        let witness = search.found.as_ref().map(|t| {
            json!({
                "a": t.a.render(g),
                "b": t.b.render(g),
                "c": t.c.render(g),
                "pattern": t.pattern,
            })
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": SCHEMA,
                "graph": g.name(),
                "holds": report.holds,
                "branch": branch,
                "clause": clause,
                "witness": witness,
                "rejected_candidates": search.rejected,
                "random_trials": random_trials,
                "seed": seed,
                "disagreement": disagreement,
            }))
            .map_err(|e| e.to_string())?
        );
        return Ok(code);
    }

    if report.holds {
        println!("structural verdict: cancellation holds (branch {branch})");
    } else {
        println!("structural verdict: cancellation fails (no branch applies)");
    }
    if let Some(text) = clause {
        println!("  {text}");
    }
    match &search.found {
        Some(t) => {
            println!("counterexample ({}):", t.pattern);
            println!("  A = {}", t.a.render(g));
            println!("  B = {}", t.b.render(g));
            println!("  C = {}", t.c.render(g));
            println!("  verified: A*B = A*C and B differs from C");
        }
        None => println!(
            "counterexample search: none found ({} structural candidates rejected, {} random trials)",
            search.rejected, random_trials
        ),
    }
    if disagreement {
        println!("warning: the structural verdict and the search outcome disagree");
    }
    Ok(code)
}

fn report_out(cli: &Cli, report: &SuiteReport) -> Result<u8, String> {
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).map_err(|e| e.to_string())?
        );
    } else {
        println!("suite: {}", report.suite);
        println!("trials: {}", report.trials);
        println!("failures: {}", report.failures);
        println!(
            "seed: {}  config hash: {}  elapsed: {} ms",
            report.seed, report.config_hash, report.elapsed_ms
        );
        for note in &report.notes {
            println!("note: {note}");
        }
        if let Some(f) = &report.first_failure {
            println!("first failure (trial {}):", f.trial);
            println!("  {}", f.description);
            if !f.repro.is_empty() {
                println!("  reproduce with:");
                for line in f.repro.lines() {
                    println!("    {line}");
                }
            }
        }
        println!("result: {}", if report.passed() { "pass" } else { "FAIL" });
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn verify(
    cli: &Cli,
    file: Option<&str>,
    suite: VerifySuite,
    trials: usize,
    seed: u64,
    fuzz: usize,
) -> Result<u8, String> {
    let fixed = match file {
        None => None,
        Some("random") => None,
        Some(path) => Some(load_graph(path)?),
    };
    let cfg = GenConfig {
        field: cli.field,
        seed,
        ..GenConfig::default()
    };
    let report = match suite {
        VerifySuite::T4 => suite_distributivity(&cfg, fixed.as_ref(), trials),
        VerifySuite::T5 => suite_sum_intersection_product(&cfg, fixed.as_ref(), trials),
        VerifySuite::T6 => suite_prime_powers(&cfg, fixed.as_ref(), trials),
        VerifySuite::C7 => suite_power_gaps(&cfg, fixed.as_ref(), trials),
        VerifySuite::Axioms => suite_axioms(&cfg, fixed.as_ref(), trials),
        VerifySuite::Cancel => {
            suite_cancellation(&cfg, fixed.as_ref(), &fixtures::all(), trials, fuzz)
        }
    };
    report_out(cli, &report)
}

fn oracle(
    cli: &Cli,
    suite: OracleSuite,
    graphs: usize,
    sets: usize,
    pairs: usize,
    seed: u64,
) -> Result<u8, String> {
    let cfg = GenConfig {
        field: cli.field,
        seed,
        ..GenConfig::default()
    };
    let report = match suite {
        OracleSuite::Acyclic => suite_oracle_acyclic(&cfg, graphs, sets),
        OracleSuite::Laurent => {
            let scenarios = standard_scenarios(
                cli.field,
                vec![
                    (fixtures::single_loop(), vec![], vec!["v"]),
                    (fixtures::loop_chain(), vec!["v"], vec!["u"]),
                    (fixtures::loop_fork(), vec!["v"], vec!["u"]),
                ],
            )?;
            suite_oracle_laurent(&cfg, &scenarios, pairs)
        }
    };
    report_out(cli, &report)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
