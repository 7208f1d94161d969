//! Release gate. Every blocking property runs in one test so a release
//! candidate produces a single readable scoreboard, one verdict line per
//! criterion, before the final assertion fires.

use std::panic::AssertUnwindSafe;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use lpa::fixtures;
use lpa::graph::VertexSet;
use lpa::ideal::{graded_join, graded_meet};
use lpa::verify::{
    random_graph, suite_axioms, suite_distributivity, suite_oracle_acyclic, suite_oracle_laurent,
    suite_power_gaps, suite_prime_powers, suite_sum_intersection_product, trial_rng, GenConfig,
    SuiteReport,
};
use lpa::{Engine, Field, Graph, IdealForm};

fn cfg(seed: u64) -> GenConfig {
    GenConfig {
        field: Field::Q,
        seed,
        ..GenConfig::default()
    }
}

fn engine(g: Graph) -> Result<Engine, String> {
    Engine::new(g, Field::Q).map_err(|e| e.to_string())
}

fn vertex_ideal(e: &Engine, names: &[&str]) -> Result<IdealForm, String> {
    let set: VertexSet = names
        .iter()
        .map(|n| e.graph().vertex_by_name(n).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    e.ideal_from_vertices(&set).map_err(|e| e.to_string())
}

fn clean(r: &SuiteReport) -> Result<(), String> {
    if r.failures == 0 {
        return Ok(());
    }
    let detail = r
        .first_failure
        .as_ref()
        .map(|f| format!(" (trial {}: {})", f.trial, f.description))
        .unwrap_or_default();
    Err(format!("{} failures{detail}", r.failures))
}

fn note_count(r: &SuiteReport, suffix: &str) -> Result<usize, String> {
    for note in &r.notes {
        if let Some(pos) = note.find(suffix) {
            let digits: String = note[..pos]
                .chars()
                .rev()
                .take_while(|c| c.is_ascii_digit())
                .collect();
            let digits: String = digits.chars().rev().collect();
            if let Ok(n) = digits.parse() {
                return Ok(n);
            }
        }
    }
    Err(format!("no note containing `{suffix}`: {:?}", r.notes))
}

fn fixture_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_binary(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lpa"))
        .args(args)
        .output()
        .map_err(|e| format!("spawn: {e}"))?;
    Ok((
        out.status.code().ok_or("killed by signal")?,
        String::from_utf8(out.stdout).map_err(|e| format!("stdout: {e}"))?,
    ))
}

struct Gate {
    lines: Vec<String>,
    failures: usize,
}

impl Gate {
    fn check<F>(&mut self, number: usize, label: &str, body: F)
    where
        F: FnOnce() -> Result<String, String>,
    {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(AssertUnwindSafe(body));
        let secs = started.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(Ok(detail)) => {
                format!("criterion {number:>2}: pass  {label}; {detail} ({secs:.1} s)")
            }
            Ok(Err(why)) => {
                self.failures += 1;
                format!("criterion {number:>2}: FAIL  {label}; {why}")
            }
            Err(panic) => {
                self.failures += 1;
                let msg = panic
                    .downcast_ref::<&str>()
                    .map(|s| s.to_string())
                    .or_else(|| panic.downcast_ref::<String>().cloned())
                    .unwrap_or_else(|| "panic".to_string());
                format!("criterion {number:>2}: FAIL  {label}; panicked: {msg}")
            }
        };
        println!("{line}");
        self.lines.push(line);
    }
}

#[test]
fn full_acceptance_gate() {
    let mut gate = Gate {
        lines: Vec::new(),
        failures: 0,
    };

    gate.check(
        1,
        "product distributes over intersection, 1000 random trials",
        || {
            let r = suite_distributivity(&cfg(7), None, 1000);
            clean(&r)?;
            if r.elapsed_ms >= 60_000 {
                return Err(format!("took {} ms, budget is 60000", r.elapsed_ms));
            }
            Ok(format!("0 failures in {} ms", r.elapsed_ms))
        },
    );

    gate.check(2, "(A+B)(A&B) = AB, 1000 random trials", || {
        let r = suite_sum_intersection_product(&cfg(8), None, 1000);
        clean(&r)?;
        Ok(format!("0 failures in {} ms", r.elapsed_ms))
    });

    gate.check(
        3,
        "arithmetic identity battery, 1000 trials per identity",
        || {
            let r = suite_axioms(&cfg(9), None, 1000);
            clean(&r)?;
            Ok(format!("0 failures in {} ms", r.elapsed_ms))
        },
    );

    gate.check(
        4,
        "prime powers factor back exactly, composite control rejected",
        || {
            let r = suite_prime_powers(&cfg(10), None, 200);
            clean(&r)?;
            Ok(format!(
                "200 build/factor/control rounds, {} ms",
                r.elapsed_ms
            ))
        },
    );

    gate.check(
        5,
        "no ideal strictly between consecutive prime powers",
        || {
            let r = suite_power_gaps(&cfg(11), None, 200);
            clean(&r)?;
            Ok(format!("200 chains checked, {} ms", r.elapsed_ms))
        },
    );

    gate.check(
        6,
        "emitter_web: <v1> annihilates <v5> and <v7>, which differ",
        || {
            let e = engine(fixtures::emitter_web())?;
            let a = vertex_ideal(&e, &["v1"])?;
            let b = vertex_ideal(&e, &["v5"])?;
            let c = vertex_ideal(&e, &["v7"])?;
            if b == c {
                return Err("<v5> and <v7> generate the same ideal".into());
            }
            let ab = e.product(&a, &b).map_err(|e| e.to_string())?;
            let ac = e.product(&a, &c).map_err(|e| e.to_string())?;
            if !ab.is_zero() || !ac.is_zero() {
                return Err(format!(
                    "products are not zero: A*B = {}, A*C = {}",
                    ab.render(e.graph()),
                    ac.render(e.graph())
                ));
            }
            Ok("A*B = 0 = A*C with B distinct from C".into())
        },
    );

    gate.check(7, "loop_fork: nested pair with AB = A&B = A = A^2", || {
        let e = engine(fixtures::loop_fork())?;
        let a = vertex_ideal(&e, &["v"])?;
        let b = vertex_ideal(&e, &["u", "v"])?;
        if a == b {
            return Err("the two ideals coincide".into());
        }
        let ab = e.product(&a, &b).map_err(|e| e.to_string())?;
        let meet = e.intersect(&a, &b).map_err(|e| e.to_string())?;
        let aa = e.product(&a, &a).map_err(|e| e.to_string())?;
        if ab != meet || ab != a || aa != a {
            return Err(format!(
                "collapse chain broke: A*B = {}, A&B = {}, A^2 = {}",
                ab.render(e.graph()),
                meet.render(e.graph()),
                aa.render(e.graph())
            ));
        }
        Ok("A*B = A&B = A = A^2 with A != B".into())
    });

    gate.check(
        8,
        "cancellation verdicts and witnesses on all six worked graphs",
        || {
            let expectations: [(&str, Graph, Option<&str>); 6] = [
                ("loop_chain", fixtures::loop_chain(), Some("iii_a")),
                ("rose2", fixtures::rose2(), Some("iii_b")),
                ("twin_roses", fixtures::twin_roses(), Some("iii_b")),
                ("rose_fork", fixtures::rose_fork(), Some("iii_b")),
                ("emitter_web", fixtures::emitter_web(), None),
                ("loop_fork", fixtures::loop_fork(), None),
            ];
            let mut verified_triples = 0;
            for (name, g, want_branch) in expectations {
                let e = engine(g)?;
                let report = e.cancellation_check().map_err(|e| e.to_string())?;
                let branch = if report.clause_a.is_some() {
                    Some("iii_a")
                } else if report.clause_b.is_some() {
                    Some("iii_b")
                } else {
                    None
                };
                match want_branch {
                    Some(want) => {
                        if !report.holds || branch != Some(want) {
                            return Err(format!(
                                "{name}: expected holds via {want}, got holds={} branch={branch:?}",
                                report.holds
                            ));
                        }
                    }
                    None => {
                        if report.holds {
                            return Err(format!("{name}: expected a failing verdict"));
                        }
                        let search = e
                            .cancellation_counterexample(&[])
                            .map_err(|e| e.to_string())?;
                        let t = search
                            .found
                            .ok_or_else(|| format!("{name}: no witness surfaced"))?;
                        let ab = e.product(&t.a, &t.b).map_err(|e| e.to_string())?;
                        let ac = e.product(&t.a, &t.c).map_err(|e| e.to_string())?;
                        if ab != ac || t.b == t.c {
                            return Err(format!("{name}: witness failed re-verification"));
                        }
                        verified_triples += 1;
                    }
                }
            }
            Ok(format!(
                "4 positive verdicts with branches, {verified_triples} re-verified violations"
            ))
        },
    );

    gate.check(9, "independent oracles agree with the engine", || {
        let r = suite_oracle_acyclic(&cfg(13), 50, 2);
        clean(&r)?;
        if r.trials < 50 {
            return Err(format!("only {} acyclic graphs", r.trials));
        }
        let sets = note_count(&r, " dictionary checks")?;
        let gen_sets = note_count(&r, " generator sets")?;
        if gen_sets < 100 {
            return Err(format!("only {gen_sets} generator sets"));
        }
        let scenarios = lpa::laurent::standard_scenarios(
            Field::Q,
            vec![
                (fixtures::single_loop(), vec![], vec!["v"]),
                (fixtures::loop_chain(), vec!["v"], vec!["u"]),
                (fixtures::loop_fork(), vec!["v"], vec!["u"]),
            ],
        )?;
        let r2 = suite_oracle_laurent(&cfg(14), &scenarios, 70);
        clean(&r2)?;
        let pairs = note_count(&r2, " polynomial pairs")?;
        if pairs < 200 {
            return Err(format!("only {pairs} polynomial pairs"));
        }
        Ok(format!(
            "{} graphs / {gen_sets} generator sets with {sets} dictionary checks, {pairs} polynomial pairs",
            r.trials
        ))
    });

    gate.check(10, "graded poset join/meet match ideal sum/intersection", || {
        let check_engine = |e: &Engine, checked: &mut usize| -> Result<(), String> {
            let name = e.graph().name().to_string();
            let pairs = e.pairs().to_vec();
            for p in &pairs {
                for q in &pairs {
                    let ip = e.graded(p).map_err(|e| e.to_string())?;
                    let iq = e.graded(q).map_err(|e| e.to_string())?;
                    let join = e.sum(&ip, &iq).map_err(|e| e.to_string())?;
                    let meet = e.intersect(&ip, &iq).map_err(|e| e.to_string())?;
                    if join.pair() != &graded_join(e, p, q) {
                        return Err(format!("{name}: join drifted from sum"));
                    }
                    if meet.pair() != &graded_meet(e, p, q) {
                        return Err(format!("{name}: meet drifted from intersection"));
                    }
                    if e.product(&ip, &iq).map_err(|e| e.to_string())? != meet {
                        return Err(format!("{name}: graded product is not the meet"));
                    }
                    *checked += 1;
                }
            }
            Ok(())
        };

        let mut checked = 0usize;
        let fixture_count = fixtures::all().len();
        for g in fixtures::all() {
            let e = engine(g)?;
            check_engine(&e, &mut checked)?;
        }
        let c = cfg(23);
        let mut rng = trial_rng(23, 0);
        let mut random_engines = 0usize;
        let mut trial = 0;
        while random_engines < 100 && trial < 2000 {
            if let Ok(g) = random_graph(&c, trial, &mut rng) {
                if let Ok(e) = Engine::new(g, Field::Q) {
                    check_engine(&e, &mut checked)?;
                    random_engines += 1;
                }
            }
            trial += 1;
        }
        if random_engines < 100 {
            return Err(format!("only {random_engines} random graphs produced engines"));
        }
        Ok(format!(
            "{fixture_count} fixtures + {random_engines} random graphs, {checked} ordered pair comparisons"
        ))
    });

    gate.check(
        11,
        "CLI golden outputs, round trip, and exit-code contract",
        || {
            let goldens: [(&str, Vec<String>, i32); 4] = [
                (
                    "analyze_loop_fork.txt",
                    vec!["analyze".into(), fixture_path("loop_fork.graph")],
                    0,
                ),
                (
                    "primes_loop_fork.txt",
                    vec!["primes".into(), fixture_path("loop_fork.graph")],
                    0,
                ),
                (
                    "compare_emitter_web.txt",
                    vec![
                        "op".into(),
                        fixture_path("emitter_web.graph"),
                        "--let".into(),
                        "A=<v1>".into(),
                        "--let".into(),
                        "B=<v5>".into(),
                        "--let".into(),
                        "C=<v7>".into(),
                        "--compare".into(),
                        "A*B".into(),
                        "A*C".into(),
                    ],
                    0,
                ),
                (
                    "cancel_loop_chain.txt",
                    vec![
                        "cancel".into(),
                        fixture_path("loop_chain.graph"),
                        "--random-trials".into(),
                        "25".into(),
                        "--seed".into(),
                        "1".into(),
                    ],
                    1,
                ),
            ];
            for (file, args, want_code) in &goldens {
                let expected = std::fs::read_to_string(
                    Path::new(env!("CARGO_MANIFEST_DIR"))
                        .join("tests/golden")
                        .join(file),
                )
                .map_err(|e| format!("{file}: {e}"))?;
                let argv: Vec<&str> = args.iter().map(String::as_str).collect();
                let (code, stdout) = run_binary(&argv)?;
                if stdout != expected {
                    return Err(format!("{file} drifted"));
                }
                if code != *want_code {
                    return Err(format!("{file}: exit {code}, wanted {want_code}"));
                }
            }
            for name in [
                "loop.graph",
                "fork.graph",
                "loop_chain.graph",
                "rose2.graph",
                "twin_roses.graph",
                "rose_fork.graph",
                "emitter_web.graph",
                "loop_fork.graph",
            ] {
                let text =
                    std::fs::read_to_string(fixture_path(name)).map_err(|e| e.to_string())?;
                let g = lpa::dsl::parse_graph(&text).map_err(|e| format!("{name}: {e}"))?;
                let printed = lpa::dsl::print_graph(&g);
                let back = lpa::dsl::parse_graph(&printed).map_err(|e| format!("{name}: {e}"))?;
                if back != g {
                    return Err(format!("{name}: round trip drifted"));
                }
            }
            let loop_fork = fixture_path("loop_fork.graph");
            let (code, _) = run_binary(&["op", &loop_fork, "--compare", "<z>", "<v>"])?;
            if code != 1 {
                return Err(format!("incomparable compare exited {code}, wanted 1"));
            }
            let (code, _) = run_binary(&["analyze", "/nonexistent/nowhere.graph"])?;
            if code != 2 {
                return Err(format!("missing file exited {code}, wanted 2"));
            }
            Ok("4 golden files, 8-fixture round trip, exit codes 0/1/2".into())
        },
    );

    println!(
        "acceptance: {}/{} criteria pass",
        gate.lines.len() - gate.failures,
        gate.lines.len()
    );
    assert_eq!(
        gate.failures,
        0,
        "acceptance gate failed:\n{}",
        gate.lines.join("\n")
    );
}
