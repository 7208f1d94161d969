//! The randomized suites must be reproducible end to end: same seed, same
//! graphs, same verdicts, same serialized report. These tests also run every
//! suite at a small budget so a regression shows up before the full gate.

use lpa::fixtures;
use lpa::laurent::standard_scenarios;
use lpa::verify::{
    random_graph, suite_axioms, suite_cancellation, suite_distributivity, suite_oracle_acyclic,
    suite_oracle_laurent, suite_power_gaps, suite_prime_powers, suite_sum_intersection_product,
    trial_rng, GenConfig, SuiteReport,
};
use lpa::Field;
use rand_chacha::rand_core::RngCore;

fn cfg(seed: u64) -> GenConfig {
    GenConfig {
        seed,
        ..GenConfig::default()
    }
}

fn stripped(report: &SuiteReport) -> serde_json::Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    v.as_object_mut()
        .expect("report is an object")
        .remove("elapsed_ms");
    v
}

#[test]
fn reports_are_deterministic_for_a_fixed_seed() {
    let c = cfg(0xD5EED);
    let first = suite_distributivity(&c, None, 40);
    let second = suite_distributivity(&c, None, 40);
    assert_eq!(stripped(&first), stripped(&second));

    let other = suite_distributivity(&cfg(0xD5EEE), None, 40);
    assert_eq!(first.failures, 0);
    assert_eq!(other.failures, 0);
}

#[test]
fn trial_rng_is_stable_per_trial() {
    let mut a = trial_rng(7, 3);
    let mut b = trial_rng(7, 3);
    let mut c = trial_rng(7, 4);
    let xs: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
    let ys: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
    let zs: Vec<u64> = (0..4).map(|_| c.next_u64()).collect();
    assert_eq!(xs, ys);
    assert_ne!(xs, zs);
}

#[test]
fn random_graphs_respect_their_stratum() {
    let c = cfg(11);
    for trial in 0..5 {
        let mut rng = trial_rng(c.seed, trial);
        let g = random_graph(&c, trial, &mut rng).expect("graph generates");
        assert!(
            g.cycles().expect("cycle enumeration").is_empty(),
            "trial {trial} sits in the acyclic stratum"
        );
        assert!(g.vertex_count() >= 1 && g.vertex_count() <= c.max_vertices);
    }
    let mut rng = trial_rng(c.seed, 5);
    let g = random_graph(&c, 5, &mut rng).expect("graph generates");
    assert!(
        !g.cycles().expect("cycle enumeration").is_empty(),
        "trial 5 sits in the planted-cycle stratum"
    );
}

#[test]
fn identity_suites_pass_at_small_budgets() {
    let c = cfg(0xA11CE);
    for report in [
        suite_distributivity(&c, None, 60),
        suite_sum_intersection_product(&c, None, 60),
        suite_axioms(&c, None, 60),
        suite_prime_powers(&c, None, 30),
        suite_power_gaps(&c, None, 30),
    ] {
        assert!(
            report.passed(),
            "{} failed: {:?}",
            report.suite,
            report.first_failure
        );
        assert_eq!(report.schema, "lpa/1");
        assert_eq!(report.seed, c.seed);
        assert_eq!(report.config_hash, c.hash_hex());
    }
}

#[test]
fn identity_suites_pass_on_a_fixed_graph() {
    let c = cfg(0xF1CED);
    let g = fixtures::loop_fork();
    for report in [
        suite_distributivity(&c, Some(&g), 25),
        suite_sum_intersection_product(&c, Some(&g), 25),
        suite_axioms(&c, Some(&g), 25),
    ] {
        assert!(
            report.passed(),
            "{} failed: {:?}",
            report.suite,
            report.first_failure
        );
    }
}

#[test]
fn oracle_suites_pass_at_small_budgets() {
    let c = cfg(0x0AC1E);
    let acyclic = suite_oracle_acyclic(&c, 6, 5);
    assert!(acyclic.passed(), "{:?}", acyclic.first_failure);
    assert!(acyclic.notes.iter().any(|n| n.contains("generator sets")));

    let scenarios = standard_scenarios(
        Field::Q,
        vec![
            (fixtures::single_loop(), vec![], vec!["v"]),
            (fixtures::loop_chain(), vec!["v"], vec!["u"]),
        ],
    )
    .expect("scenarios build");
    let laurent = suite_oracle_laurent(&c, &scenarios, 12);
    assert!(laurent.passed(), "{:?}", laurent.first_failure);
}

#[test]
fn cancellation_suite_annotates_the_fixtures() {
    let c = cfg(0xCA9CE1);
    let fixture_graphs = fixtures::all();
    let report = suite_cancellation(&c, None, &fixture_graphs, fixture_graphs.len(), 6);
    assert!(report.passed(), "{:?}", report.first_failure);
    assert!(
        report
            .notes
            .iter()
            .any(|n| n.contains("loop_chain") && n.contains("verified violation")),
        "expected the loop_chain discrepancy note, got {:?}",
        report.notes
    );
}

#[test]
fn cancellation_suite_handles_random_graphs() {
    let c = cfg(0xFA22);
    let report = suite_cancellation(&c, None, &[], 20, 5);
    assert!(report.passed(), "{:?}", report.first_failure);
}

#[test]
fn config_rendering_is_complete_and_hash_stable() {
    let c = GenConfig {
        max_vertices: 4,
        edge_density: 0.5,
        omega_prob: 0.1,
        cycle_bias: 0.25,
        field: Field::Fp(5),
        poly_degree_cap: 2,
        seed: 99,
    };
    let text = c.render();
    for needle in [
        "max_vertices=4",
        "edge_density=0.5",
        "omega_prob=0.1",
        "cycle_bias=0.25",
        "field=f5",
        "poly_degree_cap=2",
        "seed=99",
    ] {
        assert!(text.contains(needle), "render misses {needle}: {text}");
    }
    let h = c.hash_hex();
    assert_eq!(h.len(), 16);
    assert!(h.chars().all(|ch| ch.is_ascii_hexdigit()));
    assert_eq!(h, c.hash_hex());
    assert_ne!(h, GenConfig::default().hash_hex());
}
