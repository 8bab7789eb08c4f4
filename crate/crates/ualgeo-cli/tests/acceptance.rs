//! Acceptance battery: every headline requirement, one test each, with a
//! printed pass line per requirement. Expected values were computed from
//! the brute-force oracles before the implementation was tuned, and are
//! frozen here.
//!
//! Run with `cargo test -p ualgeo-cli --test acceptance`.

use std::process::Command;
use std::time::Instant;
use ualgeo::caps::Caps;
use ualgeo::congruence::{self, Congruence};
use ualgeo::corpus;
use ualgeo::free::build_free;
use ualgeo::radical::{radical, EquationSystem};
use ualgeo::suite::{self, SuiteConfig};
use ualgeo::superproduct::{check_axiom, CongruenceFamily, SuperProductOp};

fn config() -> SuiteConfig {
    SuiteConfig::default()
}

fn pass(line: &str) {
    println!("PASS: {line}");
}

/// Free-algebra sizes match the term-enumeration oracle.
#[test]
fn a1_free_algebra_sizes() {
    let start = Instant::now();
    let check = suite::check_free_sizes(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);

    // Frozen values, asserted directly as well.
    let caps = Caps::default();
    let s2 = corpus::semilattice2();
    let z2 = corpus::z2_group();
    assert_eq!(build_free(&s2, 1, &caps).unwrap().size(), 1);
    assert_eq!(build_free(&s2, 2, &caps).unwrap().size(), 3);
    assert_eq!(build_free(&s2, 3, &caps).unwrap().size(), 7);
    assert_eq!(build_free(&z2, 1, &caps).unwrap().size(), 2);
    assert_eq!(build_free(&z2, 2, &caps).unwrap().size(), 4);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5 s");
    pass(&format!("free-algebra sizes (1, 3, 7, 2, 4) in {elapsed:?}"));
}

/// The radical is an exhaustive closure operator on the two small scopes.
#[test]
fn a2_radical_closure_laws() {
    let start = Instant::now();

    // The scope sizes are derived from the off-diagonal pair counts.
    let caps = Caps::default();
    let f_s2 = build_free(&corpus::semilattice2(), 2, &caps).unwrap();
    let f_z2 = build_free(&corpus::z2_group(), 2, &caps).unwrap();
    assert_eq!(f_s2.size() * (f_s2.size() - 1) / 2, 3); // 8 systems
    assert_eq!(f_z2.size() * (f_z2.size() - 1) / 2, 6); // 64 systems

    let check = suite::check_closure_laws(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);
    assert!(check.detail.contains("s2: 8 systems"));
    assert!(check.detail.contains("z2group: 64 systems"));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    pass(&format!(
        "closure-operator laws over 8 + 64 systems in {elapsed:?}"
    ));
}

/// The radical of every system equals the set-union of the radicals of its
/// subsystems.
#[test]
fn a3_finite_union_identity() {
    let check = suite::check_finite_union_identity(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);
    pass("finite-subsystem union identity over 8 + 64 systems");
}

/// Containment axiom: join, radical-of-union and the full-congruence
/// control pass on 1000 seeded families per bundled algebra; the meet
/// control fails with a witness.
#[test]
fn a4_containment_axiom() {
    let check = suite::check_superproduct_axiom(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);

    // Pin the meet failure with its witness on one algebra directly.
    let caps = Caps::default();
    let free = build_free(&corpus::z2_group(), 2, &caps).unwrap();
    let report = check_axiom(&SuperProductOp::Meet, &free, 1000, 0, &caps).unwrap();
    assert_eq!(report.verdict, "fail");
    let witness = report.witness.expect("meet must produce a witness");
    assert!(witness.member < witness.family.len());
    pass("containment axiom: join/radunion/full pass, meet fails with witness");
}

/// Composition identity: exhaustive on the small free algebras, 10 000
/// seeded samples on the nine-element one, and the full-congruence control
/// fails the bounding hypothesis at the empty system.
#[test]
fn a5_composition_identity() {
    let start = Instant::now();
    let check = suite::check_superproduct_theorem(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);
    assert!(check.detail.contains("join on z3group: 10000 systems"));
    assert!(check.detail.contains("radunion on z3group: 10000 systems"));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 2 min");
    pass(&format!(
        "composition identity exhaustive + 10000 samples in {elapsed:?}"
    ));
}

/// Filter-powers: certified isomorphisms, geometric equivalence for every
/// principal filter on up to three indices, and quasi-identity transfer
/// with bodies of at most two equations.
#[test]
fn a6_filter_powers() {
    let check = suite::check_filter_powers(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);
    for alg in corpus::all() {
        assert!(
            check.detail.contains(&format!("{}: 11 filters", alg.name)),
            "missing filter coverage for {}: {}",
            alg.name,
            check.detail
        );
    }
    pass("filter-power equivalence and transfer over 7 algebras x 11 filters");
}

/// The lattice-search prevariety radical equals the radical, and
/// coordinate algebras embed into direct powers, over the closure-law
/// scope.
#[test]
fn a7_prevariety_radical_and_embeddings() {
    let check = suite::check_prevariety_radical(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);
    pass("prevariety radical agreement and coordinate embeddings");
}

/// Negative discrimination: the semilattice is separated from the trivial
/// algebra at the empty system, and the congruence recognizer rejects the
/// documented bad partition with a replayable witness.
#[test]
fn a8_negative_discrimination() {
    let check = suite::check_discrimination(&config()).unwrap();
    assert!(check.passed, "{}", check.detail);

    // The bad-partition rejection, pinned directly.
    let caps = Caps::default();
    let square = corpus::z2_group().direct_power(2, &caps).unwrap();
    match congruence::is_congruence(&square, &[vec![0, 2], vec![1], vec![3]]).unwrap() {
        congruence::CongruenceCheck::No(w) => {
            assert_eq!(w.symbol, "+");
        }
        congruence::CongruenceCheck::Yes(_) => panic!("bad partition accepted"),
    }
    pass("discrimination: trivial-algebra separation and partition rejection");
}

/// Identical configuration produces byte-identical JSON reports, serial
/// and parallel.
#[test]
fn a9_report_determinism() {
    let exe = env!("CARGO_BIN_EXE_ualgeo");
    let run = |jobs: &str| -> String {
        let output = Command::new(exe)
            .args(["--json", "--jobs", jobs, "suite", "--seed", "0"])
            .output()
            .expect("suite run");
        assert!(output.status.success(), "suite exited nonzero");
        String::from_utf8(output.stdout).expect("utf-8 report")
    };
    let serial_a = run("1");
    let serial_b = run("1");
    assert_eq!(serial_a, serial_b, "serial runs differ");
    let parallel_a = run("4");
    let parallel_b = run("4");
    assert_eq!(parallel_a, parallel_b, "parallel runs differ");
    // The two modes agree up to the recorded jobs count.
    assert_eq!(serial_a.replace("\"jobs\":1", "\"jobs\":4"), parallel_a);
    pass("byte-identical suite reports across runs and --jobs 4");
}

/// Spot-checks of frozen radical values used throughout the battery.
#[test]
fn frozen_radical_values() {
    let caps = Caps::default();
    let free = build_free(&corpus::z2_group(), 2, &caps).unwrap();
    // Elements are x1, x2, (e), (+ x1 x2); the radical of x1+x2 = e has
    // blocks {x1, x2} and {(e), (+ x1 x2)}.
    let system = EquationSystem::new(free.size(), &[(2, 3)]).unwrap();
    let theta = radical(&free, &system);
    assert_eq!(theta.blocks(), vec![vec![0, 1], vec![2, 3]]);

    // A family carrying that radical joins back to it.
    let family = CongruenceFamily::new(
        free.size(),
        vec![Congruence::diagonal(free.size()), theta.clone()],
    )
    .unwrap();
    let joined = ualgeo::superproduct::family_join(&free, &family).unwrap();
    assert_eq!(joined, theta);
    pass("frozen radical block structure on the four-element free algebra");
}
