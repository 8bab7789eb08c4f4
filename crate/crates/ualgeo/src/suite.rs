//! The bundled verification battery: every headline property of the
//! library, run over the bundled corpus with brute-force oracles where they
//! exist. The CLI `suite` subcommand and the acceptance tests both drive
//! these functions.
//!
//! All checks are exact and deterministic for a fixed seed; reports carry
//! no timing or environment data, so identical configurations produce
//! byte-identical JSON.

use crate::algebra::{eval_term, tuple_decode, FiniteAlgebra};
use crate::caps::Caps;
use crate::congruence::{self, Congruence};
use crate::corpus;
use crate::error::Result;
use crate::filterpower::{
    coordinate_embedding, filter_power, geometric_equivalence, principal_filter,
    quasi_identity_transfer,
};
use crate::free::build_free;
use crate::radical::{rad_pvar_oracle, rad_var, radical, EquationSystem};
use crate::superproduct::{
    check_axiom, check_hypothesis, check_theorem, CheckConfig, Policy, SuperProductOp,
};
use crate::term::enumerate_terms;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt::Write as _;

/// Configuration of a suite run.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub jobs: usize,
    /// Random families per algebra for the containment-axiom check.
    pub axiom_families: usize,
    /// Sampled systems for free algebras too large for exhaustive
    /// enumeration in the composition check.
    pub theorem_samples: usize,
    /// Sampled systems for the geometric-equivalence fallback.
    pub geom_samples: usize,
    pub caps: Caps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            jobs: 1,
            axiom_families: 1000,
            theorem_samples: 10_000,
            geom_samples: 2_000,
            caps: Caps::default(),
        }
    }
}

/// Outcome of one suite check.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteCheck {
    fn pass(name: &'static str, detail: String) -> SuiteCheck {
        SuiteCheck {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> SuiteCheck {
        SuiteCheck {
            name,
            passed: false,
            detail,
        }
    }
}

/// Aggregate result of a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub jobs: usize,
    pub checks: Vec<SuiteCheck>,
    pub verdict: String,
}

/// Run the full battery.
pub fn run(config: &SuiteConfig) -> Result<SuiteReport> {
    let checks = vec![
        check_free_sizes(config)?,
        check_closure_laws(config)?,
        check_finite_union_identity(config)?,
        check_superproduct_axiom(config)?,
        check_superproduct_theorem(config)?,
        check_filter_powers(config)?,
        check_prevariety_radical(config)?,
        check_discrimination(config)?,
    ];
    let verdict = if checks.iter().all(|c| c.passed) {
        "pass".to_string()
    } else {
        "fail".to_string()
    };
    Ok(SuiteReport {
        seed: config.seed,
        jobs: config.jobs,
        checks,
        verdict,
    })
}

/// Distinct value vectors of all terms of depth at most `depth`, computed
/// level-wise: level 0 holds the projections and constants, and each
/// further level applies every operation to the vectors already present.
fn distinct_vectors_by_level(base: &FiniteAlgebra, n: usize, depth: usize) -> usize {
    let assignments = base.size().pow(n as u32);
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for var in 0..n {
        set.insert(
            (0..assignments)
                .map(|idx| tuple_decode(idx, base.size(), n)[var])
                .collect(),
        );
    }
    for (sym_idx, sym) in base.signature().symbols().iter().enumerate() {
        if sym.arity == 0 {
            set.insert(vec![base.op(sym_idx, &[]); assignments]);
        }
    }
    for _ in 0..depth {
        let snapshot: Vec<Vec<usize>> = set.iter().cloned().collect();
        for (sym_idx, sym) in base.signature().symbols().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let mut args = vec![0usize; sym.arity];
            loop {
                let vector: Vec<usize> = (0..assignments)
                    .map(|idx| {
                        let point: Vec<usize> =
                            args.iter().map(|&a| snapshot[a][idx]).collect();
                        base.op(sym_idx, &point)
                    })
                    .collect();
                set.insert(vector);
                let mut k = sym.arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    args[k] += 1;
                    if args[k] < snapshot.len() {
                        break;
                    }
                    args[k] = 0;
                }
                if args.iter().all(|&a| a == 0) {
                    break;
                }
            }
        }
    }
    set.len()
}

/// Distinct value vectors over an explicit term enumeration to `depth`.
fn distinct_vectors_by_terms(
    base: &FiniteAlgebra,
    n: usize,
    depth: usize,
    caps: &Caps,
) -> Result<usize> {
    let assignments = base.size().pow(n as u32);
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for term in enumerate_terms(base.signature(), n, depth, caps)? {
        let vector: Vec<usize> = (0..assignments)
            .map(|idx| {
                let a = tuple_decode(idx, base.size(), n);
                eval_term(&term, base, &a).expect("enumerated terms evaluate")
            })
            .collect();
        set.insert(vector);
    }
    Ok(set.len())
}

/// Free-algebra sizes against two independent oracles: explicit term
/// enumeration to depth 3 (which already saturates every case) and the
/// level-wise distinct-vector closure to depth 4 (confirming stability).
pub fn check_free_sizes(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "free-sizes";
    let s2 = corpus::semilattice2();
    let z2 = corpus::z2_group();
    let expectations: [(&FiniteAlgebra, usize, usize); 5] = [
        (&s2, 1, 1),
        (&s2, 2, 3),
        (&s2, 3, 7),
        (&z2, 1, 2),
        (&z2, 2, 4),
    ];
    let mut detail = String::new();
    for (base, n, expected) in expectations {
        let built = build_free(base, n, &config.caps)?.size();
        let by_terms = distinct_vectors_by_terms(base, n, 3, &config.caps)?;
        let by_levels = distinct_vectors_by_level(base, n, 4);
        write!(
            detail,
            "|F({},{n})| = {built} (terms: {by_terms}, levels: {by_levels}); ",
            base.name
        )
        .expect("write to string");
        if built != expected || by_terms != expected || by_levels != expected {
            detail.push_str("MISMATCH");
            return Ok(SuiteCheck::fail(name, detail));
        }
    }
    Ok(SuiteCheck::pass(name, detail))
}

fn exhaustive_scope(config: &SuiteConfig) -> Result<Vec<(crate::free::FreeAlgebra, Vec<EquationSystem>)>> {
    let mut scope = Vec::new();
    for base in [corpus::semilattice2(), corpus::z2_group()] {
        let free = build_free(&base, 2, &config.caps)?;
        let everything = EquationSystem::from_congruence(&Congruence::full(free.size()));
        // Subsets ordered by size, then by bitmask.
        let mut masks: Vec<u64> = (0..(1u64 << everything.len())).collect();
        masks.sort_by_key(|&m| (m.count_ones(), m));
        let systems: Vec<EquationSystem> =
            masks.into_iter().map(|m| everything.subset(m)).collect();
        scope.push((free, systems));
    }
    Ok(scope)
}

/// Closure-operator laws for the radical, exhaustively over every system
/// on the two small free algebras.
pub fn check_closure_laws(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "radical-closure-laws";
    let mut detail = String::new();
    for (free, systems) in exhaustive_scope(config)? {
        let radicals: Vec<Congruence> =
            systems.iter().map(|s| radical(&free, s)).collect();
        for (i, system) in systems.iter().enumerate() {
            // Extensive.
            for &(p, q) in system.pairs() {
                if !radicals[i].related(p, q) {
                    return Ok(SuiteCheck::fail(
                        name,
                        format!("radical not extensive on {:?}", system.render(&free)),
                    ));
                }
            }
            // Monotone over every comparable pair of systems.
            for (j, bigger) in systems.iter().enumerate() {
                if bigger.contains(system) && !radicals[i].leq(&radicals[j]) {
                    return Ok(SuiteCheck::fail(
                        name,
                        format!(
                            "radical not monotone between {:?} and {:?}",
                            system.render(&free),
                            bigger.render(&free)
                        ),
                    ));
                }
            }
            // Idempotent.
            let reread = EquationSystem::from_congruence(&radicals[i]);
            if radical(&free, &reread) != radicals[i] {
                return Ok(SuiteCheck::fail(
                    name,
                    format!("radical not idempotent on {:?}", system.render(&free)),
                ));
            }
        }
        write!(
            detail,
            "{}: {} systems; ",
            free.base().name,
            systems.len()
        )
        .expect("write to string");
    }
    Ok(SuiteCheck::pass(name, detail))
}

/// The finite-subsystem union identity: the radical of a system is the
/// set-union of the radicals of its finite subsystems (here: all subsets).
pub fn check_finite_union_identity(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "finite-union-identity";
    let mut detail = String::new();
    for (free, systems) in exhaustive_scope(config)? {
        for system in &systems {
            let whole: BTreeSet<(usize, usize)> =
                radical(&free, system).pairs().into_iter().collect();
            let mut union: BTreeSet<(usize, usize)> = BTreeSet::new();
            let mut masks: Vec<u64> = (0..(1u64 << system.len())).collect();
            masks.sort_by_key(|&m| (m.count_ones(), m));
            for mask in masks {
                union.extend(radical(&free, &system.subset(mask)).pairs());
            }
            if whole != union {
                return Ok(SuiteCheck::fail(
                    name,
                    format!(
                        "union of subsystem radicals differs on {:?}",
                        system.render(&free)
                    ),
                ));
            }
        }
        write!(
            detail,
            "{}: {} systems; ",
            free.base().name,
            systems.len()
        )
        .expect("write to string");
    }
    Ok(SuiteCheck::pass(name, detail))
}

/// Containment axiom over seeded random families: the two real operations
/// and the full-congruence control pass, the meet control fails everywhere
/// a family can contain two distinct congruences.
pub fn check_superproduct_axiom(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "superproduct-axiom";
    let mut detail = String::new();
    for base in corpus::all() {
        let free = build_free(&base, 2, &config.caps)?;
        for op in [
            SuperProductOp::Join,
            SuperProductOp::RadUnion(base.clone()),
            SuperProductOp::Full,
        ] {
            let report = check_axiom(
                &op,
                &free,
                config.axiom_families,
                config.seed,
                &config.caps,
            )?;
            if report.verdict != "pass" {
                return Ok(SuiteCheck::fail(
                    name,
                    format!("{} violated the axiom on {}", op.name(), base.name),
                ));
            }
        }
        let meet = check_axiom(
            &SuperProductOp::Meet,
            &free,
            config.axiom_families,
            config.seed,
            &config.caps,
        )?;
        // The one-element free algebra over the trivial base admits only
        // the diagonal congruence, so meet cannot fail there.
        let expect_fail = base.name != "trivial";
        if expect_fail && (meet.verdict != "fail" || meet.witness.is_none()) {
            return Ok(SuiteCheck::fail(
                name,
                format!("meet unexpectedly satisfied the axiom on {}", base.name),
            ));
        }
        if !expect_fail && meet.verdict != "pass" {
            return Ok(SuiteCheck::fail(
                name,
                "meet failed on the trivial algebra's one-congruence lattice".to_string(),
            ));
        }
        write!(detail, "{}: {} families x 4 ops; ", base.name, config.axiom_families)
            .expect("write to string");
    }
    Ok(SuiteCheck::pass(name, detail))
}

/// The composition identity: join and radical-of-union reproduce the
/// radical (exhaustively on the small free algebras, sampled on the
/// nine-element one), and the full-congruence control fails the hypothesis
/// with the empty system as witness.
pub fn check_superproduct_theorem(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "superproduct-theorem";
    let cfg = CheckConfig {
        jobs: config.jobs,
        ..CheckConfig::default()
    };
    let mut detail = String::new();
    let scopes: [(FiniteAlgebra, Policy); 3] = [
        (corpus::semilattice2(), Policy::Exhaustive),
        (corpus::z2_group(), Policy::Exhaustive),
        (
            corpus::z3_group(),
            Policy::Sample {
                seed: config.seed,
                count: config.theorem_samples,
            },
        ),
    ];
    for (base, policy) in scopes {
        let free = build_free(&base, 2, &config.caps)?;
        for op in [
            SuperProductOp::Join,
            SuperProductOp::RadUnion(base.clone()),
        ] {
            let report = check_theorem(&op, &free, policy, &config.caps, &cfg, false)?;
            if report.verdict != "pass" {
                return Ok(SuiteCheck::fail(
                    name,
                    format!(
                        "{} o finite-subsystem radicals != radical on {} ({:?})",
                        op.name(),
                        base.name,
                        report.failures.first().map(|f| &f.system)
                    ),
                ));
            }
            write!(
                detail,
                "{} on {}: {} systems; ",
                op.name(),
                base.name,
                report.systems_checked
            )
            .expect("write to string");
        }
    }
    // Negative control.
    for base in [corpus::semilattice2(), corpus::z2_group()] {
        let free = build_free(&base, 2, &config.caps)?;
        let report = check_hypothesis(
            &SuperProductOp::Full,
            &free,
            Policy::Exhaustive,
            &config.caps,
            &cfg,
        )?;
        let empty_witness = report
            .failures
            .first()
            .is_some_and(|f| f.system.is_empty());
        if report.verdict != "fail" || !empty_witness {
            return Ok(SuiteCheck::fail(
                name,
                format!(
                    "full-congruence control did not fail on the empty system over {}",
                    base.name
                ),
            ));
        }
    }
    detail.push_str("full fails hypothesis at the empty system");
    Ok(SuiteCheck::pass(name, detail))
}

/// Filter-power battery: certified isomorphisms, geometric equivalence to
/// every principal filter-power on up to three indices, and quasi-identity
/// transfer.
pub fn check_filter_powers(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "filter-powers";
    let mut detail = String::new();
    for base in corpus::all() {
        let mut filters_checked = 0;
        for index_size in 1..=3usize {
            for core_mask in 1u32..(1 << index_size) {
                let core: Vec<usize> = (0..index_size)
                    .filter(|&i| core_mask >> i & 1 == 1)
                    .collect();
                let filter = principal_filter(index_size, &core)?;
                let fp = filter_power(&base, &filter, &config.caps)?;
                if !fp.certificate.verify(&fp.algebra, &fp.restricted)
                    || !fp.certificate.is_bijective(fp.restricted.size())
                    || !fp.projection.verify(&fp.power, &fp.algebra)
                {
                    return Ok(SuiteCheck::fail(
                        name,
                        format!("certificate failed for {} core {:?}", base.name, core),
                    ));
                }
                // Geometric equivalence, exhaustive when the system space
                // fits the cap, sampled otherwise.
                for n in 1..=2usize {
                    let free = build_free(&base, n, &config.caps)?;
                    let pairs = free.size() * (free.size() - 1) / 2;
                    let policy = if pairs <= config.caps.system_bits {
                        Policy::Exhaustive
                    } else {
                        Policy::Sample {
                            seed: config.seed,
                            count: config.geom_samples,
                        }
                    };
                    let report = geometric_equivalence(
                        &base,
                        &fp.algebra,
                        n,
                        n,
                        policy,
                        &config.caps,
                        config.jobs,
                    )?;
                    if report.verdict != "equivalent" {
                        return Ok(SuiteCheck::fail(
                            name,
                            format!(
                                "{} vs its filter-power (core {:?}) at n={n}: {}",
                                base.name, core, report.verdict
                            ),
                        ));
                    }
                }
                let transfer =
                    quasi_identity_transfer(&base, &fp.algebra, 2, 2, &config.caps)?;
                if transfer.verdict != "pass" {
                    return Ok(SuiteCheck::fail(
                        name,
                        format!(
                            "quasi-identity transfer failed for {} core {:?}",
                            base.name, core
                        ),
                    ));
                }
                filters_checked += 1;
            }
        }
        write!(detail, "{}: {} filters; ", base.name, filters_checked)
            .expect("write to string");
    }
    Ok(SuiteCheck::pass(name, detail))
}

/// The prevariety radical (least separable congruence, found through the
/// congruence lattice) agrees with the radical on the exhaustive scope,
/// and the coordinate algebras embed into powers of the base.
pub fn check_prevariety_radical(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "prevariety-radical";
    let mut detail = String::new();
    for (free, systems) in exhaustive_scope(config)? {
        for system in &systems {
            let direct = radical(&free, system);
            let via_lattice = rad_pvar_oracle(&free, system, &config.caps)?;
            if direct != via_lattice {
                return Ok(SuiteCheck::fail(
                    name,
                    format!(
                        "prevariety radical differs on {:?} over {}",
                        system.render(&free),
                        free.base().name
                    ),
                ));
            }
            if !rad_var(&free, system).leq(&direct) {
                return Ok(SuiteCheck::fail(
                    name,
                    format!(
                        "variety radical exceeds the radical on {:?}",
                        system.render(&free)
                    ),
                ));
            }
            let emb = coordinate_embedding(&free, system, &config.caps)?;
            if !emb.verified() {
                return Ok(SuiteCheck::fail(
                    name,
                    format!(
                        "coordinate embedding unverified on {:?}",
                        system.render(&free)
                    ),
                ));
            }
        }
        write!(
            detail,
            "{}: {} systems; ",
            free.base().name,
            systems.len()
        )
        .expect("write to string");
    }
    Ok(SuiteCheck::pass(name, detail))
}

/// Negative discrimination: the two-element semilattice is not
/// geometrically equivalent to the trivial algebra (witness: the empty
/// system), and the congruence recognizer rejects a documented bad
/// partition with a replayable witness.
pub fn check_discrimination(config: &SuiteConfig) -> Result<SuiteCheck> {
    let name = "discrimination";
    let s2 = corpus::semilattice2();
    let trivial = corpus::trivial();
    let report = geometric_equivalence(
        &s2,
        &trivial,
        1,
        2,
        Policy::Exhaustive,
        &config.caps,
        config.jobs,
    )?;
    let witness_is_empty_system = report
        .failures
        .first()
        .is_some_and(|f| f.system.is_empty());
    if report.verdict != "not-equivalent" || !witness_is_empty_system {
        return Ok(SuiteCheck::fail(
            name,
            "semilattice vs trivial algebra was not separated at the empty system"
                .to_string(),
        ));
    }

    let square = corpus::z2_group().direct_power(2, &config.caps)?;
    let verdict =
        congruence::is_congruence(&square, &[vec![0, 2], vec![1], vec![3]])?;
    match verdict {
        congruence::CongruenceCheck::No(w) => {
            let sym = square
                .signature()
                .index_of(&w.symbol)
                .expect("witness symbol exists");
            let theta =
                Congruence::from_blocks(4, &[vec![0, 2], vec![1], vec![3]])?;
            let replays = square.op(sym, &w.lhs_args) == w.lhs_out
                && square.op(sym, &w.rhs_args) == w.rhs_out
                && w.lhs_args
                    .iter()
                    .zip(&w.rhs_args)
                    .all(|(&a, &b)| theta.related(a, b))
                && !theta.related(w.lhs_out, w.rhs_out);
            if !replays {
                return Ok(SuiteCheck::fail(
                    name,
                    "congruence rejection witness does not replay".to_string(),
                ));
            }
        }
        congruence::CongruenceCheck::Yes(_) => {
            return Ok(SuiteCheck::fail(
                name,
                "bad partition accepted as a congruence".to_string(),
            ));
        }
    }
    Ok(SuiteCheck::pass(
        name,
        "geometric separation and congruence rejection both witnessed".to_string(),
    ))
}
