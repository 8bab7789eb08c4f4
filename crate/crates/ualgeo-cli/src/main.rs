//! Command-line interface: loads algebra and system files, dispatches to
//! the computations and verification suites, and emits human-readable or
//! JSON reports.
//!
//! Exit codes: 0 success / verdict pass, 1 verdict fail (the report carries
//! a counterexample), 2 usage or file errors, 3 a resource cap was hit.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use ualgeo::congruence::all_congruences;
use ualgeo::corpus;
use ualgeo::filterpower::{
    coordinate_embedding, filter_power, geometric_equivalence, principal_filter,
};
use ualgeo::free::build_free;
use ualgeo::radical::{
    rad_pvar_oracle, radical, satisfying_assignments, EquationSystem, SystemFile,
};
use ualgeo::suite::{self, SuiteConfig};
use ualgeo::superproduct::{
    check_axiom, check_hypothesis, check_theorem, t_map, CheckConfig, Policy, SuperProductOp,
    SystemSource, TMapMode,
};
use ualgeo::{Caps, Error, FiniteAlgebra, FreeAlgebra};

#[derive(Parser)]
#[command(
    name = "ualgeo",
    about = "Universal algebraic geometry over finite algebras",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for per-system checks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Override the carrier cap (products, powers, quotients).
    #[arg(long, global = true)]
    cap_carrier: Option<usize>,

    /// Override the free-algebra element cap.
    #[arg(long, global = true)]
    cap_free: Option<usize>,

    /// Override the homomorphism-search node cap.
    #[arg(long, global = true)]
    cap_hom: Option<usize>,

    /// Override the congruence-lattice carrier cap.
    #[arg(long, global = true)]
    cap_congruence: Option<usize>,

    /// Override the exhaustive system-enumeration bit cap.
    #[arg(long, global = true)]
    cap_systems: Option<usize>,

    /// Override the exact subset-enumeration bit cap.
    #[arg(long, global = true)]
    cap_subsets: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolicyArgs {
    /// System enumeration policy.
    #[arg(long, value_parser = ["exhaustive", "sample"], default_value = "exhaustive")]
    policy: String,

    /// RNG seed (required for the sample policy).
    #[arg(long, required_if_eq("policy", "sample"))]
    seed: Option<u64>,

    /// Number of sampled systems.
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

impl PolicyArgs {
    fn to_policy(&self) -> Policy {
        match self.policy.as_str() {
            "exhaustive" => Policy::Exhaustive,
            _ => Policy::Sample {
                seed: self.seed.unwrap_or(0),
                count: self.count,
            },
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate an algebra file.
    Validate {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Build the free algebra on the given generators and list its
    /// elements by witness term.
    Free {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
    },
    /// Enumerate the congruence lattice of the algebra itself.
    Congruences {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Radical of a system of equations.
    Radical {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        system: PathBuf,
    },
    /// Radicals of the finite subsystems of a system.
    Tmap {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        system: PathBuf,
        /// Draw this many random subsets instead of exact enumeration.
        #[arg(long)]
        subset_samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Containment axiom for a super-product operation over random
    /// congruence families.
    CheckAxiom {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = ["join", "radunion", "full", "meet"])]
        op: String,
        #[arg(long, default_value_t = 1000)]
        families: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Bounding hypothesis: the operation composed with finite-subsystem
    /// radicals stays inside the radical.
    CheckHypothesis {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = ["join", "radunion", "full", "meet"])]
        op: String,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Composition identity: the operation composed with finite-subsystem
    /// radicals reproduces the radical.
    CheckTheorem {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[arg(long, value_parser = ["join", "radunion", "full", "meet"])]
        op: String,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Report equality failures even when the hypothesis fails.
        #[arg(long)]
        force: bool,
    },
    /// Filter-power of an algebra with its certified isomorphism onto a
    /// plain power.
    FilterPower {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        index_size: usize,
        /// Core of the principal filter, as 1-based comma-separated
        /// indices (e.g. `1,2`).
        #[arg(long)]
        core: String,
    },
    /// Geometric equivalence: compare radicals over two algebras.
    GeomEq {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long, default_value_t = 1)]
        min_vars: usize,
        #[arg(long, default_value_t = 2)]
        max_vars: usize,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Check that the radical agrees with the least separable congruence
    /// and that coordinate algebras embed into powers of the base.
    Lemma1 {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        vars: usize,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Run the full verification battery over the bundled corpus.
    Suite {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random families per algebra in the axiom check.
        #[arg(long, default_value_t = 1000)]
        families: usize,
        /// Sampled systems for large free algebras in the theorem check.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Sampled systems in the geometric-equivalence fallback.
        #[arg(long, default_value_t = 2_000)]
        geom_samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::LimitExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn caps_from(cli: &Cli) -> Caps {
    let mut caps = Caps::from_env();
    if let Some(v) = cli.cap_carrier {
        caps.carrier = v;
    }
    if let Some(v) = cli.cap_free {
        caps.free_elements = v;
    }
    if let Some(v) = cli.cap_hom {
        caps.hom_nodes = v;
    }
    if let Some(v) = cli.cap_congruence {
        caps.congruence_carrier = v;
    }
    if let Some(v) = cli.cap_systems {
        caps.system_bits = v;
    }
    if let Some(v) = cli.cap_subsets {
        caps.subset_bits = v;
    }
    caps
}

/// Load an algebra from a JSON file, or from the bundled corpus via the
/// `bundled:<name>` shorthand.
fn load_algebra(path: &Path) -> Result<FiniteAlgebra, Error> {
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix("bundled:")) {
        return corpus::by_name(name).ok_or_else(|| {
            Error::Syntax(format!(
                "no bundled algebra `{name}` (available: {})",
                corpus::all()
                    .iter()
                    .map(|a| a.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        });
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))?;
    FiniteAlgebra::from_json(&text)
}

fn load_system(path: &Path, free: &FreeAlgebra) -> Result<EquationSystem, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))?;
    SystemFile::parse(&text)?.resolve(free)
}

fn render_blocks_with_witnesses(free: &FreeAlgebra, blocks: &[Vec<usize>]) -> String {
    blocks
        .iter()
        .map(|block| {
            let inner: Vec<String> = block.iter().map(|&e| free.witness(e)).collect();
            format!("{{{}}}", inner.join(", "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict_code(verdict: &str) -> ExitCode {
    if verdict == "pass" || verdict == "equivalent" {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let caps = caps_from(cli);
    match &cli.command {
        Command::Validate { algebra } => {
            let alg = load_algebra(algebra)?;
            alg.validate()?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "name": alg.name,
                        "size": alg.size(),
                        "signature": alg.signature().symbols(),
                        "verdict": "ok",
                    })
                );
            } else {
                println!(
                    "ok: {} (size {}, signature {})",
                    alg.name,
                    alg.size(),
                    alg.signature()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Free { algebra, vars } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            if cli.json {
                println!("{}", serde_json::to_string(&free.dump()).expect("serialize"));
            } else {
                println!(
                    "free algebra of {} on {} generators: {} elements",
                    alg.name,
                    vars,
                    free.size()
                );
                for e in 0..free.size() {
                    let marker = if free.generators().contains(&e) { " (generator)" } else { "" };
                    println!("  e{e} = {}{marker}", free.witness(e));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Congruences { algebra } => {
            let alg = load_algebra(algebra)?;
            let lattice = all_congruences(&alg, &caps)?;
            if cli.json {
                let blocks: Vec<Vec<Vec<usize>>> =
                    lattice.iter().map(|c| c.blocks()).collect();
                println!(
                    "{}",
                    json!({
                        "algebra": alg.name,
                        "count": lattice.len(),
                        "congruences": blocks,
                    })
                );
            } else {
                println!("{}: {} congruences", alg.name, lattice.len());
                for theta in &lattice {
                    println!("  {theta}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Radical {
            algebra,
            vars,
            system,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let system = load_system(system, &free)?;
            let theta = radical(&free, &system);
            let sat = satisfying_assignments(&free, &system);
            if cli.json {
                let blocks: Vec<Vec<String>> = theta
                    .blocks()
                    .iter()
                    .map(|b| b.iter().map(|&e| free.witness(e)).collect())
                    .collect();
                let solutions: Vec<Vec<usize>> =
                    sat.iter().map(|&i| free.assignment(i)).collect();
                println!(
                    "{}",
                    json!({
                        "algebra": alg.name,
                        "vars": vars,
                        "system": system.render(&free),
                        "solutions": solutions,
                        "radical": blocks,
                    })
                );
            } else {
                println!(
                    "radical of {} equations over {} ({} solutions):",
                    system.len(),
                    alg.name,
                    sat.len()
                );
                println!("  {}", render_blocks_with_witnesses(&free, &theta.blocks()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tmap {
            algebra,
            vars,
            system,
            subset_samples,
            seed,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let system = load_system(system, &free)?;
            let mode = match subset_samples {
                Some(count) => TMapMode::Sampled {
                    seed: *seed,
                    stream: 1,
                    count: *count,
                },
                None => TMapMode::Exact,
            };
            let family = t_map(&free, &system, mode, &caps)?;
            if cli.json {
                let members: Vec<Vec<Vec<String>>> = family
                    .members()
                    .iter()
                    .map(|theta| {
                        theta
                            .blocks()
                            .iter()
                            .map(|b| b.iter().map(|&e| free.witness(e)).collect())
                            .collect()
                    })
                    .collect();
                println!(
                    "{}",
                    json!({
                        "algebra": alg.name,
                        "vars": vars,
                        "system": system.render(&free),
                        "members": members,
                    })
                );
            } else {
                println!(
                    "finite-subsystem radicals: {} distinct congruences",
                    family.len()
                );
                for theta in family.members() {
                    println!("  {}", render_blocks_with_witnesses(&free, &theta.blocks()));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckAxiom {
            algebra,
            vars,
            op,
            families,
            seed,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let op = SuperProductOp::from_kind(op, &alg)?;
            let report = check_axiom(&op, &free, *families, *seed, &caps)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("serialize"));
            } else {
                println!(
                    "axiom check for {} on {}: {} ({} families)",
                    report.op, report.algebra, report.verdict, report.families_checked
                );
                if let Some(w) = &report.witness {
                    println!(
                        "  witness: member {} relates {} ~ {} but the result does not",
                        w.member, w.pair[0], w.pair[1]
                    );
                }
            }
            Ok(verdict_code(&report.verdict))
        }
        Command::CheckHypothesis {
            algebra,
            vars,
            op,
            policy,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let op = SuperProductOp::from_kind(op, &alg)?;
            let cfg = CheckConfig {
                jobs: cli.jobs,
                ..CheckConfig::default()
            };
            let report = check_hypothesis(&op, &free, policy.to_policy(), &caps, &cfg)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("serialize"));
            } else {
                println!(
                    "hypothesis check for {} on {}: {} ({} systems)",
                    report.op, report.algebra, report.verdict, report.systems_checked
                );
                if let Some(f) = report.failures.first() {
                    println!("  first counterexample system: {:?}", f.system);
                }
            }
            Ok(verdict_code(&report.verdict))
        }
        Command::CheckTheorem {
            algebra,
            vars,
            op,
            policy,
            force,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let op = SuperProductOp::from_kind(op, &alg)?;
            let cfg = CheckConfig {
                jobs: cli.jobs,
                ..CheckConfig::default()
            };
            match check_theorem(&op, &free, policy.to_policy(), &caps, &cfg, *force) {
                Ok(report) => {
                    if cli.json {
                        println!("{}", serde_json::to_string(&report).expect("serialize"));
                    } else {
                        println!(
                            "composition check for {} on {}: {} ({} systems)",
                            report.op, report.algebra, report.verdict, report.systems_checked
                        );
                        if let Some(f) = report.failures.first() {
                            println!("  first counterexample system: {:?}", f.system);
                        }
                    }
                    Ok(verdict_code(&report.verdict))
                }
                Err(Error::HypothesisNotEstablished(msg)) => {
                    if cli.json {
                        println!(
                            "{}",
                            json!({
                                "op": op.name(),
                                "algebra": alg.name,
                                "verdict": "hypothesis-not-established",
                                "detail": msg,
                            })
                        );
                    } else {
                        println!("hypothesis not established: {msg}");
                    }
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other),
            }
        }
        Command::FilterPower {
            algebra,
            index_size,
            core,
        } => {
            let alg = load_algebra(algebra)?;
            let indices: Result<Vec<usize>, Error> = core
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<usize>()
                        .ok()
                        .and_then(|i| i.checked_sub(1))
                        .ok_or_else(|| {
                            Error::Syntax(format!("bad core index `{part}` (1-based)"))
                        })
                })
                .collect();
            let filter = principal_filter(*index_size, &indices?)?;
            let fp = filter_power(&alg, &filter, &caps)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "algebra": alg.name,
                        "index_size": filter.index_size(),
                        "core": filter.core().iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "power_size": fp.power.size(),
                        "filter_power_size": fp.algebra.size(),
                        "isomorphic_to": fp.restricted.name,
                        "certificate": fp.certificate.map,
                        "verdict": "pass",
                    })
                );
            } else {
                println!(
                    "filter-power of {} over {} indices with core {:?}: size {}",
                    alg.name,
                    filter.index_size(),
                    filter.core().iter().map(|i| i + 1).collect::<Vec<_>>(),
                    fp.algebra.size()
                );
                println!(
                    "  certified isomorphic to {} via restriction {:?}",
                    fp.restricted.name, fp.certificate.map
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GeomEq {
            algebra,
            other,
            min_vars,
            max_vars,
            policy,
        } => {
            let a = load_algebra(algebra)?;
            let b = load_algebra(other)?;
            let report = geometric_equivalence(
                &a,
                &b,
                *min_vars,
                *max_vars,
                policy.to_policy(),
                &caps,
                cli.jobs,
            )?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("serialize"));
            } else {
                println!(
                    "geometric equivalence of {} and {}: {} ({} systems)",
                    report.algebra, report.other, report.verdict, report.systems_checked
                );
                if let Some(f) = report.failures.first() {
                    println!(
                        "  witness at n={}: system {:?}",
                        f.n, f.system
                    );
                }
                if let Some(msg) = &report.incomparable {
                    println!("  {msg}");
                }
            }
            Ok(verdict_code(&report.verdict))
        }
        Command::Lemma1 {
            algebra,
            vars,
            policy,
        } => {
            let alg = load_algebra(algebra)?;
            let free = build_free(&alg, *vars, &caps)?;
            let source = SystemSource::new(&free, policy.to_policy(), &caps)?;
            let mut failures = Vec::new();
            for index in 0..source.len() {
                let system = source.system(index);
                let direct = radical(&free, &system);
                let via_lattice = rad_pvar_oracle(&free, &system, &caps)?;
                let embedding = coordinate_embedding(&free, &system, &caps)?;
                if direct != via_lattice || !embedding.verified() {
                    failures.push(json!({
                        "system": system.render(&free),
                        "radical": direct.blocks(),
                        "prevariety_radical": via_lattice.blocks(),
                        "embedding_verified": embedding.verified(),
                    }));
                }
            }
            let verdict = if failures.is_empty() { "pass" } else { "fail" };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "algebra": alg.name,
                        "n": vars,
                        "policy": policy.to_policy().kind(),
                        "seed": policy.to_policy().seed(),
                        "systems_checked": source.len(),
                        "failures": failures,
                        "verdict": verdict,
                    })
                );
            } else {
                println!(
                    "prevariety-radical agreement on {} (n={}): {} ({} systems)",
                    alg.name,
                    vars,
                    verdict,
                    source.len()
                );
            }
            Ok(verdict_code(verdict))
        }
        Command::Suite {
            seed,
            families,
            samples,
            geom_samples,
        } => {
            let config = SuiteConfig {
                seed: *seed,
                jobs: cli.jobs,
                axiom_families: *families,
                theorem_samples: *samples,
                geom_samples: *geom_samples,
                caps,
            };
            let report = suite::run(&config)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("serialize"));
            } else {
                for check in &report.checks {
                    let status = if check.passed { "PASS" } else { "FAIL" };
                    println!("{status} {} — {}", check.name, check.detail);
                }
                println!("suite verdict: {}", report.verdict);
            }
            Ok(verdict_code(&report.verdict))
        }
    }
}
