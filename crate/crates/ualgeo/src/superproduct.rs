//! Super-product operations on families of congruences, the map sending a
//! system to the radicals of its finite subsystems, and the machine checks
//! that composing the two reproduces the radical.
//!
//! Four operations are built in. `Join` (least upper bound) and `RadUnion`
//! (radical of the union, over a fixed context algebra) are genuine
//! super-product operations that satisfy the containment axiom and the
//! bounding hypothesis; `Full` satisfies the axiom but violates the
//! hypothesis, and `Meet` violates the axiom. The two negative controls
//! exist so the checkers demonstrably discriminate.

use crate::algebra::FiniteAlgebra;
use crate::caps::Caps;
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::free::FreeAlgebra;
use crate::par::parallel_map;
use crate::radical::{radical, radical_over, EquationSystem};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

/// A finite set of congruences of one free algebra, deduplicated and kept
/// in canonical order, so operations on families are insensitive to the
/// order members were supplied in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceFamily {
    members: Vec<Congruence>,
}

impl CongruenceFamily {
    pub fn new(size: usize, members: Vec<Congruence>) -> Result<CongruenceFamily> {
        for theta in &members {
            if theta.size() != size {
                return Err(Error::AlgebraMismatch(format!(
                    "family member over {} elements, expected {}",
                    theta.size(),
                    size
                )));
            }
        }
        let mut members = members;
        members.sort();
        members.dedup();
        Ok(CongruenceFamily { members })
    }

    pub fn members(&self) -> &[Congruence] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The built-in super-product operations (and negative controls).
#[derive(Debug, Clone)]
pub enum SuperProductOp {
    /// Least upper bound in the congruence lattice.
    Join,
    /// Radical of the union of the family, over a fixed context algebra.
    RadUnion(FiniteAlgebra),
    /// Constantly the full congruence (axiom holds, hypothesis fails).
    Full,
    /// Intersection (violates the containment axiom; negative control).
    Meet,
}

impl SuperProductOp {
    pub fn name(&self) -> &'static str {
        match self {
            SuperProductOp::Join => "join",
            SuperProductOp::RadUnion(_) => "radunion",
            SuperProductOp::Full => "full",
            SuperProductOp::Meet => "meet",
        }
    }

    /// Build an operation from its CLI name; `context` is the algebra a
    /// `radunion` is taken over.
    pub fn from_kind(kind: &str, context: &FiniteAlgebra) -> Result<SuperProductOp> {
        match kind {
            "join" => Ok(SuperProductOp::Join),
            "radunion" => Ok(SuperProductOp::RadUnion(context.clone())),
            "full" => Ok(SuperProductOp::Full),
            "meet" => Ok(SuperProductOp::Meet),
            other => Err(Error::Syntax(format!(
                "unknown super-product operation `{other}`"
            ))),
        }
    }
}

/// Least upper bound of a nonempty family: the congruence generated by the
/// union of the members, which the lattice structure makes order-independent.
pub fn family_join(free: &FreeAlgebra, family: &CongruenceFamily) -> Result<Congruence> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut pairs = Vec::new();
    for theta in family.members() {
        for (i, &r) in theta.rep().iter().enumerate() {
            if r != i {
                pairs.push((r, i));
            }
        }
    }
    Ok(congruence::generated_congruence(free.as_algebra(), &pairs))
}

/// Apply a super-product operation to a family.
///
/// Empty-family conventions: `Join` of nothing is the diagonal, `Full` is
/// always the full congruence, `RadUnion` of nothing is the radical of the
/// empty system over its context, and `Meet` of nothing is an error.
pub fn apply(
    op: &SuperProductOp,
    free: &FreeAlgebra,
    family: &CongruenceFamily,
    caps: &Caps,
) -> Result<Congruence> {
    match op {
        SuperProductOp::Join => {
            if family.is_empty() {
                Ok(Congruence::diagonal(free.size()))
            } else {
                family_join(free, family)
            }
        }
        SuperProductOp::Full => Ok(Congruence::full(free.size())),
        SuperProductOp::Meet => {
            let mut members = family.members().iter();
            let first = members.next().ok_or(Error::EmptyFamily)?;
            let mut acc = first.clone();
            for theta in members {
                acc = congruence::meet(&acc, theta)?;
            }
            Ok(acc)
        }
        SuperProductOp::RadUnion(context) => {
            let mut union = EquationSystem::empty();
            for theta in family.members() {
                union = union.union(&EquationSystem::from_congruence(theta));
            }
            if context == free.base() {
                Ok(radical(free, &union))
            } else if context.signature() != free.base().signature() {
                Err(Error::ContextMismatch(format!(
                    "radunion context `{}` has signature {}, the free algebra is over {}",
                    context.name,
                    context.signature(),
                    free.base().signature()
                )))
            } else {
                radical_over(free, &union, context, caps)
            }
        }
    }
}

/// How the finite-subsystem map enumerates subsets of a system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TMapMode {
    /// All `2^|S|` subsets; requires `|S| <= caps.subset_bits`.
    Exact,
    /// The empty set, the whole system, and `count` seeded random subsets.
    Sampled { seed: u64, stream: u64, count: usize },
}

/// The family of radicals of finite subsystems of `system`.
///
/// In exact mode every subset is enumerated (including the empty one); in
/// sampled mode the empty subset and the full system are always included,
/// so downstream equality checks keep their meaning.
///
/// Subsystems with the same solution set have the same radical. When the
/// assignment space fits in a 64-bit mask (it always does at desk scale),
/// each subset costs one bitwise AND of per-equation solution masks, and a
/// radical is computed once per distinct solution set.
pub fn t_map(
    free: &FreeAlgebra,
    system: &EquationSystem,
    mode: TMapMode,
    caps: &Caps,
) -> Result<CongruenceFamily> {
    if let TMapMode::Exact = mode {
        if system.len() > caps.subset_bits {
            return Err(Error::LimitExceeded {
                what: "exact subset enumeration",
                needed: system.len(),
                cap: caps.subset_bits,
            });
        }
    }
    let assignments = free.assignment_count();
    let words = system.len().div_ceil(64).max(1);

    if assignments <= 64 {
        let pair_masks: Vec<u64> = system
            .pairs()
            .iter()
            .map(|&(p, q)| {
                let mut mask = 0u64;
                for idx in 0..assignments {
                    if free.vector(p)[idx] == free.vector(q)[idx] {
                        mask |= 1 << idx;
                    }
                }
                mask
            })
            .collect();
        let full_mask = if assignments >= 64 {
            !0
        } else {
            (1u64 << assignments) - 1
        };
        let sat_of = |bits: &[u64]| -> u64 {
            let mut sat = full_mask;
            for (i, &mask) in pair_masks.iter().enumerate() {
                if bits[i / 64] >> (i % 64) & 1 == 1 {
                    sat &= mask;
                }
            }
            sat
        };
        let mut sats: Vec<u64> = Vec::new();
        match mode {
            TMapMode::Exact => {
                sats.extend((0..(1u64 << system.len())).map(|m| sat_of(&[m])));
            }
            TMapMode::Sampled {
                seed,
                stream,
                count,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream);
                sats.push(full_mask);
                sats.push(pair_masks.iter().fold(full_mask, |acc, &m| acc & m));
                let mut bits = vec![0u64; words];
                for _ in 0..count {
                    for word in bits.iter_mut() {
                        *word = rng.next_u64();
                    }
                    sats.push(sat_of(&bits));
                }
            }
        }
        sats.sort_unstable();
        sats.dedup();
        let radicals: Vec<Congruence> = sats
            .into_iter()
            .map(|sat| {
                let indices: Vec<usize> = (0..64).filter(|&i| sat >> i & 1 == 1).collect();
                Congruence::refine(free.size(), free.base().size(), indices.len(), |e, col| {
                    free.vector(e)[indices[col]]
                })
            })
            .collect();
        return CongruenceFamily::new(free.size(), radicals);
    }

    let mut radicals: Vec<Congruence> = Vec::new();
    match mode {
        TMapMode::Exact => {
            for mask in 0..(1u64 << system.len()) {
                radicals.push(radical(free, &system.subset(mask)));
            }
        }
        TMapMode::Sampled {
            seed,
            stream,
            count,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            radicals.push(radical(free, &EquationSystem::empty()));
            radicals.push(radical(free, system));
            for _ in 0..count {
                let bits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
                radicals.push(radical(free, &system.subset_by_bits(&bits)));
            }
        }
    }
    CongruenceFamily::new(free.size(), radicals)
}

/// System enumeration policy for the exhaustive and sampled checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Exhaustive,
    Sample { seed: u64, count: usize },
}

impl Policy {
    pub fn kind(&self) -> &'static str {
        match self {
            Policy::Exhaustive => "exhaustive",
            Policy::Sample { .. } => "sample",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Policy::Exhaustive => None,
            Policy::Sample { seed, .. } => Some(*seed),
        }
    }

    pub fn sample_count(&self) -> Option<usize> {
        match self {
            Policy::Exhaustive => None,
            Policy::Sample { count, .. } => Some(*count),
        }
    }
}

/// Deterministic, index-addressable stream of systems over a free algebra.
///
/// Exhaustive mode iterates bitmasks over the off-diagonal pair set of the
/// free algebra; sampled mode draws the `i`-th system from an RNG stream
/// derived from the seed and `i`, so parallel evaluation is reproducible.
pub struct SystemSource<'a> {
    free: &'a FreeAlgebra,
    all_pairs: EquationSystem,
    policy: Policy,
    count: usize,
}

impl<'a> SystemSource<'a> {
    pub fn new(free: &'a FreeAlgebra, policy: Policy, caps: &Caps) -> Result<SystemSource<'a>> {
        let all_pairs = EquationSystem::from_congruence(&Congruence::full(free.size()));
        let count = match policy {
            Policy::Exhaustive => {
                if all_pairs.len() > caps.system_bits {
                    return Err(Error::LimitExceeded {
                        what: "exhaustive system enumeration bits",
                        needed: all_pairs.len(),
                        cap: caps.system_bits,
                    });
                }
                1usize << all_pairs.len()
            }
            Policy::Sample { count, .. } => count,
        };
        Ok(SystemSource {
            free,
            all_pairs,
            policy,
            count,
        })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Number of off-diagonal element pairs systems are built from.
    pub fn pair_count(&self) -> usize {
        self.all_pairs.len()
    }

    pub fn system(&self, index: usize) -> EquationSystem {
        match self.policy {
            Policy::Exhaustive => self.all_pairs.subset(index as u64),
            Policy::Sample { seed, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(2 * index as u64);
                let words = self.all_pairs.len().div_ceil(64);
                let bits: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
                self.all_pairs.subset_by_bits(&bits)
            }
        }
    }

    pub fn free(&self) -> &FreeAlgebra {
        self.free
    }
}

/// Tuning for the per-system checks.
#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    /// Random subsets drawn per system when a system is too large for
    /// exact subset enumeration.
    pub tmap_samples: usize,
    /// Seed for those subset draws (streams are derived per system).
    pub tmap_seed: u64,
    /// Worker threads for the per-system loop.
    pub jobs: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tmap_samples: 64,
            tmap_seed: 0,
            jobs: 1,
        }
    }
}

/// One failed system with both sides rendered through witness terms.
#[derive(Debug, Clone, Serialize)]
pub struct FailureCase {
    pub system: Vec<[String; 2]>,
    pub expected: Vec<Vec<String>>,
    pub got: Vec<Vec<String>>,
}

fn render_blocks(free: &FreeAlgebra, theta: &Congruence) -> Vec<Vec<String>> {
    theta
        .blocks()
        .iter()
        .map(|block| block.iter().map(|&e| free.witness(e)).collect())
        .collect()
}

/// Report envelope for the hypothesis check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub op: String,
    pub algebra: String,
    pub n: usize,
    pub policy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    pub systems_checked: usize,
    pub failures: Vec<FailureCase>,
    pub verdict: String,
}

/// Report for the full composition check; `failures` lists systems where
/// the composed operation differs from the radical.
#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub op: String,
    pub algebra: String,
    pub n: usize,
    pub policy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    pub systems_checked: usize,
    pub hypothesis_failures: Vec<FailureCase>,
    pub failures: Vec<FailureCase>,
    pub forced: bool,
    pub verdict: String,
}

fn verdict(ok: bool) -> String {
    if ok { "pass" } else { "fail" }.to_string()
}

struct SystemOutcome {
    hypothesis: Option<FailureCase>,
    equality: Option<FailureCase>,
}

fn run_system_checks(
    op: &SuperProductOp,
    source: &SystemSource<'_>,
    caps: &Caps,
    cfg: &CheckConfig,
) -> Result<(usize, Vec<FailureCase>, Vec<FailureCase>)> {
    let free = source.free();
    let outcomes: Vec<Result<SystemOutcome>> =
        parallel_map(source.len(), cfg.jobs, |index| {
            let system = source.system(index);
            let expected = radical(free, &system);
            let mode = if system.len() <= caps.subset_bits {
                TMapMode::Exact
            } else {
                TMapMode::Sampled {
                    seed: cfg.tmap_seed,
                    stream: 2 * index as u64 + 1,
                    count: cfg.tmap_samples,
                }
            };
            let family = t_map(free, &system, mode, caps)?;
            let got = apply(op, free, &family, caps)?;
            let mut outcome = SystemOutcome {
                hypothesis: None,
                equality: None,
            };
            if !got.leq(&expected) || got != expected {
                let case = FailureCase {
                    system: system.render(free),
                    expected: render_blocks(free, &expected),
                    got: render_blocks(free, &got),
                };
                if !got.leq(&expected) {
                    outcome.hypothesis = Some(case.clone());
                }
                if got != expected {
                    outcome.equality = Some(case);
                }
            }
            Ok(outcome)
        });
    let mut hypothesis = Vec::new();
    let mut equality = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        hypothesis.extend(outcome.hypothesis);
        equality.extend(outcome.equality);
    }
    Ok((source.len(), hypothesis, equality))
}

/// Check the bounding hypothesis: the operation applied to the radicals of
/// the finite subsystems stays inside the radical of the whole system.
pub fn check_hypothesis(
    op: &SuperProductOp,
    free: &FreeAlgebra,
    policy: Policy,
    caps: &Caps,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let source = SystemSource::new(free, policy, caps)?;
    let (systems_checked, failures, _) = run_system_checks(op, &source, caps, cfg)?;
    Ok(CheckReport {
        op: op.name().to_string(),
        algebra: free.base().name.clone(),
        n: free.generator_count(),
        policy: policy.kind().to_string(),
        seed: policy.seed(),
        sample_count: policy.sample_count(),
        systems_checked,
        verdict: verdict(failures.is_empty()),
        failures,
    })
}

/// Check the composition identity: the operation applied to the radicals
/// of the finite subsystems reproduces the radical exactly.
///
/// The hypothesis is established first over the same systems; without
/// `force` a hypothesis violation aborts with
/// [`Error::HypothesisNotEstablished`], mirroring the conditional shape of
/// the statement being checked. With `force` the report carries both
/// failure lists and the verdict `hypothesis-not-established`.
pub fn check_theorem(
    op: &SuperProductOp,
    free: &FreeAlgebra,
    policy: Policy,
    caps: &Caps,
    cfg: &CheckConfig,
    force: bool,
) -> Result<TheoremReport> {
    let source = SystemSource::new(free, policy, caps)?;
    let (systems_checked, hypothesis_failures, failures) =
        run_system_checks(op, &source, caps, cfg)?;
    if !hypothesis_failures.is_empty() && !force {
        let first = &hypothesis_failures[0];
        return Err(Error::HypothesisNotEstablished(format!(
            "`{}` exceeds the radical on the system {:?}",
            op.name(),
            first.system
        )));
    }
    let verdict = if !hypothesis_failures.is_empty() {
        "hypothesis-not-established".to_string()
    } else if failures.is_empty() {
        "pass".to_string()
    } else {
        "fail".to_string()
    };
    Ok(TheoremReport {
        op: op.name().to_string(),
        algebra: free.base().name.clone(),
        n: free.generator_count(),
        policy: policy.kind().to_string(),
        seed: policy.seed(),
        sample_count: policy.sample_count(),
        systems_checked,
        hypothesis_failures,
        failures,
        forced: force,
        verdict,
    })
}

/// A containment-axiom violation: a family member not contained in the
/// operation's result.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomWitness {
    pub family: Vec<Vec<Vec<String>>>,
    pub member: usize,
    pub pair: [String; 2],
}

/// Report for the containment-axiom check over sampled families.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub op: String,
    pub algebra: String,
    pub n: usize,
    pub seed: u64,
    pub families_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
    pub verdict: String,
}

/// Test one family against the containment axiom; returns the first
/// violating member and pair.
pub fn axiom_violation(
    op: &SuperProductOp,
    free: &FreeAlgebra,
    family: &CongruenceFamily,
    caps: &Caps,
) -> Result<Option<AxiomWitness>> {
    let result = apply(op, free, family, caps)?;
    for (member_idx, theta) in family.members().iter().enumerate() {
        if !theta.leq(&result) {
            let (p, q) = theta
                .pairs()
                .into_iter()
                .find(|&(p, q)| !result.related(p, q))
                .expect("a non-contained congruence relates some pair the result does not");
            return Ok(Some(AxiomWitness {
                family: family
                    .members()
                    .iter()
                    .map(|t| render_blocks(free, t))
                    .collect(),
                member: member_idx,
                pair: [free.witness(p), free.witness(q)],
            }));
        }
    }
    Ok(None)
}

/// Seeded random families of congruences on the free algebra: between one
/// and four members, each generated by up to three random pairs.
pub fn sample_families(free: &FreeAlgebra, count: usize, seed: u64) -> Vec<CongruenceFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = free.size() as u64;
    (0..count)
        .map(|_| {
            let member_count = 1 + (rng.next_u64() % 4) as usize;
            let members = (0..member_count)
                .map(|_| {
                    let pair_count = 1 + (rng.next_u64() % 3) as usize;
                    let pairs: Vec<(usize, usize)> = (0..pair_count)
                        .map(|_| {
                            (
                                (rng.next_u64() % size) as usize,
                                (rng.next_u64() % size) as usize,
                            )
                        })
                        .collect();
                    congruence::generated_congruence(free.as_algebra(), &pairs)
                })
                .collect();
            CongruenceFamily::new(free.size(), members).expect("members are built on the free algebra")
        })
        .collect()
}

/// Check the containment axiom over `count` seeded random families.
pub fn check_axiom(
    op: &SuperProductOp,
    free: &FreeAlgebra,
    count: usize,
    seed: u64,
    caps: &Caps,
) -> Result<AxiomReport> {
    let mut witness = None;
    let mut checked = 0;
    for family in sample_families(free, count, seed) {
        checked += 1;
        if let Some(found) = axiom_violation(op, free, &family, caps)? {
            witness = Some(found);
            break;
        }
    }
    Ok(AxiomReport {
        op: op.name().to_string(),
        algebra: free.base().name.clone(),
        n: free.generator_count(),
        seed,
        families_checked: checked,
        verdict: verdict(witness.is_none()),
        witness,
    })
}
