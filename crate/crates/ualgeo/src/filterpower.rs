//! Filters on finite index sets, filter-powers with certified isomorphisms
//! to plain powers, geometric-equivalence checking, and the coordinate
//! algebras of equation systems together with their embeddings into direct
//! powers.

use crate::algebra::{tuple_decode, tuple_encode, FiniteAlgebra, Homomorphism};
use crate::caps::Caps;
use crate::congruence::Congruence;
use crate::error::{Error, Result};
use crate::free::{build_free, FreeAlgebra};
use crate::par::parallel_map;
use crate::radical::{
    evaluate_into, quasi_identity_true_in, radical, radical_via, satisfying_assignments,
    EquationSystem,
};
use crate::superproduct::{Policy, SystemSource};
use crate::term::Term;
use serde::Serialize;

/// A proper filter on a finite index set `{0..index_size-1}`, stored by its
/// principal core: the members are exactly the supersets of the core. On a
/// finite index set every proper filter has this shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filter {
    index_size: usize,
    core: Vec<usize>,
}

impl Filter {
    pub fn index_size(&self) -> usize {
        self.index_size
    }

    /// The principal generator, sorted ascending.
    pub fn core(&self) -> &[usize] {
        &self.core
    }

    /// All members, smallest first (by bitmask value): every superset of
    /// the core. Only available for index sets of at most 16 points.
    pub fn members(&self) -> Result<Vec<Vec<usize>>> {
        if self.index_size > 16 {
            return Err(Error::LimitExceeded {
                what: "filter member enumeration",
                needed: self.index_size,
                cap: 16,
            });
        }
        let core_mask: u32 = self.core.iter().map(|&i| 1u32 << i).sum();
        let mut members = Vec::new();
        for mask in 0u32..(1 << self.index_size) {
            if mask & core_mask == core_mask {
                members.push(
                    (0..self.index_size)
                        .filter(|&i| mask >> i & 1 == 1)
                        .collect(),
                );
            }
        }
        Ok(members)
    }
}

/// The filter of all supersets of a nonempty `core` inside
/// `{0..index_size-1}`.
pub fn principal_filter(index_size: usize, core: &[usize]) -> Result<Filter> {
    if core.is_empty() {
        return Err(Error::ImproperFilter("the core must be nonempty".into()));
    }
    let mut core = core.to_vec();
    core.sort_unstable();
    core.dedup();
    for &i in &core {
        if i >= index_size {
            return Err(Error::OutOfRange {
                what: "core index",
                value: i,
                max: index_size,
            });
        }
    }
    Ok(Filter { index_size, core })
}

/// Build a filter from an explicit member list, validating that it is a
/// proper filter (nonempty, no empty member, upward closed, closed under
/// intersection) and extracting the principal core.
pub fn filter_from_members(index_size: usize, members: &[Vec<usize>]) -> Result<Filter> {
    if index_size > 16 {
        return Err(Error::LimitExceeded {
            what: "filter member validation",
            needed: index_size,
            cap: 16,
        });
    }
    if members.is_empty() {
        return Err(Error::ImproperFilter("no members".into()));
    }
    let mut masks = Vec::with_capacity(members.len());
    for member in members {
        let mut mask = 0u32;
        for &i in member {
            if i >= index_size {
                return Err(Error::OutOfRange {
                    what: "member index",
                    value: i,
                    max: index_size,
                });
            }
            mask |= 1 << i;
        }
        if mask == 0 {
            return Err(Error::ImproperFilter("the empty set is a member".into()));
        }
        masks.push(mask);
    }
    masks.sort_unstable();
    masks.dedup();
    for &a in &masks {
        for &b in &masks {
            if !masks.binary_search(&(a & b)).is_ok() {
                return Err(Error::ImproperFilter(format!(
                    "not closed under intersection: {a:#b} and {b:#b}"
                )));
            }
        }
        for up in 0u32..(1 << index_size) {
            if up & a == a && !masks.binary_search(&up).is_ok() {
                return Err(Error::ImproperFilter(format!(
                    "not upward closed above {a:#b}"
                )));
            }
        }
    }
    let core_mask = masks.iter().fold(!0u32, |acc, &m| acc & m);
    let core: Vec<usize> = (0..index_size)
        .filter(|&i| core_mask >> i & 1 == 1)
        .collect();
    principal_filter(index_size, &core)
}

/// The congruence on `A^I` identifying tuples that agree on the filter's
/// core. Computed directly from index arithmetic; the power algebra itself
/// is not needed.
pub fn filter_congruence(alg: &FiniteAlgebra, filter: &Filter, caps: &Caps) -> Result<Congruence> {
    let size = match alg.size().checked_pow(filter.index_size as u32) {
        Some(s) if s <= caps.carrier => s,
        bigger => {
            return Err(Error::LimitExceeded {
                what: "filter power carrier",
                needed: bigger.unwrap_or(usize::MAX),
                cap: caps.carrier,
            })
        }
    };
    // Refine by the coordinates in the core: digit `core[col]` of the
    // big-endian tuple encoding.
    let m = alg.size();
    let index_size = filter.index_size;
    Ok(Congruence::refine(size, m, filter.core.len(), |x, col| {
        let position = filter.core[col];
        x / m.pow((index_size - 1 - position) as u32) % m
    }))
}

/// A filter-power with its construction certified: the quotient of the
/// power by the filter congruence, the projection onto it, and a verified
/// isomorphism onto the plain power over the core.
#[derive(Debug, Clone)]
pub struct FilterPower {
    /// The ambient power `A^I`.
    pub power: FiniteAlgebra,
    /// The filter-power itself (quotient of `power`).
    pub algebra: FiniteAlgebra,
    /// Canonical projection `power -> algebra`.
    pub projection: Homomorphism,
    /// The plain power `A^|J|` over the core.
    pub restricted: FiniteAlgebra,
    /// The isomorphism `algebra -> restricted` built from restriction (not
    /// searched), verified bijective and operation-preserving.
    pub certificate: Homomorphism,
}

/// Construct the filter-power of `alg` and certify its isomorphism to the
/// power over the filter's core.
pub fn filter_power(alg: &FiniteAlgebra, filter: &Filter, caps: &Caps) -> Result<FilterPower> {
    let power = alg.direct_power(filter.index_size, caps)?;
    let theta = filter_congruence(alg, filter, caps)?;
    let (quotient, projection) = power.quotient(&theta)?;
    let restricted = alg.direct_power(filter.core.len(), caps)?;
    let reps: Vec<usize> = (0..power.size())
        .filter(|&x| theta.rep()[x] == x)
        .collect();
    let map: Vec<usize> = reps
        .iter()
        .map(|&r| {
            let tuple = tuple_decode(r, alg.size(), filter.index_size);
            let restriction: Vec<usize> = filter.core.iter().map(|&i| tuple[i]).collect();
            tuple_encode(&restriction, alg.size())
        })
        .collect();
    let certificate = Homomorphism { map };
    assert!(
        certificate.verify(&quotient, &restricted)
            && certificate.is_bijective(restricted.size()),
        "restriction to the core must be an isomorphism"
    );
    Ok(FilterPower {
        power,
        algebra: quotient,
        projection,
        restricted,
        certificate,
    })
}

/// One system where the radicals over the two algebras differ.
#[derive(Debug, Clone, Serialize)]
pub struct GeomEqFailure {
    pub n: usize,
    pub system: Vec<[String; 2]>,
    pub expected: Vec<Vec<String>>,
    pub got: Vec<Vec<String>>,
}

/// Outcome of a geometric-equivalence comparison.
#[derive(Debug, Clone, Serialize)]
pub struct GeomEqReport {
    pub algebra: String,
    pub other: String,
    pub n_from: usize,
    pub n_to: usize,
    pub policy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    pub systems_checked: usize,
    pub failures: Vec<GeomEqFailure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub incomparable: Option<String>,
    pub verdict: String,
}

/// Compare radicals over `a` and over `b` for every system in the policy's
/// scope, for each generator count in `n_from..=n_to`.
///
/// Radicals over `b` are computed on `a`'s free algebra by evaluating
/// witness terms in `b`; if `b` fails an identity that presentation relies
/// on, the report's verdict is `incomparable-free-algebra` rather than an
/// answer.
pub fn geometric_equivalence(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    n_from: usize,
    n_to: usize,
    policy: Policy,
    caps: &Caps,
    jobs: usize,
) -> Result<GeomEqReport> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            a.signature(),
            b.signature()
        )));
    }
    let mut report = GeomEqReport {
        algebra: a.name.clone(),
        other: b.name.clone(),
        n_from,
        n_to,
        policy: policy.kind().to_string(),
        seed: policy.seed(),
        sample_count: policy.sample_count(),
        systems_checked: 0,
        failures: Vec::new(),
        incomparable: None,
        verdict: "equivalent".to_string(),
    };
    for n in n_from..=n_to {
        let free = build_free(a, n, caps)?;
        let ev = match evaluate_into(&free, b, caps) {
            Ok(ev) => ev,
            Err(Error::IncomparableFreeAlgebra(msg)) => {
                report.incomparable = Some(msg);
                report.verdict = "incomparable-free-algebra".to_string();
                return Ok(report);
            }
            Err(other) => return Err(other),
        };
        let source = SystemSource::new(&free, policy, caps)?;
        let failures: Vec<Option<GeomEqFailure>> =
            parallel_map(source.len(), jobs, |index| {
                let system = source.system(index);
                let expected = radical(&free, &system);
                let got = radical_via(&ev, &system);
                if expected == got {
                    None
                } else {
                    Some(GeomEqFailure {
                        n,
                        system: system.render(&free),
                        expected: expected
                            .blocks()
                            .iter()
                            .map(|b| b.iter().map(|&e| free.witness(e)).collect())
                            .collect(),
                        got: got
                            .blocks()
                            .iter()
                            .map(|b| b.iter().map(|&e| free.witness(e)).collect())
                            .collect(),
                    })
                }
            });
        report.systems_checked += source.len();
        report.failures.extend(failures.into_iter().flatten());
    }
    if !report.failures.is_empty() {
        report.verdict = "not-equivalent".to_string();
    }
    Ok(report)
}

/// The coordinate algebra of a system: the free algebra modulo the radical,
/// with the canonical projection.
pub fn coordinate_algebra(
    free: &FreeAlgebra,
    system: &EquationSystem,
) -> Result<(FiniteAlgebra, Homomorphism)> {
    let theta = radical(free, system);
    free.as_algebra().quotient(&theta)
}

/// A coordinate algebra embedded into a direct power of the base, one
/// coordinate per satisfying assignment.
#[derive(Debug, Clone)]
pub struct CoordinateEmbedding {
    /// The coordinate algebra `F / radical(S)`.
    pub algebra: FiniteAlgebra,
    /// The target power `A^m`.
    pub target: FiniteAlgebra,
    /// Indices of the satisfying assignments, in enumeration order.
    pub assignments: Vec<usize>,
    /// The embedding: a class maps to its value tuple across satisfying
    /// assignments.
    pub embedding: Homomorphism,
    /// Exhaustively verified properties of the embedding.
    pub injective: bool,
    pub homomorphic: bool,
}

impl CoordinateEmbedding {
    /// Degenerate case: an unsatisfiable system embeds the one-point
    /// coordinate algebra into the empty power.
    pub fn is_degenerate(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn verified(&self) -> bool {
        self.injective && self.homomorphic
    }
}

/// Embed the coordinate algebra of a system into `A^m`, where `m` is the
/// number of satisfying assignments; classes map to their value tuples.
/// The injectivity and homomorphism certificates are checked exhaustively.
pub fn coordinate_embedding(
    free: &FreeAlgebra,
    system: &EquationSystem,
    caps: &Caps,
) -> Result<CoordinateEmbedding> {
    let theta = radical(free, system);
    let (algebra, _projection) = free.as_algebra().quotient(&theta)?;
    let sat = satisfying_assignments(free, system);
    let target = free.base().direct_power(sat.len(), caps)?;
    let reps: Vec<usize> = (0..free.size())
        .filter(|&e| theta.rep()[e] == e)
        .collect();
    let map: Vec<usize> = reps
        .iter()
        .map(|&r| {
            let values: Vec<usize> = sat.iter().map(|&i| free.vector(r)[i]).collect();
            tuple_encode(&values, free.base().size())
        })
        .collect();
    let embedding = Homomorphism { map };
    let injective = {
        let mut seen = embedding.map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == embedding.map.len()
    };
    let homomorphic = embedding.verify(&algebra, &target);
    Ok(CoordinateEmbedding {
        algebra,
        target,
        assignments: sat,
        embedding,
        injective,
        homomorphic,
    })
}

/// A mismatch found by [`quasi_identity_transfer`].
#[derive(Debug, Clone, Serialize)]
pub struct TransferWitness {
    pub body: Vec<[String; 2]>,
    pub head: [String; 2],
    pub holds_in_algebra: bool,
    pub holds_in_other: bool,
}

/// Report of the quasi-identity transfer check between an algebra and
/// another algebra over the same signature.
#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub algebra: String,
    pub other: String,
    pub n: usize,
    pub max_body: usize,
    pub checked: usize,
    /// How many of the checks were additionally cross-checked against the
    /// direct term-level truth evaluation.
    pub oracle_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TransferWitness>,
    pub verdict: String,
}

/// Check that every quasi-identity with a body of at most `max_body`
/// equations over the free algebra on `n` generators is true in `a`
/// exactly when it is true in `b`.
///
/// Truth on both sides is decided through radicals (on `a`'s free algebra,
/// with `b`'s side evaluated through witness terms). Bodies of at most one
/// equation are additionally cross-checked by direct term-level truth
/// evaluation in both algebras, an independent route.
pub fn quasi_identity_transfer(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    n: usize,
    max_body: usize,
    caps: &Caps,
) -> Result<TransferReport> {
    let free = build_free(a, n, caps)?;
    let ev = evaluate_into(&free, b, caps)?;
    let all_pairs = EquationSystem::from_congruence(&Congruence::full(free.size()));
    let pairs = all_pairs.pairs();
    let mut bodies: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    if max_body >= 1 {
        for &p in pairs {
            bodies.push(vec![p]);
        }
    }
    if max_body >= 2 {
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                bodies.push(vec![pairs[i], pairs[j]]);
            }
        }
    }
    let term_pair = |(p, q): (usize, usize)| -> Result<(Term, Term)> {
        Ok((
            free.witness_term(p)?.clone(),
            free.witness_term(q)?.clone(),
        ))
    };
    let mut checked = 0;
    let mut oracle_checked = 0;
    let mut report = TransferReport {
        algebra: a.name.clone(),
        other: b.name.clone(),
        n,
        max_body,
        checked: 0,
        oracle_checked: 0,
        witness: None,
        verdict: "pass".to_string(),
    };
    'bodies: for body in &bodies {
        let body_system = EquationSystem::new(free.size(), body)?;
        let radical_a = radical(&free, &body_system);
        let radical_b = radical_via(&ev, &body_system);
        let body_terms: Vec<(Term, Term)> = body
            .iter()
            .map(|&pair| term_pair(pair))
            .collect::<Result<_>>()?;
        for &head in pairs {
            checked += 1;
            let in_a = radical_a.related(head.0, head.1);
            let in_b = radical_b.related(head.0, head.1);
            let mut mismatch = in_a != in_b;
            if !mismatch && body.len() <= 1 {
                oracle_checked += 1;
                let head_terms = term_pair(head)?;
                let direct_a = quasi_identity_true_in(a, n, &body_terms, &head_terms)?.holds;
                let direct_b = quasi_identity_true_in(b, n, &body_terms, &head_terms)?.holds;
                mismatch = direct_a != in_a || direct_b != in_b;
            }
            if mismatch {
                report.witness = Some(TransferWitness {
                    body: body_system.render(&free),
                    head: [free.witness(head.0), free.witness(head.1)],
                    holds_in_algebra: in_a,
                    holds_in_other: in_b,
                });
                report.verdict = "fail".to_string();
                break 'bodies;
            }
        }
    }
    report.checked = checked;
    report.oracle_checked = oracle_checked;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::term::parse_term;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn principal_filter_members() {
        let filter = principal_filter(3, &[0, 1]).unwrap();
        assert_eq!(
            filter.members().unwrap(),
            vec![vec![0, 1], vec![0, 1, 2]]
        );

        let whole = principal_filter(3, &[0, 1, 2]).unwrap();
        assert_eq!(whole.members().unwrap(), vec![vec![0, 1, 2]]);

        assert!(matches!(
            principal_filter(3, &[]),
            Err(Error::ImproperFilter(_))
        ));
        assert!(matches!(
            principal_filter(3, &[3]),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn filter_from_members_validates_closure() {
        let filter =
            filter_from_members(3, &[vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(filter.core(), &[0, 1]);

        // Missing the top set: not upward closed.
        assert!(matches!(
            filter_from_members(3, &[vec![0, 1]]),
            Err(Error::ImproperFilter(_))
        ));
        // Two incomparable sets without their intersection.
        assert!(matches!(
            filter_from_members(3, &[vec![0, 1], vec![1, 2], vec![0, 1, 2]]),
            Err(Error::ImproperFilter(_))
        ));
        assert!(matches!(
            filter_from_members(3, &[vec![], vec![0], vec![0, 1], vec![0, 2], vec![0, 1, 2]]),
            Err(Error::ImproperFilter(_))
        ));
    }

    #[test]
    fn filter_congruence_class_structure() {
        let z2 = corpus::z2_group();
        // Core = the whole index set: the diagonal.
        let filter = principal_filter(3, &[0, 1, 2]).unwrap();
        let theta = filter_congruence(&z2, &filter, &caps()).unwrap();
        assert_eq!(theta, Congruence::diagonal(8));

        // |A| = 2, I = 3, J = {0,1}: four classes of two.
        let filter = principal_filter(3, &[0, 1]).unwrap();
        let theta = filter_congruence(&z2, &filter, &caps()).unwrap();
        let blocks = theta.blocks();
        assert_eq!(blocks.len(), 4);
        assert!(blocks.iter().all(|b| b.len() == 2));

        // |A| = 2, I = 2, J = {0}: two classes of two.
        let filter = principal_filter(2, &[0]).unwrap();
        let theta = filter_congruence(&z2, &filter, &caps()).unwrap();
        assert_eq!(theta.class_count(), 2);
    }

    #[test]
    fn filter_power_certificates() {
        let z2 = corpus::z2_group();
        // J = I: isomorphic to the full power.
        let filter = principal_filter(2, &[0, 1]).unwrap();
        let fp = filter_power(&z2, &filter, &caps()).unwrap();
        assert_eq!(fp.algebra.size(), 4);
        assert!(fp.projection.verify(&fp.power, &fp.algebra));

        // |I| = 3, J = {0,1}: a four-element algebra isomorphic to the
        // square.
        let filter = principal_filter(3, &[0, 1]).unwrap();
        let fp = filter_power(&z2, &filter, &caps()).unwrap();
        assert_eq!(fp.algebra.size(), 4);
        let square = z2.direct_power(2, &caps()).unwrap();
        assert!(fp.algebra.find_isomorphism(&square, &caps()).unwrap().is_some());

        // |J| = 1: isomorphic to the base.
        let filter = principal_filter(3, &[1]).unwrap();
        let fp = filter_power(&z2, &filter, &caps()).unwrap();
        assert_eq!(fp.algebra.size(), 2);
        assert!(fp.algebra.find_isomorphism(&z2, &caps()).unwrap().is_some());
    }

    #[test]
    fn geometric_equivalence_reflexive_and_filter_power() {
        let z2 = corpus::z2_group();
        let report =
            geometric_equivalence(&z2, &z2, 1, 2, Policy::Exhaustive, &caps(), 1).unwrap();
        assert_eq!(report.verdict, "equivalent");

        let filter = principal_filter(3, &[0, 1]).unwrap();
        let fp = filter_power(&z2, &filter, &caps()).unwrap();
        let report =
            geometric_equivalence(&z2, &fp.algebra, 1, 2, Policy::Exhaustive, &caps(), 1)
                .unwrap();
        assert_eq!(report.verdict, "equivalent");
        assert_eq!(report.systems_checked, 2 + 64);
    }

    #[test]
    fn geometric_equivalence_discriminates_trivial() {
        let s2 = corpus::semilattice2();
        let trivial = corpus::trivial();
        let report =
            geometric_equivalence(&s2, &trivial, 1, 2, Policy::Exhaustive, &caps(), 1)
                .unwrap();
        assert_eq!(report.verdict, "not-equivalent");
        let first = &report.failures[0];
        // The witness is the empty system at n = 2.
        assert_eq!(first.n, 2);
        assert!(first.system.is_empty());

        let z2 = corpus::z2_group();
        assert!(matches!(
            geometric_equivalence(&s2, &z2, 1, 2, Policy::Exhaustive, &caps(), 1),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn geometric_equivalence_reports_incomparable() {
        let s2 = corpus::semilattice2();
        let sig = crate::term::Signature::new(vec![("meet", 2)]).unwrap();
        let xor = FiniteAlgebra::new("xor", sig, 2, vec![vec![0, 1, 1, 0]]).unwrap();
        let report =
            geometric_equivalence(&s2, &xor, 1, 2, Policy::Exhaustive, &caps(), 1).unwrap();
        assert_eq!(report.verdict, "incomparable-free-algebra");
        assert!(report.incomparable.is_some());
    }

    #[test]
    fn coordinate_algebra_examples() {
        let z2 = corpus::z2_group();
        let free = build_free(&z2, 2, &caps()).unwrap();
        let sig = z2.signature().clone();

        let (alg, _) = coordinate_algebra(&free, &EquationSystem::empty()).unwrap();
        assert!(alg
            .find_isomorphism(free.as_algebra(), &caps())
            .unwrap()
            .is_some());

        let system = EquationSystem::from_terms(
            &free,
            &[(
                parse_term("(+ x1 x2)", &sig, 2).unwrap(),
                parse_term("(e)", &sig, 2).unwrap(),
            )],
        )
        .unwrap();
        let (alg, _) = coordinate_algebra(&free, &system).unwrap();
        assert_eq!(alg.size(), 2);
        assert!(alg.find_isomorphism(&z2, &caps()).unwrap().is_some());

        // Unsatisfiable system: the trivial coordinate algebra.
        let pz2 = corpus::pointed_z2();
        let free1 = build_free(&pz2, 1, &caps()).unwrap();
        let psig = pz2.signature().clone();
        let unsat = EquationSystem::from_terms(
            &free1,
            &[(
                parse_term("x1", &psig, 1).unwrap(),
                parse_term("(+ x1 (one))", &psig, 1).unwrap(),
            )],
        )
        .unwrap();
        let (alg, _) = coordinate_algebra(&free1, &unsat).unwrap();
        assert_eq!(alg.size(), 1);
    }

    #[test]
    fn coordinate_embedding_examples() {
        let z2 = corpus::z2_group();
        let free = build_free(&z2, 2, &caps()).unwrap();
        let sig = z2.signature().clone();
        let system = EquationSystem::from_terms(
            &free,
            &[(
                parse_term("(+ x1 x2)", &sig, 2).unwrap(),
                parse_term("(e)", &sig, 2).unwrap(),
            )],
        )
        .unwrap();
        let emb = coordinate_embedding(&free, &system, &caps()).unwrap();
        assert_eq!(emb.assignments.len(), 2);
        assert_eq!(emb.algebra.size(), 2);
        assert!(emb.verified());

        // The defining representation: the whole free algebra embeds into
        // the power over all assignments.
        let emb = coordinate_embedding(&free, &EquationSystem::empty(), &caps()).unwrap();
        assert_eq!(emb.assignments.len(), 4);
        assert_eq!(emb.algebra.size(), free.size());
        assert!(emb.verified());

        // The semilattice example: x = x^y has three satisfying
        // assignments and a two-element coordinate algebra.
        let s2 = corpus::semilattice2();
        let sfree = build_free(&s2, 2, &caps()).unwrap();
        let ssig = s2.signature().clone();
        let system = EquationSystem::from_terms(
            &sfree,
            &[(
                parse_term("x1", &ssig, 2).unwrap(),
                parse_term("(meet x1 x2)", &ssig, 2).unwrap(),
            )],
        )
        .unwrap();
        let emb = coordinate_embedding(&sfree, &system, &caps()).unwrap();
        assert_eq!(emb.assignments.len(), 3);
        assert_eq!(emb.algebra.size(), 2);
        assert!(emb.verified());
    }

    #[test]
    fn coordinate_embedding_degenerate_case() {
        let pz2 = corpus::pointed_z2();
        let free1 = build_free(&pz2, 1, &caps()).unwrap();
        let sig = pz2.signature().clone();
        let unsat = EquationSystem::from_terms(
            &free1,
            &[(
                parse_term("x1", &sig, 1).unwrap(),
                parse_term("(+ x1 (one))", &sig, 1).unwrap(),
            )],
        )
        .unwrap();
        let emb = coordinate_embedding(&free1, &unsat, &caps()).unwrap();
        assert!(emb.is_degenerate());
        assert_eq!(emb.algebra.size(), 1);
        assert_eq!(emb.target.size(), 1);
        assert!(emb.verified());
    }

    #[test]
    fn embedding_composed_with_projection_is_an_assignment_hom() {
        let z2 = corpus::z2_group();
        let free = build_free(&z2, 2, &caps()).unwrap();
        let emb = coordinate_embedding(&free, &EquationSystem::empty(), &caps()).unwrap();
        let theta = radical(&free, &EquationSystem::empty());
        let (_, projection) = free.as_algebra().quotient(&theta).unwrap();
        for (j, &sat_idx) in emb.assignments.iter().enumerate() {
            let assignment_hom = free.assignment_hom(sat_idx);
            for e in 0..free.size() {
                let class = projection.map[e];
                let tuple =
                    tuple_decode(emb.embedding.map[class], z2.size(), emb.assignments.len());
                assert_eq!(tuple[j], assignment_hom.map[e]);
            }
        }
    }

    #[test]
    fn quasi_identity_transfer_to_filter_power() {
        let z2 = corpus::z2_group();
        let filter = principal_filter(3, &[0, 2]).unwrap();
        let fp = filter_power(&z2, &filter, &caps()).unwrap();
        let report = quasi_identity_transfer(&z2, &fp.algebra, 2, 2, &caps()).unwrap();
        assert_eq!(report.verdict, "pass");
        assert!(report.checked > 0);

        // The trivial algebra satisfies strictly more quasi-identities.
        let s2 = corpus::semilattice2();
        let report =
            quasi_identity_transfer(&s2, &corpus::trivial(), 2, 1, &caps()).unwrap();
        assert_eq!(report.verdict, "fail");
        assert!(report.witness.is_some());
    }
}
