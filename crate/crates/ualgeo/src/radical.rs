//! Radicals of equation systems relative to a finite algebra, quasi-identity
//! truth, and the two comparison radicals computed over the variety and the
//! prevariety generated by the base algebra.
//!
//! A system lives on a free algebra: it is a set of unordered pairs of
//! elements (term functions). The radical of a system is computed as the
//! intersection of the kernels of the assignment-induced homomorphisms at
//! the system's satisfying assignments; an unsatisfiable system has the
//! full congruence as its radical (the intersection of an empty family).

use crate::algebra::{eval_term, FiniteAlgebra};
use crate::caps::Caps;
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::free::FreeAlgebra;
use crate::term::{parse_term, Term};
use serde::{Deserialize, Serialize};

/// A finite system of equations over a free algebra: unordered pairs of
/// element indices, stored with the smaller index first, deduplicated,
/// diagonal pairs dropped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EquationSystem {
    pairs: Vec<(usize, usize)>,
}

impl EquationSystem {
    pub fn empty() -> EquationSystem {
        EquationSystem::default()
    }

    /// Normalizing constructor: validates indices against the carrier
    /// size, symmetrizes, deduplicates and drops the diagonal.
    pub fn new(size: usize, raw: &[(usize, usize)]) -> Result<EquationSystem> {
        let mut pairs = Vec::with_capacity(raw.len());
        for &(p, q) in raw {
            for idx in [p, q] {
                if idx >= size {
                    return Err(Error::IndexOutOfRange { index: idx, max: size });
                }
            }
            if p != q {
                pairs.push((p.min(q), p.max(q)));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(EquationSystem { pairs })
    }

    /// Normalize term-level equations into the free algebra.
    pub fn from_terms(free: &FreeAlgebra, equations: &[(Term, Term)]) -> Result<EquationSystem> {
        let mut raw = Vec::with_capacity(equations.len());
        for (lhs, rhs) in equations {
            raw.push((free.term_to_element(lhs)?, free.term_to_element(rhs)?));
        }
        EquationSystem::new(free.size(), &raw)
    }

    /// Read a congruence back as a system: all related off-diagonal pairs.
    pub fn from_congruence(theta: &Congruence) -> EquationSystem {
        EquationSystem {
            pairs: theta.pairs(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The subsystem selected by a bitmask over `pairs()`; only valid for
    /// systems of at most 64 equations.
    pub fn subset(&self, mask: u64) -> EquationSystem {
        debug_assert!(self.pairs.len() <= 64);
        EquationSystem {
            pairs: self
                .pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect(),
        }
    }

    /// The subsystem selected by a multi-word bitmask (bit `i` of
    /// `bits[i / 64]` selects pair `i`).
    pub fn subset_by_bits(&self, bits: &[u64]) -> EquationSystem {
        EquationSystem {
            pairs: self
                .pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits[i / 64] >> (i % 64) & 1 == 1)
                .map(|(_, &p)| p)
                .collect(),
        }
    }

    /// Set union of two systems over the same free algebra.
    pub fn union(&self, other: &EquationSystem) -> EquationSystem {
        let mut pairs = self.pairs.clone();
        pairs.extend_from_slice(&other.pairs);
        pairs.sort_unstable();
        pairs.dedup();
        EquationSystem { pairs }
    }

    /// Containment as sets of pairs.
    pub fn contains(&self, other: &EquationSystem) -> bool {
        other.pairs.iter().all(|p| self.pairs.binary_search(p).is_ok())
    }

    /// Equations rendered through witness terms, for reports.
    pub fn render(&self, free: &FreeAlgebra) -> Vec<[String; 2]> {
        self.pairs
            .iter()
            .map(|&(p, q)| [free.witness(p), free.witness(q)])
            .collect()
    }
}

/// The JSON system file format: a variable count plus term-level equations.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub vars: usize,
    pub equations: Vec<Equation>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Equation {
    pub lhs: String,
    pub rhs: String,
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<SystemFile> {
        serde_json::from_str(text).map_err(|e| Error::Syntax(format!("system file: {e}")))
    }

    /// Resolve the term strings against a free algebra built on `vars`
    /// generators.
    pub fn resolve(&self, free: &FreeAlgebra) -> Result<EquationSystem> {
        if free.generator_count() != self.vars {
            return Err(Error::AlgebraMismatch(format!(
                "system declares {} variables but the free algebra has {}",
                self.vars,
                free.generator_count()
            )));
        }
        let sig = free.base().signature();
        let mut equations = Vec::with_capacity(self.equations.len());
        for eq in &self.equations {
            equations.push((
                parse_term(&eq.lhs, sig, self.vars)?,
                parse_term(&eq.rhs, sig, self.vars)?,
            ));
        }
        EquationSystem::from_terms(free, &equations)
    }
}

/// Indices of the assignments (big-endian order) at which every equation
/// of the system holds.
pub fn satisfying_assignments(free: &FreeAlgebra, system: &EquationSystem) -> Vec<usize> {
    (0..free.assignment_count())
        .filter(|&idx| {
            system
                .pairs()
                .iter()
                .all(|&(p, q)| free.vector(p)[idx] == free.vector(q)[idx])
        })
        .collect()
}

/// The radical of a system: two elements are related exactly when their
/// term functions agree at every satisfying assignment. With no satisfying
/// assignment the radical is the full congruence.
pub fn radical(free: &FreeAlgebra, system: &EquationSystem) -> Congruence {
    let sat = satisfying_assignments(free, system);
    radical_at(free, &sat)
}

fn radical_at(free: &FreeAlgebra, sat: &[usize]) -> Congruence {
    // With no satisfying assignment the refinement never splits and the
    // result is the full congruence, matching the empty-intersection
    // convention.
    Congruence::refine(free.size(), free.base().size(), sat.len(), |e, col| {
        free.vector(e)[sat[col]]
    })
}

/// Outcome of a quasi-identity check; `witness` is a satisfying assignment
/// of the body that violates the head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiCheck {
    pub holds: bool,
    pub witness: Option<Vec<usize>>,
}

/// Truth of the quasi-identity `body -> head` over the free algebra's base:
/// equivalent to membership of the head in the radical of the body.
pub fn holds_quasi_identity(
    free: &FreeAlgebra,
    body: &EquationSystem,
    head: (usize, usize),
) -> QuasiCheck {
    for &idx in &satisfying_assignments(free, body) {
        if free.vector(head.0)[idx] != free.vector(head.1)[idx] {
            return QuasiCheck {
                holds: false,
                witness: Some(free.assignment(idx)),
            };
        }
    }
    QuasiCheck {
        holds: true,
        witness: None,
    }
}

/// Direct truth evaluation of a term-level quasi-identity in an arbitrary
/// algebra: for every assignment over `alg`, if all body equations hold
/// then the head must hold. This is an oracle independent of the free
/// algebra machinery.
pub fn quasi_identity_true_in(
    alg: &FiniteAlgebra,
    n: usize,
    body: &[(Term, Term)],
    head: &(Term, Term),
) -> Result<QuasiCheck> {
    let total = alg.size().pow(n as u32);
    for idx in 0..total {
        let assignment = crate::algebra::tuple_decode(idx, alg.size(), n);
        let mut body_holds = true;
        for (lhs, rhs) in body {
            if eval_term(lhs, alg, &assignment)? != eval_term(rhs, alg, &assignment)? {
                body_holds = false;
                break;
            }
        }
        if body_holds
            && eval_term(&head.0, alg, &assignment)? != eval_term(&head.1, alg, &assignment)?
        {
            return Ok(QuasiCheck {
                holds: false,
                witness: Some(assignment),
            });
        }
    }
    Ok(QuasiCheck {
        holds: true,
        witness: None,
    })
}

/// The radical over the variety generated by the base: the congruence
/// generated by the system inside the free algebra (every quotient of the
/// free algebra stays in the variety).
pub fn rad_var(free: &FreeAlgebra, system: &EquationSystem) -> Congruence {
    congruence::generated_congruence(free.as_algebra(), system.pairs())
}

/// Independent computation of the radical over the prevariety generated by
/// the base: the least congruence above the system whose quotient is
/// separated into the base algebra (any two distinct classes are told
/// apart by some homomorphism into it).
///
/// Found by searching the congruence interval above `rad_var` using the
/// congruence lattice, quotient construction and homomorphism enumeration;
/// it never looks at value vectors, so it is a genuinely separate route
/// from [`radical`].
pub fn rad_pvar_oracle(
    free: &FreeAlgebra,
    system: &EquationSystem,
    caps: &Caps,
) -> Result<Congruence> {
    let floor = rad_var(free, system);
    let lattice = congruence::all_congruences(free.as_algebra(), caps)?;
    let mut separable: Vec<Congruence> = Vec::new();
    for theta in lattice {
        if !floor.leq(&theta) {
            continue;
        }
        if is_separable(free.as_algebra(), free.base(), &theta, caps)? {
            separable.push(theta);
        }
    }
    // The separable congruences above a fixed floor are closed under
    // intersection and contain the full congruence, so the least one is
    // the meet of them all.
    let mut least = separable
        .first()
        .cloned()
        .expect("the full congruence is always separable");
    for theta in &separable[1..] {
        least = congruence::meet(&least, theta)?;
    }
    debug_assert!(separable.contains(&least));
    Ok(least)
}

/// The elements of a free algebra evaluated as term functions over another
/// algebra of the same signature, witness by witness.
///
/// Constructing this object checks that the target satisfies every identity
/// that defines the free algebra (the generator and homomorphism
/// conditions below), so membership in the variety of the base is
/// established exactly to the extent the evaluation needs it.
#[derive(Debug, Clone)]
pub struct ForeignEvaluation {
    /// `vectors[e][i]` is the value of element `e`'s term function at the
    /// `i`-th assignment over the target algebra, big-endian order.
    vectors: Vec<Vec<usize>>,
    assignments: usize,
    target_size: usize,
    n: usize,
}

impl ForeignEvaluation {
    pub fn assignment_count(&self) -> usize {
        self.assignments
    }

    pub fn assignment(&self, index: usize) -> Vec<usize> {
        crate::algebra::tuple_decode(index, self.target_size, self.n)
    }

    pub fn vector(&self, element: usize) -> &[usize] {
        &self.vectors[element]
    }
}

/// Evaluate every element of the free algebra in `other` through its
/// witness term and certify that the result is a well-defined
/// homomorphic image: the generators evaluate to the projections, and the
/// free algebra's operation tables commute with pointwise evaluation.
///
/// When a condition fails, `other` falsifies an identity of the base and
/// the radical comparison is meaningless; the error carries the witness.
pub fn evaluate_into(
    free: &FreeAlgebra,
    other: &FiniteAlgebra,
    caps: &Caps,
) -> Result<ForeignEvaluation> {
    if free.base().signature() != other.signature() {
        return Err(Error::SignatureMismatch(format!(
            "{} vs {}",
            free.base().signature(),
            other.signature()
        )));
    }
    let n = free.generator_count();
    let assignments = match other.size().checked_pow(n as u32) {
        Some(a) if a <= caps.carrier => a,
        bigger => {
            return Err(Error::LimitExceeded {
                what: "foreign assignment space",
                needed: bigger.unwrap_or(usize::MAX),
                cap: caps.carrier,
            })
        }
    };
    let mut vectors = Vec::with_capacity(free.size());
    for e in 0..free.size() {
        let witness = free.witness_term(e)?;
        let mut vector = Vec::with_capacity(assignments);
        for idx in 0..assignments {
            let assignment = crate::algebra::tuple_decode(idx, other.size(), n);
            vector.push(eval_term(witness, other, &assignment)?);
        }
        vectors.push(vector);
    }
    // Generator condition: the i-th generator must act as the i-th
    // projection. A collapse of generators in the free algebra that the
    // target does not share shows up here.
    for (var, &gen) in free.generators().iter().enumerate() {
        for idx in 0..assignments {
            let assignment = crate::algebra::tuple_decode(idx, other.size(), n);
            if vectors[gen][idx] != assignment[var] {
                return Err(Error::IncomparableFreeAlgebra(format!(
                    "generator x{} evaluates as `{}`, which is not the projection in {}",
                    var + 1,
                    free.witness(gen),
                    other.name
                )));
            }
        }
    }
    // Homomorphism condition: the free algebra's tables commute with
    // pointwise application in the target.
    let free_alg = free.as_algebra();
    for (sym_idx, sym) in other.signature().symbols().iter().enumerate() {
        let entries = free.size().pow(sym.arity as u32);
        for tuple_idx in 0..entries {
            let args = crate::algebra::tuple_decode(tuple_idx, free.size(), sym.arity);
            let out = free_alg.op(sym_idx, &args);
            for idx in 0..assignments {
                let point: Vec<usize> = args.iter().map(|&a| vectors[a][idx]).collect();
                if other.op(sym_idx, &point) != vectors[out][idx] {
                    let rendered: Vec<String> =
                        args.iter().map(|&a| free.witness(a)).collect();
                    return Err(Error::IncomparableFreeAlgebra(format!(
                        "`{}` applied to [{}] disagrees with `{}` in {}",
                        sym.name,
                        rendered.join(", "),
                        free.witness(out),
                        other.name
                    )));
                }
            }
        }
    }
    Ok(ForeignEvaluation {
        vectors,
        assignments,
        target_size: other.size(),
        n,
    })
}

/// The radical of a system computed over the foreign algebra: elements are
/// related when their evaluations agree at every foreign assignment
/// satisfying the system.
pub fn radical_via(ev: &ForeignEvaluation, system: &EquationSystem) -> Congruence {
    let sat: Vec<usize> = (0..ev.assignments)
        .filter(|&idx| {
            system
                .pairs()
                .iter()
                .all(|&(p, q)| ev.vectors[p][idx] == ev.vectors[q][idx])
        })
        .collect();
    Congruence::refine(ev.vectors.len(), ev.target_size, sat.len(), |e, col| {
        ev.vectors[e][sat[col]]
    })
}

/// Convenience wrapper: [`evaluate_into`] then [`radical_via`].
pub fn radical_over(
    free: &FreeAlgebra,
    system: &EquationSystem,
    other: &FiniteAlgebra,
    caps: &Caps,
) -> Result<Congruence> {
    let ev = evaluate_into(free, other, caps)?;
    Ok(radical_via(&ev, system))
}

fn is_separable(
    free_alg: &FiniteAlgebra,
    base: &FiniteAlgebra,
    theta: &Congruence,
    caps: &Caps,
) -> Result<bool> {
    let (quotient, _) = free_alg.quotient(theta)?;
    if quotient.size() == 1 {
        return Ok(true);
    }
    let homs = quotient.enumerate_homomorphisms(base, caps)?;
    for a in 0..quotient.size() {
        for b in a + 1..quotient.size() {
            if !homs.iter().any(|h| h.map[a] != h.map[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
