//! The relative free algebra on `n` generators over a finite base algebra,
//! represented extensionally as the algebra of n-ary term functions.
//!
//! Each element is the full value vector of a term function: its value at
//! every assignment of the generators, assignments ordered big-endian. Two
//! terms denote the same element exactly when the base algebra satisfies
//! the identity between them, so equations and radicals become finite
//! objects here.

use crate::algebra::{eval_term, tuple_decode, FiniteAlgebra, Homomorphism};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::term::{format_term, Term};
use serde::Serialize;
use std::collections::HashMap;

/// The free algebra of the variety generated by `base`, on `n` generators.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    base: FiniteAlgebra,
    n: usize,
    vectors: Vec<Vec<usize>>,
    witnesses: Vec<Term>,
    generators: Vec<usize>,
    alg: FiniteAlgebra,
    index: HashMap<Vec<usize>, usize>,
}

impl FreeAlgebra {
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    /// Number of generators.
    pub fn generator_count(&self) -> usize {
        self.n
    }

    /// Number of elements (distinct term functions).
    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    /// The free algebra packaged as a plain finite algebra over element
    /// indices.
    pub fn as_algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    /// Value vector of an element: entry `i` is the value at the `i`-th
    /// assignment (big-endian order over the base carrier).
    pub fn vector(&self, element: usize) -> &[usize] {
        &self.vectors[element]
    }

    /// Indices of the `n` projection elements.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Total number of assignments `base^n`.
    pub fn assignment_count(&self) -> usize {
        self.base.size().pow(self.n as u32)
    }

    /// Decode an assignment index into the generator value tuple.
    pub fn assignment(&self, index: usize) -> Vec<usize> {
        tuple_decode(index, self.base.size(), self.n)
    }

    /// The homomorphism into the base algebra induced by an assignment:
    /// every term function is evaluated at that argument tuple.
    pub fn assignment_hom(&self, assignment_index: usize) -> Homomorphism {
        Homomorphism {
            map: self
                .vectors
                .iter()
                .map(|v| v[assignment_index])
                .collect(),
        }
    }

    /// Minimal-depth witness term of an element (ties broken by canonical
    /// string).
    pub fn witness_term(&self, element: usize) -> Result<&Term> {
        self.witnesses.get(element).ok_or(Error::IndexOutOfRange {
            index: element,
            max: self.size(),
        })
    }

    /// Witness rendered as its canonical string.
    pub fn witness(&self, element: usize) -> String {
        format_term(&self.witnesses[element])
    }

    /// Map a term to the element it denotes, by evaluating it at every
    /// assignment. Two terms map to the same index exactly when the base
    /// satisfies the identity between them.
    pub fn term_to_element(&self, t: &Term) -> Result<usize> {
        let max_var = t.max_var();
        if max_var > self.n {
            return Err(Error::VariableOutOfRange {
                index: max_var,
                max: self.n,
            });
        }
        let mut vector = Vec::with_capacity(self.assignment_count());
        for idx in 0..self.assignment_count() {
            let assignment = self.assignment(idx);
            vector.push(eval_term(t, &self.base, &assignment)?);
        }
        Ok(*self
            .index
            .get(&vector)
            .expect("term functions are closed under the operations"))
    }

    /// JSON-friendly dump used by the CLI.
    pub fn dump(&self) -> FreeAlgebraDump {
        FreeAlgebraDump {
            algebra: self.base.name.clone(),
            vars: self.n,
            size: self.size(),
            generators: self.generators.clone(),
            elements: (0..self.size())
                .map(|e| FreeElementDump {
                    index: e,
                    witness: self.witness(e),
                    vector: self.vectors[e].clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeAlgebraDump {
    pub algebra: String,
    pub vars: usize,
    pub size: usize,
    pub generators: Vec<usize>,
    pub elements: Vec<FreeElementDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeElementDump {
    pub index: usize,
    pub witness: String,
    pub vector: Vec<usize>,
}

/// Construct the free algebra on `n >= 1` generators by closing the
/// projection vectors (and the constants) under all operations pointwise,
/// breadth-first.
///
/// Element order is deterministic: the projections in variable order, then
/// the constants sorted by witness string, then round by round with each
/// round's new elements sorted by witness string. Witnesses are
/// minimal-depth terms, ties broken by canonical string among the
/// applications considered in the discovery round.
pub fn build_free(base: &FiniteAlgebra, n: usize, caps: &Caps) -> Result<FreeAlgebra> {
    if n == 0 {
        return Err(Error::OutOfRange {
            what: "generator count",
            value: 0,
            max: usize::MAX,
        });
    }
    let assignments = match base.size().checked_pow(n as u32) {
        Some(a) if a <= caps.carrier => a,
        other => {
            return Err(Error::LimitExceeded {
                what: "free algebra assignment space",
                needed: other.unwrap_or(usize::MAX),
                cap: caps.carrier,
            })
        }
    };

    let mut vectors: Vec<Vec<usize>> = Vec::new();
    let mut witnesses: Vec<Term> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut generators = Vec::with_capacity(n);

    let push = |vector: Vec<usize>,
                    witness: Term,
                    vectors: &mut Vec<Vec<usize>>,
                    witnesses: &mut Vec<Term>,
                    index: &mut HashMap<Vec<usize>, usize>|
     -> usize {
        match index.get(&vector) {
            Some(&e) => e,
            None => {
                let e = vectors.len();
                index.insert(vector.clone(), e);
                vectors.push(vector);
                witnesses.push(witness);
                e
            }
        }
    };

    // Round 0: projections in variable order, then constants.
    for var in 1..=n {
        let vector: Vec<usize> = (0..assignments)
            .map(|idx| tuple_decode(idx, base.size(), n)[var - 1])
            .collect();
        let e = push(
            vector,
            Term::Var(var),
            &mut vectors,
            &mut witnesses,
            &mut index,
        );
        generators.push(e);
    }
    let mut constants: Vec<(Vec<usize>, Term)> = Vec::new();
    for (sym_idx, sym) in base.signature().symbols().iter().enumerate() {
        if sym.arity == 0 {
            let value = base.op(sym_idx, &[]);
            constants.push((
                vec![value; assignments],
                Term::App(sym.name.clone(), Vec::new()),
            ));
        }
    }
    constants.sort_by_key(|(_, t)| format_term(t));
    for (vector, witness) in constants {
        push(vector, witness, &mut vectors, &mut witnesses, &mut index);
    }

    // BFS rounds: apply every operation to tuples over already-known
    // elements, requiring at least one argument from the previous round.
    let mut prev_start = 0usize;
    loop {
        let known = vectors.len();
        if known > caps.free_elements {
            return Err(Error::LimitExceeded {
                what: "free algebra elements",
                needed: known,
                cap: caps.free_elements,
            });
        }
        // Candidate witnesses for vectors not seen before this round.
        let mut discovered: HashMap<Vec<usize>, Term> = HashMap::new();
        for (sym_idx, sym) in base.signature().symbols().iter().enumerate() {
            if sym.arity == 0 {
                continue;
            }
            let mut args = vec![0usize; sym.arity];
            loop {
                if args.iter().any(|&a| a >= prev_start) {
                    let mut vector = Vec::with_capacity(assignments);
                    for idx in 0..assignments {
                        let point: Vec<usize> =
                            args.iter().map(|&a| vectors[a][idx]).collect();
                        vector.push(base.op(sym_idx, &point));
                    }
                    if !index.contains_key(&vector) {
                        let witness = Term::App(
                            sym.name.clone(),
                            args.iter().map(|&a| witnesses[a].clone()).collect(),
                        );
                        match discovered.get(&vector) {
                            Some(best) if format_term(best) <= format_term(&witness) => {}
                            _ => {
                                discovered.insert(vector, witness);
                            }
                        }
                    }
                }
                let mut k = sym.arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    args[k] += 1;
                    if args[k] < known {
                        break;
                    }
                    args[k] = 0;
                }
                if args.iter().all(|&a| a == 0) {
                    break;
                }
            }
        }
        if discovered.is_empty() {
            break;
        }
        let mut fresh: Vec<(Vec<usize>, Term)> = discovered.into_iter().collect();
        fresh.sort_by_key(|(_, t)| format_term(t));
        if vectors.len() + fresh.len() > caps.free_elements {
            return Err(Error::LimitExceeded {
                what: "free algebra elements",
                needed: vectors.len() + fresh.len(),
                cap: caps.free_elements,
            });
        }
        for (vector, witness) in fresh {
            push(vector, witness, &mut vectors, &mut witnesses, &mut index);
        }
        prev_start = known;
    }

    // Tabulate the operations over element indices.
    let size = vectors.len();
    let mut tables = Vec::with_capacity(base.signature().len());
    for (sym_idx, sym) in base.signature().symbols().iter().enumerate() {
        let entries = size.pow(sym.arity as u32);
        let mut table = Vec::with_capacity(entries);
        for idx in 0..entries {
            let args = tuple_decode(idx, size, sym.arity);
            let mut vector = Vec::with_capacity(assignments);
            for point in 0..assignments {
                let tuple: Vec<usize> = args.iter().map(|&a| vectors[a][point]).collect();
                vector.push(base.op(sym_idx, &tuple));
            }
            table.push(
                *index
                    .get(&vector)
                    .expect("closure is complete, so every image is an element"),
            );
        }
        tables.push(table);
    }
    let alg = FiniteAlgebra::new(
        format!("F({},{})", base.name, n),
        base.signature().clone(),
        size,
        tables,
    )?;

    Ok(FreeAlgebra {
        base: base.clone(),
        n,
        vectors,
        witnesses,
        generators,
        alg,
        index,
    })
}
