//! Finite algebras as operation tables, with products, powers, quotients,
//! subuniverse generation, homomorphism enumeration and isomorphism search.
//!
//! Carriers are always `{0..m-1}`. Tuples over a carrier are encoded as
//! integers in big-endian mixed radix: the first component is the most
//! significant digit. All modules share this convention, so element
//! identities are reproducible across runs.

use crate::caps::Caps;
use crate::congruence::{self, Congruence};
use crate::error::{Error, Result};
use crate::term::{OpSym, Signature, Term};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

/// Big-endian mixed-radix encoding of a tuple over `{0..m-1}`.
pub fn tuple_encode(tuple: &[usize], m: usize) -> usize {
    tuple.iter().fold(0, |acc, &a| {
        debug_assert!(a < m);
        acc * m + a
    })
}

/// Inverse of [`tuple_encode`] for tuples of length `k`.
pub fn tuple_decode(index: usize, m: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = rest % m;
        rest /= m;
    }
    out
}

/// A finite algebra: a carrier `{0..size-1}` plus one total operation table
/// per symbol of its signature.
///
/// Tables are stored flat in big-endian mixed radix; `tables[i]` has
/// `size^arity(i)` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    pub name: String,
    sig: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Validating constructor. `tables` is parallel to the signature's
    /// symbol list.
    pub fn new<S: Into<String>>(
        name: S,
        sig: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let alg = FiniteAlgebra {
            name: name.into(),
            sig,
            size,
            tables,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Check all structural invariants: nonempty carrier, one total table
    /// per symbol, every entry inside the carrier.
    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::EmptyCarrier);
        }
        if self.tables.len() != self.sig.len() {
            return Err(Error::MissingTable(format!(
                "{} tables for {} symbols",
                self.tables.len(),
                self.sig.len()
            )));
        }
        for (sym, table) in self.sig.symbols().iter().zip(&self.tables) {
            let expected = self.size.pow(sym.arity as u32);
            if table.len() != expected {
                return Err(Error::MissingTable(format!(
                    "table for `{}` has {} entries, expected {}",
                    sym.name,
                    table.len(),
                    expected
                )));
            }
            for &entry in table {
                if entry >= self.size {
                    return Err(Error::EntryOutOfRange {
                        symbol: sym.name.clone(),
                        entry,
                        size: self.size,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Value of the `sym`-th operation at `args`.
    pub fn op(&self, sym: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.sig.symbols()[sym].arity);
        self.tables[sym][tuple_encode(args, self.size)]
    }

    /// Raw flat table of the `sym`-th operation.
    pub fn table(&self, sym: usize) -> &[usize] {
        &self.tables[sym]
    }

    /// One-element algebra over `sig`; every operation returns 0.
    pub fn trivial_like<S: Into<String>>(name: S, sig: &Signature) -> FiniteAlgebra {
        let tables = sig.symbols().iter().map(|_| vec![0]).collect();
        FiniteAlgebra {
            name: name.into(),
            sig: sig.clone(),
            size: 1,
            tables,
        }
    }

    /// Direct power `A^k` with big-endian tuple encoding; `decode` of a
    /// power element is [`tuple_decode`].
    pub fn direct_power(&self, k: usize, caps: &Caps) -> Result<FiniteAlgebra> {
        let size = match self.size.checked_pow(k as u32) {
            Some(s) if s <= caps.carrier => s,
            bigger => {
                return Err(Error::LimitExceeded {
                    what: "direct power carrier",
                    needed: bigger.unwrap_or(usize::MAX),
                    cap: caps.carrier,
                })
            }
        };
        let mut tables = Vec::with_capacity(self.sig.len());
        for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
            let entries = size.pow(sym.arity as u32);
            let mut table = Vec::with_capacity(entries);
            let mut args: Vec<Vec<usize>> = Vec::new();
            for idx in 0..entries {
                let tuple = tuple_decode(idx, size, sym.arity);
                args.clear();
                args.extend(tuple.iter().map(|&e| tuple_decode(e, self.size, k)));
                let mut result = Vec::with_capacity(k);
                for coord in 0..k {
                    let comp: Vec<usize> = args.iter().map(|a| a[coord]).collect();
                    result.push(self.op(sym_idx, &comp));
                }
                table.push(tuple_encode(&result, self.size));
            }
            tables.push(table);
        }
        Ok(FiniteAlgebra {
            name: format!("{}^{}", self.name, k),
            sig: self.sig.clone(),
            size,
            tables,
        })
    }

    /// Componentwise product `A x B` with big-endian pair encoding
    /// (the `A` component is the most significant digit).
    pub fn direct_product(&self, other: &FiniteAlgebra, caps: &Caps) -> Result<FiniteAlgebra> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig, other.sig
            )));
        }
        let size = self
            .size
            .checked_mul(other.size)
            .filter(|&s| s <= caps.carrier)
            .ok_or(Error::LimitExceeded {
                what: "direct product carrier",
                needed: self.size.saturating_mul(other.size),
                cap: caps.carrier,
            })?;
        let encode = |a: usize, b: usize| a * other.size + b;
        let mut tables = Vec::with_capacity(self.sig.len());
        for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
            let entries = size.pow(sym.arity as u32);
            let mut table = Vec::with_capacity(entries);
            for idx in 0..entries {
                let tuple = tuple_decode(idx, size, sym.arity);
                let lhs: Vec<usize> = tuple.iter().map(|&e| e / other.size).collect();
                let rhs: Vec<usize> = tuple.iter().map(|&e| e % other.size).collect();
                table.push(encode(self.op(sym_idx, &lhs), other.op(sym_idx, &rhs)));
            }
            tables.push(table);
        }
        Ok(FiniteAlgebra {
            name: format!("{}x{}", self.name, other.name),
            sig: self.sig.clone(),
            size,
            tables,
        })
    }

    /// Least subuniverse containing `seed` and all constants, by worklist
    /// closure. Fails with [`Error::EmptySubuniverse`] when the algebra has
    /// no constants and the seed is empty.
    pub fn subuniverse_generated(&self, seed: &[usize]) -> Result<Vec<usize>> {
        for &e in seed {
            if e >= self.size {
                return Err(Error::OutOfRange {
                    what: "seed element",
                    value: e,
                    max: self.size,
                });
            }
        }
        let mut member = vec![false; self.size];
        for &e in seed {
            member[e] = true;
        }
        for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
            if sym.arity == 0 {
                member[self.op(sym_idx, &[])] = true;
            }
        }
        if !member.iter().any(|&m| m) {
            return Err(Error::EmptySubuniverse);
        }
        loop {
            let mut grew = false;
            for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
                if sym.arity == 0 {
                    continue;
                }
                let current: Vec<usize> =
                    (0..self.size).filter(|&e| member[e]).collect();
                let mut args = vec![0usize; sym.arity];
                loop {
                    let tuple: Vec<usize> = args.iter().map(|&i| current[i]).collect();
                    let out = self.op(sym_idx, &tuple);
                    if !member[out] {
                        member[out] = true;
                        grew = true;
                    }
                    let mut k = sym.arity;
                    loop {
                        if k == 0 {
                            break;
                        }
                        k -= 1;
                        args[k] += 1;
                        if args[k] < current.len() {
                            break;
                        }
                        args[k] = 0;
                    }
                    if args.iter().all(|&i| i == 0) {
                        break;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        Ok((0..self.size).filter(|&e| member[e]).collect())
    }

    /// All homomorphisms into `target`, ordered lexicographically by map
    /// array. Backtracking with incremental constraint checks; the node
    /// budget is `caps.hom_nodes`.
    pub fn enumerate_homomorphisms(
        &self,
        target: &FiniteAlgebra,
        caps: &Caps,
    ) -> Result<Vec<Homomorphism>> {
        if self.sig != target.sig {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig, target.sig
            )));
        }
        let mut search = HomSearch::new(self, target, caps, false);
        search.run()?;
        Ok(search.found)
    }

    /// First bijective homomorphism onto `target` in lexicographic map
    /// order, or `None` when the algebras are not isomorphic.
    pub fn find_isomorphism(
        &self,
        target: &FiniteAlgebra,
        caps: &Caps,
    ) -> Result<Option<Homomorphism>> {
        if self.sig != target.sig {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.sig, target.sig
            )));
        }
        if self.size != target.size {
            return Ok(None);
        }
        // Cheap invariant screen: an isomorphism preserves, per symbol, the
        // number of times an element occurs as an operation output.
        let fp_self = fingerprints(self);
        let fp_target = fingerprints(target);
        let mut sorted_self = fp_self.clone();
        let mut sorted_target = fp_target.clone();
        sorted_self.sort();
        sorted_target.sort();
        if sorted_self != sorted_target {
            return Ok(None);
        }
        let mut search = HomSearch::new(self, target, caps, true);
        search.fingerprints = Some((fp_self, fp_target));
        search.run()?;
        Ok(search.found.into_iter().next())
    }

    /// Quotient by a congruence, together with the canonical projection.
    /// Classes are indexed by ascending minimal representative.
    pub fn quotient(&self, theta: &Congruence) -> Result<(FiniteAlgebra, Homomorphism)> {
        if theta.rep().len() != self.size {
            return Err(Error::NotACongruence(format!(
                "partition over {} elements given to an algebra of size {}",
                theta.rep().len(),
                self.size
            )));
        }
        if let congruence::CongruenceCheck::No(witness) =
            congruence::is_congruence(self, &theta.blocks())?
        {
            return Err(Error::NotACongruence(witness.to_string()));
        }
        let reps: Vec<usize> = {
            let mut reps: Vec<usize> = (0..self.size)
                .filter(|&e| theta.rep()[e] == e)
                .collect();
            reps.sort_unstable();
            reps
        };
        let class_of: BTreeMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let size = reps.len();
        let mut tables = Vec::with_capacity(self.sig.len());
        for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
            let entries = size.pow(sym.arity as u32);
            let mut table = Vec::with_capacity(entries);
            for idx in 0..entries {
                let classes = tuple_decode(idx, size, sym.arity);
                let args: Vec<usize> = classes.iter().map(|&c| reps[c]).collect();
                let out = self.op(sym_idx, &args);
                table.push(class_of[&theta.rep()[out]]);
            }
            tables.push(table);
        }
        let quotient = FiniteAlgebra {
            name: format!("{}/~", self.name),
            sig: self.sig.clone(),
            size,
            tables,
        };
        let projection = Homomorphism {
            map: (0..self.size).map(|e| class_of[&theta.rep()[e]]).collect(),
        };
        Ok((quotient, projection))
    }

    /// Parse the JSON algebra file format and validate the result.
    pub fn from_json(text: &str) -> Result<FiniteAlgebra> {
        let file: AlgebraFile = serde_json::from_str(text)
            .map_err(|e| Error::Syntax(format!("algebra file: {e}")))?;
        let sig = Signature::new(
            file.signature
                .iter()
                .map(|s| (s.name.clone(), s.arity))
                .collect(),
        )?;
        let mut tables = Vec::with_capacity(sig.len());
        for sym in sig.symbols() {
            let value = file
                .tables
                .get(&sym.name)
                .ok_or_else(|| Error::MissingTable(sym.name.clone()))?;
            let mut flat = Vec::new();
            flatten_table(value, sym, file.size, sym.arity, &mut flat)?;
            tables.push(flat);
        }
        for key in file.tables.keys() {
            if sig.index_of(key).is_none() {
                return Err(Error::UnknownSymbol(key.clone()));
            }
        }
        FiniteAlgebra::new(file.name, sig, file.size, tables)
    }

    /// Render the JSON algebra file format (nested arrays, nullary tables
    /// as a bare integer).
    pub fn to_json(&self) -> String {
        let mut tables = serde_json::Map::new();
        for (sym_idx, sym) in self.sig.symbols().iter().enumerate() {
            tables.insert(
                sym.name.clone(),
                nest_table(&self.tables[sym_idx], self.size, sym.arity),
            );
        }
        let file = AlgebraFile {
            name: self.name.clone(),
            signature: self.sig.symbols().to_vec(),
            size: self.size,
            tables,
        };
        serde_json::to_string_pretty(&file).expect("algebra serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    signature: Vec<OpSym>,
    size: usize,
    tables: serde_json::Map<String, Value>,
}

fn flatten_table(
    value: &Value,
    sym: &OpSym,
    size: usize,
    depth: usize,
    out: &mut Vec<usize>,
) -> Result<()> {
    if depth == 0 {
        match value.as_u64() {
            Some(v) => {
                out.push(v as usize);
                Ok(())
            }
            None => Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                got: sym.arity - depth,
            }),
        }
    } else {
        match value.as_array() {
            Some(rows) if rows.len() == size => {
                for row in rows {
                    flatten_table(row, sym, size, depth - 1, out)?;
                }
                Ok(())
            }
            Some(rows) => Err(Error::MissingTable(format!(
                "table for `{}` has a level of length {}, expected {}",
                sym.name,
                rows.len(),
                size
            ))),
            None => Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                got: sym.arity - depth,
            }),
        }
    }
}

fn nest_table(flat: &[usize], size: usize, arity: usize) -> Value {
    if arity == 0 {
        Value::from(flat[0])
    } else {
        let chunk = flat.len() / size;
        Value::Array(
            (0..size)
                .map(|i| nest_table(&flat[i * chunk..(i + 1) * chunk], size, arity - 1))
                .collect(),
        )
    }
}

/// Per-element invariant: for each symbol, how often the element occurs as
/// an output.
fn fingerprints(alg: &FiniteAlgebra) -> Vec<Vec<usize>> {
    let mut fps = vec![vec![0usize; alg.sig.len()]; alg.size];
    for sym_idx in 0..alg.sig.len() {
        for &out in alg.table(sym_idx) {
            fps[out][sym_idx] += 1;
        }
    }
    fps
}

/// A map between carriers that commutes with every operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    /// Exhaustive commuting check against explicit source and target.
    pub fn verify(&self, source: &FiniteAlgebra, target: &FiniteAlgebra) -> bool {
        if source.sig != target.sig || self.map.len() != source.size {
            return false;
        }
        if self.map.iter().any(|&v| v >= target.size) {
            return false;
        }
        for (sym_idx, sym) in source.sig.symbols().iter().enumerate() {
            let entries = source.size.pow(sym.arity as u32);
            for idx in 0..entries {
                let args = tuple_decode(idx, source.size, sym.arity);
                let image: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
                if self.map[source.op(sym_idx, &args)] != target.op(sym_idx, &image) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_bijective(&self, target_size: usize) -> bool {
        let mut seen = vec![false; target_size];
        for &v in &self.map {
            if v >= target_size || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        self.map.len() == target_size
    }
}

struct HomSearch<'a> {
    source: &'a FiniteAlgebra,
    target: &'a FiniteAlgebra,
    caps: &'a Caps,
    bijective: bool,
    first_only: bool,
    fingerprints: Option<(Vec<Vec<usize>>, Vec<Vec<usize>>)>,
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: usize,
    found: Vec<Homomorphism>,
}

impl<'a> HomSearch<'a> {
    fn new(
        source: &'a FiniteAlgebra,
        target: &'a FiniteAlgebra,
        caps: &'a Caps,
        bijective: bool,
    ) -> Self {
        HomSearch {
            source,
            target,
            caps,
            bijective,
            first_only: bijective,
            fingerprints: None,
            map: vec![usize::MAX; source.size()],
            used: vec![false; target.size()],
            nodes: 0,
            found: Vec::new(),
        }
    }

    fn run(&mut self) -> Result<()> {
        self.assign(0)?;
        Ok(())
    }

    fn assign(&mut self, element: usize) -> Result<bool> {
        if element == self.source.size() {
            self.found.push(Homomorphism {
                map: self.map.clone(),
            });
            return Ok(self.first_only);
        }
        for image in 0..self.target.size() {
            if self.bijective && self.used[image] {
                continue;
            }
            if let Some((fp_s, fp_t)) = &self.fingerprints {
                if fp_s[element] != fp_t[image] {
                    continue;
                }
            }
            self.nodes += 1;
            if self.nodes > self.caps.hom_nodes {
                return Err(Error::LimitExceeded {
                    what: "homomorphism search nodes",
                    needed: self.nodes,
                    cap: self.caps.hom_nodes,
                });
            }
            self.map[element] = image;
            self.used[image] = true;
            if self.consistent(element) && self.assign(element + 1)? {
                return Ok(true);
            }
            self.map[element] = usize::MAX;
            self.used[image] = false;
        }
        Ok(false)
    }

    /// Check every constraint that became fully determined by assigning
    /// `element`: tuples over assigned elements that involve it, or whose
    /// output is it.
    fn consistent(&self, element: usize) -> bool {
        let bound = element + 1;
        for (sym_idx, sym) in self.source.signature().symbols().iter().enumerate() {
            let entries = bound.pow(sym.arity as u32);
            for idx in 0..entries {
                let args = tuple_decode(idx, bound, sym.arity);
                let out = self.source.op(sym_idx, &args);
                if out >= bound {
                    continue;
                }
                if out != element && !args.contains(&element) {
                    continue;
                }
                let image: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
                if self.map[out] != self.target.op(sym_idx, &image) {
                    return false;
                }
            }
        }
        true
    }
}

/// Evaluate a term in an algebra at an assignment (`assignment[i]` is the
/// value of `x(i+1)`).
pub fn eval_term(t: &Term, alg: &FiniteAlgebra, assignment: &[usize]) -> Result<usize> {
    match t {
        Term::Var(i) => {
            if *i == 0 || *i > assignment.len() {
                return Err(Error::VariableOutOfRange {
                    index: *i,
                    max: assignment.len(),
                });
            }
            Ok(assignment[i - 1])
        }
        Term::App(name, args) => {
            let sym_idx = alg.signature().index_of(name).ok_or_else(|| {
                Error::SignatureMismatch(format!("symbol `{name}` not in {}", alg.signature()))
            })?;
            let arity = alg.signature().symbols()[sym_idx].arity;
            if args.len() != arity {
                return Err(Error::SignatureMismatch(format!(
                    "`{name}` applied to {} arguments, arity is {arity}",
                    args.len()
                )));
            }
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval_term(arg, alg, assignment)?);
            }
            Ok(alg.op(sym_idx, &values))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn validate_accepts_z2_and_rejects_bad_tables() {
        let z2 = corpus::z2_group();
        assert!(z2.validate().is_ok());

        let sig = Signature::new(vec![("meet", 2)]).unwrap();
        let err = FiniteAlgebra::new("bad", sig.clone(), 2, vec![vec![0, 1, 1, 2]]).unwrap_err();
        assert_eq!(
            err,
            Error::EntryOutOfRange {
                symbol: "meet".into(),
                entry: 2,
                size: 2
            }
        );
        let err = FiniteAlgebra::new("bad", sig, 2, vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::MissingTable(_)));
        let err = FiniteAlgebra::new("bad", Signature::default(), 0, vec![]).unwrap_err();
        assert_eq!(err, Error::EmptyCarrier);
    }

    #[test]
    fn eval_term_uses_tables() {
        let z2 = corpus::z2_group();
        let t = crate::term::parse_term("(+ x1 x2)", z2.signature(), 2).unwrap();
        // Addition table of Z2: 1 + 1 = 0.
        assert_eq!(eval_term(&t, &z2, &[1, 1]).unwrap(), 0);

        let s2 = corpus::semilattice2();
        let t = crate::term::parse_term("(meet x1 x2)", s2.signature(), 2).unwrap();
        assert_eq!(eval_term(&t, &s2, &[0, 1]).unwrap(), 0);

        let t = Term::var(1);
        assert_eq!(eval_term(&t, &s2, &[1, 0]).unwrap(), 1);
    }

    #[test]
    fn eval_term_rejects_foreign_symbols() {
        let s2 = corpus::semilattice2();
        let t = Term::app("+", vec![Term::var(1), Term::var(1)]);
        assert!(matches!(
            eval_term(&t, &s2, &[0]),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn direct_power_encodes_componentwise() {
        let caps = Caps::default();
        let z2 = corpus::z2_group();
        let cube = z2.direct_power(3, &caps).unwrap();
        assert_eq!(cube.size(), 8);

        let square = z2.direct_power(2, &caps).unwrap();
        // (0,1) + (1,1) = (1,0) componentwise.
        let a = tuple_encode(&[0, 1], 2);
        let b = tuple_encode(&[1, 1], 2);
        let plus = square.signature().index_of("+").unwrap();
        assert_eq!(square.op(plus, &[a, b]), tuple_encode(&[1, 0], 2));

        let one = z2.direct_power(1, &caps).unwrap();
        let iso = one.find_isomorphism(&z2, &caps).unwrap().unwrap();
        assert_eq!(iso.map, vec![0, 1]);
    }

    #[test]
    fn direct_product_sizes_and_unit() {
        let caps = Caps::default();
        let s2 = corpus::semilattice2();
        let c3 = corpus::chain3();
        let prod = s2.direct_product(&c3, &caps).unwrap();
        assert_eq!(prod.size(), 6);

        let trivial = FiniteAlgebra::trivial_like("t", s2.signature());
        let unit = s2.direct_product(&trivial, &caps).unwrap();
        let iso = unit.find_isomorphism(&s2, &caps).unwrap();
        assert!(iso.is_some());

        let z2 = corpus::z2_group();
        assert!(matches!(
            s2.direct_product(&z2, &caps),
            Err(Error::SignatureMismatch(_))
        ));
    }

    #[test]
    fn direct_product_associative_up_to_isomorphism() {
        let caps = Caps::default();
        let s2 = corpus::semilattice2();
        let c3 = corpus::chain3();
        let left = s2.direct_product(&s2, &caps).unwrap().direct_product(&c3, &caps).unwrap();
        let right = s2.direct_product(&s2.direct_product(&c3, &caps).unwrap(), &caps).unwrap();
        let iso = left.find_isomorphism(&right, &caps).unwrap().unwrap();
        assert!(iso.verify(&left, &right));
        assert!(iso.is_bijective(right.size()));
    }

    #[test]
    fn subuniverse_closure_examples() {
        let z2 = corpus::z2_group();
        // The constant e generates {0} from an empty seed.
        assert_eq!(z2.subuniverse_generated(&[]).unwrap(), vec![0]);

        let s2 = corpus::semilattice2();
        assert_eq!(s2.subuniverse_generated(&[0, 1]).unwrap(), vec![0, 1]);
        assert!(matches!(
            s2.subuniverse_generated(&[]),
            Err(Error::EmptySubuniverse)
        ));

        let caps = Caps::default();
        let square = z2.direct_power(2, &caps).unwrap();
        let diag = tuple_encode(&[1, 1], 2);
        assert_eq!(
            square.subuniverse_generated(&[diag]).unwrap(),
            vec![tuple_encode(&[0, 0], 2), diag]
        );
    }

    #[test]
    fn subuniverse_is_monotone_extensive_idempotent() {
        let caps = Caps::default();
        let square = corpus::z2_group().direct_power(2, &caps).unwrap();
        let small = square.subuniverse_generated(&[1]).unwrap();
        let big = square.subuniverse_generated(&[1, 2]).unwrap();
        assert!(small.iter().all(|e| big.contains(e)));
        assert!(small.contains(&1));
        assert_eq!(square.subuniverse_generated(&small).unwrap(), small);
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let caps = Caps::default();
        let s2 = corpus::semilattice2();
        let homs = s2.enumerate_homomorphisms(&s2, &caps).unwrap();
        // Oracle: all 4 maps {0,1} -> {0,1}, kept iff they commute with meet.
        let oracle: Vec<Vec<usize>> = (0..4)
            .map(|mask: usize| vec![mask >> 1 & 1, mask & 1])
            .filter(|map| {
                (0..2).all(|a: usize| {
                    (0..2).all(|b: usize| {
                        map[a.min(b)] == map[a].min(map[b])
                    })
                })
            })
            .collect();
        assert_eq!(oracle.len(), 3);
        assert_eq!(
            homs.iter().map(|h| h.map.clone()).collect::<Vec<_>>(),
            oracle
        );
        for h in &homs {
            assert!(h.verify(&s2, &s2));
        }
    }

    #[test]
    fn hom_counts_for_groups_and_trivial_target() {
        let caps = Caps::default();
        let z2 = corpus::z2_group();
        let homs = z2.enumerate_homomorphisms(&z2, &caps).unwrap();
        assert_eq!(
            homs.iter().map(|h| h.map.clone()).collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1]]
        );

        let trivial = FiniteAlgebra::trivial_like("t", z2.signature());
        let homs = z2.enumerate_homomorphisms(&trivial, &caps).unwrap();
        assert_eq!(homs.len(), 1);
    }

    #[test]
    fn quotient_by_diagonal_and_full() {
        let caps = Caps::default();
        let z2 = corpus::z2_group();
        let diag = Congruence::diagonal(z2.size());
        let (q, proj) = z2.quotient(&diag).unwrap();
        assert!(q.find_isomorphism(&z2, &caps).unwrap().is_some());
        assert!(proj.verify(&z2, &q));

        let full = Congruence::full(z2.size());
        let (q, _) = z2.quotient(&full).unwrap();
        assert_eq!(q.size(), 1);
    }

    #[test]
    fn quotient_of_square_by_diagonal_subgroup() {
        let caps = Caps::default();
        let z2 = corpus::z2_group();
        let square = z2.direct_power(2, &caps).unwrap();
        // Blocks {(0,0),(1,1)} and {(0,1),(1,0)}.
        let theta = Congruence::from_blocks(4, &[vec![0, 3], vec![1, 2]]).unwrap();
        let (q, proj) = square.quotient(&theta).unwrap();
        assert_eq!(q.size(), 2);
        assert!(q.find_isomorphism(&z2, &caps).unwrap().is_some());
        assert!(proj.verify(&square, &q));
    }

    #[test]
    fn quotient_rejects_non_congruences() {
        let caps = Caps::default();
        let square = corpus::z2_group().direct_power(2, &caps).unwrap();
        let bad = Congruence::from_blocks(4, &[vec![0, 2], vec![1], vec![3]]).unwrap();
        assert!(matches!(
            square.quotient(&bad),
            Err(Error::NotACongruence(_))
        ));
    }

    #[test]
    fn isomorphism_basics() {
        let caps = Caps::default();
        let z2 = corpus::z2_group();
        let identity = z2.find_isomorphism(&z2, &caps).unwrap().unwrap();
        assert_eq!(identity.map, vec![0, 1]);

        let s2 = corpus::semilattice2();
        let c3 = corpus::chain3();
        assert!(s2.find_isomorphism(&c3, &caps).unwrap().is_none());
    }

    #[test]
    fn power_satisfies_small_identities_of_base() {
        // Identities over terms of depth <= 2 in at most 2 variables that
        // hold in A also hold in A^2 (checked extensionally).
        let caps = Caps::default();
        for alg in [corpus::semilattice2(), corpus::z2_group()] {
            let square = alg.direct_power(2, &caps).unwrap();
            let terms =
                crate::term::enumerate_terms(alg.signature(), 2, 2, &caps).unwrap();
            let value_vector = |t: &Term, a: &FiniteAlgebra| -> Vec<usize> {
                (0..a.size() * a.size())
                    .map(|idx| {
                        let assignment = tuple_decode(idx, a.size(), 2);
                        eval_term(t, a, &assignment).unwrap()
                    })
                    .collect()
            };
            let base_vecs: Vec<Vec<usize>> =
                terms.iter().map(|t| value_vector(t, &alg)).collect();
            let square_vecs: Vec<Vec<usize>> =
                terms.iter().map(|t| value_vector(t, &square)).collect();
            for i in 0..terms.len() {
                for j in i + 1..terms.len() {
                    if base_vecs[i] == base_vecs[j] {
                        assert_eq!(
                            square_vecs[i], square_vecs[j],
                            "identity {} = {} broke in the square",
                            terms[i], terms[j]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let z2 = corpus::z2_group();
        let text = z2.to_json();
        let back = FiniteAlgebra::from_json(&text).unwrap();
        assert_eq!(back, z2);

        let with_unknown = text.replace("\"name\"", "\"comment\": \"hi\", \"name\"");
        assert!(FiniteAlgebra::from_json(&with_unknown).is_err());

        // Binary symbol with a one-dimensional table.
        let bad = r#"{"name":"bad","signature":[{"op":"meet","arity":2}],"size":2,
                      "tables":{"meet":[0,1]}}"#;
        assert!(matches!(
            FiniteAlgebra::from_json(bad),
            Err(Error::ArityMismatch { .. })
        ));
    }
}
