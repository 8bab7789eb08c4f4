//! The bundled corpus of small algebras used by the verification suites
//! and shipped as JSON data files by the CLI.
//!
//! Tables are written flat in big-endian mixed radix (row-major for binary
//! operations).

use crate::algebra::FiniteAlgebra;
use crate::term::Signature;

fn semilattice_sig() -> Signature {
    Signature::new(vec![("meet", 2)]).expect("valid signature")
}

fn group_sig() -> Signature {
    Signature::new(vec![("+", 2), ("-", 1), ("e", 0)]).expect("valid signature")
}

/// One-element algebra in the semilattice signature.
pub fn trivial() -> FiniteAlgebra {
    FiniteAlgebra::new("trivial", semilattice_sig(), 1, vec![vec![0]]).expect("valid algebra")
}

/// Two-element meet-semilattice: `meet(a, b) = min(a, b)`.
pub fn semilattice2() -> FiniteAlgebra {
    FiniteAlgebra::new("s2", semilattice_sig(), 2, vec![vec![0, 0, 0, 1]])
        .expect("valid algebra")
}

/// Three-element chain as a meet-semilattice.
pub fn chain3() -> FiniteAlgebra {
    FiniteAlgebra::new(
        "chain3",
        semilattice_sig(),
        3,
        vec![vec![0, 0, 0, 0, 1, 1, 0, 1, 2]],
    )
    .expect("valid algebra")
}

/// The two-element group: addition mod 2 with inverse and identity.
pub fn z2_group() -> FiniteAlgebra {
    FiniteAlgebra::new(
        "z2group",
        group_sig(),
        2,
        vec![vec![0, 1, 1, 0], vec![0, 1], vec![0]],
    )
    .expect("valid algebra")
}

/// The two-element group with an extra constant naming the non-identity
/// element.
pub fn pointed_z2() -> FiniteAlgebra {
    let sig = Signature::new(vec![("+", 2), ("-", 1), ("e", 0), ("one", 0)])
        .expect("valid signature");
    FiniteAlgebra::new(
        "pointedz2",
        sig,
        2,
        vec![vec![0, 1, 1, 0], vec![0, 1], vec![0], vec![1]],
    )
    .expect("valid algebra")
}

/// The three-element group: addition mod 3.
pub fn z3_group() -> FiniteAlgebra {
    FiniteAlgebra::new(
        "z3group",
        group_sig(),
        3,
        vec![
            vec![0, 1, 2, 1, 2, 0, 2, 0, 1],
            vec![0, 2, 1],
            vec![0],
        ],
    )
    .expect("valid algebra")
}

/// A fixed three-element groupoid: `f(a, b) = (2a + 2b) mod 3`, a latin
/// square that is neither a semilattice nor a group reduct.
pub fn groupoid3() -> FiniteAlgebra {
    let sig = Signature::new(vec![("f", 2)]).expect("valid signature");
    FiniteAlgebra::new(
        "groupoid3",
        sig,
        3,
        vec![vec![0, 2, 1, 2, 1, 0, 1, 0, 2]],
    )
    .expect("valid algebra")
}

/// Every bundled algebra, in a fixed order.
pub fn all() -> Vec<FiniteAlgebra> {
    vec![
        trivial(),
        semilattice2(),
        chain3(),
        z2_group(),
        pointed_z2(),
        z3_group(),
        groupoid3(),
    ]
}

/// Look a bundled algebra up by name.
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    all().into_iter().find(|a| a.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_algebra_validates() {
        for alg in all() {
            assert!(alg.validate().is_ok(), "{} failed validation", alg.name);
        }
    }

    #[test]
    fn lookup_by_name() {
        assert!(by_name("z2group").is_some());
        assert!(by_name("zillion").is_none());
    }

    #[test]
    fn json_round_trip_for_corpus() {
        for alg in all() {
            let back = FiniteAlgebra::from_json(&alg.to_json()).unwrap();
            assert_eq!(back, alg);
        }
    }
}
