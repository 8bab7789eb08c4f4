//! Algebraic signatures and terms: parsing, formatting, evaluation and
//! bounded enumeration.
//!
//! The concrete syntax is prefix s-expressions: `term := var | '(' symbol
//! term* ')'` with `var := 'x' [1-9][0-9]*`, ASCII only. A bare nullary
//! symbol name is accepted as sugar for its application and always printed
//! in the canonical `(name)` form.

use crate::caps::Caps;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One operation symbol of a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpSym {
    #[serde(rename = "op")]
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols with arities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<OpSym>,
}

fn is_symbol_start(c: char) -> bool {
    c.is_ascii_alphabetic() || matches!(c, '_' | '+' | '*' | '^' | '~' | '-')
}

fn is_symbol_continue(c: char) -> bool {
    is_symbol_start(c) || c.is_ascii_digit()
}

/// `x` followed only by digits; such names are reserved for variables.
fn collides_with_variable(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('x') && {
        let rest: Vec<char> = chars.collect();
        !rest.is_empty() && rest.iter().all(|c| c.is_ascii_digit())
    }
}

impl Signature {
    /// Build a signature from `(name, arity)` pairs, validating the naming
    /// rules: names are unique, nonempty, match
    /// `[a-zA-Z_+*^~-][a-zA-Z0-9_+*^~-]*` and never look like a variable.
    pub fn new<S: Into<String>>(symbols: Vec<(S, usize)>) -> Result<Self> {
        let symbols: Vec<OpSym> = symbols
            .into_iter()
            .map(|(name, arity)| OpSym {
                name: name.into(),
                arity,
            })
            .collect();
        for (i, sym) in symbols.iter().enumerate() {
            let mut chars = sym.name.chars();
            let valid = match chars.next() {
                Some(c) => is_symbol_start(c) && chars.all(is_symbol_continue),
                None => false,
            };
            if !valid {
                return Err(Error::BadSignature(format!(
                    "invalid symbol name `{}`",
                    sym.name
                )));
            }
            if collides_with_variable(&sym.name) {
                return Err(Error::BadSignature(format!(
                    "symbol name `{}` collides with the variable pattern",
                    sym.name
                )));
            }
            if symbols[..i].iter().any(|other| other.name == sym.name) {
                return Err(Error::BadSignature(format!(
                    "duplicate symbol `{}`",
                    sym.name
                )));
            }
        }
        Ok(Signature { symbols })
    }

    pub fn symbols(&self) -> &[OpSym] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Index of a symbol by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.symbols[i].arity)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .symbols
            .iter()
            .map(|s| format!("{}/{}", s.name, s.arity))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A term over variables `x1..xn` and the symbols of some signature.
///
/// Variable indices are 1-based, matching the surface syntax.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(index: usize) -> Term {
        Term::Var(index)
    }

    pub fn app<S: Into<String>>(name: S, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    /// Depth of the syntax tree. Variables and constants are leaves of
    /// depth 0; an application adds one to the deepest argument.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => match args.iter().map(Term::depth).max() {
                Some(d) => d + 1,
                None => 0,
            },
        }
    }

    /// Largest variable index used, or 0 for a variable-free term.
    pub fn max_var(&self) -> usize {
        match self {
            Term::Var(i) => *i,
            Term::App(_, args) => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    /// Ordering key used everywhere terms need a deterministic order:
    /// depth first, then the canonical string.
    pub fn order_key(&self) -> (usize, String) {
        (self.depth(), format_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_term(self))
    }
}

/// Canonical rendering: `x<k>` for variables, `(f a b)` for applications,
/// `(c)` for constants, single spaces, no extra parentheses.
pub fn format_term(t: &Term) -> String {
    match t {
        Term::Var(i) => format!("x{i}"),
        Term::App(name, args) => {
            let mut out = String::from("(");
            out.push_str(name);
            for arg in args {
                out.push(' ');
                out.push_str(&format_term(arg));
            }
            out.push(')');
            out
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    if !text.is_ascii() {
        return Err(Error::Syntax("non-ASCII input".into()));
    }
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                tokens.push(Token::Open);
            }
            ')' => {
                chars.next();
                tokens.push(Token::Close);
            }
            c if c.is_ascii_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                while let Some(&c) = chars.peek() {
                    if c == '(' || c == ')' || c.is_ascii_whitespace() {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                tokens.push(Token::Atom(atom));
            }
        }
    }
    Ok(tokens)
}

/// `x` followed by digits with no leading zero.
fn parse_variable(atom: &str) -> Option<usize> {
    let digits = atom.strip_prefix('x')?;
    let mut chars = digits.chars();
    match chars.next() {
        Some(c) if ('1'..='9').contains(&c) && chars.clone().all(|c| c.is_ascii_digit()) => {
            digits.parse().ok()
        }
        _ => None,
    }
}

/// Parse the prefix s-expression grammar against a signature and a variable
/// bound `n`. Round-trips with [`format_term`].
pub fn parse_term(text: &str, sig: &Signature, n: usize) -> Result<Term> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let term = parse_expr(&tokens, &mut pos, sig, n)?;
    if pos != tokens.len() {
        return Err(Error::Syntax(format!(
            "trailing input after term in `{}`",
            text.trim()
        )));
    }
    Ok(term)
}

fn parse_expr(tokens: &[Token], pos: &mut usize, sig: &Signature, n: usize) -> Result<Term> {
    match tokens.get(*pos) {
        None => Err(Error::Syntax("unexpected end of input".into())),
        Some(Token::Close) => Err(Error::Syntax("unexpected `)`".into())),
        Some(Token::Atom(atom)) => {
            *pos += 1;
            if let Some(index) = parse_variable(atom) {
                if index == 0 || index > n {
                    return Err(Error::VariableOutOfRange { index, max: n });
                }
                return Ok(Term::Var(index));
            }
            // Bare-token sugar for nullary symbols.
            match sig.arity_of(atom) {
                Some(0) => Ok(Term::App(atom.clone(), Vec::new())),
                Some(arity) => Err(Error::ArityMismatch {
                    symbol: atom.clone(),
                    expected: arity,
                    got: 0,
                }),
                None => Err(Error::UnknownSymbol(atom.clone())),
            }
        }
        Some(Token::Open) => {
            *pos += 1;
            let name = match tokens.get(*pos) {
                Some(Token::Atom(atom)) => atom.clone(),
                _ => return Err(Error::Syntax("expected a symbol after `(`".into())),
            };
            *pos += 1;
            let arity = sig
                .arity_of(&name)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos) {
                    None => return Err(Error::Syntax("unbalanced `(`".into())),
                    Some(Token::Close) => {
                        *pos += 1;
                        break;
                    }
                    _ => args.push(parse_expr(tokens, pos, sig, n)?),
                }
            }
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    symbol: name,
                    expected: arity,
                    got: args.len(),
                });
            }
            Ok(Term::App(name, args))
        }
    }
}

/// All well-formed terms of depth at most `max_depth` over `sig` and
/// variables `x1..xn`, ordered by depth and then by canonical string.
///
/// Errors with [`Error::LimitExceeded`] when the count would exceed
/// `caps.term_count`.
pub fn enumerate_terms(
    sig: &Signature,
    n: usize,
    max_depth: usize,
    caps: &Caps,
) -> Result<Vec<Term>> {
    // Depth 0: variables and constants.
    let mut level: Vec<Term> = Vec::new();
    for sym in sig.symbols() {
        if sym.arity == 0 {
            level.push(Term::App(sym.name.clone(), Vec::new()));
        }
    }
    for i in 1..=n {
        level.push(Term::Var(i));
    }
    level.sort_by_key(format_term);

    let mut all: Vec<Term> = level;
    let mut depths: Vec<usize> = vec![0; all.len()];
    check_cap(all.len(), caps)?;
    if all.is_empty() {
        return Ok(all);
    }

    for depth in 1..=max_depth {
        let mut next: Vec<Term> = Vec::new();
        for sym in sig.symbols() {
            if sym.arity == 0 {
                continue;
            }
            // Argument tuples over all terms of depth < `depth` with at
            // least one argument of depth exactly `depth - 1`.
            let mut args = vec![0usize; sym.arity];
            loop {
                if args.iter().map(|&i| depths[i]).max() == Some(depth - 1) {
                    let term = Term::App(
                        sym.name.clone(),
                        args.iter().map(|&i| all[i].clone()).collect(),
                    );
                    next.push(term);
                    check_cap(all.len() + next.len(), caps)?;
                }
                // Mixed-radix increment over `all`.
                let mut k = sym.arity;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    args[k] += 1;
                    if args[k] < all.len() {
                        break;
                    }
                    args[k] = 0;
                }
                if args.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
        next.sort_by_key(format_term);
        depths.extend(std::iter::repeat(depth).take(next.len()));
        all.extend(next);
    }
    Ok(all)
}

fn check_cap(count: usize, caps: &Caps) -> Result<()> {
    if count > caps.term_count {
        return Err(Error::LimitExceeded {
            what: "term enumeration",
            needed: count,
            cap: caps.term_count,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semilattice_sig() -> Signature {
        Signature::new(vec![("meet", 2)]).unwrap()
    }

    fn group_sig() -> Signature {
        Signature::new(vec![("+", 2), ("-", 1), ("e", 0)]).unwrap()
    }

    #[test]
    fn parse_simple_application() {
        let t = parse_term("(+ x1 x2)", &group_sig(), 2).unwrap();
        assert_eq!(t, Term::app("+", vec![Term::var(1), Term::var(2)]));
    }

    #[test]
    fn parse_rejects_variable_out_of_range() {
        let err = parse_term("x3", &group_sig(), 2).unwrap_err();
        assert_eq!(err, Error::VariableOutOfRange { index: 3, max: 2 });
    }

    #[test]
    fn parse_rejects_unbalanced_input() {
        assert!(matches!(
            parse_term("(+ x1", &group_sig(), 2),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_term("(+ x1 x2) x1", &group_sig(), 2),
            Err(Error::Syntax(_))
        ));
    }

    #[test]
    fn parse_rejects_unknown_and_arity_errors() {
        assert_eq!(
            parse_term("(join x1 x2)", &semilattice_sig(), 2).unwrap_err(),
            Error::UnknownSymbol("join".into())
        );
        assert_eq!(
            parse_term("(meet x1)", &semilattice_sig(), 2).unwrap_err(),
            Error::ArityMismatch {
                symbol: "meet".into(),
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn constants_parse_bare_and_parenthesized() {
        let sugar = parse_term("e", &group_sig(), 1).unwrap();
        let full = parse_term("(e)", &group_sig(), 1).unwrap();
        assert_eq!(sugar, full);
        assert_eq!(format_term(&sugar), "(e)");
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(format_term(&Term::var(1)), "x1");
        assert_eq!(
            format_term(&Term::app("meet", vec![Term::var(1), Term::var(2)])),
            "(meet x1 x2)"
        );
        let nested = Term::app(
            "+",
            vec![Term::var(1), Term::app("-", vec![Term::var(2)])],
        );
        assert_eq!(format_term(&nested), "(+ x1 (- x2))");
    }

    #[test]
    fn depth_counts_applications_and_constants_are_leaves() {
        let sig = group_sig();
        let t = parse_term("(+ x1 (+ x1 x2))", &sig, 2).unwrap();
        assert_eq!(t.depth(), 2);
        let c = parse_term("(e)", &sig, 2).unwrap();
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn signature_rejects_bad_names() {
        assert!(Signature::new(vec![("x1", 0)]).is_err());
        assert!(Signature::new(vec![("x10", 2)]).is_err());
        assert!(Signature::new(vec![("", 1)]).is_err());
        assert!(Signature::new(vec![("1up", 1)]).is_err());
        assert!(Signature::new(vec![("meet", 2), ("meet", 1)]).is_err());
        // `x` alone and `x0`-free names are fine.
        assert!(Signature::new(vec![("x", 2)]).is_ok());
        assert!(Signature::new(vec![("x0", 0)]).is_err());
    }

    #[test]
    fn enumerate_depth_zero_and_one() {
        let caps = Caps::default();
        let sig = semilattice_sig();
        let d0 = enumerate_terms(&sig, 1, 0, &caps).unwrap();
        assert_eq!(d0, vec![Term::var(1)]);
        let d1 = enumerate_terms(&sig, 1, 1, &caps).unwrap();
        assert_eq!(
            d1,
            vec![
                Term::var(1),
                Term::app("meet", vec![Term::var(1), Term::var(1)])
            ]
        );
        // n=2, depth 1: two variables plus the four meet combinations.
        let d1 = enumerate_terms(&sig, 2, 1, &caps).unwrap();
        assert_eq!(d1.len(), 6);
    }

    #[test]
    fn enumerate_is_monotone_in_depth() {
        let caps = Caps::default();
        let sig = group_sig();
        let d1 = enumerate_terms(&sig, 2, 1, &caps).unwrap();
        let d2 = enumerate_terms(&sig, 2, 2, &caps).unwrap();
        for t in &d1 {
            assert!(d2.contains(t));
        }
    }

    #[test]
    fn enumerate_respects_cap() {
        let caps = Caps {
            term_count: 10,
            ..Caps::default()
        };
        let err = enumerate_terms(&group_sig(), 2, 2, &caps).unwrap_err();
        assert!(matches!(err, Error::LimitExceeded { .. }));
    }

    #[test]
    fn round_trip_over_enumerated_terms() {
        let caps = Caps::default();
        for sig in [semilattice_sig(), group_sig()] {
            for t in enumerate_terms(&sig, 2, 2, &caps).unwrap() {
                let back = parse_term(&format_term(&t), &sig, 2).unwrap();
                assert_eq!(back, t);
            }
        }
    }
}
