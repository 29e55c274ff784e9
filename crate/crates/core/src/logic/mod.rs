//! Linear temporal logic over region labels.

mod buchi;
mod parse;
pub mod random;
mod word;

use std::collections::BTreeSet;
use std::fmt;

pub use buchi::{lasso_accepts, to_buchi, BuchiAutomaton, Edge, Guard};
pub use parse::parse_ltl;
pub use word::{eval_ltl_lasso, LassoWord, Letter};

use crate::error::{Error, InputCode, Result};

/// Canonical spelling of the atom that holds exactly inside `D`.
/// `PI_D` is accepted by the parser as an alias.
pub const PI_D_ATOM: &str = "pid";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => {
                out.insert(a.clone());
            }
            Formula::Not(f) | Formula::Next(f) | Formula::Finally(f) | Formula::Globally(f) => f.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Next(f) | Formula::Finally(f) | Formula::Globally(f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Fails with `UNKNOWN_ATOM` if an atom is outside `alphabet`.
    pub fn check_atoms<'a>(&self, alphabet: impl IntoIterator<Item = &'a str>) -> Result<()> {
        let known: BTreeSet<&str> = alphabet.into_iter().collect();
        match self.atoms().into_iter().find(|a| !known.contains(a.as_str())) {
            Some(a) => Err(Error::input(
                InputCode::UnknownAtom,
                format!("formula uses undeclared atom {a}"),
            )),
            None => Ok(()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Until(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Operands are wrapped whenever their precedence is not strictly
        // higher than the parent's, which keeps printing unambiguous for
        // the parser (including right-nested `->` and `U`).
        let wrap = |f: &mut fmt::Formatter<'_>, child: &Formula, parent: u8| {
            if child.precedence() > parent {
                write!(f, "{child}")
            } else {
                write!(f, "({child})")
            }
        };
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(a) => f.write_str(a),
            Formula::Not(g) => {
                f.write_str("!")?;
                wrap(f, g, 4)
            }
            Formula::Next(g) => {
                f.write_str("X ")?;
                wrap(f, g, 4)
            }
            Formula::Finally(g) => {
                f.write_str("F ")?;
                wrap(f, g, 4)
            }
            Formula::Globally(g) => {
                f.write_str("G ")?;
                wrap(f, g, 4)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Until(a, b) => {
                let p = self.precedence();
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    Formula::Implies(..) => "->",
                    _ => "U",
                };
                wrap(f, a, p)?;
                write!(f, " {op} ")?;
                wrap(f, b, p)
            }
        }
    }
}

/// Negation normal form with release; negation only on atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Nnf {
    True,
    False,
    Lit(String, bool),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Next(Box<Nnf>),
    Until(Box<Nnf>, Box<Nnf>),
    Release(Box<Nnf>, Box<Nnf>),
}

pub(crate) fn nnf(f: &Formula, positive: bool) -> Nnf {
    use Formula as F;
    let b = Box::new;
    match (f, positive) {
        (F::True, true) | (F::False, false) => Nnf::True,
        (F::True, false) | (F::False, true) => Nnf::False,
        (F::Atom(a), p) => Nnf::Lit(a.clone(), p),
        (F::Not(g), p) => nnf(g, !p),
        (F::And(x, y), true) | (F::Or(x, y), false) => Nnf::And(b(nnf(x, positive)), b(nnf(y, positive))),
        (F::Or(x, y), true) | (F::And(x, y), false) => Nnf::Or(b(nnf(x, positive)), b(nnf(y, positive))),
        (F::Implies(x, y), true) => Nnf::Or(b(nnf(x, false)), b(nnf(y, true))),
        (F::Implies(x, y), false) => Nnf::And(b(nnf(x, true)), b(nnf(y, false))),
        (F::Next(g), p) => Nnf::Next(b(nnf(g, p))),
        (F::Finally(g), true) => Nnf::Until(b(Nnf::True), b(nnf(g, true))),
        (F::Finally(g), false) => Nnf::Release(b(Nnf::False), b(nnf(g, false))),
        (F::Globally(g), true) => Nnf::Release(b(Nnf::False), b(nnf(g, true))),
        (F::Globally(g), false) => Nnf::Until(b(Nnf::True), b(nnf(g, false))),
        (F::Until(x, y), true) => Nnf::Until(b(nnf(x, true)), b(nnf(y, true))),
        (F::Until(x, y), false) => Nnf::Release(b(nnf(x, false)), b(nnf(y, false))),
    }
}
