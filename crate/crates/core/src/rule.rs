//! Ground facts, premise expressions and production rules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ident::{Ident, InvalidIdent};

/// A ground atom such as `symptom(cough)` or `ready()`.
///
/// Equality is structural over the predicate and the ordered arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub predicate: Ident,
    pub args: Vec<Ident>,
}

impl Fact {
    pub fn new(predicate: Ident, args: Vec<Ident>) -> Self {
        Self { predicate, args }
    }

    /// Builds a fact from string tokens, validating each one.
    pub fn parse_parts(predicate: &str, args: &[&str]) -> Result<Self, InvalidIdent> {
        Ok(Self {
            predicate: Ident::new(predicate)?,
            args: args
                .iter()
                .map(|a| Ident::new(*a))
                .collect::<Result<_, _>>()?,
        })
    }

    /// Convenience constructor for the common single-argument shape.
    pub fn unary(predicate: &str, arg: &str) -> Result<Self, InvalidIdent> {
        Self::parse_parts(predicate, &[arg])
    }

    /// Returns the argument when the fact has the shape `predicate(arg)`.
    pub fn unary_arg(&self, predicate: &str) -> Option<&Ident> {
        match self.args.as_slice() {
            [arg] if self.predicate.as_str() == predicate => Some(arg),
            _ => None,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, arg) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

/// Boolean premise over ground atoms. `And` and `Or` nodes carry at least two children.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PremiseExpr {
    Atom(Fact),
    And(Vec<PremiseExpr>),
    Or(Vec<PremiseExpr>),
}

impl PremiseExpr {
    /// Every atom in the tree, left to right.
    pub fn atoms(&self) -> Vec<&Fact> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Fact>) {
        match self {
            PremiseExpr::Atom(f) => out.push(f),
            PremiseExpr::And(children) | PremiseExpr::Or(children) => {
                for c in children {
                    c.collect_atoms(out);
                }
            }
        }
    }

    /// True when every `And`/`Or` node has at least two children.
    pub fn is_well_formed(&self) -> bool {
        match self {
            PremiseExpr::Atom(_) => true,
            PremiseExpr::And(children) | PremiseExpr::Or(children) => {
                children.len() >= 2 && children.iter().all(PremiseExpr::is_well_formed)
            }
        }
    }
}

impl fmt::Display for PremiseExpr {
    /// Fully parenthesized: every `And`/`Or` node is wrapped, atoms are bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (children, op) = match self {
            PremiseExpr::Atom(fact) => return write!(f, "{fact}"),
            PremiseExpr::And(children) => (children, " AND "),
            PremiseExpr::Or(children) => (children, " OR "),
        };
        f.write_str("(")?;
        for (i, child) in children.iter().enumerate() {
            if i > 0 {
                f.write_str(op)?;
            }
            write!(f, "{child}")?;
        }
        f.write_str(")")
    }
}

/// A named propositional IF-THEN production.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub name: Ident,
    pub premise: PremiseExpr,
    /// Facts asserted when the premise holds. Nonempty.
    pub conclusion: Vec<Fact>,
}

impl Rule {
    pub fn new(name: Ident, premise: PremiseExpr, conclusion: Vec<Fact>) -> Self {
        Self {
            name,
            premise,
            conclusion,
        }
    }

    /// True when the premise is a single atom that is also one of the conclusions.
    pub fn is_self_loop(&self) -> bool {
        match &self.premise {
            PremiseExpr::Atom(f) => self.conclusion.contains(f),
            _ => false,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RULE {}: IF {} THEN ", self.name, self.premise)?;
        for (i, fact) in self.conclusion.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{fact}")?;
        }
        Ok(())
    }
}
