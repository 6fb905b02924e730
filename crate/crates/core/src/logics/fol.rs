//! Function-free first-order logic. Terms are variables and constants;
//! equality exists in the syntax but is off unless a parser enables it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::kernel::{Kind, LogicId, Symbol, Syntax};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FolTerm {
    /// Variable name in TPTP form (upper-case initial).
    Var(String),
    Const(Symbol),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FolFormula {
    True,
    False,
    Atom { pred: Symbol, args: Vec<FolTerm> },
    Equal(FolTerm, FolTerm),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Iff(Box<FolFormula>, Box<FolFormula>),
    Forall(Vec<String>, Box<FolFormula>),
    Exists(Vec<String>, Box<FolFormula>),
}

impl FolTerm {
    pub fn var(name: &str) -> Self {
        FolTerm::Var(name.to_string())
    }

    pub fn constant(origin: &str, name: &str) -> Self {
        FolTerm::Const(Symbol::new(origin, name, Kind::Individual, 0))
    }
}

impl FolFormula {
    pub fn atom(pred: Symbol, args: Vec<FolTerm>) -> Self {
        debug_assert_eq!(pred.arity, args.len());
        FolFormula::Atom { pred, args }
    }

    /// Atom over a predicate named `origin`/`name` with the arity of `args`.
    pub fn pred(origin: &str, name: &str, args: Vec<FolTerm>) -> Self {
        let pred = Symbol::new(origin, name, Kind::Predicate, args.len());
        FolFormula::Atom { pred, args }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: FolFormula) -> Self {
        FolFormula::Not(Box::new(f))
    }

    pub fn and(a: FolFormula, b: FolFormula) -> Self {
        FolFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FolFormula, b: FolFormula) -> Self {
        FolFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FolFormula, b: FolFormula) -> Self {
        FolFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: FolFormula, b: FolFormula) -> Self {
        FolFormula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: &[&str], body: FolFormula) -> Self {
        FolFormula::Forall(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    pub fn exists(vars: &[&str], body: FolFormula) -> Self {
        FolFormula::Exists(vars.iter().map(|v| v.to_string()).collect(), Box::new(body))
    }

    /// Conjunction of `parts`, `True` when empty.
    pub fn conj(parts: impl IntoIterator<Item = FolFormula>) -> Self {
        parts.into_iter().reduce(FolFormula::and).unwrap_or(FolFormula::True)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut free = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut free);
        free
    }

    fn collect_free(&self, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
        let mut term = |t: &FolTerm, bound: &Vec<String>| {
            if let FolTerm::Var(v) = t {
                if !bound.contains(v) {
                    free.insert(v.clone());
                }
            }
        };
        match self {
            FolFormula::True | FolFormula::False => {}
            FolFormula::Atom { args, .. } => args.iter().for_each(|t| term(t, bound)),
            FolFormula::Equal(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            FolFormula::Not(a) => a.collect_free(bound, free),
            FolFormula::And(a, b)
            | FolFormula::Or(a, b)
            | FolFormula::Implies(a, b)
            | FolFormula::Iff(a, b) => {
                a.collect_free(bound, free);
                b.collect_free(bound, free);
            }
            FolFormula::Forall(vs, body) | FolFormula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, free);
                bound.truncate(n);
            }
        }
    }

    pub fn has_equality(&self) -> bool {
        match self {
            FolFormula::Equal(..) => true,
            FolFormula::True | FolFormula::False | FolFormula::Atom { .. } => false,
            FolFormula::Not(a) | FolFormula::Forall(_, a) | FolFormula::Exists(_, a) => a.has_equality(),
            FolFormula::And(a, b)
            | FolFormula::Or(a, b)
            | FolFormula::Implies(a, b)
            | FolFormula::Iff(a, b) => a.has_equality() || b.has_equality(),
        }
    }
}

fn rename_term(t: &FolTerm, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<FolTerm, Symbol> {
    Ok(match t {
        FolTerm::Var(v) => FolTerm::Var(v.clone()),
        FolTerm::Const(c) => FolTerm::Const(f(c).ok_or_else(|| c.clone())?),
    })
}

impl Syntax for FolFormula {
    const LOGIC: LogicId = LogicId::Fol;

    fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol)) {
        let term = |t: &'a FolTerm, f: &mut dyn FnMut(&'a Symbol)| {
            if let FolTerm::Const(c) = t {
                f(c)
            }
        };
        match self {
            FolFormula::True | FolFormula::False => {}
            FolFormula::Atom { pred, args } => {
                f(pred);
                for a in args {
                    term(a, f);
                }
            }
            FolFormula::Equal(a, b) => {
                term(a, f);
                term(b, f);
            }
            FolFormula::Not(a) | FolFormula::Forall(_, a) | FolFormula::Exists(_, a) => {
                a.visit_symbols(f)
            }
            FolFormula::And(a, b)
            | FolFormula::Or(a, b)
            | FolFormula::Implies(a, b)
            | FolFormula::Iff(a, b) => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
        }
    }

    fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Self, Symbol> {
        Ok(match self {
            FolFormula::True => FolFormula::True,
            FolFormula::False => FolFormula::False,
            FolFormula::Atom { pred, args } => FolFormula::Atom {
                pred: f(pred).ok_or_else(|| pred.clone())?,
                args: args.iter().map(|t| rename_term(t, f)).collect::<Result<_, _>>()?,
            },
            FolFormula::Equal(a, b) => FolFormula::Equal(rename_term(a, f)?, rename_term(b, f)?),
            FolFormula::Not(a) => FolFormula::Not(Box::new(a.rename(f)?)),
            FolFormula::And(a, b) => FolFormula::And(Box::new(a.rename(f)?), Box::new(b.rename(f)?)),
            FolFormula::Or(a, b) => FolFormula::Or(Box::new(a.rename(f)?), Box::new(b.rename(f)?)),
            FolFormula::Implies(a, b) => {
                FolFormula::Implies(Box::new(a.rename(f)?), Box::new(b.rename(f)?))
            }
            FolFormula::Iff(a, b) => FolFormula::Iff(Box::new(a.rename(f)?), Box::new(b.rename(f)?)),
            FolFormula::Forall(vs, a) => FolFormula::Forall(vs.clone(), Box::new(a.rename(f)?)),
            FolFormula::Exists(vs, a) => FolFormula::Exists(vs.clone(), Box::new(a.rename(f)?)),
        })
    }
}
