//! First-order prover: clausification (NNF, Skolemization, CNF) followed by
//! given-clause saturation with binary resolution and factoring.
//!
//! Clause selection alternates between the oldest and the lightest passive
//! clause in a 1:4 ratio, which keeps the search fair. Tautologies and
//! duplicates are discarded on generation. Subsumed clauses are discarded
//! forwards and removed backwards when a clause is activated.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::kernel::{Ast, Sentence, Symbol};
use crate::logics::{FolFormula, FolTerm};

use super::{Deadline, Outcome, ProofStatus, ProveError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Term {
    Var(u32),
    /// Constants are nullary applications; Skolem functions have arguments.
    App(u32, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Literal {
    pred: u32,
    positive: bool,
    args: Vec<Term>,
}

/// Negation normal form with quantifiers and terms already converted.
enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(Vec<u32>, Box<Nnf>),
    Exists(Vec<u32>, Box<Nnf>),
}

#[derive(Default)]
struct Symbols {
    preds: HashMap<Symbol, u32>,
    functions: HashMap<Symbol, u32>,
    function_count: u32,
    next_var: u32,
}

impl Symbols {
    fn pred(&mut self, s: &Symbol) -> u32 {
        let n = self.preds.len() as u32;
        *self.preds.entry(s.clone()).or_insert(n)
    }

    fn constant(&mut self, s: &Symbol) -> u32 {
        if let Some(&f) = self.functions.get(s) {
            return f;
        }
        let f = self.skolem();
        self.functions.insert(s.clone(), f);
        f
    }

    fn skolem(&mut self) -> u32 {
        self.function_count += 1;
        self.function_count - 1
    }

    fn fresh_var(&mut self) -> u32 {
        self.next_var += 1;
        self.next_var - 1
    }

    fn term(&mut self, t: &FolTerm, scope: &HashMap<String, u32>) -> Term {
        match t {
            FolTerm::Var(v) => Term::Var(match scope.get(v) {
                Some(&x) => x,
                None => self.fresh_var(),
            }),
            FolTerm::Const(c) => Term::App(self.constant(c), Vec::new()),
        }
    }

    fn nnf(&mut self, f: &FolFormula, positive: bool, scope: &HashMap<String, u32>) -> Result<Nnf, ProveError> {
        let both = |s: &mut Self, a: &FolFormula, pa: bool, b: &FolFormula, pb: bool| -> Result<Vec<Nnf>, ProveError> {
            Ok(vec![s.nnf(a, pa, scope)?, s.nnf(b, pb, scope)?])
        };
        Ok(match f {
            FolFormula::True => if positive { Nnf::True } else { Nnf::False },
            FolFormula::False => if positive { Nnf::False } else { Nnf::True },
            FolFormula::Atom { pred, args } => Nnf::Lit(Literal {
                pred: self.pred(pred),
                positive,
                args: args.iter().map(|a| self.term(a, scope)).collect(),
            }),
            FolFormula::Equal(..) => return Err(ProveError::UnsupportedFeature("equality".into())),
            FolFormula::Not(a) => self.nnf(a, !positive, scope)?,
            FolFormula::And(a, b) if positive => Nnf::And(both(self, a, true, b, true)?),
            FolFormula::And(a, b) => Nnf::Or(both(self, a, false, b, false)?),
            FolFormula::Or(a, b) if positive => Nnf::Or(both(self, a, true, b, true)?),
            FolFormula::Or(a, b) => Nnf::And(both(self, a, false, b, false)?),
            FolFormula::Implies(a, b) if positive => Nnf::Or(both(self, a, false, b, true)?),
            FolFormula::Implies(a, b) => Nnf::And(both(self, a, true, b, false)?),
            FolFormula::Iff(a, b) if positive => Nnf::And(vec![
                Nnf::Or(both(self, a, false, b, true)?),
                Nnf::Or(both(self, a, true, b, false)?),
            ]),
            FolFormula::Iff(a, b) => Nnf::Or(vec![
                Nnf::And(both(self, a, true, b, false)?),
                Nnf::And(both(self, a, false, b, true)?),
            ]),
            FolFormula::Forall(vs, body) | FolFormula::Exists(vs, body) => {
                let mut inner = scope.clone();
                let ids: Vec<u32> = vs
                    .iter()
                    .map(|v| {
                        let x = self.fresh_var();
                        inner.insert(v.clone(), x);
                        x
                    })
                    .collect();
                let body = Box::new(self.nnf(body, positive, &inner)?);
                if matches!(f, FolFormula::Forall(..)) == positive {
                    Nnf::Forall(ids, body)
                } else {
                    Nnf::Exists(ids, body)
                }
            }
        })
    }

    /// Replaces existential variables by Skolem terms over the universal
    /// variables in scope and drops the quantifiers.
    fn skolemize(&mut self, f: Nnf, universals: &mut Vec<u32>, subst: &mut HashMap<u32, Term>) -> Nnf {
        match f {
            Nnf::Forall(vs, body) => {
                let n = universals.len();
                universals.extend(vs);
                let out = self.skolemize(*body, universals, subst);
                universals.truncate(n);
                out
            }
            Nnf::Exists(vs, body) => {
                for v in vs {
                    let args = universals.iter().map(|&u| Term::Var(u)).collect();
                    subst.insert(v, Term::App(self.skolem(), args));
                }
                self.skolemize(*body, universals, subst)
            }
            Nnf::Lit(mut l) => {
                l.args = l.args.iter().map(|t| apply(t, subst)).collect();
                Nnf::Lit(l)
            }
            Nnf::And(xs) => Nnf::And(xs.into_iter().map(|x| self.skolemize(x, universals, subst)).collect()),
            Nnf::Or(xs) => Nnf::Or(xs.into_iter().map(|x| self.skolemize(x, universals, subst)).collect()),
            t @ (Nnf::True | Nnf::False) => t,
        }
    }
}

/// Clauses of a quantifier-free NNF formula, by distribution.
fn cnf(f: &Nnf, limit: usize) -> Option<Vec<Vec<Literal>>> {
    Some(match f {
        Nnf::True => Vec::new(),
        Nnf::False => vec![Vec::new()],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(xs) => {
            let mut out = Vec::new();
            for x in xs {
                out.extend(cnf(x, limit)?);
                if out.len() > limit {
                    return None;
                }
            }
            out
        }
        Nnf::Or(xs) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for x in xs {
                let part = cnf(x, limit)?;
                if acc.len().saturating_mul(part.len()) > limit {
                    return None;
                }
                acc = acc
                    .iter()
                    .flat_map(|a| part.iter().map(move |p| a.iter().chain(p).cloned().collect()))
                    .collect();
            }
            acc
        }
        Nnf::Forall(..) | Nnf::Exists(..) => unreachable!("quantifiers are removed before CNF"),
    })
}

fn apply(t: &Term, subst: &HashMap<u32, Term>) -> Term {
    match t {
        Term::Var(v) => match subst.get(v) {
            Some(u) => apply(u, subst),
            None => t.clone(),
        },
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| apply(a, subst)).collect()),
    }
}

fn occurs(v: u32, t: &Term, subst: &HashMap<u32, Term>) -> bool {
    match t {
        Term::Var(w) => match subst.get(w) {
            Some(u) => occurs(v, u, subst),
            None => *w == v,
        },
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, subst)),
    }
}

fn walk<'a>(t: &'a Term, subst: &'a HashMap<u32, Term>) -> &'a Term {
    let mut t = t;
    while let Term::Var(v) = t {
        match subst.get(v) {
            Some(u) => t = u,
            None => break,
        }
    }
    t
}

fn unify(a: &Term, b: &Term, subst: &mut HashMap<u32, Term>) -> bool {
    let (a, b) = (walk(a, subst).clone(), walk(b, subst).clone());
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if occurs(*x, t, subst) {
                return false;
            }
            subst.insert(*x, t.clone());
            true
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, subst))
        }
    }
}

fn unify_args(xs: &[Term], ys: &[Term], subst: &mut HashMap<u32, Term>) -> bool {
    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify(x, y, subst))
}

/// One-way matching: extends `subst` so that `pattern` instantiated equals `target`.
fn matches(pattern: &Term, target: &Term, subst: &mut HashMap<u32, Term>) -> bool {
    match pattern {
        Term::Var(v) => match subst.get(v) {
            Some(bound) => bound == target,
            None => {
                subst.insert(*v, target.clone());
                true
            }
        },
        Term::App(f, xs) => match target {
            Term::App(g, ys) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).all(|(x, y)| matches(x, y, subst))
            }
            _ => false,
        },
    }
}

fn subsumes_from(c: &[Literal], d: &[Literal], subst: &HashMap<u32, Term>) -> bool {
    let Some((first, rest)) = c.split_first() else { return true };
    d.iter().any(|l| {
        if l.pred != first.pred || l.positive != first.positive {
            return false;
        }
        let mut s = subst.clone();
        first.args.iter().zip(&l.args).all(|(p, t)| matches(p, t, &mut s)) && subsumes_from(rest, d, &s)
    })
}

fn subsumes(c: &[Literal], d: &[Literal]) -> bool {
    c.len() <= d.len() && subsumes_from(c, d, &HashMap::new())
}

fn rename_term(t: &Term, map: &mut HashMap<u32, u32>) -> Term {
    match t {
        Term::Var(v) => {
            let n = map.len() as u32;
            Term::Var(*map.entry(*v).or_insert(n))
        }
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| rename_term(a, map)).collect()),
    }
}

/// Sorted, duplicate-free literals with variables numbered from 0.
fn normalize(lits: Vec<Literal>) -> Vec<Literal> {
    let rename = |lits: &[Literal]| -> Vec<Literal> {
        let mut map = HashMap::new();
        lits.iter()
            .map(|l| Literal {
                pred: l.pred,
                positive: l.positive,
                args: l.args.iter().map(|a| rename_term(a, &mut map)).collect(),
            })
            .collect()
    };
    let mut out = rename(&lits);
    out.sort();
    out.dedup();
    let mut out = rename(&out);
    out.sort();
    out.dedup();
    out
}

fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().enumerate().any(|(i, a)| {
        lits[i + 1..].iter().any(|b| a.pred == b.pred && a.positive != b.positive && a.args == b.args)
    })
}

fn term_weight(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(term_weight).sum::<usize>(),
    }
}

fn max_var(t: &Term) -> Option<u32> {
    match t {
        Term::Var(v) => Some(*v),
        Term::App(_, args) => args.iter().filter_map(max_var).max(),
    }
}

fn shift(t: &Term, by: u32) -> Term {
    match t {
        Term::Var(v) => Term::Var(v + by),
        Term::App(f, args) => Term::App(*f, args.iter().map(|a| shift(a, by)).collect()),
    }
}

#[derive(Clone, Debug)]
enum Origin {
    /// Index of the axiom, or `None` for the negated conjecture.
    Input(Option<usize>),
    Resolvent(usize, usize),
    Factor(usize),
}

struct Clause {
    lits: Vec<Literal>,
    origin: Origin,
}

/// Resource bounds of the first-order prover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FolLimits {
    /// Maximum number of clauses kept; exceeding it ends the run with TMO.
    pub max_clauses: usize,
}

impl Default for FolLimits {
    fn default() -> Self {
        FolLimits { max_clauses: 100_000 }
    }
}

enum Stop {
    Refuted(usize),
    Saturated,
    Timeout,
    ResourceOut,
}

struct Saturation<'a> {
    clauses: Vec<Clause>,
    seen: HashSet<Vec<Literal>>,
    by_age: BinaryHeap<Reverse<usize>>,
    by_weight: BinaryHeap<Reverse<(usize, usize)>>,
    taken: Vec<bool>,
    active: Vec<usize>,
    removed: Vec<bool>,
    limits: FolLimits,
    deadline: &'a Deadline,
    work: u64,
}

impl Saturation<'_> {
    /// Adds a clause to the passive set. Returns its id if it is empty.
    fn add(&mut self, lits: Vec<Literal>, origin: Origin) -> Result<Option<usize>, Stop> {
        let lits = normalize(lits);
        if is_tautology(&lits) || !self.seen.insert(lits.clone()) {
            return Ok(None);
        }
        if self.clauses.len() >= self.limits.max_clauses {
            return Err(Stop::ResourceOut);
        }
        let id = self.clauses.len();
        let weight = lits.iter().map(|l| 1 + l.args.iter().map(term_weight).sum::<usize>()).sum();
        let empty = lits.is_empty();
        self.clauses.push(Clause { lits, origin });
        self.taken.push(false);
        self.removed.push(false);
        self.by_age.push(Reverse(id));
        self.by_weight.push(Reverse((weight, id)));
        Ok(empty.then_some(id))
    }

    fn tick(&mut self) -> Result<(), Stop> {
        self.work += 1;
        if self.work.is_multiple_of(64) && self.deadline.expired() {
            return Err(Stop::Timeout);
        }
        Ok(())
    }

    fn pick(&mut self, round: usize) -> Option<usize> {
        loop {
            let id = if round.is_multiple_of(5) {
                self.by_age.pop().map(|Reverse(id)| id)
            } else {
                self.by_weight.pop().map(|Reverse((_, id))| id)
            };
            let id = id?;
            if !self.taken[id] {
                self.taken[id] = true;
                return Some(id);
            }
        }
    }

    fn run(&mut self) -> Result<usize, Stop> {
        let mut round = 0;
        loop {
            if self.deadline.expired() {
                return Err(Stop::Timeout);
            }
            round += 1;
            let Some(g) = self.pick(round) else { return Err(Stop::Saturated) };
            let given = self.clauses[g].lits.clone();
            let mut redundant = false;
            for i in 0..self.active.len() {
                self.tick()?;
                let a = self.active[i];
                if !self.removed[a] && subsumes(&self.clauses[a].lits, &given) {
                    redundant = true;
                    break;
                }
            }
            if redundant {
                continue;
            }
            for &a in &self.active {
                if !self.removed[a] && subsumes(&given, &self.clauses[a].lits) {
                    self.removed[a] = true;
                }
            }
            let removed = &self.removed;
            self.active.retain(|&a| !removed[a]);
            self.active.push(g);
            if let Some(e) = self.infer(g)? {
                return Ok(e);
            }
        }
    }

    fn infer(&mut self, g: usize) -> Result<Option<usize>, Stop> {
        let given = self.clauses[g].lits.clone();
        for i in 0..given.len() {
            for j in i + 1..given.len() {
                let (a, b) = (&given[i], &given[j]);
                if a.pred != b.pred || a.positive != b.positive {
                    continue;
                }
                let mut s = HashMap::new();
                if unify_args(&a.args, &b.args, &mut s) {
                    let lits = given.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, l)| subst_lit(l, &s)).collect();
                    if let Some(e) = self.add(lits, Origin::Factor(g))? {
                        return Ok(Some(e));
                    }
                }
            }
        }
        let offset = given.iter().flat_map(|l| l.args.iter().filter_map(max_var)).max().map_or(0, |m| m + 1);
        let partners = self.active.clone();
        for p in partners {
            let other: Vec<Literal> = self.clauses[p]
                .lits
                .iter()
                .map(|l| Literal { pred: l.pred, positive: l.positive, args: l.args.iter().map(|t| shift(t, offset)).collect() })
                .collect();
            for (i, a) in given.iter().enumerate() {
                for (j, b) in other.iter().enumerate() {
                    if a.pred != b.pred || a.positive == b.positive {
                        continue;
                    }
                    self.tick()?;
                    let mut s = HashMap::new();
                    if !unify_args(&a.args, &b.args, &mut s) {
                        continue;
                    }
                    let lits = given
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, l)| subst_lit(l, &s))
                        .chain(other.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, l)| subst_lit(l, &s)))
                        .collect();
                    if let Some(e) = self.add(lits, Origin::Resolvent(g, p))? {
                        return Ok(Some(e));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Axiom indices among the input ancestors of clause `c`.
    fn used_axioms(&self, c: usize) -> Vec<usize> {
        let mut seen = vec![false; self.clauses.len()];
        let mut stack = vec![c];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            match self.clauses[x].origin {
                Origin::Input(Some(i)) => out.push(i),
                Origin::Input(None) => {}
                Origin::Resolvent(a, b) => stack.extend([a, b]),
                Origin::Factor(a) => stack.push(a),
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn subst_lit(l: &Literal, s: &HashMap<u32, Term>) -> Literal {
    Literal { pred: l.pred, positive: l.positive, args: l.args.iter().map(|t| apply(t, s)).collect() }
}

fn fol_formula(s: &Sentence) -> Result<&FolFormula, ProveError> {
    match &s.ast {
        Ast::Fol(f) => Ok(f),
        other => Err(ProveError::WrongLogic { prover: "internal-fol", found: other.logic() }),
    }
}

/// Tries to refute the axioms together with the negated conjecture.
pub fn prove_fol(
    axioms: &[Sentence],
    conjecture: &Sentence,
    deadline: &Deadline,
    limits: FolLimits,
) -> Result<Outcome, ProveError> {
    let mut symbols = Symbols::default();
    let mut inputs: Vec<(Option<usize>, Vec<Vec<Literal>>)> = Vec::new();
    let goal = FolFormula::not(fol_formula(conjecture)?.clone());
    let formulas = axioms.iter().map(fol_formula).enumerate().map(|(i, f)| f.map(|f| (Some(i), f.clone())));
    let formulas: Vec<(Option<usize>, FolFormula)> =
        formulas.chain(std::iter::once(Ok((None, goal)))).collect::<Result<_, _>>()?;
    let mut resource_out = false;
    for (source, f) in &formulas {
        let nnf = symbols.nnf(f, true, &HashMap::new())?;
        let quantifier_free = symbols.skolemize(nnf, &mut Vec::new(), &mut HashMap::new());
        match cnf(&quantifier_free, limits.max_clauses) {
            Some(cs) => inputs.push((*source, cs)),
            None => resource_out = true,
        }
    }
    let labels: Vec<String> =
        axioms.iter().enumerate().map(|(i, a)| a.label_or(&format!("ax{}", i + 1)).to_string()).collect();
    let mut sat = Saturation {
        clauses: Vec::new(),
        seen: HashSet::new(),
        by_age: BinaryHeap::new(),
        by_weight: BinaryHeap::new(),
        taken: Vec::new(),
        active: Vec::new(),
        removed: Vec::new(),
        limits,
        deadline,
        work: 0,
    };
    let mut stop = if resource_out { Some(Stop::ResourceOut) } else { None };
    'load: for (source, cs) in inputs {
        for c in cs {
            match sat.add(c, Origin::Input(source)) {
                Ok(Some(e)) => {
                    stop = Some(Stop::Refuted(e));
                    break 'load;
                }
                Ok(None) => {}
                Err(s) => {
                    stop = Some(s);
                    break 'load;
                }
            }
        }
    }
    let stop = match stop {
        Some(s) => s,
        None => match sat.run() {
            Ok(e) => Stop::Refuted(e),
            Err(s) => s,
        },
    };
    let summary = format!("{} clauses generated", sat.clauses.len());
    Ok(match stop {
        Stop::Refuted(e) => {
            let used: Vec<String> = sat.used_axioms(e).into_iter().map(|i| labels[i].clone()).collect();
            let output = format!("{summary}\nrefutation uses: {}\nSZS status Theorem", used.join(", "));
            Outcome::new(ProofStatus::Thm, Some(used), output)
        }
        Stop::Saturated => Outcome::new(
            ProofStatus::Csa,
            None,
            format!("{summary}\nsaturated without the empty clause\nSZS status CounterSatisfiable"),
        ),
        Stop::Timeout => Outcome::new(ProofStatus::Tmo, None, format!("{summary}\nSZS status Timeout")),
        Stop::ResourceOut => Outcome::new(
            ProofStatus::Tmo,
            None,
            format!("{summary}\nclause limit {} reached\nSZS status ResourceOut", limits.max_clauses),
        ),
    })
}
