//! Propositional prover: Tseitin encoding into CNF and a DPLL search with
//! two watched literals and chronological backtracking.

use std::collections::HashMap;

use crate::kernel::{Ast, Sentence, Symbol};
use crate::logics::PropFormula;

use super::{Deadline, Outcome, ProofStatus, ProveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit(((var as u32) << 1) | u32::from(!positive))
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Default)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn fresh(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    pub fn add(&mut self, clause: Vec<Lit>) {
        self.clauses.push(clause);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    /// A model, indexed by variable.
    Sat(Vec<bool>),
    Unsat,
    Timeout,
}

struct Search {
    value: Vec<i8>,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    trail: Vec<Lit>,
    qhead: usize,
}

impl Search {
    fn value_of(&self, l: Lit) -> i8 {
        let v = self.value[l.var()];
        if l.positive() {
            v
        } else {
            -v
        }
    }

    fn assign(&mut self, l: Lit) {
        self.value[l.var()] = if l.positive() { 1 } else { -1 };
        self.trail.push(l);
    }

    fn undo_to(&mut self, pos: usize) {
        for l in self.trail.drain(pos..) {
            self.value[l.var()] = 0;
        }
        self.qhead = pos;
    }

    /// Unit propagation; false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let falsified = self.trail[self.qhead].negate();
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[falsified.index()]);
            let mut i = 0;
            let mut ok = true;
            while i < ws.len() {
                let ci = ws[i];
                if self.clauses[ci][0] == falsified {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value_of(first) == 1 {
                    i += 1;
                    continue;
                }
                let replacement = (2..self.clauses[ci].len()).find(|&k| self.value_of(self.clauses[ci][k]) != -1);
                if let Some(k) = replacement {
                    self.clauses[ci].swap(1, k);
                    let w = self.clauses[ci][1];
                    self.watches[w.index()].push(ci);
                    ws.swap_remove(i);
                    continue;
                }
                match self.value_of(first) {
                    -1 => {
                        ok = false;
                        break;
                    }
                    0 => self.assign(first),
                    _ => {}
                }
                i += 1;
            }
            self.watches[falsified.index()] = ws;
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Decides satisfiability of `cnf` with the `assumptions` forced true.
pub fn solve(cnf: &Cnf, assumptions: &[Lit], deadline: &Deadline) -> SatResult {
    if deadline.expired() {
        return SatResult::Timeout;
    }
    let n = cnf.vars;
    let mut s = Search {
        value: vec![0; n],
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        trail: Vec::new(),
        qhead: 0,
    };
    let mut units: Vec<Lit> = assumptions.to_vec();
    for c in &cnf.clauses {
        let mut c = c.clone();
        c.sort_by_key(|l| l.0);
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            continue;
        }
        match c.len() {
            0 => return SatResult::Unsat,
            1 => units.push(c[0]),
            _ => {
                s.watches[c[0].index()].push(s.clauses.len());
                s.watches[c[1].index()].push(s.clauses.len());
                s.clauses.push(c);
            }
        }
    }
    for u in units {
        match s.value_of(u) {
            -1 => return SatResult::Unsat,
            0 => s.assign(u),
            _ => {}
        }
    }
    // (trail position, decision literal, already flipped)
    let mut levels: Vec<(usize, Lit, bool)> = Vec::new();
    let mut next_var = 0;
    let mut steps: u64 = 0;
    loop {
        if !s.propagate() {
            loop {
                let Some((pos, lit, flipped)) = levels.pop() else { return SatResult::Unsat };
                s.undo_to(pos);
                next_var = next_var.min(lit.var());
                if !flipped {
                    levels.push((pos, lit.negate(), true));
                    s.assign(lit.negate());
                    break;
                }
            }
            continue;
        }
        steps += 1;
        if steps.is_multiple_of(256) && deadline.expired() {
            return SatResult::Timeout;
        }
        while next_var < n && s.value[next_var] != 0 {
            next_var += 1;
        }
        if next_var == n {
            return SatResult::Sat(s.value.iter().map(|&v| v == 1).collect());
        }
        let l = Lit::new(next_var, false);
        levels.push((s.trail.len(), l, false));
        s.assign(l);
    }
}

/// Tseitin encoder: every subformula gets a variable equivalent to it.
#[derive(Default)]
pub struct Encoder {
    pub cnf: Cnf,
    atoms: HashMap<Symbol, usize>,
    truth: Option<usize>,
}

impl Encoder {
    pub fn atom(&mut self, s: &Symbol) -> usize {
        if let Some(&v) = self.atoms.get(s) {
            return v;
        }
        let v = self.cnf.fresh();
        self.atoms.insert(s.clone(), v);
        v
    }

    fn truth(&mut self) -> Lit {
        let v = match self.truth {
            Some(v) => v,
            None => {
                let v = self.cnf.fresh();
                self.cnf.add(vec![Lit::new(v, true)]);
                self.truth = Some(v);
                v
            }
        };
        Lit::new(v, true)
    }

    pub fn encode(&mut self, f: &PropFormula) -> Lit {
        match f {
            PropFormula::True => self.truth(),
            PropFormula::False => self.truth().negate(),
            PropFormula::Atom(s) => Lit::new(self.atom(s), true),
            PropFormula::Not(a) => self.encode(a).negate(),
            PropFormula::And(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.and(a, b)
            }
            PropFormula::Or(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.and(a.negate(), b.negate()).negate()
            }
            PropFormula::Implies(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                self.and(a, b.negate()).negate()
            }
            PropFormula::Iff(a, b) => {
                let (a, b) = (self.encode(a), self.encode(b));
                let x = Lit::new(self.cnf.fresh(), true);
                let (na, nb, nx) = (a.negate(), b.negate(), x.negate());
                self.cnf.add(vec![nx, na, b]);
                self.cnf.add(vec![nx, a, nb]);
                self.cnf.add(vec![x, a, b]);
                self.cnf.add(vec![x, na, nb]);
                x
            }
        }
    }

    fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let x = Lit::new(self.cnf.fresh(), true);
        self.cnf.add(vec![x.negate(), a]);
        self.cnf.add(vec![x.negate(), b]);
        self.cnf.add(vec![x, a.negate(), b.negate()]);
        x
    }
}

fn prop_formula(s: &Sentence) -> Result<&PropFormula, ProveError> {
    match &s.ast {
        Ast::Prop(f) => Ok(f),
        other => Err(ProveError::WrongLogic { prover: "internal-prop", found: other.logic() }),
    }
}

/// Decides whether the axioms entail the conjecture. Each axiom is guarded
/// by an assumption literal, so after a refutation the set of needed axioms
/// is shrunk by re-solving without each one in turn.
pub fn prove_prop(axioms: &[Sentence], conjecture: &Sentence, deadline: &Deadline) -> Result<Outcome, ProveError> {
    let mut enc = Encoder::default();
    let mut guards = Vec::with_capacity(axioms.len());
    for a in axioms {
        let root = enc.encode(prop_formula(a)?);
        let g = Lit::new(enc.cnf.fresh(), true);
        enc.cnf.add(vec![g.negate(), root]);
        guards.push(g);
    }
    let goal = enc.encode(prop_formula(conjecture)?);
    enc.cnf.add(vec![goal.negate()]);
    let labels: Vec<String> =
        axioms.iter().enumerate().map(|(i, a)| a.label_or(&format!("ax{}", i + 1)).to_string()).collect();
    let summary = format!("{} variables, {} clauses", enc.cnf.vars, enc.cnf.clauses.len());
    match solve(&enc.cnf, &guards, deadline) {
        SatResult::Timeout => Ok(Outcome::new(ProofStatus::Tmo, None, format!("{summary}\nSZS status Timeout"))),
        SatResult::Sat(_) => Ok(Outcome::new(
            ProofStatus::Csa,
            None,
            format!("{summary}\nsatisfiable: countermodel found\nSZS status CounterSatisfiable"),
        )),
        SatResult::Unsat => {
            let mut kept: Vec<usize> = (0..axioms.len()).collect();
            let mut i = 0;
            while i < kept.len() && !deadline.expired() {
                let trial: Vec<Lit> =
                    kept.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &k)| guards[k]).collect();
                if solve(&enc.cnf, &trial, deadline) == SatResult::Unsat {
                    kept.remove(i);
                } else {
                    i += 1;
                }
            }
            let used: Vec<String> = kept.into_iter().map(|k| labels[k].clone()).collect();
            let output = format!("{summary}\nunsatisfiable using: {}\nSZS status Theorem", used.join(", "));
            Ok(Outcome::new(ProofStatus::Thm, Some(used), output))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn v(n: &str) -> PropFormula {
        PropFormula::var("", n)
    }

    fn far() -> Deadline {
        Deadline::after(Duration::from_secs(60))
    }

    #[test]
    fn modus_ponens() {
        let axioms =
            [Sentence::axiom(v("p")).labelled("a1"), Sentence::axiom(PropFormula::implies(v("p"), v("q"))).labelled("a2")];
        let o = prove_prop(&axioms, &Sentence::conjecture(v("q")), &far()).unwrap();
        assert_eq!(o.status, ProofStatus::Thm);
        assert_eq!(o.used_axioms.unwrap(), ["a1", "a2"]);
    }

    #[test]
    fn unused_axioms_are_left_out() {
        let axioms = [Sentence::axiom(v("r")).labelled("noise"), Sentence::axiom(v("q")).labelled("q")];
        let o = prove_prop(&axioms, &Sentence::conjecture(v("q")), &far()).unwrap();
        assert_eq!(o.used_axioms.unwrap(), ["q"]);
    }

    #[test]
    fn no_axioms_is_countersatisfiable() {
        let o = prove_prop(&[], &Sentence::conjecture(v("p")), &far()).unwrap();
        assert_eq!(o.status, ProofStatus::Csa);
        let taut = PropFormula::or(v("p"), PropFormula::not(v("p")));
        assert_eq!(prove_prop(&[], &Sentence::conjecture(taut), &far()).unwrap().status, ProofStatus::Thm);
    }

    #[test]
    fn zero_budget_times_out() {
        let o = prove_prop(&[], &Sentence::conjecture(v("p")), &Deadline::after(Duration::ZERO)).unwrap();
        assert_eq!(o.status, ProofStatus::Tmo);
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        let mut cnf = Cnf::default();
        let x = |p: usize, h: usize| Lit::new(p * 2 + h, true);
        cnf.vars = 6;
        for p in 0..3 {
            cnf.add(vec![x(p, 0), x(p, 1)]);
        }
        for h in 0..2 {
            for p in 0..3 {
                for q in p + 1..3 {
                    cnf.add(vec![x(p, h).negate(), x(q, h).negate()]);
                }
            }
        }
        assert_eq!(solve(&cnf, &[], &far()), SatResult::Unsat);
        cnf.clauses.truncate(2);
        assert!(matches!(solve(&cnf, &[], &far()), SatResult::Sat(_)));
    }

    #[test]
    fn rejects_other_logics() {
        let s = Sentence::axiom(crate::logics::FolFormula::True);
        assert!(prove_prop(std::slice::from_ref(&s), &s, &far()).is_err());
    }
}
