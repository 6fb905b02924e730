//! Axiom selection: by name, or by the SInE symbol-commonness heuristic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{symbols_of, Sentence, Symbol, Theory};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SelectError {
    #[error("no axiom named `{0}`")]
    UnknownAxiomName(String),
    #[error("SInE tolerance must be at least 1, got {0}")]
    InvalidTolerance(f64),
}

/// SInE parameters. A depth of 0 means "until fixpoint".
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SineParams {
    pub tolerance: f64,
    pub depth: usize,
    pub generality_threshold: usize,
}

impl SineParams {
    pub fn new(tolerance: f64, depth: usize, generality_threshold: usize) -> Result<Self, SelectError> {
        if !tolerance.is_finite() || tolerance < 1.0 {
            return Err(SelectError::InvalidTolerance(tolerance));
        }
        Ok(SineParams { tolerance, depth, generality_threshold })
    }
}

/// The axioms handed to a prover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Selection {
    pub chosen: Vec<Sentence>,
    /// Whether some axiom of the theory was left out.
    pub strict_subset: bool,
}

impl Selection {
    fn of(t: &Theory, keep: impl Fn(usize, &Sentence) -> bool) -> Selection {
        let axioms: Vec<&Sentence> = t.axioms().collect();
        let chosen: Vec<Sentence> =
            axioms.iter().enumerate().filter(|(i, s)| keep(*i, s)).map(|(_, s)| (*s).clone()).collect();
        Selection { strict_subset: chosen.len() < axioms.len(), chosen }
    }

    pub fn full(t: &Theory) -> Selection {
        Selection::of(t, |_, _| true)
    }

    pub fn labels(&self) -> Vec<String> {
        self.chosen.iter().enumerate().map(|(i, s)| s.label_or(&format!("ax{}", i + 1)).to_string()).collect()
    }
}

/// Number of axioms in which each symbol occurs.
pub fn occurrences(t: &Theory) -> BTreeMap<Symbol, usize> {
    let mut occ = BTreeMap::new();
    for a in t.axioms() {
        for s in symbols_of(a) {
            *occ.entry(s).or_insert(0) += 1;
        }
    }
    occ
}

pub fn manual_select(t: &Theory, names: &[String]) -> Result<Selection, SelectError> {
    for n in names {
        if !t.axioms().any(|a| a.label.as_deref() == Some(n.as_str())) {
            return Err(SelectError::UnknownAxiomName(n.clone()));
        }
    }
    Ok(Selection::of(t, |_, s| s.label.as_ref().is_some_and(|l| names.contains(l))))
}

/// SInE: starting from the conjecture's symbols, repeatedly selects the
/// axioms triggered by the symbols collected so far. A symbol `s` triggers
/// axiom `A` when it occurs in `A` and is either rare in absolute terms
/// (`occ(s) <= generality_threshold`) or at most `tolerance` times as common
/// as the rarest symbol of `A`.
pub fn sine_select(t: &Theory, conjecture: &Sentence, p: &SineParams) -> Selection {
    let occ = occurrences(t);
    let axioms: Vec<BTreeSet<Symbol>> = t.axioms().map(symbols_of).collect();
    let mut triggered_by: BTreeMap<&Symbol, Vec<usize>> = BTreeMap::new();
    for (i, syms) in axioms.iter().enumerate() {
        let Some(min) = syms.iter().map(|s| occ[s]).min() else { continue };
        for s in syms {
            let o = occ[s];
            if o <= p.generality_threshold || o as f64 <= p.tolerance * min as f64 {
                triggered_by.entry(s).or_default().push(i);
            }
        }
    }
    let mut selected: Vec<bool> = axioms.iter().map(|s| s.is_empty()).collect();
    let mut known: BTreeSet<Symbol> = symbols_of(conjecture);
    let mut frontier: Vec<Symbol> = known.iter().cloned().collect();
    let mut round = 0;
    while !frontier.is_empty() && (p.depth == 0 || round < p.depth) {
        round += 1;
        let mut fresh = Vec::new();
        for s in &frontier {
            for &i in triggered_by.get(s).into_iter().flatten() {
                if !selected[i] {
                    selected[i] = true;
                    fresh.push(i);
                }
            }
        }
        frontier = Vec::new();
        for i in fresh {
            for s in &axioms[i] {
                if known.insert(s.clone()) {
                    frontier.push(s.clone());
                }
            }
        }
    }
    Selection::of(t, |i, _| selected[i])
}
