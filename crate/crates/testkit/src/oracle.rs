//! Brute-force reference implementations.

use std::collections::{BTreeMap, BTreeSet};

use dolkit::kernel::symbols_of;
use dolkit::logics::PropFormula;
use dolkit::select::{SineParams, Selection};
use dolkit::structure::{Colimit, Diagram};
use dolkit::{Sentence, Symbol, Theory};

/// Γ ⊨ φ by enumerating every assignment to the atoms involved.
pub fn entails(axioms: &[PropFormula], conjecture: &PropFormula) -> bool {
    let vars: BTreeSet<Symbol> =
        axioms.iter().chain([conjecture]).flat_map(|f| symbols_of(&Sentence::axiom(f.clone()))).collect();
    let vars: Vec<Symbol> = vars.into_iter().collect();
    assert!(vars.len() < 24, "truth table too large");
    (0u32..1 << vars.len()).all(|bits| {
        let assignment: BTreeMap<Symbol, bool> =
            vars.iter().enumerate().map(|(i, v)| (v.clone(), bits >> i & 1 == 1)).collect();
        !axioms.iter().all(|a| a.eval(&assignment)) || conjecture.eval(&assignment)
    })
}

/// Indices (into the theory's axioms) selected by SInE, computed directly
/// from the definition: in each round every axiom triggered by any symbol
/// known so far is selected, and its symbols become known. Rounds repeat
/// `depth` times, or until nothing changes when `depth` is 0.
pub fn sine(t: &Theory, conjecture: &Sentence, p: &SineParams) -> BTreeSet<usize> {
    let axioms: Vec<BTreeSet<Symbol>> = t.axioms().map(symbols_of).collect();
    let occ = |s: &Symbol| axioms.iter().filter(|a| a.contains(s)).count();
    let triggers = |s: &Symbol, a: &BTreeSet<Symbol>| {
        a.contains(s) && {
            let rarest = a.iter().map(occ).min().expect("axiom has symbols");
            occ(s) <= p.generality_threshold || occ(s) as f64 <= p.tolerance * rarest as f64
        }
    };
    let mut selected: BTreeSet<usize> = (0..axioms.len()).filter(|&i| axioms[i].is_empty()).collect();
    let mut known = symbols_of(conjecture);
    let mut round = 0;
    loop {
        if p.depth != 0 && round == p.depth {
            break;
        }
        round += 1;
        let now: BTreeSet<usize> = (0..axioms.len())
            .filter(|&i| !axioms[i].is_empty() && known.iter().any(|s| triggers(s, &axioms[i])))
            .collect();
        let grown = now.difference(&selected).count() > 0;
        selected.extend(now);
        for &i in &selected {
            known.extend(axioms[i].iter().cloned());
        }
        if !grown {
            break;
        }
    }
    selected
}

/// Indices of the theory's axioms contained in `s`.
pub fn selected_indices(t: &Theory, s: &Selection) -> BTreeSet<usize> {
    t.axioms().enumerate().filter(|(_, a)| s.chosen.contains(a)).map(|(i, _)| i).collect()
}

pub type Element = (String, Symbol);
pub type Partition = BTreeSet<BTreeSet<Element>>;

/// Equivalence closure of the relation "related by some edge", by merging
/// blocks until no edge connects two different blocks.
pub fn equivalence_classes(d: &Diagram) -> Partition {
    let mut blocks: Vec<BTreeSet<Element>> = d
        .nodes
        .iter()
        .flat_map(|(n, sig)| sig.iter().map(move |s| BTreeSet::from([(n.clone(), s.clone())])))
        .collect();
    let pairs: Vec<(Element, Element)> = d
        .edges
        .iter()
        .flat_map(|e| e.morphism.pairs().map(move |(s, t)| ((e.from.clone(), s.clone()), (e.to.clone(), t.clone()))))
        .collect();
    loop {
        let hit = pairs.iter().find_map(|(a, b)| {
            let i = blocks.iter().position(|blk| blk.contains(a))?;
            let j = blocks.iter().position(|blk| blk.contains(b))?;
            (i != j).then_some((i.min(j), i.max(j)))
        });
        let Some((i, j)) = hit else { break };
        let merged = blocks.remove(j);
        blocks[i].extend(merged);
    }
    blocks.into_iter().collect()
}

/// The partition induced by a colimit: two elements are equivalent iff
/// their injections agree.
pub fn colimit_classes(d: &Diagram, c: &Colimit) -> Partition {
    let mut by_image: BTreeMap<Symbol, BTreeSet<Element>> = BTreeMap::new();
    for (n, sig) in &d.nodes {
        for s in sig.iter() {
            let image = c.injections[n].apply(s).expect("injection is total").clone();
            by_image.entry(image).or_default().insert((n.clone(), s.clone()));
        }
    }
    by_image.into_values().collect()
}
