//! proptest strategies.

use std::collections::BTreeMap;

use dolkit::kernel::SignatureMorphism;
use dolkit::logics::{FolFormula, FolTerm, PropFormula};
use dolkit::select::SineParams;
use dolkit::structure::{Diagram, DiagramEdge};
use dolkit::{Kind, LogicId, Sentence, Signature, Symbol, Theory};
use indexmap::IndexMap;
use proptest::prelude::*;

pub const ORIGIN: &str = "t#";

pub fn prop_var(i: usize) -> PropFormula {
    PropFormula::var(ORIGIN, &format!("p{i}"))
}

/// Propositional formulas over `p0 .. p{vars-1}`.
pub fn prop_formula(vars: usize, depth: u32) -> BoxedStrategy<PropFormula> {
    let leaf = prop_oneof![
        8 => (0..vars).prop_map(prop_var),
        1 => Just(PropFormula::True),
        1 => Just(PropFormula::False),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PropFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PropFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PropFormula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PropFormula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| PropFormula::iff(a, b)),
        ]
    })
    .boxed()
}

#[derive(Clone, Debug)]
pub struct PropInstance {
    pub vars: usize,
    pub axioms: Vec<PropFormula>,
    pub conjecture: PropFormula,
}

impl PropInstance {
    pub fn axiom_sentences(&self) -> Vec<Sentence> {
        self.axioms.iter().enumerate().map(|(i, f)| Sentence::axiom(f.clone()).labelled(format!("a{}", i + 1))).collect()
    }

    pub fn conjecture_sentence(&self) -> Sentence {
        Sentence::conjecture(self.conjecture.clone()).labelled("goal")
    }
}

/// Entailment instances with at most `max_vars` variables and `max_axioms`
/// axioms.
pub fn prop_instance(max_vars: usize, max_axioms: usize, depth: u32) -> impl Strategy<Value = PropInstance> {
    (1..=max_vars).prop_flat_map(move |vars| {
        (prop::collection::vec(prop_formula(vars, depth), 0..=max_axioms), prop_formula(vars, depth))
            .prop_map(move |(axioms, conjecture)| PropInstance { vars, axioms, conjecture })
    })
}

fn unary(i: usize) -> Symbol {
    Symbol::new(ORIGIN, format!("p{i}"), Kind::Predicate, 1)
}

fn constant(i: usize) -> FolTerm {
    FolTerm::Const(Symbol::new(ORIGIN, format!("c{i}"), Kind::Individual, 0))
}

/// A FOL theory for SInE: each axiom relates a few ground atoms drawn from
/// small predicate and constant pools, so symbol counts vary widely. Some
/// axioms use no symbols at all.
#[derive(Clone, Debug)]
pub struct SineInstance {
    pub theory: Theory,
    pub conjecture: Sentence,
}

fn ground_atom() -> impl Strategy<Value = FolFormula> {
    (0..8usize, 0..5usize).prop_map(|(p, c)| FolFormula::atom(unary(p), vec![constant(c)]))
}

fn sine_axiom() -> impl Strategy<Value = FolFormula> {
    prop_oneof![
        1 => Just(FolFormula::True),
        9 => prop::collection::vec(ground_atom(), 1..4).prop_map(|atoms| {
            let mut it = atoms.into_iter().rev();
            let last = it.next().expect("non-empty");
            it.fold(last, |acc, a| FolFormula::implies(a, acc))
        }),
    ]
}

pub fn sine_instance(max_axioms: usize) -> impl Strategy<Value = SineInstance> {
    (prop::collection::vec(sine_axiom(), 0..=max_axioms), ground_atom()).prop_map(|(axioms, goal)| {
        let sentences =
            axioms.into_iter().enumerate().map(|(i, f)| Sentence::axiom(f).labelled(format!("A{}", i + 1))).collect();
        let theory = Theory::from_sentences("sine", Signature::empty(LogicId::Fol), sentences).expect("well formed");
        SineInstance { theory, conjecture: Sentence::conjecture(goal).labelled("goal") }
    })
}

pub fn sine_params() -> impl Strategy<Value = SineParams> {
    (1.0f64..4.0, 0usize..4, 0usize..4).prop_map(|(t, d, g)| SineParams::new(t, d, g).expect("tolerance >= 1"))
}

/// Symbol classes used by the morphism generators.
const CLASSES: [(Kind, usize); 3] = [(Kind::Predicate, 1), (Kind::Predicate, 2), (Kind::Individual, 0)];

fn layer_signature(level: usize, sizes: &[usize; 3]) -> Signature {
    let symbols = CLASSES.iter().zip(sizes).flat_map(|(&(kind, arity), &n)| {
        (0..n).map(move |k| Symbol::new(format!("L{level}#"), format!("{}{arity}_{k}", kind.as_str()), kind, arity))
    });
    Signature::new(LogicId::Fol, symbols).expect("distinct symbols")
}

fn of_class(sig: &Signature, kind: Kind, arity: usize) -> Vec<&Symbol> {
    sig.iter().filter(|s| s.kind == kind && s.arity == arity).collect()
}

/// Builds the morphism picking, for the i-th source symbol, target symbol
/// number `choice[i]` (modulo the class size) of the same class.
fn morphism(source: &Signature, target: &Signature, choice: &[usize]) -> SignatureMorphism {
    let map: BTreeMap<Symbol, Symbol> = source
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let candidates = of_class(target, s.kind, s.arity);
            (s.clone(), candidates[choice[i % choice.len()] % candidates.len()].clone())
        })
        .collect();
    SignatureMorphism::new(source.clone(), target.clone(), map).expect("class preserving")
}

/// Three composable morphisms `s0 -> s1 -> s2 -> s3` and a sentence over `s0`.
#[derive(Clone, Debug)]
pub struct MorphismChain {
    pub signatures: Vec<Signature>,
    pub morphisms: Vec<SignatureMorphism>,
    pub sentence: Sentence,
}

fn fol_over(sig: &Signature, depth: u32) -> BoxedStrategy<FolFormula> {
    let preds: Vec<Symbol> = sig.iter().filter(|s| s.kind == Kind::Predicate).cloned().collect();
    let consts: Vec<Symbol> = sig.iter().filter(|s| s.kind == Kind::Individual).cloned().collect();
    let term = {
        let consts = consts.clone();
        prop_oneof![
            1 => Just(FolTerm::var("X")),
            2 => (0..consts.len()).prop_map(move |i| FolTerm::Const(consts[i].clone())),
        ]
    };
    let atom = (0..preds.len(), prop::collection::vec(term, 2)).prop_map(move |(p, args)| {
        let pred = preds[p].clone();
        let args = args.into_iter().take(pred.arity).collect();
        FolFormula::atom(pred, args)
    });
    atom.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(FolFormula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FolFormula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| FolFormula::implies(a, b)),
        ]
    })
    .prop_map(|f| FolFormula::forall(&["X"], f))
    .boxed()
}

pub fn morphism_chain() -> impl Strategy<Value = MorphismChain> {
    let sizes = prop::array::uniform3(1..4usize);
    (prop::array::uniform4(sizes), prop::array::uniform3(prop::collection::vec(0..16usize, 12))).prop_flat_map(
        |(sizes, choices)| {
            let signatures: Vec<Signature> = sizes.iter().enumerate().map(|(l, s)| layer_signature(l, s)).collect();
            let morphisms: Vec<SignatureMorphism> =
                (0..3).map(|i| morphism(&signatures[i], &signatures[i + 1], &choices[i])).collect();
            fol_over(&signatures[0], 3).prop_map(move |f| MorphismChain {
                signatures: signatures.clone(),
                morphisms: morphisms.clone(),
                sentence: Sentence::axiom(f).labelled("s"),
            })
        },
    )
}

/// A diagram shaped like an alignment diagram: base nodes holding classes
/// whose local names overlap across nodes, and bridge nodes that map each
/// of their symbols to one symbol on either side.
pub fn alignment_diagram() -> impl Strategy<Value = Diagram> {
    let bridge = (0..4usize, 0..4usize, prop::collection::vec((0..5usize, 0..5usize), 1..5));
    (prop::collection::vec(prop::collection::vec(0..6usize, 1..6), 2..5), prop::collection::vec(bridge, 0..5))
        .prop_map(|(bases, bridges)| {
            let mut nodes: IndexMap<String, Signature> = IndexMap::new();
            for (n, names) in bases.iter().enumerate() {
                let symbols = names.iter().map(|k| Symbol::new(format!("n{n}#"), format!("C{k}"), Kind::Class, 0));
                nodes.insert(format!("n{n}"), Signature::new(LogicId::SimpleDl, symbols).expect("classes"));
            }
            let base_count = nodes.len();
            let mut edges = Vec::new();
            for (b, (l, r, pairs)) in bridges.into_iter().enumerate() {
                let (l, r) = (format!("n{}", l % base_count), format!("n{}", r % base_count));
                let id = format!("b{b}");
                let bridge_syms: Vec<Symbol> =
                    (0..pairs.len()).map(|k| Symbol::new(format!("{id}#"), format!("x{k}"), Kind::Class, 0)).collect();
                let bridge_sig = Signature::new(LogicId::SimpleDl, bridge_syms.clone()).expect("classes");
                for (side, pick) in [(&l, 0usize), (&r, 1)] {
                    let target = &nodes[side];
                    let tsyms: Vec<&Symbol> = target.iter().collect();
                    let map = bridge_syms
                        .iter()
                        .zip(&pairs)
                        .map(|(s, p)| {
                            let k = if pick == 0 { p.0 } else { p.1 };
                            (s.clone(), tsyms[k % tsyms.len()].clone())
                        })
                        .collect();
                    let morphism = SignatureMorphism::new(bridge_sig.clone(), target.clone(), map).expect("total");
                    edges.push(DiagramEdge { from: id.clone(), to: side.clone(), morphism });
                }
                nodes.insert(id, bridge_sig);
            }
            Diagram { nodes, edges }
        })
}
