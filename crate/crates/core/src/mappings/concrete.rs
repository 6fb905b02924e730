//! The built-in mappings `prop2fol`, `dl2fol` and `fol2prop`.

use crate::kernel::{Ast, Kind, LogicId, Sentence, Signature, Symbol, Theory};
use crate::logics::dl::{ClassExpr, DlAxiom};
use crate::logics::fol::{FolFormula, FolTerm};
use crate::logics::prop::PropFormula;

use super::{Accuracy, Direction, LogicMapping, MappingError, MappingMeta, Shape};

/// Origin of infrastructure symbols introduced by `dl2fol`.
pub const NEQ_ORIGIN: &str = "urn:dolkit:dl2fol#";

fn mapped_signature(
    m: &dyn LogicMapping,
    sig: &Signature,
) -> Result<Signature, MappingError> {
    let mut out = Signature::empty(m.meta().target);
    for s in sig.iter() {
        if let Some(img) = m.map_symbol(s) {
            out.insert(img)?;
        }
    }
    Ok(out)
}

/// Propositional variables become nullary predicates.
#[derive(Debug)]
pub struct PropToFol {
    meta: MappingMeta,
}

impl Default for PropToFol {
    fn default() -> Self {
        PropToFol {
            meta: MappingMeta::new(
                "prop2fol",
                LogicId::Prop,
                LogicId::Fol,
                Direction::Translation,
                Shape::Plain,
                [Accuracy::Sublogic, Accuracy::Embedding, Accuracy::Faithful],
            ),
        }
    }
}

impl PropToFol {
    pub fn formula(f: &PropFormula) -> FolFormula {
        let t = PropToFol::formula;
        match f {
            PropFormula::True => FolFormula::True,
            PropFormula::False => FolFormula::False,
            PropFormula::Atom(s) => FolFormula::Atom { pred: s.with_kind(Kind::Predicate, 0), args: vec![] },
            PropFormula::Not(a) => FolFormula::not(t(a)),
            PropFormula::And(a, b) => FolFormula::and(t(a), t(b)),
            PropFormula::Or(a, b) => FolFormula::or(t(a), t(b)),
            PropFormula::Implies(a, b) => FolFormula::implies(t(a), t(b)),
            PropFormula::Iff(a, b) => FolFormula::iff(t(a), t(b)),
        }
    }
}

impl LogicMapping for PropToFol {
    fn meta(&self) -> &MappingMeta {
        &self.meta
    }

    fn map_symbol(&self, s: &Symbol) -> Option<Symbol> {
        (s.kind == Kind::PropVar).then(|| s.with_kind(Kind::Predicate, 0))
    }

    fn map_signature(&self, sig: &Signature) -> Result<Theory, MappingError> {
        let sig = mapped_signature(self, sig)?;
        Ok(Theory::new("", sig, Vec::new())?)
    }

    fn map_sentence(&self, s: &Sentence) -> Option<Sentence> {
        let Ast::Prop(f) = &s.ast else { return None };
        Some(Sentence { ast: Ast::Fol(PropToFol::formula(f)), label: s.label.clone(), role: s.role })
    }
}

/// Standard translation of SimpleDL into first-order logic. The signature
/// translation adds pairwise `neq` facts between distinct individuals.
#[derive(Debug)]
pub struct DlToFol {
    meta: MappingMeta,
}

impl Default for DlToFol {
    fn default() -> Self {
        DlToFol {
            meta: MappingMeta::new(
                "dl2fol",
                LogicId::SimpleDl,
                LogicId::Fol,
                Direction::Translation,
                Shape::SimpleTheoroidal,
                [Accuracy::Embedding, Accuracy::Faithful],
            ),
        }
    }
}

fn var(depth: usize) -> String {
    match depth {
        0 => "X".to_string(),
        1 => "Y".to_string(),
        2 => "Z".to_string(),
        n => format!("X{n}"),
    }
}

fn pred(s: &Symbol, arity: usize) -> Symbol {
    s.with_kind(Kind::Predicate, arity)
}

fn ind(s: &Symbol) -> FolTerm {
    FolTerm::Const(s.clone())
}

impl DlToFol {
    pub fn neq_symbol() -> Symbol {
        Symbol::new(NEQ_ORIGIN, "neq", Kind::Predicate, 2)
    }

    /// `C` applied to `subject`; bound variables start at `depth`.
    pub fn class(c: &ClassExpr, subject: &FolTerm, depth: usize) -> FolFormula {
        match c {
            ClassExpr::Thing => FolFormula::True,
            ClassExpr::Nothing => FolFormula::False,
            ClassExpr::Named(s) => FolFormula::atom(pred(s, 1), vec![subject.clone()]),
            ClassExpr::Not(a) => FolFormula::not(DlToFol::class(a, subject, depth)),
            ClassExpr::And(a, b) => {
                FolFormula::and(DlToFol::class(a, subject, depth), DlToFol::class(b, subject, depth))
            }
            ClassExpr::Or(a, b) => {
                FolFormula::or(DlToFol::class(a, subject, depth), DlToFol::class(b, subject, depth))
            }
            ClassExpr::Some(p, a) | ClassExpr::Only(p, a) => {
                let y = var(depth);
                let yt = FolTerm::Var(y.clone());
                let edge = FolFormula::atom(pred(p, 2), vec![subject.clone(), yt.clone()]);
                let filler = DlToFol::class(a, &yt, depth + 1);
                if matches!(c, ClassExpr::Some(..)) {
                    FolFormula::Exists(vec![y], Box::new(FolFormula::and(edge, filler)))
                } else {
                    FolFormula::Forall(vec![y], Box::new(FolFormula::implies(edge, filler)))
                }
            }
        }
    }

    pub fn axiom(a: &DlAxiom) -> FolFormula {
        let x = FolTerm::var("X");
        let y = FolTerm::var("Y");
        let z = FolTerm::var("Z");
        let named = |s: &Symbol, t: &FolTerm| FolFormula::atom(pred(s, 1), vec![t.clone()]);
        let rel = |p: &Symbol, a: &FolTerm, b: &FolTerm| FolFormula::atom(pred(p, 2), vec![a.clone(), b.clone()]);
        match a {
            DlAxiom::SubClassOf(c, d) => FolFormula::forall(
                &["X"],
                FolFormula::implies(named(c, &x), DlToFol::class(d, &x, 1)),
            ),
            DlAxiom::EquivalentClasses(c, d) => {
                FolFormula::forall(&["X"], FolFormula::iff(named(c, &x), DlToFol::class(d, &x, 1)))
            }
            DlAxiom::DisjointClasses(c, d) => FolFormula::forall(
                &["X"],
                FolFormula::implies(named(c, &x), FolFormula::not(DlToFol::class(d, &x, 1))),
            ),
            DlAxiom::ClassAssertion(c, i) => DlToFol::class(c, &ind(i), 0),
            DlAxiom::PropertyAssertion(p, i, j) => rel(p, &ind(i), &ind(j)),
            DlAxiom::SubPropertyOf(p, q) => {
                FolFormula::forall(&["X", "Y"], FolFormula::implies(rel(p, &x, &y), rel(q, &x, &y)))
            }
            DlAxiom::InverseProperties(p, q) => {
                FolFormula::forall(&["X", "Y"], FolFormula::iff(rel(p, &x, &y), rel(q, &y, &x)))
            }
            DlAxiom::TransitiveProperty(p) => FolFormula::forall(
                &["X", "Y", "Z"],
                FolFormula::implies(FolFormula::and(rel(p, &x, &y), rel(p, &y, &z)), rel(p, &x, &z)),
            ),
        }
    }
}

impl LogicMapping for DlToFol {
    fn meta(&self) -> &MappingMeta {
        &self.meta
    }

    fn map_symbol(&self, s: &Symbol) -> Option<Symbol> {
        Some(match s.kind {
            Kind::Class => pred(s, 1),
            Kind::ObjectProperty | Kind::DataProperty => pred(s, 2),
            Kind::Individual => s.clone(),
            _ => return None,
        })
    }

    fn map_signature(&self, sig: &Signature) -> Result<Theory, MappingError> {
        let mut out = mapped_signature(self, sig)?;
        let individuals: Vec<&Symbol> = sig.iter().filter(|s| s.kind == Kind::Individual).collect();
        let mut sentences = Vec::new();
        if individuals.len() >= 2 {
            let neq = DlToFol::neq_symbol();
            out.insert(neq.clone())?;
            for a in &individuals {
                for b in &individuals {
                    if a != b {
                        let f = FolFormula::atom(neq.clone(), vec![ind(a), ind(b)]);
                        sentences.push(Sentence::axiom(f).labelled(format!("neq_{}", sentences.len() + 1)));
                    }
                }
            }
        }
        Ok(Theory::new("", out, sentences)?)
    }

    fn map_sentence(&self, s: &Sentence) -> Option<Sentence> {
        let Ast::Dl(a) = &s.ast else { return None };
        Some(Sentence { ast: Ast::Fol(DlToFol::axiom(a)), label: s.label.clone(), role: s.role })
    }
}

/// Forgets predicates of positive arity; nullary predicates become
/// propositional variables.
#[derive(Debug)]
pub struct FolToProp {
    meta: MappingMeta,
}

impl Default for FolToProp {
    fn default() -> Self {
        FolToProp {
            meta: MappingMeta::new(
                "fol2prop",
                LogicId::Fol,
                LogicId::Prop,
                Direction::Projection,
                Shape::Plain,
                [],
            ),
        }
    }
}

impl FolToProp {
    /// Quantifiers over bodies without variables are dropped; anything
    /// mentioning a predicate of positive arity or equality has no image.
    pub fn formula(f: &FolFormula) -> Option<PropFormula> {
        let t = FolToProp::formula;
        Some(match f {
            FolFormula::True => PropFormula::True,
            FolFormula::False => PropFormula::False,
            FolFormula::Atom { pred, args } if args.is_empty() => {
                PropFormula::Atom(pred.with_kind(Kind::PropVar, 0))
            }
            FolFormula::Atom { .. } | FolFormula::Equal(..) => return None,
            FolFormula::Not(a) => PropFormula::not(t(a)?),
            FolFormula::And(a, b) => PropFormula::and(t(a)?, t(b)?),
            FolFormula::Or(a, b) => PropFormula::or(t(a)?, t(b)?),
            FolFormula::Implies(a, b) => PropFormula::implies(t(a)?, t(b)?),
            FolFormula::Iff(a, b) => PropFormula::iff(t(a)?, t(b)?),
            FolFormula::Forall(_, a) | FolFormula::Exists(_, a) => t(a)?,
        })
    }
}

impl LogicMapping for FolToProp {
    fn meta(&self) -> &MappingMeta {
        &self.meta
    }

    fn map_symbol(&self, s: &Symbol) -> Option<Symbol> {
        (s.kind == Kind::Predicate && s.arity == 0).then(|| s.with_kind(Kind::PropVar, 0))
    }

    fn map_signature(&self, sig: &Signature) -> Result<Theory, MappingError> {
        let sig = mapped_signature(self, sig)?;
        Ok(Theory::new("", sig, Vec::new())?)
    }

    fn map_sentence(&self, s: &Sentence) -> Option<Sentence> {
        let Ast::Fol(f) = &s.ast else { return None };
        let img = FolToProp::formula(f)?;
        Some(Sentence { ast: Ast::Prop(img), label: s.label.clone(), role: s.role })
    }
}
