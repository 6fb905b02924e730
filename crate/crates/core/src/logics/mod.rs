//! The concrete logics: propositional logic, function-free first-order logic
//! (read and written as TPTP FOF) and the SimpleDL description logic.

pub mod dl;
pub mod fol;
pub mod prop;
pub mod tptp;

use std::collections::BTreeSet;

use crate::kernel::{Ast, LogicId, Sentence, Symbol, Theory};
use crate::text::{NameContext, ParseError};

pub use dl::{parse_dl_frame, ClassExpr, DlAxiom};
pub use fol::{FolFormula, FolTerm};
pub use prop::{parse_prop, PropFormula};
pub use tptp::{print_tptp, TptpNames};

/// Parses a text in `logic`'s concrete syntax, returning the declared
/// symbols and the sentences in order.
pub fn parse_text(
    logic: LogicId,
    text: &str,
    ctx: &NameContext,
) -> Result<(BTreeSet<Symbol>, Vec<Sentence>), ParseError> {
    match logic {
        LogicId::Prop => Ok((BTreeSet::new(), prop::parse_prop_document(text, ctx)?)),
        LogicId::Fol => {
            let sentences = tptp::TptpReader::new(&ctx.default_origin).parse_problem(text)?;
            Ok((BTreeSet::new(), sentences))
        }
        LogicId::SimpleDl => dl::parse_dl_sentences(text, ctx),
    }
}

/// Prints a single sentence body in its logic's syntax.
pub fn print_sentence(s: &Sentence, ctx: &NameContext) -> String {
    match &s.ast {
        Ast::Prop(f) => prop::print_prop(f, &ctx.clone().covering(s.ast.symbols().iter())),
        Ast::Dl(a) => dl::print_dl(a, &ctx.clone().covering(s.ast.symbols().iter())),
        Ast::Fol(f) => {
            let names = TptpNames::for_sentences([s]);
            let mut out = String::new();
            tptp::write_formula(f, &names, &mut out);
            out
        }
    }
}

/// Prints a whole theory in its logic's syntax.
pub fn print_theory(t: &Theory, ctx: &NameContext) -> String {
    match t.logic() {
        LogicId::Prop => {
            let ctx = ctx.clone().covering(t.signature().iter());
            prop::print_prop_document(t.sentences(), &ctx)
        }
        LogicId::Fol => {
            let names = TptpNames::for_symbols(t.signature().iter());
            tptp::print_problem(t.sentences(), &names)
        }
        LogicId::SimpleDl => {
            let axioms: Vec<DlAxiom> = t
                .sentences()
                .iter()
                .filter_map(|s| match &s.ast {
                    Ast::Dl(a) => Some(a.clone()),
                    _ => None,
                })
                .collect();
            dl::print_dl_document(t.signature().symbols(), &axioms, ctx)
        }
    }
}
