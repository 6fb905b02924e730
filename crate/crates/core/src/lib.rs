//! Logical core for distributed heterogeneous ontologies.
//!
//! - [`kernel`]: signatures, symbols, morphisms, sentences and theories.
//! - [`logics`]: propositional, first-order and description logic syntaxes.
//! - [`mappings`]: logic translations, projections and the logic registry.
//! - [`dolparse`]: the DOL document subset and repository resolution.
//! - [`structure`]: flattening, alignment diagrams, colimits, obligations.
//! - [`select`]: manual and SInE axiom selection.
//! - [`prove`]: internal and external provers and SZS statuses.

pub mod dolparse;
pub mod exec;
pub mod kernel;
pub mod logics;
pub mod mappings;
pub mod prove;
pub mod select;
pub mod structure;
pub mod text;

pub use kernel::{Ast, Kind, LogicId, Role, Sentence, Signature, SignatureMorphism, Symbol, Theory};
pub use text::{NameContext, ParseError, Pos};
