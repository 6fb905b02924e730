//! The DOL document subset: prefix blocks, logic selection, ontology
//! definitions and alignments, plus resolution of ontology references
//! through a repository configuration.

mod lexer;
mod parser;
mod printer;
mod repo;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::LogicId;
use crate::text::{ParseError, Pos};

pub use parser::parse_document;
pub use printer::{print_document, print_expr};
pub use repo::{resolve_reference, RepoConfig, RepoEntry, ResolveError, Resolved, Source};

/// A source position that takes no part in structural equality, so that a
/// reprinted document compares equal to the original.
#[derive(Clone, Copy, Debug, Default, Serialize)]
#[serde(transparent)]
pub struct At(pub Pos);

impl PartialEq for At {
    fn eq(&self, _: &At) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DolDocument {
    pub prefixes: BTreeMap<String, String>,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "item", rename_all = "lowercase")]
pub enum Item {
    Logic(LogicDecl),
    Ontology(OntologyDef),
    Alignment(AlignmentDef),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogicDecl {
    /// The name as written, e.g. `OWL`.
    pub name: String,
    pub logic: LogicId,
    pub at: At,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OntologyDef {
    pub name: String,
    pub expr: OntologyExpr,
    pub at: At,
}

/// An ontology reference: a full IRI (prefixed names are expanded at parse
/// time) or a local name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Reference {
    Iri(String),
    Name(String),
}

impl Reference {
    pub fn as_str(&self) -> &str {
        match self {
            Reference::Iri(s) | Reference::Name(s) => s,
        }
    }
}

/// A basic fragment `{ ... }`, kept verbatim for the logic's own parser.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Basic {
    pub logic: LogicId,
    pub text: String,
    /// Position of the first character after `{`.
    pub at: At,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum OntologyExpr {
    Ref { reference: Reference, at: At },
    Basic(Basic),
    And { parts: Vec<OntologyExpr> },
    Then { base: Box<OntologyExpr>, extension: Basic },
    Combine { alignments: Vec<String>, at: At },
}

impl OntologyExpr {
    pub fn reference(r: Reference) -> Self {
        OntologyExpr::Ref { reference: r, at: At::default() }
    }

    pub fn name(n: &str) -> Self {
        OntologyExpr::reference(Reference::Name(n.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// `=`
    Equivalent,
    /// `<`
    LeftSubsumedByRight,
    /// `>`
    RightSubsumedByLeft,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Equivalent => "=",
            Relation::LeftSubsumedByRight => "<",
            Relation::RightSubsumedByLeft => ">",
        }
    }
}

/// A correspondence between a name of the left and a name of the right
/// ontology. Names are kept as written (`endurant`, `f1:Chris`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Correspondence {
    pub left: String,
    pub right: String,
    pub relation: Relation,
    pub at: At,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A name in a correspondence together with the side it belongs to.
pub type Endpoint<'a> = (Side, &'a str);

impl Correspondence {
    /// The subsumption as `(sub, sup)` with the side each name belongs to,
    /// or `None` for an equivalence.
    pub fn subsumption(&self) -> Option<(Endpoint<'_>, Endpoint<'_>)> {
        match self.relation {
            Relation::Equivalent => None,
            Relation::LeftSubsumedByRight => Some(((Side::Left, &self.left), (Side::Right, &self.right))),
            Relation::RightSubsumedByLeft => Some(((Side::Right, &self.right), (Side::Left, &self.left))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignmentDef {
    pub name: String,
    pub left: OntologyExpr,
    pub right: OntologyExpr,
    pub correspondences: Vec<Correspondence>,
    pub at: At,
}

impl DolDocument {
    pub fn ontologies(&self) -> impl Iterator<Item = &OntologyDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Ontology(o) => Some(o),
            _ => None,
        })
    }

    pub fn alignments(&self) -> impl Iterator<Item = &AlignmentDef> {
        self.items.iter().filter_map(|i| match i {
            Item::Alignment(a) => Some(a),
            _ => None,
        })
    }

    pub fn ontology(&self, name: &str) -> Option<&OntologyDef> {
        self.ontologies().find(|o| o.name == name)
    }

    pub fn alignment(&self, name: &str) -> Option<&AlignmentDef> {
        self.alignments().find(|a| a.name == name)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DolError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate name `{name}` at {pos}")]
    DuplicateName { name: String, pos: Pos },
    #[error("unknown logic `{name}` at {pos}")]
    UnknownLogic { name: String, pos: Pos },
    #[error("no logic selected before the basic fragment at {pos}")]
    NoLogic { pos: Pos },
    #[error("`combine` at {pos} names undeclared alignment `{name}`")]
    UndeclaredAlignment { name: String, pos: Pos },
}

impl DolError {
    pub fn pos(&self) -> Pos {
        match self {
            DolError::Parse(e) => e.pos(),
            DolError::DuplicateName { pos, .. }
            | DolError::UnknownLogic { pos, .. }
            | DolError::NoLogic { pos }
            | DolError::UndeclaredAlignment { pos, .. } => *pos,
        }
    }
}
