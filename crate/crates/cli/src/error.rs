use std::path::Path;

use dolkit::dolparse::{DolError, ResolveError};
use dolkit::prove::ProveError;
use dolkit::structure::StructureError;
use dolkit::Pos;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Dol(#[from] DolError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Prove(#[from] ProveError),
    #[error("no proof obligation or definition named `{0}`")]
    UnknownTheorem(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl From<dolkit::ParseError> for CliError {
    fn from(e: dolkit::ParseError) -> Self {
        CliError::Dol(DolError::Parse(e))
    }
}

fn dol_kind(e: &DolError) -> &'static str {
    match e {
        DolError::Parse(dolkit::ParseError::UndeclaredPrefix { .. }) => "UndeclaredPrefix",
        DolError::Parse(_) => "SyntaxError",
        DolError::DuplicateName { .. } => "DuplicateName",
        DolError::UnknownLogic { .. } => "UnknownLogic",
        DolError::NoLogic { .. } => "NoLogic",
        DolError::UndeclaredAlignment { .. } => "UndeclaredAlignment",
    }
}

fn resolve_kind(e: &ResolveError) -> &'static str {
    match e {
        ResolveError::UnresolvedIri(_) => "UnresolvedIri",
        ResolveError::AmbiguousPrefix(_) => "AmbiguousPrefix",
        ResolveError::Io { .. } => "IoError",
        ResolveError::NestedDocument(_) => "NestedDocument",
        ResolveError::UnknownFormat(_) => "UnknownFormat",
        ResolveError::Config(_) => "RepoConfig",
    }
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } | CliError::Output(_) => "IoError",
            CliError::Dol(e) | CliError::Structure(StructureError::Dol(e)) => dol_kind(e),
            CliError::Resolve(e) | CliError::Structure(StructureError::Resolve { error: e, .. }) => resolve_kind(e),
            CliError::Structure(StructureError::Parse { .. }) => "SyntaxError",
            CliError::Structure(StructureError::Mapping(_)) => "MappingError",
            CliError::Structure(StructureError::Kernel(_)) => "KernelError",
            CliError::Structure(StructureError::Cycle(_)) => "CyclicDefinition",
            CliError::Structure(StructureError::UnknownOntology(_)) => "UnknownOntology",
            CliError::Structure(StructureError::UnresolvedCorrespondence { .. }) => "UnresolvedCorrespondence",
            CliError::Structure(StructureError::AmbiguousCorrespondence { .. }) => "AmbiguousCorrespondence",
            CliError::Structure(StructureError::KindMismatch { .. }) => "KindMismatch",
            CliError::Structure(StructureError::HeterogeneousAlignment { .. }) => "HeterogeneousAlignment",
            CliError::Structure(StructureError::EmptyCombine) => "EmptyCombine",
            CliError::Structure(StructureError::NotACombine(_)) => "NotACombine",
            CliError::Structure(StructureError::UnsupportedSubsumption(_)) => "UnsupportedSubsumption",
            CliError::Prove(_) => "ProverConfig",
            CliError::UnknownTheorem(_) => "UnknownTheorem",
        }
    }

    /// Source position, when the error points into a document. For errors
    /// inside a referenced source the position is relative to that source.
    pub fn pos(&self) -> Option<Pos> {
        match self {
            CliError::Dol(e) | CliError::Structure(StructureError::Dol(e)) => Some(e.pos()),
            CliError::Structure(StructureError::Parse { error, .. }) => Some(error.pos()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pos = self.pos();
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "line": pos.map(|p| p.line),
                "column": pos.map(|p| p.column),
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_positions() {
        let e: CliError = dolkit::dolparse::parse_document("ontology X = combine A,").unwrap_err().into();
        let v = e.to_json();
        assert_eq!(v["error"]["kind"], "SyntaxError");
        assert!(v["error"]["line"].as_u64().is_some());
    }

    #[test]
    fn structure_errors_are_unwrapped() {
        let e = CliError::Structure(StructureError::Resolve {
            reference: "<x:y>".into(),
            error: ResolveError::UnresolvedIri("x:y".into()),
        });
        assert_eq!(e.kind(), "UnresolvedIri");
        assert!(e.to_json()["error"]["line"].is_null());
        assert_eq!(CliError::Structure(StructureError::NotACombine("A".into())).kind(), "NotACombine");
    }
}
