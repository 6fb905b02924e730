//! Logic mappings and the registry of logics, languages, serializations and
//! mappings.
//!
//! A mapping sends signatures to theories (so that it may add infrastructure
//! axioms) and sentences to sentences. Projections may leave sentences
//! untranslated; [`translate_theory`] reports those alongside the result.

mod concrete;
mod registry;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{fresh_label, KernelError, LogicId, Sentence, Signature, Symbol, Theory};

pub use concrete::{DlToFol, FolToProp, PropToFol, NEQ_ORIGIN};
pub use registry::{Category, Registry, RegistryEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Translation,
    Projection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Shape {
    Plain,
    SimpleTheoroidal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Accuracy {
    Sublogic,
    Embedding,
    Faithful,
    Exact,
    WeaklyExact,
}

impl Accuracy {
    pub fn as_str(self) -> &'static str {
        match self {
            Accuracy::Sublogic => "sublogic",
            Accuracy::Embedding => "embedding",
            Accuracy::Faithful => "faithful",
            Accuracy::Exact => "exact",
            Accuracy::WeaklyExact => "weakly-exact",
        }
    }
}

/// Classification metadata of a logic mapping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MappingMeta {
    pub id: String,
    pub source: LogicId,
    pub target: LogicId,
    pub direction: Direction,
    pub shape: Shape,
    pub accuracy: BTreeSet<Accuracy>,
}

impl MappingMeta {
    /// Builds metadata, closing `accuracy` upwards along
    /// sublogic ⇒ embedding ⇒ faithful.
    pub fn new(
        id: impl Into<String>,
        source: LogicId,
        target: LogicId,
        direction: Direction,
        shape: Shape,
        accuracy: impl IntoIterator<Item = Accuracy>,
    ) -> Self {
        let mut accuracy: BTreeSet<Accuracy> = accuracy.into_iter().collect();
        if accuracy.contains(&Accuracy::Sublogic) {
            accuracy.insert(Accuracy::Embedding);
        }
        if accuracy.contains(&Accuracy::Embedding) {
            accuracy.insert(Accuracy::Faithful);
        }
        MappingMeta { id: id.into(), source, target, direction, shape, accuracy }
    }

    /// Metadata of `second ∘ first`.
    pub fn compose(first: &MappingMeta, second: &MappingMeta) -> MappingMeta {
        let direction = if first.direction == Direction::Projection || second.direction == Direction::Projection {
            Direction::Projection
        } else {
            Direction::Translation
        };
        let shape = if first.shape == Shape::SimpleTheoroidal || second.shape == Shape::SimpleTheoroidal {
            Shape::SimpleTheoroidal
        } else {
            Shape::Plain
        };
        MappingMeta {
            id: format!("{};{}", first.id, second.id),
            source: first.source,
            target: second.target,
            direction,
            shape,
            accuracy: first.accuracy.intersection(&second.accuracy).copied().collect(),
        }
    }

    pub fn satisfies(&self, required: Option<Accuracy>) -> bool {
        required.is_none_or(|a| self.accuracy.contains(&a))
    }

    /// `translation,plain,embedding,faithful`-style flag list.
    pub fn flags(&self) -> String {
        let mut flags = vec![
            match self.direction {
                Direction::Translation => "translation",
                Direction::Projection => "projection",
            },
            match self.shape {
                Shape::Plain => "plain",
                Shape::SimpleTheoroidal => "simple-theoroidal",
            },
        ];
        flags.extend(self.accuracy.iter().map(|a| a.as_str()));
        flags.join(",")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error("mapping {mapping} expects logic {expected}, got {found}")]
    LogicMismatch { mapping: String, expected: LogicId, found: LogicId },
    #[error("no path of mappings from {from} to {to}")]
    NoPath { from: LogicId, to: LogicId },
    #[error("logics {0} and {1} have no common target")]
    NoCommonTarget(LogicId, LogicId),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A mapping between two logics.
pub trait LogicMapping: Send + Sync + fmt::Debug {
    fn meta(&self) -> &MappingMeta;

    /// Image of a single symbol, `None` when the mapping forgets it.
    fn map_symbol(&self, s: &Symbol) -> Option<Symbol>;

    /// Translated signature plus infrastructure axioms (none for plain mappings).
    fn map_signature(&self, sig: &Signature) -> Result<Theory, MappingError>;

    /// Image of a sentence; `None` when a projection cannot express it.
    fn map_sentence(&self, s: &Sentence) -> Option<Sentence>;

    fn id(&self) -> &str {
        &self.meta().id
    }
}

/// Result of translating a theory.
#[derive(Clone, Debug, PartialEq)]
pub struct Translated {
    pub theory: Theory,
    /// Source sentences that had no image.
    pub dropped: Vec<Sentence>,
}

pub fn translate_theory(m: &dyn LogicMapping, t: &Theory) -> Result<Translated, MappingError> {
    let meta = m.meta();
    if t.logic() != meta.source {
        return Err(MappingError::LogicMismatch {
            mapping: meta.id.clone(),
            expected: meta.source,
            found: t.logic(),
        });
    }
    let infra = m.map_signature(t.signature())?;
    let (_, mut signature, infra_sentences) = infra.into_parts();
    let mut taken: HashSet<String> = t.sentences().iter().filter_map(|s| s.label.clone()).collect();
    let mut sentences = Vec::with_capacity(infra_sentences.len() + t.sentences().len());
    for mut s in infra_sentences {
        if let Some(l) = &s.label {
            let l = fresh_label(l, &taken);
            taken.insert(l.clone());
            s.label = Some(l);
        }
        sentences.push(s);
    }
    let mut dropped = Vec::new();
    for s in t.sentences() {
        match m.map_sentence(s) {
            Some(img) => {
                for sym in img.ast.symbols() {
                    signature.insert(sym)?;
                }
                sentences.push(img);
            }
            None => dropped.push(s.clone()),
        }
    }
    Ok(Translated { theory: Theory::new(t.name.clone(), signature, sentences)?, dropped })
}

/// Translates along a whole path, accumulating dropped sentences.
pub fn translate_along(path: &[Arc<dyn LogicMapping>], t: &Theory) -> Result<Translated, MappingError> {
    let mut current = Translated { theory: t.clone(), dropped: Vec::new() };
    for m in path {
        let next = translate_theory(m.as_ref(), &current.theory)?;
        current.theory = next.theory;
        current.dropped.extend(next.dropped);
    }
    Ok(current)
}

/// Translates one sentence along a path.
pub fn translate_sentence_along(path: &[Arc<dyn LogicMapping>], s: &Sentence) -> Option<Sentence> {
    path.iter().try_fold(s.clone(), |s, m| m.map_sentence(&s))
}
