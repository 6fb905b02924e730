//! Logic-independent framework: kinded symbols, signatures, signature
//! morphisms, sentences and theories.
//!
//! Every concrete logic in [`crate::logics`] supplies a sentence syntax that
//! implements [`Syntax`]; the [`Ast`] enum dispatches to it. Symbol extraction
//! and sentence translation along morphisms are defined once here in terms of
//! that trait.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logics::dl::DlAxiom;
use crate::logics::fol::FolFormula;
use crate::logics::prop::PropFormula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Class,
    Individual,
    ObjectProperty,
    DataProperty,
    Predicate,
    Function,
    PropVar,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Class => "Class",
            Kind::Individual => "Individual",
            Kind::ObjectProperty => "ObjectProperty",
            Kind::DataProperty => "DataProperty",
            Kind::Predicate => "Predicate",
            Kind::Function => "Function",
            Kind::PropVar => "PropVar",
        }
    }

    /// Whether symbols of this kind carry a meaningful arity.
    pub fn has_arity(self) -> bool {
        matches!(self, Kind::Predicate | Kind::Function)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The logics known to the framework.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LogicId {
    #[serde(rename = "FOL")]
    Fol,
    #[serde(rename = "Prop")]
    Prop,
    #[serde(rename = "SimpleDL")]
    SimpleDl,
}

impl LogicId {
    pub const ALL: [LogicId; 3] = [LogicId::Fol, LogicId::Prop, LogicId::SimpleDl];

    pub fn as_str(self) -> &'static str {
        match self {
            LogicId::Fol => "FOL",
            LogicId::Prop => "Prop",
            LogicId::SimpleDl => "SimpleDL",
        }
    }

    pub fn admitted_kinds(self) -> &'static [Kind] {
        match self {
            LogicId::Fol => &[Kind::Predicate, Kind::Individual],
            LogicId::Prop => &[Kind::PropVar],
            LogicId::SimpleDl => &[
                Kind::Class,
                Kind::Individual,
                Kind::ObjectProperty,
                Kind::DataProperty,
            ],
        }
    }

    pub fn admits(self, kind: Kind) -> bool {
        self.admitted_kinds().contains(&kind)
    }

    /// Parses a logic name as written in documents and configuration files.
    /// `OWL` names the description-logic fragment.
    pub fn from_name(name: &str) -> Option<LogicId> {
        match name {
            "FOL" | "fol" | "TPTP" | "FOF" => Some(LogicId::Fol),
            "Prop" | "prop" | "Propositional" | "PL" => Some(LogicId::Prop),
            "SimpleDL" | "OWL" | "OWL2" | "owl" => Some(LogicId::SimpleDl),
            _ => None,
        }
    }
}

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A non-logical symbol. Two symbols are the same iff origin, local name,
/// kind and arity all agree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol {
    /// Prefix of the defining ontology (an IRI prefix or document name).
    pub origin: String,
    pub name: String,
    pub kind: Kind,
    pub arity: usize,
}

impl Symbol {
    pub fn new(origin: impl Into<String>, name: impl Into<String>, kind: Kind, arity: usize) -> Self {
        Symbol { origin: origin.into(), name: name.into(), kind, arity }
    }

    pub fn qualified(&self) -> String {
        format!("{}{}", self.origin, self.name)
    }

    pub fn with_kind(&self, kind: Kind, arity: usize) -> Symbol {
        Symbol { origin: self.origin.clone(), name: self.name.clone(), kind, arity }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.has_arity() {
            write!(f, "{}:{}/{}", self.name, self.kind, self.arity)
        } else {
            write!(f, "{}:{}", self.name, self.kind)
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("symbol with empty name")]
    EmptyName,
    #[error("kind {kind} is not admitted by logic {logic} (symbol {symbol})")]
    KindNotAdmitted { logic: LogicId, kind: Kind, symbol: String },
    #[error("symbol {symbol} of kind {kind} must have arity 0, found {arity}")]
    BadArity { symbol: String, kind: Kind, arity: usize },
    #[error("name {name} used both as {first} and as {second}")]
    KindClash { name: String, first: String, second: String },
    #[error("logic mismatch: expected {expected}, found {found}")]
    LogicMismatch { expected: LogicId, found: LogicId },
    #[error("morphism endpoints do not match")]
    MismatchedEndpoints,
    #[error("symbol {0} has no image under the morphism")]
    SymbolNotInSource(Symbol),
    #[error("morphism image {image} of {symbol} is not in the target signature")]
    ImageNotInTarget { symbol: Symbol, image: Symbol },
    #[error("morphism maps {symbol} to {image}, which changes kind or arity")]
    NotKindPreserving { symbol: Symbol, image: Symbol },
    #[error("sentence symbol {symbol} is not declared in the signature of theory {theory}")]
    UndeclaredSymbol { theory: String, symbol: Symbol },
    #[error("duplicate sentence label {label} in theory {theory}")]
    DuplicateLabel { theory: String, label: String },
}

/// A logic-tagged finite set of symbols. Each qualified name carries exactly
/// one kind and arity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    logic: LogicId,
    symbols: BTreeSet<Symbol>,
}

impl Signature {
    pub fn empty(logic: LogicId) -> Self {
        Signature { logic, symbols: BTreeSet::new() }
    }

    pub fn new(logic: LogicId, symbols: impl IntoIterator<Item = Symbol>) -> Result<Self, KernelError> {
        let mut sig = Signature::empty(logic);
        for s in symbols {
            sig.insert(s)?;
        }
        Ok(sig)
    }

    /// Adds a symbol, checking admission and name/kind consistency.
    pub fn insert(&mut self, symbol: Symbol) -> Result<bool, KernelError> {
        if symbol.name.is_empty() {
            return Err(KernelError::EmptyName);
        }
        if !self.logic.admits(symbol.kind) {
            return Err(KernelError::KindNotAdmitted {
                logic: self.logic,
                kind: symbol.kind,
                symbol: symbol.qualified(),
            });
        }
        if !symbol.kind.has_arity() && symbol.arity != 0 {
            return Err(KernelError::BadArity {
                symbol: symbol.qualified(),
                kind: symbol.kind,
                arity: symbol.arity,
            });
        }
        if let Some(existing) = self.lookup_qualified(&symbol.origin, &symbol.name) {
            if existing != &symbol {
                return Err(KernelError::KindClash {
                    name: symbol.qualified(),
                    first: describe(existing),
                    second: describe(&symbol),
                });
            }
            return Ok(false);
        }
        Ok(self.symbols.insert(symbol))
    }

    pub fn logic(&self) -> LogicId {
        self.logic
    }

    pub fn symbols(&self) -> &BTreeSet<Symbol> {
        &self.symbols
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.symbols.contains(symbol)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    pub fn lookup_qualified(&self, origin: &str, name: &str) -> Option<&Symbol> {
        // Symbols are ordered by origin then name, so the candidates are contiguous.
        self.symbols
            .range(Symbol::new(origin, name, Kind::Class, 0)..)
            .take_while(|s| s.origin == origin && s.name == name)
            .next()
    }

    /// All symbols with the given local name, whatever their origin.
    pub fn lookup_local<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Symbol> + 'a {
        self.symbols.iter().filter(move |s| s.name == name)
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.logic == other.logic && self.symbols.is_subset(&other.symbols)
    }
}

fn describe(s: &Symbol) -> String {
    if s.kind.has_arity() {
        format!("{}/{}", s.kind, s.arity)
    } else {
        s.kind.to_string()
    }
}

/// Union of two signatures of one logic; symbols agreeing on name, kind and
/// arity are identified.
pub fn signature_union(a: &Signature, b: &Signature) -> Result<Signature, KernelError> {
    if a.logic != b.logic {
        return Err(KernelError::LogicMismatch { expected: a.logic, found: b.logic });
    }
    let mut out = a.clone();
    for s in &b.symbols {
        out.insert(s.clone())?;
    }
    Ok(out)
}

/// A kind- and arity-preserving total map between two signatures of one logic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignatureMorphism {
    source: Signature,
    target: Signature,
    map: BTreeMap<Symbol, Symbol>,
}

impl SignatureMorphism {
    pub fn new(
        source: Signature,
        target: Signature,
        map: BTreeMap<Symbol, Symbol>,
    ) -> Result<Self, KernelError> {
        if source.logic != target.logic {
            return Err(KernelError::LogicMismatch { expected: source.logic, found: target.logic });
        }
        for s in source.iter() {
            let image = map.get(s).ok_or_else(|| KernelError::SymbolNotInSource(s.clone()))?;
            if image.kind != s.kind || image.arity != s.arity {
                return Err(KernelError::NotKindPreserving { symbol: s.clone(), image: image.clone() });
            }
            if !target.contains(image) {
                return Err(KernelError::ImageNotInTarget { symbol: s.clone(), image: image.clone() });
            }
        }
        // Entries outside the source are dropped so that equality is structural.
        let map = map.into_iter().filter(|(k, _)| source.contains(k)).collect();
        Ok(SignatureMorphism { source, target, map })
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn apply(&self, s: &Symbol) -> Option<&Symbol> {
        self.map.get(s)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.map.iter()
    }
}

pub fn identity(sig: &Signature) -> SignatureMorphism {
    SignatureMorphism {
        source: sig.clone(),
        target: sig.clone(),
        map: sig.iter().map(|s| (s.clone(), s.clone())).collect(),
    }
}

/// `second ∘ first`.
pub fn compose(
    first: &SignatureMorphism,
    second: &SignatureMorphism,
) -> Result<SignatureMorphism, KernelError> {
    if first.target != second.source {
        return Err(KernelError::MismatchedEndpoints);
    }
    let map = first
        .map
        .iter()
        .map(|(s, mid)| (s.clone(), second.map[mid].clone()))
        .collect();
    Ok(SignatureMorphism { source: first.source.clone(), target: second.target.clone(), map })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Axiom,
    Conjecture,
}

/// Operations every logic's sentence syntax provides to the framework.
pub trait Syntax: Sized + Clone + PartialEq {
    const LOGIC: LogicId;

    fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol));

    /// Replaces every symbol by its image. Fails with the first symbol for
    /// which `f` has no image.
    fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Self, Symbol>;
}

/// Logic-specific abstract syntax of a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "logic", content = "ast")]
pub enum Ast {
    Prop(PropFormula),
    Fol(FolFormula),
    Dl(DlAxiom),
}

impl Ast {
    pub fn logic(&self) -> LogicId {
        match self {
            Ast::Prop(_) => LogicId::Prop,
            Ast::Fol(_) => LogicId::Fol,
            Ast::Dl(_) => LogicId::SimpleDl,
        }
    }

    pub fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol)) {
        match self {
            Ast::Prop(a) => a.visit_symbols(f),
            Ast::Fol(a) => a.visit_symbols(f),
            Ast::Dl(a) => a.visit_symbols(f),
        }
    }

    pub fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Ast, Symbol> {
        Ok(match self {
            Ast::Prop(a) => Ast::Prop(a.rename(f)?),
            Ast::Fol(a) => Ast::Fol(a.rename(f)?),
            Ast::Dl(a) => Ast::Dl(a.rename(f)?),
        })
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.visit_symbols(&mut |s| {
            out.insert(s.clone());
        });
        out
    }
}

impl From<PropFormula> for Ast {
    fn from(f: PropFormula) -> Self {
        Ast::Prop(f)
    }
}

impl From<FolFormula> for Ast {
    fn from(f: FolFormula) -> Self {
        Ast::Fol(f)
    }
}

impl From<DlAxiom> for Ast {
    fn from(a: DlAxiom) -> Self {
        Ast::Dl(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sentence {
    pub ast: Ast,
    pub label: Option<String>,
    pub role: Role,
}

impl Sentence {
    pub fn axiom(ast: impl Into<Ast>) -> Self {
        Sentence { ast: ast.into(), label: None, role: Role::Axiom }
    }

    pub fn conjecture(ast: impl Into<Ast>) -> Self {
        Sentence { ast: ast.into(), label: None, role: Role::Conjecture }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_role(mut self, role: Role) -> Self {
        self.role = role;
        self
    }

    pub fn logic(&self) -> LogicId {
        self.ast.logic()
    }

    pub fn label_or<'a>(&'a self, fallback: &'a str) -> &'a str {
        self.label.as_deref().unwrap_or(fallback)
    }
}

pub fn symbols_of(s: &Sentence) -> BTreeSet<Symbol> {
    s.ast.symbols()
}

pub fn translate_sentence(m: &SignatureMorphism, s: &Sentence) -> Result<Sentence, KernelError> {
    if s.logic() != m.source.logic {
        return Err(KernelError::LogicMismatch { expected: m.source.logic, found: s.logic() });
    }
    let ast = s
        .ast
        .rename(&mut |sym| m.map.get(sym).cloned())
        .map_err(KernelError::SymbolNotInSource)?;
    Ok(Sentence { ast, label: s.label.clone(), role: s.role })
}

/// An ontology: a signature together with an ordered list of sentences over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theory {
    pub name: String,
    signature: Signature,
    sentences: Vec<Sentence>,
}

impl Theory {
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        sentences: Vec<Sentence>,
    ) -> Result<Self, KernelError> {
        let theory = Theory { name: name.into(), signature, sentences };
        theory.validate()?;
        Ok(theory)
    }

    pub fn empty(name: impl Into<String>, logic: LogicId) -> Self {
        Theory { name: name.into(), signature: Signature::empty(logic), sentences: Vec::new() }
    }

    /// Builds a theory whose signature is `declared` plus every symbol used
    /// by the sentences.
    pub fn from_sentences(
        name: impl Into<String>,
        mut declared: Signature,
        sentences: Vec<Sentence>,
    ) -> Result<Self, KernelError> {
        for s in &sentences {
            if s.logic() != declared.logic {
                return Err(KernelError::LogicMismatch { expected: declared.logic, found: s.logic() });
            }
            for sym in symbols_of(s) {
                declared.insert(sym)?;
            }
        }
        Theory::new(name, declared, sentences)
    }

    pub fn validate(&self) -> Result<(), KernelError> {
        let mut labels = HashSet::new();
        for s in &self.sentences {
            if s.logic() != self.signature.logic {
                return Err(KernelError::LogicMismatch {
                    expected: self.signature.logic,
                    found: s.logic(),
                });
            }
            for sym in symbols_of(s) {
                if !self.signature.contains(&sym) {
                    return Err(KernelError::UndeclaredSymbol { theory: self.name.clone(), symbol: sym });
                }
            }
            if let Some(l) = &s.label {
                if !labels.insert(l.as_str()) {
                    return Err(KernelError::DuplicateLabel { theory: self.name.clone(), label: l.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn logic(&self) -> LogicId {
        self.signature.logic
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Sentence> {
        self.sentences.iter().filter(|s| s.role == Role::Axiom)
    }

    pub fn into_parts(self) -> (String, Signature, Vec<Sentence>) {
        (self.name, self.signature, self.sentences)
    }

    pub fn sentence_by_label(&self, label: &str) -> Option<&Sentence> {
        self.sentences.iter().find(|s| s.label.as_deref() == Some(label))
    }
}

/// Makes `wanted` unique with respect to `taken` by appending `_2`, `_3`, ...
pub fn fresh_label(wanted: &str, taken: &HashSet<String>) -> String {
    if !taken.contains(wanted) {
        return wanted.to_string();
    }
    (2..)
        .map(|k| format!("{wanted}_{k}"))
        .find(|l| !taken.contains(l))
        .expect("unbounded search")
}

/// Assigns `prefix_k` labels to unlabelled sentences and renames clashing
/// labels, in order.
pub fn label_sentences(prefix: &str, sentences: Vec<Sentence>) -> Vec<Sentence> {
    let mut taken: HashSet<String> = HashSet::new();
    sentences
        .into_iter()
        .enumerate()
        .map(|(i, mut s)| {
            let wanted = s.label.clone().unwrap_or_else(|| format!("{prefix}_{}", i + 1));
            let label = fresh_label(&wanted, &taken);
            taken.insert(label.clone());
            s.label = Some(label);
            s
        })
        .collect()
}

/// Union of two same-logic theories. Structurally equal sentences (same AST
/// and role) are kept once; clashing labels of distinct sentences are renamed.
pub fn theory_union(name: &str, a: &Theory, b: &Theory) -> Result<Theory, KernelError> {
    let signature = signature_union(&a.signature, &b.signature)?;
    let mut sentences = a.sentences.clone();
    let mut seen: HashSet<(Ast, Role)> =
        a.sentences.iter().map(|s| (s.ast.clone(), s.role)).collect();
    let mut labels: HashSet<String> = a.sentences.iter().filter_map(|s| s.label.clone()).collect();
    for s in &b.sentences {
        if !seen.insert((s.ast.clone(), s.role)) {
            continue;
        }
        let mut s = s.clone();
        if let Some(l) = &s.label {
            let l = fresh_label(l, &labels);
            labels.insert(l.clone());
            s.label = Some(l);
        }
        sentences.push(s);
    }
    Theory::new(name, signature, sentences)
}
