//! Semantics of DOL structuring: flattening ontology expressions to
//! theories, alignment diagrams and their colimits, proof obligations and the
//! development graph.

mod devgraph;
mod diagram;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::dolparse::{
    resolve_reference, Basic, DolDocument, DolError, OntologyExpr, Reference, RepoConfig, ResolveError,
    Resolved, Side,
};
use crate::kernel::{label_sentences, theory_union, KernelError, LogicId, Role, Sentence, Signature, Symbol, Theory};
use crate::logics::parse_text;
use crate::mappings::{translate_along, MappingError, Registry};
use crate::text::{NameContext, ParseError};

pub use devgraph::{dev_graph, DevGraph, DevLink, DevNode, LinkType, NodeKind};
pub use diagram::{
    build_diagram, check_cocone, colimit, AlignmentDiagram, Colimit, Combined, Diagram, DiagramEdge,
    Subsumption,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructureError {
    #[error(transparent)]
    Dol(#[from] DolError),
    #[error("cannot resolve `{reference}`: {error}")]
    Resolve { reference: String, error: ResolveError },
    #[error("in {source_name}: {error}")]
    Parse { source_name: String, error: ParseError },
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("definition `{0}` depends on itself")]
    Cycle(String),
    #[error("no ontology named `{0}`")]
    UnknownOntology(String),
    #[error("alignment {alignment}: `{symbol}` not found in the {side} ontology")]
    UnresolvedCorrespondence { alignment: String, symbol: String, side: &'static str },
    #[error("alignment {alignment}: `{symbol}` is ambiguous in the {side} ontology")]
    AmbiguousCorrespondence { alignment: String, symbol: String, side: &'static str },
    #[error("cannot identify {left} with {right}: kinds differ")]
    KindMismatch { left: Symbol, right: Symbol },
    #[error("alignment {alignment} relates theories in {left} and {right}")]
    HeterogeneousAlignment { alignment: String, left: LogicId, right: LogicId },
    #[error("combine needs at least one alignment")]
    EmptyCombine,
    #[error("`{0}` is not a combination")]
    NotACombine(String),
    #[error("subsumption between {0} symbols is not expressible")]
    UnsupportedSubsumption(String),
}

impl StructureError {
    fn resolve(r: &Reference, error: ResolveError) -> Self {
        StructureError::Resolve { reference: r.as_str().to_string(), error }
    }
}

pub fn side_name(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

/// A conjecture together with the theory it must follow from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofObligation {
    pub name: String,
    /// The ontology definition the obligation comes from.
    pub definition: String,
    /// Development-graph id of the background theory.
    pub base: String,
    pub theory: Arc<Theory>,
    pub conjecture: Sentence,
}

/// Analysis context for one document: its definitions, the repository and
/// the logic registry. Flattened definitions and referenced files are
/// memoized.
pub struct Env<'a> {
    pub doc: &'a DolDocument,
    pub repo: &'a RepoConfig,
    pub registry: &'a Registry,
    /// Origin of unprefixed names written inside the document.
    pub origin: String,
    defs: Mutex<HashMap<String, Arc<Theory>>>,
    files: Mutex<HashMap<String, Arc<Theory>>>,
    combines: Mutex<HashMap<String, Arc<Combined>>>,
    active: Mutex<Vec<String>>,
}

fn short_name(iri: &str) -> &str {
    let trimmed = iri.trim_end_matches(['/', '#']);
    trimmed.rsplit(['/', '#']).next().filter(|s| !s.is_empty()).unwrap_or(trimmed)
}

fn label_prefix(name: &str) -> String {
    name.chars().map(|c| if c.is_alphanumeric() || c == '_' { c } else { '_' }).collect()
}

/// Development-graph id of an expression: the definition name or IRI for
/// references, `None` for composite expressions.
pub fn node_id(e: &OntologyExpr) -> Option<String> {
    match e {
        OntologyExpr::Ref { reference, .. } => Some(reference.as_str().to_string()),
        _ => None,
    }
}

impl<'a> Env<'a> {
    pub fn new(doc: &'a DolDocument, repo: &'a RepoConfig, registry: &'a Registry, origin: impl Into<String>) -> Self {
        Env {
            doc,
            repo,
            registry,
            origin: origin.into(),
            defs: Mutex::default(),
            files: Mutex::default(),
            combines: Mutex::default(),
            active: Mutex::default(),
        }
    }

    fn name_context(&self) -> NameContext {
        let mut ctx = NameContext::new(self.origin.clone());
        ctx.prefixes = self.doc.prefixes.clone();
        ctx
    }

    /// The flattened theory of a named ontology definition.
    pub fn definition(&self, name: &str) -> Result<Arc<Theory>, StructureError> {
        if let Some(t) = self.defs.lock().unwrap().get(name) {
            return Ok(Arc::clone(t));
        }
        let def = self.doc.ontology(name).ok_or_else(|| StructureError::UnknownOntology(name.to_string()))?;
        {
            let mut active = self.active.lock().unwrap();
            if active.iter().any(|a| a == name) {
                return Err(StructureError::Cycle(name.to_string()));
            }
            active.push(name.to_string());
        }
        let result = match &def.expr {
            OntologyExpr::Combine { alignments, .. } => self.combine_named(name, alignments).map(|c| c.theory.clone()),
            e => self.flatten(e),
        };
        self.active.lock().unwrap().retain(|a| a != name);
        let mut t = result?;
        t.name = name.to_string();
        let t = Arc::new(t);
        self.defs.lock().unwrap().insert(name.to_string(), Arc::clone(&t));
        Ok(t)
    }

    fn file(&self, reference: &Reference) -> Result<Arc<Theory>, StructureError> {
        let key = reference.as_str().to_string();
        if let Some(t) = self.files.lock().unwrap().get(&key) {
            return Ok(Arc::clone(t));
        }
        let resolved = resolve_reference(reference, |n| self.doc.ontology(n).is_some(), self.repo)
            .map_err(|e| StructureError::resolve(reference, e))?;
        let src = match resolved {
            Resolved::Local(n) => return self.definition(&n),
            Resolved::File(src) => src,
        };
        let ctx = NameContext::new(src.origin.clone());
        let (declared, sentences) = parse_text(src.logic, &src.text, &ctx).map_err(|error| StructureError::Parse {
            source_name: src.path.display().to_string(),
            error,
        })?;
        let short = short_name(&src.iri);
        let sentences = label_sentences(&label_prefix(short), sentences);
        let t = Theory::from_sentences(src.iri.clone(), Signature::new(src.logic, declared)?, sentences)?;
        let t = Arc::new(t);
        self.files.lock().unwrap().insert(key, Arc::clone(&t));
        Ok(t)
    }

    fn basic(&self, b: &Basic, label: &str) -> Result<Theory, StructureError> {
        let (declared, sentences) = parse_text(b.logic, &b.text, &self.name_context()).map_err(|e| {
            StructureError::Parse { source_name: "basic fragment".into(), error: e.offset_by(b.at.0) }
        })?;
        let sentences = label_sentences(&label_prefix(label), sentences);
        Ok(Theory::from_sentences(label, Signature::new(b.logic, declared)?, sentences)?)
    }

    /// Flattens an expression to a theory.
    pub fn flatten(&self, e: &OntologyExpr) -> Result<Theory, StructureError> {
        match e {
            OntologyExpr::Ref { reference: Reference::Name(n), .. } if self.doc.ontology(n).is_some() => {
                Ok((*self.definition(n)?).clone())
            }
            OntologyExpr::Ref { reference, .. } => Ok((*self.file(reference)?).clone()),
            OntologyExpr::Basic(b) => self.basic(b, "fragment"),
            OntologyExpr::And { parts } => {
                let mut it = parts.iter();
                let first = it.next().map(|p| self.flatten(p)).transpose()?;
                let mut acc = first.unwrap_or_else(|| Theory::empty("", LogicId::Fol));
                for p in it {
                    acc = self.unite(&acc, &self.flatten(p)?)?;
                }
                Ok(acc)
            }
            OntologyExpr::Then { base, extension } => {
                let base = self.flatten(base)?;
                let ext = self.basic(extension, "ext")?;
                let (base, mut ext) = self.same_logic(base, ext)?;
                if is_conjectural(&base, &ext) {
                    ext = as_conjectures(ext)?;
                }
                Ok(theory_union(&base.name, &base, &ext)?)
            }
            OntologyExpr::Combine { alignments, .. } => Ok(self.combine_named("combine", alignments)?.theory.clone()),
        }
    }

    /// Brings two theories into one logic along the registry's common target.
    pub fn same_logic(&self, a: Theory, b: Theory) -> Result<(Theory, Theory), StructureError> {
        if a.logic() == b.logic() {
            return Ok((a, b));
        }
        let (_, pa, pb) = self.registry.common_target(a.logic(), b.logic())?;
        Ok((translate_along(&pa, &a)?.theory, translate_along(&pb, &b)?.theory))
    }

    /// Union, translating heterogeneous operands first.
    pub fn unite(&self, a: &Theory, b: &Theory) -> Result<Theory, StructureError> {
        let name = a.name.clone();
        let (a, b) = self.same_logic(a.clone(), b.clone())?;
        Ok(theory_union(&name, &a, &b)?)
    }

    fn combine_named(&self, name: &str, alignments: &[String]) -> Result<Arc<Combined>, StructureError> {
        if let Some(c) = self.combines.lock().unwrap().get(name) {
            return Ok(Arc::clone(c));
        }
        let c = Arc::new(diagram::combine(self, name, alignments)?);
        self.combines.lock().unwrap().insert(name.to_string(), Arc::clone(&c));
        Ok(c)
    }

    /// The combination defined by `ontology name = combine ...`.
    pub fn combination(&self, name: &str) -> Result<Arc<Combined>, StructureError> {
        let def = self.doc.ontology(name).ok_or_else(|| StructureError::UnknownOntology(name.to_string()))?;
        match &def.expr {
            OntologyExpr::Combine { alignments, .. } => self.combine_named(name, alignments),
            _ => Err(StructureError::NotACombine(name.to_string())),
        }
    }

    /// Proof obligations of every `N = Base then { ... }` definition whose
    /// fragment introduces no new symbols.
    pub fn obligations(&self) -> Result<Vec<ProofObligation>, StructureError> {
        let mut out = Vec::new();
        for def in self.doc.ontologies() {
            let OntologyExpr::Then { base, extension } = &def.expr else { continue };
            let background = self.flatten(base)?;
            let ext = self.basic(extension, &def.name)?;
            let (background, ext) = self.same_logic(background, ext)?;
            if !is_conjectural(&background, &ext) {
                continue;
            }
            let theory = Arc::new(background);
            let base_id = node_id(base).unwrap_or_else(|| format!("{}.base", def.name));
            let n = ext.sentences().len();
            for (k, s) in ext.sentences().iter().enumerate() {
                let name = if n == 1 { def.name.clone() } else { format!("{}_{}", def.name, k + 1) };
                out.push(ProofObligation {
                    name: name.clone(),
                    definition: def.name.clone(),
                    base: base_id.clone(),
                    theory: Arc::clone(&theory),
                    conjecture: s.clone().with_role(Role::Conjecture).labelled(name),
                });
            }
        }
        Ok(out)
    }
}

/// A fragment is read as conjectures when it adds no symbols to its base.
fn is_conjectural(base: &Theory, ext: &Theory) -> bool {
    ext.signature().is_subset(base.signature())
}

fn as_conjectures(t: Theory) -> Result<Theory, KernelError> {
    let (name, sig, sentences) = t.into_parts();
    Theory::new(name, sig, sentences.into_iter().map(|s| s.with_role(Role::Conjecture)).collect())
}

/// Everything the analysis of a document produces.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// Flattened theory of each ontology definition, in document order.
    pub ontologies: Vec<(String, Arc<Theory>)>,
    pub obligations: Vec<ProofObligation>,
    pub combinations: Vec<(String, Arc<Combined>)>,
    pub graph: DevGraph,
}

pub fn analyze(env: &Env<'_>) -> Result<Analysis, StructureError> {
    let mut ontologies = Vec::new();
    let mut combinations = Vec::new();
    for def in env.doc.ontologies() {
        ontologies.push((def.name.clone(), env.definition(&def.name)?));
        if matches!(def.expr, OntologyExpr::Combine { .. }) {
            combinations.push((def.name.clone(), env.combination(&def.name)?));
        }
    }
    for a in env.doc.alignments() {
        env.flatten(&a.left)?;
        env.flatten(&a.right)?;
    }
    let obligations = env.obligations()?;
    let graph = dev_graph(env.doc, &obligations);
    Ok(Analysis { ontologies, obligations, combinations, graph })
}

/// The symbol of `t` named by `token`. The error tells whether the name
/// was ambiguous rather than absent.
pub(crate) fn resolve_symbol<'t>(
    t: &'t Theory,
    token: &str,
    ctx: &NameContext,
) -> Result<&'t Symbol, bool> {
    if token.contains(':') {
        let (origin, local) = ctx.resolve(token, Default::default()).map_err(|_| false)?;
        return t.signature().lookup_qualified(&origin, &local).ok_or(false);
    }
    let found: Vec<&Symbol> = t.signature().iter().filter(|s| s.name == token).collect();
    match found.len() {
        0 => Err(false),
        1 => Ok(found.into_iter().next().expect("one element")),
        _ => Err(true),
    }
}

pub(crate) fn dedup_labels(sentences: &mut [Sentence]) {
    let mut taken = HashSet::new();
    for s in sentences {
        if let Some(l) = &s.label {
            let l = crate::kernel::fresh_label(l, &taken);
            taken.insert(l.clone());
            s.label = Some(l);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dolparse::parse_document;
    use crate::kernel::{Ast, Kind};

    fn with_env<R>(text: &str, f: impl FnOnce(&Env<'_>) -> R) -> R {
        let doc = parse_document(text).unwrap();
        let repo = RepoConfig::empty(".");
        let reg = Registry::builtin();
        let env = Env::new(&doc, &repo, &reg, "doc#");
        f(&env)
    }

    const FAMILY: &str = "logic OWL\n\
        ontology g = { Class: Father EquivalentTo: Male and parent_of some Thing }\n\
        ontology s = { Individual: Chris Types: Male Facts: parent_of Dora }\n\
        ontology b = g and s end\n\
        ontology q1 = b then { Individual: Chris Types: Father } end\n\
        ontology q2 = b then { Individual: Dora Types: Male  Individual: Chris Types: Male }\n\
        ontology ext = b then { Class: Person }";

    #[test]
    fn union_of_same_logic_definitions() {
        with_env(FAMILY, |env| {
            let b = env.definition("b").unwrap();
            let g = env.definition("g").unwrap();
            let s = env.definition("s").unwrap();
            assert_eq!(b.logic(), LogicId::SimpleDl);
            assert_eq!(b.sentences().len(), g.sentences().len() + s.sentences().len());
            assert!(g.signature().is_subset(b.signature()) && s.signature().is_subset(b.signature()));
            let twice = env.flatten(&OntologyExpr::And { parts: vec![OntologyExpr::name("g"), OntologyExpr::name("g")] });
            assert_eq!(twice.unwrap().sentences(), g.sentences());
        })
    }

    #[test]
    fn obligations_come_from_symbol_free_extensions() {
        with_env(FAMILY, |env| {
            let obs = env.obligations().unwrap();
            let names: Vec<_> = obs.iter().map(|o| o.name.as_str()).collect();
            assert_eq!(names, ["q1", "q2_1", "q2_2"]);
            assert!(Arc::ptr_eq(&obs[1].theory, &obs[2].theory));
            for o in &obs {
                assert_eq!(o.conjecture.role, Role::Conjecture);
                assert_eq!(o.base, "b");
                assert!(o.conjecture.ast.symbols().iter().all(|s| o.theory.signature().contains(s)));
            }
            let ext = env.definition("ext").unwrap();
            assert!(ext.sentences().iter().all(|s| s.role == Role::Axiom));
            assert!(ext.signature().lookup_qualified("doc#", "Person").is_some());
            let q1 = env.definition("q1").unwrap();
            assert_eq!(q1.sentences().iter().filter(|s| s.role == Role::Conjecture).count(), 1);
        })
    }

    #[test]
    fn no_then_no_obligations() {
        with_env("logic OWL ontology a = { Class: A }", |env| assert!(env.obligations().unwrap().is_empty()));
    }

    #[test]
    fn heterogeneous_union_translates_to_fol() {
        let text = "logic Prop ontology p = { p impl q }\nlogic OWL ontology d = { Class: A SubClassOf: B }\n\
                    ontology u = p and d";
        with_env(text, |env| {
            let u = env.definition("u").unwrap();
            assert_eq!(u.logic(), LogicId::Fol);
            assert_eq!(u.sentences().len(), 2);
            assert!(u.sentences().iter().all(|s| matches!(s.ast, Ast::Fol(_))));
        })
    }

    #[test]
    fn fragment_errors_point_into_the_document() {
        with_env("logic OWL\nontology a = { Class: A SubClassOf: (B }", |env| {
            match env.definition("a").unwrap_err() {
                StructureError::Parse { error, .. } => assert_eq!(error.pos().line, 2),
                other => panic!("{other:?}"),
            }
        })
    }

    #[test]
    fn cycles_and_unknown_names() {
        with_env("logic OWL ontology a = b ontology b = a", |env| {
            assert!(matches!(env.definition("a"), Err(StructureError::Cycle(_))));
        });
        with_env("logic OWL ontology a = nowhere", |env| {
            assert!(matches!(env.definition("a"), Err(StructureError::Resolve { .. })));
        });
    }

    #[test]
    fn resolve_symbol_by_local_or_prefixed_name() {
        with_env(FAMILY, |env| {
            let g = env.definition("g").unwrap();
            let ctx = NameContext::new("doc#").with_prefix("d", "doc#");
            assert_eq!(resolve_symbol(&g, "Father", &ctx).unwrap().kind, Kind::Class);
            assert_eq!(resolve_symbol(&g, "d:parent_of", &ctx).unwrap().kind, Kind::ObjectProperty);
            assert!(resolve_symbol(&g, "nope", &ctx).is_err());
        })
    }
}
