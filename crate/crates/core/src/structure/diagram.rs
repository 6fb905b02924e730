//! Alignment diagrams, their colimits and `combine`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;

use crate::dolparse::{print_expr, AlignmentDef, OntologyExpr, Relation, Side};
use crate::kernel::{translate_sentence, Ast, Kind, LogicId, Role, Sentence, Signature, SignatureMorphism, Symbol, Theory};
use crate::logics::{ClassExpr, DlAxiom, FolFormula, FolTerm, PropFormula};
use crate::text::NameContext;

use super::{dedup_labels, node_id, resolve_symbol, side_name, Env, StructureError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagramEdge {
    pub from: String,
    pub to: String,
    pub morphism: SignatureMorphism,
}

/// Signatures connected by signature morphisms.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagram {
    pub nodes: IndexMap<String, Signature>,
    pub edges: Vec<DiagramEdge>,
}

/// A `<` correspondence with both symbols resolved in their nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Subsumption {
    pub alignment: String,
    pub sub: (String, Symbol),
    pub sup: (String, Symbol),
}

/// The diagram of a set of alignments: one node per aligned theory, one
/// bridge node per alignment whose symbols stand for its `=`
/// correspondences, and two edges from every bridge.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignmentDiagram {
    pub logic: LogicId,
    pub diagram: Diagram,
    /// Theory nodes, in order of first appearance.
    pub theories: IndexMap<String, Arc<Theory>>,
    pub bridges: Vec<String>,
    pub subsumptions: Vec<Subsumption>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Colimit {
    pub signature: Signature,
    pub injections: IndexMap<String, SignatureMorphism>,
    /// Every equivalence class with more than one member, as (node, symbol)
    /// pairs, paired with its representative.
    pub classes: Vec<(Symbol, Vec<(String, Symbol)>)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Combined {
    pub theory: Theory,
    pub diagram: AlignmentDiagram,
    pub colimit: Colimit,
}

fn expr_id(e: &OntologyExpr) -> String {
    node_id(e).unwrap_or_else(|| print_expr(e))
}

fn resolve_side(
    t: &Theory,
    token: &str,
    ctx: &NameContext,
    alignment: &str,
    side: Side,
) -> Result<Symbol, StructureError> {
    resolve_symbol(t, token, ctx).cloned().map_err(|ambiguous| {
        let (alignment, symbol, side) = (alignment.to_string(), token.to_string(), side_name(side));
        if ambiguous {
            StructureError::AmbiguousCorrespondence { alignment, symbol, side }
        } else {
            StructureError::UnresolvedCorrespondence { alignment, symbol, side }
        }
    })
}

pub fn build_diagram(env: &Env<'_>, alignments: &[&AlignmentDef]) -> Result<AlignmentDiagram, StructureError> {
    let ctx = env.name_context();
    let mut theories: IndexMap<String, Arc<Theory>> = IndexMap::new();
    let mut diagram = Diagram::default();
    let mut bridges = Vec::new();
    let mut subsumptions = Vec::new();
    let mut logic = None;
    for a in alignments {
        let mut sides = Vec::with_capacity(2);
        for e in [&a.left, &a.right] {
            let id = expr_id(e);
            if !theories.contains_key(&id) {
                let t = Arc::new(env.flatten(e)?);
                diagram.nodes.insert(id.clone(), t.signature().clone());
                theories.insert(id.clone(), t);
            }
            sides.push(id);
        }
        let (lid, rid) = (sides[0].clone(), sides[1].clone());
        let (lt, rt) = (&theories[&lid], &theories[&rid]);
        if lt.logic() != rt.logic() || logic.is_some_and(|l| l != lt.logic()) {
            let left = logic.filter(|l| *l != lt.logic()).unwrap_or(lt.logic());
            let right = if lt.logic() != rt.logic() { rt.logic() } else { lt.logic() };
            return Err(StructureError::HeterogeneousAlignment { alignment: a.name.clone(), left, right });
        }
        logic = Some(lt.logic());

        let origin = format!("{}#", a.name);
        let mut bridge = Signature::empty(lt.logic());
        let mut to_left = BTreeMap::new();
        let mut to_right = BTreeMap::new();
        for c in &a.correspondences {
            let l = resolve_side(lt, &c.left, &ctx, &a.name, Side::Left)?;
            let r = resolve_side(rt, &c.right, &ctx, &a.name, Side::Right)?;
            if l.kind != r.kind || l.arity != r.arity {
                return Err(StructureError::KindMismatch { left: l, right: r });
            }
            match c.relation {
                Relation::Equivalent => {
                    let b = Symbol::new(origin.clone(), format!("{}={}", l.name, r.name), l.kind, l.arity);
                    bridge.insert(b.clone())?;
                    to_left.insert(b.clone(), l);
                    to_right.insert(b, r);
                }
                Relation::LeftSubsumedByRight => subsumptions.push(Subsumption {
                    alignment: a.name.clone(),
                    sub: (lid.clone(), l),
                    sup: (rid.clone(), r),
                }),
                Relation::RightSubsumedByLeft => subsumptions.push(Subsumption {
                    alignment: a.name.clone(),
                    sub: (rid.clone(), r),
                    sup: (lid.clone(), l),
                }),
            }
        }
        let bid = a.name.clone();
        diagram.nodes.insert(bid.clone(), bridge.clone());
        for (target, map) in [(&lid, to_left), (&rid, to_right)] {
            let morphism = SignatureMorphism::new(bridge.clone(), theories[target].signature().clone(), map)?;
            diagram.edges.push(DiagramEdge { from: bid.clone(), to: target.clone(), morphism });
        }
        bridges.push(bid);
    }
    Ok(AlignmentDiagram { logic: logic.unwrap_or(LogicId::SimpleDl), diagram, theories, bridges, subsumptions })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller index as root so that classes are ordered by their
    /// first member.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
    }
}

/// Colimit of a diagram over one logic. Members of an equivalence class that
/// share a local name keep it; otherwise the representative joins the sorted
/// distinct local names with `__`. The origin is that of the first member
/// from a node that is not a pure source of edges (a bridge), in node order.
pub fn colimit(d: &Diagram) -> Result<Colimit, StructureError> {
    let logic = d.nodes.values().next().map(|s| s.logic()).unwrap_or(LogicId::SimpleDl);
    let mut elems: Vec<(usize, &Symbol)> = Vec::new();
    let mut index: HashMap<(usize, &Symbol), usize> = HashMap::new();
    for (n, sig) in d.nodes.values().enumerate() {
        for s in sig.iter() {
            index.insert((n, s), elems.len());
            elems.push((n, s));
        }
    }
    let mut uf = UnionFind((0..elems.len()).collect());
    for e in &d.edges {
        let from = d.nodes.get_index_of(&e.from).expect("edge endpoints are nodes");
        let to = d.nodes.get_index_of(&e.to).expect("edge endpoints are nodes");
        for (s, t) in e.morphism.pairs() {
            uf.union(index[&(from, s)], index[&(to, t)]);
        }
    }
    let sources: HashSet<usize> = d
        .edges
        .iter()
        .map(|e| d.nodes.get_index_of(&e.from).expect("node"))
        .filter(|n| !d.edges.iter().any(|e| d.nodes.get_index_of(&e.to) == Some(*n)))
        .collect();

    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..elems.len() {
        let r = uf.find(i);
        members.entry(r).or_default().push(i);
    }
    let mut signature = Signature::empty(logic);
    let mut taken: HashSet<(String, String)> = HashSet::new();
    let mut rep_of: Vec<Option<Symbol>> = vec![None; elems.len()];
    let mut classes = Vec::new();
    for class in members.values() {
        let first = elems[class[0]].1;
        for &i in &class[1..] {
            let s = elems[i].1;
            if s.kind != first.kind || s.arity != first.arity {
                return Err(StructureError::KindMismatch { left: first.clone(), right: s.clone() });
            }
        }
        let naming: Vec<&Symbol> = {
            let inner: Vec<&Symbol> =
                class.iter().filter(|&&i| !sources.contains(&elems[i].0)).map(|&i| elems[i].1).collect();
            if inner.is_empty() { class.iter().map(|&i| elems[i].1).collect() } else { inner }
        };
        let (origin, name) = if class.len() == 1 {
            (first.origin.clone(), first.name.clone())
        } else {
            let names: BTreeSet<&str> = naming.iter().map(|s| s.name.as_str()).collect();
            let name = names.into_iter().collect::<Vec<_>>().join("__");
            (naming[0].origin.clone(), name)
        };
        let mut unique = name.clone();
        let mut k = 2;
        while !taken.insert((origin.clone(), unique.clone())) {
            unique = format!("{name}_{k}");
            k += 1;
        }
        let rep = Symbol::new(origin, unique, first.kind, first.arity);
        signature.insert(rep.clone())?;
        for &i in class {
            rep_of[i] = Some(rep.clone());
        }
        if class.len() > 1 {
            let mut ms: Vec<(String, Symbol)> = class
                .iter()
                .filter(|&&i| !sources.contains(&elems[i].0))
                .map(|&i| (d.nodes.get_index(elems[i].0).expect("node").0.clone(), elems[i].1.clone()))
                .collect();
            ms.sort_by_key(|(n, _)| d.nodes.get_index_of(n));
            classes.push((rep, ms));
        }
    }
    let mut injections = IndexMap::new();
    for (n, (id, sig)) in d.nodes.iter().enumerate() {
        let map = sig.iter().map(|s| (s.clone(), rep_of[index[&(n, s)]].clone().expect("assigned"))).collect();
        injections.insert(id.clone(), SignatureMorphism::new(sig.clone(), signature.clone(), map)?);
    }
    Ok(Colimit { signature, injections, classes })
}

/// `inj_to ∘ m = inj_from` for every edge.
pub fn check_cocone(d: &Diagram, c: &Colimit) -> bool {
    d.edges.iter().all(|e| {
        let (from, to) = (&c.injections[&e.from], &c.injections[&e.to]);
        e.morphism.pairs().all(|(s, t)| to.apply(t) == from.apply(s))
    })
}

fn subsumption_sentence(logic: LogicId, sub: &Symbol, sup: &Symbol) -> Result<Ast, StructureError> {
    if sub.kind != sup.kind || sub.arity != sup.arity {
        return Err(StructureError::KindMismatch { left: sub.clone(), right: sup.clone() });
    }
    Ok(match (logic, sub.kind) {
        (LogicId::SimpleDl, Kind::Class) => Ast::Dl(DlAxiom::SubClassOf(sub.clone(), ClassExpr::Named(sup.clone()))),
        (LogicId::SimpleDl, Kind::ObjectProperty | Kind::DataProperty) => {
            Ast::Dl(DlAxiom::SubPropertyOf(sub.clone(), sup.clone()))
        }
        (LogicId::Fol, Kind::Predicate) => {
            let vars: Vec<String> = (1..=sub.arity).map(|i| format!("X{i}")).collect();
            let args: Vec<FolTerm> = vars.iter().map(|v| FolTerm::Var(v.clone())).collect();
            let body = FolFormula::implies(
                FolFormula::atom(sub.clone(), args.clone()),
                FolFormula::atom(sup.clone(), args),
            );
            Ast::Fol(if vars.is_empty() { body } else { FolFormula::Forall(vars, Box::new(body)) })
        }
        (LogicId::Prop, Kind::PropVar) => {
            Ast::Prop(PropFormula::implies(PropFormula::Atom(sub.clone()), PropFormula::Atom(sup.clone())))
        }
        (_, kind) => return Err(StructureError::UnsupportedSubsumption(kind.to_string())),
    })
}

/// Combines the named alignments: the colimit of their diagram, the source
/// sentences translated along the injections, and one subsumption sentence
/// per `<` or `>` correspondence.
pub(super) fn combine(env: &Env<'_>, name: &str, alignment_names: &[String]) -> Result<Combined, StructureError> {
    if alignment_names.is_empty() {
        return Err(StructureError::EmptyCombine);
    }
    let alignments = alignment_names
        .iter()
        .map(|n| env.doc.alignment(n).ok_or_else(|| StructureError::UnknownOntology(n.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let diagram = build_diagram(env, &alignments)?;
    let colimit = colimit(&diagram.diagram)?;
    let mut sentences = Vec::new();
    let mut seen: HashSet<(Ast, Role)> = HashSet::new();
    for (id, t) in &diagram.theories {
        let inj = &colimit.injections[id];
        for s in t.sentences() {
            let img = translate_sentence(inj, s)?;
            if seen.insert((img.ast.clone(), img.role)) {
                sentences.push(img);
            }
        }
    }
    let mut counters: HashMap<&str, usize> = HashMap::new();
    for sub in &diagram.subsumptions {
        let a = colimit.injections[&sub.sub.0].apply(&sub.sub.1).expect("total").clone();
        let b = colimit.injections[&sub.sup.0].apply(&sub.sup.1).expect("total").clone();
        let ast = subsumption_sentence(diagram.logic, &a, &b)?;
        let k = counters.entry(&sub.alignment).or_insert(0);
        *k += 1;
        if seen.insert((ast.clone(), Role::Axiom)) {
            sentences.push(Sentence::axiom(ast).labelled(format!("{}_sub_{k}", sub.alignment)));
        }
    }
    dedup_labels(&mut sentences);
    let theory = Theory::new(name, colimit.signature.clone(), sentences)?;
    Ok(Combined { theory, diagram, colimit })
}
