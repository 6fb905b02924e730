use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use indexmap::IndexMap;
use serde::Serialize;

use crate::dolparse::{print_expr, DolDocument, OntologyExpr, Reference};

use super::ProofObligation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    Ontology,
    /// A theory referenced by IRI.
    External,
    /// A composite expression used as an alignment side or obligation base.
    Expression,
    Alignment,
    Combine,
    Obligation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LinkType {
    Import,
    AlignmentSide,
    CombineInjection,
    ObligationOf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DevNode {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DevLink {
    pub from: String,
    pub to: String,
    #[serde(rename = "type")]
    pub link_type: LinkType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Named theories, alignments, combinations and obligations with typed links.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DevGraph {
    pub nodes: Vec<DevNode>,
    pub links: Vec<DevLink>,
}

fn short_label(iri: &str) -> String {
    super::short_name(iri).to_string()
}

#[derive(Default)]
struct Builder {
    nodes: IndexMap<String, DevNode>,
    links: Vec<DevLink>,
}

impl Builder {
    fn node(&mut self, id: &str, kind: NodeKind, label: String) {
        self.nodes.entry(id.to_string()).or_insert(DevNode { id: id.to_string(), kind, label });
    }

    fn link(&mut self, from: &str, to: &str, link_type: LinkType, label: Option<&str>) {
        let l = DevLink { from: from.into(), to: to.into(), link_type, label: label.map(str::to_string) };
        if !self.links.contains(&l) {
            self.links.push(l);
        }
    }

    fn reference(&mut self, doc: &DolDocument, r: &Reference) -> String {
        let id = r.as_str().to_string();
        if !matches!(r, Reference::Name(n) if doc.ontology(n).is_some()) {
            self.node(&id, NodeKind::External, short_label(&id));
        }
        id
    }

    /// Node id for an expression, adding nodes and imports for composite ones.
    fn expr_node(&mut self, doc: &DolDocument, e: &OntologyExpr) -> String {
        if let OntologyExpr::Ref { reference, .. } = e {
            return self.reference(doc, reference);
        }
        let id = print_expr(e);
        self.node(&id, NodeKind::Expression, id.clone());
        self.imports(doc, e, &id);
        id
    }

    fn imports(&mut self, doc: &DolDocument, e: &OntologyExpr, into: &str) {
        match e {
            OntologyExpr::Ref { reference, .. } => {
                let from = self.reference(doc, reference);
                self.link(&from, into, LinkType::Import, None);
            }
            OntologyExpr::And { parts } => parts.iter().for_each(|p| self.imports(doc, p, into)),
            OntologyExpr::Then { base, .. } => self.imports(doc, base, into),
            OntologyExpr::Basic(_) | OntologyExpr::Combine { .. } => {}
        }
    }
}

/// The development graph of a document. Definitions whose fragments were
/// read as conjectures link to their base by `ObligationOf` instead of
/// importing it.
pub fn dev_graph(doc: &DolDocument, obligations: &[ProofObligation]) -> DevGraph {
    let mut b = Builder::default();
    let conjectural: BTreeSet<&str> = obligations.iter().map(|o| o.definition.as_str()).collect();
    for def in doc.ontologies() {
        let kind = match def.expr {
            OntologyExpr::Combine { .. } => NodeKind::Combine,
            _ => NodeKind::Ontology,
        };
        b.node(&def.name, kind, def.name.clone());
    }
    for def in doc.ontologies() {
        match &def.expr {
            OntologyExpr::Combine { alignments, .. } => {
                for a in alignments.iter().filter_map(|n| doc.alignment(n)) {
                    for side in [&a.left, &a.right] {
                        let id = b.expr_node(doc, side);
                        b.link(&id, &def.name, LinkType::CombineInjection, None);
                    }
                }
            }
            OntologyExpr::Then { base, .. } if conjectural.contains(def.name.as_str()) => {
                b.expr_node(doc, base);
            }
            e => b.imports(doc, e, &def.name),
        }
    }
    for a in doc.alignments() {
        b.node(&a.name, NodeKind::Alignment, a.name.clone());
        for (side, label) in [(&a.left, "left"), (&a.right, "right")] {
            let id = b.expr_node(doc, side);
            b.link(&a.name, &id, LinkType::AlignmentSide, Some(label));
        }
    }
    for o in obligations {
        b.node(&o.name, NodeKind::Obligation, o.name.clone());
        if let Some(n) = b.nodes.get_mut(&o.name) {
            n.kind = NodeKind::Obligation;
        }
        b.link(&o.name, &o.base, LinkType::ObligationOf, None);
    }
    DevGraph { nodes: b.nodes.into_values().collect(), links: b.links }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

impl DevGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph devgraph {\n  rankdir=BT;\n");
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Alignment => "diamond",
                NodeKind::Combine => "doubleoctagon",
                NodeKind::Obligation => "note",
                NodeKind::External => "box",
                NodeKind::Ontology | NodeKind::Expression => "ellipse",
            };
            let _ = writeln!(out, "  \"{}\" [label=\"{}\", shape={shape}];", dot_escape(&n.id), dot_escape(&n.label));
        }
        for l in &self.links {
            let label = match &l.label {
                Some(x) => format!("{:?} ({x})", l.link_type),
                None => format!("{:?}", l.link_type),
            };
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{label}\"];", dot_escape(&l.from), dot_escape(&l.to));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }

    pub fn links_of(&self, t: LinkType) -> impl Iterator<Item = &DevLink> {
        self.links.iter().filter(move |l| l.link_type == t)
    }

    /// Whether the import and combine-injection links form no cycle.
    pub fn is_acyclic(&self) -> bool {
        let mut out: HashMap<&str, Vec<&str>> = HashMap::new();
        for l in self.links.iter().filter(|l| matches!(l.link_type, LinkType::Import | LinkType::CombineInjection)) {
            out.entry(&l.from).or_default().push(&l.to);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state: HashMap<&str, u8> = HashMap::new();
        fn visit<'a>(n: &'a str, out: &HashMap<&'a str, Vec<&'a str>>, state: &mut HashMap<&'a str, u8>) -> bool {
            match state.get(n) {
                Some(1) => return false,
                Some(2) => return true,
                _ => {}
            }
            state.insert(n, 1);
            for m in out.get(n).into_iter().flatten() {
                if !visit(m, out, state) {
                    return false;
                }
            }
            state.insert(n, 2);
            true
        }
        self.nodes.iter().all(|n| visit(&n.id, &out, &mut state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dolparse::parse_document;

    #[test]
    fn empty_document_gives_empty_graph() {
        let doc = parse_document("").unwrap();
        assert_eq!(dev_graph(&doc, &[]), DevGraph::default());
    }

    #[test]
    fn imports_alignments_and_combination() {
        let doc = parse_document(
            "%prefix( d: <http://d/> )%\nlogic OWL\nontology a = d:x and {Class: C}\n\
             ontology b = a then {Class: D}\nalignment al : a to d:y = C = C\nontology s = combine al",
        )
        .unwrap();
        let g = dev_graph(&doc, &[]);
        let ids: Vec<_> = g.nodes.iter().map(|n| n.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "s", "http://d/x", "http://d/y", "al"]);
        assert_eq!(g.links_of(LinkType::Import).count(), 2);
        assert_eq!(g.links_of(LinkType::CombineInjection).count(), 2);
        assert_eq!(g.links_of(LinkType::AlignmentSide).count(), 2);
        assert!(g.is_acyclic());
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph devgraph {"));
        assert!(dot.contains("\"http://d/y\" -> \"s\" [label=\"CombineInjection\"];"));
        let json = g.to_json();
        assert_eq!(json["links"][0]["type"], "Import");
        assert_eq!(json["nodes"][3]["label"], "x");
    }
}
