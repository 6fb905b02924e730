use std::fmt::Write;
use std::path::Path;

use dolkit::dolparse::{print_expr, DolDocument};
use dolkit::logics::print_sentence;
use dolkit::structure::{Analysis, Colimit};
use dolkit::{NameContext, Sentence, Symbol, Theory};
use serde_json::{json, Value};

fn symbol(s: &Symbol) -> Value {
    json!({ "name": s.name, "kind": s.kind, "arity": s.arity, "origin": s.origin })
}

fn sentence(s: &Sentence, ctx: &NameContext) -> Value {
    json!({ "label": s.label, "role": s.role, "text": print_sentence(s, ctx) })
}

fn theory(name: &str, t: &Theory, ctx: &NameContext) -> Value {
    json!({
        "name": name,
        "logic": t.logic(),
        "symbols": t.signature().iter().map(symbol).collect::<Vec<_>>(),
        "sentences": t.sentences().iter().map(|s| sentence(s, ctx)).collect::<Vec<_>>(),
    })
}

fn classes(c: &Colimit) -> Value {
    c.classes
        .iter()
        .map(|(rep, members)| {
            json!({
                "symbol": symbol(rep),
                "members": members
                    .iter()
                    .map(|(node, s)| json!({ "node": node, "symbol": symbol(s) }))
                    .collect::<Vec<_>>(),
            })
        })
        .collect()
}

/// The JSON analysis report. Ordering follows the document and the sorted
/// signatures, so equal inputs give identical output.
pub fn analysis(file: &Path, doc: &DolDocument, a: &Analysis, ctx: &NameContext) -> Value {
    let document = file.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let alignments: Vec<Value> = doc
        .alignments()
        .map(|al| {
            json!({
                "name": al.name,
                "left": print_expr(&al.left),
                "right": print_expr(&al.right),
                "correspondences": al.correspondences.iter().map(|c| json!({
                    "left": c.left,
                    "relation": c.relation.symbol(),
                    "right": c.right,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let combinations: Vec<Value> = a
        .combinations
        .iter()
        .map(|(name, c)| {
            json!({
                "name": name,
                "logic": c.diagram.logic,
                "nodes": c.diagram.diagram.nodes.keys().collect::<Vec<_>>(),
                "bridges": c.diagram.bridges,
                "classes": classes(&c.colimit),
                "theory": theory(name, &c.theory, ctx),
            })
        })
        .collect();
    let obligations: Vec<Value> = a
        .obligations
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "definition": o.definition,
                "base": o.base,
                "conjecture": sentence(&o.conjecture, ctx),
                "axioms": o.theory.axioms().count(),
            })
        })
        .collect();
    json!({
        "document": document,
        "ontologies": a.ontologies.iter().map(|(n, t)| theory(n, t, ctx)).collect::<Vec<_>>(),
        "alignments": alignments,
        "combinations": combinations,
        "obligations": obligations,
        "graph": a.graph.to_json(),
    })
}

/// One line per merged symbol: the colimit symbol followed by its members.
pub fn class_table(c: &Colimit, ctx: &NameContext) -> String {
    let mut out = String::new();
    for (rep, members) in &c.classes {
        let members: Vec<String> = members.iter().map(|(node, s)| format!("{node}:{}", s.name)).collect();
        let _ = writeln!(out, "{}\t{}", ctx.render(rep).unwrap_or_else(|| rep.qualified()), members.join(" "));
    }
    out
}
