use std::fmt::Write;

use super::{AlignmentDef, Basic, DolDocument, Item, OntologyExpr, Reference};

/// Prints a document in the concrete syntax accepted by
/// [`parse_document`](super::parse_document). Prefixed references are
/// printed as full IRIs.
pub fn print_document(doc: &DolDocument) -> String {
    let mut out = String::new();
    if !doc.prefixes.is_empty() {
        out.push_str("%prefix(\n");
        for (p, iri) in &doc.prefixes {
            let _ = writeln!(out, "  {p}: <{iri}>");
        }
        out.push_str(")%\n");
    }
    for item in &doc.items {
        match item {
            Item::Logic(l) => {
                let _ = writeln!(out, "logic {}", l.name);
            }
            Item::Ontology(o) => {
                let _ = writeln!(out, "ontology {} =\n  {} end", o.name, print_expr(&o.expr));
            }
            Item::Alignment(a) => print_alignment(a, &mut out),
        }
    }
    out
}

fn print_alignment(a: &AlignmentDef, out: &mut String) {
    let _ = write!(out, "alignment {} :\n  {} to {} =", a.name, print_and(&a.left), print_and(&a.right));
    for (i, c) in a.correspondences.iter().enumerate() {
        let sep = if i == 0 { "" } else { "," };
        let _ = write!(out, "{sep}\n  {} {} {}", c.left, c.relation.symbol(), c.right);
    }
    out.push_str("\nend\n");
}

fn print_basic(b: &Basic) -> String {
    format!("{{{}}}", b.text)
}

fn print_reference(r: &Reference) -> String {
    match r {
        Reference::Iri(i) => format!("<{i}>"),
        Reference::Name(n) => n.clone(),
    }
}

pub fn print_expr(e: &OntologyExpr) -> String {
    match e {
        OntologyExpr::Then { base, extension } => {
            format!("{} then {}", print_and(base), print_basic(extension))
        }
        other => print_and(other),
    }
}

/// Prints at `and` precedence, parenthesising `then`.
fn print_and(e: &OntologyExpr) -> String {
    match e {
        OntologyExpr::And { parts } => {
            parts.iter().map(print_primary).collect::<Vec<_>>().join(" and ")
        }
        other => print_primary(other),
    }
}

fn print_primary(e: &OntologyExpr) -> String {
    match e {
        OntologyExpr::Ref { reference, .. } => print_reference(reference),
        OntologyExpr::Basic(b) => print_basic(b),
        OntologyExpr::Combine { alignments, .. } => format!("combine {}", alignments.join(", ")),
        OntologyExpr::And { .. } | OntologyExpr::Then { .. } => format!("({})", print_expr(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_document;
    use super::*;

    #[test]
    fn round_trip() {
        let text = "%prefix( f1: <http://f/> )%\nlogic OWL\n\
                    ontology s = <http://f/scenario>\nontology b = (f1:x and s) and s then { Individual: f1:a }\n\
                    ontology n = (b then {x}) and s\n\
                    alignment A : s to f1:y = a = b, c < d e > f\nontology c = combine A";
        let doc = parse_document(text).unwrap();
        let printed = print_document(&doc);
        assert_eq!(parse_document(&printed).unwrap(), doc, "{printed}");
    }
}
