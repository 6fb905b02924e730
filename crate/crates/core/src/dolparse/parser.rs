use std::collections::{BTreeMap, HashSet};

use crate::kernel::LogicId;
use crate::text::{ParseError, Pos};

use super::lexer::{tokenize, Tok};
use super::{
    AlignmentDef, At, Basic, Correspondence, DolDocument, DolError, Item, LogicDecl, OntologyDef,
    OntologyExpr, Reference, Relation,
};

const KEYWORDS: [&str; 8] = ["logic", "ontology", "alignment", "combine", "and", "then", "to", "end"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    prefixes: BTreeMap<String, String>,
    logic: Option<LogicId>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_nth(&self, n: usize) -> &Tok {
        let i = (self.at + n).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn fail(&self, expected: &[&str]) -> DolError {
        ParseError::expected(self.pos(), &self.peek().describe(), expected).into()
    }

    fn expect_punct(&mut self, c: char) -> Result<(), DolError> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[&format!("`{c}`")]))
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), DolError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail(&[&format!("`{kw}`")]))
        }
    }

    /// A plain identifier that is not a keyword.
    fn ident(&mut self, what: &str) -> Result<(String, Pos), DolError> {
        let pos = self.pos();
        match self.peek() {
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) => {
                let w = w.clone();
                self.bump();
                Ok((w, pos))
            }
            _ => Err(self.fail(&[what])),
        }
    }

    fn check_prefix(&self, word: &str, pos: Pos) -> Result<(), DolError> {
        if let Some((prefix, _)) = word.split_once(':') {
            if !self.prefixes.contains_key(prefix) {
                return Err(ParseError::UndeclaredPrefix { pos, prefix: prefix.to_string() }.into());
            }
        }
        Ok(())
    }

    fn document(mut self) -> Result<DolDocument, DolError> {
        let mut items = Vec::new();
        let mut names = HashSet::new();
        loop {
            let pos = self.pos();
            let item = match self.peek() {
                Tok::Eof => break,
                Tok::PrefixOpen => {
                    self.prefix_block()?;
                    continue;
                }
                Tok::Word(w) if w == "logic" => {
                    self.bump();
                    Item::Logic(self.logic_decl()?)
                }
                Tok::Word(w) if w == "ontology" => {
                    self.bump();
                    let (name, _) = self.ident("ontology name")?;
                    self.expect_punct('=')?;
                    let expr = self.expr()?;
                    self.end_marker();
                    Item::Ontology(OntologyDef { name, expr, at: At(pos) })
                }
                Tok::Word(w) if w == "alignment" => {
                    self.bump();
                    Item::Alignment(self.alignment(pos)?)
                }
                _ => return Err(self.fail(&["`logic`", "`ontology`", "`alignment`", "`%prefix(`"])),
            };
            let name = match &item {
                Item::Ontology(o) => Some(&o.name),
                Item::Alignment(a) => Some(&a.name),
                Item::Logic(_) => None,
            };
            if let Some(name) = name {
                if !names.insert(name.clone()) {
                    return Err(DolError::DuplicateName { name: name.clone(), pos });
                }
            }
            items.push(item);
        }
        let doc = DolDocument { prefixes: self.prefixes, items };
        check_combines(&doc)?;
        Ok(doc)
    }

    fn prefix_block(&mut self) -> Result<(), DolError> {
        self.bump();
        while *self.peek() != Tok::PrefixClose {
            let (name, _) = match self.peek() {
                Tok::Word(_) => self.ident("prefix name")?,
                // The empty prefix `: <iri>`.
                Tok::Punct(':') => (String::new(), self.pos()),
                _ => return Err(self.fail(&["prefix name", "`)%`"])),
            };
            self.expect_punct(':')?;
            match self.peek().clone() {
                Tok::Iri(iri) => {
                    self.bump();
                    self.prefixes.insert(name, iri);
                }
                _ => return Err(self.fail(&["IRI"])),
            }
        }
        self.bump();
        Ok(())
    }

    fn logic_decl(&mut self) -> Result<LogicDecl, DolError> {
        let pos = self.pos();
        let (name, _) = self.ident("logic name")?;
        let logic = LogicId::from_name(&name).ok_or_else(|| DolError::UnknownLogic { name: name.clone(), pos })?;
        self.logic = Some(logic);
        Ok(LogicDecl { name, logic, at: At(pos) })
    }

    fn end_marker(&mut self) {
        if self.is_kw("end") {
            self.bump();
        }
    }

    fn expr(&mut self) -> Result<OntologyExpr, DolError> {
        let mut e = self.and_expr()?;
        while self.is_kw("then") {
            self.bump();
            let extension = self.fragment()?;
            e = OntologyExpr::Then { base: Box::new(e), extension };
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> Result<OntologyExpr, DolError> {
        let first = self.primary()?;
        if !self.is_kw("and") {
            return Ok(first);
        }
        let mut parts = vec![first];
        while self.is_kw("and") {
            self.bump();
            parts.push(self.primary()?);
        }
        Ok(OntologyExpr::And { parts })
    }

    fn fragment(&mut self) -> Result<Basic, DolError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Fragment(text) => {
                let logic = self.logic.ok_or(DolError::NoLogic { pos })?;
                self.bump();
                let at = Pos { line: pos.line, column: pos.column + 1 };
                Ok(Basic { logic, text, at: At(at) })
            }
            _ => Err(self.fail(&["basic fragment `{ ... }`"])),
        }
    }

    fn primary(&mut self) -> Result<OntologyExpr, DolError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Iri(iri) => {
                self.bump();
                Ok(OntologyExpr::Ref { reference: Reference::Iri(iri), at: At(pos) })
            }
            Tok::Fragment(_) => Ok(OntologyExpr::Basic(self.fragment()?)),
            Tok::Punct('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Word(w) if w == "combine" => {
                self.bump();
                let mut alignments = vec![self.ident("alignment name")?.0];
                while *self.peek() == Tok::Punct(',') {
                    self.bump();
                    alignments.push(self.ident("alignment name")?.0);
                }
                Ok(OntologyExpr::Combine { alignments, at: At(pos) })
            }
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                let reference = match w.split_once(':') {
                    Some((prefix, local)) => match self.prefixes.get(prefix) {
                        Some(iri) => Reference::Iri(format!("{iri}{local}")),
                        None => {
                            return Err(ParseError::UndeclaredPrefix { pos, prefix: prefix.to_string() }.into())
                        }
                    },
                    None => Reference::Name(w),
                };
                Ok(OntologyExpr::Ref { reference, at: At(pos) })
            }
            _ => Err(self.fail(&["ontology name", "IRI", "basic fragment", "`combine`", "`(`"])),
        }
    }

    fn alignment(&mut self, pos: Pos) -> Result<AlignmentDef, DolError> {
        let (name, _) = self.ident("alignment name")?;
        self.expect_punct(':')?;
        let left = self.and_expr()?;
        self.expect_kw("to")?;
        let right = self.and_expr()?;
        self.expect_punct('=')?;
        let mut correspondences = Vec::new();
        if self.at_correspondence() {
            correspondences.push(self.correspondence()?);
            loop {
                if *self.peek() == Tok::Punct(',') {
                    self.bump();
                    if !self.at_correspondence() {
                        return Err(self.fail(&["correspondence"]));
                    }
                } else if !self.at_correspondence() {
                    break;
                }
                correspondences.push(self.correspondence()?);
            }
        }
        self.end_marker();
        Ok(AlignmentDef { name, left, right, correspondences, at: At(pos) })
    }

    fn at_correspondence(&self) -> bool {
        matches!(self.peek(), Tok::Word(w) if !KEYWORDS.contains(&w.as_str()))
            && matches!(self.peek_nth(1), Tok::Punct('=' | '<' | '>'))
    }

    fn correspondence(&mut self) -> Result<Correspondence, DolError> {
        let pos = self.pos();
        let (left, lpos) = self.ident("symbol name")?;
        self.check_prefix(&left, lpos)?;
        let relation = match self.bump() {
            Tok::Punct('=') => Relation::Equivalent,
            Tok::Punct('<') => Relation::LeftSubsumedByRight,
            Tok::Punct('>') => Relation::RightSubsumedByLeft,
            _ => unreachable!("checked by at_correspondence"),
        };
        let (right, rpos) = self.ident("symbol name")?;
        self.check_prefix(&right, rpos)?;
        Ok(Correspondence { left, right, relation, at: At(pos) })
    }
}

fn check_combines(doc: &DolDocument) -> Result<(), DolError> {
    fn walk(e: &OntologyExpr, doc: &DolDocument) -> Result<(), DolError> {
        match e {
            OntologyExpr::Combine { alignments, at } => {
                for a in alignments {
                    if doc.alignment(a).is_none() {
                        return Err(DolError::UndeclaredAlignment { name: a.clone(), pos: at.0 });
                    }
                }
                Ok(())
            }
            OntologyExpr::And { parts } => parts.iter().try_for_each(|p| walk(p, doc)),
            OntologyExpr::Then { base, .. } => walk(base, doc),
            OntologyExpr::Ref { .. } | OntologyExpr::Basic(_) => Ok(()),
        }
    }
    for o in doc.ontologies() {
        walk(&o.expr, doc)?;
    }
    for a in doc.alignments() {
        walk(&a.left, doc)?;
        walk(&a.right, doc)?;
    }
    Ok(())
}

pub fn parse_document(text: &str) -> Result<DolDocument, DolError> {
    let toks = tokenize(text)?;
    Parser { toks, at: 0, prefixes: BTreeMap::new(), logic: None }.document()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cq_base_is_a_union_of_references() {
        let doc = parse_document("logic OWL\nontology CQbase = genealogy and scenario end").unwrap();
        assert_eq!(doc.items.len(), 2);
        let o = doc.ontology("CQbase").unwrap();
        assert_eq!(
            o.expr,
            OntologyExpr::And { parts: vec![OntologyExpr::name("genealogy"), OntologyExpr::name("scenario")] }
        );
    }

    #[test]
    fn trailing_comma_in_combine() {
        let err = parse_document("ontology X = combine A,").unwrap_err();
        match err {
            DolError::Parse(ParseError::Syntax { pos, expected, .. }) => {
                assert_eq!(pos, Pos { line: 1, column: 24 });
                assert_eq!(expected, vec!["alignment name".to_string()]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn then_takes_a_fragment() {
        let doc = parse_document("logic OWL ontology a = b then { Class: C } then {x}").unwrap();
        let OntologyExpr::Then { base, extension } = &doc.ontology("a").unwrap().expr else { panic!() };
        assert_eq!(extension.text, "x");
        assert!(matches!(**base, OntologyExpr::Then { .. }));
        assert!(parse_document("logic OWL ontology a = b then c").is_err());
        assert!(matches!(parse_document("ontology a = b then {x}"), Err(DolError::NoLogic { .. })));
    }

    #[test]
    fn alignments_and_relations() {
        let doc = parse_document(
            "%prefix( d: <http://d/> b: <http://b/> )%\nlogic OWL\n\
             alignment A : d:x.owl to b:1.1 = p = q, r < s t > u\nalignment B : d:x.owl to b:1.1 =",
        )
        .unwrap();
        let a = doc.alignment("A").unwrap();
        assert_eq!(a.left, OntologyExpr::reference(Reference::Iri("http://d/x.owl".into())));
        assert_eq!(a.right, OntologyExpr::reference(Reference::Iri("http://b/1.1".into())));
        let rels: Vec<_> = a.correspondences.iter().map(|c| c.relation).collect();
        assert_eq!(rels, [Relation::Equivalent, Relation::LeftSubsumedByRight, Relation::RightSubsumedByLeft]);
        assert!(doc.alignment("B").unwrap().correspondences.is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_document("ontology a = b\nontology a = c"),
            Err(DolError::DuplicateName { .. })
        ));
        assert!(matches!(parse_document("logic HOL"), Err(DolError::UnknownLogic { .. })));
        assert!(matches!(
            parse_document("ontology a = q:b"),
            Err(DolError::Parse(ParseError::UndeclaredPrefix { .. }))
        ));
        assert!(matches!(
            parse_document("ontology a = combine X"),
            Err(DolError::UndeclaredAlignment { .. })
        ));
        assert!(matches!(
            parse_document("alignment A : l to r = x = y,\nontology o = l"),
            Err(DolError::Parse(ParseError::Syntax { .. }))
        ));
        assert!(matches!(
            parse_document("alignment A : l to r = x = q:y"),
            Err(DolError::Parse(ParseError::UndeclaredPrefix { .. }))
        ));
    }

    #[test]
    fn prefix_block_spans_lines() {
        let doc = parse_document("%prefix(\n  gfo: <http://g/>\n  dolce: <http://d/>\n\n)%\nlogic OWL").unwrap();
        assert_eq!(doc.prefixes.len(), 2);
        assert_eq!(doc.prefixes["gfo"], "http://g/");
    }
}
