//! A small OWL-like description logic and a Manchester-syntax frame subset.
//!
//! ```text
//! Prefix: f1: <https://example.org/family/>
//! Class: Father EquivalentTo: Male and parent_of some Person
//! Individual: Chris Types: Male Facts: parent_of Dora
//! ObjectProperty: parent_of InverseOf: child_of Characteristics: Transitive
//! ```
//!
//! Class expressions use `not`, `and`, `or`, `some`, `only`, `Thing` and
//! `Nothing`; `or` binds loosest and restrictions bind tightest.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::kernel::{Ast, Kind, LogicId, Sentence, Symbol, Syntax};
use crate::text::{lex_name, Cursor, NameContext, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ClassExpr {
    Thing,
    Nothing,
    Named(Symbol),
    Not(Box<ClassExpr>),
    And(Box<ClassExpr>, Box<ClassExpr>),
    Or(Box<ClassExpr>, Box<ClassExpr>),
    Some(Symbol, Box<ClassExpr>),
    Only(Symbol, Box<ClassExpr>),
}

/// DL sentences. Left-hand sides of class axioms are named classes, which is
/// what the frame syntax can express.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum DlAxiom {
    SubClassOf(Symbol, ClassExpr),
    EquivalentClasses(Symbol, ClassExpr),
    DisjointClasses(Symbol, ClassExpr),
    ClassAssertion(ClassExpr, Symbol),
    PropertyAssertion(Symbol, Symbol, Symbol),
    SubPropertyOf(Symbol, Symbol),
    InverseProperties(Symbol, Symbol),
    TransitiveProperty(Symbol),
}

impl ClassExpr {
    pub fn named(s: Symbol) -> Self {
        ClassExpr::Named(s)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: ClassExpr) -> Self {
        ClassExpr::Not(Box::new(c))
    }

    pub fn and(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: ClassExpr, b: ClassExpr) -> Self {
        ClassExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn some(p: Symbol, c: ClassExpr) -> Self {
        ClassExpr::Some(p, Box::new(c))
    }

    pub fn only(p: Symbol, c: ClassExpr) -> Self {
        ClassExpr::Only(p, Box::new(c))
    }

    fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol)) {
        match self {
            ClassExpr::Thing | ClassExpr::Nothing => {}
            ClassExpr::Named(s) => f(s),
            ClassExpr::Not(c) => c.visit(f),
            ClassExpr::And(a, b) | ClassExpr::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            ClassExpr::Some(p, c) | ClassExpr::Only(p, c) => {
                f(p);
                c.visit(f);
            }
        }
    }

    fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Self, Symbol> {
        Ok(match self {
            ClassExpr::Thing => ClassExpr::Thing,
            ClassExpr::Nothing => ClassExpr::Nothing,
            ClassExpr::Named(s) => ClassExpr::Named(map(s, f)?),
            ClassExpr::Not(c) => ClassExpr::not(c.rename(f)?),
            ClassExpr::And(a, b) => ClassExpr::and(a.rename(f)?, b.rename(f)?),
            ClassExpr::Or(a, b) => ClassExpr::or(a.rename(f)?, b.rename(f)?),
            ClassExpr::Some(p, c) => ClassExpr::some(map(p, f)?, c.rename(f)?),
            ClassExpr::Only(p, c) => ClassExpr::only(map(p, f)?, c.rename(f)?),
        })
    }
}

fn map(s: &Symbol, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Symbol, Symbol> {
    f(s).ok_or_else(|| s.clone())
}

impl Syntax for DlAxiom {
    const LOGIC: LogicId = LogicId::SimpleDl;

    fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol)) {
        match self {
            DlAxiom::SubClassOf(a, c) | DlAxiom::EquivalentClasses(a, c) | DlAxiom::DisjointClasses(a, c) => {
                f(a);
                c.visit(f);
            }
            DlAxiom::ClassAssertion(c, i) => {
                c.visit(f);
                f(i);
            }
            DlAxiom::PropertyAssertion(p, i, j) => {
                f(p);
                f(i);
                f(j);
            }
            DlAxiom::SubPropertyOf(p, q) | DlAxiom::InverseProperties(p, q) => {
                f(p);
                f(q);
            }
            DlAxiom::TransitiveProperty(p) => f(p),
        }
    }

    fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Self, Symbol> {
        Ok(match self {
            DlAxiom::SubClassOf(a, c) => DlAxiom::SubClassOf(map(a, f)?, c.rename(f)?),
            DlAxiom::EquivalentClasses(a, c) => DlAxiom::EquivalentClasses(map(a, f)?, c.rename(f)?),
            DlAxiom::DisjointClasses(a, c) => DlAxiom::DisjointClasses(map(a, f)?, c.rename(f)?),
            DlAxiom::ClassAssertion(c, i) => DlAxiom::ClassAssertion(c.rename(f)?, map(i, f)?),
            DlAxiom::PropertyAssertion(p, i, j) => {
                DlAxiom::PropertyAssertion(map(p, f)?, map(i, f)?, map(j, f)?)
            }
            DlAxiom::SubPropertyOf(p, q) => DlAxiom::SubPropertyOf(map(p, f)?, map(q, f)?),
            DlAxiom::InverseProperties(p, q) => DlAxiom::InverseProperties(map(p, f)?, map(q, f)?),
            DlAxiom::TransitiveProperty(p) => DlAxiom::TransitiveProperty(map(p, f)?),
        })
    }
}

/// Result of parsing a frame document: its axioms plus every declared name.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DlDocument {
    pub declared: BTreeSet<Symbol>,
    pub axioms: Vec<DlAxiom>,
    /// `Prefix:` declarations found in the text.
    pub prefixes: Vec<(String, String)>,
}

impl DlDocument {
    pub fn sentences(&self) -> Vec<Sentence> {
        self.axioms.iter().cloned().map(Sentence::axiom).collect()
    }
}

// ---------------------------------------------------------------- printing

const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;

pub fn print_class_expr(c: &ClassExpr, ctx: &NameContext) -> String {
    let mut out = String::new();
    write_expr(c, ctx, 0, &mut out);
    out
}

fn write_expr(c: &ClassExpr, ctx: &NameContext, min: u8, out: &mut String) {
    let paren = |prec: u8, out: &mut String, body: &mut dyn FnMut(&mut String)| {
        if prec < min {
            out.push('(');
            body(out);
            out.push(')');
        } else {
            body(out);
        }
    };
    match c {
        ClassExpr::Thing => out.push_str("Thing"),
        ClassExpr::Nothing => out.push_str("Nothing"),
        ClassExpr::Named(s) => out.push_str(&ctx.show(s)),
        ClassExpr::Not(a) => paren(NOT, out, &mut |out| {
            out.push_str("not ");
            write_expr(a, ctx, NOT, out);
        }),
        ClassExpr::And(a, b) => paren(AND, out, &mut |out| {
            write_expr(a, ctx, AND, out);
            out.push_str(" and ");
            write_expr(b, ctx, AND + 1, out);
        }),
        ClassExpr::Or(a, b) => paren(OR, out, &mut |out| {
            write_expr(a, ctx, OR, out);
            out.push_str(" or ");
            write_expr(b, ctx, OR + 1, out);
        }),
        ClassExpr::Some(p, a) | ClassExpr::Only(p, a) => paren(NOT, out, &mut |out| {
            out.push_str(&ctx.show(p));
            out.push_str(if matches!(c, ClassExpr::Some(..)) { " some " } else { " only " });
            write_expr(a, ctx, NOT, out);
        }),
    }
}

/// Prints one axiom as a single frame.
pub fn print_dl(a: &DlAxiom, ctx: &NameContext) -> String {
    let n = |s: &Symbol| ctx.show(s);
    let e = |c: &ClassExpr| print_class_expr(c, ctx);
    match a {
        DlAxiom::SubClassOf(c, d) => format!("Class: {} SubClassOf: {}", n(c), e(d)),
        DlAxiom::EquivalentClasses(c, d) => format!("Class: {} EquivalentTo: {}", n(c), e(d)),
        DlAxiom::DisjointClasses(c, d) => format!("Class: {} DisjointWith: {}", n(c), e(d)),
        DlAxiom::ClassAssertion(c, i) => format!("Individual: {} Types: {}", n(i), e(c)),
        DlAxiom::PropertyAssertion(p, i, j) => format!("Individual: {} Facts: {} {}", n(i), n(p), n(j)),
        DlAxiom::SubPropertyOf(p, q) => format!("ObjectProperty: {} SubPropertyOf: {}", n(p), n(q)),
        DlAxiom::InverseProperties(p, q) => format!("ObjectProperty: {} InverseOf: {}", n(p), n(q)),
        DlAxiom::TransitiveProperty(p) => format!("ObjectProperty: {} Characteristics: Transitive", n(p)),
    }
}

/// Prints a whole theory: prefix declarations for every non-default origin,
/// declaration frames for symbols not used by any axiom, then one frame per
/// axiom.
pub fn print_dl_document(
    symbols: &BTreeSet<Symbol>,
    axioms: &[DlAxiom],
    ctx: &NameContext,
) -> String {
    let ctx = ctx.clone().covering(symbols.iter());
    let mut out = String::new();
    for (p, iri) in &ctx.prefixes {
        out.push_str(&format!("Prefix: {p}: <{iri}>\n"));
    }
    if !ctx.prefixes.is_empty() {
        out.push('\n');
    }
    let mut used = BTreeSet::new();
    for a in axioms {
        a.visit_symbols(&mut |s| {
            used.insert(s.clone());
        });
    }
    for s in symbols.difference(&used) {
        let frame = match s.kind {
            Kind::Class => "Class",
            Kind::Individual => "Individual",
            Kind::ObjectProperty => "ObjectProperty",
            Kind::DataProperty => "DataProperty",
            _ => continue,
        };
        out.push_str(&format!("{frame}: {}\n", ctx.show(s)));
    }
    for a in axioms {
        out.push_str(&print_dl(a, &ctx));
        out.push('\n');
    }
    out
}

// ----------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    /// `Keyword:` frame or section keyword.
    Section(String),
    Name(String),
    Iri(String),
    LParen,
    RParen,
    Comma,
    Eof,
}

const SECTIONS: [&str; 13] = [
    "Prefix", "Class", "Individual", "ObjectProperty", "DataProperty", "SubClassOf", "EquivalentTo",
    "DisjointWith", "Types", "Facts", "SubPropertyOf", "InverseOf", "Characteristics",
];

const FRAMES: [&str; 5] = ["Prefix", "Class", "Individual", "ObjectProperty", "DataProperty"];

/// Manchester keywords outside the supported subset.
const UNSUPPORTED: [&str; 22] = [
    "min", "max", "exactly", "value", "Self", "inverse", "that", "Annotations", "Domain", "Range",
    "DisjointUnionOf", "HasKey", "SameAs", "DifferentFrom", "EquivalentClasses", "DisjointClasses",
    "Datatype", "AnnotationProperty", "Import", "Ontology", "SubPropertyChain", "Rule",
];

const CHARACTERISTICS: [&str; 7] = [
    "Transitive", "Functional", "InverseFunctional", "Symmetric", "Asymmetric", "Reflexive",
    "Irreflexive",
];

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_trivia(true, &["#", "//"]);
        let pos = cur.pos();
        let tok = match cur.peek() {
            None => {
                out.push((Tok::Eof, pos));
                return Ok(out);
            }
            Some('(') => {
                cur.bump();
                Tok::LParen
            }
            Some(')') => {
                cur.bump();
                Tok::RParen
            }
            Some(',') => {
                cur.bump();
                Tok::Comma
            }
            Some('<') => {
                cur.bump();
                let iri = cur.eat_while(|c| c != '>' && !c.is_whitespace()).to_string();
                if cur.bump() != Some('>') {
                    return Err(ParseError::syntax(pos, "unterminated IRI"));
                }
                Tok::Iri(iri)
            }
            Some(c) if c.is_ascii_digit() => Tok::Name(cur.eat_while(|c| c.is_ascii_digit()).to_string()),
            Some(c) => {
                let Some(word) = lex_name(&mut cur) else {
                    return Err(ParseError::syntax(pos, format!("unexpected character `{c}`")));
                };
                // `Keyword:` followed by whitespace is a section; `p:local` is a name.
                if cur.peek() == Some(':') && !word.contains(':') {
                    cur.bump();
                    if SECTIONS.contains(&word) || UNSUPPORTED.contains(&word) {
                        Tok::Section(word.to_string())
                    } else {
                        // `f1:` prefix name inside a Prefix: frame.
                        Tok::Name(format!("{word}:"))
                    }
                } else {
                    Tok::Name(word.to_string())
                }
            }
        };
        out.push((tok, pos));
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    ctx: NameContext,
    doc: DlDocument,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
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

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Section(s) => format!("`{s}:`"),
            Tok::Name(n) => format!("`{n}`"),
            Tok::Iri(i) => format!("`<{i}>`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn unsupported(&self, construct: &str) -> ParseError {
        ParseError::UnknownConstruct { pos: self.pos(), construct: construct.to_string() }
    }

    fn symbol(&mut self, kind: Kind) -> Result<Symbol, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Name(n) if UNSUPPORTED.contains(&n.as_str()) => Err(self.unsupported(&n)),
            Tok::Name(n) if !is_expr_keyword(&n) && !n.ends_with(':') => {
                self.bump();
                let (origin, local) = self.ctx.resolve(&n, pos)?;
                let s = Symbol::new(origin, local, kind, 0);
                self.doc.declared.insert(s.clone());
                Ok(s)
            }
            _ => Err(ParseError::expected(pos, &self.describe(), &["name"])),
        }
    }

    fn document(mut self) -> Result<DlDocument, ParseError> {
        loop {
            let pos = self.pos();
            match self.bump() {
                Tok::Eof => return Ok(self.doc),
                Tok::Section(s) => match s.as_str() {
                    "Prefix" => self.prefix_frame()?,
                    "Class" => self.class_frame()?,
                    "Individual" => self.individual_frame()?,
                    "ObjectProperty" => self.property_frame()?,
                    "DataProperty" => {
                        self.symbol(Kind::DataProperty)?;
                    }
                    other if UNSUPPORTED.contains(&other) => {
                        return Err(ParseError::UnknownConstruct { pos, construct: format!("{other}:") })
                    }
                    other => {
                        return Err(ParseError::expected(pos, &format!("`{other}:`"), &["frame keyword"]))
                    }
                },
                _ => {
                    self.at -= 1;
                    return Err(ParseError::expected(pos, &self.describe(), &["frame keyword"]));
                }
            }
        }
    }

    fn prefix_frame(&mut self) -> Result<(), ParseError> {
        let pos = self.pos();
        let prefix = match self.bump() {
            Tok::Name(n) if n.ends_with(':') => n.trim_end_matches(':').to_string(),
            _ => return Err(ParseError::syntax(pos, "expected prefix name followed by `:`")),
        };
        let iri = match self.bump() {
            Tok::Iri(i) => i,
            _ => return Err(ParseError::syntax(self.pos(), "expected `<IRI>`")),
        };
        self.ctx.prefixes.insert(prefix.clone(), iri.clone());
        self.doc.prefixes.push((prefix, iri));
        Ok(())
    }

    fn section(&self) -> Option<String> {
        match self.peek() {
            Tok::Section(s) if !FRAMES.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        }
    }

    fn comma_list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = vec![item(self)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(item(self)?);
        }
        Ok(out)
    }

    fn class_frame(&mut self) -> Result<(), ParseError> {
        let c = self.symbol(Kind::Class)?;
        while let Some(sec) = self.section() {
            let pos = self.pos();
            self.bump();
            let ctor: fn(Symbol, ClassExpr) -> DlAxiom = match sec.as_str() {
                "SubClassOf" => DlAxiom::SubClassOf,
                "EquivalentTo" => DlAxiom::EquivalentClasses,
                "DisjointWith" => DlAxiom::DisjointClasses,
                other if UNSUPPORTED.contains(&other) => {
                    return Err(ParseError::UnknownConstruct { pos, construct: format!("{other}:") })
                }
                other => return Err(ParseError::expected(pos, &format!("`{other}:`"), &["class section"])),
            };
            for d in self.comma_list(|p| p.expr())? {
                self.doc.axioms.push(ctor(c.clone(), d));
            }
        }
        Ok(())
    }

    fn individual_frame(&mut self) -> Result<(), ParseError> {
        let i = self.symbol(Kind::Individual)?;
        while let Some(sec) = self.section() {
            let pos = self.pos();
            self.bump();
            match sec.as_str() {
                "Types" => {
                    for c in self.comma_list(|p| p.expr())? {
                        self.doc.axioms.push(DlAxiom::ClassAssertion(c, i.clone()));
                    }
                }
                "Facts" => {
                    let facts = self.comma_list(|p| {
                        if matches!(p.peek(), Tok::Name(n) if n == "not") {
                            return Err(p.unsupported("negative property assertion"));
                        }
                        let prop = p.symbol(Kind::ObjectProperty)?;
                        let j = p.symbol(Kind::Individual)?;
                        Ok((prop, j))
                    })?;
                    for (p, j) in facts {
                        self.doc.axioms.push(DlAxiom::PropertyAssertion(p, i.clone(), j));
                    }
                }
                other if UNSUPPORTED.contains(&other) => {
                    return Err(ParseError::UnknownConstruct { pos, construct: format!("{other}:") })
                }
                other => {
                    return Err(ParseError::expected(pos, &format!("`{other}:`"), &["individual section"]))
                }
            }
        }
        Ok(())
    }

    fn property_frame(&mut self) -> Result<(), ParseError> {
        let p = self.symbol(Kind::ObjectProperty)?;
        while let Some(sec) = self.section() {
            let pos = self.pos();
            self.bump();
            match sec.as_str() {
                "SubPropertyOf" => {
                    for q in self.comma_list(|s| s.symbol(Kind::ObjectProperty))? {
                        self.doc.axioms.push(DlAxiom::SubPropertyOf(p.clone(), q));
                    }
                }
                "InverseOf" => {
                    for q in self.comma_list(|s| s.symbol(Kind::ObjectProperty))? {
                        self.doc.axioms.push(DlAxiom::InverseProperties(p.clone(), q));
                    }
                }
                "Characteristics" => {
                    let chars = self.comma_list(|s| {
                        let pos = s.pos();
                        match s.bump() {
                            Tok::Name(n) if n == "Transitive" => Ok(()),
                            Tok::Name(n) if CHARACTERISTICS.contains(&n.as_str()) => {
                                Err(ParseError::UnknownConstruct { pos, construct: n })
                            }
                            _ => Err(ParseError::syntax(pos, "expected property characteristic")),
                        }
                    })?;
                    for () in chars {
                        self.doc.axioms.push(DlAxiom::TransitiveProperty(p.clone()));
                    }
                }
                other if UNSUPPORTED.contains(&other) => {
                    return Err(ParseError::UnknownConstruct { pos, construct: format!("{other}:") })
                }
                other => {
                    return Err(ParseError::expected(pos, &format!("`{other}:`"), &["property section"]))
                }
            }
        }
        Ok(())
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == kw)
    }

    fn expr(&mut self) -> Result<ClassExpr, ParseError> {
        let mut lhs = self.conj()?;
        while self.is_kw("or") {
            self.bump();
            lhs = ClassExpr::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<ClassExpr, ParseError> {
        let mut lhs = self.unary()?;
        while self.is_kw("and") {
            self.bump();
            lhs = ClassExpr::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ClassExpr, ParseError> {
        if self.is_kw("not") {
            self.bump();
            return Ok(ClassExpr::not(self.unary()?));
        }
        // `p some C` / `p only C`
        let pair = match (self.peek(), self.toks.get(self.at + 1)) {
            (Tok::Name(n), Some((Tok::Name(q), _))) => Some((n.clone(), q.clone())),
            _ => None,
        };
        if let Some((n, q)) = pair {
            if !is_expr_keyword(&n) {
                match q.as_str() {
                    "some" | "only" => {
                        let some = q == "some";
                        let p = self.symbol(Kind::ObjectProperty)?;
                        self.bump();
                        let filler = self.unary()?;
                        return Ok(if some { ClassExpr::some(p, filler) } else { ClassExpr::only(p, filler) });
                    }
                    kw if UNSUPPORTED.contains(&kw) => {
                        self.bump();
                        return Err(self.unsupported(kw));
                    }
                    _ => {}
                }
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ClassExpr, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(ParseError::expected(self.pos(), &self.describe(), &["`)`"]));
                }
                self.bump();
                Ok(e)
            }
            Tok::Name(n) if n == "Thing" || n == "owl:Thing" => {
                self.bump();
                Ok(ClassExpr::Thing)
            }
            Tok::Name(n) if n == "Nothing" || n == "owl:Nothing" => {
                self.bump();
                Ok(ClassExpr::Nothing)
            }
            Tok::Name(n) if UNSUPPORTED.contains(&n.as_str()) => Err(self.unsupported(&n)),
            _ => Ok(ClassExpr::Named(self.symbol(Kind::Class)?)),
        }
    }
}

fn is_expr_keyword(n: &str) -> bool {
    matches!(n, "not" | "and" | "or" | "some" | "only" | "Thing" | "Nothing" | "owl:Thing" | "owl:Nothing")
}

/// Parses a frame document. `Prefix:` frames extend `ctx` for the rest of
/// the text.
pub fn parse_dl_frame(text: &str, ctx: &NameContext) -> Result<DlDocument, ParseError> {
    if let Some(pos) = find_brace(text) {
        return Err(ParseError::UnknownConstruct { pos, construct: "enumeration `{...}`".into() });
    }
    let p = Parser { toks: tokenize(text)?, at: 0, ctx: ctx.clone(), doc: DlDocument::default() };
    p.document()
}

fn find_brace(text: &str) -> Option<Pos> {
    let mut cur = Cursor::new(text);
    loop {
        cur.skip_trivia(true, &["#", "//"]);
        match cur.peek()? {
            '{' => return Some(cur.pos()),
            '<' => {
                cur.eat_while(|c| c != '>');
            }
            _ => {
                cur.bump();
            }
        }
    }
}

/// Parses a frame document into unlabelled sentences plus declarations.
pub fn parse_dl_sentences(text: &str, ctx: &NameContext) -> Result<(BTreeSet<Symbol>, Vec<Sentence>), ParseError> {
    let doc = parse_dl_frame(text, ctx)?;
    let sentences = doc.axioms.into_iter().map(|a| Sentence::axiom(Ast::Dl(a))).collect();
    Ok((doc.declared, sentences))
}
