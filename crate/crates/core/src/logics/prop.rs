//! Propositional logic: formulas over propositional variables, a text
//! grammar with the usual precedences, and a matching printer.
//!
//! Grammar (loosest first): `iff` (left), `impl` (right), `or` (left),
//! `and` (left), `not`, then atoms `p`, `true`, `false`, `( F )`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::kernel::{Kind, LogicId, Sentence, Symbol, Syntax};
use crate::text::{lex_name, Cursor, NameContext, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PropFormula {
    True,
    False,
    Atom(Symbol),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
    Iff(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn atom(s: Symbol) -> Self {
        PropFormula::Atom(s)
    }

    pub fn var(origin: &str, name: &str) -> Self {
        PropFormula::Atom(Symbol::new(origin, name, Kind::PropVar, 0))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: PropFormula) -> Self {
        PropFormula::Not(Box::new(f))
    }

    pub fn and(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: PropFormula, b: PropFormula) -> Self {
        PropFormula::Iff(Box::new(a), Box::new(b))
    }

    /// Truth value under `assignment`; unassigned atoms are false.
    pub fn eval(&self, assignment: &BTreeMap<Symbol, bool>) -> bool {
        match self {
            PropFormula::True => true,
            PropFormula::False => false,
            PropFormula::Atom(s) => assignment.get(s).copied().unwrap_or(false),
            PropFormula::Not(f) => !f.eval(assignment),
            PropFormula::And(a, b) => a.eval(assignment) && b.eval(assignment),
            PropFormula::Or(a, b) => a.eval(assignment) || b.eval(assignment),
            PropFormula::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
            PropFormula::Iff(a, b) => a.eval(assignment) == b.eval(assignment),
        }
    }
}

impl Syntax for PropFormula {
    const LOGIC: LogicId = LogicId::Prop;

    fn visit_symbols<'a>(&'a self, f: &mut dyn FnMut(&'a Symbol)) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Atom(s) => f(s),
            PropFormula::Not(a) => a.visit_symbols(f),
            PropFormula::And(a, b)
            | PropFormula::Or(a, b)
            | PropFormula::Implies(a, b)
            | PropFormula::Iff(a, b) => {
                a.visit_symbols(f);
                b.visit_symbols(f);
            }
        }
    }

    fn rename(&self, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>) -> Result<Self, Symbol> {
        let bin = |a: &PropFormula, b: &PropFormula, f: &mut dyn FnMut(&Symbol) -> Option<Symbol>| {
            Ok::<_, Symbol>((Box::new(a.rename(f)?), Box::new(b.rename(f)?)))
        };
        Ok(match self {
            PropFormula::True => PropFormula::True,
            PropFormula::False => PropFormula::False,
            PropFormula::Atom(s) => PropFormula::Atom(f(s).ok_or_else(|| s.clone())?),
            PropFormula::Not(a) => PropFormula::Not(Box::new(a.rename(f)?)),
            PropFormula::And(a, b) => {
                let (a, b) = bin(a, b, f)?;
                PropFormula::And(a, b)
            }
            PropFormula::Or(a, b) => {
                let (a, b) = bin(a, b, f)?;
                PropFormula::Or(a, b)
            }
            PropFormula::Implies(a, b) => {
                let (a, b) = bin(a, b, f)?;
                PropFormula::Implies(a, b)
            }
            PropFormula::Iff(a, b) => {
                let (a, b) = bin(a, b, f)?;
                PropFormula::Iff(a, b)
            }
        })
    }
}

// Binding strength used by the printer.
const IFF: u8 = 1;
const IMPL: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;

pub fn print_prop(f: &PropFormula, ctx: &NameContext) -> String {
    let mut out = String::new();
    write_prop(f, ctx, 0, &mut out);
    out
}

fn write_prop(f: &PropFormula, ctx: &NameContext, min: u8, out: &mut String) {
    let (prec, op, left_min, right_min, a, b) = match f {
        PropFormula::True => return out.push_str("true"),
        PropFormula::False => return out.push_str("false"),
        PropFormula::Atom(s) => return out.push_str(&ctx.show(s)),
        PropFormula::Not(a) => {
            let wrap = NOT < min;
            if wrap {
                out.push('(');
            }
            out.push_str("not ");
            write_prop(a, ctx, NOT, out);
            if wrap {
                out.push(')');
            }
            return;
        }
        PropFormula::Iff(a, b) => (IFF, "iff", IFF, IFF + 1, a, b),
        PropFormula::Implies(a, b) => (IMPL, "impl", IMPL + 1, IMPL, a, b),
        PropFormula::Or(a, b) => (OR, "or", OR, OR + 1, a, b),
        PropFormula::And(a, b) => (AND, "and", AND, AND + 1, a, b),
    };
    let wrap = prec < min;
    if wrap {
        out.push('(');
    }
    write_prop(a, ctx, left_min, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    write_prop(b, ctx, right_min, out);
    if wrap {
        out.push(')');
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    LParen,
    RParen,
    Eq,
    Sep,
    Eof,
}

struct Lexer<'a> {
    cur: Cursor<'a>,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, Pos), ParseError> {
        self.cur.skip_trivia(false, &["%", "#"]);
        let pos = self.cur.pos();
        let tok = match self.cur.peek() {
            None => Tok::Eof,
            Some('\n') | Some(';') => {
                self.cur.bump();
                Tok::Sep
            }
            Some('(') => {
                self.cur.bump();
                Tok::LParen
            }
            Some(')') => {
                self.cur.bump();
                Tok::RParen
            }
            Some('=') => {
                self.cur.bump();
                Tok::Eq
            }
            Some(c) => match lex_name(&mut self.cur) {
                Some(n) => Tok::Name(n.to_string()),
                None => return Err(ParseError::syntax(pos, format!("unexpected character `{c}`"))),
            },
        };
        Ok((tok, pos))
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut lx = Lexer { cur: Cursor::new(text) };
    let mut toks = Vec::new();
    loop {
        let t = lx.next()?;
        let eof = t.0 == Tok::Eof;
        toks.push(t);
        if eof {
            return Ok(toks);
        }
    }
}

const KEYWORDS: [&str; 7] = ["true", "false", "not", "and", "or", "impl", "iff"];

struct Parser<'c> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    ctx: &'c NameContext,
}

impl Parser<'_> {
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

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Name(n) if n == kw)
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Name(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Sep => "end of statement".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn formula(&mut self) -> Result<PropFormula, ParseError> {
        let mut lhs = self.implication()?;
        while self.is_kw("iff") {
            self.bump();
            lhs = PropFormula::iff(lhs, self.implication()?);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<PropFormula, ParseError> {
        let lhs = self.disjunction()?;
        if self.is_kw("impl") {
            self.bump();
            return Ok(PropFormula::implies(lhs, self.implication()?));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<PropFormula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.is_kw("or") {
            self.bump();
            lhs = PropFormula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<PropFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.is_kw("and") {
            self.bump();
            lhs = PropFormula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PropFormula, ParseError> {
        if self.is_kw("not") {
            self.bump();
            return Ok(PropFormula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<PropFormula, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Name(n) if n == "true" => {
                self.bump();
                Ok(PropFormula::True)
            }
            Tok::Name(n) if n == "false" => {
                self.bump();
                Ok(PropFormula::False)
            }
            Tok::Name(n) if !KEYWORDS.contains(&n.as_str()) => {
                self.bump();
                let (origin, local) = self.ctx.resolve(&n, pos)?;
                Ok(PropFormula::Atom(Symbol::new(origin, local, Kind::PropVar, 0)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                if *self.peek() != Tok::RParen {
                    return Err(ParseError::expected(self.pos(), &self.describe(), &["`)`"]));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(ParseError::expected(
                pos,
                &self.describe(),
                &["variable", "`true`", "`false`", "`not`", "`(`"],
            )),
        }
    }

    fn skip_separators(&mut self) {
        while *self.peek() == Tok::Sep {
            self.bump();
        }
    }
}

/// Parses a single propositional formula.
pub fn parse_prop(text: &str, ctx: &NameContext) -> Result<PropFormula, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, ctx };
    p.skip_separators();
    let f = p.formula()?;
    p.skip_separators();
    if *p.peek() != Tok::Eof {
        return Err(ParseError::expected(p.pos(), &p.describe(), &["end of input"]));
    }
    Ok(f)
}

/// Parses a propositional theory text: one formula per line (or separated by
/// `;`), each optionally labelled as `name = formula`. `%` and `#` start
/// comments.
pub fn parse_prop_document(text: &str, ctx: &NameContext) -> Result<Vec<Sentence>, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0, ctx };
    let mut out = Vec::new();
    loop {
        p.skip_separators();
        if *p.peek() == Tok::Eof {
            return Ok(out);
        }
        let mut label = None;
        if let (Tok::Name(n), Some((Tok::Eq, _))) = (p.peek().clone(), p.toks.get(p.at + 1)) {
            if !KEYWORDS.contains(&n.as_str()) {
                label = Some(n);
                p.bump();
                p.bump();
            }
        }
        let f = p.formula()?;
        if !matches!(p.peek(), Tok::Sep | Tok::Eof) {
            return Err(ParseError::expected(p.pos(), &p.describe(), &["end of statement"]));
        }
        let mut s = Sentence::axiom(f);
        s.label = label;
        out.push(s);
    }
}

/// Inverse of [`parse_prop_document`].
pub fn print_prop_document(sentences: &[Sentence], ctx: &NameContext) -> String {
    let mut out = String::new();
    for s in sentences {
        if let crate::kernel::Ast::Prop(f) = &s.ast {
            if let Some(l) = &s.label {
                out.push_str(l);
                out.push_str(" = ");
            }
            out.push_str(&print_prop(f, ctx));
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> NameContext {
        NameContext::new("")
    }

    fn v(n: &str) -> PropFormula {
        PropFormula::var("", n)
    }

    #[test]
    fn and_not() {
        assert_eq!(
            parse_prop("p and not q", &ctx()).unwrap(),
            PropFormula::and(v("p"), PropFormula::not(v("q")))
        );
    }

    #[test]
    fn constant() {
        assert_eq!(parse_prop("true", &ctx()).unwrap(), PropFormula::True);
    }

    #[test]
    fn malformed_is_syntax_error() {
        let err = parse_prop("p and or", &ctx()).unwrap_err();
        match err {
            ParseError::Syntax { pos, .. } => assert_eq!(pos, Pos { line: 1, column: 7 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        // not > and > or > impl > iff, impl to the right
        let f = parse_prop("a or b and c impl d impl e iff f", &ctx()).unwrap();
        let expected = PropFormula::iff(
            PropFormula::implies(
                PropFormula::or(v("a"), PropFormula::and(v("b"), v("c"))),
                PropFormula::implies(v("d"), v("e")),
            ),
            v("f"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn printer_keeps_needed_parens() {
        let f = PropFormula::and(v("a"), PropFormula::and(v("b"), v("c")));
        assert_eq!(print_prop(&f, &ctx()), "a and (b and c)");
        let g = PropFormula::implies(PropFormula::implies(v("a"), v("b")), v("c"));
        assert_eq!(print_prop(&g, &ctx()), "(a impl b) impl c");
        let h = PropFormula::not(PropFormula::or(v("a"), v("b")));
        assert_eq!(print_prop(&h, &ctx()), "not (a or b)");
    }

    #[test]
    fn document_with_labels() {
        let doc = "ax1 = p\n% comment\nax2 = p impl q; q\n";
        let sents = parse_prop_document(doc, &ctx()).unwrap();
        assert_eq!(sents.len(), 3);
        assert_eq!(sents[0].label.as_deref(), Some("ax1"));
        assert_eq!(sents[2].label, None);
        let printed = print_prop_document(&sents, &ctx());
        assert_eq!(parse_prop_document(&printed, &ctx()).unwrap(), sents);
    }
}
