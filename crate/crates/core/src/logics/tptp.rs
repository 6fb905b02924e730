//! TPTP FOF output and input.
//!
//! Symbol names are mapped to TPTP lower words by [`TptpNames`]: the first
//! letter is lower-cased, `_` becomes `__`, `-` becomes `_m`, `.` becomes
//! `_p` and any other character `c` becomes `_u<hex>_`. Names that would
//! still collide within one symbol set get `_2`, `_3`, ... suffixes, which
//! the escaping never produces on its own, so the mapping is injective on
//! every finite set and the table inverts it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::kernel::{Kind, Role, Sentence, Symbol};
use crate::logics::fol::{FolFormula, FolTerm};
use crate::text::{Cursor, ParseError, Pos};

/// Escapes `name` into the body of a TPTP lower word (before disambiguation).
pub fn escape_name(name: &str) -> String {
    let mut out = String::with_capacity(name.len() + 2);
    for (i, c) in name.chars().enumerate() {
        match c {
            'A'..='Z' if i == 0 => out.push(c.to_ascii_lowercase()),
            'a'..='z' | 'A'..='Z' | '0'..='9' => out.push(c),
            '_' => out.push_str("__"),
            '-' => out.push_str("_m"),
            '.' => out.push_str("_p"),
            c => {
                let _ = write!(out, "_u{:x}_", c as u32);
            }
        }
    }
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert_str(0, "x_0");
    }
    out
}

/// Inverse of [`escape_name`] up to the case of the first letter.
pub fn unescape_name(escaped: &str) -> Option<String> {
    let body = escaped.strip_prefix("x_0").unwrap_or(escaped);
    let mut out = String::new();
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '_' {
            out.push(c);
            continue;
        }
        match chars.next()? {
            '_' => out.push('_'),
            'm' => out.push('-'),
            'p' => out.push('.'),
            'u' => {
                let hex: String = chars.by_ref().take_while(|&c| c != '_').collect();
                out.push(char::from_u32(u32::from_str_radix(&hex, 16).ok()?)?);
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Bijection between a finite symbol set and TPTP functor names.
#[derive(Clone, Debug, Default)]
pub struct TptpNames {
    forward: BTreeMap<Symbol, String>,
    backward: HashMap<String, Symbol>,
}

impl TptpNames {
    pub fn for_symbols<'a>(symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let sorted: BTreeSet<&Symbol> = symbols.into_iter().collect();
        let mut table = TptpNames::default();
        for s in sorted {
            let base = escape_name(&s.name);
            let name = if table.backward.contains_key(&base) {
                (2..)
                    .map(|k| format!("{base}_{k}"))
                    .find(|n| !table.backward.contains_key(n))
                    .expect("unbounded search")
            } else {
                base
            };
            table.backward.insert(name.clone(), s.clone());
            table.forward.insert(s.clone(), name);
        }
        table
    }

    pub fn for_sentences<'a>(sentences: impl IntoIterator<Item = &'a Sentence>) -> Self {
        let mut syms = BTreeSet::new();
        for s in sentences {
            s.ast.visit_symbols(&mut |x| {
                syms.insert(x.clone());
            });
        }
        TptpNames::for_symbols(&syms)
    }

    pub fn name(&self, s: &Symbol) -> &str {
        self.forward
            .get(s)
            .unwrap_or_else(|| panic!("symbol {s} missing from TPTP name table"))
    }

    pub fn symbol(&self, name: &str) -> Option<&Symbol> {
        self.backward.get(name)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}

fn is_upper_word(v: &str) -> bool {
    let mut cs = v.chars();
    matches!(cs.next(), Some('A'..='Z')) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn write_term(t: &FolTerm, names: &TptpNames, out: &mut String) {
    match t {
        FolTerm::Var(v) => {
            debug_assert!(is_upper_word(v), "variable {v} is not a TPTP upper word");
            out.push_str(v)
        }
        FolTerm::Const(c) => out.push_str(names.name(c)),
    }
}

/// Writes a formula in TPTP FOF syntax. Binary connectives are always
/// parenthesised.
pub fn write_formula(f: &FolFormula, names: &TptpNames, out: &mut String) {
    let bin = |a: &FolFormula, op: &str, b: &FolFormula, out: &mut String| {
        out.push('(');
        write_formula(a, names, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        write_formula(b, names, out);
        out.push(')');
    };
    match f {
        FolFormula::True => out.push_str("$true"),
        FolFormula::False => out.push_str("$false"),
        FolFormula::Atom { pred, args } => {
            out.push_str(names.name(pred));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(a, names, out);
                }
                out.push(')');
            }
        }
        FolFormula::Equal(a, b) => {
            out.push('(');
            write_term(a, names, out);
            out.push_str(" = ");
            write_term(b, names, out);
            out.push(')');
        }
        FolFormula::Not(a) => {
            out.push('~');
            if matches!(**a, FolFormula::Forall(..) | FolFormula::Exists(..)) {
                out.push('(');
                write_formula(a, names, out);
                out.push(')');
            } else {
                write_formula(a, names, out);
            }
        }
        FolFormula::And(a, b) => bin(a, "&", b, out),
        FolFormula::Or(a, b) => bin(a, "|", b, out),
        FolFormula::Implies(a, b) => bin(a, "=>", b, out),
        FolFormula::Iff(a, b) => bin(a, "<=>", b, out),
        FolFormula::Forall(vs, body) | FolFormula::Exists(vs, body) => {
            out.push(if matches!(f, FolFormula::Forall(..)) { '!' } else { '?' });
            out.push('[');
            out.push_str(&vs.join(","));
            out.push_str("]: ");
            write_formula(body, names, out);
        }
    }
}

pub fn role_name(role: Role) -> &'static str {
    match role {
        Role::Axiom => "axiom",
        Role::Conjecture => "conjecture",
    }
}

/// One annotated formula `fof(name, role, formula).` using names drawn from
/// the formula's own symbols.
pub fn print_tptp(f: &FolFormula, name: &str, role: Role) -> String {
    let s = Sentence::axiom(f.clone());
    let names = TptpNames::for_sentences([&s]);
    print_tptp_with(f, name, role, &names)
}

pub fn print_tptp_with(f: &FolFormula, name: &str, role: Role, names: &TptpNames) -> String {
    let mut out = format!("fof({}, {}, ", escape_name(name), role_name(role));
    write_formula(f, names, &mut out);
    out.push_str(").");
    out
}

/// Renders FOL sentences as a TPTP problem, one annotated formula per line.
/// Labels become formula names (escaped and made unique); unlabelled
/// sentences are named `ax<k>` / `conj<k>`.
pub fn print_problem(sentences: &[Sentence], names: &TptpNames) -> String {
    let mut taken = std::collections::HashSet::new();
    let mut out = String::new();
    for (i, s) in sentences.iter().enumerate() {
        let crate::kernel::Ast::Fol(f) = &s.ast else { continue };
        let fallback = match s.role {
            Role::Axiom => format!("ax{}", i + 1),
            Role::Conjecture => format!("conj{}", i + 1),
        };
        let base = escape_name(s.label.as_deref().unwrap_or(&fallback));
        let mut fname = base.clone();
        let mut k = 2;
        while !taken.insert(fname.clone()) {
            fname = format!("{base}_{k}");
            k += 1;
        }
        let mut line = format!("fof({fname}, {}, ", role_name(s.role));
        write_formula(f, names, &mut line);
        line.push_str(").\n");
        out.push_str(&line);
    }
    out
}

/// How functor names read from TPTP text become symbols.
pub struct TptpReader<'a> {
    /// Origin for names not found in `names`.
    pub origin: &'a str,
    /// Reverses a table produced by the printer.
    pub names: Option<&'a TptpNames>,
    pub allow_equality: bool,
}

impl<'a> TptpReader<'a> {
    pub fn new(origin: &'a str) -> Self {
        TptpReader { origin, names: None, allow_equality: false }
    }

    pub fn with_names(mut self, names: &'a TptpNames) -> Self {
        self.names = Some(names);
        self
    }

    fn symbol(&self, name: &str, kind: Kind, arity: usize) -> Symbol {
        if let Some(s) = self.names.and_then(|t| t.symbol(name)) {
            if s.kind == kind && s.arity == arity {
                return s.clone();
            }
        }
        Symbol::new(self.origin, name, kind, arity)
    }

    /// Parses a sequence of `fof(name, role, formula).` entries.
    pub fn parse_problem(&self, text: &str) -> Result<Vec<Sentence>, ParseError> {
        let toks = lex(text)?;
        let mut p = Parser { toks, at: 0, reader: self };
        let mut out = Vec::new();
        while p.peek() != &T::Eof {
            out.push(p.annotated()?);
        }
        Ok(out)
    }

    /// Parses a bare formula.
    pub fn parse_formula(&self, text: &str) -> Result<FolFormula, ParseError> {
        let toks = lex(text)?;
        let mut p = Parser { toks, at: 0, reader: self };
        let f = p.closed_formula()?;
        p.expect(&T::Eof, "end of input")?;
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum T {
    Lower(String),
    Upper(String),
    Dollar(String),
    Punct(&'static str),
    Eof,
}

const PUNCT: [&str; 18] = [
    "<=>", "<~>", "=>", "<=", "~|", "~&", "!=", "(", ")", "[", "]", ",", ".", ":", "!", "?", "~", "&",
];

fn lex(text: &str) -> Result<Vec<(T, Pos)>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        cur.skip_trivia(true, &["%"]);
        if cur.starts_with("/*") {
            let pos = cur.pos();
            while !cur.starts_with("*/") {
                if cur.bump().is_none() {
                    return Err(ParseError::syntax(pos, "unterminated comment"));
                }
            }
            cur.bump();
            cur.bump();
            continue;
        }
        let pos = cur.pos();
        let Some(c) = cur.peek() else {
            out.push((T::Eof, pos));
            return Ok(out);
        };
        let word = |c: char| c.is_ascii_alphanumeric() || c == '_';
        let tok = if c.is_ascii_lowercase() {
            T::Lower(cur.eat_while(word).to_string())
        } else if c.is_ascii_uppercase() {
            T::Upper(cur.eat_while(word).to_string())
        } else if c == '$' {
            cur.bump();
            T::Dollar(cur.eat_while(word).to_string())
        } else if c == '\'' {
            cur.bump();
            let mut s = String::new();
            loop {
                match cur.bump() {
                    Some('\\') => s.extend(cur.bump()),
                    Some('\'') => break,
                    Some(ch) => s.push(ch),
                    None => return Err(ParseError::syntax(pos, "unterminated quoted atom")),
                }
            }
            T::Lower(s)
        } else if c == '|' {
            cur.bump();
            T::Punct("|")
        } else if c == '=' && !cur.starts_with("=>") {
            cur.bump();
            T::Punct("=")
        } else if let Some(p) = PUNCT.iter().find(|p| cur.starts_with(p)) {
            for _ in 0..p.len() {
                cur.bump();
            }
            T::Punct(p)
        } else {
            return Err(ParseError::syntax(pos, format!("unexpected character `{c}`")));
        };
        out.push((tok, pos));
    }
}

struct Parser<'r, 'a> {
    toks: Vec<(T, Pos)>,
    at: usize,
    reader: &'r TptpReader<'a>,
}

impl Parser<'_, '_> {
    fn peek(&self) -> &T {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> T {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn describe(&self) -> String {
        match self.peek() {
            T::Lower(s) | T::Upper(s) => format!("`{s}`"),
            T::Dollar(s) => format!("`${s}`"),
            T::Punct(p) => format!("`{p}`"),
            T::Eof => "end of input".to_string(),
        }
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), T::Punct(q) if *q == p)
    }

    fn expect(&mut self, t: &T, what: &str) -> Result<(), ParseError> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::expected(self.pos(), &self.describe(), &[what]))
        }
    }

    fn punct(&mut self, p: &'static str) -> Result<(), ParseError> {
        self.expect(&T::Punct(p), &format!("`{p}`"))
    }

    fn annotated(&mut self) -> Result<Sentence, ParseError> {
        let pos = self.pos();
        match self.bump() {
            T::Lower(kw) if kw == "fof" => {}
            T::Lower(kw) if ["cnf", "tff", "thf", "include"].contains(&kw.as_str()) => {
                return Err(ParseError::UnknownConstruct { pos, construct: kw });
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                return Err(ParseError::expected(pos, &self.describe(), &["`fof`"]));
            }
        }
        self.punct("(")?;
        let name = match self.bump() {
            T::Lower(n) | T::Upper(n) => n,
            _ => return Err(ParseError::syntax(pos, "expected formula name")),
        };
        self.punct(",")?;
        let rpos = self.pos();
        let role = match self.bump() {
            T::Lower(r) => match r.as_str() {
                "axiom" | "hypothesis" | "definition" | "lemma" | "theorem" | "assumption" => Role::Axiom,
                "conjecture" => Role::Conjecture,
                _ => return Err(ParseError::UnknownConstruct { pos: rpos, construct: format!("role {r}") }),
            },
            _ => return Err(ParseError::syntax(rpos, "expected formula role")),
        };
        self.punct(",")?;
        let f = self.closed_formula()?;
        if self.is(",") {
            // Skip source/useful-info annotations.
            let mut depth = 0usize;
            loop {
                match self.peek() {
                    T::Eof => return Err(ParseError::syntax(self.pos(), "unterminated annotation")),
                    T::Punct("(") | T::Punct("[") => depth += 1,
                    T::Punct(")") | T::Punct("]") if depth == 0 => break,
                    T::Punct(")") | T::Punct("]") => depth -= 1,
                    _ => {}
                }
                self.bump();
            }
        }
        self.punct(")")?;
        self.punct(".")?;
        Ok(Sentence { ast: f.into(), label: Some(name), role })
    }

    fn closed_formula(&mut self) -> Result<FolFormula, ParseError> {
        let pos = self.pos();
        let f = self.formula()?;
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(ParseError::syntax(pos, format!("unbound variable {v}")));
        }
        Ok(f)
    }

    fn formula(&mut self) -> Result<FolFormula, ParseError> {
        let lhs = self.unitary()?;
        let op = match self.peek() {
            T::Punct(p) if ["<=>", "=>", "<=", "<~>", "~|", "~&"].contains(p) => *p,
            T::Punct("&") | T::Punct("|") => {
                let op = if self.is("&") { "&" } else { "|" };
                let mut acc = lhs;
                while self.is(op) {
                    self.bump();
                    let rhs = self.unitary()?;
                    acc = if op == "&" { FolFormula::and(acc, rhs) } else { FolFormula::or(acc, rhs) };
                }
                return Ok(acc);
            }
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.unitary()?;
        Ok(match op {
            "<=>" => FolFormula::iff(lhs, rhs),
            "=>" => FolFormula::implies(lhs, rhs),
            "<=" => FolFormula::implies(rhs, lhs),
            "<~>" => FolFormula::not(FolFormula::iff(lhs, rhs)),
            "~|" => FolFormula::not(FolFormula::or(lhs, rhs)),
            _ => FolFormula::not(FolFormula::and(lhs, rhs)),
        })
    }

    fn unitary(&mut self) -> Result<FolFormula, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            T::Punct("(") => {
                self.bump();
                let f = self.formula()?;
                self.punct(")")?;
                Ok(f)
            }
            T::Punct("~") => {
                self.bump();
                Ok(FolFormula::not(self.unitary()?))
            }
            T::Punct(q @ ("!" | "?")) => {
                self.bump();
                self.punct("[")?;
                let mut vars = Vec::new();
                loop {
                    match self.bump() {
                        T::Upper(v) => vars.push(v),
                        _ => return Err(ParseError::syntax(self.pos(), "expected variable")),
                    }
                    if self.is(",") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                self.punct("]")?;
                self.punct(":")?;
                let body = Box::new(self.unitary()?);
                Ok(if q == "!" { FolFormula::Forall(vars, body) } else { FolFormula::Exists(vars, body) })
            }
            T::Dollar(d) if d == "true" => {
                self.bump();
                Ok(FolFormula::True)
            }
            T::Dollar(d) if d == "false" => {
                self.bump();
                Ok(FolFormula::False)
            }
            T::Upper(v) => {
                self.bump();
                self.equality(FolTerm::Var(v), pos)
            }
            T::Lower(name) => {
                self.bump();
                let mut args = Vec::new();
                if self.is("(") {
                    self.bump();
                    loop {
                        args.push(self.term()?);
                        if self.is(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    self.punct(")")?;
                }
                if self.is("=") || self.is("!=") {
                    if !args.is_empty() {
                        return Err(ParseError::UnknownConstruct { pos, construct: "function term".into() });
                    }
                    let c = FolTerm::Const(self.reader.symbol(&name, Kind::Individual, 0));
                    return self.equality(c, pos);
                }
                let pred = self.reader.symbol(&name, Kind::Predicate, args.len());
                Ok(FolFormula::Atom { pred, args })
            }
            _ => Err(ParseError::expected(pos, &self.describe(), &["formula"])),
        }
    }

    fn equality(&mut self, lhs: FolTerm, pos: Pos) -> Result<FolFormula, ParseError> {
        let negated = if self.is("=") {
            false
        } else if self.is("!=") {
            true
        } else {
            return Err(ParseError::expected(self.pos(), &self.describe(), &["`=`", "`!=`"]));
        };
        if !self.reader.allow_equality {
            return Err(ParseError::Equality { pos });
        }
        self.bump();
        let rhs = self.term()?;
        let eq = FolFormula::Equal(lhs, rhs);
        Ok(if negated { FolFormula::not(eq) } else { eq })
    }

    fn term(&mut self) -> Result<FolTerm, ParseError> {
        let pos = self.pos();
        match self.bump() {
            T::Upper(v) => Ok(FolTerm::Var(v)),
            T::Lower(c) => {
                if self.is("(") {
                    return Err(ParseError::UnknownConstruct { pos, construct: "function term".into() });
                }
                Ok(FolTerm::Const(self.reader.symbol(&c, Kind::Individual, 0)))
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(ParseError::expected(pos, &self.describe(), &["term"]))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str, args: Vec<FolTerm>) -> FolFormula {
        FolFormula::pred("o#", name, args)
    }

    #[test]
    fn universally_quantified_axiom() {
        let x = || vec![FolTerm::var("X")];
        let f = FolFormula::forall(&["X"], FolFormula::implies(p("Female", x()), FolFormula::not(p("Male", x()))));
        assert_eq!(print_tptp(&f, "ax1", Role::Axiom), "fof(ax1, axiom, ![X]: (female(X) => ~male(X))).");
    }

    #[test]
    fn ground_conjecture() {
        let f = p("Female", vec![FolTerm::constant("o#", "berta")]);
        assert_eq!(print_tptp(&f, "c", Role::Conjecture), "fof(c, conjecture, female(berta)).");
    }

    #[test]
    fn nullary_predicates() {
        let f = FolFormula::or(p("p", vec![]), FolFormula::not(p("p", vec![])));
        assert_eq!(print_tptp(&f, "t", Role::Axiom), "fof(t, axiom, (p | ~p)).");
    }

    #[test]
    fn escaping_round_trips() {
        for n in ["physical-endurant", "a_b", "x.y", "Chris", "1.1", "ü", "__", "x_0a"] {
            let e = escape_name(n);
            assert!(e.starts_with(|c: char| c.is_ascii_lowercase()), "{e}");
            assert!(e.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'), "{e}");
            let back = unescape_name(&e).unwrap();
            assert!(back == n || back == format!("{}{}", n[..1].to_lowercase(), &n[1..]), "{n} -> {e} -> {back}");
        }
    }

    #[test]
    fn table_disambiguates_case_and_origin_clashes() {
        let a = Symbol::new("o#", "Female", Kind::Predicate, 1);
        let b = Symbol::new("o#", "female", Kind::Predicate, 1);
        let c = Symbol::new("q#", "Female", Kind::Predicate, 1);
        let t = TptpNames::for_symbols([&a, &b, &c]);
        let names: BTreeSet<_> = [t.name(&a), t.name(&b), t.name(&c)].into_iter().collect();
        assert_eq!(names.len(), 3);
        assert_eq!(t.symbol(t.name(&c)), Some(&c));
    }

    #[test]
    fn problem_round_trip_with_table() {
        let x = || vec![FolTerm::var("X")];
        let f = FolFormula::forall(&["X"], FolFormula::iff(p("A-1", x()), p("a", x())));
        let g = FolFormula::exists(&["Y"], p("r", vec![FolTerm::var("Y"), FolTerm::constant("o#", "Chris")]));
        let sents = vec![
            Sentence::axiom(f).labelled("first one"),
            Sentence::conjecture(g).labelled("goal"),
        ];
        let names = TptpNames::for_sentences(&sents);
        let text = print_problem(&sents, &names);
        let back = TptpReader::new("o#").with_names(&names).parse_problem(&text).unwrap();
        let asts: Vec<_> = back.iter().map(|s| (&s.ast, s.role)).collect();
        let orig: Vec<_> = sents.iter().map(|s| (&s.ast, s.role)).collect();
        assert_eq!(asts, orig);
    }

    #[test]
    fn reads_hand_written_chains_and_reverse_implication() {
        let r = TptpReader::new("");
        let f = r.parse_formula("a & b & c").unwrap();
        assert_eq!(f, FolFormula::and(FolFormula::and(p0("a"), p0("b")), p0("c")));
        let g = r.parse_formula("a <= b").unwrap();
        assert_eq!(g, FolFormula::implies(p0("b"), p0("a")));
    }

    fn p0(n: &str) -> FolFormula {
        FolFormula::pred("", n, vec![])
    }

    #[test]
    fn rejects_equality_unless_enabled() {
        let r = TptpReader::new("");
        assert!(matches!(r.parse_formula("a = b"), Err(ParseError::Equality { .. })));
        let mut r = TptpReader::new("");
        r.allow_equality = true;
        assert!(r.parse_formula("a = b").unwrap().has_equality());
    }

    #[test]
    fn rejects_unbound_variables_and_functions() {
        let r = TptpReader::new("");
        assert!(r.parse_formula("p(X)").is_err());
        assert!(matches!(r.parse_formula("p(f(a))"), Err(ParseError::UnknownConstruct { .. })));
        assert!(matches!(r.parse_problem("cnf(a, axiom, p)."), Err(ParseError::UnknownConstruct { .. })));
    }
}
