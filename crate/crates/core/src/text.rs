//! Source positions, parse errors and prefixed-name handling shared by the
//! text grammars.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::Symbol;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub const START: Pos = Pos { line: 1, column: 1 };

    /// Re-bases a position that is relative to a fragment starting at `origin`.
    pub fn offset_by(self, origin: Pos) -> Pos {
        if self.line == 1 {
            Pos { line: origin.line, column: origin.column + self.column - 1 }
        } else {
            Pos { line: origin.line + self.line - 1, column: self.column }
        }
    }
}

impl Default for Pos {
    fn default() -> Self {
        Pos::START
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}{}", fmt_expected(.expected))]
    Syntax { pos: Pos, message: String, expected: Vec<String> },
    #[error("unsupported construct `{construct}` at {pos}")]
    UnknownConstruct { pos: Pos, construct: String },
    #[error("undeclared prefix `{prefix}` at {pos}")]
    UndeclaredPrefix { pos: Pos, prefix: String },
    #[error("equality is not enabled (at {pos})")]
    Equality { pos: Pos },
}

fn fmt_expected(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

impl ParseError {
    pub fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        ParseError::Syntax { pos, message: message.into(), expected: Vec::new() }
    }

    pub fn expected(pos: Pos, found: &str, expected: &[&str]) -> Self {
        ParseError::Syntax {
            pos,
            message: format!("unexpected {found}"),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn pos(&self) -> Pos {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownConstruct { pos, .. }
            | ParseError::UndeclaredPrefix { pos, .. }
            | ParseError::Equality { pos } => *pos,
        }
    }

    pub fn offset_by(mut self, origin: Pos) -> Self {
        match &mut self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnknownConstruct { pos, .. }
            | ParseError::UndeclaredPrefix { pos, .. }
            | ParseError::Equality { pos } => *pos = pos.offset_by(origin),
        }
        self
    }
}

/// Character cursor tracking line and column.
#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    pos: Pos,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, offset: 0, pos: Pos::START }
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.offset..]
    }

    pub fn slice(&self, from: usize) -> &'a str {
        &self.src[from..self.offset]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    pub fn eat_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.offset;
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.bump();
        }
        self.slice(start)
    }

    pub fn starts_with(&self, s: &str) -> bool {
        self.rest().starts_with(s)
    }

    /// Skips spaces (and newlines when `newlines` is set) plus line comments
    /// introduced by any of `comment_markers`.
    pub fn skip_trivia(&mut self, newlines: bool, comment_markers: &[&str]) {
        loop {
            match self.peek() {
                Some('\n') if !newlines => return,
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(_) if comment_markers.iter().any(|m| self.starts_with(m)) => {
                    self.eat_while(|c| c != '\n');
                }
                _ => return,
            }
        }
    }
}

/// Maps prefixed names (`f1:Chris`) and bare names to symbol origins.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NameContext {
    /// Origin given to unprefixed names.
    pub default_origin: String,
    pub prefixes: BTreeMap<String, String>,
}

impl NameContext {
    pub fn new(default_origin: impl Into<String>) -> Self {
        NameContext { default_origin: default_origin.into(), prefixes: BTreeMap::new() }
    }

    pub fn with_prefix(mut self, prefix: impl Into<String>, iri: impl Into<String>) -> Self {
        self.prefixes.insert(prefix.into(), iri.into());
        self
    }

    /// Splits `token` into (origin, local name).
    pub fn resolve(&self, token: &str, pos: Pos) -> Result<(String, String), ParseError> {
        match token.split_once(':') {
            Some((prefix, local)) => match self.prefixes.get(prefix) {
                Some(iri) => Ok((iri.clone(), local.to_string())),
                None => Err(ParseError::UndeclaredPrefix { pos, prefix: prefix.to_string() }),
            },
            None => Ok((self.default_origin.clone(), token.to_string())),
        }
    }

    /// Renders a symbol's name so that [`NameContext::resolve`] recovers its
    /// origin, or `None` when no declared prefix covers the origin.
    pub fn render(&self, symbol: &Symbol) -> Option<String> {
        if symbol.origin == self.default_origin {
            return Some(symbol.name.clone());
        }
        self.prefixes
            .iter()
            .find(|(_, iri)| **iri == symbol.origin)
            .map(|(p, _)| format!("{p}:{}", symbol.name))
    }

    /// Like [`NameContext::render`] but panics on an uncovered origin; use
    /// [`NameContext::covering`] to build a context that covers every symbol.
    pub fn show(&self, symbol: &Symbol) -> String {
        self.render(symbol)
            .unwrap_or_else(|| panic!("no prefix declared for origin {:?}", symbol.origin))
    }

    /// Extends the context with generated prefixes `p1`, `p2`, ... for every
    /// origin among `symbols` that is not yet covered.
    pub fn covering<'a>(mut self, symbols: impl IntoIterator<Item = &'a Symbol>) -> Self {
        let mut next = 1;
        for s in symbols {
            if self.render(s).is_some() {
                continue;
            }
            let prefix = loop {
                let p = format!("p{next}");
                next += 1;
                if !self.prefixes.contains_key(&p) {
                    break p;
                }
            };
            self.prefixes.insert(prefix, s.origin.clone());
        }
        self
    }
}

pub(crate) fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

/// Lexes `name` or `prefix:name` at the cursor. Returns `None` when the
/// cursor is not at a name.
pub(crate) fn lex_name<'a>(cur: &mut Cursor<'a>) -> Option<&'a str> {
    let start = cur.offset();
    match cur.peek() {
        Some(c) if is_name_start(c) => {}
        _ => return None,
    }
    cur.eat_while(is_name_char);
    if cur.peek() == Some(':') && matches!(cur.peek_nth(1), Some(c) if is_name_char(c)) {
        cur.bump();
        cur.eat_while(is_name_char);
    }
    Some(cur.slice(start))
}
