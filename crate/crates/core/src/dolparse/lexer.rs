use crate::text::{Cursor, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(super) enum Tok {
    /// Names, keywords and prefixed names such as `dolce:DOLCE-Lite.owl`.
    Word(String),
    Iri(String),
    /// Verbatim contents of a balanced `{ ... }` block.
    Fragment(String),
    /// `%prefix(`
    PrefixOpen,
    /// `)%`
    PrefixClose,
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Iri(i) => format!("<{i}>"),
            Tok::Fragment(_) => "basic fragment".into(),
            Tok::PrefixOpen => "`%prefix(`".into(),
            Tok::PrefixClose => "`)%`".into(),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn word_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '/' | '#')
}

/// `%%` starts a line comment, `%{ ... }%` a block comment.
fn skip_trivia(cur: &mut Cursor<'_>) -> Result<(), ParseError> {
    loop {
        cur.skip_trivia(true, &["%%"]);
        if cur.starts_with("%{") {
            let pos = cur.pos();
            while !cur.starts_with("}%") {
                if cur.bump().is_none() {
                    return Err(ParseError::syntax(pos, "unterminated comment"));
                }
            }
            cur.bump();
            cur.bump();
        } else {
            return Ok(());
        }
    }
}

pub(super) fn tokenize(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut cur = Cursor::new(text);
    let mut out = Vec::new();
    loop {
        skip_trivia(&mut cur)?;
        let pos = cur.pos();
        let Some(c) = cur.peek() else {
            out.push((Tok::Eof, pos));
            return Ok(out);
        };
        let tok = if cur.starts_with("%prefix(") {
            for _ in 0.."%prefix(".len() {
                cur.bump();
            }
            Tok::PrefixOpen
        } else if cur.starts_with(")%") {
            cur.bump();
            cur.bump();
            Tok::PrefixClose
        } else if c == '{' {
            cur.bump();
            let start = cur.offset();
            let mut depth = 1;
            loop {
                match cur.peek() {
                    None => return Err(ParseError::syntax(pos, "unterminated basic fragment")),
                    Some('{') => depth += 1,
                    Some('}') => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
                cur.bump();
            }
            let body = cur.slice(start).to_string();
            cur.bump();
            Tok::Fragment(body)
        } else if c == '<' && is_iri_ahead(cur.rest()) {
            cur.bump();
            let iri = cur.eat_while(|c| c != '>').to_string();
            cur.bump();
            Tok::Iri(iri)
        } else if word_start(c) {
            let start = cur.offset();
            cur.eat_while(word_char);
            while cur.peek() == Some(':') && matches!(cur.peek_nth(1), Some(c) if word_char(c)) {
                cur.bump();
                cur.eat_while(word_char);
            }
            Tok::Word(cur.slice(start).to_string())
        } else if "=<>,:()".contains(c) {
            cur.bump();
            Tok::Punct(c)
        } else {
            return Err(ParseError::syntax(pos, format!("unexpected character `{c}`")));
        };
        out.push((tok, pos));
    }
}

/// `<` opens an IRI when a `>` follows before any whitespace.
fn is_iri_ahead(rest: &str) -> bool {
    let body = &rest[1..];
    match body.find(|c: char| c == '>' || c.is_whitespace()) {
        Some(i) => i > 0 && body[i..].starts_with('>'),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s).unwrap().into_iter().map(|(t, _)| t).collect()
    }

    #[test]
    fn words_iris_and_relations() {
        assert_eq!(
            toks("a < b, dolce:DOLCE-Lite.owl <http://x/y>"),
            vec![
                Tok::Word("a".into()),
                Tok::Punct('<'),
                Tok::Word("b".into()),
                Tok::Punct(','),
                Tok::Word("dolce:DOLCE-Lite.owl".into()),
                Tok::Iri("http://x/y".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn prefix_block_and_comments() {
        assert_eq!(
            toks("%prefix( f1: <http://a/> )% %% note\n%{ block }% x"),
            vec![
                Tok::PrefixOpen,
                Tok::Word("f1".into()),
                Tok::Punct(':'),
                Tok::Iri("http://a/".into()),
                Tok::PrefixClose,
                Tok::Word("x".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn fragments_keep_nested_braces() {
        assert_eq!(toks("{ a {b} }"), vec![Tok::Fragment(" a {b} ".into()), Tok::Eof]);
        assert!(tokenize("{ a").is_err());
    }

    #[test]
    fn positions() {
        let t = tokenize("a\n  b").unwrap();
        assert_eq!(t[1].1, Pos { line: 2, column: 3 });
    }
}
