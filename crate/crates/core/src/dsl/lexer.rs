use std::fmt;

use crate::diag::{Diagnostic, Span};

/// Reserved words. They introduce declarations; in name positions the
/// parser still accepts them as identifiers.
pub const KEYWORDS: &[&str] = &[
    "architecture",
    "level",
    "node",
    "represent",
    "port",
    "behavior",
    "action",
    "event",
    "link",
    "connect",
    "source",
    "column",
    "via",
    "on",
    "pattern",
    "mode",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    String,
    Integer,
    Number,
    Keyword,
    Punct,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenKind::Ident => "identifier",
            TokenKind::String => "string",
            TokenKind::Integer => "integer",
            TokenKind::Number => "number",
            TokenKind::Keyword => "keyword",
            TokenKind::Punct => "punctuation",
            TokenKind::Eof => "end of input",
        })
    }
}

/// A lexeme. `text` is the exact source slice, quotes and escapes included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punct, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }

    /// Decoded contents of a string token.
    pub fn string_value(&self) -> String {
        debug_assert_eq!(self.kind, TokenKind::String);
        let inner = &self.text[1..self.text.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                match chars.next() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some('r') => out.push('\r'),
                    Some(other) => out.push(other),
                    None => {}
                }
            } else {
                out.push(c);
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Eof => "end of input".to_string(),
            kind => format!("{kind} `{}`", self.text),
        }
    }
}

/// Quotes `s` as a DSL string literal.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, f: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&f) {
            self.bump();
        }
    }

    fn span_from(&self, start: (usize, u32, u32)) -> Span {
        Span::new(start.1, start.2, start.0, self.pos - start.0)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }
}

/// Splits `text` into tokens, ending with a single `Eof` token. Whitespace,
/// `//` line comments and `/* */` block comments separate tokens.
///
/// Errors: `P001` unterminated string, `P002` illegal character, `P003`
/// unterminated block comment.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor {
        src: text,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();

    loop {
        cur.eat_while(char::is_whitespace);
        let start = cur.mark();
        let Some(c) = cur.peek() else {
            tokens.push(Token {
                kind: TokenKind::Eof,
                text: String::new(),
                span: cur.span_from(start),
            });
            return Ok(tokens);
        };

        let kind = match c {
            '/' if cur.peek_at(1) == Some('/') => {
                cur.eat_while(|c| c != '\n');
                continue;
            }
            '/' if cur.peek_at(1) == Some('*') => {
                cur.bump();
                cur.bump();
                loop {
                    match cur.bump() {
                        Some('*') if cur.peek() == Some('/') => {
                            cur.bump();
                            break;
                        }
                        Some(_) => {}
                        None => {
                            return Err(Diagnostic::error("P003", "unterminated block comment")
                                .at(Span::new(start.1, start.2, start.0, 2)))
                        }
                    }
                }
                continue;
            }
            '"' => {
                cur.bump();
                loop {
                    match cur.peek() {
                        Some('"') => {
                            cur.bump();
                            break;
                        }
                        Some('\\') => {
                            cur.bump();
                            if cur.peek().is_some_and(|c| c != '\n') {
                                cur.bump();
                            }
                        }
                        Some('\n') | None => {
                            return Err(Diagnostic::error("P001", "unterminated string literal")
                                .at(Span::new(start.1, start.2, start.0, cur.pos - start.0)))
                        }
                        Some(_) => {
                            cur.bump();
                        }
                    }
                }
                TokenKind::String
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if KEYWORDS.contains(&&text[start.0..cur.pos]) {
                    TokenKind::Keyword
                } else {
                    TokenKind::Ident
                }
            }
            c if c.is_ascii_digit() || (c == '-' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                lex_number(&mut cur)
            }
            '-' if cur.peek_at(1) == Some('>') => {
                cur.bump();
                cur.bump();
                TokenKind::Punct
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '.' | ':' | '=' => {
                cur.bump();
                TokenKind::Punct
            }
            other => {
                return Err(Diagnostic::error("P002", format!("illegal character {other:?}"))
                    .at(Span::new(start.1, start.2, start.0, other.len_utf8())))
            }
        };
        tokens.push(Token {
            kind,
            text: text[start.0..cur.pos].to_string(),
            span: cur.span_from(start),
        });
    }
}

fn lex_number(cur: &mut Cursor<'_>) -> TokenKind {
    if cur.peek() == Some('-') {
        cur.bump();
    }
    cur.eat_while(|c| c.is_ascii_digit());
    let mut kind = TokenKind::Integer;
    if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
        cur.bump();
        cur.eat_while(|c| c.is_ascii_digit());
        kind = TokenKind::Number;
    }
    if matches!(cur.peek(), Some('e' | 'E')) {
        let digit_at = if matches!(cur.peek_at(1), Some('+' | '-')) { 2 } else { 1 };
        if cur.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
            for _ in 0..digit_at {
                cur.bump();
            }
            cur.eat_while(|c| c.is_ascii_digit());
            kind = TokenKind::Number;
        }
    }
    kind
}
