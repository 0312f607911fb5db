//! Tokenizer for `.flp` sources.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::diag::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Seq,
    Union,
    Enum,
    Bits,
    Ptr,
    Contains,
    Bytes,
    Words,
    Pages,
}

impl Keyword {
    pub fn lookup(s: &str) -> Option<Keyword> {
        Some(match s {
            "seq" => Keyword::Seq,
            "union" => Keyword::Union,
            "enum" => Keyword::Enum,
            "bits" => Keyword::Bits,
            "ptr" => Keyword::Ptr,
            "contains" => Keyword::Contains,
            "bytes" => Keyword::Bytes,
            "words" => Keyword::Words,
            "pages" => Keyword::Pages,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Seq => "seq",
            Keyword::Union => "union",
            Keyword::Enum => "enum",
            Keyword::Bits => "bits",
            Keyword::Ptr => "ptr",
            Keyword::Contains => "contains",
            Keyword::Bytes => "bytes",
            Keyword::Words => "words",
            Keyword::Pages => "pages",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// `[A-Z][a-zA-Z0-9_]*`: layer-ids and flag-ids.
    Upper(String),
    /// `[a-z][a-zA-Z0-9_]*` that is not a keyword: field-ids and formal-ids.
    Lower(String),
    Keyword(Keyword),
    Int(BigUint),
    Bin(BigUint),
    Hash,
    Colon,
    Comma,
    Pipe,
    DoublePipe,
    AtPipe,
    PipeAt,
    At,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Lt,
    Gt,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Upper(s) | TokenKind::Lower(s) => write!(f, "`{s}`"),
            TokenKind::Keyword(k) => write!(f, "`{}`", k.as_str()),
            TokenKind::Int(v) => write!(f, "`{v}`"),
            TokenKind::Bin(v) => write!(f, "`0b{}`", v.to_str_radix(2)),
            other => write!(f, "`{}`", other.symbol()),
        }
    }
}

impl TokenKind {
    fn symbol(&self) -> &'static str {
        match self {
            TokenKind::Hash => "#",
            TokenKind::Colon => ":",
            TokenKind::Comma => ",",
            TokenKind::Pipe => "|",
            TokenKind::DoublePipe => "||",
            TokenKind::AtPipe => "@|",
            TokenKind::PipeAt => "|@",
            TokenKind::At => "@",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::Lt => "<",
            TokenKind::Gt => ">",
            TokenKind::Arrow => "->",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Caret => "^",
            _ => "",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message}")]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: u32,
    col: u32,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.char_indices().collect(), pos: 0, line: 1, col: 1, _src: src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.chars.get(self.pos + n).map(|&(_, c)| c)
    }

    fn span(&self) -> Span {
        let offset = self.chars.get(self.pos).map(|&(o, _)| o).unwrap_or_else(|| {
            self.chars.last().map(|&(o, c)| o + c.len_utf8()).unwrap_or(0)
        });
        Span::new(offset, self.line, self.col)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }
}

/// Splits `src` into tokens, discarding whitespace and `//` / `/* */`
/// comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor::new(src);
    let mut out = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let start = cur.span();
        if c == '/' && cur.peek_at(1) == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump();
            cur.bump();
            loop {
                match cur.peek() {
                    None => {
                        return Err(LexError { span: start, message: "unterminated block comment".into() })
                    }
                    Some('*') if cur.peek_at(1) == Some('/') => {
                        cur.bump();
                        cur.bump();
                        break;
                    }
                    Some(_) => {
                        cur.bump();
                    }
                }
            }
            continue;
        }
        let kind = if c.is_ascii_alphabetic() {
            lex_ident(&mut cur, start)?
        } else if c.is_ascii_digit() {
            lex_number(&mut cur)?
        } else {
            lex_punct(&mut cur, start)?
        };
        out.push(Token { kind, span: start });
    }
    Ok(out)
}

fn lex_ident(cur: &mut Cursor<'_>, start: Span) -> Result<TokenKind, LexError> {
    let mut s = String::new();
    while let Some(c) = cur.peek() {
        if c.is_ascii_alphanumeric() || c == '_' {
            s.push(c);
            cur.bump();
        } else {
            break;
        }
    }
    // `name__<digits>` is reserved for names generated by macro expansion.
    if let Some(i) = s.find("__") {
        if s[i + 2..].starts_with(|c: char| c.is_ascii_digit()) {
            return Err(LexError {
                span: start,
                message: format!("identifier `{s}` uses the reserved `__<digits>` form"),
            });
        }
    }
    if s.starts_with(|c: char| c.is_ascii_uppercase()) {
        Ok(TokenKind::Upper(s))
    } else if let Some(k) = Keyword::lookup(&s) {
        Ok(TokenKind::Keyword(k))
    } else {
        Ok(TokenKind::Lower(s))
    }
}

fn lex_number(cur: &mut Cursor<'_>) -> Result<TokenKind, LexError> {
    if cur.peek() == Some('0') && cur.peek_at(1) == Some('b') {
        cur.bump();
        cur.bump();
        let mut digits = String::new();
        while let Some(c) = cur.peek() {
            match c {
                '0' | '1' => {
                    digits.push(c);
                    cur.bump();
                }
                '2'..='9' => {
                    return Err(LexError {
                        span: cur.span(),
                        message: format!("digit `{c}` in binary literal"),
                    })
                }
                _ => break,
            }
        }
        if digits.is_empty() {
            return Err(LexError { span: cur.span(), message: "binary literal has no digits".into() });
        }
        let v = BigUint::parse_bytes(digits.as_bytes(), 2).expect("binary digits");
        return Ok(TokenKind::Bin(v));
    }
    let mut digits = String::new();
    while let Some(c) = cur.peek() {
        if c.is_ascii_digit() {
            digits.push(c);
            cur.bump();
        } else {
            break;
        }
    }
    Ok(TokenKind::Int(BigUint::parse_bytes(digits.as_bytes(), 10).expect("decimal digits")))
}

fn lex_punct(cur: &mut Cursor<'_>, start: Span) -> Result<TokenKind, LexError> {
    let c = cur.bump().expect("caller checked");
    let next = cur.peek();
    let kind = match (c, next) {
        ('|', Some('|')) => {
            cur.bump();
            TokenKind::DoublePipe
        }
        ('|', Some('@')) => {
            cur.bump();
            TokenKind::PipeAt
        }
        ('|', _) => TokenKind::Pipe,
        ('@', Some('|')) => {
            cur.bump();
            TokenKind::AtPipe
        }
        ('@', _) => TokenKind::At,
        ('-', Some('>')) => {
            cur.bump();
            TokenKind::Arrow
        }
        ('-', _) => TokenKind::Minus,
        ('#', _) => TokenKind::Hash,
        (':', _) => TokenKind::Colon,
        (',', _) => TokenKind::Comma,
        ('(', _) => TokenKind::LParen,
        (')', _) => TokenKind::RParen,
        ('{', _) => TokenKind::LBrace,
        ('}', _) => TokenKind::RBrace,
        ('<', _) => TokenKind::Lt,
        ('>', _) => TokenKind::Gt,
        ('+', _) => TokenKind::Plus,
        ('*', _) => TokenKind::Star,
        ('/', _) => TokenKind::Slash,
        ('^', _) => TokenKind::Caret,
        _ => {
            return Err(LexError { span: start, message: format!("illegal character `{}`", c.escape_default()) })
        }
    };
    Ok(kind)
}
