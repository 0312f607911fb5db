//! Surface syntax: tokens, syntax tree, parser and printer.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use ast::*;
pub use lexer::{tokenize, Keyword, LexError, Token, TokenKind};
pub use parser::ParseError;
pub use printer::{print_demarc_val, print_layer_decl, print_lit, print_size, print_spec};

use crate::diag::{Diagnostic, Span, Stage};

/// Parses a token stream. Reports the first error of every top-level
/// declaration, resynchronizing at the next declaration.
pub fn parse(tokens: &[Token]) -> Result<Spec, Vec<Diagnostic>> {
    let eof = tokens.last().map(|t| Span::new(t.span.offset + 1, t.span.line, t.span.col + 1)).unwrap_or_default();
    parse_with_eof(tokens, eof)
}

fn parse_with_eof(tokens: &[Token], eof: Span) -> Result<Spec, Vec<Diagnostic>> {
    let mut p = parser::Parser::new(tokens, eof);
    let mut layers = Vec::new();
    let mut errors = Vec::new();
    while !p.at_end() {
        let start = tokens[p.position()].span;
        match p.parse_top_layer() {
            Ok(l) => layers.push(l),
            Err(e) => {
                errors.push(Diagnostic::error(Stage::Parse, Some(e.span), e.message()));
                p.resync(start.col);
            }
        }
    }
    if errors.is_empty() {
        Ok(Spec { layers })
    } else {
        Err(errors)
    }
}

/// Tokenizes and parses `src`.
pub fn parse_source(src: &str) -> Result<Spec, Vec<Diagnostic>> {
    let toks = tokenize(src).map_err(|e| vec![Diagnostic::error(Stage::Lex, Some(e.span), e.message)])?;
    let eof = end_span(src);
    parse_with_eof(&toks, eof)
}

fn end_span(src: &str) -> Span {
    let line = src.matches('\n').count() as u32 + 1;
    let col = src.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) as u32 + 1;
    Span::new(src.len(), line, col)
}

/// Parses a standalone size expression (used by tests and the CLI).
pub fn parse_size(src: &str) -> Result<SizeArith, Diagnostic> {
    let toks = tokenize(src).map_err(|e| Diagnostic::error(Stage::Lex, Some(e.span), e.message))?;
    let mut p = parser::Parser::new(&toks, end_span(src));
    let s = p.size_arith().map_err(|e| Diagnostic::error(Stage::Parse, Some(e.span), e.message()))?;
    if !p.at_end() {
        return Err(Diagnostic::error(Stage::Parse, toks.get(p.position()).map(|t| t.span), "trailing input after size"));
    }
    Ok(s)
}
