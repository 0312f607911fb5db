//! Recursive-descent parser with backtracking over a token vector.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::*;
use super::lexer::{Keyword, Token, TokenKind};
use crate::diag::Span;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{}", self.message())]
pub struct ParseError {
    pub span: Span,
    pub expected: BTreeSet<String>,
    pub found: String,
    /// Overrides the generated expected/found message.
    pub note: Option<String>,
}

impl ParseError {
    pub fn message(&self) -> String {
        if let Some(n) = &self.note {
            return n.clone();
        }
        let exp: Vec<&str> = self.expected.iter().map(String::as_str).collect();
        match exp.len() {
            0 => format!("unexpected {}", self.found),
            1 => format!("expected {}, found {}", exp[0], self.found),
            _ => format!("expected one of {}, found {}", exp.join(", "), self.found),
        }
    }

    /// Keeps whichever error got further; merges expectations on a tie.
    fn merge(self, other: ParseError) -> ParseError {
        match self.span.offset.cmp(&other.span.offset) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.note.is_some() {
                    return self;
                }
                if other.note.is_some() {
                    return other;
                }
                let mut e = self;
                e.expected.extend(other.expected);
                e
            }
        }
    }
}

type PResult<T> = Result<T, ParseError>;

pub struct Parser<'t> {
    toks: &'t [Token],
    pos: usize,
    eof: Span,
}

impl<'t> Parser<'t> {
    pub fn new(toks: &'t [Token], eof: Span) -> Self {
        Parser { toks, pos: 0, eof }
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, n: usize) -> Option<&TokenKind> {
        self.toks.get(self.pos + n).map(|t| &t.kind)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map(|t| t.span).unwrap_or(self.eof)
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(k) => k.to_string(),
            None => "end of input".into(),
        }
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        ParseError {
            span: self.span(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.found(),
            note: None,
        }
    }

    fn err_note(&self, note: impl Into<String>) -> ParseError {
        ParseError { span: self.span(), expected: BTreeSet::new(), found: self.found(), note: Some(note.into()) }
    }

    fn at(&self, k: &TokenKind) -> bool {
        self.peek() == Some(k)
    }

    fn at_kw(&self, k: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Keyword(k))
    }

    fn eat(&mut self, k: &TokenKind) -> bool {
        if self.at(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, k: &TokenKind) -> PResult<Span> {
        let sp = self.span();
        if self.eat(k) {
            Ok(sp)
        } else {
            Err(self.err(&[&k.to_string()]))
        }
    }

    fn upper(&mut self, what: &str) -> PResult<Ident> {
        let sp = self.span();
        match self.peek() {
            Some(TokenKind::Upper(s)) => {
                let id = Ident::new(s.clone(), sp);
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn lower(&mut self, what: &str) -> PResult<Ident> {
        let sp = self.span();
        match self.peek() {
            Some(TokenKind::Lower(s)) => {
                let id = Ident::new(s.clone(), sp);
                self.pos += 1;
                Ok(id)
            }
            Some(TokenKind::Keyword(k)) => {
                Err(self.err_note(format!("`{}` is a reserved keyword and cannot be used as {what}", k.as_str())))
            }
            _ => Err(self.err(&[what])),
        }
    }

    /// Runs `f`, rewinding on failure.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let save = self.pos;
        let r = f(self);
        if r.is_err() {
            self.pos = save;
        }
        r
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // ---- top level -------------------------------------------------------

    pub fn parse_top_layer(&mut self) -> PResult<LayerDecl> {
        if self.at(&TokenKind::LParen) {
            let save = self.pos;
            self.pos += 1;
            match self.layer_decl() {
                Ok(l) if self.eat(&TokenKind::RParen) => return Ok(l),
                Ok(_) => {
                    let e = self.err(&["`)`"]);
                    self.pos = save;
                    return Err(e);
                }
                Err(e) => {
                    self.pos = save;
                    return Err(e);
                }
            }
        }
        if !matches!(self.peek(), Some(TokenKind::Upper(_))) {
            return Err(self.err(&["layer declaration"]));
        }
        self.layer_decl()
    }

    /// Skips to the next plausible top-level declaration start: an upper
    /// identifier at brace depth zero no further right than `col`.
    pub fn resync(&mut self, col: u32) {
        let mut depth = 0i32;
        self.pos += 1;
        while let Some(t) = self.toks.get(self.pos) {
            match &t.kind {
                TokenKind::LBrace => depth += 1,
                TokenKind::RBrace => depth = (depth - 1).max(0),
                TokenKind::Upper(_) if depth == 0 && t.span.col <= col => return,
                _ => {}
            }
            self.pos += 1;
        }
    }

    // ---- layers ----------------------------------------------------------

    fn layer_decl(&mut self) -> PResult<LayerDecl> {
        let name = self.upper("layer identifier")?;
        let span = name.span;
        let mut formals = Vec::new();
        if self.eat(&TokenKind::Lt) {
            loop {
                let f = self.lower("formal identifier")?;
                if formals.iter().any(|g: &Ident| g.name == f.name) {
                    return Err(ParseError {
                        span: f.span,
                        expected: BTreeSet::new(),
                        found: String::new(),
                        note: Some(format!("duplicate formal `{}` in `{}`", f.name, name.name)),
                    });
                }
                formals.push(f);
                if self.eat(&TokenKind::Comma) {
                    if self.at(&TokenKind::Gt) {
                        break;
                    }
                    continue;
                }
                break;
            }
            self.expect(&TokenKind::Gt)?;
        }
        let (mut magnitude, mut alignment) = (None, None);
        if self.eat(&TokenKind::AtPipe) {
            let s = self.size_arith()?;
            self.expect(&TokenKind::PipeAt)?;
            magnitude = Some(s.clone());
            alignment = Some(s);
        } else {
            if self.at(&TokenKind::DoublePipe) || self.at(&TokenKind::Pipe) {
                let close = self.peek().cloned().expect("checked");
                self.pos += 1;
                let s = self.size_arith()?;
                self.expect(&close)?;
                magnitude = Some(s);
            }
            if self.eat(&TokenKind::At) {
                self.expect(&TokenKind::LParen)?;
                let s = self.size_arith()?;
                self.expect(&TokenKind::RParen)?;
                // The closing `@` is optional.
                if self.at(&TokenKind::At) && self.peek_at(1) != Some(&TokenKind::LParen) {
                    self.pos += 1;
                }
                alignment = Some(s);
            }
        }
        let mut contains = Vec::new();
        while self.at_kw(Keyword::Contains) {
            self.pos += 1;
            self.expect(&TokenKind::LParen)?;
            contains.push(self.upper("layer identifier")?);
            self.expect(&TokenKind::RParen)?;
        }
        if !self.at(&TokenKind::Arrow) {
            let mut exp = vec!["`->`"];
            if magnitude.is_none() && alignment.is_none() {
                exp.extend(["`||`", "`@(`", "`@|`"]);
            }
            if formals.is_empty() && magnitude.is_none() && alignment.is_none() {
                exp.push("`<`");
            }
            exp.push("`contains`");
            return Err(self.err(&exp));
        }
        self.pos += 1;
        let body = self.demarc_val()?;
        Ok(LayerDecl { name, formals, magnitude, alignment, contains, body, origin: None, span })
    }

    // ---- demarcations ----------------------------------------------------

    fn demarc(&mut self) -> PResult<Demarc> {
        if let (Some(TokenKind::Lower(_)), Some(TokenKind::Colon)) = (self.peek(), self.peek_at(1)) {
            let name = self.lower("field identifier")?;
            self.pos += 1;
            let value = self.demarc_val()?;
            return Ok(Demarc::Field(Field { name, value }));
        }
        if let (Some(TokenKind::Keyword(k)), Some(TokenKind::Colon)) = (self.peek(), self.peek_at(1)) {
            let k = *k;
            return Err(self.err_note(format!("`{}` is a reserved keyword and cannot be used as a field name", k.as_str())));
        }
        Ok(Demarc::Val(self.demarc_val()?))
    }

    fn demarc_val(&mut self) -> PResult<DemarcVal> {
        let span = self.span();
        let repeat = match (self.peek(), self.peek_at(1)) {
            (Some(TokenKind::Hash), _) => {
                self.pos += 1;
                Some(Repeat::Fill)
            }
            (Some(TokenKind::Lower(_)), next)
                if !matches!(next, Some(TokenKind::Keyword(Keyword::Ptr)) | Some(TokenKind::Colon)) =>
            {
                Some(Repeat::Formal(self.lower("formal identifier")?))
            }
            _ => None,
        };
        let kind = self.atom()?;
        Ok(DemarcVal { repeat, kind, span })
    }

    fn atom(&mut self) -> PResult<ValKind> {
        match self.peek() {
            Some(TokenKind::Keyword(Keyword::Enum)) => {
                self.pos += 1;
                self.expect(&TokenKind::LBrace)?;
                let mut flags = vec![self.upper("flag identifier")?];
                while self.eat(&TokenKind::Pipe) {
                    if self.at(&TokenKind::RBrace) {
                        break;
                    }
                    flags.push(self.upper("flag identifier")?);
                }
                self.expect(&TokenKind::RBrace)?;
                Ok(ValKind::Enum(flags))
            }
            Some(TokenKind::Keyword(Keyword::Bits)) if self.peek_at(1) == Some(&TokenKind::LBrace) => {
                self.pos += 2;
                let mut fields = Vec::new();
                loop {
                    let name = self.any_ident("bits field name")?;
                    self.expect(&TokenKind::Colon)?;
                    let size = self.size_arith()?;
                    fields.push(BitsField { name, size });
                    if self.eat(&TokenKind::Comma) && !self.at(&TokenKind::RBrace) {
                        continue;
                    }
                    break;
                }
                self.expect(&TokenKind::RBrace)?;
                Ok(ValKind::Bits(fields))
            }
            Some(TokenKind::Keyword(Keyword::Union)) => {
                self.pos += 1;
                self.expect(&TokenKind::LBrace)?;
                let items = self.demarc_list(&TokenKind::Pipe)?;
                Ok(ValKind::Union(items))
            }
            Some(TokenKind::Keyword(Keyword::Seq)) => {
                self.pos += 1;
                self.expect(&TokenKind::LBrace)?;
                let items = self.demarc_list(&TokenKind::Comma)?;
                Ok(ValKind::Seq(items))
            }
            Some(TokenKind::Upper(_)) | Some(TokenKind::Lower(_))
                if self.peek_at(1) == Some(&TokenKind::Keyword(Keyword::Ptr)) =>
            {
                let sp = self.span();
                let name = match self.peek() {
                    Some(TokenKind::Upper(s)) | Some(TokenKind::Lower(s)) => s.clone(),
                    _ => unreachable!(),
                };
                self.pos += 2;
                Ok(ValKind::Ptr(Ident::new(name, sp)))
            }
            Some(TokenKind::Upper(_)) => {
                let layer_err = match self.attempt(|p| p.layer_decl()) {
                    Ok(l) => return Ok(ValKind::Layer(Box::new(l))),
                    Err(e) => e,
                };
                let name = self.upper("layer identifier")?;
                let mut args = Vec::new();
                if self.eat(&TokenKind::Lt) {
                    loop {
                        let sp = self.span();
                        match self.peek().cloned() {
                            Some(TokenKind::Lower(s)) => {
                                self.pos += 1;
                                args.push(MacroArg::Formal(Ident::new(s, sp)));
                            }
                            Some(TokenKind::Int(v)) => {
                                self.pos += 1;
                                args.push(MacroArg::Literal(Literal { value: v, radix: Radix::Dec }));
                            }
                            Some(TokenKind::Bin(v)) => {
                                self.pos += 1;
                                args.push(MacroArg::Literal(Literal { value: v, radix: Radix::Bin }));
                            }
                            _ => return Err(self.err(&["formal identifier", "literal"]).merge(layer_err)),
                        }
                        if self.eat(&TokenKind::Comma) && !self.at(&TokenKind::Gt) {
                            continue;
                        }
                        break;
                    }
                    if !self.eat(&TokenKind::Gt) {
                        return Err(self.err(&["`>`", "`,`"]).merge(layer_err));
                    }
                }
                // A macro reference followed by header syntax is a broken
                // layer declaration; surface the layer error instead.
                if matches!(
                    self.peek(),
                    Some(TokenKind::DoublePipe)
                        | Some(TokenKind::AtPipe)
                        | Some(TokenKind::At)
                        | Some(TokenKind::Arrow)
                        | Some(TokenKind::Keyword(Keyword::Contains))
                ) {
                    return Err(layer_err);
                }
                Ok(ValKind::Macro { name, args })
            }
            Some(TokenKind::LParen) => {
                let size_err = match self.attempt(|p| p.size_arith()) {
                    Ok(s) => return Ok(ValKind::Size(s)),
                    Err(e) => e,
                };
                let save = self.pos;
                self.pos += 1;
                let inner = match self.demarc_val() {
                    Ok(v) => v,
                    Err(e) => {
                        self.pos = save;
                        return Err(e.merge(size_err));
                    }
                };
                if let Err(e) = self.expect(&TokenKind::RParen) {
                    self.pos = save;
                    return Err(e.merge(size_err));
                }
                Ok(ValKind::Group(Box::new(inner)))
            }
            Some(TokenKind::Keyword(Keyword::Bits | Keyword::Bytes | Keyword::Words | Keyword::Pages))
            | Some(TokenKind::Int(_))
            | Some(TokenKind::Bin(_)) => Ok(ValKind::Size(self.size_arith()?)),
            _ => Err(self.err(&[
                "`seq`",
                "`union`",
                "`enum`",
                "`bits`",
                "layer identifier",
                "size",
                "`(`",
            ])),
        }
    }

    fn any_ident(&mut self, what: &str) -> PResult<Ident> {
        let sp = self.span();
        match self.peek() {
            Some(TokenKind::Upper(s)) | Some(TokenKind::Lower(s)) => {
                let id = Ident::new(s.clone(), sp);
                self.pos += 1;
                Ok(id)
            }
            Some(TokenKind::Keyword(k)) => {
                Err(self.err_note(format!("`{}` is a reserved keyword and cannot be used as {what}", k.as_str())))
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn demarc_list(&mut self, sep: &TokenKind) -> PResult<Vec<Demarc>> {
        let mut items = vec![self.demarc()?];
        loop {
            if self.eat(sep) {
                if self.at(&TokenKind::RBrace) {
                    break;
                }
                items.push(self.demarc()?);
                continue;
            }
            break;
        }
        if !self.at(&TokenKind::RBrace) {
            return Err(self.err(&[&sep.to_string(), "`}`"]));
        }
        self.pos += 1;
        Ok(items)
    }

    // ---- size arithmetic -------------------------------------------------

    pub fn size_arith(&mut self) -> PResult<SizeArith> {
        let mut lhs = self.size_term()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => SizeOp::Add,
                Some(TokenKind::Minus) => SizeOp::Sub,
                Some(TokenKind::Star | TokenKind::Slash | TokenKind::Caret) => {
                    return Err(self.err_note(
                        "sizes with units only combine with `+` and `-`; put the multiplier before the unit",
                    ))
                }
                _ => break,
            };
            let span = self.span();
            self.pos += 1;
            let rhs = self.size_term()?;
            lhs = SizeArith::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs), span };
        }
        Ok(lhs)
    }

    fn unit(&mut self) -> Option<Unit> {
        let u = match self.peek() {
            Some(TokenKind::Keyword(Keyword::Bits)) => Unit::Bits,
            Some(TokenKind::Keyword(Keyword::Bytes)) => Unit::Bytes,
            Some(TokenKind::Keyword(Keyword::Words)) => Unit::Words,
            Some(TokenKind::Keyword(Keyword::Pages)) => Unit::Pages,
            _ => return None,
        };
        self.pos += 1;
        Some(u)
    }

    fn size_term(&mut self) -> PResult<SizeArith> {
        let span = self.span();
        let lit_err = match self.attempt(|p| {
            let lit = p.lit_arith(0)?;
            match p.unit() {
                Some(unit) => Ok(SizeArith::Term { multiplier: Some(lit), unit, span }),
                None => Err(p.err(&["unit (`bits`, `bytes`, `words`, `pages`)"])),
            }
        }) {
            Ok(t) => return Ok(t),
            Err(e) => e,
        };
        if let Some(unit) = self.unit() {
            return Ok(SizeArith::Term { multiplier: None, unit, span });
        }
        if self.at(&TokenKind::LParen) {
            let paren = self.attempt(|p| {
                p.pos += 1;
                let s = p.size_arith()?;
                p.expect(&TokenKind::RParen)?;
                Ok(s)
            });
            return paren.map_err(|e| e.merge(lit_err));
        }
        Err(self.err(&["size"]).merge(lit_err))
    }

    /// Precedence climbing: `^` (right) > `*` `/` > `+` `-` (left).
    fn lit_arith(&mut self, min_prec: u8) -> PResult<LitArith> {
        let mut lhs = self.lit_primary()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => LitOp::Add,
                Some(TokenKind::Minus) => LitOp::Sub,
                Some(TokenKind::Star) => LitOp::Mul,
                Some(TokenKind::Slash) => LitOp::Div,
                Some(TokenKind::Caret) => LitOp::Pow,
                _ => break,
            };
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            // The operand after the operator must be a literal expression,
            // otherwise this `+`/`-` belongs to the enclosing size sum.
            let save = self.pos;
            self.pos += 1;
            let next_min = if op == LitOp::Pow { prec } else { prec + 1 };
            match self.lit_arith(next_min) {
                Ok(rhs) => lhs = LitArith::bin(op, lhs, rhs),
                Err(e) => {
                    self.pos = save;
                    if matches!(op, LitOp::Add | LitOp::Sub) {
                        break;
                    }
                    return Err(e);
                }
            }
        }
        Ok(lhs)
    }

    fn lit_primary(&mut self) -> PResult<LitArith> {
        match self.peek().cloned() {
            Some(TokenKind::Int(v)) => {
                self.pos += 1;
                Ok(LitArith::Lit(Literal { value: v, radix: Radix::Dec }))
            }
            Some(TokenKind::Bin(v)) => {
                self.pos += 1;
                Ok(LitArith::Lit(Literal { value: v, radix: Radix::Bin }))
            }
            Some(TokenKind::LParen) => self.attempt(|p| {
                p.pos += 1;
                let e = p.lit_arith(0)?;
                p.expect(&TokenKind::RParen)?;
                Ok(e)
            }),
            _ => Err(self.err(&["number"])),
        }
    }
}
