//! Source positions and compiler diagnostics.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A position in a source file (1-based line and column).
///
/// Spans never participate in structural equality or hashing: two syntax
/// trees that differ only in where they came from compare equal.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Span {
    pub offset: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(offset: usize, line: u32, col: u32) -> Self {
        Span { offset, line, col }
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

impl std::hash::Hash for Span {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        })
    }
}

/// Which pipeline stage produced an error. The CLI maps this onto exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Lex,
    Parse,
    Expand,
    Scope,
    Arith,
    Codegen,
    Consistency,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub stage: Stage,
    pub span: Option<Span>,
    pub message: String,
}

impl Diagnostic {
    pub fn error(stage: Stage, span: Option<Span>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, stage, span, message: message.into() }
    }

    pub fn warning(stage: Stage, span: Option<Span>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, stage, span, message: message.into() }
    }

    pub fn note(stage: Stage, span: Option<Span>, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Note, stage, span, message: message.into() }
    }

    /// Renders as `file:line:col: severity: message`.
    pub fn render(&self, file: &str) -> String {
        match self.span {
            Some(sp) => format!("{}:{}:{}: {}: {}", file, sp.line, sp.col, self.severity, self.message),
            // Whole-file diagnostics point at the first position.
            None => format!("{}:1:1: {}: {}", file, self.severity, self.message),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Sorts by position, then severity, and drops exact duplicates (expanded
/// macro copies report the same source span more than once).
pub fn normalize(diags: &mut Vec<Diagnostic>) {
    diags.sort_by(|a, b| {
        let ka = a.span.map(|s| (s.line, s.col)).unwrap_or((0, 0));
        let kb = b.span.map(|s| (s.line, s.col)).unwrap_or((0, 0));
        ka.cmp(&kb).then(a.severity.cmp(&b.severity)).then(a.message.cmp(&b.message))
    });
    diags.dedup_by(|a, b| {
        a.severity == b.severity
            && a.message == b.message
            && a.span.map(|s| (s.line, s.col)) == b.span.map(|s| (s.line, s.col))
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_format() {
        let d = Diagnostic::error(Stage::Parse, Some(Span::new(10, 3, 7)), "expected `->`");
        assert_eq!(d.render("a.flp"), "a.flp:3:7: error: expected `->`");
    }

    #[test]
    fn normalize_dedups_same_position() {
        let w = Diagnostic::warning(Stage::Codegen, Some(Span::new(0, 2, 1)), "x");
        let mut v = vec![w.clone(), Diagnostic::note(Stage::Codegen, None, "n"), w];
        normalize(&mut v);
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].severity, Severity::Note);
    }
}
