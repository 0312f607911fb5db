//! Layout instances: binary trees of 0/1-byte leaves with named nodes.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueTree {
    /// Zero bytes.
    B0,
    /// One byte.
    B1,
    T(Box<ValueTree>, Box<ValueTree>),
    N(String, Box<ValueTree>),
}

impl ValueTree {
    pub fn t(a: ValueTree, b: ValueTree) -> Self {
        ValueTree::T(Box::new(a), Box::new(b))
    }

    pub fn n(name: impl Into<String>, c: ValueTree) -> Self {
        ValueTree::N(name.into(), Box::new(c))
    }

    /// Number of one-byte leaves.
    pub fn leaves(&self) -> u64 {
        match self {
            ValueTree::B0 => 0,
            ValueTree::B1 => 1,
            ValueTree::T(a, b) => a.leaves() + b.leaves(),
            ValueTree::N(_, c) => c.leaves(),
        }
    }

    /// `n` one-byte leaves as a right-nested chain ending in `B0`.
    pub fn bytes(n: u64) -> Self {
        let mut t = ValueTree::B0;
        for _ in 0..n {
            t = ValueTree::t(ValueTree::B1, t);
        }
        t
    }

    /// Byte-leaf sequence with names, flattened in order: used to compare
    /// trees up to rebracketing of `T` spines.
    pub fn flatten(&self) -> Vec<FlatItem> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut Vec<FlatItem>) {
        match self {
            ValueTree::B0 => {}
            ValueTree::B1 => out.push(FlatItem::Byte),
            ValueTree::T(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            ValueTree::N(n, c) => {
                out.push(FlatItem::Open(n.clone()));
                c.flatten_into(out);
                out.push(FlatItem::Close);
            }
        }
    }

    fn fmt_arg(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTree::B0 | ValueTree::B1 => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatItem {
    Byte,
    Open(String),
    Close,
}

impl fmt::Display for ValueTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueTree::B0 => f.write_str("B0"),
            ValueTree::B1 => f.write_str("B1"),
            ValueTree::T(a, b) => {
                f.write_str("T ")?;
                a.fmt_arg(f)?;
                f.write_str(" ")?;
                b.fmt_arg(f)
            }
            ValueTree::N(n, c) => {
                write!(f, "N {n:?} ")?;
                c.fmt_arg(f)
            }
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("tree text, offset {offset}: {message}")]
pub struct TreeParseError {
    pub offset: usize,
    pub message: String,
}

/// Parses the text form produced by `Display`. Whitespace is free.
pub fn parse_tree(src: &str) -> Result<ValueTree, TreeParseError> {
    let mut p = TreeParser { s: src.as_bytes(), i: 0 };
    let t = p.tree()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct TreeParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl TreeParser<'_> {
    fn err(&self, m: &str) -> TreeParseError {
        TreeParseError { offset: self.i, message: m.into() }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.s[self.i..].starts_with(lit.as_bytes()) {
            self.i += lit.len();
            true
        } else {
            false
        }
    }

    fn arg(&mut self) -> Result<ValueTree, TreeParseError> {
        if self.eat("(") {
            let t = self.tree()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            Ok(t)
        } else if self.eat("B0") {
            Ok(ValueTree::B0)
        } else if self.eat("B1") {
            Ok(ValueTree::B1)
        } else {
            Err(self.err("expected `(`, `B0` or `B1`"))
        }
    }

    fn tree(&mut self) -> Result<ValueTree, TreeParseError> {
        if self.eat("B0") {
            return Ok(ValueTree::B0);
        }
        if self.eat("B1") {
            return Ok(ValueTree::B1);
        }
        if self.eat("(") {
            let t = self.tree()?;
            if !self.eat(")") {
                return Err(self.err("expected `)`"));
            }
            return Ok(t);
        }
        if self.eat("T") {
            let a = self.arg()?;
            let b = self.arg()?;
            return Ok(ValueTree::t(a, b));
        }
        if self.eat("N") {
            self.ws();
            if !self.eat("\"") {
                return Err(self.err("expected a quoted name"));
            }
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i] != b'"' {
                self.i += 1;
            }
            if self.i >= self.s.len() {
                return Err(self.err("unterminated name"));
            }
            let name = String::from_utf8_lossy(&self.s[start..self.i]).into_owned();
            self.i += 1;
            let c = self.arg()?;
            return Ok(ValueTree::n(name, c));
        }
        Err(self.err("expected a tree"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ValueTree::*;

    #[test]
    fn leaves_examples() {
        assert_eq!(B0.leaves(), 0);
        assert_eq!(ValueTree::t(B1, ValueTree::t(B1, B0)).leaves(), 2);
        assert_eq!(ValueTree::bytes(3).leaves(), 3);
    }

    #[test]
    fn text_round_trip() {
        let t = ValueTree::n("x", ValueTree::t(ValueTree::bytes(2), ValueTree::n("y", B0)));
        let s = t.to_string();
        assert_eq!(s, r#"N "x" (T (T B1 (T B1 B0)) (N "y" B0))"#);
        assert_eq!(parse_tree(&s).unwrap(), t);
        assert_eq!(parse_tree("  T B0\n (B1) ").unwrap(), ValueTree::t(B0, B1));
        assert!(parse_tree("T B0").is_err());
    }
}
