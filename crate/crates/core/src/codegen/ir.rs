//! Function bodies of the generated interface, and an interpreter that runs
//! them against a flat byte store.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Value types of generated code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ty {
    /// An address type by name.
    Addr(String),
    Usize,
    U8,
    U16,
    U32,
    U64,
    Bool,
    Tuple(Vec<Ty>),
}

impl Ty {
    /// Unsigned integer type of `bytes` width, if native.
    pub fn uint(bytes: u64) -> Option<Ty> {
        match bytes {
            1 => Some(Ty::U8),
            2 => Some(Ty::U16),
            4 => Some(Ty::U32),
            8 => Some(Ty::U64),
            _ => None,
        }
    }

    /// Width in bytes when stored; addresses and `usize` take a word.
    pub fn bytes(&self, word_bytes: u64) -> u64 {
        match self {
            Ty::U8 | Ty::Bool => 1,
            Ty::U16 => 2,
            Ty::U32 => 4,
            Ty::U64 => 8,
            Ty::Addr(_) | Ty::Usize => word_bytes,
            Ty::Tuple(ts) => ts.iter().map(|t| t.bytes(word_bytes)).sum(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "==",
        }
    }

    fn holds(self, a: u64, b: u64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
            Cmp::Eq => a == b,
        }
    }
}

/// Body expressions. Integer operators work on raw numbers; `Raw` and
/// `Wrap` convert between address types and numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    /// The receiver address.
    SelfAddr,
    Param(String),
    /// A field of a map record receiver.
    Field(String),
    Lit(u64),
    /// A named constant (see `NamedConstant`).
    Const(String),
    Raw(Box<Expr>),
    Wrap(String, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Rem(Box<Expr>, Box<Expr>),
    Shl(Box<Expr>, Box<Expr>),
    Shr(Box<Expr>, Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    /// Load a value of the type from an address-valued expression.
    Load(Ty, Box<Expr>),
    /// Store a value of the type at an address-valued expression.
    Store(Ty, Box<Expr>, Box<Expr>),
    /// Numeric conversion; to `Bool` means "non-zero".
    Cast(Ty, Box<Expr>),
    Tuple(Vec<Expr>),
}

/// Shorthands for building bodies.
pub mod build {
    use super::{Expr, Ty};

    fn b(e: Expr) -> Box<Expr> {
        Box::new(e)
    }

    pub fn raw(e: Expr) -> Expr {
        Expr::Raw(b(e))
    }
    pub fn wrap(t: &str, e: Expr) -> Expr {
        Expr::Wrap(t.to_string(), b(e))
    }
    pub fn add(x: Expr, y: Expr) -> Expr {
        Expr::Add(b(x), b(y))
    }
    pub fn sub(x: Expr, y: Expr) -> Expr {
        Expr::Sub(b(x), b(y))
    }
    pub fn mul(x: Expr, y: Expr) -> Expr {
        Expr::Mul(b(x), b(y))
    }
    pub fn div(x: Expr, y: Expr) -> Expr {
        Expr::Div(b(x), b(y))
    }
    pub fn rem(x: Expr, y: Expr) -> Expr {
        Expr::Rem(b(x), b(y))
    }
    pub fn shl(x: Expr, y: Expr) -> Expr {
        Expr::Shl(b(x), b(y))
    }
    pub fn shr(x: Expr, y: Expr) -> Expr {
        Expr::Shr(b(x), b(y))
    }
    pub fn and(x: Expr, y: Expr) -> Expr {
        Expr::And(b(x), b(y))
    }
    pub fn or(x: Expr, y: Expr) -> Expr {
        Expr::Or(b(x), b(y))
    }
    pub fn not(x: Expr) -> Expr {
        Expr::Not(b(x))
    }
    pub fn load(t: Ty, a: Expr) -> Expr {
        Expr::Load(t, b(a))
    }
    pub fn store(t: Ty, a: Expr, v: Expr) -> Expr {
        Expr::Store(t, b(a), b(v))
    }
    pub fn cast(t: Ty, e: Expr) -> Expr {
        Expr::Cast(t, b(e))
    }
    pub fn param(n: &str) -> Expr {
        Expr::Param(n.to_string())
    }
    pub fn field(n: &str) -> Expr {
        Expr::Field(n.to_string())
    }
    pub fn konst(n: &str) -> Expr {
        Expr::Const(n.to_string())
    }
    /// Address `base` displaced by `by` bytes, as address type `t`.
    pub fn plus(t: &str, base: Expr, by: Expr) -> Expr {
        wrap(t, add(raw(base), by))
    }
    pub fn minus(t: &str, base: Expr, by: Expr) -> Expr {
        wrap(t, sub(raw(base), by))
    }
}

/// A debug assertion `lhs op rhs` over raw numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub lhs: Expr,
    pub op: Cmp,
    pub rhs: Expr,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SimError {
    #[error("debug assertion {index} failed: {lhs} {op} {rhs} is false")]
    Assertion { index: usize, lhs: u64, op: &'static str, rhs: u64 },
    #[error("access of {width} bytes at {addr:#x} is outside the simulated store")]
    OutOfBounds { addr: u64, width: u64 },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown name `{0}`")]
    Unknown(String),
}

/// A little-endian byte store covering `base..base + len`.
#[derive(Clone, Debug)]
pub struct FlatMemory {
    pub base: u64,
    pub bytes: Vec<u8>,
}

impl FlatMemory {
    pub fn new(base: u64, len: usize) -> Self {
        FlatMemory { base, bytes: vec![0; len] }
    }

    fn range(&self, addr: u64, width: u64) -> Result<std::ops::Range<usize>, SimError> {
        let oob = SimError::OutOfBounds { addr, width };
        let start = addr.checked_sub(self.base).ok_or(oob.clone())? as usize;
        let end = start.checked_add(width as usize).ok_or(oob.clone())?;
        if end > self.bytes.len() {
            return Err(oob);
        }
        Ok(start..end)
    }

    pub fn load(&self, addr: u64, width: u64) -> Result<u64, SimError> {
        let r = self.range(addr, width)?;
        Ok(self.bytes[r].iter().rev().fold(0u64, |acc, b| acc << 8 | u64::from(*b)))
    }

    pub fn store(&mut self, addr: u64, width: u64, v: u64) -> Result<(), SimError> {
        let r = self.range(addr, width)?;
        for (i, b) in self.bytes[r].iter_mut().enumerate() {
            *b = (v >> (8 * i)) as u8;
        }
        Ok(())
    }
}

/// Everything a body can refer to.
pub struct Frame<'a> {
    pub receiver: Option<u64>,
    pub fields: BTreeMap<String, u64>,
    pub params: BTreeMap<String, u64>,
    pub consts: &'a BTreeMap<String, u64>,
    pub word_bytes: u64,
}

fn mask(bytes: u64) -> u64 {
    if bytes >= 8 {
        u64::MAX
    } else {
        (1u64 << (8 * bytes)) - 1
    }
}

/// Evaluates an expression; tuples flatten into the output vector.
pub fn eval(e: &Expr, fr: &Frame<'_>, mem: &mut FlatMemory, out: &mut Vec<u64>) -> Result<(), SimError> {
    if let Expr::Tuple(es) = e {
        for x in es {
            eval(x, fr, mem, out)?;
        }
        return Ok(());
    }
    let v = eval1(e, fr, mem)?;
    out.push(v);
    Ok(())
}

pub fn eval1(e: &Expr, fr: &Frame<'_>, mem: &mut FlatMemory) -> Result<u64, SimError> {
    let bin = |x: &Expr, y: &Expr, mem: &mut FlatMemory| -> Result<(u64, u64), SimError> {
        Ok((eval1(x, fr, mem)?, eval1(y, fr, mem)?))
    };
    Ok(match e {
        Expr::SelfAddr => fr.receiver.ok_or(SimError::Unknown("self".into()))?,
        Expr::Param(p) => *fr.params.get(p).ok_or(SimError::Unknown(p.clone()))?,
        Expr::Field(f) => *fr.fields.get(f).ok_or(SimError::Unknown(f.clone()))?,
        Expr::Lit(n) => *n,
        Expr::Const(c) => *fr.consts.get(c).ok_or(SimError::Unknown(c.clone()))?,
        Expr::Raw(x) | Expr::Wrap(_, x) => eval1(x, fr, mem)?,
        Expr::Add(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_add(b).ok_or(SimError::Overflow)?
        }
        Expr::Sub(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_sub(b).ok_or(SimError::Overflow)?
        }
        Expr::Mul(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_mul(b).ok_or(SimError::Overflow)?
        }
        Expr::Div(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_div(b).ok_or(SimError::DivisionByZero)?
        }
        Expr::Rem(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_rem(b).ok_or(SimError::DivisionByZero)?
        }
        Expr::Shl(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_shl(b as u32).ok_or(SimError::Overflow)?
        }
        Expr::Shr(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a.checked_shr(b as u32).ok_or(SimError::Overflow)?
        }
        Expr::And(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a & b
        }
        Expr::Or(x, y) => {
            let (a, b) = bin(x, y, mem)?;
            a | b
        }
        Expr::Not(x) => !eval1(x, fr, mem)?,
        Expr::Load(t, a) => {
            let addr = eval1(a, fr, mem)?;
            mem.load(addr, t.bytes(fr.word_bytes))?
        }
        Expr::Store(t, a, v) => {
            let addr = eval1(a, fr, mem)?;
            let val = eval1(v, fr, mem)?;
            let w = t.bytes(fr.word_bytes);
            mem.store(addr, w, val & mask(w))?;
            0
        }
        Expr::Cast(Ty::Bool, x) => u64::from(eval1(x, fr, mem)? != 0),
        Expr::Cast(t, x) => eval1(x, fr, mem)? & mask(t.bytes(fr.word_bytes)),
        Expr::Tuple(_) => return Err(SimError::Unknown("nested tuple".into())),
    })
}

/// Checks assertions in order, then evaluates the body.
pub fn run(
    asserts: &[Assertion],
    body: &Expr,
    fr: &Frame<'_>,
    mem: &mut FlatMemory,
) -> Result<Vec<u64>, SimError> {
    for (index, a) in asserts.iter().enumerate() {
        let l = eval1(&a.lhs, fr, mem)?;
        let r = eval1(&a.rhs, fr, mem)?;
        if !a.op.holds(l, r) {
            return Err(SimError::Assertion { index, lhs: l, op: a.op.symbol(), rhs: r });
        }
    }
    let mut out = Vec::new();
    eval(body, fr, mem, &mut out)?;
    Ok(out)
}
