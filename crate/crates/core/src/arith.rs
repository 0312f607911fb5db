//! Evaluation of size arithmetic to bits and bytes.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{Diagnostic, Span, Stage};
use crate::syntax::{LitArith, LitOp, SizeArith, SizeOp, Unit};

/// Largest exponent accepted by `^`.
pub const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArchConfig {
    pub word_bits: u64,
    pub page_bits: u64,
}

impl Default for ArchConfig {
    fn default() -> Self {
        ArchConfig { word_bits: 64, page_bits: 32768 }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArchError {
    #[error("word size must be a positive multiple of 8 bits, got {0}")]
    Word(u64),
    #[error("page size must be a positive multiple of the word size, got {0} bits")]
    Page(u64),
}

impl ArchConfig {
    pub fn new(word_bits: u64, page_bits: u64) -> Result<Self, ArchError> {
        if word_bits == 0 || !word_bits.is_multiple_of(8) {
            return Err(ArchError::Word(word_bits));
        }
        if page_bits == 0 || !page_bits.is_multiple_of(word_bits) {
            return Err(ArchError::Page(page_bits));
        }
        Ok(ArchConfig { word_bits, page_bits })
    }

    pub fn from_bytes(word_bytes: u64, page_bytes: u64) -> Result<Self, ArchError> {
        ArchConfig::new(word_bytes.saturating_mul(8), page_bytes.saturating_mul(8))
    }

    pub fn word_bytes(&self) -> u64 {
        self.word_bits / 8
    }

    pub fn page_bytes(&self) -> u64 {
        self.page_bits / 8
    }

    pub fn unit_bits(&self, u: Unit) -> u64 {
        match u {
            Unit::Bits => 1,
            Unit::Bytes => 8,
            Unit::Words => self.word_bits,
            Unit::Pages => self.page_bits,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("size evaluates to a negative amount ({value} bits)")]
    Negative { value: BigInt, span: Span },
    #[error("division by zero")]
    DivisionByZero { span: Span },
    #[error("exponent {exponent} is negative or larger than {MAX_EXPONENT}")]
    Exponent { exponent: BigInt, span: Span },
    #[error("{what} of {value} does not fit in 64 bits")]
    Overflow { what: String, value: BigUint, span: Span },
}

impl ArithError {
    pub fn span(&self) -> Span {
        match self {
            ArithError::Negative { span, .. }
            | ArithError::DivisionByZero { span }
            | ArithError::Exponent { span, .. }
            | ArithError::Overflow { span, .. } => *span,
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(Stage::Arith, Some(self.span()), self.to_string())
    }
}

/// Evaluates unit-free literal arithmetic. `/` rounds toward negative
/// infinity.
pub fn eval_lit(e: &LitArith, span: Span) -> Result<BigInt, ArithError> {
    match e {
        LitArith::Lit(l) => Ok(BigInt::from(l.value.clone())),
        LitArith::Bin { op, lhs, rhs } => {
            let a = eval_lit(lhs, span)?;
            let b = eval_lit(rhs, span)?;
            Ok(match op {
                LitOp::Add => a + b,
                LitOp::Sub => a - b,
                LitOp::Mul => a * b,
                LitOp::Div => {
                    if b.is_zero() {
                        return Err(ArithError::DivisionByZero { span });
                    }
                    a.div_floor(&b)
                }
                LitOp::Pow => {
                    let exp = match b.to_u32() {
                        Some(x) if x <= MAX_EXPONENT => x,
                        _ => return Err(ArithError::Exponent { exponent: b, span }),
                    };
                    num_traits::pow::Pow::pow(&a, exp)
                }
            })
        }
    }
}

fn eval_signed(e: &SizeArith, arch: &ArchConfig) -> Result<BigInt, ArithError> {
    match e {
        SizeArith::Term { multiplier, unit, span } => {
            let m = match multiplier {
                Some(m) => eval_lit(m, *span)?,
                None => BigInt::from(1u8),
            };
            Ok(m * BigInt::from(arch.unit_bits(*unit)))
        }
        SizeArith::Bin { op, lhs, rhs, .. } => {
            let a = eval_signed(lhs, arch)?;
            let b = eval_signed(rhs, arch)?;
            Ok(match op {
                SizeOp::Add => a + b,
                SizeOp::Sub => a - b,
            })
        }
    }
}

/// Exact size in bits. Intermediate values may be negative; the result may
/// not.
pub fn eval_bits(e: &SizeArith, arch: &ArchConfig) -> Result<BigUint, ArithError> {
    let v = eval_signed(e, arch)?;
    match v.sign() {
        Sign::Minus => Err(ArithError::Negative { value: v, span: e.span() }),
        _ => Ok(v.to_biguint().expect("non-negative")),
    }
}

/// Size in bytes, rounding partial bytes up.
pub fn eval_bytes(e: &SizeArith, arch: &ArchConfig) -> Result<BigUint, ArithError> {
    Ok(bits_to_bytes(&eval_bits(e, arch)?))
}

pub fn bits_to_bytes(bits: &BigUint) -> BigUint {
    (bits + 7u8) / 8u8
}

pub fn eval_bits_u64(e: &SizeArith, arch: &ArchConfig) -> Result<u64, ArithError> {
    let v = eval_bits(e, arch)?;
    v.to_u64().ok_or(ArithError::Overflow { what: "size in bits".into(), value: v, span: e.span() })
}

pub fn eval_bytes_u64(e: &SizeArith, arch: &ArchConfig) -> Result<u64, ArithError> {
    let v = eval_bytes(e, arch)?;
    v.to_u64().ok_or(ArithError::Overflow { what: "size in bytes".into(), value: v, span: e.span() })
}
