//! The core calculus and the translation from surface syntax.
//!
//! Text form (one expression per line, fully parenthesized):
//!
//! ```text
//! (prim N) (con N E) (align A E) (concat E E) (union E E)
//! (named ID E) (exists F E) (repeat F E)
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arith::{eval_bits, eval_bytes_u64, ArchConfig, ArithError};
use crate::diag::{Diagnostic, Span, Stage};
use crate::syntax::*;

/// Largest literal repetition count that is unrolled.
pub const MAX_UNROLL: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreExpr {
    Prim(u64),
    Con(u64, Box<CoreExpr>),
    Aligned(Box<CoreExpr>, u64),
    Concat(Box<CoreExpr>, Box<CoreExpr>),
    Union(Box<CoreExpr>, Box<CoreExpr>),
    Named(String, Box<CoreExpr>),
    Exists(String, Box<CoreExpr>),
    Repeat(String, Box<CoreExpr>),
}

impl CoreExpr {
    pub fn con(n: u64, e: CoreExpr) -> Self {
        CoreExpr::Con(n, Box::new(e))
    }
    pub fn aligned(e: CoreExpr, a: u64) -> Self {
        CoreExpr::Aligned(Box::new(e), a)
    }
    pub fn concat(a: CoreExpr, b: CoreExpr) -> Self {
        CoreExpr::Concat(Box::new(a), Box::new(b))
    }
    pub fn union(a: CoreExpr, b: CoreExpr) -> Self {
        CoreExpr::Union(Box::new(a), Box::new(b))
    }
    pub fn named(n: impl Into<String>, e: CoreExpr) -> Self {
        CoreExpr::Named(n.into(), Box::new(e))
    }
    pub fn exists(f: impl Into<String>, e: CoreExpr) -> Self {
        CoreExpr::Exists(f.into(), Box::new(e))
    }
    pub fn repeat(f: impl Into<String>, e: CoreExpr) -> Self {
        CoreExpr::Repeat(f.into(), Box::new(e))
    }

    /// Formals used by a `Repeat` and not bound by an enclosing `Exists`.
    pub fn free_formals(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            CoreExpr::Prim(_) => {}
            CoreExpr::Con(_, e) | CoreExpr::Aligned(e, _) | CoreExpr::Named(_, e) => e.free_into(bound, out),
            CoreExpr::Concat(a, b) | CoreExpr::Union(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            CoreExpr::Exists(f, e) => {
                bound.push(f.clone());
                e.free_into(bound, out);
                bound.pop();
            }
            CoreExpr::Repeat(f, e) => {
                if !bound.contains(f) {
                    out.insert(f.clone());
                }
                e.free_into(bound, out);
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            CoreExpr::Prim(_) => 1,
            CoreExpr::Con(_, e)
            | CoreExpr::Aligned(e, _)
            | CoreExpr::Named(_, e)
            | CoreExpr::Exists(_, e)
            | CoreExpr::Repeat(_, e) => 1 + e.size(),
            CoreExpr::Concat(a, b) | CoreExpr::Union(a, b) => 1 + a.size() + b.size(),
        }
    }
}

impl fmt::Display for CoreExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreExpr::Prim(n) => write!(f, "(prim {n})"),
            CoreExpr::Con(n, e) => write!(f, "(con {n} {e})"),
            CoreExpr::Aligned(e, a) => write!(f, "(align {a} {e})"),
            CoreExpr::Concat(a, b) => write!(f, "(concat {a} {b})"),
            CoreExpr::Union(a, b) => write!(f, "(union {a} {b})"),
            CoreExpr::Named(n, e) => write!(f, "(named {n} {e})"),
            CoreExpr::Exists(n, e) => write!(f, "(exists {n} {e})"),
            CoreExpr::Repeat(n, e) => write!(f, "(repeat {n} {e})"),
        }
    }
}

/// Generated formal names `f0`, `f1`, … skipping any name the user wrote.
#[derive(Clone, Debug, Default)]
pub struct FreshSupply {
    next: usize,
    reserved: BTreeSet<String>,
}

impl FreshSupply {
    pub fn new(reserved: BTreeSet<String>) -> Self {
        FreshSupply { next: 0, reserved }
    }

    pub fn for_layer(decl: &LayerDecl) -> Self {
        let mut reserved = BTreeSet::new();
        collect_formals(decl, &mut reserved);
        FreshSupply::new(reserved)
    }

    pub fn fresh(&mut self) -> String {
        loop {
            let name = format!("f{}", self.next);
            self.next += 1;
            if !self.reserved.contains(&name) {
                return name;
            }
        }
    }
}

fn collect_formals(decl: &LayerDecl, out: &mut BTreeSet<String>) {
    out.extend(decl.formals.iter().map(|f| f.name.clone()));
    collect_formals_val(&decl.body, out);
}

fn collect_formals_val(v: &DemarcVal, out: &mut BTreeSet<String>) {
    if let Some(Repeat::Formal(f)) = &v.repeat {
        out.insert(f.name.clone());
    }
    match &v.kind {
        ValKind::Layer(l) => collect_formals(l, out),
        ValKind::Group(g) => collect_formals_val(g, out),
        ValKind::Seq(ds) | ValKind::Union(ds) => ds.iter().for_each(|d| collect_formals_val(d.value(), out)),
        _ => {}
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("alignment must be at least one byte")]
    ZeroAlignment { span: Span },
    #[error("repetition count {count} exceeds the unroll limit of {MAX_UNROLL}")]
    CountTooLarge { count: u64, span: Span },
    #[error("macro reference `{name}` must be expanded before compilation")]
    Macro { name: String, span: Span },
}

impl CompileError {
    pub fn to_diagnostic(&self) -> Diagnostic {
        let span = match self {
            CompileError::Arith(e) => e.span(),
            CompileError::ZeroAlignment { span }
            | CompileError::CountTooLarge { span, .. }
            | CompileError::Macro { span, .. } => *span,
        };
        Diagnostic::error(Stage::Arith, Some(span), self.to_string())
    }
}

/// Compilation settings.
#[derive(Clone, Debug, Default)]
pub struct CompileOptions {
    /// Formals of the compiled layer whose `Exists` binder is omitted, so
    /// that a caller-supplied environment fixes them.
    pub fixed: BTreeSet<String>,
}

/// Compiles a layer declaration (macro-free, scope-checked).
pub fn compile_layer(decl: &LayerDecl, arch: &ArchConfig) -> Result<CoreExpr, CompileError> {
    compile_layer_with(decl, arch, &CompileOptions::default())
}

pub fn compile_layer_with(decl: &LayerDecl, arch: &ArchConfig, opts: &CompileOptions) -> Result<CoreExpr, CompileError> {
    let mut fresh = FreshSupply::for_layer(decl);
    let mut c = Compiler { arch, fresh: &mut fresh };
    c.layer(decl, Some(&opts.fixed))
}

/// Compiles a single demarcation value with an explicit fresh-name supply.
pub fn compile_demarc(v: &DemarcVal, fresh: &mut FreshSupply, arch: &ArchConfig) -> Result<CoreExpr, CompileError> {
    Compiler { arch, fresh }.val(v)
}

/// Compiles a field or value inside a seq/union.
pub fn compile_demarc_item(d: &Demarc, fresh: &mut FreshSupply, arch: &ArchConfig) -> Result<CoreExpr, CompileError> {
    Compiler { arch, fresh }.demarc(d)
}

/// Footprint of an enum with `flags` flags, in bytes.
pub fn enum_bytes(flags: usize) -> u64 {
    let bits = ceil_log2(flags as u64);
    bits.div_ceil(8)
}

/// Smallest `b` with `2^b >= n` (0 for n <= 1).
pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - u64::from((n - 1).leading_zeros())
    }
}

struct Compiler<'a> {
    arch: &'a ArchConfig,
    fresh: &'a mut FreshSupply,
}

impl Compiler<'_> {
    fn layer(&mut self, decl: &LayerDecl, fixed: Option<&BTreeSet<String>>) -> Result<CoreExpr, CompileError> {
        let mut e = self.val(&decl.body)?;
        if let Some(a) = &decl.alignment {
            let a_bytes = eval_bytes_u64(a, self.arch)?;
            if a_bytes == 0 {
                return Err(CompileError::ZeroAlignment { span: a.span() });
            }
            e = CoreExpr::aligned(e, a_bytes);
        }
        if let Some(m) = &decl.magnitude {
            e = CoreExpr::con(eval_bytes_u64(m, self.arch)?, e);
        }
        for f in decl.formals.iter().rev() {
            if fixed.is_some_and(|s| s.contains(&f.name)) {
                continue;
            }
            e = CoreExpr::exists(f.name.clone(), e);
        }
        Ok(CoreExpr::named(decl.name.name.clone(), e))
    }

    fn demarc(&mut self, d: &Demarc) -> Result<CoreExpr, CompileError> {
        match d {
            Demarc::Field(f) => Ok(CoreExpr::named(f.name.name.clone(), self.val(&f.value)?)),
            Demarc::Val(v) => self.val(v),
        }
    }

    fn val(&mut self, v: &DemarcVal) -> Result<CoreExpr, CompileError> {
        match &v.repeat {
            None => self.kind(&v.kind),
            Some(Repeat::Fill) => {
                let f = self.fresh.fresh();
                let body = self.kind(&v.kind)?;
                Ok(CoreExpr::exists(f.clone(), CoreExpr::repeat(f, body)))
            }
            Some(Repeat::Formal(f)) => Ok(CoreExpr::repeat(f.name.clone(), self.kind(&v.kind)?)),
            Some(Repeat::Count(k)) => {
                if *k > MAX_UNROLL {
                    return Err(CompileError::CountTooLarge { count: *k, span: v.span });
                }
                let body = self.kind(&v.kind)?;
                let mut e = CoreExpr::concat(CoreExpr::Prim(0), CoreExpr::Prim(0));
                for _ in 0..*k {
                    e = CoreExpr::concat(body.clone(), e);
                }
                Ok(e)
            }
        }
    }

    fn chain(
        &mut self,
        ds: &[Demarc],
        join: fn(CoreExpr, CoreExpr) -> CoreExpr,
    ) -> Result<CoreExpr, CompileError> {
        let mut it = ds.iter();
        let first = it.next().expect("parser guarantees non-empty");
        let mut e = self.demarc(first)?;
        for d in it {
            e = join(e, self.demarc(d)?);
        }
        Ok(e)
    }

    fn kind(&mut self, k: &ValKind) -> Result<CoreExpr, CompileError> {
        match k {
            ValKind::Enum(flags) => Ok(CoreExpr::Prim(enum_bytes(flags.len()))),
            ValKind::Bits(fields) => {
                let mut total = num_bigint::BigUint::default();
                for f in fields {
                    total += eval_bits(&f.size, self.arch)?;
                }
                let bytes = crate::arith::bits_to_bytes(&total);
                let span = fields.first().map(|f| f.size.span()).unwrap_or_default();
                let n = num_traits::ToPrimitive::to_u64(&bytes).ok_or(ArithError::Overflow {
                    what: "bits block size".into(),
                    value: bytes.clone(),
                    span,
                })?;
                Ok(CoreExpr::Prim(n))
            }
            ValKind::Union(ds) => self.chain(ds, CoreExpr::union),
            ValKind::Seq(ds) => self.chain(ds, CoreExpr::concat),
            ValKind::Ptr(_) => Ok(CoreExpr::Prim(self.arch.word_bytes())),
            ValKind::Size(s) => Ok(CoreExpr::Prim(eval_bytes_u64(s, self.arch)?)),
            ValKind::Macro { name, .. } => Err(CompileError::Macro { name: name.name.clone(), span: name.span }),
            ValKind::Layer(l) => self.layer(l, None),
            ValKind::Group(g) => self.val(g),
        }
    }
}
