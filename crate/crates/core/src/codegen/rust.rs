//! Rust backend: one self-contained source file.

use std::fmt::Write;

use super::ir::{Expr, Ty};
use super::{ConstKind, GeneratedInterface, InterfaceFn, NamedConstant, Receiver};

const PRELUDE: &str = r#"//! Address types, layout constants and accessors derived from a layout
//! specification. Generated by flpc; do not edit.
//!
//! Every address type wraps one machine word. Loads and stores are
//! unsynchronized and use native byte order; bit numbering assumes a
//! little-endian target.

#![allow(dead_code, non_camel_case_types, non_snake_case, non_upper_case_globals, unused_parens, clippy::all)]

"#;

const ADDRESS_MACRO: &str = r#"
const _: () = assert!(core::mem::size_of::<usize>() == WORD_BYTES);

/// Raw conversions shared by all address types.
pub trait Address: Copy {
    fn from_raw(raw: usize) -> Self;
    fn raw(self) -> usize;
}

macro_rules! deriveAddr {
    ($t:ident, $align:expr) => {
        impl Address for $t {
            #[inline(always)]
            fn from_raw(raw: usize) -> Self {
                $t(raw)
            }
            #[inline(always)]
            fn raw(self) -> usize {
                self.0
            }
        }
        impl $t {
            pub const ALIGN_BYTES: usize = $align;
            #[inline(always)]
            pub fn from_usize(raw: usize) -> Self {
                debug_assert!(raw % Self::ALIGN_BYTES == 0, "misaligned address");
                $t(raw)
            }
            #[inline(always)]
            pub fn as_usize(self) -> usize {
                self.0
            }
            #[inline(always)]
            pub(crate) fn plus<T: Address>(self, bytes: usize) -> T {
                T::from_raw(self.0 + bytes)
            }
            #[inline(always)]
            pub(crate) fn sub<T: Address>(self, bytes: usize) -> T {
                T::from_raw(self.0 - bytes)
            }
            #[inline(always)]
            pub(crate) fn load<V: Copy>(self) -> V {
                unsafe { (self.0 as *const V).read_unaligned() }
            }
            #[inline(always)]
            pub(crate) fn store<V: Copy>(self, v: V) {
                unsafe { (self.0 as *mut V).write_unaligned(v) }
            }
        }
    };
}
"#;

const KEYWORDS: &[&str] = &[
    "as", "async", "await", "box", "break", "const", "continue", "crate", "do", "dyn", "else", "enum", "extern",
    "false", "final", "fn", "for", "gen", "if", "impl", "in", "let", "loop", "macro", "match", "mod", "move", "mut",
    "override", "priv", "pub", "ref", "return", "static", "struct", "trait", "true", "try", "type", "typeof",
    "unsafe", "unsized", "use", "virtual", "where", "while", "yield", "abstract", "become",
];

fn ident(s: &str) -> String {
    if KEYWORDS.contains(&s) {
        format!("r#{s}")
    } else {
        s.to_string()
    }
}

/// Renders within one `impl` block, where the owner type reads as `Self`.
struct Cx<'a> {
    owner: &'a str,
}

impl Cx<'_> {
    fn ty(&self, t: &Ty) -> String {
        match t {
            Ty::Addr(n) if n == self.owner => "Self".into(),
            Ty::Addr(n) => n.clone(),
            Ty::Usize => "usize".into(),
            Ty::U8 => "u8".into(),
            Ty::U16 => "u16".into(),
            Ty::U32 => "u32".into(),
            Ty::U64 => "u64".into(),
            Ty::Bool => "bool".into(),
            Ty::Tuple(ts) => format!("({})", ts.iter().map(|t| self.ty(t)).collect::<Vec<_>>().join(", ")),
        }
    }

    fn name(&self, n: &str) -> String {
        if n == self.owner {
            "Self".into()
        } else {
            n.to_string()
        }
    }

    fn operand(&self, e: &Expr) -> String {
        let s = self.expr(e);
        match e {
            Expr::Add(..)
            | Expr::Sub(..)
            | Expr::Mul(..)
            | Expr::Div(..)
            | Expr::Rem(..)
            | Expr::Shl(..)
            | Expr::Shr(..)
            | Expr::And(..)
            | Expr::Or(..)
            | Expr::Cast(..) => format!("({s})"),
            _ => s,
        }
    }

    fn bin(&self, x: &Expr, op: &str, y: &Expr) -> String {
        format!("{} {op} {}", self.operand(x), self.operand(y))
    }

    fn expr(&self, e: &Expr) -> String {
        match e {
            Expr::SelfAddr => "self".into(),
            Expr::Param(p) => ident(p),
            Expr::Field(f) => format!("self.{}", ident(f)),
            Expr::Lit(n) => n.to_string(),
            Expr::Const(path) => match path.split_once("::") {
                Some((o, n)) => format!("{}::{n}", self.name(o)),
                None => path.clone(),
            },
            Expr::Raw(x) => format!("{}.as_usize()", self.operand(x)),
            Expr::Wrap(t, y) => match &**y {
                Expr::Add(r, k) if matches!(**r, Expr::Raw(_)) => {
                    let Expr::Raw(x) = &**r else { unreachable!() };
                    format!("{}.plus::<{}>({})", self.operand(x), self.name(t), self.expr(k))
                }
                Expr::Sub(r, k) if matches!(**r, Expr::Raw(_)) => {
                    let Expr::Raw(x) = &**r else { unreachable!() };
                    format!("{}.sub::<{}>({})", self.operand(x), self.name(t), self.expr(k))
                }
                _ => format!("{}::from_usize({})", self.name(t), self.expr(y)),
            },
            Expr::Add(x, y) => self.bin(x, "+", y),
            Expr::Sub(x, y) => self.bin(x, "-", y),
            Expr::Mul(x, y) => self.bin(x, "*", y),
            Expr::Div(x, y) => self.bin(x, "/", y),
            Expr::Rem(x, y) => self.bin(x, "%", y),
            Expr::Shl(x, y) => match &**x {
                Expr::Lit(n) => format!("{n}usize << {}", self.operand(y)),
                _ => self.bin(x, "<<", y),
            },
            Expr::Shr(x, y) => self.bin(x, ">>", y),
            Expr::And(x, y) => self.bin(x, "&", y),
            Expr::Or(x, y) => self.bin(x, "|", y),
            Expr::Not(x) => format!("!{}", self.operand(x)),
            Expr::Load(t, a) => format!("{}.load::<{}>()", self.operand(a), self.ty(t)),
            Expr::Store(t, a, v) => format!("{}.store::<{}>({})", self.operand(a), self.ty(t), self.expr(v)),
            Expr::Cast(Ty::Bool, x) => format!("{} != 0", self.operand(x)),
            Expr::Cast(t, x) => format!("{} as {}", self.operand(x), self.ty(t)),
            Expr::Tuple(xs) => format!("({})", xs.iter().map(|x| self.expr(x)).collect::<Vec<_>>().join(", ")),
        }
    }

    fn function(&self, f: &InterfaceFn, out: &mut String) {
        let mut params = Vec::new();
        match f.receiver {
            Receiver::None => {}
            Receiver::Value => params.push("self".to_string()),
            Receiver::Ref => params.push("&self".to_string()),
        }
        for p in &f.params {
            params.push(format!("{}: {}", ident(&p.name), self.ty(&p.ty)));
        }
        let ret = f.ret.as_ref().map(|t| format!(" -> {}", self.ty(t))).unwrap_or_default();
        let _ = writeln!(out, "    #[inline(always)]");
        let _ = writeln!(out, "    pub fn {}({}){ret} {{", ident(&f.name), params.join(", "));
        for a in &f.debug_assertions {
            let _ = writeln!(out, "        debug_assert!({} {} {});", self.operand(&a.lhs), a.op.symbol(), self.operand(&a.rhs));
        }
        let _ = writeln!(out, "        {}", self.expr(&f.body));
        let _ = writeln!(out, "    }}");
    }
}

fn const_value(c: &NamedConstant, word_bytes: u64) -> String {
    match c.kind {
        ConstKind::Mask => {
            let width = (c.ty.bytes(word_bytes) * 8) as usize;
            format!("0b{:0width$b}", c.value)
        }
        _ => c.value.to_string(),
    }
}

fn const_line(c: &NamedConstant, cx: &Cx<'_>, indent: &str, word_bytes: u64) -> String {
    format!("{indent}pub const {} : {} = {};\n", c.name, cx.ty(&c.ty), const_value(c, word_bytes))
}

/// Renders the interface as one Rust module. Pure and deterministic.
pub fn render_rust(iface: &GeneratedInterface) -> String {
    let wb = iface.word_bytes;
    let mut out = String::from(PRELUDE);
    let _ = writeln!(out, "/// Bytes per machine word on the target.");
    let _ = writeln!(out, "pub const WORD_BYTES : usize = {wb};");
    out.push_str(ADDRESS_MACRO);
    for t in &iface.address_types {
        let cx = Cx { owner: &t.name };
        let consts: Vec<&NamedConstant> = iface.constants.iter().filter(|c| c.owner == t.name).collect();
        let fns: Vec<&InterfaceFn> = iface.functions.iter().filter(|f| f.owner == t.name).collect();
        let is_align = |c: &NamedConstant| matches!(c.kind, ConstKind::AlignLog2 | ConstKind::AlignBytes);
        let _ = writeln!(out, "\n// {}", t.source);
        for c in consts.iter().filter(|c| !c.associated && !is_align(c)) {
            out.push_str(&const_line(c, &cx, "", wb));
        }
        let _ = writeln!(out, "#[repr(C)]");
        let _ = writeln!(out, "#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]");
        let _ = writeln!(out, "pub struct {}(usize);", t.name);
        for c in consts.iter().filter(|c| is_align(c)) {
            out.push_str(&const_line(c, &cx, "", wb));
            let arg = match c.kind {
                ConstKind::AlignLog2 => format!("1 << {}", c.name),
                _ => c.name.clone(),
            };
            let _ = writeln!(out, "deriveAddr!({}, {arg});", t.name);
        }
        let assoc: Vec<&&NamedConstant> = consts.iter().filter(|c| c.associated).collect();
        if assoc.is_empty() && fns.is_empty() {
            continue;
        }
        let _ = writeln!(out, "impl {} {{", t.name);
        for c in assoc {
            out.push_str(&const_line(c, &cx, "    ", wb));
        }
        for f in fns {
            cx.function(f, &mut out);
        }
        let _ = writeln!(out, "}}");
    }
    for m in &iface.maps {
        let cx = Cx { owner: &m.name };
        let _ = writeln!(
            out,
            "\n// {} elements of `{}` to {}, both repeated by `{}`",
            m.from_type, m.layer, m.to_type, m.formal
        );
        let _ = writeln!(out, "#[derive(Copy, Clone, Debug, PartialEq, Eq)]");
        let _ = writeln!(out, "pub struct {} {{", m.name);
        let _ = writeln!(out, "    pub from_base: {},", m.from_type);
        let _ = writeln!(out, "    pub to_base: {},", m.to_type);
        let _ = writeln!(out, "    pub end: {},", m.to_type);
        let _ = writeln!(out, "}}");
        let _ = writeln!(out, "impl {} {{", m.name);
        let _ = writeln!(out, "    pub const FROM_ELEM_BYTES : usize = {};", m.from_elem_bytes);
        let _ = writeln!(out, "    pub const TO_ELEM_BYTES : usize = {};", m.to_elem_bytes);
        let _ = writeln!(
            out,
            "    pub fn new(from_base: {}, to_base: {}, end: {}) -> Self {{",
            m.from_type, m.to_type, m.to_type
        );
        let _ = writeln!(out, "        Self {{ from_base, to_base, end }}");
        let _ = writeln!(out, "    }}");
        for f in iface.functions.iter().filter(|f| f.owner == m.name) {
            cx.function(f, &mut out);
        }
        let _ = writeln!(out, "}}");
    }
    out
}
