//! Surface syntax tree of a `.flp` file.

use num_bigint::BigUint;

use crate::diag::Span;

/// A parsed specification: top-level layer declarations in source order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Spec {
    pub layers: Vec<LayerDecl>,
}

impl Spec {
    pub fn layer(&self, name: &str) -> Option<&LayerDecl> {
        self.layers.iter().find(|l| l.name.name == name)
    }

    /// Finds a layer by name, searching top-level declarations first and then
    /// nested declarations in pre-order.
    pub fn find_layer(&self, name: &str) -> Option<&LayerDecl> {
        self.layer(name).or_else(|| self.layers.iter().find_map(|l| find_nested(l, name)))
    }
}

fn find_nested<'a>(l: &'a LayerDecl, name: &str) -> Option<&'a LayerDecl> {
    l.body.children_layers().into_iter().find_map(|c| {
        if c.name.name == name {
            Some(c)
        } else {
            find_nested(c, name)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>, span: Span) -> Self {
        Ident { name: name.into(), span }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecl {
    pub name: Ident,
    pub formals: Vec<Ident>,
    pub magnitude: Option<SizeArith>,
    pub alignment: Option<SizeArith>,
    pub contains: Vec<Ident>,
    pub body: DemarcVal,
    /// For declarations produced by macro expansion: the referenced
    /// top-level layer. Not part of the source text.
    pub origin: Option<String>,
    pub span: Span,
}

impl LayerDecl {
    /// Calls `f` on every layer declaration nested in this one (not on
    /// `self`), in pre-order.
    pub fn visit_layers<'a>(&'a self, f: &mut dyn FnMut(&'a LayerDecl)) {
        for c in self.body.children_layers() {
            f(c);
            c.visit_layers(f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repeat {
    /// `#`: as many copies as fill the space.
    Fill,
    /// A formal-id: a count shared by every use of the formal.
    Formal(Ident),
    /// A literal count, produced only by macro argument substitution.
    Count(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemarcVal {
    pub repeat: Option<Repeat>,
    pub kind: ValKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValKind {
    Enum(Vec<Ident>),
    Bits(Vec<BitsField>),
    Union(Vec<Demarc>),
    Seq(Vec<Demarc>),
    Ptr(Ident),
    Size(SizeArith),
    Macro { name: Ident, args: Vec<MacroArg> },
    Layer(Box<LayerDecl>),
    /// Parenthesized value; transparent to every later stage.
    Group(Box<DemarcVal>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitsField {
    pub name: Ident,
    pub size: SizeArith,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MacroArg {
    Formal(Ident),
    Literal(Literal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Demarc {
    Field(Field),
    Val(DemarcVal),
}

impl Demarc {
    pub fn value(&self) -> &DemarcVal {
        match self {
            Demarc::Field(f) => &f.value,
            Demarc::Val(v) => v,
        }
    }

    pub fn value_mut(&mut self) -> &mut DemarcVal {
        match self {
            Demarc::Field(f) => &mut f.value,
            Demarc::Val(v) => v,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            Demarc::Field(f) => f.name.span,
            Demarc::Val(v) => v.span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub name: Ident,
    pub value: DemarcVal,
}

impl DemarcVal {
    /// Layer declarations directly nested in this value (through fields,
    /// seqs, unions and groups, but not through other layers).
    pub fn children_layers(&self) -> Vec<&LayerDecl> {
        let mut out = Vec::new();
        self.collect_layers(&mut out);
        out
    }

    fn collect_layers<'a>(&'a self, out: &mut Vec<&'a LayerDecl>) {
        match &self.kind {
            ValKind::Layer(l) => out.push(l),
            ValKind::Group(g) => g.collect_layers(out),
            ValKind::Seq(ds) | ValKind::Union(ds) => {
                for d in ds {
                    d.value().collect_layers(out);
                }
            }
            _ => {}
        }
    }

    /// Strips any number of transparent groups.
    pub fn ungroup(&self) -> &DemarcVal {
        match &self.kind {
            ValKind::Group(g) if self.repeat.is_none() => g.ungroup(),
            _ => self,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Unit {
    Bits,
    Bytes,
    Words,
    Pages,
}

impl Unit {
    pub fn keyword(self) -> &'static str {
        match self {
            Unit::Bits => "bits",
            Unit::Bytes => "bytes",
            Unit::Words => "words",
            Unit::Pages => "pages",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Unit> {
        Some(match s {
            "bits" => Unit::Bits,
            "bytes" => Unit::Bytes,
            "words" => Unit::Words,
            "pages" => Unit::Pages,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SizeOp {
    Add,
    Sub,
}

/// Unit-bearing size arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SizeArith {
    /// `lit-arith? prim`; a missing multiplier means one unit.
    Term { multiplier: Option<LitArith>, unit: Unit, span: Span },
    Bin { op: SizeOp, lhs: Box<SizeArith>, rhs: Box<SizeArith>, span: Span },
}

impl SizeArith {
    pub fn span(&self) -> Span {
        match self {
            SizeArith::Term { span, .. } | SizeArith::Bin { span, .. } => *span,
        }
    }

    pub fn term(multiplier: Option<LitArith>, unit: Unit) -> Self {
        SizeArith::Term { multiplier, unit, span: Span::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LitOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl LitOp {
    pub fn symbol(self) -> &'static str {
        match self {
            LitOp::Add => "+",
            LitOp::Sub => "-",
            LitOp::Mul => "*",
            LitOp::Div => "/",
            LitOp::Pow => "^",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            LitOp::Add | LitOp::Sub => 1,
            LitOp::Mul | LitOp::Div => 2,
            LitOp::Pow => 3,
        }
    }
}

/// Unit-free literal arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LitArith {
    Lit(Literal),
    Bin { op: LitOp, lhs: Box<LitArith>, rhs: Box<LitArith> },
}

impl LitArith {
    pub fn int(v: u64) -> Self {
        LitArith::Lit(Literal { value: BigUint::from(v), radix: Radix::Dec })
    }

    pub fn bin(op: LitOp, lhs: LitArith, rhs: LitArith) -> Self {
        LitArith::Bin { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radix {
    Dec,
    Bin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub value: BigUint,
    pub radix: Radix,
}
