//! Walks an expanded spec and derives the address interface.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ir::build::{add, and, cast, div, field, konst, load, minus, mul, not, or, param, plus, raw, rem, shl, shr, store, sub, wrap};
use super::ir::{Assertion, Cmp, Expr, Ty};
use super::names::{capitalize, screaming, snake};
use super::{
    AddrKind, AddressType, CodegenError, ConstKind, FnKind, GeneratedInterface, InterfaceFn, MapRecord, NamedConstant,
    Param, Receiver, DUMP_FORMAT, DUMP_VERSION,
};
use crate::arith::{eval_bits_u64, eval_bytes_u64, ArchConfig};
use crate::calculus::enum_bytes;
use crate::diag::{normalize, Diagnostic, Span, Stage};
use crate::syntax::{Demarc, DemarcVal, LayerDecl, Repeat, Spec, ValKind};

/// Static footprint of a value, if it does not depend on formals or fill.
pub(crate) fn static_size(v: &DemarcVal, arch: &ArchConfig) -> Option<u64> {
    let inner = kind_size(&v.kind, arch)?;
    match &v.repeat {
        None => Some(inner),
        Some(Repeat::Count(k)) => inner.checked_mul(*k),
        Some(_) => None,
    }
}

fn kind_size(k: &ValKind, arch: &ArchConfig) -> Option<u64> {
    match k {
        ValKind::Enum(fs) => Some(enum_bytes(fs.len())),
        ValKind::Bits(fs) => {
            let mut total = 0u64;
            for f in fs {
                total = total.checked_add(eval_bits_u64(&f.size, arch).ok()?)?;
            }
            Some(total.div_ceil(8))
        }
        ValKind::Ptr(_) => Some(arch.word_bytes()),
        ValKind::Size(s) => eval_bytes_u64(s, arch).ok(),
        ValKind::Seq(ds) => ds.iter().try_fold(0u64, |acc, d| acc.checked_add(static_size(d.value(), arch)?)),
        ValKind::Union(ds) => {
            let sizes = ds.iter().map(|d| static_size(d.value(), arch)).collect::<Option<Vec<_>>>()?;
            let first = *sizes.first()?;
            sizes.iter().all(|s| *s == first).then_some(first)
        }
        ValKind::Group(g) => static_size(g, arch),
        ValKind::Layer(l) => layer_size(l, arch),
        ValKind::Macro { .. } => None,
    }
}

fn layer_size(l: &LayerDecl, arch: &ArchConfig) -> Option<u64> {
    match &l.magnitude {
        Some(m) => eval_bytes_u64(m, arch).ok(),
        None => static_size(&l.body, arch),
    }
}

/// The kind under groups and single-item anonymous seqs, ignoring any
/// repetition prefix.
fn core_kind(mut v: &DemarcVal) -> &ValKind {
    loop {
        match &v.kind {
            ValKind::Group(g) => v = g,
            ValKind::Seq(ds) if ds.len() == 1 => match &ds[0] {
                Demarc::Val(x) => v = x,
                Demarc::Field(_) => return &v.kind,
            },
            k => return k,
        }
    }
}

fn is_alias(l: &LayerDecl) -> bool {
    l.origin.as_deref() == Some(l.name.name.as_str())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EKind {
    Layer,
    Field,
    Unit,
}

struct Entity<'s> {
    kind: EKind,
    name: String,
    base: String,
    parent: Option<usize>,
    body: Option<&'s DemarcVal>,
    decl: Option<&'s LayerDecl>,
    size: Option<u64>,
    align: Option<u64>,
    source: String,
}

/// Position of a node relative to the nearest enclosing entity.
#[derive(Clone, Copy)]
struct Pos {
    offset: Option<u64>,
    /// Reached through seq heads only.
    head: bool,
    /// Reached through a repetition.
    repeated: bool,
}

const START: Pos = Pos { offset: Some(0), head: true, repeated: false };

struct Link {
    parent: usize,
    child: usize,
    pos: Pos,
}

struct SeqItem<'s> {
    demarc: &'s Demarc,
    pos: Pos,
    field: Option<usize>,
}

struct SeqRecord<'s> {
    owner: usize,
    items: Vec<SeqItem<'s>>,
}

struct Elem {
    name: String,
    ty: String,
    size: u64,
}

struct Deriver<'s> {
    arch: &'s ArchConfig,
    ents: Vec<Entity<'s>>,
    links: Vec<Link>,
    seqs: Vec<SeqRecord<'s>>,
    top: BTreeMap<&'s str, usize>,
    by_body: HashMap<*const DemarcVal, usize>,
    offset_names: HashMap<(usize, usize), String>,
    module_consts: BTreeSet<String>,
    fn_names: BTreeMap<String, BTreeSet<String>>,
    types: Vec<AddressType>,
    consts: Vec<NamedConstant>,
    fns: Vec<InterfaceFn>,
    maps: Vec<MapRecord>,
    diags: Vec<Diagnostic>,
}

/// Derives the interface of an expanded, scope-checked spec. Warnings
/// cover hints whose conditions fail and fields that get no accessors.
pub fn derive(spec: &Spec, arch: &ArchConfig) -> Result<(GeneratedInterface, Vec<Diagnostic>), CodegenError> {
    let mut d = Deriver {
        arch,
        ents: Vec::new(),
        links: Vec::new(),
        seqs: Vec::new(),
        top: BTreeMap::new(),
        by_body: HashMap::new(),
        offset_names: HashMap::new(),
        module_consts: BTreeSet::new(),
        fn_names: BTreeMap::new(),
        types: Vec::new(),
        consts: Vec::new(),
        fns: Vec::new(),
        maps: Vec::new(),
        diags: Vec::new(),
    };
    d.collect(spec);
    let order = d.preorder();
    d.assign_bases(&order);
    d.name_offsets();
    for id in order {
        d.address_type(id);
        d.accessors(id);
        d.casts(id);
        d.pointer(id);
        d.bits(id);
        d.enumeration(id);
        d.contains(id);
    }
    d.alloc_patterns();
    d.shared_maps();
    d.finish()
}

impl<'s> Deriver<'s> {
    // ---- collection ------------------------------------------------------

    fn push_entity(&mut self, e: Entity<'s>) -> usize {
        let id = self.ents.len();
        if let Some(b) = e.body {
            self.by_body.insert(b as *const _, id);
        }
        self.ents.push(e);
        id
    }

    fn layer_entity(&mut self, l: &'s LayerDecl, parent: Option<usize>) -> usize {
        let source = match parent {
            Some(p) => format!("{}.{}", self.ents[p].source, l.name.name),
            None => l.name.name.clone(),
        };
        let align = l.alignment.as_ref().and_then(|a| eval_bytes_u64(a, self.arch).ok()).filter(|a| *a > 0);
        self.push_entity(Entity {
            kind: EKind::Layer,
            name: l.name.name.clone(),
            base: String::new(),
            parent,
            body: Some(&l.body),
            decl: Some(l),
            size: layer_size(l, self.arch),
            align,
            source,
        })
    }

    fn collect(&mut self, spec: &'s Spec) {
        for l in &spec.layers {
            let id = self.layer_entity(l, None);
            self.top.insert(l.name.name.as_str(), id);
        }
        for l in &spec.layers {
            let id = self.top[l.name.name.as_str()];
            self.walk(&l.body, id, START);
        }
    }

    fn walk(&mut self, v: &'s DemarcVal, owner: usize, pos: Pos) {
        let pos = if v.repeat.is_some() { Pos { repeated: true, ..pos } } else { pos };
        match &v.kind {
            ValKind::Seq(ds) => {
                let mut off = pos.offset;
                let mut items = Vec::new();
                for (i, d) in ds.iter().enumerate() {
                    let p = Pos { offset: off, head: pos.head && i == 0, repeated: pos.repeated };
                    let field = self.demarc(d, owner, p);
                    items.push(SeqItem { demarc: d, pos: p, field });
                    off = match (off, static_size(d.value(), self.arch)) {
                        (Some(o), Some(s)) => o.checked_add(s),
                        _ => None,
                    };
                }
                self.seqs.push(SeqRecord { owner, items });
            }
            ValKind::Union(ds) => {
                for d in ds {
                    self.demarc(d, owner, pos);
                }
            }
            ValKind::Group(g) => self.walk(g, owner, pos),
            ValKind::Layer(l) => {
                if is_alias(l) {
                    if let Some(&t) = self.top.get(l.name.name.as_str()) {
                        self.links.push(Link { parent: owner, child: t, pos });
                        return;
                    }
                }
                let id = self.layer_entity(l, Some(owner));
                self.links.push(Link { parent: owner, child: id, pos });
                self.walk(&l.body, id, START);
            }
            _ => {}
        }
    }

    fn demarc(&mut self, d: &'s Demarc, owner: usize, pos: Pos) -> Option<usize> {
        match d {
            Demarc::Field(f) => {
                let id = self.push_entity(Entity {
                    kind: EKind::Field,
                    name: f.name.name.clone(),
                    base: String::new(),
                    parent: Some(owner),
                    body: Some(&f.value),
                    decl: None,
                    size: static_size(&f.value, self.arch),
                    align: None,
                    source: format!("{}.{}", self.ents[owner].source, f.name.name),
                });
                self.links.push(Link { parent: owner, child: id, pos });
                self.walk(&f.value, id, START);
                Some(id)
            }
            Demarc::Val(v) => {
                self.walk(v, owner, pos);
                None
            }
        }
    }

    /// Entities with each one's children right after it.
    fn preorder(&self) -> Vec<usize> {
        fn visit(d: &Deriver<'_>, id: usize, out: &mut Vec<usize>) {
            out.push(id);
            for c in (0..d.ents.len()).filter(|&c| d.ents[c].parent == Some(id)) {
                visit(d, c, out);
            }
        }
        let mut out = Vec::new();
        for id in (0..self.ents.len()).filter(|&i| self.ents[i].parent.is_none()) {
            visit(self, id, &mut out);
        }
        out
    }

    /// Type bases: layers keep their names, fields are capitalized and
    /// qualified by their owner on collision; leftovers get a counter.
    fn assign_bases(&mut self, order: &[usize]) {
        let mut taken: BTreeSet<String> = BTreeSet::new();
        let mut field_cands: BTreeMap<String, usize> = BTreeMap::new();
        for e in &self.ents {
            if e.kind == EKind::Field {
                *field_cands.entry(capitalize(&e.name)).or_default() += 1;
            }
        }
        let layer_names: BTreeSet<String> =
            self.ents.iter().filter(|e| e.kind == EKind::Layer).map(|e| e.name.clone()).collect();
        for &id in order {
            let want = match self.ents[id].kind {
                EKind::Layer | EKind::Unit => self.ents[id].name.clone(),
                EKind::Field => {
                    let c = capitalize(&self.ents[id].name);
                    if field_cands[&c] > 1 || layer_names.contains(&c) {
                        let p = self.ents[id].parent.expect("fields have owners");
                        format!("{}_{}", self.ents[p].base, c)
                    } else {
                        c
                    }
                }
            };
            let mut base = want.clone();
            let mut k = 2;
            while taken.contains(&base) {
                base = format!("{want}_{k}");
                k += 1;
            }
            taken.insert(base.clone());
            self.ents[id].base = base;
        }
    }

    fn tname(&self, id: usize) -> String {
        format!("{}Addr", self.ents[id].base)
    }

    fn name_offsets(&mut self) {
        let mut cands = Vec::new();
        let mut count: BTreeMap<String, usize> = BTreeMap::new();
        for l in &self.links {
            if l.pos.repeated || l.pos.offset.is_none() {
                continue;
            }
            let plain = format!("{}_OFFSET", screaming(&self.ents[l.child].base));
            *count.entry(plain.clone()).or_default() += 1;
            cands.push((l.parent, l.child, plain));
        }
        for (p, c, plain) in cands {
            let name = if count[&plain] > 1 {
                format!("{}_{}", screaming(&self.ents[p].base), plain)
            } else {
                plain
            };
            self.offset_names.insert((p, c), name);
        }
    }

    // ---- emission helpers ----------------------------------------------

    fn module_const(&mut self, want: String) -> String {
        let mut name = want.clone();
        let mut k = 2;
        while self.module_consts.contains(&name) {
            name = format!("{want}_{k}");
            k += 1;
        }
        self.module_consts.insert(name.clone());
        name
    }

    fn push_const(&mut self, owner: &str, name: &str, kind: ConstKind, ty: Ty, value: u64, associated: bool) {
        self.consts.push(NamedConstant {
            name: name.to_string(),
            kind,
            ty,
            value,
            owner: owner.to_string(),
            associated,
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn push_fn(
        &mut self,
        kind: FnKind,
        owner: &str,
        name: &str,
        receiver: Receiver,
        params: Vec<(&str, Ty)>,
        ret: Option<Ty>,
        debug_assertions: Vec<Assertion>,
        body: Expr,
    ) {
        let used = self.fn_names.entry(owner.to_string()).or_default();
        if !used.insert(name.to_string()) {
            return;
        }
        self.fns.push(InterfaceFn {
            kind,
            owner: owner.to_string(),
            name: name.to_string(),
            receiver,
            params: params.into_iter().map(|(n, ty)| Param { name: n.to_string(), ty }).collect(),
            ret,
            debug_assertions,
            body,
        });
    }

    fn warn(&mut self, span: Option<Span>, msg: String) {
        self.diags.push(Diagnostic::warning(Stage::Codegen, span, msg));
    }

    fn find_layer(&self, name: &str) -> Option<usize> {
        self.top
            .get(name)
            .copied()
            .or_else(|| self.ents.iter().position(|e| e.kind == EKind::Layer && e.name == name))
    }

    fn span_of(&self, id: usize) -> Option<Span> {
        self.ents[id].decl.map(|d| d.name.span).or(self.ents[id].body.map(|b| b.span))
    }

    // ---- per-entity derivations ----------------------------------------

    fn address_type(&mut self, id: usize) {
        let ty = self.tname(id);
        let e = &self.ents[id];
        let kind = match e.kind {
            EKind::Layer => AddrKind::Layer,
            EKind::Field => AddrKind::Field,
            EKind::Unit => AddrKind::Unit,
        };
        let align = e.align.unwrap_or(1);
        self.types.push(AddressType {
            name: ty.clone(),
            kind,
            alignment_bytes: align,
            size_bytes: e.size,
            source: e.source.clone(),
        });
        let up = screaming(&e.base);
        let (is_layer, size) = (e.kind == EKind::Layer, e.size);
        if e.align.is_some_and(|a| a.is_power_of_two()) {
            let n = self.module_const(format!("{up}_ALIGN"));
            self.push_const(&ty, &n, ConstKind::AlignLog2, Ty::Usize, u64::from(align.trailing_zeros()), false);
        } else {
            let n = self.module_const(format!("{up}_BYTES_ALIGN"));
            self.push_const(&ty, &n, ConstKind::AlignBytes, Ty::Usize, align, false);
        }
        if let (true, Some(s)) = (is_layer, size) {
            let n = self.module_const(format!("{up}_SIZE"));
            self.push_const(&ty, &n, ConstKind::Size, Ty::Usize, s, false);
        }
    }

    /// Offset constants and `child()` / `from_child()` pairs for members at
    /// a static position.
    fn accessors(&mut self, id: usize) {
        let ty = self.tname(id);
        let kids: Vec<(usize, u64)> = self
            .links
            .iter()
            .filter(|l| l.parent == id && !l.pos.repeated)
            .filter_map(|l| l.pos.offset.map(|o| (l.child, o)))
            .collect();
        for (c, off) in kids {
            let Some(want) = self.offset_names.get(&(id, c)).cloned() else { continue };
            let cty = self.tname(c);
            let cname = self.module_const(want);
            self.push_const(&ty, &cname, ConstKind::Offset, Ty::Usize, off, false);
            let s = snake(&self.ents[c].name);
            self.push_fn(
                FnKind::Accessor,
                &ty,
                &s,
                Receiver::Value,
                vec![],
                Some(Ty::Addr(cty.clone())),
                vec![],
                plus(&cty, Expr::SelfAddr, konst(&cname)),
            );
            self.push_fn(
                FnKind::Accessor,
                &ty,
                &format!("from_{s}"),
                Receiver::None,
                vec![("x", Ty::Addr(cty))],
                Some(Ty::Addr(ty.clone())),
                vec![],
                minus(&ty, param("x"), konst(&cname)),
            );
        }
    }

    /// Layers starting where this entity starts: reached through seq heads
    /// and union branches, possibly through a repetition.
    fn casts(&mut self, id: usize) {
        let mut found = Vec::new();
        let mut seen = BTreeSet::from([id]);
        self.cast_dfs(id, false, 0, &mut seen, &mut found);
        let ty = self.tname(id);
        for (c, rep, depth) in found {
            if self.ents[c].kind != EKind::Layer {
                continue;
            }
            let cty = self.tname(c);
            let s = snake(&self.ents[c].name);
            if rep {
                self.push_fn(
                    FnKind::Cast,
                    &ty,
                    &format!("get_first_{s}"),
                    Receiver::Value,
                    vec![],
                    Some(Ty::Addr(cty.clone())),
                    vec![],
                    wrap(&cty, raw(Expr::SelfAddr)),
                );
            } else if depth >= 2 {
                self.push_fn(
                    FnKind::Cast,
                    &ty,
                    &s,
                    Receiver::Value,
                    vec![],
                    Some(Ty::Addr(cty.clone())),
                    vec![],
                    wrap(&cty, raw(Expr::SelfAddr)),
                );
                self.push_fn(
                    FnKind::Cast,
                    &ty,
                    &format!("from_{s}"),
                    Receiver::None,
                    vec![("x", Ty::Addr(cty))],
                    Some(Ty::Addr(ty.clone())),
                    vec![],
                    wrap(&ty, raw(param("x"))),
                );
            }
        }
    }

    fn cast_dfs(&self, n: usize, rep: bool, depth: usize, seen: &mut BTreeSet<usize>, out: &mut Vec<(usize, bool, usize)>) {
        for l in self.links.iter().filter(|l| l.parent == n && l.pos.head) {
            if seen.insert(l.child) {
                let r = rep || l.pos.repeated;
                out.push((l.child, r, depth + 1));
                self.cast_dfs(l.child, r, depth + 1, seen, out);
            }
        }
    }

    /// `get_t` / `set_t` for an entity holding a `T ptr`.
    fn pointer(&mut self, id: usize) {
        let Some(body) = self.ents[id].body else { return };
        let ValKind::Ptr(t) = core_kind(body) else { return };
        let target = if t.name.starts_with(|c: char| c.is_ascii_uppercase()) {
            self.find_layer(&t.name)
        } else {
            self.ents.iter().position(|e| e.kind == EKind::Field && e.name == t.name)
        };
        let Some(target) = target else {
            self.warn(Some(t.span), format!("pointer target `{}` has no address type; no accessors generated", t.name));
            return;
        };
        let (ty, pty) = (self.tname(id), self.tname(target));
        let s = snake(&t.name);
        self.push_fn(
            FnKind::PtrGet,
            &ty,
            &format!("get_{s}"),
            Receiver::Value,
            vec![],
            Some(Ty::Addr(pty.clone())),
            vec![],
            load(Ty::Addr(pty.clone()), Expr::SelfAddr),
        );
        self.push_fn(
            FnKind::PtrSet,
            &ty,
            &format!("set_{s}"),
            Receiver::Value,
            vec![("ptr", Ty::Addr(pty.clone()))],
            None,
            vec![],
            store(Ty::Addr(pty), Expr::SelfAddr, param("ptr")),
        );
    }

    fn bits(&mut self, id: usize) {
        let Some(body) = self.ents[id].body else { return };
        let ValKind::Bits(fields) = core_kind(body) else { return };
        let ty = self.tname(id);
        let name = self.ents[id].name.clone();
        let mut sizes = Vec::new();
        for f in fields {
            match eval_bits_u64(&f.size, self.arch) {
                Ok(n) => sizes.push(n),
                Err(_) => return,
            }
        }
        let total: u64 = sizes.iter().sum();
        let container = total.div_ceil(8);
        if let Some(s) = self.ents[id].size {
            if total > s.saturating_mul(8) {
                self.warn(
                    self.span_of(id),
                    format!("bits block of `{name}` needs {total} bits but `{name}` is {s} bytes"),
                );
            }
        }
        let mut low = 0u64;
        for (f, &num) in fields.iter().zip(&sizes) {
            let up = screaming(&f.name.name);
            let (lb, nb, mk) = (format!("{up}_LOW_BIT"), format!("{up}_NUM_BITS"), format!("{up}_MASK"));
            self.push_const(&ty, &lb, ConstKind::LowBit, Ty::Usize, low, true);
            self.push_const(&ty, &nb, ConstKind::NumBits, Ty::Usize, num, true);
            let end = low + num;
            let unit = [1u64, 2, 4, 8].into_iter().find(|w| 8 * w >= end).filter(|w| *w <= container);
            let mask = ((1u128 << num) - 1) << low;
            match unit {
                Some(w) => {
                    let uty = Ty::uint(w).expect("native width");
                    self.push_const(&ty, &mk, ConstKind::Mask, uty.clone(), mask as u64, true);
                    if num > 0 {
                        self.bit_accessors(&ty, &f.name.name, num, &uty, &lb, &mk);
                    }
                }
                None => {
                    if end <= 64 {
                        self.push_const(&ty, &mk, ConstKind::Mask, Ty::U64, mask as u64, true);
                    }
                    self.warn(
                        Some(f.name.span),
                        format!(
                            "bit field `{}` of `{name}` ends at bit {end}, past a native load of the {container}-byte block; no accessors generated",
                            f.name.name
                        ),
                    );
                }
            }
            low = end;
        }
    }

    fn bit_accessors(&mut self, ty: &str, fname: &str, num: u64, uty: &Ty, lb: &str, mk: &str) {
        let (lb, mk) = (format!("{ty}::{lb}"), format!("{ty}::{mk}"));
        let get = shr(and(load(uty.clone(), Expr::SelfAddr), konst(&mk)), konst(&lb));
        let put = store(
            uty.clone(),
            Expr::SelfAddr,
            or(
                and(load(uty.clone(), Expr::SelfAddr), not(konst(&mk))),
                and(shl(cast(uty.clone(), param("val")), konst(&lb)), konst(&mk)),
            ),
        );
        let (suffix, vty, get) =
            if num == 1 { ("bit", Ty::Bool, cast(Ty::Bool, get)) } else { ("bits", uty.clone(), get) };
        self.push_fn(
            FnKind::BitsGet,
            ty,
            &format!("get_{fname}_{suffix}"),
            Receiver::Value,
            vec![],
            Some(vty.clone()),
            vec![],
            get,
        );
        self.push_fn(FnKind::BitsSet, ty, &format!("set_{fname}_{suffix}"), Receiver::Value, vec![("val", vty)], None, vec![], put);
    }

    fn enumeration(&mut self, id: usize) {
        let Some(body) = self.ents[id].body else { return };
        let ValKind::Enum(flags) = core_kind(body) else { return };
        let ty = self.tname(id);
        let bytes = enum_bytes(flags.len());
        let vty = Ty::uint(bytes).unwrap_or(Ty::Usize);
        let n = flags.len() as u64;
        debug_assert!(bytes * 8 >= 64 || n <= 1u64 << (bytes * 8), "enum footprint holds every flag");
        for (i, f) in flags.iter().enumerate() {
            self.push_const(&ty, &screaming(&f.name), ConstKind::Flag, vty.clone(), i as u64, true);
        }
        if bytes == 0 || Ty::uint(bytes).is_none() {
            return;
        }
        self.push_fn(
            FnKind::EnumGet,
            &ty,
            "get_flag",
            Receiver::Value,
            vec![],
            Some(vty.clone()),
            vec![],
            load(vty.clone(), Expr::SelfAddr),
        );
        self.push_fn(
            FnKind::EnumSet,
            &ty,
            "set_flag",
            Receiver::Value,
            vec![("val", vty.clone())],
            None,
            vec![Assertion { lhs: param("val"), op: Cmp::Lt, rhs: Expr::Lit(n) }],
            store(vty, Expr::SelfAddr, param("val")),
        );
    }

    fn contains(&mut self, id: usize) {
        let Some(decl) = self.ents[id].decl else { return };
        if self.ents[id].kind != EKind::Layer {
            return;
        }
        let cname = decl.name.name.clone();
        for inner in &decl.contains {
            let Some(t) = self.find_layer(&inner.name) else {
                self.warn(
                    Some(inner.span),
                    format!("contains({}) on `{cname}`: no layer named `{}`; no conversions generated", inner.name, inner.name),
                );
                continue;
            };
            let (size, align) = (decl.magnitude.as_ref().and(self.ents[id].size), self.ents[id].align);
            let ok = matches!((size, align), (Some(s), Some(a)) if s == a && a.is_power_of_two());
            if !ok {
                self.warn(
                    Some(inner.span),
                    format!(
                        "contains({}) on `{cname}`: the container needs a power-of-two size equal to its alignment; no conversions generated",
                        inner.name
                    ),
                );
                continue;
            }
            let (cty, ity) = (self.tname(id), self.tname(t));
            let align_const = self
                .consts
                .iter()
                .find(|c| c.owner == cty && c.kind == ConstKind::AlignLog2)
                .map(|c| c.name.clone())
                .expect("power-of-two alignment has a log2 constant");
            let up = and(raw(Expr::SelfAddr), not(sub(shl(Expr::Lit(1), konst(&align_const)), Expr::Lit(1))));
            self.push_fn(
                FnKind::ContainsUp,
                &ity,
                &format!("containing_{}", snake(&cname)),
                Receiver::Value,
                vec![],
                Some(Ty::Addr(cty.clone())),
                vec![],
                wrap(&cty, up),
            );
            self.push_fn(
                FnKind::ContainsDown,
                &cty,
                &format!("first_{}", snake(&self.ents[t].name)),
                Receiver::Value,
                vec![],
                Some(Ty::Addr(ity.clone())),
                vec![],
                wrap(&ity, raw(Expr::SelfAddr)),
            );
            if let Some(s) = self.ents[t].size {
                let n = self.module_const(format!(
                    "{}_{}_STRIDE",
                    screaming(&self.ents[id].base),
                    screaming(&self.ents[t].base)
                ));
                self.push_const(&cty, &n, ConstKind::Stride, Ty::Usize, s, false);
            }
        }
    }

    // ---- cross-entity derivations --------------------------------------

    /// Cursor patterns for adjacent repeated fields of a seq.
    fn alloc_patterns(&mut self) {
        let mut jobs = Vec::new();
        for s in &self.seqs {
            for w in s.items.windows(2) {
                let (Some(a), Some(b)) = (w[0].field, w[1].field) else { continue };
                let (va, vb) = (w[0].demarc.value(), w[1].demarc.value());
                let repeated = |v: &DemarcVal| matches!(v.repeat, Some(Repeat::Fill) | Some(Repeat::Formal(_)));
                if !repeated(va) || !repeated(vb) {
                    continue;
                }
                let (Some(ea), Some(_)) = (kind_size(&va.kind, self.arch), kind_size(&vb.kind, self.arch)) else {
                    continue;
                };
                if ea == 0 {
                    continue;
                }
                let desc = match core_kind(va) {
                    ValKind::Ptr(t) => format!("{}_ptr", t.name),
                    ValKind::Layer(l) => l.name.name.clone(),
                    _ => format!("{}_elem", self.ents[a].name),
                };
                let static_off = if w[0].pos.repeated { None } else { w[0].pos.offset };
                jobs.push((s.owner, a, b, ea, desc, static_off));
            }
        }
        for (owner, a, b, ea, desc, off) in jobs {
            let (oty, aty, bty) = (self.tname(owner), self.tname(a), self.tname(b));
            let (an, bn) = (snake(&self.ents[a].name), snake(&self.ents[b].name));
            if let Some(o) = off {
                self.push_fn(
                    FnKind::Cast,
                    &oty,
                    &format!("cast_{}_to_{an}", snake(&self.ents[owner].name)),
                    Receiver::Value,
                    vec![],
                    Some(Ty::Addr(aty.clone())),
                    vec![],
                    plus(&aty, Expr::SelfAddr, Expr::Lit(o)),
                );
            }
            let mut asserts = Vec::new();
            if ea > 1 {
                asserts.push(Assertion { lhs: rem(param("bytes"), Expr::Lit(ea)), op: Cmp::Eq, rhs: Expr::Lit(0) });
            }
            if let (Some(o), Some(size)) = (off, self.ents[owner].size) {
                asserts.push(Assertion { lhs: param("bytes"), op: Cmp::Le, rhs: Expr::Lit(size.saturating_sub(o)) });
            }
            self.push_fn(
                FnKind::CursorInit,
                &oty,
                &format!("init_{bn}_after_{an}"),
                Receiver::None,
                vec![("p1", Ty::Addr(aty.clone())), ("bytes", Ty::Usize)],
                Some(Ty::Addr(bty.clone())),
                asserts,
                plus(&bty, param("p1"), param("bytes")),
            );
            self.push_fn(
                FnKind::Bump,
                &oty,
                &format!("bump_new_{desc}"),
                Receiver::None,
                vec![("rhs", Ty::Addr(bty.clone()))],
                Some(Ty::Tuple(vec![Ty::Addr(aty.clone()), Ty::Addr(bty.clone())])),
                vec![],
                Expr::Tuple(vec![wrap(&aty, raw(param("rhs"))), plus(&bty, param("rhs"), Expr::Lit(ea))]),
            );
        }
    }

    fn unit_type(&mut self, base: &str, size: u64) -> String {
        if let Some(id) = self.ents.iter().position(|e| e.kind == EKind::Unit && e.name == base) {
            return self.tname(id);
        }
        let mut b = base.to_string();
        while self.ents.iter().any(|e| e.base == b) {
            b = format!("Unit{b}");
        }
        let id = self.push_entity(Entity {
            kind: EKind::Unit,
            name: base.to_string(),
            base: b,
            parent: None,
            body: None,
            decl: None,
            size: Some(size),
            align: None,
            source: format!("{} unit ({size} bytes)", base.to_lowercase()),
        });
        self.address_type(id);
        self.tname(id)
    }

    fn elem(&mut self, v: &'s DemarcVal, field: Option<usize>) -> Option<Elem> {
        let size = kind_size(&v.kind, self.arch).filter(|s| *s > 0)?;
        let word = self.arch.word_bytes();
        Some(match core_kind(v) {
            ValKind::Layer(l) => {
                let id = if is_alias(l) {
                    self.find_layer(&l.name.name)?
                } else {
                    *self.by_body.get(&(&l.body as *const _))?
                };
                Elem { name: l.origin.clone().unwrap_or_else(|| l.name.name.clone()), ty: self.tname(id), size }
            }
            ValKind::Ptr(t) => Elem { name: format!("{}Ptr", t.name), ty: self.unit_type("Word", word), size },
            _ if size == 1 => Elem { name: "Byte".into(), ty: self.unit_type("Byte", 1), size },
            _ if size == word => Elem { name: "Word".into(), ty: self.unit_type("Word", word), size },
            _ => {
                let f = field?;
                Elem { name: capitalize(&self.ents[f].name), ty: self.tname(f), size }
            }
        })
    }

    fn sites(&self, v: &'s DemarcVal, f: &str, field: Option<usize>, out: &mut Vec<(&'s DemarcVal, Option<usize>)>) {
        if matches!(&v.repeat, Some(Repeat::Formal(x)) if x.name == f) {
            out.push((v, field));
            return;
        }
        match &v.kind {
            ValKind::Seq(ds) | ValKind::Union(ds) => {
                for d in ds {
                    match d {
                        Demarc::Field(fl) => self.sites(&fl.value, f, self.by_body.get(&(&fl.value as *const _)).copied(), out),
                        Demarc::Val(x) => self.sites(x, f, None, out),
                    }
                }
            }
            ValKind::Group(g) => self.sites(g, f, field, out),
            ValKind::Layer(l) if !is_alias(l) && !l.formals.iter().any(|x| x.name == f) => {
                self.sites(&l.body, f, None, out)
            }
            _ => {}
        }
    }

    /// Maps between regions repeated by the same formal: from the first
    /// region to each later one.
    fn shared_maps(&mut self) {
        let layers: Vec<usize> = (0..self.ents.len()).filter(|&i| self.ents[i].kind == EKind::Layer).collect();
        for id in layers {
            let Some(decl) = self.ents[id].decl else { continue };
            for f in &decl.formals {
                let mut sites = Vec::new();
                self.sites(&decl.body, &f.name, None, &mut sites);
                sites.retain(|(v, _)| kind_size(&v.kind, self.arch).is_some_and(|s| s > 0));
                if sites.len() < 2 {
                    continue;
                }
                let elems: Vec<Elem> = sites.into_iter().filter_map(|(v, fld)| self.elem(v, fld)).collect();
                let Some((from, rest)) = elems.split_first() else { continue };
                for to in rest {
                    self.map(id, &f.name, from, to);
                }
            }
        }
    }

    fn map(&mut self, layer: usize, formal: &str, from: &Elem, to: &Elem) {
        let want = format!("{}2{}", from.name, to.name);
        let clash = |n: &str, d: &Self| d.maps.iter().any(|m| m.name == n) || d.types.iter().any(|t| t.name == n);
        let mut name = want.clone();
        if clash(&name, self) {
            name = format!("{}_{want}", self.ents[layer].base);
        }
        let mut k = 2;
        let q = name.clone();
        while clash(&name, self) {
            name = format!("{q}_{k}");
            k += 1;
        }
        self.maps.push(MapRecord {
            name: name.clone(),
            layer: self.tname(layer),
            formal: formal.to_string(),
            from_type: from.ty.clone(),
            to_type: to.ty.clone(),
            from_elem_bytes: from.size,
            to_elem_bytes: to.size,
        });
        let index = |x: Expr, base: &str, size: u64| {
            let d = sub(raw(x), raw(field(base)));
            if size == 1 {
                d
            } else if size.is_power_of_two() {
                shr(d, Expr::Lit(u64::from(size.trailing_zeros())))
            } else {
                div(d, Expr::Lit(size))
            }
        };
        let scale = |i: Expr, size: u64| {
            if size == 1 {
                i
            } else if size.is_power_of_two() {
                shl(i, Expr::Lit(u64::from(size.trailing_zeros())))
            } else {
                mul(i, Expr::Lit(size))
            }
        };
        let loc_raw = add(raw(field("to_base")), scale(index(param("from"), "from_base", from.size), to.size));
        let loc = wrap(&to.ty, loc_raw.clone());
        let asserts = vec![
            Assertion { lhs: raw(param("from")), op: Cmp::Ge, rhs: raw(field("from_base")) },
            Assertion { lhs: raw(field("end")), op: Cmp::Gt, rhs: loc_raw },
        ];
        let fp = || vec![("from", Ty::Addr(from.ty.clone()))];
        self.push_fn(
            FnKind::MapTranslate,
            &name,
            "translate",
            Receiver::Ref,
            fp(),
            Some(Ty::Addr(to.ty.clone())),
            asserts.clone(),
            loc.clone(),
        );
        if let Some(vty) = Ty::uint(to.size) {
            let mut p = fp();
            p.push(("val", vty.clone()));
            self.push_fn(
                FnKind::MapSet,
                &name,
                "set",
                Receiver::Ref,
                p,
                None,
                asserts.clone(),
                store(vty.clone(), loc.clone(), param("val")),
            );
            self.push_fn(FnKind::MapGet, &name, "get", Receiver::Ref, fp(), Some(vty.clone()), asserts, load(vty, loc));
        }
        let back = plus(&from.ty, field("from_base"), scale(index(param("to"), "to_base", to.size), from.size));
        self.push_fn(
            FnKind::MapTranslate,
            &name,
            "translate_back",
            Receiver::Ref,
            vec![("to", Ty::Addr(to.ty.clone()))],
            Some(Ty::Addr(from.ty.clone())),
            vec![
                Assertion { lhs: raw(param("to")), op: Cmp::Ge, rhs: raw(field("to_base")) },
                Assertion { lhs: raw(field("end")), op: Cmp::Gt, rhs: raw(param("to")) },
            ],
            back,
        );
    }

    // ---- output ----------------------------------------------------------

    fn finish(self) -> Result<(GeneratedInterface, Vec<Diagnostic>), CodegenError> {
        let word_bits = self.arch.word_bits;
        for c in &self.consts {
            let limit = if matches!(c.ty, Ty::Usize) { word_bits } else { c.ty.bytes(self.arch.word_bytes()) * 8 };
            if limit < 64 && c.value >> limit != 0 {
                return Err(CodegenError::ConstantOverflow { name: c.name.clone(), value: c.value, word_bits: limit });
            }
        }
        let mut rank: HashMap<&str, usize> = HashMap::new();
        for (i, t) in self.types.iter().enumerate() {
            rank.insert(&t.name, i);
        }
        for (i, m) in self.maps.iter().enumerate() {
            rank.insert(&m.name, self.types.len() + i);
        }
        let mut consts = self.consts.clone();
        consts.sort_by_key(|c| rank[c.owner.as_str()]);
        let mut fns = self.fns.clone();
        fns.sort_by_key(|f| rank[f.owner.as_str()]);
        let mut diags = self.diags;
        normalize(&mut diags);
        Ok((
            GeneratedInterface {
                format: DUMP_FORMAT.to_string(),
                version: DUMP_VERSION,
                word_bytes: self.arch.word_bytes(),
                address_types: self.types,
                constants: consts,
                functions: fns,
                maps: self.maps,
            },
            diags,
        ))
    }
}
