//! Macro expansion and scope checking of formals.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::ToPrimitive;

use crate::diag::{Diagnostic, Span, Stage};
use crate::syntax::*;

/// Top-level declarations by name, with the macro reference graph.
#[derive(Debug, Default)]
pub struct MacroTable<'a> {
    pub layers: BTreeMap<String, &'a LayerDecl>,
    /// Layer name -> names of layers it references as macros, in order.
    pub refs: BTreeMap<String, Vec<(String, Span)>>,
}

impl<'a> MacroTable<'a> {
    pub fn build(spec: &'a Spec) -> Result<Self, Vec<Diagnostic>> {
        let mut t = MacroTable::default();
        let mut errs = Vec::new();
        for l in &spec.layers {
            if t.layers.insert(l.name.name.clone(), l).is_some() {
                errs.push(Diagnostic::error(
                    Stage::Expand,
                    Some(l.name.span),
                    format!("layer `{}` is declared more than once", l.name.name),
                ));
            }
            let mut refs = Vec::new();
            collect_macro_refs(&l.body, &mut refs);
            t.refs.insert(l.name.name.clone(), refs);
        }
        for refs in t.refs.values() {
            for (name, span) in refs {
                if !t.layers.contains_key(name) {
                    errs.push(Diagnostic::error(
                        Stage::Expand,
                        Some(*span),
                        format!("`{name}` does not name a top-level layer"),
                    ));
                }
            }
        }
        if errs.is_empty() {
            Ok(t)
        } else {
            Err(errs)
        }
    }

    /// Finds a cycle in the reference graph, returned as the sequence of
    /// layer names along it (first name repeated at the end).
    pub fn find_cycle(&self) -> Option<(Vec<String>, Span)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        fn dfs(
            t: &MacroTable<'_>,
            n: &str,
            marks: &mut HashMap<String, Mark>,
            stack: &mut Vec<(String, Span)>,
        ) -> Option<(Vec<String>, Span)> {
            marks.insert(n.to_string(), Mark::Active);
            for (m, sp) in t.refs.get(n).into_iter().flatten() {
                stack.push((m.clone(), *sp));
                match marks.get(m.as_str()) {
                    Some(Mark::Active) => return Some((cycle_from_stack(stack, m), *sp)),
                    Some(Mark::Done) => {}
                    None => {
                        if t.layers.contains_key(m.as_str()) {
                            if let Some(c) = dfs(t, m, marks, stack) {
                                return Some(c);
                            }
                        }
                    }
                }
                stack.pop();
            }
            marks.insert(n.to_string(), Mark::Done);
            None
        }
        let mut marks = HashMap::new();
        for n in self.layers.keys() {
            if !marks.contains_key(n.as_str()) {
                let mut stack = vec![(n.clone(), Span::default())];
                if let Some(c) = dfs(self, n, &mut marks, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }
}

/// `stack` ends with the edge back to `m`; the cycle runs from the earlier
/// occurrence of `m` to the end.
fn cycle_from_stack(stack: &[(String, Span)], m: &str) -> Vec<String> {
    let start = stack.iter().position(|(x, _)| x == m).unwrap_or(0);
    stack[start..].iter().map(|(x, _)| x.clone()).collect()
}

fn collect_macro_refs(v: &DemarcVal, out: &mut Vec<(String, Span)>) {
    match &v.kind {
        ValKind::Macro { name, .. } => out.push((name.name.clone(), name.span)),
        ValKind::Layer(l) => collect_macro_refs(&l.body, out),
        ValKind::Group(g) => collect_macro_refs(g, out),
        ValKind::Seq(ds) | ValKind::Union(ds) => ds.iter().for_each(|d| collect_macro_refs(d.value(), out)),
        _ => {}
    }
}

/// A formal's replacement during instantiation.
#[derive(Clone, Debug)]
enum Subst {
    Formal(String),
    Count(u64),
}

struct Expander<'a> {
    table: MacroTable<'a>,
    /// Names declared explicitly anywhere in the source.
    declared: BTreeSet<String>,
    counter: usize,
    errors: Vec<Diagnostic>,
    warnings: Vec<Diagnostic>,
}

/// Result of macro expansion: the macro-free spec and any warnings.
#[derive(Debug)]
pub struct Expansion {
    pub spec: Spec,
    pub warnings: Vec<Diagnostic>,
}

/// Replaces every macro reference by an instance of the referenced layer.
pub fn expand_macros(spec: &Spec) -> Result<Expansion, Vec<Diagnostic>> {
    let table = MacroTable::build(spec)?;
    if let Some((cycle, span)) = table.find_cycle() {
        return Err(vec![Diagnostic::error(
            Stage::Expand,
            Some(span),
            format!("recursive macro reference: {}", cycle.join(" -> ")),
        )]);
    }
    let mut declared = BTreeSet::new();
    for l in &spec.layers {
        declared.insert(l.name.name.clone());
        l.visit_layers(&mut |n| {
            declared.insert(n.name.name.clone());
        });
    }
    let mut ex = Expander { table, declared, counter: 0, errors: Vec::new(), warnings: Vec::new() };
    let mut out = Spec::default();
    for l in &spec.layers {
        let mut l = l.clone();
        ex.expand_layer(&mut l);
        out.layers.push(l);
    }
    if ex.errors.is_empty() {
        Ok(Expansion { spec: out, warnings: ex.warnings })
    } else {
        Err(ex.errors)
    }
}

impl<'a> Expander<'a> {
    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{base}__{}", self.counter)
    }

    /// Expands macros inside `l`, hoisting unsupplied formals of direct
    /// instances onto `l`.
    fn expand_layer(&mut self, l: &mut LayerDecl) {
        let mut hoisted = Vec::new();
        let mut in_scope: BTreeSet<String> = l.formals.iter().map(|f| f.name.clone()).collect();
        collect_formal_uses(&l.body, &mut in_scope);
        self.expand_val(&mut l.body, &mut hoisted, &mut in_scope);
        l.formals.extend(hoisted);
    }

    fn expand_val(&mut self, v: &mut DemarcVal, hoisted: &mut Vec<Ident>, in_scope: &mut BTreeSet<String>) {
        match &mut v.kind {
            ValKind::Macro { name, args } => {
                let (name, args) = (name.clone(), args.clone());
                if let Some(inst) = self.instantiate(&name, &args, hoisted, in_scope) {
                    v.kind = ValKind::Layer(Box::new(inst));
                }
            }
            ValKind::Layer(l) => self.expand_layer(l),
            ValKind::Group(g) => self.expand_val(g, hoisted, in_scope),
            ValKind::Seq(ds) | ValKind::Union(ds) => {
                for d in ds {
                    self.expand_val(d.value_mut(), hoisted, in_scope);
                }
            }
            _ => {}
        }
    }

    fn instantiate(
        &mut self,
        name: &Ident,
        args: &[MacroArg],
        hoisted: &mut Vec<Ident>,
        in_scope: &mut BTreeSet<String>,
    ) -> Option<LayerDecl> {
        let target = match self.table.layers.get(&name.name) {
            Some(t) => (*t).clone(),
            None => {
                self.errors.push(Diagnostic::error(
                    Stage::Expand,
                    Some(name.span),
                    format!("`{}` does not name a top-level layer", name.name),
                ));
                return None;
            }
        };
        if args.len() > target.formals.len() {
            self.errors.push(Diagnostic::error(
                Stage::Expand,
                Some(name.span),
                format!(
                    "`{}` takes {} argument(s) but {} were supplied",
                    name.name,
                    target.formals.len(),
                    args.len()
                ),
            ));
            return None;
        }
        let mut mono = name.name.clone();
        for a in args {
            mono.push('_');
            match a {
                MacroArg::Formal(f) => mono.push_str(&f.name),
                MacroArg::Literal(l) => mono.push_str(&l.value.to_string()),
            }
        }
        if !args.is_empty() && self.declared.contains(&mono) {
            self.errors.push(Diagnostic::error(
                Stage::Expand,
                Some(name.span),
                format!("instance name `{mono}` of `{}` collides with a declared layer", name.name),
            ));
            return None;
        }
        let mut subst: HashMap<String, Subst> = HashMap::new();
        for (f, a) in target.formals.iter().zip(args) {
            let s = match a {
                MacroArg::Formal(g) => Subst::Formal(g.name.clone()),
                MacroArg::Literal(l) => match l.value.to_u64() {
                    Some(k) => Subst::Count(k),
                    None => {
                        self.errors.push(Diagnostic::error(
                            Stage::Expand,
                            Some(name.span),
                            format!("argument {} to `{}` is too large", l.value, name.name),
                        ));
                        return None;
                    }
                },
            };
            subst.insert(f.name.clone(), s);
        }
        // Unsupplied formals move to the enclosing layer, renamed when the
        // name is already meaningful there.
        for f in &target.formals[args.len()..] {
            let new = if in_scope.contains(&f.name) || hoisted.iter().any(|h| h.name == f.name) {
                self.fresh(&f.name)
            } else {
                f.name.clone()
            };
            in_scope.insert(new.clone());
            if new != f.name {
                subst.insert(f.name.clone(), Subst::Formal(new.clone()));
            }
            hoisted.push(Ident::new(new, f.span));
        }
        let mut inst = target;
        inst.name = Ident::new(mono, name.span);
        inst.formals.clear();
        inst.origin = Some(name.name.clone());
        self.subst_val(&mut inst.body, &subst, &name.name);
        self.expand_layer(&mut inst);
        Some(inst)
    }

    fn subst_val(&mut self, v: &mut DemarcVal, subst: &HashMap<String, Subst>, target: &str) {
        if let Some(Repeat::Formal(f)) = &v.repeat {
            match subst.get(&f.name) {
                Some(Subst::Formal(g)) => v.repeat = Some(Repeat::Formal(Ident::new(g.clone(), f.span))),
                Some(Subst::Count(k)) => v.repeat = Some(Repeat::Count(*k)),
                None => {}
            }
        }
        match &mut v.kind {
            ValKind::Macro { name, args } => {
                for a in args.iter_mut() {
                    if let MacroArg::Formal(f) = a {
                        match subst.get(&f.name) {
                            Some(Subst::Formal(g)) => {
                                self.warnings.push(Diagnostic::warning(
                                    Stage::Expand,
                                    Some(f.span),
                                    format!(
                                        "argument `{}` of `{}` is itself a formal of `{target}` and is passed on as `{g}`; only one level of substitution is applied",
                                        f.name, name.name
                                    ),
                                ));
                                *a = MacroArg::Formal(Ident::new(g.clone(), f.span));
                            }
                            Some(Subst::Count(k)) => {
                                *a = MacroArg::Literal(Literal { value: (*k).into(), radix: Radix::Dec });
                            }
                            None => {}
                        }
                    }
                }
            }
            ValKind::Layer(l) => {
                // Inner binders shadow; inner binders that would capture a
                // replacement name are renamed first.
                let inner: HashMap<String, Subst> =
                    subst.iter().filter(|(k, _)| !l.formals.iter().any(|f| &f.name == *k)).map(|(k, v)| (k.clone(), v.clone())).collect();
                let targets: BTreeSet<String> = inner
                    .values()
                    .filter_map(|s| match s {
                        Subst::Formal(g) => Some(g.clone()),
                        Subst::Count(_) => None,
                    })
                    .collect();
                let mut renames = HashMap::new();
                for f in l.formals.iter_mut() {
                    if targets.contains(&f.name) {
                        let new = self.fresh(&f.name);
                        renames.insert(f.name.clone(), Subst::Formal(new.clone()));
                        f.name = new;
                    }
                }
                if !renames.is_empty() {
                    self.subst_val(&mut l.body, &renames, target);
                }
                if !inner.is_empty() {
                    self.subst_val(&mut l.body, &inner, target);
                }
            }
            ValKind::Group(g) => self.subst_val(g, subst, target),
            ValKind::Seq(ds) | ValKind::Union(ds) => {
                for d in ds {
                    self.subst_val(d.value_mut(), subst, target);
                }
            }
            _ => {}
        }
    }
}

fn collect_formal_uses(v: &DemarcVal, out: &mut BTreeSet<String>) {
    if let Some(Repeat::Formal(f)) = &v.repeat {
        out.insert(f.name.clone());
    }
    match &v.kind {
        ValKind::Macro { args, .. } => {
            for a in args {
                if let MacroArg::Formal(f) = a {
                    out.insert(f.name.clone());
                }
            }
        }
        ValKind::Layer(l) => {
            out.extend(l.formals.iter().map(|f| f.name.clone()));
            collect_formal_uses(&l.body, out);
        }
        ValKind::Group(g) => collect_formal_uses(g, out),
        ValKind::Seq(ds) | ValKind::Union(ds) => ds.iter().for_each(|d| collect_formal_uses(d.value(), out)),
        _ => {}
    }
}

// ---- scopes --------------------------------------------------------------

/// One formal-id use and the declaration binding it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub name: String,
    pub use_span: Span,
    pub binder_layer: String,
    pub binder_span: Span,
}

#[derive(Clone, Debug, Default)]
pub struct ScopeReport {
    pub resolved: Vec<Resolution>,
    pub unresolved: Vec<(String, Span)>,
}

impl ScopeReport {
    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        self.unresolved
            .iter()
            .map(|(n, sp)| {
                Diagnostic::error(Stage::Scope, Some(*sp), format!("formal `{n}` is not declared by any enclosing layer"))
            })
            .collect()
    }

    pub fn is_ok(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// Resolves every formal use to its nearest enclosing binder.
pub fn check_scopes(spec: &Spec) -> ScopeReport {
    let mut rep = ScopeReport::default();
    let mut stack: Vec<&LayerDecl> = Vec::new();
    for l in &spec.layers {
        scope_layer(l, &mut stack, &mut rep);
    }
    rep
}

fn scope_layer<'a>(l: &'a LayerDecl, stack: &mut Vec<&'a LayerDecl>, rep: &mut ScopeReport) {
    stack.push(l);
    scope_val(&l.body, stack, rep);
    stack.pop();
}

fn resolve(name: &Ident, stack: &[&LayerDecl], rep: &mut ScopeReport) {
    for l in stack.iter().rev() {
        if let Some(b) = l.formals.iter().find(|f| f.name == name.name) {
            rep.resolved.push(Resolution {
                name: name.name.clone(),
                use_span: name.span,
                binder_layer: l.name.name.clone(),
                binder_span: b.span,
            });
            return;
        }
    }
    rep.unresolved.push((name.name.clone(), name.span));
}

fn scope_val<'a>(v: &'a DemarcVal, stack: &mut Vec<&'a LayerDecl>, rep: &mut ScopeReport) {
    if let Some(Repeat::Formal(f)) = &v.repeat {
        resolve(f, stack, rep);
    }
    match &v.kind {
        ValKind::Macro { args, .. } => {
            for a in args {
                if let MacroArg::Formal(f) = a {
                    resolve(f, stack, rep);
                }
            }
        }
        ValKind::Layer(l) => scope_layer(l, stack, rep),
        ValKind::Group(g) => scope_val(g, stack, rep),
        ValKind::Seq(ds) | ValKind::Union(ds) => ds.iter().for_each(|d| scope_val(d.value(), stack, rep)),
        _ => {}
    }
}
