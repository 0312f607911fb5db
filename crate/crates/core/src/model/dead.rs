//! Consistency check: union branches that no layout of the enclosing
//! sized layer can use.

use std::collections::BTreeSet;

use super::arena::{Arena, Env};
use super::feasible::{min_footprint, Feasible};
use crate::arith::{eval_bytes_u64, ArchConfig};
use crate::calculus::compile_layer;
use crate::diag::{Diagnostic, Span, Stage};
use crate::syntax::{Demarc, DemarcVal, LayerDecl, Spec, ValKind};

#[derive(Clone, Copy, Debug)]
pub struct DeadBranchOptions {
    /// Largest magnitude analyzed exactly; larger layers only get the
    /// minimum-footprint pre-pass.
    pub cap: u64,
    /// Largest number of address residues tried per layer.
    pub max_residues: u64,
    /// Bitset word operations allowed per branch.
    pub work_budget: u64,
}

impl Default for DeadBranchOptions {
    fn default() -> Self {
        DeadBranchOptions { cap: 1 << 16, max_residues: 256, work_budget: 1 << 28 }
    }
}

#[derive(Clone, Copy, Debug)]
enum Step {
    Item(usize),
    Group,
    Layer,
}

struct Site {
    path: Vec<Step>,
    branches: Vec<Span>,
}

/// Unions reachable from `v` without entering another sized layer.
fn collect_sites(v: &DemarcVal, path: &mut Vec<Step>, out: &mut Vec<Site>) {
    match &v.kind {
        ValKind::Seq(ds) | ValKind::Union(ds) => {
            if matches!(v.kind, ValKind::Union(_)) {
                out.push(Site { path: path.clone(), branches: ds.iter().map(Demarc::span).collect() });
            }
            for (i, d) in ds.iter().enumerate() {
                path.push(Step::Item(i));
                collect_sites(d.value(), path, out);
                path.pop();
            }
        }
        ValKind::Group(g) => {
            path.push(Step::Group);
            collect_sites(g, path, out);
            path.pop();
        }
        ValKind::Layer(l) if l.magnitude.is_none() => {
            path.push(Step::Layer);
            collect_sites(&l.body, path, out);
            path.pop();
        }
        _ => {}
    }
}

fn navigate<'a>(mut v: &'a mut DemarcVal, path: &[Step]) -> &'a mut DemarcVal {
    for s in path {
        v = match (s, &mut v.kind) {
            (Step::Item(i), ValKind::Seq(ds) | ValKind::Union(ds)) => ds[*i].value_mut(),
            (Step::Group, ValKind::Group(g)) => g,
            (Step::Layer, ValKind::Layer(l)) => &mut l.body,
            _ => unreachable!("paths come from collect_sites on the same tree"),
        };
    }
    v
}

/// The layer with the union at `path` replaced by its branch `j` alone.
fn restrict(decl: &LayerDecl, path: &[Step], j: usize) -> LayerDecl {
    let mut d = decl.clone();
    let v = navigate(&mut d.body, path);
    if let ValKind::Union(ds) = &v.kind {
        v.kind = ValKind::Seq(vec![ds[j].clone()]);
    }
    d
}

enum Verdict {
    Live,
    Dead,
    Unknown(String),
}

fn branch_verdict(decl: &LayerDecl, magnitude: u64, arch: &ArchConfig, opts: &DeadBranchOptions) -> Verdict {
    let Ok(expr) = compile_layer(decl, arch) else {
        return Verdict::Unknown("layer does not compile".into());
    };
    let mut arena = Arena::new();
    let root = arena.intern_expr(&expr);
    let env = Env::new();
    if min_footprint(&arena, root, &env).is_none() {
        return Verdict::Dead;
    }
    if magnitude > opts.cap {
        return Verdict::Unknown(format!("magnitude {magnitude} bytes exceeds the analysis cap of {} bytes", opts.cap));
    }
    let align = match &decl.alignment {
        Some(a) => eval_bytes_u64(a, arch).unwrap_or(1).max(1),
        None => 1,
    };
    let Some(modulus) = arena.info(root).modulus else {
        return Verdict::Unknown("alignments are too large to analyze".into());
    };
    let residues = if modulus % align == 0 { modulus / align } else { modulus };
    if residues > opts.max_residues {
        return Verdict::Unknown(format!("{residues} address residues exceed the limit of {}", opts.max_residues));
    }
    let step = if modulus % align == 0 { align } else { 1 };
    let mut f = Feasible::new(&arena, magnitude, opts.work_budget);
    for r in 0..residues {
        match f.sizes(root, u128::from(r * step), &env) {
            Ok(s) if s.get(magnitude) => return Verdict::Live,
            Ok(_) => {}
            Err(_) => return Verdict::Unknown("analysis budget exhausted".into()),
        }
    }
    Verdict::Dead
}

fn check_layer(
    decl: &LayerDecl,
    top: bool,
    arch: &ArchConfig,
    opts: &DeadBranchOptions,
    seen: &mut BTreeSet<(u32, u32)>,
    out: &mut Vec<Diagnostic>,
) {
    let mut sites = Vec::new();
    collect_sites(&decl.body, &mut Vec::new(), &mut sites);
    if sites.is_empty() {
        return;
    }
    let Some(m) = &decl.magnitude else {
        // Nested unsized layers are covered by their sized ancestors.
        if !top {
            return;
        }
        out.push(Diagnostic::note(
            Stage::Consistency,
            Some(decl.name.span),
            format!("union branches of `{}` not checked: the layer has no declared size", decl.name.name),
        ));
        return;
    };
    let Ok(magnitude) = eval_bytes_u64(m, arch) else {
        return;
    };
    let mut skipped = None;
    for site in &sites {
        for (j, span) in site.branches.iter().enumerate() {
            if seen.contains(&(span.line, span.col)) {
                continue;
            }
            match branch_verdict(&restrict(decl, &site.path, j), magnitude, arch, opts) {
                Verdict::Live => {}
                Verdict::Dead => {
                    seen.insert((span.line, span.col));
                    out.push(Diagnostic::warning(
                        Stage::Consistency,
                        Some(*span),
                        format!(
                            "dead union branch: no {magnitude}-byte `{}` layout can take this branch",
                            decl.name.name
                        ),
                    ));
                }
                Verdict::Unknown(why) => skipped = Some(why),
            }
        }
    }
    if let Some(why) = skipped {
        out.push(Diagnostic::note(
            Stage::Consistency,
            Some(decl.name.span),
            format!("union branches of `{}` not fully checked: {why}", decl.name.name),
        ));
    }
}

/// Warns about union branches that cannot occur in any layout of the
/// enclosing sized layer. `spec` must be expanded and scope-checked.
pub fn check_dead_branches(spec: &Spec, arch: &ArchConfig, opts: &DeadBranchOptions) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for l in &spec.layers {
        check_layer(l, true, arch, opts, &mut seen, &mut out);
        l.visit_layers(&mut |n| check_layer(n, false, arch, opts, &mut seen, &mut out));
    }
    crate::diag::normalize(&mut out);
    out
}
