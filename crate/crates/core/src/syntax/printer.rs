//! Pretty-printer. Output re-parses to a structurally equal tree.

use std::fmt::Write;

use super::ast::*;

pub fn print_spec(spec: &Spec) -> String {
    let mut out = String::new();
    for (i, l) in spec.layers.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_layer(&mut out, l, 0);
        out.push('\n');
    }
    out
}

pub fn print_layer_decl(l: &LayerDecl) -> String {
    let mut out = String::new();
    print_layer(&mut out, l, 0);
    out
}

pub fn print_demarc_val(v: &DemarcVal) -> String {
    let mut out = String::new();
    print_val(&mut out, v, 0);
    out
}

fn indent(out: &mut String, n: usize) {
    for _ in 0..n {
        out.push_str("  ");
    }
}

fn print_layer(out: &mut String, l: &LayerDecl, depth: usize) {
    out.push_str(&l.name.name);
    if !l.formals.is_empty() {
        let fs: Vec<&str> = l.formals.iter().map(|f| f.name.as_str()).collect();
        write!(out, "<{}>", fs.join(", ")).unwrap();
    }
    match (&l.magnitude, &l.alignment) {
        (Some(m), Some(a)) if m == a => write!(out, " @|{}|@", print_size(m)).unwrap(),
        (m, a) => {
            if let Some(m) = m {
                write!(out, " ||{}||", print_size(m)).unwrap();
            }
            if let Some(a) = a {
                write!(out, " @({})@", print_size(a)).unwrap();
            }
        }
    }
    for c in &l.contains {
        write!(out, " contains({})", c.name).unwrap();
    }
    out.push_str(" -> ");
    print_val(out, &l.body, depth);
}

fn is_compound(v: &DemarcVal) -> bool {
    match &v.kind {
        ValKind::Seq(ds) | ValKind::Union(ds) => {
            ds.len() > 1 || ds.iter().any(|d| is_compound(d.value()))
        }
        ValKind::Layer(_) => true,
        ValKind::Group(g) => is_compound(g),
        _ => false,
    }
}

fn print_val(out: &mut String, v: &DemarcVal, depth: usize) {
    match &v.repeat {
        None => {}
        Some(Repeat::Fill) => out.push_str("# "),
        Some(Repeat::Formal(f)) => write!(out, "{} ", f.name).unwrap(),
        Some(Repeat::Count(k)) => write!(out, "{k} ").unwrap(),
    }
    match &v.kind {
        ValKind::Enum(flags) => {
            let fs: Vec<&str> = flags.iter().map(|f| f.name.as_str()).collect();
            write!(out, "enum {{ {} }}", fs.join(" | ")).unwrap();
        }
        ValKind::Bits(fields) => {
            let fs: Vec<String> =
                fields.iter().map(|f| format!("{} : {}", f.name.name, print_size(&f.size))).collect();
            write!(out, "bits {{ {} }}", fs.join(", ")).unwrap();
        }
        ValKind::Seq(ds) => print_list(out, "seq", ",", ds, depth, is_compound(v)),
        ValKind::Union(ds) => print_list(out, "union", " |", ds, depth, is_compound(v)),
        ValKind::Ptr(t) => write!(out, "{} ptr", t.name).unwrap(),
        ValKind::Size(s) => {
            let simple = matches!(s, SizeArith::Term { multiplier: None, .. });
            if v.repeat.is_some() && !simple {
                write!(out, "({})", print_size(s)).unwrap();
            } else {
                out.push_str(&print_size(s));
            }
        }
        ValKind::Macro { name, args } => {
            out.push_str(&name.name);
            if !args.is_empty() {
                let a: Vec<String> = args
                    .iter()
                    .map(|a| match a {
                        MacroArg::Formal(f) => f.name.clone(),
                        MacroArg::Literal(l) => print_literal(l),
                    })
                    .collect();
                write!(out, "<{}>", a.join(", ")).unwrap();
            }
        }
        ValKind::Layer(l) => print_layer(out, l, depth),
        ValKind::Group(g) => {
            out.push('(');
            print_val(out, g, depth);
            out.push(')');
        }
    }
}

fn print_list(out: &mut String, kw: &str, sep: &str, ds: &[Demarc], depth: usize, multiline: bool) {
    if !multiline {
        write!(out, "{kw} {{ ").unwrap();
        for (i, d) in ds.iter().enumerate() {
            if i > 0 {
                write!(out, "{sep} ").unwrap();
            }
            print_demarc(out, d, depth);
        }
        out.push_str(" }");
        return;
    }
    writeln!(out, "{kw} {{").unwrap();
    for (i, d) in ds.iter().enumerate() {
        indent(out, depth + 1);
        print_demarc(out, d, depth + 1);
        if i + 1 < ds.len() {
            out.push_str(sep.trim_start());
        }
        out.push('\n');
    }
    indent(out, depth);
    out.push('}');
}

fn print_demarc(out: &mut String, d: &Demarc, depth: usize) {
    match d {
        Demarc::Field(f) => {
            write!(out, "{} : ", f.name.name).unwrap();
            print_val(out, &f.value, depth);
        }
        Demarc::Val(v) => print_val(out, v, depth),
    }
}

pub fn print_size(s: &SizeArith) -> String {
    match s {
        SizeArith::Term { multiplier: None, unit, .. } => unit.keyword().to_string(),
        SizeArith::Term { multiplier: Some(m), unit, .. } => format!("{} {}", print_lit(m), unit.keyword()),
        SizeArith::Bin { op, lhs, rhs, .. } => {
            let sym = match op {
                SizeOp::Add => "+",
                SizeOp::Sub => "-",
            };
            let r = match **rhs {
                SizeArith::Bin { .. } => format!("({})", print_size(rhs)),
                _ => print_size(rhs),
            };
            format!("{} {} {}", print_size(lhs), sym, r)
        }
    }
}

pub fn print_literal(l: &Literal) -> String {
    match l.radix {
        Radix::Dec => l.value.to_string(),
        Radix::Bin => format!("0b{}", l.value.to_str_radix(2)),
    }
}

pub fn print_lit(e: &LitArith) -> String {
    match e {
        LitArith::Lit(l) => print_literal(l),
        LitArith::Bin { op, lhs, rhs } => {
            let p = op.precedence();
            let right_assoc = *op == LitOp::Pow;
            let wrap = |child: &LitArith, is_rhs: bool| -> String {
                let s = print_lit(child);
                match child {
                    LitArith::Bin { op: cop, .. } => {
                        let cp = cop.precedence();
                        let need = cp < p || (cp == p && (is_rhs != right_assoc));
                        if need {
                            format!("({s})")
                        } else {
                            s
                        }
                    }
                    _ => s,
                }
            };
            let sep = if *op == LitOp::Pow { "" } else { " " };
            format!("{}{sep}{}{sep}{}", wrap(lhs, false), op.symbol(), wrap(rhs, true))
        }
    }
}
