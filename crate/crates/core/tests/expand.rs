mod common;

use flp_core::expand::*;
use flp_core::syntax::*;
use proptest::prelude::*;

fn parse_ok(src: &str) -> Spec {
    parse_source(src).unwrap_or_else(|e| panic!("{e:?}"))
}

fn has_macro(v: &DemarcVal) -> bool {
    match &v.kind {
        ValKind::Macro { .. } => true,
        ValKind::Layer(l) => has_macro(&l.body),
        ValKind::Group(g) => has_macro(g),
        ValKind::Seq(ds) | ValKind::Union(ds) => ds.iter().any(|d| has_macro(d.value())),
        _ => false,
    }
}

#[test]
fn kls16_is_curried() {
    let spec = parse_ok(&common::fixture("sizekls.flp"));
    let ex = expand_macros(&spec).unwrap();
    assert!(ex.warnings.is_empty(), "{:?}", ex.warnings);
    let kls = ex.spec.layer("Kls16").unwrap();
    let formals: Vec<&str> = kls.formals.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(formals, ["cnt"]);
    let ValKind::Layer(inst) = &kls.body.kind else { panic!("{:?}", kls.body.kind) };
    assert_eq!(inst.name.name, "SizeKls_16");
    assert_eq!(inst.origin.as_deref(), Some("SizeKls"));
    assert!(inst.formals.is_empty());
    assert_eq!(inst.magnitude, inst.alignment);
    let ValKind::Seq(ds) = &inst.body.kind else { panic!() };
    let cells = ds[0].value();
    assert_eq!(cells.repeat, Some(Repeat::Formal(Ident::new("cnt", Default::default()))));
    let ValKind::Layer(cell) = &cells.kind else { panic!() };
    assert_eq!(cell.name.name, "Cell_16");
    assert_eq!(cell.body.repeat, Some(Repeat::Count(16)));
    for l in &ex.spec.layers {
        assert!(!has_macro(&l.body));
    }
    assert!(check_scopes(&ex.spec).is_ok());
}

#[test]
fn macro_free_input_is_unchanged() {
    for f in ["k.flp", "header.flp", "payload_seq.flp"] {
        let spec = parse_ok(&common::fixture(f));
        let ex = expand_macros(&spec).unwrap();
        assert_eq!(ex.spec, spec);
    }
}

#[test]
fn expansion_is_idempotent_on_fixtures() {
    for f in ["immix.flp", "sizekls.flp", "cell_block.flp"] {
        let once = expand_macros(&parse_ok(&common::fixture(f))).unwrap().spec;
        let twice = expand_macros(&once).unwrap().spec;
        assert_eq!(once, twice, "{f}");
    }
}

#[test]
fn immix_references_expand() {
    let ex = expand_macros(&parse_ok(&common::fixture("immix.flp"))).unwrap();
    let region = ex.spec.layer("Region").unwrap();
    let mut names = Vec::new();
    region.visit_layers(&mut |l| names.push((l.name.name.clone(), l.origin.clone())));
    assert!(names.contains(&("LineMark".into(), Some("LineMark".into()))));
    assert!(names.contains(&("Cell".into(), Some("Cell".into()))));
    assert!(check_scopes(&ex.spec).is_ok());
}

#[test]
fn two_cycle_is_reported() {
    let err = expand_macros(&parse_ok("A -> B\nB -> A\n")).unwrap_err();
    assert_eq!(err.len(), 1);
    let m = &err[0].message;
    assert!(m.contains("A -> B -> A") || m.contains("B -> A -> B"), "{m}");
}

#[test]
fn self_reference_is_a_cycle() {
    let err = expand_macros(&parse_ok("A -> seq { x : 1 bytes, # A }")).unwrap_err();
    assert!(err[0].message.contains("A -> A"));
}

#[test]
fn unknown_and_arity_errors() {
    let err = expand_macros(&parse_ok("A -> Nope")).unwrap_err();
    assert!(err[0].message.contains("Nope"));
    let err = expand_macros(&parse_ok("B<n> -> n bytes\nA -> B<1, 2>")).unwrap_err();
    assert!(err[0].message.contains("argument"));
}

#[test]
fn instance_name_collision() {
    let err = expand_macros(&parse_ok("B<n> -> n bytes\nB_1 -> 1 bytes\nA -> B<1>")).unwrap_err();
    assert!(err[0].message.contains("B_1"));
}

#[test]
fn hoisted_formal_renamed_on_collision() {
    let spec = parse_ok("B<n> -> n bytes\nA<n> -> seq { x : n words, y : B }");
    let ex = expand_macros(&spec).unwrap();
    let a = ex.spec.layer("A").unwrap();
    assert_eq!(a.formals.len(), 2);
    assert_eq!(a.formals[0].name, "n");
    let fresh = &a.formals[1].name;
    assert!(fresh.starts_with("n__"), "{fresh}");
    let rep = check_scopes(&ex.spec);
    assert!(rep.is_ok());
    // The instance's repetition resolves to the hoisted formal.
    assert!(rep.resolved.iter().any(|r| &r.name == fresh && r.binder_layer == "A"));
}

#[test]
fn formal_argument_substitution_avoids_capture() {
    // The inner layer binds `m`, the name the argument would be renamed to.
    let spec = parse_ok("B<k> -> seq { x : k bytes, y : In<m> -> seq { m bytes, k words } }\nA<m> -> B<m>");
    let ex = expand_macros(&spec).unwrap();
    let rep = check_scopes(&ex.spec);
    assert!(rep.is_ok());
    let outer: Vec<_> = rep.resolved.iter().filter(|r| r.binder_layer == "A").collect();
    // x's and the inner `k words` both resolve to A's m.
    assert_eq!(outer.len(), 2, "{:?}", rep.resolved);
}

#[test]
fn chained_formal_arguments_warn() {
    let spec = parse_ok("C<z> -> z bytes\nB<y> -> C<y>\nA<x> -> B<x>");
    let ex = expand_macros(&spec).unwrap();
    assert_eq!(ex.warnings.len(), 1, "{:?}", ex.warnings);
}

#[test]
fn region_formals_resolve() {
    let spec = expand_macros(&parse_ok(&common::fixture("immix.flp"))).unwrap().spec;
    let rep = check_scopes(&spec);
    assert!(rep.is_ok());
    for r in &rep.resolved {
        if ["num_blocks", "lines", "wrds"].contains(&r.name.as_str()) {
            assert_eq!(r.binder_layer, "Region");
        }
    }
    assert_eq!(rep.resolved.iter().filter(|r| r.name == "lines").count(), 2);
    assert_eq!(rep.resolved.iter().filter(|r| r.name == "wrds").count(), 3);
}

#[test]
fn unbound_formal_is_an_error() {
    let spec = parse_ok("A -> seq { x : 1 bytes,\n  k (1 words) }");
    let rep = check_scopes(&spec);
    assert_eq!(rep.unresolved.len(), 1);
    let d = &rep.diagnostics()[0];
    let sp = d.span.unwrap();
    assert_eq!((sp.line, sp.col), (2, 3));
}

#[test]
fn shadowing_resolves_to_nearest() {
    let src = "Outer<n> -> seq {\n  a : n bytes,\n  Inner<n> -> n words }";
    let spec = parse_ok(src);
    let rep = check_scopes(&spec);
    assert!(rep.is_ok());
    let by_line: Vec<(u32, String, u32)> =
        rep.resolved.iter().map(|r| (r.use_span.line, r.binder_layer.clone(), r.binder_span.line)).collect();
    assert_eq!(by_line, vec![(2, "Outer".into(), 1), (3, "Inner".into(), 3)]);
}

proptest! {
    #[test]
    fn expand_is_identity_without_macros(n in 1u64..50, k in 0usize..3) {
        let src = match k {
            0 => format!("A<x> -> seq {{ f : x ({n} bytes), g : # words }}"),
            1 => format!("A ||{n} bytes|| -> union {{ {n} bytes | # bytes }}"),
            _ => format!("A -> seq {{ B<y> -> y ({n} bits), c : 1 words }}"),
        };
        let spec = parse_ok(&src);
        let once = expand_macros(&spec).unwrap().spec;
        prop_assert_eq!(&once, &spec);
        prop_assert_eq!(expand_macros(&once).unwrap().spec, once);
    }
}
