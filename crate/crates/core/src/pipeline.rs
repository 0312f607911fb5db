//! The full front-to-back pipeline over one source text.

use crate::arith::ArchConfig;
use crate::calculus::compile_layer;
use crate::codegen::{derive, render_rust, GeneratedInterface};
use crate::diag::{normalize, Diagnostic, Stage};
use crate::expand::{check_scopes, expand_macros};
use crate::model::{check_dead_branches, DeadBranchOptions};
use crate::syntax::{parse_source, Spec};

/// How far to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    /// Stop once every layer compiles to the core calculus.
    Frontend,
    /// Stop after the consistency checks.
    Check,
    /// Also derive the interface and render the backend.
    Compile,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub arch: ArchConfig,
    pub dead: DeadBranchOptions,
}

/// Results of one run. Later stages are absent once an error stops the run.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// Sorted by position, then severity.
    pub diagnostics: Vec<Diagnostic>,
    /// The macro-expanded spec.
    pub spec: Option<Spec>,
    pub interface: Option<GeneratedInterface>,
    pub rust: Option<String>,
}

impl Outcome {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    /// Warnings raised by the consistency checks.
    pub fn consistency_warnings(&self) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(|d| d.stage == Stage::Consistency && !d.is_error())
    }

    fn stop(mut self, mut diags: Vec<Diagnostic>) -> Self {
        self.diagnostics.append(&mut diags);
        normalize(&mut self.diagnostics);
        self
    }
}

/// Parse, expand, scope-check, compile every layer and run the dead-branch
/// check; with [`Goal::Compile`] also derive and render.
pub fn run(src: &str, goal: Goal, opts: &PipelineOptions) -> Outcome {
    let out = Outcome::default();
    let parsed = match parse_source(src) {
        Ok(s) => s,
        Err(d) => return out.stop(d),
    };
    let expansion = match expand_macros(&parsed) {
        Ok(x) => x,
        Err(d) => return out.stop(d),
    };
    let mut out = out.stop(expansion.warnings);
    let spec = expansion.spec;
    let scopes = check_scopes(&spec);
    if !scopes.is_ok() {
        return out.stop(scopes.diagnostics());
    }
    out = out.stop(scopes.diagnostics());
    let errors: Vec<Diagnostic> = spec
        .layers
        .iter()
        .filter_map(|l| compile_layer(l, &opts.arch).err())
        .map(|e| e.to_diagnostic())
        .collect();
    if !errors.is_empty() {
        return out.stop(errors);
    }
    if goal != Goal::Frontend {
        out = out.stop(check_dead_branches(&spec, &opts.arch, &opts.dead));
    }
    if goal == Goal::Compile {
        match derive(&spec, &opts.arch) {
            Ok((iface, diags)) => {
                out = out.stop(diags);
                out.rust = Some(render_rust(&iface));
                out.interface = Some(iface);
            }
            Err(e) => out = out.stop(vec![Diagnostic::error(Stage::Codegen, None, e.to_string())]),
        }
    }
    out.spec = Some(spec);
    out
}
