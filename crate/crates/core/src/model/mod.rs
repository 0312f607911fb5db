//! The denotational model: which trees a core expression denotes at an
//! address and byte budget, layout counting, and the dead-branch check.

pub mod arena;
pub mod dead;
pub mod eval;
pub mod feasible;
pub mod tree;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::ArchConfig;
use crate::calculus::{compile_layer_with, CompileError, CompileOptions, CoreExpr};
use crate::syntax::{LayerDecl, Spec};
use arena::{to_env, Arena};
use eval::{member, Counter, Evaluator};

pub use dead::{check_dead_branches, DeadBranchOptions};
pub use eval::Layout;
pub use tree::{parse_tree, FlatItem, TreeParseError, ValueTree};

/// Formal name to natural number. A missing key is unbound, not zero.
pub type NameEnv = BTreeMap<String, u64>;

/// A denotation: distinct trees.
pub type TreeSet = BTreeSet<ValueTree>;

/// Input to the model function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Start address in bytes.
    pub address: u64,
    /// Byte budget.
    pub budget: u64,
    pub env: NameEnv,
    pub expr: CoreExpr,
}

impl Config {
    pub fn new(address: u64, budget: u64, expr: CoreExpr) -> Self {
        Config { address, budget, env: NameEnv::new(), expr }
    }

    pub fn with_env(mut self, env: NameEnv) -> Self {
        self.env = env;
        self
    }
}

/// The set of trees the configuration denotes.
pub fn evaluate(cfg: &Config) -> TreeSet {
    let mut arena = Arena::new();
    let root = arena.intern_expr(&cfg.expr);
    let mut ev = Evaluator::new(&arena, false);
    let set = ev.eval(root, u128::from(cfg.address), cfg.budget, &to_env(&cfg.env));
    set.iter().map(|l| l.erase()).collect()
}

/// The layouts (trees with union branch choices) of the configuration.
pub fn evaluate_layouts(cfg: &Config) -> LayoutSet {
    let mut arena = Arena::new();
    let root = arena.intern_expr(&cfg.expr);
    let mut ev = Evaluator::new(&arena, true);
    let set = ev.eval(root, u128::from(cfg.address), cfg.budget, &to_env(&cfg.env));
    LayoutSet { layouts: set.iter().map(|l| (**l).clone()).collect() }
}

/// Number of layouts of the configuration, without building them.
pub fn count(cfg: &Config) -> BigUint {
    let mut arena = Arena::new();
    let root = arena.intern_expr(&cfg.expr);
    let mut c = Counter::new(&arena);
    let n = c.count(root, u128::from(cfg.address), cfg.budget, &to_env(&cfg.env));
    (*n).clone()
}

/// Whether `t` is in `evaluate(cfg)`.
pub fn check_membership(t: &ValueTree, cfg: &Config) -> bool {
    let mut arena = Arena::new();
    let root = arena.intern_expr(&cfg.expr);
    member(&arena, t, root, u128::from(cfg.address), cfg.budget, &to_env(&cfg.env))
}

/// Layouts of a layer. Distinct layouts may denote the same tree when
/// union branches have identical shapes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LayoutSet {
    pub layouts: BTreeSet<Layout>,
}

impl LayoutSet {
    pub fn len(&self) -> usize {
        self.layouts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layouts.is_empty()
    }

    /// The distinct denoted trees.
    pub fn trees(&self) -> TreeSet {
        self.layouts.iter().map(Layout::erase).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Layout> {
        self.layouts.iter()
    }
}

impl fmt::Display for LayoutSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.layouts {
            writeln!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown layer `{0}`")]
    UnknownLayer(String),
    #[error("`{name}` is not a formal of layer `{layer}`")]
    UnknownBinding { layer: String, name: String },
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// A layer query: which layer, at what size, address and formal bindings.
#[derive(Clone, Debug)]
pub struct LayerQuery<'a> {
    pub layer: &'a str,
    pub size: u64,
    pub address: u64,
    pub bindings: NameEnv,
}

impl<'a> LayerQuery<'a> {
    pub fn new(layer: &'a str, size: u64) -> Self {
        LayerQuery { layer, size, address: 0, bindings: NameEnv::new() }
    }

    pub fn at(mut self, address: u64) -> Self {
        self.address = address;
        self
    }

    pub fn bind(mut self, name: impl Into<String>, v: u64) -> Self {
        self.bindings.insert(name.into(), v);
        self
    }
}

/// The compiled layer as a model configuration. Bound formals are fixed by
/// the environment; the others stay existential.
pub fn layer_config(spec: &Spec, q: &LayerQuery<'_>, arch: &ArchConfig) -> Result<Config, ModelError> {
    let decl: &LayerDecl = spec.find_layer(q.layer).ok_or_else(|| ModelError::UnknownLayer(q.layer.into()))?;
    for name in q.bindings.keys() {
        if !decl.formals.iter().any(|f| &f.name == name) {
            return Err(ModelError::UnknownBinding { layer: q.layer.into(), name: name.clone() });
        }
    }
    let opts = CompileOptions { fixed: q.bindings.keys().cloned().collect() };
    let expr = compile_layer_with(decl, arch, &opts)?;
    Ok(Config { address: q.address, budget: q.size, env: q.bindings.clone(), expr })
}

/// All layouts of a layer in an expanded, scope-checked spec.
pub fn enumerate_layer(spec: &Spec, q: &LayerQuery<'_>, arch: &ArchConfig) -> Result<LayoutSet, ModelError> {
    Ok(evaluate_layouts(&layer_config(spec, q, arch)?))
}

/// `enumerate_layer(..).len()` computed without building the layouts.
pub fn count_layouts(spec: &Spec, q: &LayerQuery<'_>, arch: &ArchConfig) -> Result<BigUint, ModelError> {
    Ok(count(&layer_config(spec, q, arch)?))
}
