//! Evaluation of core expressions to tree sets, layout sets and counts.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::arena::{Arena, Env, Key, Node, NodeId};
use super::tree::ValueTree;

/// A layout: a tree in which every union records the branch it took.
/// Erasing the branch marks gives the denoted `ValueTree`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layout {
    B0,
    B1,
    /// Pair with its cached leaf count.
    T(Rc<Layout>, Rc<Layout>, u64),
    N(Rc<str>, Rc<Layout>),
    /// Union branch: 0 for the left operand, 1 for the right.
    Pick(u8, Rc<Layout>),
}

impl Layout {
    pub fn leaves(&self) -> u64 {
        match self {
            Layout::B0 => 0,
            Layout::B1 => 1,
            Layout::T(_, _, n) => *n,
            Layout::N(_, c) | Layout::Pick(_, c) => c.leaves(),
        }
    }

    fn pair(a: Rc<Layout>, b: Rc<Layout>) -> Rc<Layout> {
        let n = a.leaves() + b.leaves();
        Rc::new(Layout::T(a, b, n))
    }

    /// The denoted tree.
    pub fn erase(&self) -> ValueTree {
        match self {
            Layout::B0 => ValueTree::B0,
            Layout::B1 => ValueTree::B1,
            Layout::T(a, b, _) => ValueTree::t(a.erase(), b.erase()),
            Layout::N(n, c) => ValueTree::n(n.as_ref(), c.erase()),
            Layout::Pick(_, c) => c.erase(),
        }
    }

    /// Union branches taken, in pre-order.
    pub fn branches(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.branches_into(&mut out);
        out
    }

    fn branches_into(&self, out: &mut Vec<u8>) {
        match self {
            Layout::B0 | Layout::B1 => {}
            Layout::T(a, b, _) => {
                a.branches_into(out);
                b.branches_into(out);
            }
            Layout::N(_, c) => c.branches_into(out),
            Layout::Pick(k, c) => {
                out.push(*k);
                c.branches_into(out);
            }
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.erase())?;
        let b = self.branches();
        if !b.is_empty() {
            let s: Vec<&str> = b.iter().map(|k| if *k == 0 { "L" } else { "R" }).collect();
            write!(f, " [{}]", s.join(" "))?;
        }
        Ok(())
    }
}

type Set = Rc<Vec<Rc<Layout>>>;

/// Runs γ over an arena. With `decorate` set, unions mark their branch and
/// results are layouts; otherwise results are exactly the denoted trees.
pub struct Evaluator<'a> {
    arena: &'a Arena,
    decorate: bool,
    memo: HashMap<Key, Set>,
    empty: Set,
}

fn chain(n: u64) -> Rc<Layout> {
    let mut t = Rc::new(Layout::B0);
    for _ in 0..n {
        t = Layout::pair(Rc::new(Layout::B1), t);
    }
    t
}

fn finish(mut v: Vec<Rc<Layout>>) -> Set {
    v.sort();
    v.dedup();
    Rc::new(v)
}

impl<'a> Evaluator<'a> {
    pub fn new(arena: &'a Arena, decorate: bool) -> Self {
        Evaluator { arena, decorate, memo: HashMap::new(), empty: Rc::new(Vec::new()) }
    }

    pub fn eval(&mut self, id: NodeId, alpha: u128, m: u64, env: &Env) -> Set {
        let alpha = self.arena.reduce(id, alpha);
        let key = (id, alpha, m, self.arena.env_key(id, env));
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let s = self.compute(id, alpha, m, env);
        self.memo.insert(key, s.clone());
        s
    }

    fn compute(&mut self, id: NodeId, alpha: u128, m: u64, env: &Env) -> Set {
        match self.arena.node(id).clone() {
            Node::Prim(n) => {
                if m == n {
                    Rc::new(vec![chain(n)])
                } else {
                    self.empty.clone()
                }
            }
            Node::Con(n, e) => {
                if m == n {
                    self.eval(e, alpha, m, env)
                } else {
                    self.empty.clone()
                }
            }
            Node::Aligned(e, a) => {
                if a != 0 && alpha.is_multiple_of(u128::from(a)) {
                    self.eval(e, alpha, m, env)
                } else {
                    self.empty.clone()
                }
            }
            Node::Named(l, e) => {
                let s = self.eval(e, alpha, m, env);
                finish(s.iter().map(|t| Rc::new(Layout::N(l.clone(), t.clone()))).collect())
            }
            Node::Union(a, b) => {
                let (x, y) = (self.eval(a, alpha, m, env), self.eval(b, alpha, m, env));
                if self.decorate {
                    let left = x.iter().map(|t| Rc::new(Layout::Pick(0, t.clone())));
                    let right = y.iter().map(|t| Rc::new(Layout::Pick(1, t.clone())));
                    finish(left.chain(right).collect())
                } else {
                    finish(x.iter().chain(y.iter()).cloned().collect())
                }
            }
            Node::Concat(a, b) => {
                let mut out = Vec::new();
                for i in 0..=m {
                    for r1 in self.eval(a, alpha, i, env).iter() {
                        let l = r1.leaves();
                        if l > m {
                            continue;
                        }
                        for r2 in self.eval(b, alpha + u128::from(l), m - l, env).iter() {
                            out.push(Layout::pair(r1.clone(), r2.clone()));
                        }
                    }
                }
                finish(out)
            }
            Node::Exists(f, e) => {
                let mut out = Vec::new();
                let mut env2 = env.clone();
                for i in 0..=m {
                    env2.insert(f.clone(), i);
                    out.extend(self.eval(e, alpha, m, &env2).iter().cloned());
                }
                finish(out)
            }
            Node::Repeat(f, e) => match env.get(&f).copied() {
                None => self.empty.clone(),
                Some(0) => {
                    if m == 0 {
                        Rc::new(vec![Layout::pair(Rc::new(Layout::B0), Rc::new(Layout::B0))])
                    } else {
                        self.empty.clone()
                    }
                }
                Some(k) => {
                    let mut env2 = env.clone();
                    env2.insert(f.clone(), k - 1);
                    let mut out = Vec::new();
                    for i in 0..=m {
                        for r1 in self.eval(e, alpha, i, env).iter() {
                            let l = r1.leaves();
                            if l > m {
                                continue;
                            }
                            for r2 in self.eval(id, alpha + u128::from(l), m - l, &env2).iter() {
                                if m == l + r2.leaves() {
                                    out.push(Layout::pair(r1.clone(), r2.clone()));
                                }
                            }
                        }
                    }
                    finish(out)
                }
            },
        }
    }
}

/// Counts layouts without materializing them. Relies on two facts about
/// layouts: every result at budget `m` has `m` leaves, and a layout
/// determines its derivation, so concat splits and union branches are
/// disjoint and an `Exists` only overcounts derivations that never read its
/// formal.
pub struct Counter<'a> {
    arena: &'a Arena,
    memo: HashMap<Key, Rc<BigUint>>,
}

impl<'a> Counter<'a> {
    pub fn new(arena: &'a Arena) -> Self {
        Counter { arena, memo: HashMap::new() }
    }

    pub fn count(&mut self, id: NodeId, alpha: u128, m: u64, env: &Env) -> Rc<BigUint> {
        let alpha = self.arena.reduce(id, alpha);
        let key = (id, alpha, m, self.arena.env_key(id, env));
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let c = Rc::new(self.compute(id, alpha, m, env));
        self.memo.insert(key, c.clone());
        c
    }

    fn compute(&mut self, id: NodeId, alpha: u128, m: u64, env: &Env) -> BigUint {
        let gate = |b: bool| if b { BigUint::one() } else { BigUint::zero() };
        match self.arena.node(id).clone() {
            Node::Prim(n) => gate(m == n),
            Node::Con(n, e) => {
                if m == n {
                    (*self.count(e, alpha, m, env)).clone()
                } else {
                    BigUint::zero()
                }
            }
            Node::Aligned(e, a) => {
                if a != 0 && alpha.is_multiple_of(u128::from(a)) {
                    (*self.count(e, alpha, m, env)).clone()
                } else {
                    BigUint::zero()
                }
            }
            Node::Named(_, e) => (*self.count(e, alpha, m, env)).clone(),
            Node::Union(a, b) => &*self.count(a, alpha, m, env) + &*self.count(b, alpha, m, env),
            Node::Concat(a, b) => {
                let mut total = BigUint::zero();
                for i in 0..=m {
                    let x = self.count(a, alpha, i, env);
                    if x.is_zero() {
                        continue;
                    }
                    total += &*x * &*self.count(b, alpha + u128::from(i), m - i, env);
                }
                total
            }
            Node::Exists(f, e) => {
                let mut env2 = env.clone();
                let mut total = BigUint::zero();
                for i in 0..=m {
                    env2.insert(f.clone(), i);
                    total += &*self.count(e, alpha, m, &env2);
                }
                env2.remove(&f);
                let unread = self.count(e, alpha, m, &env2);
                total - &*unread * m
            }
            Node::Repeat(f, e) => match env.get(&f).copied() {
                None => BigUint::zero(),
                Some(0) => gate(m == 0),
                Some(k) => {
                    let mut env2 = env.clone();
                    env2.insert(f.clone(), k - 1);
                    let mut total = BigUint::zero();
                    for i in 0..=m {
                        let x = self.count(e, alpha, i, env);
                        if x.is_zero() {
                            continue;
                        }
                        total += &*x * &*self.count(id, alpha + u128::from(i), m - i, &env2);
                    }
                    total
                }
            },
        }
    }
}

/// Decides `t ∈ γ(α, m, θ, e)` by following the tree, without building
/// any set.
pub fn member(arena: &Arena, t: &ValueTree, id: NodeId, alpha: u128, m: u64, env: &Env) -> bool {
    match arena.node(id) {
        Node::Prim(n) => m == *n && *t == ValueTree::bytes(*n),
        Node::Con(n, e) => m == *n && member(arena, t, *e, alpha, m, env),
        Node::Aligned(e, a) => *a != 0 && alpha.is_multiple_of(u128::from(*a)) && member(arena, t, *e, alpha, m, env),
        Node::Named(l, e) => match t {
            ValueTree::N(n, c) => n.as_str() == l.as_ref() && member(arena, c, *e, alpha, m, env),
            _ => false,
        },
        Node::Union(a, b) => member(arena, t, *a, alpha, m, env) || member(arena, t, *b, alpha, m, env),
        Node::Concat(a, b) => match t {
            ValueTree::T(r1, r2) => {
                let l = r1.leaves();
                l <= m && member(arena, r1, *a, alpha, l, env) && member(arena, r2, *b, alpha + u128::from(l), m - l, env)
            }
            _ => false,
        },
        Node::Exists(f, e) => {
            let mut env2 = env.clone();
            (0..=m).any(|i| {
                env2.insert(f.clone(), i);
                member(arena, t, *e, alpha, m, &env2)
            })
        }
        Node::Repeat(f, e) => match (env.get(f).copied(), t) {
            (None, _) => false,
            (Some(0), _) => m == 0 && *t == ValueTree::t(ValueTree::B0, ValueTree::B0),
            (Some(k), ValueTree::T(r1, r2)) => {
                let l = r1.leaves();
                if l > m || m != l + r2.leaves() {
                    return false;
                }
                let mut env2 = env.clone();
                env2.insert(f.clone(), k - 1);
                member(arena, r1, *e, alpha, l, env) && member(arena, r2, id, alpha + u128::from(l), m - l, &env2)
            }
            _ => false,
        },
    }
}
