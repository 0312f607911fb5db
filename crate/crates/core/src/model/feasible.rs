//! Sets of feasible sizes: for an expression at an address, which budgets
//! `0..=max` have a non-empty denotation. Used by the dead-branch check,
//! where budgets are too large to enumerate trees.

use std::collections::HashMap;
use std::rc::Rc;

use super::arena::{Arena, Env, Node, NodeId};

/// Fixed-length bitset over `0..=max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn new(max: u64) -> Self {
        let len = max as usize + 1;
        Bits { words: vec![0; len.div_ceil(64)], len }
    }

    pub fn singleton(max: u64, x: u64) -> Self {
        let mut b = Bits::new(max);
        b.set(x);
        b
    }

    pub fn set(&mut self, x: u64) {
        let x = x as usize;
        if x < self.len {
            self.words[x / 64] |= 1 << (x % 64);
        }
    }

    pub fn get(&self, x: u64) -> bool {
        let x = x as usize;
        x < self.len && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros();
                w &= w - 1;
                Some(i as u64 * 64 + u64::from(b))
            })
        })
    }

    pub fn or(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// `self |= other << shift`, truncated at `max`.
    pub fn or_shifted(&mut self, other: &Bits, shift: u64) {
        let shift = shift as usize;
        if shift >= self.len {
            return;
        }
        let (ws, bs) = (shift / 64, shift % 64);
        let n = self.words.len();
        for i in (ws..n).rev() {
            let src = i - ws;
            let mut v = other.words[src] << bs;
            if bs != 0 && src > 0 {
                v |= other.words[src - 1] >> (64 - bs);
            }
            self.words[i] |= v;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let extra = self.words.len() * 64 - self.len;
        if extra > 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX >> extra;
        }
    }

    fn words(&self) -> u64 {
        self.words.len() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfBudget;

/// Node, address and the formals the node reads.
type SizeKey = (NodeId, u128, Vec<Option<u64>>);

/// Memoized feasible-size computation with a bound on word operations.
pub struct Feasible<'a> {
    arena: &'a Arena,
    max: u64,
    work: u64,
    budget: u64,
    memo: HashMap<SizeKey, Rc<Bits>>,
}

impl<'a> Feasible<'a> {
    pub fn new(arena: &'a Arena, max: u64, budget: u64) -> Self {
        Feasible { arena, max, work: 0, budget, memo: HashMap::new() }
    }

    pub fn work(&self) -> u64 {
        self.work
    }

    fn spend(&mut self, n: u64) -> Result<(), OutOfBudget> {
        self.work = self.work.saturating_add(n);
        if self.work > self.budget {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    fn empty(&self) -> Bits {
        Bits::new(self.max)
    }

    pub fn sizes(&mut self, id: NodeId, alpha: u128, env: &Env) -> Result<Rc<Bits>, OutOfBudget> {
        let alpha = self.arena.reduce(id, alpha);
        let key = (id, alpha, self.arena.env_key(id, env));
        if let Some(b) = self.memo.get(&key) {
            return Ok(b.clone());
        }
        let b = Rc::new(self.compute(id, alpha, env)?);
        self.memo.insert(key, b.clone());
        Ok(b)
    }

    /// `{i + j | i ∈ a, j ∈ sizes(b, α + i)}`.
    fn concat(&mut self, a: &Bits, b: NodeId, alpha: u128, env: &Env) -> Result<Bits, OutOfBudget> {
        let mut out = self.empty();
        if self.arena.info(b).modulus == Some(1) {
            let sb = self.sizes(b, alpha, env)?;
            let (small, big) = if a.count() <= sb.count() { (a, &*sb) } else { (&*sb, a) };
            for i in small.ones().collect::<Vec<_>>() {
                self.spend(out.words())?;
                out.or_shifted(big, i);
            }
        } else {
            for i in a.ones().collect::<Vec<_>>() {
                let sb = self.sizes(b, alpha + u128::from(i), env)?;
                self.spend(out.words())?;
                out.or_shifted(&sb, i);
            }
        }
        Ok(out)
    }

    /// Sizes of any number of back-to-back copies of `e`.
    fn closure(&mut self, e: NodeId, alpha: u128, env: &Env) -> Result<Bits, OutOfBudget> {
        let mut reach = Bits::singleton(self.max, 0);
        if self.arena.info(e).modulus == Some(1) {
            let s = self.sizes(e, alpha, env)?;
            let mut gens: Vec<u64> = Vec::new();
            for g in s.ones().filter(|g| *g > 0) {
                if !gens.iter().any(|k| g % k == 0) {
                    gens.push(g);
                }
            }
            if gens.len() <= 64 {
                for g in gens {
                    // Doubling: after step j, reach is closed under adding
                    // up to 2^j - 1 copies of g.
                    let mut step = g;
                    while step <= self.max {
                        self.spend(reach.words())?;
                        let snapshot = reach.clone();
                        reach.or_shifted(&snapshot, step);
                        step = match step.checked_mul(2) {
                            Some(s) => s,
                            None => break,
                        };
                    }
                }
                return Ok(reach);
            }
        }
        let mut x = 0;
        while x <= self.max {
            if reach.get(x) {
                let s = self.sizes(e, alpha + u128::from(x), env)?;
                self.spend(reach.words())?;
                reach.or_shifted(&s, x);
            }
            x += 1;
        }
        Ok(reach)
    }

    fn compute(&mut self, id: NodeId, alpha: u128, env: &Env) -> Result<Bits, OutOfBudget> {
        self.spend(1)?;
        Ok(match self.arena.node(id).clone() {
            Node::Prim(n) => Bits::singleton(self.max, n),
            Node::Con(n, e) => {
                if self.sizes(e, alpha, env)?.get(n) {
                    Bits::singleton(self.max, n)
                } else {
                    self.empty()
                }
            }
            Node::Aligned(e, a) => {
                if a != 0 && alpha.is_multiple_of(u128::from(a)) {
                    (*self.sizes(e, alpha, env)?).clone()
                } else {
                    self.empty()
                }
            }
            Node::Named(_, e) => (*self.sizes(e, alpha, env)?).clone(),
            Node::Union(a, b) => {
                let mut x = (*self.sizes(a, alpha, env)?).clone();
                x.or(&*self.sizes(b, alpha, env)?);
                x
            }
            Node::Concat(a, b) => {
                let sa = self.sizes(a, alpha, env)?;
                self.concat(&sa, b, alpha, env)?
            }
            Node::Exists(f, e) => {
                let free = &self.arena.info(e).free;
                if !free.contains(&f) {
                    let mut env2 = env.clone();
                    env2.remove(&f);
                    return Ok((*self.sizes(e, alpha, &env2)?).clone());
                }
                if let Node::Repeat(g, body) = self.arena.node(e).clone() {
                    if g == f && !self.arena.info(body).free.contains(&f) {
                        return self.closure(body, alpha, env);
                    }
                }
                let mut out = self.empty();
                let mut env2 = env.clone();
                for i in 0..=self.max {
                    env2.insert(f.clone(), i);
                    out.or(&*self.sizes(e, alpha, &env2)?);
                }
                out
            }
            Node::Repeat(f, e) => match env.get(&f).copied() {
                None => self.empty(),
                Some(k) => {
                    // k copies, one per round; copy j sees the count k - j.
                    let mut cur = Bits::singleton(self.max, 0);
                    let mut env2 = env.clone();
                    for j in 0..k {
                        env2.insert(f.clone(), k - j);
                        let mut next = self.empty();
                        for x in cur.ones().collect::<Vec<_>>() {
                            let s = self.sizes(e, alpha + u128::from(x), &env2)?;
                            self.spend(next.words())?;
                            next.or_shifted(&s, x);
                        }
                        if next.is_empty() {
                            return Ok(next);
                        }
                        cur = next;
                    }
                    cur
                }
            },
        })
    }
}

/// Lower bound on the footprint of every derivation, or `None` if there is
/// none. Alignment is ignored. Formals bound by an enclosing `Exists` are
/// unknown and may be zero.
pub fn min_footprint(arena: &Arena, id: NodeId, env: &Env) -> Option<u64> {
    const UNKNOWN: u64 = u64::MAX;
    match arena.node(id) {
        Node::Prim(n) => Some(*n),
        Node::Con(n, e) => min_footprint(arena, *e, env).filter(|m| m <= n).map(|_| *n),
        Node::Aligned(e, _) | Node::Named(_, e) => min_footprint(arena, *e, env),
        Node::Union(a, b) => match (min_footprint(arena, *a, env), min_footprint(arena, *b, env)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        },
        Node::Concat(a, b) => min_footprint(arena, *a, env)?.checked_add(min_footprint(arena, *b, env)?),
        Node::Exists(f, e) => {
            let mut env2 = env.clone();
            env2.insert(f.clone(), UNKNOWN);
            min_footprint(arena, *e, &env2)
        }
        Node::Repeat(f, e) => match env.get(f).copied() {
            None => None,
            Some(0) | Some(UNKNOWN) => Some(0),
            Some(k) => min_footprint(arena, *e, env)?.checked_mul(k),
        },
    }
}
