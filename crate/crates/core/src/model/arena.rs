//! Hash-consed core expressions with per-node facts used as memo keys.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_integer::Integer;

use crate::calculus::CoreExpr;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Prim(u64),
    Con(u64, NodeId),
    Aligned(NodeId, u64),
    Concat(NodeId, NodeId),
    Union(NodeId, NodeId),
    Named(Rc<str>, NodeId),
    Exists(Rc<str>, NodeId),
    Repeat(Rc<str>, NodeId),
}

#[derive(Clone, Debug)]
pub struct Info {
    /// Free formals, sorted.
    pub free: Vec<Rc<str>>,
    /// Lcm of every alignment inside the node; `None` if it overflows.
    /// The denotation depends on the address only modulo this value.
    pub modulus: Option<u64>,
}

#[derive(Debug, Default)]
pub struct Arena {
    nodes: Vec<Node>,
    info: Vec<Info>,
    index: HashMap<Node, NodeId>,
}

/// Formal environment: absent keys differ from zero-valued keys.
pub type Env = BTreeMap<Rc<str>, u64>;

impl Arena {
    pub fn new() -> Self {
        Arena::default()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn info(&self, id: NodeId) -> &Info {
        &self.info[id]
    }

    pub fn intern_expr(&mut self, e: &CoreExpr) -> NodeId {
        let n = match e {
            CoreExpr::Prim(k) => Node::Prim(*k),
            CoreExpr::Con(k, e) => Node::Con(*k, self.intern_expr(e)),
            CoreExpr::Aligned(e, a) => Node::Aligned(self.intern_expr(e), *a),
            CoreExpr::Concat(a, b) => Node::Concat(self.intern_expr(a), self.intern_expr(b)),
            CoreExpr::Union(a, b) => Node::Union(self.intern_expr(a), self.intern_expr(b)),
            CoreExpr::Named(l, e) => Node::Named(l.as_str().into(), self.intern_expr(e)),
            CoreExpr::Exists(f, e) => Node::Exists(f.as_str().into(), self.intern_expr(e)),
            CoreExpr::Repeat(f, e) => Node::Repeat(f.as_str().into(), self.intern_expr(e)),
        };
        self.intern(n)
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let info = self.compute_info(&n);
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.info.push(info);
        self.index.insert(n, id);
        id
    }

    fn compute_info(&self, n: &Node) -> Info {
        let lcm = |a: Option<u64>, b: Option<u64>| -> Option<u64> {
            let (a, b) = (a?, b?);
            let g = a.gcd(&b);
            (a / g).checked_mul(b)
        };
        let union_free = |a: &[Rc<str>], b: &[Rc<str>]| -> Vec<Rc<str>> {
            let s: BTreeSet<Rc<str>> = a.iter().chain(b).cloned().collect();
            s.into_iter().collect()
        };
        match n {
            Node::Prim(_) => Info { free: vec![], modulus: Some(1) },
            Node::Con(_, e) | Node::Named(_, e) => self.info[*e].clone(),
            Node::Aligned(e, a) => {
                let i = &self.info[*e];
                Info { free: i.free.clone(), modulus: lcm(i.modulus, Some((*a).max(1))) }
            }
            Node::Concat(a, b) | Node::Union(a, b) => {
                let (x, y) = (&self.info[*a], &self.info[*b]);
                Info { free: union_free(&x.free, &y.free), modulus: lcm(x.modulus, y.modulus) }
            }
            Node::Exists(f, e) => {
                let i = &self.info[*e];
                Info { free: i.free.iter().filter(|g| *g != f).cloned().collect(), modulus: i.modulus }
            }
            Node::Repeat(f, e) => {
                let i = &self.info[*e];
                Info { free: union_free(&i.free, std::slice::from_ref(f)), modulus: i.modulus }
            }
        }
    }

    /// Address reduced modulo the node's modulus.
    pub fn reduce(&self, id: NodeId, alpha: u128) -> u128 {
        match self.info[id].modulus {
            Some(l) => alpha % u128::from(l),
            None => alpha,
        }
    }

    /// The environment restricted to the node's free formals, in order.
    pub fn env_key(&self, id: NodeId, env: &Env) -> Vec<Option<u64>> {
        self.info[id].free.iter().map(|f| env.get(f).copied()).collect()
    }
}

/// Memo key: node, reduced address, budget, relevant environment.
pub type Key = (NodeId, u128, u64, Vec<Option<u64>>);

pub fn to_env(env: &BTreeMap<String, u64>) -> Env {
    env.iter().map(|(k, v)| (Rc::from(k.as_str()), *v)).collect()
}
