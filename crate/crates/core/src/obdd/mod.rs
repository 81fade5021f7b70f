//! Reduced ordered binary decision diagrams over the ambient variables.
//!
//! Nodes are `(level, low, high)` triples; the sinks `0` and `1` sit at
//! level `n`. Size counts every node reachable from the root, sinks
//! included, so constant functions have size 1.

mod exact;
mod heuristic;
mod sift;

use std::fmt::Write as _;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::cnf::{Assignment, Clause, Cnf};
use crate::error::{Error, Result};
use crate::order::VarOrder;

pub use exact::{exact_min_size, ExactMinimum, EXACT_MIN_LIMIT};
pub use heuristic::{
    compile_with_strategy, heuristic_order, pathwidth_upper_bound_check, sift_order, PathwidthCheck, Strategy,
    SIFT_MAX_GROWTH,
};

pub type NodeId = u32;
pub const FALSE: NodeId = 0;
pub const TRUE: NodeId = 1;

/// Default node-table limit for [`compile`].
pub const DEFAULT_CAPACITY: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    pub level: u32,
    pub lo: NodeId,
    pub hi: NodeId,
}

/// An immutable diagram. Node ids are `0` and `1` for the sinks followed by
/// the internal nodes, children before parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obdd {
    order: VarOrder,
    nodes: Vec<Node>,
    root: NodeId,
}

/// Size, per-level node counts and the model count over `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub size: usize,
    pub width_per_level: Vec<usize>,
    pub model_count: BigUint,
}

impl Obdd {
    pub fn num_vars(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &VarOrder {
        &self.order
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub fn is_constant(&self) -> bool {
        self.root <= TRUE
    }

    /// Reachable nodes including sinks.
    pub fn size(&self) -> usize {
        if self.is_constant() {
            1
        } else {
            self.nodes.len()
        }
    }

    fn level(&self, id: NodeId) -> usize {
        self.nodes[id as usize].level as usize
    }

    pub fn evaluate(&self, alpha: &Assignment) -> Result<bool> {
        let mut u = self.root;
        while u > TRUE {
            let node = self.node(u);
            let var = self.order.var_at(node.level as usize);
            let value = alpha.get(var).ok_or(Error::PartialAssignment(var))?;
            u = if value { node.hi } else { node.lo };
        }
        Ok(u == TRUE)
    }

    /// Evaluates under `values[v - 1]` for `x_v`.
    pub fn evaluate_total(&self, values: &[bool]) -> bool {
        let mut u = self.root;
        while u > TRUE {
            let node = self.node(u);
            let var = self.order.var_at(node.level as usize);
            u = if values[var as usize - 1] { node.hi } else { node.lo };
        }
        u == TRUE
    }

    /// Satisfying assignments over all `n` variables.
    pub fn model_count(&self) -> BigUint {
        let n = self.num_vars();
        let mut count: Vec<BigUint> = Vec::with_capacity(self.nodes.len());
        for (id, node) in self.nodes.iter().enumerate() {
            let c = match id as NodeId {
                FALSE => BigUint::ZERO,
                TRUE => BigUint::from(1u32),
                _ => {
                    let l = node.level as usize;
                    let part = |child: NodeId| -> BigUint {
                        let gap = self.level(child) - l - 1;
                        &count[child as usize] << gap
                    };
                    part(node.lo) + part(node.hi)
                }
            };
            count.push(c);
        }
        let root_level = if self.is_constant() { n } else { self.level(self.root) };
        &count[self.root as usize] << root_level
    }

    /// Internal nodes labelled at each level.
    pub fn width_per_level(&self) -> Vec<usize> {
        let mut w = vec![0; self.num_vars()];
        if !self.is_constant() {
            for node in &self.nodes[2..] {
                w[node.level as usize] += 1;
            }
        }
        w
    }

    /// Distinct residual functions after fixing the first `k` levels.
    pub fn semantic_width(&self, k: usize) -> usize {
        let k = k.min(self.num_vars());
        let mut reached = vec![false; self.nodes.len()];
        reached[self.root as usize] = true;
        // Children precede parents, so descending ids visit parents first.
        for id in (2..self.nodes.len()).rev() {
            let node = self.nodes[id];
            if reached[id] && (node.level as usize) < k {
                reached[id] = false;
                reached[node.lo as usize] = true;
                reached[node.hi as usize] = true;
            }
        }
        reached.iter().filter(|&&r| r).count()
    }

    pub fn size_report(&self) -> SizeReport {
        SizeReport {
            size: self.size(),
            width_per_level: self.width_per_level(),
            model_count: self.model_count(),
        }
    }

    /// Structural check: ordered, no redundant tests, no duplicate triples.
    pub fn is_reduced(&self) -> bool {
        let n = self.num_vars() as u32;
        let mut seen = rustc_hash::FxHashSet::default();
        self.nodes.iter().enumerate().skip(2).all(|(id, node)| {
            node.lo != node.hi
                && node.level < n
                && (node.lo as usize) < id
                && (node.hi as usize) < id
                && self.nodes[node.lo as usize].level > node.level
                && self.nodes[node.hi as usize].level > node.level
                && seen.insert(*node)
        })
    }

    /// Text dump: a header line, then one line per node `id var low high`.
    /// Sinks print `-` for the variable and their value for both children.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "obdd vars {} order {} root {} size {}",
            self.num_vars(),
            self.order,
            self.root,
            self.size()
        )
        .unwrap();
        let shown = if self.is_constant() { &self.nodes[..2] } else { &self.nodes[..] };
        for (id, node) in shown.iter().enumerate() {
            if id <= 1 {
                writeln!(out, "{id} - {id} {id}").unwrap();
            } else {
                let var = self.order.var_at(node.level as usize);
                writeln!(out, "{id} {var} {} {}", node.lo, node.hi).unwrap();
            }
        }
        out
    }

    /// Rebuilds a compact diagram from arbitrary `(level, lo, hi)` storage,
    /// keeping only what `root` reaches.
    pub(crate) fn extract(order: VarOrder, root: NodeId, node: impl Fn(NodeId) -> Node) -> Obdd {
        let n = order.len() as u32;
        let sink = Node { level: n, lo: 0, hi: 0 };
        let mut nodes = vec![sink, Node { lo: 1, hi: 1, ..sink }];
        let mut map: FxHashMap<NodeId, NodeId> = FxHashMap::default();
        map.insert(FALSE, FALSE);
        map.insert(TRUE, TRUE);
        let mut stack = vec![(root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if map.contains_key(&u) {
                continue;
            }
            let nd = node(u);
            if expanded {
                let id = nodes.len() as NodeId;
                nodes.push(Node { level: nd.level, lo: map[&nd.lo], hi: map[&nd.hi] });
                map.insert(u, id);
            } else {
                stack.push((u, true));
                stack.push((nd.hi, false));
                stack.push((nd.lo, false));
            }
        }
        Obdd { order, nodes, root: map[&root] }
    }
}

/// Hash-consing node store with a conjunction cache.
pub(crate) struct Manager {
    levels: u32,
    nodes: Vec<Node>,
    unique: FxHashMap<Node, NodeId>,
    cache: FxHashMap<(NodeId, NodeId), NodeId>,
    capacity: usize,
    peak: usize,
}

impl Manager {
    pub(crate) fn new(levels: usize, capacity: usize) -> Self {
        let sink = Node { level: levels as u32, lo: 0, hi: 0 };
        Manager {
            levels: levels as u32,
            nodes: vec![sink, Node { lo: 1, hi: 1, ..sink }],
            unique: FxHashMap::default(),
            cache: FxHashMap::default(),
            capacity: capacity.max(2),
            peak: 2,
        }
    }

    fn overflow(&self) -> Error {
        Error::CapacityExceeded { capacity: self.capacity, peak: self.peak }
    }

    pub(crate) fn mk(&mut self, level: u32, lo: NodeId, hi: NodeId) -> Result<NodeId> {
        if lo == hi {
            return Ok(lo);
        }
        let node = Node { level, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.capacity {
            return Err(self.overflow());
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.unique.insert(node, id);
        self.peak = self.peak.max(self.nodes.len());
        Ok(id)
    }


    pub(crate) fn and(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        if a == FALSE || b == FALSE {
            return Ok(FALSE);
        }
        if a == TRUE || a == b {
            return Ok(b);
        }
        if b == TRUE {
            return Ok(a);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&r) = self.cache.get(&key) {
            return Ok(r);
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let top = na.level.min(nb.level);
        let (a0, a1) = if na.level == top { (na.lo, na.hi) } else { (a, a) };
        let (b0, b1) = if nb.level == top { (nb.lo, nb.hi) } else { (b, b) };
        let lo = self.and(a0, b0)?;
        let hi = self.and(a1, b1)?;
        let r = self.mk(top, lo, hi)?;
        self.cache.insert(key, r);
        Ok(r)
    }

    fn clause(&mut self, c: &Clause, order: &VarOrder) -> Result<NodeId> {
        let [mut a, mut b] = c.literals();
        if order.level_of(a.var) > order.level_of(b.var) {
            std::mem::swap(&mut a, &mut b);
        }
        let (la, lb) = (order.level_of(a.var) as u32, order.level_of(b.var) as u32);
        let low = if b.positive { self.mk(lb, FALSE, TRUE)? } else { self.mk(lb, TRUE, FALSE)? };
        if a.positive {
            self.mk(la, low, TRUE)
        } else {
            self.mk(la, TRUE, low)
        }
    }

    /// Drops every node not reachable from `root` and clears the cache.
    fn collect(&mut self, root: NodeId) -> NodeId {
        let order = VarOrder::identity(self.levels as usize);
        let compact = Obdd::extract(order, root, |u| self.nodes[u as usize]);
        self.nodes = compact.nodes;
        self.unique = self.nodes.iter().enumerate().skip(2).map(|(i, n)| (*n, i as NodeId)).collect();
        self.cache.clear();
        compact.root
    }
}

/// Compiles with the default capacity.
pub fn compile(f: &Cnf, order: &VarOrder) -> Result<Obdd> {
    compile_with_capacity(f, order, DEFAULT_CAPACITY)
}

/// Conjoins the clause diagrams bottom-up. When the node table would pass
/// `capacity`, unreachable nodes are collected and the step is retried
/// once before giving up with [`Error::CapacityExceeded`].
pub fn compile_with_capacity(f: &Cnf, order: &VarOrder, capacity: usize) -> Result<Obdd> {
    let n = f.num_vars();
    if order.len() != n {
        return Err(Error::InvalidOrder(n));
    }
    let mut clauses: Vec<&Clause> = f.clauses().iter().collect();
    let depth = |c: &Clause| {
        let (a, b) = c.vars();
        let (la, lb) = (order.level_of(a), order.level_of(b));
        (la.max(lb), la.min(lb))
    };
    clauses.sort_by_key(|c| std::cmp::Reverse(depth(c)));

    let mut mgr = Manager::new(n, capacity);
    let mut acc = TRUE;
    for c in clauses {
        let step = |mgr: &mut Manager, acc: NodeId| -> Result<NodeId> {
            let cl = mgr.clause(c, order)?;
            mgr.and(acc, cl)
        };
        acc = match step(&mut mgr, acc) {
            Ok(r) => r,
            Err(Error::CapacityExceeded { .. }) => {
                acc = mgr.collect(acc);
                step(&mut mgr, acc).map_err(|_| mgr.overflow())?
            }
            Err(e) => return Err(e),
        };
        if acc == FALSE {
            break;
        }
    }
    Ok(Obdd::extract(order.clone(), acc, |u| mgr.nodes[u as usize]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_example() -> Cnf {
        Cnf::from_pairs(6, &[(1, 4), (2, 5), (3, 6)])
    }

    #[test]
    fn constants() {
        let unsat = Cnf::from_pairs(2, &[(1, 2), (-1, 2), (1, -2), (-1, -2)]);
        let b = compile(&unsat, &VarOrder::identity(2)).unwrap();
        assert_eq!((b.size(), b.root()), (1, FALSE));
        assert_eq!(b.model_count(), BigUint::ZERO);
        let b = compile(&Cnf::empty(3), &VarOrder::identity(3)).unwrap();
        assert_eq!((b.size(), b.root()), (1, TRUE));
        assert_eq!(b.model_count(), BigUint::from(8u32));
        assert!(b.evaluate(&Assignment::new()).unwrap());
    }

    #[test]
    fn worked_example_counts() {
        let b = compile(&worked_example(), &VarOrder::identity(6)).unwrap();
        assert_eq!(b.model_count(), BigUint::from(27u32));
        assert_eq!(b.semantic_width(3), 8);
        assert_eq!(b.semantic_width(0), 1);
        assert!(b.is_reduced());
    }

    #[test]
    fn single_clause_has_four_nodes() {
        let f = Cnf::from_pairs(2, &[(1, 2)]);
        for order in ["1,2", "2,1"] {
            let b = compile(&f, &order.parse().unwrap()).unwrap();
            assert_eq!(b.size(), 4);
        }
    }

    #[test]
    fn evaluation_requires_total_assignment() {
        let b = compile(&Cnf::from_pairs(3, &[(1, -3)]), &VarOrder::identity(3)).unwrap();
        let partial = Assignment::from_literals([crate::cnf::Literal::neg(1)]).unwrap();
        assert_eq!(b.evaluate(&partial), Err(Error::PartialAssignment(3)));
        assert!(b.evaluate_total(&[true, false, false]));
        assert!(!b.evaluate_total(&[false, false, true]));
    }

    #[test]
    fn capacity_is_reported() {
        // The interleaved order makes this family exponential.
        let pairs: Vec<(i64, i64)> = (1..=10).map(|i| (i, i + 10)).collect();
        let f = Cnf::from_pairs(20, &pairs);
        let err = compile_with_capacity(&f, &VarOrder::identity(20), 500).unwrap_err();
        assert_eq!(err, Error::CapacityExceeded { capacity: 500, peak: 500 });
        let ok = compile_with_capacity(&f, &VarOrder::identity(20), 1 << 16).unwrap();
        assert_eq!(ok.size(), 2 * 1023 + 2);
    }

    #[test]
    fn dump_format() {
        let b = compile(&Cnf::from_pairs(2, &[(1, -2)]), &VarOrder::identity(2)).unwrap();
        assert_eq!(b.dump(), "obdd vars 2 order 1,2 root 3 size 4\n0 - 0 0\n1 - 1 1\n2 2 1 0\n3 1 2 1\n");
    }
}
