//! In-place variable reordering by adjacent level swaps.

use rustc_hash::FxHashMap;

use super::{Node, NodeId, Obdd, TRUE};
use crate::order::VarOrder;

#[derive(Debug, Clone, Copy)]
struct RcNode {
    level: u32,
    lo: NodeId,
    hi: NodeId,
    rc: u32,
}

/// A diagram with reference counts and one unique table per level.
pub(crate) struct LevelDiagram {
    var_at: Vec<u32>,
    nodes: Vec<RcNode>,
    free: Vec<NodeId>,
    tables: Vec<FxHashMap<(NodeId, NodeId), NodeId>>,
    root: NodeId,
}

impl LevelDiagram {
    pub(crate) fn from_obdd(b: &Obdd) -> Self {
        let n = b.num_vars();
        let mut nodes: Vec<RcNode> =
            b.nodes().iter().map(|nd| RcNode { level: nd.level, lo: nd.lo, hi: nd.hi, rc: 0 }).collect();
        let mut tables = vec![FxHashMap::default(); n];
        if !b.is_constant() {
            for id in 2..nodes.len() {
                let nd = nodes[id];
                nodes[nd.lo as usize].rc += 1;
                nodes[nd.hi as usize].rc += 1;
                tables[nd.level as usize].insert((nd.lo, nd.hi), id as NodeId);
            }
        }
        nodes[b.root() as usize].rc += 1;
        LevelDiagram {
            var_at: b.order().as_slice().to_vec(),
            nodes,
            free: Vec::new(),
            tables,
            root: b.root(),
        }
    }

    pub(crate) fn to_obdd(&self) -> Obdd {
        let order = VarOrder::new(self.var_at.clone()).expect("swaps keep a permutation");
        Obdd::extract(order, self.root, |u| {
            let nd = self.nodes[u as usize];
            Node { level: nd.level, lo: nd.lo, hi: nd.hi }
        })
    }

    pub(crate) fn size(&self) -> usize {
        if self.root <= TRUE {
            1
        } else {
            2 + self.tables.iter().map(FxHashMap::len).sum::<usize>()
        }
    }

    fn incref(&mut self, u: NodeId) {
        if u > TRUE {
            self.nodes[u as usize].rc += 1;
        }
    }

    fn decref(&mut self, u: NodeId) {
        if u <= TRUE {
            return;
        }
        let nd = &mut self.nodes[u as usize];
        nd.rc -= 1;
        if nd.rc == 0 {
            let RcNode { level, lo, hi, .. } = *nd;
            self.tables[level as usize].remove(&(lo, hi));
            self.free.push(u);
            self.decref(lo);
            self.decref(hi);
        }
    }

    /// Finds or creates `(level, lo, hi)`; a new node takes references on its children.
    fn mk(&mut self, level: u32, lo: NodeId, hi: NodeId) -> NodeId {
        if lo == hi {
            return lo;
        }
        if let Some(&id) = self.tables[level as usize].get(&(lo, hi)) {
            return id;
        }
        let node = RcNode { level, lo, hi, rc: 0 };
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id as usize] = node;
                id
            }
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as NodeId
            }
        };
        self.incref(lo);
        self.incref(hi);
        self.tables[level as usize].insert((lo, hi), id);
        id
    }

    /// Exchanges the variables at levels `i` and `i + 1`.
    pub(crate) fn swap(&mut self, i: usize) {
        let (li, lj) = (i as u32, i as u32 + 1);
        let upper: Vec<NodeId> = std::mem::take(&mut self.tables[i]).into_values().collect();
        let lower = std::mem::take(&mut self.tables[i + 1]);
        for (&key, &id) in &lower {
            self.nodes[id as usize].level = li;
            self.tables[i].insert(key, id);
        }
        self.var_at.swap(i, i + 1);

        let is_lower = |nodes: &[RcNode], u: NodeId| u > TRUE && nodes[u as usize].level == li;
        let (dependent, independent): (Vec<NodeId>, Vec<NodeId>) = upper.into_iter().partition(|&u| {
            let nd = self.nodes[u as usize];
            is_lower(&self.nodes, nd.lo) || is_lower(&self.nodes, nd.hi)
        });
        for u in independent {
            let nd = &mut self.nodes[u as usize];
            nd.level = lj;
            let key = (nd.lo, nd.hi);
            self.tables[i + 1].insert(key, u);
        }
        for u in dependent {
            let RcNode { lo: f0, hi: f1, .. } = self.nodes[u as usize];
            let cof = |nodes: &[RcNode], f: NodeId| {
                if is_lower(nodes, f) {
                    (nodes[f as usize].lo, nodes[f as usize].hi)
                } else {
                    (f, f)
                }
            };
            let (f00, f01) = cof(&self.nodes, f0);
            let (f10, f11) = cof(&self.nodes, f1);
            let n0 = self.mk(lj, f00, f10);
            let n1 = self.mk(lj, f01, f11);
            self.incref(n0);
            self.incref(n1);
            let nd = &mut self.nodes[u as usize];
            nd.level = li;
            nd.lo = n0;
            nd.hi = n1;
            let previous = self.tables[i].insert((n0, n1), u);
            debug_assert!(previous.is_none(), "canonical diagrams have no collisions");
            self.decref(f0);
            self.decref(f1);
        }
    }

    fn level_of(&self, var: u32) -> usize {
        self.var_at.iter().position(|&v| v == var).expect("variable present")
    }

    /// Rudell's sifting: each variable, largest level first, is moved to
    /// every position (abandoning a direction once the size passes
    /// `max_growth` times its starting size) and left at the best one.
    pub(crate) fn sift(&mut self, max_growth: f64) {
        let n = self.var_at.len();
        if self.root <= TRUE || n < 2 {
            return;
        }
        let mut vars: Vec<(usize, u32)> =
            (0..n).map(|l| (self.tables[l].len(), self.var_at[l])).collect();
        vars.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, var) in vars {
            let start = self.size();
            let limit = (start as f64 * max_growth).ceil() as usize;
            let mut pos = self.level_of(var);
            let (mut best, mut best_pos) = (start, pos);
            // Visit the nearer end first.
            let down_first = n - 1 - pos <= pos;
            for phase in 0..2 {
                let down = (phase == 0) == down_first;
                loop {
                    if down && pos + 1 < n {
                        self.swap(pos);
                        pos += 1;
                    } else if !down && pos > 0 {
                        self.swap(pos - 1);
                        pos -= 1;
                    } else {
                        break;
                    }
                    let s = self.size();
                    if s < best {
                        best = s;
                        best_pos = pos;
                    }
                    if s > limit {
                        break;
                    }
                }
            }
            while pos < best_pos {
                self.swap(pos);
                pos += 1;
            }
            while pos > best_pos {
                self.swap(pos - 1);
                pos -= 1;
            }
            debug_assert_eq!(self.size(), best);
        }
    }
}
