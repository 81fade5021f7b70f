//! 2-SAT via the implication graph and strongly connected components.
//!
//! Literal `l` is node `l.code()`. A clause `a ∨ b` contributes `¬a → b` and
//! `¬b → a`; a unit `u` contributes `¬u → u`, which keeps `F ∧ α` inside
//! the 2-CNF fragment.

use crate::cnf::{Assignment, Cnf, Literal};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub satisfiable: bool,
    /// A total satisfying assignment over `x_1..x_n` when satisfiable.
    pub witness: Option<Assignment>,
}

/// Compressed adjacency of the implication graph.
struct ImplicationGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl ImplicationGraph {
    fn build(f: &Cnf, units: &[Literal], n: usize) -> Self {
        let nodes = 2 * n;
        let mut degree = vec![0u32; nodes + 1];
        for c in f.clauses() {
            let [a, b] = c.literals();
            degree[a.negated().code()] += 1;
            degree[b.negated().code()] += 1;
        }
        for u in units {
            degree[u.negated().code()] += 1;
        }
        let mut offsets = vec![0u32; nodes + 1];
        for i in 0..nodes {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[nodes] as usize];
        let mut push = |from: usize, to: usize| {
            targets[fill[from] as usize] = to as u32;
            fill[from] += 1;
        };
        for c in f.clauses() {
            let [a, b] = c.literals();
            push(a.negated().code(), b.code());
            push(b.negated().code(), a.code());
        }
        for &u in units {
            push(u.negated().code(), u.code());
        }
        ImplicationGraph { offsets, targets }
    }

    fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    fn successors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize]
    }

    /// Tarjan's algorithm without recursion. Component ids come out in
    /// reverse topological order of the condensation.
    fn components(&self) -> Vec<u32> {
        const UNSET: u32 = u32::MAX;
        let n = self.len();
        let mut index = vec![UNSET; n];
        let mut low = vec![0u32; n];
        let mut comp = vec![UNSET; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut call: Vec<(u32, u32)> = Vec::new();
        let mut next_index = 0u32;
        let mut next_comp = 0u32;

        for root in 0..n {
            if index[root] != UNSET {
                continue;
            }
            call.push((root as u32, 0));
            index[root] = next_index;
            low[root] = next_index;
            next_index += 1;
            stack.push(root as u32);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut edge)) = call.last_mut() {
                let vu = v as usize;
                let succ = self.successors(vu);
                if (*edge as usize) < succ.len() {
                    let w = succ[*edge as usize] as usize;
                    *edge += 1;
                    if index[w] == UNSET {
                        index[w] = next_index;
                        low[w] = next_index;
                        next_index += 1;
                        stack.push(w as u32);
                        on_stack[w] = true;
                        call.push((w as u32, 0));
                    } else if on_stack[w] {
                        low[vu] = low[vu].min(index[w]);
                    }
                } else {
                    call.pop();
                    if low[vu] == index[vu] {
                        loop {
                            let w = stack.pop().expect("tarjan stack") as usize;
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == vu {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                    if let Some(&(parent, _)) = call.last() {
                        let p = parent as usize;
                        low[p] = low[p].min(low[vu]);
                    }
                }
            }
        }
        comp
    }
}

/// Decides `F ∧ units` and returns a total witness when satisfiable.
pub fn solve(f: &Cnf, units: &Assignment) -> SatResult {
    let n = f.num_vars().max(units.max_var() as usize);
    let graph = ImplicationGraph::build(f, &units.literals().collect::<Vec<_>>(), n);
    let comp = graph.components();
    let mut values = Vec::with_capacity(n);
    for v in 0..n {
        let (p, q) = (comp[2 * v], comp[2 * v + 1]);
        if p == q {
            return SatResult { satisfiable: false, witness: None };
        }
        values.push(p < q);
    }
    SatResult { satisfiable: true, witness: Some(Assignment::from_total(&values)) }
}

pub fn is_satisfiable(f: &Cnf) -> bool {
    solve(f, &Assignment::new()).satisfiable
}

/// Whether `alpha` has an extension satisfying `f`.
pub fn extends_to_sat(f: &Cnf, alpha: &Assignment) -> bool {
    solve(f, alpha).satisfiable
}

/// Answers many extension queries for assignments over a fixed set of at
/// most 64 variables.
///
/// For satisfiable `F`, `F ∧ α` is satisfiable iff no two literals `a, b`
/// made true by `α` (possibly `a = b`) have a path `a ⇒ ¬b` in the
/// implication graph. Those paths are precomputed as bitmasks over the
/// literals of the variable set.
/// One bit per literal of the oracle's variable set.
pub type LiteralMask = u128;

#[derive(Debug, Clone)]
pub struct ExtensionOracle {
    vars: Vec<u32>,
    satisfiable: bool,
    /// `conflicts[i]` has bit `j` set when universe literal `i` implies the negation of literal `j`.
    conflicts: Vec<LiteralMask>,
}

impl ExtensionOracle {
    pub const MAX_VARS: usize = 64;

    pub fn new(f: &Cnf, vars: &[u32]) -> Result<Self> {
        if vars.len() > Self::MAX_VARS {
            return Err(Error::EnumerationTooLarge { vars: vars.len(), limit: Self::MAX_VARS });
        }
        let max_var = vars.iter().copied().max().unwrap_or(0) as usize;
        let n = f.num_vars().max(max_var);
        let graph = ImplicationGraph::build(f, &[], n);
        let comp = graph.components();
        let satisfiable = (0..n).all(|v| comp[2 * v] != comp[2 * v + 1]);

        let mut slot = vec![u32::MAX; 2 * n];
        for (i, &v) in vars.iter().enumerate() {
            let code = 2 * (v as usize - 1);
            slot[code] = 2 * i as u32;
            slot[code + 1] = 2 * i as u32 + 1;
        }

        let mut conflicts = vec![0; 2 * vars.len()];
        if satisfiable {
            let mut seen = vec![u32::MAX; 2 * n];
            let mut queue = Vec::new();
            for (i, &v) in vars.iter().enumerate() {
                for neg in 0..2 {
                    let start = 2 * (v as usize - 1) + neg;
                    let tag = (2 * i + neg) as u32;
                    let mut mask: LiteralMask = 0;
                    queue.clear();
                    queue.push(start as u32);
                    seen[start] = tag;
                    while let Some(x) = queue.pop() {
                        let x = x as usize;
                        let s = slot[x ^ 1];
                        if s != u32::MAX {
                            mask |= 1 << s;
                        }
                        for &y in graph.successors(x) {
                            if seen[y as usize] != tag {
                                seen[y as usize] = tag;
                                queue.push(y);
                            }
                        }
                    }
                    conflicts[2 * i + neg] = mask;
                }
            }
        }
        Ok(ExtensionOracle { vars: vars.to_vec(), satisfiable, conflicts })
    }

    pub fn formula_satisfiable(&self) -> bool {
        self.satisfiable
    }

    pub fn vars(&self) -> &[u32] {
        &self.vars
    }

    /// Bit for literal `(var index i in vars, value)` in a query mask.
    #[inline]
    pub fn bit(index: usize, value: bool) -> LiteralMask {
        1 << (2 * index + usize::from(!value))
    }

    /// Query with a mask built from [`ExtensionOracle::bit`]; at most one bit per variable.
    #[inline]
    pub fn extends_mask(&self, mask: LiteralMask) -> bool {
        if !self.satisfiable {
            return false;
        }
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.conflicts[i] & mask != 0 {
                return false;
            }
        }
        true
    }

    /// Query with an assignment over a subset of the oracle's variables.
    pub fn extends(&self, alpha: &Assignment) -> Option<bool> {
        let mut mask: LiteralMask = 0;
        for (v, b) in alpha.iter() {
            let i = self.vars.iter().position(|&w| w == v)?;
            mask |= Self::bit(i, b);
        }
        Some(self.extends_mask(mask))
    }
}
