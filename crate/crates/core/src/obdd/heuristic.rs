use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use super::sift::LevelDiagram;
use super::{compile_with_capacity, Obdd, DEFAULT_CAPACITY};
use crate::cnf::Cnf;
use crate::error::{Error, Result};
use crate::graph::{min_fill, primal_graph, pw_exact_with_order, Graph};
use crate::order::VarOrder;
use crate::random::Seed;

/// Growth factor at which sifting abandons a direction.
pub const SIFT_MAX_GROWTH: f64 = 1.2;

/// How to choose a variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Identity,
    /// Min-fill elimination order of the primal graph.
    MinFill,
    /// Breadth-first order of the primal graph, components by smallest label.
    Bfs,
    /// Min-fill, then sifting on the compiled diagram.
    Sifting,
    Random,
    Explicit(VarOrder),
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Identity => f.write_str("identity"),
            Strategy::MinFill => f.write_str("minfill"),
            Strategy::Bfs => f.write_str("bfs"),
            Strategy::Sifting => f.write_str("sifting"),
            Strategy::Random => f.write_str("random"),
            Strategy::Explicit(o) => write!(f, "{o}"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// A strategy name, or an explicit comma-separated order such as `2,1,3`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identity" => Ok(Strategy::Identity),
            "minfill" | "min-fill" => Ok(Strategy::MinFill),
            "bfs" => Ok(Strategy::Bfs),
            "sifting" => Ok(Strategy::Sifting),
            "random" => Ok(Strategy::Random),
            t if !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == ',' || c == ' ') => {
                Ok(Strategy::Explicit(t.parse()?))
            }
            _ => Err(Error::UnknownStrategy(s.to_string())),
        }
    }
}

fn bfs_order(g: &Graph) -> Vec<u32> {
    let mut seen = vec![false; g.num_vertices()];
    let mut order = Vec::with_capacity(g.num_vertices());
    let mut queue = VecDeque::new();
    for start in 0..g.num_vertices() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(g.label(start));
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in g.neighbors(v) {
                let i = g.index_of(w).expect("neighbor is a vertex");
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Improves `start` by sifting the diagram compiled under it.
pub fn sift_order(f: &Cnf, start: &VarOrder, capacity: usize) -> Result<Obdd> {
    let b = compile_with_capacity(f, start, capacity)?;
    let mut d = LevelDiagram::from_obdd(&b);
    d.sift(SIFT_MAX_GROWTH);
    Ok(d.to_obdd())
}

pub fn heuristic_order(f: &Cnf, strategy: &Strategy, seed: Seed) -> Result<VarOrder> {
    let n = f.num_vars();
    match strategy {
        Strategy::Identity => Ok(VarOrder::identity(n)),
        Strategy::Random => Ok(VarOrder::random(n, seed)),
        Strategy::MinFill => VarOrder::new(min_fill(&primal_graph(f, true), seed).order),
        Strategy::Bfs => VarOrder::new(bfs_order(&primal_graph(f, true))),
        Strategy::Sifting => {
            let start = heuristic_order(f, &Strategy::MinFill, seed)?;
            Ok(sift_order(f, &start, DEFAULT_CAPACITY)?.order().clone())
        }
        Strategy::Explicit(o) => {
            if o.len() != n {
                return Err(Error::InvalidOrder(n));
            }
            Ok(o.clone())
        }
    }
}

/// Compiles under a strategy; sifting compiles once and reorders in place.
pub fn compile_with_strategy(f: &Cnf, strategy: &Strategy, seed: Seed, capacity: usize) -> Result<Obdd> {
    match strategy {
        Strategy::Sifting => {
            let start = heuristic_order(f, &Strategy::MinFill, seed)?;
            sift_order(f, &start, capacity)
        }
        _ => compile_with_capacity(f, &heuristic_order(f, strategy, seed)?, capacity),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathwidthCheck {
    pub pw: usize,
    pub size: usize,
    /// `n * 2^(pw + 1) + 2`.
    pub bound: u128,
    pub order: VarOrder,
}

impl PathwidthCheck {
    pub fn holds(&self) -> bool {
        self.size as u128 <= self.bound
    }
}

/// Compiles under an optimal vertex-separation layout of `G_F` and reports
/// the size against `n * 2^(pw + 1) + 2`.
pub fn pathwidth_upper_bound_check(f: &Cnf) -> Result<PathwidthCheck> {
    let (pw, layout) = pw_exact_with_order(&primal_graph(f, true))?;
    let order = VarOrder::new(layout)?;
    let size = compile_with_capacity(f, &order, DEFAULT_CAPACITY)?.size();
    let bound = (f.num_vars() as u128) << (pw + 1);
    Ok(PathwidthCheck { pw, size, bound: bound + 2, order })
}
