//! Brute-force reference implementations used as test oracles.

#![allow(dead_code)]

use obdd_phase_core::cnf::{Clause, Cnf, Literal};
use obdd_phase_core::graph::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random 2-CNF with clauses drawn independently, duplicates allowed.
pub fn random_cnf(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Cnf {
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let a = rng.random_range(1..=n as u32);
        let mut b = rng.random_range(1..n as u32);
        if b >= a {
            b += 1;
        }
        clauses.push(Clause::new(Literal::new(a, rng.random()), Literal::new(b, rng.random())).unwrap());
    }
    Cnf::new(n, clauses, true).unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn values(x: u64, n: usize) -> Vec<bool> {
    (0..n).map(|v| x >> v & 1 == 1).collect()
}

/// All models of `f` as bitmasks, variable `v` at bit `v - 1`.
pub fn models(f: &Cnf) -> Vec<u64> {
    let n = f.num_vars();
    (0..1u64 << n).filter(|&x| f.eval(&values(x, n))).collect()
}

pub fn truth_table_sat(f: &Cnf) -> bool {
    let n = f.num_vars();
    (0..1u64 << n).any(|x| f.eval(&values(x, n)))
}

/// (extendable, total) by projecting the models of `f` onto `var(h)`.
pub fn brute_theta(h: &Cnf, f: &Cnf) -> (u64, u64) {
    let n = f.num_vars().max(h.num_vars());
    let f = f.with_num_vars(n).unwrap();
    let h = h.with_num_vars(n).unwrap();
    let hmask: u64 = h.vars().iter().map(|&v| 1u64 << (v - 1)).sum();
    let projections: std::collections::HashSet<u64> = models(&f).into_iter().map(|x| x & hmask).collect();
    let mut ext = 0;
    let mut total = 0;
    // Walk the submasks of hmask.
    let mut sub = 0u64;
    loop {
        if h.eval(&values(sub, n)) {
            total += 1;
            if projections.contains(&sub) {
                ext += 1;
            }
        }
        if sub == hmask {
            break;
        }
        sub = (sub.wrapping_sub(hmask)) & hmask;
    }
    (ext, total)
}

fn adjacency(g: &Graph) -> Vec<u32> {
    let n = g.num_vertices();
    (0..n)
        .map(|i| g.neighbors(g.label(i)).map(|w| 1u32 << g.index_of(w).unwrap()).sum())
        .collect()
}

/// Treewidth by the recurrence `TW(S) = min_v max(TW(S∖v), |Q(S∖v, v)|)`
/// where `Q(S, v)` are the vertices outside `S ∪ {v}` reachable from `v`
/// through `S`.
pub fn tw_subset_dp(g: &Graph) -> usize {
    let n = g.num_vertices();
    if n == 0 {
        return 0;
    }
    let adj = adjacency(g);
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(x) = stack.pop() {
            let mut nb = adj[x] & !seen;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out.count_ones()
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![usize::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        for v in (0..n).filter(|&v| s >> v & 1 == 1) {
            let rest = s & !(1 << v);
            let cand = tw[rest as usize].max(q(rest, v) as usize);
            tw[s as usize] = tw[s as usize].min(cand);
        }
    }
    tw[full as usize]
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// Vertex separation number minimised over all layouts.
pub fn pw_brute(g: &Graph) -> usize {
    let n = g.num_vertices();
    let adj = adjacency(g);
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut placed = 0u32;
            let mut worst = 0;
            for &v in &p {
                placed |= 1 << v;
                let boundary = (0..n).filter(|&u| placed >> u & 1 == 1 && adj[u] & !placed != 0).count();
                worst = worst.max(boundary);
            }
            worst
        })
        .min()
        .unwrap_or(0)
}

/// Maximum matching between `left` and `right` by exhaustive search over edges.
pub fn brute_cross_matching(g: &Graph, left: &[u32], right: &[u32]) -> usize {
    let edges: Vec<(u32, u32)> = left
        .iter()
        .flat_map(|&a| right.iter().filter(move |&&b| g.has_edge(a, b)).map(move |&b| (a, b)))
        .collect();
    fn go(edges: &[(u32, u32)], used: &mut Vec<u32>) -> usize {
        let Some((&(a, b), rest)) = edges.split_first() else {
            return 0;
        };
        let skip = go(rest, used);
        if used.contains(&a) || used.contains(&b) {
            return skip;
        }
        used.push(a);
        used.push(b);
        let take = 1 + go(rest, used);
        used.truncate(used.len() - 2);
        skip.max(take)
    }
    go(&edges, &mut Vec::new())
}

/// A random 2-CNF with a uniform clause count in `0..=max_m`.
pub fn random_cnf_upto(rng: &mut ChaCha8Rng, n: usize, max_m: usize) -> Cnf {
    let m = rng.random_range(0..=max_m);
    random_cnf(rng, n, m)
}

/// A random graph with edge probability uniform in `p`.
pub fn random_graph_in(rng: &mut ChaCha8Rng, n: usize, p: std::ops::Range<f64>) -> Graph {
    let p = rng.random_range(p);
    random_graph(rng, n, p)
}
