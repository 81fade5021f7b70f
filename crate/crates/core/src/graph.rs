//! Primal graphs and width parameters.
//!
//! A [`Graph`] has vertices labelled by variable indices. Exact algorithms
//! work on adjacency bitmasks and carry hard size guards.

use std::collections::BTreeSet;

use rand::Rng;

use crate::cnf::{Bipartition, Clause, Cnf};
use crate::error::{Error, Result};
use crate::order::VarOrder;
use crate::random::Seed;

pub const TW_EXACT_LIMIT: usize = 14;
pub const PW_EXACT_LIMIT: usize = 16;
pub const MMW_EXACT_LIMIT: usize = 16;

/// A simple undirected graph whose vertices are variable labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<u32>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Edgeless graph on the given labels.
    pub fn with_vertices<I: IntoIterator<Item = u32>>(labels: I) -> Self {
        let labels: Vec<u32> = labels.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let adj = vec![Vec::new(); labels.len()];
        Graph { labels, adj }
    }

    /// Edgeless graph on `1..=n`.
    pub fn on_range(n: usize) -> Self {
        Graph::with_vertices(1..=n as u32)
    }

    /// Graph on `1..=n` with the given edges. Panics on loops or labels out of range.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let mut g = Graph::on_range(n);
        for &(a, b) in edges {
            g.add_edge(a, b).expect("valid edge");
        }
        g
    }

    /// Adds `{a, b}`; returns whether the edge is new.
    pub fn add_edge(&mut self, a: u32, b: u32) -> Result<bool> {
        if a == b {
            return Err(Error::RepeatedVariable(a));
        }
        let n = self.labels.len();
        let i = self.index_of(a).ok_or(Error::VariableOutOfRange { var: a, n })?;
        let j = self.index_of(b).ok_or(Error::VariableOutOfRange { var: b, n })?;
        match self.adj[i].binary_search(&j) {
            Ok(_) => Ok(false),
            Err(p) => {
                self.adj[i].insert(p, j);
                let q = self.adj[j].binary_search(&i).unwrap_err();
                self.adj[j].insert(q, i);
                Ok(true)
            }
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    pub fn index_of(&self, label: u32) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adj[i].binary_search(&j).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for (i, nbrs) in self.adj.iter().enumerate() {
            for &j in nbrs {
                if i < j {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, label: u32) -> impl Iterator<Item = u32> + '_ {
        let i = self.index_of(label);
        i.into_iter().flat_map(move |i| self.adj[i].iter().map(|&j| self.labels[j]))
    }

    pub fn degree(&self, label: u32) -> usize {
        self.index_of(label).map_or(0, |i| self.adj[i].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Adjacency bitmasks by vertex index, for graphs of at most 32 vertices.
    fn masks(&self) -> Vec<u32> {
        assert!(self.labels.len() <= 32);
        self.adj.iter().map(|nbrs| nbrs.iter().fold(0u32, |m, &j| m | 1 << j)).collect()
    }

    /// Labels of `order` restricted to this graph's vertices, as vertex indices.
    fn layout(&self, order: &VarOrder) -> Result<Vec<usize>> {
        let seq: Vec<usize> = order.as_slice().iter().filter_map(|&v| self.index_of(v)).collect();
        if seq.len() != self.labels.len() {
            return Err(Error::InvalidOrder(order.len()));
        }
        Ok(seq)
    }
}

/// `G_F`: an edge per pair of variables sharing a clause. With
/// `include_isolated` the vertex set is `1..=n`, otherwise `var(F)`.
pub fn primal_graph(f: &Cnf, include_isolated: bool) -> Graph {
    let mut g = if include_isolated {
        Graph::on_range(f.num_vars())
    } else {
        Graph::with_vertices(f.vars())
    };
    for c in f.clauses() {
        let (a, b) = c.vars();
        g.add_edge(a, b).expect("clause variables are vertices");
    }
    g
}

/// Every connected component has at most as many edges as vertices.
pub fn every_component_at_most_one_cycle(g: &Graph) -> bool {
    let n = g.num_vertices();
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        stack.push(s);
        let (mut vertices, mut degree_sum) = (0usize, 0usize);
        while let Some(v) = stack.pop() {
            vertices += 1;
            degree_sum += g.adj[v].len();
            for &w in &g.adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = s;
                    stack.push(w);
                }
            }
        }
        if degree_sum / 2 > vertices {
            return false;
        }
    }
    true
}

/// Result of a greedy elimination: width and the elimination order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub width: usize,
    pub order: Vec<u32>,
}

/// Min-fill elimination with ties broken by per-vertex random keys drawn from `seed`.
pub fn min_fill(g: &Graph, seed: Seed) -> Elimination {
    let n = g.num_vertices();
    let mut rng = seed.rng();
    let keys: Vec<u64> = (0..n).map(|_| rng.random()).collect();
    let mut adj: Vec<BTreeSet<usize>> = g.adj.iter().map(|a| a.iter().copied().collect()).collect();

    let fill_of = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };

    let mut fill: Vec<usize> = (0..n).map(|v| fill_of(&adj, v)).collect();
    let mut queue: BTreeSet<(usize, u64, usize)> = (0..n).map(|v| (fill[v], keys[v], v)).collect();
    let mut eliminated = vec![false; n];
    let mut width = 0;
    let mut order = Vec::with_capacity(n);

    while let Some((_, _, v)) = queue.pop_first() {
        eliminated[v] = true;
        order.push(g.labels[v]);
        let nbrs: Vec<usize> = adj[v].iter().copied().collect();
        width = width.max(nbrs.len());
        for (i, &a) in nbrs.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nbrs[i + 1..] {
                if adj[a].insert(b) {
                    adj[b].insert(a);
                }
            }
        }
        adj[v].clear();
        let mut touched: BTreeSet<usize> = nbrs.iter().copied().collect();
        for &a in &nbrs {
            touched.extend(adj[a].iter().copied());
        }
        for u in touched {
            if eliminated[u] {
                continue;
            }
            let f = fill_of(&adj, u);
            if f != fill[u] {
                queue.remove(&(fill[u], keys[u], u));
                fill[u] = f;
                queue.insert((f, keys[u], u));
            }
        }
    }
    Elimination { width, order }
}

/// Treewidth upper bound from [`min_fill`].
pub fn tw_upper(g: &Graph, seed: Seed) -> usize {
    min_fill(g, seed).width
}

/// Vertices outside `s ∪ {v}` reachable from `v` through vertices of `s`.
fn q_set(masks: &[u32], s: u32, v: usize) -> u32 {
    let mut reach = masks[v];
    let mut inner = 0u32;
    loop {
        let fresh = reach & s & !inner;
        if fresh == 0 {
            break;
        }
        inner |= fresh;
        let mut bits = fresh;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            reach |= masks[w];
        }
    }
    reach & !s & !(1 << v)
}

/// Exact treewidth by branch and bound over elimination orders, memoized
/// on the set of eliminated vertices.
pub fn tw_exact(g: &Graph) -> Result<usize> {
    let n = g.num_vertices();
    if n > TW_EXACT_LIMIT {
        return Err(Error::GraphTooLarge { vertices: n, limit: TW_EXACT_LIMIT });
    }
    if n == 0 {
        return Ok(0);
    }
    let masks = g.masks();
    let full = (1u32 << n) - 1;

    struct Search<'a> {
        masks: &'a [u32],
        full: u32,
        best: usize,
        seen: rustc_hash::FxHashMap<u32, usize>,
    }

    impl Search<'_> {
        fn run(&mut self, s: u32, cur: usize) {
            if cur >= self.best {
                return;
            }
            let rest = self.full & !s;
            if (rest.count_ones() as usize) <= cur + 1 {
                self.best = cur;
                return;
            }
            if let Some(&w) = self.seen.get(&s) {
                if w <= cur {
                    return;
                }
            }
            self.seen.insert(s, cur);
            let mut cands: Vec<(usize, usize)> = Vec::new();
            let mut bits = rest;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                cands.push((q_set(self.masks, s, v).count_ones() as usize, v));
            }
            cands.sort_unstable();
            for (q, v) in cands {
                let w = cur.max(q);
                if w < self.best {
                    self.run(s | 1 << v, w);
                }
            }
        }
    }

    let upper = tw_upper(g, Seed::new(0, 0));
    let mut search = Search { masks: &masks, full, best: upper, seen: Default::default() };
    search.run(0, 0);
    Ok(search.best)
}

/// Exact pathwidth as vertex separation number, with an optimal layout.
pub fn pw_exact_with_order(g: &Graph) -> Result<(usize, Vec<u32>)> {
    let n = g.num_vertices();
    if n > PW_EXACT_LIMIT {
        return Err(Error::GraphTooLarge { vertices: n, limit: PW_EXACT_LIMIT });
    }
    let masks = g.masks();
    let full = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let boundary = |s: u32| -> u8 {
        let mut count = 0;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if masks[v] & !s & full != 0 {
                count += 1;
            }
        }
        count
    };
    let mut best = vec![0u8; 1 << n];
    for s in 1..=full {
        let mut m = u8::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            m = m.min(best[(s & !(1 << v)) as usize]);
        }
        best[s as usize] = m.max(boundary(s));
    }
    // Peel an optimal layout off the back.
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let mut bits = s;
        let mut pick = None;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            let prev = best[(s & !(1 << v)) as usize];
            if pick.is_none_or(|(b, _)| prev < b) {
                pick = Some((prev, v));
            }
        }
        let (_, v) = pick.expect("nonempty set");
        order.push(g.labels[v as usize]);
        s &= !(1 << v);
    }
    order.reverse();
    Ok((best[full as usize] as usize, order))
}

pub fn pw_exact(g: &Graph) -> Result<usize> {
    pw_exact_with_order(g).map(|(pw, _)| pw)
}

/// A set of vertex-disjoint edges, oriented `(part1, part2)` when sides are known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(u32, u32)>,
    sides: Option<Bipartition>,
}

impl Matching {
    pub fn new(mut edges: Vec<(u32, u32)>, sides: Option<Bipartition>) -> Result<Self> {
        let mut used = BTreeSet::new();
        for e in &mut edges {
            if let Some(pi) = &sides {
                *e = pi.crossing(e.0, e.1).ok_or(Error::NotMatchingSubformula)?;
            } else if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            if !used.insert(e.0) || !used.insert(e.1) {
                return Err(Error::RepeatedVariable(if used.contains(&e.0) { e.0 } else { e.1 }));
            }
        }
        edges.sort_unstable();
        Ok(Matching { edges, sides })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn sides(&self) -> Option<&Bipartition> {
        self.sides.as_ref()
    }

    /// Every edge is in `g`, edges are disjoint, and each crosses the sides if present.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = BTreeSet::new();
        self.edges.iter().all(|&(a, b)| {
            g.has_edge(a, b)
                && used.insert(a)
                && used.insert(b)
                && self.sides.as_ref().is_none_or(|pi| pi.crossing(a, b) == Some((a, b)))
        })
    }
}

const FREE: usize = usize::MAX;

/// Hopcroft–Karp on a bipartite graph given by left adjacency lists.
/// Extends the matching in `mate_l`/`mate_r`; right vertices marked in
/// `blocked` are never entered.
struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    blocked: &'a [bool],
    mate_l: Vec<usize>,
    mate_r: Vec<usize>,
    dist: Vec<u32>,
}

impl<'a> HopcroftKarp<'a> {
    fn new(adj: &'a [Vec<usize>], n_right: usize, blocked: &'a [bool]) -> Self {
        HopcroftKarp {
            adj,
            blocked,
            mate_l: vec![FREE; adj.len()],
            mate_r: vec![FREE; n_right],
            dist: vec![0; adj.len()],
        }
    }

    fn bfs(&mut self) -> bool {
        let mut queue = std::collections::VecDeque::new();
        for u in 0..self.adj.len() {
            if self.mate_l[u] == FREE {
                self.dist[u] = 0;
                queue.push_back(u);
            } else {
                self.dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if self.blocked[v] {
                    continue;
                }
                let w = self.mate_r[v];
                if w == FREE {
                    found = true;
                } else if self.dist[w] == u32::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        found
    }

    fn dfs(&mut self, u: usize) -> bool {
        for i in 0..self.adj[u].len() {
            let v = self.adj[u][i];
            if self.blocked[v] {
                continue;
            }
            let w = self.mate_r[v];
            if w == FREE || (self.dist[w] == self.dist[u] + 1 && self.dfs(w)) {
                self.mate_l[u] = v;
                self.mate_r[v] = u;
                return true;
            }
        }
        self.dist[u] = u32::MAX;
        false
    }

    fn run(&mut self) -> usize {
        while self.bfs() {
            for u in 0..self.adj.len() {
                if self.mate_l[u] == FREE {
                    self.dfs(u);
                }
            }
        }
        self.size()
    }

    fn size(&self) -> usize {
        self.mate_l.iter().filter(|&&v| v != FREE).count()
    }
}

/// Maximum matching size between left and right vertex lists of `g`.
fn cross_matching_size(g: &Graph, left: &[usize], in_right: &[bool]) -> usize {
    let (adj, n_right) = cross_adjacency(g, left, in_right);
    let blocked = vec![false; n_right];
    HopcroftKarp::new(&adj, n_right, &blocked).run()
}

/// Left adjacency lists into right vertices, right vertices being indexed
/// by their position among vertices with `in_right` set.
fn cross_adjacency(g: &Graph, left: &[usize], in_right: &[bool]) -> (Vec<Vec<usize>>, usize) {
    let mut right_index = vec![FREE; g.num_vertices()];
    let mut n_right = 0;
    for (v, &r) in in_right.iter().enumerate() {
        if r {
            right_index[v] = n_right;
            n_right += 1;
        }
    }
    let adj = left
        .iter()
        .map(|&u| g.adj[u].iter().filter(|&&w| in_right[w]).map(|&w| right_index[w]).collect())
        .collect();
    (adj, n_right)
}

/// The lexicographically smallest maximum matching of a bipartite graph
/// with left vertices `left` (sorted by label) and right vertices flagged
/// in `in_right`, as label pairs `(left, right)`.
fn lex_min_max_matching(g: &Graph, left: &[usize], in_right: &[bool]) -> Vec<(u32, u32)> {
    let (adj, n_right) = cross_adjacency(g, left, in_right);
    let right_label: Vec<u32> =
        (0..g.num_vertices()).filter(|&v| in_right[v]).map(|v| g.labels[v]).collect();
    let mut blocked = vec![false; n_right];
    let (target, mut mate_l, mut mate_r) = {
        let mut hk = HopcroftKarp::new(&adj, n_right, &blocked);
        (hk.run(), hk.mate_l, hk.mate_r)
    };

    // Left vertices ascend by label; sort each adjacency by right label.
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    for (u, nbrs) in adj.iter().enumerate() {
        let mut row: Vec<usize> = nbrs.clone();
        row.sort_by_key(|&v| right_label[v]);
        candidates.extend(row.into_iter().map(|v| (u, v)));
    }

    let mut fixed_l = vec![false; adj.len()];
    let mut chosen = Vec::new();
    for (u, v) in candidates {
        if chosen.len() == target {
            break;
        }
        if fixed_l[u] || blocked[v] {
            continue;
        }
        if mate_l[u] != v {
            let mut trial_l = mate_l.clone();
            let mut trial_r = mate_r.clone();
            if trial_l[u] != FREE {
                trial_r[trial_l[u]] = FREE;
            }
            if trial_r[v] != FREE {
                trial_l[trial_r[v]] = FREE;
            }
            trial_l[u] = v;
            trial_r[v] = u;
            let mut trial_blocked = blocked.clone();
            trial_blocked[v] = true;
            let mut hk = HopcroftKarp::new(&adj, n_right, &trial_blocked);
            hk.mate_l = trial_l;
            hk.mate_r = trial_r;
            let size = hk.run();
            if size < target {
                continue;
            }
            mate_l = hk.mate_l;
            mate_r = hk.mate_r;
        }
        fixed_l[u] = true;
        blocked[v] = true;
        chosen.push((g.labels[left[u]], right_label[v]));
    }
    chosen
}

/// A maximum matching of `g` between `v1` and `v2`; edges run `(v1, v2)`.
pub fn max_cross_matching(g: &Graph, v1: &[u32], v2: &[u32]) -> Result<Matching> {
    let pi = Bipartition::new(v1.iter().copied(), v2.iter().copied())?;
    let left: Vec<usize> = pi.part1().iter().filter_map(|&v| g.index_of(v)).collect();
    let mut in_right = vec![false; g.num_vertices()];
    for &v in pi.part2() {
        if let Some(i) = g.index_of(v) {
            in_right[i] = true;
        }
    }
    let (adj, n_right) = cross_adjacency(g, &left, &in_right);
    let blocked = vec![false; n_right];
    let mut hk = HopcroftKarp::new(&adj, n_right, &blocked);
    hk.run();
    let right: Vec<usize> = (0..g.num_vertices()).filter(|&v| in_right[v]).collect();
    let edges = hk
        .mate_l
        .iter()
        .enumerate()
        .filter(|(_, &r)| r != FREE)
        .map(|(u, &r)| (g.labels[left[u]], g.labels[right[r]]))
        .collect();
    Matching::new(edges, Some(pi))
}

/// Inclusive prefix sizes `⌈n/3⌉..=⌊2n/3⌋` of a balanced cut.
pub fn balanced_range(n: usize) -> std::ops::RangeInclusive<usize> {
    n.div_ceil(3)..=2 * n / 3
}

/// The widest balanced prefix cut of a linear layout and its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalancedCut {
    /// Prefix length: the first `k` vertices of the layout form part 1.
    pub k: usize,
    pub matching: Matching,
}

fn prefix_cut_sizes(g: &Graph, seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len();
    let mut in_right = vec![true; g.num_vertices()];
    let mut out = Vec::new();
    for (k, &v) in seq.iter().enumerate().take(*balanced_range(n).end()) {
        in_right[v] = false;
        let k = k + 1;
        if balanced_range(n).contains(&k) {
            out.push((k, cross_matching_size(g, &seq[..k], &in_right)));
        }
    }
    out
}

/// `max` over balanced prefix cuts of the layout `order` of the crossing
/// maximum matching size.
pub fn mmw_linear(g: &Graph, order: &VarOrder) -> Result<usize> {
    let n = g.num_vertices();
    if n < 3 {
        return Err(Error::GraphTooSmall(n));
    }
    let seq = g.layout(order)?;
    Ok(prefix_cut_sizes(g, &seq).into_iter().map(|(_, s)| s).max().unwrap_or(0))
}

/// Argmax cut of [`mmw_linear`] (smallest `k` on ties) with the
/// lexicographically smallest maximum matching as witness.
pub fn best_balanced_cut(g: &Graph, order: &VarOrder) -> Result<BalancedCut> {
    let n = g.num_vertices();
    if n < 3 {
        return Err(Error::GraphTooSmall(n));
    }
    let seq = g.layout(order)?;
    let mut best = (0usize, 0usize);
    for (k, size) in prefix_cut_sizes(g, &seq) {
        if best.0 == 0 || size > best.1 {
            best = (k, size);
        }
    }
    let k = best.0;
    let mut left: Vec<usize> = seq[..k].to_vec();
    left.sort_unstable();
    let mut in_right = vec![false; n];
    for &v in &seq[k..] {
        in_right[v] = true;
    }
    let edges = lex_min_max_matching(g, &left, &in_right);
    let pi = Bipartition::new(
        seq[..k].iter().map(|&v| g.labels[v]),
        seq[k..].iter().map(|&v| g.labels[v]),
    )?;
    Ok(BalancedCut { k, matching: Matching::new(edges, Some(pi))? })
}

/// `min` over all layouts of [`mmw_linear`], by dynamic programming over
/// prefix sets.
pub fn mmw_linear_min(g: &Graph) -> Result<usize> {
    let n = g.num_vertices();
    if n < 3 {
        return Err(Error::GraphTooSmall(n));
    }
    if n > MMW_EXACT_LIMIT {
        return Err(Error::GraphTooLarge { vertices: n, limit: MMW_EXACT_LIMIT });
    }
    let range = balanced_range(n);
    let full = (1u32 << n) - 1;
    let mut best = vec![0u8; 1 << n];
    let mut in_right = vec![false; n];
    for s in 1..=full {
        let mut m = u8::MAX;
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            m = m.min(best[(s & !(1 << v)) as usize]);
        }
        if range.contains(&(s.count_ones() as usize)) {
            let left: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            for (v, r) in in_right.iter_mut().enumerate() {
                *r = s >> v & 1 == 0;
            }
            m = m.max(cross_matching_size(g, &left, &in_right) as u8);
        }
        best[s as usize] = m;
    }
    Ok(best[full as usize] as usize)
}

/// One clause per matching edge, the earliest in `f`'s order, listed in
/// matching edge order.
pub fn extract_matching_subformula(f: &Cnf, m: &Matching, pi: &Bipartition) -> Result<Cnf> {
    let mut clauses: Vec<Clause> = Vec::with_capacity(m.len());
    for &(a, b) in m.edges() {
        if pi.crossing(a, b).is_none() {
            return Err(Error::NotMatchingSubformula);
        }
        let c = f
            .clauses()
            .iter()
            .find(|c| c.contains_var(a) && c.contains_var(b))
            .ok_or(Error::EdgeWithoutClause(a, b))?;
        clauses.push(*c);
    }
    Cnf::new(f.num_vars(), clauses, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::on_range(n);
        for a in 1..=n as u32 {
            for b in a + 1..=n as u32 {
                g.add_edge(a, b).unwrap();
            }
        }
        g
    }

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n as u32).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn primal_graph_examples() {
        let f = Cnf::from_pairs(6, &[(1, -3), (2, 5), (-4, -6)]);
        assert_eq!(primal_graph(&f, true).edges(), vec![(1, 3), (2, 5), (4, 6)]);
        let f = Cnf::from_pairs(3, &[(1, 3), (1, -3)]);
        let g = primal_graph(&f, true);
        assert_eq!(g.edges(), vec![(1, 3)]);
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(primal_graph(&f, false).labels(), &[1, 3]);
        let g = primal_graph(&Cnf::empty(5), true);
        assert_eq!((g.num_vertices(), g.num_edges()), (5, 0));
    }

    #[test]
    fn degrees() {
        let star = Graph::from_edges(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]);
        assert_eq!(star.max_degree(), 4);
        assert_eq!(Graph::on_range(4).max_degree(), 0);
        assert_eq!(star.neighbors(1).collect::<Vec<_>>(), vec![2, 3, 4, 5]);
    }

    #[test]
    fn cycle_structure() {
        assert!(every_component_at_most_one_cycle(&path(6)));
        assert!(!every_component_at_most_one_cycle(&complete(4)));
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 1), (3, 4)]);
        assert!(every_component_at_most_one_cycle(&g));
        let g = Graph::from_edges(8, &[(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (6, 7)]);
        assert!(every_component_at_most_one_cycle(&g));
    }

    #[test]
    fn treewidth_small() {
        assert_eq!(tw_exact(&path(7)).unwrap(), 1);
        assert_eq!(tw_upper(&path(7), Seed::new(1, 1)), 1);
        assert_eq!(tw_exact(&complete(4)).unwrap(), 3);
        assert_eq!(tw_exact(&Graph::on_range(3)).unwrap(), 0);
        assert_eq!(
            tw_exact(&Graph::on_range(15)),
            Err(Error::GraphTooLarge { vertices: 15, limit: TW_EXACT_LIMIT })
        );
        let cycle = Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1)]);
        assert_eq!(tw_exact(&cycle).unwrap(), 2);
    }

    #[test]
    fn min_fill_order_is_a_permutation() {
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 1), (4, 5), (5, 6)]);
        let e = min_fill(&g, Seed::new(3, 0));
        let mut o = e.order.clone();
        o.sort();
        assert_eq!(o, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(e.width, 2);
    }

    #[test]
    fn pathwidth_small() {
        assert_eq!(pw_exact(&path(6)).unwrap(), 1);
        assert_eq!(pw_exact(&complete(4)).unwrap(), 3);
        assert_eq!(pw_exact(&Graph::on_range(4)).unwrap(), 0);
        let tree: Vec<(u32, u32)> = (2..=15u32).map(|v| (v / 2, v)).collect();
        assert_eq!(pw_exact(&Graph::from_edges(15, &tree)).unwrap(), 2);
        let (pw, order) = pw_exact_with_order(&path(5)).unwrap();
        assert_eq!(pw, 1);
        assert_eq!(order.len(), 5);
    }

    #[test]
    fn cross_matching_examples() {
        let g = Graph::from_edges(6, &[(1, 3), (2, 5), (4, 6)]);
        let m = max_cross_matching(&g, &[1, 2, 4], &[3, 5, 6]).unwrap();
        assert_eq!(m.edges(), &[(1, 3), (2, 5), (4, 6)]);
        assert!(m.is_valid_in(&g));
        let m = max_cross_matching(&g, &[1, 3], &[2, 4, 5, 6]).unwrap();
        assert!(m.is_empty());
        assert_eq!(max_cross_matching(&g, &[1, 2], &[2, 3]), Err(Error::PartsOverlap(2)));
    }

    #[test]
    fn mmw_examples() {
        assert_eq!(mmw_linear(&Graph::on_range(5), &VarOrder::identity(5)).unwrap(), 0);
        let g = Graph::from_edges(6, &[(1, 4), (2, 5), (3, 6)]);
        let id = VarOrder::identity(6);
        assert_eq!(mmw_linear(&g, &id).unwrap(), 3);
        let cut = best_balanced_cut(&g, &id).unwrap();
        assert_eq!(cut.k, 3);
        assert_eq!(cut.matching.edges(), &[(1, 4), (2, 5), (3, 6)]);
        assert!(cut.matching.is_valid_in(&g));
        assert_eq!(mmw_linear(&Graph::on_range(2), &VarOrder::identity(2)), Err(Error::GraphTooSmall(2)));
        // An odd middle cut always splits a pair.
        assert_eq!(mmw_linear_min(&g).unwrap(), 1);
    }

    #[test]
    fn lexicographic_witness() {
        // Part 1 = {1, 2}, part 2 = {3, 4}; both perfect matchings exist.
        let g = Graph::from_edges(4, &[(1, 3), (1, 4), (2, 3), (2, 4)]);
        let cut = best_balanced_cut(&g, &VarOrder::identity(4)).unwrap();
        assert_eq!(cut.k, 2);
        assert_eq!(cut.matching.edges(), &[(1, 3), (2, 4)]);
        // Only (1, 4), (2, 3) is maximum here.
        let g = Graph::from_edges(4, &[(1, 3), (1, 4), (2, 3)]);
        let cut = best_balanced_cut(&g, &VarOrder::identity(4)).unwrap();
        assert_eq!(cut.matching.edges(), &[(1, 4), (2, 3)]);
    }

    #[test]
    fn matching_subformula_extraction() {
        let f = Cnf::from_pairs(6, &[(1, 4), (2, 5), (3, 6)]);
        let pi = Bipartition::new([1, 2, 3], [4, 5, 6]).unwrap();
        let m = Matching::new(vec![(1, 4), (2, 5), (3, 6)], Some(pi.clone())).unwrap();
        assert_eq!(extract_matching_subformula(&f, &m, &pi).unwrap().clauses(), f.clauses());
        let empty = Matching::new(vec![], Some(pi.clone())).unwrap();
        assert!(extract_matching_subformula(&f, &empty, &pi).unwrap().is_empty());
        let g = Cnf::from_pairs(4, &[(1, 2), (-1, -3), (1, 3), (-1, 3), (3, -1)]);
        let pi = Bipartition::new([1], [3]).unwrap();
        let m = Matching::new(vec![(1, 3)], Some(pi.clone())).unwrap();
        assert_eq!(extract_matching_subformula(&g, &m, &pi).unwrap().clauses(), &g.clauses()[1..2]);
        let missing = Matching::new(vec![(1, 4)], None).unwrap();
        let pi = Bipartition::new([1], [4]).unwrap();
        assert_eq!(extract_matching_subformula(&g, &missing, &pi), Err(Error::EdgeWithoutClause(1, 4)));
    }
}
