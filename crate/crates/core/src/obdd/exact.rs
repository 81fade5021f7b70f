//! Exact minimum OBDD size by dynamic programming over variable sets.
//!
//! In the reduced diagram for an order whose first levels test the set
//! `S`, the nodes labelled by the next variable `v` are exactly the
//! distinct cofactors `f|β` (`β` ranging over `S`) that depend on `v`.
//! The cost of placing `v` right after `S` therefore depends only on
//! `S`, and the minimum over all `n!` orders is a shortest path over the
//! subset lattice.

use rustc_hash::FxHashSet;

use crate::cnf::Cnf;
use crate::error::{Error, Result};
use crate::order::VarOrder;

pub const EXACT_MIN_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMinimum {
    pub size: usize,
    pub order: VarOrder,
}

/// A truth table over `2^k` points stored in 64-bit words.
type Table = Vec<u64>;

fn words(k: usize) -> usize {
    (1usize << k).div_ceil(64)
}

fn get(t: &Table, i: usize) -> bool {
    t[i >> 6] >> (i & 63) & 1 == 1
}

/// Cofactor of `t` (over `k` variables) fixing the variable at bit `p` to `b`.
fn restrict(t: &Table, k: usize, p: usize, b: bool) -> Table {
    let half = 1usize << (k - 1);
    let mut out = vec![0u64; words(k - 1)];
    let low = (1usize << p) - 1;
    for j in 0..half {
        let old = (j & low) | (usize::from(b) << p) | ((j >> p) << (p + 1));
        if get(t, old) {
            out[j >> 6] |= 1 << (j & 63);
        }
    }
    out
}

pub fn exact_min_size(f: &Cnf) -> Result<ExactMinimum> {
    let n = f.num_vars();
    if n > EXACT_MIN_LIMIT {
        return Err(Error::TooManyVariables { n, limit: EXACT_MIN_LIMIT });
    }
    let mut tt: Table = vec![0; words(n)];
    let mut values = vec![false; n];
    let mut ones = 0usize;
    for x in 0..1usize << n {
        for (v, val) in values.iter_mut().enumerate() {
            *val = x >> v & 1 == 1;
        }
        if f.eval(&values) {
            tt[x >> 6] |= 1 << (x & 63);
            ones += 1;
        }
    }
    if ones == 0 || ones == 1 << n {
        return Ok(ExactMinimum { size: 1, order: VarOrder::identity(n) });
    }

    let full = (1usize << n) - 1;
    // cofactors[S]: distinct f|β over the variables outside S, bits in ascending variable order.
    let mut cofactors: Vec<Vec<Table>> = vec![Vec::new(); 1 << n];
    cofactors[0] = vec![tt];
    let mut cost = vec![0u32; (1 << n) * n];
    for s in 0..=full {
        let cofs = std::mem::take(&mut cofactors[s]);
        let k = n - s.count_ones() as usize;
        let top = if s == 0 { 0 } else { usize::BITS as usize - s.leading_zeros() as usize };
        for v in (0..n).filter(|&v| s >> v & 1 == 0) {
            // Position of v among the free variables.
            let p = (0..v).filter(|&u| s >> u & 1 == 0).count();
            let mut depends = 0;
            let mut next: FxHashSet<Table> = FxHashSet::default();
            for c in &cofs {
                let c0 = restrict(c, k, p, false);
                let c1 = restrict(c, k, p, true);
                if c0 != c1 {
                    depends += 1;
                }
                if v >= top {
                    next.insert(c0);
                    next.insert(c1);
                }
            }
            cost[s * n + v] = depends;
            if v >= top {
                cofactors[s | 1 << v] = next.into_iter().collect();
            }
        }
    }

    let mut best = vec![u32::MAX; 1 << n];
    best[0] = 0;
    for t in 1..=full {
        for v in (0..n).filter(|&v| t >> v & 1 == 1) {
            let s = t & !(1 << v);
            best[t] = best[t].min(best[s] + cost[s * n + v]);
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut t = full;
    while t != 0 {
        let v = (0..n)
            .filter(|&v| t >> v & 1 == 1)
            .find(|&v| {
                let s = t & !(1 << v);
                best[s] + cost[s * n + v] == best[t]
            })
            .expect("optimal predecessor");
        order.push(v as u32 + 1);
        t &= !(1 << v);
    }
    order.reverse();
    Ok(ExactMinimum {
        size: best[full] as usize + 2,
        order: VarOrder::new(order).expect("permutation"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obdd::compile;

    #[test]
    fn unsatisfiable_is_one() {
        let f = Cnf::from_pairs(3, &[(1, 2), (-1, 2), (1, -2), (-1, -2)]);
        assert_eq!(exact_min_size(&f).unwrap().size, 1);
        assert_eq!(exact_min_size(&Cnf::empty(4)).unwrap().size, 1);
    }

    #[test]
    fn single_clause() {
        let f = Cnf::from_pairs(2, &[(1, 2)]);
        assert_eq!(exact_min_size(&f).unwrap().size, 4);
    }

    #[test]
    fn witness_order_attains_minimum() {
        let pairs: Vec<(i64, i64)> = (1..=4).map(|i| (i, i + 4)).collect();
        let f = Cnf::from_pairs(8, &pairs);
        let m = exact_min_size(&f).unwrap();
        assert_eq!(m.size, 2 * 4 + 2);
        assert_eq!(compile(&f, &m.order).unwrap().size(), m.size);
    }

    #[test]
    fn guard() {
        assert_eq!(
            exact_min_size(&Cnf::empty(13)),
            Err(Error::TooManyVariables { n: 13, limit: EXACT_MIN_LIMIT })
        );
    }
}
