use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::random::Seed;

/// A variable order `π`: level `i` (0-based) tests variable `π(i + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarOrder {
    perm: Vec<u32>,
    level: Vec<u32>,
}

impl VarOrder {
    pub fn new(perm: Vec<u32>) -> Result<Self> {
        let n = perm.len();
        let mut level = vec![u32::MAX; n];
        for (i, &v) in perm.iter().enumerate() {
            if v == 0 || v as usize > n || level[v as usize - 1] != u32::MAX {
                return Err(Error::InvalidOrder(n));
            }
            level[v as usize - 1] = i as u32;
        }
        Ok(VarOrder { perm, level })
    }

    pub fn identity(n: usize) -> Self {
        VarOrder::new((1..=n as u32).collect()).expect("identity is a permutation")
    }

    pub fn random(n: usize, seed: Seed) -> Self {
        let mut perm: Vec<u32> = (1..=n as u32).collect();
        perm.shuffle(&mut seed.rng());
        VarOrder::new(perm).expect("shuffled identity")
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Variable tested at 0-based `level`.
    pub fn var_at(&self, level: usize) -> u32 {
        self.perm[level]
    }

    /// 0-based level of variable `var`.
    pub fn level_of(&self, var: u32) -> usize {
        self.level[var as usize - 1] as usize
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.perm
    }

    /// Moves the variable at level `i` to level `j`, shifting the rest.
    pub fn moved(&self, i: usize, j: usize) -> VarOrder {
        let mut perm = self.perm.clone();
        let v = perm.remove(i);
        perm.insert(j, v);
        VarOrder::new(perm).expect("still a permutation")
    }
}

impl fmt::Display for VarOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.perm.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for VarOrder {
    type Err = Error;

    /// Comma-separated variable indices, e.g. `3,1,2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return VarOrder::new(Vec::new());
        }
        let perm = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidOrder(s.split(',').count()))?;
        VarOrder::new(perm)
    }
}
