//! Seeded samplers for random 2-CNF models, random partial assignments and
//! random matching formulas.
//!
//! Clauses over `x_1..x_n` are ranked `4 * pair + polarity`, where `pair`
//! is the colex rank of the variable pair (`C(j, 2) + i` for 0-based
//! `i < j`) and `polarity` has bit 1 set when the smaller variable is
//! negated and bit 0 set when the larger one is.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use crate::cnf::{Assignment, Clause, Cnf, Literal};
use crate::error::{Error, Result};

/// `(master, stream)` selects one ChaCha8 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Seed {
    pub master: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(master: u64, stream: u64) -> Self {
        Seed { master, stream }
    }

    /// The per-trial seed for trial `trial` at size `n` with `m` clauses.
    pub fn for_trial(master: u64, trial: u64, n: u64, m: u64) -> Self {
        let mut h = splitmix64(trial);
        h = splitmix64(h ^ n.rotate_left(21));
        h = splitmix64(h ^ m.rotate_left(42));
        Seed { master, stream: h }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.stream);
        rng
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn num_pairs(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// `|Cl_{2,n}| = 4 * C(n, 2)`.
pub fn num_clauses(n: usize) -> u64 {
    4 * num_pairs(n)
}

/// Colex rank of the pair `{a, b}` of 1-based variables.
pub fn pair_rank(a: u32, b: u32) -> u64 {
    let (i, j) = (a.min(b) as u64 - 1, a.max(b) as u64 - 1);
    j * (j - 1) / 2 + i
}

/// Inverse of [`pair_rank`]; returns 1-based `(a, b)` with `a < b`.
pub fn pair_unrank(rank: u64) -> (u32, u32) {
    // Largest j with C(j, 2) <= rank.
    let mut j = ((1.0 + (1.0 + 8.0 * rank as f64).sqrt()) / 2.0) as u64;
    while j * (j - 1) / 2 > rank {
        j -= 1;
    }
    while (j + 1) * j / 2 <= rank {
        j += 1;
    }
    let i = rank - j * (j - 1) / 2;
    (i as u32 + 1, j as u32 + 1)
}

pub fn clause_rank(c: &Clause) -> u64 {
    let [a, b] = c.literals();
    let code = (u64::from(!a.positive) << 1) | u64::from(!b.positive);
    4 * pair_rank(a.var, b.var) + code
}

pub fn clause_unrank(rank: u64) -> Clause {
    let (a, b) = pair_unrank(rank / 4);
    let code = rank % 4;
    Clause::new(Literal::new(a, code & 2 == 0), Literal::new(b, code & 1 == 0))
        .expect("distinct variables")
}

/// Floyd's algorithm: `m` distinct values of `0..space`, in insertion order.
fn floyd(space: u64, m: u64, rng: &mut impl Rng) -> Vec<u64> {
    let mut chosen = FxHashSet::default();
    chosen.reserve(m as usize);
    let mut out = Vec::with_capacity(m as usize);
    for j in space - m..space {
        let t = rng.random_range(0..=j);
        let pick = if chosen.insert(t) { t } else { j };
        if pick == j {
            chosen.insert(j);
        }
        out.push(pick);
    }
    out
}

/// Uniform over formulas of `m` distinct clauses, in uniformly random order.
pub fn sample_f2(n: usize, m: usize, seed: Seed) -> Result<Cnf> {
    let space = num_clauses(n);
    if m as u64 > space {
        return Err(Error::TooManyClauses { requested: m as u64, available: space });
    }
    let mut rng = seed.rng();
    let mut ranks = floyd(space, m as u64, &mut rng);
    ranks.shuffle(&mut rng);
    Ok(Cnf::new_unchecked(n, ranks.into_iter().map(clause_unrank).collect(), false))
}

/// `m` independent uniform clauses.
pub fn sample_h2(n: usize, m: usize, seed: Seed) -> Result<Cnf> {
    if n < 2 && m > 0 {
        return Err(Error::NotEnoughVariables { needed: 2, n });
    }
    let space = num_clauses(n);
    let mut rng = seed.rng();
    let clauses = (0..m).map(|_| clause_unrank(rng.random_range(0..space))).collect();
    Ok(Cnf::new_unchecked(n, clauses, true))
}

/// Uniform over sets of `m` distinct all-positive clauses, in random order.
pub fn sample_monotone(n: usize, m: usize, seed: Seed) -> Result<Cnf> {
    let space = num_pairs(n);
    if m as u64 > space {
        return Err(Error::TooManyClauses { requested: m as u64, available: space });
    }
    let mut rng = seed.rng();
    let mut ranks = floyd(space, m as u64, &mut rng);
    ranks.shuffle(&mut rng);
    let clauses = ranks
        .into_iter()
        .map(|r| {
            let (a, b) = pair_unrank(r);
            Clause::new(Literal::pos(a), Literal::pos(b)).expect("distinct variables")
        })
        .collect();
    Ok(Cnf::new_unchecked(n, clauses, false))
}

/// Uniform over the `2^s * C(n, s)` assignments binding exactly `s` variables.
pub fn sample_assignment(n: usize, s: usize, seed: Seed) -> Result<Assignment> {
    if s > n {
        return Err(Error::NotEnoughVariables { needed: s, n });
    }
    let mut rng = seed.rng();
    let vars = floyd(n as u64, s as u64, &mut rng);
    let mut alpha = Assignment::new();
    for v in vars {
        alpha.bind(v as u32 + 1, rng.random()).expect("distinct variables");
    }
    Ok(alpha)
}

/// Uniform over `MF(n, k)`: `k` variable-disjoint clauses on `2k` variables.
pub fn sample_matching_formula(n: usize, k: usize, seed: Seed) -> Result<Cnf> {
    if 2 * k > n {
        return Err(Error::NotEnoughVariables { needed: 2 * k, n });
    }
    let mut rng = seed.rng();
    let mut vars = floyd(n as u64, 2 * k as u64, &mut rng);
    // A uniform arrangement paired off consecutively is a uniform pairing.
    vars.shuffle(&mut rng);
    let clauses = vars
        .chunks_exact(2)
        .map(|p| {
            let a = Literal::new(p[0] as u32 + 1, rng.random());
            let b = Literal::new(p[1] as u32 + 1, rng.random());
            Clause::new(a, b).expect("distinct variables")
        })
        .collect();
    Ok(Cnf::new_unchecked(n, clauses, false))
}

/// The clause-set distributions a sweep can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distribution {
    F2,
    H2,
    Monotone,
}

impl Distribution {
    pub fn sample(self, n: usize, m: usize, seed: Seed) -> Result<Cnf> {
        match self {
            Distribution::F2 => sample_f2(n, m, seed),
            Distribution::H2 => sample_h2(n, m, seed),
            Distribution::Monotone => sample_monotone(n, m, seed),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Distribution::F2 => "F2",
            Distribution::H2 => "H2",
            Distribution::Monotone => "monotone",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Distribution {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f2" => Ok(Distribution::F2),
            "h2" => Ok(Distribution::H2),
            "monotone" | "m2" => Ok(Distribution::Monotone),
            _ => Err(format!("unknown distribution `{s}` (expected F2, H2 or monotone)")),
        }
    }
}
