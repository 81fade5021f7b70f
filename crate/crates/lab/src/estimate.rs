//! Monte Carlo estimators for the probabilistic statements about random
//! 2-CNFs. Trial `t` draws its formula from `Seed::for_trial(seed, t, n, m)`
//! with `m = round(δ n)`, so every estimate is reproducible and independent
//! of the worker count.

use num_rational::Ratio;
use obdd_phase_core::cnf::{Cnf, Literal};
use obdd_phase_core::graph::primal_graph;
use obdd_phase_core::random::{sample_assignment, sample_f2, sample_h2, sample_monotone, Seed};
use obdd_phase_core::sat::{extends_to_sat, ExtensionOracle};
use obdd_phase_core::theta::{for_each_matching_solution, theta, Theta, MAX_THETA_VARS};
use rayon::prelude::*;

use crate::config::clause_count;
use crate::error::Result;
use crate::record::auxiliary_seed;

/// Largest matching prefix whose `3^k` solutions are enumerated.
pub const MAX_PREFIX_CLAUSES: usize = 20;

/// `k = ⌈n^{1/3}⌉`, the smallest `k` with `k³ ≥ n`.
pub fn prefix_length(n: usize) -> usize {
    let mut k = (n as f64).cbrt().round() as usize;
    while k.pow(3) < n {
        k += 1;
    }
    while k > 0 && (k - 1).pow(3) >= n {
        k -= 1;
    }
    k
}

/// θ(pre, post), or `None` when `pre` is too large to enumerate. Matching
/// prefixes are enumerated through their `3^k` solutions up to
/// [`MAX_PREFIX_CLAUSES`] clauses; anything else falls back to [`theta`]
/// within its variable guard.
pub fn prefix_theta(pre: &Cnf, post: &Cnf) -> Result<Option<Theta>> {
    if pre.is_matching_formula(None) {
        if pre.len() > MAX_PREFIX_CLAUSES {
            return Ok(None);
        }
        let pairs: Vec<(Literal, Literal)> = pre.clauses().iter().map(|c| (c.first(), c.second())).collect();
        let vars: Vec<u32> = pairs.iter().flat_map(|(a, b)| [a.var, b.var]).collect();
        let oracle = ExtensionOracle::new(post, &vars)?;
        let mut t = Theta { extendable: 0, total: 0 };
        for_each_matching_solution(&pairs, |_, mask| {
            t.total += 1;
            t.extendable += u64::from(oracle.extends_mask(mask));
        });
        return Ok(Some(t));
    }
    if pre.vars().len() > MAX_THETA_VARS {
        return Ok(None);
    }
    Ok(Some(theta(pre, post)?))
}

fn count_trials(trials: u64, hit: impl Fn(u64) -> bool + Sync) -> u64 {
    (0..trials).into_par_iter().filter(|&t| hit(t)).count() as u64
}

fn fraction(hits: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    hits as f64 / trials as f64
}

fn trial_seed(seed: u64, t: u64, n: usize, m: u64) -> Seed {
    Seed::for_trial(seed, t, n as u64, m)
}

/// Fraction of trials in which `α ~ 𝓕₁(n, 2k)` extends to a model of
/// `G ~ 𝓕₂(n, δn)`, with `α` drawn independently of `G`.
///
/// # Panics
/// When `δ ≥ 1` or `2k > n`.
pub fn estimate_extension_probability(n: usize, delta: Ratio<u64>, k: usize, trials: u64, seed: u64) -> f64 {
    assert!(delta < Ratio::from_integer(1), "δ must be below 1");
    assert!(2 * k <= n, "2k must not exceed n");
    let m = clause_count(n, delta);
    let hits = count_trials(trials, |t| {
        let s = trial_seed(seed, t, n, m);
        let g = sample_f2(n, m as usize, s).expect("δ < 1 keeps m within the clause space");
        let alpha = sample_assignment(n, 2 * k, auxiliary_seed(s)).expect("2k ≤ n");
        extends_to_sat(&g, &alpha)
    });
    fraction(hits, trials)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaPrefixEstimate {
    /// Trials with θ(F^{≤k}, F^{>k}) ≥ 2/3.
    pub hits: u64,
    pub evaluated: u64,
    /// Trials whose prefix was too large to enumerate.
    pub skipped: u64,
}

impl ThetaPrefixEstimate {
    /// `hits / evaluated`, or `None` when every trial was skipped.
    pub fn fraction(&self) -> Option<f64> {
        (self.evaluated > 0).then(|| fraction(self.hits, self.evaluated))
    }
}

/// θ(F^{≤k}, F^{>k}) ≥ 2/3 over `F ~ 𝓗₂(n, δn)` with `k = ⌈n^{1/3}⌉`.
pub fn estimate_theta_prefix(n: usize, delta: Ratio<u64>, trials: u64, seed: u64) -> ThetaPrefixEstimate {
    let m = clause_count(n, delta);
    let k = prefix_length(n);
    let outcomes: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let f = sample_h2(n, m as usize, trial_seed(seed, t, n, m)).expect("H2 accepts any m for n ≥ 2");
            let (pre, post) = f.split_at(k.min(f.len())).expect("prefix within bounds");
            prefix_theta(&pre, &post).expect("guarded enumeration").map(|th| th.at_least_two_thirds())
        })
        .collect();
    let hits = outcomes.iter().filter(|o| **o == Some(true)).count() as u64;
    let skipped = outcomes.iter().filter(|o| o.is_none()).count() as u64;
    ThetaPrefixEstimate { hits, evaluated: trials - skipped, skipped }
}

/// Fraction of `𝓗₂(n, δn)` samples without repeated clauses.
pub fn simple_fraction(n: usize, delta: Ratio<u64>, trials: u64, seed: u64) -> f64 {
    let m = clause_count(n, delta);
    let hits = count_trials(trials, |t| sample_h2(n, m as usize, trial_seed(seed, t, n, m)).unwrap().is_simple());
    fraction(hits, trials)
}

/// Fraction of `𝓗₂(n, δn)` samples with at least `√n` non-unique clauses.
pub fn non_unique_tail_fraction(n: usize, delta: Ratio<u64>, trials: u64, seed: u64) -> f64 {
    let m = clause_count(n, delta);
    let hits = count_trials(trials, |t| {
        let c = sample_h2(n, m as usize, trial_seed(seed, t, n, m)).unwrap().count_non_unique();
        c * c >= n
    });
    fraction(hits, trials)
}

/// Fraction of uniform random graphs `G(n, δn)` with `Δ(G) ≥ log₂ n`.
pub fn max_degree_tail_fraction(n: usize, delta: Ratio<u64>, trials: u64, seed: u64) -> f64 {
    let m = clause_count(n, delta);
    let hits = count_trials(trials, |t| {
        let f = sample_monotone(n, m as usize, trial_seed(seed, t, n, m)).expect("m within C(n, 2)");
        let d = primal_graph(&f, true).max_degree();
        d >= 64 || (1u128 << d) >= n as u128
    });
    fraction(hits, trials)
}

/// Fraction of `𝓗₂(n, δn)` samples whose first `⌈n^{1/3}⌉` clauses form a
/// matching formula.
pub fn prefix_matching_fraction(n: usize, delta: Ratio<u64>, trials: u64, seed: u64) -> f64 {
    let m = clause_count(n, delta);
    let k = prefix_length(n);
    let hits = count_trials(trials, |t| {
        let f = sample_h2(n, m as usize, trial_seed(seed, t, n, m)).unwrap();
        f.split_at(k.min(f.len())).unwrap().0.is_matching_formula(None)
    });
    fraction(hits, trials)
}
