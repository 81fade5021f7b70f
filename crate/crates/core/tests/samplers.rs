use std::collections::BTreeMap;

use obdd_phase_core::cnf::Clause;
use obdd_phase_core::random::{
    clause_rank, clause_unrank, num_clauses, sample_assignment, sample_f2, sample_h2, sample_matching_formula,
    sample_monotone, Seed,
};

const DRAWS: u64 = 1_000_000;

/// Every one of `cells` outcomes seen within 3σ of `draws / cells`.
fn assert_uniform<K: Ord + std::fmt::Debug>(counts: &BTreeMap<K, u64>, cells: usize, draws: u64) {
    assert_eq!(counts.len(), cells, "support size");
    let p = 1.0 / cells as f64;
    let mean = draws as f64 * p;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for (k, &c) in counts {
        assert!((c as f64 - mean).abs() <= 3.0 * sigma, "{k:?}: {c} vs {mean:.0} ± {:.0}", 3.0 * sigma);
    }
}

fn sorted_ranks(clauses: &[Clause]) -> Vec<u64> {
    let mut r: Vec<u64> = clauses.iter().map(clause_rank).collect();
    r.sort_unstable();
    r
}

#[test]
fn f2_pairs_are_uniform() {
    let mut counts = BTreeMap::new();
    for i in 0..DRAWS {
        let f = sample_f2(3, 2, Seed::new(101, i)).unwrap();
        assert!(f.is_simple());
        *counts.entry(sorted_ranks(f.clauses())).or_insert(0) += 1;
    }
    assert_uniform(&counts, 66, DRAWS);
}

#[test]
fn h2_repeats_with_probability_one_twelfth() {
    let repeats = (0..DRAWS).filter(|&i| !sample_h2(3, 2, Seed::new(102, i)).unwrap().is_simple()).count();
    let p = 1.0 / 12.0;
    let sigma = (DRAWS as f64 * p * (1.0 - p)).sqrt();
    assert!((repeats as f64 - DRAWS as f64 * p).abs() <= 3.0 * sigma, "{repeats}");
}

#[test]
fn monotone_single_clause_is_uniform() {
    let mut counts = BTreeMap::new();
    for i in 0..DRAWS {
        let f = sample_monotone(3, 1, Seed::new(103, i)).unwrap();
        assert!(f.is_monotone());
        *counts.entry(sorted_ranks(f.clauses())).or_insert(0) += 1;
    }
    assert_uniform(&counts, 3, DRAWS);
}

#[test]
fn assignments_are_uniform() {
    let mut counts = BTreeMap::new();
    for i in 0..DRAWS {
        let a = sample_assignment(4, 2, Seed::new(104, i)).unwrap();
        assert_eq!(a.len(), 2);
        *counts.entry(a.literals().map(|l| l.to_dimacs()).collect::<Vec<_>>()).or_insert(0) += 1;
    }
    assert_uniform(&counts, 24, DRAWS);
}

#[test]
fn matching_formulas_are_uniform() {
    // MF(4, 2): 3 perfect pairings of 4 variables times 4 polarities per clause.
    let mut counts = BTreeMap::new();
    for i in 0..DRAWS {
        let f = sample_matching_formula(4, 2, Seed::new(105, i)).unwrap();
        assert!(f.is_matching_formula(None));
        *counts.entry(sorted_ranks(f.clauses())).or_insert(0) += 1;
    }
    assert_uniform(&counts, 3 * 16, DRAWS);
}

#[test]
fn small_full_spaces() {
    let f = sample_f2(4, 24, Seed::new(106, 0)).unwrap();
    assert_eq!(sorted_ranks(f.clauses()), (0..24).collect::<Vec<_>>());
    let f = sample_monotone(4, 6, Seed::new(106, 1)).unwrap();
    assert_eq!(f.len(), 6);
    assert!(f.is_simple() && f.is_monotone());
    assert!(sample_f2(10, 0, Seed::new(106, 2)).unwrap().is_empty());
    assert!(sample_h2(10, 0, Seed::new(106, 3)).unwrap().is_empty());
    assert!(sample_matching_formula(10, 0, Seed::new(106, 4)).unwrap().is_empty());
    assert!(sample_assignment(10, 0, Seed::new(106, 5)).unwrap().is_empty());
}

#[test]
fn simple_h2_conditioned_equals_f2_by_enumeration() {
    // n = 3, m = 2: every ordered pair of ranks has probability 1/144 under H2.
    let space = num_clauses(3);
    let mut conditioned: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for a in 0..space {
        for b in 0..space {
            if a != b {
                let mut key = vec![a, b];
                key.sort_unstable();
                *conditioned.entry(key).or_insert(0) += 1;
            }
        }
    }
    // F2 is uniform over the C(12, 2) = 66 clause sets.
    assert_eq!(conditioned.len(), 66);
    assert!(conditioned.values().all(|&c| c == 2));
    // Decoding keeps the clauses distinct, so "simple" is exactly a != b.
    for a in 0..space {
        for b in 0..space {
            assert_eq!(clause_unrank(a) == clause_unrank(b), a == b);
        }
    }
}

#[test]
fn prefix_and_suffix_are_independent_by_enumeration() {
    // n = 3, m = 3, k = 1: the joint law of (F^{<=1}, F^{>1}) is the product of
    // an H2(3, 1) law and an H2(3, 2) law.
    let space = num_clauses(3);
    let mut joint: BTreeMap<(u64, (u64, u64)), u64> = BTreeMap::new();
    let mut prefix: BTreeMap<u64, u64> = BTreeMap::new();
    let mut suffix: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for a in 0..space {
        for b in 0..space {
            for c in 0..space {
                *joint.entry((a, (b, c))).or_insert(0) += 1;
                *prefix.entry(a).or_insert(0) += 1;
                *suffix.entry((b, c)).or_insert(0) += 1;
            }
        }
    }
    let total = space.pow(3);
    for (&(a, s), &c) in &joint {
        assert_eq!(c * total, prefix[&a] * suffix[&s]);
    }
    assert!(prefix.values().all(|&c| c == space * space));
    assert!(suffix.values().all(|&c| c == space));
}

#[test]
fn sampled_prefix_and_suffix_are_independent() {
    // Chi-square over the 12 x 12 table of (first clause, second clause) of
    // split H2(3, 3) samples; 143 degrees of freedom.
    let draws = 200_000u64;
    let mut table = vec![0u64; 144];
    for i in 0..draws {
        let f = sample_h2(3, 3, Seed::new(107, i)).unwrap();
        let (pre, post) = f.split_at(1).unwrap();
        let a = clause_rank(&pre.clauses()[0]);
        let b = clause_rank(&post.clauses()[0]);
        table[(a * 12 + b) as usize] += 1;
    }
    let expected = draws as f64 / 144.0;
    let chi2: f64 = table.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // Mean 143, standard deviation sqrt(286) ≈ 16.9.
    assert!(chi2 < 143.0 + 5.0 * 16.9, "chi2 = {chi2}");
}

#[test]
fn non_unique_mean_respects_bound() {
    // E[#non-unique clauses] <= m (1 - (1 - 1/N)^m) with N = 4 C(n, 2) the
    // clause space; with N ≈ 2n^2 this is below δn(1 - (1 - 1/n^2)^{δn}).
    let (n, m, trials) = (1000usize, 1000usize, 10_000u64);
    let counts: Vec<f64> =
        (0..trials).map(|i| sample_h2(n, m, Seed::new(108, i)).unwrap().count_non_unique() as f64).collect();
    let mean = counts.iter().sum::<f64>() / trials as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
    let se = (var / trials as f64).sqrt();
    let bound = m as f64 * (1.0 - (1.0 - 1.0 / (n * n) as f64).powi(m as i32));
    assert!(mean <= bound + 3.0 * se, "mean {mean} bound {bound} se {se}");
}

#[test]
fn samplers_are_deterministic() {
    for i in 0..50 {
        let s = Seed::for_trial(7, i, 40, 30);
        assert_eq!(sample_f2(40, 30, s).unwrap(), sample_f2(40, 30, s).unwrap());
        assert_eq!(sample_h2(40, 30, s).unwrap(), sample_h2(40, 30, s).unwrap());
        assert_eq!(sample_monotone(40, 30, s).unwrap(), sample_monotone(40, 30, s).unwrap());
        assert_eq!(sample_assignment(40, 8, s).unwrap(), sample_assignment(40, 8, s).unwrap());
    }
}
