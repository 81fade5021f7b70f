//! 2-CNF data model.
//!
//! Clauses always hold two literals over distinct variables, stored in
//! canonical order (by variable index). Formulas keep their clause order,
//! which matters for prefix/suffix splits of clause-by-clause random models.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// A variable `x_var` (1-based) or its negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(var, false)
    }

    /// DIMACS encoding: `+v` or `-v`. Returns `None` for 0.
    pub fn from_dimacs(code: i64) -> Option<Self> {
        if code == 0 || code.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal::new(code.unsigned_abs() as u32, code > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    pub fn negated(self) -> Self {
        Literal { var: self.var, positive: !self.positive }
    }

    /// Truth value of the literal under a value for its variable.
    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value == self.positive
    }

    /// Dense index into `0..2n`: `2(var-1)` for the positive literal, `+1` for the negative one.
    #[inline]
    pub fn code(self) -> usize {
        2 * (self.var as usize - 1) + usize::from(!self.positive)
    }

    #[inline]
    pub fn from_code(code: usize) -> Self {
        Literal { var: (code / 2) as u32 + 1, positive: code.is_multiple_of(2) }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "¬x{}", self.var)
        }
    }
}

/// A disjunction of two literals over distinct variables, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause([Literal; 2]);

impl Clause {
    /// Builds the clause `a ∨ b`. Repeated or opposite literals are rejected.
    pub fn new(a: Literal, b: Literal) -> Result<Self> {
        if a.var == b.var {
            return Err(Error::RepeatedVariable(a.var));
        }
        Ok(if a <= b { Clause([a, b]) } else { Clause([b, a]) })
    }

    pub fn literals(&self) -> [Literal; 2] {
        self.0
    }

    pub fn first(&self) -> Literal {
        self.0[0]
    }

    pub fn second(&self) -> Literal {
        self.0[1]
    }

    /// The variable pair `(min, max)`.
    pub fn vars(&self) -> (u32, u32) {
        (self.0[0].var, self.0[1].var)
    }

    pub fn contains_var(&self, var: u32) -> bool {
        self.0[0].var == var || self.0[1].var == var
    }

    pub fn is_monotone(&self) -> bool {
        self.0[0].positive && self.0[1].positive
    }

    /// The literal of this clause on `var`, if any.
    pub fn literal_on(&self, var: u32) -> Option<Literal> {
        self.0.iter().copied().find(|l| l.var == var)
    }

    #[inline]
    pub fn eval(&self, values: &[bool]) -> bool {
        let [a, b] = self.0;
        a.eval(values[a.var as usize - 1]) || b.eval(values[b.var as usize - 1])
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} ∨ {})", self.0[0], self.0[1])
    }
}

/// An ordered conjunction of 2-clauses over the ambient variables `x_1..x_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf {
    n: usize,
    clauses: Vec<Clause>,
    allow_duplicates: bool,
}

impl Cnf {
    pub fn new(n: usize, clauses: Vec<Clause>, allow_duplicates: bool) -> Result<Self> {
        for c in &clauses {
            for l in c.literals() {
                if l.var as usize > n {
                    return Err(Error::VariableOutOfRange { var: l.var, n });
                }
            }
        }
        if !allow_duplicates {
            if let Some(pos) = first_duplicate(&clauses) {
                return Err(Error::DuplicateClause(pos));
            }
        }
        Ok(Cnf { n, clauses, allow_duplicates })
    }

    pub(crate) fn new_unchecked(n: usize, clauses: Vec<Clause>, allow_duplicates: bool) -> Self {
        debug_assert!(Cnf::new(n, clauses.clone(), allow_duplicates).is_ok());
        Cnf { n, clauses, allow_duplicates }
    }

    pub fn empty(n: usize) -> Self {
        Cnf { n, clauses: Vec::new(), allow_duplicates: false }
    }

    /// Convenience constructor from DIMACS-style literal pairs. Panics on invalid input.
    pub fn from_pairs(n: usize, pairs: &[(i64, i64)]) -> Self {
        let clauses = pairs
            .iter()
            .map(|&(a, b)| {
                Clause::new(
                    Literal::from_dimacs(a).expect("nonzero literal"),
                    Literal::from_dimacs(b).expect("nonzero literal"),
                )
                .expect("valid clause")
            })
            .collect();
        Cnf::new(n, clauses, true).expect("valid formula")
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn allows_duplicates(&self) -> bool {
        self.allow_duplicates
    }

    /// Same clauses over a larger or equal ambient variable count.
    pub fn with_num_vars(&self, n: usize) -> Result<Self> {
        Cnf::new(n, self.clauses.clone(), self.allow_duplicates)
    }

    /// `var(F)`, sorted.
    pub fn vars(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self
            .clauses
            .iter()
            .flat_map(|c| {
                let (a, b) = c.vars();
                [a, b]
            })
            .collect();
        set.into_iter().collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().all(Clause::is_monotone)
    }

    /// Evaluates under a total assignment, `values[v - 1]` being the value of `x_v`.
    pub fn eval(&self, values: &[bool]) -> bool {
        assert!(values.len() >= self.n);
        self.clauses.iter().all(|c| c.eval(values))
    }

    /// Conjunction with the clauses of `other`; ambient count is the max of both.
    pub fn concat(&self, other: &Cnf) -> Cnf {
        let mut clauses = self.clauses.clone();
        clauses.extend_from_slice(&other.clauses);
        let allow = self.allow_duplicates || other.allow_duplicates || first_duplicate(&clauses).is_some();
        Cnf { n: self.n.max(other.n), clauses, allow_duplicates: allow }
    }

    /// Splits into the first `k` clauses and the rest, keeping the duplicate mode.
    pub fn split_at(&self, k: usize) -> Result<(Cnf, Cnf)> {
        if k > self.clauses.len() {
            return Err(Error::IndexOutOfRange { index: k, len: self.clauses.len() });
        }
        let (a, b) = self.clauses.split_at(k);
        Ok((
            Cnf { n: self.n, clauses: a.to_vec(), allow_duplicates: self.allow_duplicates },
            Cnf { n: self.n, clauses: b.to_vec(), allow_duplicates: self.allow_duplicates },
        ))
    }

    /// No two clauses are identical.
    pub fn is_simple(&self) -> bool {
        first_duplicate(&self.clauses).is_none()
    }

    /// Number of clause positions whose clause also occurs at another position.
    pub fn count_non_unique(&self) -> usize {
        let mut counts: FxHashMap<Clause, usize> = FxHashMap::default();
        for c in &self.clauses {
            *counts.entry(*c).or_default() += 1;
        }
        counts.values().filter(|&&c| c >= 2).sum()
    }

    /// Clauses are pairwise variable-disjoint; with `pi`, each clause also
    /// has exactly one variable in each part.
    pub fn is_matching_formula(&self, pi: Option<&Bipartition>) -> bool {
        let mut seen = BTreeSet::new();
        for c in &self.clauses {
            let (a, b) = c.vars();
            if !seen.insert(a) || !seen.insert(b) {
                return false;
            }
            if let Some(pi) = pi {
                if pi.crossing(a, b).is_none() {
                    return false;
                }
            }
        }
        true
    }

    /// `|sat(F)| = 3^k` over `var(F)` for a matching formula with `k` clauses.
    pub fn count_matching_solutions(&self) -> Result<BigUint> {
        if !self.is_matching_formula(None) {
            return Err(Error::NotAMatchingFormula);
        }
        Ok(BigUint::from(3u32).pow(self.clauses.len() as u32))
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return write!(f, "⊤");
        }
        for (i, c) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn first_duplicate(clauses: &[Clause]) -> Option<usize> {
    let mut seen = rustc_hash::FxHashSet::default();
    clauses.iter().position(|c| !seen.insert(*c))
}

/// A partial map from variables to truth values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    bindings: BTreeMap<u32, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_total(values: &[bool]) -> Self {
        Assignment { bindings: values.iter().enumerate().map(|(i, &b)| (i as u32 + 1, b)).collect() }
    }

    /// From literals made true. A variable appearing twice is an error.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self> {
        let mut a = Assignment::new();
        for l in lits {
            a.bind(l.var, l.positive)?;
        }
        Ok(a)
    }

    pub fn bind(&mut self, var: u32, value: bool) -> Result<()> {
        if self.bindings.insert(var, value).is_some() {
            return Err(Error::DoubleBinding(var));
        }
        Ok(())
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.bindings.get(&var).copied()
    }

    pub fn literal_value(&self, lit: Literal) -> Option<bool> {
        self.get(lit.var).map(|v| lit.eval(v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, bool)> + '_ {
        self.bindings.iter().map(|(&v, &b)| (v, b))
    }

    /// The literals made true by this assignment.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.iter().map(|(v, b)| Literal { var: v, positive: b })
    }

    pub fn max_var(&self) -> u32 {
        self.bindings.keys().next_back().copied().unwrap_or(0)
    }

    /// Dense vector over `x_1..x_n`; fails if some variable is unbound.
    pub fn to_total(&self, n: usize) -> Result<Vec<bool>> {
        (1..=n as u32).map(|v| self.get(v).ok_or(Error::PartialAssignment(v))).collect()
    }

    /// Whether every clause has a literal made true (unbound literals count as false).
    pub fn satisfies(&self, f: &Cnf) -> bool {
        f.clauses()
            .iter()
            .all(|c| c.literals().iter().any(|&l| self.literal_value(l) == Some(true)))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in self.literals() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", l.to_dimacs())?;
            first = false;
        }
        Ok(())
    }
}

/// Which part of a bipartition a variable lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// Two disjoint variable sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    part1: BTreeSet<u32>,
    part2: BTreeSet<u32>,
}

impl Bipartition {
    pub fn new<A, B>(part1: A, part2: B) -> Result<Self>
    where
        A: IntoIterator<Item = u32>,
        B: IntoIterator<Item = u32>,
    {
        let part1: BTreeSet<u32> = part1.into_iter().collect();
        let part2: BTreeSet<u32> = part2.into_iter().collect();
        if let Some(&v) = part1.intersection(&part2).next() {
            return Err(Error::PartsOverlap(v));
        }
        Ok(Bipartition { part1, part2 })
    }

    pub fn part1(&self) -> &BTreeSet<u32> {
        &self.part1
    }

    pub fn part2(&self) -> &BTreeSet<u32> {
        &self.part2
    }

    pub fn side(&self, var: u32) -> Option<Side> {
        if self.part1.contains(&var) {
            Some(Side::First)
        } else if self.part2.contains(&var) {
            Some(Side::Second)
        } else {
            None
        }
    }

    /// For a crossing pair returns `(var in part1, var in part2)`.
    pub fn crossing(&self, a: u32, b: u32) -> Option<(u32, u32)> {
        match (self.side(a)?, self.side(b)?) {
            (Side::First, Side::Second) => Some((a, b)),
            (Side::Second, Side::First) => Some((b, a)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_is_canonical() {
        let a = Clause::new(Literal::neg(5), Literal::pos(2)).unwrap();
        let b = Clause::new(Literal::pos(2), Literal::neg(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.first(), Literal::pos(2));
        assert_eq!(a.vars(), (2, 5));
    }

    #[test]
    fn clause_rejects_same_variable() {
        assert_eq!(Clause::new(Literal::pos(1), Literal::neg(1)), Err(Error::RepeatedVariable(1)));
        assert_eq!(Clause::new(Literal::pos(1), Literal::pos(1)), Err(Error::RepeatedVariable(1)));
    }

    #[test]
    fn literal_codes_round_trip() {
        for code in 0..40 {
            assert_eq!(Literal::from_code(code).code(), code);
        }
        assert_eq!(Literal::pos(3).negated().code(), Literal::pos(3).code() ^ 1);
    }

    #[test]
    fn duplicates_respect_mode() {
        let c = Clause::new(Literal::pos(1), Literal::pos(2)).unwrap();
        assert_eq!(Cnf::new(2, vec![c, c], false), Err(Error::DuplicateClause(1)));
        let f = Cnf::new(2, vec![c, c], true).unwrap();
        assert!(!f.is_simple());
        assert_eq!(f.count_non_unique(), 2);
    }

    #[test]
    fn variables_must_fit_ambient_count() {
        let c = Clause::new(Literal::pos(1), Literal::pos(4)).unwrap();
        assert_eq!(Cnf::new(3, vec![c], false), Err(Error::VariableOutOfRange { var: 4, n: 3 }));
    }

    #[test]
    fn non_unique_counts_every_copy() {
        let f = Cnf::from_pairs(4, &[(1, 2), (3, 4), (1, 2), (1, 2), (-3, 4), (3, 4)]);
        assert_eq!(f.count_non_unique(), 5);
        assert!(Cnf::from_pairs(6, &[(1, -3), (2, 5), (-4, -6)]).count_non_unique() == 0);
    }

    #[test]
    fn matching_formula_examples() {
        let f = Cnf::from_pairs(6, &[(1, -3), (2, 5), (-4, -6)]);
        let pi = Bipartition::new([1, 2, 4], [3, 5, 6]).unwrap();
        assert!(f.is_matching_formula(Some(&pi)));
        assert!(f.is_matching_formula(None));
        assert!(f.is_simple());

        let g = Cnf::from_pairs(6, &[(1, 3), (1, -3), (2, 5), (-4, -6)]);
        assert!(!g.is_matching_formula(None));

        let not_crossing = Bipartition::new([1, 3], [2, 4, 5, 6]).unwrap();
        assert!(!f.is_matching_formula(Some(&not_crossing)));

        assert!(Cnf::empty(3).is_matching_formula(None));
    }

    #[test]
    fn matching_solution_counts() {
        let f = Cnf::from_pairs(6, &[(1, 4), (2, 5), (3, 6)]);
        assert_eq!(f.count_matching_solutions().unwrap(), BigUint::from(27u32));
        assert_eq!(Cnf::empty(0).count_matching_solutions().unwrap(), BigUint::from(1u32));
        let g = Cnf::from_pairs(3, &[(1, 2), (2, 3)]);
        assert_eq!(g.count_matching_solutions(), Err(Error::NotAMatchingFormula));
    }

    #[test]
    fn split_at_bounds() {
        let f = Cnf::from_pairs(4, &[(1, 2), (2, 3), (3, 4)]);
        let (a, b) = f.split_at(0).unwrap();
        assert!(a.is_empty());
        assert_eq!(b, f);
        let (a, b) = f.split_at(3).unwrap();
        assert_eq!(a, f);
        assert!(b.is_empty());
        let (a, b) = f.split_at(1).unwrap();
        assert_eq!(a.concat(&b), f);
        assert_eq!(f.split_at(4), Err(Error::IndexOutOfRange { index: 4, len: 3 }));
    }

    #[test]
    fn assignment_binding_rules() {
        let mut a = Assignment::new();
        a.bind(3, true).unwrap();
        assert_eq!(a.bind(3, false), Err(Error::DoubleBinding(3)));
        assert_eq!(a.to_total(3), Err(Error::PartialAssignment(1)));
        let t = Assignment::from_total(&[true, false]);
        assert_eq!(t.to_total(2).unwrap(), vec![true, false]);
    }

    #[test]
    fn bipartition_rejects_overlap() {
        assert_eq!(Bipartition::new([1, 2], [2, 3]), Err(Error::PartsOverlap(2)));
        let pi = Bipartition::new([1], [2]).unwrap();
        assert_eq!(pi.crossing(2, 1), Some((1, 2)));
        assert_eq!(pi.crossing(1, 3), None);
    }
}
