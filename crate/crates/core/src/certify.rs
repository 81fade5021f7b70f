//! Fooling-set lower bounds on OBDD size.
//!
//! A cut of the variable order splits the variables into `Π₁ | Π₂`. For a
//! `Π`-matching subformula `H = ∧ (ℓᵢ ∨ ℓ_{h+i})` of `F`, satisfying
//! assignments of `H` that extend to models of `F` and pairwise disagree on
//! both literals of some clause reach pairwise distinct nodes at the cut.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;

use crate::cnf::{Assignment, Bipartition, Cnf, Literal, Side};
use crate::error::{Error, Result};
use crate::graph::{best_balanced_cut, extract_matching_subformula, primal_graph, pw_exact};
use crate::obdd::{compile_with_capacity, DEFAULT_CAPACITY};
use crate::order::VarOrder;
use crate::sat::ExtensionOracle;
use crate::theta::{for_each_matching_solution, matching_assignment, theta, Theta};

/// Largest matching subformula whose `3^h` solutions are enumerated.
pub const MAX_FOOLING_CLAUSES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoolingCertificate {
    /// Prefix length of the cut, when the bipartition comes from an order.
    pub cut_position: Option<usize>,
    pub bipartition: Bipartition,
    pub matching_subformula: Cnf,
    /// `(ℓᵢ, ℓ_{h+i})` with `ℓᵢ` on the first side.
    pub pairs: Vec<(Literal, Literal)>,
    pub assignments: Vec<Assignment>,
    pub analytic_floor: BigUint,
    /// Number of candidates the greedy selection started from.
    pub candidates: u64,
}

impl FoolingCertificate {
    pub fn witness_size(&self) -> usize {
        self.assignments.len()
    }

    /// `⌈candidates / (3^⌈h/2⌉ · 2^⌊h/2⌋)⌉`, which the witness always reaches.
    pub fn guarantee(&self) -> BigUint {
        let h = self.pairs.len() as u32;
        let per_round = BigUint::from(3u32).pow(h.div_ceil(2)) * BigUint::from(2u32).pow(h / 2);
        BigUint::from(self.candidates).div_ceil(&per_round)
    }
}

impl fmt::Display for FoolingCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cut_position {
            Some(k) => writeln!(f, "cutPosition: {k}")?,
            None => writeln!(f, "cutPosition: NA")?,
        }
        let join = |s: &BTreeSet<u32>| s.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        writeln!(f, "bipartition: {} | {}", join(self.bipartition.part1()), join(self.bipartition.part2()))?;
        writeln!(f, "matchingSubformula: {}", self.matching_subformula)?;
        writeln!(f, "assignments: {}", self.assignments.len())?;
        for a in &self.assignments {
            writeln!(f, "  {a}")?;
        }
        writeln!(f, "analyticFloor: {}", self.analytic_floor)?;
        write!(f, "witnessSize: {}", self.witness_size())
    }
}

/// Smallest integer `x ≥ 1` with `x ≥ (1/6) · (3/2)^(h/2)`, i.e. `36 x² 2^h ≥ 3^h`.
pub fn analytic_floor(h: usize) -> BigUint {
    let h = h as u32;
    let num = BigUint::from(3u32).pow(h);
    let den = BigUint::from(36u32) * BigUint::from(2u32).pow(h);
    let t = num.div_ceil(&den);
    let s = t.sqrt();
    let x = if &s * &s >= t { s } else { s + 1u32 };
    x.max(BigUint::from(1u32))
}

/// Solutions of a matching formula with `(1,1)` on at most `⌊h/2⌋` clauses:
/// `Σ_{j ≤ ⌊h/2⌋} C(h, j) 2^(h−j)`.
pub fn low_overlap_count(h: usize) -> BigUint {
    let mut binom = BigUint::from(1u32);
    let mut total = BigUint::from(0u32);
    for j in 0..=h / 2 {
        total += &binom * BigUint::from(2u32).pow((h - j) as u32);
        binom = binom * BigUint::from(h - j) / BigUint::from(j + 1);
    }
    total
}

/// Literal pairs of `h` oriented first side first.
fn oriented_pairs(h: &Cnf, pi: &Bipartition) -> Result<Vec<(Literal, Literal)>> {
    h.clauses()
        .iter()
        .map(|c| {
            let (a, b) = (c.first(), c.second());
            match (pi.side(a.var), pi.side(b.var)) {
                (Some(Side::First), Some(Side::Second)) => Ok((a, b)),
                (Some(Side::Second), Some(Side::First)) => Ok((b, a)),
                _ => Err(Error::NotMatchingSubformula),
            }
        })
        .collect()
}

fn is_subformula(h: &Cnf, f: &Cnf) -> bool {
    let clauses: BTreeSet<_> = f.clauses().iter().collect();
    h.clauses().iter().all(|c| clauses.contains(c))
}

/// Greedy fooling set: candidates are the solutions of `h` that extend to
/// models of `f` and put `(1,1)` on at most half the clauses. Walking them
/// in enumeration order, a candidate is kept when it crosses every kept one,
/// which is the same as repeatedly taking the first survivor and discarding
/// what it rules out.
pub fn extract_fooling_set(h: &Cnf, f: &Cnf, pi: &Bipartition) -> Result<FoolingCertificate> {
    if !h.is_matching_formula(Some(pi)) || !is_subformula(h, f) {
        return Err(Error::NotMatchingSubformula);
    }
    if h.len() > MAX_FOOLING_CLAUSES {
        return Err(Error::EnumerationTooLarge { vars: 2 * h.len(), limit: 2 * MAX_FOOLING_CLAUSES });
    }
    let pairs = oriented_pairs(h, pi)?;
    let vars: Vec<u32> = pairs.iter().flat_map(|(a, b)| [a.var, b.var]).collect();
    let oracle = ExtensionOracle::new(f, &vars)?;
    let max_double = pairs.len() / 2;

    // (clauses with (0,1), clauses with (1,0)) as bitmasks.
    let mut kept: Vec<(u32, u32)> = Vec::new();
    let mut assignments = Vec::new();
    let mut candidates = 0u64;
    for_each_matching_solution(&pairs, |digits, mask| {
        let (mut m01, mut m10) = (0u32, 0u32);
        for (i, &d) in digits.iter().enumerate() {
            match d {
                0 => m01 |= 1 << i,
                1 => m10 |= 1 << i,
                _ => {}
            }
        }
        let double = pairs.len() - (m01 | m10).count_ones() as usize;
        if double > max_double || !oracle.extends_mask(mask) {
            return;
        }
        candidates += 1;
        if kept.iter().all(|&(a01, a10)| (a01 & m10) | (a10 & m01) != 0) {
            kept.push((m01, m10));
            assignments.push(matching_assignment(&pairs, digits));
        }
    });

    Ok(FoolingCertificate {
        cut_position: None,
        bipartition: pi.clone(),
        matching_subformula: h.clone(),
        pairs,
        assignments,
        analytic_floor: analytic_floor(h.len()),
        candidates,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub floor: BigUint,
    /// θ(H, F) for the matching subformula at the chosen cut.
    pub theta: Option<Theta>,
    /// Present when θ ≥ 2/3.
    pub certificate: Option<FoolingCertificate>,
}

impl LowerBound {
    fn trivial(theta: Option<Theta>) -> Self {
        LowerBound { floor: BigUint::from(1u32), theta, certificate: None }
    }
}

/// Lower bound on the OBDD of `f` under `pi`: take the balanced prefix cut
/// with the largest crossing matching, the matching subformula on it, and,
/// when θ ≥ 2/3, a fooling set.
pub fn certified_lower_bound(f: &Cnf, pi: &VarOrder) -> Result<LowerBound> {
    lower_bound_impl(f, pi, None)
}

/// As [`certified_lower_bound`], but a matching subformula with more than
/// `max_clauses` clauses is cut down to its first `max_clauses` clauses.
/// Any subset of a crossing matching still crosses the cut, so the bound
/// stays sound; it is only weaker.
pub fn certified_lower_bound_capped(f: &Cnf, pi: &VarOrder, max_clauses: usize) -> Result<LowerBound> {
    lower_bound_impl(f, pi, Some(max_clauses.min(MAX_FOOLING_CLAUSES)))
}

fn lower_bound_impl(f: &Cnf, pi: &VarOrder, cap: Option<usize>) -> Result<LowerBound> {
    let n = f.num_vars();
    if pi.len() != n {
        return Err(Error::InvalidOrder(n));
    }
    if n < 3 {
        return Ok(LowerBound::trivial(None));
    }
    let cut = best_balanced_cut(&primal_graph(f, true), pi)?;
    let sides = cut.matching.sides().expect("balanced cuts carry sides").clone();
    let mut h = extract_matching_subformula(f, &cut.matching, &sides)?;
    if let Some(cap) = cap {
        if h.len() > cap {
            h = Cnf::new(n, h.clauses()[..cap].to_vec(), false)?;
        }
    }
    if h.len() > MAX_FOOLING_CLAUSES {
        return Err(Error::EnumerationTooLarge { vars: 2 * h.len(), limit: 2 * MAX_FOOLING_CLAUSES });
    }
    let t = theta(&h, f)?;
    if !t.at_least_two_thirds() {
        return Ok(LowerBound::trivial(Some(t)));
    }
    let mut cert = extract_fooling_set(&h, f, &sides)?;
    cert.cut_position = Some(cut.k);
    let floor = BigUint::from(cert.witness_size()).max(cert.analytic_floor.clone());
    Ok(LowerBound { floor, theta: Some(t), certificate: Some(cert) })
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// `H` is not a matching subformula of `F` crossing the cut of the order.
    Matching,
    /// Some assignment falsifies `H` or is not over `var(H)`.
    Satisfies,
    /// Some assignment has no extension to a model of `F`.
    Extends,
    Duplicate,
    /// Some pair disagrees on both literals of no clause.
    Crossing,
    /// The diagram has fewer nodes at the cut than assignments.
    Width,
    /// The diagram for the width check could not be built.
    Capacity,
}

impl Rejection {
    pub fn code(self) -> &'static str {
        match self {
            Rejection::Matching => "matching",
            Rejection::Satisfies => "satisfies",
            Rejection::Extends => "extends",
            Rejection::Duplicate => "duplicate",
            Rejection::Crossing => "crossing",
            Rejection::Width => "width",
            Rejection::Capacity => "capacity",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Checks every claim of `cert` against `f` and the order `pi`, including
/// the width of the compiled diagram at the cut.
pub fn verify_certificate(f: &Cnf, pi: &VarOrder, cert: &FoolingCertificate) -> std::result::Result<(), Rejection> {
    let n = f.num_vars();
    if pi.len() != n {
        return Err(Rejection::Matching);
    }
    let k = cert.cut_position.unwrap_or(cert.bipartition.part1().len());
    let prefix: BTreeSet<u32> = pi.as_slice()[..k.min(n)].iter().copied().collect();
    let suffix: BTreeSet<u32> = pi.as_slice()[k.min(n)..].iter().copied().collect();
    let h = &cert.matching_subformula;
    if k > n
        || cert.bipartition.part1() != &prefix
        || cert.bipartition.part2() != &suffix
        || !h.is_matching_formula(Some(&cert.bipartition))
        || !is_subformula(h, f)
    {
        return Err(Rejection::Matching);
    }
    match oriented_pairs(h, &cert.bipartition) {
        Ok(p) if p == cert.pairs => {}
        _ => return Err(Rejection::Matching),
    }

    let h_vars: BTreeSet<u32> = h.vars().into_iter().collect();
    for a in &cert.assignments {
        let a_vars: BTreeSet<u32> = a.iter().map(|(v, _)| v).collect();
        if a_vars != h_vars || !a.satisfies(h) {
            return Err(Rejection::Satisfies);
        }
    }
    let vars: Vec<u32> = h_vars.iter().copied().collect();
    let oracle = ExtensionOracle::new(f, &vars).map_err(|_| Rejection::Extends)?;
    if !cert.assignments.iter().all(|a| oracle.extends(a) == Some(true)) {
        return Err(Rejection::Extends);
    }
    for (i, a) in cert.assignments.iter().enumerate() {
        for b in &cert.assignments[..i] {
            if a == b {
                return Err(Rejection::Duplicate);
            }
            let crossing = cert.pairs.iter().any(|&(x, y)| {
                a.literal_value(x) != b.literal_value(x) && a.literal_value(y) != b.literal_value(y)
            });
            if !crossing {
                return Err(Rejection::Crossing);
            }
        }
    }
    let b = compile_with_capacity(f, pi, DEFAULT_CAPACITY).map_err(|_| Rejection::Capacity)?;
    if b.semantic_width(k) < cert.witness_size() {
        return Err(Rejection::Width);
    }
    Ok(())
}

/// `2^(pw / (8Δ²)) / n` for a monotone formula with primal graph of
/// pathwidth `pw` and maximum degree `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneBound {
    pub pw: usize,
    pub max_degree: usize,
    pub n: usize,
    /// `pw / (8Δ²)`, zero for an edgeless graph.
    pub exponent: Ratio<u64>,
}

impl MonotoneBound {
    /// `size ≥ 2^(p/q) / n`, decided as `(size · n)^q ≥ 2^p`.
    pub fn is_at_most(&self, size: usize) -> bool {
        let p = *self.exponent.numer() as u32;
        let q = *self.exponent.denom() as u32;
        (BigUint::from(size) * BigUint::from(self.n)).pow(q) >= BigUint::from(2u32).pow(p)
    }

    pub fn to_f64(&self) -> f64 {
        let e = *self.exponent.numer() as f64 / *self.exponent.denom() as f64;
        e.exp2() / self.n as f64
    }
}

impl fmt::Display for MonotoneBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.exponent.numer() == 0 {
            write!(f, "1/{}", self.n)
        } else if *self.exponent.denom() == 1 {
            write!(f, "2^{}/{}", self.exponent.numer(), self.n)
        } else {
            write!(f, "2^({}/{})/{}", self.exponent.numer(), self.exponent.denom(), self.n)
        }
    }
}

pub fn monotone_bound(f: &Cnf) -> Result<MonotoneBound> {
    if !f.is_monotone() {
        return Err(Error::NotMonotone);
    }
    let n = f.num_vars();
    if n == 0 {
        return Err(Error::GraphTooSmall(0));
    }
    let g = primal_graph(f, true);
    let pw = pw_exact(&g)?;
    let max_degree = g.max_degree();
    let exponent = if max_degree == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(pw as u64, 8 * (max_degree * max_degree) as u64)
    };
    Ok(MonotoneBound { pw, max_degree, n, exponent })
}
