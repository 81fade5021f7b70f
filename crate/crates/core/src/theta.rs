//! θ(H, F): the fraction of satisfying assignments of `H` (over `var(H)`)
//! that extend to a satisfying assignment of `F` over the ambient variables.

use std::fmt;

use num_rational::Ratio;

use crate::cnf::{Assignment, Cnf, Literal};
use crate::error::{Error, Result};
use crate::sat::{ExtensionOracle, LiteralMask};

/// Largest `|var(H)|` that [`theta`] will enumerate.
pub const MAX_THETA_VARS: usize = 30;

/// Exact counts behind θ. `total = 0` means `H` is unsatisfiable and θ is 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theta {
    pub extendable: u64,
    pub total: u64,
}

impl Theta {
    pub fn ratio(&self) -> Ratio<u64> {
        if self.total == 0 {
            Ratio::from_integer(1)
        } else {
            Ratio::new(self.extendable, self.total)
        }
    }

    /// θ ≥ num/den, decided in integers.
    pub fn at_least(&self, num: u64, den: u64) -> bool {
        if self.total == 0 {
            return num <= den;
        }
        self.extendable as u128 * den as u128 >= num as u128 * self.total as u128
    }

    pub fn at_least_two_thirds(&self) -> bool {
        self.at_least(2, 3)
    }

    pub fn to_f64(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.extendable as f64 / self.total as f64
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.ratio();
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

pub fn theta(h: &Cnf, f: &Cnf) -> Result<Theta> {
    let vars = h.vars();
    if vars.len() > MAX_THETA_VARS {
        return Err(Error::EnumerationTooLarge { vars: vars.len(), limit: MAX_THETA_VARS });
    }
    if h.is_matching_formula(None) {
        let pairs: Vec<(Literal, Literal)> = h.clauses().iter().map(|c| (c.first(), c.second())).collect();
        let oracle_vars: Vec<u32> = pairs.iter().flat_map(|(a, b)| [a.var, b.var]).collect();
        let oracle = ExtensionOracle::new(f, &oracle_vars)?;
        let mut theta = Theta { extendable: 0, total: 0 };
        for_each_matching_solution(&pairs, |_, mask| {
            theta.total += 1;
            if oracle.extends_mask(mask) {
                theta.extendable += 1;
            }
        });
        return Ok(theta);
    }

    let oracle = ExtensionOracle::new(f, &vars)?;
    let mut theta = Theta { extendable: 0, total: 0 };
    for_each_solution(h, &vars, |mask| {
        theta.total += 1;
        if oracle.extends_mask(mask) {
            theta.extendable += 1;
        }
    });
    Ok(theta)
}

/// The three satisfying value pairs of a clause `ℓ ∨ ℓ'`, in enumeration order.
pub const CLAUSE_TRIPLES: [(bool, bool); 3] = [(false, true), (true, false), (true, true)];

/// Calls `visit(digits, mask)` for each of the `3^h` solutions of a matching
/// formula given by its literal pairs. `digits[i]` indexes [`CLAUSE_TRIPLES`]
/// for pair `i`; the first pair varies slowest. `mask` uses the oracle bit
/// layout with pair `i` occupying variable slots `2i` and `2i + 1`.
pub fn for_each_matching_solution<V>(pairs: &[(Literal, Literal)], mut visit: V)
where
    V: FnMut(&[u8], LiteralMask),
{
    let h = pairs.len();
    let mut digits = vec![0u8; h];
    let clause_mask = |i: usize, d: u8| -> LiteralMask {
        let (a, b) = pairs[i];
        let (ta, tb) = CLAUSE_TRIPLES[d as usize];
        ExtensionOracle::bit(2 * i, a.positive == ta) | ExtensionOracle::bit(2 * i + 1, b.positive == tb)
    };
    let mut partial = vec![0; h + 1];
    for i in 0..h {
        partial[i + 1] = partial[i] | clause_mask(i, 0);
    }
    loop {
        visit(&digits, partial[h]);
        let mut i = h;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if digits[i] < 2 {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
        for j in i..h {
            partial[j + 1] = partial[j] | clause_mask(j, digits[j]);
        }
    }
}

/// The assignment over the pair variables described by `digits`.
pub fn matching_assignment(pairs: &[(Literal, Literal)], digits: &[u8]) -> Assignment {
    let mut a = Assignment::new();
    for (&(x, y), &d) in pairs.iter().zip(digits) {
        let (tx, ty) = CLAUSE_TRIPLES[d as usize];
        a.bind(x.var, x.positive == tx).expect("pairs are variable-disjoint");
        a.bind(y.var, y.positive == ty).expect("pairs are variable-disjoint");
    }
    a
}

/// Largest `F₁` whose subformulas [`subformula_counterexample`] enumerates.
pub const MAX_SUBFORMULA_CLAUSES: usize = 15;

/// For a matching formula `f1` with θ(F₁, F₂) ≥ 2/3, searches every
/// `H ⊆ F₁` for one with θ(H, F₁ ∧ F₂) < 2/3. `None` when the premise fails
/// or no such `H` exists.
pub fn subformula_counterexample(f1: &Cnf, f2: &Cnf) -> Result<Option<Cnf>> {
    if !f1.is_matching_formula(None) {
        return Err(Error::NotAMatchingFormula);
    }
    let k = f1.len();
    if k > MAX_SUBFORMULA_CLAUSES {
        return Err(Error::EnumerationTooLarge { vars: 2 * k, limit: 2 * MAX_SUBFORMULA_CLAUSES });
    }
    if !theta(f1, f2)?.at_least_two_thirds() {
        return Ok(None);
    }
    let f = f1.concat(f2);
    for subset in 0u32..1 << k {
        let clauses = (0..k).filter(|&i| subset >> i & 1 == 1).map(|i| f1.clauses()[i]).collect();
        let h = Cnf::new(f.num_vars(), clauses, false)?;
        if !theta(&h, &f)?.at_least_two_thirds() {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Enumerates `sat(H)` over `vars` by depth-first search with clause checks.
fn for_each_solution<V: FnMut(LiteralMask)>(h: &Cnf, vars: &[u32], mut visit: V) {
    let index = |v: u32| vars.binary_search(&v).expect("var of H");
    // Clauses checked once their later variable is assigned.
    let mut due: Vec<Vec<(usize, bool, usize, bool)>> = vec![Vec::new(); vars.len()];
    for c in h.clauses() {
        let [a, b] = c.literals();
        let (ia, ib) = (index(a.var), index(b.var));
        due[ia.max(ib)].push((ia, a.positive, ib, b.positive));
    }
    let mut values = vec![false; vars.len()];
    fn rec<V: FnMut(LiteralMask)>(
        i: usize,
        values: &mut [bool],
        due: &[Vec<(usize, bool, usize, bool)>],
        mask: LiteralMask,
        visit: &mut V,
    ) {
        if i == values.len() {
            visit(mask);
            return;
        }
        for value in [false, true] {
            values[i] = value;
            let ok = due[i]
                .iter()
                .all(|&(ia, pa, ib, pb)| values[ia] == pa || values[ib] == pb);
            if ok {
                rec(i + 1, values, due, mask | ExtensionOracle::bit(i, value), visit);
            }
        }
    }
    rec(0, &mut values, &due, 0, &mut visit);
}
