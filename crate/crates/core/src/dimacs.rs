//! DIMACS CNF reading and writing, restricted to 2-CNF.
//!
//! Each clause occupies one line with exactly two nonzero literals and a
//! terminating `0`. Comment lines start with `c`.

use std::fmt::Write as _;

use crate::cnf::{Clause, Cnf, Literal};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "second problem line"));
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(line_no, "clause before problem line"));
        };

        let mut lits = Vec::with_capacity(3);
        let mut terminated = false;
        for tok in line.split_whitespace() {
            if terminated {
                return Err(parse_err(line_no, "tokens after terminating 0"));
            }
            let code: i64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, &format!("invalid literal `{tok}`")))?;
            if code == 0 {
                terminated = true;
                continue;
            }
            let lit = Literal::from_dimacs(code)
                .ok_or_else(|| parse_err(line_no, &format!("literal `{tok}` out of range")))?;
            if lit.var as usize > n {
                return Err(parse_err(line_no, &format!("variable {} exceeds declared {n}", lit.var)));
            }
            lits.push(lit);
        }
        if !terminated {
            return Err(parse_err(line_no, "clause not terminated by 0"));
        }
        if lits.len() != 2 {
            return Err(Error::Width { line: line_no, found: lits.len() });
        }
        if lits[0].var == lits[1].var {
            if lits[0].positive != lits[1].positive {
                return Err(Error::Tautology { line: line_no, var: lits[0].var });
            }
            return Err(parse_err(line_no, &format!("repeated literal {}", lits[0].to_dimacs())));
        }
        clauses.push(Clause::new(lits[0], lits[1])?);
    }

    let Some((n, m)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing problem line"));
    };
    if clauses.len() != m {
        return Err(parse_err(
            text.lines().count().max(1),
            &format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    let mut f = Cnf::new(n, clauses, true)?;
    if f.is_simple() {
        f = Cnf::new_unchecked(n, f.clauses().to_vec(), false);
    }
    Ok(f)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        return Err(parse_err(line_no, "expected `p cnf <vars> <clauses>`"));
    }
    let n = toks[2].parse().map_err(|_| parse_err(line_no, "invalid variable count"))?;
    let m = toks[3].parse().map_err(|_| parse_err(line_no, "invalid clause count"))?;
    Ok((n, m))
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse { line, message: message.to_string() }
}

/// Writes `p cnf n m` followed by one clause per line, in clause order.
pub fn write(f: &Cnf) -> String {
    let mut out = String::with_capacity(16 + 12 * f.len());
    writeln!(out, "p cnf {} {}", f.num_vars(), f.len()).unwrap();
    for c in f.clauses() {
        let [a, b] = c.literals();
        writeln!(out, "{} {} 0", a.to_dimacs(), b.to_dimacs()).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_clause() {
        let f = parse("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.clauses(), &[Clause::new(Literal::pos(1), Literal::neg(2)).unwrap()]);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let f = parse("c hello\n\np cnf 3 2\nc mid\n 1 2 0\n-3 2 0\n").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(write(&f), "p cnf 3 2\n1 2 0\n2 -3 0\n");
    }

    #[test]
    fn tautology_is_rejected() {
        assert_eq!(parse("p cnf 2 1\n1 -1 0\n"), Err(Error::Tautology { line: 2, var: 1 }));
    }

    #[test]
    fn width_is_enforced() {
        assert_eq!(parse("p cnf 3 1\n1 2 3 0\n"), Err(Error::Width { line: 2, found: 3 }));
        assert_eq!(parse("p cnf 3 1\n1 0\n"), Err(Error::Width { line: 2, found: 1 }));
    }

    #[test]
    fn structural_errors_carry_line_numbers() {
        assert!(matches!(parse("1 2 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("p cnf 2 1\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("p cnf 2 1\n1 x 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("p cnf 2 1\n1 5 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("p cnf 2 2\n1 2 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("p dnf 2 1\n1 2 0\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("p cnf 2 1\n1 1 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn duplicate_mode_follows_content() {
        assert!(!parse("p cnf 2 2\n1 2 0\n-1 2 0\n").unwrap().allows_duplicates());
        assert!(parse("p cnf 2 2\n1 2 0\n2 1 0\n").unwrap().allows_duplicates());
    }

    #[test]
    fn clause_order_is_preserved() {
        let text = "p cnf 4 3\n3 4 0\n1 2 0\n-2 3 0\n";
        assert_eq!(write(&parse(text).unwrap()), text);
    }
}
