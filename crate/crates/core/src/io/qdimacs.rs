//! QDIMACS: prenex CNF with `a`/`e` quantifier lines.
//!
//! Variables keep their DIMACS numbers as ids. Variables that occur in
//! clauses without being quantified are bound existentially in an outermost
//! block, following the usual QDIMACS convention.

use std::collections::BTreeSet;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::formula::{Formula, VarId};
use crate::qbf::{PrenexQbf, Quantifier};

fn malformed(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::new(ParseErrorKind::Malformed, line, column, message)
}

fn literal(lit: i64) -> Formula {
    let v = Formula::Var(VarId::of(lit.unsigned_abs() as u32));
    if lit < 0 {
        Formula::not(v)
    } else {
        v
    }
}

pub fn parse_qdimacs(input: &str) -> std::result::Result<PrenexQbf, ParseError> {
    let mut header: Option<(u64, u64)> = None;
    let mut prefix: Vec<(Quantifier, VarId)> = Vec::new();
    let mut quantified = BTreeSet::new();
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut open_clause_at = (0, 0);
    let mut last_line = 0;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let col_of = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
        let mut tokens = line.split_whitespace();
        let first = tokens.next().unwrap();

        if header.is_none() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse::<u64>().ok().zip(c.parse::<u64>().ok()),
                _ => None,
            };
            match parsed {
                Some((v, c)) if v <= u32::MAX as u64 => header = Some((v, c)),
                _ => {
                    return Err(malformed(line_no, col_of(first), "malformed header")
                        .expecting(&["p cnf <nvars> <nclauses>"]))
                }
            }
            continue;
        }
        let (nvars, _) = header.unwrap();

        if first == "a" || first == "e" {
            if !clauses.is_empty() || !current.is_empty() {
                return Err(malformed(line_no, col_of(first), "quantifier line after clauses"));
            }
            let q = if first == "a" { Quantifier::Forall } else { Quantifier::Exists };
            let mut terminated = false;
            for tok in tokens {
                if terminated {
                    return Err(malformed(line_no, col_of(tok), "tokens after terminating 0"));
                }
                let n: i64 = tok
                    .parse()
                    .map_err(|_| malformed(line_no, col_of(tok), format!("invalid variable {tok:?}")))?;
                if n == 0 {
                    terminated = true;
                    continue;
                }
                if n < 0 || n as u64 > nvars {
                    return Err(malformed(
                        line_no,
                        col_of(tok),
                        format!("variable {n} out of range 1..={nvars}"),
                    ));
                }
                let v = VarId::of(n as u32);
                if !quantified.insert(v) {
                    return Err(ParseError::new(
                        ParseErrorKind::DuplicateQuantification,
                        line_no,
                        col_of(tok),
                        format!("variable {n} is quantified more than once"),
                    ));
                }
                prefix.push((q, v));
            }
            if !terminated {
                return Err(malformed(line_no, raw.len() + 1, "missing terminating 0"));
            }
            continue;
        }

        for tok in std::iter::once(first).chain(tokens) {
            let lit: i64 = tok
                .parse()
                .map_err(|_| malformed(line_no, col_of(tok), format!("invalid literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if lit.unsigned_abs() > nvars {
                return Err(malformed(
                    line_no,
                    col_of(tok),
                    format!("literal {lit} out of range for {nvars} variables"),
                ));
            }
            if current.is_empty() {
                open_clause_at = (line_no, col_of(tok));
            }
            current.push(lit);
        }
    }

    let Some((_, nclauses)) = header else {
        return Err(malformed(last_line.max(1), 1, "missing header").expecting(&["p cnf <nvars> <nclauses>"]));
    };
    if !current.is_empty() {
        return Err(malformed(open_clause_at.0, open_clause_at.1, "missing terminating 0"));
    }
    if clauses.len() as u64 != nclauses {
        return Err(malformed(
            last_line.max(1),
            1,
            format!("header declares {nclauses} clauses, found {}", clauses.len()),
        ));
    }

    let free: BTreeSet<VarId> = clauses
        .iter()
        .flatten()
        .map(|l| VarId::of(l.unsigned_abs() as u32))
        .filter(|v| !quantified.contains(v))
        .collect();
    let prefix: Vec<(Quantifier, VarId)> = free
        .into_iter()
        .map(|v| (Quantifier::Exists, v))
        .chain(prefix)
        .collect();

    let matrix = Formula::and(
        clauses
            .into_iter()
            .map(|c| Formula::or(c.into_iter().map(literal).collect()))
            .collect(),
    );
    Ok(PrenexQbf::new(prefix, matrix).expect("all clause variables are bound"))
}

fn literal_of(f: &Formula) -> Option<i64> {
    match f {
        Formula::Var(v) => Some(v.get() as i64),
        Formula::Not(g) => match g.as_ref() {
            Formula::Var(v) => Some(-(v.get() as i64)),
            _ => None,
        },
        _ => None,
    }
}

fn clause_of(f: &Formula) -> Option<Vec<i64>> {
    match f {
        Formula::Const(false) => Some(Vec::new()),
        Formula::Or(cs) => cs.iter().map(literal_of).collect(),
        other => literal_of(other).map(|l| vec![l]),
    }
}

fn clauses_of(f: &Formula) -> Option<Vec<Vec<i64>>> {
    match f {
        Formula::Const(true) => Some(Vec::new()),
        Formula::And(cs) => cs.iter().map(clause_of).collect(),
        other => clause_of(other).map(|c| vec![c]),
    }
}

/// Writes `q` as QDIMACS. The matrix must be a conjunction of clauses of
/// literals (a single clause or literal counts, `1` is the empty CNF and `0`
/// the empty clause).
pub fn print_qdimacs(q: &PrenexQbf) -> Result<String> {
    let clauses = clauses_of(q.matrix())
        .ok_or_else(|| Error::NotCnf("matrix is not a conjunction of clauses".into()))?;
    let mut out = format!("p cnf {} {}\n", q.max_var(), clauses.len());
    let mut blocks: Vec<(Quantifier, Vec<VarId>)> = Vec::new();
    for (k, v) in q.prefix() {
        match blocks.last_mut() {
            Some((last, vars)) if last == k => vars.push(*v),
            _ => blocks.push((*k, vec![*v])),
        }
    }
    for (k, vars) in blocks {
        out.push(match k {
            Quantifier::Forall => 'a',
            Quantifier::Exists => 'e',
        });
        for v in vars {
            out.push_str(&format!(" {v}"));
        }
        out.push_str(" 0\n");
    }
    for c in clauses {
        for lit in c {
            out.push_str(&format!("{lit} "));
        }
        out.push_str("0\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quantifier::{Exists as E, Forall as A};

    fn v(i: u32) -> VarId {
        VarId::of(i)
    }

    #[test]
    fn simple_documents() {
        let q = parse_qdimacs("p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n").unwrap();
        assert_eq!(q.prefix(), &[(A, v(1)), (E, v(2))]);
        assert_eq!(q.matrix(), &Formula::Or(vec![Formula::Var(v(1)), Formula::Var(v(2))]));

        let q = parse_qdimacs("p cnf 1 1\ne 1 0\n-1 0").unwrap();
        assert_eq!(q.matrix(), &Formula::not(Formula::Var(v(1))));
    }

    #[test]
    fn clause_count_mismatch() {
        let err = parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Malformed);
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "p dnf 1 1\n1 0\n",
            "p cnf x 1\n",
            "p cnf 1 1\ne 1\n1 0\n",
            "p cnf 1 1\ne 1 0\n1\n",
            "p cnf 1 1\ne 1 0\n2 0\n",
            "p cnf 1 1\ne 2 0\n1 0\n",
            "p cnf 1 1\ne 1 0\n1 0\na 1 0\n",
        ] {
            let err = parse_qdimacs(bad).unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::Malformed, "{bad:?}");
        }
        let err = parse_qdimacs("p cnf 1 0\ne 1 0\na 1 0\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateQuantification);
    }

    #[test]
    fn free_variables_are_outer_existentials() {
        let q = parse_qdimacs("c free var 3\np cnf 3 1\na 1 0\ne 2 0\n1 -2 3 0\n").unwrap();
        assert_eq!(q.prefix(), &[(E, v(3)), (A, v(1)), (E, v(2))]);
    }

    #[test]
    fn clauses_may_span_lines() {
        let q = parse_qdimacs("p cnf 3 2\ne 1 2 3 0\n1 2\n 3 0 -1 0\n").unwrap();
        assert_eq!(
            q.matrix(),
            &Formula::And(vec![
                Formula::Or(vec![Formula::Var(v(1)), Formula::Var(v(2)), Formula::Var(v(3))]),
                Formula::not(Formula::Var(v(1))),
            ])
        );
    }

    #[test]
    fn print_round_trip() {
        let text = "p cnf 4 3\na 1 2 0\ne 3 0\na 4 0\n1 -3 0\n-2 0\n3 4 -1 0\n";
        let q = parse_qdimacs(text).unwrap();
        assert_eq!(print_qdimacs(&q).unwrap(), text);
        assert_eq!(parse_qdimacs(&print_qdimacs(&q).unwrap()).unwrap(), q);
    }

    #[test]
    fn non_cnf_rejected() {
        let q = PrenexQbf::new(
            vec![(A, v(1)), (E, v(2))],
            Formula::xor(Formula::Var(v(1)), Formula::Var(v(2))),
        )
        .unwrap();
        assert!(matches!(print_qdimacs(&q), Err(Error::NotCnf(_))));
    }

    #[test]
    fn empty_clause_and_empty_cnf() {
        let q = parse_qdimacs("p cnf 1 1\ne 1 0\n0\n").unwrap();
        assert_eq!(q.matrix(), &Formula::Const(false));
        let q = parse_qdimacs("p cnf 1 0\ne 1 0\n").unwrap();
        assert_eq!(q.matrix(), &Formula::Const(true));
        assert_eq!(print_qdimacs(&q).unwrap(), "p cnf 1 0\ne 1 0\n");
    }
}
