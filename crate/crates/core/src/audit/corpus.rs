//! Deterministic instance generators.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{AnfPolynomial, Formula, TruthTable, VarId};
use crate::normalize::StandardFormQbf;
use crate::qbf::{PrenexQbf, Quantifier};

/// Refuse corpora larger than this many instances.
pub const MAX_CORPUS_SIZE: u64 = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MatrixFamily {
    /// All 16 two-variable functions placed on one pair of prefix positions
    /// (1-based, x1 = 1, y1 = 2, …), or on every pair when `pair` is `None`.
    #[serde(rename = "EXHAUSTIVE_2VAR")]
    Exhaustive2Var { pair: Option<(usize, usize)> },
    /// `count` random trees of depth at most `max_depth`.
    RandomAst { count: usize, max_depth: usize },
    /// Every set of at most `max_clauses` distinct non-tautological clauses.
    AllSmallCnf { max_clauses: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusParams {
    pub seed: u64,
    pub n: usize,
    pub family: MatrixFamily,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusInstance {
    pub serial: u64,
    pub formula: StandardFormQbf,
}

/// `(∀x1)(∃y1)…(∀xn)(∃yn)` over ids 1..=2n with names `x1, y1, …`.
pub fn standard_prefix(n: usize) -> Vec<(Quantifier, VarId)> {
    (1..=n as u32)
        .flat_map(|i| {
            [
                (Quantifier::Forall, VarId::of(2 * i - 1)),
                (Quantifier::Exists, VarId::of(2 * i)),
            ]
        })
        .collect()
}

fn standard_names(n: usize) -> impl Iterator<Item = (VarId, String)> {
    (1..=n as u32).flat_map(|i| {
        [
            (VarId::of(2 * i - 1), format!("x{i}")),
            (VarId::of(2 * i), format!("y{i}")),
        ]
    })
}

pub fn standard_instance(n: usize, matrix: Formula) -> Result<StandardFormQbf> {
    let q = PrenexQbf::new(standard_prefix(n), matrix)?.with_names(standard_names(n))?;
    StandardFormQbf::from_qbf(q)
}

/// The two-variable function whose table index is `index` (bit `r` is row
/// `r`, `a` the high bit), written in algebraic normal form.
pub fn two_var_function(index: u8, a: VarId, b: VarId) -> Formula {
    let table = TruthTable::from_index(vec![a, b], index as u64);
    AnfPolynomial::from_truth_table(&table).to_formula()
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[VarId], depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.1) {
            Formula::Const(rng.gen())
        } else {
            Formula::Var(vars[rng.gen_range(0..vars.len())])
        };
    }
    let child = |rng: &mut ChaCha8Rng| random_formula(rng, vars, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(child(rng)),
        1 => {
            let k = rng.gen_range(2..=3);
            Formula::And((0..k).map(|_| child(rng)).collect())
        }
        2 => {
            let k = rng.gen_range(2..=3);
            Formula::Or((0..k).map(|_| child(rng)).collect())
        }
        _ => Formula::xor(child(rng), child(rng)),
    }
}

/// Clause number `code` (1-based) over `vars`: base-3 digits per variable,
/// 0 absent, 1 positive, 2 negative.
fn clause(code: usize, vars: &[VarId]) -> Formula {
    let mut lits = Vec::new();
    let mut rest = code;
    for v in vars {
        match rest % 3 {
            1 => lits.push(Formula::Var(*v)),
            2 => lits.push(Formula::not(Formula::Var(*v))),
            _ => {}
        }
        rest /= 3;
    }
    Formula::or(lits)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of instances `generate_corpus` will yield.
pub fn corpus_size(params: &CorpusParams) -> Result<u64> {
    let vars = 2 * params.n as u64;
    Ok(match &params.family {
        MatrixFamily::Exhaustive2Var { pair: Some(_) } => 16,
        MatrixFamily::Exhaustive2Var { pair: None } => 16 * binomial(vars, 2),
        MatrixFamily::RandomAst { count, .. } => *count as u64,
        MatrixFamily::AllSmallCnf { max_clauses } => {
            let clauses = 3u64.checked_pow(vars as u32).unwrap_or(u64::MAX) - 1;
            (0..=*max_clauses as u64)
                .map(|k| binomial(clauses, k))
                .fold(0u64, u64::saturating_add)
        }
    })
}

pub fn generate_corpus(params: &CorpusParams) -> Result<Box<dyn Iterator<Item = CorpusInstance>>> {
    let n = params.n;
    if n == 0 {
        return Err(Error::InvalidCorpus("n must be at least 1".into()));
    }
    let size = corpus_size(params)?;
    if size > MAX_CORPUS_SIZE {
        return Err(Error::InvalidCorpus(format!(
            "corpus would have {size} instances (limit {MAX_CORPUS_SIZE})"
        )));
    }
    let vars: Vec<VarId> = (1..=2 * n as u32).map(VarId::of).collect();
    let wrap = move |(serial, matrix): (usize, Formula)| CorpusInstance {
        serial: serial as u64,
        formula: standard_instance(n, matrix).expect("corpus matrices only use prefix variables"),
    };
    let matrices: Box<dyn Iterator<Item = Formula>> = match params.family.clone() {
        MatrixFamily::Exhaustive2Var { pair } => {
            let pairs: Vec<(usize, usize)> = match pair {
                Some((a, b)) => {
                    if a == 0 || b == 0 || a > vars.len() || b > vars.len() || a == b {
                        return Err(Error::InvalidCorpus(format!(
                            "pair ({a}, {b}) is not two distinct positions in 1..={}",
                            vars.len()
                        )));
                    }
                    vec![(a, b)]
                }
                None => (1..=vars.len()).tuple_combinations().collect(),
            };
            Box::new(pairs.into_iter().flat_map(move |(a, b)| {
                let (va, vb) = (VarId::of(a as u32), VarId::of(b as u32));
                (0..16u8).map(move |f| two_var_function(f, va, vb))
            }))
        }
        MatrixFamily::RandomAst { count, max_depth } => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let vars = vars.clone();
            Box::new((0..count).map(move |_| random_formula(&mut rng, &vars, max_depth)))
        }
        MatrixFamily::AllSmallCnf { max_clauses } => {
            let clause_count = 3usize.pow(vars.len() as u32) - 1;
            let vars = vars.clone();
            Box::new((0..=max_clauses).flat_map(move |k| {
                let vars = vars.clone();
                (1..=clause_count)
                    .combinations(k)
                    .map(move |codes| Formula::and(codes.iter().map(|c| clause(*c, &vars)).collect()))
            }))
        }
    };
    Ok(Box::new(matrices.enumerate().map(wrap)))
}

/// Every closed prenex formula over `m ≤ max_vars` variables with each
/// quantifier string, carrying each two-variable function on each pair of
/// distinct variables (`m ≥ 2`), each unary function (`m = 1`) or each
/// constant (`m = 0`).
pub fn exhaustive_prenex_corpus(max_vars: usize) -> impl Iterator<Item = PrenexQbf> {
    (0..=max_vars).flat_map(|m| {
        let vars: Vec<VarId> = (1..=m as u32).map(VarId::of).collect();
        let matrices: Vec<Formula> = match m {
            0 => vec![Formula::Const(false), Formula::Const(true)],
            1 => (0..4u64)
                .map(|f| AnfPolynomial::from_truth_table(&TruthTable::from_index(vars.clone(), f)).to_formula())
                .collect(),
            _ => vars
                .iter()
                .tuple_combinations()
                .flat_map(|(a, b)| (0..16u8).map(move |f| two_var_function(f, *a, *b)))
                .collect(),
        };
        (0..1u32 << m).flat_map(move |quantifiers| {
            let prefix: Vec<(Quantifier, VarId)> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let q = if quantifiers >> i & 1 == 1 {
                        Quantifier::Exists
                    } else {
                        Quantifier::Forall
                    };
                    (q, *v)
                })
                .collect();
            matrices
                .clone()
                .into_iter()
                .map(move |matrix| PrenexQbf::new(prefix.clone(), matrix).expect("closed by construction"))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, family: MatrixFamily) -> CorpusParams {
        CorpusParams { seed: 0, n, family }
    }

    #[test]
    fn exhaustive_on_one_pair() {
        let p = params(2, MatrixFamily::Exhaustive2Var { pair: Some((1, 2)) });
        assert_eq!(generate_corpus(&p).unwrap().count(), 16);
        let p = params(2, MatrixFamily::Exhaustive2Var { pair: Some((1, 4)) });
        let all: Vec<_> = generate_corpus(&p).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0].formula.n(), 2);
    }

    #[test]
    fn exhaustive_all_pairs() {
        let p = params(2, MatrixFamily::Exhaustive2Var { pair: None });
        assert_eq!(generate_corpus(&p).unwrap().count(), 6 * 16);
        assert_eq!(corpus_size(&p).unwrap(), 96);
    }

    #[test]
    fn random_is_deterministic() {
        let p = CorpusParams {
            seed: 1,
            n: 2,
            family: MatrixFamily::RandomAst { count: 100, max_depth: 4 },
        };
        let a: Vec<_> = generate_corpus(&p).unwrap().collect();
        let b: Vec<_> = generate_corpus(&p).unwrap().collect();
        assert_eq!(a.len(), 100);
        assert_eq!(a, b);
        let other = CorpusParams { seed: 2, ..p };
        let c: Vec<_> = generate_corpus(&other).unwrap().collect();
        assert_ne!(a, c);
    }

    #[test]
    fn small_cnf_count() {
        // 3^4 - 1 = 80 clauses; C(80,0) + C(80,1) + C(80,2)
        let p = params(2, MatrixFamily::AllSmallCnf { max_clauses: 2 });
        assert_eq!(corpus_size(&p).unwrap(), 1 + 80 + 3160);
        assert_eq!(generate_corpus(&p).unwrap().count(), 3241);
    }

    #[test]
    fn oversized_and_invalid() {
        let p = params(3, MatrixFamily::AllSmallCnf { max_clauses: 3 });
        assert!(matches!(generate_corpus(&p), Err(Error::InvalidCorpus(_))));
        let p = params(2, MatrixFamily::Exhaustive2Var { pair: Some((1, 9)) });
        assert!(matches!(generate_corpus(&p), Err(Error::InvalidCorpus(_))));
        let p = params(0, MatrixFamily::Exhaustive2Var { pair: None });
        assert!(generate_corpus(&p).is_err());
    }

    #[test]
    fn two_var_function_tables() {
        let (a, b) = (VarId::of(1), VarId::of(2));
        for f in 0..16u8 {
            let t = TruthTable::from_formula(&two_var_function(f, a, b), &[a, b]).unwrap();
            assert_eq!(t.index(), Some(f as u64));
        }
    }

    #[test]
    fn prenex_corpus_size() {
        // 2 + 2·4 + 4·1·16 + 8·3·16 + 16·6·16
        assert_eq!(exhaustive_prenex_corpus(4).count(), 2 + 8 + 64 + 384 + 1536);
    }
}
