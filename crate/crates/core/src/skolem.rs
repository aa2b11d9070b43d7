//! Skolem functions as truth tables, certificate checking and the exhaustive
//! (optionally size-bounded) witness search.
//!
//! A certificate assigns every existential variable a table over the
//! universals that precede it. The search enumerates certificates as one
//! integer per existential (bit `r` of the integer is row `r` of the table),
//! ordered lexicographically with the outermost existential most significant,
//! and returns the first one that verifies.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{AnfPolynomial, CompiledFormula, Formula, TruthTable, VarId};
use crate::qbf::{is_tautology, PrenexQbf, Quantifier};

/// Default ceiling on the number of certificates the search will enumerate.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemFunction {
    target: VarId,
    table: TruthTable,
}

impl SkolemFunction {
    /// The table's variable order is the dependency list.
    pub fn new(target: VarId, table: TruthTable) -> Self {
        SkolemFunction { target, table }
    }

    pub fn target(&self) -> VarId {
        self.target
    }

    pub fn deps(&self) -> &[VarId] {
        self.table.var_order()
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }

    pub fn anf(&self) -> AnfPolynomial {
        AnfPolynomial::from_truth_table(&self.table)
    }

    pub fn anf_size(&self) -> usize {
        self.anf().size()
    }

    /// Length of the truth-table representation, 2^|deps|.
    pub fn table_bits(&self) -> usize {
        self.table.len()
    }
}

/// One Skolem function per existential variable of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SkolemCertificate {
    functions: BTreeMap<VarId, SkolemFunction>,
}

impl SkolemCertificate {
    pub fn new(functions: impl IntoIterator<Item = SkolemFunction>) -> Self {
        SkolemCertificate {
            functions: functions.into_iter().map(|f| (f.target, f)).collect(),
        }
    }

    pub fn get(&self, v: VarId) -> Option<&SkolemFunction> {
        self.functions.get(&v)
    }

    pub fn functions(&self) -> impl Iterator<Item = &SkolemFunction> {
        self.functions.values()
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Checks that the certificate covers exactly the existentials of `q`
    /// and that each function depends on exactly the preceding universals.
    pub fn check_shape(&self, q: &PrenexQbf) -> Result<()> {
        let deps = skolem_dependencies(q);
        if deps.len() != self.functions.len() {
            return Err(Error::CertificateMismatch(format!(
                "formula has {} existential variables, certificate has {} functions",
                deps.len(),
                self.functions.len()
            )));
        }
        for (target, expected) in &deps {
            let f = self.functions.get(target).ok_or_else(|| {
                Error::CertificateMismatch(format!("no function for existential {target}"))
            })?;
            if f.deps() != expected.as_slice() {
                return Err(Error::CertificateMismatch(format!(
                    "function for {target} depends on {:?}, expected {:?}",
                    f.deps(),
                    expected
                )));
            }
        }
        Ok(())
    }

    pub fn to_entries(&self) -> Vec<CertificateEntry> {
        self.functions
            .values()
            .map(|f| CertificateEntry {
                var: f.target.get(),
                deps: f.deps().iter().map(|v| v.get()).collect(),
                table_bits: f.table.to_bit_string(),
            })
            .collect()
    }

    pub fn from_entries(entries: &[CertificateEntry]) -> Result<Self> {
        let mut functions = Vec::with_capacity(entries.len());
        for e in entries {
            let deps = e
                .deps
                .iter()
                .map(|d| VarId::new(*d))
                .collect::<Result<Vec<_>>>()?;
            let table = TruthTable::from_bit_str(deps, &e.table_bits)?;
            functions.push(SkolemFunction::new(VarId::new(e.var)?, table));
        }
        Ok(Self::new(functions))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_entries()).expect("certificate entries serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<CertificateEntry> = serde_json::from_str(text)?;
        Self::from_entries(&entries)
    }
}

/// Wire form of one Skolem function: `{var, deps, table_bits}` with rows
/// written row 0 first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub var: u32,
    pub deps: Vec<u32>,
    pub table_bits: String,
}

/// For each existential, in prefix order, the universals that precede it.
pub fn skolem_dependencies(q: &PrenexQbf) -> Vec<(VarId, Vec<VarId>)> {
    let mut universals = Vec::new();
    let mut out = Vec::new();
    for (quantifier, v) in q.prefix() {
        match quantifier {
            Quantifier::Forall => universals.push(*v),
            Quantifier::Exists => out.push((*v, universals.clone())),
        }
    }
    out
}

/// Replaces every existential occurrence by its Skolem function rendered as
/// an ANF expression. The result mentions only universal variables.
pub fn skolem_substitute(q: &PrenexQbf, c: &SkolemCertificate) -> Result<Formula> {
    c.check_shape(q)?;
    let rendered: BTreeMap<VarId, Formula> = c
        .functions
        .values()
        .map(|f| (f.target, f.anf().to_formula()))
        .collect();
    Ok(q.matrix().substitute(&|v| rendered.get(&v).cloned()))
}

/// Whether the substituted matrix is a tautology over the universals.
pub fn verify_certificate(q: &PrenexQbf, c: &SkolemCertificate) -> Result<bool> {
    let substituted = skolem_substitute(q, c)?;
    is_tautology(&substituted, &q.universals())
}

/// Evaluates candidate certificates given as table indices directly against
/// the compiled matrix, without building substituted formulas.
struct CandidateChecker {
    matrix: CompiledFormula,
    universal_slots: Vec<u32>,
    existentials: Vec<ExistentialSlot>,
}

struct ExistentialSlot {
    slot: u32,
    dep_slots: Vec<u32>,
}

impl CandidateChecker {
    fn new(q: &PrenexQbf) -> Result<Self> {
        let slots = q.prefix_vars();
        let matrix = q.matrix().compile(&slots)?;
        let position = |v: &VarId| slots.iter().position(|w| w == v).unwrap() as u32;
        let universal_slots = q.universals().iter().map(position).collect();
        let existentials = skolem_dependencies(q)
            .iter()
            .map(|(target, deps)| ExistentialSlot {
                slot: position(target),
                dep_slots: deps.iter().map(position).collect(),
            })
            .collect();
        Ok(CandidateChecker {
            matrix,
            universal_slots,
            existentials,
        })
    }

    fn holds(&self, tables: &[u64]) -> bool {
        (0..1u64 << self.universal_slots.len()).all(|u| {
            let mut mask = 0u64;
            for (i, slot) in self.universal_slots.iter().enumerate() {
                mask |= ((u >> i) & 1) << slot;
            }
            for (e, table) in self.existentials.iter().zip(tables) {
                let row = e
                    .dep_slots
                    .iter()
                    .fold(0u64, |acc, s| (acc << 1) | ((mask >> s) & 1));
                mask |= ((table >> row) & 1) << e.slot;
            }
            self.matrix.eval(mask)
        })
    }
}

fn check_budget(q: &PrenexQbf, budget: u64) -> Result<()> {
    let log2: u64 = skolem_dependencies(q)
        .iter()
        .map(|(_, deps)| 1u64.checked_shl(deps.len() as u32).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    if log2 >= 64 || (1u64 << log2) > budget {
        return Err(Error::BudgetExceeded {
            log2_candidates: log2,
            budget,
        });
    }
    Ok(())
}

/// Lexicographically first product element (one index per list) accepted by
/// the checker.
fn search(q: &PrenexQbf, choices: &[Vec<u64>]) -> Result<Option<SkolemCertificate>> {
    let checker = CandidateChecker::new(q)?;
    let total: u64 = choices.iter().map(|c| c.len() as u64).product();
    let decode = |mut index: u64| -> Vec<u64> {
        let mut tables = vec![0u64; choices.len()];
        for (slot, list) in tables.iter_mut().zip(choices).rev() {
            let radix = list.len() as u64;
            *slot = list[(index % radix) as usize];
            index /= radix;
        }
        tables
    };
    let found = (0..total)
        .into_par_iter()
        .find_first(|index| checker.holds(&decode(*index)));
    Ok(found.map(|index| {
        let tables = decode(index);
        SkolemCertificate::new(
            skolem_dependencies(q)
                .into_iter()
                .zip(tables)
                .map(|((target, deps), t)| SkolemFunction::new(target, TruthTable::from_index(deps, t))),
        )
    }))
}

pub fn exists_skolem_witness(q: &PrenexQbf) -> Result<Option<SkolemCertificate>> {
    exists_skolem_witness_with_budget(q, DEFAULT_SEARCH_BUDGET)
}

/// Exhaustive certificate search. `Some` carries the first verifying
/// certificate in enumeration order; the formula is true iff one exists.
pub fn exists_skolem_witness_with_budget(
    q: &PrenexQbf,
    budget: u64,
) -> Result<Option<SkolemCertificate>> {
    check_budget(q, budget)?;
    let choices: Vec<Vec<u64>> = skolem_dependencies(q)
        .iter()
        .map(|(_, deps)| (0..1u64 << (1u64 << deps.len())).collect())
        .collect();
    search(q, &choices)
}

/// Largest ANF monomial count any Skolem function of `q` can have: the
/// maximum of 2^|deps| over existentials (0 without existentials).
pub fn max_skolem_anf_size(q: &PrenexQbf) -> usize {
    skolem_dependencies(q)
        .iter()
        .map(|(_, deps)| 1usize << deps.len())
        .max()
        .unwrap_or(0)
}

pub fn bounded_skolem_decision(q: &PrenexQbf, size_bound: usize) -> Result<bool> {
    Ok(bounded_skolem_witness(q, size_bound, DEFAULT_SEARCH_BUDGET)?.is_some())
}

/// The witness search restricted to certificates whose functions all have
/// ANF size at most `size_bound`.
pub fn bounded_skolem_witness(
    q: &PrenexQbf,
    size_bound: usize,
    budget: u64,
) -> Result<Option<SkolemCertificate>> {
    check_budget(q, budget)?;
    let choices: Vec<Vec<u64>> = skolem_dependencies(q)
        .iter()
        .map(|(_, deps)| {
            (0..1u64 << (1u64 << deps.len()))
                .filter(|t| {
                    let table = TruthTable::from_index(deps.clone(), *t);
                    AnfPolynomial::from_truth_table(&table).size() <= size_bound
                })
                .collect()
        })
        .collect();
    search(q, &choices)
}

/// `(∀x1)…(∀xk)(∃y)[y <-> x1 ^ … ^ xk]`, with `x_i = i` and `y = k + 1`.
pub fn parity_family(k: usize) -> PrenexQbf {
    let xs: Vec<VarId> = (1..=k as u32).map(VarId::of).collect();
    let y = VarId::of(k as u32 + 1);
    let parity = xs
        .iter()
        .map(|v| Formula::Var(*v))
        .reduce(Formula::xor)
        .unwrap_or(Formula::Const(false));
    let mut prefix: Vec<(Quantifier, VarId)> = xs.iter().map(|v| (Quantifier::Forall, *v)).collect();
    prefix.push((Quantifier::Exists, y));
    let names = xs
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, format!("x{}", i + 1)))
        .chain(std::iter::once((y, "y".to_string())));
    PrenexQbf::new(prefix, Formula::iff(Formula::Var(y), parity))
        .and_then(|q| q.with_names(names))
        .expect("parity family is closed")
}

/// For `(∀X)(∃y)[φ]` with a single innermost existential, the function
/// `y(X) = φ(X, y := 1)`. It verifies whenever any Skolem function for `y` does.
pub fn innermost_witness(q: &PrenexQbf) -> Result<Option<SkolemFunction>> {
    let Some(((Quantifier::Exists, y), rest)) = q.prefix().split_last() else {
        return Ok(None);
    };
    if rest.iter().any(|(k, _)| *k == Quantifier::Exists) {
        return Ok(None);
    }
    let deps: Vec<VarId> = rest.iter().map(|(_, v)| *v).collect();
    let with_one = q
        .matrix()
        .substitute(&|v| (v == *y).then_some(Formula::Const(true)));
    let table = TruthTable::from_formula(&with_one, &deps)?;
    Ok(Some(SkolemFunction::new(*y, table)))
}
