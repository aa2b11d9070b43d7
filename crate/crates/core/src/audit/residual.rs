//! Two-variable residuals of a standard-form matrix.
//!
//! A residual picks one universal `x_i` and one existential `y_j` and fixes
//! every other prefix variable to a constant, leaving a function of two
//! variables. There are `n²` pairs and `2^(2n−2)` fixings per pair.

use serde::{Deserialize, Serialize};

use crate::formula::{Assignment, TruthTable};
use crate::normalize::StandardFormQbf;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualOptions {
    /// Only pairs where `x_i` precedes `y_j` in the prefix (`i ≤ j`).
    pub ordered_pairs_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualEnumeration {
    pub n: usize,
    /// 1-based `(i, j)` for the pair `(x_i, y_j)`.
    pub selected_pair: (usize, usize),
    pub fixing: Assignment,
    /// Arity 2, ordered `(x_i, y_j)`.
    pub residual: TruthTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub n: usize,
    pub total: u64,
    pub expected: u64,
    /// The count `n²` that leaves out the fixings.
    pub claimed: u64,
    /// Residuals equal to XOR or XNOR, where the swap changes the value.
    pub swap_sensitive: u64,
}

/// `n² · 2^(2n−2)`.
pub fn expected_residual_count(n: usize) -> u64 {
    (n as u64).pow(2) << (2 * n - 2)
}

pub(crate) fn expected_ordered_count(n: usize) -> u64 {
    (n * (n + 1) / 2) as u64 * (1u64 << (2 * n - 2))
}

/// `n²`.
pub fn claimed_residual_count(n: usize) -> u64 {
    (n as u64).pow(2)
}

pub fn enumerate_residuals(
    s: &StandardFormQbf,
    options: ResidualOptions,
) -> impl Iterator<Item = ResidualEnumeration> + '_ {
    let n = s.n();
    let slots = s.qbf().prefix_vars();
    let compiled = s
        .qbf()
        .matrix()
        .compile(&slots)
        .expect("standard-form matrices are closed over at most 64 variables");
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .filter(move |(i, j)| !options.ordered_pairs_only || i <= j)
        .collect();
    pairs.into_iter().flat_map(move |(i, j)| {
        // slot positions: x_i at 2i−2, y_j at 2j−1
        let (px, py) = (2 * i - 2, 2 * j - 1);
        let others: Vec<usize> = (0..2 * n).filter(|p| *p != px && *p != py).collect();
        let slots = slots.clone();
        let compiled = compiled.clone();
        (0u64..1 << others.len()).map(move |fix| {
            let mut base = 0u64;
            let mut fixing = Assignment::new();
            for (k, p) in others.iter().enumerate() {
                // first other variable is the most significant bit of `fix`
                let bit = fix >> (others.len() - 1 - k) & 1 == 1;
                fixing.set(slots[*p], bit);
                if bit {
                    base |= 1 << p;
                }
            }
            let residual = TruthTable::from_fn(vec![slots[px], slots[py]], |row| {
                let mut mask = base;
                if row & 2 != 0 {
                    mask |= 1 << px;
                }
                if row & 1 != 0 {
                    mask |= 1 << py;
                }
                compiled.eval(mask)
            });
            ResidualEnumeration {
                n,
                selected_pair: (i, j),
                fixing,
                residual,
            }
        })
    })
}

pub fn summarize_residuals(s: &StandardFormQbf, options: ResidualOptions) -> ResidualSummary {
    let n = s.n();
    let (total, swap_sensitive) = enumerate_residuals(s, options).fold((0u64, 0u64), |(t, x), r| {
        let sensitive = matches!(r.residual.index(), Some(6) | Some(9));
        (t + 1, x + sensitive as u64)
    });
    ResidualSummary {
        n,
        total,
        expected: expected_residual_count(n),
        claimed: claimed_residual_count(n),
        swap_sensitive,
    }
}
