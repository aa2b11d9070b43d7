use std::fmt;

use super::{Assignment, Formula, VarId};
use crate::error::{Error, Result};

/// Largest arity materialized by default (2^24 bits = 2 MiB).
pub const DEFAULT_MAX_ARITY: usize = 24;

/// A k-ary boolean function stored as 2^k bits.
///
/// Row `r` holds the value under the assignment that gives `var_order[i]`
/// bit `k - 1 - i` of `r`; i.e. `var_order[0]` is the most significant bit
/// and rows follow lexicographic assignment order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    var_order: Vec<VarId>,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(var_order: Vec<VarId>) -> Self {
        let rows = 1usize << var_order.len();
        TruthTable {
            var_order,
            words: vec![0; rows.div_ceil(64)],
        }
    }

    pub fn from_fn(var_order: Vec<VarId>, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zeros(var_order);
        for row in 0..t.len() {
            if f(row) {
                t.set(row, true);
            }
        }
        t
    }

    pub fn from_formula(f: &Formula, var_order: &[VarId]) -> Result<Self> {
        Self::from_formula_with_cap(f, var_order, DEFAULT_MAX_ARITY)
    }

    pub fn from_formula_with_cap(f: &Formula, var_order: &[VarId], cap: usize) -> Result<Self> {
        let k = var_order.len();
        if k > cap {
            return Err(Error::ArityOverflow { arity: k, cap });
        }
        // bit p of the row index belongs to var_order[k - 1 - p]
        let slots: Vec<VarId> = var_order.iter().rev().copied().collect();
        let compiled = f.compile(&slots)?;
        Ok(Self::from_fn(var_order.to_vec(), |row| compiled.eval(row as u64)))
    }

    /// Builds a table from its rows written as `'0'`/`'1'`, row 0 first.
    pub fn from_bit_str(var_order: Vec<VarId>, bits: &str) -> Result<Self> {
        let rows = 1usize << var_order.len();
        if bits.len() != rows {
            return Err(Error::CertificateMismatch(format!(
                "expected {rows} table bits, got {}",
                bits.len()
            )));
        }
        let mut t = Self::zeros(var_order);
        for (row, c) in bits.chars().enumerate() {
            match c {
                '0' => {}
                '1' => t.set(row, true),
                other => {
                    return Err(Error::CertificateMismatch(format!(
                        "invalid table bit {other:?}"
                    )))
                }
            }
        }
        Ok(t)
    }

    /// Builds a table from an integer whose bit `r` is row `r`. Arity ≤ 6.
    pub fn from_index(var_order: Vec<VarId>, index: u64) -> Self {
        assert!(var_order.len() <= 6, "from_index supports arity ≤ 6");
        let rows = 1usize << var_order.len();
        let mask = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
        TruthTable {
            var_order,
            words: vec![index & mask],
        }
    }

    /// Inverse of [`TruthTable::from_index`]; `None` above arity 6.
    pub fn index(&self) -> Option<u64> {
        (self.arity() <= 6).then(|| self.words[0])
    }

    pub fn arity(&self) -> usize {
        self.var_order.len()
    }

    pub fn var_order(&self) -> &[VarId] {
        &self.var_order
    }

    /// Number of rows, 2^arity.
    pub fn len(&self) -> usize {
        1usize << self.arity()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, row: usize) -> bool {
        (self.words[row / 64] >> (row % 64)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, value: bool) {
        let bit = 1u64 << (row % 64);
        if value {
            self.words[row / 64] |= bit;
        } else {
            self.words[row / 64] &= !bit;
        }
    }

    pub fn value_at(&self, a: &Assignment) -> Result<bool> {
        Ok(self.get(a.row_index(&self.var_order)?))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_ones() == self.len()
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len())
            .map(|r| if self.get(r) { '1' } else { '0' })
            .collect()
    }

    pub(super) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(super) fn from_words(var_order: Vec<VarId>, words: Vec<u64>) -> Self {
        TruthTable { var_order, words }
    }

    /// Rows with `v = 0`, as a table over the remaining variables.
    pub fn restrict_zero(&self, v: VarId) -> Option<TruthTable> {
        let pos = self.var_order.iter().position(|w| *w == v)?;
        let k = self.arity();
        let bit = k - 1 - pos;
        let mut order = self.var_order.clone();
        order.remove(pos);
        Some(Self::from_fn(order, |row| {
            // re-insert a 0 at `bit`
            let low = row & ((1 << bit) - 1);
            let high = (row >> bit) << (bit + 1);
            self.get(high | low)
        }))
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({:?}, {})", self.var_order, self.to_bit_string())
    }
}
