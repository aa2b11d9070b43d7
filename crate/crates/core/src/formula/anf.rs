//! Algebraic normal form: a boolean function as an XOR of AND-monomials.

use super::{Formula, TruthTable, VarId};

// Positions whose bit `i` is set, for i in 0..6.
const HIGH_HALF: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// In-place Möbius transform over the subset lattice of row indices. The
/// transform is an involution, so it maps tables to ANF coefficients and back.
fn mobius(words: &mut [u64], arity: usize) {
    for i in 0..arity.min(6) {
        let s = 1u32 << i;
        for w in words.iter_mut() {
            *w ^= (*w << s) & HIGH_HALF[i];
        }
    }
    for i in 6..arity {
        let stride = 1usize << (i - 6);
        for j in 0..words.len() {
            if j & stride != 0 {
                words[j] ^= words[j ^ stride];
            }
        }
    }
}

/// XOR-sum of monomials. A monomial is stored as a mask in the row encoding
/// of the originating table (bit `k - 1 - i` selects `var_order[i]`); mask 0
/// is the constant-1 monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnfPolynomial {
    var_order: Vec<VarId>,
    monomials: Vec<usize>,
}

impl AnfPolynomial {
    pub fn from_truth_table(t: &TruthTable) -> Self {
        let mut words = t.words().to_vec();
        mobius(&mut words, t.arity());
        let coeffs = TruthTable::from_words(t.var_order().to_vec(), words);
        let monomials = (0..coeffs.len()).filter(|m| coeffs.get(*m)).collect();
        AnfPolynomial {
            var_order: t.var_order().to_vec(),
            monomials,
        }
    }

    pub fn var_order(&self) -> &[VarId] {
        &self.var_order
    }

    /// Monomial masks in ascending order.
    pub fn monomial_masks(&self) -> &[usize] {
        &self.monomials
    }

    /// Monomials as variable lists, each in `var_order` order.
    pub fn monomials(&self) -> Vec<Vec<VarId>> {
        self.monomials.iter().map(|m| self.mask_vars(*m)).collect()
    }

    fn mask_vars(&self, mask: usize) -> Vec<VarId> {
        let k = self.var_order.len();
        self.var_order
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> (k - 1 - i) & 1 == 1)
            .map(|(_, v)| *v)
            .collect()
    }

    /// Monomial count; the size metric for Skolem functions.
    pub fn size(&self) -> usize {
        self.monomials.len()
    }

    pub fn eval_row(&self, row: usize) -> bool {
        self.monomials
            .iter()
            .fold(false, |acc, m| acc ^ (m & !row == 0))
    }

    pub fn to_truth_table(&self) -> TruthTable {
        let mut t = TruthTable::zeros(self.var_order.clone());
        for m in &self.monomials {
            t.set(*m, true);
        }
        let arity = t.arity();
        let mut words = t.words().to_vec();
        mobius(&mut words, arity);
        TruthTable::from_words(self.var_order.clone(), words)
    }

    /// Renders the polynomial as a formula: a left-nested XOR chain of
    /// monomials, `1` for the empty monomial and `0` for the zero polynomial.
    pub fn to_formula(&self) -> Formula {
        let mut terms = self.monomials.iter().map(|m| {
            let vars = self.mask_vars(*m);
            match vars.len() {
                0 => Formula::Const(true),
                1 => Formula::Var(vars[0]),
                _ => Formula::And(vars.into_iter().map(Formula::Var).collect()),
            }
        });
        match terms.next() {
            None => Formula::Const(false),
            Some(first) => terms.fold(first, Formula::xor),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId::of(i)
    }

    fn anf_of(bits: &str, order: Vec<VarId>) -> AnfPolynomial {
        AnfPolynomial::from_truth_table(&TruthTable::from_bit_str(order, bits).unwrap())
    }

    #[test]
    fn or_is_x_plus_y_plus_xy() {
        let p = anf_of("0111", vec![v(1), v(2)]);
        let mut monos = p.monomials();
        monos.sort();
        assert_eq!(monos, vec![vec![v(1)], vec![v(1), v(2)], vec![v(2)]]);
        assert_eq!(p.size(), 3);
    }

    #[test]
    fn xor_is_its_own_anf() {
        let p = anf_of("0110", vec![v(1), v(2)]);
        let mut monos = p.monomials();
        monos.sort();
        assert_eq!(monos, vec![vec![v(1)], vec![v(2)]]);
    }

    #[test]
    fn zero_and_negation() {
        assert_eq!(anf_of("0000", vec![v(1), v(2)]).size(), 0);
        let not_x = anf_of("10", vec![v(1)]);
        assert_eq!(not_x.size(), 2);
        assert_eq!(
            not_x.to_formula(),
            Formula::xor(Formula::Const(true), Formula::Var(v(1)))
        );
        assert_eq!(anf_of("0", vec![]).to_formula(), Formula::Const(false));
    }

    #[test]
    fn wide_round_trip() {
        // arity 8 exercises the cross-word strides
        let order: Vec<VarId> = (1..=8).map(v).collect();
        let t = TruthTable::from_fn(order, |r| (r * 37 + r / 3) % 5 < 2);
        let p = AnfPolynomial::from_truth_table(&t);
        assert_eq!(p.to_truth_table(), t);
        for r in 0..t.len() {
            assert_eq!(p.eval_row(r), t.get(r));
        }
    }

    #[test]
    fn parity_has_linear_anf() {
        let order: Vec<VarId> = (1..=7).map(v).collect();
        let t = TruthTable::from_fn(order, |r| r.count_ones() % 2 == 1);
        assert_eq!(AnfPolynomial::from_truth_table(&t).size(), 7);
    }
}
