//! Variables, quantifier-free formulas and assignments.
//!
//! Formulas are plain immutable trees. For the exhaustive loops elsewhere in
//! the crate a formula is first [compiled](Formula::compile) against a slot
//! layout so that evaluation reads variable values out of a `u64` bit mask
//! instead of a map.

mod anf;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use anf::AnfPolynomial;
pub use table::{TruthTable, DEFAULT_MAX_ARITY};

/// A 1-based variable identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct VarId(u32);

impl VarId {
    pub fn new(id: u32) -> Result<Self> {
        if id == 0 {
            Err(Error::ZeroVarId)
        } else {
            Ok(VarId(id))
        }
    }

    /// Like [`VarId::new`] but panics on 0. Meant for literals in code.
    pub fn of(id: u32) -> Self {
        Self::new(id).expect("variable ids start at 1")
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for VarId {
    type Error = Error;

    fn try_from(id: u32) -> Result<Self> {
        VarId::new(id)
    }
}

impl From<VarId> for u32 {
    fn from(v: VarId) -> u32 {
        v.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Quantifier-free boolean formula.
///
/// `And`/`Or` are n-ary and should carry at least one child; the smart
/// constructors [`Formula::and`] and [`Formula::or`] take care of that.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(VarId),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Xor(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(id: VarId) -> Self {
        Formula::Var(id)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; an empty list is `1` and a single child is returned as is.
    pub fn and(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::Const(true),
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// Disjunction; an empty list is `0` and a single child is returned as is.
    pub fn or(mut children: Vec<Formula>) -> Self {
        match children.len() {
            0 => Formula::Const(false),
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn xor(a: Formula, b: Formula) -> Self {
        Formula::Xor(Box::new(a), Box::new(b))
    }

    /// `a <-> b`, encoded as `!(a ^ b)`.
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::xor(a, b))
    }

    /// Every variable occurring in the formula.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
            Formula::Xor(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Var(w) => *w == v,
            Formula::Not(f) => f.contains_var(v),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| c.contains_var(v)),
            Formula::Xor(a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    /// Number of AST nodes.
    pub fn node_count(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(f) => 1 + f.node_count(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::node_count).sum::<usize>(),
            Formula::Xor(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool> {
        self.eval_with(&|v| assignment.get(v))
    }

    /// Evaluates with an arbitrary variable lookup. A `None` from the lookup
    /// for a variable that is actually reached is a missing-variable error.
    pub fn eval_with(&self, lookup: &dyn Fn(VarId) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => lookup(*v).ok_or(Error::MissingVariable(*v))?,
            Formula::Not(f) => !f.eval_with(lookup)?,
            Formula::And(cs) => {
                // Check totality before short-circuiting so that the error
                // does not depend on the values.
                let mut acc = true;
                for c in cs {
                    acc &= c.eval_with(lookup)?;
                }
                acc
            }
            Formula::Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.eval_with(lookup)?;
                }
                acc
            }
            Formula::Xor(a, b) => a.eval_with(lookup)? ^ b.eval_with(lookup)?,
        })
    }

    /// Replaces variables for which `f` returns a formula; other nodes are kept.
    pub fn substitute(&self, f: &dyn Fn(VarId) -> Option<Formula>) -> Formula {
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Var(v) => f(*v).unwrap_or(Formula::Var(*v)),
            Formula::Not(g) => Formula::Not(Box::new(g.substitute(f))),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.substitute(f)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.substitute(f)).collect()),
            Formula::Xor(a, b) => Formula::Xor(Box::new(a.substitute(f)), Box::new(b.substitute(f))),
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &BTreeMap<VarId, VarId>) -> Formula {
        self.substitute(&|v| map.get(&v).map(|w| Formula::Var(*w)))
    }

    /// Compiles the formula against a slot layout: variable `slots[i]` is read
    /// from bit `i` of the mask passed to [`CompiledFormula::eval`].
    pub fn compile(&self, slots: &[VarId]) -> Result<CompiledFormula> {
        if slots.len() > 64 {
            return Err(Error::ArityOverflow {
                arity: slots.len(),
                cap: 64,
            });
        }
        let index: BTreeMap<VarId, u32> = slots
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as u32))
            .collect();
        Ok(CompiledFormula {
            root: compile_node(self, &index)?,
        })
    }
}

fn compile_node(f: &Formula, index: &BTreeMap<VarId, u32>) -> Result<Node> {
    Ok(match f {
        Formula::Const(b) => Node::Const(*b),
        Formula::Var(v) => Node::Slot(*index.get(v).ok_or(Error::MissingVariable(*v))?),
        Formula::Not(g) => Node::Not(Box::new(compile_node(g, index)?)),
        Formula::And(cs) => Node::And(
            cs.iter()
                .map(|c| compile_node(c, index))
                .collect::<Result<_>>()?,
        ),
        Formula::Or(cs) => Node::Or(
            cs.iter()
                .map(|c| compile_node(c, index))
                .collect::<Result<_>>()?,
        ),
        Formula::Xor(a, b) => Node::Xor(
            Box::new(compile_node(a, index)?),
            Box::new(compile_node(b, index)?),
        ),
    })
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Slot(u32),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Xor(Box<Node>, Box<Node>),
}

impl Node {
    fn eval(&self, mask: u64) -> bool {
        match self {
            Node::Const(b) => *b,
            Node::Slot(i) => (mask >> i) & 1 == 1,
            Node::Not(f) => !f.eval(mask),
            Node::And(cs) => cs.iter().all(|c| c.eval(mask)),
            Node::Or(cs) => cs.iter().any(|c| c.eval(mask)),
            Node::Xor(a, b) => a.eval(mask) ^ b.eval(mask),
        }
    }
}

/// A formula whose variables have been resolved to bit positions.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    root: Node,
}

impl CompiledFormula {
    pub fn eval(&self, mask: u64) -> bool {
        self.root.eval(mask)
    }
}

/// Total map from a set of variables to bits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment(BTreeMap<VarId, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: VarId) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn set(&mut self, v: VarId, value: bool) {
        self.0.insert(v, value);
    }

    pub fn with(mut self, v: VarId, value: bool) -> Self {
        self.set(v, value);
        self
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, bool)> + '_ {
        self.0.iter().map(|(v, b)| (*v, *b))
    }

    /// Decodes a row index under the table convention: `order[0]` is the most
    /// significant bit.
    pub fn from_row(order: &[VarId], row: usize) -> Self {
        let k = order.len();
        order
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, (row >> (k - 1 - i)) & 1 == 1))
            .collect()
    }

    /// Inverse of [`Assignment::from_row`].
    pub fn row_index(&self, order: &[VarId]) -> Result<usize> {
        order.iter().try_fold(0usize, |acc, v| {
            let b = self.get(*v).ok_or(Error::MissingVariable(*v))?;
            Ok((acc << 1) | b as usize)
        })
    }
}

impl FromIterator<(VarId, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (VarId, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

pub fn eval_formula(f: &Formula, a: &Assignment) -> Result<bool> {
    f.eval(a)
}

pub fn formula_to_truth_table(f: &Formula, var_order: &[VarId]) -> Result<TruthTable> {
    TruthTable::from_formula(f, var_order)
}

pub fn truth_table_to_anf(t: &TruthTable) -> AnfPolynomial {
    AnfPolynomial::from_truth_table(t)
}

pub fn anf_size(p: &AnfPolynomial) -> usize {
    p.size()
}
