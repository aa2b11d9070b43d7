//! Prenex QBFs, the naive recursive decision procedure and prefix classification.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, VarId, DEFAULT_MAX_ARITY};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn flip(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Exists => "exists",
            Quantifier::Forall => "forall",
        }
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "∃",
            Quantifier::Forall => "∀",
        })
    }
}

/// A closed prenex formula `(Q1 v1)...(Qm vm)[matrix]`.
///
/// Prefix variables are distinct and every matrix variable is quantified.
/// Quantified variables that do not occur in the matrix (dummies) are fine.
/// Variables may carry display names; unnamed variables print as `x<id>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrenexQbf {
    prefix: Vec<(Quantifier, VarId)>,
    matrix: Formula,
    names: BTreeMap<VarId, String>,
}

impl PrenexQbf {
    pub fn new(prefix: Vec<(Quantifier, VarId)>, matrix: Formula) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (_, v) in &prefix {
            if !seen.insert(*v) {
                return Err(Error::DuplicateQuantification(*v));
            }
        }
        if let Some(free) = matrix.vars().into_iter().find(|v| !seen.contains(v)) {
            return Err(Error::OpenFormula(free));
        }
        Ok(PrenexQbf {
            prefix,
            matrix,
            names: BTreeMap::new(),
        })
    }

    /// Attaches display names. Names equal to a variable's default are dropped,
    /// and two prefix variables may not end up with the same display name.
    pub fn with_names(mut self, names: impl IntoIterator<Item = (VarId, String)>) -> Result<Self> {
        for (v, name) in names {
            if name == default_name(v) {
                self.names.remove(&v);
            } else {
                self.names.insert(v, name);
            }
        }
        let mut seen = BTreeSet::new();
        for (_, v) in &self.prefix {
            let name = self.name(*v).into_owned();
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName(name));
            }
        }
        Ok(self)
    }

    pub fn prefix(&self) -> &[(Quantifier, VarId)] {
        &self.prefix
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn names(&self) -> &BTreeMap<VarId, String> {
        &self.names
    }

    pub fn name(&self, v: VarId) -> Cow<'_, str> {
        match self.names.get(&v) {
            Some(n) => Cow::Borrowed(n.as_str()),
            None => Cow::Owned(default_name(v)),
        }
    }

    pub fn prefix_vars(&self) -> Vec<VarId> {
        self.prefix.iter().map(|(_, v)| *v).collect()
    }

    pub fn quantifier_of(&self, v: VarId) -> Option<Quantifier> {
        self.prefix.iter().find(|(_, w)| *w == v).map(|(q, _)| *q)
    }

    pub fn universals(&self) -> Vec<VarId> {
        self.vars_with(Quantifier::Forall)
    }

    pub fn existentials(&self) -> Vec<VarId> {
        self.vars_with(Quantifier::Exists)
    }

    fn vars_with(&self, q: Quantifier) -> Vec<VarId> {
        self.prefix
            .iter()
            .filter(|(p, _)| *p == q)
            .map(|(_, v)| *v)
            .collect()
    }

    /// Largest variable id in the prefix, 0 for a ground formula.
    pub fn max_var(&self) -> u32 {
        self.prefix.iter().map(|(_, v)| v.get()).max().unwrap_or(0)
    }

    /// Formula size `|Φ|`: matrix AST nodes plus prefix length.
    pub fn size(&self) -> usize {
        self.matrix.node_count() + self.prefix.len()
    }

    /// Renumbers variables to 1..=m in prefix order, keeping display names.
    pub fn canonicalize(&self) -> PrenexQbf {
        let map: BTreeMap<VarId, VarId> = self
            .prefix
            .iter()
            .enumerate()
            .map(|(i, (_, v))| (*v, VarId::of(i as u32 + 1)))
            .collect();
        let names = self
            .prefix
            .iter()
            .map(|(_, v)| (map[v], self.name(*v).into_owned()));
        PrenexQbf {
            prefix: self.prefix.iter().map(|(q, v)| (*q, map[v])).collect(),
            matrix: self.matrix.rename(&map),
            names: BTreeMap::new(),
        }
        .with_names(names)
        .expect("names were unique before renumbering")
    }
}

pub(crate) fn default_name(v: VarId) -> String {
    format!("x{}", v.get())
}

impl fmt::Display for PrenexQbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::print_qbf(self))
    }
}

/// Replaces the first prefix variable `v` by the constant `b`.
pub fn substitute(q: &PrenexQbf, v: VarId, b: bool) -> Result<PrenexQbf> {
    match q.prefix.first() {
        Some((_, first)) if *first == v => {}
        _ => return Err(Error::NotFirstInPrefix(v)),
    }
    let mut names = q.names.clone();
    names.remove(&v);
    Ok(PrenexQbf {
        prefix: q.prefix[1..].to_vec(),
        matrix: q
            .matrix
            .substitute(&|w| (w == v).then_some(Formula::Const(b))),
        names,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Stop an ∃ node at the first true branch and a ∀ node at the first
    /// false one.
    pub short_circuit: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            short_circuit: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOutcome {
    pub value: bool,
    /// Nodes of the quantifier tree visited, leaves included. At most
    /// 2^(m+1) - 1 for a prefix of length m.
    pub visited_nodes: u64,
}

pub fn evaluate_qbf(q: &PrenexQbf) -> Result<bool> {
    Ok(evaluate_qbf_with(q, EvalOptions::default())?.value)
}

/// Decides `q` by expanding the first quantifier into its two branches
/// recursively; the empty prefix evaluates the ground matrix.
pub fn evaluate_qbf_with(q: &PrenexQbf, options: EvalOptions) -> Result<EvalOutcome> {
    let slots = q.prefix_vars();
    let matrix = q.matrix.compile(&slots)?;
    let quantifiers: Vec<Quantifier> = q.prefix.iter().map(|(k, _)| *k).collect();
    let mut visited = 0u64;
    let value = expand(&quantifiers, &matrix, options.short_circuit, 0, 0, &mut visited);
    Ok(EvalOutcome {
        value,
        visited_nodes: visited,
    })
}

fn expand(
    quantifiers: &[Quantifier],
    matrix: &crate::formula::CompiledFormula,
    short_circuit: bool,
    depth: usize,
    mask: u64,
    visited: &mut u64,
) -> bool {
    *visited += 1;
    let Some(q) = quantifiers.get(depth) else {
        return matrix.eval(mask);
    };
    let low = expand(quantifiers, matrix, short_circuit, depth + 1, mask, visited);
    let decided = match q {
        Quantifier::Exists => low,
        Quantifier::Forall => !low,
    };
    if short_circuit && decided {
        return low;
    }
    let high = expand(
        quantifiers,
        matrix,
        short_circuit,
        depth + 1,
        mask | (1 << depth),
        visited,
    );
    match q {
        Quantifier::Exists => low || high,
        Quantifier::Forall => low && high,
    }
}

/// 1 iff `f` holds under all 2^|vars| assignments.
pub fn is_tautology(f: &Formula, vars: &[VarId]) -> Result<bool> {
    if vars.len() > DEFAULT_MAX_ARITY {
        return Err(Error::ArityOverflow {
            arity: vars.len(),
            cap: DEFAULT_MAX_ARITY,
        });
    }
    let compiled = f.compile(vars)?;
    Ok((0..1u64 << vars.len()).all(|mask| compiled.eval(mask)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Side {
    Sigma,
    Pi,
}

/// Alternation class of a prefix: `level` maximal same-quantifier blocks,
/// `side` set by the first block. The empty prefix is reported as level 0 on
/// the Σ side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrefixClass {
    pub level: usize,
    pub side: Side,
}

impl PrefixClass {
    pub fn pi(level: usize) -> Self {
        PrefixClass {
            level,
            side: Side::Pi,
        }
    }

    pub fn sigma(level: usize) -> Self {
        PrefixClass {
            level,
            side: Side::Sigma,
        }
    }
}

impl fmt::Display for PrefixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Sigma => "SIGMA",
            Side::Pi => "PI",
        };
        write!(f, "{side} {}", self.level)
    }
}

pub fn classify_prefix(q: &PrenexQbf) -> PrefixClass {
    classify_quantifiers(q.prefix.iter().map(|(k, _)| *k))
}

pub fn classify_quantifiers(quantifiers: impl IntoIterator<Item = Quantifier>) -> PrefixClass {
    let mut iter = quantifiers.into_iter();
    let Some(first) = iter.next() else {
        return PrefixClass::sigma(0);
    };
    let mut level = 1;
    let mut current = first;
    for q in iter {
        if q != current {
            level += 1;
            current = q;
        }
    }
    PrefixClass {
        level,
        side: match first {
            Quantifier::Exists => Side::Sigma,
            Quantifier::Forall => Side::Pi,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quantifier::{Exists as E, Forall as A};

    fn v(i: u32) -> VarId {
        VarId::of(i)
    }

    fn x(i: u32) -> Formula {
        Formula::Var(v(i))
    }

    fn qbf(prefix: &[(Quantifier, u32)], matrix: Formula) -> PrenexQbf {
        PrenexQbf::new(prefix.iter().map(|(q, i)| (*q, v(*i))).collect(), matrix).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let xor = Formula::xor(x(1), x(2));
        assert!(evaluate_qbf(&qbf(&[(A, 1), (E, 2)], xor.clone())).unwrap());
        assert!(!evaluate_qbf(&qbf(&[(E, 2), (A, 1)], xor)).unwrap());
        let paper = qbf(&[(E, 1), (E, 2), (A, 3)], Formula::Or(vec![x(1), x(2), x(3)]));
        assert!(evaluate_qbf(&paper).unwrap());
    }

    #[test]
    fn open_and_duplicate_rejected() {
        assert_eq!(
            PrenexQbf::new(vec![(A, v(1))], Formula::Or(vec![x(1), x(2)])),
            Err(Error::OpenFormula(v(2)))
        );
        assert_eq!(
            PrenexQbf::new(vec![(A, v(1)), (E, v(1))], x(1)),
            Err(Error::DuplicateQuantification(v(1)))
        );
    }

    #[test]
    fn tautology_examples() {
        assert!(is_tautology(&Formula::Or(vec![x(1), Formula::not(x(1))]), &[v(1)]).unwrap());
        assert!(is_tautology(&Formula::xor(x(1), Formula::not(x(1))), &[v(1)]).unwrap());
        assert!(!is_tautology(&Formula::Or(vec![x(1), x(2)]), &[v(1), v(2)]).unwrap());
        let many: Vec<VarId> = (1..=25).map(v).collect();
        assert!(matches!(
            is_tautology(&Formula::Const(true), &many),
            Err(Error::ArityOverflow { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let t = Formula::Const(true);
        assert_eq!(
            classify_prefix(&qbf(&[(A, 1), (E, 2), (A, 3), (E, 4)], t.clone())),
            PrefixClass::pi(4)
        );
        assert_eq!(
            classify_prefix(&qbf(&[(E, 1), (E, 2), (A, 3)], t.clone())),
            PrefixClass::sigma(2)
        );
        assert_eq!(classify_prefix(&qbf(&[], t)).level, 0);
    }

    #[test]
    fn substitute_examples() {
        let q = qbf(&[(A, 1), (E, 2)], Formula::Or(vec![x(1), x(2)]));
        let q0 = substitute(&q, v(1), false).unwrap();
        assert_eq!(q0.prefix(), &[(E, v(2))]);
        assert_eq!(q0.matrix(), &Formula::Or(vec![Formula::Const(false), x(2)]));
        let q01 = substitute(&q0, v(2), true).unwrap();
        assert!(q01.prefix().is_empty());
        assert_eq!(
            q01.matrix(),
            &Formula::Or(vec![Formula::Const(false), Formula::Const(true)])
        );
        let ground = substitute(&qbf(&[(A, 1)], x(1)), v(1), false).unwrap();
        assert_eq!(ground.matrix(), &Formula::Const(false));
        assert_eq!(substitute(&q, v(2), true), Err(Error::NotFirstInPrefix(v(2))));
    }

    #[test]
    fn visited_nodes_full_tree() {
        let q = qbf(&[(A, 1), (E, 2), (A, 3)], Formula::Const(true));
        let out = evaluate_qbf_with(&q, EvalOptions { short_circuit: false }).unwrap();
        assert_eq!(out.visited_nodes, 15);
        let out = evaluate_qbf_with(&q, EvalOptions::default()).unwrap();
        assert!(out.visited_nodes < 15);
    }

    #[test]
    fn canonicalize_renumbers_in_prefix_order() {
        let q = qbf(&[(E, 5), (A, 2)], Formula::xor(x(2), x(5)));
        let c = q.canonicalize();
        assert_eq!(c.prefix(), &[(E, v(1)), (A, v(2))]);
        assert_eq!(c.name(v(1)), "x5");
        assert_eq!(c.matrix(), &Formula::xor(x(2), x(1)));
    }
}
