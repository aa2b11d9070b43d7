//! Standard-form conversion with dummy variables, and the Φ′ construction
//! together with its prenexing into a `∀∃∀∃` prefix.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, VarId};
use crate::qbf::{PrenexQbf, Quantifier};

/// A prenex formula with prefix `(∀x1)(∃y1)…(∀xn)(∃yn)`, n ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardFormQbf {
    qbf: PrenexQbf,
    pairing: Vec<(VarId, VarId)>,
}

impl StandardFormQbf {
    pub fn from_qbf(qbf: PrenexQbf) -> Result<Self> {
        let prefix = qbf.prefix();
        if prefix.is_empty() || prefix.len() % 2 != 0 {
            return Err(Error::NotStandardForm(format!(
                "prefix length {} is not a positive even number",
                prefix.len()
            )));
        }
        let mut pairing = Vec::with_capacity(prefix.len() / 2);
        for pair in prefix.chunks(2) {
            match pair {
                [(Quantifier::Forall, x), (Quantifier::Exists, y)] => pairing.push((*x, *y)),
                _ => {
                    return Err(Error::NotStandardForm(
                        "quantifiers must alternate ∀∃ starting with ∀".into(),
                    ))
                }
            }
        }
        Ok(StandardFormQbf { qbf, pairing })
    }

    pub fn qbf(&self) -> &PrenexQbf {
        &self.qbf
    }

    pub fn into_qbf(self) -> PrenexQbf {
        self.qbf
    }

    /// Number of (∀, ∃) pairs.
    pub fn n(&self) -> usize {
        self.pairing.len()
    }

    pub fn pairing(&self) -> &[(VarId, VarId)] {
        &self.pairing
    }

    pub fn universals(&self) -> Vec<VarId> {
        self.pairing.iter().map(|(x, _)| *x).collect()
    }

    pub fn existentials(&self) -> Vec<VarId> {
        self.pairing.iter().map(|(_, y)| *y).collect()
    }
}

/// Where each variable of a standard-form output came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableMapping {
    pub entries: Vec<MappingEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub new_id: u32,
    /// `None` for inserted dummies.
    pub original_id: Option<u32>,
    pub name: String,
    pub quantifier: Quantifier,
    pub dummy: bool,
}

impl VariableMapping {
    pub fn dummy_count(&self) -> usize {
        self.entries.iter().filter(|e| e.dummy).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("mapping serializes")
    }
}

/// Hands out display names that do not clash with names already in use.
pub(crate) struct NameAllocator {
    used: BTreeSet<String>,
}

impl NameAllocator {
    pub(crate) fn new(used: impl IntoIterator<Item = String>) -> Self {
        NameAllocator {
            used: used.into_iter().collect(),
        }
    }

    pub(crate) fn fresh(&mut self, base: &str) -> String {
        let mut candidate = base.to_string();
        let mut n = 2;
        while self.used.contains(&candidate) {
            candidate = format!("{base}{n}");
            n += 1;
        }
        self.used.insert(candidate.clone());
        candidate
    }
}

enum Slot {
    Original(VarId),
    Dummy(&'static str),
}

/// Brings `q` into standard form by inserting dummy variables: a leading ∀
/// (`alpha`) if the prefix starts with ∃, a separator of the missing kind
/// (`beta`, `beta2`, …) between equal neighbours, and a trailing ∃ (`gamma`)
/// when the length comes out odd. Variables are renumbered 1..=2n in prefix
/// order.
pub fn to_standard_form(q: &PrenexQbf) -> (StandardFormQbf, VariableMapping) {
    let mut slots: Vec<(Quantifier, Slot)> = Vec::with_capacity(2 * q.prefix().len() + 2);
    let mut expected = Quantifier::Forall;
    for (quantifier, v) in q.prefix() {
        if *quantifier != expected {
            let base = if slots.is_empty() { "alpha" } else { "beta" };
            slots.push((expected, Slot::Dummy(base)));
            expected = expected.flip();
        }
        slots.push((*quantifier, Slot::Original(*v)));
        expected = expected.flip();
    }
    if slots.is_empty() {
        slots.push((Quantifier::Forall, Slot::Dummy("alpha")));
        expected = Quantifier::Exists;
    }
    if expected == Quantifier::Exists {
        slots.push((Quantifier::Exists, Slot::Dummy("gamma")));
    }

    let mut names = NameAllocator::new(q.prefix().iter().map(|(_, v)| q.name(*v).into_owned()));
    let mut renumber = BTreeMap::new();
    let mut prefix = Vec::with_capacity(slots.len());
    let mut entries = Vec::with_capacity(slots.len());
    for (i, (quantifier, slot)) in slots.iter().enumerate() {
        let new_id = VarId::of(i as u32 + 1);
        let (original_id, name) = match slot {
            Slot::Original(v) => {
                renumber.insert(*v, new_id);
                (Some(v.get()), q.name(*v).into_owned())
            }
            Slot::Dummy(base) => (None, names.fresh(base)),
        };
        prefix.push((*quantifier, new_id));
        entries.push(MappingEntry {
            new_id: new_id.get(),
            original_id,
            name,
            quantifier: *quantifier,
            dummy: original_id.is_none(),
        });
    }
    let qbf = PrenexQbf::new(prefix, q.matrix().rename(&renumber))
        .and_then(|p| p.with_names(entries.iter().map(|e| (VarId::of(e.new_id), e.name.clone()))))
        .expect("renumbering preserves closedness and name uniqueness");
    let standard = StandardFormQbf::from_qbf(qbf).expect("construction alternates ∀∃");
    (standard, VariableMapping { entries })
}

/// One quantified conjunct of Φ′: pairs `start..=n` are replaced by fresh
/// universals (`hatted`) and fresh existentials, in pair order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiClause {
    pub start: usize,
    pub hatted: Vec<VarId>,
    pub fresh_existentials: Vec<VarId>,
    pub body: Formula,
}

/// `(∀x1..xn)(∃y1..yn)[φ ∧ C_n ∧ C_{n-1} ∧ … ∧ C_2]` where `C_j` is
/// `(∀x̂_j..x̂_n)(∃z_j..z_n)[φ(x1,y1,…,x_{j-1},y_{j-1},x̂_j,z_j,…,x̂_n,z_n)]`.
/// Each clause has its own fresh variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiPrime {
    pub outer_universals: Vec<VarId>,
    pub outer_existentials: Vec<VarId>,
    pub first: Formula,
    /// Clauses in the order `j = n, n-1, …, 2`.
    pub clauses: Vec<PhiClause>,
    pub names: BTreeMap<VarId, String>,
}

impl PhiPrime {
    pub fn n(&self) -> usize {
        self.outer_universals.len()
    }

    /// Number of conjuncts, including the quantifier-free first one.
    pub fn conjunct_count(&self) -> usize {
        1 + self.clauses.len()
    }
}

pub fn build_phi_prime(s: &StandardFormQbf) -> PhiPrime {
    let q = s.qbf();
    let n = s.n();
    let mut next_id = q.max_var() + 1;
    let mut allocator = NameAllocator::new(q.prefix().iter().map(|(_, v)| q.name(*v).into_owned()));
    let mut names: BTreeMap<VarId, String> = q
        .prefix()
        .iter()
        .map(|(_, v)| (*v, q.name(*v).into_owned()))
        .collect();
    let mut fresh = |base: String, names: &mut BTreeMap<VarId, String>| {
        let v = VarId::of(next_id);
        next_id += 1;
        names.insert(v, allocator.fresh(&base));
        v
    };

    let mut clauses = Vec::with_capacity(n.saturating_sub(1));
    for start in (2..=n).rev() {
        let mut hatted = Vec::new();
        let mut fresh_existentials = Vec::new();
        let mut replace = BTreeMap::new();
        for i in start..=n {
            let (x, y) = s.pairing()[i - 1];
            let xh = fresh(format!("xhat{i}_{start}"), &mut names);
            replace.insert(x, xh);
            hatted.push(xh);
            let z = fresh(format!("z{i}_{start}"), &mut names);
            replace.insert(y, z);
            fresh_existentials.push(z);
        }
        clauses.push(PhiClause {
            start,
            hatted,
            fresh_existentials,
            body: q.matrix().rename(&replace),
        });
    }
    PhiPrime {
        outer_universals: s.universals(),
        outer_existentials: s.existentials(),
        first: q.matrix().clone(),
        clauses,
        names,
    }
}

/// Pulls the clause quantifiers to the front:
/// `∀(x's) ∃(y's) ∀(all hatted) ∃(all fresh existentials)`. Clause variables
/// stay distinct per clause, so each clause still only sees its own.
pub fn prenex_phi_prime(p: &PhiPrime) -> PrenexQbf {
    let hatted: Vec<VarId> = p.clauses.iter().flat_map(|c| c.hatted.iter().copied()).collect();
    let zs: Vec<VarId> = p
        .clauses
        .iter()
        .flat_map(|c| c.fresh_existentials.iter().copied())
        .collect();
    let bodies = p.clauses.iter().map(|c| c.body.clone());
    assemble(p, &hatted, &zs, bodies.collect())
}

/// Variant in which the clauses share one set of hatted/fresh variables per
/// pair index instead of each clause having its own. This is a different
/// formula; it exists only to compare against [`prenex_phi_prime`].
pub fn prenex_phi_prime_shared(p: &PhiPrime) -> PrenexQbf {
    // the clause starting at 2 covers every pair index 2..=n
    let Some(widest) = p.clauses.iter().find(|c| c.start == 2) else {
        return assemble(p, &[], &[], Vec::new());
    };
    let offset = |c: &PhiClause, k: usize| c.start - 2 + k;
    let mut rename = BTreeMap::new();
    for c in &p.clauses {
        for (k, (h, z)) in c.hatted.iter().zip(&c.fresh_existentials).enumerate() {
            rename.insert(*h, widest.hatted[offset(c, k)]);
            rename.insert(*z, widest.fresh_existentials[offset(c, k)]);
        }
    }
    let bodies = p.clauses.iter().map(|c| c.body.rename(&rename)).collect();
    assemble(p, &widest.hatted, &widest.fresh_existentials, bodies)
}

fn assemble(p: &PhiPrime, hatted: &[VarId], zs: &[VarId], bodies: Vec<Formula>) -> PrenexQbf {
    let blocks = [
        (Quantifier::Forall, p.outer_universals.as_slice()),
        (Quantifier::Exists, p.outer_existentials.as_slice()),
        (Quantifier::Forall, hatted),
        (Quantifier::Exists, zs),
    ];
    let prefix: Vec<(Quantifier, VarId)> = blocks
        .iter()
        .flat_map(|(q, vs)| vs.iter().map(move |v| (*q, *v)))
        .collect();
    let matrix = if bodies.is_empty() {
        p.first.clone()
    } else {
        Formula::And(std::iter::once(p.first.clone()).chain(bodies).collect())
    };
    let names: Vec<(VarId, String)> = prefix
        .iter()
        .filter_map(|(_, v)| p.names.get(v).map(|n| (*v, n.clone())))
        .collect();
    PrenexQbf::new(prefix, matrix)
        .and_then(|q| q.with_names(names))
        .expect("Φ′ variables are all quantified and uniquely named")
}
