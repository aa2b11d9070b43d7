//! Executable checks of the individual claims: the two-variable swap
//! criterion, the residual-formula count, Φ ≡ Φ′ on finite corpora, the
//! Skolem-table blowup, and exhaustive cross-checks of the other modules.
//!
//! Every check produces an [`AuditReport`]. Reports for open claims (the Φ′
//! equivalence) are built with [`AuditReport::open`], which can only yield
//! `REFUTED` or `NO_COUNTEREXAMPLE_FOUND`.

mod corpus;
mod residual;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::formula::{TruthTable, VarId, DEFAULT_MAX_ARITY};
use crate::io::{parse_qbf_text, print_qbf};
use crate::normalize::{build_phi_prime, prenex_phi_prime, prenex_phi_prime_shared, to_standard_form, StandardFormQbf};
use crate::qbf::{classify_prefix, evaluate_qbf, PrefixClass, PrenexQbf, Quantifier, Side};
use crate::skolem::{
    bounded_skolem_decision, exists_skolem_witness, innermost_witness, max_skolem_anf_size, parity_family,
};

pub use corpus::{
    corpus_size, exhaustive_prenex_corpus, generate_corpus, standard_instance, standard_prefix, two_var_function,
    CorpusInstance, CorpusParams, MatrixFamily, MAX_CORPUS_SIZE,
};
pub use residual::{
    claimed_residual_count, enumerate_residuals, expected_residual_count, summarize_residuals, ResidualEnumeration,
    ResidualOptions, ResidualSummary,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Confirmed,
    Refuted,
    NoCounterexampleFound,
}

/// One disagreeing instance. `formula_text` is in the text format and
/// `lhs`/`rhs` are the two sides the claim says should agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub serial: u64,
    pub formula_text: String,
    pub lhs: bool,
    pub rhs: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub claim_id: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub instances_checked: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
    verdict: Verdict,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl AuditReport {
    fn build(
        claim_id: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        instances_checked: u64,
        mut counterexamples: Vec<Counterexample>,
        started: Instant,
        verdict_if_clean: Verdict,
    ) -> Self {
        counterexamples.sort_by_key(|c| c.serial);
        let verdict = if counterexamples.is_empty() {
            verdict_if_clean
        } else {
            Verdict::Refuted
        };
        AuditReport {
            claim_id: claim_id.to_string(),
            params,
            seed,
            instances_checked,
            counterexamples,
            elapsed_ms: started.elapsed().as_millis() as u64,
            verdict,
            details: serde_json::Value::Null,
        }
    }

    /// A claim fully decided by the checked instances: `CONFIRMED` or `REFUTED`.
    pub fn settled(
        claim_id: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        instances_checked: u64,
        counterexamples: Vec<Counterexample>,
        started: Instant,
    ) -> Self {
        Self::build(claim_id, params, seed, instances_checked, counterexamples, started, Verdict::Confirmed)
    }

    /// A universally quantified claim probed on a finite sample:
    /// `REFUTED` or `NO_COUNTEREXAMPLE_FOUND`, never `CONFIRMED`.
    pub fn open(
        claim_id: &str,
        params: serde_json::Value,
        seed: Option<u64>,
        instances_checked: u64,
        counterexamples: Vec<Counterexample>,
        started: Instant,
    ) -> Self {
        Self::build(
            claim_id,
            params,
            seed,
            instances_checked,
            counterexamples,
            started,
            Verdict::NoCounterexampleFound,
        )
    }

    pub fn verdict(&self) -> Verdict {
        self.verdict
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapReport {
    /// Bit `r` of the index is row `r` of the table.
    pub function_index: u8,
    /// Rows `00, 01, 10, 11` of ψ(x, y).
    pub table: String,
    pub forall_exists: bool,
    pub exists_forall: bool,
    pub swap_equal: bool,
}

/// Compares `(∀x)(∃y)[ψ]` with `(∃y)(∀x)[ψ]` for all 16 functions ψ(x, y).
pub fn audit_swap_criterion() -> Vec<SwapReport> {
    let (x, y) = (VarId::of(1), VarId::of(2));
    (0..16u8)
        .map(|index| {
            let psi = two_var_function(index, x, y);
            let fe = PrenexQbf::new(vec![(Quantifier::Forall, x), (Quantifier::Exists, y)], psi.clone())
                .and_then(|q| evaluate_qbf(&q))
                .expect("closed two-variable formula");
            let ef = PrenexQbf::new(vec![(Quantifier::Exists, y), (Quantifier::Forall, x)], psi)
                .and_then(|q| evaluate_qbf(&q))
                .expect("closed two-variable formula");
            SwapReport {
                function_index: index,
                table: TruthTable::from_index(vec![x, y], index as u64).to_bit_string(),
                forall_exists: fe,
                exists_forall: ef,
                swap_equal: fe == ef,
            }
        })
        .collect()
}

fn is_xor_or_xnor(table: &str) -> bool {
    table == "0110" || table == "1001"
}

pub fn swap_criterion_report() -> AuditReport {
    let started = Instant::now();
    let reports = audit_swap_criterion();
    let counterexamples = reports
        .iter()
        .filter(|r| r.swap_equal == is_xor_or_xnor(&r.table))
        .map(|r| Counterexample {
            serial: r.function_index as u64,
            formula_text: format!("table {}", r.table),
            lhs: r.forall_exists,
            rhs: r.exists_forall,
        })
        .collect();
    let unequal: Vec<&str> = reports.iter().filter(|r| !r.swap_equal).map(|r| r.table.as_str()).collect();
    let details = json!({
        "entries": reports,
        "swap_equal": reports.len() - unequal.len(),
        "swap_unequal": unequal,
    });
    AuditReport::settled("swap-criterion", json!({}), None, 16, counterexamples, started).with_details(details)
}

pub fn residual_count_report(n: usize, options: ResidualOptions) -> Result<AuditReport> {
    let started = Instant::now();
    let s = standard_instance(n, crate::formula::Formula::Const(true))?;
    let summary = summarize_residuals(&s, options);
    let expected = if options.ordered_pairs_only {
        residual::expected_ordered_count(n)
    } else {
        expected_residual_count(n)
    };
    let counterexamples = if summary.total == expected {
        Vec::new()
    } else {
        vec![Counterexample {
            serial: 0,
            formula_text: print_qbf(s.qbf()),
            lhs: false,
            rhs: true,
        }]
    };
    Ok(AuditReport::settled(
        "residual-count",
        json!({ "n": n, "ordered_pairs_only": options.ordered_pairs_only }),
        None,
        summary.total,
        counterexamples,
        started,
    )
    .with_details(serde_json::to_value(summary)?))
}

/// Truth values of Φ and of the prenexed Φ′ built from it.
pub fn phi_prime_sides(s: &StandardFormQbf) -> Result<(bool, bool)> {
    let lhs = evaluate_qbf(s.qbf())?;
    let rhs = evaluate_qbf(&prenex_phi_prime(&build_phi_prime(s)))?;
    Ok((lhs, rhs))
}

/// Re-evaluates a reported counterexample from its text.
pub fn replay_phi_prime_counterexample(c: &Counterexample) -> Result<(bool, bool)> {
    let q = parse_qbf_text(&c.formula_text)?;
    phi_prime_sides(&StandardFormQbf::from_qbf(q)?)
}

pub fn audit_phi_prime_equivalence(params: &CorpusParams) -> Result<AuditReport> {
    if params.n > 3 {
        return Err(Error::InvalidCorpus(format!("n = {} is beyond the supported n ≤ 3", params.n)));
    }
    let started = Instant::now();
    let instances: Vec<CorpusInstance> = generate_corpus(params)?.collect();
    let outcomes: Vec<(u64, bool, bool, bool)> = instances
        .par_iter()
        .map(|inst| {
            let (lhs, rhs) = phi_prime_sides(&inst.formula)?;
            let shared = evaluate_qbf(&prenex_phi_prime_shared(&build_phi_prime(&inst.formula)))?;
            Ok((inst.serial, lhs, rhs, shared))
        })
        .collect::<Result<_>>()?;
    let counterexamples = outcomes
        .iter()
        .filter(|(_, lhs, rhs, _)| lhs != rhs)
        .map(|(serial, lhs, rhs, _)| Counterexample {
            serial: *serial,
            formula_text: print_qbf(instances[*serial as usize].formula.qbf()),
            lhs: *lhs,
            rhs: *rhs,
        })
        .collect();
    let true_count = outcomes.iter().filter(|o| o.1).count();
    let shared_vs_distinct = outcomes.iter().filter(|o| o.2 != o.3).count();
    let shared_vs_phi = outcomes.iter().filter(|o| o.1 != o.3).count();
    let details = json!({
        "phi_true": true_count,
        "degenerate_n1": params.n == 1,
        "shared_variant_differs_from_distinct": shared_vs_distinct,
        "shared_variant_differs_from_phi": shared_vs_phi,
    });
    Ok(AuditReport::open(
        "phi-prime-equivalence",
        serde_json::to_value(params)?,
        Some(params.seed),
        instances.len() as u64,
        counterexamples,
        started,
    )
    .with_details(details))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub k: usize,
    pub table_bits: usize,
    pub anf_size: usize,
    /// Whether the witness came from the exhaustive search (feasible for
    /// k ≤ 4) rather than being read off the matrix.
    pub via_search: bool,
}

/// Skolem witness sizes for the parity family, k = 1..=k_max.
pub fn measure_skolem_blowup(k_max: usize) -> Result<Vec<BlowupRow>> {
    if k_max > DEFAULT_MAX_ARITY {
        return Err(Error::ArityOverflow {
            arity: k_max,
            cap: DEFAULT_MAX_ARITY,
        });
    }
    (1..=k_max)
        .map(|k| {
            let q = parity_family(k);
            let y = VarId::of(k as u32 + 1);
            let (function, via_search) = match exists_skolem_witness(&q) {
                Ok(Some(c)) => (c.get(y).cloned().expect("certificate covers y"), true),
                Ok(None) => unreachable!("parity family is true"),
                Err(Error::BudgetExceeded { .. }) => {
                    (innermost_witness(&q)?.expect("single innermost existential"), false)
                }
                Err(e) => return Err(e),
            };
            Ok(BlowupRow {
                k,
                table_bits: function.table_bits(),
                anf_size: function.anf_size(),
                via_search,
            })
        })
        .collect()
}

pub fn skolem_blowup_report(k_max: usize) -> Result<AuditReport> {
    let started = Instant::now();
    let rows = measure_skolem_blowup(k_max)?;
    let counterexamples = rows
        .iter()
        .filter(|r| r.table_bits != 1 << r.k || r.anf_size != r.k)
        .map(|r| Counterexample {
            serial: r.k as u64,
            formula_text: print_qbf(&parity_family(r.k)),
            lhs: r.table_bits == 1 << r.k,
            rhs: r.anf_size == r.k,
        })
        .collect();
    Ok(
        AuditReport::settled("skolem-blowup", json!({ "k_max": k_max }), None, rows.len() as u64, counterexamples, started)
            .with_details(json!({ "rows": rows })),
    )
}

fn exhaustive_check(
    claim_id: &str,
    max_vars: usize,
    sides: impl Fn(&PrenexQbf) -> Result<(bool, bool)> + Sync,
) -> Result<AuditReport> {
    let started = Instant::now();
    let corpus: Vec<PrenexQbf> = exhaustive_prenex_corpus(max_vars).collect();
    let outcomes: Vec<(bool, bool)> = corpus.par_iter().map(&sides).collect::<Result<_>>()?;
    let counterexamples = outcomes
        .iter()
        .enumerate()
        .filter(|(_, (l, r))| l != r)
        .map(|(i, (l, r))| Counterexample {
            serial: i as u64,
            formula_text: print_qbf(&corpus[i]),
            lhs: *l,
            rhs: *r,
        })
        .collect();
    Ok(AuditReport::settled(
        claim_id,
        json!({ "max_vars": max_vars }),
        None,
        corpus.len() as u64,
        counterexamples,
        started,
    ))
}

/// Skolem witness existence against direct evaluation on the exhaustive
/// small prenex corpus.
pub fn theorem1_report(max_vars: usize) -> Result<AuditReport> {
    exhaustive_check("skolem-equivalence", max_vars, |q| {
        Ok((exists_skolem_witness(q)?.is_some(), evaluate_qbf(q)?))
    })
}

/// Standard-form conversion on the exhaustive small corpus: `lhs` is
/// "truth value preserved", `rhs` is "prefix shape and length bound hold".
pub fn standard_form_report(max_vars: usize) -> Result<AuditReport> {
    exhaustive_check("standard-form", max_vars, |q| {
        let (s, _) = to_standard_form(q);
        let preserved = evaluate_qbf(q)? == evaluate_qbf(s.qbf())?;
        let len = s.qbf().prefix().len();
        let class = classify_prefix(s.qbf());
        let shaped = len % 2 == 0
            && len <= 2 * q.prefix().len() + 2
            && class.side == Side::Pi
            && class.level == len;
        Ok((preserved, shaped))
    })
}

/// Monotonicity and saturation of the bounded decision: `lhs` is "monotone
/// in the bound", `rhs` is "agrees with the unbounded search at B_max".
pub fn bounded_skolem_report(max_vars: usize) -> Result<AuditReport> {
    exhaustive_check("bounded-skolem", max_vars, |q| {
        let b_max = max_skolem_anf_size(q);
        let decisions = (0..=b_max)
            .map(|b| bounded_skolem_decision(q, b))
            .collect::<Result<Vec<bool>>>()?;
        let monotone = decisions.windows(2).all(|w| w[0] <= w[1]);
        let saturated = decisions[b_max] == exists_skolem_witness(q)?.is_some();
        Ok((monotone, saturated))
    })
}

/// Names accepted by [`run_claim`].
pub const CLAIM_IDS: [&str; 7] = [
    "swap-criterion",
    "residual-count",
    "phi-prime-equivalence",
    "skolem-blowup",
    "skolem-equivalence",
    "standard-form",
    "bounded-skolem",
];

/// Parameters shared by the claims; each claim reads the ones it needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimParams {
    pub corpus: CorpusParams,
    pub ordered_pairs_only: bool,
    pub k_max: usize,
    pub max_vars: usize,
}

impl Default for ClaimParams {
    fn default() -> Self {
        ClaimParams {
            corpus: CorpusParams {
                seed: 0,
                n: 2,
                family: MatrixFamily::Exhaustive2Var { pair: None },
            },
            ordered_pairs_only: false,
            k_max: 10,
            max_vars: 4,
        }
    }
}

pub fn run_claim(claim_id: &str, params: &ClaimParams) -> Result<AuditReport> {
    match claim_id {
        "swap-criterion" => Ok(swap_criterion_report()),
        "residual-count" => residual_count_report(
            params.corpus.n,
            ResidualOptions {
                ordered_pairs_only: params.ordered_pairs_only,
            },
        ),
        "phi-prime-equivalence" => audit_phi_prime_equivalence(&params.corpus),
        "skolem-blowup" => skolem_blowup_report(params.k_max),
        "skolem-equivalence" => theorem1_report(params.max_vars),
        "standard-form" => standard_form_report(params.max_vars),
        "bounded-skolem" => bounded_skolem_report(params.max_vars),
        other => Err(Error::InvalidCorpus(format!(
            "unknown claim {other:?}; expected one of {}",
            CLAIM_IDS.join(", ")
        ))),
    }
}

/// Prefix class of the prenexed Φ′ built from `s`.
pub fn phi_prime_class(s: &StandardFormQbf) -> PrefixClass {
    classify_prefix(&prenex_phi_prime(&build_phi_prime(s)))
}
