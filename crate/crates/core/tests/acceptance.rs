//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qbflab_core::audit::{
    audit_phi_prime_equivalence, audit_swap_criterion, bounded_skolem_report, enumerate_residuals, exhaustive_prenex_corpus,
    generate_corpus, measure_skolem_blowup, replay_phi_prime_counterexample, standard_form_report, standard_instance,
    summarize_residuals, theorem1_report, two_var_function, AuditReport, CorpusParams, MatrixFamily, ResidualOptions,
    Verdict,
};
use qbflab_core::formula::{Formula, VarId};
use qbflab_core::io::{parse_qbf_text, print_qbf};
use qbflab_core::normalize::{build_phi_prime, prenex_phi_prime, to_standard_form};
use qbflab_core::qbf::{classify_prefix, evaluate_qbf, evaluate_qbf_with, EvalOptions, PrefixClass, PrenexQbf, Quantifier};
use qbflab_core::skolem::{bounded_skolem_decision, exists_skolem_witness};

use common::{nested_phi_prime, oracle_eval};

fn v(i: u32) -> VarId {
    VarId::of(i)
}

fn params(n: usize, family: MatrixFamily) -> CorpusParams {
    CorpusParams { seed: 0, n, family }
}

fn clean(report: &AuditReport) {
    assert!(
        report.counterexamples.is_empty(),
        "{}: {} counterexamples, first {:?}",
        report.claim_id,
        report.counterexamples.len(),
        report.counterexamples.first()
    );
    assert_eq!(report.verdict(), Verdict::Confirmed);
}

fn skolem_equivalence() -> String {
    let report = theorem1_report(4).unwrap();
    assert!(report.instances_checked >= 1500);
    clean(&report);
    for q in exhaustive_prenex_corpus(3) {
        assert_eq!(evaluate_qbf(&q).unwrap(), oracle_eval(&q));
    }
    format!("{} instances agree", report.instances_checked)
}

fn swap_criterion() -> String {
    let reports = audit_swap_criterion();
    assert_eq!(reports.len(), 16);
    let unequal: Vec<&str> = reports.iter().filter(|r| !r.swap_equal).map(|r| r.table.as_str()).collect();
    assert_eq!(unequal, ["0110", "1001"]);
    let (x, y) = (v(1), v(2));
    for r in &reports {
        let psi = two_var_function(r.function_index, x, y);
        let fe = PrenexQbf::new(vec![(Quantifier::Forall, x), (Quantifier::Exists, y)], psi.clone()).unwrap();
        let ef = PrenexQbf::new(vec![(Quantifier::Exists, y), (Quantifier::Forall, x)], psi).unwrap();
        assert_eq!((r.forall_exists, r.exists_forall), (oracle_eval(&fe), oracle_eval(&ef)));
    }
    let xor = &reports[6];
    assert_eq!((xor.table.as_str(), xor.forall_exists, xor.exists_forall), ("0110", true, false));
    format!("{} swap-equal, unequal {:?}", 16 - unequal.len(), unequal)
}

fn residual_count() -> String {
    let mut out = Vec::new();
    for (n, total, claimed) in [(1, 1, 1), (2, 16, 4), (3, 144, 9)] {
        let s = standard_instance(n, Formula::Const(true)).unwrap();
        assert_eq!(enumerate_residuals(&s, ResidualOptions::default()).count(), total);
        let summary = summarize_residuals(&s, ResidualOptions::default());
        assert_eq!((summary.total, summary.claimed), (total as u64, claimed));
        out.push(format!("n={n}: {total} vs {claimed}"));
    }
    out.join(", ")
}

fn standard_form() -> String {
    let q = parse_qbf_text("exists x y\nforall z\nx | y | z").unwrap();
    let (s, _) = to_standard_form(&q);
    let greek = |name: &str| match name {
        "alpha" => "α".to_string(),
        "beta" => "β".to_string(),
        "gamma" => "γ".to_string(),
        other => other.to_string(),
    };
    let sq = s.qbf();
    let prefix: String = sq.prefix().iter().map(|(k, x)| format!("({k}{})", greek(&sq.name(*x)))).collect();
    let text = print_qbf(sq);
    let matrix = text.lines().last().unwrap().replace(" | ", "∨");
    let rendered = format!("{prefix}[{matrix}]");
    assert_eq!(rendered, "(∀α)(∃x)(∀β)(∃y)(∀z)(∃γ)[x∨y∨z]");
    assert_eq!(evaluate_qbf(sq).unwrap(), evaluate_qbf(&q).unwrap());

    let report = standard_form_report(4).unwrap();
    clean(&report);
    format!("{rendered}; {} instances preserved", report.instances_checked)
}

fn phi_prime_structure() -> String {
    let mut n2 = Vec::new();
    for family in [
        MatrixFamily::Exhaustive2Var { pair: None },
        MatrixFamily::AllSmallCnf { max_clauses: 2 },
        MatrixFamily::RandomAst { count: 300, max_depth: 5 },
    ] {
        n2.extend(generate_corpus(&params(2, family)).unwrap());
    }
    let mut n3 = Vec::new();
    for family in [
        MatrixFamily::Exhaustive2Var { pair: None },
        MatrixFamily::RandomAst { count: 100, max_depth: 5 },
    ] {
        n3.extend(generate_corpus(&params(3, family)).unwrap());
    }
    for inst in n2.iter().chain(&n3) {
        let p = build_phi_prime(&inst.formula);
        assert_eq!(classify_prefix(&prenex_phi_prime(&p)), PrefixClass::pi(4));
    }
    for inst in &n2 {
        let p = build_phi_prime(&inst.formula);
        assert_eq!(evaluate_qbf(&prenex_phi_prime(&p)).unwrap(), nested_phi_prime(&p));
    }
    format!("{} + {} instances PI 4, {} nested checks", n2.len(), n3.len(), n2.len())
}

fn phi_prime_audit() -> String {
    let mut lines = Vec::new();
    for family in [
        MatrixFamily::Exhaustive2Var { pair: None },
        MatrixFamily::AllSmallCnf { max_clauses: 3 },
    ] {
        let report = audit_phi_prime_equivalence(&params(2, family)).unwrap();
        assert_ne!(report.verdict(), Verdict::Confirmed);
        assert_eq!(report.verdict() == Verdict::Refuted, !report.counterexamples.is_empty());
        for c in &report.counterexamples {
            assert_eq!(replay_phi_prime_counterexample(c).unwrap(), (c.lhs, c.rhs));
        }
        let back = AuditReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
        lines.push(format!(
            "{} instances {:?} ({} counterexamples)",
            report.instances_checked,
            report.verdict(),
            report.counterexamples.len()
        ));
    }
    let calibration = audit_phi_prime_equivalence(&params(1, MatrixFamily::AllSmallCnf { max_clauses: 4 })).unwrap();
    assert_eq!(calibration.verdict(), Verdict::NoCounterexampleFound);
    lines.join("; ")
}

fn bounded_skolem() -> String {
    let report = bounded_skolem_report(4).unwrap();
    clean(&report);
    let xor = parse_qbf_text("forall x\nexists y\nx ^ y").unwrap();
    assert!(!bounded_skolem_decision(&xor, 1).unwrap());
    assert!(bounded_skolem_decision(&xor, 2).unwrap());
    assert!(exists_skolem_witness(&xor).unwrap().is_some());
    format!("{} instances monotone and saturated; xor 0 at 1, 1 at 2", report.instances_checked)
}

fn blowup() -> String {
    let rows = measure_skolem_blowup(10).unwrap();
    assert_eq!(rows.len(), 10);
    for r in &rows {
        assert_eq!(r.table_bits, 1 << r.k);
        if r.k <= 4 {
            assert!(r.via_search);
            assert_eq!(r.anf_size, r.k);
        }
    }
    assert_eq!(rows[9].table_bits, 1024);
    rows.iter().map(|r| format!("{}:{}/{}", r.k, r.table_bits, r.anf_size)).collect::<Vec<_>>().join(" ")
}

fn recursion_bound() -> String {
    let strict = EvalOptions { short_circuit: false };
    for q in exhaustive_prenex_corpus(4) {
        let m = q.prefix().len() as u32;
        for options in [EvalOptions::default(), strict] {
            let outcome = evaluate_qbf_with(&q, options).unwrap();
            assert!(outcome.visited_nodes <= (1 << (m + 1)) - 1);
        }
    }
    for m in 0..=16u32 {
        for quantifier_mask in [0u32, u32::MAX, 0x5555_5555] {
            let prefix: Vec<_> = (1..=m)
                .map(|i| {
                    let k = if quantifier_mask >> (i - 1) & 1 == 1 {
                        Quantifier::Exists
                    } else {
                        Quantifier::Forall
                    };
                    (k, v(i))
                })
                .collect();
            for b in [false, true] {
                let q = PrenexQbf::new(prefix.clone(), Formula::Const(b)).unwrap();
                let outcome = evaluate_qbf_with(&q, strict).unwrap();
                assert_eq!(outcome.visited_nodes, (1u64 << (m + 1)) - 1);
                assert!(evaluate_qbf_with(&q, EvalOptions::default()).unwrap().visited_nodes <= outcome.visited_nodes);
            }
        }
    }
    "bound holds on 1994 instances; reached at m = 0..=16".into()
}

type Criterion = (&'static str, fn() -> String, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 skolem witness equivalence", skolem_equivalence, Duration::from_secs(60)),
        ("2 swap criterion", swap_criterion, Duration::from_secs(1)),
        ("3 residual count", residual_count, Duration::from_secs(5)),
        ("4 standard form", standard_form, Duration::from_secs(30)),
        ("5 phi-prime structure", phi_prime_structure, Duration::from_secs(120)),
        ("6 phi-prime equivalence audit", phi_prime_audit, Duration::from_secs(600)),
        ("7 bounded skolem", bounded_skolem, Duration::from_secs(10)),
        ("8 skolem blowup", blowup, Duration::from_secs(60)),
        ("9 recursion bound", recursion_bound, Duration::from_secs(10)),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check));
        let elapsed = started.elapsed();
        let (ok, note) = match outcome {
            Ok(note) if elapsed <= limit => (true, note),
            Ok(note) => (false, format!("{note}; took {elapsed:.1?}, limit {limit:?}")),
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, msg)
            }
        };
        failed += !ok as usize;
        println!("{} criterion {name} [{elapsed:.2?}]: {note}", if ok { "PASS" } else { "FAIL" });
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
