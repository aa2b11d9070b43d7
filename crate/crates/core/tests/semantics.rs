mod common;

use qbflab_core::audit::{exhaustive_prenex_corpus, generate_corpus, CorpusParams, MatrixFamily};
use qbflab_core::formula::{TruthTable, VarId};
use qbflab_core::io::parse_qbf_text;
use qbflab_core::qbf::{evaluate_qbf, substitute};
use qbflab_core::skolem::{
    bounded_skolem_decision, exists_skolem_witness, verify_certificate, SkolemCertificate, SkolemFunction,
};

use common::oracle_eval;

fn v(i: u32) -> VarId {
    VarId::of(i)
}

#[test]
fn evaluator_matches_oracle_on_exhaustive_and_random_corpora() {
    let mut checked = 0;
    for q in exhaustive_prenex_corpus(4) {
        assert_eq!(evaluate_qbf(&q).unwrap(), oracle_eval(&q), "{q}");
        checked += 1;
    }
    for (seed, n) in [(11, 1), (12, 2)] {
        let params = CorpusParams {
            seed,
            n,
            family: MatrixFamily::RandomAst { count: 500, max_depth: 6 },
        };
        for inst in generate_corpus(&params).unwrap() {
            let q = inst.formula.qbf();
            assert_eq!(evaluate_qbf(q).unwrap(), oracle_eval(q), "{q}");
            checked += 1;
        }
    }
    assert_eq!(checked, 1994 + 1000);
}

#[test]
fn first_quantifier_substitution() {
    let q = parse_qbf_text("forall x\nexists y\nx | y").unwrap();
    let q0 = substitute(&q, v(1), false).unwrap();
    assert_eq!(q0.prefix().len(), 1);
    assert!(evaluate_qbf(&q0).unwrap());
    assert!(substitute(&q, v(2), true).is_err());
}

fn cert(target: u32, deps: &[u32], bits: &str) -> SkolemCertificate {
    let deps = deps.iter().map(|d| v(*d)).collect();
    SkolemCertificate::new([SkolemFunction::new(v(target), TruthTable::from_bit_str(deps, bits).unwrap())])
}

#[test]
fn certificate_examples() {
    let q = parse_qbf_text("forall x\nexists y\nx ^ y").unwrap();
    assert!(verify_certificate(&q, &cert(2, &[1], "10")).unwrap());
    assert!(!verify_certificate(&q, &cert(2, &[1], "01")).unwrap());
    assert!(verify_certificate(&q, &cert(2, &[2], "10")).is_err());

    let found = exists_skolem_witness(&q).unwrap().unwrap();
    assert_eq!(found.get(v(2)).unwrap().table().to_bit_string(), "10");
    let swapped = parse_qbf_text("exists y\nforall x\nx ^ y").unwrap();
    assert!(exists_skolem_witness(&swapped).unwrap().is_none());

    let e = parse_qbf_text("exists y\ny").unwrap();
    assert!(verify_certificate(&e, &cert(1, &[], "1")).unwrap());
}

#[test]
fn first_witness_follows_table_order() {
    // tables are enumerated by index: 00, 10, 01, 11 as row strings; "10"
    // (y = !x) satisfies x | y before the constant 1 is reached
    let q = parse_qbf_text("forall x\nexists y\nx | y").unwrap();
    let found = exists_skolem_witness(&q).unwrap().unwrap();
    assert_eq!(found.get(v(2)).unwrap().table().to_bit_string(), "10");
    assert!(verify_certificate(&q, &cert(2, &[1], "11")).unwrap());
}

#[test]
fn bounded_examples() {
    let taut = parse_qbf_text("forall x\nexists y\nx | !x").unwrap();
    assert!(bounded_skolem_decision(&taut, 0).unwrap());
    let xor = parse_qbf_text("forall x\nexists y\nx ^ y").unwrap();
    assert!(!bounded_skolem_decision(&xor, 0).unwrap());
    assert!(!bounded_skolem_decision(&xor, 1).unwrap());
    assert!(bounded_skolem_decision(&xor, 2).unwrap());
}
