//! Reference evaluators that share no code with the library's evaluator.

#![allow(dead_code)]

use std::collections::HashMap;

use qbflab_core::formula::{Formula, VarId};
use qbflab_core::normalize::PhiPrime;
use qbflab_core::qbf::{PrenexQbf, Quantifier};

pub type Env = HashMap<VarId, bool>;

pub fn eval(f: &Formula, env: &Env) -> bool {
    match f {
        Formula::Const(b) => *b,
        Formula::Var(v) => env[v],
        Formula::Not(g) => !eval(g, env),
        Formula::And(cs) => cs.iter().fold(true, |acc, c| acc & eval(c, env)),
        Formula::Or(cs) => cs.iter().fold(false, |acc, c| acc | eval(c, env)),
        Formula::Xor(a, b) => eval(a, env) ^ eval(b, env),
    }
}

/// Game semantics: the quantifier picks a value for its variable, ∀ needs
/// both choices to win and ∃ needs one.
pub fn play(prefix: &[(Quantifier, VarId)], env: &mut Env, leaf: &dyn Fn(&mut Env) -> bool) -> bool {
    let Some(((q, v), rest)) = prefix.split_first() else {
        return leaf(env);
    };
    let mut outcomes = [false; 2];
    for (i, b) in [false, true].into_iter().enumerate() {
        env.insert(*v, b);
        outcomes[i] = play(rest, env, leaf);
    }
    env.remove(v);
    match q {
        Quantifier::Forall => outcomes[0] && outcomes[1],
        Quantifier::Exists => outcomes[0] || outcomes[1],
    }
}

pub fn oracle_eval(q: &PrenexQbf) -> bool {
    let matrix = q.matrix().clone();
    play(q.prefix(), &mut Env::new(), &move |env| eval(&matrix, env))
}

fn block(q: Quantifier, vars: &[VarId]) -> Vec<(Quantifier, VarId)> {
    vars.iter().map(|v| (q, *v)).collect()
}

/// Evaluates Φ′ with every clause as its own closed subformula under the
/// outer assignment, without prenexing.
pub fn nested_phi_prime(p: &PhiPrime) -> bool {
    let mut outer = block(Quantifier::Forall, &p.outer_universals);
    outer.extend(block(Quantifier::Exists, &p.outer_existentials));
    play(&outer, &mut Env::new(), &|env| {
        eval(&p.first, env)
            && p.clauses.iter().all(|c| {
                let mut inner = block(Quantifier::Forall, &c.hatted);
                inner.extend(block(Quantifier::Exists, &c.fresh_existentials));
                play(&inner, env, &|env| eval(&c.body, env))
            })
    })
}
