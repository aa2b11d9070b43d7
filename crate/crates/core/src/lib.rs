//! Quantified boolean formulas in prenex form: brute-force evaluation,
//! Skolem certificates with ANF size bounds, the standard-form and Φ′
//! transformations, and exhaustive audits over small corpora.

pub mod audit;
pub mod cli;
pub mod error;
pub mod formula;
pub mod io;
pub mod normalize;
pub mod qbf;
pub mod skolem;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use formula::{AnfPolynomial, Assignment, Formula, TruthTable, VarId};
pub use qbf::{evaluate_qbf, PrenexQbf, Quantifier};
