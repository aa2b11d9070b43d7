use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qbflab_core::audit::{self, ClaimParams, CorpusParams, MatrixFamily};
use qbflab_core::io::{self as qio, Format};
use qbflab_core::normalize::{build_phi_prime, prenex_phi_prime, prenex_phi_prime_shared, to_standard_form, StandardFormQbf};
use qbflab_core::qbf::{classify_prefix, evaluate_qbf_with, EvalOptions, PrenexQbf};
use qbflab_core::skolem::{self, SkolemCertificate};
use qbflab_core::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } | Error::ArityOverflow { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn format_of(name: &str) -> PyResult<Format> {
    match name {
        "text" => Ok(Format::Text),
        "qdimacs" => Ok(Format::Qdimacs),
        other => Err(PyValueError::new_err(format!("unknown format {other:?}"))),
    }
}

/// A closed prenex QBF.
#[pyclass(name = "Qbf", module = "qbflab", frozen)]
struct Qbf {
    inner: PrenexQbf,
}

#[pymethods]
impl Qbf {
    #[staticmethod]
    #[pyo3(signature = (text, format = "text"))]
    fn parse(text: &str, format: &str) -> PyResult<Self> {
        let inner = qio::parse(text, format_of(format)?).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(Qbf { inner })
    }

    #[pyo3(signature = (format = "text"))]
    fn dump(&self, format: &str) -> PyResult<String> {
        qio::print(&self.inner, format_of(format)?).map_err(to_py)
    }

    fn __str__(&self) -> String {
        qio::print_qbf(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Qbf({:?})", qio::print_qbf(&self.inner))
    }

    /// `(quantifier, name)` pairs, quantifier being "forall" or "exists".
    #[getter]
    fn prefix(&self) -> Vec<(&'static str, String)> {
        self.inner
            .prefix()
            .iter()
            .map(|(q, v)| (q.keyword(), self.inner.name(*v).into_owned()))
            .collect()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    fn evaluate(&self) -> PyResult<bool> {
        Ok(evaluate_qbf_with(&self.inner, EvalOptions::default()).map_err(to_py)?.value)
    }

    /// `(value, visited_nodes)` with short-circuiting switched as requested.
    #[pyo3(signature = (short_circuit = true))]
    fn evaluate_traced(&self, short_circuit: bool) -> PyResult<(bool, u64)> {
        let o = evaluate_qbf_with(&self.inner, EvalOptions { short_circuit }).map_err(to_py)?;
        Ok((o.value, o.visited_nodes))
    }

    /// `(side, level)`, e.g. `("PI", 4)`.
    fn classify(&self) -> (String, usize) {
        let c = classify_prefix(&self.inner);
        let s = c.to_string();
        (s.split(' ').next().unwrap_or_default().to_string(), c.level)
    }

    /// `(standard_form, mapping_json)`.
    fn to_standard_form(&self) -> (Qbf, String) {
        let (s, mapping) = to_standard_form(&self.inner);
        (Qbf { inner: s.into_qbf() }, mapping.to_json())
    }

    /// Prenexed Φ′ of the standard form of this formula.
    #[pyo3(signature = (shared = false))]
    fn phi_prime(&self, shared: bool) -> Qbf {
        let s = StandardFormQbf::from_qbf(self.inner.clone()).unwrap_or_else(|_| to_standard_form(&self.inner).0);
        let p = build_phi_prime(&s);
        let inner = if shared {
            prenex_phi_prime_shared(&p)
        } else {
            prenex_phi_prime(&p)
        };
        Qbf { inner }
    }

    /// Certificate JSON of the first witness, or `None` when the formula is false.
    #[pyo3(signature = (budget = skolem::DEFAULT_SEARCH_BUDGET))]
    fn skolem_certificate(&self, budget: u64) -> PyResult<Option<String>> {
        let found = skolem::exists_skolem_witness_with_budget(&self.inner, budget).map_err(to_py)?;
        Ok(found.map(|c| c.to_json()))
    }

    fn verify_certificate(&self, certificate_json: &str) -> PyResult<bool> {
        let c = SkolemCertificate::from_json(certificate_json).map_err(to_py)?;
        skolem::verify_certificate(&self.inner, &c).map_err(to_py)
    }

    fn bounded_skolem(&self, bound: usize) -> PyResult<bool> {
        skolem::bounded_skolem_decision(&self.inner, bound).map_err(to_py)
    }

    fn __eq__(&self, other: &Qbf) -> bool {
        self.inner == other.inner
    }
}

/// Runs a named audit and returns its report as JSON.
#[pyfunction]
#[pyo3(signature = (claim_id, n = 2, seed = 0, family = "exhaustive2var", pair = None, max_clauses = 2, count = 100, max_depth = 4, k_max = 10, max_vars = 4, ordered_pairs_only = false))]
#[allow(clippy::too_many_arguments)]
fn run_audit(
    py: Python<'_>,
    claim_id: &str,
    n: usize,
    seed: u64,
    family: &str,
    pair: Option<(usize, usize)>,
    max_clauses: usize,
    count: usize,
    max_depth: usize,
    k_max: usize,
    max_vars: usize,
    ordered_pairs_only: bool,
) -> PyResult<String> {
    let family = match family {
        "exhaustive2var" => MatrixFamily::Exhaustive2Var { pair },
        "random-ast" => MatrixFamily::RandomAst { count, max_depth },
        "all-small-cnf" => MatrixFamily::AllSmallCnf { max_clauses },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    let params = ClaimParams {
        corpus: CorpusParams { seed, n, family },
        ordered_pairs_only,
        k_max,
        max_vars,
    };
    let report = py.detach(|| audit::run_claim(claim_id, &params)).map_err(to_py)?;
    Ok(report.to_json())
}

/// `(table, forall_exists, exists_forall, swap_equal)` for all 16 functions.
#[pyfunction]
fn swap_criterion() -> Vec<(String, bool, bool, bool)> {
    audit::audit_swap_criterion()
        .into_iter()
        .map(|r| (r.table, r.forall_exists, r.exists_forall, r.swap_equal))
        .collect()
}

/// `(k, table_bits, anf_size)` for the parity family.
#[pyfunction]
fn skolem_blowup(k_max: usize) -> PyResult<Vec<(usize, usize, usize)>> {
    Ok(audit::measure_skolem_blowup(k_max)
        .map_err(to_py)?
        .into_iter()
        .map(|r| (r.k, r.table_bits, r.anf_size))
        .collect())
}

#[pymodule]
fn qbflab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Qbf>()?;
    m.add_function(wrap_pyfunction!(run_audit, m)?)?;
    m.add_function(wrap_pyfunction!(swap_criterion, m)?)?;
    m.add_function(wrap_pyfunction!(skolem_blowup, m)?)?;
    m.add("CLAIM_IDS", audit::CLAIM_IDS.to_vec())?;
    Ok(())
}
