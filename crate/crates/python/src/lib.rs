//! Python bindings: contexts, series arithmetic, the expression evaluator,
//! commutators and the verification harness.

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PySyntaxError, PyValueError};
use pyo3::prelude::*;

use skewlab::cli::verify::{run_verify, TrialCounts, VerifyConfig};
use skewlab::cli::{build_context, eval_str, parse_expr};
use skewlab::exactfield::SkewContext;
use skewlab::grouplab;
use skewlab::skewseries::{SkewLaurentSeries, Valuation};
use skewlab::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Usage(m) => PyValueError::new_err(m),
        Error::Domain(m) => PyArithmeticError::new_err(m),
        e @ Error::Syntax { .. } => PySyntaxError::new_err(e.to_string()),
    }
}

/// A coefficient field with its automorphism.
#[pyclass(name = "Context", frozen)]
struct PyContext {
    inner: Arc<SkewContext>,
}

#[pymethods]
impl PyContext {
    #[new]
    #[pyo3(signature = (field = "q-u", sigma = None))]
    fn new(field: &str, sigma: Option<&str>) -> PyResult<Self> {
        Ok(PyContext {
            inner: build_context(field, sigma).map_err(to_py)?,
        })
    }

    /// Evaluates an expression such as `"comm(t, u)"` at precision `prec`.
    #[pyo3(signature = (expr, prec = 32))]
    fn eval(&self, expr: &str, prec: i64) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: eval_str(expr, &self.inner, prec).map_err(to_py)?,
        })
    }

    /// The order of sigma, or `None` when infinite.
    fn sigma_order(&self) -> Option<u64> {
        match self.inner.sigma_order() {
            skewlab::exactfield::AutOrder::Finite(n) => Some(n),
            skewlab::exactfield::AutOrder::Infinite => None,
        }
    }

    fn __repr__(&self) -> String {
        format!("Context({})", self.inner.describe())
    }
}

/// A truncated series `sum a_i t^i + O(t^P)`.
#[pyclass(name = "Series", frozen)]
struct PySeries {
    inner: SkewLaurentSeries,
}

fn wrap(r: skewlab::Result<SkewLaurentSeries>) -> PyResult<PySeries> {
    r.map(|inner| PySeries { inner }).map_err(to_py)
}

#[pymethods]
impl PySeries {
    fn __add__(&self, other: &PySeries) -> PyResult<PySeries> {
        wrap(self.inner.add(&other.inner))
    }

    fn __sub__(&self, other: &PySeries) -> PyResult<PySeries> {
        wrap(self.inner.sub(&other.inner))
    }

    fn __mul__(&self, other: &PySeries) -> PyResult<PySeries> {
        wrap(self.inner.mul(&other.inner))
    }

    fn __neg__(&self) -> PySeries {
        PySeries {
            inner: self.inner.negate(),
        }
    }

    fn __pow__(&self, k: i64, modulo: Option<i64>) -> PyResult<PySeries> {
        if modulo.is_some() {
            return Err(PyValueError::new_err("modular power is not defined"));
        }
        wrap(self.inner.power(k))
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn inverse(&self) -> PyResult<PySeries> {
        wrap(self.inner.inverse())
    }

    fn mul_incremental(&self, other: &PySeries) -> PyResult<PySeries> {
        wrap(self.inner.mul_incremental(&other.inner))
    }

    fn equals_to_precision(&self, other: &PySeries) -> bool {
        self.inner.equals_to_precision(&other.inner)
    }

    /// Lead exponent, or `None` for a series that is zero at its precision.
    fn valuation(&self) -> Option<i64> {
        match self.inner.valuation() {
            Valuation::Finite(n) => Some(n),
            Valuation::Zero => None,
        }
    }

    #[getter]
    fn precision(&self) -> i64 {
        self.inner.precision()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Coefficient of `t^k` as text, or `None` beyond the precision.
    fn coeff(&self, k: i64) -> Option<String> {
        self.inner.coeff(k).map(|c| c.to_string())
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }
}

/// `((x*y)*x^-1)*y^-1`.
#[pyfunction]
fn commutator(x: &PySeries, y: &PySeries) -> PyResult<PySeries> {
    grouplab::commutator(&x.inner, &y.inner)
        .map(|r| PySeries { inner: r.value })
        .map_err(to_py)
}

/// Parses an expression and returns its canonical printed form.
#[pyfunction]
fn parse(text: &str) -> PyResult<String> {
    parse_expr(text).map(|e| e.to_string()).map_err(to_py)
}

/// Runs the verification harness; returns the report as a JSON string.
/// `trials` sets every trial count (default counts when `None`).
#[pyfunction]
#[pyo3(signature = (ctx, trials = None, seed = 42, prec = 32, k_max = 3))]
fn verify(ctx: &PyContext, trials: Option<usize>, seed: u64, prec: i64, k_max: i64) -> PyResult<String> {
    let mut cfg = VerifyConfig::new(ctx.inner.clone());
    cfg.seed = seed;
    cfg.precision = prec;
    cfg.k_max = k_max;
    if let Some(n) = trials {
        cfg.trials = TrialCounts::all(n);
    }
    let report = run_verify(&cfg).map_err(to_py)?;
    Ok(serde_json::to_string(&report.to_json()).expect("report serializes"))
}

#[pymodule]
fn pyskewlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyContext>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(commutator, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
