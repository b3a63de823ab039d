//! Python module `gue_piv`.
//!
//! Exact values cross the boundary as strings (`"3/2"`), so nothing is lost
//! to floating point. Rational arguments accept `int`, `str`,
//! `fractions.Fraction` or a decimal `float` literal; each is parsed from
//! its `str()`. Reports come back as plain dicts built from the JSON form.

use gue::ensemble::{exact_partition, mc_dn, mc_partition, McEstimate};
use gue::numeric::{numeric_recurrence, numeric_verify_difference, numeric_verify_piv_range, NumericConfig};
use gue::verify::verify_table;
use gue::{hankel_det, weight_moments, Rational};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;

fn err(e: gue::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = obj.str()?;
    s.to_str()?.trim().parse().map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

/// Polynomial in `t` with rational coefficients, lowest degree first.
#[pyclass(name = "Poly", module = "gue_piv", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPoly(gue::Poly);

#[pymethods]
impl PyPoly {
    #[new]
    fn new(coeffs: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let c = coeffs.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        Ok(PyPoly(gue::Poly::new(c)))
    }

    /// Coefficients as strings; empty for the zero polynomial.
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(|c| c.to_string()).collect()
    }

    /// `None` for the zero polynomial.
    fn degree(&self) -> Option<usize> {
        self.0.degree()
    }

    fn derivative(&self) -> Self {
        PyPoly(self.0.derivative())
    }

    fn __call__(&self, t: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.0.eval(&rational(t)?).to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({:?})", self.coeffs())
    }
}

/// Reduced quotient of polynomials in `t`, denominator monic.
#[pyclass(name = "RatFn", module = "gue_piv", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRatFn(gue::RatFn);

#[pymethods]
impl PyRatFn {
    #[new]
    fn new(num: &PyPoly, den: &PyPoly) -> PyResult<Self> {
        gue::RatFn::new(num.0.clone(), den.0.clone()).map(PyRatFn).map_err(err)
    }

    #[getter]
    fn num(&self) -> PyPoly {
        PyPoly(self.0.num().clone())
    }

    #[getter]
    fn den(&self) -> PyPoly {
        PyPoly(self.0.den().clone())
    }

    fn derivative(&self) -> Self {
        PyRatFn(self.0.derivative())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Raises `ValueError` at a pole.
    fn __call__(&self, t: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(self.0.eval(&rational(t)?).map_err(err)?.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RatFn({})", self.0)
    }
}

/// Exact recurrence data for `gamma = 2K`.
#[pyclass(name = "RecurrenceTable", module = "gue_piv", frozen, skip_from_py_object)]
pub struct PyTable(gue::RecurrenceTable);

#[pymethods]
impl PyTable {
    #[getter(K)]
    fn k(&self) -> u32 {
        self.0.k
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.0.n_max
    }

    #[getter]
    fn alpha(&self) -> Vec<PyRatFn> {
        self.0.alpha.iter().cloned().map(PyRatFn).collect()
    }

    #[getter]
    fn beta(&self) -> Vec<PyRatFn> {
        self.0.beta.iter().cloned().map(PyRatFn).collect()
    }

    #[getter]
    fn r(&self) -> Vec<PyRatFn> {
        self.0.r.iter().cloned().map(PyRatFn).collect()
    }

    /// Normalized norms `h_n / sqrt(pi)`.
    #[getter]
    fn h(&self) -> Vec<PyRatFn> {
        self.0.h.iter().cloned().map(PyRatFn).collect()
    }

    /// Normalized Hankel determinants, one more than `n_max`.
    #[getter]
    fn dhat(&self) -> Vec<PyPoly> {
        self.0.dhat.iter().cloned().map(PyPoly).collect()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("RecurrenceTable(K={}, n_max={})", self.0.k, self.0.n_max)
    }
}

#[pyfunction]
#[pyo3(name = "recurrence_table", signature = (K, n_max))]
#[allow(non_snake_case)]
fn py_recurrence_table(py: Python<'_>, K: u32, n_max: usize) -> PyResult<PyTable> {
    py.detach(|| gue::recurrence_table(K, n_max)).map(PyTable).map_err(err)
}

/// Every exact identity for `n <= n_max`, as a list of report dicts.
#[pyfunction]
#[pyo3(signature = (K, n_max = 4))]
#[allow(non_snake_case)]
fn verify(py: Python<'_>, K: u32, n_max: usize) -> PyResult<Bound<'_, PyAny>> {
    let reports = py.detach(|| -> gue::Result<_> {
        let tbl = gue::recurrence_table(K, n_max + 1)?;
        Ok(verify_table(&tbl)?.into_iter().filter(|r| r.n <= n_max).collect::<Vec<_>>())
    });
    to_py(py, &reports.map_err(err)?)
}

#[pyfunction]
#[pyo3(name = "theorem2_alpha", signature = (K, n))]
#[allow(non_snake_case)]
fn py_theorem2_alpha(K: u32, n: usize) -> PyResult<PyRatFn> {
    gue::hermite::theorem2_alpha(K, n).map(PyRatFn).map_err(err)
}

/// `(H, Hreal)` for the generalized Hermite polynomial `H_{m,n}`.
#[pyfunction]
fn gen_hermite(m: usize, n: usize) -> PyResult<(PyPoly, PyPoly)> {
    let g = gue::hermite::gen_hermite(m, n).map_err(err)?;
    Ok((PyPoly(g.h), PyPoly(g.hreal)))
}

/// Recurrence coefficients at real `gamma >= 0` and a point `t`, plus the
/// difference-equation and PIV residuals. Reals are decimal strings.
#[pyfunction]
#[pyo3(signature = (gamma, t, n_max = 6, prec = 60, checks = false))]
fn numeric<'py>(
    py: Python<'py>,
    gamma: &Bound<'py, PyAny>,
    t: &Bound<'py, PyAny>,
    n_max: usize,
    prec: u32,
    checks: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (gamma, t) = (rational(gamma)?, rational(t)?);
    let cfg = NumericConfig::with_precision(prec).n_max(n_max);
    cfg.validate().map_err(err)?;
    let rec = py.detach(|| numeric_recurrence(&gamma, &t, &cfg)).map_err(err)?;
    let out = to_py(py, &rec)?;
    if checks {
        let diff = py.detach(|| numeric_verify_difference(&gamma, &t, n_max, &cfg)).map_err(err)?;
        let piv = py.detach(|| numeric_verify_piv_range(&gamma, &t, n_max, &cfg)).map_err(err)?;
        let piv: Vec<_> = piv.into_iter().filter_map(|p| p.ok()).collect();
        out.set_item("difference", to_py(py, &diff)?)?;
        out.set_item("piv", to_py(py, &piv)?)?;
    }
    Ok(out)
}

fn estimate<'py>(py: Python<'py>, est: &McEstimate, exact: &Rational) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("estimate", est.mean)?;
    d.set_item("std_error", est.std_error)?;
    d.set_item("samples", est.samples)?;
    d.set_item("seed", est.seed)?;
    d.set_item("exact", exact.to_string())?;
    d.set_item("z_score", est.z_score(exact.to_f64()))?;
    Ok(d)
}

/// Monte Carlo estimate of `D^_n(t)`, or of the partition function when
/// `t` is `None`.
#[pyfunction]
#[pyo3(signature = (n, K, t = None, samples = 100_000, seed = 0))]
#[allow(non_snake_case)]
fn mc<'py>(
    py: Python<'py>,
    n: usize,
    K: u32,
    t: Option<&Bound<'py, PyAny>>,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    match t {
        Some(t) => {
            let t = rational(t)?;
            let exact = hankel_det(&weight_moments(K, (2 * n).saturating_sub(2)), n).map_err(err)?.eval(&t);
            let est = py.detach(|| mc_dn(n, K, t.to_f64(), samples, seed)).map_err(err)?;
            estimate(py, &est, &exact)
        }
        None => {
            let exact = exact_partition(n, K).map_err(err)?;
            let est = py.detach(|| mc_partition(n, K, samples, seed)).map_err(err)?;
            estimate(py, &est, &exact)
        }
    }
}

#[pymodule]
fn gue_piv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", gue::VERSION)?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyRatFn>()?;
    m.add_class::<PyTable>()?;
    m.add_function(wrap_pyfunction!(py_recurrence_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(py_theorem2_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(gen_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(numeric, m)?)?;
    m.add_function(wrap_pyfunction!(mc, m)?)?;
    Ok(())
}
