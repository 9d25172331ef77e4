//! Python bindings. Reports are returned as JSON strings in the same shape as
//! the CLI's structured output.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

use supcomp::cli::parse_json;
use supcomp::ext::parse_rational;
use supcomp::fls::{borel_cantelli_sweep, BoundDoc};
use supcomp::{check as checks, corollary_m10, theorem_m7, BandProjection, Element};

fn value_error(e: supcomp::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

#[pyclass(name = "Element", module = "supcomp_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyElement {
    inner: Element,
}

#[pymethods]
impl PyElement {
    /// `Element(["1/2", "inf", "3"])`.
    #[new]
    fn new(coords: Vec<String>) -> PyResult<Self> {
        Element::parse(&coords).map(|inner| PyElement { inner }).map_err(value_error)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn coords(&self) -> Vec<String> {
        self.inner.to_strings()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", to_json(&self.inner))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.inner.add(&other.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.inner.mul(&other.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn join(&self, other: &PyElement) -> PyResult<PyElement> {
        self.inner.join(&other.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn meet(&self, other: &PyElement) -> PyResult<PyElement> {
        self.inner.meet(&other.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn leq(&self, other: &PyElement) -> PyResult<bool> {
        self.inner.leq(&other.inner).map_err(value_error)
    }

    fn finite_part(&self) -> PyElement {
        PyElement { inner: supcomp::finite_part(&self.inner) }
    }

    fn infinite_part(&self) -> PyElement {
        PyElement { inner: supcomp::infinite_part(&self.inner) }
    }

    fn star(&self) -> PyElement {
        PyElement { inner: supcomp::star(&self.inner) }
    }
}

#[pyclass(name = "Band", module = "supcomp_py", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyBand {
    inner: BandProjection,
}

#[pymethods]
impl PyBand {
    #[new]
    fn new(dim: usize, atoms: Vec<usize>) -> PyResult<Self> {
        BandProjection::new(dim, atoms).map(|inner| PyBand { inner }).map_err(value_error)
    }

    fn atoms(&self) -> Vec<usize> {
        self.inner.to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Band({}, {:?})", self.inner.dim(), self.inner.to_vec())
    }

    fn apply(&self, x: &PyElement) -> PyResult<PyElement> {
        self.inner.apply(&x.inner).map(|inner| PyElement { inner }).map_err(value_error)
    }

    fn complement(&self) -> PyBand {
        PyBand { inner: self.inner.complement() }
    }

    fn meet(&self, other: &PyBand) -> PyResult<PyBand> {
        self.inner.meet(&other.inner).map(|inner| PyBand { inner }).map_err(value_error)
    }

    fn join(&self, other: &PyBand) -> PyResult<PyBand> {
        self.inner.join(&other.inner).map(|inner| PyBand { inner }).map_err(value_error)
    }

    /// `inf` on the band, 0 elsewhere.
    fn infinity(&self) -> PyElement {
        PyElement { inner: supcomp::infinity_of(&self.inner) }
    }
}

#[pyfunction]
fn band_of(x: &PyElement) -> PyBand {
    PyBand { inner: supcomp::band_of(&x.inner) }
}

#[pyfunction]
fn decompose(x: &PyElement) -> (PyElement, PyElement) {
    let (f, i) = supcomp::decompose(&x.inner);
    (PyElement { inner: f }, PyElement { inner: i })
}

#[pyfunction]
fn star(x: &PyElement) -> PyElement {
    x.star()
}

/// Bound report for a JSON bound document.
#[pyfunction]
#[pyo3(signature = (document, corollary = false))]
fn bound(document: &str, corollary: bool) -> PyResult<String> {
    let doc: BoundDoc = parse_json(document).map_err(value_error)?;
    if corollary {
        let events = doc.events().map_err(value_error)?;
        let r = corollary_m10(&doc.cond().map_err(value_error)?, &events, &doc.checkpoints).map_err(value_error)?;
        Ok(to_json(&r))
    } else {
        let seq = doc.seq().map_err(value_error)?;
        theorem_m7(&seq, &doc.checkpoints).map(|r| to_json(&r)).map_err(value_error)
    }
}

#[pyfunction]
fn borel_cantelli(p: Vec<String>, depth: usize) -> PyResult<String> {
    let ps = p.iter().map(|s| parse_rational(s)).collect::<supcomp::Result<Vec<_>>>().map_err(value_error)?;
    let (sweep, monotone) = borel_cantelli_sweep(&ps, depth).map_err(value_error)?;
    Ok(to_json(&json!({
        "report": sweep.last(),
        "ratios": sweep.iter().map(|r| r.fls_ratio.to_string()).collect::<Vec<_>>(),
        "ratio_nondecreasing": monotone,
    })))
}

/// Runs property suites; `lemma="all"` runs every suite.
#[pyfunction]
#[pyo3(signature = (lemma = "all", trials = 500, seed = 0))]
fn check(py: Python<'_>, lemma: &str, trials: usize, seed: u64) -> PyResult<String> {
    if trials == 0 {
        return Err(PyValueError::new_err("trials must be positive"));
    }
    let lemma = lemma.to_string();
    let reports = py.detach(move || {
        if lemma.eq_ignore_ascii_case("all") {
            Ok(checks::run_all(trials, seed))
        } else {
            checks::run_lemma(&lemma, trials, seed).map(|r| vec![r])
        }
    });
    let reports = reports.map_err(value_error)?;
    let ok = reports.iter().all(checks::LemmaReport::ok);
    Ok(to_json(&json!({"seed": seed, "trials": trials, "lemmas": reports, "ok": ok})))
}

#[pymodule]
fn supcomp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyBand>()?;
    m.add_function(wrap_pyfunction!(band_of, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(borel_cantelli, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add("LEMMAS", checks::LEMMAS.to_vec())?;
    Ok(())
}
