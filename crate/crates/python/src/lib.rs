//! Python bindings: load a space from the catalog or a file, evaluate its
//! norm and geodesic graph, and fetch verdicts and residual reports as dicts.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use geograph::graphs::{reductivity_verdict, select_graph, GeodesicGraph, VerdictOptions};
use geograph::spacefile::{parse_override, ParsedSpace};
use geograph::verify::sampling::SampleConfig;
use geograph::verify::{fundamental_tensor_residual, graph_battery};

fn to_py_err(e: geograph::Error) -> PyErr {
    match geograph::report::exit_code_for(&e) {
        geograph::report::EXIT_INPUT => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py_obj(py: Python<'_>, v: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn overrides(
    params: Option<&Bound<'_, PyDict>>,
) -> PyResult<Vec<(String, geograph::exactnum::Rat)>> {
    let mut out = Vec::new();
    if let Some(d) = params {
        for (k, v) in d.iter() {
            let item = format!("{}={}", k.str()?, v.str()?);
            out.push(parse_override(&item).map_err(to_py_err)?);
        }
    }
    Ok(out)
}

/// A validated homogeneous space with its invariant norm.
#[pyclass(frozen)]
struct Space {
    inner: ParsedSpace,
}

#[pymethods]
impl Space {
    /// Loads a catalog space; `params` maps parameter names to rationals
    /// (strings such as "3/2", or ints).
    #[staticmethod]
    #[pyo3(signature = (name, params=None))]
    fn catalog(name: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let inner = geograph::catalog::load(name, &overrides(params)?).map_err(to_py_err)?;
        Ok(Space { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, params=None))]
    fn from_file(path: PathBuf, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let inner = ParsedSpace::load(&path, &overrides(params)?).map_err(to_py_err)?;
        Ok(Space { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (text, params=None))]
    fn from_json(text: &str, params: Option<&Bound<'_, PyDict>>) -> PyResult<Self> {
        let inner = ParsedSpace::parse_str(text, &overrides(params)?).map_err(to_py_err)?;
        Ok(Space { inner })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn h_labels(&self) -> Vec<String> {
        self.inner.space.h_labels()
    }

    #[getter]
    fn m_labels(&self) -> Vec<String> {
        self.inner.space.m_labels()
    }

    #[getter]
    fn parameters(&self) -> Vec<(String, String)> {
        self.inner
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py_err)
    }

    /// `F(y)` for `y` in m.
    fn norm(&self, y: Vec<f64>) -> PyResult<f64> {
        self.inner.norm.value(&y).map_err(to_py_err)
    }

    /// The selected geodesic graph at `y`, in the split it lives on
    /// (see `graph_split`).
    fn graph(&self, y: Vec<f64>) -> PyResult<Vec<f64>> {
        self.selected(0)?.eval(&y).map_err(to_py_err)
    }

    fn graph_kind(&self) -> PyResult<String> {
        Ok(self.selected(0)?.provenance().tag().to_string())
    }

    fn graph_split(&self) -> PyResult<Vec<String>> {
        Ok(self.selected(0)?.space().m_labels())
    }

    #[pyo3(signature = (seed=0, samples=500))]
    fn verdict(&self, py: Python<'_>, seed: u64, samples: usize) -> PyResult<Py<PyAny>> {
        let opts = VerdictOptions {
            cfg: SampleConfig::new(samples, seed),
            maximal_isometry_group: self.inner.maximal_isometry_group(),
        };
        let space = self.inner.space.clone();
        let norm = self.inner.norm.clone();
        let v = py
            .detach(move || reductivity_verdict(space, norm, &opts))
            .map_err(to_py_err)?;
        to_py_obj(py, &v)
    }

    /// Residual reports for the norm and the selected graph.
    #[pyo3(signature = (seed=0, samples=500))]
    fn verify(&self, py: Python<'_>, seed: u64, samples: usize) -> PyResult<Py<PyAny>> {
        let cfg = SampleConfig::new(samples, seed);
        let graph = self.selected(seed)?;
        let norm = self.inner.norm.clone();
        let reports = py
            .detach(move || -> geograph::Result<_> {
                let mut r = vec![fundamental_tensor_residual(&norm, &cfg)?];
                r.extend(graph_battery(&graph, &cfg)?);
                Ok(r)
            })
            .map_err(to_py_err)?;
        to_py_obj(py, &reports)
    }

    fn __repr__(&self) -> String {
        format!("Space({:?})", self.inner.name())
    }
}

impl Space {
    fn selected(&self, seed: u64) -> PyResult<GeodesicGraph> {
        select_graph(
            self.inner.space.clone(),
            self.inner.norm.clone(),
            &SampleConfig::new(500, seed),
        )
        .map(|s| s.graph)
        .map_err(to_py_err)
    }
}

/// Names of the built-in spaces.
#[pyfunction]
fn catalog() -> Vec<&'static str> {
    geograph::catalog::names()
}

/// Runs the command-line tool in-process; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let argv = std::iter::once("geograph".to_string()).chain(args);
    let out = geograph::cli::run(argv);
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn pygeograph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
