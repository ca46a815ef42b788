//! Python bindings. Rich results (kernels, census, verification reports) come
//! back as plain dicts decoded from their JSON form.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use invlab_core::decycler::{decycle as core_decycle, verify_family, Strategy};
use invlab_core::f2::{encode_backward, pi_signature as core_pi_signature};
use invlab_core::generators as gen;
use invlab_core::invertibility::{oriented_graph_invertible, tournament_invertible, tournaments_equivalent};
use invlab_core::kernel::{kernelize as core_kernelize, parse_eps, FasMode, KernelConfig};
use invlab_core::oracle::{exact_inv_with_cap, orbit_census_with_cap, DEFAULT_CAP_BITS};
use invlab_core::{io, InvError, InversionFamily, OrientedGraph, SizeMode, Tournament};

create_exception!(invlab, InvlabError, PyException);
create_exception!(invlab, InputError, InvlabError);
create_exception!(invlab, UnsupportedRangeError, InvlabError);
create_exception!(invlab, CapacityError, InvlabError);
create_exception!(invlab, ModeError, InvlabError);

fn err(e: InvError) -> PyErr {
    match e {
        InvError::Input(m) => InputError::new_err(m),
        InvError::UnsupportedRange(m) => UnsupportedRangeError::new_err(m),
        InvError::Capacity(m) => CapacityError::new_err(m),
        InvError::Mode(m) => ModeError::new_err(m),
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (io::to_json(value),))
}

fn size_mode(p: usize, mode: &str) -> PyResult<SizeMode> {
    match mode {
        "eq" => Ok(SizeMode::Exact(p)),
        "leq" => Ok(SizeMode::AtMost(p)),
        other => Err(InputError::new_err(format!("mode must be \"eq\" or \"leq\", got {other:?}"))),
    }
}

/// An oriented graph on vertices `0..n`.
#[pyclass(name = "Graph", eq, frozen, skip_from_py_object, module = "invlab")]
#[derive(Clone, PartialEq)]
pub struct PyGraph {
    inner: OrientedGraph,
}

impl From<OrientedGraph> for PyGraph {
    fn from(inner: OrientedGraph) -> Self {
        PyGraph { inner }
    }
}

impl From<Tournament> for PyGraph {
    fn from(t: Tournament) -> Self {
        t.into_graph().into()
    }
}

impl PyGraph {
    fn tournament(&self) -> PyResult<Tournament> {
        Tournament::try_from(self.inner.clone()).map_err(err)
    }
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, arcs=Vec::new()))]
    fn new(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        OrientedGraph::from_arcs(n, arcs).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::from_json::<OrientedGraph>(text).map(Into::into).map_err(err)
    }

    #[staticmethod]
    fn from_dot(text: &str) -> PyResult<Self> {
        io::parse_dot(text).map(Into::into).map_err(err)
    }

    fn to_json(&self) -> String {
        io::to_json(&self.inner)
    }

    #[pyo3(signature = (names=None))]
    fn to_dot(&self, names: Option<Vec<String>>) -> String {
        io::to_dot(&self.inner, names.as_deref())
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.order()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs().collect()
    }

    fn has_arc(&self, u: usize, v: usize) -> bool {
        self.inner.has_arc(u, v)
    }

    fn is_tournament(&self) -> bool {
        self.inner.is_tournament()
    }

    fn is_acyclic(&self) -> bool {
        invlab_core::is_acyclic(&self.inner)
    }

    /// Reverses every arc inside `vertices`.
    fn invert(&self, vertices: Vec<usize>) -> PyResult<Self> {
        invlab_core::invert(&self.inner, &vertices).map(Into::into).map_err(err)
    }

    fn apply(&self, family: &PyFamily) -> PyResult<Self> {
        invlab_core::apply_family(&self.inner, &family.inner).map(Into::into).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, arcs={})", self.inner.order(), self.inner.arc_count())
    }
}

/// An ordered list of vertex sets with a size mode (`"eq"` or `"leq"`).
#[pyclass(name = "Family", eq, frozen, skip_from_py_object, module = "invlab")]
#[derive(Clone, PartialEq)]
pub struct PyFamily {
    inner: InversionFamily,
}

#[pymethods]
impl PyFamily {
    #[new]
    #[pyo3(signature = (p, sets, mode="eq"))]
    fn new(p: usize, sets: Vec<Vec<usize>>, mode: &str) -> PyResult<Self> {
        Ok(PyFamily {
            inner: InversionFamily::with_sets(size_mode(p, mode)?, sets),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::from_json(text).map(|inner| PyFamily { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        io::to_json(&self.inner)
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.mode.p()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode {
            SizeMode::Exact(_) => "eq",
            SizeMode::AtMost(_) => "leq",
        }
    }

    #[getter]
    fn sets(&self) -> Vec<Vec<usize>> {
        self.inner.sets.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Family(p={}, mode={:?}, sets={})", self.p(), self.mode(), self.inner.len())
    }
}

#[pyfunction]
fn transitive_tournament(n: usize) -> PyGraph {
    gen::transitive_tournament(n).into()
}

#[pyfunction]
fn reversed_arc_tournament(n: usize) -> PyResult<PyGraph> {
    gen::reversed_arc_tournament(n).map(Into::into).map_err(err)
}

#[pyfunction]
fn diregular_tournament(k: usize) -> PyResult<PyGraph> {
    gen::diregular_tournament(k).map(Into::into).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn random_tournament(n: usize, seed: u64) -> PyGraph {
    gen::random_tournament(n, seed).into()
}

#[pyfunction]
#[pyo3(signature = (n, density, seed=0))]
fn random_oriented_graph(n: usize, density: f64, seed: u64) -> PyResult<PyGraph> {
    gen::random_oriented_graph(n, density, seed).map(Into::into).map_err(err)
}

/// Whether some family of `p`-sets makes `g` acyclic.
#[pyfunction]
fn is_invertible(g: &PyGraph, p: usize) -> PyResult<bool> {
    if g.inner.is_tournament() {
        tournament_invertible(&g.tournament()?, p).map_err(err)
    } else {
        oriented_graph_invertible(&g.inner, p).map_err(err)
    }
}

#[pyfunction]
fn are_equivalent(a: &PyGraph, b: &PyGraph, p: usize) -> PyResult<bool> {
    tournaments_equivalent(&a.tournament()?, &b.tournament()?, p).map_err(err)
}

/// Invariant signature of the backward-arc vector under `p`-inversions, as bits.
#[pyfunction]
fn pi_signature(g: &PyGraph, p: usize) -> PyResult<Vec<bool>> {
    let t = g.tournament()?;
    core_pi_signature(&encode_backward(&t), p).map(|s| s.bits).map_err(err)
}

/// Returns `(family, info)`; `info` holds the bound and FAS details.
#[pyfunction]
#[pyo3(signature = (g, p, strategy="fas"))]
fn decycle<'py>(py: Python<'py>, g: &PyGraph, p: usize, strategy: &str) -> PyResult<(PyFamily, Bound<'py, PyAny>)> {
    let strategy: Strategy = strategy.parse().map_err(err)?;
    let r = core_decycle(&g.inner, p, strategy).map_err(err)?;
    let info = serde_json::json!({
        "strategy": strategy.name(),
        "bound": r.bound,
        "proof_bound": r.proof_bound,
        "fas_size": r.fas_size,
        "fas_exact": r.fas_exact,
    });
    Ok((PyFamily { inner: r.family }, to_py(py, &info)?))
}

/// Exact inversion number, or `None` when no family decycles `g`.
#[pyfunction]
#[pyo3(signature = (g, p, mode="eq", cap_bits=DEFAULT_CAP_BITS))]
fn exact_inv(g: &PyGraph, p: usize, mode: &str, cap_bits: usize) -> PyResult<Option<usize>> {
    exact_inv_with_cap(&g.inner, size_mode(p, mode)?, cap_bits)
        .map(|v| v.finite())
        .map_err(err)
}

#[pyfunction]
fn verify<'py>(py: Python<'py>, g: &PyGraph, family: &PyFamily) -> PyResult<Bound<'py, PyAny>> {
    let rep = verify_family(&g.inner, &family.inner, family.inner.mode).map_err(err)?;
    to_py(py, &rep)
}

#[pyfunction]
#[pyo3(signature = (t, p, k, eps="1/2", fas="auto"))]
fn kernelize<'py>(py: Python<'py>, t: &PyGraph, p: usize, k: usize, eps: &str, fas: &str) -> PyResult<Bound<'py, PyAny>> {
    let fas = match fas {
        "auto" => FasMode::Auto,
        "exact" => FasMode::Exact,
        "heuristic" => FasMode::Heuristic,
        other => return Err(InputError::new_err(format!("unknown fas mode {other:?}"))),
    };
    let cfg = KernelConfig::new(p, k)
        .with_eps(parse_eps(eps).map_err(err)?)
        .with_fas_mode(fas);
    let kernel = core_kernelize(&t.tournament()?, &cfg).map_err(err)?;
    to_py(py, &kernel)
}

#[pyfunction]
#[pyo3(signature = (n, p, cap_bits=DEFAULT_CAP_BITS))]
fn census<'py>(py: Python<'py>, n: usize, p: usize, cap_bits: usize) -> PyResult<Bound<'py, PyAny>> {
    let c = orbit_census_with_cap(n, p, cap_bits).map_err(err)?;
    to_py(py, &c)
}

#[pymodule]
fn invlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyGraph>()?;
    m.add_class::<PyFamily>()?;
    m.add("InvlabError", py.get_type::<InvlabError>())?;
    m.add("InputError", py.get_type::<InputError>())?;
    m.add("UnsupportedRangeError", py.get_type::<UnsupportedRangeError>())?;
    m.add("CapacityError", py.get_type::<CapacityError>())?;
    m.add("ModeError", py.get_type::<ModeError>())?;
    m.add_function(wrap_pyfunction!(transitive_tournament, m)?)?;
    m.add_function(wrap_pyfunction!(reversed_arc_tournament, m)?)?;
    m.add_function(wrap_pyfunction!(diregular_tournament, m)?)?;
    m.add_function(wrap_pyfunction!(random_tournament, m)?)?;
    m.add_function(wrap_pyfunction!(random_oriented_graph, m)?)?;
    m.add_function(wrap_pyfunction!(is_invertible, m)?)?;
    m.add_function(wrap_pyfunction!(are_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(pi_signature, m)?)?;
    m.add_function(wrap_pyfunction!(decycle, m)?)?;
    m.add_function(wrap_pyfunction!(exact_inv, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    Ok(())
}
