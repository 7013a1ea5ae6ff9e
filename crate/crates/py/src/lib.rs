//! Python bindings: lattices, ordered structures and permutation structures.
//!
//! Reports are returned as plain Python objects (dicts and lists) built
//! from the library's JSON serialization.

use std::sync::Arc;

use permlat_core::generic::{extension_property_check, generate_generic, homogeneity_check, GenerationConfig};
use permlat_core::io::{
    parse_lattice, parse_perm, parse_space, parse_structure, write_lattice, write_perm, write_structure,
};
use permlat_core::lattice::{dimension_bounds, meet_irreducibles};
use permlat_core::permstruct::{cameron_enumeration, decode_relations, encode_orders, profile, CoverChoice};
use permlat_core::ultrametric::validate_space;
use permlat_core::{Elem, FiniteLattice, OrderedLambdaStructure, PermStructure};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

create_exception!(permlat, PermlatError, PyValueError);

fn err(e: permlat_core::Error) -> PyErr {
    PermlatError::new_err(e.to_string())
}

/// Converts any serializable report to Python objects via `json.loads`.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PermlatError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Lattice", module = "permlat", frozen)]
struct PyLattice {
    inner: Arc<FiniteLattice>,
}

impl PyLattice {
    fn elem(&self, name: &str) -> PyResult<Elem> {
        self.inner.parse_elem(name).map_err(err)
    }

    fn wrap(l: FiniteLattice) -> Self {
        PyLattice { inner: Arc::new(l) }
    }
}

#[pymethods]
impl PyLattice {
    /// Parses the lattice text format (`elements:` and `cover:` lines).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        parse_lattice(text).map(Self::wrap).map_err(err)
    }

    #[staticmethod]
    fn chain(length: usize) -> PyResult<Self> {
        if !(1..=permlat_core::lattice::MAX_ELEMENTS).contains(&length) {
            return Err(PermlatError::new_err("chain length out of range"));
        }
        Ok(Self::wrap(FiniteLattice::chain(length)))
    }

    #[staticmethod]
    fn boolean(atoms: usize) -> PyResult<Self> {
        if atoms > 6 {
            return Err(PermlatError::new_err("at most 6 atoms"));
        }
        Ok(Self::wrap(FiniteLattice::boolean(atoms)))
    }

    #[staticmethod]
    fn m3() -> Self {
        Self::wrap(FiniteLattice::m3())
    }

    #[staticmethod]
    fn n5() -> Self {
        Self::wrap(FiniteLattice::n5())
    }

    fn to_text(&self) -> String {
        write_lattice(&self.inner)
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({})", self.inner.names().join(" "))
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        Ok(self.inner.leq(self.elem(a)?, self.elem(b)?))
    }

    fn meet(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.inner.name(self.inner.meet(self.elem(a)?, self.elem(b)?)).to_string())
    }

    fn join(&self, a: &str, b: &str) -> PyResult<String> {
        Ok(self.inner.name(self.inner.join(self.elem(a)?, self.elem(b)?)).to_string())
    }

    fn is_distributive(&self) -> bool {
        self.inner.is_distributive()
    }

    fn meet_irreducibles(&self) -> Vec<String> {
        meet_irreducibles(&self.inner).into_iter().map(|e| self.inner.name(e).to_string()).collect()
    }

    /// `(lower, upper)` bounds on the number of linear orders needed.
    fn bounds(&self) -> PyResult<(usize, usize)> {
        let b = dimension_bounds(&self.inner).map_err(err)?;
        Ok((b.lower, b.upper))
    }
}

#[pyclass(name = "Structure", module = "permlat", frozen)]
struct PyStructure {
    inner: OrderedLambdaStructure,
}

#[pymethods]
impl PyStructure {
    /// Parses a self-contained structure file (inline lattice).
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let f = parse_structure(text, None).map_err(err)?;
        let inner = OrderedLambdaStructure::new(f.space, f.orders).map_err(err)?;
        Ok(PyStructure { inner })
    }

    /// Finite approximation of the generic structure with orders given as
    /// `(bottom, top)` element names.
    #[staticmethod]
    #[pyo3(signature = (lattice, orders, size, depth = 2, seed = 0))]
    fn generate(
        py: Python<'_>,
        lattice: &PyLattice,
        orders: Vec<(String, String)>,
        size: usize,
        depth: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let signature =
            orders.iter().map(|(b, t)| Ok((lattice.elem(b)?, lattice.elem(t)?))).collect::<PyResult<Vec<_>>>()?;
        let lat = lattice.inner.clone();
        let cfg = GenerationConfig { seed, target_size: size, saturation_depth: depth };
        let g = py.detach(|| generate_generic(lat, &signature, cfg)).map_err(err)?;
        Ok(PyStructure { inner: g.structure })
    }

    fn to_text(&self) -> String {
        write_structure(&self.inner.space, &self.inner.orders)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn lattice(&self) -> PyLattice {
        PyLattice { inner: self.inner.space.lattice().clone() }
    }

    /// Distance between the `i`-th and `j`-th points, as an element name.
    fn dist(&self, i: usize, j: usize) -> PyResult<String> {
        let n = self.inner.len();
        if i >= n || j >= n {
            return Err(PermlatError::new_err("point index out of range"));
        }
        Ok(self.inner.space.lattice().name(self.inner.space.dist(i, j)).to_string())
    }

    fn extension_check<'py>(&self, py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| extension_property_check(&self.inner, k));
        to_py(py, &r)
    }

    fn homogeneity_check<'py>(&self, py: Python<'py>, m: usize) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| homogeneity_check(&self.inner, m));
        to_py(py, &r)
    }

    /// Tuple of linear orders presenting the structure.
    #[pyo3(signature = (seed = 0))]
    fn encode(&self, seed: u64) -> PyResult<PyPerm> {
        let enc = encode_orders(&self.inner, &CoverChoice::Auto, seed).map_err(err)?;
        Ok(PyPerm { inner: enc.perm })
    }
}

#[pyclass(name = "Perm", module = "permlat", frozen)]
struct PyPerm {
    inner: PermStructure,
}

#[pymethods]
impl PyPerm {
    /// `orders[i][x]` is the rank of point `x` in order `i`.
    #[new]
    fn new(orders: Vec<Vec<u32>>) -> PyResult<Self> {
        PermStructure::new(orders).map(|inner| PyPerm { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        parse_perm(text).map(|inner| PyPerm { inner }).map_err(err)
    }

    fn to_text(&self) -> String {
        write_perm(&self.inner)
    }

    #[getter]
    fn orders(&self) -> Vec<Vec<u32>> {
        self.inner.orders().to_vec()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn decode<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let d = py.detach(|| decode_relations(&self.inner));
        to_py(py, &d)
    }

    /// Pattern counts over ordered `k`-tuples.
    fn profile<'py>(&self, py: Python<'py>, k: usize) -> PyResult<Bound<'py, PyAny>> {
        let p = py.detach(|| profile(&self.inner, k));
        to_py(py, &p.counts)
    }
}

/// Violations of the ultrametric axioms in a self-contained space file.
#[pyfunction]
fn space_violations<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let space = parse_space(text, None).map_err(err)?;
    to_py(py, &validate_space(&space).violations)
}

/// The sweep over structures presentable with two orders.
#[pyfunction]
#[pyo3(signature = (size = 40, seed = 0))]
fn cameron<'py>(py: Python<'py>, size: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| cameron_enumeration(size, seed)).map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
fn permlat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PermlatError", m.py().get_type::<PermlatError>())?;
    m.add_class::<PyLattice>()?;
    m.add_class::<PyStructure>()?;
    m.add_class::<PyPerm>()?;
    m.add_function(wrap_pyfunction!(space_violations, m)?)?;
    m.add_function(wrap_pyfunction!(cameron, m)?)?;
    Ok(())
}
