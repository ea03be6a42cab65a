use std::sync::Arc;

use pcstab::io::{
    generator_word_to_json, parse_generator_word, parse_matrix, parse_mixed, FactorJson, InventoryJson,
    MatrixJson, PatternJson,
};
use pcstab::{compose_mixed, decompose, factor_semidirect, Context, GeneratorInventory, Graph, Word};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: pcstab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts a serialisable value to Python objects through `json.loads`.
fn to_py<T: serde::Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(json_err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

/// Accepts a JSON string or any object `json.dumps` understands.
fn json_text(obj: &Bound<'_, PyAny>) -> PyResult<String> {
    if let Ok(s) = obj.extract::<String>() {
        return Ok(s);
    }
    obj.py()
        .import("json")?
        .call_method1("dumps", (obj,))?
        .extract::<String>()
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<(String, String)>) -> PyResult<Self> {
        let v: Vec<&str> = vertices.iter().map(String::as_str).collect();
        let e: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Ok(PyGraph {
            inner: Graph::from_named(&v, &e).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: Graph::from_json_str(text).map_err(err)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    fn edges(&self) -> Vec<(String, String)> {
        self.inner
            .edges()
            .into_iter()
            .map(|(x, y)| (self.inner.name(x).to_string(), self.inner.name(y).to_string()))
            .collect()
    }

    fn orth(&self, names: Vec<String>) -> PyResult<Vec<String>> {
        let y = self.set(&names)?;
        Ok(self.inner.set_names(self.inner.orth(y)))
    }

    fn closure(&self, names: Vec<String>) -> PyResult<Vec<String>> {
        let y = self.set(&names)?;
        Ok(self.inner.set_names(self.inner.closure(y)))
    }

    fn is_closed(&self, names: Vec<String>) -> PyResult<bool> {
        Ok(self.inner.is_closed(self.set(&names)?))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph({} vertices, {} edges)",
            self.inner.len(),
            self.inner.edges().len()
        )
    }
}

impl PyGraph {
    fn set(&self, names: &[String]) -> PyResult<pcstab::VertexSet> {
        let n: Vec<&str> = names.iter().map(String::as_str).collect();
        self.inner.set_of(&n).map_err(err)
    }
}

#[pyclass(name = "Word", frozen)]
struct PyWord {
    inner: Word,
}

#[pymethods]
impl PyWord {
    fn __str__(&self) -> String {
        self.inner.to_literal()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.inner.to_literal())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __mul__(&self, other: PyRef<'_, PyWord>) -> PyResult<PyWord> {
        Ok(PyWord {
            inner: self.inner.try_mul(&other.inner).map_err(err)?,
        })
    }

    fn __eq__(&self, other: PyRef<'_, PyWord>) -> bool {
        self.inner == other.inner
    }

    fn inverse(&self) -> PyWord {
        PyWord {
            inner: self.inner.inverse(),
        }
    }

    fn alpha(&self) -> Vec<String> {
        self.inner.group().graph().set_names(self.inner.alpha())
    }

    /// `(d, v)` with `self = d^-1 v d` and `v` cyclically minimal.
    fn cyclic_reduce(&self) -> (PyWord, PyWord) {
        let cd = self.inner.cyclic_reduce();
        (PyWord { inner: cd.conjugator }, PyWord { inner: cd.core })
    }

    fn blocks(&self) -> PyResult<Vec<PyWord>> {
        Ok(self
            .inner
            .block_decomposition()
            .map_err(err)?
            .into_iter()
            .map(|inner| PyWord { inner })
            .collect())
    }
}

#[pyclass(name = "Context", frozen)]
struct PyContext {
    inner: Arc<Context>,
}

#[pymethods]
impl PyContext {
    #[new]
    #[pyo3(signature = (graph, tie_break=None))]
    fn new(graph: PyRef<'_, PyGraph>, tie_break: Option<Vec<String>>) -> PyResult<Self> {
        let g = graph.inner.clone();
        let ctx = match tie_break {
            Some(t) => Context::with_tie_break_names(g, &t),
            None => Context::new(g),
        }
        .map_err(err)?;
        Ok(PyContext { inner: Arc::new(ctx) })
    }

    fn closed_sets(&self) -> Vec<Vec<String>> {
        let g = self.inner.graph();
        self.inner
            .lattice()
            .closed_sets()
            .iter()
            .map(|&y| g.set_names(y))
            .collect()
    }

    fn classes(&self) -> Vec<Vec<String>> {
        let g = self.inner.graph();
        self.inner
            .lattice()
            .classes()
            .iter()
            .map(|&c| g.set_names(c))
            .collect()
    }

    /// Vertices from least to greatest in the matrix order.
    fn order(&self) -> Vec<String> {
        let g = self.inner.graph();
        self.inner
            .order()
            .sequence()
            .iter()
            .map(|&v| g.name(v).to_string())
            .collect()
    }

    fn generators(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let inv = GeneratorInventory::new(&self.inner);
        to_py(py, &InventoryJson::new(&self.inner, &inv))
    }

    #[pyo3(signature = (closed_set=None))]
    fn pattern(&self, py: Python<'_>, closed_set: Option<Vec<String>>) -> PyResult<Py<PyAny>> {
        let y = match closed_set {
            Some(names) => {
                let n: Vec<&str> = names.iter().map(String::as_str).collect();
                self.inner.set(&n).map_err(err)?
            }
            None => self.inner.vertices(),
        };
        let p = self.inner.pattern(y).map_err(err)?;
        to_py(py, &PatternJson::new(&self.inner, p))
    }

    fn word(&self, literal: &str) -> PyResult<PyWord> {
        Ok(PyWord {
            inner: self.inner.word(literal).map_err(err)?,
        })
    }

    /// A random member of `S_X` in matrix JSON form.
    #[pyo3(signature = (seed, bound=5))]
    fn sample_matrix(&self, py: Python<'_>, seed: u64, bound: u32) -> PyResult<Py<PyAny>> {
        let a = self.inner.x_pattern().sample_seeded(bound, seed);
        to_py(py, &MatrixJson::from_matrix(&self.inner, &a))
    }

    fn is_member(&self, matrix: &Bound<'_, PyAny>) -> PyResult<bool> {
        match parse_matrix(&self.inner, &json_text(matrix)?) {
            Ok(_) => Ok(true),
            Err(pcstab::Error::NotMember(_)) => Ok(false),
            Err(e) => Err(err(e)),
        }
    }

    /// Generator atoms whose product is the given matrix.
    fn decompose(&self, py: Python<'_>, matrix: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        let a = parse_matrix(&self.inner, &json_text(matrix)?).map_err(err)?;
        let w = decompose(&self.inner, &a).map_err(err)?;
        to_py(py, &generator_word_to_json(&self.inner, &w))
    }

    /// Matrix of a generator word.
    fn matrix_of(&self, py: Python<'_>, word: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        let w = parse_generator_word(&self.inner, &json_text(word)?).map_err(err)?;
        let a = w
            .to_automap(&self.inner)
            .and_then(|m| m.matrix(&self.inner))
            .map_err(err)?;
        to_py(py, &MatrixJson::from_matrix(&self.inner, &a))
    }

    /// Image of a group element under a generator word.
    fn apply(&self, word: &Bound<'_, PyAny>, literal: &str) -> PyResult<PyWord> {
        let w = parse_generator_word(&self.inner, &json_text(word)?).map_err(err)?;
        let x = self.inner.word(literal).map_err(err)?;
        let image = w.to_automap(&self.inner).and_then(|m| m.apply(&x)).map_err(err)?;
        Ok(PyWord { inner: image })
    }

    /// Splits a composite of stabiliser and conjugating atoms.
    fn factor(&self, py: Python<'_>, composition: &Bound<'_, PyAny>) -> PyResult<Py<PyAny>> {
        let atoms = parse_mixed(&self.inner, &json_text(composition)?).map_err(err)?;
        let theta = compose_mixed(&self.inner, &atoms).map_err(err)?;
        let f = factor_semidirect(&self.inner, &theta.forward).map_err(err)?;
        let passed = f.tau.then(&f.phi).map_err(err)? == theta.forward
            && f.tau.is_conjugating()
            && f.phi.stabilizes_l(&self.inner);
        to_py(py, &FactorJson::new(&self.inner, &f, passed))
    }
}

#[pymodule]
fn pcstab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyContext>()?;
    m.add_class::<PyWord>()?;
    Ok(())
}
