use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use infshift::algebra::{block_code_images, verify_ck_family, AlgebraElement, CkVerdict, ImageMap};
use infshift::code::{compose, higher_block_code, verify_conjugacy, ConjugacyWitness, NamedCode, Verification};
use infshift::groupoid::{Groupoid, GroupoidElement};
use infshift::space::{Classification, Membership, ShiftPresentation};
use infshift::topology::{metric_d, metric_da};
use infshift::{BoundaryPath, Graph, Seq, Word};

fn value_error<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite, infinite eventually periodic or empty sequence.
#[pyclass(name = "Seq", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PySeq(Seq);

#[pymethods]
impl PySeq {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PySeq).map_err(value_error)
    }

    fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }

    /// Number of entries, or None when infinite.
    fn length(&self) -> Option<usize> {
        match self.0.len() {
            infshift::Length::Finite(n) => Some(n),
            infshift::Length::Infinite => None,
        }
    }

    fn shift(&self) -> PySeq {
        PySeq(self.0.shift())
    }

    fn prefix(&self, n: usize) -> Option<String> {
        self.0.prefix(n).map(|w| w.to_string())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Seq('{}')", self.0)
    }
}

#[pyclass(name = "Graph", frozen)]
struct PyGraph(Arc<Graph>);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Graph::parse(text).map(|g| PyGraph(Arc::new(g))).map_err(value_error)
    }

    #[staticmethod]
    fn g1() -> Self {
        PyGraph(Arc::new(Graph::g1()))
    }

    fn higher_block_graph(&self, n: usize) -> PyResult<PyGraph> {
        self.0.higher_block_graph(n).map(|g| PyGraph(Arc::new(g))).map_err(value_error)
    }

    /// Paths of length n within the horizon, as dotted edge words.
    #[pyo3(signature = (n, horizon = 8))]
    fn paths(&self, n: usize, horizon: u64) -> Vec<String> {
        self.0.all_paths(n, horizon).paths.iter().map(|p| p.to_string()).collect()
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }
}

#[pyclass(name = "Shift", frozen)]
struct PyShift(ShiftPresentation);

#[pymethods]
impl PyShift {
    /// Parses a presentation file; `shift edges` lines are not allowed here,
    /// use `Shift.edges` instead.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let no_files = |p: &str| Err(std::io::Error::other(format!("cannot load `{p}` from Python")));
        ShiftPresentation::parse(text, no_files).map(PyShift).map_err(value_error)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        ShiftPresentation::builtin(name).map(PyShift).map_err(value_error)
    }

    #[staticmethod]
    fn edges(graph: &PyGraph) -> PyResult<Self> {
        ShiftPresentation::edge_shift((*graph.0).clone()).map(PyShift).map_err(value_error)
    }

    /// "Yes", "No" or "PartialYes".
    fn contains(&self, x: &PySeq) -> &'static str {
        match self.0.contains(&x.0) {
            Membership::Yes => "Yes",
            Membership::No => "No",
            Membership::PartialYes => "PartialYes",
        }
    }

    #[pyo3(signature = (n, horizon = 8))]
    fn blocks(&self, n: usize, horizon: u64) -> Vec<String> {
        let mut v: Vec<String> = self.0.block_language(n, horizon).words.iter().map(Word::to_string).collect();
        v.sort();
        v
    }

    #[pyo3(signature = (horizon = 8))]
    fn classify(&self, horizon: u64) -> &'static str {
        match self.0.classify(horizon) {
            Classification::FiniteSymbol => "FiniteSymbol",
            Classification::RowFiniteInfinite => "RowFiniteInfinite",
            Classification::NotRowFinite => "NotRowFinite",
            Classification::Unknown => "Unknown",
        }
    }

    /// The higher block code, its inverse, and the target shift.
    #[pyo3(signature = (n, horizon = 8))]
    fn higher_block(&self, n: usize, horizon: u64) -> PyResult<(PyCode, PyCode, PyShift)> {
        let hb = higher_block_code(&self.0, n, horizon).map_err(value_error)?;
        Ok((
            PyCode(NamedCode { name: format!("phi{n}"), code: hb.forward }),
            PyCode(NamedCode { name: format!("pi{n}"), code: hb.backward }),
            PyShift(hb.target),
        ))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// A sliding block code in the block-map file format.
#[pyclass(name = "Code", frozen)]
struct PyCode(NamedCode);

#[pymethods]
impl PyCode {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        NamedCode::parse(text).map(PyCode).map_err(value_error)
    }

    fn apply(&self, x: &PySeq) -> PyResult<PySeq> {
        self.0.code.apply(&x.0).map(PySeq).map_err(value_error)
    }

    fn window(&self) -> Option<usize> {
        self.0.code.window()
    }

    /// Apply self, then `psi`.
    fn then(&self, psi: &PyCode) -> PyResult<PyCode> {
        let code = compose(&self.0.code, &psi.0.code).map_err(value_error)?;
        Ok(PyCode(NamedCode { name: format!("{}_then_{}", self.0.name, psi.0.name), code }))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

/// Checks a conjugacy witness; returns ("VerifiedToDepth", depth) or
/// ("Refuted", counterexample).
#[pyfunction]
#[pyo3(signature = (forward, backward, source, target, depth, samples, horizon = 8))]
fn check_conjugacy(
    forward: &PyCode,
    backward: &PyCode,
    source: &PyShift,
    target: &PyShift,
    depth: usize,
    samples: Vec<PySeq>,
    horizon: u64,
) -> (String, String) {
    let mut w = ConjugacyWitness::new(
        forward.0.code.clone(),
        backward.0.code.clone(),
        source.0.clone(),
        target.0.clone(),
    );
    w.horizon = horizon;
    let samples: Vec<Seq> = samples.into_iter().map(|s| s.0).collect();
    match verify_conjugacy(&w, depth, &samples) {
        Verification::VerifiedToDepth(d) => ("VerifiedToDepth".into(), d.to_string()),
        Verification::Refuted(c) => ("Refuted".into(), c.to_string()),
        Verification::Unchecked => ("Unchecked".into(), String::new()),
    }
}

/// d_A or D as a string `1/2^e` (or `0`).
#[pyfunction]
#[pyo3(signature = (x, y, kind = "da"))]
fn distance(x: &PySeq, y: &PySeq, kind: &str) -> PyResult<String> {
    let d = match kind {
        "da" => metric_da(&x.0, &y.0),
        "d" => metric_d(&x.0, &y.0),
        other => return Err(PyValueError::new_err(format!("unknown metric `{other}`"))),
    };
    d.map(|d| d.to_string()).map_err(value_error)
}

/// An element of the Leavitt path algebra over the rationals.
#[pyclass(name = "Element", frozen)]
struct PyElement(AlgebraElement);

#[pymethods]
impl PyElement {
    #[new]
    fn new(graph: &PyGraph, text: &str) -> PyResult<Self> {
        AlgebraElement::parse(&graph.0, text).map(PyElement).map_err(value_error)
    }

    fn __add__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.add(&other.0).map(PyElement).map_err(value_error)
    }

    fn __sub__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.sub(&other.0).map(PyElement).map_err(value_error)
    }

    fn __mul__(&self, other: &PyElement) -> PyResult<PyElement> {
        self.0.multiply(&other.0).map(PyElement).map_err(value_error)
    }

    fn adjoint(&self) -> PyElement {
        PyElement(self.0.adjoint())
    }

    /// Equality in the algebra, not just of normal forms.
    fn equals(&self, other: &PyElement) -> PyResult<bool> {
        self.0.equal(&other.0).map_err(value_error)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

#[pyclass(name = "Images", frozen)]
struct PyImages(ImageMap);

#[pymethods]
impl PyImages {
    /// Generator images induced by a bounded block code from E-paths onto F-edges.
    #[new]
    fn new(e: &PyGraph, f: &PyGraph, phi: &PyCode) -> PyResult<Self> {
        let map = phi
            .0
            .code
            .block_map()
            .ok_or_else(|| PyValueError::new_err("needs a bounded code"))?;
        block_code_images(&e.0, &f.0, map).map(PyImages).map_err(value_error)
    }

    fn edge(&self, name: &str) -> PyResult<PyElement> {
        let s = name.parse().map_err(value_error)?;
        self.0.edges.get(&s).map(|x| PyElement(x.clone())).ok_or_else(|| PyValueError::new_err("no such edge"))
    }

    fn vertex(&self, name: &str) -> PyResult<PyElement> {
        let s = name.parse().map_err(value_error)?;
        self.0.vertices.get(&s).map(|x| PyElement(x.clone())).ok_or_else(|| PyValueError::new_err("no such vertex"))
    }

    fn apply(&self, x: &PyElement) -> PyResult<PyElement> {
        self.0.apply(&x.0).map(PyElement).map_err(value_error)
    }

    /// ("Valid", counts) or ("FailedRelation", "relation: witness").
    fn verify(&self) -> PyResult<(String, String)> {
        Ok(match verify_ck_family(&self.0).map_err(value_error)? {
            CkVerdict::Valid {
                projections,
                orthogonal_pairs,
                ck1,
                ck2,
            } => (
                "Valid".into(),
                format!("projections={projections} orthogonal_pairs={orthogonal_pairs} ck1={ck1} ck2={ck2}"),
            ),
            CkVerdict::FailedRelation { relation, witness } => ("FailedRelation".into(), format!("{relation}: {witness}")),
        })
    }
}

#[pyclass(name = "Groupoid", frozen)]
struct PyGroupoid(Groupoid);

#[pyclass(name = "GroupoidElement", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGroupoidElement(GroupoidElement);

#[pymethods]
impl PyGroupoidElement {
    fn x(&self) -> String {
        self.0.x().to_string()
    }

    fn k(&self) -> i64 {
        self.0.k()
    }

    fn y(&self) -> String {
        self.0.y().to_string()
    }

    fn inverse(&self) -> PyGroupoidElement {
        PyGroupoidElement(self.0.inverse())
    }

    fn is_unit(&self) -> bool {
        self.0.is_unit()
    }

    fn __str__(&self) -> String {
        format!("{};{};{}", self.0.x(), self.0.k(), self.0.y())
    }
}

#[pymethods]
impl PyGroupoid {
    #[new]
    fn new(graph: &PyGraph) -> PyResult<Self> {
        Groupoid::new(graph.0.clone()).map(PyGroupoid).map_err(value_error)
    }

    /// A boundary path is an eventually periodic sequence, `e.f`, or `@v`.
    fn element(&self, x: &str, k: i64, y: &str) -> PyResult<PyGroupoidElement> {
        let x = self.boundary(x)?;
        let y = self.boundary(y)?;
        self.0.from_triple(&x, k, &y).map(PyGroupoidElement).map_err(value_error)
    }

    fn unit(&self, x: &str) -> PyResult<PyGroupoidElement> {
        let x = self.boundary(x)?;
        self.0.unit(&x).map(PyGroupoidElement).map_err(value_error)
    }

    fn compose(&self, a: &PyGroupoidElement, b: &PyGroupoidElement) -> PyResult<PyGroupoidElement> {
        self.0.compose(&a.0, &b.0).map(PyGroupoidElement).map_err(value_error)
    }
}

impl PyGroupoid {
    fn boundary(&self, text: &str) -> PyResult<BoundaryPath> {
        if text.contains('(') {
            return text.parse().map(BoundaryPath::Infinite).map_err(value_error);
        }
        self.0.graph().parse_path(text).map(BoundaryPath::Finite).map_err(value_error)
    }
}

#[pymodule]
#[pyo3(name = "infshift")]
fn infshift_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeq>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyShift>()?;
    m.add_class::<PyCode>()?;
    m.add_class::<PyElement>()?;
    m.add_class::<PyImages>()?;
    m.add_class::<PyGroupoid>()?;
    m.add_class::<PyGroupoidElement>()?;
    m.add_function(wrap_pyfunction!(check_conjugacy, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    Ok(())
}
