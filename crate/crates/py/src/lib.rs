//! Python bindings for `quadbetti`.
//!
//! Quadrics are passed as polynomial strings or [`Quadric`] objects; reports
//! come back as read-only objects that also serialize to the CLI's JSON.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quadbetti::exactnum::format_gaussian;
use quadbetti::oracle::{self, Count};
use quadbetti::qparse::{
    self, format_quadric, oracle_check, stratify, Flags, InputSpec, MatrixEntry, OracleDocument,
    ProfileDocument, QuadricSource, ReportDocument,
};
use quadbetti::specseq::{self, E2Table, Status};
use quadbetti::symlin::{self, ComplexSymMatrix};

fn py_err(e: quadbetti::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn status_label(s: Status) -> &'static str {
    match s {
        Status::Resolved => "resolved",
        Status::Ambiguous => "ambiguous",
    }
}

/// Rows of a table, top row (largest `j`) first, as printed by the CLI.
fn table_rows(t: &E2Table) -> Vec<Vec<usize>> {
    t.row_major().iter().rev().cloned().collect()
}

/// A complex quadratic form in `z0..zn`, stored as its symmetric Gram matrix.
#[pyclass(frozen, eq, from_py_object, module = "pyquadbetti")]
#[derive(Clone, PartialEq)]
pub struct Quadric {
    matrix: ComplexSymMatrix,
}

#[pymethods]
impl Quadric {
    /// Parses a polynomial such as `"z0*z2 - z1^2"` in variables `z0..zn`.
    #[new]
    fn new(text: &str, n: usize) -> PyResult<Self> {
        let matrix = qparse::parse_quadric(text, n).map_err(py_err)?;
        Ok(Quadric { matrix })
    }

    /// Builds a quadric from a square matrix of Gaussian rational literals.
    #[staticmethod]
    fn from_rows(rows: Vec<Vec<String>>) -> PyResult<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| qparse::parse_scalar(s)).collect())
            .collect::<quadbetti::Result<Vec<Vec<_>>>>()
            .map_err(py_err)?;
        let matrix = ComplexSymMatrix::from_rows(parsed).map_err(py_err)?;
        Ok(Quadric { matrix })
    }

    #[getter]
    fn n(&self) -> usize {
        self.matrix.size() - 1
    }

    /// Matrix entries as Gaussian rational literals.
    fn rows(&self) -> Vec<Vec<String>> {
        self.matrix
            .rows()
            .iter()
            .map(|row| row.iter().map(format_gaussian).collect())
            .collect()
    }

    /// Complex rank.
    fn rank(&self) -> usize {
        symlin::rank_complex(&self.matrix)
    }

    /// `(positive, negative, zero)` for the real part of the realified form.
    fn inertia(&self) -> (usize, usize, usize) {
        let i = symlin::inertia(&symlin::realify_a(&self.matrix));
        (i.positive, i.negative, i.zero)
    }

    fn __str__(&self) -> String {
        format_quadric(&self.matrix)
    }

    fn __repr__(&self) -> String {
        format!(
            "Quadric({:?}, n={})",
            format_quadric(&self.matrix),
            self.n()
        )
    }
}

/// Betti numbers and spectral sequence data for one input.
#[pyclass(frozen, module = "pyquadbetti")]
pub struct Report {
    doc: ReportDocument,
}

#[pymethods]
impl Report {
    #[getter]
    fn n(&self) -> usize {
        self.doc.n
    }

    #[getter]
    fn classification(&self) -> String {
        self.doc.classification.clone()
    }

    #[getter]
    fn mu(&self) -> usize {
        self.doc.mu
    }

    #[getter]
    fn nu(&self) -> usize {
        self.doc.nu
    }

    #[getter]
    fn sigma(&self) -> BTreeMap<usize, usize> {
        self.doc.sigma.clone()
    }

    #[getter(betti_R)]
    fn betti_r(&self) -> Vec<usize> {
        self.doc.betti_r.clone()
    }

    #[getter(betti_C)]
    fn betti_c(&self) -> Vec<usize> {
        self.doc.betti_c.clone()
    }

    #[getter(iC_even_ranks)]
    fn ic_even_ranks(&self) -> Vec<usize> {
        self.doc.ic_even_ranks.clone()
    }

    #[getter]
    fn status(&self) -> &'static str {
        status_label(self.doc.status)
    }

    /// `(betti_R, betti_C)` for every admissible branch.
    #[getter]
    fn candidates(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.doc
            .candidates
            .iter()
            .map(|c| (c.betti_r.clone(), c.betti_c.clone()))
            .collect()
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.doc.notes.clone()
    }

    /// `E_2` rows, largest `j` first.
    #[getter]
    fn e2(&self) -> Vec<Vec<usize>> {
        table_rows(&self.doc.e2)
    }

    /// `E_inf` rows, largest `j` first.
    #[getter]
    fn e_inf(&self) -> Vec<Vec<usize>> {
        table_rows(&self.doc.e_inf)
    }

    fn to_json(&self) -> String {
        self.doc.to_json()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let doc = ReportDocument::from_json(text).map_err(py_err)?;
        Ok(Report { doc })
    }

    fn __str__(&self) -> String {
        self.doc.render_text()
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(n={}, betti_C={:?}, status={:?})",
            self.doc.n,
            self.doc.betti_c,
            status_label(self.doc.status)
        )
    }
}

/// Rank stratification of a pencil.
#[pyclass(frozen, module = "pyquadbetti")]
pub struct Profile {
    doc: ProfileDocument,
}

#[pymethods]
impl Profile {
    #[getter]
    fn n(&self) -> usize {
        self.doc.n
    }

    #[getter]
    fn classification(&self) -> String {
        self.doc.classification.clone()
    }

    #[getter]
    fn mu(&self) -> usize {
        self.doc.mu
    }

    #[getter]
    fn nu(&self) -> usize {
        self.doc.nu
    }

    #[getter]
    fn sigma(&self) -> BTreeMap<usize, usize> {
        self.doc.sigma.clone()
    }

    #[getter]
    fn det_form(&self) -> String {
        self.doc.det_form.clone()
    }

    /// `(factor, multiplicity)` pairs of the determinant form.
    #[getter]
    fn squarefree(&self) -> Vec<(String, usize)> {
        self.doc
            .squarefree
            .iter()
            .map(|f| (f.factor.clone(), f.multiplicity))
            .collect()
    }

    #[getter]
    fn exists_odd_multiplicity(&self) -> bool {
        self.doc.exists_odd_multiplicity
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.doc.notes.clone()
    }

    fn __str__(&self) -> String {
        self.doc.render_text()
    }
}

/// Number of points of two conics in CP^2; `value` is `None` when infinite.
#[pyclass(frozen, get_all, module = "pyquadbetti")]
pub struct PointCount {
    value: Option<usize>,
    certified: bool,
    /// Per-frame counts, `None` for infinite.
    frames: Vec<Option<usize>>,
}

fn count_value(c: Count) -> Option<usize> {
    match c {
        Count::Finite(v) => Some(v),
        Count::Infinite => None,
    }
}

impl From<oracle::PointCount> for PointCount {
    fn from(pc: oracle::PointCount) -> Self {
        PointCount {
            value: count_value(pc.value),
            certified: pc.certified,
            frames: pc.frames.into_iter().map(count_value).collect(),
        }
    }
}

#[pymethods]
impl PointCount {
    fn __repr__(&self) -> String {
        format!(
            "PointCount(value={:?}, certified={})",
            self.value, self.certified
        )
    }
}

/// Oracle count next to the reported `b_0(C)`.
#[pyclass(frozen, module = "pyquadbetti")]
pub struct OracleResult {
    doc: OracleDocument,
}

#[pymethods]
impl OracleResult {
    #[getter]
    fn point_count(&self) -> Option<PointCount> {
        self.doc.point_count.clone().map(PointCount::from)
    }

    #[getter(betti_C)]
    fn betti_c(&self) -> Vec<usize> {
        self.doc.betti_c.clone()
    }

    #[getter]
    fn status(&self) -> &'static str {
        status_label(self.doc.status)
    }

    /// `None` when the comparison does not apply.
    #[getter]
    fn cross_check(&self) -> Option<bool> {
        self.doc.cross_check
    }

    #[getter]
    fn notes(&self) -> Vec<String> {
        self.doc.notes.clone()
    }

    fn __str__(&self) -> String {
        self.doc.render_text()
    }
}

#[derive(FromPyObject)]
enum QuadricArg {
    Text(String),
    Parsed(Quadric),
}

fn input_spec(n: usize, quadrics: Vec<QuadricArg>, nonempty: Option<bool>, seed: u64) -> InputSpec {
    let quadrics = quadrics
        .into_iter()
        .map(|q| match q {
            QuadricArg::Text(t) => QuadricSource::Text(t),
            QuadricArg::Parsed(q) => QuadricSource::Matrix(
                q.rows()
                    .into_iter()
                    .map(|row| row.into_iter().map(MatrixEntry::Literal).collect())
                    .collect(),
            ),
        })
        .collect();
    InputSpec {
        n,
        quadrics,
        flags: Flags {
            assume_nonempty: nonempty,
            seed,
            ..Flags::default()
        },
    }
}

/// Betti numbers of the common zero set of one or two quadrics in CP^n.
///
/// `nonempty=False` drops the `b0(C) >= 1` filter applied to pencils.
#[pyfunction]
#[pyo3(signature = (n, quadrics, nonempty=None, dump_pages=false))]
fn analyze(
    n: usize,
    quadrics: Vec<QuadricArg>,
    nonempty: Option<bool>,
    dump_pages: bool,
) -> PyResult<Report> {
    let spec = input_spec(n, quadrics, nonempty, 0);
    let analysis = qparse::analyze(&spec).map_err(py_err)?;
    Ok(Report {
        doc: ReportDocument::from_analysis(&analysis, dump_pages),
    })
}

/// Rank stratification without running the spectral sequence.
#[pyfunction]
fn profile(n: usize, quadrics: Vec<QuadricArg>) -> PyResult<Profile> {
    let doc = stratify(&input_spec(n, quadrics, None, 0)).map_err(py_err)?;
    Ok(Profile { doc })
}

/// Point count of two conics in CP^2 by elimination.
#[pyfunction]
#[pyo3(signature = (q0, q1, seed=0))]
fn point_count(q0: &Quadric, q1: &Quadric, seed: u64) -> PyResult<PointCount> {
    oracle::point_count_cp2(&q0.matrix, &q1.matrix, seed)
        .map(PointCount::from)
        .map_err(py_err)
}

/// Analyzes a plane pencil and compares `b0(C)` with the oracle's count.
#[pyfunction]
#[pyo3(signature = (quadrics, seed=0))]
fn oracle_compare(quadrics: Vec<QuadricArg>, seed: u64) -> PyResult<OracleResult> {
    let doc = oracle_check(&input_spec(2, quadrics, None, seed)).map_err(py_err)?;
    Ok(OracleResult { doc })
}

#[pyfunction]
fn parse_quadric(text: &str, n: usize) -> PyResult<Quadric> {
    Quadric::new(text, n)
}

#[pyfunction]
fn format_quadric_text(q: &Quadric) -> String {
    format_quadric(&q.matrix)
}

/// `betti_C` of a single quadric of rank `rho` in CP^n.
#[pyfunction]
fn closed_form_single(n: usize, rho: usize) -> PyResult<Vec<usize>> {
    specseq::closed_form_single(n, rho).map_err(py_err)
}

/// `betti_C` of a smooth complete intersection of two quadrics in CP^n.
#[pyfunction]
fn closed_form_complete_intersection(n: usize) -> PyResult<Vec<usize>> {
    specseq::closed_form_complete_intersection(n).map_err(py_err)
}

#[pymodule]
fn pyquadbetti(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Quadric>()?;
    m.add_class::<Report>()?;
    m.add_class::<Profile>()?;
    m.add_class::<PointCount>()?;
    m.add_class::<OracleResult>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(point_count, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_compare, m)?)?;
    m.add_function(wrap_pyfunction!(parse_quadric, m)?)?;
    m.add("format_quadric", wrap_pyfunction!(format_quadric_text, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_single, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_complete_intersection, m)?)?;
    m.add("REPORT_VERSION", qparse::REPORT_VERSION)?;
    Ok(())
}
