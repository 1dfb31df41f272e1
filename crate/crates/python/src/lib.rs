//! Python bindings: `pykoszulate.Subspace` plus the formula functions.
//! Rationals come back as `fractions.Fraction`, big integers as `int`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use koszulate::engine::{self, Subspace2};
use koszulate::error::Error;
use koszulate::families;
use koszulate::field::{parse_rational, FieldConfig, DEFAULT_PRIME};
use koszulate::formulas::{self, FormalClass, MukaiVector, C1E, C1F};
use koszulate::kfile::KFile;
use koszulate::verify::{Level, Suite};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn field_of(prime: Option<u64>) -> PyResult<FieldConfig> {
    match prime {
        None => Ok(FieldConfig::Rational),
        Some(0) => Ok(FieldConfig::Prime(DEFAULT_PRIME)),
        Some(p) => FieldConfig::prime(p).map_err(py_err),
    }
}

fn fraction<'py>(py: Python<'py>, x: &BigRational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.numer().clone(), x.denom().clone()))
}

fn class_dict<'py>(py: Python<'py>, c: &FormalClass) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (s, v) in c.terms() {
        d.set_item(s, fraction(py, v)?)?;
    }
    Ok(d)
}

fn parse_vector(field: FieldConfig, coords: Vec<String>) -> PyResult<Vec<BigRational>> {
    coords.iter().map(|s| parse_rational(s).and_then(|x| field.normalize(&x))).collect::<Result<_, _>>().map_err(py_err)
}

/// A subspace K of the exterior square of an n-dimensional space.
#[pyclass(name = "Subspace", module = "pykoszulate", frozen)]
struct PySubspace {
    inner: Subspace2,
}

fn wrap(r: koszulate::Result<Subspace2>) -> PyResult<PySubspace> {
    r.map(|inner| PySubspace { inner }).map_err(py_err)
}

#[pymethods]
impl PySubspace {
    /// Parses a subspace file (JSON text).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        wrap(KFile::parse(text).and_then(|f| f.to_subspace()))
    }

    /// `prime=None` is Q, `prime=0` the default 61-bit prime.
    #[staticmethod]
    #[pyo3(signature = (n, prime=None))]
    fn weyman(n: usize, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::weyman(n, field_of(prime)?))
    }

    #[staticmethod]
    #[pyo3(signature = (n, prime=None))]
    fn gaussian_rnc(n: usize, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::gaussian_rnc(n, field_of(prime)?))
    }

    #[staticmethod]
    #[pyo3(signature = (n, prime=None))]
    fn codim_one(n: usize, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::codim_one(n, field_of(prime)?))
    }

    #[staticmethod]
    #[pyo3(signature = (a, b, prime=None))]
    fn split_p1(a: usize, b: usize, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::split_bundle_p1(a, b, field_of(prime)?))
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, seed, prime=None))]
    fn random(n: usize, m: usize, seed: u64, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::random_subspace(n, m, field_of(prime)?, seed))
    }

    #[staticmethod]
    #[pyo3(signature = (n, seed, prime=None))]
    fn resonant_perturbation(n: usize, seed: u64, prime: Option<u64>) -> PyResult<Self> {
        wrap(families::resonant_perturbation(n, seed, field_of(prime)?))
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().label()
    }

    fn to_json(&self) -> String {
        KFile::from_subspace(&self.inner).to_json()
    }

    /// Basis rows as exact coefficient strings.
    fn basis(&self) -> Vec<Vec<String>> {
        KFile::from_subspace(&self.inner).basis
    }

    #[pyo3(signature = (q, route="complex"))]
    fn wq(&self, q: usize, route: &str) -> PyResult<usize> {
        match route {
            "complex" => Ok(engine::wq_dimension(&self.inner, q)),
            "presentation" => Ok(engine::wq_dimension_presentation(&self.inner, q)),
            other => Err(PyValueError::new_err(format!("unknown route {other:?}"))),
        }
    }

    fn hilbert(&self, qmax: usize) -> Vec<usize> {
        engine::hilbert_prefix(&self.inner, qmax)
    }

    fn resonance_trivial(&self) -> bool {
        engine::resonance_trivial(&self.inner)
    }

    /// `{"trivial", "q", "dim"}` for the degree max(n - 3, 0).
    fn resonance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = engine::resonance_report(&self.inner);
        let d = PyDict::new(py);
        d.set_item("trivial", r.trivial)?;
        d.set_item("q", r.q)?;
        d.set_item("dim", r.dim)?;
        Ok(d)
    }

    fn points(&self) -> PyResult<u64> {
        engine::resonance_points_count(&self.inner).map_err(py_err)
    }

    /// `dim F(a)` for a covector given by coefficient strings.
    fn fiber_dimension(&self, a: Vec<String>) -> PyResult<usize> {
        let a = parse_vector(self.inner.field(), a)?;
        engine::fiber_dimension(&self.inner, &a).map_err(py_err)
    }

    /// `(isotropic, separable)` for the span of the given covectors.
    fn isotropy(&self, rows: Vec<Vec<String>>) -> PyResult<(bool, bool)> {
        let field = self.inner.field();
        let dense = rows.into_iter().map(|r| parse_vector(field, r)).collect::<PyResult<Vec<_>>>()?;
        let vbar = koszulate::SparseMatrix::from_dense(field, self.inner.n(), &dense).map_err(py_err)?;
        let iso = engine::is_isotropic(&self.inner, &vbar).map_err(py_err)?;
        let sep = engine::is_separable(&self.inner, &vbar).map_err(py_err)?;
        Ok((iso, sep))
    }

    fn same_span(&self, other: &PySubspace) -> bool {
        self.inner.same_span(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Subspace(n={}, dim={}, field={})", self.inner.n(), self.inner.dim(), self.inner.field().label())
    }
}

#[pyfunction]
fn koszul_divisor_degree(n: usize) -> PyResult<BigInt> {
    formulas::koszul_divisor_degree(n).map_err(py_err)
}

#[pyfunction]
fn chow_degree(n: usize) -> PyResult<BigInt> {
    formulas::chow_degree(n).map_err(py_err)
}

#[pyfunction]
fn degree_identity(n: usize) -> PyResult<bool> {
    formulas::degree_identity(n).map_err(py_err)
}

#[pyfunction]
fn wq_bound(py: Python<'_>, n: usize, q: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &formulas::wq_bound(n, q).map_err(py_err)?)
}

/// Class of the resonance divisor over the symbols c1E and c1F.
#[pyfunction]
fn resonance_class(py: Python<'_>, e: usize) -> PyResult<Bound<'_, PyDict>> {
    let c = formulas::resonance_class(e, &FormalClass::symbol(C1E), &FormalClass::symbol(C1F)).map_err(py_err)?;
    class_dict(py, &c)
}

#[pyfunction]
fn canonical_pencil_class(py: Python<'_>, g: usize) -> PyResult<Bound<'_, PyDict>> {
    class_dict(py, &formulas::canonical_pencil_class(g).map_err(py_err)?)
}

#[pyfunction]
fn voisin_class(py: Python<'_>, r: usize) -> PyResult<Bound<'_, PyDict>> {
    class_dict(py, &formulas::voisin_class(r).map_err(py_err)?)
}

#[pyfunction]
fn mukai_pairing(py: Python<'_>, v: (i64, i64, i64), w: (i64, i64, i64), g: i64) -> PyResult<Bound<'_, PyAny>> {
    let v = MukaiVector::new(v.0, v.1, v.2, g);
    let w = MukaiVector::new(w.0, w.1, w.2, g);
    fraction(py, &formulas::mukai_pairing(&v, &w).map_err(py_err)?)
}

/// `(rank, c, s)` of `Sym^b E` for `v(E) = (r, L, s)`.
#[pyfunction]
#[pyo3(signature = (r, s, g, b, spherical=false))]
fn sym_mukai(
    py: Python<'_>,
    r: usize,
    s: i64,
    g: i64,
    b: usize,
    spherical: bool,
) -> PyResult<(Bound<'_, PyAny>, Bound<'_, PyAny>, Bound<'_, PyAny>)> {
    let v = formulas::sym_mukai(r, s, g, b, spherical).map_err(py_err)?;
    Ok((fraction(py, &v.rank)?, fraction(py, &v.c)?, fraction(py, &v.s)?))
}

#[pyfunction]
fn h1_sym_dim(r: usize, b: usize) -> PyResult<BigInt> {
    formulas::h1_sym_dim(r, b).map_err(py_err)
}

/// Runs the verification suite; returns `{id: (passed, detail)}`.
#[pyfunction]
#[pyo3(signature = (level="fast"))]
fn verify(level: &str) -> PyResult<BTreeMap<u32, (bool, String)>> {
    let level = match level {
        "fast" => Level::Fast,
        "full" => Level::Full,
        other => return Err(PyValueError::new_err(format!("unknown level {other:?}"))),
    };
    Ok(Suite::new(level).run_all().into_iter().map(|o| (o.id, (o.passed, o.detail))).collect())
}

#[pymodule]
fn pykoszulate(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySubspace>()?;
    m.add("DEFAULT_PRIME", DEFAULT_PRIME)?;
    m.add_function(wrap_pyfunction!(koszul_divisor_degree, m)?)?;
    m.add_function(wrap_pyfunction!(chow_degree, m)?)?;
    m.add_function(wrap_pyfunction!(degree_identity, m)?)?;
    m.add_function(wrap_pyfunction!(wq_bound, m)?)?;
    m.add_function(wrap_pyfunction!(resonance_class, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_pencil_class, m)?)?;
    m.add_function(wrap_pyfunction!(voisin_class, m)?)?;
    m.add_function(wrap_pyfunction!(mukai_pairing, m)?)?;
    m.add_function(wrap_pyfunction!(sym_mukai, m)?)?;
    m.add_function(wrap_pyfunction!(h1_sym_dim, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
