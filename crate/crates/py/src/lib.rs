//! Python bindings.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`; reports come
//! back as plain dicts decoded from the library's JSON form.

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyList, PyTuple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stabdiv::groebner::{default_equalization_degree, equalized_basis, quasi_homogeneous_basis, staircase};
use stabdiv::norms::{c_ratio, poly_norm_sq};
use stabdiv::operators::{angle_bound_check, essential_normality_scan, fang_xia_probe, random_angle_instance};
use stabdiv::poly::{format_polynomial, parse_polynomial};
use stabdiv::stability::{certify_vector, counterexample_generators};
use stabdiv::{Codimension, Error, Rational};

create_exception!(stabdiv, NumericalError, PyArithmeticError, "A rank or conditioning decision could not be made safely.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Numerical(m) => NumericalError::new_err(m),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text: String = obj.str()?.extract()?;
    text.trim().parse::<Rational>().map_err(|_| PyValueError::new_err(format!("not a rational number: {text}")))
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

fn codimension<'py>(py: Python<'py>, c: Codimension) -> PyResult<Bound<'py, PyAny>> {
    match c {
        Codimension::Finite(n) => Ok(n.into_pyobject(py)?.into_any()),
        Codimension::Infinite => Ok(py.None().into_bound(py)),
    }
}

/// Hilbert space `H_d^(t)`; `t` defaults to `-d` (Drury-Arveson).
#[pyclass(name = "Space", frozen, from_py_object)]
#[derive(Clone)]
struct PySpace(stabdiv::SpaceParams);

#[pymethods]
impl PySpace {
    #[new]
    #[pyo3(signature = (d, t=None))]
    fn new(d: usize, t: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let t = match t {
            Some(t) => rational(t)?,
            None => Rational::from_integer((-(d as i64)).into()),
        };
        stabdiv::SpaceParams::new(d, t).map(Self).map_err(to_py)
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    #[getter]
    fn t<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.t())
    }

    /// `c_{n,t}`: the norm ratio on homogeneous polynomials of degree `n`.
    fn c_ratio<'py>(&self, py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &c_ratio(n, &self.0))
    }

    fn __repr__(&self) -> String {
        format!("Space(d={}, t={})", self.0.d(), self.0.t())
    }
}

/// Weighted degree order: weighted degree first, then lex.
#[pyclass(name = "Order", frozen, from_py_object)]
#[derive(Clone)]
struct PyOrder(stabdiv::WeightedOrder);

#[pymethods]
impl PyOrder {
    #[new]
    fn new(weights: Vec<u32>) -> PyResult<Self> {
        stabdiv::WeightedOrder::new(weights).map(Self).map_err(to_py)
    }

    #[staticmethod]
    fn graded(d: usize) -> Self {
        Self(stabdiv::WeightedOrder::graded(d))
    }

    #[getter]
    fn weights(&self) -> Vec<u32> {
        self.0.weights().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Order({:?})", self.0.weights())
    }
}

#[pyclass(name = "Polynomial", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPolynomial(stabdiv::Polynomial);

#[pymethods]
impl PyPolynomial {
    /// Parses `x`, `y` for `d = 2` and `z1 … zd` otherwise, e.g. `"x^2 + (1+2i)*x*y"`.
    #[new]
    #[pyo3(signature = (text, d=2))]
    fn new(text: &str, d: usize) -> PyResult<Self> {
        parse_polynomial(text, d).map(Self).map_err(to_py)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn total_degree(&self) -> Option<u64> {
        self.0.total_degree()
    }

    /// `[(exponents, (re, im)), …]` in storage order.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for (m, c) in self.0.terms() {
            let coeff = PyTuple::new(py, [fraction(py, c.re())?, fraction(py, c.im())?])?;
            out.append((m.exponents().to_vec(), coeff))?;
        }
        Ok(out)
    }

    fn leading_monomial(&self, order: &PyOrder) -> Option<Vec<u32>> {
        self.0.leading_monomial(&order.0).map(|m| m.exponents().to_vec())
    }

    #[pyo3(signature = (order=None))]
    fn format(&self, order: Option<&PyOrder>) -> String {
        let ord = order.map(|o| o.0.clone()).unwrap_or_else(|| stabdiv::WeightedOrder::graded(self.0.dim()));
        format_polynomial(&self.0, &ord)
    }

    /// Exact `‖p‖²` in `space`.
    fn norm_sq<'py>(&self, py: Python<'py>, space: &PySpace) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &poly_norm_sq(&self.0, &space.0).map_err(to_py)?)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(Self).map_err(to_py)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(Self).map_err(to_py)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(Self).map_err(to_py)
    }

    fn __str__(&self) -> String {
        self.format(None)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?}, d={})", self.format(None), self.0.dim())
    }
}

fn unwrap_polys(gens: &[PyPolynomial]) -> Vec<stabdiv::Polynomial> {
    gens.iter().map(|g| g.0.clone()).collect()
}

fn order_or_graded(order: Option<&PyOrder>, gens: &[stabdiv::Polynomial]) -> stabdiv::WeightedOrder {
    order
        .map(|o| o.0.clone())
        .unwrap_or_else(|| stabdiv::WeightedOrder::graded(gens.first().map(|g| g.dim()).unwrap_or(2)))
}

#[pyclass(name = "GroebnerBasis", frozen)]
struct PyGroebnerBasis(stabdiv::GroebnerBasis);

#[pymethods]
impl PyGroebnerBasis {
    #[getter]
    fn generators(&self) -> Vec<PyPolynomial> {
        self.0.generators().iter().cloned().map(PyPolynomial).collect()
    }

    fn reduce(&self) -> Self {
        Self(self.0.reduce())
    }

    fn verify(&self) -> PyResult<bool> {
        self.0.verify().map_err(to_py)
    }

    fn contains(&self, h: &PyPolynomial) -> PyResult<bool> {
        stabdiv::is_member(&h.0, &self.0).map_err(to_py)
    }

    /// Number of standard monomials, or `None` when infinite.
    fn codimension<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        codimension(py, self.0.staircase_codimension())
    }

    fn staircase(&self) -> Option<Vec<Vec<u32>>> {
        staircase(&self.0).map(|s| s.iter().map(|m| m.exponents().to_vec()).collect())
    }

    /// Lifts the basis to weighted degree `m` (default: the Frobenius bound)
    /// with distinct leading terms.
    #[pyo3(signature = (m=None))]
    fn equalized(&self, m: Option<u64>) -> PyResult<(u64, Vec<PyPolynomial>)> {
        let qgb = quasi_homogeneous_basis(self.0.generators(), self.0.order()).map_err(to_py)?;
        let m = match m {
            Some(m) => m,
            None => default_equalization_degree(&qgb).map_err(to_py)?,
        };
        let lifted = equalized_basis(&qgb, m).map_err(to_py)?;
        Ok((m, lifted.into_iter().map(PyPolynomial).collect()))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

/// `h = Σ a_i f_i + r`; returns `(quotients, remainder, trace)`.
#[pyfunction]
#[pyo3(signature = (h, gens, order=None))]
fn divide(h: &PyPolynomial, gens: Vec<PyPolynomial>, order: Option<&PyOrder>) -> PyResult<(Vec<PyPolynomial>, PyPolynomial, String)> {
    let gens = unwrap_polys(&gens);
    let ord = order_or_graded(order, &gens);
    let res = stabdiv::divide(&h.0, &gens, &ord).map_err(to_py)?;
    let trace = res.trace_log();
    Ok((res.quotients.into_iter().map(PyPolynomial).collect(), PyPolynomial(res.remainder), trace))
}

/// Exact `Σ‖a_i f_i‖² / ‖h‖²` for the division of `h`.
#[pyfunction]
#[pyo3(signature = (h, gens, space, order=None))]
fn division_ratio<'py>(
    py: Python<'py>,
    h: &PyPolynomial,
    gens: Vec<PyPolynomial>,
    space: &PySpace,
    order: Option<&PyOrder>,
) -> PyResult<Bound<'py, PyAny>> {
    let gens = unwrap_polys(&gens);
    let ord = order_or_graded(order, &gens);
    let r = stabdiv::division::stability_ratio(&h.0, &gens, &ord, &space.0).map_err(to_py)?;
    fraction(py, &r.ratio_sq)
}

#[pyfunction]
#[pyo3(signature = (gens, order=None))]
fn buchberger(gens: Vec<PyPolynomial>, order: Option<&PyOrder>) -> PyResult<PyGroebnerBasis> {
    let gens = unwrap_polys(&gens);
    let ord = order_or_graded(order, &gens);
    stabdiv::buchberger(&gens, &ord).map(PyGroebnerBasis).map_err(to_py)
}

/// `gcd(g_1, …, g_k)` over the Gaussian rationals, monic.
#[pyfunction]
fn ideal_gcd(gens: Vec<PyPolynomial>) -> PyResult<PyPolynomial> {
    stabdiv::ideal_gcd(&unwrap_polys(&gens)).map(PyPolynomial).map_err(to_py)
}

/// `I = p·J`; returns `(p, J generators, codimension of J or None)`.
#[pyfunction]
#[pyo3(signature = (gens, order=None))]
fn beurling<'py>(
    py: Python<'py>,
    gens: Vec<PyPolynomial>,
    order: Option<&PyOrder>,
) -> PyResult<(PyPolynomial, Vec<PyPolynomial>, Bound<'py, PyAny>)> {
    let gens = unwrap_polys(&gens);
    let ord = order_or_graded(order, &gens);
    let b = stabdiv::beurling_form(&gens, &ord).map_err(to_py)?;
    Ok((PyPolynomial(b.gcd_part), b.cofactor_ideal.into_iter().map(PyPolynomial).collect(), codimension(py, b.codimension)?))
}

/// Degree-slice sweep of division ratios; returns the JSON report as a dict.
#[pyfunction]
#[pyo3(signature = (gens, space, q_max, order=None, samples=50, seed=0))]
fn certify<'py>(
    py: Python<'py>,
    gens: Vec<PyPolynomial>,
    space: &PySpace,
    q_max: u64,
    order: Option<&PyOrder>,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let gens = unwrap_polys(&gens);
    let ord = order_or_graded(order, &gens);
    let report = stabdiv::certify(&gens, &ord, &space.0, q_max, samples, seed).map_err(to_py)?;
    json_to_py(py, &report.to_json())
}

/// Exact ratios for the vector example, `[(n, ratio_sq), …]`.
#[pyfunction]
#[pyo3(signature = (n_max, space=None, rotated=false))]
fn counterexample<'py>(
    py: Python<'py>,
    n_max: u32,
    space: Option<&PySpace>,
    rotated: bool,
) -> PyResult<Vec<(u32, Bound<'py, PyAny>)>> {
    let sp = space.map(|s| s.0.clone()).unwrap_or_else(|| stabdiv::SpaceParams::drury_arveson(2));
    let (f1, f2) = counterexample_generators();
    let gens = if rotated { vec![f1.checked_sub(&f2).map_err(to_py)?, f2] } else { vec![f1, f2] };
    let rows = certify_vector(&gens, &stabdiv::WeightedOrder::graded(2), &sp, n_max).map_err(to_py)?;
    rows.iter().map(|r| Ok((r.n, fraction(py, &r.ratio_sq)?))).collect()
}

/// Schatten `2p` norms of `P_N^⊥ S_j^* P_N` for each truncation degree.
#[pyfunction]
#[pyo3(signature = (gens, space, degrees, p=3.0))]
fn scan_commutators<'py>(
    py: Python<'py>,
    gens: Vec<PyPolynomial>,
    space: &PySpace,
    degrees: Vec<u32>,
    p: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let rows = essential_normality_scan(&unwrap_polys(&gens), &space.0, p, &degrees).map_err(to_py)?;
    json_to_py(py, &serde_json::to_value(rows).expect("rows serialize"))
}

#[pyfunction]
#[pyo3(signature = (f, space, max_degree, samples=200, seed=0))]
fn fang_xia<'py>(
    py: Python<'py>,
    f: &PyPolynomial,
    space: &PySpace,
    max_degree: u32,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let probe = fang_xia_probe(&f.0, &space.0, max_degree, samples, seed).map_err(to_py)?;
    json_to_py(py, &serde_json::to_value(probe).expect("probe serializes"))
}

/// One random instance of the angle bound; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (ambient, m_dim, cosine, norm_bound=1.0, samples=100, seed=0))]
fn angle_check<'py>(
    py: Python<'py>,
    ambient: usize,
    m_dim: usize,
    cosine: f64,
    norm_bound: f64,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = random_angle_instance(ambient, m_dim, cosine, norm_bound, &mut rng).map_err(to_py)?;
    let rep = angle_bound_check(&inst.m_basis, &inst.v, &inst.t, samples, seed).map_err(to_py)?;
    json_to_py(py, &serde_json::to_value(rep).expect("report serializes"))
}

#[pymodule(name = "stabdiv")]
fn stabdiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpace>()?;
    m.add_class::<PyOrder>()?;
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyGroebnerBasis>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(divide, m)?)?;
    m.add_function(wrap_pyfunction!(division_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(buchberger, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_gcd, m)?)?;
    m.add_function(wrap_pyfunction!(beurling, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(scan_commutators, m)?)?;
    m.add_function(wrap_pyfunction!(fang_xia, m)?)?;
    m.add_function(wrap_pyfunction!(angle_check, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
