//! Python bindings: algebras, orders, quaternions, the closed-form bounds,
//! enumeration, the trace census, generation certificates and CLI jobs.
//! Structured results come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use smallgens::bounds::{self, BoundInputs, SpectralData, Variant};
use smallgens::cli::{run_job, JobConfig};
use smallgens::exact::parse_rational;
use smallgens::groupgen::{self, EnumerationJob, GenerationOptions};
use smallgens::quat::{self, embed_matrix, AlgebraConfig, Place};
use smallgens::{IntPolynomial, Rational};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rat(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn variant_named(name: &str) -> PyResult<Variant> {
    serde_json::from_value(serde_json::Value::String(name.to_string())).map_err(err)
}

/// Quaternion algebra `(a, b / k)` with its chosen order.
#[pyclass(frozen, module = "smallgens_py")]
struct Algebra {
    built: quat::BuiltAlgebra,
}

#[pymethods]
impl Algebra {
    /// `(a, b / ℚ)` with the natural order.
    #[new]
    fn new(a: &str, b: &str) -> PyResult<Self> {
        let built = AlgebraConfig::over_q(a, b).build().map_err(err)?;
        Ok(Algebra { built })
    }

    /// From the JSON form of an algebra block (field, order basis, ...).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let cfg: AlgebraConfig = serde_json::from_str(text).map_err(err)?;
        Ok(Algebra { built: cfg.build().map_err(err)? })
    }

    #[getter]
    fn a(&self) -> String {
        self.built.algebra.a().to_string()
    }

    #[getter]
    fn b(&self) -> String {
        self.built.algebra.b().to_string()
    }

    #[getter]
    fn swapped(&self) -> bool {
        self.built.swapped
    }

    fn is_division(&self) -> Option<bool> {
        self.built.algebra.is_division()
    }

    fn ramification<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.built.algebra.ramification())
    }

    /// Element with coordinates in `1, i, j, ij` (rational strings over ℚ).
    fn element(&self, coords: [String; 4]) -> PyResult<Quaternion> {
        let c = [rat(&coords[0])?, rat(&coords[1])?, rat(&coords[2])?, rat(&coords[3])?];
        Ok(Quaternion { x: quat::QuatElement::from_rationals(&self.built.algebra, c) })
    }

    /// Element of the order from integer coordinates in its ℤ-basis.
    fn order_element(&self, z: Vec<i64>) -> PyResult<Quaternion> {
        if z.len() != self.built.order.z_basis().len() {
            return Err(err("wrong number of coordinates"));
        }
        Ok(Quaternion { x: self.built.order.element_from_z(&z) })
    }

    /// Norm-one units of the order with matrix norm at most `cap`.
    #[pyo3(signature = (cap, projective = true))]
    fn enumerate<'py>(&self, py: Python<'py>, cap: &str, projective: bool) -> PyResult<Bound<'py, PyAny>> {
        let e = enumerate(&self.built.order, cap, projective)?;
        to_py(py, &e.records)
    }

    /// Trace census and invariant trace check of the unit ball.
    #[pyo3(signature = (cap, d = None))]
    fn trace_census<'py>(&self, py: Python<'py>, cap: &str, d: Option<u64>) -> PyResult<Bound<'py, PyAny>> {
        let e = enumerate(&self.built.order, cap, true)?;
        let d = d.unwrap_or(self.built.algebra.field().degree() as u64);
        let census = groupgen::trace_census(&e.records, d).map_err(err)?;
        let inv = groupgen::invariant_trace_check(&e.records, self.built.algebra.field());
        to_py(py, &serde_json::json!({ "census": census, "invariant_trace": inv }))
    }

    /// Certifies that the `gen_cap` ball generates the `target_cap` ball.
    #[pyo3(signature = (gen_cap, target_cap, max_word_length = 20, node_cap = 250_000, greedy = true))]
    fn verify_generation<'py>(
        &self,
        py: Python<'py>,
        gen_cap: &str,
        target_cap: &str,
        max_word_length: usize,
        node_cap: usize,
        greedy: bool,
    ) -> PyResult<Bound<'py, PyAny>> {
        let order = &self.built.order;
        let gens = enumerate(order, gen_cap, true)?;
        let targets = enumerate(order, target_cap, true)?;
        let opts = GenerationOptions { max_word_length, node_cap, projective: true, greedy };
        let cert = py
            .detach(|| groupgen::verify_generation(order, &gens.records, &targets.records, &opts))
            .map_err(err)?;
        to_py(py, &cert)
    }

    fn __repr__(&self) -> String {
        format!("Algebra({}, {})", self.a(), self.b())
    }
}

fn enumerate(order: &quat::QuatOrder, cap: &str, projective: bool) -> PyResult<groupgen::Enumeration> {
    let mut job = EnumerationJob::new(order, rat(cap)?).map_err(err)?;
    job.projective = projective;
    groupgen::enumerate_unit_ball(&job).map_err(err)
}

/// Element of a quaternion algebra.
#[pyclass(frozen, module = "smallgens_py")]
struct Quaternion {
    x: quat::QuatElement,
}

#[pymethods]
impl Quaternion {
    #[getter]
    fn coords(&self) -> Vec<String> {
        self.x.coords().iter().map(|c| c.to_string()).collect()
    }

    fn trd(&self) -> String {
        self.x.trd().to_string()
    }

    fn nrd(&self) -> String {
        self.x.nrd().to_string()
    }

    fn conj(&self) -> Quaternion {
        Quaternion { x: self.x.conj() }
    }

    fn inverse(&self) -> PyResult<Quaternion> {
        Ok(Quaternion { x: self.x.inverse().map_err(err)? })
    }

    fn __mul__(&self, o: &Quaternion) -> PyResult<Quaternion> {
        Ok(Quaternion { x: self.x.mul(&o.x).map_err(err)? })
    }

    fn __add__(&self, o: &Quaternion) -> PyResult<Quaternion> {
        Ok(Quaternion { x: self.x.add(&o.x).map_err(err)? })
    }

    fn __sub__(&self, o: &Quaternion) -> PyResult<Quaternion> {
        Ok(Quaternion { x: self.x.sub(&o.x).map_err(err)? })
    }

    fn __neg__(&self) -> Quaternion {
        Quaternion { x: self.x.neg() }
    }

    fn __pow__(&self, e: u32, _m: Option<u32>) -> Quaternion {
        Quaternion { x: self.x.pow(e) }
    }

    fn __eq__(&self, o: &Quaternion) -> bool {
        Arc::ptr_eq(self.x.algebra(), o.x.algebra()) && self.x.coords() == o.x.coords()
    }

    /// Matrix image at the split place, entries as `(lo, hi)` floats.
    #[pyo3(signature = (prec = 128))]
    fn matrix(&self, prec: u32) -> PyResult<Vec<Vec<(f64, f64)>>> {
        let m = embed_matrix(&self.x, prec).map_err(err)?;
        let e = m.entries();
        Ok(vec![vec![lo_hi(&e[0]), lo_hi(&e[1])], vec![lo_hi(&e[2]), lo_hi(&e[3])]])
    }

    /// Isometry class of the matrix image.
    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let m = embed_matrix(&self.x, 128).map_err(err)?;
        to_py(py, &smallgens::hyp::classify(&m).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Quaternion({})", self.x)
    }
}

fn lo_hi(i: &smallgens::Interval) -> (f64, f64) {
    (f64_of(i.lo()), f64_of(i.hi()))
}

fn f64_of(r: &Rational) -> f64 {
    smallgens::Interval::point(r.clone(), 64).to_f64()
}

/// Hilbert symbol `(a, b)_v`; `place` is a prime or `"inf"`.
#[pyfunction]
fn hilbert_symbol(a: &str, b: &str, place: &Bound<'_, PyAny>) -> PyResult<i8> {
    let v = if let Ok(p) = place.extract::<u64>() {
        Place::Prime(p)
    } else if place.extract::<String>()? == "inf" {
        Place::Infinity
    } else {
        return Err(err("place must be a prime or \"inf\""));
    };
    quat::hilbert_symbol(&rat(a)?, &rat(b)?, &v).map_err(err)
}

/// Ramified places of `(a, b / ℚ)`.
#[pyfunction]
fn ramification_set<'py>(py: Python<'py>, a: &str, b: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &quat::ramification_set(&rat(a)?, &rat(b)?).map_err(err)?)
}

/// Certified Mahler measure enclosure `(lo, hi)`; coefficients low to high.
#[pyfunction]
fn mahler_measure(coeffs: Vec<i64>) -> PyResult<(f64, f64)> {
    let width = rat("1/1208925819614629174706176")?;
    Ok(lo_hi(&bounds::mahler_measure(&IntPolynomial::from_i64(&coeffs), &width).map_err(err)?))
}

#[pyfunction]
fn is_salem<'py>(py: Python<'py>, coeffs: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::is_salem(&IntPolynomial::from_i64(&coeffs)).map_err(err)?)
}

/// Both log forms of the Mahler measure for a rational trace.
#[pyfunction]
fn trace_mahler_check<'py>(py: Python<'py>, trace: &str) -> PyResult<Bound<'py, PyAny>> {
    let k = smallgens::NumberField::rationals();
    let t = smallgens::FieldElement::from_rational(&k, rat(trace)?);
    to_py(py, &bounds::trace_mahler_check(&t).map_err(err)?)
}

#[pyfunction]
fn trace_window<'py>(py: Python<'py>, d: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::trace_window(d).map_err(err)?)
}

#[pyfunction]
fn delta_zero(d: u64) -> PyResult<(f64, f64)> {
    Ok(lo_hi(&bounds::delta_zero(d).map_err(err)?))
}

#[pyfunction]
fn voutier_lower_bound<'py>(py: Python<'py>, n: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::voutier_lower_bound(n).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d_max = 1_000_000))]
fn compute_safety_constant<'py>(py: Python<'py>, d_max: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::compute_safety_constant(d_max).map_err(err)?)
}

/// Decay exponent `s` for a spectral gap `λ` (rational string).
#[pyfunction]
fn decay_exponent<'py>(py: Python<'py>, lam: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &bounds::decay_exponent(&SpectralData::new(rat(lam)?).map_err(err)?))
}

/// Generator-norm bound; `lam` is `λ₁` (clamped to 1/4), default the congruence value.
#[pyfunction]
#[pyo3(signature = (d, vol, variant = "general", lam = None, leading = "1", safety = "1", m_s = None))]
#[allow(clippy::too_many_arguments)]
fn generator_bound<'py>(
    py: Python<'py>,
    d: u64,
    vol: &str,
    variant: &str,
    lam: Option<&str>,
    leading: &str,
    safety: &str,
    m_s: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let spectral = match lam {
        Some(l) => SpectralData::from_lambda1(rat(l)?).map_err(err)?,
        None => SpectralData::congruence(),
    };
    let mut inputs = BoundInputs::new(d, spectral);
    inputs.vol = rat(vol)?;
    inputs.leading = rat(leading)?;
    inputs.safety = rat(safety)?;
    inputs.m_s = m_s.map(rat).transpose()?;
    to_py(py, &bounds::generator_bound(&inputs, variant_named(variant)?).map_err(err)?)
}

/// Runs a CLI job from its JSON config; returns `(report_json, csv, exit_code)`.
#[pyfunction]
fn run(py: Python<'_>, config: &str) -> PyResult<(String, Option<String>, i32)> {
    let cfg = JobConfig::from_json(config).map_err(err)?;
    let out = py.detach(|| run_job(&cfg));
    Ok((out.report.to_json(), out.csv, out.exit_code))
}

#[pymodule]
fn smallgens_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Algebra>()?;
    m.add_class::<Quaternion>()?;
    m.add_function(wrap_pyfunction!(hilbert_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(ramification_set, m)?)?;
    m.add_function(wrap_pyfunction!(mahler_measure, m)?)?;
    m.add_function(wrap_pyfunction!(is_salem, m)?)?;
    m.add_function(wrap_pyfunction!(trace_mahler_check, m)?)?;
    m.add_function(wrap_pyfunction!(trace_window, m)?)?;
    m.add_function(wrap_pyfunction!(delta_zero, m)?)?;
    m.add_function(wrap_pyfunction!(voutier_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(compute_safety_constant, m)?)?;
    m.add_function(wrap_pyfunction!(decay_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(generator_bound, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
