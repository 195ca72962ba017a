//! Python bindings for `gsruin`.
//!
//! Models, severity laws and penalties are small immutable objects; the
//! formula and simulation entry points take them plus plain floats and
//! return result objects with read-only attributes. Long simulations release
//! the GIL.

use std::collections::BTreeMap;

use gsruin::{
    ClaimComponent, CreepClock, Error, GerberShiu, GsConfig, JKernel, PenaltySpec, SimConfig, VariationClass,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(pygsruin, NumericalError, PyRuntimeError, "A formula or simulation failed numerically.");

fn to_py(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        NumericalError::new_err(e.to_string())
    }
}

fn claims(list: Vec<(f64, f64)>) -> Vec<ClaimComponent> {
    list.into_iter().map(|(w, rate)| ClaimComponent::new(w, rate)).collect()
}

/// Spectrally negative Lévy surplus model.
#[pyclass(name = "LevyModel", module = "pygsruin", frozen)]
struct PyLevyModel {
    inner: gsruin::LevyModel,
}

#[pymethods]
impl PyLevyModel {
    /// Premium rate minus compound Poisson claims; `claims` is a list of
    /// `(weight, rate)` exponential components.
    #[staticmethod]
    fn cramer_lundberg(premium: f64, jump_rate: f64, claims: Vec<(f64, f64)>) -> PyResult<Self> {
        let inner = gsruin::LevyModel::cramer_lundberg(premium, jump_rate, self::claims(claims)).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn brownian_drift(drift: f64, sigma: f64) -> PyResult<Self> {
        Ok(Self { inner: gsruin::LevyModel::brownian_drift(drift, sigma).map_err(to_py)? })
    }

    #[staticmethod]
    fn jump_diffusion(drift: f64, sigma: f64, jump_rate: f64, claims: Vec<(f64, f64)>) -> PyResult<Self> {
        let inner =
            gsruin::LevyModel::jump_diffusion(drift, sigma, jump_rate, self::claims(claims)).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn laplace_exponent(&self, lam: f64) -> f64 {
        self.inner.laplace_exponent(lam)
    }

    fn psi_prime_at_zero(&self) -> f64 {
        self.inner.psi_prime_at_zero()
    }

    fn levy_tail(&self, z: f64) -> f64 {
        self.inner.levy_tail(z)
    }

    /// `"bounded"` or `"unbounded"`.
    #[getter]
    fn variation_class(&self) -> &'static str {
        match self.inner.variation_class() {
            VariationClass::Bounded => "bounded",
            VariationClass::Unbounded => "unbounded",
        }
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// `W^(q)` and `Z^(q)` of a model.
#[pyclass(name = "ScaleFunction", module = "pygsruin", frozen)]
struct PyScaleFunction {
    inner: gsruin::ScaleFunction,
}

#[pymethods]
impl PyScaleFunction {
    #[new]
    fn new(model: &PyLevyModel, q: f64) -> PyResult<Self> {
        Ok(Self { inner: gsruin::ScaleFunction::build(&model.inner, q).map_err(to_py)? })
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.inner.phi()
    }

    fn w(&self, x: f64) -> f64 {
        self.inner.w(x)
    }

    fn w_prime(&self, x: f64) -> f64 {
        self.inner.w_prime(x)
    }

    fn z(&self, x: f64) -> f64 {
        self.inner.z(x)
    }

    fn laplace_transform(&self, lam: f64) -> PyResult<f64> {
        self.inner.laplace_transform(lam).map_err(to_py)
    }
}

/// Law of the debt-severity mark attached to each negative excursion.
#[pyclass(name = "Severity", module = "pygsruin", frozen)]
struct PySeverity {
    inner: gsruin::SeverityDistribution,
}

#[pymethods]
impl PySeverity {
    #[staticmethod]
    fn point_mass(y0: f64) -> PyResult<Self> {
        Ok(Self { inner: gsruin::SeverityDistribution::point_mass(y0).map_err(to_py)? })
    }

    #[staticmethod]
    fn exponential(rate: f64) -> PyResult<Self> {
        Ok(Self { inner: gsruin::SeverityDistribution::exponential(rate).map_err(to_py)? })
    }

    /// Finite mixture of point masses from `(weight, y)` pairs.
    #[staticmethod]
    fn mixture(atoms: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self { inner: gsruin::SeverityDistribution::mixture(atoms).map_err(to_py)? })
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Penalty `f(X_{T−}, X_T)` applied at bankruptcy.
#[pyclass(name = "Penalty", module = "pygsruin", frozen)]
struct PyPenalty {
    inner: PenaltySpec,
}

impl PyPenalty {
    fn checked(inner: PenaltySpec) -> PyResult<Self> {
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }
}

#[pymethods]
impl PyPenalty {
    #[staticmethod]
    fn one() -> Self {
        Self { inner: PenaltySpec::One }
    }

    /// `e^{θ·X_T}`.
    #[staticmethod]
    fn exp_deficit(theta: f64) -> PyResult<Self> {
        Self::checked(PenaltySpec::ExpDeficit { theta })
    }

    /// `e^{θ₁·X_{T−} + θ₂·X_T}`.
    #[staticmethod]
    fn exp_both(theta1: f64, theta2: f64) -> PyResult<Self> {
        Self::checked(PenaltySpec::ExpBoth { theta1, theta2 })
    }

    /// `1{X_T < −d}`.
    #[staticmethod]
    fn deficit_indicator(d: f64) -> PyResult<Self> {
        Self::checked(PenaltySpec::DeficitIndicator { d })
    }

    fn __call__(&self, pre: f64, post: f64) -> f64 {
        use gsruin::Penalty;
        self.inner.eval(pre, post)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Formula value with numerator, denominator and the named terms.
#[pyclass(name = "GerberShiuResult", module = "pygsruin", frozen, get_all)]
struct PyGsResult {
    value: f64,
    numerator: f64,
    denominator: f64,
    terms: BTreeMap<String, f64>,
    quad_error: f64,
}

#[pymethods]
impl PyGsResult {
    fn __repr__(&self) -> String {
        format!("GerberShiuResult(value={}, quad_error={:e})", self.value, self.quad_error)
    }
}

/// Monte Carlo estimate with path counts and, for Gaussian models, both
/// Euler runs.
#[pyclass(name = "SimEstimate", module = "pygsruin", frozen, get_all)]
struct PySimEstimate {
    mean: f64,
    std_error: f64,
    n_paths: u64,
    n_bankrupt: u64,
    n_upcrossed: u64,
    n_censored: u64,
    /// `(dt, coarse_mean, coarse_se, fine_mean, fine_se)` or `None`.
    discretization: Option<(f64, f64, f64, f64, f64)>,
}

impl From<gsruin::SimEstimate> for PySimEstimate {
    fn from(e: gsruin::SimEstimate) -> Self {
        Self {
            mean: e.mean,
            std_error: e.std_error,
            n_paths: e.n_paths,
            n_bankrupt: e.n_bankrupt,
            n_upcrossed: e.n_upcrossed,
            n_censored: e.n_censored,
            discretization: e
                .discretization
                .map(|d| (d.dt, d.coarse_mean, d.coarse_std_error, d.fine_mean, d.fine_std_error)),
        }
    }
}

#[pymethods]
impl PySimEstimate {
    fn __repr__(&self) -> String {
        format!("SimEstimate(mean={}, std_error={}, n_paths={})", self.mean, self.std_error, self.n_paths)
    }
}

fn clock_for(model: &gsruin::LevyModel, clock_rate: Option<f64>) -> PyResult<Option<CreepClock>> {
    match (model.variation_class(), clock_rate) {
        (VariationClass::Bounded, _) => Ok(None),
        (VariationClass::Unbounded, Some(l)) => Ok(Some(CreepClock::new(l).map_err(to_py)?)),
        (VariationClass::Unbounded, None) => {
            Err(PyValueError::new_err("models with a Gaussian part need clock_rate"))
        }
    }
}

fn gs_config(j_kernel: &str) -> PyResult<GsConfig> {
    let j_kernel = match j_kernel {
        "zero" => JKernel::Zero,
        "q" => JKernel::Q,
        other => return Err(PyValueError::new_err(format!("j_kernel must be 'zero' or 'q', got {other:?}"))),
    };
    Ok(GsConfig { j_kernel, ..GsConfig::default() })
}

/// Closed-form `φ_f(x, q, b)` at the excursion-marked bankruptcy time.
#[pyfunction]
#[pyo3(signature = (model, x, q, b, severity, penalty=None, clock_rate=None, j_kernel="zero"))]
#[allow(clippy::too_many_arguments)]
fn gerber_shiu(
    model: &PyLevyModel,
    x: f64,
    q: f64,
    b: f64,
    severity: &PySeverity,
    penalty: Option<&PyPenalty>,
    clock_rate: Option<f64>,
    j_kernel: &str,
) -> PyResult<PyGsResult> {
    let f = penalty.map_or(PenaltySpec::One, |p| p.inner);
    let clock = clock_for(&model.inner, clock_rate)?;
    let ctx = GerberShiu::new(&model.inner, q, b, clock, gs_config(j_kernel)?).map_err(to_py)?;
    let r = ctx.phi_x(x, &f, &severity.inner).map_err(to_py)?;
    Ok(PyGsResult {
        value: r.value,
        numerator: r.numerator,
        denominator: r.denominator,
        terms: r.terms,
        quad_error: r.quad_error,
    })
}

/// Classical Gerber–Shiu value at the first passage below 0 (before `b`).
#[pyfunction]
#[pyo3(signature = (model, x, q, b, penalty=None))]
fn classical(model: &PyLevyModel, x: f64, q: f64, b: f64, penalty: Option<&PyPenalty>) -> PyResult<f64> {
    let f = penalty.map_or(PenaltySpec::One, |p| p.inner);
    let ctx = GerberShiu::new(&model.inner, q, b, None, GsConfig::default()).map_err(to_py)?;
    Ok(ctx.classical(x, &f).map_err(to_py)?.value)
}

/// Monte Carlo estimate of the same quantity as [`gerber_shiu`].
#[pyfunction]
#[pyo3(signature = (
    model, x, q, b, severity, penalty=None, clock_rate=None,
    n_paths=100_000, seed=20_240_601, euler_dt=1e-3, horizon=500.0, antithetic=false, threads=0
))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    py: Python<'_>,
    model: &PyLevyModel,
    x: f64,
    q: f64,
    b: f64,
    severity: &PySeverity,
    penalty: Option<&PyPenalty>,
    clock_rate: Option<f64>,
    n_paths: u64,
    seed: u64,
    euler_dt: f64,
    horizon: f64,
    antithetic: bool,
    threads: usize,
) -> PyResult<PySimEstimate> {
    let f = penalty.map_or(PenaltySpec::One, |p| p.inner);
    let clock = clock_for(&model.inner, clock_rate)?;
    let cfg = SimConfig { n_paths, seed, euler_dt, horizon, antithetic, threads, ..SimConfig::default() };
    let (m, law) = (&model.inner, &severity.inner);
    let est = py
        .detach(|| match clock {
            None => gsruin::simulate_bv(m, x, q, b, &f, law, &cfg),
            Some(c) => gsruin::simulate_ubv(m, x, q, b, &f, law, c, &cfg),
        })
        .map_err(to_py)?;
    Ok(est.into())
}

/// Monte Carlo estimate of `E_x[e^{−qτ_a⁺}; τ_a⁺ < τ₀⁻] = W(x)/W(a)`.
#[pyfunction]
#[pyo3(signature = (model, x, a, q, n_paths=100_000, seed=20_240_601))]
fn two_sided_exit(
    py: Python<'_>,
    model: &PyLevyModel,
    x: f64,
    a: f64,
    q: f64,
    n_paths: u64,
    seed: u64,
) -> PyResult<PySimEstimate> {
    let cfg = SimConfig { n_paths, seed, ..SimConfig::default() };
    let m = &model.inner;
    let est = py.detach(|| gsruin::estimate_two_sided_exit(m, x, a, q, &cfg)).map_err(to_py)?;
    Ok(est.into())
}

#[pymodule]
fn pygsruin(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLevyModel>()?;
    m.add_class::<PyScaleFunction>()?;
    m.add_class::<PySeverity>()?;
    m.add_class::<PyPenalty>()?;
    m.add_class::<PyGsResult>()?;
    m.add_class::<PySimEstimate>()?;
    m.add_function(wrap_pyfunction!(gerber_shiu, m)?)?;
    m.add_function(wrap_pyfunction!(classical, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(two_sided_exit, m)?)?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    Ok(())
}
