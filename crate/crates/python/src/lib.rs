//! Python bindings for the `pfq` crate.
//!
//! Scalars may be given as `int`, `float`, `complex` or a decimal string
//! (`"0.1"`, `"1.5,-0.25"`); strings keep the full double-double precision
//! of the input. Results carry a Python `complex` plus the extended
//! precision parts as strings.

use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyArithmeticError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use pfq::identities::{self, AdditionInput, IdentityInput, Theorem};
use pfq::oracle::{self, RuleKind};
use pfq::sweep::{self, OutputFormat, SweepConfig};
use pfq::{ComplexEP, ConvergenceClass, Error, Precision, TruncationPolicy};

create_exception!(pfq, ConvergenceError, PyArithmeticError, "A series, multi-sum or quadrature did not converge.");

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::Domain(_) | Error::Pole(_) => PyValueError::new_err(e.to_string()),
        Error::OutOfRange(_) => PyOverflowError::new_err(e.to_string()),
        Error::NoConvergence { .. } | Error::QuadratureNonConvergence(_) => ConvergenceError::new_err(e.to_string()),
    }
}

fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<ComplexEP> {
    if let Ok(s) = obj.extract::<String>() {
        return ComplexEP::parse(s.trim())
            .ok_or_else(|| PyValueError::new_err(format!("cannot parse '{s}' as a number")));
    }
    if let Ok(z) = obj.cast::<PyComplex>() {
        return Ok(ComplexEP::from_f64(z.real(), z.imag()));
    }
    let v: f64 = obj.extract()?;
    Ok(ComplexEP::from_f64(v, 0.0))
}

fn scalars(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<ComplexEP>> {
    objs.iter().map(scalar).collect()
}

fn py_complex(z: ComplexEP) -> num_pair::Pair {
    num_pair::Pair(z.re.to_f64(), z.im.to_f64())
}

// A (re, im) pair converted to a Python complex.
mod num_pair {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    pub struct Pair(pub f64, pub f64);

    impl<'py> IntoPyObject<'py> for Pair {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0, self.1))
        }
    }
}

fn precise(z: ComplexEP) -> (String, String) {
    (z.re.to_sci_string(32), z.im.to_sci_string(32))
}

/// Truncation settings for every evaluator.
#[pyclass(name = "TruncationPolicy", from_py_object)]
#[derive(Clone)]
struct PyPolicy {
    inner: TruncationPolicy,
}

#[pymethods]
impl PyPolicy {
    #[new]
    #[pyo3(signature = (tol=1e-25, max_order=2000, quiet_shells=3, max_shell_order=300, precision="extended"))]
    fn new(tol: f64, max_order: usize, quiet_shells: usize, max_shell_order: usize, precision: &str) -> PyResult<Self> {
        let precision = match precision {
            "extended" => Precision::Extended,
            "binary64" => Precision::Binary64,
            other => {
                return Err(PyValueError::new_err(format!("precision must be 'extended' or 'binary64', got '{other}'")))
            }
        };
        let inner = TruncationPolicy { tol, max_order, quiet_shells, max_shell_order, precision };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn tol(&self) -> f64 {
        self.inner.tol
    }

    #[getter]
    fn max_order(&self) -> usize {
        self.inner.max_order
    }

    #[getter]
    fn quiet_shells(&self) -> usize {
        self.inner.quiet_shells
    }

    #[getter]
    fn max_shell_order(&self) -> usize {
        self.inner.max_shell_order
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "TruncationPolicy(tol={:e}, max_order={}, quiet_shells={}, max_shell_order={}, precision='{}')",
            p.tol,
            p.max_order,
            p.quiet_shells,
            p.max_shell_order,
            match p.precision {
                Precision::Extended => "extended",
                Precision::Binary64 => "binary64",
            }
        )
    }
}

fn policy_of(policy: Option<PyPolicy>) -> TruncationPolicy {
    policy.map_or_else(TruncationPolicy::default, |p| p.inner)
}

#[pyclass(name = "EvalResult", frozen)]
struct PyEvalResult {
    inner: pfq::EvalResult,
}

#[pymethods]
impl PyEvalResult {
    #[getter]
    fn value(&self) -> num_pair::Pair {
        py_complex(self.inner.value)
    }

    /// Real and imaginary parts with 32 significant digits.
    #[getter]
    fn value_str(&self) -> (String, String) {
        precise(self.inner.value)
    }

    #[getter]
    fn abs_error_estimate(&self) -> f64 {
        self.inner.abs_error_estimate
    }

    #[getter]
    fn terms_used(&self) -> usize {
        self.inner.terms_used
    }

    #[getter]
    fn truncation_order(&self) -> usize {
        self.inner.truncation_order
    }

    #[getter]
    fn terminated_exactly(&self) -> bool {
        self.inner.terminated_exactly
    }

    fn __repr__(&self) -> String {
        let (re, im) = precise(self.inner.value);
        format!(
            "EvalResult(value=({re}, {im}), abs_error_estimate={:.3e}, terms_used={})",
            self.inner.abs_error_estimate, self.inner.terms_used
        )
    }
}

fn wrap(r: pfq::Result<pfq::EvalResult>) -> PyResult<PyEvalResult> {
    r.map(|inner| PyEvalResult { inner }).map_err(to_py)
}

/// Parameters and argument of pFq.
#[pyclass(name = "HyperSpec", frozen)]
struct PyHyperSpec {
    inner: pfq::HyperSpec,
}

#[pymethods]
impl PyHyperSpec {
    #[new]
    fn new(
        numerator: Vec<Bound<'_, PyAny>>,
        denominator: Vec<Bound<'_, PyAny>>,
        argument: Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        let inner =
            pfq::HyperSpec::new(scalars(&numerator)?, scalars(&denominator)?, scalar(&argument)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn p(&self) -> usize {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> usize {
        self.inner.q()
    }

    #[getter]
    fn numerator(&self) -> Vec<num_pair::Pair> {
        self.inner.numerator().iter().map(|&z| py_complex(z)).collect()
    }

    #[getter]
    fn denominator(&self) -> Vec<num_pair::Pair> {
        self.inner.denominator().iter().map(|&z| py_complex(z)).collect()
    }

    #[getter]
    fn argument(&self) -> num_pair::Pair {
        py_complex(self.inner.argument())
    }

    /// One of 'entire', 'unit_disk', 'terminating', 'divergent'.
    fn classify(&self) -> &'static str {
        match pfq::classify(&self.inner) {
            ConvergenceClass::Entire => "entire",
            ConvergenceClass::UnitDisk => "unit_disk",
            ConvergenceClass::Terminating => "terminating",
            ConvergenceClass::Divergent => "divergent",
        }
    }

    #[pyo3(signature = (policy=None))]
    fn eval(&self, policy: Option<PyPolicy>) -> PyResult<PyEvalResult> {
        wrap(pfq::eval_series(&self.inner, &policy_of(policy)))
    }

    fn __repr__(&self) -> String {
        format!("HyperSpec({}F{}, x={})", self.inner.p(), self.inner.q(), self.inner.argument())
    }
}

fn spec(num: &[Bound<'_, PyAny>], den: &[Bound<'_, PyAny>], x: &Bound<'_, PyAny>) -> PyResult<pfq::HyperSpec> {
    pfq::HyperSpec::new(scalars(num)?, scalars(den)?, scalar(x)?).map_err(to_py)
}

fn addition(
    num: &[Bound<'_, PyAny>],
    den: &[Bound<'_, PyAny>],
    x: &Bound<'_, PyAny>,
    y: &Bound<'_, PyAny>,
) -> PyResult<AdditionInput> {
    AdditionInput::new(scalars(num)?, scalars(den)?, scalar(x)?, scalar(y)?).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, policy=None))]
fn eval_series(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    wrap(pfq::eval_series(&spec(&numerator, &denominator, &x)?, &policy_of(policy)))
}

/// exp(log_prefactor) * pFq, with the product formed before rounding.
#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, log_prefactor, policy=None))]
fn eval_series_scaled(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    log_prefactor: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    let s = spec(&numerator, &denominator, &x)?;
    wrap(pfq::eval_series_scaled(&s, &policy_of(policy), scalar(&log_prefactor)?))
}

#[pyfunction]
fn pochhammer(a: Bound<'_, PyAny>, n: usize) -> PyResult<num_pair::Pair> {
    pfq::numerics::pochhammer(scalar(&a)?, n).map(py_complex).map_err(to_py)
}

#[pyfunction]
fn gamma(z: Bound<'_, PyAny>) -> PyResult<num_pair::Pair> {
    pfq::numerics::gamma(scalar(&z)?).map(py_complex).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, y, policy=None))]
fn th1_addition_rhs(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    y: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    wrap(identities::th1_addition_rhs(&addition(&numerator, &denominator, &x, &y)?, &policy_of(policy)))
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, y, policy=None, relaxed_domain=false))]
fn th2_addition_rhs(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    y: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
    relaxed_domain: bool,
) -> PyResult<PyEvalResult> {
    let input = addition(&numerator, &denominator, &x, &y)?;
    wrap(identities::th2_addition_rhs(&input, &policy_of(policy), relaxed_domain))
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, policy=None))]
fn th3_kummer_rhs(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    wrap(identities::th3_kummer_rhs(&spec(&numerator, &denominator, &x)?, &policy_of(policy)))
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, policy=None, relaxed_domain=false))]
fn th4_euler_rhs(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    policy: Option<PyPolicy>,
    relaxed_domain: bool,
) -> PyResult<PyEvalResult> {
    wrap(identities::th4_euler_rhs(&spec(&numerator, &denominator, &x)?, &policy_of(policy), relaxed_domain))
}

#[pyclass(name = "IdentityReport", frozen)]
struct PyIdentityReport {
    inner: identities::IdentityReport,
}

#[pymethods]
impl PyIdentityReport {
    #[getter]
    fn theorem(&self) -> String {
        self.inner.theorem.to_string()
    }

    #[getter]
    fn lhs(&self) -> Option<PyEvalResult> {
        self.inner.lhs.map(|inner| PyEvalResult { inner })
    }

    #[getter]
    fn rhs(&self) -> Option<PyEvalResult> {
        self.inner.rhs.map(|inner| PyEvalResult { inner })
    }

    #[getter]
    fn abs_diff(&self) -> Option<f64> {
        self.inner.abs_diff
    }

    #[getter]
    fn rel_diff(&self) -> Option<f64> {
        self.inner.rel_diff
    }

    #[getter]
    fn domain_ok(&self) -> bool {
        self.inner.domain_ok
    }

    #[getter]
    fn experimental(&self) -> bool {
        self.inner.experimental
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.passed
    }

    #[getter]
    fn diagnostic(&self) -> Option<String> {
        self.inner.diagnostic.clone()
    }

    fn __repr__(&self) -> String {
        let r = &self.inner;
        format!(
            "IdentityReport(theorem={}, passed={}, rel_diff={}, domain_ok={})",
            r.theorem,
            if r.passed { "True" } else { "False" },
            r.rel_diff.map_or("None".into(), |v| format!("{v:.3e}")),
            if r.domain_ok { "True" } else { "False" },
        )
    }
}

/// Compares both sides of theorem 't1'..'t4'. Never raises for evaluation
/// failures; those land in `diagnostic`.
#[pyfunction]
#[pyo3(signature = (theorem, numerator, denominator, x, y=None, policy=None, tol=1e-10, relaxed_domain=false))]
#[allow(clippy::too_many_arguments)]
fn verify(
    theorem: &str,
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    y: Option<Bound<'_, PyAny>>,
    policy: Option<PyPolicy>,
    tol: f64,
    relaxed_domain: bool,
) -> PyResult<PyIdentityReport> {
    let theorem: Theorem = theorem.parse().map_err(to_py)?;
    let input = match (theorem.is_addition(), y) {
        (true, Some(y)) => IdentityInput::Addition(addition(&numerator, &denominator, &x, &y)?),
        (true, None) => return Err(PyValueError::new_err(format!("{theorem} needs y"))),
        (false, None) => IdentityInput::Transform(spec(&numerator, &denominator, &x)?),
        (false, Some(_)) => return Err(PyValueError::new_err(format!("{theorem} takes no y"))),
    };
    let inner = identities::verify(theorem, &input, &policy_of(policy), tol, relaxed_domain);
    Ok(PyIdentityReport { inner })
}

fn rule_kind(kind: &str) -> PyResult<RuleKind> {
    match kind {
        "legendre_01" | "legendre" => Ok(RuleKind::Legendre01),
        "laguerre_0inf" | "laguerre" => Ok(RuleKind::Laguerre0Inf),
        other => Err(PyValueError::new_err(format!("unknown rule kind '{other}'"))),
    }
}

/// (abscissa, weight) pairs rounded to float.
#[pyfunction]
fn build_rule(kind: &str, order: usize) -> PyResult<Vec<(f64, f64)>> {
    let rule = oracle::build_rule(rule_kind(kind)?, order).map_err(to_py)?;
    Ok(rule.nodes.iter().map(|(t, w)| (t.to_f64(), w.to_f64())).collect())
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, order=oracle::DEFAULT_LEGENDRE_ORDER, policy=None))]
fn euler_integral(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    order: usize,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    let rule = oracle::cached_rule(RuleKind::Legendre01, order).map_err(to_py)?;
    wrap(oracle::euler_integral(&spec(&numerator, &denominator, &x)?, &rule, &policy_of(policy)))
}

#[pyfunction]
#[pyo3(signature = (numerator, denominator, x, order=oracle::DEFAULT_LAGUERRE_ORDER, policy=None))]
fn laplace_integral(
    numerator: Vec<Bound<'_, PyAny>>,
    denominator: Vec<Bound<'_, PyAny>>,
    x: Bound<'_, PyAny>,
    order: usize,
    policy: Option<PyPolicy>,
) -> PyResult<PyEvalResult> {
    let rule = oracle::cached_rule(RuleKind::Laguerre0Inf, order).map_err(to_py)?;
    wrap(oracle::laplace_integral(&spec(&numerator, &denominator, &x)?, &rule, &policy_of(policy)))
}

/// The multi-indices of total order `order`, as `j` tuples.
#[pyfunction]
fn enumerate_shells(p: usize, order: usize) -> PyResult<Vec<Vec<usize>>> {
    if p == 0 {
        return Err(PyValueError::new_err("p must be at least 1"));
    }
    Ok(identities::enumerate_shells(p, order).map(|m| m.j().to_vec()).collect())
}

/// Real and imaginary ranges for one sampled slot.
type SlotBox = ((f64, f64), (f64, f64));

/// Runs a seeded sweep and returns the rendered report.
#[pyfunction(name = "sweep")]
#[pyo3(signature = (theorem, p=vec![1], draws=1, seed=0, tol=1e-10, relaxed_domain=false, threads=0, format="json", policy=None, slot_boxes=None))]
#[allow(clippy::too_many_arguments)]
fn run_sweep(
    py: Python<'_>,
    theorem: &str,
    p: Vec<usize>,
    draws: usize,
    seed: u64,
    tol: f64,
    relaxed_domain: bool,
    threads: usize,
    format: &str,
    policy: Option<PyPolicy>,
    slot_boxes: Option<BTreeMap<String, SlotBox>>,
) -> PyResult<String> {
    let mut config = SweepConfig::new(theorem.parse().map_err(to_py)?);
    config.p = p;
    config.draws = draws;
    config.seed = seed;
    config.tol = tol;
    config.relaxed_domain = relaxed_domain;
    config.threads = threads;
    config.policy = policy_of(policy);
    config.output_format = format.parse::<OutputFormat>().map_err(to_py)?;
    for (name, (re, im)) in slot_boxes.unwrap_or_default() {
        config.slot_boxes.insert(name, sweep::ParameterBox { re, im });
    }
    let outcome = py.detach(|| sweep::run_sweep(&config)).map_err(to_py)?;
    sweep::render(&outcome, config.output_format).map_err(to_py)
}

#[pymodule]
#[pyo3(name = "pfq")]
fn pfq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ConvergenceError", m.py().get_type::<ConvergenceError>())?;
    m.add_class::<PyPolicy>()?;
    m.add_class::<PyEvalResult>()?;
    m.add_class::<PyHyperSpec>()?;
    m.add_class::<PyIdentityReport>()?;
    m.add_function(wrap_pyfunction!(eval_series, m)?)?;
    m.add_function(wrap_pyfunction!(eval_series_scaled, m)?)?;
    m.add_function(wrap_pyfunction!(pochhammer, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(th1_addition_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(th2_addition_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(th3_kummer_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(th4_euler_rhs, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(build_rule, m)?)?;
    m.add_function(wrap_pyfunction!(euler_integral, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_integral, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_shells, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
