//! Python bindings for the `gtm` library.

use gtm::{ExactRational, GtmError, KernelOutcome, PeriodicityVerdict};
use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(gtm, SpecError, PyValueError, "Invalid spec, argument or refused operation.");

fn err(e: GtmError) -> PyErr {
    SpecError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, x: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    cls.call1((x.numer().clone(), x.denom().clone()))
}

/// The digit map κ of an (L, k, κ) sequence.
#[pyclass(name = "KappaSpec", frozen, module = "gtm")]
struct PyKappaSpec {
    inner: gtm::KappaSpec,
}

#[pymethods]
impl PyKappaSpec {
    /// `rows[s-1][y] = κ(s, y)`; columns `y ≥ preperiod` repeat with `period`.
    #[new]
    #[pyo3(signature = (modulus, base, rows, preperiod, period))]
    fn new(modulus: u32, base: u32, rows: Vec<Vec<u32>>, preperiod: usize, period: usize) -> PyResult<Self> {
        gtm::KappaSpec::eventually_periodic(modulus, base, rows, preperiod, period)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn finite_window(modulus: u32, base: u32, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        gtm::KappaSpec::finite_window(modulus, base, rows)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn constant(modulus: u32, base: u32, values: Vec<u32>) -> PyResult<Self> {
        gtm::KappaSpec::constant(modulus, base, &values)
            .map(|inner| Self { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn thue_morse() -> Self {
        Self {
            inner: gtm::KappaSpec::thue_morse(),
        }
    }

    /// Parses the TOML spec-file format.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        gtm::parse_spec(text).map(|f| Self { inner: f.spec }).map_err(err)
    }

    fn to_toml(&self) -> String {
        gtm::to_toml(&self.inner, None)
    }

    #[getter]
    fn modulus(&self) -> u32 {
        self.inner.modulus()
    }

    #[getter]
    fn base(&self) -> u32 {
        self.inner.base()
    }

    fn kappa(&self, s: u32, y: usize) -> PyResult<u32> {
        self.inner.kappa(s, y).map_err(err)
    }

    /// `a(n)`.
    fn a(&self, n: u64) -> PyResult<u32> {
        gtm::a_of_n(&self.inner, n).map_err(err)
    }

    /// `[a(n) for n < count]` by digit counting.
    fn prefix(&self, count: u64) -> PyResult<Vec<u32>> {
        gtm::prefix_digit(&self.inner, count).map_err(err)
    }

    /// `A_m`, the length-`k^m` prefix, by the morphic recursion.
    fn morphic_prefix(&self, m: u32) -> PyResult<Vec<u32>> {
        gtm::generate_prefix_morphic(&self.inner, m).map_err(err)
    }

    /// `[a(start + i·stride) for i < count]`.
    fn window(&self, start: u64, stride: u64, count: usize) -> PyResult<Vec<u32>> {
        gtm::equally_spaced(&self.inner, start, stride, count)
            .map(|w| w.values)
            .map_err(err)
    }

    fn classify<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        match gtm::classify(&self.inner).map_err(err)? {
            PeriodicityVerdict::Periodic {
                offset,
                period,
                multiplier,
                ..
            } => {
                d.set_item("status", "Periodic")?;
                d.set_item("offset", offset)?;
                d.set_item("period", period)?;
                d.set_item("multiplier", multiplier)?;
            }
            PeriodicityVerdict::NonPeriodic { refutations, .. } => {
                d.set_item("status", "NonPeriodic")?;
                let r: Vec<(usize, u32, usize)> =
                    refutations.iter().map(|r| (r.offset, r.digit, r.exponent)).collect();
                d.set_item("refutations", r)?;
            }
            PeriodicityVerdict::UnknownUpToBound {
                bound,
                consistent_offsets,
            } => {
                d.set_item("status", "UnknownUpToBound")?;
                d.set_item("bound", bound)?;
                d.set_item("consistent_offsets", consistent_offsets)?;
            }
        }
        Ok(d)
    }

    /// Stammering witness `(U, V, w)` for `a(start + n·stride)`.
    #[pyo3(signature = (start, stride, m=None))]
    fn stammer<'py>(&self, py: Python<'py>, start: u64, stride: u64, m: Option<u32>) -> PyResult<Bound<'py, PyDict>> {
        let m = m.unwrap_or_else(|| gtm::stammering::min_exponent(self.inner.base(), start, stride) + 1);
        let w = gtm::build_witness(&self.inner, start, stride, m).map_err(err)?;
        let window = gtm::equally_spaced(&self.inner, start, stride, w.word().len()).map_err(err)?;
        let check = gtm::verify_witness(&window, &w).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("m", m)?;
        d.set_item("u", &w.prefix)?;
        d.set_item("v", &w.repeat)?;
        d.set_item(
            "exponent",
            py.import("fractions")?
                .getattr("Fraction")?
                .call1((*w.exponent.numer(), *w.exponent.denom()))?,
        )?;
        d.set_item("verified", check.valid)?;
        d.set_item("bounds_hold", w.bounds().all())?;
        Ok(d)
    }

    /// Kernel DFAO, or `None` when the closure is inconclusive.
    #[pyo3(signature = (max_states=10_000))]
    fn kernel<'py>(&self, py: Python<'py>, max_states: usize) -> PyResult<Option<Bound<'py, PyDict>>> {
        match gtm::kernel_explore(&self.inner, max_states) {
            KernelOutcome::Closed(a) => {
                let d = PyDict::new(py);
                let states: Vec<(usize, u32)> = a.states.iter().map(|s| (s.shift, s.offset)).collect();
                d.set_item("states", states)?;
                d.set_item("transitions", &a.transitions)?;
                d.set_item("outputs", &a.outputs)?;
                d.set_item("depth", &a.depth)?;
                Ok(Some(d))
            }
            KernelOutcome::Inconclusive { .. } => Ok(None),
        }
    }

    /// `(lo, hi)` as `Fraction`s enclosing `Σ a(start + n·stride) β^{-n-1}`.
    #[pyo3(signature = (start, stride, beta, digits=12))]
    fn eval_series<'py>(
        &self,
        py: Python<'py>,
        start: u64,
        stride: u64,
        beta: u64,
        digits: u32,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let iv = gtm::eval_series(&self.inner, start, stride, beta, digits).map_err(err)?;
        Ok((fraction(py, &iv.lo)?, fraction(py, &iv.hi)?))
    }

    /// Exact value for periodic sequences.
    fn closed_form<'py>(&self, py: Python<'py>, start: u64, stride: u64, beta: u64) -> PyResult<Bound<'py, PyAny>> {
        let x = gtm::periodic_closed_form(&self.inner, start, stride, beta).map_err(err)?;
        fraction(py, &x)
    }

    /// Continued fraction `[0; ρ(a(start)), ρ(a(start+stride)), …]`:
    /// `(partial_quotients, numerators, denominators)`.
    #[pyo3(signature = (start, stride, depth, values=None))]
    fn continued_fraction(
        &self,
        start: u64,
        stride: u64,
        depth: usize,
        values: Option<Vec<u64>>,
    ) -> PyResult<(Vec<u64>, Vec<BigUint>, Vec<BigUint>)> {
        let map = match values {
            Some(v) => gtm::ValueMap::new(v).map_err(err)?,
            None => gtm::ValueMap::shifted(self.inner.modulus()),
        };
        let c = gtm::eval_cf(&self.inner, start, stride, depth, &map).map_err(err)?;
        Ok((c.partial_quotients, c.numerators, c.denominators))
    }

    fn __repr__(&self) -> String {
        format!(
            "KappaSpec(L={}, k={}, rows={:?}, tail={:?})",
            self.inner.modulus(),
            self.inner.base(),
            self.inner.rows(),
            self.inner.tail()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Base-k expansion of `n` as `[(coeff, exponent), …]`, lowest exponent first.
#[pyfunction]
fn expand(n: BigUint, k: u32) -> PyResult<Vec<(u32, usize)>> {
    let e = gtm::expand_big(&n, k).map_err(err)?;
    Ok(e.terms().iter().map(|t| (t.coeff, t.exponent)).collect())
}

/// `(x, x·l, leading_exponent, gap)` with `x·l` = `k^w·(1 + higher terms)` and gap > t.
#[pyfunction]
fn gap_multiple(l: u64, k: u32, t: u32) -> PyResult<(BigUint, BigUint, usize, Option<usize>)> {
    let r = gtm::gap_multiple(l, k, t).map_err(err)?;
    Ok((r.multiplier, r.product, r.leading_exponent, r.gap))
}

/// Least `(preperiod, period)` of a finite word within the bounds, or `None`.
#[pyfunction]
fn brute_force_period(values: Vec<u32>, max_preperiod: usize, max_period: usize) -> PyResult<Option<(usize, usize)>> {
    gtm::brute_force_period(&values, max_preperiod, max_period).map_err(err)
}

/// `1 + max log q_{n+1} / log q_n` over the upper half of the denominators.
#[pyfunction]
fn irrationality_estimate(partial_quotients: Vec<u64>) -> PyResult<f64> {
    let c = gtm::ConvergentList::from_quotients(partial_quotients);
    gtm::irrationality_estimate(&c).map(|e| e.value).map_err(err)
}

#[pymodule]
#[pyo3(name = "gtm")]
fn gtm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyKappaSpec>()?;
    m.add_function(wrap_pyfunction!(expand, m)?)?;
    m.add_function(wrap_pyfunction!(gap_multiple, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_period, m)?)?;
    m.add_function(wrap_pyfunction!(irrationality_estimate, m)?)?;
    m.add("SpecError", m.py().get_type::<SpecError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
