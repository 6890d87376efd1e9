//! Python bindings.

use num_complex::Complex64;
use privalov::circle_sets::{self, ArcSet};
use privalov::conformal::{self, Membership};
use privalov::harmonic_measure::{self, Polynomial, WosConfig};
use privalov::majorants::{self, PositiveSequence, RegularMajorant};
use privalov::spectral_moments;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: privalov::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn wos(samples: u64, seed: u64, eps_shell: f64) -> WosConfig {
    WosConfig {
        samples,
        seed,
        eps_shell,
        ..WosConfig::default()
    }
}

/// A regular majorant `h` on `[0, 1]`.
#[pyclass(name = "Majorant", frozen)]
struct PyMajorant(RegularMajorant);

#[pymethods]
impl PyMajorant {
    /// `x`, `sqrt`, `square`, `xlog`, `invlog`, `zero` or `pow:<a>`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        RegularMajorant::from_name(name).map(Self).map_err(err)
    }

    #[staticmethod]
    fn power(a: f64) -> PyResult<Self> {
        RegularMajorant::power(a).map(Self).map_err(err)
    }

    #[staticmethod]
    fn constant(value: f64) -> PyResult<Self> {
        RegularMajorant::constant(value).map(Self).map_err(err)
    }

    /// Piecewise-linear majorant through `(x, y)` breakpoints.
    #[staticmethod]
    fn table(breakpoints: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        RegularMajorant::from_table(breakpoints, values).map(Self).map_err(err)
    }

    /// Least concave majorant of sample points.
    #[staticmethod]
    fn concave_majorant(samples: Vec<(f64, f64)>) -> PyResult<Self> {
        majorants::least_concave_majorant(&samples).map(Self).map_err(err)
    }

    fn __call__(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    /// `h(x)/x`.
    fn ratio(&self, x: f64) -> f64 {
        self.0.ratio(x)
    }

    /// `λ_h(r) = exp(h(1−r)/(1−r))`.
    fn growth(&self, r: f64) -> PyResult<f64> {
        majorants::eval_lambda_h(&self.0, r).map_err(err)
    }

    /// `(increasing, ratio_decreasing, max_violation)` on a sample grid.
    fn regularity(&self, grid_size: usize) -> (bool, bool, f64) {
        let r = majorants::check_regularity(&self.0, grid_size);
        (r.increasing, r.ratio_decreasing, r.max_violation)
    }

    fn __repr__(&self) -> String {
        format!("Majorant({:?})", self.0.shape())
    }
}

/// A positive sequence `c_1, c_2, …`.
#[pyclass(name = "Sequence", frozen)]
struct PySequence(PositiveSequence);

#[pymethods]
impl PySequence {
    /// `one_over_n` or `one_over_log`.
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        PositiveSequence::from_name(name).map(Self).map_err(err)
    }

    #[staticmethod]
    fn explicit(terms: Vec<f64>) -> PyResult<Self> {
        PositiveSequence::explicit(terms).map(Self).map_err(err)
    }

    /// `c_n` for `n ≥ 1`.
    fn term(&self, n: usize) -> Option<f64> {
        self.0.term(n)
    }
}

/// Regularized terms `c̃_1..c̃_horizon`.
#[pyfunction]
fn regularize(c: &PySequence, horizon: usize) -> PyResult<Vec<f64>> {
    let r = majorants::regularize_sequence(&c.0, horizon).map_err(err)?;
    Ok((1..=r.len()).filter_map(|n| r.term(n)).collect())
}

/// `(dominates, nonincreasing, ratio_bound)` for the regularization of `c`.
#[pyfunction]
fn check_replacement(c: &PySequence, horizon: usize) -> PyResult<(bool, bool, bool)> {
    let r = majorants::regularize_sequence(&c.0, horizon).map_err(err)?;
    let rep = majorants::check_replacement(&c.0, &r);
    Ok((rep.dominates, rep.nonincreasing, rep.ratio_bound))
}

/// `inf_{x∈(0,1)} n x + h(x)/x` as `(value, argmin)`.
#[pyfunction]
fn legendre_inf(n: u64, h: &PyMajorant) -> (f64, f64) {
    let r = majorants::legendre_inf(n, &h.0);
    (r.value, r.argmin)
}

/// Concave majorant built from the regularization of `c`.
#[pyfunction]
fn majorant_from_sequence(c: &PySequence, horizon: usize) -> PyResult<PyMajorant> {
    let r = majorants::regularize_sequence(&c.0, horizon + 1).map_err(err)?;
    majorants::h_from_sequence(r.sequence(), horizon, true).map(PyMajorant).map_err(err)
}

/// A closed subset of the unit circle, stored by its gaps.
#[pyclass(name = "ArcSet", frozen)]
struct PyArcSet(ArcSet);

#[pymethods]
impl PyArcSet {
    /// Set whose complement is the given open arcs `(start, end)`.
    #[new]
    fn new(gaps: Vec<(f64, f64)>) -> PyResult<Self> {
        ArcSet::from_gaps(gaps).map(Self).map_err(err)
    }

    #[staticmethod]
    fn full_circle() -> Self {
        Self(ArcSet::full_circle())
    }

    #[staticmethod]
    fn cantor(h: &PyMajorant, measure: f64, depth: usize) -> PyResult<Self> {
        circle_sets::build_cantor_set(&h.0, measure, depth).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        ArcSet::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        self.0.to_json().map_err(err)
    }

    #[getter]
    fn gaps(&self) -> Vec<(f64, f64)> {
        self.0.gaps().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.num_gaps()
    }

    fn measure(&self) -> f64 {
        self.0.measure()
    }

    fn max_arc_length(&self) -> f64 {
        self.0.max_arc_length()
    }

    fn carleson_sum(&self, h: &PyMajorant) -> f64 {
        circle_sets::carleson_sum(&self.0, &h.0)
    }

    /// Whether a Cantor build meets its measure, sum and arc guarantees.
    fn audit(&self, h: &PyMajorant, measure: f64, depth: usize) -> bool {
        circle_sets::audit_cantor_set(&self.0, &h.0, measure, depth).passed
    }

    fn split(&self, max_gap: f64) -> PyResult<Self> {
        circle_sets::split_long_gaps(&self.0, max_gap).map(Self).map_err(err)
    }
}

/// `φ_L`, mapping the slit upper half-plane onto the upper half-plane.
#[pyclass(name = "JoukowskiMap", frozen)]
struct PyJoukowski(conformal::JoukowskiMap);

#[pymethods]
impl PyJoukowski {
    #[new]
    fn new(l: f64) -> PyResult<Self> {
        conformal::JoukowskiMap::new(l).map(Self).map_err(err)
    }

    fn forward(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.forward(z).map_err(err)
    }

    fn inverse(&self, w: Complex64) -> PyResult<Complex64> {
        self.0.inverse(w).map_err(err)
    }
}

#[pyfunction]
fn cayley(z: Complex64) -> PyResult<Complex64> {
    conformal::cayley(z).map_err(err)
}

#[pyfunction]
fn cayley_inverse(w: Complex64) -> PyResult<Complex64> {
    conformal::cayley_inverse(w).map_err(err)
}

#[pyfunction]
fn distortion_ratio(z1: Complex64, z2: Complex64) -> PyResult<f64> {
    conformal::distortion_ratio(z1, z2).map_err(err)
}

/// `(center, radius)` of the geodesic over the gap `(a, b)`.
#[pyfunction]
fn geodesic(a: f64, b: f64) -> PyResult<(Complex64, f64)> {
    let g = conformal::geodesic_for_gap(a, b).map_err(err)?;
    Ok((g.center, g.radius))
}

/// The unit disk minus the lens over each gap of a set.
#[pyclass(name = "Domain", frozen)]
struct PyDomain(conformal::PrivalovDomain);

#[pymethods]
impl PyDomain {
    #[new]
    fn new(set: &PyArcSet) -> PyResult<Self> {
        conformal::PrivalovDomain::new(set.0.clone()).map(Self).map_err(err)
    }

    /// `"inside"`, `"cap:<gap>"` or `"outside"`.
    fn membership(&self, z: Complex64) -> String {
        match self.0.membership(z) {
            Membership::Inside => "inside".into(),
            Membership::InCap(i) => format!("cap:{i}"),
            Membership::OutsideDisk => "outside".into(),
        }
    }

    fn distance_to_boundary(&self, z: Complex64) -> PyResult<f64> {
        self.0.distance_to_boundary(z).map_err(err)
    }

    fn to_svg(&self, size: u32) -> String {
        self.0.to_svg(size)
    }
}

#[pyfunction]
fn arc_measure_exact(l: f64, t: f64) -> PyResult<f64> {
    harmonic_measure::arc_measure_exact(l, t).map_err(err)
}

#[pyfunction]
fn arc_measure_bound(l: f64, t: f64) -> PyResult<f64> {
    harmonic_measure::arc_measure_bound(l, t).map_err(err)
}

/// Walk-on-spheres estimate `(value, stderr)` of the arc measure.
#[pyfunction]
#[pyo3(signature = (l, t, samples = 100_000, seed = 0, eps_shell = 1e-6))]
fn arc_measure_wos(py: Python<'_>, l: f64, t: f64, samples: u64, seed: u64, eps_shell: f64) -> PyResult<(f64, f64)> {
    let cfg = wos(samples, seed, eps_shell);
    let est = py.detach(|| harmonic_measure::arc_measure_wos(l, t, &cfg)).map_err(err)?;
    Ok((est.value, est.stderr))
}

/// Per-gap `(value, stderr, bound)` of the gap functional and the total.
#[pyfunction]
#[pyo3(signature = (set, h, samples = 100_000, seed = 0, eps_shell = 1e-6))]
fn gap_functional(
    py: Python<'_>,
    set: &PyArcSet,
    h: &PyMajorant,
    samples: u64,
    seed: u64,
    eps_shell: f64,
) -> PyResult<(Vec<(f64, f64, f64)>, f64)> {
    let cfg = wos(samples, seed, eps_shell);
    let r = py
        .detach(|| harmonic_measure::integrability_functional(&set.0, &h.0, &cfg))
        .map_err(err)?;
    Ok((r.per_gap.iter().map(|g| (g.value, g.stderr, g.bound)).collect(), r.total))
}

/// `∫₀¹ xⁿ G(x) dx` as `(value, error)`.
#[pyfunction]
#[pyo3(signature = (h, n, tol = spectral_moments::DEFAULT_MOMENT_TOL))]
fn moment(h: &PyMajorant, n: u64, tol: f64) -> PyResult<(f64, f64)> {
    let m = spectral_moments::moment(&h.0, n, tol).map_err(err)?;
    Ok((m.value, m.error))
}

/// Weighted Bergman norm of the polynomial with the given coefficients.
#[pyfunction]
#[pyo3(signature = (coefficients, h, tol = spectral_moments::DEFAULT_MOMENT_TOL))]
fn bergman_norm(coefficients: Vec<Complex64>, h: &PyMajorant, tol: f64) -> PyResult<f64> {
    spectral_moments::bergman_norm(&Polynomial::new(coefficients), &h.0, tol).map_err(err)
}

#[pymodule]
fn pyprivalov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMajorant>()?;
    m.add_class::<PySequence>()?;
    m.add_class::<PyArcSet>()?;
    m.add_class::<PyJoukowski>()?;
    m.add_class::<PyDomain>()?;
    m.add_function(wrap_pyfunction!(regularize, m)?)?;
    m.add_function(wrap_pyfunction!(check_replacement, m)?)?;
    m.add_function(wrap_pyfunction!(legendre_inf, m)?)?;
    m.add_function(wrap_pyfunction!(majorant_from_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(cayley, m)?)?;
    m.add_function(wrap_pyfunction!(cayley_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(distortion_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(arc_measure_exact, m)?)?;
    m.add_function(wrap_pyfunction!(arc_measure_bound, m)?)?;
    m.add_function(wrap_pyfunction!(arc_measure_wos, m)?)?;
    m.add_function(wrap_pyfunction!(gap_functional, m)?)?;
    m.add_function(wrap_pyfunction!(moment, m)?)?;
    m.add_function(wrap_pyfunction!(bergman_norm, m)?)?;
    Ok(())
}
