//! Python bindings for `elastica-core`.
//!
//! Curves cross the boundary as lists of points; results come back as
//! small read-only classes.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use elastica_core as core;
use elastica_core::kernel::{MatchParams, Sigma};
use elastica_core::{LiftMode, Rotation};

create_exception!(elastica, ElasticaError, PyValueError, "Invalid input or degenerate geometry.");

fn err(e: core::Error) -> PyErr {
    ElasticaError::new_err(e.to_string())
}

fn params(sigma: f64, grid: usize, k_max: usize) -> PyResult<MatchParams> {
    if !(1..=16).contains(&k_max) {
        return Err(ElasticaError::new_err(format!("k_max must lie in 1..=16, got {k_max}")));
    }
    Ok(MatchParams::new(sigma, grid).map_err(err)?.with_k_max(k_max))
}

/// Polyline in two or more dimensions; `closed` adds the segment from the
/// last point back to the first.
#[pyclass(name = "Curve", frozen)]
struct PyCurve {
    inner: core::Curve,
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (points, closed=false))]
    fn new(points: Vec<Vec<f64>>, closed: bool) -> PyResult<Self> {
        Ok(PyCurve {
            inner: core::Curve::new(points, closed).map_err(err)?,
        })
    }

    /// Reads a CSV file with one point per line.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let inner = core::io::read_curve(std::path::Path::new(path)).map_err(err)?;
        Ok(PyCurve { inner })
    }

    #[getter]
    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().to_vec()
    }

    #[getter]
    fn closed(&self) -> bool {
        self.inner.is_closed()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn length(&self) -> f64 {
        self.inner.length()
    }

    /// Planar rotation by `angle` radians, counterclockwise.
    fn rotated(&self, angle: f64) -> Self {
        PyCurve {
            inner: self.inner.rotated(angle),
        }
    }

    /// Same closed curve starting at vertex `k`.
    fn start_at(&self, k: usize) -> Self {
        PyCurve {
            inner: self.inner.start_at(k),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.points().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Curve(points={}, dim={}, closed={})",
            self.inner.points().len(),
            self.inner.dim(),
            if self.inner.is_closed() { "True" } else { "False" }
        )
    }
}

#[pyclass(name = "MatchResult", frozen)]
struct PyMatchResult {
    inner: core::MatchResult,
}

#[pymethods]
impl PyMatchResult {
    #[getter]
    fn distance(&self) -> f64 {
        self.inner.distance
    }

    /// Optimal value of `sum f_sigma sqrt(ds dst)`, in `[0, 1]`.
    #[getter]
    fn score(&self) -> f64 {
        self.inner.score
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma
    }

    /// Knots `(s, phi(s))` of the optimal reparametrization.
    #[getter]
    fn phi(&self) -> Vec<(f64, f64)> {
        self.inner.phi.knots().iter().map(|k| (k[0], k[1])).collect()
    }

    /// Planar angle, a rotation matrix, or None.
    #[getter]
    fn rotation<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        Ok(match &self.inner.rotation {
            None => None,
            Some(Rotation::Angle(c)) => Some(c.into_pyobject(py)?.into_any()),
            Some(Rotation::Matrix(m)) => Some(m.clone().into_pyobject(py)?.into_any()),
        })
    }

    #[getter]
    fn offset(&self) -> Option<f64> {
        self.inner.offset
    }

    fn to_json(&self) -> PyResult<String> {
        core::io::to_json(&self.inner).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("MatchResult(distance={}, sigma={})", self.inner.distance, self.inner.sigma)
    }
}

#[pyclass(name = "GeodesicPath", frozen)]
struct PyGeodesicPath {
    inner: core::GeodesicPath,
    sigma: Sigma,
}

#[pymethods]
impl PyGeodesicPath {
    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho
    }

    #[getter]
    fn distance(&self) -> f64 {
        2.0 * self.inner.rho
    }

    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }

    /// One polyline per time sample.
    #[getter]
    fn frames(&self) -> Vec<Vec<Vec<f64>>> {
        self.inner.curves.clone()
    }

    #[getter]
    fn gamma_norms(&self) -> Vec<f64> {
        self.inner.gamma_norms.clone()
    }

    #[getter]
    fn valid(&self) -> bool {
        self.inner.is_valid()
    }

    /// `(time_index, piece)` pairs where the pointwise interpolant vanishes.
    #[getter]
    fn invalid_cells(&self) -> Vec<(usize, usize)> {
        self.inner.validity.clone()
    }

    fn energy(&self) -> PyResult<f64> {
        core::energy(&self.inner, self.sigma).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.times.len()
    }

    fn __repr__(&self) -> String {
        format!("GeodesicPath(frames={}, rho={})", self.inner.times.len(), self.inner.rho)
    }
}

/// Distance between open curves modulo reparametrization.
#[pyfunction]
#[pyo3(signature = (a, b, sigma=1.0, grid=256, k_max=4))]
fn distance_open(py: Python<'_>, a: &PyCurve, b: &PyCurve, sigma: f64, grid: usize, k_max: usize) -> PyResult<PyMatchResult> {
    let p = params(sigma, grid, k_max)?;
    let inner = py.detach(|| core::distance_open(&a.inner, &b.inner, &p)).map_err(err)?;
    Ok(PyMatchResult { inner })
}

/// Distance minimized over rotations of `a`.
#[pyfunction]
#[pyo3(signature = (a, b, sigma=1.0, grid=256, k_max=4))]
fn distance_rotation_invariant(
    py: Python<'_>,
    a: &PyCurve,
    b: &PyCurve,
    sigma: f64,
    grid: usize,
    k_max: usize,
) -> PyResult<PyMatchResult> {
    let p = params(sigma, grid, k_max)?;
    let inner = py
        .detach(|| core::distance_rotation_invariant(&a.inner, &b.inner, &p))
        .map_err(err)?;
    Ok(PyMatchResult { inner })
}

/// Distance between closed curves minimized over the starting point of `a`
/// and, if `rotation`, over rotations.
#[pyfunction]
#[pyo3(signature = (a, b, sigma=1.0, grid=256, k_max=4, rotation=true))]
fn distance_closed(
    py: Python<'_>,
    a: &PyCurve,
    b: &PyCurve,
    sigma: f64,
    grid: usize,
    k_max: usize,
    rotation: bool,
) -> PyResult<PyMatchResult> {
    let p = params(sigma, grid, k_max)?;
    let inner = py
        .detach(|| core::distance_closed_with(&a.inner, &b.inner, &p, rotation))
        .map_err(err)?;
    Ok(PyMatchResult { inner })
}

/// Distance between sampled real functions modulo increasing reparametrization.
#[pyfunction]
#[pyo3(signature = (f0, f1, sigma=1.0, grid=256, k_max=4))]
fn distance_1d(f0: Vec<f64>, f1: Vec<f64>, sigma: f64, grid: usize, k_max: usize) -> PyResult<PyMatchResult> {
    let p = params(sigma, grid, k_max)?;
    let f0 = core::SampledFunction::new(f0).map_err(err)?;
    let f1 = core::SampledFunction::new(f1).map_err(err)?;
    Ok(PyMatchResult {
        inner: core::distance_1d(&f0, &f1, &p).map_err(err)?,
    })
}

/// Clamped kernel `max(f_sigma, 0)` on the grid, as rows over `a`.
#[pyfunction]
#[pyo3(signature = (a, b, sigma=1.0, grid=256))]
fn cost_field(a: &PyCurve, b: &PyCurve, sigma: f64, grid: usize) -> PyResult<Vec<Vec<f64>>> {
    let a0 = core::resample_arclength(&a.inner, grid).map_err(err)?;
    let a1 = core::resample_arclength(&b.inner, grid).map_err(err)?;
    let field = core::cost_field(&a0, &a1, Sigma::new(sigma).map_err(err)?).map_err(err)?;
    Ok(field.values.chunks_exact(grid).map(<[f64]>::to_vec).collect())
}

/// Optimal path from `a` to `b`, sampled at `time_steps + 1` times.
#[pyfunction]
#[pyo3(signature = (a, b, sigma=1.0, grid=256, k_max=4, time_steps=16, lift="measurable"))]
#[allow(clippy::too_many_arguments)]
fn geodesic(
    py: Python<'_>,
    a: &PyCurve,
    b: &PyCurve,
    sigma: f64,
    grid: usize,
    k_max: usize,
    time_steps: usize,
    lift: &str,
) -> PyResult<PyGeodesicPath> {
    let lift = match lift {
        "measurable" => LiftMode::Measurable,
        "smooth" => LiftMode::Smooth,
        other => return Err(ElasticaError::new_err(format!("lift must be 'measurable' or 'smooth', got {other:?}"))),
    };
    let p = params(sigma, grid, k_max)?;
    let s = Sigma::new(sigma).map_err(err)?;
    let path = py
        .detach(|| {
            let a0 = core::resample_arclength(&a.inner, grid)?;
            let a1 = core::resample_arclength(&b.inner, grid)?;
            let m = core::match_tangents(&a0, &a1, &p)?;
            core::reconstruct_path(&a0, &a1, &m.phi, s, time_steps, lift)
        })
        .map_err(err)?;
    Ok(PyGeodesicPath { inner: path, sigma: s })
}

/// Grassmann distance between the frames of two closed planar curves, after
/// closing both by the closing projection.
#[pyfunction]
#[pyo3(signature = (a, b, grid=256))]
fn grassmann_distance(a: &PyCurve, b: &PyCurve, grid: usize) -> PyResult<f64> {
    let frame = |c: &core::Curve| -> core::Result<core::Frame2> {
        if !c.is_closed() {
            return Err(core::Error::NotClosed);
        }
        let closed = core::closing_projection(&core::resample_arclength(c, grid)?)?;
        Ok(core::frame_from(&core::Diffeo::identity(grid), &core::angle_lift(&closed)?))
    };
    core::grassmann_distance(&frame(&a.inner).map_err(err)?, &frame(&b.inner).map_err(err)?).map_err(err)
}

/// Closed polygon of `grid` vertices whose unit-length tangents are the
/// closing projection of `curve`'s; unit total length, starting at the origin.
#[pyfunction]
#[pyo3(signature = (curve, grid=256))]
fn close_curve(curve: &PyCurve, grid: usize) -> PyResult<PyCurve> {
    let a = core::resample_arclength(&curve.inner, grid).map_err(err)?;
    let mut pts = core::closing_projection(&a).map_err(err)?.reconstruct();
    pts.pop();
    Ok(PyCurve {
        inner: core::Curve::new(pts, true).map_err(err)?,
    })
}

#[pymodule]
fn elastica(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ElasticaError", m.py().get_type::<ElasticaError>())?;
    m.add_class::<PyCurve>()?;
    m.add_class::<PyMatchResult>()?;
    m.add_class::<PyGeodesicPath>()?;
    m.add_function(wrap_pyfunction!(distance_open, m)?)?;
    m.add_function(wrap_pyfunction!(distance_rotation_invariant, m)?)?;
    m.add_function(wrap_pyfunction!(distance_closed, m)?)?;
    m.add_function(wrap_pyfunction!(distance_1d, m)?)?;
    m.add_function(wrap_pyfunction!(cost_field, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic, m)?)?;
    m.add_function(wrap_pyfunction!(grassmann_distance, m)?)?;
    m.add_function(wrap_pyfunction!(close_curve, m)?)?;
    Ok(())
}
