//! Python bindings for `hexloc`. Points cross the boundary as `(x, y)`
//! tuples; library errors surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use hexloc::comparators::{Scheme, SchemeParams};
use hexloc::coverage::{self, Rect};
use hexloc::experiments;
use hexloc::localizer::{self, LocalizationParams};
use hexloc::protocol::{self, Network};
use hexloc::Point2D;

type Xy = (f64, f64);

fn err(e: hexloc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pt((x, y): Xy) -> Point2D {
    Point2D::new(x, y)
}

fn xy(p: Point2D) -> Xy {
    (p.x, p.y)
}

/// Range `r`, beacon spacing `u` and the silence threshold `t0`.
#[pyclass(name = "Params", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyParams(LocalizationParams);

#[pymethods]
impl PyParams {
    #[new]
    fn new(r: f64, u: f64) -> PyResult<Self> {
        LocalizationParams::from_spacing(r, u)
            .map(Self)
            .map_err(err)
    }

    /// Spacing `u = r/k`.
    #[staticmethod]
    fn with_divisor(r: f64, k: u32) -> PyResult<Self> {
        LocalizationParams::with_divisor(r, k)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }

    #[getter]
    fn u(&self) -> f64 {
        self.0.u
    }

    #[getter]
    fn t0(&self) -> f64 {
        self.0.t0
    }

    fn is_safe_spacing(&self) -> bool {
        self.0.is_safe_spacing()
    }

    fn __repr__(&self) -> String {
        format!("Params(r={}, u={})", self.0.r, self.0.u)
    }
}

/// The two mirror candidates for beacon points `c1`, `c2`.
#[pyfunction]
fn candidate_positions(c1: Xy, c2: Xy, params: &PyParams) -> PyResult<(Xy, Xy)> {
    let pair = localizer::candidate_positions(pt(c1), pt(c2), &params.0).map_err(err)?;
    Ok((xy(pair.q), xy(pair.q_mirror)))
}

#[pyfunction]
fn error_bound(l: f64, params: &PyParams) -> PyResult<f64> {
    localizer::error_bound(l, &params.0).map_err(err)
}

#[pyfunction]
fn coverage_margin(r: f64, u: f64) -> PyResult<f64> {
    coverage::coverage_margin(r, u).map_err(err)
}

#[pyfunction]
fn d_hexagon_formula(l: f64, r: f64, x: f64) -> PyResult<f64> {
    coverage::d_hexagon_formula(l, r, x).map_err(err)
}

/// Competitor path lengths for an `l x l` square at margin `r/k`, by name.
#[pyfunction]
fn competitor_lengths<'py>(
    py: Python<'py>,
    l: f64,
    r: f64,
    k: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let p = SchemeParams::new(l, r, k).map_err(err)?;
    let out = PyDict::new(py);
    for s in Scheme::COMPETITORS {
        out.set_item(s.name(), s.path_length(&p))?;
    }
    Ok(out)
}

/// Planned beacon path over a rectangle anchored at the origin.
#[pyclass(name = "PathPlan", frozen)]
struct PyPathPlan {
    plan: coverage::PathPlan,
    region: Rect,
    params: LocalizationParams,
}

#[pymethods]
impl PyPathPlan {
    #[getter]
    fn total_length(&self) -> f64 {
        self.plan.total_length
    }

    #[getter]
    fn hexagon_count(&self) -> usize {
        self.plan.hexagons.len()
    }

    /// `(x, y, kind)` with kind `beacon` or `transit`.
    fn waypoints(&self) -> Vec<(f64, f64, &'static str)> {
        self.plan
            .waypoints
            .iter()
            .zip(&self.plan.kinds)
            .map(|(p, k)| (p.x, p.y, k.as_str()))
            .collect()
    }

    /// Localizes each sensor from the plan's beacons; `None` where it fails.
    fn localize(&self, sensors: Vec<Xy>) -> Vec<Option<f64>> {
        let pts: Vec<Point2D> = sensors.into_iter().map(pt).collect();
        coverage::localize_against_plan(&self.plan, &pts, &self.params)
            .into_iter()
            .map(|o| o.error)
            .collect()
    }

    /// Grid check with keys worst_error, mean_error, uncovered,
    /// min_pair_distance and sensors_checked.
    #[pyo3(signature = (grid_step = 2.0))]
    fn verify<'py>(&self, py: Python<'py>, grid_step: f64) -> PyResult<Bound<'py, PyDict>> {
        let rep = coverage::verify_coverage(&self.plan, &self.region, &self.params, grid_step)
            .map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("worst_error", rep.worst_error)?;
        out.set_item("mean_error", rep.mean_error)?;
        out.set_item(
            "uncovered",
            rep.uncovered.into_iter().map(xy).collect::<Vec<_>>(),
        )?;
        out.set_item("min_pair_distance", rep.min_pair_distance)?;
        out.set_item("sensors_checked", rep.sensors_checked)?;
        Ok(out)
    }
}

/// Serpentine plan; `x` defaults to the coverage margin.
#[pyfunction]
#[pyo3(signature = (width, height, params, x = None))]
fn plan_rect_path(
    width: f64,
    height: f64,
    params: &PyParams,
    x: Option<f64>,
) -> PyResult<PyPathPlan> {
    let p = params.0;
    let region = Rect::new(width, height, Point2D::ORIGIN).map_err(err)?;
    let x = match x {
        Some(x) => x,
        None => coverage::coverage_margin(p.r, p.u).map_err(err)?,
    };
    let plan = coverage::plan_rect_path(&region, p.r, x, p.u).map_err(err)?;
    Ok(PyPathPlan {
        plan,
        region,
        params: p,
    })
}

/// Uniform random sensor positions whose unit-disk graph is connected.
#[pyfunction]
#[pyo3(signature = (n, width, height, r, seed = 0))]
fn gen_connected_network(
    n: usize,
    width: f64,
    height: f64,
    r: f64,
    seed: u64,
) -> PyResult<Vec<Xy>> {
    let area = Rect::new(width, height, Point2D::ORIGIN).map_err(err)?;
    let net = experiments::gen_connected_network(n, &area, r, seed).map_err(err)?;
    Ok(net.positions().into_iter().map(xy).collect())
}

/// Runs the mobile-anchor protocol over sensors at `positions`.
///
/// Keys: estimates, errors, path_length, lrh_count, path_trace and events
/// as `(time, actor, event, payload)`.
#[pyfunction]
#[pyo3(signature = (positions, params, start = (0.0, 0.0), seed = 0))]
fn run_localization<'py>(
    py: Python<'py>,
    positions: Vec<Xy>,
    params: &PyParams,
    start: Xy,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let pts: Vec<Point2D> = positions.into_iter().map(pt).collect();
    let net = Network::new(&pts, params.0.r).map_err(err)?;
    let res = protocol::run_localization(&net, &params.0, pt(start), seed).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item(
        "estimates",
        res.estimates.iter().map(|e| e.map(xy)).collect::<Vec<_>>(),
    )?;
    out.set_item("errors", &res.errors)?;
    out.set_item("path_length", res.total_path_length)?;
    out.set_item("lrh_count", res.lrh_count)?;
    out.set_item(
        "path_trace",
        res.path_trace.iter().map(|p| xy(*p)).collect::<Vec<_>>(),
    )?;
    let events: Vec<(f64, String, String, String)> = res
        .events
        .iter()
        .map(|e| {
            (
                e.time,
                e.actor.to_string(),
                e.event.clone(),
                e.payload.clone(),
            )
        })
        .collect();
    out.set_item("events", events)?;
    Ok(out)
}

#[pymodule]
fn hexloc_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyPathPlan>()?;
    m.add_function(wrap_pyfunction!(candidate_positions, m)?)?;
    m.add_function(wrap_pyfunction!(error_bound, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_margin, m)?)?;
    m.add_function(wrap_pyfunction!(d_hexagon_formula, m)?)?;
    m.add_function(wrap_pyfunction!(competitor_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(plan_rect_path, m)?)?;
    m.add_function(wrap_pyfunction!(gen_connected_network, m)?)?;
    m.add_function(wrap_pyfunction!(run_localization, m)?)?;
    Ok(())
}
