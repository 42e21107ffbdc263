//! Python bindings: load switched-system models, compute cycle-time sets,
//! and synthesize/check periodic trajectories.
//!
//! Extended reals cross the boundary as Python floats (`-inf`/`+inf` map to
//! the IEEE infinities); cycle-time sets are `(lo, hi)` tuples or `None`
//! when empty.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use maxplus_sldi::model_io;
use maxplus_sldi::scalar::Trop;
use maxplus_sldi::trajectory::{self, TrajectoryReport};
use maxplus_sldi::{CycleTimeSet, Error};

fn to_py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn trop_to_f64(v: Trop<f64>) -> f64 {
    match v {
        Trop::NegInf => f64::NEG_INFINITY,
        Trop::PosInf => f64::INFINITY,
        Trop::Finite(x) => x,
    }
}

fn f64_to_trop(v: f64) -> PyResult<Trop<f64>> {
    if v.is_nan() {
        return Err(PyValueError::new_err("NaN is not a valid value"));
    }
    Ok(if v == f64::NEG_INFINITY {
        Trop::NegInf
    } else if v == f64::INFINITY {
        Trop::PosInf
    } else {
        Trop::Finite(v)
    })
}

fn set_to_py(set: CycleTimeSet<f64>) -> Option<(f64, f64)> {
    match set {
        CycleTimeSet::Empty => None,
        CycleTimeSet::Interval { lo, hi } => Some((trop_to_f64(lo), trop_to_f64(hi))),
    }
}

fn report_to_py(report: TrajectoryReport<f64>) -> Option<(usize, String, usize)> {
    report
        .violation
        .map(|v| (v.step, v.kind.to_string(), v.row))
}

/// A loaded model: a switched system plus its named schedules.
#[pyclass]
struct Model {
    inner: model_io::Model<f64>,
}

#[pymethods]
impl Model {
    /// Transition names, in matrix order.
    fn transitions(&self) -> Vec<String> {
        self.inner.transitions.clone()
    }

    /// Mode names, in matrix order.
    fn modes(&self) -> Vec<String> {
        self.inner.sldi.mode_names().map(str::to_string).collect()
    }

    /// Named schedules declared by the model file.
    fn schedules(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .schedules
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// Cycle-time set of a single mode analyzed as a P-TEG:
    /// `(lo, hi)` or `None` when empty.
    fn pteg_cycle_times(&self, mode: &str) -> PyResult<Option<(f64, f64)>> {
        let set = self
            .inner
            .sldi
            .mode(mode)
            .and_then(|g| g.cycle_time_set())
            .map_err(to_py_err)?;
        Ok(set_to_py(set))
    }

    /// Cycle-time set of a schedule. `schedule` is a named schedule, a
    /// comma-separated mode list, or a string of single-letter modes;
    /// `method` is `"improved"` or `"direct"`.
    #[pyo3(signature = (schedule, method = "improved"))]
    fn cycle_times(&self, schedule: &str, method: &str) -> PyResult<Option<(f64, f64)>> {
        let sched = self.resolve(schedule)?;
        let set = match method {
            "improved" => self.inner.sldi.cycle_times_improved(&sched),
            "direct" => self.inner.sldi.cycle_times_direct(&sched),
            other => {
                return Err(PyValueError::new_err(format!(
                    "method must be 'improved' or 'direct', got '{other}'"
                )))
            }
        }
        .map_err(to_py_err)?;
        Ok(set_to_py(set))
    }

    /// Unrolled periodic trajectory for a feasible cycle time: one dater
    /// vector per step, covering `reps` schedule repetitions.
    #[pyo3(signature = (schedule, lam, reps = 3))]
    fn synthesize(&self, schedule: &str, lam: f64, reps: usize) -> PyResult<Vec<Vec<f64>>> {
        let sched = self.resolve(schedule)?;
        let lam = f64_to_trop(lam)?;
        let x0 = self
            .inner
            .sldi
            .synthesize_v_periodic(&sched, lam)
            .map_err(to_py_err)?;
        let traj =
            trajectory::unroll(&x0, self.inner.sldi.n(), lam, reps.max(1)).map_err(to_py_err)?;
        Ok(traj
            .into_iter()
            .map(|x| x.into_iter().map(trop_to_f64).collect())
            .collect())
    }

    /// Checks a step-indexed trajectory against the schedule; returns
    /// `None` when it satisfies all constraints, otherwise
    /// `(step, constraint, row)` for the first violation.
    fn check(
        &self,
        schedule: &str,
        trajectory: Vec<Vec<f64>>,
    ) -> PyResult<Option<(usize, String, usize)>> {
        let sched = self.resolve(schedule)?;
        let traj: Vec<Vec<Trop<f64>>> = trajectory
            .into_iter()
            .map(|x| x.into_iter().map(f64_to_trop).collect())
            .collect::<PyResult<_>>()?;
        let report = self
            .inner
            .sldi
            .check_trajectory(&sched, &traj)
            .map_err(to_py_err)?;
        Ok(report_to_py(report))
    }

    /// The model in matrix form, as a JSON string.
    fn to_matrix_json(&self) -> String {
        model_io::to_matrix_form_json(&self.inner)
    }
}

impl Model {
    fn resolve(&self, schedule: &str) -> PyResult<Vec<usize>> {
        let names = self
            .inner
            .resolve_schedule_spec(schedule)
            .map_err(to_py_err)?;
        self.inner.sldi.resolve_schedule(&names).map_err(to_py_err)
    }
}

/// Loads a model file from disk.
#[pyfunction]
fn load_model(path: &str) -> PyResult<Model> {
    Ok(Model {
        inner: model_io::load_model(path).map_err(to_py_err)?,
    })
}

/// Parses a model from a JSON string.
#[pyfunction]
fn parse_model(text: &str) -> PyResult<Model> {
    Ok(Model {
        inner: model_io::parse_model(text).map_err(to_py_err)?,
    })
}

#[pymodule]
fn sldi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(load_model, m)?)?;
    m.add_function(wrap_pyfunction!(parse_model, m)?)?;
    Ok(())
}
