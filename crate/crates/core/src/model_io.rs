//! JSON model files for switched systems.
//!
//! A model file declares a transition set, a map of modes, and optional
//! named schedules. Each mode is given either in net form (a list of
//! places) or in matrix form (the four characteristic matrices):
//!
//! ```json
//! {
//!   "version": 1,
//!   "transitions": ["t1", "t2"],
//!   "modes": {
//!     "a": {
//!       "places": [
//!         { "from": "t1", "to": "t1", "marking": 1, "window": [2, 2] },
//!         { "from": "t1", "to": "t2", "marking": 0, "window": [0, "+inf"] }
//!       ],
//!       "carry_over": ["t2"],
//!       "overrides": [
//!         { "matrix": "A1", "from": "t1", "to": "t2", "value": 1 }
//!       ]
//!     },
//!     "b": { "A0": [[...]], "A1": [[...]], "B0": [[...]], "B1": [[...]] }
//!   },
//!   "schedules": { "shift": ["a", "b"] }
//! }
//! ```
//!
//! Scalar tokens are JSON numbers or the strings `"-inf"` / `"+inf"`
//! (`"eps"` and `"e"` are accepted as aliases for `-inf` and `0`).
//! `carry_over` lists transitions whose k-th firing must precede their
//! (k+1)-th firing by at least and at most 0 (a marked place `[0, 0]` on the
//! transition itself); `overrides` assign single matrix entries, indexed as
//! (row `to`, column `from`), after the places are compiled.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::TropMatrix;
use crate::ncp::CycleTimeSet;
use crate::pteg::{Place, Pteg, PtegNet};
use crate::scalar::{Finite, Number, Trop};
use crate::sldi::Sldi;
use crate::trajectory::TrajectoryReport;

#[derive(Deserialize)]
#[serde(untagged)]
enum ScalarTok {
    Num(f64),
    Str(String),
}

impl ScalarTok {
    fn to_trop<T: Number>(&self) -> Result<Trop<T>> {
        match self {
            ScalarTok::Num(v) => T::from_f64(*v)
                .map(Finite)
                .ok_or_else(|| Error::Parse(format!("scalar {v} is not representable"))),
            ScalarTok::Str(s) => Trop::parse(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlace {
    from: String,
    to: String,
    #[serde(default)]
    marking: u8,
    window: (ScalarTok, ScalarTok),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    matrix: String,
    from: String,
    to: String,
    value: ScalarTok,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawMode {
    places: Option<Vec<RawPlace>>,
    #[serde(default)]
    carry_over: Vec<String>,
    #[serde(default)]
    overrides: Vec<RawOverride>,
    #[serde(rename = "A0")]
    a0: Option<Vec<Vec<ScalarTok>>>,
    #[serde(rename = "A1")]
    a1: Option<Vec<Vec<ScalarTok>>>,
    #[serde(rename = "B0")]
    b0: Option<Vec<Vec<ScalarTok>>>,
    #[serde(rename = "B1")]
    b1: Option<Vec<Vec<ScalarTok>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default = "default_version")]
    version: u32,
    transitions: Vec<String>,
    modes: BTreeMap<String, RawMode>,
    #[serde(default)]
    schedules: BTreeMap<String, Vec<String>>,
}

fn default_version() -> u32 {
    1
}

/// A loaded model: the switched system plus its named schedules.
#[derive(Clone, Debug)]
pub struct Model<T> {
    pub transitions: Vec<String>,
    pub sldi: Sldi<T>,
    pub schedules: BTreeMap<String, Vec<String>>,
}

impl<T: Number> Model<T> {
    /// Resolves a schedule argument: a named schedule, a comma-separated
    /// mode list, a single mode name, or a string of single-letter modes.
    pub fn resolve_schedule_spec(&self, spec: &str) -> Result<Vec<String>> {
        if let Some(names) = self.schedules.get(spec) {
            return Ok(names.clone());
        }
        if spec.contains(',') {
            return Ok(spec.split(',').map(|s| s.trim().to_string()).collect());
        }
        if self.sldi.mode_names().any(|m| m == spec) {
            return Ok(vec![spec.to_string()]);
        }
        let letters: Vec<String> = spec.chars().map(|c| c.to_string()).collect();
        if !letters.is_empty()
            && letters
                .iter()
                .all(|l| self.sldi.mode_names().any(|m| m == l))
        {
            return Ok(letters);
        }
        Err(Error::Parse(format!(
            "schedule '{spec}' is neither a named schedule nor a mode sequence"
        )))
    }

    pub fn convert<U: Number>(&self) -> Model<U> {
        Model {
            transitions: self.transitions.clone(),
            sldi: self.sldi.convert(),
            schedules: self.schedules.clone(),
        }
    }
}

fn transition_index(names: &[String], name: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| Error::Validation(format!("unknown transition '{name}'")))
}

fn parse_matrix<T: Number>(
    name: &str,
    rows: &[Vec<ScalarTok>],
    n: usize,
) -> Result<TropMatrix<T>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "matrix {name} must be {n}x{n}"
        )));
    }
    let mut m = TropMatrix::eps(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, tok) in row.iter().enumerate() {
            m.set(i, j, tok.to_trop()?);
        }
    }
    Ok(m)
}

fn compile_mode<T: Number>(
    mode_name: &str,
    raw: &RawMode,
    transitions: &[String],
) -> Result<Pteg<T>> {
    let n = transitions.len();
    let matrix_form = raw.a0.is_some() || raw.a1.is_some() || raw.b0.is_some() || raw.b1.is_some();
    if matrix_form && raw.places.is_some() {
        return Err(Error::Validation(format!(
            "mode '{mode_name}' mixes net form and matrix form"
        )));
    }
    let mut g = if matrix_form {
        fn get<'m>(
            m: &'m Option<Vec<Vec<ScalarTok>>>,
            mode_name: &str,
            which: &str,
        ) -> Result<&'m Vec<Vec<ScalarTok>>> {
            m.as_ref().ok_or_else(|| {
                Error::Validation(format!("mode '{mode_name}' is missing matrix {which}"))
            })
        }
        Pteg::new(
            parse_matrix("A0", get(&raw.a0, mode_name, "A0")?, n)?,
            parse_matrix("A1", get(&raw.a1, mode_name, "A1")?, n)?,
            parse_matrix("B0", get(&raw.b0, mode_name, "B0")?, n)?,
            parse_matrix("B1", get(&raw.b1, mode_name, "B1")?, n)?,
        )?
    } else {
        let mut places = Vec::new();
        for p in raw.places.as_deref().unwrap_or(&[]) {
            let lower = match p.window.0.to_trop::<T>()? {
                Finite(v) => v,
                other => {
                    return Err(Error::Validation(format!(
                        "place lower bound must be finite, got {other}"
                    )))
                }
            };
            places.push(Place {
                upstream: transition_index(transitions, &p.from)?,
                downstream: transition_index(transitions, &p.to)?,
                marking: p.marking,
                lower,
                upper: p.window.1.to_trop()?,
            });
        }
        for t in &raw.carry_over {
            let idx = transition_index(transitions, t)?;
            places.push(Place {
                upstream: idx,
                downstream: idx,
                marking: 1,
                lower: T::zero(),
                upper: Trop::zero(),
            });
        }
        let net = PtegNet {
            transitions: transitions.to_vec(),
            places,
        };
        net.compile()?
    };
    if !raw.overrides.is_empty() {
        let mut a0 = g.a0.clone();
        let mut a1 = g.a1.clone();
        let mut b0 = g.b0.clone();
        let mut b1 = g.b1.clone();
        for o in &raw.overrides {
            let i = transition_index(transitions, &o.to)?;
            let j = transition_index(transitions, &o.from)?;
            let v = o.value.to_trop()?;
            match o.matrix.as_str() {
                "A0" => a0.set(i, j, v),
                "A1" => a1.set(i, j, v),
                "B0" => b0.set(i, j, v),
                "B1" => b1.set(i, j, v),
                other => {
                    return Err(Error::Validation(format!(
                        "override matrix must be A0/A1/B0/B1, got '{other}'"
                    )))
                }
            }
        }
        g = Pteg::new(a0, a1, b0, b1)?;
    }
    Ok(g)
}

/// Parses a model from JSON text.
pub fn parse_model<T: Number>(text: &str) -> Result<Model<T>> {
    let raw: RawModel =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid model JSON: {e}")))?;
    if raw.version != 1 {
        return Err(Error::UnsupportedFormat(format!(
            "model version {}",
            raw.version
        )));
    }
    if raw.transitions.is_empty() {
        return Err(Error::Validation("transitions list must be non-empty".into()));
    }
    for (idx, t) in raw.transitions.iter().enumerate() {
        if raw.transitions[..idx].contains(t) {
            return Err(Error::Validation(format!("duplicate transition '{t}'")));
        }
    }
    if raw.modes.is_empty() {
        return Err(Error::Validation("model declares no modes".into()));
    }
    let mut modes = Vec::new();
    for (name, m) in &raw.modes {
        modes.push((name.clone(), compile_mode(name, m, &raw.transitions)?));
    }
    let sldi = Sldi::new(modes)?;
    for (name, sched) in &raw.schedules {
        if sched.is_empty() {
            return Err(Error::Validation(format!("schedule '{name}' is empty")));
        }
        sldi.resolve_schedule(sched)?;
    }
    Ok(Model {
        transitions: raw.transitions,
        sldi,
        schedules: raw.schedules,
    })
}

/// Loads a model file from disk.
pub fn load_model<T: Number>(path: impl AsRef<Path>) -> Result<Model<T>> {
    parse_model(&std::fs::read_to_string(path)?)
}

/// JSON token for one extended-real value: a number when finite and exactly
/// representable, otherwise a string.
pub fn scalar_to_json<T: Number>(v: Trop<T>) -> Value {
    match v {
        Trop::NegInf => Value::String("-inf".into()),
        Trop::PosInf => Value::String("+inf".into()),
        Finite(x) => {
            let f = x.to_f64();
            if T::from_f64(f) == Some(x) {
                if f == f.trunc() && f.abs() < 9e15 {
                    json!(f as i64)
                } else {
                    json!(f)
                }
            } else {
                Value::String(x.render())
            }
        }
    }
}

fn matrix_to_json<T: Number>(m: &TropMatrix<T>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array((0..m.cols()).map(|j| scalar_to_json(m.get(i, j))).collect())
            })
            .collect(),
    )
}

/// Serializes a model in matrix form (pretty-printed JSON).
pub fn to_matrix_form_json<T: Number>(model: &Model<T>) -> String {
    let mut modes = Map::new();
    for name in model.sldi.mode_names() {
        let g = model.sldi.mode(name).expect("listed mode exists");
        modes.insert(
            name.to_string(),
            json!({
                "A0": matrix_to_json(&g.a0),
                "A1": matrix_to_json(&g.a1),
                "B0": matrix_to_json(&g.b0),
                "B1": matrix_to_json(&g.b1),
            }),
        );
    }
    let doc = json!({
        "version": 1,
        "transitions": model.transitions,
        "modes": Value::Object(modes),
        "schedules": model.schedules,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("model serializes");
    out.push('\n');
    out
}

/// Machine-readable rendering of a cycle-time set:
/// `{"empty": true}` or `{"lo": ..., "hi": ...}`.
pub fn cycle_time_set_to_json<T: Number>(set: &CycleTimeSet<T>) -> Value {
    match set {
        CycleTimeSet::Empty => json!({ "empty": true }),
        CycleTimeSet::Interval { lo, hi } => json!({
            "lo": scalar_to_json(*lo),
            "hi": scalar_to_json(*hi),
        }),
    }
}

/// Machine-readable rendering of a trajectory check.
pub fn trajectory_report_to_json<T: Number>(report: &TrajectoryReport<T>) -> Value {
    match &report.violation {
        None => json!({ "status": "pass" }),
        Some(v) => json!({
            "status": "fail",
            "violation": {
                "step": v.step,
                "constraint": v.kind.to_string(),
                "row": v.row,
                "lhs": scalar_to_json(v.lhs),
                "rhs": scalar_to_json(v.rhs),
            }
        }),
    }
}
