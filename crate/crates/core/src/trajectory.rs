//! Trajectory handling: constraint checking against the linear-dual
//! inequality system, unrolling of periodic trajectories, and a CSV
//! interchange format.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::pteg::Pteg;
use crate::scalar::{Number, Trop};

/// Which of the five trajectory constraints was violated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `A⁰ ⊗ x(k) ⪯ x(k)`
    A0,
    /// `x(k) ⪯ B⁰ ⊠ x(k)`
    B0,
    /// `A¹ ⊗ x(k) ⪯ x(k+1)`
    A1,
    /// `x(k+1) ⪯ B¹ ⊠ x(k)`
    B1,
    /// `x(k) ⪯ x(k + period)`
    NonDecreasing,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ConstraintKind::A0 => "A0",
            ConstraintKind::B0 => "B0",
            ConstraintKind::A1 => "A1",
            ConstraintKind::B1 => "B1",
            ConstraintKind::NonDecreasing => "non-decreasing",
        };
        f.write_str(s)
    }
}

/// First violated constraint of a trajectory check.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation<T> {
    /// Step index k of the constraint (for `A1`/`B1` the step the
    /// constraint reads from).
    pub step: usize,
    pub kind: ConstraintKind,
    pub row: usize,
    /// The side that had to be ⪯ the other.
    pub lhs: Trop<T>,
    pub rhs: Trop<T>,
}

/// Outcome of checking a finite trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryReport<T> {
    pub violation: Option<Violation<T>>,
}

impl<T: Number> TrajectoryReport<T> {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn le<T: Number>(a: &Trop<T>, b: &Trop<T>) -> bool {
    a.cmp_total(b) != Ordering::Greater
}

/// Checks steps of a trajectory against the per-step dynamics given by
/// `mode_at` and non-decreasingness with the given lag. Intra-step
/// constraints are checked at every step, inter-step constraints wherever
/// the successor step is present.
pub(crate) fn check_steps<'a, T: Number + 'a>(
    mode_at: impl Fn(usize) -> &'a Pteg<T>,
    lag: usize,
    traj: &[Vec<Trop<T>>],
) -> Result<TrajectoryReport<T>> {
    if traj.is_empty() {
        return Err(Error::MissingPrefix(0));
    }
    let n = mode_at(0).n();
    for (k, x) in traj.iter().enumerate() {
        if x.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "trajectory step {k} has {} entries, expected {n}",
                x.len()
            )));
        }
        if !x.iter().all(Trop::is_finite) {
            return Err(Error::Validation(format!(
                "trajectory step {k} contains a non-finite entry"
            )));
        }
    }
    for k in 0..traj.len() {
        let g = mode_at(k);
        let x = &traj[k];
        let a0x = g.a0.otimes_vec(x)?;
        let b0x = g.b0.dual_otimes_vec(x)?;
        for i in 0..n {
            if !le(&a0x[i], &x[i]) {
                return Ok(report(k, ConstraintKind::A0, i, a0x[i], x[i]));
            }
        }
        for i in 0..n {
            if !le(&x[i], &b0x[i]) {
                return Ok(report(k, ConstraintKind::B0, i, x[i], b0x[i]));
            }
        }
        if k + 1 < traj.len() {
            let next = &traj[k + 1];
            let a1x = g.a1.otimes_vec(x)?;
            let b1x = g.b1.dual_otimes_vec(x)?;
            for i in 0..n {
                if !le(&a1x[i], &next[i]) {
                    return Ok(report(k, ConstraintKind::A1, i, a1x[i], next[i]));
                }
            }
            for i in 0..n {
                if !le(&next[i], &b1x[i]) {
                    return Ok(report(k, ConstraintKind::B1, i, next[i], b1x[i]));
                }
            }
        }
        if k + lag < traj.len() {
            let later = &traj[k + lag];
            for i in 0..n {
                if !le(&x[i], &later[i]) {
                    return Ok(report(k, ConstraintKind::NonDecreasing, i, x[i], later[i]));
                }
            }
        }
    }
    Ok(TrajectoryReport { violation: None })
}

fn report<T>(
    step: usize,
    kind: ConstraintKind,
    row: usize,
    lhs: Trop<T>,
    rhs: Trop<T>,
) -> TrajectoryReport<T> {
    TrajectoryReport {
        violation: Some(Violation {
            step,
            kind,
            row,
            lhs,
            rhs,
        }),
    }
}

/// Unrolls a periodic trajectory: step `k·L + h` (blocks of size `n` taken
/// from the stacked vector `x0`) receives the block `h` shifted by `k·λ`.
/// Produces the `reps·L + 1` steps `0 ..= reps·L`.
pub fn unroll<T: Number>(
    x0_stacked: &[Trop<T>],
    n: usize,
    lambda: Trop<T>,
    reps: usize,
) -> Result<Vec<Vec<Trop<T>>>> {
    if n == 0 || x0_stacked.len() % n != 0 {
        return Err(Error::DimensionMismatch(format!(
            "stacked vector of length {} is not a multiple of n = {n}",
            x0_stacked.len()
        )));
    }
    let period = x0_stacked.len() / n;
    let mut out = Vec::with_capacity(reps * period + 1);
    for step in 0..=reps * period {
        let (k, h) = (step / period, step % period);
        let shift = (0..k).fold(Trop::zero(), |acc, _| acc.otimes(lambda));
        let block = &x0_stacked[h * n..(h + 1) * n];
        out.push(block.iter().map(|&v| v.otimes(shift)).collect());
    }
    Ok(out)
}

/// Labels steps of a `|v|`-periodic trajectory by the schedule prefix they
/// correspond to: `e`, `v1`, `v1v2`, ...
pub fn prefix_labels(schedule: &[String], steps: usize) -> Vec<String> {
    let mut label = String::from("e");
    let mut out = vec![label.clone()];
    for step in 0..steps.saturating_sub(1) {
        if label == "e" {
            label.clear();
        }
        label.push_str(&schedule[step % schedule.len()]);
        out.push(label.clone());
    }
    out
}

/// Renders a trajectory as CSV with a `prefix` column and one column per
/// transition.
pub fn to_csv<T: Number>(traj: &[Vec<Trop<T>>], labels: &[String], names: &[String]) -> String {
    let mut out = String::from("prefix");
    for name in names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (label, x) in labels.iter().zip(traj) {
        out.push_str(label);
        for v in x {
            out.push(',');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Parses the CSV produced by [`to_csv`]; returns the step labels and the
/// dater vectors. The header row is validated against the expected names.
pub fn from_csv<T: Number>(text: &str, names: &[String]) -> Result<(Vec<String>, Vec<Vec<Trop<T>>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty trajectory file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != names.len() + 1 || cols[0] != "prefix" {
        return Err(Error::Parse(
            "trajectory header must be 'prefix' followed by the transition names".into(),
        ));
    }
    for (col, name) in cols[1..].iter().zip(names) {
        if col != name {
            return Err(Error::Parse(format!(
                "trajectory column '{col}' does not match transition '{name}'"
            )));
        }
    }
    let mut labels = Vec::new();
    let mut traj = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != names.len() + 1 {
            return Err(Error::Parse(format!(
                "trajectory row '{line}' has {} fields, expected {}",
                fields.len(),
                names.len() + 1
            )));
        }
        labels.push(fields[0].to_string());
        traj.push(
            fields[1..]
                .iter()
                .map(|f| Trop::parse(f))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((labels, traj))
}
