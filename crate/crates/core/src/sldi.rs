//! Switched linear-dual inequality systems: a finite set of modes, each a
//! P-TEG on the same transition set, analyzed under a fixed periodic
//! schedule.
//!
//! Two routes compute the cycle-time set of a schedule v:
//! - [`Sldi::cycle_times_direct`]: lift to a single |v|·n instance and solve
//!   it (O((|v|n)⁴)).
//! - [`Sldi::cycle_times_improved`]: fold the schedule into an n×n instance
//!   first (O(|v|n³ + n⁴)).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{CircuitClass, TropMatrix};
use crate::ncp::{solve_ncp, CycleTimeSet, PicInstance};
use crate::pteg::Pteg;
use crate::scalar::{Number, Trop};
use crate::trajectory::{check_steps, TrajectoryReport};

/// A switched system: named modes sharing one transition set of size n.
#[derive(Clone, Debug, PartialEq)]
pub struct Sldi<T> {
    n: usize,
    modes: Vec<(String, Pteg<T>)>,
}

impl<T: Number> Sldi<T> {
    pub fn new(modes: Vec<(String, Pteg<T>)>) -> Result<Self> {
        let n = match modes.first() {
            Some((_, g)) => g.n(),
            None => {
                return Err(Error::Validation(
                    "a switched system needs at least one mode".into(),
                ))
            }
        };
        for (name, g) in &modes {
            if g.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "mode '{name}' has {} transitions, expected {n}",
                    g.n()
                )));
            }
        }
        for (idx, (name, _)) in modes.iter().enumerate() {
            if modes[..idx].iter().any(|(other, _)| other == name) {
                return Err(Error::Validation(format!("duplicate mode name '{name}'")));
            }
        }
        Ok(Self { n, modes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode_names(&self) -> impl Iterator<Item = &str> {
        self.modes.iter().map(|(name, _)| name.as_str())
    }

    pub fn mode(&self, name: &str) -> Result<&Pteg<T>> {
        self.modes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| Error::UnknownMode(name.to_string()))
    }

    pub fn mode_by_index(&self, idx: usize) -> &Pteg<T> {
        &self.modes[idx].1
    }

    /// Resolves mode names of a schedule to mode indices.
    pub fn resolve_schedule(&self, names: &[String]) -> Result<Vec<usize>> {
        if names.is_empty() {
            return Err(Error::Validation("schedule must be non-empty".into()));
        }
        names
            .iter()
            .map(|name| {
                self.modes
                    .iter()
                    .position(|(n, _)| n == name)
                    .ok_or_else(|| Error::UnknownMode(name.clone()))
            })
            .collect()
    }

    pub fn convert<U: Number>(&self) -> Sldi<U> {
        Sldi {
            n: self.n,
            modes: self
                .modes
                .iter()
                .map(|(name, g)| {
                    (
                        name.clone(),
                        Pteg::new(
                            g.a0.convert(),
                            g.a1.convert(),
                            g.b0.convert(),
                            g.b1.convert(),
                        )
                        .expect("converted mode stays valid"),
                    )
                })
                .collect(),
        }
    }

    fn mode_pics(&self, schedule: &[usize]) -> Result<Vec<PicInstance<T>>> {
        schedule
            .iter()
            .map(|&z| self.modes[z].1.to_pic())
            .collect()
    }

    /// Lifts the schedule to one NCP instance of dimension |v|·n whose block
    /// structure chains the per-mode precedence (diagonal C, superdiagonal P,
    /// subdiagonal I) and closes the period through the corner blocks.
    pub fn lift_direct(&self, schedule: &[usize]) -> Result<PicInstance<T>> {
        let pics = self.mode_pics(schedule)?;
        let (l, n) = (pics.len(), self.n);
        let big = l * n;
        let mut c = TropMatrix::eps(big, big);
        let mut p = TropMatrix::eps(big, big);
        let mut i = TropMatrix::eps(big, big);
        for (r, pic) in pics.iter().enumerate() {
            c.oplus_block(r, r, &pic.c);
            if r + 1 < l {
                c.oplus_block(r, r + 1, &pic.p);
                c.oplus_block(r + 1, r, &pic.i);
            } else {
                p.oplus_block(r, 0, &pic.p);
                i.oplus_block(0, r, &pic.i);
            }
        }
        PicInstance::new(p, i, c)
    }

    /// Cycle-time set of the schedule via the lifted instance.
    pub fn cycle_times_direct(&self, schedule: &[usize]) -> Result<CycleTimeSet<T>> {
        Ok(solve_ncp(&self.lift_direct(schedule)?)?.clamp_nonnegative())
    }

    /// Cycle-time set of the schedule by folding it into an n×n instance:
    /// per-step precedence closures are absorbed into the adjacent inter-step
    /// matrices, then the products along the period are accumulated in both
    /// directions with positive-circuit checks after each contraction.
    pub fn cycle_times_improved(&self, schedule: &[usize]) -> Result<CycleTimeSet<T>> {
        if schedule.is_empty() {
            return Err(Error::Validation("schedule must be non-empty".into()));
        }
        let l = schedule.len();
        // Periodic schedules revisit the same modes and mode pairs, so the
        // per-step inputs are shared: compute each distinct mode closure and
        // each distinct preprocessed pair once.
        let mut mode_pic = BTreeMap::new();
        let mut mode_star = BTreeMap::new();
        for &z in schedule {
            if mode_pic.contains_key(&z) {
                continue;
            }
            let pic = self.modes[z].1.to_pic()?;
            if pic.c.has_positive_circuit()? == CircuitClass::HasPositiveCircuit {
                return Ok(CycleTimeSet::Empty);
            }
            mode_star.insert(z, pic.c.kleene_star()?);
            mode_pic.insert(z, pic);
        }
        // Absorb the closures of the neighbouring steps into each P_r / I_r.
        let mut pair_pre = BTreeMap::new();
        for r in 0..l {
            let key = (schedule[r], schedule[(r + 1) % l]);
            if pair_pre.contains_key(&key) {
                continue;
            }
            let (star, next_star) = (&mode_star[&key.0], &mode_star[&key.1]);
            let pic = &mode_pic[&key.0];
            let p = star.otimes(&pic.p)?.otimes(next_star)?;
            let i = next_star.otimes(&pic.i)?.otimes(star)?;
            pair_pre.insert(key, (p, i));
        }
        let pre = |r: usize| &pair_pre[&(schedule[r], schedule[(r + 1) % l])];

        // The accumulated closures also repeat once the iteration enters a
        // cycle, so stars and circuit checks are memoized by their input.
        let mut star_cache: Vec<(TropMatrix<T>, TropMatrix<T>)> = Vec::new();
        let mut checked_star = |m: TropMatrix<T>| -> Result<Option<TropMatrix<T>>> {
            if let Some((_, star)) = star_cache.iter().find(|(input, _)| *input == m) {
                return Ok(Some(star.clone()));
            }
            if m.has_positive_circuit()? == CircuitClass::HasPositiveCircuit {
                return Ok(None);
            }
            let star = m.kleene_star()?;
            star_cache.push((m, star.clone()));
            Ok(Some(star))
        };

        let mut l_cp = TropMatrix::eye(self.n);
        let mut l_ci = TropMatrix::eye(self.n);
        let mut l_p = pre(l - 1).0.clone();
        let mut l_i = pre(0).1.clone();
        for r in 1..l {
            let a = l - 1 - r;
            let fwd = pre(a).0.otimes(&l_cp)?;
            let bwd = pre(r).1.otimes(&l_ci)?;
            let fwd_loop = fwd.otimes(&pre(a).1)?;
            let bwd_loop = bwd.otimes(&pre(r).0)?;
            let (Some(fwd_star), Some(bwd_star)) =
                (checked_star(fwd_loop)?, checked_star(bwd_loop)?)
            else {
                return Ok(CycleTimeSet::Empty);
            };
            l_p = fwd.otimes(&l_p)?;
            l_i = bwd.otimes(&l_i)?;
            l_cp = fwd_star;
            l_ci = bwd_star;
        }
        let c = l_cp.oplus(&l_ci)?.oplus(&mode_pic[&schedule[0]].c)?;
        let folded = PicInstance::new(l_p, l_i, c)?;
        Ok(solve_ncp(&folded)?.clamp_nonnegative())
    }

    /// Builds a canonical stacked initial dater (|v|·n entries, block h for
    /// the step after the prefix v₁…v_h) of a |v|-periodic trajectory with
    /// per-period shift λ.
    pub fn synthesize_v_periodic(
        &self,
        schedule: &[usize],
        lambda: Trop<T>,
    ) -> Result<Vec<Trop<T>>> {
        if !self.cycle_times_improved(schedule)?.contains(lambda) {
            return Err(Error::InfeasibleLambda(lambda.to_string()));
        }
        let lifted = self.lift_direct(schedule)?;
        let m = lifted.at_lambda(lambda)?;
        let star = m.kleene_star()?;
        let x0 = star.otimes_vec(&vec![Trop::zero(); schedule.len() * self.n])?;
        debug_assert!(x0.iter().all(Trop::is_finite));
        Ok(x0)
    }

    /// Checks a step-indexed trajectory (step k governed by mode
    /// v₍k mod |v|₎₊₁) against the switched system, including
    /// non-decreasingness across one period.
    pub fn check_trajectory(
        &self,
        schedule: &[usize],
        traj: &[Vec<Trop<T>>],
    ) -> Result<TrajectoryReport<T>> {
        if schedule.is_empty() {
            return Err(Error::Validation("schedule must be non-empty".into()));
        }
        check_steps(
            |k| &self.modes[schedule[k % schedule.len()]].1,
            schedule.len(),
            traj,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pteg::tests::two_station_net;
    use crate::trajectory::unroll;

    fn three_mode_system() -> Sldi<f64> {
        Sldi::new(
            [("a", 2, 1), ("b", 1, 2), ("c", 1, 1)]
                .into_iter()
                .map(|(name, alpha, beta)| {
                    (
                        name.to_string(),
                        two_station_net(alpha, beta).compile().unwrap(),
                    )
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn alternating_schedule_has_singleton_cycle_time() {
        let s = three_mode_system();
        let sched = s.resolve_schedule(&["a".into(), "b".into()]).unwrap();
        let expected = CycleTimeSet::Interval {
            lo: Trop::from_int(3),
            hi: Trop::from_int(3),
        };
        assert_eq!(s.cycle_times_direct(&sched).unwrap(), expected);
        assert_eq!(s.cycle_times_improved(&sched).unwrap(), expected);
    }

    #[test]
    fn incompatible_schedule_is_infeasible() {
        let s = three_mode_system();
        let sched = s.resolve_schedule(&["a".into(), "c".into()]).unwrap();
        assert!(s.cycle_times_direct(&sched).unwrap().is_empty());
        assert!(s.cycle_times_improved(&sched).unwrap().is_empty());
    }

    #[test]
    fn single_mode_schedule_matches_pteg_analysis() {
        let s = three_mode_system();
        for name in ["a", "b", "c"] {
            let sched = s.resolve_schedule(&[name.into()]).unwrap();
            let via_sldi = s.cycle_times_improved(&sched).unwrap();
            let via_pteg = s.mode(name).unwrap().cycle_time_set().unwrap();
            assert_eq!(via_sldi, via_pteg, "mode {name}");
            assert_eq!(s.cycle_times_direct(&sched).unwrap(), via_pteg);
        }
    }

    #[test]
    fn schedule_rotation_preserves_cycle_times() {
        let s = three_mode_system();
        let ab = s.resolve_schedule(&["a".into(), "b".into()]).unwrap();
        let ba = s.resolve_schedule(&["b".into(), "a".into()]).unwrap();
        assert_eq!(
            s.cycle_times_improved(&ab).unwrap(),
            s.cycle_times_improved(&ba).unwrap()
        );
    }

    #[test]
    fn repeated_schedule_scales_cycle_times() {
        // lambda is the shift per full pass of the schedule, so doubling
        // the schedule doubles the cycle-time interval.
        let s = three_mode_system();
        let ab = s.resolve_schedule(&["a".into(), "b".into()]).unwrap();
        let abab: Vec<usize> = ab.iter().chain(&ab).copied().collect();
        let doubled = CycleTimeSet::Interval {
            lo: Trop::from_int(6),
            hi: Trop::from_int(6),
        };
        assert_eq!(s.cycle_times_improved(&abab).unwrap(), doubled);
        assert_eq!(s.cycle_times_direct(&abab).unwrap(), doubled);
    }

    #[test]
    fn synthesized_trajectory_passes_checker() {
        let s = three_mode_system();
        let sched = s.resolve_schedule(&["a".into(), "b".into()]).unwrap();
        let lambda = Trop::from_int(3);
        let x0 = s.synthesize_v_periodic(&sched, lambda).unwrap();
        assert_eq!(x0.len(), 4);
        let traj = unroll(&x0, s.n(), lambda, 6).unwrap();
        let report = s.check_trajectory(&sched, &traj).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn infeasible_lambda_is_rejected() {
        let s = three_mode_system();
        let sched = s.resolve_schedule(&["a".into(), "b".into()]).unwrap();
        assert!(matches!(
            s.synthesize_v_periodic(&sched, Trop::from_int(4)),
            Err(Error::InfeasibleLambda(_))
        ));
    }

    #[test]
    fn unknown_mode_is_reported() {
        let s = three_mode_system();
        assert!(matches!(
            s.resolve_schedule(&["z".into()]),
            Err(Error::UnknownMode(_))
        ));
        assert!(s.resolve_schedule(&[]).is_err());
    }
}
