//! P-time event graphs: net-level description, characteristic matrices,
//! bounded-consistency analysis, and 1-periodic trajectory synthesis.

use crate::error::{Error, Result};
use crate::matrix::TropMatrix;
use crate::ncp::{solve_ncp, CycleTimeSet, PicInstance};
use crate::scalar::{Finite, NegInf, Number, PosInf, Trop};
use crate::trajectory::{check_steps, TrajectoryReport};

/// A place of a P-time event graph: one upstream transition, one downstream
/// transition, a marking of 0 or 1, and a sojourn window [lower, upper].
#[derive(Clone, Debug)]
pub struct Place<T> {
    pub upstream: usize,
    pub downstream: usize,
    pub marking: u8,
    pub lower: T,
    pub upper: Trop<T>,
}

/// Net-level description of a P-TEG.
#[derive(Clone, Debug)]
pub struct PtegNet<T> {
    pub transitions: Vec<String>,
    pub places: Vec<Place<T>>,
}

impl<T: Number> PtegNet<T> {
    pub fn validate(&self) -> Result<()> {
        let n = self.transitions.len();
        for place in &self.places {
            if place.upstream >= n || place.downstream >= n {
                return Err(Error::Validation(format!(
                    "place references transition index out of range (n = {n})"
                )));
            }
            if place.marking > 1 {
                return Err(Error::Validation(
                    "place marking must be 0 or 1".into(),
                ));
            }
            let lo = Finite(place.lower);
            if lo.cmp_total(&Trop::zero()) == std::cmp::Ordering::Less {
                return Err(Error::Validation(
                    "place lower bound must be non-negative".into(),
                ));
            }
            if lo.cmp_total(&place.upper) == std::cmp::Ordering::Greater {
                return Err(Error::Validation(format!(
                    "place window [{lo}, {}] has lower bound above upper bound",
                    place.upper
                )));
            }
        }
        Ok(())
    }

    /// Builds the four characteristic matrices. Parallel places between the
    /// same transition pair and marking merge to the tightest window.
    pub fn compile(&self) -> Result<Pteg<T>> {
        self.validate()?;
        let n = self.transitions.len();
        let mut a = [TropMatrix::eps(n, n), TropMatrix::eps(n, n)];
        let mut b = [TropMatrix::top(n, n), TropMatrix::top(n, n)];
        for place in &self.places {
            let (i, j, m) = (place.downstream, place.upstream, place.marking as usize);
            let lo = a[m].get(i, j).oplus(Finite(place.lower));
            let hi = b[m].get(i, j).dual_oplus(place.upper);
            if lo.cmp_total(&hi) == std::cmp::Ordering::Greater {
                return Err(Error::InconsistentParallelPlaces {
                    from: self.transitions[j].clone(),
                    to: self.transitions[i].clone(),
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                });
            }
            a[m].set(i, j, lo);
            b[m].set(i, j, hi);
        }
        let [a0, a1] = a;
        let [b0, b1] = b;
        Pteg::new(a0, a1, b0, b1)
    }
}

/// A P-TEG in characteristic-matrix form: A⁰, A¹ over ℝmax and B⁰, B¹ over
/// ℝmin, governing the linear-dual inequality system
/// `A⁰x(k) ⪯ x(k) ⪯ B⁰ ⊠ x(k)` and `A¹x(k) ⪯ x(k+1) ⪯ B¹ ⊠ x(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pteg<T> {
    n: usize,
    pub a0: TropMatrix<T>,
    pub a1: TropMatrix<T>,
    pub b0: TropMatrix<T>,
    pub b1: TropMatrix<T>,
}

impl<T: Number> Pteg<T> {
    pub fn new(
        a0: TropMatrix<T>,
        a1: TropMatrix<T>,
        b0: TropMatrix<T>,
        b1: TropMatrix<T>,
    ) -> Result<Self> {
        let n = a0.rows();
        for (name, m) in [("A0", &a0), ("A1", &a1), ("B0", &b0), ("B1", &b1)] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{name} must be {n}x{n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        for (name, m) in [("A0", &a0), ("A1", &a1)] {
            if m.entries().any(|(_, _, v)| v == PosInf) {
                return Err(Error::Validation(format!("{name} contains a +inf entry")));
            }
        }
        for (name, m) in [("B0", &b0), ("B1", &b1)] {
            if m.entries().any(|(_, _, v)| v == NegInf) {
                return Err(Error::Validation(format!("{name} contains a -inf entry")));
            }
        }
        for ((ai, bi), name) in [(&a0, &b0), (&a1, &b1)].into_iter().zip(["0", "1"]) {
            for (i, j, v) in ai.entries() {
                if v.is_finite()
                    && v.cmp_total(&bi.get(i, j)) == std::cmp::Ordering::Greater
                {
                    return Err(Error::Validation(format!(
                        "A{name}[{i}][{j}] exceeds B{name}[{i}][{j}]"
                    )));
                }
            }
        }
        Ok(Self { n, a0, a1, b0, b1 })
    }

    /// An unconstrained P-TEG (A matrices ℰ, B matrices 𝒯).
    pub fn unconstrained(n: usize) -> Self {
        Self {
            n,
            a0: TropMatrix::eps(n, n),
            a1: TropMatrix::eps(n, n),
            b0: TropMatrix::top(n, n),
            b1: TropMatrix::top(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The NCP instance of the bounded-consistency test:
    /// P = B¹♯, I = A¹, C = A⁰ ⊕ B⁰♯.
    pub fn to_pic(&self) -> Result<PicInstance<T>> {
        PicInstance::new(
            self.b1.sharp(),
            self.a1.clone(),
            self.a0.oplus(&self.b0.sharp())?,
        )
    }

    /// The set of cycle times λ ≥ 0 admitting a consistent 1-periodic
    /// trajectory.
    pub fn cycle_time_set(&self) -> Result<CycleTimeSet<T>> {
        Ok(solve_ncp(&self.to_pic()?)?.clamp_nonnegative())
    }

    /// Checks a finite dater trajectory x(0..K) against the LDI system and
    /// non-decreasingness; returns the first violated constraint, if any.
    pub fn check_ldi_trajectory(&self, traj: &[Vec<Trop<T>>]) -> Result<TrajectoryReport<T>> {
        check_steps(|_| self, 1, traj)
    }

    /// Builds a canonical initial dater for a 1-periodic trajectory of
    /// period λ: x(0) = M* ⊗ 0⃗ for M = λB¹♯ ⊕ λ⁻¹A¹ ⊕ A⁰ ⊕ B⁰♯.
    pub fn synthesize_periodic(&self, lambda: Trop<T>) -> Result<Vec<Trop<T>>> {
        if !self.cycle_time_set()?.contains(lambda) {
            return Err(Error::InfeasibleLambda(lambda.to_string()));
        }
        let pic = self.to_pic()?;
        let m = pic.at_lambda(lambda)?;
        let star = m.kleene_star()?;
        let x0 = star.otimes_vec(&vec![Trop::zero(); self.n])?;
        debug_assert!(x0.iter().all(Trop::is_finite));
        Ok(x0)
    }
}
