//! The non-positive circuit weight problem for parametric matrices of the
//! form λP ⊕ λ⁻¹I ⊕ C, solved in O(n⁴), plus an exact brute-force oracle
//! based on elementary-circuit enumeration for cross-validation.

use crate::error::{Error, Result};
use crate::matrix::{CircuitClass, TropMatrix};
use crate::scalar::{Finite, NegInf, Number, PosInf, Trop};

/// A proportional/inverse/constant instance over ℝmax (no +inf entries).
#[derive(Clone, Debug)]
pub struct PicInstance<T> {
    pub p: TropMatrix<T>,
    pub i: TropMatrix<T>,
    pub c: TropMatrix<T>,
}

impl<T: Number> PicInstance<T> {
    pub fn new(p: TropMatrix<T>, i: TropMatrix<T>, c: TropMatrix<T>) -> Result<Self> {
        let n = p.rows();
        for (name, m) in [("P", &p), ("I", &i), ("C", &c)] {
            if !m.is_square() || m.rows() != n {
                return Err(Error::InvalidInstance(format!(
                    "{name} must be square of size {n}, got {}x{}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.entries().any(|(_, _, v)| v == PosInf) {
                return Err(Error::InvalidInstance(format!(
                    "{name} contains a +inf entry"
                )));
            }
        }
        Ok(Self { p, i, c })
    }

    pub fn n(&self) -> usize {
        self.p.rows()
    }

    /// The parametric matrix λP ⊕ λ⁻¹I ⊕ C evaluated at a finite λ.
    pub fn at_lambda(&self, lambda: Trop<T>) -> Result<TropMatrix<T>> {
        let inv = lambda.inverse()?;
        self.p
            .scalar_mul(lambda)
            .oplus(&self.i.scalar_mul(inv))?
            .oplus(&self.c)
    }

    pub fn convert<U: Number>(&self) -> PicInstance<U> {
        PicInstance {
            p: self.p.convert(),
            i: self.i.convert(),
            c: self.c.convert(),
        }
    }
}

/// The feasible set of an NCP or cycle-time query: empty, or an interval of
/// the extended reals (an infinite endpoint means the side is unbounded).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CycleTimeSet<T> {
    Empty,
    Interval { lo: Trop<T>, hi: Trop<T> },
}

impl<T: Number> CycleTimeSet<T> {
    /// Builds an interval, collapsing an inverted pair to the empty set.
    pub fn interval(lo: Trop<T>, hi: Trop<T>) -> Self {
        if lo.cmp_total(&hi) == std::cmp::Ordering::Greater {
            CycleTimeSet::Empty
        } else {
            CycleTimeSet::Interval { lo, hi }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CycleTimeSet::Empty)
    }

    pub fn contains(&self, lambda: Trop<T>) -> bool {
        match self {
            CycleTimeSet::Empty => false,
            CycleTimeSet::Interval { lo, hi } => {
                lo.cmp_total(&lambda) != std::cmp::Ordering::Greater
                    && lambda.cmp_total(hi) != std::cmp::Ordering::Greater
            }
        }
    }

    /// Intersection with [0, ∞): clamps the lower end up to 0.
    pub fn clamp_nonnegative(self) -> Self {
        match self {
            CycleTimeSet::Empty => CycleTimeSet::Empty,
            CycleTimeSet::Interval { lo, hi } => {
                CycleTimeSet::interval(lo.oplus(Trop::zero()), hi)
            }
        }
    }

    pub fn convert<U: Number>(self) -> CycleTimeSet<U> {
        match self {
            CycleTimeSet::Empty => CycleTimeSet::Empty,
            CycleTimeSet::Interval { lo, hi } => CycleTimeSet::Interval {
                lo: lo.convert(),
                hi: hi.convert(),
            },
        }
    }
}

impl<T: Number> std::fmt::Display for CycleTimeSet<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CycleTimeSet::Empty => write!(f, "empty"),
            CycleTimeSet::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// Solves the NCP for λP ⊕ λ⁻¹I ⊕ C.
///
/// Returns the raw feasibility interval, not clamped to [0, ∞).
pub fn solve_ncp<T: Number>(inst: &PicInstance<T>) -> Result<CycleTimeSet<T>> {
    let n = inst.n();
    if inst.c.has_positive_circuit()? == CircuitClass::HasPositiveCircuit {
        return Ok(CycleTimeSet::Empty);
    }
    let c_star = inst.c.kleene_star()?;
    let p = c_star.otimes(&inst.p)?.otimes(&c_star)?;
    let i = c_star.otimes(&inst.i)?.otimes(&c_star)?;
    let eye = TropMatrix::eye(n);
    let mut s = eye.clone();
    for _ in 0..n / 2 {
        let s2 = s.otimes(&s)?;
        let next = p
            .otimes(&s2)?
            .otimes(&i)?
            .oplus(&i.otimes(&s2)?.otimes(&p)?)?
            .oplus(&eye)?;
        if next == s {
            break;
        }
        s = next;
    }
    if s.has_positive_circuit()? == CircuitClass::HasPositiveCircuit {
        return Ok(CycleTimeSet::Empty);
    }
    let s_star = s.kleene_star()?;
    let lo = i.otimes(&s_star)?.mcm()?;
    let hi = match p.otimes(&s_star)?.mcm()? {
        NegInf => PosInf,
        Finite(v) => Finite(-v),
        PosInf => NegInf,
    };
    Ok(CycleTimeSet::interval(lo, hi))
}

/// Exact oracle: enumerates every elementary circuit of the three-class
/// parallel-arc multigraph and intersects the induced constraints
/// c + (p − q)·λ ≤ 0. Exponential; intended for small n only.
pub fn oracle_ncp<T: Number>(inst: &PicInstance<T>, max_n: usize) -> Result<CycleTimeSet<T>> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::TooLarge { n, max_n });
    }
    let mut lo = NegInf;
    let mut hi = PosInf;

    // Arc classes per (from, to) pair: (delta firing count, constant weight).
    let arc_classes = |u: usize, v: usize| -> Vec<(i32, Trop<T>)> {
        let mut out = Vec::new();
        if let Finite(w) = inst.p.get(u, v) {
            out.push((1, Finite(w)));
        }
        if let Finite(w) = inst.i.get(u, v) {
            out.push((-1, Finite(w)));
        }
        if let Finite(w) = inst.c.get(u, v) {
            out.push((0, Finite(w)));
        }
        out
    };

    let mut infeasible = false;
    for cycle in elementary_circuits(n, |u, v| !arc_classes(u, v).is_empty()) {
        // Enumerate every per-arc class selection along the circuit.
        let len = cycle.len();
        let mut stack: Vec<usize> = vec![0];
        let mut deltas = vec![0i32; len + 1];
        let mut sums = vec![Trop::<T>::zero(); len + 1];
        while let Some(&choice) = stack.last() {
            let depth = stack.len() - 1;
            let u = cycle[depth];
            let v = cycle[(depth + 1) % len];
            let classes = arc_classes(u, v);
            if choice >= classes.len() {
                stack.pop();
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
                continue;
            }
            let (d, w) = classes[choice];
            deltas[depth + 1] = deltas[depth] + d;
            sums[depth + 1] = sums[depth].otimes(w);
            if depth + 1 == len {
                let d = deltas[len];
                let Finite(c) = sums[len] else { unreachable!() };
                match d.cmp(&0) {
                    std::cmp::Ordering::Equal => {
                        if Finite(c).cmp_total(&Trop::zero()) == std::cmp::Ordering::Greater {
                            infeasible = true;
                        }
                    }
                    std::cmp::Ordering::Greater => {
                        let bound = Finite(-c).div_int(d as u32);
                        hi = hi.dual_oplus(bound);
                    }
                    std::cmp::Ordering::Less => {
                        let bound = Finite(c).div_int((-d) as u32);
                        lo = lo.oplus(bound);
                    }
                }
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
            } else {
                stack.push(0);
            }
        }
        if infeasible {
            return Ok(CycleTimeSet::Empty);
        }
    }
    Ok(CycleTimeSet::interval(lo, hi))
}

/// Johnson-style enumeration of the elementary circuits of a digraph given
/// by an adjacency predicate. Each circuit is returned as its node sequence
/// without the repeated final node; self-loops appear as singletons.
pub fn elementary_circuits(n: usize, has_arc: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| has_arc(u, v)).collect())
        .collect();
    let mut circuits = Vec::new();

    struct State<'a> {
        adj: &'a [Vec<usize>],
        start: usize,
        blocked: Vec<bool>,
        block_map: Vec<Vec<usize>>,
        path: Vec<usize>,
        circuits: &'a mut Vec<Vec<usize>>,
    }

    fn unblock(st: &mut State, u: usize) {
        st.blocked[u] = false;
        let pending = std::mem::take(&mut st.block_map[u]);
        for w in pending {
            if st.blocked[w] {
                unblock(st, w);
            }
        }
    }

    fn circuit(st: &mut State, v: usize) -> bool {
        let mut found = false;
        st.path.push(v);
        st.blocked[v] = true;
        let succs = st.adj[v].clone();
        for w in succs {
            if w < st.start {
                continue;
            }
            if w == st.start {
                st.circuits.push(st.path.clone());
                found = true;
            } else if !st.blocked[w] && circuit(st, w) {
                found = true;
            }
        }
        if found {
            unblock(st, v);
        } else {
            for &w in &st.adj[v] {
                if w >= st.start && !st.block_map[w].contains(&v) {
                    st.block_map[w].push(v);
                }
            }
        }
        st.path.pop();
        found
    }

    for s in 0..n {
        let mut st = State {
            adj: &adj,
            start: s,
            blocked: vec![false; n],
            block_map: vec![Vec::new(); n],
            path: Vec::new(),
            circuits: &mut circuits,
        };
        circuit(&mut st, s);
    }
    circuits
}
