//! Dense matrices over the extended reals with the max-plus operator set:
//! ⊕, ⊗, ⊠, sharp, Kleene star, trace, maximum circuit mean, tensor product,
//! and the positive-circuit-weight test.
//!
//! The precedence graph of a matrix `A` follows the arc convention used
//! throughout: entry `(i, j)` is the weight of the arc from node `i` to
//! node `j`.

use crate::error::{Error, Result};
use crate::scalar::{Finite, NegInf, Number, PosInf, Trop};

/// Outcome of the positive-circuit-weight test on a precedence graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitClass {
    NoPositiveCircuit,
    HasPositiveCircuit,
}

/// Dense row-major matrix over the extended reals.
#[derive(Clone, Debug, PartialEq)]
pub struct TropMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Trop<T>>,
}

impl<T: Number> TropMatrix<T> {
    pub fn new(rows: usize, cols: usize, fill: Trop<T>) -> Self {
        Self {
            rows,
            cols,
            data: vec![fill; rows * cols],
        }
    }

    /// The ⊕-neutral matrix ℰ (all entries -inf).
    pub fn eps(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, NegInf)
    }

    /// The ⊞-neutral matrix 𝒯 (all entries +inf).
    pub fn top(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, PosInf)
    }

    /// The ⊗-identity E⊗ (0 on the diagonal, -inf elsewhere).
    pub fn eye(n: usize) -> Self {
        let mut m = Self::eps(n, n);
        for i in 0..n {
            m.set(i, i, Trop::zero());
        }
        m
    }

    /// The ⊠-identity (0 on the diagonal, +inf elsewhere).
    pub fn eye_dual(n: usize) -> Self {
        let mut m = Self::top(n, n);
        for i in 0..n {
            m.set(i, i, Trop::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Trop<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix literal".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer literal helper; `i64::MIN` maps to -inf and `i64::MAX` to +inf.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .flat_map(|row| {
                row.iter().map(|&v| match v {
                    i64::MIN => NegInf,
                    i64::MAX => PosInf,
                    _ => Trop::from_int(v),
                })
            })
            .collect();
        Self {
            rows: rows.len(),
            cols: rows.first().map_or(0, |r| r.len()),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Trop<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Trop<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Trop<T>)> + '_ {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / cols, k % cols, v))
    }

    pub fn map(&self, f: impl Fn(Trop<T>) -> Trop<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn convert<U: Number>(&self) -> TropMatrix<U> {
        TropMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.convert()).collect(),
        }
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn check_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operation requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(())
    }

    /// Entrywise maximum A ⊕ B.
    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.check_same_dims(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a.oplus(b))
                .collect(),
        })
    }

    /// Max-plus product A ⊗ B.
    pub fn otimes(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::eps(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == NegInf {
                    continue;
                }
                for j in 0..other.cols {
                    let cand = aik.otimes(other.get(k, j));
                    let cur = out.get(i, j);
                    out.set(i, j, cur.oplus(cand));
                }
            }
        }
        Ok(out)
    }

    /// Min-plus product A ⊠ B (min-aggregation over ⊠ terms).
    pub fn dual_otimes(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} dual-times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::top(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == PosInf {
                    continue;
                }
                for j in 0..other.cols {
                    let cand = aik.dual_otimes(other.get(k, j));
                    let cur = out.get(i, j);
                    out.set(i, j, cur.dual_oplus(cand));
                }
            }
        }
        Ok(out)
    }

    /// Max-plus matrix-vector product.
    pub fn otimes_vec(&self, x: &[Trop<T>]) -> Result<Vec<Trop<T>>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(NegInf, |acc, j| acc.oplus(self.get(i, j).otimes(x[j])))
            })
            .collect())
    }

    /// Min-plus matrix-vector product.
    pub fn dual_otimes_vec(&self, x: &[Trop<T>]) -> Result<Vec<Trop<T>>> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} dual-times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(PosInf, |acc, j| {
                    acc.dual_oplus(self.get(i, j).dual_otimes(x[j]))
                })
            })
            .collect())
    }

    /// Sharp transform A♯ = -Aᵀ; maps -inf ↔ +inf.
    pub fn sharp(&self) -> Self {
        let mut out = Self::new(self.cols, self.rows, NegInf);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).neg_extended());
            }
        }
        out
    }

    /// Entrywise λ ⊗ A.
    pub fn scalar_mul(&self, lambda: Trop<T>) -> Self {
        self.map(|v| lambda.otimes(v))
    }

    /// Trace ⊕ᵢ Aᵢᵢ.
    pub fn trace(&self) -> Result<Trop<T>> {
        self.check_square()?;
        Ok((0..self.rows).fold(NegInf, |acc, i| acc.oplus(self.get(i, i))))
    }

    /// Tensor (Kronecker) product: block (i, j) is A_{ij} ⊗ B.
    pub fn tensor(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        let mut out = Self::eps(self.rows * p, self.cols * q);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let aij = self.get(i, j);
                if aij == NegInf {
                    continue;
                }
                for bi in 0..p {
                    for bj in 0..q {
                        out.set(i * p + bi, j * q + bj, aij.otimes(other.get(bi, bj)));
                    }
                }
            }
        }
        out
    }

    /// Copies `block` into position (bi, bj) of a block-partitioned matrix,
    /// joining with ⊕ against whatever is already there.
    pub fn oplus_block(&mut self, bi: usize, bj: usize, block: &Self) {
        let (p, q) = (block.rows, block.cols);
        for i in 0..p {
            for j in 0..q {
                let cur = self.get(bi * p + i, bj * q + j);
                self.set(bi * p + i, bj * q + j, cur.oplus(block.get(i, j)));
            }
        }
    }

    /// Boolean transitive closure of the support graph (arc i→j when the
    /// entry is not -inf). `closure[i][j]` means a nonempty path i→j exists.
    fn support_closure(&self) -> Vec<Vec<bool>> {
        let n = self.rows;
        let mut reach = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = self.get(i, j) != NegInf;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if !reach[i][k] {
                    continue;
                }
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        reach
    }

    /// Kleene star A* = E⊗ ⊕ A ⊕ A² ⊕ … via an all-pairs longest-path
    /// closure. Entries reachable through a positive-weight circuit
    /// saturate to +inf.
    pub fn kleene_star(&self) -> Result<Self> {
        self.check_square()?;
        let n = self.rows;
        let mut d = self.clone();
        for k in 0..n {
            for i in 0..n {
                let dik = d.get(i, k);
                if dik == NegInf {
                    continue;
                }
                for j in 0..n {
                    let cand = dik.otimes(d.get(k, j));
                    let cur = d.get(i, j);
                    d.set(i, j, cur.oplus(cand));
                }
            }
        }
        // Saturate everything that can route through a positive circuit.
        let positive_nodes: Vec<usize> = (0..n)
            .filter(|&m| d.get(m, m).cmp_total(&Trop::zero()) == std::cmp::Ordering::Greater)
            .collect();
        if !positive_nodes.is_empty() {
            let reach = d.support_closure();
            for &m in &positive_nodes {
                for i in 0..n {
                    if !(i == m || reach[i][m]) {
                        continue;
                    }
                    for j in 0..n {
                        if j == m || reach[m][j] {
                            d.set(i, j, PosInf);
                        }
                    }
                }
            }
        }
        for i in 0..n {
            let cur = d.get(i, i);
            d.set(i, i, cur.oplus(Trop::zero()));
        }
        Ok(d)
    }

    /// Decides whether the precedence graph contains a circuit of positive
    /// weight, by Bellman-Ford-style longest-path relaxation.
    pub fn has_positive_circuit(&self) -> Result<CircuitClass> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(CircuitClass::NoPositiveCircuit);
        }
        // A +inf arc forces a positive circuit only if it lies on one.
        if self.data.contains(&PosInf) {
            let reach = self.support_closure();
            for i in 0..n {
                for j in 0..n {
                    if self.get(i, j) == PosInf && (j == i || reach[j][i]) {
                        return Ok(CircuitClass::HasPositiveCircuit);
                    }
                }
            }
        }
        let arcs: Vec<(usize, usize, Trop<T>)> = self
            .entries()
            .filter(|&(_, _, w)| w != NegInf && w != PosInf)
            .collect();
        let mut dist = vec![Trop::<T>::zero(); n];
        for round in 0..=n {
            let mut changed = false;
            for &(i, j, w) in &arcs {
                let cand = dist[i].otimes(w);
                if cand.cmp_total(&dist[j]) == std::cmp::Ordering::Greater {
                    dist[j] = cand;
                    changed = true;
                }
            }
            if !changed {
                return Ok(CircuitClass::NoPositiveCircuit);
            }
            if round == n {
                break;
            }
        }
        Ok(CircuitClass::HasPositiveCircuit)
    }

    /// Maximum circuit mean via Karp's algorithm; -inf on acyclic graphs.
    pub fn mcm(&self) -> Result<Trop<T>> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(NegInf);
        }
        if self.data.contains(&PosInf) {
            let reach = self.support_closure();
            for i in 0..n {
                for j in 0..n {
                    if self.get(i, j) == PosInf && (j == i || reach[j][i]) {
                        return Ok(PosInf);
                    }
                }
            }
        }
        let arcs: Vec<(usize, usize, Trop<T>)> = self
            .entries()
            .filter(|&(_, _, w)| w != NegInf && w != PosInf)
            .collect();
        // D[k][v]: max weight of a walk of length k ending at v, any start.
        let mut d = vec![vec![NegInf; n]; n + 1];
        d[0] = vec![Trop::zero(); n];
        for k in 1..=n {
            for &(i, j, w) in &arcs {
                let cand = d[k - 1][i].otimes(w);
                if cand.cmp_total(&d[k][j]) == std::cmp::Ordering::Greater {
                    d[k][j] = cand;
                }
            }
        }
        let mut best = NegInf;
        for v in 0..n {
            let Finite(dn) = d[n][v] else { continue };
            let mut worst: Option<Trop<T>> = None;
            for k in 0..n {
                let Finite(dk) = d[k][v] else { continue };
                let mean = Finite(dn + -dk).div_int((n - k) as u32);
                worst = Some(match worst {
                    None => mean,
                    Some(w) => w.dual_oplus(mean),
                });
            }
            if let Some(w) = worst {
                best = best.oplus(w);
            }
        }
        Ok(best)
    }
}

impl<T: Number> std::fmt::Display for TropMatrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub const EPS: i64 = i64::MIN;
pub const TOP: i64 = i64::MAX;
