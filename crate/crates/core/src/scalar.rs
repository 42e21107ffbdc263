//! Scalar arithmetic of the complete idempotent semifield over the extended
//! reals, together with its dual (min-plus) operations.
//!
//! The two products agree on finite operands but differ at mixed infinities:
//! `-inf ⊗ +inf = -inf` while `-inf ⊠ +inf = +inf`. Both cases are handled by
//! explicit case analysis; IEEE infinities are never used internally.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Finite carrier of a tropical scalar.
///
/// Implemented for `f64` (default mode) and [`Rational`] (exact mode used by
/// the oracle and equivalence tests).
pub trait Number:
    Copy + PartialEq + PartialOrd + Add<Output = Self> + Neg<Output = Self> + fmt::Debug
{
    fn zero() -> Self;
    fn from_int(v: i64) -> Self;
    /// Exact division by a positive integer (used by circuit means).
    fn div_int(self, k: u32) -> Self;
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(self) -> f64;
    fn parse_finite(s: &str) -> Option<Self>;
    fn render(self) -> String;
}

impl Number for f64 {
    fn zero() -> Self {
        0.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn div_int(self, k: u32) -> Self {
        self / k as f64
    }

    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }

    fn to_f64(self) -> f64 {
        self
    }

    fn parse_finite(s: &str) -> Option<Self> {
        s.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn render(self) -> String {
        if self == self.trunc() && self.abs() < 1e15 {
            format!("{}", self as i64)
        } else {
            let mut out = format!("{:.9}", self);
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
            out
        }
    }
}

/// Exact rational scalar, `p/q` with 64-bit parts.
pub type Rational = Ratio<i64>;

impl Number for Rational {
    fn zero() -> Self {
        Ratio::from_integer(0)
    }

    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }

    fn div_int(self, k: u32) -> Self {
        self / Ratio::from_integer(k as i64)
    }

    fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == v.trunc() && v.abs() < 9e15 {
            return Some(Ratio::from_integer(v as i64));
        }
        Ratio::approximate_float(v)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }

    fn parse_finite(s: &str) -> Option<Self> {
        if let Some((p, q)) = s.split_once('/') {
            let p = p.trim().parse::<i64>().ok()?;
            let q = q.trim().parse::<i64>().ok()?;
            (q != 0).then(|| Ratio::new(p, q))
        } else if let Ok(i) = s.parse::<i64>() {
            Some(Ratio::from_integer(i))
        } else {
            let v = s.parse::<f64>().ok()?;
            Self::from_f64(v)
        }
    }

    fn render(self) -> String {
        self.to_string()
    }
}

/// Extended real: one of `-inf`, a finite value, `+inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Trop<T> {
    NegInf,
    Finite(T),
    PosInf,
}

pub use Trop::{Finite, NegInf, PosInf};

impl<T: Number> Trop<T> {
    /// The multiplicative identity e = 0.
    pub fn zero() -> Self {
        Finite(T::zero())
    }

    pub fn from_int(v: i64) -> Self {
        Finite(T::from_int(v))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Finite(_))
    }

    /// Total order on the extended reals: `-inf < finite < +inf`.
    pub fn cmp_total(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
            (Finite(a), Finite(b)) => a
                .partial_cmp(b)
                .expect("finite tropical values are always comparable"),
        }
    }

    /// Addition ⊕ = max.
    pub fn oplus(self, other: Self) -> Self {
        if self.cmp_total(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// Dual addition ⊞ = min.
    pub fn dual_oplus(self, other: Self) -> Self {
        if self.cmp_total(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Multiplication ⊗ = +, with `-inf` absorbing (even against `+inf`).
    pub fn otimes(self, other: Self) -> Self {
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    /// Dual multiplication ⊠ = +, with `+inf` absorbing.
    pub fn dual_otimes(self, other: Self) -> Self {
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    /// Multiplicative inverse, defined on finite values only.
    pub fn inverse(self) -> Result<Self> {
        match self {
            Finite(a) => Ok(Finite(-a)),
            _ => Err(Error::InvalidArgument(
                "tropical inverse is undefined at ±inf".into(),
            )),
        }
    }

    /// Negation extended to the whole carrier; swaps the two infinities.
    /// This is the entrywise operation behind the sharp transform.
    pub fn neg_extended(self) -> Self {
        match self {
            NegInf => PosInf,
            PosInf => NegInf,
            Finite(a) => Finite(-a),
        }
    }

    pub fn div_int(self, k: u32) -> Self {
        match self {
            Finite(a) => Finite(a.div_int(k)),
            other => other,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "e" => Ok(Self::zero()),
            "eps" | "-inf" => Ok(NegInf),
            "+inf" | "inf" => Ok(PosInf),
            _ => T::parse_finite(s)
                .map(Finite)
                .ok_or_else(|| Error::Parse(format!("invalid scalar token '{s}'"))),
        }
    }

    /// Lossless-where-possible conversion between carrier types.
    pub fn convert<U: Number>(self) -> Trop<U> {
        match self {
            NegInf => Trop::NegInf,
            PosInf => Trop::PosInf,
            Finite(a) => Trop::Finite(
                U::from_f64(a.to_f64()).expect("finite value convertible between carriers"),
            ),
        }
    }
}

impl<T: Number> fmt::Display for Trop<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => write!(f, "-inf"),
            PosInf => write!(f, "+inf"),
            Finite(a) => write!(f, "{}", a.render()),
        }
    }
}
