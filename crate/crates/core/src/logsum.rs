//! Formal sums of logarithms of positive rationals.
//!
//! A `LogSum` represents `Σ eᵢ·ln(qᵢ)` with `qᵢ > 0` rational and integer
//! exponents. Two such sums compare exactly through their exponentiated
//! products `Π qᵢ^{eᵢ}`, so no irrational arithmetic ever happens. This is the
//! carrier for variation of log prices and for thresholds like `var⁺ > n`.

use num::{One, Signed};
use std::cmp::Ordering;

use crate::rat::{cmp_with_e_pow, rat_pow, to_f64, Rat};

/// `Σ eᵢ·ln(qᵢ)` kept as the explicit term list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSum {
    terms: Vec<(Rat, i32)>,
}

impl LogSum {
    pub fn zero() -> Self {
        LogSum { terms: Vec::new() }
    }

    /// `ln(q)` for `q > 0`.
    pub fn ln(q: Rat) -> Self {
        assert!(q.is_positive(), "log of a non-positive rational");
        if q.is_one() {
            return Self::zero();
        }
        LogSum { terms: vec![(q, 1)] }
    }

    pub fn push(&mut self, q: Rat, exponent: i32) {
        assert!(q.is_positive());
        if exponent != 0 && !q.is_one() {
            self.terms.push((q, exponent));
        }
    }

    pub fn add(&mut self, other: &LogSum) {
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn terms(&self) -> &[(Rat, i32)] {
        &self.terms
    }

    /// `Π qᵢ^{eᵢ}` — the exact value of `exp` of this sum.
    pub fn exp(&self) -> Rat {
        let mut acc = Rat::one();
        for (q, e) in &self.terms {
            acc *= rat_pow(q, *e);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.exp().is_one()
    }

    /// Compares against `n·ln(e) = n`, i.e. decides `Σ ... ⋚ n` exactly.
    pub fn cmp_integer(&self, n: u32) -> Ordering {
        cmp_with_e_pow(&self.exp(), n)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.exp()).ln()
    }
}

impl PartialOrd for LogSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogSum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.exp().cmp(&other.exp())
    }
}

/// An exact scalar: either a plain rational or a symbolic log value. The two
/// kinds never mix inside one variation computation; a raw-value view yields
/// `Plain`, a log view yields `Log`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Plain(Rat),
    Log(LogSum),
}

impl Scalar {
    pub fn zero_plain() -> Self {
        Scalar::Plain(Rat::from_integer(0.into()))
    }

    pub fn zero_log() -> Self {
        Scalar::Log(LogSum::zero())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Plain(r) => r.numer().is_zero(),
            Scalar::Log(l) => l.is_zero(),
        }
    }

    pub fn add_assign(&mut self, other: &Scalar) {
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => *a += b,
            (Scalar::Log(a), Scalar::Log(b)) => a.add(b),
            _ => panic!("mixed scalar kinds"),
        }
    }

    /// Ordering within the same kind; `None` across kinds.
    pub fn cmp_same_kind(&self, other: &Scalar) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Plain(a), Scalar::Plain(b)) => Some(a.cmp(b)),
            (Scalar::Log(a), Scalar::Log(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Plain(r) => to_f64(r),
            Scalar::Log(l) => l.to_f64(),
        }
    }
}

use num::Zero as _;
