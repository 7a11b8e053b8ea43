//! Exact rational parameters and ratios that may be infinite.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Exact rational used for approximation parameters and reported ratios.
pub type Rational = num_rational::Rational64;

/// A nonnegative ratio that is either finite or `+inf` (positive over zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtRatio {
    Finite(Rational),
    Infinite,
}

impl ExtRatio {
    /// `num / den`, infinite when `den == 0` and `num > 0`. `0/0` is 1.
    pub fn of(num: usize, den: usize) -> Self {
        match (num, den) {
            (0, 0) => ExtRatio::Finite(Rational::one()),
            (_, 0) => ExtRatio::Infinite,
            (n, d) => ExtRatio::Finite(Rational::new(n as i64, d as i64)),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRatio::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            ExtRatio::Finite(r) => Some(*r),
            ExtRatio::Infinite => None,
        }
    }

    /// `self <= bound`, with infinity exceeding every finite bound.
    pub fn at_most(&self, bound: Rational) -> bool {
        match self {
            ExtRatio::Finite(r) => *r <= bound,
            ExtRatio::Infinite => false,
        }
    }

    pub fn at_least(&self, bound: Rational) -> bool {
        match self {
            ExtRatio::Finite(r) => *r >= bound,
            ExtRatio::Infinite => true,
        }
    }
}

impl From<Rational> for ExtRatio {
    fn from(r: Rational) -> Self {
        ExtRatio::Finite(r)
    }
}

impl PartialOrd for ExtRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRatio::Finite(a), ExtRatio::Finite(b)) => a.cmp(b),
            (ExtRatio::Finite(_), ExtRatio::Infinite) => Ordering::Less,
            (ExtRatio::Infinite, ExtRatio::Finite(_)) => Ordering::Greater,
            (ExtRatio::Infinite, ExtRatio::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRatio::Finite(r) => write!(f, "{r}"),
            ExtRatio::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRatio {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(ExtRatio::Infinite)
        } else {
            parse_rational(s).map(ExtRatio::Finite)
        }
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.3` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::input(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int {
            "" | "-" | "+" => 0,
            _ => int.parse().map_err(|_| bad())?,
        };
        let den = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = Rational::from_integer(int_part.abs()) + Rational::new(frac_part, den);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    s.parse::<i64>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

pub(crate) fn big_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Floor of a nonnegative rational.
pub(crate) fn floor_usize(r: Rational) -> usize {
    debug_assert!(!r.is_negative());
    (r.numer() / r.denom()) as usize
}
