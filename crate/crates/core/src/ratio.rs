//! Exact non-negative rationals.
//!
//! All ratio bounds in this crate are rationals with small numerators and
//! denominators, and all comparisons against them must be exact. Values are
//! kept as reduced `u64/u64` pairs and compared by `u128` cross
//! multiplication, so no bound check ever goes through floating point.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A reduced non-negative rational `num/den` with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ratio {
    /// # Panics
    ///
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        if g == 0 {
            // num == 0 and den == 0 is excluded above; g == 0 only if num == 0
            return Ratio { num: 0, den: 1 };
        }
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn from_int(n: u64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn zero() -> Self {
        Ratio { num: 0, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        let num = (self.num as u128) * (other.den as u128) + (other.num as u128) * (self.den as u128);
        let den = (self.den as u128) * (other.den as u128);
        Self::from_u128(num, den)
    }

    pub fn mul(&self, other: &Ratio) -> Ratio {
        let num = (self.num as u128) * (other.num as u128);
        let den = (self.den as u128) * (other.den as u128);
        Self::from_u128(num, den)
    }

    fn from_u128(num: u128, den: u128) -> Ratio {
        fn gcd128(mut a: u128, mut b: u128) -> u128 {
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        }
        let g = gcd128(num, den).max(1);
        let (num, den) = (num / g, den / g);
        assert!(
            num <= u64::MAX as u128 && den <= u64::MAX as u128,
            "rational overflow"
        );
        Ratio {
            num: num as u64,
            den: den as u64,
        }
    }

    /// Exact test of `lhs <= self * rhs`, the shape of every ratio-bound check.
    pub fn bounds(&self, lhs: u64, rhs: u64) -> bool {
        (lhs as u128) * (self.den as u128) <= (self.num as u128) * (rhs as u128)
    }

    /// Exact test of `lhs >= self * rhs`.
    pub fn is_at_most(&self, lhs: u64, rhs: u64) -> bool {
        (lhs as u128) * (self.den as u128) >= (self.num as u128) * (rhs as u128)
    }

    /// Parse "a/b", "a", or a plain decimal like "0.25" (exactly).
    pub fn parse(s: &str) -> Result<Ratio> {
        let bad = |msg: &str| Error::InvalidProbability(format!("{s:?}: {msg}"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: u64 = b.trim().parse().map_err(|_| bad("bad denominator"))?;
            if den == 0 {
                return Err(bad("zero denominator"));
            }
            return Ok(Ratio::new(num, den));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| bad("bad integer part"))?
            };
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("bad fractional part"));
            }
            if frac.len() > 18 {
                return Err(bad("too many decimal digits"));
            }
            let den = 10u64.pow(frac.len() as u32);
            let frac: u64 = frac.parse().map_err(|_| bad("bad fractional part"))?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(|| bad("value too large"))?;
            return Ok(Ratio::new(num, den));
        }
        let n: u64 = s.trim().parse().map_err(|_| bad("not a number"))?;
        Ok(Ratio::from_int(n))
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = (self.num as u128) * (other.den as u128);
        let rhs = (other.num as u128) * (self.den as u128);
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
