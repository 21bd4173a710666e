//! Explicit search budgets.
//!
//! Every exhaustive solver computes the size of its search space up front,
//! measured in elementary column-cost evaluations (one XOR-or-OR plus
//! popcount of a column), and refuses to run if that exceeds the budget.
//! Refusal is an error carrying the computed size; nothing is silently
//! truncated.

use crate::error::{Error, Result};

/// Default budget: 10^9 elementary column-cost evaluations.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy)]
pub struct Budget {
    limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            limit: DEFAULT_BUDGET,
        }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Accepts a search of `required` evaluations or refuses with the size.
    /// `None` means the size computation itself overflowed, which is always a
    /// refusal.
    pub fn admit(&self, required: Option<u128>) -> Result<u64> {
        match required {
            Some(r) if r <= self.limit as u128 => Ok(r as u64),
            Some(r) => Err(Error::BudgetExceeded {
                required: r,
                budget: self.limit,
            }),
            None => Err(Error::BudgetExceeded {
                required: u128::MAX,
                budget: self.limit,
            }),
        }
    }
}

/// `n choose k` in u128, `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc holds C(n, i), so the division by i+1 is exact
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// `n^k` in u128, `None` on overflow.
pub fn power(n: u64, k: u32) -> Option<u128> {
    (n as u128).checked_pow(k)
}

/// `k!` in u128, `None` on overflow.
pub fn factorial(k: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 2..=k {
        acc = acc.checked_mul(i as u128)?;
    }
    Some(acc)
}

pub fn mul_all(parts: &[Option<u128>]) -> Option<u128> {
    let mut acc: u128 = 1;
    for p in parts {
        acc = acc.checked_mul((*p)?)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(18, 2), Some(153));
        assert_eq!(binomial(5, 0), Some(1));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(129, 2), Some(8256));
        assert_eq!(binomial(64, 32), Some(1832624140942590534));
        // C(200, 100) exceeds u128
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn admits_and_refuses() {
        let b = Budget::new(100);
        assert_eq!(b.admit(Some(100)).unwrap(), 100);
        let err = b.admit(Some(101)).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 101,
                budget: 100
            }
        ));
        assert!(b.admit(None).is_err());
    }

    #[test]
    fn factorials_and_powers() {
        assert_eq!(factorial(6), Some(720));
        assert_eq!(power(7, 3), Some(343));
        assert_eq!(power(u64::MAX, 3), None);
    }
}
