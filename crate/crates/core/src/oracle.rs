//! Brute-force optimal rank-`k` factorizations.
//!
//! These are the ground truth every approximation ratio is measured against,
//! so they refuse (with the computed search-space size) rather than
//! approximate when a budget is exceeded. The basis matrix `U` is enumerated
//! as non-decreasing multisets of column vectors, zero column and duplicates
//! included: column order never matters because the coefficient rows permute
//! with it, but nothing here assumes duplicates or zero can be dropped.

use rayon::prelude::*;

use crate::bitmat::{BitColumn, BitMatrix};
use crate::budget::{self, Budget};
use crate::css_gf2::best_gf2_coeff;
use crate::error::{Error, Result};
use crate::gcss_bool::{best_bool_coeff, bool_union_table};

/// Which semiring a factorization was solved over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semiring {
    Gf2,
    Bool,
}

impl Semiring {
    pub fn name(&self) -> &'static str {
        match self {
            Semiring::Gf2 => "gf2",
            Semiring::Bool => "boolean",
        }
    }
}

/// An exact rank-`k` factorization: `error` differing entries between `A`
/// and `U V` under the declared semiring, with `V` per-column optimal for
/// `U`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub semiring: Semiring,
    pub u: BitMatrix,
    pub v: BitMatrix,
    pub error: u64,
}

impl Factorization {
    pub fn product(&self) -> BitMatrix {
        match self.semiring {
            Semiring::Gf2 => self.u.gf2_mul(&self.v),
            Semiring::Bool => self.u.bool_mul(&self.v),
        }
        .expect("factor shapes conform")
    }
}

/// Search-space size of [`opt_gf2`]/[`opt_bool`]: `C(2^d + k - 1, k) * 2^k * n`
/// elementary evaluations.
pub fn opt_search_size(d: usize, k: usize, n: usize) -> Option<u128> {
    if d >= 64 || k == 0 || k >= 32 {
        return None;
    }
    let vectors = 1u64.checked_shl(d as u32)?;
    budget::mul_all(&[
        budget::binomial(vectors.checked_add(k as u64 - 1)?, k as u64),
        budget::power(2, k as u32),
        Some(n as u128),
    ])
}

fn columns_from_masks(d: usize, masks: &[u64]) -> Vec<BitColumn> {
    masks.iter().map(|&m| BitColumn::from_mask(d, m)).collect()
}

fn masks_to_matrix(d: usize, masks: &[u64]) -> BitMatrix {
    BitMatrix::from_columns(&columns_from_masks(d, masks)).expect("nonzero dims")
}

fn coeff_masks_to_matrix(k: usize, masks: &[u64]) -> BitMatrix {
    let mut v = BitMatrix::zeros(k, masks.len()).expect("nonzero dims");
    for (j, &mask) in masks.iter().enumerate() {
        for i in 0..k {
            if mask >> i & 1 == 1 {
                v.set(i, j, true);
            }
        }
    }
    v
}

fn opt_impl(a: &BitMatrix, k: usize, budget: Budget, semiring: Semiring) -> Result<Factorization> {
    let (d, n) = a.shape();
    if k == 0 {
        return Err(Error::IndexOutOfRange("k must be at least 1".into()));
    }
    budget.admit(opt_search_size(d, k, n))?;
    let limit = 1u64 << d;
    let acols = a.columns();

    struct Best {
        error: u64,
        u_masks: Vec<u64>,
        v_masks: Vec<u64>,
    }

    // Worker per first column mask; the remaining masks are enumerated
    // non-decreasing, so the whole scan is lexicographic over multisets.
    let results: Vec<Option<Best>> = (0..limit)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<Best> = None;
            let mut masks = vec![first; k];
            loop {
                let ucols = columns_from_masks(d, &masks);
                let urefs: Vec<&BitColumn> = ucols.iter().collect();
                let mut error = 0u64;
                let mut v_masks = Vec::with_capacity(n);
                match semiring {
                    Semiring::Gf2 => {
                        for target in &acols {
                            let (mask, cost) = best_gf2_coeff(&urefs, target);
                            v_masks.push(mask);
                            error += cost;
                        }
                    }
                    Semiring::Bool => {
                        let table = bool_union_table(&urefs, d);
                        for target in &acols {
                            let (mask, cost) = best_bool_coeff(&table, target);
                            v_masks.push(mask);
                            error += cost;
                        }
                    }
                }
                if local.as_ref().is_none_or(|b| error < b.error) {
                    local = Some(Best {
                        error,
                        u_masks: masks.clone(),
                        v_masks,
                    });
                }
                // next non-decreasing tuple with masks[0] == first
                let mut pos = k;
                loop {
                    if pos == 1 {
                        return local;
                    }
                    pos -= 1;
                    if masks[pos] + 1 < limit {
                        masks[pos] += 1;
                        let v = masks[pos];
                        for later in masks.iter_mut().skip(pos + 1) {
                            *later = v;
                        }
                        break;
                    }
                    // exhausted: reset happens via the fill above once an
                    // earlier position increments
                }
            }
        })
        .collect();

    let mut best: Option<Best> = None;
    for local in results.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some(cur) => (local.error, &local.u_masks) < (cur.error, &cur.u_masks),
        };
        if better {
            best = Some(local);
        }
    }
    let best = best.expect("at least one candidate basis");
    Ok(Factorization {
        semiring,
        u: masks_to_matrix(d, &best.u_masks),
        v: coeff_masks_to_matrix(k, &best.v_masks),
        error: best.error,
    })
}

/// Globally minimal rank-`k` error over GF(2), by exhaustive search over all
/// basis multisets with per-column optimal coefficients.
pub fn opt_gf2(a: &BitMatrix, k: usize, budget: Budget) -> Result<Factorization> {
    opt_impl(a, k, budget, Semiring::Gf2)
}

/// Globally minimal rank-`k` error over the Boolean semiring.
pub fn opt_bool(a: &BitMatrix, k: usize, budget: Budget) -> Result<Factorization> {
    opt_impl(a, k, budget, Semiring::Bool)
}

/// Hard cap on rows for the dedicated rank-1 solver (`2^d` basis vectors).
pub const MAX_RANK1_ROWS: usize = 24;

/// Exact rank-1 optimum, where GF(2) and Boolean products coincide: for each
/// candidate `u` the optimal coefficient keeps a column iff replacing it by
/// `u` strictly helps.
pub fn opt_rank1(a: &BitMatrix) -> Result<Factorization> {
    let (d, n) = a.shape();
    if d > MAX_RANK1_ROWS {
        return Err(Error::BudgetExceeded {
            required: budget::mul_all(&[budget::power(2, d as u32), Some(n as u128)])
                .unwrap_or(u128::MAX),
            budget: (1u64 << MAX_RANK1_ROWS).saturating_mul(n as u64),
        });
    }
    let col_masks: Vec<u64> = (0..n).map(|j| a.column(j).as_mask()).collect();
    let col_weights: Vec<u64> = col_masks.iter().map(|m| m.count_ones() as u64).collect();
    let limit = 1u64 << d;

    let best = (0..limit)
        .into_par_iter()
        .map(|u| {
            let mut error = 0u64;
            for (j, &cm) in col_masks.iter().enumerate() {
                let replaced = (cm ^ u).count_ones() as u64;
                error += replaced.min(col_weights[j]);
            }
            (error, u)
        })
        .min()
        .expect("nonempty range");

    let (error, u_mask) = best;
    let mut v = BitMatrix::zeros(1, n)?;
    for (j, &cm) in col_masks.iter().enumerate() {
        // keep the column only on strict improvement, so v is deterministic
        if ((cm ^ u_mask).count_ones() as u64) < col_weights[j] {
            v.set(0, j, true);
        }
    }
    Ok(Factorization {
        semiring: Semiring::Gf2,
        u: masks_to_matrix(d, &[u_mask]),
        v,
        error,
    })
}

/// Rank-1 solution restricted to actual columns of `A`; ties pick the
/// smallest column index. This is the `2`-approximation baseline.
pub fn rank1_best_column(a: &BitMatrix) -> (usize, BitColumn, u64) {
    let (_, n) = a.shape();
    let acols = a.columns();
    let weights: Vec<u64> = acols.iter().map(|c| c.weight()).collect();
    let mut best: Option<(u64, usize)> = None;
    for cand in 0..n {
        let mut error = 0u64;
        for j in 0..n {
            error += acols[j].hamming(&acols[cand]).min(weights[j]);
        }
        if best.is_none_or(|(e, _)| error < e) {
            best = Some((error, cand));
        }
    }
    let (error, idx) = best.expect("n >= 1");
    let mut v = BitColumn::zeros(n);
    for j in 0..n {
        if acols[j].hamming(&acols[idx]) < weights[j] {
            v.set(j, true);
        }
    }
    (idx, v, error)
}
