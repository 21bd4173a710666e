//! Column subset selection over GF(2).
//!
//! The solver picks `k` actual columns of `A` as the basis and solves the
//! coefficient matrix exactly: for each target column the best of the `2^k`
//! GF(2) combinations of the basis columns. The exhaustive search over all
//! `C(n,k)` subsets is the information-theoretic reference point; its error is
//! within the exact rational factor `k/2 + 1 + k/(2(2^k-1))` of the true
//! rank-`k` optimum, and [`verify_thm3_consequence`] checks the
//! change-of-basis argument behind that factor on concrete instances.
//!
//! All tie-breaks are pinned so results are identical across platforms and
//! thread counts: coefficient ties pick the smallest coefficient vector read
//! as an integer (bit `i` = coefficient of basis column `i`), subset ties
//! pick the lexicographically smallest sorted index tuple, nearest-neighbor
//! ties pick the smallest column index.

use itertools::Itertools;
use rayon::prelude::*;

use crate::bitmat::{BitColumn, BitMatrix};
use crate::budget::{self, Budget};
use crate::error::{Error, Result};
use crate::ratio::Ratio;

/// Largest basis width accepted by the coefficient solver (`2^k` candidates
/// per column).
pub const MAX_COEFF_WIDTH: usize = 20;

/// `lambda_r`: the additive-bound coefficient schedule. `lambda_0 = 0`,
/// otherwise `(r/2)(1 + 1/(2^r - 1))`.
pub fn lambda_r(r: usize) -> Ratio {
    assert!(r <= 62, "lambda_r out of supported range");
    if r == 0 {
        return Ratio::zero();
    }
    let pow = 1u64 << r;
    Ratio::new(r as u64 * pow, 2 * (pow - 1))
}

/// The exact CSS approximation-ratio bound `k/2 + 1 + k/(2(2^k-1))`, equal to
/// `1 + lambda_k`.
pub fn ratio_bound(k: usize) -> Result<Ratio> {
    if k == 0 {
        return Err(Error::IndexOutOfRange("ratio bound needs k >= 1".into()));
    }
    if k > 62 {
        return Err(Error::Unsupported(format!("ratio bound for k={k}")));
    }
    Ok(Ratio::from_int(1).add(&lambda_r(k)))
}

/// The `k` and the two exact rational schedules derived from it.
#[derive(Debug, Clone, Copy)]
pub struct BoundParams {
    k: usize,
}

impl BoundParams {
    pub fn new(k: usize) -> Result<Self> {
        ratio_bound(k)?;
        Ok(BoundParams { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `lambda_r` for `0 <= r <= k`.
    pub fn lambda(&self, r: usize) -> Ratio {
        assert!(r <= self.k, "r exceeds k");
        lambda_r(r)
    }

    pub fn ratio(&self) -> Ratio {
        ratio_bound(self.k).expect("validated at construction")
    }
}

/// A CSS solution: the chosen column subset, the optimal coefficients given
/// that subset, and the resulting error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssSolution {
    pub subset: Vec<usize>,
    pub q: BitMatrix,
    pub error: u64,
    pub k: usize,
}

/// Result of re-deriving a basis from an optimal `U` via an invertible
/// change of basis `B`: each column of `UB` is replaced by its nearest
/// column of `A`, and the error of that replacement basis is reported.
#[derive(Debug, Clone)]
pub struct InducedBasisReport {
    pub b: BitMatrix,
    pub basis_indices: Vec<usize>,
    pub error: u64,
}

#[derive(Debug, Clone)]
pub struct Thm3Report {
    pub min_induced_error: u64,
    pub bound: Ratio,
    pub opt_error: u64,
    pub holds: bool,
    pub bases_tried: usize,
}

/// Best GF(2) combination of `basis` columns for one target column.
///
/// Walks the `2^k` coefficient vectors in Gray-code order so each step is a
/// single column XOR plus popcount. Returns the winning coefficient mask and
/// its cost; ties prefer the smaller mask.
pub(crate) fn best_gf2_coeff(basis: &[&BitColumn], target: &BitColumn) -> (u64, u64) {
    let k = basis.len();
    debug_assert!(k <= MAX_COEFF_WIDTH);
    let mut combo = BitColumn::zeros(target.len());
    let mut best_mask = 0u64;
    let mut best_cost = target.weight();
    let mut prev_gray = 0u64;
    for idx in 1..(1u64 << k) {
        let gray = idx ^ (idx >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        prev_gray = gray;
        combo.xor_assign(basis[flipped]);
        let cost = combo.hamming(target);
        if cost < best_cost || (cost == best_cost && gray < best_mask) {
            best_cost = cost;
            best_mask = gray;
        }
    }
    (best_mask, best_cost)
}

fn coeff_masks_to_matrix(k: usize, masks: &[u64]) -> BitMatrix {
    let mut q = BitMatrix::zeros(k, masks.len()).expect("nonzero dims");
    for (j, &mask) in masks.iter().enumerate() {
        for i in 0..k {
            if mask >> i & 1 == 1 {
                q.set(i, j, true);
            }
        }
    }
    q
}

/// Per-column optimal GF(2) coefficients for approximating `A` in the span of
/// `basis`'s columns, with the total error.
pub fn gf2_best_coefficients(basis: &BitMatrix, a: &BitMatrix) -> Result<(BitMatrix, u64)> {
    if basis.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, target has {}",
            basis.rows(),
            a.rows()
        )));
    }
    let k = basis.cols();
    if k > MAX_COEFF_WIDTH {
        return Err(Error::BudgetExceeded {
            required: budget::power(2, k as u32).unwrap_or(u128::MAX),
            budget: 1 << MAX_COEFF_WIDTH,
        });
    }
    let bcols = basis.columns();
    let brefs: Vec<&BitColumn> = bcols.iter().collect();
    let mut masks = Vec::with_capacity(a.cols());
    let mut error = 0u64;
    for j in 0..a.cols() {
        let target = a.column(j);
        let (mask, cost) = best_gf2_coeff(&brefs, &target);
        masks.push(mask);
        error += cost;
    }
    Ok((coeff_masks_to_matrix(k, &masks), error))
}

fn validate_subset(n: usize, subset: &[usize]) -> Result<()> {
    for (pos, &j) in subset.iter().enumerate() {
        if j >= n {
            return Err(Error::IndexOutOfRange(format!(
                "column index {j} out of range for {n} columns"
            )));
        }
        if subset[..pos].contains(&j) {
            return Err(Error::IndexOutOfRange(format!("duplicate column index {j}")));
        }
    }
    Ok(())
}

/// Exact CSS error of one specific column subset.
pub fn css_subset_error(a: &BitMatrix, subset: &[usize]) -> Result<(BitMatrix, u64)> {
    validate_subset(a.cols(), subset)?;
    let cols: Vec<BitColumn> = subset.iter().map(|&j| a.column(j)).collect();
    let basis = BitMatrix::from_columns(&cols)?;
    gf2_best_coefficients(&basis, a)
}

/// Search-space size of [`css_exhaustive`] in elementary evaluations.
pub fn css_search_size(n: usize, k: usize) -> Option<u128> {
    budget::mul_all(&[
        budget::binomial(n as u64, k as u64),
        budget::power(2, k as u32),
        Some(n as u128),
    ])
}

/// The best CSS solution over all `C(n,k)` column subsets.
///
/// Subsets are scanned in lexicographic order of the sorted index tuple; the
/// scan is partitioned across workers by first index and merged by exact
/// `(error, subset)` minimum, so the result is identical at any thread count.
pub fn css_exhaustive(a: &BitMatrix, k: usize, budget: Budget) -> Result<CssSolution> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= k <= n, got k={k} with n={n}"
        )));
    }
    if k > MAX_COEFF_WIDTH {
        return Err(Error::BudgetExceeded {
            required: css_search_size(n, k).unwrap_or(u128::MAX),
            budget: budget.limit(),
        });
    }
    budget.admit(css_search_size(n, k))?;
    let acols = a.columns();

    let best = (0..=n - k)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<(u64, Vec<usize>, Vec<u64>)> = None;
            let mut subset = Vec::with_capacity(k);
            for rest in (first + 1..n).combinations(k - 1) {
                subset.clear();
                subset.push(first);
                subset.extend(rest);
                let basis: Vec<&BitColumn> = subset.iter().map(|&j| &acols[j]).collect();
                let mut error = 0u64;
                let mut masks = Vec::with_capacity(n);
                for target in &acols {
                    let (mask, cost) = best_gf2_coeff(&basis, target);
                    masks.push(mask);
                    error += cost;
                }
                // lexicographic scan: strict improvement keeps the smallest tuple
                if local.as_ref().is_none_or(|(e, _, _)| error < *e) {
                    local = Some((error, subset.clone(), masks));
                }
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(a), Some(b)) => {
                    if (b.0, &b.1) < (a.0, &a.1) {
                        Some(b)
                    } else {
                        Some(a)
                    }
                }
            },
        )
        .expect("at least one subset");

    let (error, subset, masks) = best;
    Ok(CssSolution {
        q: coeff_masks_to_matrix(k, &masks),
        subset,
        error,
        k,
    })
}

/// Nearest column of `a` to `target` in Hamming distance; ties pick the
/// smallest index.
pub fn nearest_column(a: &BitMatrix, target: &BitColumn) -> Result<usize> {
    if target.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "target length {} vs {} rows",
            target.len(),
            a.rows()
        )));
    }
    let mut best = (u64::MAX, 0usize);
    for j in 0..a.cols() {
        let d = a.column(j).hamming(target);
        if d < best.0 {
            best = (d, j);
        }
    }
    Ok(best.1)
}

/// Replaces each column of `UB` with its nearest column of `A` and reports
/// the error of the resulting basis.
pub fn induced_nn_basis(a: &BitMatrix, u: &BitMatrix, b: &BitMatrix) -> Result<InducedBasisReport> {
    let k = u.cols();
    if b.rows() != k || b.cols() != k {
        return Err(Error::DimensionMismatch(format!(
            "change of basis must be {k}x{k}, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if b.gf2_rank() != k {
        return Err(Error::Singular);
    }
    if u.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, target has {}",
            u.rows(),
            a.rows()
        )));
    }
    let ub = u.gf2_mul(b)?;
    let mut basis_indices = Vec::with_capacity(k);
    for i in 0..k {
        basis_indices.push(nearest_column(a, &ub.column(i))?);
    }
    let cols: Vec<BitColumn> = basis_indices.iter().map(|&j| a.column(j)).collect();
    let basis = BitMatrix::from_columns(&cols)?;
    let (_, error) = gf2_best_coefficients(&basis, a)?;
    Ok(InducedBasisReport {
        b: b.clone(),
        basis_indices,
        error,
    })
}

/// All invertible `k x k` matrices over GF(2), in increasing order of their
/// row-major entry serialization.
pub fn gl2_matrices(k: usize) -> Result<Vec<BitMatrix>> {
    if k == 0 || k > 3 {
        return Err(Error::Unsupported(format!(
            "GL({k},2) enumeration capped at k <= 3"
        )));
    }
    let bits = k * k;
    let mut out = Vec::new();
    for mask in 0..(1u64 << bits) {
        let entries: Vec<u8> = (0..bits).map(|i| (mask >> i & 1) as u8).collect();
        let m = BitMatrix::make(k, k, &entries)?;
        if m.gf2_rank() == k {
            out.push(m);
        }
    }
    Ok(out)
}

/// Checks the `r = k` consequence of the change-of-basis bound: some
/// invertible `B` makes the nearest-neighbor basis of `UB` no worse than
/// `(1 + lambda_k)` times the optimal error. Exact rational comparison.
pub fn verify_thm3_consequence(
    a: &BitMatrix,
    opt_u: &BitMatrix,
    opt_error: u64,
) -> Result<Thm3Report> {
    let k = opt_u.cols();
    let bound = ratio_bound(k)?;
    let bases = gl2_matrices(k)?;
    let mut min_induced_error = u64::MAX;
    for b in &bases {
        let report = induced_nn_basis(a, opt_u, b)?;
        min_induced_error = min_induced_error.min(report.error);
    }
    Ok(Thm3Report {
        min_induced_error,
        bound,
        opt_error,
        holds: bound.bounds(min_induced_error, opt_error),
        bases_tried: bases.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, e: &[u8]) -> BitMatrix {
        BitMatrix::make(rows, cols, e).unwrap()
    }

    #[test]
    fn ratio_bound_values() {
        assert_eq!(ratio_bound(1).unwrap(), Ratio::from_int(2));
        assert_eq!(ratio_bound(2).unwrap(), Ratio::new(7, 3));
        assert_eq!(ratio_bound(3).unwrap(), Ratio::new(19, 7));
        assert!(ratio_bound(0).is_err());
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_r(0), Ratio::zero());
        assert_eq!(lambda_r(1), Ratio::from_int(1));
        assert_eq!(lambda_r(2), Ratio::new(4, 3));
        // the ratio bound is exactly 1 + lambda_k
        for k in 1..=16 {
            assert_eq!(ratio_bound(k).unwrap(), Ratio::from_int(1).add(&lambda_r(k)));
        }
    }

    #[test]
    fn bound_params() {
        let p = BoundParams::new(2).unwrap();
        assert_eq!(p.lambda(2), Ratio::new(4, 3));
        assert_eq!(p.ratio(), Ratio::new(7, 3));
        assert!(BoundParams::new(0).is_err());
    }

    #[test]
    fn coefficients_exact_match_column() {
        // basis is literally column 0 of A: that column costs 0 with coefficient 1
        let a = m(2, 3, &[1, 0, 1, 1, 1, 0]);
        let basis = BitMatrix::from_columns(&[a.column(0)]).unwrap();
        let (q, _) = gf2_best_coefficients(&basis, &a).unwrap();
        assert!(q.get(0, 0));
        assert_eq!(basis.column(0).hamming(&a.column(0)), 0);
    }

    #[test]
    fn coefficients_single_basis_vector() {
        // basis e_1, targets I_2: first column exact, second keeps coefficient 0
        let basis = m(2, 1, &[1, 0]);
        let a = BitMatrix::identity(2).unwrap();
        let (q, err) = gf2_best_coefficients(&basis, &a).unwrap();
        assert_eq!(err, 1);
        assert!(q.get(0, 0));
        assert!(!q.get(0, 1));
    }

    #[test]
    fn coefficients_full_identity_basis() {
        let basis = BitMatrix::identity(2).unwrap();
        let a = m(2, 4, &[1, 1, 0, 1, 0, 1, 1, 1]);
        let (_, err) = gf2_best_coefficients(&basis, &a).unwrap();
        assert_eq!(err, 0);
    }

    #[test]
    fn coefficients_reject_shape() {
        let basis = m(3, 1, &[1, 0, 0]);
        let a = BitMatrix::identity(2).unwrap();
        assert!(gf2_best_coefficients(&basis, &a).is_err());
    }

    #[test]
    fn coefficients_reject_wide_basis() {
        let basis = BitMatrix::zeros(2, MAX_COEFF_WIDTH + 1).unwrap();
        let a = BitMatrix::identity(2).unwrap();
        assert!(matches!(
            gf2_best_coefficients(&basis, &a),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn subset_error_cases() {
        let i2 = BitMatrix::identity(2).unwrap();
        assert_eq!(css_subset_error(&i2, &[0]).unwrap().1, 1);
        assert_eq!(css_subset_error(&i2, &[0, 1]).unwrap().1, 0);
        let neg = m(2, 2, &[0, 1, 1, 0]);
        assert_eq!(css_subset_error(&neg, &[0]).unwrap().1, 1);
        assert!(css_subset_error(&neg, &[0, 0]).is_err());
        assert!(css_subset_error(&neg, &[5]).is_err());
    }

    #[test]
    fn exhaustive_tie_breaks_to_smallest_subset() {
        let neg = m(2, 2, &[0, 1, 1, 0]);
        let sol = css_exhaustive(&neg, 1, Budget::default()).unwrap();
        assert_eq!(sol.error, 1);
        assert_eq!(sol.subset, vec![0]);
    }

    #[test]
    fn exhaustive_recovers_low_rank() {
        // rank 2 matrix, k = 2 must reach error 0
        let u = m(3, 2, &[1, 0, 0, 1, 1, 1]);
        let v = m(2, 4, &[1, 0, 1, 1, 0, 1, 1, 0]);
        let a = u.gf2_mul(&v).unwrap();
        let sol = css_exhaustive(&a, 2, Budget::default()).unwrap();
        assert_eq!(sol.error, 0);
        // reconstruction through the chosen subset matches
        let (q, err) = css_subset_error(&a, &sol.subset).unwrap();
        assert_eq!(err, 0);
        let basis =
            BitMatrix::from_columns(&sol.subset.iter().map(|&j| a.column(j)).collect::<Vec<_>>())
                .unwrap();
        assert_eq!(basis.gf2_mul(&q).unwrap(), a);
    }

    #[test]
    fn exhaustive_budget_refusal() {
        let a = BitMatrix::identity(6).unwrap();
        let err = css_exhaustive(&a, 3, Budget::new(10)).unwrap_err();
        // C(6,3) * 2^3 * 6 = 960
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 960,
                budget: 10
            }
        ));
    }

    #[test]
    fn nearest_column_tie_break() {
        let a = m(2, 3, &[1, 0, 1, 0, 1, 1]);
        // (1,1) is at distance 1 from columns 0 and 1, distance 0 from column 2
        let t = BitColumn::from_bits(&[1, 1]).unwrap();
        assert_eq!(nearest_column(&a, &t).unwrap(), 2);
        // equidistant from columns 0 and 1: pick 0
        let i2 = BitMatrix::identity(2).unwrap();
        assert_eq!(nearest_column(&i2, &t).unwrap(), 0);
    }

    #[test]
    fn induced_basis_identity_when_columns_present() {
        let a = m(2, 3, &[1, 0, 1, 0, 1, 1]);
        let u = BitMatrix::from_columns(&[a.column(0), a.column(1)]).unwrap();
        let b = BitMatrix::identity(2).unwrap();
        let rep = induced_nn_basis(&a, &u, &b).unwrap();
        assert_eq!(rep.basis_indices, vec![0, 1]);
        assert_eq!(rep.error, 0);
    }

    #[test]
    fn induced_basis_on_full_rank_perturbation() {
        let a = m(2, 2, &[1, 1, 0, 1]);
        let u = BitMatrix::identity(2).unwrap();
        let b = BitMatrix::identity(2).unwrap();
        let rep = induced_nn_basis(&a, &u, &b).unwrap();
        assert_eq!(rep.basis_indices, vec![0, 1]);
        assert_eq!(rep.error, 0);
    }

    #[test]
    fn induced_basis_rejects_singular() {
        let a = BitMatrix::identity(2).unwrap();
        let u = BitMatrix::identity(2).unwrap();
        let b = m(2, 2, &[1, 1, 1, 1]);
        assert_eq!(induced_nn_basis(&a, &u, &b).unwrap_err(), Error::Singular);
    }

    #[test]
    fn gl2_counts() {
        assert_eq!(gl2_matrices(1).unwrap().len(), 1);
        assert_eq!(gl2_matrices(2).unwrap().len(), 6);
        assert_eq!(gl2_matrices(3).unwrap().len(), 168);
        assert!(gl2_matrices(4).is_err());
    }

    #[test]
    fn thm3_consequence_zero_opt() {
        // exact rank-2 matrix whose basis columns appear in A
        let a = m(2, 3, &[1, 0, 1, 0, 1, 1]);
        let u = BitMatrix::from_columns(&[a.column(0), a.column(1)]).unwrap();
        let rep = verify_thm3_consequence(&a, &u, 0).unwrap();
        assert_eq!(rep.min_induced_error, 0);
        assert!(rep.holds);
        assert_eq!(rep.bases_tried, 6);
    }

    #[test]
    fn thm3_consequence_identity3() {
        let a = BitMatrix::identity(3).unwrap();
        let opt = crate::oracle::opt_gf2(&a, 2, crate::budget::Budget::default()).unwrap();
        let rep = verify_thm3_consequence(&a, &opt.u, opt.error).unwrap();
        assert_eq!(rep.bound, Ratio::new(7, 3));
        assert!(rep.holds, "min {} vs 7/3 * {}", rep.min_induced_error, rep.opt_error);
    }
}
