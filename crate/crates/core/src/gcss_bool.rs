//! Generalized column subset selection over the Boolean semiring.
//!
//! Plain column selection cannot bound the error against the Boolean optimum,
//! so the basis columns here are set formulas over `2^k - 1` selected columns
//! of `A`: one column is assigned to each nonempty subset of `[k]` through a
//! bijection, running intersections `E` are taken from the back of that
//! ordering, correction terms `F` recover what later intersections removed,
//! and the final basis column `B_i` is the union of `E` at the front with all
//! `F` terms for `i`. The exhaustive search tries every selection (with
//! repetition) and every bijection; its error is within `2^k` times the
//! Boolean rank-`k` optimum.
//!
//! Subsets of `[k]` are identified with their indicator masks (bit `i` =
//! element `i`); bijections are permutations of the masks `1..2^k` in
//! increasing order, ranked lexicographically.

use itertools::Itertools;
use rayon::prelude::*;

use crate::bitmat::{BitColumn, BitMatrix};
use crate::budget::{self, Budget};
use crate::css_gf2::MAX_COEFF_WIDTH;
use crate::error::{Error, Result};

/// Union of every subset of `basis`, indexed by subset mask. Entry 0 is the
/// zero column; entry `m` is entry `m` minus its lowest bit, OR the
/// corresponding basis column.
pub(crate) fn bool_union_table(basis: &[&BitColumn], len: usize) -> Vec<BitColumn> {
    let k = basis.len();
    let mut table = Vec::with_capacity(1usize << k);
    table.push(BitColumn::zeros(len));
    for mask in 1..(1u64 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = (mask & (mask - 1)) as usize;
        let mut u = table[rest].clone();
        u.or_assign(basis[low]);
        table.push(u);
    }
    table
}

/// Best subset union approximating `target`; ties prefer the smaller mask.
pub(crate) fn best_bool_coeff(table: &[BitColumn], target: &BitColumn) -> (u64, u64) {
    let mut best_mask = 0u64;
    let mut best_cost = target.weight();
    for (mask, union) in table.iter().enumerate().skip(1) {
        let cost = union.hamming(target);
        if cost < best_cost {
            best_cost = cost;
            best_mask = mask as u64;
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

/// Per-column optimal Boolean coefficients: each column of `A` is
/// approximated by the best union of basis columns (the empty union
/// included), and the total error is returned alongside `Q`.
pub fn bool_best_coefficients(basis: &BitMatrix, a: &BitMatrix) -> Result<(BitMatrix, u64)> {
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
    let table = bool_union_table(&brefs, a.rows());
    let mut masks = Vec::with_capacity(a.cols());
    let mut error = 0u64;
    for j in 0..a.cols() {
        let (mask, cost) = best_bool_coeff(&table, &a.column(j));
        masks.push(mask);
        error += cost;
    }
    Ok((coeff_masks_to_matrix(k, &masks), error))
}

/// One `F` correction term: for the pair `l1 < l2` with `i` in both ordered
/// subsets, the part of `E[l1+1][i]` missing from every `E[l1][i']` with
/// `i'` in the later subset.
#[derive(Debug, Clone)]
pub struct FTerm {
    pub i: usize,
    pub l1: usize,
    pub l2: usize,
    pub column: BitColumn,
}

/// A fully materialized candidate for one `(selection, bijection)` pair.
#[derive(Debug, Clone)]
pub struct GcssCandidate {
    /// The `2^k - 1` selected column indices (repetition allowed).
    pub selection: Vec<usize>,
    /// `pi[l]` is the indicator mask of the subset in ordering position `l`.
    pub pi: Vec<u32>,
    /// Column assigned to each nonempty subset, indexed by mask (entry 0 unused).
    pub d_by_subset: Vec<BitColumn>,
    /// `e[l][i]`: intersection of the columns of every subset at position
    /// `>= l` containing `i`; all-ones when no such subset exists.
    pub e: Vec<Vec<BitColumn>>,
    pub f: Vec<FTerm>,
    /// The `k` basis columns.
    pub b: Vec<BitColumn>,
    pub q: BitMatrix,
    pub error: u64,
}

fn subset_count(k: usize) -> usize {
    assert!((1..32).contains(&k), "unsupported k");
    (1usize << k) - 1
}

/// Builds the candidate for one `(selection, pi)` pair, computing `D`, `E`,
/// `F`, `B`, and the coefficient-solved error.
pub fn build_candidate(
    a: &BitMatrix,
    k: usize,
    selection: &[usize],
    pi: &[u32],
) -> Result<GcssCandidate> {
    let m = subset_count(k);
    let d = a.rows();
    if selection.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "selection needs {m} column indices, got {}",
            selection.len()
        )));
    }
    if let Some(&j) = selection.iter().find(|&&j| j >= a.cols()) {
        return Err(Error::IndexOutOfRange(format!(
            "selected column {j} out of range for {} columns",
            a.cols()
        )));
    }
    if pi.len() != m {
        return Err(Error::MalformedBijection(format!(
            "need {m} subset positions, got {}",
            pi.len()
        )));
    }
    let mut seen = vec![false; m + 1];
    for &s in pi {
        if s == 0 || s as usize > m || seen[s as usize] {
            return Err(Error::MalformedBijection(format!(
                "positions must cover each nonempty subset mask once; offending mask {s}"
            )));
        }
        seen[s as usize] = true;
    }

    // D: column assigned to each nonempty subset
    let mut d_by_subset = vec![BitColumn::zeros(d); m + 1];
    for (l, &s) in pi.iter().enumerate() {
        d_by_subset[s as usize] = a.column(selection[l]);
    }

    // E by backward recurrence; grounded = intersection over a nonempty index set
    let mut e = vec![vec![BitColumn::ones(d); k]; m];
    let mut grounded = vec![vec![false; k]; m];
    for l in (0..m).rev() {
        for i in 0..k {
            let (mut col, mut g) = if l + 1 < m {
                (e[l + 1][i].clone(), grounded[l + 1][i])
            } else {
                (BitColumn::ones(d), false)
            };
            if pi[l] >> i & 1 == 1 {
                col.and_assign(&d_by_subset[pi[l] as usize]);
                g = true;
            }
            e[l][i] = col;
            grounded[l][i] = g;
        }
    }

    // F terms; the union over the later subset is shared across its members
    let mut f = Vec::new();
    for l1 in 0..m {
        for l2 in l1 + 1..m {
            let common = pi[l1] & pi[l2];
            if common == 0 {
                continue;
            }
            let mut union = BitColumn::zeros(d);
            for i_prime in 0..k {
                if pi[l2] >> i_prime & 1 == 1 {
                    assert!(grounded[l1][i_prime], "ungrounded E in F union");
                    union.or_assign(&e[l1][i_prime]);
                }
            }
            for i in 0..k {
                if common >> i & 1 == 1 {
                    assert!(grounded[l1 + 1][i], "ungrounded E in F term");
                    f.push(FTerm {
                        i,
                        l1,
                        l2,
                        column: e[l1 + 1][i].diff(&union),
                    });
                }
            }
        }
    }

    // B_i: front intersection plus all corrections for i
    let mut b = Vec::with_capacity(k);
    for i in 0..k {
        assert!(grounded[0][i], "ungrounded E in B");
        let mut col = e[0][i].clone();
        for term in &f {
            if term.i == i {
                col.or_assign(&term.column);
            }
        }
        b.push(col);
    }

    let basis = BitMatrix::from_columns(&b)?;
    let (q, error) = bool_best_coefficients(&basis, a)?;
    Ok(GcssCandidate {
        selection: selection.to_vec(),
        pi: pi.to_vec(),
        d_by_subset,
        e,
        f,
        b,
        q,
        error,
    })
}

impl GcssCandidate {
    fn k(&self) -> usize {
        self.b.len()
    }

    /// Checks the structural identities of the construction; `Err` describes
    /// the first violated one.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let k = self.k();
        let m = self.e.len();
        let d = self.b[0].len();

        // E grows along the ordering
        for l in 0..m.saturating_sub(1) {
            for i in 0..k {
                if !self.e[l][i].is_subset_of(&self.e[l + 1][i]) {
                    return Err(format!("E[{l}][{i}] not contained in E[{}][{i}]", l + 1));
                }
            }
        }

        // union of B over each ordered subset decomposes into E at that
        // position plus the F terms at or past it
        for l in 0..m {
            let s = self.pi[l];
            let mut lhs = BitColumn::zeros(d);
            let mut rhs = BitColumn::zeros(d);
            for i in 0..k {
                if s >> i & 1 == 1 {
                    lhs.or_assign(&self.b[i]);
                    rhs.or_assign(&self.e[l][i]);
                }
            }
            for term in &self.f {
                if s >> term.i & 1 == 1 && term.l1 >= l {
                    rhs.or_assign(&term.column);
                }
            }
            if lhs != rhs {
                return Err(format!("reconstruction identity fails at position {l}"));
            }
        }

        // every bit of B comes from some selected column
        let mut all_d = BitColumn::zeros(d);
        for s in 1..=m {
            all_d.or_assign(&self.d_by_subset[s]);
        }
        for (i, col) in self.b.iter().enumerate() {
            if !col.is_subset_of(&all_d) {
                return Err(format!("B[{i}] has bits outside the selected columns"));
            }
        }
        Ok(())
    }
}

/// The best GCSS candidate with its witness.
#[derive(Debug, Clone)]
pub struct GcssSolution {
    pub basis: BitMatrix,
    pub q: BitMatrix,
    pub error: u64,
    pub selection: Vec<usize>,
    pub pi: Vec<u32>,
    pub pi_rank: u64,
    /// Number of `(selection, pi)` candidates evaluated.
    pub candidates: u64,
}

/// The GCSS ratio bound `2^k`.
pub fn gcss_bound(k: usize) -> u64 {
    assert!((1..=62).contains(&k), "unsupported k");
    1u64 << k
}

/// Search-space size of [`gcss_exhaustive`] in elementary evaluations:
/// `n^(2^k-1) * (2^k-1)! * 2^k * n`.
pub fn gcss_search_size(n: usize, k: usize) -> Option<u128> {
    let m = (1u64 << k) - 1;
    budget::mul_all(&[
        budget::power(n as u64, m as u32),
        budget::factorial(m),
        budget::power(2, k as u32),
        Some(n as u128),
    ])
}

/// Exhaustive GCSS: all selections of `2^k - 1` columns (with repetition) and
/// all bijections onto the nonempty subsets of `[k]`.
///
/// Candidates are scanned in lexicographic order of `(selection, pi rank)`;
/// the scan is partitioned across workers by the first selected index and
/// merged by exact `(error, selection, pi rank)` minimum. When
/// `check_candidates` is set, every built candidate is validated against the
/// construction identities and a violation panics.
pub fn gcss_exhaustive(
    a: &BitMatrix,
    k: usize,
    budget: Budget,
    check_candidates: bool,
) -> Result<GcssSolution> {
    let n = a.cols();
    if k == 0 {
        return Err(Error::IndexOutOfRange("k must be at least 1".into()));
    }
    if k >= 32 {
        return Err(Error::BudgetExceeded {
            required: u128::MAX,
            budget: budget.limit(),
        });
    }
    budget.admit(gcss_search_size(n, k))?;
    let m = subset_count(k);
    let subsets: Vec<u32> = (1..=(m as u32)).collect();

    struct Best {
        error: u64,
        selection: Vec<usize>,
        pi: Vec<u32>,
        pi_rank: u64,
    }

    let results: Vec<(Option<Best>, u64)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<Best> = None;
            let mut candidates = 0u64;
            let mut selection = vec![0usize; m];
            selection[0] = first;
            loop {
                for (pi_rank, pi) in subsets.iter().copied().permutations(m).enumerate() {
                    let cand = build_candidate(a, k, &selection, &pi)
                        .expect("enumerated candidates are well-formed");
                    if check_candidates {
                        if let Err(msg) = cand.validate() {
                            panic!("candidate invariant violated: {msg}");
                        }
                    }
                    candidates += 1;
                    // lexicographic scan: strict improvement keeps the
                    // smallest (selection, pi) witness
                    if local.as_ref().is_none_or(|b| cand.error < b.error) {
                        local = Some(Best {
                            error: cand.error,
                            selection: selection.clone(),
                            pi,
                            pi_rank: pi_rank as u64,
                        });
                    }
                }
                // odometer over positions 1.. (position 0 is fixed per worker)
                let mut pos = m;
                loop {
                    if pos == 1 {
                        break;
                    }
                    pos -= 1;
                    if selection[pos] + 1 < n {
                        selection[pos] += 1;
                        for later in selection.iter_mut().skip(pos + 1) {
                            *later = 0;
                        }
                        break;
                    }
                    selection[pos] = 0;
                }
                if m == 1 || selection[1..].iter().all(|&v| v == 0) {
                    break;
                }
            }
            (local, candidates)
        })
        .collect();

    let mut candidates = 0u64;
    let mut best: Option<Best> = None;
    for (local, count) in results {
        candidates += count;
        if let Some(b) = local {
            let better = match &best {
                None => true,
                Some(cur) => {
                    (b.error, &b.selection, b.pi_rank) < (cur.error, &cur.selection, cur.pi_rank)
                }
            };
            if better {
                best = Some(b);
            }
        }
    }
    let best = best.expect("n >= 1 guarantees candidates");

    let winner = build_candidate(a, k, &best.selection, &best.pi)?;
    Ok(GcssSolution {
        basis: BitMatrix::from_columns(&winner.b)?,
        q: winner.q,
        error: winner.error,
        selection: best.selection,
        pi: best.pi,
        pi_rank: best.pi_rank,
        candidates,
    })
}
