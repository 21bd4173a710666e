//! Sign-matrix gadgets and brute-force solvers behind the rank-1 hardness
//! reduction.
//!
//! Rank-1 binary approximation of `A` is the same problem as maximizing
//! `u^T (2A - J) v` over binary `u, v` (maximum edge weight biclique with
//! `{-1,1}` weights). The reduction from `{-1,0,1}` weights blows each entry
//! up to an `m x m` block, replacing zeros by a Sylvester Hadamard block; the
//! three verifiers here check the block lemma (exact equality), the Lindsey
//! bound, and the Hadamard replacement gap at small, fully enumerable sizes.
//! The proof wants `m` to be the smallest power of two above `4 n^4`
//! ([`default_m`]); every gadget takes `m` explicitly because the lemmas hold
//! for any power of two and only small `m` is enumerable.
//!
//! All comparisons involving `m^(3/2)` are done on squares, in integers.

use rayon::prelude::*;

use crate::bitmat::{outer, BitColumn, BitMatrix};
use crate::error::{Error, Result};

/// A small-integer matrix with entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(&bad) = entries.iter().find(|&&e| !(-1..=1).contains(&e)) {
            return Err(Error::ValueOutOfRange(format!(
                "sign matrix entry {bad} outside -1..=1"
            )));
        }
        Ok(SignMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] as i64
    }

    pub fn is_plus_minus_one(&self) -> bool {
        self.entries.iter().all(|&e| e != 0)
    }

    fn row_values(&self, r: usize) -> impl Iterator<Item = i64> + '_ {
        self.entries[r * self.cols..(r + 1) * self.cols]
            .iter()
            .map(|&e| e as i64)
    }
}

/// The `m x m` Sylvester Hadamard matrix: entry `(i,j)` is
/// `(-1)^popcount(i & j)`; satisfies `H^T H = m I`.
pub fn sylvester_hadamard(m: usize) -> Result<SignMatrix> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::ValueOutOfRange(format!(
            "Hadamard size must be a power of 2, got {m}"
        )));
    }
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(if (i & j).count_ones() % 2 == 0 { 1 } else { -1 });
        }
    }
    SignMatrix::new(m, m, entries)
}

/// Expands every entry of `w` into a constant `m x m` block: `W (x) J_m`.
pub fn kron_allones(w: &SignMatrix, m: usize) -> SignMatrix {
    assert!(m >= 1, "block size must be positive");
    let mut entries = Vec::with_capacity(w.rows() * w.cols() * m * m);
    for r in 0..w.rows() * m {
        for c in 0..w.cols() * m {
            entries.push(w.get(r / m, c / m) as i8);
        }
    }
    SignMatrix::new(w.rows() * m, w.cols() * m, entries).expect("entries stay in range")
}

/// The Hadamard-replacement blow-up: nonzero entries expand to constant
/// blocks, zero entries to the `m x m` Sylvester Hadamard block. The result
/// has all entries in `{-1, 1}`.
pub fn tilde_reduction(w: &SignMatrix, m: usize) -> Result<SignMatrix> {
    if w.rows() != w.cols() {
        return Err(Error::DimensionMismatch(format!(
            "blow-up is defined for square matrices, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let h = sylvester_hadamard(m)?;
    let n = w.rows();
    let mut entries = Vec::with_capacity(n * m * n * m);
    for r in 0..n * m {
        for c in 0..n * m {
            let block = w.get(r / m, c / m);
            entries.push(if block != 0 {
                block as i8
            } else {
                h.get(r % m, c % m) as i8
            });
        }
    }
    let out = SignMatrix::new(n * m, n * m, entries)?;
    assert!(out.is_plus_minus_one(), "blow-up must be a {{-1,1}} matrix");
    Ok(out)
}

/// The smallest power of 2 strictly greater than `4 n^4`, the block size the
/// asymptotic reduction mandates.
pub fn default_m(n: u64) -> u128 {
    assert!(n >= 1);
    let target = 4u128 * (n as u128).pow(4);
    let mut m = 1u128;
    while m <= target {
        m <<= 1;
    }
    m
}

/// `u^T W v` over the integers for binary `u`, `v`.
pub fn quad_form(u: &BitColumn, w: &SignMatrix, v: &BitColumn) -> Result<i64> {
    if u.len() != w.rows() || v.len() != w.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} weights with |u|={}, |v|={}",
            w.rows(),
            w.cols(),
            u.len(),
            v.len()
        )));
    }
    let mut total = 0i64;
    for r in 0..w.rows() {
        if u.get(r) {
            for c in 0..w.cols() {
                if v.get(c) {
                    total += w.get(r, c);
                }
            }
        }
    }
    Ok(total)
}

/// Maximum of `x^T W y` over binary `x`, `y`, with a witness.
#[derive(Debug, Clone)]
pub struct BicliqueResult {
    pub value: i64,
    pub x: BitColumn,
    pub y: BitColumn,
}

/// Maximum of `x^T W y` over `{-1,1}` vectors, with a witness.
#[derive(Debug, Clone)]
pub struct CutResult {
    pub value: i64,
    pub x: Vec<i8>,
    pub y: Vec<i8>,
}

/// Hard cap on rows for the brute-force maximizers (`2^d` candidates).
pub const MAX_BRUTE_ROWS: usize = 24;

/// Deterministic chunking of the mask range `0..2^bits` for parallel scans;
/// boundaries are independent of the number of workers.
fn mask_chunks(bits: usize) -> Vec<(u64, u64)> {
    let total = 1u64 << bits;
    let chunk = (1u64 << 14).min(total);
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < total {
        out.push((lo, (lo + chunk).min(total)));
        lo += chunk;
    }
    out
}

fn gray(idx: u64) -> u64 {
    idx ^ (idx >> 1)
}

fn check_brute_rows(d: usize, n: usize) -> Result<()> {
    if d > MAX_BRUTE_ROWS {
        return Err(Error::BudgetExceeded {
            required: (n as u128) << d.min(127),
            budget: (n as u64).saturating_mul(1 << MAX_BRUTE_ROWS),
        });
    }
    Ok(())
}

/// Exact maximum edge weight biclique: maximizes `x^T W y` over binary
/// vectors. For fixed `x` the optimal `y` keeps exactly the strictly positive
/// components of `x^T W`; the `x` scan walks masks in Gray-code order in
/// deterministic chunks. Ties prefer the smallest `x` mask, then the
/// smallest `y`. The empty selection is always available, so the value is
/// never negative.
pub fn max_biclique(w: &SignMatrix) -> Result<BicliqueResult> {
    let (d, n) = (w.rows(), w.cols());
    check_brute_rows(d, n)?;

    let best = mask_chunks(d)
        .into_par_iter()
        .map(|(lo, hi)| {
            // z = x^T W for the current mask, updated one row per step
            let mut z = vec![0i64; n];
            let start = gray(lo);
            for i in 0..d {
                if start >> i & 1 == 1 {
                    for (acc, val) in z.iter_mut().zip(w.row_values(i)) {
                        *acc += val;
                    }
                }
            }
            let mut best: (i64, u64) = (i64::MIN, 0);
            let mut mask = start;
            for idx in lo..hi {
                let value: i64 = z.iter().map(|&v| v.max(0)).sum();
                if value > best.0 || (value == best.0 && mask < best.1) {
                    best = (value, mask);
                }
                let flip = (idx + 1).trailing_zeros() as usize;
                if flip < d {
                    let sign = if mask >> flip & 1 == 1 { -1 } else { 1 };
                    for (acc, val) in z.iter_mut().zip(w.row_values(flip)) {
                        *acc += sign * val;
                    }
                    mask ^= 1 << flip;
                }
            }
            best
        })
        .reduce(
            || (i64::MIN, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (value, x_mask) = best;
    let mut x = BitColumn::zeros(d);
    for i in 0..d {
        if x_mask >> i & 1 == 1 {
            x.set(i, true);
        }
    }
    let mut z = vec![0i64; n];
    for i in 0..d {
        if x.get(i) {
            for (acc, val) in z.iter_mut().zip(w.row_values(i)) {
                *acc += val;
            }
        }
    }
    let mut y = BitColumn::zeros(n);
    for (j, &v) in z.iter().enumerate() {
        if v > 0 {
            y.set(j, true);
        }
    }
    debug_assert_eq!(quad_form(&x, w, &y)?, value);
    Ok(BicliqueResult { value, x, y })
}

/// Exact bipartite max-cut: maximizes `x^T W y` over `{-1,1}` vectors. For
/// fixed `x` the optimal `y_j` is the sign of `(x^T W)_j`, with zero mapped
/// to `+1`. Mask bit `i` set means `x_i = +1`; ties prefer the smallest
/// mask.
pub fn max_bipartite_cut(w: &SignMatrix) -> Result<CutResult> {
    let (d, n) = (w.rows(), w.cols());
    check_brute_rows(d, n)?;

    let best = mask_chunks(d)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut z = vec![0i64; n];
            let start = gray(lo);
            for i in 0..d {
                let sign = if start >> i & 1 == 1 { 1 } else { -1 };
                for (acc, val) in z.iter_mut().zip(w.row_values(i)) {
                    *acc += sign * val;
                }
            }
            let mut best: (i64, u64) = (i64::MIN, 0);
            let mut mask = start;
            for idx in lo..hi {
                let value: i64 = z.iter().map(|&v| v.abs()).sum();
                if value > best.0 || (value == best.0 && mask < best.1) {
                    best = (value, mask);
                }
                let flip = (idx + 1).trailing_zeros() as usize;
                if flip < d {
                    // -1 -> +1 adds twice the row; +1 -> -1 subtracts it
                    let sign = if mask >> flip & 1 == 1 { -2 } else { 2 };
                    for (acc, val) in z.iter_mut().zip(w.row_values(flip)) {
                        *acc += sign * val;
                    }
                    mask ^= 1 << flip;
                }
            }
            best
        })
        .reduce(
            || (i64::MIN, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (value, x_mask) = best;
    let x: Vec<i8> = (0..d)
        .map(|i| if x_mask >> i & 1 == 1 { 1 } else { -1 })
        .collect();
    let mut z = vec![0i64; n];
    for (i, &xi) in x.iter().enumerate() {
        for (acc, val) in z.iter_mut().zip(w.row_values(i)) {
            *acc += xi as i64 * val;
        }
    }
    let y: Vec<i8> = z.iter().map(|&v| if v >= 0 { 1 } else { -1 }).collect();
    debug_assert_eq!(
        value,
        z.iter().zip(&y).map(|(&zv, &yv)| zv * yv as i64).sum::<i64>()
    );
    Ok(CutResult { value, x, y })
}

/// The sign matrix `2A - J` of a binary matrix; the weights whose biclique
/// optimum encodes the rank-1 approximation of `A`.
pub fn sign_from_binary(a: &BitMatrix) -> SignMatrix {
    let mut entries = Vec::with_capacity(a.rows() * a.cols());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            entries.push(if a.get(r, c) { 1 } else { -1 });
        }
    }
    SignMatrix::new(a.rows(), a.cols(), entries).expect("entries in range")
}

/// Inverse of [`sign_from_binary`]: maps a `{-1,1}` weight matrix to the
/// binary matrix `(W + J) / 2`.
pub fn binary_from_sign(w: &SignMatrix) -> Result<BitMatrix> {
    if !w.is_plus_minus_one() {
        return Err(Error::ValueOutOfRange(
            "binary conversion needs a {-1,1} matrix".into(),
        ));
    }
    let mut m = BitMatrix::zeros(w.rows(), w.cols())?;
    for r in 0..w.rows() {
        for c in 0..w.cols() {
            if w.get(r, c) == 1 {
                m.set(r, c, true);
            }
        }
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct Rank1Identity {
    pub lhs: u64,
    pub rhs: i64,
    pub equal: bool,
}

/// Checks `|A - u v^T|^2 = |A| - u^T (2A - J) v` on both sides: the left as
/// a Hamming distance, the right through integer sign-matrix arithmetic.
pub fn check_rank1_identity(a: &BitMatrix, u: &BitColumn, v: &BitColumn) -> Result<Rank1Identity> {
    if u.len() != a.rows() || v.len() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix with |u|={}, |v|={}",
            a.rows(),
            a.cols(),
            u.len(),
            v.len()
        )));
    }
    let lhs = a.hamming_dist(&outer(u, v))?;
    let rhs = a.count_ones() as i64 - quad_form(u, &sign_from_binary(a), v)?;
    Ok(Rank1Identity {
        lhs,
        rhs,
        equal: rhs >= 0 && lhs == rhs as u64,
    })
}

#[derive(Debug, Clone)]
pub struct BlockLemmaReport {
    pub lhs: i64,
    pub rhs: i64,
    pub equal: bool,
}

/// Checks that the biclique optimum of `W (x) J_m` equals `m^2` times the
/// optimum of `W`, by brute force on both sides.
pub fn verify_block_lemma(w: &SignMatrix, m: usize) -> Result<BlockLemmaReport> {
    if w.rows().saturating_mul(m) > 14 {
        return Err(Error::BudgetExceeded {
            required: 1u128 << (w.rows() * m).min(127),
            budget: 1 << 14,
        });
    }
    let lhs = max_biclique(&kron_allones(w, m))?.value;
    let rhs = (m * m) as i64 * max_biclique(w)?.value;
    Ok(BlockLemmaReport {
        lhs,
        rhs,
        equal: lhs == rhs,
    })
}

#[derive(Debug, Clone)]
pub struct LindseyReport {
    pub max_abs: u64,
    pub m_cubed: u128,
    pub holds: bool,
}

/// Largest `|x^T H y|` over binary `x`, `y` for the Sylvester Hadamard
/// matrix, checked against `m^(3/2)` as `max^2 <= m^3`. For each `x` the
/// extreme `y` keeps either all positive or all negative components of
/// `x^T H`, so only `x` is enumerated.
pub fn verify_lindsey(m: usize) -> Result<LindseyReport> {
    if m > 16 {
        return Err(Error::BudgetExceeded {
            required: 1u128 << m.min(127),
            budget: 1 << 16,
        });
    }
    let h = sylvester_hadamard(m)?;

    let max_abs = mask_chunks(m)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut z = vec![0i64; m];
            let start = gray(lo);
            for i in 0..m {
                if start >> i & 1 == 1 {
                    for (acc, val) in z.iter_mut().zip(h.row_values(i)) {
                        *acc += val;
                    }
                }
            }
            let mut best = 0u64;
            let mut mask = start;
            for idx in lo..hi {
                let pos: i64 = z.iter().map(|&v| v.max(0)).sum();
                let neg: i64 = z.iter().map(|&v| v.min(0)).sum();
                best = best.max(pos.max(-neg) as u64);
                let flip = (idx + 1).trailing_zeros() as usize;
                if flip < m {
                    let sign = if mask >> flip & 1 == 1 { -1 } else { 1 };
                    for (acc, val) in z.iter_mut().zip(h.row_values(flip)) {
                        *acc += sign * val;
                    }
                    mask ^= 1 << flip;
                }
            }
            best
        })
        .reduce(|| 0, u64::max);

    let m_cubed = (m as u128).pow(3);
    Ok(LindseyReport {
        max_abs,
        m_cubed,
        holds: (max_abs as u128).pow(2) <= m_cubed,
    })
}

#[derive(Debug, Clone)]
pub struct TildeGapReport {
    pub max_gap: u64,
    pub bound_sq: u128,
    pub holds: bool,
}

/// Largest `|u^T W~ v - u^T W' v|` over all binary `u`, `v`, checked against
/// `n^2 m^(3/2)` as `gap^2 <= n^4 m^3`. The difference matrix is the
/// Hadamard block on the zero entries of `w` and zero elsewhere.
pub fn verify_tilde_gap(w: &SignMatrix, m: usize) -> Result<TildeGapReport> {
    let n = w.rows();
    if n.saturating_mul(m) > 14 {
        return Err(Error::BudgetExceeded {
            required: 1u128 << (n * m).min(127),
            budget: 1 << 14,
        });
    }
    let tilde = tilde_reduction(w, m)?;
    let prime = kron_allones(w, m);
    let dim = n * m;
    let mut delta = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            delta.push((tilde.get(r, c) - prime.get(r, c)) as i8);
        }
    }
    // entries of the difference are in {-1,0,1}: Hadamard where w is zero
    let delta = SignMatrix::new(dim, dim, delta)?;

    let max_gap = mask_chunks(dim)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut z = vec![0i64; dim];
            let start = gray(lo);
            for i in 0..dim {
                if start >> i & 1 == 1 {
                    for (acc, val) in z.iter_mut().zip(delta.row_values(i)) {
                        *acc += val;
                    }
                }
            }
            let mut best = 0u64;
            let mut mask = start;
            for idx in lo..hi {
                let pos: i64 = z.iter().map(|&v| v.max(0)).sum();
                let neg: i64 = z.iter().map(|&v| v.min(0)).sum();
                best = best.max(pos.max(-neg) as u64);
                let flip = (idx + 1).trailing_zeros() as usize;
                if flip < dim {
                    let sign = if mask >> flip & 1 == 1 { -1 } else { 1 };
                    for (acc, val) in z.iter_mut().zip(delta.row_values(flip)) {
                        *acc += sign * val;
                    }
                    mask ^= 1 << flip;
                }
            }
            best
        })
        .reduce(|| 0, u64::max);

    let bound_sq = (n as u128).pow(4) * (m as u128).pow(3);
    Ok(TildeGapReport {
        max_gap,
        bound_sq,
        holds: (max_gap as u128).pow(2) <= bound_sq,
    })
}

/// Strict reader for the `.smx` sign-matrix format: a header line
/// `"rows cols"`, then `rows` lines of `cols` single-space-separated tokens
/// from `{-1, 0, 1}`, each line newline-terminated.
pub fn from_smx(text: &str) -> Result<SignMatrix> {
    let parse_err = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut rest = text;
    let mut take_line = |line_no: usize| -> Result<&str> {
        match rest.find('\n') {
            Some(pos) => {
                let line = &rest[..pos];
                rest = &rest[pos + 1..];
                Ok(line)
            }
            None => Err(parse_err(line_no, "missing newline")),
        }
    };
    let header = take_line(1)?;
    let mut parts = header.split(' ');
    let rows: usize = parts
        .next()
        .filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(1, "bad row count"))?;
    let cols: usize = parts
        .next()
        .filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| parse_err(1, "bad column count"))?;
    if parts.next().is_some() {
        return Err(parse_err(1, "trailing content in header"));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let line = take_line(r + 2)?;
        let tokens: Vec<&str> = line.split(' ').collect();
        if tokens.len() != cols {
            return Err(parse_err(
                r + 2,
                &format!("expected {cols} entries, got {}", tokens.len()),
            ));
        }
        for tok in tokens {
            match tok {
                "-1" => entries.push(-1),
                "0" => entries.push(0),
                "1" => entries.push(1),
                _ => return Err(parse_err(r + 2, "entries must be -1, 0, or 1")),
            }
        }
    }
    if !rest.is_empty() {
        return Err(parse_err(rows + 2, "trailing content after last row"));
    }
    SignMatrix::new(rows, cols, entries)
}

/// Writes the `.smx` text form read back by [`from_smx`].
pub fn to_smx(w: &SignMatrix) -> String {
    let mut out = format!("{} {}\n", w.rows(), w.cols());
    for r in 0..w.rows() {
        let line: Vec<String> = (0..w.cols()).map(|c| w.get(r, c).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
