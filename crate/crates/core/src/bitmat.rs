//! Bit-packed binary matrices and columns with GF(2) and Boolean kernels.
//!
//! A [`BitMatrix`] stores one logical bit per entry, row-major, in 64-bit
//! words. Padding bits past the last column of each packed row are always
//! zero (the canonical form); that is what makes popcount-based Hamming
//! distances exact. Every operation in this crate both relies on and
//! preserves canonical form, and debug builds assert it on every output.
//!
//! Matrices are immutable after construction as far as the algorithms are
//! concerned; all kernels are pure functions, so values can be shared freely
//! across worker threads.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Mask of the valid bits in the last word of a `bits`-wide row.
fn tail_mask(bits: usize) -> u64 {
    let rem = bits % WORD_BITS;
    if rem == 0 {
        u64::MAX
    } else {
        (1u64 << rem) - 1
    }
}

/// A packed bit vector; used for matrix columns and coefficient vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitColumn {
    len: usize,
    words: Vec<u64>,
}

impl BitColumn {
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "empty column");
        BitColumn {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        assert!(len >= 1, "empty column");
        let mut c = BitColumn {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        *c.words.last_mut().unwrap() &= tail_mask(len);
        c
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::ZeroDimension { rows: 0, cols: 1 });
        }
        let mut c = BitColumn::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => c.set(i, true),
                v => return Err(Error::ValueOutOfRange(format!("entry {i} is {v}"))),
            }
        }
        Ok(c)
    }

    /// Column of length `len <= 64` whose bit `i` is bit `i` of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!((1..=64).contains(&len), "mask columns are at most 64 bits");
        assert!(len == 64 || mask < (1u64 << len), "mask wider than column");
        BitColumn {
            len,
            words: vec![mask],
        }
    }

    /// Inverse of [`from_mask`](Self::from_mask) for short columns.
    pub fn as_mask(&self) -> u64 {
        assert!(self.len <= 64);
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        if bit {
            *w |= 1u64 << (i % WORD_BITS);
        } else {
            *w &= !(1u64 << (i % WORD_BITS));
        }
    }

    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of positions where the two columns differ.
    ///
    /// # Panics
    ///
    /// Panics on length mismatch; the matrix-level entry points validate.
    pub fn hamming(&self, other: &BitColumn) -> u64 {
        assert_eq!(self.len, other.len, "column length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum()
    }

    pub fn xor_assign(&mut self, other: &BitColumn) {
        assert_eq!(self.len, other.len, "column length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitColumn) {
        assert_eq!(self.len, other.len, "column length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitColumn) {
        assert_eq!(self.len, other.len, "column length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    /// Removes from `self` every bit set in `other` (set difference).
    pub fn diff_assign(&mut self, other: &BitColumn) {
        assert_eq!(self.len, other.len, "column length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn xor(&self, other: &BitColumn) -> BitColumn {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn or(&self, other: &BitColumn) -> BitColumn {
        let mut out = self.clone();
        out.or_assign(other);
        out
    }

    pub fn and(&self, other: &BitColumn) -> BitColumn {
        let mut out = self.clone();
        out.and_assign(other);
        out
    }

    pub fn diff(&self, other: &BitColumn) -> BitColumn {
        let mut out = self.clone();
        out.diff_assign(other);
        out
    }

    pub fn is_subset_of(&self, other: &BitColumn) -> bool {
        assert_eq!(self.len, other.len, "column length mismatch");
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn is_canonical(&self) -> bool {
        *self.words.last().unwrap() & !tail_mask(self.len) == 0
    }
}

impl fmt::Display for BitColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A `rows x cols` binary matrix, bit-packed row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension { rows, cols });
        }
        (rows as u64)
            .checked_mul(cols as u64)
            .ok_or_else(|| Error::ValueOutOfRange("entry count overflows u64".into()))?;
        let words_per_row = words_for(cols);
        Ok(BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        })
    }

    pub fn ones(rows: usize, cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        let mask = tail_mask(cols);
        for r in 0..rows {
            let row = m.row_words_mut(r);
            for w in row.iter_mut() {
                *w = u64::MAX;
            }
            *row.last_mut().unwrap() = mask;
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from `rows * cols` entries in row-major order.
    pub fn make(rows: usize, cols: usize, entries: &[u8]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for (idx, &v) in entries.iter().enumerate() {
            match v {
                0 => {}
                1 => m.set(idx / cols, idx % cols, true),
                v => {
                    return Err(Error::ValueOutOfRange(format!(
                        "entry at flat index {idx} is {v}, expected 0 or 1"
                    )))
                }
            }
        }
        Ok(m)
    }

    pub fn from_columns(cols: &[BitColumn]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::ZeroDimension { rows: 0, cols: 0 });
        }
        let len = cols[0].len();
        if cols.iter().any(|c| c.len() != len) {
            return Err(Error::DimensionMismatch("ragged column lengths".into()));
        }
        let mut m = Self::zeros(len, cols.len())?;
        for (j, c) in cols.iter().enumerate() {
            for i in 0..len {
                if c.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.data[r * self.words_per_row + c / WORD_BITS] >> (c % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        if bit {
            *w |= 1u64 << (c % WORD_BITS);
        } else {
            *w &= !(1u64 << (c % WORD_BITS));
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn column(&self, j: usize) -> BitColumn {
        assert!(j < self.cols, "column index out of range");
        let mut c = BitColumn::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, j) {
                c.set(r, true);
            }
        }
        c
    }

    /// All columns, extracted once; column-heavy algorithms start here.
    pub fn columns(&self) -> Vec<BitColumn> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, r: usize) -> BitColumn {
        assert!(r < self.rows, "row index out of range");
        let mut c = BitColumn {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        };
        *c.words.last_mut().unwrap() &= tail_mask(self.cols);
        c
    }

    pub fn transposed(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows).expect("nonzero dims");
        for r in 0..self.rows {
            for (w_idx, &word) in self.row_words(r).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let c = w_idx * WORD_BITS + w.trailing_zeros() as usize;
                    t.set(c, r, true);
                    w &= w - 1;
                }
            }
        }
        t
    }

    pub fn count_ones(&self) -> u64 {
        self.data.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Entrywise XOR.
    pub fn xor(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        debug_assert!(out.is_canonical());
        Ok(out)
    }

    /// Matrix product over GF(2): entry `(i,j)` is the XOR over `t` of
    /// `self(i,t) & rhs(t,j)`.
    pub fn gf2_mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        self.mul_impl(rhs, false)
    }

    /// Matrix product over the Boolean semiring: entry `(i,j)` is the OR over
    /// `t` of `self(i,t) & rhs(t,j)`.
    pub fn bool_mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        self.mul_impl(rhs, true)
    }

    fn mul_impl(&self, rhs: &BitMatrix, boolean: bool) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "inner dimensions: {}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols)?;
        for i in 0..self.rows {
            // Accumulate rows of rhs selected by the set bits of row i.
            let mut acc = vec![0u64; out.words_per_row];
            for (w_idx, &word) in self.row_words(i).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let t = w_idx * WORD_BITS + w.trailing_zeros() as usize;
                    let rhs_row = rhs.row_words(t);
                    if boolean {
                        for (a, b) in acc.iter_mut().zip(rhs_row) {
                            *a |= b;
                        }
                    } else {
                        for (a, b) in acc.iter_mut().zip(rhs_row) {
                            *a ^= b;
                        }
                    }
                    w &= w - 1;
                }
            }
            out.row_words_mut(i).copy_from_slice(&acc);
        }
        debug_assert!(out.is_canonical());
        Ok(out)
    }

    /// Number of entries where the two matrices differ. For binary matrices
    /// this is exactly the squared Frobenius distance.
    pub fn hamming_dist(&self, other: &BitMatrix) -> Result<u64> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    /// Rank over GF(2) by row reduction on the packed rows.
    pub fn gf2_rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|r| self.row_words(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (w, b) = (col / WORD_BITS, col % WORD_BITS);
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row[w] >> b & 1 == 1 {
                    for (a, p) in row.iter_mut().zip(&pivot_row) {
                        *a ^= p;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Inverse over GF(2) for square matrices; `Err(Singular)` if rank-deficient.
    pub fn gf2_inverse(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "inverse of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work: Vec<Vec<u64>> = (0..n).map(|r| self.row_words(r).to_vec()).collect();
        let mut inv = BitMatrix::identity(n)?;
        let mut inv_rows: Vec<Vec<u64>> = (0..n).map(|r| inv.row_words(r).to_vec()).collect();
        for col in 0..n {
            let (w, b) = (col / WORD_BITS, col % WORD_BITS);
            let Some(pivot) = (col..n).find(|&r| work[r][w] >> b & 1 == 1) else {
                return Err(Error::Singular);
            };
            work.swap(col, pivot);
            inv_rows.swap(col, pivot);
            let pivot_row = work[col].clone();
            let pivot_inv = inv_rows[col].clone();
            for r in 0..n {
                if r != col && work[r][w] >> b & 1 == 1 {
                    for (a, p) in work[r].iter_mut().zip(&pivot_row) {
                        *a ^= p;
                    }
                    for (a, p) in inv_rows[r].iter_mut().zip(&pivot_inv) {
                        *a ^= p;
                    }
                }
            }
        }
        for (r, row) in inv_rows.into_iter().enumerate() {
            inv.row_words_mut(r).copy_from_slice(&row);
        }
        debug_assert!(inv.is_canonical());
        Ok(inv)
    }

    pub fn is_canonical(&self) -> bool {
        let mask = tail_mask(self.cols);
        (0..self.rows).all(|r| self.row_words(r).last().unwrap() & !mask == 0)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            if r + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

/// XOR of the columns of `basis` selected by the set bits of `coeffs`; the
/// GF(2) linear combination. Zero coefficients give the zero column.
pub fn gf2_combine_columns(basis: &BitMatrix, coeffs: &BitColumn) -> Result<BitColumn> {
    combine_impl(basis, coeffs, false)
}

/// OR of the columns of `basis` selected by the set bits of `coeffs`; the
/// Boolean union. Zero coefficients give the zero column.
pub fn bool_union_columns(basis: &BitMatrix, coeffs: &BitColumn) -> Result<BitColumn> {
    combine_impl(basis, coeffs, true)
}

fn combine_impl(basis: &BitMatrix, coeffs: &BitColumn, boolean: bool) -> Result<BitColumn> {
    if coeffs.len() != basis.cols() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a matrix with {} columns",
            coeffs.len(),
            basis.cols()
        )));
    }
    let mut acc = BitColumn::zeros(basis.rows());
    for j in 0..basis.cols() {
        if coeffs.get(j) {
            let col = basis.column(j);
            if boolean {
                acc.or_assign(&col);
            } else {
                acc.xor_assign(&col);
            }
        }
    }
    debug_assert!(acc.is_canonical());
    Ok(acc)
}

/// Outer product `u * v^T` as a binary matrix.
pub fn outer(u: &BitColumn, v: &BitColumn) -> BitMatrix {
    let mut m = BitMatrix::zeros(u.len(), v.len()).expect("nonzero dims");
    for i in 0..u.len() {
        if u.get(i) {
            for j in 0..v.len() {
                if v.get(j) {
                    m.set(i, j, true);
                }
            }
        }
    }
    m
}

/// Strict reader for the `.bmx` text format: a header line `"rows cols"`,
/// then exactly `rows` lines of exactly `cols` characters from `{0,1}`, each
/// newline-terminated, with no other bytes anywhere.
pub fn from_bmx(text: &str) -> Result<BitMatrix> {
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
    let mut m = BitMatrix::zeros(rows, cols)?;
    for r in 0..rows {
        let line = take_line(r + 2)?;
        if line.len() != cols {
            return Err(parse_err(
                r + 2,
                &format!("expected {cols} characters, got {}", line.len()),
            ));
        }
        for (c, byte) in line.bytes().enumerate() {
            match byte {
                b'0' => {}
                b'1' => m.set(r, c, true),
                _ => return Err(parse_err(r + 2, "entries must be 0 or 1")),
            }
        }
    }
    if !rest.is_empty() {
        return Err(parse_err(rows + 2, "trailing content after last row"));
    }
    Ok(m)
}

/// Writes the `.bmx` text form read back by [`from_bmx`].
pub fn to_bmx(m: &BitMatrix) -> String {
    let mut out = String::with_capacity((m.cols() + 1) * (m.rows() + 1));
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.push(if m.get(r, c) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}
