//! Instance generators: the structured families the ratio bounds are tight
//! on, and seeded random matrices.
//!
//! Randomness comes exclusively from the embedded [`SplitMix64`](crate::rng)
//! stream, so identical seeds give bitwise-identical matrices on every
//! platform.

use crate::bitmat::{BitColumn, BitMatrix, gf2_combine_columns};
use crate::error::{Error, Result};
use crate::oracle::Semiring;
use crate::ratio::Ratio;
use crate::rng::SplitMix64;

/// The square tightness instance `A = L R + I_n` (sum over GF(2)).
///
/// `L` is `n x k` with disjoint blocks of `p = n/k` ones per column; `R` is
/// `k x n` and repeats each nonzero coefficient vector `q = n/(2^k - 1)`
/// times, most significant bit in row 0. The product `L R` is rank `k` and
/// within `n` of `A`, while column selection provably cannot get closer than
/// the ratio bound (up to `O(k/n)`) on this family.
#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub k: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub l: BitMatrix,
    pub r: BitMatrix,
    pub a: BitMatrix,
}

pub fn lower_bound_instance(k: usize, n: usize) -> Result<LowerBoundInstance> {
    if k == 0 || k > 20 {
        return Err(Error::IndexOutOfRange(format!("k={k} out of range 1..=20")));
    }
    let subsets = (1usize << k) - 1;
    if n == 0 || !n.is_multiple_of(k) || !n.is_multiple_of(subsets) {
        return Err(Error::Divisibility(format!(
            "need k | n and (2^k - 1) | n; got k={k}, 2^k-1={subsets}, n={n}"
        )));
    }
    let p = n / k;
    let q = n / subsets;

    let mut l = BitMatrix::zeros(n, k)?;
    for col in 0..k {
        for row in col * p..(col + 1) * p {
            l.set(row, col, true);
        }
    }

    let mut r = BitMatrix::zeros(k, n)?;
    for j in 0..n {
        let value = j / q + 1; // 1..=2^k-1
        for t in 0..k {
            // row 0 holds the most significant bit
            if value >> (k - 1 - t) & 1 == 1 {
                r.set(t, j, true);
            }
        }
    }

    let lr = l.gf2_mul(&r)?;
    let a = lr.xor(&BitMatrix::identity(n)?)?;

    // construction guarantees, checked eagerly
    assert_eq!(a.hamming_dist(&lr).unwrap(), n as u64);
    assert_eq!(lr.gf2_rank(), k);
    for c1 in 0..k {
        assert_eq!(l.column(c1).weight(), p as u64);
        for c2 in c1 + 1..k {
            assert!(l.column(c1).and(&l.column(c2)).is_zero(), "blocks overlap");
        }
    }
    if k <= 10 {
        for mask in 1..(1u64 << k) {
            let combo = gf2_combine_columns(&l, &BitColumn::from_mask(k, mask)).unwrap();
            assert!(combo.weight() >= p as u64);
        }
    }
    let mut counts = vec![0usize; subsets + 1];
    for j in 0..n {
        let mut mask = 0usize;
        for t in 0..k {
            if r.get(t, j) {
                mask |= 1 << t;
            }
        }
        counts[mask] += 1;
    }
    assert_eq!(counts[0], 0);
    assert!(counts[1..].iter().all(|&c| c == q));

    Ok(LowerBoundInstance { k, n, p, q, l, r, a })
}

/// The closed-form column-selection error on [`lower_bound_instance`]:
/// `n + q k 2^(k-1) - 2k`.
///
/// Exact once `p = n/k` exceeds `2k + 3`; for smaller `n` the true
/// exhaustive error can be lower (at `k=1, n=2` it is 1, not 2).
pub fn expected_css_error_lb(k: usize, n: usize) -> Result<u64> {
    let inst_check = {
        let subsets = (1u64 << k) - 1;
        (1..=20).contains(&k) && n > 0 && n.is_multiple_of(k) && (n as u64).is_multiple_of(subsets)
    };
    if !inst_check {
        return Err(Error::Divisibility(format!(
            "need k | n and (2^k - 1) | n; got k={k}, n={n}"
        )));
    }
    let q = n as u64 / ((1u64 << k) - 1);
    Ok(n as u64 + q * k as u64 * (1u64 << (k - 1)) - 2 * k as u64)
}

/// The complemented identity with its exact Boolean rank-`k` factorization.
///
/// Rows and columns are indexed by the `2^(k/2)` bit strings of length
/// `k/2`; entry `(alpha, beta)` is 1 iff the strings differ. Basis column
/// `(i, b)` marks the strings whose bit `i` equals `b`, coefficient row
/// `(i, b)` marks those whose bit `i` differs from `b`, and their Boolean
/// product is exactly `A`.
#[derive(Debug, Clone)]
pub struct NegIdInstance {
    pub k: usize,
    pub n: usize,
    pub a: BitMatrix,
    pub u: BitMatrix,
    pub v: BitMatrix,
}

pub fn negated_identity(k: usize) -> Result<NegIdInstance> {
    if !k.is_multiple_of(2) || !(2..=8).contains(&k) {
        return Err(Error::IndexOutOfRange(format!(
            "k must be even and in 2..=8, got {k}"
        )));
    }
    let half = k / 2;
    let n = 1usize << half;

    let mut a = BitMatrix::zeros(n, n)?;
    for alpha in 0..n {
        for beta in 0..n {
            if alpha != beta {
                a.set(alpha, beta, true);
            }
        }
    }

    // basis columns indexed by (i, b) at position 2i + b
    let mut u = BitMatrix::zeros(n, k)?;
    let mut v = BitMatrix::zeros(k, n)?;
    for i in 0..half {
        for b in 0..2usize {
            let idx = 2 * i + b;
            for alpha in 0..n {
                if alpha >> i & 1 == b {
                    u.set(alpha, idx, true);
                }
            }
            for beta in 0..n {
                if beta >> i & 1 != b {
                    v.set(idx, beta, true);
                }
            }
        }
    }

    assert_eq!(u.bool_mul(&v).unwrap(), a, "factorization must be exact");
    Ok(NegIdInstance { k, n, a, u, v })
}

fn validate_probability(p: Ratio) -> Result<()> {
    if p > Ratio::from_int(1) {
        return Err(Error::InvalidProbability(format!("{p} exceeds 1")));
    }
    Ok(())
}

fn fill_bernoulli(m: &mut BitMatrix, p: Ratio, rng: &mut SplitMix64) {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            m.set(r, c, rng.bernoulli(p));
        }
    }
}

/// Seeded i.i.d. Bernoulli matrix; entries drawn row-major, one draw each.
pub fn random_bernoulli(d: usize, n: usize, p: Ratio, seed: u64) -> Result<BitMatrix> {
    validate_probability(p)?;
    let mut m = BitMatrix::zeros(d, n)?;
    let mut rng = SplitMix64::new(seed);
    fill_bernoulli(&mut m, p, &mut rng);
    Ok(m)
}

/// A planted low-rank instance: uniform `U0`, `V0`, their product under
/// `semiring`, and independent entry flips with probability `flip_prob`.
/// Draw order: `U0` row-major, then `V0` row-major, then one flip draw per
/// entry of the product, row-major.
pub fn planted(
    d: usize,
    n: usize,
    k: usize,
    semiring: Semiring,
    flip_prob: Ratio,
    seed: u64,
) -> Result<(BitMatrix, BitMatrix, BitMatrix)> {
    validate_probability(flip_prob)?;
    if k == 0 || k > d.min(n) {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= k <= min(d, n), got k={k} for {d}x{n}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let half = Ratio::new(1, 2);
    let mut u0 = BitMatrix::zeros(d, k)?;
    fill_bernoulli(&mut u0, half, &mut rng);
    let mut v0 = BitMatrix::zeros(k, n)?;
    fill_bernoulli(&mut v0, half, &mut rng);
    let mut a = match semiring {
        Semiring::Gf2 => u0.gf2_mul(&v0)?,
        Semiring::Bool => u0.bool_mul(&v0)?,
    };
    for r in 0..d {
        for c in 0..n {
            if rng.bernoulli(flip_prob) {
                let cur = a.get(r, c);
                a.set(r, c, !cur);
            }
        }
    }
    Ok((a, u0, v0))
}
