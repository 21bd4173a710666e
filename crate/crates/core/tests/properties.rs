//! Property tests against naive reference implementations.
//!
//! The references here recompute everything entry by entry on `Vec<Vec<bool>>`
//! (or by full enumeration), independent of the packed kernels and the
//! Gray-code scans they check.

use proptest::prelude::*;

use binlra_core::bitmat::{from_bmx, gf2_combine_columns, to_bmx, BitColumn, BitMatrix};
use binlra_core::budget::Budget;
use binlra_core::css_gf2::{css_exhaustive, css_subset_error, gf2_best_coefficients};
use binlra_core::gcss_bool::{bool_best_coefficients, build_candidate};
use binlra_core::hardness::check_rank1_identity;
use binlra_core::oracle::{opt_bool, opt_gf2, opt_rank1};

#[derive(Debug, Clone)]
struct Dense {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Dense {
    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.cols + c]
    }

    fn to_matrix(&self) -> BitMatrix {
        let entries: Vec<u8> = self.bits.iter().map(|&b| b as u8).collect();
        BitMatrix::make(self.rows, self.cols, &entries).unwrap()
    }
}

fn dense(rows: impl Strategy<Value = usize>, cols: impl Strategy<Value = usize>) -> impl Strategy<Value = Dense> {
    (rows, cols).prop_flat_map(|(rows, cols)| {
        proptest::collection::vec(any::<bool>(), rows * cols)
            .prop_map(move |bits| Dense { rows, cols, bits })
    })
}

fn naive_mul(a: &Dense, b: &Dense, boolean: bool) -> Dense {
    let mut bits = vec![false; a.rows * b.cols];
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = false;
            for t in 0..a.cols {
                let term = a.get(i, t) && b.get(t, j);
                acc = if boolean { acc || term } else { acc ^ term };
            }
            bits[i * b.cols + j] = acc;
        }
    }
    Dense {
        rows: a.rows,
        cols: b.cols,
        bits,
    }
}

fn naive_hamming(a: &Dense, b: &Dense) -> u64 {
    a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count() as u64
}

/// Rank via the size of the row span: the span of the rows has exactly
/// 2^rank distinct vectors.
fn naive_rank(a: &Dense) -> usize {
    let mut span = std::collections::HashSet::new();
    let rows: Vec<u64> = (0..a.rows)
        .map(|r| {
            (0..a.cols)
                .map(|c| (a.get(r, c) as u64) << c)
                .fold(0, |x, y| x | y)
        })
        .collect();
    for mask in 0..(1u64 << a.rows) {
        let mut acc = 0u64;
        for (r, row) in rows.iter().enumerate() {
            if mask >> r & 1 == 1 {
                acc ^= row;
            }
        }
        span.insert(acc);
    }
    span.len().ilog2() as usize
}

/// Best coefficient cost for one column by direct enumeration of all masks.
fn naive_best_cost(basis: &Dense, target: &[bool], boolean: bool) -> u64 {
    let k = basis.cols;
    let mut best = u64::MAX;
    for mask in 0..(1u64 << k) {
        let mut cost = 0u64;
        for (r, &want) in target.iter().enumerate().take(basis.rows) {
            let mut acc = false;
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    let term = basis.get(r, i);
                    acc = if boolean { acc || term } else { acc ^ term };
                }
            }
            if acc != want {
                cost += 1;
            }
        }
        best = best.min(cost);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_match_naive(
        a in dense(1usize..6, 1usize..6),
        b_bits in proptest::collection::vec(any::<bool>(), 0..36),
    ) {
        let b_cols = 1 + b_bits.len() % 5;
        let b = Dense {
            rows: a.cols,
            cols: b_cols,
            bits: {
                let mut bits = b_bits;
                bits.resize(a.cols * b_cols, false);
                bits
            },
        };
        let (pa, pb) = (a.to_matrix(), b.to_matrix());
        prop_assert_eq!(pa.gf2_mul(&pb).unwrap(), naive_mul(&a, &b, false).to_matrix());
        prop_assert_eq!(pa.bool_mul(&pb).unwrap(), naive_mul(&a, &b, true).to_matrix());
    }

    #[test]
    fn hamming_matches_naive(a in dense(1usize..7, 1usize..70), flips in proptest::collection::vec(any::<bool>(), 0..100)) {
        let mut b = a.clone();
        for (i, flip) in flips.iter().enumerate() {
            if *flip && i < b.bits.len() {
                b.bits[i] = !b.bits[i];
            }
        }
        prop_assert_eq!(
            a.to_matrix().hamming_dist(&b.to_matrix()).unwrap(),
            naive_hamming(&a, &b)
        );
    }

    #[test]
    fn rank_matches_span_size(a in dense(1usize..7, 1usize..7)) {
        prop_assert_eq!(a.to_matrix().gf2_rank(), naive_rank(&a));
    }

    #[test]
    fn gf2_coefficients_are_optimal(
        basis in dense(1usize..6, 1usize..4),
        target_bits in proptest::collection::vec(any::<bool>(), 0..30),
    ) {
        let n = 1 + target_bits.len() % 4;
        let a = Dense {
            rows: basis.rows,
            cols: n,
            bits: {
                let mut bits = target_bits;
                bits.resize(basis.rows * n, false);
                bits
            },
        };
        let (_, err) = gf2_best_coefficients(&basis.to_matrix(), &a.to_matrix()).unwrap();
        let expect: u64 = (0..n)
            .map(|j| {
                let col: Vec<bool> = (0..a.rows).map(|r| a.get(r, j)).collect();
                naive_best_cost(&basis, &col, false)
            })
            .sum();
        prop_assert_eq!(err, expect);
    }

    #[test]
    fn bool_coefficients_are_optimal(
        basis in dense(1usize..6, 1usize..4),
        target_bits in proptest::collection::vec(any::<bool>(), 0..30),
    ) {
        let n = 1 + target_bits.len() % 4;
        let a = Dense {
            rows: basis.rows,
            cols: n,
            bits: {
                let mut bits = target_bits;
                bits.resize(basis.rows * n, false);
                bits
            },
        };
        let (_, err) = bool_best_coefficients(&basis.to_matrix(), &a.to_matrix()).unwrap();
        let expect: u64 = (0..n)
            .map(|j| {
                let col: Vec<bool> = (0..a.rows).map(|r| a.get(r, j)).collect();
                naive_best_cost(&basis, &col, true)
            })
            .sum();
        prop_assert_eq!(err, expect);
    }

    #[test]
    fn css_error_non_increasing_in_k(a in dense(2usize..6, 2usize..6)) {
        let m = a.to_matrix();
        let budget = Budget::default();
        let mut last = u64::MAX;
        for k in 1..=m.cols().min(3) {
            let sol = css_exhaustive(&m, k, budget).unwrap();
            prop_assert!(sol.error <= last);
            last = sol.error;
        }
    }

    #[test]
    fn subset_order_does_not_change_error(a in dense(2usize..6, 3usize..6)) {
        let m = a.to_matrix();
        let (_, forward) = css_subset_error(&m, &[0, 2]).unwrap();
        let (_, backward) = css_subset_error(&m, &[2, 0]).unwrap();
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn solvers_dominate_oracles(a in dense(1usize..5, 1usize..5)) {
        let m = a.to_matrix();
        let budget = Budget::default();
        let k = 1 + a.cols % 2;
        if k <= m.cols() {
            let css = css_exhaustive(&m, k, budget).unwrap().error;
            let opt = opt_gf2(&m, k, budget).unwrap().error;
            prop_assert!(css >= opt);
        }
    }

    #[test]
    fn zero_opt_error_characterizes_low_rank(a in dense(1usize..5, 1usize..5)) {
        let m = a.to_matrix();
        let budget = Budget::default();
        for k in 1..=2usize {
            let opt = opt_gf2(&m, k, budget).unwrap();
            prop_assert_eq!(opt.error == 0, m.gf2_rank() <= k);
        }
    }

    #[test]
    fn rank1_solvers_agree(a in dense(1usize..5, 1usize..5)) {
        let m = a.to_matrix();
        let budget = Budget::default();
        let r1 = opt_rank1(&m).unwrap().error;
        prop_assert_eq!(r1, opt_gf2(&m, 1, budget).unwrap().error);
        prop_assert_eq!(r1, opt_bool(&m, 1, budget).unwrap().error);
    }

    #[test]
    fn rank1_identity_is_exact_algebra(
        a in dense(1usize..6, 1usize..6),
        u_bits in proptest::collection::vec(any::<bool>(), 6),
        v_bits in proptest::collection::vec(any::<bool>(), 6),
    ) {
        let m = a.to_matrix();
        let u = BitColumn::from_bits(&u_bits[..a.rows].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
        let v = BitColumn::from_bits(&v_bits[..a.cols].iter().map(|&b| b as u8).collect::<Vec<_>>()).unwrap();
        prop_assert!(check_rank1_identity(&m, &u, &v).unwrap().equal);
    }

    #[test]
    fn combine_is_linear(p in dense(1usize..6, 1usize..5), c1 in any::<u64>(), c2 in any::<u64>()) {
        let m = p.to_matrix();
        let k = m.cols();
        let mask = |c: u64| c & ((1 << k) - 1);
        let (c1, c2) = (mask(c1), mask(c2));
        let lhs = gf2_combine_columns(&m, &BitColumn::from_mask(k, c1 ^ c2)).unwrap();
        let rhs = gf2_combine_columns(&m, &BitColumn::from_mask(k, c1)).unwrap()
            .xor(&gf2_combine_columns(&m, &BitColumn::from_mask(k, c2)).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bmx_round_trips(a in dense(1usize..9, 1usize..80)) {
        let m = a.to_matrix();
        prop_assert_eq!(from_bmx(&to_bmx(&m)).unwrap(), m);
    }

    #[test]
    fn gcss_candidates_validate(
        a in dense(1usize..5, 1usize..5),
        sel in proptest::collection::vec(any::<usize>(), 3),
        perm_seed in 0usize..6,
    ) {
        let m = a.to_matrix();
        let selection: Vec<usize> = sel.iter().map(|s| s % m.cols()).collect();
        let perms: [[u32; 3]; 6] = [
            [1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1],
        ];
        let cand = build_candidate(&m, 2, &selection, &perms[perm_seed]).unwrap();
        prop_assert!(cand.validate().is_ok());
    }
}
