//! Seeded verification suites.
//!
//! Each suite runs a deterministic batch of trials and reports one outcome
//! per trial; the CLI `verify` subcommand and the acceptance tests both call
//! these. Per-trial randomness comes from `SplitMix64::new(seed).derive(t)`,
//! so a (seed, parameters) pair pins every instance bit-for-bit.
//!
//! Trial dimensions are drawn as: `k` uniform from the configured set, `d`
//! uniform in `1..=dmax`, `n` uniform in `k..=nmax`, density uniform from
//! `{1/10, ..., 5/10}`, then the instance from a freshly drawn seed.

use crate::bitmat::{gf2_combine_columns, BitColumn, BitMatrix};
use crate::budget::Budget;
use crate::css_gf2::{css_exhaustive, ratio_bound, verify_thm3_consequence};
use crate::error::{Error, Result};
use crate::gcss_bool::{gcss_bound, gcss_exhaustive};
use crate::hardness::{
    check_rank1_identity, verify_block_lemma, verify_lindsey, verify_tilde_gap, SignMatrix,
};
use crate::instances::{
    expected_css_error_lb, lower_bound_instance, negated_identity, planted, random_bernoulli,
};
use crate::oracle::{opt_bool, opt_gf2, opt_rank1, rank1_best_column, Semiring};
use crate::ratio::Ratio;
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub index: u64,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: Vec<TrialOutcome>,
    /// Number of GCSS candidates validated against the construction
    /// identities during this suite (zero for suites that build none).
    pub candidates_checked: u64,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            trials: Vec::new(),
            candidates_checked: 0,
        }
    }

    fn record(&mut self, detail: String, pass: bool) {
        self.trials.push(TrialOutcome {
            index: self.trials.len() as u64,
            detail,
            pass,
        });
    }

    pub fn passed(&self) -> bool {
        self.trials.iter().all(|t| t.pass)
    }

    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.pass).count()
    }
}

/// Parameters for the randomized ratio suites.
#[derive(Debug, Clone)]
pub struct RandomSuiteParams {
    pub trials: u64,
    pub dmax: usize,
    pub nmax: usize,
    pub kset: Vec<usize>,
    pub seed: u64,
    pub budget: Budget,
}

impl RandomSuiteParams {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.dmax == 0 || self.nmax == 0 || self.kset.is_empty() {
            return Err(Error::IndexOutOfRange(
                "trials, dmax, nmax, and kset must be nonempty/nonzero".into(),
            ));
        }
        if let Some(&k) = self.kset.iter().find(|&&k| k == 0 || k > self.nmax) {
            return Err(Error::IndexOutOfRange(format!(
                "k={k} outside 1..=nmax={}",
                self.nmax
            )));
        }
        Ok(())
    }
}

fn draw_density(rng: &mut SplitMix64) -> Ratio {
    Ratio::new(1 + rng.below(5), 10)
}

fn draw_dims(rng: &mut SplitMix64, p: &RandomSuiteParams) -> (usize, usize, usize) {
    let k = p.kset[rng.below(p.kset.len() as u64) as usize];
    let d = rng.range_inclusive(1, p.dmax as u64) as usize;
    let n = rng.range_inclusive(k as u64, p.nmax as u64) as usize;
    (k, d, n)
}

/// Suite `thm1`: exhaustive CSS stays within the exact ratio bound of the
/// GF(2) oracle optimum, and never beats the oracle.
pub fn check_css_ratio(p: &RandomSuiteParams) -> Result<SuiteReport> {
    p.validate()?;
    let mut report = SuiteReport::new("thm1");
    let master = SplitMix64::new(p.seed);
    for t in 0..p.trials {
        let mut rng = master.derive(t);
        let (k, d, n) = draw_dims(&mut rng, p);
        let density = draw_density(&mut rng);
        let a = random_bernoulli(d, n, density, rng.next_u64())?;
        let sol = css_exhaustive(&a, k, p.budget)?;
        let opt = opt_gf2(&a, k, p.budget)?;
        let bound = ratio_bound(k)?;
        let pass = sol.error >= opt.error && bound.bounds(sol.error, opt.error);
        report.record(
            format!(
                "k={k} d={d} n={n} density={density} css={} opt={} bound={bound}",
                sol.error, opt.error
            ),
            pass,
        );
    }
    Ok(report)
}

/// Suite `thm2-instance`: exact checks on the tightness construction.
pub fn check_lower_bound_instance(k: usize, n: usize, budget: Budget) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("thm2-instance");
    let inst = lower_bound_instance(k, n)?;
    let formula = expected_css_error_lb(k, n)?;
    let lr = inst.l.gf2_mul(&inst.r)?;
    let witness = inst.a.hamming_dist(&lr)?;
    report.record(
        format!("construction witness |A - LR| = {witness}, n = {n}"),
        witness == n as u64,
    );

    let sol = css_exhaustive(&inst.a, k, budget)?;
    report.record(
        format!("css error {} <= closed form {formula}", sol.error),
        sol.error <= formula,
    );

    if k == 1 && n >= 6 {
        report.record(
            format!("css error {} equals closed form {formula}", sol.error),
            sol.error == formula,
        );
        let opt = opt_rank1(&inst.a)?;
        // error / opt >= 2 - 2/n, cross-multiplied exactly
        let lhs = sol.error as u128 * n as u128;
        let rhs = (2 * n as u128 - 2) * opt.error as u128;
        report.record(
            format!(
                "ratio {}/{} at least 2 - 2/{n} against oracle",
                sol.error, opt.error
            ),
            opt.error <= n as u64 && lhs >= rhs,
        );
    }

    if k >= 2 && inst.p > 2 * k + 3 {
        let dependent_floor = (inst.p as u64 * inst.q as u64).saturating_sub(n as u64);
        let floor = dependent_floor.min(formula);
        report.record(
            format!("css error {} within [{floor}, {formula}]", sol.error),
            sol.error >= floor && sol.error <= formula,
        );
        if n as u64 >= 3 * (k as u64) * ((1 << k) - 1) {
            report.record(
                format!("ratio at least 2 via optimum <= {n} witness: error {}", sol.error),
                sol.error >= 2 * n as u64,
            );
        }
    }
    Ok(report)
}

/// Suite `thm3`: some invertible change of basis makes the nearest-neighbor
/// basis no worse than `(1 + lambda_k)` times the oracle optimum.
pub fn check_induced_basis(p: &RandomSuiteParams) -> Result<SuiteReport> {
    p.validate()?;
    let mut report = SuiteReport::new("thm3");
    let master = SplitMix64::new(p.seed);
    for t in 0..p.trials {
        let mut rng = master.derive(t);
        let (k, d, n) = draw_dims(&mut rng, p);
        let density = draw_density(&mut rng);
        let a = random_bernoulli(d, n, density, rng.next_u64())?;
        let opt = opt_gf2(&a, k, p.budget)?;
        let rep = verify_thm3_consequence(&a, &opt.u, opt.error)?;
        report.record(
            format!(
                "k={k} d={d} n={n} min_induced={} opt={} bound={}",
                rep.min_induced_error, rep.opt_error, rep.bound
            ),
            rep.holds,
        );
    }
    Ok(report)
}

/// Suite `thm4`: exhaustive GCSS stays within `2^k` of the Boolean oracle
/// optimum; every candidate built is validated against the construction
/// identities.
pub fn check_gcss_ratio(p: &RandomSuiteParams) -> Result<SuiteReport> {
    p.validate()?;
    let mut report = SuiteReport::new("thm4");
    let master = SplitMix64::new(p.seed);
    for t in 0..p.trials {
        let mut rng = master.derive(t);
        let (k, d, n) = draw_dims(&mut rng, p);
        let density = draw_density(&mut rng);
        let a = random_bernoulli(d, n, density, rng.next_u64())?;
        let sol = gcss_exhaustive(&a, k, p.budget, true)?;
        report.candidates_checked += sol.candidates;
        let opt = opt_bool(&a, k, p.budget)?;
        let bound = gcss_bound(k);
        let pass = sol.error >= opt.error && sol.error <= bound * opt.error;
        report.record(
            format!(
                "k={k} d={d} n={n} density={density} gcss={} opt={} bound={bound}",
                sol.error, opt.error
            ),
            pass,
        );
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct RecoveryParams {
    pub trials_per_semiring: u64,
    pub dmax: usize,
    pub nmax: usize,
    pub kmax: usize,
    pub seed: u64,
    pub budget: Budget,
}

/// Exact-rank recovery: noiseless planted instances are solved to zero error
/// by CSS over GF(2) and by GCSS over the Boolean semiring.
pub fn check_exact_recovery(p: &RecoveryParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("exact-recovery");
    let master = SplitMix64::new(p.seed);
    for (offset, semiring) in [(0u64, Semiring::Gf2), (1u64 << 32, Semiring::Bool)] {
        for t in 0..p.trials_per_semiring {
            let mut rng = master.derive(offset + t);
            let k = rng.range_inclusive(1, p.kmax as u64) as usize;
            let d = rng.range_inclusive(k as u64, p.dmax as u64) as usize;
            let n = rng.range_inclusive(k as u64, p.nmax as u64) as usize;
            let (a, _, _) = planted(d, n, k, semiring, Ratio::zero(), rng.next_u64())?;
            let (solver, error) = match semiring {
                Semiring::Gf2 => ("css", css_exhaustive(&a, k, p.budget)?.error),
                Semiring::Bool => {
                    let sol = gcss_exhaustive(&a, k, p.budget, true)?;
                    report.candidates_checked += sol.candidates;
                    ("gcss", sol.error)
                }
            };
            report.record(
                format!("{} k={k} d={d} n={n} {solver} error={error}", semiring.name()),
                error == 0,
            );
        }
    }
    Ok(report)
}

/// The complemented-identity family: the published factorization is exact at
/// every even `k`, and at `k = 2` the Boolean rank is genuinely above 1.
pub fn check_negated_identity(kset: &[usize], budget: Budget) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("negid");
    for &k in kset {
        let inst = negated_identity(k)?;
        let product = inst.u.bool_mul(&inst.v)?;
        report.record(
            format!("k={k} n={} exact Boolean factorization", inst.n),
            product == inst.a,
        );
        if k == 2 {
            let r1 = opt_bool(&inst.a, 1, budget)?;
            report.record(
                format!("k=2 rank-1 error {} is positive", r1.error),
                r1.error > 0,
            );
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct HardnessParams {
    pub nset: Vec<usize>,
    pub mset: Vec<usize>,
    pub block_trials: u64,
    pub gap_trials: u64,
    pub identity_trials: u64,
    pub lindsey_sizes: Vec<usize>,
    pub seed: u64,
}

fn random_sign_matrix(n: usize, rng: &mut SplitMix64) -> SignMatrix {
    let entries: Vec<i8> = (0..n * n).map(|_| rng.below(3) as i8 - 1).collect();
    SignMatrix::new(n, n, entries).expect("entries in range")
}

/// Suite `hardness-lemmas`: block-lemma equality, the Lindsey bound, the
/// Hadamard replacement gap, and the rank-1 objective identity, all in exact
/// integer arithmetic.
pub fn check_hardness_lemmas(p: &HardnessParams) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("hardness-lemmas");
    let master = SplitMix64::new(p.seed);

    let pairs: Vec<(usize, usize)> = p
        .nset
        .iter()
        .flat_map(|&n| p.mset.iter().map(move |&m| (n, m)))
        .filter(|&(n, m)| n * m <= 12)
        .collect();
    if pairs.is_empty() {
        return Err(Error::IndexOutOfRange(
            "no (n, m) pair with n*m <= 12".into(),
        ));
    }
    for t in 0..p.block_trials {
        let mut rng = master.derive(t);
        let (n, m) = pairs[rng.below(pairs.len() as u64) as usize];
        let w = random_sign_matrix(n, &mut rng);
        let rep = verify_block_lemma(&w, m)?;
        report.record(
            format!("block lemma n={n} m={m}: {} = {}", rep.lhs, rep.rhs),
            rep.equal,
        );
    }

    for &m in &p.lindsey_sizes {
        let rep = verify_lindsey(m)?;
        report.record(
            format!("lindsey m={m}: max {} squared <= {}", rep.max_abs, rep.m_cubed),
            rep.holds,
        );
    }

    for t in 0..p.gap_trials {
        let mut rng = master.derive((1 << 32) + t);
        let m = p.mset[rng.below(p.mset.len() as u64) as usize];
        let w = random_sign_matrix(2, &mut rng);
        let rep = verify_tilde_gap(&w, m)?;
        report.record(
            format!(
                "tilde gap n=2 m={m}: gap {} squared <= {}",
                rep.max_gap, rep.bound_sq
            ),
            rep.holds,
        );
    }

    for t in 0..p.identity_trials {
        let mut rng = master.derive((2 << 32) + t);
        let d = rng.range_inclusive(1, 8) as usize;
        let n = rng.range_inclusive(1, 8) as usize;
        let a = random_bernoulli(d, n, Ratio::new(1, 2), rng.next_u64())?;
        let u_bits: Vec<u8> = (0..d).map(|_| rng.below(2) as u8).collect();
        let v_bits: Vec<u8> = (0..n).map(|_| rng.below(2) as u8).collect();
        let u = BitColumn::from_bits(&u_bits)?;
        let v = BitColumn::from_bits(&v_bits)?;
        let rep = check_rank1_identity(&a, &u, &v)?;
        report.record(
            format!("rank-1 identity d={d} n={n}: {} = {}", rep.lhs, rep.rhs),
            rep.equal,
        );
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct Rank1Params {
    pub trials: u64,
    pub equivalence_trials: u64,
    pub dmax: usize,
    pub nmax: usize,
    pub seed: u64,
    pub budget: Budget,
}

/// Suite `rank1-2approx`: the best-column baseline is within a factor 2 of
/// the rank-1 optimum, and the three rank-1 solvers agree.
pub fn check_rank1_two_approx(p: &Rank1Params) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("rank1-2approx");
    let master = SplitMix64::new(p.seed);
    for t in 0..p.trials {
        let mut rng = master.derive(t);
        let d = rng.range_inclusive(1, p.dmax as u64) as usize;
        let n = rng.range_inclusive(1, p.nmax as u64) as usize;
        let density = draw_density(&mut rng);
        let a = random_bernoulli(d, n, density, rng.next_u64())?;
        let (col, _, col_error) = rank1_best_column(&a);
        let opt = opt_rank1(&a)?;
        let pass = col_error >= opt.error && col_error <= 2 * opt.error;
        report.record(
            format!(
                "d={d} n={n} best column {col} error {col_error}, opt {}",
                opt.error
            ),
            pass,
        );
    }
    for t in 0..p.equivalence_trials {
        let mut rng = master.derive((1 << 32) + t);
        let d = rng.range_inclusive(1, 8) as usize;
        let n = rng.range_inclusive(1, 8) as usize;
        let density = draw_density(&mut rng);
        let a = random_bernoulli(d, n, density, rng.next_u64())?;
        let r1 = opt_rank1(&a)?.error;
        let gf2 = opt_gf2(&a, 1, p.budget)?.error;
        let boolean = opt_bool(&a, 1, p.budget)?.error;
        report.record(
            format!("d={d} n={n} rank1={r1} gf2={gf2} boolean={boolean}"),
            r1 == gf2 && r1 == boolean,
        );
    }
    Ok(report)
}

fn permuted(a: &BitMatrix, rows: &[usize], cols: &[usize]) -> BitMatrix {
    let mut out = BitMatrix::zeros(a.rows(), a.cols()).expect("nonzero dims");
    for (r, &target_row) in rows.iter().enumerate() {
        for (c, &target_col) in cols.iter().enumerate() {
            if a.get(r, c) {
                out.set(target_row, target_col, true);
            }
        }
    }
    out
}

fn random_permutation(len: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    perm
}

/// Structural invariants of the bit-matrix algebra and the coefficient
/// solvers, each checked on `cases` random instances.
pub fn check_structural_invariants(seed: u64, cases: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("structural");
    let master = SplitMix64::new(seed);
    let half = Ratio::new(1, 2);

    let mut violations = 0u64;
    for t in 0..cases {
        let mut rng = master.derive(t);
        let (a, b, c, e) = (
            rng.range_inclusive(1, 6) as usize,
            rng.range_inclusive(1, 6) as usize,
            rng.range_inclusive(1, 6) as usize,
            rng.range_inclusive(1, 6) as usize,
        );
        let x = random_bernoulli(a, b, half, rng.next_u64())?;
        let y = random_bernoulli(b, c, half, rng.next_u64())?;
        let z = random_bernoulli(c, e, half, rng.next_u64())?;
        if x.gf2_mul(&y)?.gf2_mul(&z)? != x.gf2_mul(&y.gf2_mul(&z)?)? {
            violations += 1;
        }
        if x.bool_mul(&y)?.bool_mul(&z)? != x.bool_mul(&y.bool_mul(&z)?)? {
            violations += 1;
        }
    }
    report.record(
        format!("product associativity over both semirings, {cases} cases"),
        violations == 0,
    );

    violations = 0;
    for t in 0..cases {
        let mut rng = master.derive((1 << 32) + t);
        let d = rng.range_inclusive(1, 6) as usize;
        let m = rng.range_inclusive(1, 6) as usize;
        let a = random_bernoulli(d, m, half, rng.next_u64())?;
        let b = random_bernoulli(m, rng.range_inclusive(1, 6) as usize, half, rng.next_u64())?;
        let before = a.bool_mul(&b)?;
        let mut grown = a.clone();
        grown.set(
            rng.below(d as u64) as usize,
            rng.below(m as u64) as usize,
            true,
        );
        let after = grown.bool_mul(&b)?;
        for r in 0..before.rows() {
            for c in 0..before.cols() {
                if before.get(r, c) && !after.get(r, c) {
                    violations += 1;
                }
            }
        }
    }
    report.record(
        format!("Boolean product monotone under adding ones, {cases} cases"),
        violations == 0,
    );

    violations = 0;
    for t in 0..cases {
        let mut rng = master.derive((2 << 32) + t);
        let d = rng.range_inclusive(1, 6) as usize;
        let n = rng.range_inclusive(1, 6) as usize;
        let x = random_bernoulli(d, n, half, rng.next_u64())?;
        let y = random_bernoulli(d, n, half, rng.next_u64())?;
        let z = random_bernoulli(d, n, half, rng.next_u64())?;
        if x.hamming_dist(&y)? != y.hamming_dist(&x)? {
            violations += 1;
        }
        if x.hamming_dist(&z)? > x.hamming_dist(&y)? + y.hamming_dist(&z)? {
            violations += 1;
        }
        if x.hamming_dist(&x)? != 0 {
            violations += 1;
        }
    }
    report.record(
        format!("Hamming distance is a metric, {cases} cases"),
        violations == 0,
    );

    violations = 0;
    for t in 0..cases {
        let mut rng = master.derive((3 << 32) + t);
        let d = rng.range_inclusive(1, 7) as usize;
        let n = rng.range_inclusive(1, 7) as usize;
        let a = random_bernoulli(d, n, half, rng.next_u64())?;
        let rank = a.gf2_rank();
        if rank > d.min(n) {
            violations += 1;
        }
        let rp = random_permutation(d, &mut rng);
        let cp = random_permutation(n, &mut rng);
        if permuted(&a, &rp, &cp).gf2_rank() != rank {
            violations += 1;
        }
    }
    report.record(
        format!("rank bounded by min dimension and permutation invariant, {cases} cases"),
        violations == 0,
    );

    violations = 0;
    for t in 0..cases {
        let mut rng = master.derive((4 << 32) + t);
        let d = rng.range_inclusive(1, 6) as usize;
        let k = rng.range_inclusive(1, 4) as usize;
        let p = random_bernoulli(d, k, half, rng.next_u64())?;
        for c1 in 0..(1u64 << k) {
            for c2 in 0..(1u64 << k) {
                let lhs = gf2_combine_columns(&p, &BitColumn::from_mask(k, c1 ^ c2))?;
                let rhs = gf2_combine_columns(&p, &BitColumn::from_mask(k, c1))?
                    .xor(&gf2_combine_columns(&p, &BitColumn::from_mask(k, c2))?);
                if lhs != rhs {
                    violations += 1;
                }
            }
        }
    }
    report.record(
        format!("column combination is linear over GF(2), {cases} cases"),
        violations == 0,
    );

    violations = 0;
    for t in 0..cases {
        let mut rng = master.derive((5 << 32) + t);
        let d = rng.range_inclusive(1, 6) as usize;
        let n = rng.range_inclusive(1, 6) as usize;
        let k = rng.range_inclusive(1, 3) as usize;
        let basis = random_bernoulli(d, k, half, rng.next_u64())?;
        let a = random_bernoulli(d, n, half, rng.next_u64())?;
        let (q, total) = crate::css_gf2::gf2_best_coefficients(&basis, &a)?;
        let mut recomputed = 0u64;
        for j in 0..n {
            let target = a.column(j);
            let mut chosen_mask = 0u64;
            for i in 0..k {
                if q.get(i, j) {
                    chosen_mask |= 1 << i;
                }
            }
            let chosen_cost =
                gf2_combine_columns(&basis, &BitColumn::from_mask(k, chosen_mask))?.hamming(&target);
            recomputed += chosen_cost;
            for mask in 0..(1u64 << k) {
                let cost =
                    gf2_combine_columns(&basis, &BitColumn::from_mask(k, mask))?.hamming(&target);
                if cost < chosen_cost || (cost == chosen_cost && mask < chosen_mask) {
                    violations += 1;
                }
            }
        }
        if recomputed != total {
            violations += 1;
        }
    }
    report.record(
        format!("coefficient choices are per-column optimal with pinned ties, {cases} cases"),
        violations == 0,
    );

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_params(trials: u64) -> RandomSuiteParams {
        RandomSuiteParams {
            trials,
            dmax: 5,
            nmax: 6,
            kset: vec![1, 2],
            seed: 123,
            budget: Budget::default(),
        }
    }

    #[test]
    fn css_ratio_small_run() {
        let report = check_css_ratio(&quick_params(10)).unwrap();
        assert_eq!(report.trials.len(), 10);
        assert!(report.passed(), "{:?}", report.trials);
    }

    #[test]
    fn suites_are_deterministic() {
        let a = check_css_ratio(&quick_params(5)).unwrap();
        let b = check_css_ratio(&quick_params(5)).unwrap();
        let details_a: Vec<&str> = a.trials.iter().map(|t| t.detail.as_str()).collect();
        let details_b: Vec<&str> = b.trials.iter().map(|t| t.detail.as_str()).collect();
        assert_eq!(details_a, details_b);
    }

    #[test]
    fn lower_bound_suite_k1_n6() {
        let report = check_lower_bound_instance(1, 6, Budget::default()).unwrap();
        assert!(report.passed(), "{:?}", report.trials);
    }

    #[test]
    fn gcss_suite_validates_candidates() {
        let mut p = quick_params(3);
        p.dmax = 4;
        p.nmax = 4;
        let report = check_gcss_ratio(&p).unwrap();
        assert!(report.passed(), "{:?}", report.trials);
        assert!(report.candidates_checked > 0);
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = quick_params(5);
        p.kset = vec![9];
        assert!(check_css_ratio(&p).is_err());
    }

    #[test]
    fn structural_small_run() {
        let report = check_structural_invariants(7, 25).unwrap();
        assert!(report.passed(), "{:?}", report.trials);
    }
}
