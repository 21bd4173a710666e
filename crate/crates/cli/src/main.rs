//! `binlra`: generators, solvers, and theorem verifiers for binary low-rank
//! approximation, with machine-readable JSON reports.
//!
//! Exit codes are a stable contract: 0 success, 2 verification failure,
//! 3 budget refusal, 4 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use binlra_core::bitmat::{from_bmx, to_bmx, BitMatrix};
use binlra_core::budget::{Budget, DEFAULT_BUDGET};
use binlra_core::checks::{
    check_css_ratio, check_gcss_ratio, check_hardness_lemmas, check_induced_basis,
    check_lower_bound_instance, check_rank1_two_approx, HardnessParams, RandomSuiteParams,
    Rank1Params, SuiteReport,
};
use binlra_core::css_gf2::{css_exhaustive, css_search_size};
use binlra_core::gcss_bool::{gcss_exhaustive, gcss_search_size};
use binlra_core::instances::{lower_bound_instance, negated_identity, planted, random_bernoulli};
use binlra_core::oracle::{
    opt_bool, opt_gf2, opt_rank1, opt_search_size, rank1_best_column, Semiring,
};
use binlra_core::{Error, Ratio};

const EXIT_VERIFY_FAIL: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "binlra",
    about = "Low-rank approximation of binary matrices over GF(2) and the Boolean semiring",
    version
)]
struct Cli {
    /// Worker threads for the enumeration-parallel solvers (0 = all cores).
    /// Results are identical at any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files (.bmx) and their companion factors.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run a solver or oracle on a .bmx matrix and print a JSON report.
    Solve(SolveArgs),
    /// Run a verification suite; exit 0 iff every trial passes.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum GenCommand {
    /// The square tightness construction `A = L R + I` with factors L and R.
    Lowerbound {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Also write the factors as `<out>.L.bmx` and `<out>.R.bmx`.
        #[arg(long)]
        factors: bool,
    },
    /// The complemented identity with its exact Boolean factorization
    /// (always writes `<out>.U.bmx` and `<out>.V.bmx`).
    Negid {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// A planted low-rank product with optional noise.
    Planted {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = SemiringArg::Gf2)]
        semiring: SemiringArg,
        /// Flip probability as an exact rational ("1/10", "0.1", or "0").
        #[arg(long, default_value = "0")]
        flip: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the plant as `<out>.U0.bmx` and `<out>.V0.bmx`.
        #[arg(long)]
        factors: bool,
    },
    /// An i.i.d. Bernoulli matrix.
    Bernoulli {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Entry probability as an exact rational.
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringArg {
    Gf2,
    Boolean,
}

impl From<SemiringArg> for Semiring {
    fn from(v: SemiringArg) -> Semiring {
        match v {
            SemiringArg::Gf2 => Semiring::Gf2,
            SemiringArg::Boolean => Semiring::Bool,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    /// Exhaustive column subset selection over GF(2).
    CssGf2,
    /// Exhaustive generalized CSS over the Boolean semiring.
    GcssBool,
    /// Brute-force rank-k optimum over GF(2).
    OptGf2,
    /// Brute-force rank-k optimum over the Boolean semiring.
    OptBool,
    /// Brute-force rank-1 optimum (both semirings coincide).
    Rank1Opt,
    /// Best single column, the rank-1 2-approximation baseline.
    Rank1Col,
}

impl SolverArg {
    fn name(&self) -> &'static str {
        match self {
            SolverArg::CssGf2 => "css-gf2",
            SolverArg::GcssBool => "gcss-bool",
            SolverArg::OptGf2 => "opt-gf2",
            SolverArg::OptBool => "opt-bool",
            SolverArg::Rank1Opt => "rank1-opt",
            SolverArg::Rank1Col => "rank1-col",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    solver: SolverArg,
    #[arg(long)]
    input: PathBuf,
    /// Rank (ignored by the rank-1 solvers).
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Also run the matching oracle and report the exact ratio.
    #[arg(long)]
    with_opt: bool,
    /// Search budget in elementary column-cost evaluations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// CSS error within the exact ratio bound of the GF(2) optimum.
    Thm1(RandomArgs<DefaultsThm1>),
    /// Exact closed-form checks on the tightness construction.
    Thm2Instance {
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Induced nearest-neighbor bases within (1 + lambda_k) of the optimum.
    Thm3(RandomArgs<DefaultsThm3>),
    /// GCSS error within 2^k of the Boolean optimum.
    Thm4(RandomArgs<DefaultsThm4>),
    /// Block lemma, Lindsey bound, Hadamard replacement gap, rank-1 identity.
    HardnessLemmas {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
        nset: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4])]
        mset: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        block_trials: u64,
        #[arg(long, default_value_t = 20)]
        gap_trials: u64,
        #[arg(long, default_value_t = 1000)]
        identity_trials: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 4, 8])]
        lindsey: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Best-column within factor 2 of the rank-1 optimum; solver agreement.
    #[command(name = "rank1-2approx")]
    Rank1TwoApprox {
        #[arg(long, default_value_t = 300)]
        trials: u64,
        #[arg(long, default_value_t = 100)]
        equivalence_trials: u64,
        #[arg(long, default_value_t = 12)]
        dmax: usize,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
}

/// Per-suite compiled-in defaults for the randomized verifiers.
trait SuiteDefaults {
    const TRIALS: u64;
    const DMAX: usize;
    const NMAX: usize;
    const KSET: &'static [usize];
}

#[derive(Clone, Copy)]
struct DefaultsThm1;
impl SuiteDefaults for DefaultsThm1 {
    const TRIALS: u64 = 300;
    const DMAX: usize = 7;
    const NMAX: usize = 9;
    const KSET: &'static [usize] = &[1, 2];
}

#[derive(Clone, Copy)]
struct DefaultsThm3;
impl SuiteDefaults for DefaultsThm3 {
    const TRIALS: u64 = 100;
    const DMAX: usize = 7;
    const NMAX: usize = 8;
    const KSET: &'static [usize] = &[2];
}

#[derive(Clone, Copy)]
struct DefaultsThm4;
impl SuiteDefaults for DefaultsThm4 {
    const TRIALS: u64 = 200;
    const DMAX: usize = 6;
    const NMAX: usize = 7;
    const KSET: &'static [usize] = &[1, 2];
}

#[derive(Args)]
struct RandomArgs<D: SuiteDefaults + Send + Sync + 'static> {
    #[arg(long, default_value_t = D::TRIALS)]
    trials: u64,
    #[arg(long, default_value_t = D::DMAX)]
    dmax: usize,
    #[arg(long, default_value_t = D::NMAX)]
    nmax: usize,
    #[arg(long, value_delimiter = ',', default_values_t = D::KSET.to_vec())]
    kset: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(skip)]
    _defaults: std::marker::PhantomData<D>,
}

impl<D: SuiteDefaults + Send + Sync> RandomArgs<D> {
    fn to_params(&self) -> RandomSuiteParams {
        RandomSuiteParams {
            trials: self.trials,
            dmax: self.dmax,
            nmax: self.nmax,
            kset: self.kset.clone(),
            seed: self.seed,
            budget: Budget::new(self.budget),
        }
    }
}

#[derive(Serialize)]
struct FileReport {
    path: String,
    digest: String,
    rows: usize,
    cols: usize,
}

#[derive(Serialize)]
struct GenReport {
    command: String,
    generator: &'static str,
    files: Vec<FileReport>,
    elapsed_ms: u128,
}

#[derive(Serialize)]
#[serde(untagged)]
enum RatioVsOpt {
    Exact(&'static str),
    Fraction { num: u64, den: u64 },
}

#[derive(Serialize)]
struct SolveReport {
    command: String,
    input_digest: String,
    solver: &'static str,
    k: usize,
    error: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    opt_error: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio_vs_opt: Option<RatioVsOpt>,
    witness: serde_json::Value,
    budget_consumed: u64,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct TrialReport<'a> {
    index: u64,
    detail: &'a str,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    command: String,
    suite: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    trials: Vec<TrialReport<'a>>,
    passed: bool,
    failures: usize,
    candidates_checked: u64,
    elapsed_ms: u128,
}

fn digest_bytes(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn matrix_rows_json(m: &BitMatrix) -> serde_json::Value {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| if m.get(r, c) { '1' } else { '0' })
                .collect()
        })
        .collect();
    serde_json::json!(rows)
}

fn write_bmx(path: &Path, m: &BitMatrix) -> Result<FileReport, CliError> {
    let text = to_bmx(m);
    std::fs::write(path, &text)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
    Ok(FileReport {
        path: path.display().to_string(),
        digest: digest_bytes(text.as_bytes()),
        rows: m.rows(),
        cols: m.cols(),
    })
}

fn companion(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_default();
    let base = stem.strip_suffix(".bmx").unwrap_or(&stem);
    path.with_file_name(format!("{base}.{tag}.bmx"))
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn input(message: String) -> Self {
        CliError {
            message,
            code: EXIT_INPUT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

fn parse_ratio(text: &str) -> Result<Ratio, CliError> {
    Ratio::parse(text).map_err(CliError::from)
}

fn load_matrix(path: &Path) -> Result<(BitMatrix, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    let m = from_bmx(&text)?;
    Ok((m, digest_bytes(&bytes)))
}

fn run_gen(cmd: GenCommand) -> Result<(), CliError> {
    let start = Instant::now();
    let command = command_echo();
    let (generator, files) = match cmd {
        GenCommand::Lowerbound { k, n, out, factors } => {
            let inst = lower_bound_instance(k, n)?;
            let mut files = vec![write_bmx(&out, &inst.a)?];
            if factors {
                files.push(write_bmx(&companion(&out, "L"), &inst.l)?);
                files.push(write_bmx(&companion(&out, "R"), &inst.r)?);
            }
            ("lowerbound", files)
        }
        GenCommand::Negid { k, out } => {
            let inst = negated_identity(k)?;
            let files = vec![
                write_bmx(&out, &inst.a)?,
                write_bmx(&companion(&out, "U"), &inst.u)?,
                write_bmx(&companion(&out, "V"), &inst.v)?,
            ];
            ("negid", files)
        }
        GenCommand::Planted {
            rows,
            cols,
            k,
            semiring,
            flip,
            seed,
            out,
            factors,
        } => {
            let flip = parse_ratio(&flip)?;
            let (a, u0, v0) = planted(rows, cols, k, semiring.into(), flip, seed)?;
            let mut files = vec![write_bmx(&out, &a)?];
            if factors {
                files.push(write_bmx(&companion(&out, "U0"), &u0)?);
                files.push(write_bmx(&companion(&out, "V0"), &v0)?);
            }
            ("planted", files)
        }
        GenCommand::Bernoulli {
            rows,
            cols,
            p,
            seed,
            out,
        } => {
            let p = parse_ratio(&p)?;
            let a = random_bernoulli(rows, cols, p, seed)?;
            ("bernoulli", vec![write_bmx(&out, &a)?])
        }
    };
    let report = GenReport {
        command,
        generator,
        files,
        elapsed_ms: start.elapsed().as_millis(),
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn ratio_report(solver_error: u64, opt_error: u64) -> Result<RatioVsOpt, CliError> {
    if opt_error == 0 {
        if solver_error != 0 {
            return Err(CliError {
                message: format!(
                    "solver error {solver_error} with zero oracle optimum violates the ratio contract"
                ),
                code: EXIT_VERIFY_FAIL,
            });
        }
        return Ok(RatioVsOpt::Exact("exact"));
    }
    let r = Ratio::new(solver_error, opt_error);
    Ok(RatioVsOpt::Fraction {
        num: r.num(),
        den: r.den(),
    })
}

fn run_solve(args: SolveArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let command = command_echo();
    let (a, input_digest) = load_matrix(&args.input)?;
    let budget = Budget::new(args.budget);
    let (d, n) = a.shape();
    let k = args.k;

    let mut budget_consumed: u64;
    let mut opt_error: Option<u64> = None;
    let mut ratio: Option<RatioVsOpt> = None;

    let (error, effective_k, witness) = match args.solver {
        SolverArg::CssGf2 => {
            let sol = css_exhaustive(&a, k, budget)?;
            budget_consumed = css_search_size(n, k).unwrap_or(u128::MAX) as u64;
            if args.with_opt {
                let opt = opt_gf2(&a, k, budget)?;
                budget_consumed += opt_search_size(d, k, n).unwrap_or(0) as u64;
                ratio = Some(ratio_report(sol.error, opt.error)?);
                opt_error = Some(opt.error);
            }
            (
                sol.error,
                k,
                serde_json::json!({
                    "subset": sol.subset,
                    "q": matrix_rows_json(&sol.q),
                }),
            )
        }
        SolverArg::GcssBool => {
            let sol = gcss_exhaustive(&a, k, budget, false)?;
            budget_consumed = gcss_search_size(n, k).unwrap_or(u128::MAX) as u64;
            if args.with_opt {
                let opt = opt_bool(&a, k, budget)?;
                budget_consumed += opt_search_size(d, k, n).unwrap_or(0) as u64;
                ratio = Some(ratio_report(sol.error, opt.error)?);
                opt_error = Some(opt.error);
            }
            (
                sol.error,
                k,
                serde_json::json!({
                    "selection": sol.selection,
                    "pi": sol.pi,
                    "basis": matrix_rows_json(&sol.basis),
                    "q": matrix_rows_json(&sol.q),
                }),
            )
        }
        SolverArg::OptGf2 | SolverArg::OptBool => {
            let f = match args.solver {
                SolverArg::OptGf2 => opt_gf2(&a, k, budget)?,
                _ => opt_bool(&a, k, budget)?,
            };
            budget_consumed = opt_search_size(d, k, n).unwrap_or(u128::MAX) as u64;
            if args.with_opt {
                ratio = Some(ratio_report(f.error, f.error)?);
                opt_error = Some(f.error);
            }
            (
                f.error,
                k,
                serde_json::json!({
                    "u": matrix_rows_json(&f.u),
                    "v": matrix_rows_json(&f.v),
                }),
            )
        }
        SolverArg::Rank1Opt => {
            let f = opt_rank1(&a)?;
            budget_consumed = (n as u64) << d.min(40);
            if args.with_opt {
                ratio = Some(ratio_report(f.error, f.error)?);
                opt_error = Some(f.error);
            }
            (
                f.error,
                1,
                serde_json::json!({
                    "u": matrix_rows_json(&f.u),
                    "v": matrix_rows_json(&f.v),
                }),
            )
        }
        SolverArg::Rank1Col => {
            let (col, v, error) = rank1_best_column(&a);
            budget_consumed = (n as u64) * (n as u64);
            if args.with_opt {
                let opt = opt_rank1(&a)?;
                budget_consumed += (n as u64) << d.min(40);
                ratio = Some(ratio_report(error, opt.error)?);
                opt_error = Some(opt.error);
            }
            (
                error,
                1,
                serde_json::json!({
                    "column": col,
                    "v": v.to_string(),
                }),
            )
        }
    };

    let report = SolveReport {
        command,
        input_digest,
        solver: args.solver.name(),
        k: effective_k,
        error,
        opt_error,
        ratio_vs_opt: ratio,
        witness,
        budget_consumed,
        elapsed_ms: start.elapsed().as_millis(),
    };
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    Ok(())
}

fn run_verify(cmd: VerifyCommand) -> Result<(), CliError> {
    let start = Instant::now();
    let command = command_echo();
    let (report, seed): (SuiteReport, Option<u64>) = match cmd {
        VerifyCommand::Thm1(args) => (check_css_ratio(&args.to_params())?, Some(args.seed)),
        VerifyCommand::Thm2Instance { k, n, budget } => {
            (check_lower_bound_instance(k, n, Budget::new(budget))?, None)
        }
        VerifyCommand::Thm3(args) => (check_induced_basis(&args.to_params())?, Some(args.seed)),
        VerifyCommand::Thm4(args) => (check_gcss_ratio(&args.to_params())?, Some(args.seed)),
        VerifyCommand::HardnessLemmas {
            nset,
            mset,
            block_trials,
            gap_trials,
            identity_trials,
            lindsey,
            seed,
        } => (
            check_hardness_lemmas(&HardnessParams {
                nset,
                mset,
                block_trials,
                gap_trials,
                identity_trials,
                lindsey_sizes: lindsey,
                seed,
            })?,
            Some(seed),
        ),
        VerifyCommand::Rank1TwoApprox {
            trials,
            equivalence_trials,
            dmax,
            nmax,
            seed,
            budget,
        } => (
            check_rank1_two_approx(&Rank1Params {
                trials,
                equivalence_trials,
                dmax,
                nmax,
                seed,
                budget: Budget::new(budget),
            })?,
            Some(seed),
        ),
    };

    let passed = report.passed();
    let out = VerifyReport {
        command,
        suite: &report.suite,
        seed,
        trials: report
            .trials
            .iter()
            .map(|t| TrialReport {
                index: t.index,
                detail: &t.detail,
                pass: t.pass,
            })
            .collect(),
        passed,
        failures: report.failures(),
        candidates_checked: report.candidates_checked,
        elapsed_ms: start.elapsed().as_millis(),
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    if passed {
        Ok(())
    } else {
        Err(CliError {
            message: format!("{} of {} trials failed", out.failures, out.trials.len()),
            code: EXIT_VERIFY_FAIL,
        })
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Gen(cmd) => run_gen(cmd),
        Command::Solve(args) => run_solve(args),
        Command::Verify(cmd) => run_verify(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
