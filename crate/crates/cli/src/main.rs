//! `socle`: evaluate socle pairings, enumerate strata, cross-check oracles and
//! verify the rank theorems from the command line.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use socle::oracles::{Oracle, DEFAULT_BOUND};
use socle::ranks::{betti_report, HousingReport, RankReport};
use socle::strata::{enumerate_boundary_generators, enumerate_pure_housing_partitions, ReducedBoundaryData};
use socle::{Partition, Rational, RationalEvaluator};

use output::{Format, Table};

/// Environment variable overriding the evaluator memo-cache size.
const CACHE_ENV: &str = "SOCLE_CACHE_SIZE";

#[derive(Parser, Debug)]
#[command(name = "socle", version, about = "Exact socle pairings on tautological rings of M_g")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalized λ_g evaluation ϑ(σ; τ).
    Theta {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "[]")]
        tau: String,
    },
    /// Normalized λ_gλ_{g−1} evaluation μ_σ(τ) or one of its variants.
    Mu {
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value = "[]")]
        tau: String,
        #[arg(long, value_enum, default_value_t = MuVariant::Full)]
        variant: MuVariant,
    },
    /// Expansion coefficient c of a generator in the M_λ basis.
    Coeff(CoeffArgs),
    /// Boundary strata.
    Strata {
        #[command(subcommand)]
        command: StrataCommand,
    },
    /// Brute-force permutation counts.
    Oracle(OracleArgs),
    /// Theorem verification.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Reports.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MuVariant {
    Full,
    Prime,
    Dprime,
}

#[derive(Args, Debug)]
struct CoeffArgs {
    #[arg(long)]
    lambda: String,
    /// Reduced boundary data as JSON; defaults to a single vertex built from
    /// --tau and --rho with γ = (|λ|).
    #[arg(long, conflicts_with_all = ["tau", "rho"])]
    data: Option<String>,
    #[arg(long)]
    tau: Option<String>,
    #[arg(long)]
    rho: Option<String>,
    /// Also evaluate the chain-sum formula and report both values.
    #[arg(long)]
    chains: bool,
}

#[derive(Subcommand, Debug)]
enum StrataCommand {
    /// Reduced data of all boundary generators, or pure housing partitions.
    Enumerate {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        pure: bool,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OracleName {
    LemmaTool,
    MainClaim,
    Comb,
    A1,
    A4,
    B2,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(value_enum)]
    name: OracleName,
    #[arg(long, default_value = "[]")]
    sigma: String,
    #[arg(long, default_value = "[]")]
    tau: String,
    #[arg(long, default_value = "[]")]
    rho: String,
    #[arg(long, default_value = "[]")]
    lambda: String,
    #[arg(long, default_value = "[]")]
    pi: String,
    /// Total order on I(σ) for lemma-tool, smallest first, as a JSON list of
    /// 0-based positions.
    #[arg(long, conflicts_with = "seed")]
    order: Option<String>,
    /// Draw the lemma-tool order at random from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Maximum number of symbols.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Compare with the formula value and fail on mismatch.
    #[arg(long)]
    check: bool,
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// rank(A_pure) = rank(A_full) = formula.
    Housing {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        /// Optional complementary degree; must satisfy r + d = 2g − 3.
        #[arg(long)]
        r: Option<u32>,
    },
    /// R1 = R2 + R3.
    Rank {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
        /// Optional κ degree; must satisfy r + d = 2g − 3.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Both theorems on the whole grid up to the given genus.
    All {
        #[arg(long, default_value_t = 5)]
        max_g: u32,
    },
}

#[derive(Subcommand, Debug)]
enum ReportCommand {
    /// Conjectural Betti numbers of κ*(M_g^c).
    Betti {
        #[arg(long)]
        g: u32,
    },
}

/// Failure modes of a run, mapped to exit codes.
enum Failure {
    Usage(String),
    Verification,
}

impl From<socle::Error> for Failure {
    fn from(e: socle::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("warning: could not configure thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn evaluator() -> Result<RationalEvaluator, Failure> {
    match std::env::var(CACHE_ENV) {
        Ok(s) => s
            .parse::<usize>()
            .map(RationalEvaluator::with_cache_limit)
            .map_err(|_| Failure::Usage(format!("{CACHE_ENV} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(RationalEvaluator::new()),
    }
}

/// Parses a JSON partition literal, re-sorting with a warning if needed.
fn partition(flag: &str, s: &str) -> Result<Partition, Failure> {
    let parts: Vec<u32> =
        serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--{flag}: expected a JSON list of parts: {e}")))?;
    let (p, resorted) = Partition::parse_literal(&serde_json::to_string(&parts).expect("list"))?;
    if resorted {
        eprintln!("warning: --{flag} {s} is not non-increasing; using {p}");
    }
    Ok(p)
}

fn run(cli: &Cli) -> Run {
    let fmt = cli.format;
    match &cli.command {
        Command::Theta { sigma, tau } => {
            let (sigma, tau) = (partition("sigma", sigma)?, partition("tau", tau)?);
            let value = evaluator()?.theta(&sigma, &tau);
            output::scalar(fmt, "theta", &value);
            Ok(())
        }
        Command::Mu { sigma, tau, variant } => {
            let (sigma, tau) = (partition("sigma", sigma)?, partition("tau", tau)?);
            let ev = evaluator()?;
            let value = match variant {
                MuVariant::Full => ev.mu(&sigma, &tau),
                MuVariant::Prime => ev.mu_prime(&sigma, &tau),
                MuVariant::Dprime => ev.mu_dprime(&sigma, &tau),
            };
            output::scalar(fmt, "mu", &value);
            Ok(())
        }
        Command::Coeff(args) => coeff(fmt, args),
        Command::Strata { command: StrataCommand::Enumerate { g, d, pure } } => {
            if *pure {
                let set = enumerate_pure_housing_partitions(*g, *d)?;
                let mut table = Table::new(&["housing"]);
                for p in set {
                    table.push(vec![json!(p)]);
                }
                table.print_lines(fmt);
            } else {
                let set = enumerate_boundary_generators(&evaluator()?, *g, *d)?;
                let mut table = Table::new(&["gamma", "kappa", "psi"]);
                for data in set {
                    let value = serde_json::to_value(&data).expect("serializable");
                    table.push(vec![value["gamma"].clone(), value["kappa"].clone(), value["psi"].clone()]);
                }
                table.print_lines(fmt);
            }
            Ok(())
        }
        Command::Oracle(args) => oracle(fmt, args),
        Command::Verify { command } => verify(fmt, command),
        Command::Report { command: ReportCommand::Betti { g } } => {
            let report = betti_report(*g)?;
            let mut table = Table::new(&[
                "e",
                "d",
                "genus_zero_rank",
                "gamma_conjectural",
                "delta_conjectural",
                "kernel_rank_conjectural",
                "betti_conjectural",
            ]);
            for row in &report.rows {
                table.push_serialized(row);
            }
            match fmt {
                Format::Json => output::json_line(&report),
                _ => {
                    println!("# CONJECTURAL: g={}; gamma from the FZ prediction, delta = 0", report.g);
                    table.print(fmt);
                }
            }
            Ok(())
        }
    }
}

fn coeff(fmt: Format, args: &CoeffArgs) -> Run {
    let lambda = partition("lambda", &args.lambda)?;
    let data: ReducedBoundaryData = match &args.data {
        Some(s) => serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--data: {e}")))?,
        None => {
            let tau = partition("tau", args.tau.as_deref().unwrap_or("[]"))?;
            let rho = partition("rho", args.rho.as_deref().unwrap_or("[]"))?;
            ReducedBoundaryData::single(lambda.size(), tau, rho)
        }
    };
    if data.gamma().size() != lambda.size() {
        return Err(Failure::Usage(format!("|gamma| = {} differs from |lambda| = {}", data.gamma().size(), lambda.size())));
    }
    let ev = evaluator()?;
    let value = ev.c_coefficient(&lambda, &data);
    if args.chains {
        let chains = ev.c_coefficient_by_chains(&lambda, &data);
        let ok = chains == value;
        let mut table = Table::new(&["solve", "chains", "ok"]);
        table.push(vec![output::scalar_json(&value), output::scalar_json(&chains), json!(ok)]);
        table.print_single(fmt);
        return if ok { Ok(()) } else { Err(Failure::Verification) };
    }
    output::scalar(fmt, "c", &value);
    Ok(())
}

fn oracle(fmt: Format, args: &OracleArgs) -> Run {
    let o = Oracle::with_bound(args.bound);
    let p = |flag: &str, s: &str| partition(flag, s);
    let ev = evaluator()?;
    let (count, formula): (Rational, Option<Rational>) = match args.name {
        OracleName::LemmaTool => {
            let (sigma, tau) = (p("sigma", &args.sigma)?, p("tau", &args.tau)?);
            let order: Vec<usize> = match (&args.order, args.seed) {
                (Some(s), _) => serde_json::from_str(s).map_err(|e| Failure::Usage(format!("--order: {e}")))?,
                (None, Some(seed)) => {
                    let mut order: Vec<usize> = (0..sigma.len()).collect();
                    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                    order
                }
                (None, None) => (0..sigma.len()).collect(),
            };
            let count = o.count_lemma_tool(&sigma, &tau, &order)?;
            (Rational::from_integer(count.into()), Some(ev.theta(&sigma, &tau)))
        }
        OracleName::MainClaim => {
            let (lambda, tau, rho) = (p("lambda", &args.lambda)?, p("tau", &args.tau)?, p("rho", &args.rho)?);
            let count = o.count_main_claim(&lambda, &tau, &rho)?;
            let data = ReducedBoundaryData::single(lambda.size(), tau, rho);
            (count, Some(ev.c_coefficient(&lambda, &data)))
        }
        OracleName::Comb => {
            let pi = p("pi", &args.pi)?;
            let count = o.count_comb_linear_extensions(&pi)?;
            (Rational::from_integer(count.into()), Some(socle::exact::comb_count(&pi)))
        }
        OracleName::A1 | OracleName::A4 => {
            let (sigma, tau) = (p("sigma", &args.sigma)?, p("tau", &args.tau)?);
            let r = tau.size();
            let (count, form) = if matches!(args.name, OracleName::A1) {
                (o.count_a1(&sigma, &tau)?, ev.eta_prime(&sigma, r)?)
            } else {
                (o.count_a4(&sigma, &tau)?, ev.eta_dprime(&sigma, r)?)
            };
            (Rational::from_integer(count.into()), Some(form.at(&tau)))
        }
        OracleName::B2 => {
            let (sigma, tau) = (p("sigma", &args.sigma)?, p("tau", &args.tau)?);
            let count = o.count_b2(&sigma, &tau)?;
            (Rational::from_integer(count.into()), Some(ev.mu_dprime(&sigma, &tau)))
        }
    };
    if args.check {
        let formula = formula.expect("every oracle has a formula");
        let ok = formula == count;
        let mut table = Table::new(&["oracle", "formula", "ok"]);
        table.push(vec![output::scalar_json(&count), output::scalar_json(&formula), json!(ok)]);
        table.print_single(fmt);
        return if ok { Ok(()) } else { Err(Failure::Verification) };
    }
    output::scalar(fmt, "count", &count);
    Ok(())
}

fn check_degrees(g: u32, d: u32, r: u32) -> Run {
    if g < 2 || r + d != 2 * g - 3 {
        return Err(Failure::Usage(format!("inconsistent degrees: r + d must equal 2g - 3 (g={g}, d={d}, r={r})")));
    }
    Ok(())
}

fn housing_short(report: &HousingReport) -> serde_json::Value {
    json!({
        "rank_pure": report.rank_pure,
        "rank_full": report.rank_full,
        "formula": report.formula,
        "ok": report.ok,
    })
}

fn rank_short(report: &RankReport) -> serde_json::Value {
    json!({ "r1": report.r1, "r2": report.r2, "r3": report.r3, "ok": report.ok })
}

fn verify(fmt: Format, command: &VerifyCommand) -> Run {
    let ev = evaluator()?;
    match *command {
        VerifyCommand::Housing { g, d, r } => {
            if let Some(r) = r {
                check_degrees(g, d, r)?;
            }
            if g < 2 || d + 1 > 2 * g - 2 {
                return Err(Failure::Usage(format!("need g >= 2 and d <= 2g - 3, got g={g}, d={d}")));
            }
            let report = ev.verify_housing_theorem(g, d)?;
            Table::from_object(&housing_short(&report)).print_single(fmt);
            if report.ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        VerifyCommand::Rank { g, r, d } => {
            if let Some(d) = d {
                check_degrees(g, d, r)?;
            }
            let report = ev.verify_rank_theorem(g, r)?;
            Table::from_object(&rank_short(&report)).print_single(fmt);
            if report.ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        VerifyCommand::All { max_g } => {
            use rayon::prelude::*;
            let housing: Vec<(u32, u32)> =
                (2..=max_g).flat_map(|g| (0..=2 * g - 4).map(move |d| (g, d))).collect();
            let rank: Vec<(u32, u32)> = (2..=max_g).flat_map(|g| (0..=g - 2).map(move |r| (g, r))).collect();
            let housing: Vec<HousingReport> =
                housing.par_iter().map(|&(g, d)| ev.verify_housing_theorem(g, d)).collect::<Result<_, _>>()?;
            let rank: Vec<RankReport> =
                rank.par_iter().map(|&(g, r)| ev.verify_rank_theorem(g, r)).collect::<Result<_, _>>()?;
            let ok = housing.iter().all(|r| r.ok) && rank.iter().all(|r| r.ok);
            match fmt {
                Format::Json => output::json_line(&json!({ "housing": housing, "rank": rank, "ok": ok })),
                _ => {
                    let mut h = Table::new(&["g", "d", "pure_rows", "full_rows", "rank_pure", "rank_full", "formula", "ok"]);
                    housing.iter().for_each(|r| h.push_serialized(r));
                    h.print(fmt);
                    println!();
                    let mut t = Table::new(&["g", "r", "d", "r1", "r2", "r3", "ok"]);
                    rank.iter().for_each(|r| t.push_serialized(r));
                    t.print(fmt);
                }
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}
