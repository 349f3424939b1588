//! `spa`: command-line front end for the student/project allocation solvers.
//!
//! Exit codes: 0 success, 1 infeasible constrained instance or a negative
//! `verify` verdict, 2 input or usage error, 3 internal invariant failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spa_core::bench::{format_breakdown, profile_breakdown, sweep, to_csv, Algorithm, SweepConfig, SweepParam};
use spa_core::format::{parse_instance, parse_matching, write_instance, write_matching};
use spa_core::generator::{generate, GenConfig};
use spa_core::instance::{check_matching, matching_stats, meets_lower_quotas};
use spa_core::mcmf::{feasibility_sweep, solve_mcmf, Arithmetic, CostScheme, FeasibilityConfig};
use spa_core::oracle::{enumerate_best, OracleBudget, Size};
use spa_core::search::LabelUpdate;
use spa_core::solver::{solve, solve_constrained, SolveResult};
use spa_core::{Criterion, SpaError, SpaInstance};

#[derive(Parser, Debug)]
#[command(name = "spa", version, about = "Greedy and generous maximum matchings for student/project allocation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance file and write the matching.
    Solve(SolveArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Run a parameter sweep and write per-run CSV.
    Bench(BenchArgs),
    /// Check a matching against an instance, and optionally its optimality.
    Verify(VerifyArgs),
    /// Run greedy, generous and min-cost on one instance side by side.
    Compare(CompareArgs),
    /// Count min-cost flow disagreements with the exact solver over a grid.
    Feasibility(FeasibilityArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    /// greedy, generous, mincost, greedy-l, generous-l, mcmf-greedy or mcmf-generous.
    #[arg(long, default_value = "greedy")]
    algo: String,
    /// Arithmetic for the mcmf variants: exact or float64.
    #[arg(long, default_value = "exact")]
    arith: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print every label update of the path search to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args, Debug, Clone)]
struct GenArgs {
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    n3: Option<usize>,
    #[arg(long)]
    r_min: Option<usize>,
    #[arg(long)]
    r_max: Option<usize>,
    #[arg(long)]
    popularity: Option<f64>,
    /// Total project capacity.
    #[arg(long)]
    project_capacity: Option<u32>,
    /// Total lecturer upper quota.
    #[arg(long)]
    lecturer_capacity: Option<u32>,
    #[arg(long)]
    tie_density: Option<f64>,
    #[arg(long)]
    project_lower: Option<u32>,
    /// Total lecturer lower quota.
    #[arg(long)]
    lecturer_lower: Option<u32>,
}

impl GenArgs {
    fn config(&self, seed: u64) -> GenConfig {
        let d = GenConfig::default();
        GenConfig {
            n1: self.n1.unwrap_or(d.n1),
            n2: self.n2,
            n3: self.n3,
            r_min: self.r_min.unwrap_or(d.r_min),
            r_max: self.r_max.or(self.r_min).unwrap_or(d.r_max),
            popularity: self.popularity.unwrap_or(d.popularity),
            project_capacity: self.project_capacity,
            lecturer_capacity: self.lecturer_capacity,
            tie_density: self.tie_density.unwrap_or(d.tie_density),
            project_lower: self.project_lower.unwrap_or(d.project_lower),
            lecturer_lower: self.lecturer_lower.unwrap_or(d.lecturer_lower),
            seed,
        }
    }
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// n1, R, popularity or tie_density.
    #[arg(long, default_value = "n1")]
    sweep: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "greedy,generous,mincost")]
    algos: Vec<String>,
    #[arg(long, default_value = "exact")]
    arith: String,
    #[command(flatten)]
    gen: GenArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write 0 instead of wall times so the output is reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    instance: PathBuf,
    matching: PathBuf,
    /// Also check optimality for this algorithm's objective.
    #[arg(long)]
    algo: Option<String>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    instance: PathBuf,
}

#[derive(Args, Debug)]
struct FeasibilityArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50,60,70,80,90,100")]
    n1_values: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    r_min: usize,
    #[arg(long, default_value_t = 20)]
    r_cap: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// greedy-exp or generous-exp.
    #[arg(long, default_value = "greedy-exp")]
    scheme: String,
    #[arg(long, default_value = "float64")]
    arith: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Summary CSV (first disagreeing R per n1).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-cell CSV.
    #[arg(long)]
    cells: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Infeasible(String),
    Rejected(String),
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Infeasible(_) | Failure::Rejected(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Infeasible(m) | Failure::Rejected(m) | Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<SpaError> for Failure {
    fn from(e: SpaError) -> Self {
        match e {
            SpaError::Invariant(_) | SpaError::Bench { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> std::result::Result<SpaInstance, Failure> {
    let instance = parse_instance(&read(path)?)?;
    instance.ensure_valid()?;
    Ok(instance)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_arith(s: &str) -> std::result::Result<Arithmetic, Failure> {
    Ok(s.parse::<Arithmetic>()?)
}

fn traced_criterion(algo: Algorithm) -> Option<(Criterion, bool)> {
    match algo {
        Algorithm::Greedy => Some((Criterion::Greedy, false)),
        Algorithm::Generous => Some((Criterion::Generous, false)),
        Algorithm::GreedyL => Some((Criterion::Greedy, true)),
        Algorithm::GenerousL => Some((Criterion::Generous, true)),
        _ => None,
    }
}

fn run_solve(args: SolveArgs) -> CliResult {
    let instance = read_instance(&args.instance)?;
    let algo = Algorithm::parse(&args.algo, parse_arith(&args.arith)?)?;
    let mut trace = |u: &LabelUpdate| eprintln!("{u}");
    let mut silent = |_: &LabelUpdate| {};
    let sink: &mut dyn FnMut(&LabelUpdate) = if args.verbose { &mut trace } else { &mut silent };
    let result = match traced_criterion(algo) {
        Some((criterion, false)) => solve(&instance, criterion, sink)?,
        Some((criterion, true)) => solve_constrained(&instance, criterion, sink)?,
        None => match algo {
            Algorithm::McmfGreedy(a) | Algorithm::McmfGenerous(a) => {
                let scheme = if matches!(algo, Algorithm::McmfGreedy(_)) {
                    CostScheme::GreedyExp
                } else {
                    CostScheme::GenerousExp
                };
                let outcome = solve_mcmf(&instance, scheme, a)?;
                if !outcome.completed {
                    eprintln!("warning: negative cycle from rounding; the matching may not be optimal");
                }
                outcome.result
            }
            _ => algo.run(&instance)?,
        },
    };
    match (&result.matching, &result.stats) {
        (Some(m), Some(stats)) => emit(args.out.as_deref(), &write_matching(m, stats)),
        _ => Err(Failure::Infeasible("no constrained matching exists".into())),
    }
}

fn run_generate(args: GenerateArgs) -> CliResult {
    let instance = generate(&args.gen.config(args.seed))?;
    emit(args.out.as_deref(), &write_instance(&instance))
}

fn run_bench(args: BenchArgs) -> CliResult {
    let arith = parse_arith(&args.arith)?;
    let algorithms = args
        .algos
        .iter()
        .map(|a| Algorithm::parse(a, arith))
        .collect::<Result<Vec<_>, _>>()?;
    let config = SweepConfig {
        param: args.sweep.parse::<SweepParam>()?,
        values: args.values,
        trials: args.trials,
        algorithms,
        base: args.gen.config(args.seed),
        seed: args.seed,
        timing: !args.no_timing,
    };
    let reports = sweep(&config)?;
    eprint!("{}", format_breakdown(&profile_breakdown(&reports)));
    emit(args.out.as_deref(), &to_csv(&reports)?)
}

fn reference(instance: &SpaInstance, algo: Algorithm) -> std::result::Result<(SolveResult, &'static str), Failure> {
    if let Some((criterion, constrained)) = traced_criterion(algo) {
        let constrained = constrained || instance.has_lower_quotas();
        match enumerate_best(instance, Size::Max, criterion, constrained, &OracleBudget::default()) {
            Ok(best) => {
                let (matching, stats) = match best {
                    Some((_, m)) => {
                        let stats = matching_stats(instance, &m)?;
                        (Some(m), Some(stats))
                    }
                    None => (None, None),
                };
                let result = SolveResult { matching, stats, iterations: 0, elapsed: 0.0 };
                return Ok((result, "exhaustive search"));
            }
            Err(SpaError::OracleBudget(_)) => {}
            Err(e) => return Err(e.into()),
        }
        let result = if constrained {
            solve_constrained(instance, criterion, &mut |_| {})?
        } else {
            solve(instance, criterion, &mut |_| {})?
        };
        return Ok((result, "solver"));
    }
    Ok((algo.run(instance)?, "solver"))
}

fn run_verify(args: VerifyArgs) -> CliResult {
    let instance = read_instance(&args.instance)?;
    let matching = parse_matching(&read(&args.matching)?, instance.n_students())?;
    if let Err(e) = check_matching(&instance, &matching) {
        return Err(Failure::Rejected(format!("invalid: {e}")));
    }
    if !meets_lower_quotas(&instance, &matching) {
        return Err(Failure::Rejected("invalid: a lecturer lower quota is not met".into()));
    }
    let stats = matching_stats(&instance, &matching)?;
    println!("valid: {stats}");
    let Some(name) = args.algo else { return Ok(()) };
    let algo = Algorithm::parse(&name, Arithmetic::Exact)?;
    let (best, source) = reference(&instance, algo)?;
    let Some(target) = best.stats else {
        return Err(Failure::Internal("reference found no feasible matching for a valid one".into()));
    };
    let optimal = match algo {
        Algorithm::MinCost => stats.size == target.size && stats.cost == target.cost,
        _ => stats.size == target.size && stats.profile == target.profile,
    };
    if optimal {
        println!("optimal for {algo} (checked against {source})");
        Ok(())
    } else {
        Err(Failure::Rejected(format!("not optimal for {algo}: best is {target} ({source})")))
    }
}

fn run_compare(args: CompareArgs) -> CliResult {
    let instance = read_instance(&args.instance)?;
    let algos: &[Algorithm] = if instance.has_lower_quotas() {
        &[Algorithm::GreedyL, Algorithm::GenerousL]
    } else {
        &[Algorithm::Greedy, Algorithm::Generous, Algorithm::MinCost]
    };
    println!("{:<12} {:>6} {:>8} {:>7} {:>10}  profile", "algo", "size", "cost", "degree", "time_ms");
    for &algo in algos {
        let r = algo.run(&instance)?;
        match r.stats {
            Some(s) => println!(
                "{:<12} {:>6} {:>8} {:>7} {:>10.3}  {}",
                algo.name(),
                s.size,
                s.cost,
                s.degree,
                r.elapsed * 1e3,
                s.profile
            ),
            None => println!("{:<12} infeasible", algo.name()),
        }
    }
    Ok(())
}

fn run_feasibility(args: FeasibilityArgs) -> CliResult {
    let config = FeasibilityConfig {
        n1_values: args.n1_values,
        r_min: args.r_min,
        r_cap: args.r_cap,
        trials: args.trials,
        scheme: args.scheme.parse::<CostScheme>()?,
        arithmetic: parse_arith(&args.arith)?,
        seed: args.seed,
    };
    let table = feasibility_sweep(&config)?;
    if let Some(path) = &args.cells {
        emit(Some(path), &table.cells_csv())?;
    }
    emit(args.out.as_deref(), &table.summary_csv())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Generate(a) => run_generate(a),
        Command::Bench(a) => run_bench(a),
        Command::Verify(a) => run_verify(a),
        Command::Compare(a) => run_compare(a),
        Command::Feasibility(a) => run_feasibility(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.code())
        }
    }
}
