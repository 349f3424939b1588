//! Experiment harness: parameter sweeps over generated instances, one CSV
//! row per (instance, algorithm), with per-instance consistency checks.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Result, SpaError};
use crate::generator::{derive_seed, generate, GenConfig};
use crate::instance::SpaInstance;
use crate::mcmf::{solve_mcmf, Arithmetic, CostScheme};
use crate::network::{plain_max_flow, FlowNetwork};
use crate::profile::Profile;
use crate::solver::{
    generous_max, generous_max_constrained, greedy_max, greedy_max_constrained, SolveResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Greedy,
    Generous,
    /// Minimum total rank among maximum matchings.
    MinCost,
    GreedyL,
    GenerousL,
    McmfGreedy(Arithmetic),
    McmfGenerous(Arithmetic),
}

impl Algorithm {
    /// Name used on the command line and in CSV output.
    pub fn name(self) -> String {
        match self {
            Algorithm::Greedy => "greedy".into(),
            Algorithm::Generous => "generous".into(),
            Algorithm::MinCost => "mincost".into(),
            Algorithm::GreedyL => "greedy-l".into(),
            Algorithm::GenerousL => "generous-l".into(),
            Algorithm::McmfGreedy(Arithmetic::Exact) => "mcmf-greedy".into(),
            Algorithm::McmfGenerous(Arithmetic::Exact) => "mcmf-generous".into(),
            Algorithm::McmfGreedy(a) => format!("mcmf-greedy-{a}"),
            Algorithm::McmfGenerous(a) => format!("mcmf-generous-{a}"),
        }
    }

    /// Parses an algorithm name; `arithmetic` applies to the min-cost flow
    /// variants only.
    pub fn parse(name: &str, arithmetic: Arithmetic) -> Result<Algorithm> {
        Ok(match name {
            "greedy" => Algorithm::Greedy,
            "generous" => Algorithm::Generous,
            "mincost" => Algorithm::MinCost,
            "greedy-l" => Algorithm::GreedyL,
            "generous-l" => Algorithm::GenerousL,
            "mcmf-greedy" => Algorithm::McmfGreedy(arithmetic),
            "mcmf-generous" => Algorithm::McmfGenerous(arithmetic),
            _ => return Err(SpaError::Config(format!("unknown algorithm {name:?}"))),
        })
    }

    pub fn run(self, instance: &SpaInstance) -> Result<SolveResult> {
        match self {
            Algorithm::Greedy => greedy_max(instance),
            Algorithm::Generous => generous_max(instance),
            Algorithm::GreedyL => greedy_max_constrained(instance),
            Algorithm::GenerousL => generous_max_constrained(instance),
            Algorithm::MinCost => Ok(solve_mcmf(instance, CostScheme::Rank, Arithmetic::Exact)?.result),
            Algorithm::McmfGreedy(a) => Ok(solve_mcmf(instance, CostScheme::GreedyExp, a)?.result),
            Algorithm::McmfGenerous(a) => Ok(solve_mcmf(instance, CostScheme::GenerousExp, a)?.result),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    N1,
    /// Preference list length; sets both bounds.
    R,
    Popularity,
    TieDensity,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::N1 => "n1",
            SweepParam::R => "R",
            SweepParam::Popularity => "popularity",
            SweepParam::TieDensity => "tie_density",
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &GenConfig, value: f64) -> Result<GenConfig> {
        let whole = || {
            if value >= 1.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(SpaError::Config(format!("{} needs a positive integer, got {value}", self.name())))
            }
        };
        let mut cfg = base.clone();
        match self {
            SweepParam::N1 => cfg.n1 = whole()?,
            SweepParam::R => {
                cfg.r_min = whole()?;
                cfg.r_max = cfg.r_min;
            }
            SweepParam::Popularity => cfg.popularity = value,
            SweepParam::TieDensity => cfg.tie_density = value,
        }
        Ok(cfg)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "n1" => Ok(SweepParam::N1),
            "R" | "r" => Ok(SweepParam::R),
            "popularity" | "lambda" => Ok(SweepParam::Popularity),
            "tie_density" | "tie-density" | "td" => Ok(SweepParam::TieDensity),
            _ => Err(SpaError::Config(format!("unknown sweep parameter {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub param: SweepParam,
    /// Ascending.
    pub values: Vec<f64>,
    pub trials: usize,
    pub algorithms: Vec<Algorithm>,
    /// Settings for everything the sweep does not vary; its seed is ignored.
    pub base: GenConfig,
    pub seed: u64,
    /// Measure wall time; when off, `elapsed_s` is written as 0 so the CSV
    /// is byte-for-byte reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub param: SweepParam,
    pub value: f64,
    pub trial: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub size: usize,
    pub profile: Profile,
    pub cost: i64,
    pub degree: usize,
    pub elapsed: f64,
}

/// Seed of the instance at sweep position (`value`, `trial`).
pub fn cell_seed(master: u64, value: f64, trial: usize) -> u64 {
    derive_seed(master, &[value.to_bits(), trial as u64])
}

/// Per-instance consistency checks between the greedy, generous and
/// min-cost results, plus sizes against an independent max-flow. Checks
/// involving an algorithm absent from `reports` are skipped.
pub fn check_order_properties(reports: &[RunReport], max_flow: usize) -> std::result::Result<(), String> {
    let find = |a: Algorithm| reports.iter().find(|r| r.algorithm == a);
    for r in reports {
        let unconstrained = matches!(
            r.algorithm,
            Algorithm::Greedy | Algorithm::Generous | Algorithm::MinCost
        );
        if unconstrained && r.size != max_flow {
            return Err(format!("{} has size {} but the maximum flow is {max_flow}", r.algorithm, r.size));
        }
    }
    let first = |p: &Profile| p.values().map_or(0, |v| v[0]);
    if let (Some(g), Some(h)) = (find(Algorithm::Greedy), find(Algorithm::Generous)) {
        if first(&g.profile) < first(&h.profile) {
            return Err(format!("greedy x1 {} below generous x1 {}", first(&g.profile), first(&h.profile)));
        }
        if h.degree > g.degree {
            return Err(format!("generous degree {} above greedy degree {}", h.degree, g.degree));
        }
    }
    if let Some(m) = find(Algorithm::MinCost) {
        for other in [find(Algorithm::Greedy), find(Algorithm::Generous)].into_iter().flatten() {
            if m.cost > other.cost {
                return Err(format!("min-cost {} above {} cost {}", m.cost, other.algorithm, other.cost));
            }
        }
    }
    Ok(())
}

fn run_cell(config: &SweepConfig, value: f64, trial: usize) -> Result<Vec<RunReport>> {
    let seed = cell_seed(config.seed, value, trial);
    let bench_err = |message: String| SpaError::Bench { seed, message };
    let gen = GenConfig { seed, ..config.param.apply(&config.base, value)? };
    let instance = generate(&gen).map_err(|e| bench_err(e.to_string()))?;
    let mut rows = Vec::with_capacity(config.algorithms.len());
    for &algorithm in &config.algorithms {
        let result = algorithm.run(&instance).map_err(|e| bench_err(format!("{algorithm}: {e}")))?;
        let stats = result
            .stats
            .ok_or_else(|| bench_err(format!("{algorithm}: no feasible matching")))?;
        rows.push(RunReport {
            param: config.param,
            value,
            trial,
            seed,
            algorithm,
            size: stats.size,
            profile: stats.profile,
            cost: stats.cost,
            degree: stats.degree,
            elapsed: if config.timing { result.elapsed } else { 0.0 },
        });
    }
    let max_flow = plain_max_flow(&FlowNetwork::build(&instance));
    check_order_properties(&rows, max_flow).map_err(bench_err)?;
    Ok(rows)
}

/// Runs every algorithm on `trials` instances per value. Rows come back
/// ordered by value, trial and algorithm whatever the completion order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<RunReport>> {
    if config.trials == 0 {
        return Err(SpaError::Config("trials must be at least 1".into()));
    }
    if config.values.windows(2).any(|w| w[0] > w[1]) {
        return Err(SpaError::Config("sweep values must be ascending".into()));
    }
    let cells: Vec<(f64, usize)> = config
        .values
        .iter()
        .flat_map(|&v| (0..config.trials).map(move |t| (v, t)))
        .collect();
    let rows: Vec<Vec<RunReport>> = cells
        .par_iter()
        .map(|&(v, t)| run_cell(config, v, t))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn fmt_value(v: f64) -> String {
    format!("{v}")
}

fn fmt_mean(v: f64) -> String {
    format!("{v:.4}")
}

/// CSV with header `param,value,trial,seed,algo,size,degree,cost,profile,elapsed_s`,
/// followed by one `mean` row per (value, algorithm).
pub fn to_csv(reports: &[RunReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| SpaError::Config(format!("csv: {e}"));
    w.write_record(["param", "value", "trial", "seed", "algo", "size", "degree", "cost", "profile", "elapsed_s"])
        .map_err(io)?;
    for r in reports {
        w.write_record([
            r.param.name().to_string(),
            fmt_value(r.value),
            r.trial.to_string(),
            r.seed.to_string(),
            r.algorithm.name(),
            r.size.to_string(),
            r.degree.to_string(),
            r.cost.to_string(),
            r.profile.to_pipe_string(),
            format!("{}", r.elapsed),
        ])
        .map_err(io)?;
    }
    let mut groups: Vec<(f64, Algorithm)> = Vec::new();
    for r in reports {
        if !groups.contains(&(r.value, r.algorithm)) {
            groups.push((r.value, r.algorithm));
        }
    }
    for (value, algorithm) in groups {
        let rows: Vec<&RunReport> = reports
            .iter()
            .filter(|r| r.value == value && r.algorithm == algorithm)
            .collect();
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&RunReport) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
        let dims = rows.iter().filter_map(|r| r.profile.dim()).max().unwrap_or(0);
        let profile: Vec<String> = (0..dims)
            .map(|k| fmt_mean(mean(&|r| r.profile.values().and_then(|v| v.get(k)).copied().unwrap_or(0) as f64)))
            .collect();
        w.write_record([
            rows[0].param.name().to_string(),
            fmt_value(value),
            "mean".to_string(),
            String::new(),
            algorithm.name(),
            fmt_mean(mean(&|r| r.size as f64)),
            fmt_mean(mean(&|r| r.degree as f64)),
            fmt_mean(mean(&|r| r.cost as f64)),
            profile.join("|"),
            format!("{}", mean(&|r| r.elapsed)),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| SpaError::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| SpaError::Config(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownRow {
    pub algorithm: Algorithm,
    pub instances: usize,
    /// Share of matched students at each rank, in percent.
    pub percent_by_rank: Vec<f64>,
    pub mean_cost: f64,
    pub mean_degree: f64,
}

/// Per algorithm: percentage of matched students at each rank over all
/// reports, and mean cost and degree.
pub fn profile_breakdown(reports: &[RunReport]) -> Vec<BreakdownRow> {
    let mut algorithms: Vec<Algorithm> = Vec::new();
    for r in reports {
        if !algorithms.contains(&r.algorithm) {
            algorithms.push(r.algorithm);
        }
    }
    algorithms
        .into_iter()
        .map(|algorithm| {
            let rows: Vec<&RunReport> = reports.iter().filter(|r| r.algorithm == algorithm).collect();
            let dims = rows.iter().filter_map(|r| r.profile.dim()).max().unwrap_or(0);
            let mut totals = vec![0i64; dims];
            for r in &rows {
                for (t, &x) in totals.iter_mut().zip(r.profile.values().unwrap_or(&[])) {
                    *t += x as i64;
                }
            }
            let matched: i64 = totals.iter().sum();
            let percent_by_rank = totals
                .iter()
                .map(|&t| if matched == 0 { 0.0 } else { 100.0 * t as f64 / matched as f64 })
                .collect();
            let n = rows.len() as f64;
            BreakdownRow {
                algorithm,
                instances: rows.len(),
                percent_by_rank,
                mean_cost: rows.iter().map(|r| r.cost as f64).sum::<f64>() / n,
                mean_degree: rows.iter().map(|r| r.degree as f64).sum::<f64>() / n,
            }
        })
        .collect()
}

/// Plain-text rendering of [`profile_breakdown`].
pub fn format_breakdown(rows: &[BreakdownRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let ranks: Vec<String> = row.percent_by_rank.iter().map(|p| format!("{p:.2}")).collect();
        out += &format!(
            "{:<14} n={:<6} mean_cost={:<10.2} mean_degree={:<6.2} by_rank%=[{}]\n",
            row.algorithm.name(),
            row.instances,
            row.mean_cost,
            row.mean_degree,
            ranks.join(", ")
        );
    }
    out
}
