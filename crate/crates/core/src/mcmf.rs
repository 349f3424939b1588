//! Minimum-cost maximum-flow baseline.
//!
//! Successive shortest paths: each augmentation follows a cheapest path in
//! the residual graph, found by a queue-based label-correcting search on
//! reduced costs, after which node potentials absorb the distances. Costs
//! sit on student→project edges only and are computed either exactly
//! (`BigInt`) or in `f64`.
//!
//! With exponential weights on base `n1` the cheapest maximum flow is a
//! greedy (or generous) maximum matching as long as `n1 >= 2`. In `f64` the
//! weights stop being exactly representable once they pass 2^53, and the
//! result can silently go wrong; [`feasibility_sweep`] measures where.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num};
use rayon::prelude::*;

use crate::error::{Result, SpaError};
use crate::generator::{derive_seed, generate, GenConfig};
use crate::instance::{matching_stats, Matching, SpaInstance};
use crate::solver::{generous_max, greedy_max, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CostScheme {
    /// `n1^(R-1) - n1^(R-k)` for rank `k`.
    GreedyExp,
    /// `n1^(k-1)`.
    GenerousExp,
    /// `k`.
    Rank,
}

impl CostScheme {
    pub fn name(self) -> &'static str {
        match self {
            CostScheme::GreedyExp => "greedy_exp",
            CostScheme::GenerousExp => "generous_exp",
            CostScheme::Rank => "rank",
        }
    }
}

impl fmt::Display for CostScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostScheme {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "greedy_exp" | "greedy" => Ok(CostScheme::GreedyExp),
            "generous_exp" | "generous" => Ok(CostScheme::GenerousExp),
            "rank" => Ok(CostScheme::Rank),
            _ => Err(SpaError::Config(format!("unknown cost scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    /// Arbitrary-precision integers.
    Exact,
    /// IEEE 754 binary64.
    Float64,
}

impl Arithmetic {
    pub fn name(self) -> &'static str {
        match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Float64 => "float64",
        }
    }
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Arithmetic {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Arithmetic::Exact),
            "float64" | "f64" | "double" => Ok(Arithmetic::Float64),
            _ => Err(SpaError::Config(format!("unknown arithmetic {s:?}"))),
        }
    }
}

/// Numbers the shortest-path search can run on.
pub trait CostValue: Num + FromPrimitive + Clone + PartialOrd + fmt::Debug {}

impl<T: Num + FromPrimitive + Clone + PartialOrd + fmt::Debug> CostValue for T {}

/// Cost of a rank-`rank` edge under `scheme`, for `n1` students and
/// maximum rank `max_rank`.
pub fn edge_cost<C: CostValue>(scheme: CostScheme, n1: usize, max_rank: usize, rank: usize) -> C {
    let base = C::from_usize(n1).expect("student count fits the cost type");
    let power = |e: usize| num_traits::pow(base.clone(), e);
    match scheme {
        CostScheme::GreedyExp => power(max_rank - 1) - power(max_rank - rank),
        CostScheme::GenerousExp => power(rank - 1),
        CostScheme::Rank => C::from_usize(rank).expect("rank fits the cost type"),
    }
}

#[derive(Debug, Clone)]
pub struct McmfOutcome {
    pub result: SolveResult,
    /// `false` when the shortest-path search detected a negative cycle
    /// (only possible through rounding) and stopped early.
    pub completed: bool,
}

struct Residual<C> {
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<C>,
    adj: Vec<Vec<usize>>,
}

impl<C: CostValue> Residual<C> {
    fn link(&mut self, u: usize, v: usize, cap: i64, cost: C) -> usize {
        let id = self.to.len();
        self.adj[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.cost.push(cost.clone());
        self.adj[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        self.cost.push(C::zero() - cost);
        id
    }
}

fn run<C: CostValue>(instance: &SpaInstance, scheme: CostScheme) -> (Vec<Option<usize>>, bool, usize) {
    let n1 = instance.n_students();
    let n2 = instance.n_projects();
    let r = instance.max_rank();
    let source = 0;
    let sink = 1;
    let student = |s: usize| 2 + s;
    let project = |p: usize| 2 + n1 + p;
    let lecturer = |l: usize| 2 + n1 + n2 + l;
    let n = 2 + n1 + n2 + instance.n_lecturers();

    let mut g = Residual::<C> { to: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n] };
    for s in 0..n1 {
        g.link(source, student(s), 1, C::zero());
    }
    let mut assign_edges = Vec::new();
    for s in 0..n1 {
        for &(p, rank) in instance.acceptable(s) {
            let id = g.link(student(s), project(p), 1, edge_cost::<C>(scheme, n1, r, rank));
            assign_edges.push((id, s, p));
        }
    }
    for (p, proj) in instance.projects().iter().enumerate() {
        g.link(project(p), lecturer(proj.lecturer), proj.capacity as i64, C::zero());
    }
    for (l, lec) in instance.lecturers().iter().enumerate() {
        g.link(lecturer(l), sink, lec.upper_quota as i64, C::zero());
    }

    let mut potential = vec![C::zero(); n];
    let mut augmentations = 0;
    let completed = loop {
        let mut dist: Vec<Option<C>> = vec![None; n];
        let mut via = vec![usize::MAX; n];
        let mut queued = vec![false; n];
        let mut pushes = vec![0usize; n];
        let mut queue = std::collections::VecDeque::from([source]);
        dist[source] = Some(C::zero());
        queued[source] = true;
        let mut cycle = false;
        while let Some(u) = queue.pop_front() {
            queued[u] = false;
            let du = dist[u].clone().expect("queued nodes have a distance");
            for &e in &g.adj[u] {
                if g.cap[e] <= 0 {
                    continue;
                }
                let v = g.to[e];
                let nd = du.clone() + g.cost[e].clone() + potential[u].clone() - potential[v].clone();
                let shorter = match &dist[v] {
                    None => true,
                    Some(dv) => nd < *dv,
                };
                if shorter {
                    dist[v] = Some(nd);
                    via[v] = e;
                    if !queued[v] {
                        pushes[v] += 1;
                        if pushes[v] > n {
                            cycle = true;
                            break;
                        }
                        queued[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            if cycle {
                break;
            }
        }
        if cycle {
            break false;
        }
        if dist[sink].is_none() {
            break true;
        }
        for v in 0..n {
            if let Some(d) = &dist[v] {
                potential[v] = potential[v].clone() + d.clone();
            }
        }
        let mut v = sink;
        while v != source {
            let e = via[v];
            g.cap[e] -= 1;
            g.cap[e ^ 1] += 1;
            v = g.to[e ^ 1];
        }
        augmentations += 1;
    };

    let mut assignment = vec![None; n1];
    for (id, s, p) in assign_edges {
        if g.cap[id] == 0 {
            assignment[s] = Some(p);
        }
    }
    (assignment, completed, augmentations)
}

/// Cheapest maximum matching under `scheme`, computed in `arithmetic`.
pub fn solve_mcmf(instance: &SpaInstance, scheme: CostScheme, arithmetic: Arithmetic) -> Result<McmfOutcome> {
    let started = Instant::now();
    instance.ensure_valid()?;
    if instance.has_lower_quotas() {
        return Err(SpaError::Contract("the min-cost baseline does not handle lower quotas".into()));
    }
    let (assignment, completed, iterations) = match arithmetic {
        Arithmetic::Exact => run::<BigInt>(instance, scheme),
        Arithmetic::Float64 => run::<f64>(instance, scheme),
    };
    let matching = Matching::from_assignment(assignment);
    let stats = matching_stats(instance, &matching)?;
    Ok(McmfOutcome {
        result: SolveResult {
            matching: Some(matching),
            stats: Some(stats),
            iterations,
            elapsed: started.elapsed().as_secs_f64(),
        },
        completed,
    })
}

/// Whether a baseline run fails to reproduce the exact solver: it stopped
/// early, found a smaller matching, or a different profile.
pub fn disagrees(outcome: &McmfOutcome, exact: &SolveResult) -> bool {
    match (&outcome.result.stats, &exact.stats) {
        (Some(a), Some(b)) => !outcome.completed || a.size != b.size || a.profile != b.profile,
        _ => true,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityConfig {
    pub n1_values: Vec<usize>,
    pub r_min: usize,
    /// List lengths run up to `min(r_cap, ⌊1.2·n1⌋)`.
    pub r_cap: usize,
    pub trials: usize,
    pub scheme: CostScheme,
    pub arithmetic: Arithmetic,
    pub seed: u64,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        FeasibilityConfig {
            n1_values: (1..=10).map(|i| 10 * i).collect(),
            r_min: 5,
            r_cap: 20,
            trials: 100,
            scheme: CostScheme::GreedyExp,
            arithmetic: Arithmetic::Float64,
            seed: 0,
        }
    }
}

impl FeasibilityConfig {
    pub fn r_values(&self, n1: usize) -> std::ops::RangeInclusive<usize> {
        self.r_min..=self.r_cap.min(n1 * 12 / 10)
    }

    /// Instance for one sweep cell: generator defaults, except that the
    /// project count is raised to `R` when lists are longer than the default
    /// `⌊0.3·n1⌋` projects allow.
    pub fn instance_config(&self, n1: usize, r: usize, trial: usize) -> GenConfig {
        let n2 = (n1 * 3 / 10).max(r).max(1);
        GenConfig {
            n2: Some(n2),
            r_min: r,
            r_max: r,
            project_capacity: Some((n1 * 12 / 10).max(n2) as u32),
            seed: derive_seed(self.seed, &[n1 as u64, r as u64, trial as u64]),
            ..GenConfig::with_n1(n1)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityCell {
    pub n1: usize,
    pub r: usize,
    pub trials: usize,
    pub disagreements: usize,
}

#[derive(Debug, Clone)]
pub struct FeasibilityTable {
    pub config: FeasibilityConfig,
    /// Ordered by `n1`, then `r`.
    pub cells: Vec<FeasibilityCell>,
}

impl FeasibilityTable {
    pub fn cell(&self, n1: usize, r: usize) -> Option<&FeasibilityCell> {
        self.cells.iter().find(|c| c.n1 == n1 && c.r == r)
    }

    /// Smallest list length with at least one disagreement.
    pub fn first_disagreement(&self, n1: usize) -> Option<usize> {
        self.cells.iter().find(|c| c.n1 == n1 && c.disagreements > 0).map(|c| c.r)
    }

    /// `n1,R_first_disagreement,trials,scheme,mode`, one row per `n1`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("n1,R_first_disagreement,trials,scheme,mode\n");
        for &n1 in &self.config.n1_values {
            let first = self.first_disagreement(n1).map_or("none".to_string(), |r| r.to_string());
            out += &format!(
                "{n1},{first},{},{},{}\n",
                self.config.trials, self.config.scheme, self.config.arithmetic
            );
        }
        out
    }

    /// `n1,R,trials,disagreements,scheme,mode`, one row per cell.
    pub fn cells_csv(&self) -> String {
        let mut out = String::from("n1,R,trials,disagreements,scheme,mode\n");
        for c in &self.cells {
            out += &format!(
                "{},{},{},{},{},{}\n",
                c.n1, c.r, c.trials, c.disagreements, self.config.scheme, self.config.arithmetic
            );
        }
        out
    }
}

/// Runs the baseline and the exact solver side by side over a grid of
/// student counts and list lengths, counting disagreements per cell.
pub fn feasibility_sweep(config: &FeasibilityConfig) -> Result<FeasibilityTable> {
    if config.scheme == CostScheme::Rank {
        return Err(SpaError::Config("the sweep compares exponential schemes only".into()));
    }
    if config.trials == 0 {
        return Err(SpaError::Config("trials must be at least 1".into()));
    }
    let cells: Vec<(usize, usize)> = config
        .n1_values
        .iter()
        .flat_map(|&n1| config.r_values(n1).map(move |r| (n1, r)))
        .collect();
    let jobs: Vec<(usize, usize, usize)> = cells
        .iter()
        .flat_map(|&(n1, r)| (0..config.trials).map(move |t| (n1, r, t)))
        .collect();
    let verdicts: Vec<bool> = jobs
        .par_iter()
        .map(|&(n1, r, t)| {
            let gen = config.instance_config(n1, r, t);
            let instance = generate(&gen)?;
            let exact = match config.scheme {
                CostScheme::GreedyExp => greedy_max(&instance)?,
                _ => generous_max(&instance)?,
            };
            let outcome = solve_mcmf(&instance, config.scheme, config.arithmetic)?;
            Ok(disagrees(&outcome, &exact))
        })
        .collect::<Result<_>>()?;
    let cells = cells
        .iter()
        .enumerate()
        .map(|(i, &(n1, r))| FeasibilityCell {
            n1,
            r,
            trials: config.trials,
            disagreements: verdicts[i * config.trials..(i + 1) * config.trials]
                .iter()
                .filter(|&&d| d)
                .count(),
        })
        .collect();
    Ok(FeasibilityTable { config: config.clone(), cells })
}
