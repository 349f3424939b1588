//! Acceptance runner: one PASS/FAIL line per criterion, non-zero exit if
//! any criterion fails. Built with `harness = false` so the lines always
//! reach the console.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{orders_are_total, random_instance, random_profile, round_trips_hold, search_steps_are_sound, solvers_match_oracle, Shape, CRITERIA};
use spa_core::bench::{profile_breakdown, sweep, Algorithm, SweepConfig, SweepParam};
use spa_core::generator::{derive_seed, generate, GenConfig};
use spa_core::instance::{example_instance, example_lower_quota_instance};
use spa_core::mcmf::{feasibility_sweep, solve_mcmf, Arithmetic, CostScheme, FeasibilityConfig};
use spa_core::solver::{generous_max, greedy_max, greedy_max_constrained};
use spa_core::{Profile, SpaInstance};

const ORACLE_INSTANCES: u64 = 1000;
const ORACLE_SECONDS: f64 = 60.0;
const MCMF_INSTANCES: u64 = 200;
const FEASIBILITY_TRIALS: usize = 100;
const TABLE_INSTANCES: usize = 500;
const RANK_ONE_GAP_PP: f64 = 5.0;
const GENEROUS_DEGREE_LIMIT: usize = 4;
const GENEROUS_DEGREE_SHARE: f64 = 0.95;
const SCALE_N1: usize = 700;
const SCALE_SECONDS: f64 = 60.0;
const PROPERTY_CASES: u32 = 10_000;

type Verdict = Result<String, String>;

fn pairs(result: &spa_core::solver::SolveResult) -> Vec<(usize, usize)> {
    result.matching.as_ref().map(|m| m.pairs()).unwrap_or_default()
}

fn profile(result: &spa_core::solver::SolveResult) -> Option<Profile> {
    result.stats.as_ref().map(|s| s.profile.clone())
}

fn figure_one() -> Verdict {
    let inst = example_instance();
    let started = Instant::now();
    let greedy = greedy_max(&inst).map_err(|e| e.to_string())?;
    let generous = generous_max(&inst).map_err(|e| e.to_string())?;
    let ms = started.elapsed().as_secs_f64() * 1e3;
    let ok = pairs(&greedy) == [(0, 2), (1, 0), (2, 1)]
        && profile(&greedy) == Some(Profile::Finite(vec![2, 0, 1]))
        && pairs(&generous) == [(0, 1), (1, 0), (2, 2)]
        && profile(&generous) == Some(Profile::Finite(vec![1, 2, 0]));
    let detail = format!(
        "greedy {:?} {:?}, generous {:?} {:?}, {ms:.3} ms for both",
        pairs(&greedy),
        profile(&greedy),
        pairs(&generous),
        profile(&generous)
    );
    if ok && ms < 1.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn figure_two() -> Verdict {
    let inst = example_lower_quota_instance();
    let constrained = greedy_max_constrained(&inst).map_err(|e| e.to_string())?;
    let relaxed = greedy_max(&common::relaxed(&inst)).map_err(|e| e.to_string())?;
    // the instance's longest list has two entries, so profiles have two components
    let ok = pairs(&constrained) == [(0, 1), (1, 1), (2, 2)]
        && profile(&constrained) == Some(Profile::Finite(vec![1, 2]))
        && profile(&relaxed) == Some(Profile::Finite(vec![2, 1]));
    let detail = format!(
        "greedy-l {:?} {:?}, with d2- = 0 {:?}",
        pairs(&constrained),
        profile(&constrained),
        profile(&relaxed)
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equivalence() -> Verdict {
    let started = Instant::now();
    let mut infeasible = 0;
    for i in 0..ORACLE_INSTANCES {
        let ties = if i % 2 == 0 { 0.0 } else { 0.3 };
        let lower = (i / 2) % 2 == 0;
        let instance = random_instance(derive_seed(2024, &[i]), Shape::small(8, ties, lower));
        let table = spa_core::oracle::enumerate_all(&instance, &Default::default()).map_err(|e| e.to_string())?;
        infeasible += usize::from(table.max_size(true).is_none());
        solvers_match_oracle(&instance).map_err(|e| format!("instance {i}: {e}"))?;
    }
    let secs = started.elapsed().as_secs_f64();
    let detail = format!("{ORACLE_INSTANCES} instances ({infeasible} infeasible), 4 solvers each, {secs:.2} s");
    if secs < ORACLE_SECONDS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mcmf_mutual_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..MCMF_INSTANCES {
        use rand::Rng;
        let n1 = rng.gen_range(2..=40);
        let n2 = (n1 * 3 / 10).max(1);
        let r = rng.gen_range(1..=n2.min(8));
        let cfg = GenConfig { seed: derive_seed(77, &[i]), r_min: 1, r_max: r, tie_density: if i % 3 == 0 { 0.3 } else { 0.0 }, ..GenConfig::with_n1(n1) };
        let inst = generate(&cfg).map_err(|e| e.to_string())?;
        for (scheme, exact) in [
            (CostScheme::GreedyExp, greedy_max(&inst)),
            (CostScheme::GenerousExp, generous_max(&inst)),
        ] {
            let exact = exact.map_err(|e| e.to_string())?;
            let outcome = solve_mcmf(&inst, scheme, Arithmetic::Exact).map_err(|e| e.to_string())?;
            if !outcome.completed || profile(&outcome.result) != profile(&exact) {
                return Err(format!(
                    "instance {i} (n1={n1}, R<={r}) {scheme}: mcmf {:?}, solver {:?}",
                    profile(&outcome.result),
                    profile(&exact)
                ));
            }
        }
    }
    Ok(format!("{MCMF_INSTANCES} instances, n1 in 2..=40, R <= 8, both weight schemes"))
}

fn float_infeasibility() -> Verdict {
    let started = Instant::now();
    let cfg = FeasibilityConfig { trials: FEASIBILITY_TRIALS, ..FeasibilityConfig::default() };
    let table = feasibility_sweep(&cfg).map_err(|e| e.to_string())?;
    let at = |n1, r| table.cell(n1, r).map(|c| c.disagreements);
    let (big, small) = (at(100, 10), at(10, 5));
    let firsts: Vec<String> = cfg
        .n1_values
        .iter()
        .map(|&n1| format!("{n1}:{}", table.first_disagreement(n1).map_or("-".into(), |r| r.to_string())))
        .collect();
    let detail = format!(
        "disagreements (100,10)={big:?} (10,5)={small:?}; first R per n1 [{}]; {} cells x {FEASIBILITY_TRIALS} trials, {:.1} s",
        firsts.join(" "),
        table.cells.len(),
        started.elapsed().as_secs_f64()
    );
    match (big, small) {
        (Some(b), Some(0)) if b > 0 => Ok(detail),
        _ => Err(detail),
    }
}

fn order_properties() -> Verdict {
    let algorithms = vec![Algorithm::Greedy, Algorithm::Generous, Algorithm::MinCost];
    let runs = [
        (SweepParam::N1, vec![40.0, 100.0, 200.0]),
        (SweepParam::R, vec![2.0, 5.0, 10.0]),
        (SweepParam::Popularity, vec![1.0, 10.0]),
        (SweepParam::TieDensity, vec![0.3, 0.8]),
    ];
    let mut instances = 0;
    for (param, values) in runs {
        let cfg = SweepConfig {
            param,
            values,
            trials: 25,
            algorithms: algorithms.clone(),
            base: GenConfig::default(),
            seed: 6,
            timing: false,
        };
        instances += sweep(&cfg).map_err(|e| e.to_string())?.len() / algorithms.len();
    }
    Ok(format!("{instances} bench instances over n1, R, popularity and tie density sweeps"))
}

fn table_four() -> Verdict {
    let cfg = SweepConfig {
        param: SweepParam::N1,
        values: vec![100.0],
        trials: TABLE_INSTANCES,
        algorithms: vec![Algorithm::Greedy, Algorithm::Generous, Algorithm::MinCost],
        base: GenConfig::default(),
        seed: 4,
        timing: false,
    };
    let reports = sweep(&cfg).map_err(|e| e.to_string())?;
    let breakdown = profile_breakdown(&reports);
    let rank_one = |a: Algorithm| breakdown.iter().find(|b| b.algorithm == a).map_or(0.0, |b| b.percent_by_rank[0]);
    let (greedy, generous, mincost) = (rank_one(Algorithm::Greedy), rank_one(Algorithm::Generous), rank_one(Algorithm::MinCost));
    let generous_runs: Vec<_> = reports.iter().filter(|r| r.algorithm == Algorithm::Generous).collect();
    let within = generous_runs.iter().filter(|r| r.degree <= GENEROUS_DEGREE_LIMIT).count();
    let share = within as f64 / generous_runs.len() as f64;
    let max_degree = generous_runs.iter().map(|r| r.degree).max().unwrap_or(0);
    let detail = format!(
        "rank-1 % greedy {greedy:.2} generous {generous:.2} mincost {mincost:.2}; generous degree <= {GENEROUS_DEGREE_LIMIT} in {:.1}% (max {max_degree}) of {TABLE_INSTANCES}",
        share * 100.0
    );
    if greedy - generous >= RANK_ONE_GAP_PP && share >= GENEROUS_DEGREE_SHARE {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn scale_smoke() -> Verdict {
    let inst: SpaInstance = generate(&GenConfig { seed: 700, ..GenConfig::with_n1(SCALE_N1) }).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, run) in [("greedy", greedy_max as fn(&SpaInstance) -> _), ("generous", generous_max)] {
        let result = run(&inst).map_err(|e| e.to_string())?;
        ok &= result.elapsed < SCALE_SECONDS;
        parts.push(format!("{name} {:.2} s (size {})", result.elapsed, result.stats.map_or(0, |s| s.size)));
    }
    let detail = format!("n1={SCALE_N1}: {}", parts.join(", "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn fail<T: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<T>) -> String {
    format!("{name}: {e}")
}

fn property_suites() -> Verdict {
    let runner = || TestRunner::new(Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() });
    let ran = std::cell::Cell::new([0u32; 3]);
    let count = |suite: usize| {
        let mut counts = ran.get();
        counts[suite] += 1;
        ran.set(counts);
    };
    runner()
        .run(&(any::<u64>(), 1usize..5), |(seed, dim)| {
            count(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (a, b, c) = (random_profile(&mut rng, dim), random_profile(&mut rng, dim), random_profile(&mut rng, dim));
            prop_assert_eq!(orders_are_total(&a, &b, &c), Ok(()));
            Ok(())
        })
        .map_err(|e| fail("profile orders", e))?;
    runner()
        .run(&(any::<u64>(), any::<bool>()), |(seed, ties)| {
            count(1);
            let instance = random_instance(seed, Shape::small(6, if ties { 0.3 } else { 0.0 }, false));
            for criterion in CRITERIA {
                prop_assert_eq!(search_steps_are_sound(&instance, criterion), Ok(()));
            }
            Ok(())
        })
        .map_err(|e| fail("augmentation and label soundness", e))?;
    runner()
        .run(&(any::<u64>(), any::<bool>()), |(seed, lower)| {
            count(2);
            let instance = random_instance(seed, Shape::small(8, 0.3, lower));
            prop_assert_eq!(round_trips_hold(&instance), Ok(()));
            Ok(())
        })
        .map_err(|e| fail("round trips", e))?;
    let [orders, soundness, round_trips] = ran.get();
    if ran.get().iter().any(|&n| n < PROPERTY_CASES) {
        return Err(format!("too few cases ran: {orders}, {soundness}, {round_trips}"));
    }
    Ok(format!(
        "cases run: profile orders {orders}, augmentation identity with label soundness (n1 <= 6) {soundness}, round trips {round_trips}"
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("Figure 1 golden greedy/generous", figure_one),
        ("Figure 2 golden lower-quota greedy", figure_two),
        ("solvers equal exhaustive search", oracle_equivalence),
        ("exact min-cost flow reproduces solvers", mcmf_mutual_oracle),
        ("float64 min-cost flow breaks at scale", float_infeasibility),
        ("per-instance order properties", order_properties),
        ("greedy/generous rank breakdown", table_four),
        ("n1=700 runtime", scale_smoke),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let verdict = check();
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{secs:.1} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {detail} [{secs:.1} s]", i + 1)
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
