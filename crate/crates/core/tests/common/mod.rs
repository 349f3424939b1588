//! Shared random instances and property checks for the integration tests
//! and the acceptance runner.

#![allow(dead_code)]

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spa_core::format::{parse_instance, parse_matching, write_instance, write_matching};
use spa_core::instance::{check_matching, matching_stats, meets_lower_quotas, Lecturer, Project, Student};
use spa_core::network::{flow_from_matching, matching_from_flow, path_profile};
use spa_core::oracle::{enumerate_all, enumerate_paths, OracleBudget, Size};
use spa_core::search::{best_path, check_labels, compute_labels};
use spa_core::solver::{solve, solve_constrained, SolveResult};
use spa_core::{Criterion, Flow, FlowNetwork, Profile, SpaInstance};

pub const CRITERIA: [Criterion; 2] = [Criterion::Greedy, Criterion::Generous];

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_students: usize,
    pub max_projects: usize,
    pub max_lecturers: usize,
    pub max_len: usize,
    pub tie_density: f64,
    pub lower_quotas: bool,
}

impl Shape {
    pub fn small(max_students: usize, tie_density: f64, lower_quotas: bool) -> Shape {
        Shape { max_students, max_projects: 5, max_lecturers: 3, max_len: 4, tie_density, lower_quotas }
    }
}

/// Random instance drawn directly, so shapes the generator never produces
/// (empty lists, capacity-heavy projects, idle lecturers) also appear.
pub fn random_instance(seed: u64, shape: Shape) -> SpaInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n1 = rng.gen_range(1..=shape.max_students);
    let n2 = rng.gen_range(1..=shape.max_projects);
    let n3 = rng.gen_range(1..=shape.max_lecturers.min(n2));
    let projects: Vec<Project> = (0..n2)
        .map(|_| Project { capacity: rng.gen_range(1..=3), lecturer: rng.gen_range(0..n3) })
        .collect();
    let lecturers: Vec<Lecturer> = (0..n3)
        .map(|_| {
            let upper_quota = rng.gen_range(1..=4);
            let lower_quota = if shape.lower_quotas { rng.gen_range(0..=upper_quota.min(2)) } else { 0 };
            Lecturer { upper_quota, lower_quota }
        })
        .collect();
    let mut ids: Vec<usize> = (0..n2).collect();
    let students = (0..n1)
        .map(|_| {
            ids.shuffle(&mut rng);
            let len = rng.gen_range(0..=shape.max_len.min(n2));
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for &p in &ids[..len] {
                match groups.last_mut() {
                    Some(g) if rng.gen_bool(shape.tie_density) => g.push(p),
                    _ => groups.push(vec![p]),
                }
            }
            Student::new(groups)
        })
        .collect();
    SpaInstance::new(students, projects, lecturers)
}

pub fn relaxed(instance: &SpaInstance) -> SpaInstance {
    let lecturers = instance
        .lecturers()
        .iter()
        .map(|l| Lecturer { lower_quota: 0, ..*l })
        .collect();
    instance.with_lecturers(lecturers)
}

fn profile_of(result: &SolveResult) -> Option<Profile> {
    result.stats.as_ref().map(|s| s.profile.clone())
}

/// Solver output against exhaustive enumeration: greedy and generous,
/// constrained and unconstrained, including the infeasibility verdict.
pub fn solvers_match_oracle(instance: &SpaInstance) -> Result<(), String> {
    let table = enumerate_all(instance, &OracleBudget::default()).map_err(|e| e.to_string())?;
    for criterion in CRITERIA {
        let constrained = solve_constrained(instance, criterion, &mut |_| {}).map_err(|e| e.to_string())?;
        let expected = table.best(Size::Max, criterion, true).map(|(p, _)| p);
        if profile_of(&constrained) != expected {
            return Err(format!(
                "{} constrained: solver {:?}, oracle {:?}",
                criterion.name(),
                profile_of(&constrained),
                expected
            ));
        }
        if let Some(m) = &constrained.matching {
            check_matching(instance, m).map_err(|e| e.to_string())?;
            if !meets_lower_quotas(instance, m) {
                return Err("constrained matching misses a lower quota".into());
            }
        }

        let free = relaxed(instance);
        let free_table = if instance.has_lower_quotas() {
            enumerate_all(&free, &OracleBudget::default()).map_err(|e| e.to_string())?
        } else {
            table.clone()
        };
        let plain = solve(&free, criterion, &mut |_| {}).map_err(|e| e.to_string())?;
        let expected = free_table.best(Size::Max, criterion, false).map(|(p, _)| p);
        if profile_of(&plain) != expected {
            return Err(format!(
                "{} unconstrained: solver {:?}, oracle {:?}",
                criterion.name(),
                profile_of(&plain),
                expected
            ));
        }
    }
    Ok(())
}

/// Runs the solver loop by hand. At every step: each label is the profile
/// of a real partial path, the chosen path is as good as any augmenting
/// path found by exhaustive search, and augmenting adds exactly the path's
/// profile to the matching profile.
pub fn search_steps_are_sound(instance: &SpaInstance, criterion: Criterion) -> Result<(), String> {
    let err = |e: spa_core::SpaError| e.to_string();
    let net = FlowNetwork::build(instance);
    let mut flow = Flow::zero(&net);
    loop {
        let state = compute_labels(&net, &flow, criterion, &mut |_| {}).map_err(err)?;
        check_labels(&state, &net, &flow).map_err(err)?;
        let census = enumerate_paths(&net, &flow, criterion, &OracleBudget::default()).map_err(err)?;
        for p in 0..net.n_projects() {
            let label = &state.labels[p];
            if !label.is_finite() {
                continue;
            }
            if !census.partial_profiles[p].contains(label) {
                return Err(format!("label {label} of project {} matches no partial path", p + 1));
            }
            if criterion.better(label, &census.best_partial[p]).map_err(err)? {
                return Err(format!("label {label} of project {} beats every partial path", p + 1));
            }
        }
        let found = best_path(&state, &net, &flow).map_err(err)?;
        let best = census.best.as_ref().map(|p| p.profile.clone());
        match (&found, &best) {
            (None, None) => return Ok(()),
            (Some(path), Some(expected)) if &path.profile == expected => {}
            _ => {
                return Err(format!(
                    "search found {:?}, exhaustive best {:?}",
                    found.as_ref().map(|p| p.profile.to_string()),
                    best.map(|p| p.to_string())
                ))
            }
        }
        let path = found.unwrap();
        if path_profile(&net, &flow, &path.nodes).map_err(err)? != path.profile {
            return Err("stored path profile differs from its edges".into());
        }
        let before = matching_stats(instance, &matching_from_flow(&net, &flow).map_err(err)?).map_err(err)?;
        let delta = flow.augment(&net, &path).map_err(err)?;
        flow.check(&net).map_err(err)?;
        let after = matching_stats(instance, &matching_from_flow(&net, &flow).map_err(err)?).map_err(err)?;
        if after.profile != before.profile.add(&delta).map_err(err)? || delta != path.profile {
            return Err(format!("profile {} + path {delta} gave {}", before.profile, after.profile));
        }
        if after.size != before.size + 1 {
            return Err("augmentation did not grow the matching by one".into());
        }
    }
}

/// Instance text, matching text and flow all survive a round trip.
pub fn round_trips_hold(instance: &SpaInstance) -> Result<(), String> {
    let err = |e: spa_core::SpaError| e.to_string();
    let text = write_instance(instance);
    let parsed = parse_instance(&text).map_err(err)?;
    if &parsed != instance {
        return Err(format!("instance changed after a text round trip:\n{text}"));
    }
    let result = solve(&relaxed(instance), Criterion::Greedy, &mut |_| {}).map_err(err)?;
    let (matching, stats) = (result.matching.unwrap(), result.stats.unwrap());
    let back = parse_matching(&write_matching(&matching, &stats), instance.n_students()).map_err(err)?;
    if back != matching {
        return Err("matching changed after a text round trip".into());
    }
    let net = FlowNetwork::build(instance);
    let flow = flow_from_matching(&net, &matching).map_err(err)?;
    if matching_from_flow(&net, &flow).map_err(err)? != matching {
        return Err("matching changed after a flow round trip".into());
    }
    Ok(())
}

pub fn random_profile(rng: &mut impl Rng, dim: usize) -> Profile {
    match rng.gen_range(0..12) {
        0 => Profile::NegInf,
        1 => Profile::PosInf,
        _ => Profile::Finite((0..dim).map(|_| rng.gen_range(-2..=2)).collect()),
    }
}

/// Both orders are antisymmetric, transitive and agree with equality, and
/// the criteria's `better` matches them.
pub fn orders_are_total(a: &Profile, b: &Profile, c: &Profile) -> Result<(), String> {
    let orders: [(&str, fn(&Profile, &Profile) -> Ordering); 2] = [
        ("left", |x, y| x.left_cmp(y).unwrap()),
        ("right", |x, y| x.right_cmp(y).unwrap()),
    ];
    for (name, cmp) in orders {
        let (ab, ba) = (cmp(a, b), cmp(b, a));
        if ab != ba.reverse() {
            return Err(format!("{name}: {a} vs {b} is not antisymmetric"));
        }
        if (ab == Ordering::Equal) != (a == b) {
            return Err(format!("{name}: {a} vs {b} equal without being identical"));
        }
        let bc = cmp(b, c);
        if ab == bc && ab != Ordering::Equal && cmp(a, c) != ab {
            return Err(format!("{name}: {a}, {b}, {c} not transitive"));
        }
    }
    let greedy_better = Criterion::Greedy.better(a, b).unwrap();
    let generous_better = Criterion::Generous.better(a, b).unwrap();
    if greedy_better != (a.left_cmp(b).unwrap() == Ordering::Greater)
        || generous_better != (a.right_cmp(b).unwrap() == Ordering::Less)
    {
        return Err(format!("criteria disagree with the orders on {a}, {b}"));
    }
    Ok(())
}
