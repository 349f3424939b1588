//! Greedy and generous maximum matchings by repeated best-profile
//! augmentation, and their variants for lecturer lower quotas.

use std::time::Instant;

use crate::error::{Result, SpaError};
use crate::instance::{matching_stats, meets_lower_quotas, Matching, MatchingStats, SpaInstance};
use crate::network::{matching_from_flow, plain_max_flow, Flow, FlowNetwork};
use crate::profile::{Criterion, Profile};
use crate::search::{find_aug_path_traced, LabelUpdate};

#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `None` only for a constrained solve whose lower quotas cannot be met.
    pub matching: Option<Matching>,
    pub stats: Option<MatchingStats>,
    /// Augmentations performed, over both phases for constrained solves.
    pub iterations: usize,
    /// Wall time of the whole solve in seconds.
    pub elapsed: f64,
}

/// Augments `flow` along best paths until none is left. Returns the number
/// of augmentations and the summed path profiles.
fn augment_until_maximum(
    net: &FlowNetwork,
    flow: &mut Flow,
    criterion: Criterion,
    trace: &mut dyn FnMut(&LabelUpdate),
) -> Result<(usize, Profile)> {
    let mut steps = 0;
    let mut gained = Profile::empty(net.max_rank())?;
    while let Some(path) = find_aug_path_traced(net, flow, criterion, trace)? {
        log::trace!("augment {path}");
        let delta = flow.augment(net, &path)?;
        gained = gained.add(&delta)?;
        steps += 1;
    }
    Ok((steps, gained))
}

fn finish(
    instance: &SpaInstance,
    net: &FlowNetwork,
    flow: &Flow,
    expected_profile: &Profile,
    iterations: usize,
    started: Instant,
) -> Result<SolveResult> {
    let matching = matching_from_flow(net, flow)?;
    let stats = matching_stats(instance, &matching)?;
    if &stats.profile != expected_profile {
        return Err(SpaError::Invariant(format!(
            "matching profile {} differs from the sum of path profiles {expected_profile}",
            stats.profile
        )));
    }
    let max = plain_max_flow(net);
    if stats.size != max {
        return Err(SpaError::Invariant(format!(
            "matching has size {} but the maximum flow is {max}",
            stats.size
        )));
    }
    Ok(SolveResult {
        matching: Some(matching),
        stats: Some(stats),
        iterations,
        elapsed: started.elapsed().as_secs_f64(),
    })
}

/// Maximum matching that is best under `criterion` among maximum matchings.
/// Lecturer lower quotas must all be zero.
pub fn solve(
    instance: &SpaInstance,
    criterion: Criterion,
    trace: &mut dyn FnMut(&LabelUpdate),
) -> Result<SolveResult> {
    let started = Instant::now();
    instance.ensure_valid()?;
    if instance.has_lower_quotas() {
        return Err(SpaError::Contract(
            "instance has lecturer lower quotas; use the constrained solver".into(),
        ));
    }
    let net = FlowNetwork::build(instance);
    let mut flow = Flow::zero(&net);
    let (iterations, gained) = augment_until_maximum(&net, &mut flow, criterion, trace)?;
    finish(instance, &net, &flow, &gained, iterations, started)
}

/// As [`solve`], restricted to matchings that give every lecturer at least
/// their lower quota. Returns a result without a matching when no such
/// matching exists.
///
/// First the lower quotas are filled: the same solver runs with each
/// lecturer's upper quota set to their lower quota. If that cannot saturate
/// every lecturer the instance is infeasible. Otherwise the flow is carried
/// over to the real capacities and augmentation continues.
pub fn solve_constrained(
    instance: &SpaInstance,
    criterion: Criterion,
    trace: &mut dyn FnMut(&LabelUpdate),
) -> Result<SolveResult> {
    let started = Instant::now();
    instance.ensure_valid()?;
    let net = FlowNetwork::build(instance);
    let lower: Vec<u32> = instance.lecturers().iter().map(|l| l.lower_quota).collect();
    let filling = net.with_lecturer_caps(lower)?;

    let mut first = Flow::zero(&filling);
    let (first_steps, first_gain) = augment_until_maximum(&filling, &mut first, criterion, trace)?;
    let needed = instance.total_lower_quota();
    if (first.value() as u64) < needed {
        log::debug!("lower quotas need {needed} assignments, only {} possible", first.value());
        return Ok(SolveResult {
            matching: None,
            stats: None,
            iterations: first_steps,
            elapsed: started.elapsed().as_secs_f64(),
        });
    }

    let mut flow = first.lift(&net)?;
    let (second_steps, second_gain) = augment_until_maximum(&net, &mut flow, criterion, trace)?;
    let result = finish(
        instance,
        &net,
        &flow,
        &first_gain.add(&second_gain)?,
        first_steps + second_steps,
        started,
    )?;
    if let Some(m) = &result.matching {
        if !meets_lower_quotas(instance, m) {
            return Err(SpaError::Invariant("constrained matching misses a lower quota".into()));
        }
    }
    Ok(result)
}

pub fn greedy_max(instance: &SpaInstance) -> Result<SolveResult> {
    solve(instance, Criterion::Greedy, &mut |_| {})
}

pub fn generous_max(instance: &SpaInstance) -> Result<SolveResult> {
    solve(instance, Criterion::Generous, &mut |_| {})
}

pub fn greedy_max_constrained(instance: &SpaInstance) -> Result<SolveResult> {
    solve_constrained(instance, Criterion::Greedy, &mut |_| {})
}

pub fn generous_max_constrained(instance: &SpaInstance) -> Result<SolveResult> {
    solve_constrained(instance, Criterion::Generous, &mut |_| {})
}
