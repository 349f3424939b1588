//! Exhaustive enumeration on small instances, used as ground truth.
//!
//! Nothing here shares code paths with the solver beyond the instance and
//! network types: matchings are enumerated by plain DFS over
//! assign-or-skip choices per student, and augmenting paths by DFS over the
//! full residual graph.

use std::cmp::Ordering;

use crate::error::{Result, SpaError};
use crate::instance::{Matching, SpaInstance};
use crate::network::{AugPath, Flow, FlowNetwork, Node};
use crate::profile::{Criterion, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_students: usize,
    pub max_list_len: usize,
    /// Search states visited before giving up.
    pub node_limit: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_students: 8, max_list_len: 4, node_limit: 20_000_000 }
    }
}

/// Requested matching size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Size {
    Exactly(usize),
    /// The largest size with any feasible matching.
    Max,
}

#[derive(Debug, Clone)]
struct Best {
    counts: Vec<i32>,
    assignment: Vec<Option<usize>>,
}

/// Best profile per size, for both criteria, with and without lower quotas.
#[derive(Debug, Clone)]
pub struct OracleTable {
    max_rank: usize,
    /// Indexed `[constrained as usize][criterion][size]`.
    best: [[Vec<Option<Best>>; 2]; 2],
}

fn criterion_index(c: Criterion) -> usize {
    match c {
        Criterion::Greedy => 0,
        Criterion::Generous => 1,
    }
}

impl OracleTable {
    /// Best matching of the requested size, or `None` if no feasible
    /// matching has that size.
    pub fn best(&self, size: Size, criterion: Criterion, constrained: bool) -> Option<(Profile, Matching)> {
        let row = &self.best[constrained as usize][criterion_index(criterion)];
        let entry = match size {
            Size::Exactly(k) => row.get(k)?.as_ref()?,
            Size::Max => row.iter().rev().find_map(Option::as_ref)?,
        };
        let profile = Profile::Finite(entry.counts.clone());
        Some((profile, Matching::from_assignment(entry.assignment.clone())))
    }

    /// Largest feasible matching size.
    pub fn max_size(&self, constrained: bool) -> Option<usize> {
        self.best[constrained as usize][0].iter().rposition(Option::is_some)
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }
}

fn check_instance_budget(instance: &SpaInstance, budget: &OracleBudget) -> Result<()> {
    if instance.n_students() > budget.max_students {
        return Err(SpaError::OracleBudget(format!(
            "{} students, limit {}",
            instance.n_students(),
            budget.max_students
        )));
    }
    if let Some(s) = (0..instance.n_students()).find(|&s| instance.acceptable(s).len() > budget.max_list_len) {
        return Err(SpaError::OracleBudget(format!(
            "student {} lists {} projects, limit {}",
            s + 1,
            instance.acceptable(s).len(),
            budget.max_list_len
        )));
    }
    Ok(())
}

struct MatchingSearch<'a> {
    instance: &'a SpaInstance,
    node_limit: u64,
    visited: u64,
    project_load: Vec<u32>,
    lecturer_load: Vec<u32>,
    counts: Vec<i32>,
    assignment: Vec<Option<usize>>,
    size: usize,
    table: OracleTable,
}

impl MatchingSearch<'_> {
    fn dfs(&mut self, student: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.node_limit {
            return Err(SpaError::OracleBudget(format!("more than {} search states", self.node_limit)));
        }
        if student == self.instance.n_students() {
            self.record();
            return Ok(());
        }
        for &(p, rank) in self.instance.acceptable(student) {
            let project = self.instance.projects()[p];
            let l = project.lecturer;
            if self.project_load[p] >= project.capacity
                || self.lecturer_load[l] >= self.instance.lecturers()[l].upper_quota
            {
                continue;
            }
            self.project_load[p] += 1;
            self.lecturer_load[l] += 1;
            self.counts[rank - 1] += 1;
            self.assignment[student] = Some(p);
            self.size += 1;
            self.dfs(student + 1)?;
            self.size -= 1;
            self.assignment[student] = None;
            self.counts[rank - 1] -= 1;
            self.lecturer_load[l] -= 1;
            self.project_load[p] -= 1;
        }
        self.dfs(student + 1)
    }

    fn record(&mut self) {
        let meets_lower = self
            .instance
            .lecturers()
            .iter()
            .zip(&self.lecturer_load)
            .all(|(l, &load)| load >= l.lower_quota);
        for constrained in [false, true] {
            if constrained && !meets_lower {
                continue;
            }
            for c in [Criterion::Greedy, Criterion::Generous] {
                let slot = &mut self.table.best[constrained as usize][criterion_index(c)][self.size];
                let improves = match slot {
                    None => true,
                    Some(b) => match c {
                        Criterion::Greedy => self.counts.cmp(&b.counts) == Ordering::Greater,
                        Criterion::Generous => self.counts.iter().rev().cmp(b.counts.iter().rev()) == Ordering::Less,
                    },
                };
                if improves {
                    *slot = Some(Best { counts: self.counts.clone(), assignment: self.assignment.clone() });
                }
            }
        }
    }
}

/// Enumerates every matching of the instance once and tabulates the best
/// profile per size for both criteria, with and without lower quotas.
pub fn enumerate_all(instance: &SpaInstance, budget: &OracleBudget) -> Result<OracleTable> {
    check_instance_budget(instance, budget)?;
    let n1 = instance.n_students();
    let empty_row = || vec![None; n1 + 1];
    let mut search = MatchingSearch {
        instance,
        node_limit: budget.node_limit,
        visited: 0,
        project_load: vec![0; instance.n_projects()],
        lecturer_load: vec![0; instance.n_lecturers()],
        counts: vec![0; instance.max_rank()],
        assignment: vec![None; n1],
        size: 0,
        table: OracleTable {
            max_rank: instance.max_rank(),
            best: [[empty_row(), empty_row()], [empty_row(), empty_row()]],
        },
    };
    search.dfs(0)?;
    Ok(search.table)
}

/// Best matching of the requested size under `criterion`, optionally
/// restricted to matchings meeting every lecturer lower quota.
pub fn enumerate_best(
    instance: &SpaInstance,
    size: Size,
    criterion: Criterion,
    constrained: bool,
    budget: &OracleBudget,
) -> Result<Option<(Profile, Matching)>> {
    Ok(enumerate_all(instance, budget)?.best(size, criterion, constrained))
}

/// Result of enumerating every simple augmenting path.
#[derive(Debug, Clone)]
pub struct PathCensus {
    /// Best complete augmenting path, lowest in DFS order on ties.
    pub best: Option<AugPath>,
    /// Per project, the best profile of any partial augmenting path from an
    /// exposed student to it; the criterion's sentinel when unreachable.
    pub best_partial: Vec<Profile>,
    /// Per project, every distinct partial path profile seen.
    pub partial_profiles: Vec<Vec<Profile>>,
}

struct PathSearch<'a> {
    net: &'a FlowNetwork,
    flow: &'a Flow,
    criterion: Criterion,
    node_limit: u64,
    visited: u64,
    on_path_project: Vec<bool>,
    on_path_lecturer: Vec<bool>,
    nodes: Vec<Node>,
    counts: Vec<i32>,
    census: PathCensus,
}

impl PathSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.node_limit {
            return Err(SpaError::OracleBudget(format!("more than {} path states", self.node_limit)));
        }
        Ok(())
    }

    fn better(&self, a: &[i32], b: &Profile) -> bool {
        match b {
            Profile::Finite(b) => match self.criterion {
                Criterion::Greedy => a.cmp(b.as_slice()) == Ordering::Greater,
                Criterion::Generous => a.iter().rev().cmp(b.iter().rev()) == Ordering::Less,
            },
            _ => true,
        }
    }

    /// The walk currently ends at `project`, reached along `self.nodes`.
    fn at_project(&mut self, project: usize) -> Result<()> {
        self.tick()?;
        let net = self.net;
        let flow = self.flow;
        if self.better(&self.counts, &self.census.best_partial[project]) {
            self.census.best_partial[project] = Profile::Finite(self.counts.clone());
        }
        let seen = &mut self.census.partial_profiles[project];
        let here = Profile::Finite(self.counts.clone());
        if !seen.contains(&here) {
            seen.push(here);
        }

        let lecturer = net.lecturer_of(project);
        if flow.exposed_project(net, project) && !self.on_path_lecturer[lecturer] {
            let improves = match &self.census.best {
                None => true,
                Some(b) => self.better(&self.counts, &b.profile),
            };
            if improves {
                let mut nodes = self.nodes.clone();
                nodes.push(Node::Lecturer(lecturer));
                nodes.push(Node::Sink);
                self.census.best = Some(AugPath { nodes, profile: Profile::Finite(self.counts.clone()) });
            }
        }

        // back along a matched edge to a student, then on to another project
        for &held in net.project_edges(project) {
            if flow.assign_flow(held) == 0 {
                continue;
            }
            let held = net.assign_edge(held);
            let s = held.student;
            for &e in net.student_edges(s) {
                let next = net.assign_edge(e);
                if next.project == project || self.on_path_project[next.project] {
                    continue;
                }
                self.counts[held.rank - 1] -= 1;
                self.counts[next.rank - 1] += 1;
                self.enter(&[Node::Student(s), Node::Project(next.project)], next.project)?;
                self.counts[next.rank - 1] -= 1;
                self.counts[held.rank - 1] += 1;
            }
        }

        // forward into the lecturer, then back out through another project with flow
        if flow.project_flow(project) < net.project_capacity(project) && !self.on_path_lecturer[lecturer] {
            self.on_path_lecturer[lecturer] = true;
            for &other in net.lecturer_projects(lecturer) {
                if other == project || self.on_path_project[other] || flow.project_flow(other) == 0 {
                    continue;
                }
                self.enter(&[Node::Lecturer(lecturer), Node::Project(other)], other)?;
            }
            self.on_path_lecturer[lecturer] = false;
        }
        Ok(())
    }

    fn enter(&mut self, step: &[Node], project: usize) -> Result<()> {
        self.nodes.extend_from_slice(step);
        self.on_path_project[project] = true;
        let out = self.at_project(project);
        self.on_path_project[project] = false;
        self.nodes.truncate(self.nodes.len() - step.len());
        out
    }
}

/// Enumerates every simple augmenting path (each project and lecturer at
/// most once) in the residual graph of `flow`.
pub fn enumerate_paths(
    net: &FlowNetwork,
    flow: &Flow,
    criterion: Criterion,
    budget: &OracleBudget,
) -> Result<PathCensus> {
    if net.n_students() > budget.max_students {
        return Err(SpaError::OracleBudget(format!(
            "{} students, limit {}",
            net.n_students(),
            budget.max_students
        )));
    }
    let n2 = net.n_projects();
    let mut search = PathSearch {
        net,
        flow,
        criterion,
        node_limit: budget.node_limit,
        visited: 0,
        on_path_project: vec![false; n2],
        on_path_lecturer: vec![false; net.n_lecturers()],
        nodes: Vec::new(),
        counts: vec![0; net.max_rank()],
        census: PathCensus {
            best: None,
            best_partial: vec![criterion.unreached(); n2],
            partial_profiles: vec![Vec::new(); n2],
        },
    };
    for s in 0..net.n_students() {
        if !flow.exposed_student(s) {
            continue;
        }
        for &e in net.student_edges(s) {
            let edge = net.assign_edge(e);
            search.counts[edge.rank - 1] += 1;
            search.nodes = vec![Node::Source];
            search.enter(&[Node::Student(s), Node::Project(edge.project)], edge.project)?;
            search.counts[edge.rank - 1] -= 1;
        }
    }
    Ok(search.census)
}

/// Best augmenting path profile under `criterion`, or `None` when the flow
/// is maximum.
pub fn enumerate_best_path(
    net: &FlowNetwork,
    flow: &Flow,
    criterion: Criterion,
    budget: &OracleBudget,
) -> Result<Option<Profile>> {
    Ok(enumerate_paths(net, flow, criterion, budget)?.best.map(|p| p.profile))
}
