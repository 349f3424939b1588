//! Best-profile augmenting path search.
//!
//! Each project carries a label: the profile of the best partial augmenting
//! path found so far from an exposed student to that project. Labels are
//! seeded from exposed students, then relaxed Bellman-Ford style through two
//! kinds of switch until a pass changes nothing:
//!
//! * student switch: a matched student `s` moves from `M(s)` to another
//!   acceptable project;
//! * lecturer switch: a full lecturer trades a unit of flow from one of their
//!   projects with flow to one of their projects with spare capacity.
//!
//! The best label over exposed projects is then turned back into a path.
//! The same code serves both criteria; see [`Criterion`].

use std::fmt;

use crate::error::{Result, SpaError};
use crate::network::{partial_path_profile, path_profile, AugPath, Flow, FlowNetwork, Node};
use crate::profile::{Criterion, Profile};

/// How a project's label was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pred {
    /// Reached from this student: either straight from the source (exposed
    /// student) or by moving the student off their current project.
    Student(usize),
    /// Reached through a full lecturer, coming from `source`, another of
    /// their projects.
    Lecturer { lecturer: usize, source: usize },
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Pred::Student(s) => write!(f, "{}", Node::Student(s)),
            Pred::Lecturer { lecturer, source } => {
                write!(f, "{} via {}", Node::Lecturer(lecturer), Node::Project(source))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Init,
    StudentSwitch,
    LecturerSwitch,
}

/// One label change, reported to the trace callback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelUpdate {
    pub phase: Phase,
    /// Main-loop pass, 0 during initialisation.
    pub pass: usize,
    pub project: usize,
    pub label: Profile,
    pub pred: Pred,
}

impl fmt::Display for LabelUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pass {} {:?}: {} <- {} from {}",
            self.pass,
            self.phase,
            Node::Project(self.project),
            self.label,
            self.pred
        )
    }
}

/// Labels and predecessors after the relaxation phase.
#[derive(Debug, Clone)]
pub struct SearchState {
    pub criterion: Criterion,
    pub labels: Vec<Profile>,
    pub preds: Vec<Option<Pred>>,
    /// Main-loop passes run, including the final pass that changed nothing.
    pub passes: usize,
}

/// Runs initialisation and relaxation to a fixed point.
///
/// The pass count is capped at `max(|f|, n2) + 1`; labels still changing
/// after that point mean the flow's matching was not optimal for its size,
/// which is reported as an invariant failure.
pub fn compute_labels(
    net: &FlowNetwork,
    flow: &Flow,
    criterion: Criterion,
    trace: &mut dyn FnMut(&LabelUpdate),
) -> Result<SearchState> {
    let n2 = net.n_projects();
    let r = net.max_rank();
    let zero = Profile::empty(r)?;
    let mut labels = vec![criterion.unreached(); n2];
    let mut preds: Vec<Option<Pred>> = vec![None; n2];

    for s in 0..net.n_students() {
        if !flow.exposed_student(s) {
            continue;
        }
        for &e in net.student_edges(s) {
            let edge = net.assign_edge(e);
            let sigma = zero.plus(edge.rank)?;
            if criterion.better(&sigma, &labels[edge.project])? {
                labels[edge.project] = sigma;
                preds[edge.project] = Some(Pred::Student(s));
                trace(&LabelUpdate {
                    phase: Phase::Init,
                    pass: 0,
                    project: edge.project,
                    label: labels[edge.project].clone(),
                    pred: Pred::Student(s),
                });
            }
        }
    }

    let cap = flow.value().max(n2) + 1;
    let mut passes = 0;
    loop {
        if passes == cap {
            return Err(SpaError::Invariant(format!(
                "labels still changing after {cap} passes; the current matching is not optimal for its size"
            )));
        }
        passes += 1;
        let mut changed = false;

        for s in 0..net.n_students() {
            let Some(held) = flow.matched_edge(s) else { continue };
            let held = net.assign_edge(held);
            if !labels[held.project].is_finite() {
                continue;
            }
            let base = labels[held.project].minus(held.rank)?;
            for &e in net.student_edges(s) {
                let edge = net.assign_edge(e);
                if edge.project == held.project {
                    continue;
                }
                let sigma = base.plus(edge.rank)?;
                if criterion.better(&sigma, &labels[edge.project])? {
                    labels[edge.project] = sigma;
                    preds[edge.project] = Some(Pred::Student(s));
                    changed = true;
                    trace(&LabelUpdate {
                        phase: Phase::StudentSwitch,
                        pass: passes,
                        project: edge.project,
                        label: labels[edge.project].clone(),
                        pred: Pred::Student(s),
                    });
                }
            }
        }

        for l in 0..net.n_lecturers() {
            if !flow.lecturer_full(net, l) {
                continue;
            }
            let mut best: Option<usize> = None;
            for &p in net.lecturer_projects(l) {
                if flow.project_flow(p) >= net.project_capacity(p) || !labels[p].is_finite() {
                    continue;
                }
                if matches!(preds[p], Some(Pred::Lecturer { lecturer, .. }) if lecturer == l) {
                    continue;
                }
                let improves = match best {
                    None => true,
                    Some(b) => criterion.better(&labels[p], &labels[b])?,
                };
                if improves {
                    best = Some(p);
                }
            }
            let Some(source) = best else { continue };
            for &p in net.lecturer_projects(l) {
                if p == source || flow.project_flow(p) == 0 {
                    continue;
                }
                if criterion.better(&labels[source], &labels[p])? {
                    labels[p] = labels[source].clone();
                    let pred = Pred::Lecturer { lecturer: l, source };
                    preds[p] = Some(pred);
                    changed = true;
                    trace(&LabelUpdate {
                        phase: Phase::LecturerSwitch,
                        pass: passes,
                        project: p,
                        label: labels[p].clone(),
                        pred,
                    });
                }
            }
        }

        if !changed {
            break;
        }
    }

    Ok(SearchState { criterion, labels, preds, passes })
}

impl SearchState {
    /// Node sequence from the source to `project` obtained by following
    /// predecessors and matched edges. A lecturer met twice closes a
    /// zero-profile loop, which is cut out.
    pub fn partial_path(&self, net: &FlowNetwork, flow: &Flow, project: usize) -> Result<Vec<Node>> {
        let mut rev = vec![Node::Project(project)];
        let mut seen = vec![false; net.n_projects()];
        seen[project] = true;
        let mut cur = project;
        loop {
            match self.preds[cur] {
                None => {
                    return Err(SpaError::Invariant(format!(
                        "{} has a label but no predecessor",
                        Node::Project(cur)
                    )))
                }
                Some(Pred::Student(s)) => {
                    rev.push(Node::Student(s));
                    match flow.matched_edge(s) {
                        None => {
                            rev.push(Node::Source);
                            break;
                        }
                        Some(e) => cur = net.assign_edge(e).project,
                    }
                }
                Some(Pred::Lecturer { lecturer, source }) => {
                    rev.push(Node::Lecturer(lecturer));
                    cur = source;
                }
            }
            if std::mem::replace(&mut seen[cur], true) {
                return Err(SpaError::Invariant(format!(
                    "predecessor cycle through {}",
                    Node::Project(cur)
                )));
            }
            rev.push(Node::Project(cur));
        }
        rev.reverse();
        Ok(cut_lecturer_loops(rev))
    }
}

fn cut_lecturer_loops(mut nodes: Vec<Node>) -> Vec<Node> {
    let mut i = 0;
    while i < nodes.len() {
        if let Node::Lecturer(_) = nodes[i] {
            if let Some(j) = nodes.iter().rposition(|n| *n == nodes[i]) {
                if j > i {
                    nodes.drain(i + 1..=j);
                }
            }
        }
        i += 1;
    }
    nodes
}

/// Picks the best exposed project, lowest id on ties, and builds the path.
pub fn best_path(state: &SearchState, net: &FlowNetwork, flow: &Flow) -> Result<Option<AugPath>> {
    let mut best: Option<usize> = None;
    for p in 0..net.n_projects() {
        if !flow.exposed_project(net, p) || !state.labels[p].is_finite() {
            continue;
        }
        let improves = match best {
            None => true,
            Some(b) => state.criterion.better(&state.labels[p], &state.labels[b])?,
        };
        if improves {
            best = Some(p);
        }
    }
    let Some(end) = best else { return Ok(None) };
    let mut nodes = state.partial_path(net, flow, end)?;
    nodes.push(Node::Lecturer(net.lecturer_of(end)));
    nodes.push(Node::Sink);
    let profile = path_profile(net, flow, &nodes)
        .map_err(|e| SpaError::Invariant(format!("reconstructed path is not augmenting: {e}")))?;
    if profile != state.labels[end] {
        return Err(SpaError::Invariant(format!(
            "reconstructed path has profile {profile}, label says {}",
            state.labels[end]
        )));
    }
    Ok(Some(AugPath { nodes, profile }))
}

/// Checks that every reached label is the profile of the path its
/// predecessors describe.
pub fn check_labels(state: &SearchState, net: &FlowNetwork, flow: &Flow) -> Result<()> {
    for p in 0..net.n_projects() {
        if !state.labels[p].is_finite() {
            if state.preds[p].is_some() {
                return Err(SpaError::Invariant(format!("{} has a predecessor but no label", Node::Project(p))));
            }
            continue;
        }
        let nodes = state.partial_path(net, flow, p)?;
        let actual = partial_path_profile(net, flow, &nodes)?;
        if actual != state.labels[p] {
            return Err(SpaError::Invariant(format!(
                "{} labelled {} but its path has profile {actual}",
                Node::Project(p),
                state.labels[p]
            )));
        }
    }
    Ok(())
}

/// Best augmenting path under `criterion`, reporting every label change.
pub fn find_aug_path_traced(
    net: &FlowNetwork,
    flow: &Flow,
    criterion: Criterion,
    trace: &mut dyn FnMut(&LabelUpdate),
) -> Result<Option<AugPath>> {
    let state = compute_labels(net, flow, criterion, trace)?;
    best_path(&state, net, flow)
}

/// Maximum profile (left domination) augmenting path, or `None` when the
/// flow is maximum. The flow's matching must be greedy for its size.
pub fn find_max_profile_aug_path(net: &FlowNetwork, flow: &Flow) -> Result<Option<AugPath>> {
    find_aug_path_traced(net, flow, Criterion::Greedy, &mut |_| {})
}

/// Minimum profile (right domination) augmenting path, or `None` when the
/// flow is maximum. The flow's matching must be generous for its size.
pub fn find_min_profile_aug_path(net: &FlowNetwork, flow: &Flow) -> Result<Option<AugPath>> {
    find_aug_path_traced(net, flow, Criterion::Generous, &mut |_| {})
}
