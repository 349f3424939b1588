//! The flow network of an instance, integral flows on it, and augmentation.
//!
//! Nodes are the source, the sink, and one node per student, project and
//! lecturer. Edges come in four layers: source→student (capacity 1),
//! student→project for each acceptable pair (capacity 1), project→lecturer
//! (project capacity) and lecturer→sink (lecturer upper quota).

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Result, SpaError};
use crate::instance::{Matching, SpaInstance};
use crate::profile::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AssignEdge {
    pub student: usize,
    pub project: usize,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    n_students: usize,
    n_projects: usize,
    n_lecturers: usize,
    max_rank: usize,
    assign_edges: Vec<AssignEdge>,
    student_edges: Vec<Vec<usize>>,
    project_edges: Vec<Vec<usize>>,
    project_cap: Vec<u32>,
    project_lecturer: Vec<usize>,
    lecturer_cap: Vec<u32>,
    lecturer_projects: Vec<Vec<usize>>,
}

impl FlowNetwork {
    /// Builds the network of a validated instance.
    pub fn build(instance: &SpaInstance) -> FlowNetwork {
        let n1 = instance.n_students();
        let n2 = instance.n_projects();
        let n3 = instance.n_lecturers();
        let mut assign_edges = Vec::with_capacity(instance.total_list_len());
        let mut student_edges = vec![Vec::new(); n1];
        let mut project_edges = vec![Vec::new(); n2];
        for (s, edges) in student_edges.iter_mut().enumerate() {
            for &(p, rank) in instance.acceptable(s) {
                let id = assign_edges.len();
                assign_edges.push(AssignEdge { student: s, project: p, rank });
                edges.push(id);
                project_edges[p].push(id);
            }
        }
        let mut lecturer_projects = vec![Vec::new(); n3];
        for (j, p) in instance.projects().iter().enumerate() {
            lecturer_projects[p.lecturer].push(j);
        }
        FlowNetwork {
            n_students: n1,
            n_projects: n2,
            n_lecturers: n3,
            max_rank: instance.max_rank(),
            assign_edges,
            student_edges,
            project_edges,
            project_cap: instance.projects().iter().map(|p| p.capacity).collect(),
            project_lecturer: instance.projects().iter().map(|p| p.lecturer).collect(),
            lecturer_cap: instance.lecturers().iter().map(|l| l.upper_quota).collect(),
            lecturer_projects,
        }
    }

    /// Same graph with different lecturer→sink capacities.
    pub fn with_lecturer_caps(&self, caps: Vec<u32>) -> Result<FlowNetwork> {
        if caps.len() != self.n_lecturers {
            return Err(SpaError::Contract(format!(
                "{} lecturer capacities for {} lecturers",
                caps.len(),
                self.n_lecturers
            )));
        }
        Ok(FlowNetwork { lecturer_cap: caps, ..self.clone() })
    }

    pub fn n_students(&self) -> usize {
        self.n_students
    }

    pub fn n_projects(&self) -> usize {
        self.n_projects
    }

    pub fn n_lecturers(&self) -> usize {
        self.n_lecturers
    }

    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// |V| = 2 + n1 + n2 + n3.
    pub fn node_count(&self) -> usize {
        2 + self.n_students + self.n_projects + self.n_lecturers
    }

    /// |E| = n1 + m2 + n2 + n3.
    pub fn edge_count(&self) -> usize {
        self.n_students + self.assign_edges.len() + self.n_projects + self.n_lecturers
    }

    pub fn assign_edges(&self) -> &[AssignEdge] {
        &self.assign_edges
    }

    pub fn assign_edge(&self, id: usize) -> AssignEdge {
        self.assign_edges[id]
    }

    /// Student→project edge ids of a student, in preference order.
    pub fn student_edges(&self, student: usize) -> &[usize] {
        &self.student_edges[student]
    }

    pub fn project_edges(&self, project: usize) -> &[usize] {
        &self.project_edges[project]
    }

    pub fn edge_between(&self, student: usize, project: usize) -> Option<usize> {
        self.student_edges
            .get(student)?
            .iter()
            .copied()
            .find(|&e| self.assign_edges[e].project == project)
    }

    pub fn project_capacity(&self, project: usize) -> u32 {
        self.project_cap[project]
    }

    pub fn lecturer_of(&self, project: usize) -> usize {
        self.project_lecturer[project]
    }

    pub fn lecturer_capacity(&self, lecturer: usize) -> u32 {
        self.lecturer_cap[lecturer]
    }

    pub fn lecturer_projects(&self, lecturer: usize) -> &[usize] {
        &self.lecturer_projects[lecturer]
    }

    /// Edge list for troubleshooting: one `from -> to cap=.. flow=..` line per edge.
    pub fn dump(&self, flow: Option<&Flow>) -> String {
        let mut out = String::new();
        let f = |v: u32| flow.map_or(String::new(), |_| format!(" flow={v}"));
        for s in 0..self.n_students {
            let v = flow.map_or(0, |fl| fl.source[s] as u32);
            out += &format!("{} -> {} cap=1{}\n", Node::Source, Node::Student(s), f(v));
        }
        for (id, e) in self.assign_edges.iter().enumerate() {
            let v = flow.map_or(0, |fl| fl.assign[id] as u32);
            out += &format!(
                "{} -> {} cap=1 rank={}{}\n",
                Node::Student(e.student),
                Node::Project(e.project),
                e.rank,
                f(v)
            );
        }
        for p in 0..self.n_projects {
            let v = flow.map_or(0, |fl| fl.project[p]);
            out += &format!(
                "{} -> {} cap={}{}\n",
                Node::Project(p),
                Node::Lecturer(self.project_lecturer[p]),
                self.project_cap[p],
                f(v)
            );
        }
        for l in 0..self.n_lecturers {
            let v = flow.map_or(0, |fl| fl.lecturer[l]);
            out += &format!("{} -> {} cap={}{}\n", Node::Lecturer(l), Node::Sink, self.lecturer_cap[l], f(v));
        }
        out
    }
}

/// An integral flow, stored per edge layer, with a per-student index of the
/// assignment edge carrying flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flow {
    source: Vec<u8>,
    assign: Vec<u8>,
    project: Vec<u32>,
    lecturer: Vec<u32>,
    partner: Vec<Option<usize>>,
}

impl Flow {
    pub fn zero(net: &FlowNetwork) -> Flow {
        Flow {
            source: vec![0; net.n_students],
            assign: vec![0; net.assign_edges.len()],
            project: vec![0; net.n_projects],
            lecturer: vec![0; net.n_lecturers],
            partner: vec![None; net.n_students],
        }
    }

    /// Builds a flow from raw per-edge values, checking integrality bounds,
    /// capacities and conservation.
    pub fn from_edge_values(
        net: &FlowNetwork,
        source: Vec<u32>,
        assign: Vec<u32>,
        project: Vec<u32>,
        lecturer: Vec<u32>,
    ) -> Result<Flow> {
        if source.len() != net.n_students
            || assign.len() != net.assign_edges.len()
            || project.len() != net.n_projects
            || lecturer.len() != net.n_lecturers
        {
            return Err(SpaError::InvalidFlow("edge layer sizes do not match the network".into()));
        }
        if let Some(s) = source.iter().position(|&v| v > 1) {
            return Err(SpaError::InvalidFlow(format!("source edge of student {} exceeds 1", s + 1)));
        }
        if let Some(e) = assign.iter().position(|&v| v > 1) {
            return Err(SpaError::InvalidFlow(format!("assignment edge {e} exceeds 1")));
        }
        let flow = Flow {
            source: source.iter().map(|&v| v as u8).collect(),
            assign: assign.iter().map(|&v| v as u8).collect(),
            project,
            lecturer,
            partner: vec![None; net.n_students],
        };
        flow.check(net)?;
        let mut flow = flow;
        for (id, &v) in flow.assign.iter().enumerate() {
            if v == 1 {
                flow.partner[net.assign_edges[id].student] = Some(id);
            }
        }
        Ok(flow)
    }

    /// Capacity bounds and conservation at every internal node.
    pub fn check(&self, net: &FlowNetwork) -> Result<()> {
        let mut out_of_student = vec![0u32; net.n_students];
        let mut into_project = vec![0u32; net.n_projects];
        for (id, &v) in self.assign.iter().enumerate() {
            let e = net.assign_edges[id];
            out_of_student[e.student] += v as u32;
            into_project[e.project] += v as u32;
        }
        for s in 0..net.n_students {
            if self.source[s] as u32 != out_of_student[s] {
                return Err(SpaError::InvalidFlow(format!("conservation fails at student {}", s + 1)));
            }
        }
        let mut into_lecturer = vec![0u32; net.n_lecturers];
        for p in 0..net.n_projects {
            if into_project[p] != self.project[p] {
                return Err(SpaError::InvalidFlow(format!("conservation fails at project {}", p + 1)));
            }
            if self.project[p] > net.project_cap[p] {
                return Err(SpaError::InvalidFlow(format!("project {} over capacity", p + 1)));
            }
            into_lecturer[net.project_lecturer[p]] += self.project[p];
        }
        for l in 0..net.n_lecturers {
            if into_lecturer[l] != self.lecturer[l] {
                return Err(SpaError::InvalidFlow(format!("conservation fails at lecturer {}", l + 1)));
            }
            if self.lecturer[l] > net.lecturer_cap[l] {
                return Err(SpaError::InvalidFlow(format!("lecturer {} over quota", l + 1)));
            }
        }
        Ok(())
    }

    /// |f|, the flow out of the source.
    pub fn value(&self) -> usize {
        self.source.iter().map(|&v| v as usize).sum()
    }

    /// Assignment edge carrying the student's unit of flow.
    pub fn matched_edge(&self, student: usize) -> Option<usize> {
        self.partner[student]
    }

    pub fn assign_flow(&self, edge: usize) -> u8 {
        self.assign[edge]
    }

    pub fn project_flow(&self, project: usize) -> u32 {
        self.project[project]
    }

    pub fn lecturer_flow(&self, lecturer: usize) -> u32 {
        self.lecturer[lecturer]
    }

    /// A student is exposed when no flow passes through it.
    pub fn exposed_student(&self, student: usize) -> bool {
        self.source[student] == 0
    }

    /// A project is exposed when both it and its lecturer have spare capacity.
    pub fn exposed_project(&self, net: &FlowNetwork, project: usize) -> bool {
        let l = net.project_lecturer[project];
        self.project[project] < net.project_cap[project] && self.lecturer[l] < net.lecturer_cap[l]
    }

    pub fn lecturer_full(&self, net: &FlowNetwork, lecturer: usize) -> bool {
        self.lecturer[lecturer] >= net.lecturer_cap[lecturer]
    }

    /// Re-homes this flow onto a network with identical structure but
    /// different capacities, re-checking the bounds.
    pub fn lift(&self, target: &FlowNetwork) -> Result<Flow> {
        if self.assign.len() != target.assign_edges.len()
            || self.project.len() != target.n_projects
            || self.lecturer.len() != target.n_lecturers
        {
            return Err(SpaError::InvalidFlow("target network has a different structure".into()));
        }
        self.check(target)?;
        Ok(self.clone())
    }

    /// Applies an augmenting path. The path is fully validated before any
    /// edge value changes; on error the flow is untouched. Returns the
    /// path's profile, which is also the change in the matching profile.
    pub fn augment(&mut self, net: &FlowNetwork, path: &AugPath) -> Result<Profile> {
        let steps = validate_path(net, self, &path.nodes)?;
        let profile = steps_profile(net, &steps)?;
        if profile != path.profile {
            return Err(SpaError::Augmentation(format!(
                "path claims profile {} but its edges give {}",
                path.profile, profile
            )));
        }
        for step in steps {
            match step {
                Step::Source(s) => self.source[s] = 1,
                Step::Assign { edge } => {
                    self.assign[edge] = 1;
                    self.partner[net.assign_edges[edge].student] = Some(edge);
                }
                Step::Unassign { edge } => {
                    self.assign[edge] = 0;
                    let s = net.assign_edges[edge].student;
                    if self.partner[s] == Some(edge) {
                        self.partner[s] = None;
                    }
                }
                Step::ProjectUp(p) => self.project[p] += 1,
                Step::ProjectDown(p) => self.project[p] -= 1,
                Step::Sink(l) => self.lecturer[l] += 1,
            }
        }
        debug_assert!(self.check(net).is_ok());
        Ok(profile)
    }
}

/// A node of the flow network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Source,
    Student(usize),
    Project(usize),
    Lecturer(usize),
    Sink,
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Source => f.write_str("vs"),
            Node::Sink => f.write_str("vt"),
            Node::Student(i) => write!(f, "s{}", i + 1),
            Node::Project(j) => write!(f, "p{}", j + 1),
            Node::Lecturer(k) => write!(f, "l{}", k + 1),
        }
    }
}

/// A source-to-sink augmenting path with its profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugPath {
    pub nodes: Vec<Node>,
    pub profile: Profile,
}

impl AugPath {
    /// Computes the profile of `nodes` against `flow` and packages both.
    pub fn new(net: &FlowNetwork, flow: &Flow, nodes: Vec<Node>) -> Result<AugPath> {
        let profile = path_profile(net, flow, &nodes)?;
        Ok(AugPath { nodes, profile })
    }
}

impl fmt::Display for AugPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.nodes.iter().map(Node::to_string).collect();
        write!(f, "({}) profile={}", names.join(","), self.profile)
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Source(usize),
    Assign { edge: usize },
    Unassign { edge: usize },
    ProjectUp(usize),
    ProjectDown(usize),
    Sink(usize),
}

fn bad(msg: String) -> SpaError {
    SpaError::Augmentation(msg)
}

fn validate_path(net: &FlowNetwork, flow: &Flow, nodes: &[Node]) -> Result<Vec<Step>> {
    if nodes.len() < 5 {
        return Err(bad("path too short".into()));
    }
    if nodes[nodes.len() - 1] != Node::Sink {
        return Err(bad("path must run from the source to the sink".into()));
    }
    validate_prefix(net, flow, nodes)
}

fn validate_prefix(net: &FlowNetwork, flow: &Flow, nodes: &[Node]) -> Result<Vec<Step>> {
    if nodes.first() != Some(&Node::Source) {
        return Err(bad("path must start at the source".into()));
    }
    let mut seen_s = vec![false; net.n_students];
    let mut seen_p = vec![false; net.n_projects];
    let mut seen_l = vec![false; net.n_lecturers];
    let mut steps = Vec::with_capacity(nodes.len());
    for w in nodes.windows(2) {
        let step = match (w[0], w[1]) {
            (Node::Source, Node::Student(s)) => {
                if s >= net.n_students || flow.source[s] != 0 {
                    return Err(bad(format!("{} is not an exposed student", w[1])));
                }
                Step::Source(s)
            }
            (Node::Student(s), Node::Project(p)) => {
                let edge = net
                    .edge_between(s, p)
                    .ok_or_else(|| bad(format!("no edge {} -> {}", w[0], w[1])))?;
                if flow.assign[edge] != 0 {
                    return Err(bad(format!("edge {} -> {} is saturated", w[0], w[1])));
                }
                Step::Assign { edge }
            }
            (Node::Project(p), Node::Student(s)) => {
                let edge = net
                    .edge_between(s, p)
                    .ok_or_else(|| bad(format!("no edge {} -> {}", w[1], w[0])))?;
                if flow.assign[edge] != 1 {
                    return Err(bad(format!("edge {} -> {} carries no flow", w[1], w[0])));
                }
                Step::Unassign { edge }
            }
            (Node::Project(p), Node::Lecturer(l)) => {
                if p >= net.n_projects || net.project_lecturer[p] != l {
                    return Err(bad(format!("no edge {} -> {}", w[0], w[1])));
                }
                if flow.project[p] >= net.project_cap[p] {
                    return Err(bad(format!("edge {} -> {} is saturated", w[0], w[1])));
                }
                Step::ProjectUp(p)
            }
            (Node::Lecturer(l), Node::Project(p)) => {
                if p >= net.n_projects || net.project_lecturer[p] != l {
                    return Err(bad(format!("no edge {} -> {}", w[1], w[0])));
                }
                if flow.project[p] == 0 {
                    return Err(bad(format!("edge {} -> {} carries no flow", w[1], w[0])));
                }
                Step::ProjectDown(p)
            }
            (Node::Lecturer(l), Node::Sink) => {
                if l >= net.n_lecturers || flow.lecturer[l] >= net.lecturer_cap[l] {
                    return Err(bad(format!("edge {} -> vt is saturated", w[0])));
                }
                Step::Sink(l)
            }
            (a, b) => return Err(bad(format!("{a} -> {b} is not a residual edge"))),
        };
        let dup = match w[1] {
            Node::Student(s) => std::mem::replace(&mut seen_s[s], true),
            Node::Project(p) => std::mem::replace(&mut seen_p[p], true),
            Node::Lecturer(l) => std::mem::replace(&mut seen_l[l], true),
            Node::Source => true,
            Node::Sink => false,
        };
        if dup {
            return Err(bad(format!("{} visited twice", w[1])));
        }
        steps.push(step);
    }
    if nodes[1..nodes.len() - 1].contains(&Node::Sink) {
        return Err(bad("sink inside the path".into()));
    }
    Ok(steps)
}

fn steps_profile(net: &FlowNetwork, steps: &[Step]) -> Result<Profile> {
    let mut profile = Profile::empty(net.max_rank)?;
    for step in steps {
        match *step {
            Step::Assign { edge } => profile.shift_in_place(net.assign_edges[edge].rank, crate::profile::Shift::Up)?,
            Step::Unassign { edge } => {
                profile.shift_in_place(net.assign_edges[edge].rank, crate::profile::Shift::Down)?
            }
            _ => {}
        }
    }
    Ok(profile)
}

/// ρ(P): ranks of newly used assignment edges added, ranks of released ones
/// subtracted. Fails if `nodes` is not an augmenting path for `flow`.
pub fn path_profile(net: &FlowNetwork, flow: &Flow, nodes: &[Node]) -> Result<Profile> {
    let steps = validate_path(net, flow, nodes)?;
    steps_profile(net, &steps)
}

/// Profile of a partial augmenting path from the source to a project.
pub fn partial_path_profile(net: &FlowNetwork, flow: &Flow, nodes: &[Node]) -> Result<Profile> {
    if !matches!(nodes.last(), Some(Node::Project(_))) || nodes.len() < 3 {
        return Err(bad("partial path must end at a project".into()));
    }
    let steps = validate_prefix(net, flow, nodes)?;
    steps_profile(net, &steps)
}

/// M(f): the pairs whose assignment edge carries flow.
pub fn matching_from_flow(net: &FlowNetwork, flow: &Flow) -> Result<Matching> {
    flow.check(net)?;
    let mut assignment = vec![None; net.n_students];
    for (id, &v) in flow.assign.iter().enumerate() {
        if v == 1 {
            let e = net.assign_edges[id];
            assignment[e.student] = Some(e.project);
        }
    }
    Ok(Matching::from_assignment(assignment))
}

/// f(M): unit flow along each matched pair.
pub fn flow_from_matching(net: &FlowNetwork, matching: &Matching) -> Result<Flow> {
    if matching.assignment().len() != net.n_students {
        return Err(SpaError::InvalidMatching("matching size differs from the student count".into()));
    }
    let mut source = vec![0u32; net.n_students];
    let mut assign = vec![0u32; net.assign_edges.len()];
    let mut project = vec![0u32; net.n_projects];
    let mut lecturer = vec![0u32; net.n_lecturers];
    for (s, p) in matching.pairs() {
        let edge = net.edge_between(s, p).ok_or_else(|| {
            SpaError::InvalidMatching(format!("pair (s{}, p{}) is not acceptable", s + 1, p + 1))
        })?;
        source[s] = 1;
        assign[edge] = 1;
        project[p] += 1;
        lecturer[net.project_lecturer[p]] += 1;
    }
    Flow::from_edge_values(net, source, assign, project, lecturer)
        .map_err(|e| SpaError::InvalidMatching(e.to_string()))
}

/// Maximum flow value of the network by plain BFS augmentation
/// (Edmonds–Karp). Used as an independent check on matching sizes.
pub fn plain_max_flow(net: &FlowNetwork) -> usize {
    let n1 = net.n_students;
    let n2 = net.n_projects;
    let source = 0;
    let sink = 1;
    let student = |s: usize| 2 + s;
    let project = |p: usize| 2 + n1 + p;
    let lecturer = |l: usize| 2 + n1 + n2 + l;
    let n = net.node_count();

    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<i64> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut link = |u: usize, v: usize, c: i64, to: &mut Vec<usize>, cap: &mut Vec<i64>| {
        adj[u].push(to.len());
        to.push(v);
        cap.push(c);
        adj[v].push(to.len());
        to.push(u);
        cap.push(0);
    };
    for s in 0..n1 {
        link(source, student(s), 1, &mut to, &mut cap);
    }
    for e in &net.assign_edges {
        link(student(e.student), project(e.project), 1, &mut to, &mut cap);
    }
    for p in 0..n2 {
        link(project(p), lecturer(net.project_lecturer[p]), net.project_cap[p] as i64, &mut to, &mut cap);
    }
    for l in 0..net.n_lecturers {
        link(lecturer(l), sink, net.lecturer_cap[l] as i64, &mut to, &mut cap);
    }

    let mut total = 0;
    loop {
        let mut prev_edge = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        visited[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            for &e in &adj[u] {
                let v = to[e];
                if cap[e] > 0 && !visited[v] {
                    visited[v] = true;
                    prev_edge[v] = e;
                    queue.push_back(v);
                }
            }
        }
        if !visited[sink] {
            return total;
        }
        let mut v = sink;
        while v != source {
            let e = prev_edge[v];
            cap[e] -= 1;
            cap[e ^ 1] += 1;
            v = to[e ^ 1];
        }
        total += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{example_instance, Lecturer, Project, Student};

    fn net() -> FlowNetwork {
        FlowNetwork::build(&example_instance())
    }

    fn flow_of(net: &FlowNetwork, pairs: &[(usize, usize)]) -> Flow {
        flow_from_matching(net, &Matching::from_pairs(net.n_students(), pairs).unwrap()).unwrap()
    }

    #[test]
    fn counts_nodes_and_edges() {
        let n = net();
        assert_eq!(n.node_count(), 10);
        assert_eq!(n.edge_count(), 3 + 6 + 3 + 2);

        let tiny = FlowNetwork::build(&SpaInstance::new(
            vec![Student::strict(&[0])],
            vec![Project { capacity: 1, lecturer: 0 }],
            vec![Lecturer::new(1)],
        ));
        assert_eq!(tiny.node_count(), 5);
        assert_eq!(tiny.edge_count(), 4);

        let with_empty = FlowNetwork::build(&SpaInstance::new(
            vec![Student::strict(&[0]), Student::default()],
            vec![Project { capacity: 1, lecturer: 0 }],
            vec![Lecturer::new(1)],
        ));
        assert_eq!(with_empty.edge_count(), tiny.edge_count() + 1);
        assert!(with_empty.student_edges(1).is_empty());
    }

    #[test]
    fn flow_and_matching_correspond() {
        let n = net();
        let m1 = Matching::from_pairs(3, &[(0, 2), (1, 0), (2, 1)]).unwrap();
        let f = flow_from_matching(&n, &m1).unwrap();
        assert_eq!(f.value(), 3);
        assert_eq!(matching_from_flow(&n, &f).unwrap(), m1);
        let zero = Flow::zero(&n);
        assert_eq!(matching_from_flow(&n, &zero).unwrap(), Matching::empty(3));
    }

    #[test]
    fn non_conserving_flows_are_rejected() {
        let n = net();
        // s1 sends a unit but no assignment edge carries it
        let err = Flow::from_edge_values(&n, vec![1, 0, 0], vec![0; 6], vec![0; 3], vec![0; 2]);
        assert!(matches!(err, Err(SpaError::InvalidFlow(_))));
        // fractional-looking value on a unit edge
        let err = Flow::from_edge_values(&n, vec![2, 0, 0], vec![0; 6], vec![0; 3], vec![0; 2]);
        assert!(matches!(err, Err(SpaError::InvalidFlow(_))));
    }

    #[test]
    fn exposure() {
        let n = net();
        let zero = Flow::zero(&n);
        assert!((0..3).all(|s| zero.exposed_student(s)));
        assert!((0..3).all(|p| zero.exposed_project(&n, p)));

        let f1 = flow_of(&n, &[(0, 2), (1, 0), (2, 1)]);
        assert!((0..3).all(|s| !f1.exposed_student(s)));
        assert!(!f1.exposed_project(&n, 1));

        let f = flow_of(&n, &[(0, 0)]);
        assert!(!f.exposed_project(&n, 0));
        assert!(f.exposed_project(&n, 1));
        assert!(f.exposed_project(&n, 2));
    }

    #[test]
    fn augment_first_step() {
        let n = net();
        let mut f = Flow::zero(&n);
        let path = AugPath::new(
            &n,
            &f,
            vec![Node::Source, Node::Student(0), Node::Project(0), Node::Lecturer(0), Node::Sink],
        )
        .unwrap();
        assert_eq!(path.profile, Profile::Finite(vec![1, 0, 0]));
        f.augment(&n, &path).unwrap();
        assert_eq!(matching_from_flow(&n, &f).unwrap().pairs(), vec![(0, 0)]);
        assert_eq!(f.value(), 1);
    }

    #[test]
    fn augment_through_a_matched_student() {
        let n = net();
        let mut f = flow_of(&n, &[(0, 0), (2, 1)]);
        let path = AugPath::new(
            &n,
            &f,
            vec![
                Node::Source,
                Node::Student(1),
                Node::Project(0),
                Node::Student(0),
                Node::Project(2),
                Node::Lecturer(1),
                Node::Sink,
            ],
        )
        .unwrap();
        assert_eq!(path.profile, Profile::Finite(vec![0, 0, 1]));
        let before = crate::instance::matching_stats(&example_instance(), &matching_from_flow(&n, &f).unwrap())
            .unwrap()
            .profile;
        let delta = f.augment(&n, &path).unwrap();
        let m = matching_from_flow(&n, &f).unwrap();
        assert_eq!(m.pairs(), vec![(0, 2), (1, 0), (2, 1)]);
        let after = crate::instance::matching_stats(&example_instance(), &m).unwrap().profile;
        assert_eq!(after, Profile::Finite(vec![2, 0, 1]));
        assert_eq!(after, before.add(&delta).unwrap());
    }

    #[test]
    fn invalid_paths_leave_the_flow_untouched() {
        let n = net();
        let mut f = flow_of(&n, &[(0, 0)]);
        let snapshot = f.clone();
        // s1 is not exposed
        let bad = AugPath {
            nodes: vec![Node::Source, Node::Student(0), Node::Project(1), Node::Lecturer(0), Node::Sink],
            profile: Profile::Finite(vec![0, 1, 0]),
        };
        assert!(matches!(f.augment(&n, &bad), Err(SpaError::Augmentation(_))));
        // p1 is saturated
        let bad = AugPath {
            nodes: vec![Node::Source, Node::Student(1), Node::Project(0), Node::Lecturer(0), Node::Sink],
            profile: Profile::Finite(vec![1, 0, 0]),
        };
        assert!(f.augment(&n, &bad).is_err());
        // wrong declared profile
        let bad = AugPath {
            nodes: vec![Node::Source, Node::Student(2), Node::Project(1), Node::Lecturer(0), Node::Sink],
            profile: Profile::Finite(vec![0, 1, 0]),
        };
        assert!(f.augment(&n, &bad).is_err());
        assert_eq!(f, snapshot);
    }

    #[test]
    fn lifting_rechecks_capacities() {
        let n = net();
        let f = flow_of(&n, &[(0, 0), (2, 1)]);
        let tight = n.with_lecturer_caps(vec![1, 1]).unwrap();
        assert!(f.lift(&tight).is_err());
        let loose = n.with_lecturer_caps(vec![3, 3]).unwrap();
        assert_eq!(f.lift(&loose).unwrap(), f);
    }

    #[test]
    fn plain_max_flow_of_example() {
        assert_eq!(plain_max_flow(&net()), 3);
    }

    #[test]
    fn dump_lists_every_edge() {
        let n = net();
        assert_eq!(n.dump(None).lines().count(), n.edge_count());
        let f = flow_of(&n, &[(0, 0)]);
        assert!(n.dump(Some(&f)).contains("s1 -> p1 cap=1 rank=1 flow=1"));
    }
}
