//! In-memory SPA / SPA-L instances, matchings, and their statistics.
//!
//! Indices are 0-based in memory. The text formats in [`crate::format`] use
//! 1-based ids.

use std::fmt;

use crate::error::{Result, SpaError};
use crate::profile::Profile;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Student {
    /// Tie-groups in strictly decreasing preference order.
    pub pref_groups: Vec<Vec<usize>>,
}

impl Student {
    pub fn new(pref_groups: Vec<Vec<usize>>) -> Self {
        Student { pref_groups }
    }

    /// A strictly ordered list without ties.
    pub fn strict(prefs: &[usize]) -> Self {
        Student {
            pref_groups: prefs.iter().map(|&p| vec![p]).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Project {
    pub capacity: u32,
    pub lecturer: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lecturer {
    pub upper_quota: u32,
    pub lower_quota: u32,
}

impl Lecturer {
    pub fn new(upper_quota: u32) -> Self {
        Lecturer { upper_quota, lower_quota: 0 }
    }
}

/// A student/project allocation instance, optionally with lecturer lower quotas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaInstance {
    students: Vec<Student>,
    projects: Vec<Project>,
    lecturers: Vec<Lecturer>,
    /// Per student: (project, rank) in list order.
    acceptable: Vec<Vec<(usize, usize)>>,
    max_rank: usize,
}

impl SpaInstance {
    /// Builds an instance without validating it; see [`SpaInstance::validate`].
    pub fn new(students: Vec<Student>, projects: Vec<Project>, lecturers: Vec<Lecturer>) -> Self {
        let acceptable: Vec<Vec<(usize, usize)>> = students
            .iter()
            .map(|s| {
                let mut out = Vec::new();
                let mut rank = 1;
                for group in &s.pref_groups {
                    for &p in group {
                        out.push((p, rank));
                    }
                    rank += group.len();
                }
                out
            })
            .collect();
        let max_rank = acceptable
            .iter()
            .flat_map(|a| a.iter().map(|&(_, r)| r))
            .max()
            .unwrap_or(0)
            .max(1);
        SpaInstance {
            students,
            projects,
            lecturers,
            acceptable,
            max_rank,
        }
    }

    pub fn students(&self) -> &[Student] {
        &self.students
    }

    pub fn projects(&self) -> &[Project] {
        &self.projects
    }

    pub fn lecturers(&self) -> &[Lecturer] {
        &self.lecturers
    }

    pub fn n_students(&self) -> usize {
        self.students.len()
    }

    pub fn n_projects(&self) -> usize {
        self.projects.len()
    }

    pub fn n_lecturers(&self) -> usize {
        self.lecturers.len()
    }

    /// R: the largest rank any student gives any project (at least 1).
    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// Total preference list length (m2).
    pub fn total_list_len(&self) -> usize {
        self.acceptable.iter().map(Vec::len).sum()
    }

    /// (project, rank) pairs of a student in list order.
    pub fn acceptable(&self, student: usize) -> &[(usize, usize)] {
        &self.acceptable[student]
    }

    /// 1 + the number of projects the student strictly prefers to `project`.
    pub fn rank(&self, student: usize, project: usize) -> Result<usize> {
        self.acceptable
            .get(student)
            .and_then(|a| a.iter().find(|&&(p, _)| p == project))
            .map(|&(_, r)| r)
            .ok_or(SpaError::NotAcceptable { student, project })
    }

    pub fn lecturer_projects(&self, lecturer: usize) -> impl Iterator<Item = usize> + '_ {
        self.projects
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.lecturer == lecturer)
            .map(|(j, _)| j)
    }

    /// Sum of lecturer lower quotas (L).
    pub fn total_lower_quota(&self) -> u64 {
        self.lecturers.iter().map(|l| l.lower_quota as u64).sum()
    }

    pub fn has_lower_quotas(&self) -> bool {
        self.lecturers.iter().any(|l| l.lower_quota > 0)
    }

    /// Same students and projects, different lecturer quotas.
    pub fn with_lecturers(&self, lecturers: Vec<Lecturer>) -> SpaInstance {
        SpaInstance::new(self.students.clone(), self.projects.clone(), lecturers)
    }

    /// Every violated structural constraint. Capacity-0 projects are
    /// reported as warnings only.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n2 = self.projects.len();
        for (i, s) in self.students.iter().enumerate() {
            let mut seen = vec![false; n2];
            for (g, group) in s.pref_groups.iter().enumerate() {
                if group.is_empty() {
                    out.push(Violation::error(
                        format!("student {}", i + 1),
                        format!("tie-group {} is empty", g + 1),
                    ));
                }
                for &p in group {
                    if p >= n2 {
                        out.push(Violation::error(
                            format!("student {}", i + 1),
                            format!("project {} does not exist", p + 1),
                        ));
                    } else if seen[p] {
                        out.push(Violation::error(
                            format!("student {}", i + 1),
                            format!("project {} listed more than once", p + 1),
                        ));
                    } else {
                        seen[p] = true;
                    }
                }
            }
        }
        for (j, p) in self.projects.iter().enumerate() {
            if p.lecturer >= self.lecturers.len() {
                out.push(Violation::error(
                    format!("project {}", j + 1),
                    format!("lecturer {} does not exist", p.lecturer + 1),
                ));
            }
            if p.capacity == 0 {
                out.push(Violation::warning(
                    format!("project {}", j + 1),
                    "capacity 0: project can never be matched".to_string(),
                ));
            }
        }
        for (k, l) in self.lecturers.iter().enumerate() {
            if l.upper_quota < l.lower_quota.max(1) {
                out.push(Violation::error(
                    format!("lecturer {}", k + 1),
                    format!(
                        "d_k+ >= max{{d_k-,1}} violated (d+ = {}, d- = {})",
                        l.upper_quota, l.lower_quota
                    ),
                ));
            }
        }
        out
    }

    /// `Ok` when no error-level violation exists.
    pub fn ensure_valid(&self) -> Result<()> {
        let errors: Vec<String> = self
            .validate()
            .into_iter()
            .filter(|v| v.severity == Severity::Error)
            .map(|v| v.to_string())
            .collect();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(SpaError::InvalidInstance(errors.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub location: String,
    pub message: String,
}

impl Violation {
    fn error(location: String, message: String) -> Self {
        Violation { severity: Severity::Error, location, message }
    }

    fn warning(location: String, message: String) -> Self {
        Violation { severity: Severity::Warning, location, message }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {}: {}", self.location, self.message)
    }
}

/// A partial assignment of students to projects.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    assignment: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n_students: usize) -> Self {
        Matching { assignment: vec![None; n_students] }
    }

    pub fn from_assignment(assignment: Vec<Option<usize>>) -> Self {
        Matching { assignment }
    }

    /// Builds a matching from (student, project) pairs; later pairs for the
    /// same student are rejected.
    pub fn from_pairs(n_students: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matching::empty(n_students);
        for &(s, p) in pairs {
            if s >= n_students {
                return Err(SpaError::InvalidMatching(format!("student {} does not exist", s + 1)));
            }
            if m.assignment[s].is_some() {
                return Err(SpaError::InvalidMatching(format!(
                    "student {} assigned more than once",
                    s + 1
                )));
            }
            m.assignment[s] = Some(p);
        }
        Ok(m)
    }

    pub fn project_of(&self, student: usize) -> Option<usize> {
        self.assignment.get(student).copied().flatten()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(s, p)| p.map(|p| (s, p)))
            .collect()
    }

    pub fn size(&self) -> usize {
        self.assignment.iter().filter(|p| p.is_some()).count()
    }
}

/// Size, profile, cost and degree of a matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingStats {
    pub size: usize,
    pub profile: Profile,
    pub cost: i64,
    pub degree: usize,
}

impl fmt::Display for MatchingStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "size={} profile={} cost={} degree={}",
            self.size, self.profile, self.cost, self.degree
        )
    }
}

/// Checks acceptability and the upper-quota constraints.
pub fn check_matching(instance: &SpaInstance, matching: &Matching) -> Result<()> {
    if matching.assignment.len() != instance.n_students() {
        return Err(SpaError::InvalidMatching(format!(
            "matching covers {} students, instance has {}",
            matching.assignment.len(),
            instance.n_students()
        )));
    }
    let mut project_load = vec![0u32; instance.n_projects()];
    let mut lecturer_load = vec![0u32; instance.n_lecturers()];
    for (s, p) in matching.pairs() {
        if instance.rank(s, p).is_err() {
            return Err(SpaError::InvalidMatching(format!(
                "pair (s{}, p{}) is not acceptable",
                s + 1,
                p + 1
            )));
        }
        project_load[p] += 1;
        lecturer_load[instance.projects()[p].lecturer] += 1;
    }
    for (j, (&load, proj)) in project_load.iter().zip(instance.projects()).enumerate() {
        if load > proj.capacity {
            return Err(SpaError::InvalidMatching(format!(
                "project {} holds {} students, capacity {}",
                j + 1,
                load,
                proj.capacity
            )));
        }
    }
    for (k, (&load, lec)) in lecturer_load.iter().zip(instance.lecturers()).enumerate() {
        if load > lec.upper_quota {
            return Err(SpaError::InvalidMatching(format!(
                "lecturer {} holds {} students, upper quota {}",
                k + 1,
                load,
                lec.upper_quota
            )));
        }
    }
    Ok(())
}

/// `true` iff every lecturer meets its lower quota.
pub fn meets_lower_quotas(instance: &SpaInstance, matching: &Matching) -> bool {
    let mut lecturer_load = vec![0u32; instance.n_lecturers()];
    for (_, p) in matching.pairs() {
        lecturer_load[instance.projects()[p].lecturer] += 1;
    }
    lecturer_load
        .iter()
        .zip(instance.lecturers())
        .all(|(&load, l)| load >= l.lower_quota)
}

pub fn matching_stats(instance: &SpaInstance, matching: &Matching) -> Result<MatchingStats> {
    check_matching(instance, matching)?;
    let mut counts = vec![0i32; instance.max_rank()];
    for (s, p) in matching.pairs() {
        counts[instance.rank(s, p)? - 1] += 1;
    }
    let profile = Profile::from_counts(counts)?;
    Ok(MatchingStats {
        size: matching.size(),
        cost: profile.cost()?,
        degree: profile.degree()?,
        profile,
    })
}

/// The three-student instance used throughout the docs and tests: its greedy
/// maximum matching has profile (2,0,1) and its generous maximum matching
/// has profile (1,2,0).
pub fn example_instance() -> SpaInstance {
    SpaInstance::new(
        vec![
            Student::strict(&[0, 1, 2]),
            Student::strict(&[0]),
            Student::strict(&[1, 2]),
        ],
        vec![
            Project { capacity: 1, lecturer: 0 },
            Project { capacity: 1, lecturer: 0 },
            Project { capacity: 1, lecturer: 1 },
        ],
        vec![Lecturer::new(2), Lecturer::new(1)],
    )
}

/// Three students, three single-project lecturers; the middle lecturer has a
/// lower quota of 2, which forces both s1 and s2 onto p2.
pub fn example_lower_quota_instance() -> SpaInstance {
    SpaInstance::new(
        vec![
            Student::strict(&[0, 1]),
            Student::strict(&[2, 1]),
            Student::strict(&[2]),
        ],
        vec![
            Project { capacity: 1, lecturer: 0 },
            Project { capacity: 2, lecturer: 1 },
            Project { capacity: 1, lecturer: 2 },
        ],
        vec![
            Lecturer { upper_quota: 1, lower_quota: 0 },
            Lecturer { upper_quota: 2, lower_quota: 2 },
            Lecturer { upper_quota: 1, lower_quota: 0 },
        ],
    )
}
