//! Line-oriented text formats for instances and matchings.
//!
//! Instance file (ids are 1-based, `#` starts a comment):
//!
//! ```text
//! n1 n2 n3
//! <n1 student lines>    project ids in preference order, ties in parentheses: `3 (1 2)`
//! <n2 project lines>    capacity lecturer_id
//! <n3 lecturer lines>   upper_quota lower_quota
//! ```
//!
//! Inside the student block a blank line is a student with an empty list;
//! comment-only lines are skipped everywhere. Matching files hold one
//! `student project` pair per line followed by a `# size=.. profile=(..)
//! cost=.. degree=..` footer.

use std::fmt::Write as _;

use crate::error::{Result, SpaError};
use crate::instance::{Lecturer, Matching, MatchingStats, Project, SpaInstance, Student};

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }

    /// Next line that is not comment-only. With `keep_blank`, blank lines are
    /// returned as empty content.
    fn next_content(&mut self, keep_blank: bool) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let trimmed = raw.trim();
            if trimmed.starts_with('#') {
                continue;
            }
            let content = strip_comment(raw).trim();
            if content.is_empty() && !keep_blank {
                continue;
            }
            return Some((i + 1, content));
        }
        None
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_uint(tok: &str, line: usize, what: &str) -> Result<u64> {
    tok.parse::<u64>().map_err(|_| SpaError::Parse {
        line,
        message: format!("expected a non-negative integer for {what}, found {tok:?}"),
    })
}

fn parse_id(tok: &str, line: usize, what: &str) -> Result<usize> {
    let v = parse_uint(tok, line, what)?;
    if v == 0 {
        return Err(SpaError::Parse { line, message: format!("{what} ids are 1-based, found 0") });
    }
    Ok(v as usize - 1)
}

fn parse_fields<const N: usize>(content: &str, line: usize, what: &str) -> Result<[u64; N]> {
    let toks: Vec<&str> = content.split_whitespace().collect();
    if toks.len() != N {
        return Err(SpaError::Parse {
            line,
            message: format!("{what} line needs {N} fields, found {}", toks.len()),
        });
    }
    let mut out = [0u64; N];
    for (o, t) in out.iter_mut().zip(&toks) {
        *o = parse_uint(t, line, what)?;
    }
    Ok(out)
}

fn parse_pref_line(content: &str, line: usize) -> Result<Vec<Vec<usize>>> {
    let spaced = content.replace('(', " ( ").replace(')', " ) ");
    let mut groups = Vec::new();
    let mut open: Option<Vec<usize>> = None;
    for tok in spaced.split_whitespace() {
        match tok {
            "(" => {
                if open.is_some() {
                    return Err(SpaError::Parse { line, message: "nested '('".into() });
                }
                open = Some(Vec::new());
            }
            ")" => match open.take() {
                Some(g) if g.is_empty() => {
                    return Err(SpaError::Parse { line, message: "empty tie-group '()'".into() })
                }
                Some(g) => groups.push(g),
                None => return Err(SpaError::Parse { line, message: "unmatched ')'".into() }),
            },
            t => {
                let p = parse_id(t, line, "project")?;
                match open.as_mut() {
                    Some(g) => g.push(p),
                    None => groups.push(vec![p]),
                }
            }
        }
    }
    if open.is_some() {
        return Err(SpaError::Parse { line, message: "unclosed '('".into() });
    }
    Ok(groups)
}

/// Parses the instance format. Semantic checks are left to
/// [`SpaInstance::validate`].
pub fn parse_instance(text: &str) -> Result<SpaInstance> {
    let mut lines = Lines::new(text);
    let (hl, header) = lines
        .next_content(false)
        .ok_or(SpaError::Parse { line: 1, message: "missing header `n1 n2 n3`".into() })?;
    let [n1, n2, n3] = parse_fields::<3>(header, hl, "header")?;

    let mut students = Vec::with_capacity(n1 as usize);
    for i in 0..n1 {
        let (ln, content) = lines.next_content(true).ok_or(SpaError::Parse {
            line: hl,
            message: format!("expected {n1} student lines, found {i}"),
        })?;
        students.push(Student::new(parse_pref_line(content, ln)?));
    }
    let mut projects = Vec::with_capacity(n2 as usize);
    for j in 0..n2 {
        let (ln, content) = lines.next_content(false).ok_or(SpaError::Parse {
            line: hl,
            message: format!("expected {n2} project lines, found {j}"),
        })?;
        let [cap, lec] = parse_fields::<2>(content, ln, "project")?;
        if lec == 0 {
            return Err(SpaError::Parse { line: ln, message: "lecturer ids are 1-based, found 0".into() });
        }
        let capacity = u32::try_from(cap)
            .map_err(|_| SpaError::Parse { line: ln, message: "capacity too large".into() })?;
        projects.push(Project { capacity, lecturer: lec as usize - 1 });
    }
    let mut lecturers = Vec::with_capacity(n3 as usize);
    for k in 0..n3 {
        let (ln, content) = lines.next_content(false).ok_or(SpaError::Parse {
            line: hl,
            message: format!("expected {n3} lecturer lines, found {k}"),
        })?;
        let [upper, lower] = parse_fields::<2>(content, ln, "lecturer")?;
        let conv = |v: u64| {
            u32::try_from(v).map_err(|_| SpaError::Parse { line: ln, message: "quota too large".into() })
        };
        lecturers.push(Lecturer { upper_quota: conv(upper)?, lower_quota: conv(lower)? });
    }
    if let Some((ln, _)) = lines.next_content(false) {
        return Err(SpaError::Parse { line: ln, message: "unexpected content after the last lecturer".into() });
    }
    Ok(SpaInstance::new(students, projects, lecturers))
}

pub fn write_instance(instance: &SpaInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} {} {}",
        instance.n_students(),
        instance.n_projects(),
        instance.n_lecturers()
    );
    for s in instance.students() {
        let parts: Vec<String> = s
            .pref_groups
            .iter()
            .map(|g| {
                if g.len() == 1 {
                    (g[0] + 1).to_string()
                } else {
                    let ids: Vec<String> = g.iter().map(|p| (p + 1).to_string()).collect();
                    format!("({})", ids.join(" "))
                }
            })
            .collect();
        let _ = writeln!(out, "{}", parts.join(" "));
    }
    for p in instance.projects() {
        let _ = writeln!(out, "{} {}", p.capacity, p.lecturer + 1);
    }
    for l in instance.lecturers() {
        let _ = writeln!(out, "{} {}", l.upper_quota, l.lower_quota);
    }
    out
}

pub fn write_matching(matching: &Matching, stats: &MatchingStats) -> String {
    let mut out = String::new();
    for (s, p) in matching.pairs() {
        let _ = writeln!(out, "{} {}", s + 1, p + 1);
    }
    let _ = writeln!(out, "# {stats}");
    out
}

/// Parses `student project` pairs (1-based, an optional `s`/`p` prefix is
/// accepted); comments are ignored.
pub fn parse_matching(text: &str, n_students: usize) -> Result<Matching> {
    let mut lines = Lines::new(text);
    let mut pairs = Vec::new();
    while let Some((ln, content)) = lines.next_content(false) {
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(SpaError::Parse { line: ln, message: "expected `student project`".into() });
        }
        let s = parse_id(toks[0].trim_start_matches('s'), ln, "student")?;
        let p = parse_id(toks[1].trim_start_matches('p'), ln, "project")?;
        pairs.push((s, p));
    }
    Matching::from_pairs(n_students, &pairs).map_err(|e| match e {
        SpaError::InvalidMatching(m) => SpaError::Parse { line: 0, message: m },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{example_instance, matching_stats};

    const FIGURE: &str = "\
# three students, three projects, two lecturers
3 3 2
1 2 3
1
2 3
1 1
1 1
1 2
2 0
1 0
";

    #[test]
    fn parses_the_example() {
        let inst = parse_instance(FIGURE).unwrap();
        assert_eq!(inst.n_students(), 3);
        assert_eq!(inst.n_projects(), 3);
        assert_eq!(inst.n_lecturers(), 2);
        assert_eq!(inst, example_instance());
    }

    #[test]
    fn write_then_parse_is_identity() {
        let inst = example_instance();
        assert_eq!(parse_instance(&write_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn ties_and_empty_lists() {
        let text = "2 3 1\n3 (1 2)\n\n1 1\n1 1\n1 1\n3 0\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.students()[0].pref_groups, vec![vec![2], vec![0, 1]]);
        assert!(inst.students()[1].pref_groups.is_empty());
        assert_eq!(inst.rank(0, 1).unwrap(), 2);
        assert_eq!(write_instance(&inst), text);
        assert!(inst.validate().is_empty());
    }

    #[test]
    fn tight_parentheses_parse() {
        let inst = parse_instance("1 3 1\n(1 2)3\n1 1\n1 1\n1 1\n1 0\n").unwrap();
        assert_eq!(inst.students()[0].pref_groups, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_instance("1 1 1\n1 x\n1 1\n1 0\n").unwrap_err();
        assert_eq!(err, SpaError::Parse { line: 2, message: "expected a non-negative integer for project, found \"x\"".into() });
        assert!(matches!(parse_instance("1 1 1\n1\n1 1\n1 zero\n"), Err(SpaError::Parse { line: 4, .. })));
        assert!(matches!(parse_instance("1 1 1\n(1\n1 1\n1 0\n"), Err(SpaError::Parse { line: 2, .. })));
        assert!(matches!(parse_instance("1 1 1\n0\n1 1\n1 0\n"), Err(SpaError::Parse { line: 2, .. })));
        assert!(matches!(parse_instance("1 1 1\n1\n1 1\n"), Err(SpaError::Parse { .. })));
        assert!(matches!(parse_instance("1 1 1\n1\n1 1\n1 0\n9 9\n"), Err(SpaError::Parse { line: 5, .. })));
        assert!(matches!(parse_instance(""), Err(SpaError::Parse { .. })));
    }

    #[test]
    fn matching_format_round_trip() {
        let inst = example_instance();
        let m = Matching::from_pairs(3, &[(0, 2), (1, 0), (2, 1)]).unwrap();
        let stats = matching_stats(&inst, &m).unwrap();
        let text = write_matching(&m, &stats);
        assert_eq!(text, "1 3\n2 1\n3 2\n# size=3 profile=(2,0,1) cost=5 degree=3\n");
        assert_eq!(parse_matching(&text, 3).unwrap(), m);
        assert_eq!(parse_matching("s1 p3\n", 3).unwrap().project_of(0), Some(2));
    }
}
