//! Profile vectors and the two dominance orders used to rank them.
//!
//! A profile counts assignments per rank: component `r` (1-based) is the
//! number of students matched to a project they ranked `r`. Profiles of
//! augmenting paths are differences of matchings, so components may be
//! negative. Two sentinels sit outside the finite profiles: `NegInf` is the
//! minimum of both orders and `PosInf` the maximum.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Result, SpaError};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Profile {
    NegInf,
    Finite(Vec<i32>),
    PosInf,
}

/// Direction of a unit rank shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    Up,
    Down,
}

/// The optimality criterion a search or oracle runs under.
///
/// `Greedy` maximises under left domination, `Generous` minimises under
/// right domination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Greedy,
    Generous,
}

impl Criterion {
    /// Label of an unreached node: the worst value under this criterion.
    pub fn unreached(self) -> Profile {
        match self {
            Criterion::Greedy => Profile::NegInf,
            Criterion::Generous => Profile::PosInf,
        }
    }

    /// `true` iff `a` is strictly better than `b`.
    pub fn better(self, a: &Profile, b: &Profile) -> Result<bool> {
        match self {
            Criterion::Greedy => a.left_dominates(b),
            Criterion::Generous => a.right_precedes(b),
        }
    }

    /// Ordering in which `Less` means "better".
    pub fn compare(self, a: &Profile, b: &Profile) -> Result<Ordering> {
        match self {
            Criterion::Greedy => Ok(a.left_cmp(b)?.reverse()),
            Criterion::Generous => a.right_cmp(b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Greedy => "greedy",
            Criterion::Generous => "generous",
        }
    }
}

impl Profile {
    /// The all-zero profile of dimension `r`.
    pub fn empty(r: usize) -> Result<Profile> {
        if r == 0 {
            return Err(SpaError::Dimension("profile length must be at least 1".into()));
        }
        Ok(Profile::Finite(vec![0; r]))
    }

    pub fn from_counts(counts: Vec<i32>) -> Result<Profile> {
        if counts.is_empty() {
            return Err(SpaError::Dimension("profile length must be at least 1".into()));
        }
        Ok(Profile::Finite(counts))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Profile::Finite(_))
    }

    pub fn values(&self) -> Option<&[i32]> {
        match self {
            Profile::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Dimension of a finite profile; `None` for sentinels.
    pub fn dim(&self) -> Option<usize> {
        self.values().map(<[i32]>::len)
    }

    fn check_dims(a: &[i32], b: &[i32]) -> Result<()> {
        if a.len() != b.len() {
            return Err(SpaError::Dimension(format!(
                "profiles have lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(())
    }

    /// Componentwise sum. Sentinels absorb; `NegInf` wins over `PosInf`.
    pub fn add(&self, other: &Profile) -> Result<Profile> {
        match (self, other) {
            (Profile::NegInf, _) | (_, Profile::NegInf) => Ok(Profile::NegInf),
            (Profile::PosInf, _) | (_, Profile::PosInf) => Ok(Profile::PosInf),
            (Profile::Finite(a), Profile::Finite(b)) => {
                Self::check_dims(a, b)?;
                Ok(Profile::Finite(a.iter().zip(b).map(|(x, y)| x + y).collect()))
            }
        }
    }

    /// Componentwise difference, with the same sentinel rules as [`Profile::add`].
    pub fn sub(&self, other: &Profile) -> Result<Profile> {
        match (self, other) {
            (Profile::NegInf, _) | (_, Profile::NegInf) => Ok(Profile::NegInf),
            (Profile::PosInf, _) | (_, Profile::PosInf) => Ok(Profile::PosInf),
            (Profile::Finite(a), Profile::Finite(b)) => {
                Self::check_dims(a, b)?;
                Ok(Profile::Finite(a.iter().zip(b).map(|(x, y)| x - y).collect()))
            }
        }
    }

    /// Add or remove one assignment at rank `q` (1-based).
    pub fn shift(&self, q: usize, dir: Shift) -> Result<Profile> {
        let mut out = self.clone();
        out.shift_in_place(q, dir)?;
        Ok(out)
    }

    pub fn shift_in_place(&mut self, q: usize, dir: Shift) -> Result<()> {
        match self {
            Profile::Finite(v) => {
                if q == 0 || q > v.len() {
                    return Err(SpaError::Rank { rank: q, max: v.len() });
                }
                match dir {
                    Shift::Up => v[q - 1] += 1,
                    Shift::Down => v[q - 1] -= 1,
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn plus(&self, q: usize) -> Result<Profile> {
        self.shift(q, Shift::Up)
    }

    pub fn minus(&self, q: usize) -> Result<Profile> {
        self.shift(q, Shift::Down)
    }

    /// Lexicographic comparison from rank 1 upward. `Greater` means `self`
    /// left dominates `other`.
    pub fn left_cmp(&self, other: &Profile) -> Result<Ordering> {
        match (self, other) {
            (Profile::Finite(a), Profile::Finite(b)) => {
                Self::check_dims(a, b)?;
                Ok(a.iter().cmp(b.iter()))
            }
            _ => Ok(self.sentinel_rank().cmp(&other.sentinel_rank())),
        }
    }

    /// Lexicographic comparison from rank R downward. `Less` means `self`
    /// right dominates (precedes) `other`.
    pub fn right_cmp(&self, other: &Profile) -> Result<Ordering> {
        match (self, other) {
            (Profile::Finite(a), Profile::Finite(b)) => {
                Self::check_dims(a, b)?;
                Ok(a.iter().rev().cmp(b.iter().rev()))
            }
            _ => Ok(self.sentinel_rank().cmp(&other.sentinel_rank())),
        }
    }

    fn sentinel_rank(&self) -> i8 {
        match self {
            Profile::NegInf => -1,
            Profile::Finite(_) => 0,
            Profile::PosInf => 1,
        }
    }

    /// Strict left domination `self ≻_L other`.
    pub fn left_dominates(&self, other: &Profile) -> Result<bool> {
        Ok(self.left_cmp(other)? == Ordering::Greater)
    }

    /// Strict right domination `self ≺_R other`.
    pub fn right_precedes(&self, other: &Profile) -> Result<bool> {
        Ok(self.right_cmp(other)? == Ordering::Less)
    }

    /// Sum of `r * x_r`.
    pub fn cost(&self) -> Result<i64> {
        let v = self
            .values()
            .ok_or_else(|| SpaError::Value("cost of an infinite profile".into()))?;
        Ok(v.iter()
            .enumerate()
            .map(|(i, &x)| (i as i64 + 1) * x as i64)
            .sum())
    }

    /// Largest rank with a positive count, or 0 for the empty profile.
    pub fn degree(&self) -> Result<usize> {
        let v = self
            .values()
            .ok_or_else(|| SpaError::Value("degree of an infinite profile".into()))?;
        if let Some(x) = v.iter().find(|&&x| x < 0) {
            return Err(SpaError::Value(format!(
                "degree is defined for matching profiles only (component {x} < 0)"
            )));
        }
        Ok(v.iter().rposition(|&x| x > 0).map_or(0, |i| i + 1))
    }

    /// Number of assignments a matching profile describes.
    pub fn total(&self) -> Option<i64> {
        self.values().map(|v| v.iter().map(|&x| x as i64).sum())
    }

    /// `x1|x2|...|xR`, the CSV cell encoding.
    pub fn to_pipe_string(&self) -> String {
        match self {
            Profile::Finite(v) => v
                .iter()
                .map(i32::to_string)
                .collect::<Vec<_>>()
                .join("|"),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::NegInf => f.write_str("-INF"),
            Profile::PosInf => f.write_str("+INF"),
            Profile::Finite(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = SpaError;

    fn from_str(s: &str) -> Result<Profile> {
        let s = s.trim();
        match s {
            "-INF" => return Ok(Profile::NegInf),
            "+INF" => return Ok(Profile::PosInf),
            _ => {}
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| SpaError::Value(format!("malformed profile {s:?}")))?;
        let counts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i32>()
                    .map_err(|_| SpaError::Value(format!("malformed profile component {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Profile::from_counts(counts)
    }
}
