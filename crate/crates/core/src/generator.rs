//! Seeded random instance generation.
//!
//! The random stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64(seed)`. Draws happen in a fixed order: student lists in
//! student order, then project capacities, then the lecturer owning each
//! project, so a given config and seed always produce the same instance.
//!
//! Every lecturer offers at least one project; remaining projects go to
//! uniformly random lecturers. The total lecturer quota is split in
//! proportion to the capacity each lecturer offers, with a floor of
//! `max(1, lower quota)`, so no quota sits on a lecturer without places.
//!
//! Project `j` has popularity weight `1 + (λ - 1) * j / (n2 - 1)`: the last
//! project is λ times as likely to be drawn as the first. Each list is drawn
//! one project at a time without replacement.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SpaError};
use crate::instance::{Lecturer, Project, SpaInstance, Student};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n1: usize,
    /// Defaults to `max(1, ⌊0.3·n1⌋)`.
    pub n2: Option<usize>,
    /// Defaults to `max(1, ⌊0.3·n1⌋)`.
    pub n3: Option<usize>,
    pub r_min: usize,
    pub r_max: usize,
    /// Ratio of the most to the least popular project's draw weight.
    pub popularity: f64,
    /// Total project capacity; defaults to `⌊1.2·n1⌋`.
    pub project_capacity: Option<u32>,
    /// Total lecturer upper quota; defaults to `⌊1.2·n1⌋`.
    pub lecturer_capacity: Option<u32>,
    /// Probability that a list entry joins the tie-group before it.
    pub tie_density: f64,
    /// Project lower quotas are not supported; must be 0.
    pub project_lower: u32,
    /// Total lecturer lower quota, spread evenly.
    pub lecturer_lower: u32,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n1: 100,
            n2: None,
            n3: None,
            r_min: 10,
            r_max: 10,
            popularity: 5.0,
            project_capacity: None,
            lecturer_capacity: None,
            tie_density: 0.0,
            project_lower: 0,
            lecturer_lower: 0,
            seed: 0,
        }
    }
}

fn scaled(n1: usize, tenths: usize) -> usize {
    n1 * tenths / 10
}

impl GenConfig {
    pub fn with_n1(n1: usize) -> Self {
        GenConfig { n1, ..GenConfig::default() }
    }

    pub fn n_projects(&self) -> usize {
        self.n2.unwrap_or_else(|| scaled(self.n1, 3).max(1))
    }

    pub fn n_lecturers(&self) -> usize {
        self.n3.unwrap_or_else(|| scaled(self.n1, 3).max(1))
    }

    pub fn total_project_capacity(&self) -> u32 {
        self.project_capacity.unwrap_or(scaled(self.n1, 12) as u32)
    }

    pub fn total_lecturer_capacity(&self) -> u32 {
        self.lecturer_capacity.unwrap_or(scaled(self.n1, 12) as u32)
    }

    /// Lecturer lower quotas after the even split.
    pub fn lower_quotas(&self) -> Vec<u32> {
        let n3 = self.n_lecturers() as u32;
        if n3 == 0 {
            return Vec::new();
        }
        (0..n3)
            .map(|k| self.lecturer_lower / n3 + u32::from(k < self.lecturer_lower % n3))
            .collect()
    }

    pub fn check(&self) -> Result<()> {
        let n2 = self.n_projects();
        let n3 = self.n_lecturers();
        let err = |m: String| Err(SpaError::Config(m));
        if self.n1 == 0 || n2 == 0 || n3 == 0 {
            return err(format!("counts must be positive (n1={}, n2={n2}, n3={n3})", self.n1));
        }
        if self.r_min == 0 || self.r_min > self.r_max {
            return err(format!("need 1 <= r_min <= r_max (r_min={}, r_max={})", self.r_min, self.r_max));
        }
        if self.r_max > n2 {
            return err(format!("r_max={} exceeds the {n2} projects", self.r_max));
        }
        if !(self.popularity.is_finite() && self.popularity >= 1.0) {
            return err(format!("popularity must be >= 1, got {}", self.popularity));
        }
        if !(0.0..=1.0).contains(&self.tie_density) {
            return err(format!("tie density must lie in [0,1], got {}", self.tie_density));
        }
        if self.project_lower > 0 {
            return err("project lower quotas are not supported".into());
        }
        let cp = self.total_project_capacity();
        if (cp as usize) < n2 {
            return err(format!("total project capacity {cp} cannot give each of {n2} projects 1 place"));
        }
        let floor: u64 = self.lower_quotas().iter().map(|&d| u64::from(d.max(1))).sum();
        let cl = self.total_lecturer_capacity();
        if u64::from(cl) < floor {
            return err(format!("total lecturer capacity {cl} is below the required minimum {floor}"));
        }
        Ok(())
    }
}

/// Splits `total` into `floors.len()` parts, part `i` at least `floors[i]`,
/// uniformly over all such compositions.
fn random_composition(rng: &mut ChaCha8Rng, total: u32, floors: &[u32]) -> Vec<u32> {
    let parts = floors.len();
    let spare = (total - floors.iter().sum::<u32>()) as usize;
    let slots = spare + parts - 1;
    let mut bars = index::sample(rng, slots, parts - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0usize;
    for (i, &b) in bars.iter().enumerate() {
        // stars between consecutive bars
        out.push((b - prev) as u32 + floors[i]);
        prev = b + 1;
    }
    out.push((slots - prev) as u32 + floors[parts - 1]);
    out
}

/// Splits `total` in proportion to `weights`, part `i` at least
/// `floors[i]`; leftover units go to the largest remainders, lowest index
/// first on ties.
fn apportion(total: u32, weights: &[u64], floors: &[u32]) -> Vec<u32> {
    let weight_sum: u64 = weights.iter().sum::<u64>().max(1);
    let ideal: Vec<f64> = weights
        .iter()
        .map(|&w| f64::from(total) * w as f64 / weight_sum as f64)
        .collect();
    let mut parts: Vec<u32> = ideal
        .iter()
        .zip(floors)
        .map(|(&x, &f)| (x.floor() as u32).max(f))
        .collect();
    let mut assigned: u32 = parts.iter().sum();
    let mut order: Vec<usize> = (0..parts.len()).collect();
    order.sort_by(|&a, &b| {
        let (ra, rb) = (ideal[a] - f64::from(parts[a]), ideal[b] - f64::from(parts[b]));
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut i = 0;
    while assigned < total {
        parts[order[i % order.len()]] += 1;
        assigned += 1;
        i += 1;
    }
    // floors may overshoot; take back from parts furthest above their ideal
    while assigned > total {
        let k = (0..parts.len())
            .filter(|&k| parts[k] > floors[k])
            .max_by(|&a, &b| {
                (f64::from(parts[a]) - ideal[a]).total_cmp(&(f64::from(parts[b]) - ideal[b])).then(b.cmp(&a))
            })
            .expect("total covers the floors");
        parts[k] -= 1;
        assigned -= 1;
    }
    parts
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for one cell of an experiment grid: the master seed and each
/// coordinate folded in turn through the SplitMix64 finaliser.
pub fn derive_seed(master: u64, coordinates: &[u64]) -> u64 {
    coordinates
        .iter()
        .fold(splitmix64(master), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

fn popularity_weights(n2: usize, popularity: f64) -> Vec<f64> {
    if n2 == 1 {
        return vec![1.0];
    }
    (0..n2)
        .map(|j| 1.0 + (popularity - 1.0) * j as f64 / (n2 - 1) as f64)
        .collect()
}

pub fn generate(config: &GenConfig) -> Result<SpaInstance> {
    config.check()?;
    let n2 = config.n_projects();
    let n3 = config.n_lecturers();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let weights = popularity_weights(n2, config.popularity);

    let mut students = Vec::with_capacity(config.n1);
    for _ in 0..config.n1 {
        let len = rng.gen_range(config.r_min..=config.r_max);
        let mut picks = WeightedIndex::new(&weights).map_err(|e| SpaError::Config(e.to_string()))?;
        let mut groups: Vec<Vec<usize>> = Vec::with_capacity(len);
        for pos in 0..len {
            let p = picks.sample(&mut rng);
            if pos + 1 < len {
                picks
                    .update_weights(&[(p, &0.0)])
                    .map_err(|e| SpaError::Config(e.to_string()))?;
            }
            match groups.last_mut() {
                Some(g) if rng.gen_bool(config.tie_density) => g.push(p),
                _ => groups.push(vec![p]),
            }
        }
        students.push(Student::new(groups));
    }

    let capacities = random_composition(&mut rng, config.total_project_capacity(), &vec![1; n2]);
    let mut owners: Vec<usize> = (0..n2).map(|j| if j < n3 { j } else { rng.gen_range(0..n3) }).collect();
    owners.shuffle(&mut rng);
    let mut offered = vec![0u64; n3];
    for (&c, &l) in capacities.iter().zip(&owners) {
        offered[l] += u64::from(c);
    }
    let lower = config.lower_quotas();
    let floors: Vec<u32> = lower.iter().map(|&d| d.max(1)).collect();
    let quotas = apportion(config.total_lecturer_capacity(), &offered, &floors);
    let projects: Vec<Project> = capacities
        .into_iter()
        .zip(owners)
        .map(|(capacity, lecturer)| Project { capacity, lecturer })
        .collect();
    let lecturers: Vec<Lecturer> = quotas
        .into_iter()
        .zip(lower)
        .map(|(upper_quota, lower_quota)| Lecturer { upper_quota, lower_quota })
        .collect();

    let instance = SpaInstance::new(students, projects, lecturers);
    instance
        .ensure_valid()
        .map_err(|e| SpaError::Invariant(format!("generated instance is invalid: {e}")))?;
    Ok(instance)
}
