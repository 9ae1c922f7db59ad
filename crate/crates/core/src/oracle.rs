//! Ground truth by exhaustive enumeration of k-Dyck paths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::par;
use crate::TurnKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// `(1, k)`
    Up,
    /// `(1, -1)`
    Down,
}

/// A k-Dyck path: never below the axis, ends on it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath {
    k: u32,
    steps: Vec<Step>,
}

impl DyckPath {
    pub fn new(k: u32, steps: Vec<Step>) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
        }
        let mut level: i64 = 0;
        for (i, step) in steps.iter().enumerate() {
            level += match step {
                Step::Up => i64::from(k),
                Step::Down => -1,
            };
            if level < 0 {
                return Err(Error::InvalidParameter(format!(
                    "path drops below the axis at step {}",
                    i + 1
                )));
            }
        }
        if level != 0 {
            return Err(Error::InvalidParameter(format!(
                "path ends at level {level}, not 0"
            )));
        }
        Ok(DyckPath { k, steps })
    }

    /// Parses a string over `U`/`D`.
    pub fn parse(k: u32, text: &str) -> Result<Self> {
        let steps = text
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'D' | 'd' => Ok(Step::Down),
                other => Err(Error::InvalidParameter(format!(
                    "unexpected step `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        DyckPath::new(k, steps)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of up-steps.
    pub fn n(&self) -> u32 {
        self.steps.iter().filter(|&&s| s == Step::Up).count() as u32
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            f.write_str(match s {
                Step::Up => "U",
                Step::Down => "D",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U" => Ok(Step::Up),
            "D" => Ok(Step::Down),
            other => Err(Error::InvalidParameter(format!(
                "unexpected step `{other}`"
            ))),
        }
    }
}

/// Max-turn and min-turn levels of one path, indexed by `s - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TurnProfile {
    pub max_levels: Vec<u32>,
    pub min_levels: Vec<u32>,
}

impl TurnProfile {
    /// Down-run length after each up-step.
    pub fn osc_levels(&self) -> Vec<u32> {
        self.max_levels
            .iter()
            .zip(&self.min_levels)
            .map(|(hi, lo)| hi - lo)
            .collect()
    }

    pub fn level(&self, kind: TurnKind, s: u32) -> Option<u32> {
        let i = (s as usize).checked_sub(1)?;
        let hi = *self.max_levels.get(i)?;
        let lo = *self.min_levels.get(i)?;
        Some(match kind {
            TurnKind::Max => hi,
            TurnKind::Min => lo,
            TurnKind::Osc => hi - lo,
        })
    }

    /// Checks the structural coupling between consecutive turns; the error
    /// names the first violated property.
    pub fn check(&self, k: u32, n: u32) -> std::result::Result<(), String> {
        let n = n as usize;
        if self.max_levels.len() != n || self.min_levels.len() != n {
            return Err(format!(
                "lengths {}/{} differ from N={n}",
                self.max_levels.len(),
                self.min_levels.len()
            ));
        }
        for s in 0..n {
            if self.max_levels[s] < self.min_levels[s] {
                return Err(format!("negative down-run at s={}", s + 1));
            }
            if s + 1 < n && self.min_levels[s] + k != self.max_levels[s + 1] {
                return Err(format!(
                    "min-turn {} plus k is not max-turn {}",
                    s + 1,
                    s + 2
                ));
            }
        }
        if n > 0 && self.min_levels[n - 1] != 0 {
            return Err(format!("last min-turn at level {}", self.min_levels[n - 1]));
        }
        Ok(())
    }
}

pub fn turn_profile(path: &DyckPath) -> TurnProfile {
    let k = path.k;
    let mut profile = TurnProfile::default();
    let mut level = 0u32;
    for (i, step) in path.steps.iter().enumerate() {
        match step {
            Step::Up => {
                if i > 0 {
                    profile.min_levels.push(level);
                }
                level += k;
                profile.max_levels.push(level);
            }
            Step::Down => level -= 1,
        }
    }
    if !profile.max_levels.is_empty() {
        profile.min_levels.push(level);
    }
    profile
}

/// Lexicographic (`Up < Down`) iterator over all k-Dyck paths with `n`
/// up-steps.
///
/// Each call advances to the next path by flipping the rightmost up-step
/// that can legally become a down-step and refilling the suffix with the
/// smallest valid completion (all remaining ups, then downs).
#[derive(Debug, Clone)]
pub struct Paths {
    k: u32,
    n: u32,
    current: Option<Vec<Step>>,
    started: bool,
}

impl Iterator for Paths {
    type Item = DyckPath;

    fn next(&mut self) -> Option<DyckPath> {
        if self.started {
            let steps = self.current.as_mut()?;
            if !advance(steps, self.k, self.n) {
                self.current = None;
                return None;
            }
        }
        self.started = true;
        self.current.as_ref().map(|steps| DyckPath {
            k: self.k,
            steps: steps.clone(),
        })
    }
}

fn smallest_completion(steps: &mut [Step], from: usize, ups_left: u32) {
    for (j, slot) in steps[from..].iter_mut().enumerate() {
        *slot = if (j as u32) < ups_left {
            Step::Up
        } else {
            Step::Down
        };
    }
}

fn advance(steps: &mut [Step], k: u32, n: u32) -> bool {
    // level before each position and up-steps used before it
    let mut candidate = None;
    let mut level = 0i64;
    let mut ups = 0u32;
    for (i, &step) in steps.iter().enumerate() {
        if step == Step::Up && level >= 1 {
            candidate = Some((i, ups));
        }
        match step {
            Step::Up => {
                level += i64::from(k);
                ups += 1;
            }
            Step::Down => level -= 1,
        }
    }
    let Some((i, ups_before)) = candidate else {
        return false;
    };
    steps[i] = Step::Down;
    smallest_completion(steps, i + 1, n - ups_before);
    true
}

/// All k-Dyck paths with `n` up-steps in lexicographic order; yields
/// `fuss_catalan(k, n)` items.
pub fn enumerate_paths(k: u32, n: u32) -> Result<Paths> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    let len = (k as usize + 1) * n as usize;
    let mut first = vec![Step::Down; len];
    smallest_completion(&mut first, 0, n);
    Ok(Paths {
        k,
        n,
        current: Some(first),
        started: false,
    })
}

/// A partial path during backtracking.
#[derive(Debug, Clone)]
struct Prefix {
    steps: Vec<Step>,
    ups: u32,
    level: u32,
}

impl Prefix {
    fn children(&self, k: u32, n: u32) -> impl Iterator<Item = Prefix> + '_ {
        let up = (self.ups < n).then(|| {
            let mut steps = self.steps.clone();
            steps.push(Step::Up);
            Prefix {
                steps,
                ups: self.ups + 1,
                level: self.level + k,
            }
        });
        let down = (self.level > 0).then(|| {
            let mut steps = self.steps.clone();
            steps.push(Step::Down);
            Prefix {
                steps,
                ups: self.ups,
                level: self.level - 1,
            }
        });
        up.into_iter().chain(down)
    }
}

/// Depth-first backtracking below `prefix`, calling `visit` on every
/// completed path in lexicographic order.
fn backtrack<F: FnMut(&[Step])>(k: u32, n: u32, len: usize, prefix: &Prefix, visit: &mut F) {
    let mut steps = prefix.steps.clone();
    steps.reserve(len - steps.len());
    fn go<F: FnMut(&[Step])>(
        k: u32,
        n: u32,
        len: usize,
        steps: &mut Vec<Step>,
        ups: u32,
        level: u32,
        visit: &mut F,
    ) {
        if steps.len() == len {
            visit(steps);
            return;
        }
        if ups < n {
            steps.push(Step::Up);
            go(k, n, len, steps, ups + 1, level + k, visit);
            steps.pop();
        }
        if level > 0 {
            steps.push(Step::Down);
            go(k, n, len, steps, ups, level - 1, visit);
            steps.pop();
        }
    }
    go(k, n, len, &mut steps, prefix.ups, prefix.level, visit);
}

/// Visits every k-Dyck path with `n` up-steps in lexicographic order
/// without materialising them.
pub fn for_each_path<F: FnMut(&[Step])>(k: u32, n: u32, mut visit: F) {
    let len = (k as usize + 1) * n as usize;
    let root = Prefix {
        steps: Vec::new(),
        ups: 0,
        level: 0,
    };
    backtrack(k, n, len, &root, &mut visit);
}

/// Per-turn totals over all paths with `n` up-steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnSums {
    pub k: u32,
    pub n: u32,
    pub count: u64,
    /// `max[s-1]`: sum of the s-th max-turn level over all paths.
    pub max: Vec<u128>,
    pub min: Vec<u128>,
}

impl TurnSums {
    fn empty(k: u32, n: u32) -> Self {
        TurnSums {
            k,
            n,
            count: 0,
            max: vec![0; n as usize],
            min: vec![0; n as usize],
        }
    }

    fn record(&mut self, steps: &[Step]) {
        let k = self.k;
        let mut level = 0u32;
        let mut turn = 0usize;
        for &step in steps {
            match step {
                Step::Up => {
                    if turn > 0 {
                        self.min[turn - 1] += u128::from(level);
                    }
                    level += k;
                    self.max[turn] += u128::from(level);
                    turn += 1;
                }
                Step::Down => level -= 1,
            }
        }
        if turn > 0 {
            self.min[turn - 1] += u128::from(level);
        }
        self.count += 1;
    }

    fn merge(mut self, other: &TurnSums) -> Self {
        self.count += other.count;
        for (a, b) in self.max.iter_mut().zip(&other.max) {
            *a += b;
        }
        for (a, b) in self.min.iter_mut().zip(&other.min) {
            *a += b;
        }
        self
    }

    /// Total of the requested statistic for turn `s`.
    pub fn get(&self, kind: TurnKind, s: u32) -> Option<u128> {
        let i = (s as usize).checked_sub(1)?;
        let (hi, lo) = (*self.max.get(i)?, *self.min.get(i)?);
        Some(match kind {
            TurnKind::Max => hi,
            TurnKind::Min => lo,
            TurnKind::Osc => hi - lo,
        })
    }
}

/// Single-threaded turn totals.
pub fn turn_sums_sequential(k: u32, n: u32) -> TurnSums {
    let mut acc = TurnSums::empty(k, n);
    for_each_path(k, n, |steps| acc.record(steps));
    acc
}

/// Splits the search tree into at least `target` disjoint prefixes (or
/// stops when the prefixes are complete paths).
fn split_prefixes(k: u32, n: u32, len: usize, target: usize) -> Vec<Prefix> {
    let mut frontier = vec![Prefix {
        steps: Vec::new(),
        ups: 0,
        level: 0,
    }];
    while frontier.len() < target && frontier.first().is_some_and(|p| p.steps.len() < len) {
        frontier = frontier.iter().flat_map(|p| p.children(k, n)).collect();
    }
    frontier
}

/// Turn totals; with the `parallel` feature the search tree is split at a
/// shallow depth and the subtrees are folded on the rayon pool.
pub fn turn_sums(k: u32, n: u32) -> TurnSums {
    if !par::is_parallel() {
        return turn_sums_sequential(k, n);
    }
    let len = (k as usize + 1) * n as usize;
    let prefixes = split_prefixes(k, n, len, 256);
    let partials = par::map(&prefixes, |prefix| {
        let mut acc = TurnSums::empty(k, n);
        backtrack(k, n, len, prefix, &mut |steps: &[Step]| acc.record(steps));
        acc
    });
    partials
        .iter()
        .fold(TurnSums::empty(k, n), |acc, part| acc.merge(part))
}

/// Sum over all paths with `n` up-steps of the chosen statistic at turn `s`.
pub fn oracle_sum(k: u32, n: u32, s: u32, kind: TurnKind) -> Result<BigUint> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be >= 1, got {k}")));
    }
    if s < 1 || s > n {
        return Err(Error::TurnOutOfRange { s, n });
    }
    let sums = turn_sums(k, n);
    Ok(BigUint::from(sums.get(kind, s).expect("s within range")))
}

/// Number of step sequences of length `len` from level `h` to level 0 that
/// never go below 0; with `must_start_up` the first step must be an up-step.
pub fn suffix_count(k: u32, h: u32, len: u32, must_start_up: bool) -> BigUint {
    let k = k as usize;
    let (h, len) = (h as usize, len as usize);
    let cap = h + k * len.div_ceil(k + 1);
    let mut cur = vec![BigUint::zero(); cap + 1];
    let mut remaining = len;
    if must_start_up {
        if len == 0 || h + k > cap {
            return BigUint::zero();
        }
        cur[h + k] = BigUint::from(1u32);
        remaining -= 1;
    } else {
        cur[h] = BigUint::from(1u32);
    }
    for _ in 0..remaining {
        let mut next = vec![BigUint::zero(); cap + 1];
        for (level, ways) in cur.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            if level + k <= cap {
                next[level + k] += ways;
            }
            if level > 0 {
                next[level - 1] += ways;
            }
        }
        cur = next;
    }
    std::mem::take(&mut cur[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn listing(k: u32, n: u32) -> Vec<String> {
        enumerate_paths(k, n)
            .unwrap()
            .map(|p| p.to_string())
            .collect()
    }

    #[test]
    fn small_listings() {
        assert_eq!(listing(1, 2), ["UUDD", "UDUD"]);
        assert_eq!(listing(2, 2), ["UUDDDD", "UDUDDD", "UDDUDD"]);
        assert_eq!(listing(3, 0), [""]);
    }

    #[test]
    fn visitor_and_iterator_agree() {
        for k in 1..=3 {
            for n in 0..=5 {
                let mut seen = Vec::new();
                for_each_path(k, n, |s| seen.push(s.to_vec()));
                let it: Vec<_> = enumerate_paths(k, n).unwrap().map(|p| p.steps).collect();
                assert_eq!(seen, it, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn profiles() {
        let p = |k, s| turn_profile(&DyckPath::parse(k, s).unwrap());
        assert_eq!(
            p(1, "UUDD"),
            TurnProfile {
                max_levels: vec![1, 2],
                min_levels: vec![1, 0]
            }
        );
        assert_eq!(
            p(2, "UDDUDD"),
            TurnProfile {
                max_levels: vec![2, 2],
                min_levels: vec![0, 0]
            }
        );
        assert_eq!(
            p(1, "UDUD"),
            TurnProfile {
                max_levels: vec![1, 1],
                min_levels: vec![0, 0]
            }
        );
        assert_eq!(p(1, ""), TurnProfile::default());
    }

    #[test]
    fn path_validation() {
        assert!(DyckPath::parse(1, "DU").is_err());
        assert!(DyckPath::parse(1, "UUD").is_err());
        assert!(DyckPath::parse(2, "UDD").is_ok());
        assert!(DyckPath::parse(1, "UX").is_err());
        assert!(DyckPath::new(0, vec![]).is_err());
    }

    #[test]
    fn sums_by_kind() {
        assert_eq!(
            oracle_sum(1, 2, 1, TurnKind::Max).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            oracle_sum(2, 2, 2, TurnKind::Max).unwrap(),
            BigUint::from(9u32)
        );
        assert_eq!(
            oracle_sum(1, 2, 2, TurnKind::Min).unwrap(),
            BigUint::from(0u32)
        );
        assert!(matches!(
            oracle_sum(1, 2, 3, TurnKind::Min),
            Err(Error::TurnOutOfRange { .. })
        ));
    }

    #[test]
    fn parallel_split_matches_sequential() {
        for (k, n) in [(1, 9), (2, 6), (3, 4), (1, 0), (2, 1)] {
            assert_eq!(turn_sums(k, n), turn_sums_sequential(k, n), "k={k} n={n}");
        }
    }

    #[test]
    fn suffix_counts() {
        assert_eq!(suffix_count(1, 1, 1, false), BigUint::from(1u32));
        assert_eq!(suffix_count(1, 1, 3, true), BigUint::from(1u32));
        // from level 1: U to 3, then three downs
        assert_eq!(suffix_count(2, 1, 4, true), BigUint::from(1u32));
        assert_eq!(suffix_count(1, 0, 0, false), BigUint::from(1u32));
        assert_eq!(suffix_count(1, 0, 0, true), BigUint::from(0u32));
        assert_eq!(suffix_count(1, 2, 3, false), BigUint::from(0u32));
    }
}
