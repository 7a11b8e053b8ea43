//! Families of `k`-subsets of `{1..2k}` with bounded pairwise intersections.

use std::fmt;

use rand::seq::index;

use crate::error::{Error, Result};
use crate::ratio::{floor_usize, Rational};
use crate::rng::rng_from_seed;

/// Distinct `k`-subsets of `{1..2k}` whose pairwise intersections are at
/// most `bound`. Sets are stored as bitmasks, element `e` at bit `e - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    k: usize,
    bound: usize,
    masks: Vec<u64>,
}

/// Largest `k` whose ground set `{1..2k}` fits in a mask.
const MAX_K: usize = 32;

impl SetFamily {
    /// Validates sizes, ranges, distinctness and the intersection bound.
    pub fn new(k: usize, bound: usize, sets: &[Vec<usize>]) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return Err(Error::input(format!("k must be in 2..={MAX_K}, got {k}")));
        }
        let mut masks = Vec::with_capacity(sets.len());
        for (i, set) in sets.iter().enumerate() {
            let mut mask = 0u64;
            for &e in set {
                if e == 0 || e > 2 * k {
                    return Err(Error::input(format!(
                        "set {i} has element {e} outside 1..={}",
                        2 * k
                    )));
                }
                mask |= 1 << (e - 1);
            }
            if mask.count_ones() as usize != k || set.len() != k {
                return Err(Error::input(format!(
                    "set {i} does not have exactly {k} distinct elements"
                )));
            }
            masks.push(mask);
        }
        Self::from_masks(k, bound, masks)
    }

    pub(crate) fn from_masks(k: usize, bound: usize, masks: Vec<u64>) -> Result<Self> {
        for (i, &a) in masks.iter().enumerate() {
            for (j, &b) in masks.iter().enumerate().skip(i + 1) {
                if a == b {
                    return Err(Error::input(format!("sets {i} and {j} are equal")));
                }
                let shared = (a & b).count_ones() as usize;
                if shared > bound {
                    return Err(Error::input(format!(
                        "sets {i} and {j} share {shared} elements, above the bound {bound}"
                    )));
                }
            }
        }
        Ok(Self { k, bound, masks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Declared pairwise intersection bound `ℓ`.
    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// Elements of set `i`, ascending and 1-based.
    pub fn set(&self, i: usize) -> Vec<usize> {
        (0..2 * self.k)
            .filter(|b| self.masks[i] >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.set(i)).collect()
    }

    pub fn intersection(&self, i: usize, j: usize) -> usize {
        (self.masks[i] & self.masks[j]).count_ones() as usize
    }

    /// Largest pairwise intersection, or 0 for fewer than two sets.
    pub fn max_intersection(&self) -> usize {
        let t = self.len();
        (0..t)
            .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
            .map(|(i, j)| self.intersection(i, j))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets()
            .iter()
            .map(|s| {
                let items: Vec<String> = s.iter().map(usize::to_string).collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `c_δ = 2 · δ^δ · (1 − δ)^{1−δ}`.
pub fn c_delta(delta: f64) -> f64 {
    2.0 * delta.powf(delta) * (1.0 - delta).powf(1.0 - delta)
}

/// The family size `⌊k^{−1/4} · c_δ^k / 2⌋` that random sampling reaches
/// with positive probability.
pub fn feasible_family_size(k: usize, delta: f64) -> usize {
    let k = k as f64;
    (0.5 * k.powf(-0.25) * c_delta(delta).powf(k)).floor() as usize
}

/// `⌊(1 − δ)k⌋`.
pub fn intersection_bound(k: usize, delta: Rational) -> usize {
    floor_usize((Rational::from_integer(1) - delta) * Rational::from_integer(k as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FamilyMode {
    /// Draw all sets at once and start over on any violation.
    #[default]
    Resample,
    /// Draw one set at a time and keep it if it fits the sets kept so far.
    Greedy,
}

/// Generation ran out of attempts. `best` is the largest valid family seen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationFailure {
    pub attempts: usize,
    pub target: usize,
    pub best: SetFamily,
}

impl fmt::Display for GenerationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "no family of {} sets found in {} attempts (best had {})",
            self.target,
            self.attempts,
            self.best.len()
        )
    }
}

impl std::error::Error for GenerationFailure {}

impl From<GenerationFailure> for Error {
    fn from(e: GenerationFailure) -> Self {
        Error::Generation {
            attempts: e.attempts,
            msg: e.to_string(),
        }
    }
}

/// Longest prefix of `masks` that is pairwise within `bound`.
fn valid_prefix(masks: &[u64], bound: usize) -> usize {
    for j in 1..masks.len() {
        if masks[..j]
            .iter()
            .any(|&a| (a & masks[j]).count_ones() as usize > bound)
        {
            return j;
        }
    }
    masks.len()
}

/// Samples `target_t` uniformly random `k`-subsets of `{1..2k}` with
/// pairwise intersections at most `⌊(1 − δ)k⌋`.
///
/// Bad parameters are outer errors. Running out of attempts is the inner
/// error, which carries the best family found.
pub fn gen_set_family(
    k: usize,
    delta: Rational,
    target_t: usize,
    seed: u64,
    max_attempts: usize,
    mode: FamilyMode,
) -> Result<std::result::Result<SetFamily, GenerationFailure>> {
    if !(2..=MAX_K).contains(&k) {
        return Err(Error::input(format!("k must be in 2..={MAX_K}, got {k}")));
    }
    if delta <= Rational::from_integer(0) || delta >= Rational::new(1, 2) {
        return Err(Error::input(format!(
            "delta must lie in (0, 1/2), got {delta}"
        )));
    }
    if target_t == 0 {
        return Err(Error::input("target_t must be at least 1"));
    }
    let bound = intersection_bound(k, delta);
    let mut rng = rng_from_seed(seed);
    let mut draw = || -> u64 {
        index::sample(&mut rng, 2 * k, k)
            .iter()
            .fold(0u64, |m, b| m | 1 << b)
    };
    let mut best: Vec<u64> = Vec::new();
    let mut attempts = 0;
    match mode {
        FamilyMode::Resample => {
            while attempts < max_attempts {
                attempts += 1;
                let masks: Vec<u64> = (0..target_t).map(|_| draw()).collect();
                let prefix = valid_prefix(&masks, bound);
                if prefix == target_t {
                    return Ok(Ok(SetFamily::from_masks(k, bound, masks)?));
                }
                if prefix > best.len() {
                    best = masks[..prefix].to_vec();
                }
            }
        }
        FamilyMode::Greedy => {
            while attempts < max_attempts {
                attempts += 1;
                let m = draw();
                if best.iter().all(|&a| (a & m).count_ones() as usize <= bound) {
                    best.push(m);
                    if best.len() == target_t {
                        return Ok(Ok(SetFamily::from_masks(k, bound, best)?));
                    }
                }
            }
        }
    }
    Ok(Err(GenerationFailure {
        attempts,
        target: target_t,
        best: SetFamily::from_masks(k, bound, best)?,
    }))
}
