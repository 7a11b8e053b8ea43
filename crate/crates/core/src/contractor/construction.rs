//! The string-indexed contractor: clients are strings in `[w]^{2k}`, servers
//! are strings in `[w]^k`, and round `i` joins `v` to its restriction `v_{S_i}`.

use super::{MatchingDecomposition, SetFamily};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};

/// Default cap on labeled edges (`t · w^{2k}`) for [`construct`].
pub const DEFAULT_EDGE_BUDGET: usize = 1 << 24;

/// Output of [`construct`].
#[derive(Debug, Clone)]
pub struct Construction {
    pub w: usize,
    pub k: usize,
    pub graph: BipartiteGraph,
    /// Matching `i · w^k + x` is `M_{S_i, x}`.
    pub decomposition: MatchingDecomposition,
}

impl Construction {
    pub fn distinct_edges(&self) -> usize {
        self.graph.num_edges()
    }

    pub fn labeled_edges(&self) -> usize {
        self.decomposition.labeled_edge_count()
    }
}

/// Index of a digit string, most significant digit first.
pub fn digits_to_index(digits: &[usize], w: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * w + d)
}

/// Digits of client `v` as a `len`-digit base-`w` string.
pub fn client_digits(mut v: usize, w: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = v % w;
        v /= w;
    }
    digits
}

fn checked_pow(w: usize, e: usize) -> Option<usize> {
    w.checked_pow(u32::try_from(e).ok()?)
}

/// Builds the construction with the default edge budget.
pub fn construct(w: usize, k: usize, family: &SetFamily) -> Result<Construction> {
    construct_with_budget(w, k, family, DEFAULT_EDGE_BUDGET)
}

/// Builds the graph and its decomposition into the matchings
/// `M_{S_i, x} = {(v, v_{S_i}) : v_{S̄_i} = x}`, refusing to build more than
/// `budget` labeled edges.
pub fn construct_with_budget(
    w: usize,
    k: usize,
    family: &SetFamily,
    budget: usize,
) -> Result<Construction> {
    if w < 2 || k < 2 {
        return Err(Error::input(format!(
            "need w >= 2 and k >= 2, got w={w}, k={k}"
        )));
    }
    if family.k() != k {
        return Err(Error::input(format!(
            "family is over {{1..{}}} but k = {k}",
            2 * family.k()
        )));
    }
    if family.is_empty() {
        return Err(Error::input("set family is empty"));
    }
    let labeled = checked_pow(w, 2 * k).and_then(|n| n.checked_mul(family.len()));
    match labeled {
        Some(l) if l <= budget => {}
        _ => {
            return Err(Error::input(format!(
                "t * w^(2k) labeled edges for w={w}, k={k}, t={} exceeds the budget of {budget}",
                family.len()
            )))
        }
    }
    let n_right = checked_pow(w, k).expect("bounded by the budget");
    let n_left = n_right * n_right;
    let place: Vec<usize> = (0..2 * k)
        .map(|p| checked_pow(w, 2 * k - 1 - p).unwrap())
        .collect();
    let mut matchings = Vec::with_capacity(family.len() * n_right);
    for &mask in family.masks() {
        let inside: Vec<usize> = (0..2 * k).filter(|p| mask >> p & 1 == 1).collect();
        let outside: Vec<usize> = (0..2 * k).filter(|p| mask >> p & 1 == 0).collect();
        let spread = |positions: &[usize], value: usize| -> usize {
            client_digits(value, w, k)
                .iter()
                .zip(positions)
                .map(|(&d, &p)| d * place[p])
                .sum()
        };
        let inside_part: Vec<usize> = (0..n_right).map(|y| spread(&inside, y)).collect();
        for x in 0..n_right {
            let base = spread(&outside, x);
            let pairs = inside_part
                .iter()
                .enumerate()
                .map(|(y, &part)| (base + part, y));
            matchings.push(Matching::new(pairs).expect("distinct clients and servers"));
        }
    }
    let decomposition = MatchingDecomposition::new(n_left, n_right, matchings)?;
    Ok(Construction {
        w,
        k,
        graph: decomposition.support_graph(),
        decomposition,
    })
}

/// `Σ_{j ≠ i} w^{|S_i ∩ S_j|}` for the 0-based set index `i`.
pub fn external_neighborhood_bound(family: &SetFamily, w: usize, i: usize) -> Result<u64> {
    if i >= family.len() {
        return Err(Error::input(format!(
            "set index {i} out of range for a family of {}",
            family.len()
        )));
    }
    let mut total = 0u64;
    for j in (0..family.len()).filter(|&j| j != i) {
        let term = (w as u64)
            .checked_pow(family.intersection(i, j) as u32)
            .ok_or_else(|| Error::input("bound overflows u64"))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::input("bound overflows u64"))?;
    }
    Ok(total)
}
