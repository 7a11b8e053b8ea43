//! Load-balancing sparsifiers under three lenses: the per-subset OPTLOAD
//! definition, the matchable-set neighborhood test, and vertex expansion.
//! Also the brittleness witness showing contractors cannot be thinned.

use num_traits::{One, Zero};
use rand::Rng;

use crate::contractor::{self, MatchingDecomposition};
use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::loadbal::{optload, OptLoad};
use crate::matching::{self, mask_to_clients};
use crate::ratio::{ExtRatio, Rational};
use crate::rng::rng_from_seed;

/// Client cap for [`is_sparsifier_def`] and [`expansion_profile`].
pub const DEF_CAP: usize = 16;
/// Client cap for [`is_sparsifier_operational`].
pub const OPERATIONAL_CAP: usize = 20;

/// Outcome of a sparsifier check at a given `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsifierReport {
    pub alpha: Rational,
    pub passes: bool,
    /// Largest ratio seen over the tested client sets.
    pub worst_ratio: ExtRatio,
    /// A client set attaining `worst_ratio`, present only on failure.
    pub witness: Option<Vec<usize>>,
}

impl SparsifierReport {
    fn from_worst(alpha: Rational, worst: ExtRatio, worst_mask: u64) -> Self {
        let passes = worst.at_most(alpha);
        Self {
            alpha,
            passes,
            worst_ratio: worst,
            witness: (!passes).then(|| mask_to_clients(worst_mask)),
        }
    }
}

fn check_pair(g: &BipartiteGraph, h: &BipartiteGraph, alpha: Rational, cap: usize) -> Result<()> {
    if alpha < Rational::one() {
        return Err(Error::input(format!(
            "alpha must be at least 1, got {alpha}"
        )));
    }
    if !h.is_subgraph_of(g) {
        return Err(Error::input(
            "H is not a subgraph of G on the same vertex sets",
        ));
    }
    Error::cap("client count", cap, g.n_left())
}

/// Checks `OPTLOAD(H[C ∪ R]) ≤ α · OPTLOAD(G[C ∪ R])` for every `C ⊆ L`.
///
/// Sets that are unassignable in `G` are vacuous; sets assignable in `G` but
/// not in `H` give an infinite ratio; the empty set contributes ratio 1.
pub fn is_sparsifier_def(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    alpha: Rational,
) -> Result<SparsifierReport> {
    check_pair(g, h, alpha, DEF_CAP)?;
    let mut worst = ExtRatio::Finite(Rational::one());
    let mut worst_mask = 0;
    for mask in 1u64..(1 << g.n_left()) {
        let clients = mask_to_clients(mask);
        let ratio = match (optload(g, &clients)?, optload(h, &clients)?) {
            (OptLoad::Infeasible, _) => continue,
            (OptLoad::Value(_), OptLoad::Infeasible) => ExtRatio::Infinite,
            (OptLoad::Value(a), OptLoad::Value(b)) => ExtRatio::of(b, a),
        };
        if ratio > worst {
            worst = ratio;
            worst_mask = mask;
        }
    }
    Ok(SparsifierReport::from_worst(alpha, worst, worst_mask))
}

/// Checks `|N_H(X)| ≥ |X| / α` for every `X ⊆ L` matchable in `G`.
pub fn is_sparsifier_operational(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    alpha: Rational,
) -> Result<SparsifierReport> {
    check_pair(g, h, alpha, OPERATIONAL_CAP)?;
    let matchable = matching::matchable_subsets(g)?;
    let mut words = Vec::new();
    let mut worst = ExtRatio::Finite(Rational::zero());
    let mut worst_mask = 0;
    for (mask, _) in matchable.iter().enumerate().skip(1).filter(|(_, &m)| m) {
        let mask = mask as u64;
        let size = mask.count_ones() as usize;
        let ratio = ExtRatio::of(size, h.mask_neighborhood_size(mask, &mut words));
        if ratio > worst {
            worst = ratio;
            worst_mask = mask;
        }
    }
    Ok(SparsifierReport::from_worst(alpha, worst, worst_mask))
}

/// True when `X` certifies that `H` is not an `α`-sparsifier of `G`:
/// `X` is matchable in `G` and `α · |N_H(X)| < |X|`. Works at any size.
pub fn violates_operational(
    g: &BipartiteGraph,
    h: &BipartiteGraph,
    alpha: Rational,
    clients: &[usize],
) -> Result<bool> {
    if !h.is_subgraph_of(g) {
        return Err(Error::input(
            "H is not a subgraph of G on the same vertex sets",
        ));
    }
    let nh = h.neighborhood(clients).len();
    Ok(
        alpha * Rational::from_integer(nh as i64) < Rational::from_integer(clients.len() as i64)
            && matching::is_matchable(g, clients)?,
    )
}

/// Vertex expansion of one client set in both graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionRow {
    pub clients: Vec<usize>,
    /// `|N_G(X)| / |X|`
    pub psi_g: Rational,
    /// `|N_H(X)| / |X|`
    pub psi_h: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionProfile {
    pub rows: Vec<ExpansionRow>,
}

impl ExpansionProfile {
    /// First client set violating `ψ_H(X) ≥ factor · min(ψ_G(X), 1)`, if any.
    pub fn lower_bound_violation(&self, factor: Rational) -> Option<&ExpansionRow> {
        self.rows
            .iter()
            .find(|r| r.psi_h < factor * r.psi_g.min(Rational::one()))
    }
}

/// `(X, ψ_G(X), ψ_H(X))` for every nonempty `X ⊆ L`, in bitmask order.
pub fn expansion_profile(g: &BipartiteGraph, h: &BipartiteGraph) -> Result<ExpansionProfile> {
    if !h.is_subgraph_of(g) {
        return Err(Error::input(
            "H is not a subgraph of G on the same vertex sets",
        ));
    }
    Error::cap("client count", DEF_CAP, g.n_left())?;
    let mut words = Vec::new();
    let rows = (1u64..(1 << g.n_left()))
        .map(|mask| {
            let size = mask.count_ones() as i64;
            ExpansionRow {
                clients: mask_to_clients(mask),
                psi_g: Rational::new(g.mask_neighborhood_size(mask, &mut words) as i64, size),
                psi_h: Rational::new(h.mask_neighborhood_size(mask, &mut words) as i64, size),
            }
        })
        .collect();
    Ok(ExpansionProfile { rows })
}

/// Random subgraph of the complete `n × n` graph keeping each edge with probability `p`.
pub fn sample_complete_sparsifier(n: usize, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if n < 2 {
        return Err(Error::input("n must be at least 2"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::input(format!("p must lie in (0, 1], got {p}")));
    }
    let mut rng = rng_from_seed(seed);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|c| (0..n).map(move |s| (c, s)))
        .filter(|_| rng.random_bool(p))
        .collect();
    BipartiteGraph::new(n, n, edges)
}

/// A thinned graph together with the client set that exposes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrittlenessWitness {
    pub sparsified: BipartiteGraph,
    /// Left endpoints of the removed matching edges.
    pub clients: Vec<usize>,
    pub removed: Vec<(usize, usize)>,
}

/// Removes `⌈|M_i|/2⌉ + 1` edges of `M_i` (capped at `|M_i|`, lowest clients
/// first) from a `2α`-contractor. The left endpoints of the removed edges are
/// matchable in `G` yet see fewer than `|X|/α` servers in the result.
pub fn brittleness_witness(
    g: &BipartiteGraph,
    decomposition: &MatchingDecomposition,
    alpha: Rational,
    index: usize,
) -> Result<BrittlenessWitness> {
    let two_alpha = alpha * Rational::from_integer(2);
    let (ok, cert) = contractor::verify(g, decomposition, two_alpha)?;
    if !ok {
        return Err(Error::precondition(format!(
            "decomposition verifies only up to alpha {}, below 2*alpha = {two_alpha}",
            cert.alpha_achieved
        )));
    }
    let m = decomposition
        .matchings()
        .get(index)
        .ok_or_else(|| Error::input(format!("matching index {index} out of range")))?;
    let take = (m.len().div_ceil(2) + 1).min(m.len());
    let removed: Vec<(usize, usize)> = m.pairs()[..take].to_vec();
    let clients = removed.iter().map(|e| e.0).collect();
    Ok(BrittlenessWitness {
        sparsified: g.without_edges(&removed),
        clients,
        removed,
    })
}
