//! Matching-Contractors: decompositions of a graph into matchings whose left
//! endpoints see few servers outside their own matching.
//!
//! A decomposition is a *labeled* multiset of edges: the same `(client,
//! server)` pair may sit in several matchings, and the host graph is the
//! simple support. External neighborhoods remove only the labeled copies of
//! the matching under inspection.

mod construction;
mod family;
mod grouping;
mod rs;

pub use construction::{
    client_digits, construct, construct_with_budget, digits_to_index, external_neighborhood_bound,
    Construction, DEFAULT_EDGE_BUDGET,
};
pub use family::{
    c_delta, feasible_family_size, gen_set_family, intersection_bound, FamilyMode,
    GenerationFailure, SetFamily,
};
pub use grouping::group_by_size;
pub use rs::{induced_violation, to_rs_graph, RsConversion};

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::ratio::{ExtRatio, Rational};

/// An ordered list of matchings over fixed client and server counts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatchingDecomposition {
    n_left: usize,
    n_right: usize,
    matchings: Vec<Matching>,
}

impl MatchingDecomposition {
    pub fn new(n_left: usize, n_right: usize, matchings: Vec<Matching>) -> Result<Self> {
        for (i, m) in matchings.iter().enumerate() {
            if let Some(&(c, s)) = m
                .pairs()
                .iter()
                .find(|&&(c, s)| c >= n_left || s >= n_right)
            {
                return Err(Error::input(format!(
                    "matching {i} has edge ({c}, {s}) outside a {n_left}x{n_right} graph"
                )));
            }
        }
        Ok(Self {
            n_left,
            n_right,
            matchings,
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Number of labeled edges, counting repeats across matchings.
    pub fn labeled_edge_count(&self) -> usize {
        self.matchings.iter().map(Matching::len).sum()
    }

    /// `(matching index, client, server)` for every labeled edge, in order.
    pub fn labeled_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.matchings
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.pairs().iter().map(move |&(c, s)| (i, c, s)))
    }

    /// The simple graph whose edges are the distinct labeled edges.
    pub fn support_graph(&self) -> BipartiteGraph {
        BipartiteGraph::from_support(
            self.n_left,
            self.n_right,
            self.labeled_edges().map(|(_, c, s)| (c, s)),
        )
        .expect("matchings were range-checked")
    }

    /// True when no edge appears in two matchings.
    pub fn is_duplicate_free(&self) -> bool {
        self.labeled_edge_count() == self.support_graph().num_edges()
    }

    /// For each matching `M_i`, the sorted set `N_{G∖M_i}(L(M_i))`, where
    /// `G∖M_i` keeps the labeled edges of every other matching.
    pub fn external_neighborhoods(&self) -> Vec<Vec<usize>> {
        let mut incidences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n_left];
        for (i, c, s) in self.labeled_edges() {
            incidences[c].push((i, s));
        }
        let mut stamp = vec![usize::MAX; self.n_right];
        self.matchings
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut out = Vec::new();
                for &(c, _) in m.pairs() {
                    for &(j, s) in &incidences[c] {
                        if j != i && stamp[s] != i {
                            stamp[s] = i;
                            out.push(s);
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect()
    }

    fn check_host(&self, g: &BipartiteGraph) -> Result<()> {
        if self.n_left != g.n_left() || self.n_right != g.n_right() {
            return Err(Error::input(format!(
                "decomposition is over {}x{} vertices but the host graph is {}x{}",
                self.n_left,
                self.n_right,
                g.n_left(),
                g.n_right()
            )));
        }
        if self.support_graph().edges() != g.edges() {
            return Err(Error::input(
                "decomposition edges do not cover exactly the host graph's edges",
            ));
        }
        Ok(())
    }
}

/// Per-matching evidence for a contractor check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractorCertificate {
    /// Largest `α` for which every matching passes; `inf` if all external
    /// neighborhoods are empty.
    pub alpha_achieved: ExtRatio,
    /// `(|M_i|, |N_{G∖M_i}(L(M_i))|)` per matching.
    pub per_matching: Vec<(usize, usize)>,
}

/// Checks `|N_{G∖M_i}(L(M_i))| ≤ |M_i| / α` for every matching of `D`.
///
/// The certificate is computed regardless of the verdict.
pub fn verify(
    g: &BipartiteGraph,
    decomposition: &MatchingDecomposition,
    alpha: Rational,
) -> Result<(bool, ContractorCertificate)> {
    decomposition.check_host(g)?;
    let per_matching: Vec<(usize, usize)> = decomposition
        .matchings
        .iter()
        .zip(decomposition.external_neighborhoods())
        .map(|(m, n)| (m.len(), n.len()))
        .collect();
    let alpha_achieved = per_matching
        .iter()
        .map(|&(size, ext)| {
            if size == 0 {
                ExtRatio::Infinite
            } else {
                ExtRatio::of(size, ext)
            }
        })
        .min()
        .unwrap_or(ExtRatio::Infinite);
    let ok = per_matching.iter().all(|&(size, ext)| {
        alpha * Rational::from_integer(ext as i64) <= Rational::from_integer(size as i64)
    });
    Ok((
        ok,
        ContractorCertificate {
            alpha_achieved,
            per_matching,
        },
    ))
}
