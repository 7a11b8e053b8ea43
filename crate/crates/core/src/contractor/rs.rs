//! Turning a contractor into a graph made of equal-size induced matchings.

use std::collections::BTreeMap;

use super::{verify, MatchingDecomposition};
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};
use crate::ratio::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsConversion {
    pub graph: BipartiteGraph,
    pub decomposition: MatchingDecomposition,
    /// Common size of every output matching, a power of two.
    pub size: usize,
    /// Index into the input decomposition of each output matching.
    pub source: Vec<usize>,
}

/// Makes every matching induced and equal-sized:
///
/// 1. drop the edges of `M_i` whose server lies in `N_{G∖M_i}(L(M_i))`;
/// 2. keep the first `2^p` remaining edges (by client), `2^p` the largest
///    power of two not above the remaining size;
/// 3. keep the size class carrying the most edges, larger sizes on ties.
pub fn to_rs_graph(
    g: &BipartiteGraph,
    d: &MatchingDecomposition,
    alpha: Rational,
) -> Result<RsConversion> {
    let (ok, _) = verify(g, d, alpha)?;
    if !ok {
        return Err(Error::precondition(format!(
            "decomposition does not verify as a contractor at alpha = {alpha}"
        )));
    }
    let mut trimmed: Vec<(usize, Matching)> = Vec::new();
    for (i, (m, ext)) in d
        .matchings()
        .iter()
        .zip(d.external_neighborhoods())
        .enumerate()
    {
        let kept: Vec<(usize, usize)> = m
            .pairs()
            .iter()
            .copied()
            .filter(|(_, s)| ext.binary_search(s).is_err())
            .collect();
        if kept.is_empty() {
            continue;
        }
        let size = 1 << kept.len().ilog2();
        trimmed.push((
            i,
            Matching::new(kept.into_iter().take(size)).expect("subset of a matching"),
        ));
    }
    let mut classes: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, m) in &trimmed {
        *classes.entry(m.len()).or_default() += m.len();
    }
    let (&size, _) = classes
        .iter()
        .max_by_key(|&(&size, &edges)| (edges, size))
        .ok_or_else(|| Error::precondition("every matching was emptied by the induced trim"))?;
    let (source, matchings): (Vec<usize>, Vec<Matching>) =
        trimmed.into_iter().filter(|(_, m)| m.len() == size).unzip();
    let decomposition = MatchingDecomposition::new(d.n_left(), d.n_right(), matchings)?;
    let out = RsConversion {
        graph: decomposition.support_graph(),
        decomposition,
        size,
        source,
    };
    debug_assert!(induced_violation(&out.graph, &out.decomposition).is_none());
    Ok(out)
}

/// First `(matching, client, server)` edge of `g` that joins `L(M_i)` to
/// `R(M_i)` without belonging to `M_i`, or `None` if every matching is induced.
pub fn induced_violation(
    g: &BipartiteGraph,
    d: &MatchingDecomposition,
) -> Option<(usize, usize, usize)> {
    let mut owner = vec![usize::MAX; g.n_right()];
    for (i, m) in d.matchings().iter().enumerate() {
        for &(_, s) in m.pairs() {
            owner[s] = i;
        }
        for &(c, own) in m.pairs() {
            if let Some(&s) = g.neighbors(c).iter().find(|&&s| s != own && owner[s] == i) {
                return Some((i, c, s));
            }
        }
    }
    None
}
