//! Brute-force oracles and generators shared by the integration tests. The
//! oracles use only adjacency lists, never the library's algorithms.

#![allow(dead_code)]

use std::collections::HashMap;

use lbsparse::contractor::MatchingDecomposition;
use lbsparse::{BipartiteGraph, Matching, Rational};
use proptest::prelude::*;
use rand::Rng;

pub fn random_graph(rng: &mut impl Rng, n_left: usize, n_right: usize, p: f64) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> = (0..n_left)
        .flat_map(|c| (0..n_right).map(move |s| (c, s)))
        .filter(|_| rng.random_bool(p))
        .collect();
    BipartiteGraph::new(n_left, n_right, edges).unwrap()
}

/// A random graph where every client has at least one neighbor.
pub fn random_covered_graph(
    rng: &mut impl Rng,
    n_left: usize,
    n_right: usize,
    p: f64,
) -> BipartiteGraph {
    let mut edges: Vec<(usize, usize)> = random_graph(rng, n_left, n_right, p).edges().to_vec();
    for c in 0..n_left {
        if !edges.iter().any(|e| e.0 == c) {
            edges.push((c, rng.random_range(0..n_right)));
        }
    }
    BipartiteGraph::new(n_left, n_right, edges).unwrap()
}

pub fn random_subgraph(rng: &mut impl Rng, g: &BipartiteGraph, p: f64) -> BipartiteGraph {
    let keep: Vec<bool> = (0..g.num_edges()).map(|_| rng.random_bool(p)).collect();
    g.edge_subgraph(|e| keep[e])
}

pub fn alphas() -> [Rational; 4] {
    [
        Rational::from_integer(1),
        Rational::new(3, 2),
        Rational::from_integer(2),
        Rational::from_integer(3),
    ]
}

/// Neighbor bitmask of every client.
pub fn neighbor_masks(g: &BipartiteGraph) -> Vec<u64> {
    (0..g.n_left())
        .map(|c| g.neighbors(c).iter().fold(0u64, |m, &s| m | 1 << s))
        .collect()
}

/// Largest matching of `G[X ∪ R]`, by exhaustive search over which server
/// each client takes (memoized on the set of used servers).
pub fn brute_matching_number(g: &BipartiteGraph, clients: &[usize]) -> usize {
    assert!(g.n_right() <= 64);
    fn go(
        g: &BipartiteGraph,
        clients: &[usize],
        used: u64,
        memo: &mut HashMap<(usize, u64), usize>,
    ) -> usize {
        let Some((&c, rest)) = clients.split_first() else {
            return 0;
        };
        if let Some(&v) = memo.get(&(clients.len(), used)) {
            return v;
        }
        let mut best = go(g, rest, used, memo);
        for &s in g.neighbors(c) {
            if used >> s & 1 == 0 {
                best = best.max(1 + go(g, rest, used | 1 << s, memo));
            }
        }
        memo.insert((clients.len(), used), best);
        best
    }
    go(g, clients, 0, &mut HashMap::new())
}

pub fn brute_matchable(g: &BipartiteGraph, clients: &[usize]) -> bool {
    brute_matching_number(g, clients) == clients.len()
}

/// `table[mask]` for every client subset, by brute force.
pub fn brute_matchable_table(g: &BipartiteGraph) -> Vec<bool> {
    (0..1u64 << g.n_left())
        .map(|mask| brute_matchable(g, &mask_clients(mask)))
        .collect()
}

pub fn mask_clients(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).collect()
}

/// Minimum MAXLOAD over all assignments of `X`, or `None` if some client is isolated.
pub fn brute_optload(g: &BipartiteGraph, clients: &[usize]) -> Option<usize> {
    if clients.is_empty() {
        return Some(0);
    }
    if clients.iter().any(|&c| g.degree(c) == 0) {
        return None;
    }
    fn go(
        g: &BipartiteGraph,
        clients: &[usize],
        loads: &mut [usize],
        current: usize,
        best: &mut usize,
    ) {
        if current >= *best {
            return;
        }
        let Some((&c, rest)) = clients.split_first() else {
            *best = current;
            return;
        };
        for &s in g.neighbors(c) {
            loads[s] += 1;
            go(g, rest, loads, current.max(loads[s]), best);
            loads[s] -= 1;
        }
    }
    let mut best = usize::MAX;
    go(g, clients, &mut vec![0; g.n_right()], 0, &mut best);
    Some(best)
}

/// `|N_H(X)| ≥ |X| / α` for every `X` in `matchable` (a brute-force table of `G`).
pub fn passes_operational(h: &BipartiteGraph, alpha: Rational, matchable: &[bool]) -> bool {
    let nbrs = neighbor_masks(h);
    matchable
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &m)| m)
        .all(|(mask, _)| {
            let n = mask_clients(mask as u64)
                .iter()
                .fold(0u64, |acc, &c| acc | nbrs[c])
                .count_ones() as i64;
            alpha * Rational::from_integer(n) >= Rational::from_integer(mask.count_ones() as i64)
        })
}

/// Fewest edges of any `α`-sparsifier of `G`, over all edge subsets.
pub fn brute_min_sparsifier(g: &BipartiteGraph, alpha: Rational) -> usize {
    let m = g.num_edges();
    assert!(m <= 16);
    let matchable = brute_matchable_table(g);
    let mut by_size: Vec<u32> = (0..1u32 << m).collect();
    by_size.sort_by_key(|s| s.count_ones());
    for subset in by_size {
        let h = g.edge_subgraph(|e| subset >> e & 1 == 1);
        if passes_operational(&h, alpha, &matchable) {
            return subset.count_ones() as usize;
        }
    }
    unreachable!("G is a sparsifier of itself")
}

/// True iff every matching is induced: the only edges of `g` between
/// `L(M)` and `R(M)` are those of `M`.
pub fn all_induced(g: &BipartiteGraph, d: &MatchingDecomposition) -> bool {
    d.matchings().iter().all(|m| {
        let right = m.right();
        let between: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(c, s)| m.partner(c).is_some() && right.contains(&s))
            .collect();
        between == m.pairs()
    })
}

/// External neighborhood sizes recomputed naively from the labeled edges.
pub fn naive_external_sizes(d: &MatchingDecomposition) -> Vec<usize> {
    d.matchings()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let mut servers: Vec<usize> = d
                .matchings()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, other)| other.pairs().iter().copied())
                .filter(|&(c, _)| m.partner(c).is_some())
                .map(|(_, s)| s)
                .collect();
            servers.sort_unstable();
            servers.dedup();
            servers.len()
        })
        .collect()
}

/// Random duplicate-free base on at most 10 clients whose matchings have
/// sizes 4 or 5 and which verifies as a 4-contractor, or `None` after `tries`.
pub fn random_small_base(
    rng: &mut impl Rng,
    tries: usize,
) -> Option<(BipartiteGraph, MatchingDecomposition)> {
    use rand::seq::SliceRandom;
    for _ in 0..tries {
        let k = rng.random_range(2..=3);
        let mut matchings = Vec::new();
        for _ in 0..k {
            let size = rng.random_range(4..=5);
            let mut clients: Vec<usize> = (0..10).collect();
            let mut servers: Vec<usize> = (0..12).collect();
            clients.shuffle(rng);
            servers.shuffle(rng);
            matchings.push(
                Matching::new(
                    clients[..size]
                        .iter()
                        .copied()
                        .zip(servers[..size].iter().copied()),
                )
                .unwrap(),
            );
        }
        let d = MatchingDecomposition::new(10, 12, matchings).unwrap();
        if !d.is_duplicate_free() {
            continue;
        }
        if naive_external_sizes(&d)
            .iter()
            .zip(d.matchings())
            .all(|(&ext, m)| 4 * ext <= m.len())
        {
            return Some((d.support_graph(), d));
        }
    }
    None
}

prop_compose! {
    pub fn arb_graph(max_left: usize, max_right: usize)
        (n_left in 1..=max_left, n_right in 1..=max_right)
        (bits in proptest::collection::vec(any::<bool>(), n_left * n_right), n_left in Just(n_left), n_right in Just(n_right))
        -> BipartiteGraph
    {
        let edges = (0..n_left * n_right).filter(|&i| bits[i]).map(|i| (i / n_right, i % n_right));
        BipartiteGraph::new(n_left, n_right, edges).unwrap()
    }
}

prop_compose! {
    /// A graph and a subgraph of it.
    pub fn arb_graph_pair(max_left: usize, max_right: usize)
        (g in arb_graph(max_left, max_right))
        (keep in proptest::collection::vec(any::<bool>(), g.num_edges()), g in Just(g))
        -> (BipartiteGraph, BipartiteGraph)
    {
        let h = g.edge_subgraph(|e| keep[e]);
        (g, h)
    }
}

pub fn arb_alpha() -> impl Strategy<Value = Rational> {
    proptest::sample::select(alphas().to_vec())
}
