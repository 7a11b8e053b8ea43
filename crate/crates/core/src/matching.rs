//! Maximum matchings and matchability.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, Matching};

const UNSEEN: u32 = u32::MAX;

/// Hopcroft–Karp on the subgraph induced by `clients` (all servers allowed
/// except those flagged in `banned`). Returns `mate[c]` for every client of the host.
fn hopcroft_karp(g: &BipartiteGraph, clients: &[usize], banned: &[bool]) -> Vec<Option<usize>> {
    let mut mate_l: Vec<Option<usize>> = vec![None; g.n_left()];
    let mut mate_r: Vec<Option<usize>> = vec![None; g.n_right()];
    let allowed = |s: usize| banned.get(s).is_none_or(|b| !b);
    let mut dist = vec![UNSEEN; g.n_left()];

    loop {
        // Layer the free clients.
        let mut queue = VecDeque::new();
        for &c in clients {
            if mate_l[c].is_none() {
                dist[c] = 0;
                queue.push_back(c);
            } else {
                dist[c] = UNSEEN;
            }
        }
        let mut found = false;
        while let Some(c) = queue.pop_front() {
            for &s in g.neighbors(c) {
                if !allowed(s) {
                    continue;
                }
                match mate_r[s] {
                    None => found = true,
                    Some(z) if dist[z] == UNSEEN => {
                        dist[z] = dist[c] + 1;
                        queue.push_back(z);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; g.n_left()];
        let mut augmented = false;
        for &c in clients {
            if mate_l[c].is_none()
                && augment(g, c, &allowed, &mut dist, &mut it, &mut mate_l, &mut mate_r)
            {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    mate_l
}

fn augment(
    g: &BipartiteGraph,
    c: usize,
    allowed: &impl Fn(usize) -> bool,
    dist: &mut [u32],
    it: &mut [usize],
    mate_l: &mut [Option<usize>],
    mate_r: &mut [Option<usize>],
) -> bool {
    let nbrs = g.neighbors(c);
    while it[c] < nbrs.len() {
        let s = nbrs[it[c]];
        it[c] += 1;
        if !allowed(s) {
            continue;
        }
        let ok = match mate_r[s] {
            None => true,
            Some(z) => dist[z] == dist[c] + 1 && augment(g, z, allowed, dist, it, mate_l, mate_r),
        };
        if ok {
            mate_l[c] = Some(s);
            mate_r[s] = Some(c);
            return true;
        }
    }
    dist[c] = UNSEEN;
    false
}

fn collect(mate: &[Option<usize>]) -> Matching {
    let pairs = mate
        .iter()
        .enumerate()
        .filter_map(|(c, s)| s.map(|s| (c, s)));
    Matching::new(pairs).expect("augmenting paths keep the matching disjoint")
}

/// A maximum-cardinality matching of `G[X ∪ R]`.
pub fn max_matching(g: &BipartiteGraph, clients: &[usize]) -> Result<Matching> {
    g.check_clients(clients)?;
    Ok(collect(&hopcroft_karp(g, clients, &[])))
}

/// `μ(G)` over all clients.
pub fn matching_number(g: &BipartiteGraph) -> usize {
    collect(&hopcroft_karp(g, &g.all_clients(), &[])).len()
}

/// True iff some matching saturates every client in `X`.
pub fn is_matchable(g: &BipartiteGraph, clients: &[usize]) -> Result<bool> {
    Ok(max_matching(g, clients)?.len() == clients.len())
}

/// The lexicographically smallest matching that saturates `X`, comparing the
/// server sequence in client order. `None` when `X` is not matchable.
pub fn lex_min_saturating(g: &BipartiteGraph, clients: &[usize]) -> Result<Option<Matching>> {
    g.check_clients(clients)?;
    let mut order = clients.to_vec();
    order.sort_unstable();
    let mut banned = vec![false; g.n_right()];
    if hopcroft_karp(g, &order, &banned).iter().flatten().count() < order.len() {
        return Ok(None);
    }
    let mut pairs = Vec::with_capacity(order.len());
    for (pos, &c) in order.iter().enumerate() {
        let rest = &order[pos + 1..];
        let mut chosen = None;
        for &s in g.neighbors(c) {
            if banned[s] {
                continue;
            }
            banned[s] = true;
            if hopcroft_karp(g, rest, &banned).iter().flatten().count() == rest.len() {
                chosen = Some(s);
                break;
            }
            banned[s] = false;
        }
        let chosen = chosen.expect("a saturating matching exists, so some choice extends");
        pairs.push((c, chosen));
    }
    Ok(Some(Matching::new(pairs)?))
}

/// Largest client count for which [`matchable_subsets`] tabulates all subsets.
pub const SUBSET_TABLE_CAP: usize = 24;

/// `table[mask]` is true iff the client set encoded by `mask` is matchable.
///
/// Uses Hall's condition: a set is matchable iff `|N(X)| ≥ |X|` and every
/// one-smaller subset is matchable.
pub fn matchable_subsets(g: &BipartiteGraph) -> Result<Vec<bool>> {
    Error::cap("client count", SUBSET_TABLE_CAP, g.n_left())?;
    let n = g.n_left();
    let mut table = vec![false; 1 << n];
    let mut words = Vec::new();
    table[0] = true;
    for mask in 1u64..(1 << n) {
        let mut rest = mask;
        let mut subsets_ok = true;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            if !table[(mask ^ bit) as usize] {
                subsets_ok = false;
                break;
            }
        }
        table[mask as usize] =
            subsets_ok && g.mask_neighborhood_size(mask, &mut words) >= mask.count_ones() as usize;
    }
    Ok(table)
}

/// Client indices of a bitmask, ascending.
pub fn mask_to_clients(mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub fn clients_to_mask(clients: &[usize]) -> u64 {
    clients.iter().fold(0, |m, &c| m | (1 << c))
}
