//! Optimal load balancing: the flow-based solver, the Hall-type subset
//! formula as an independent oracle, and assignment enumeration.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::graph::{Assignment, BipartiteGraph};

/// Optimal maximum load, or `Infeasible` when some client has no neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptLoad {
    Value(usize),
    Infeasible,
}

impl OptLoad {
    pub fn value(self) -> Option<usize> {
        match self {
            OptLoad::Value(v) => Some(v),
            OptLoad::Infeasible => None,
        }
    }

    pub fn is_feasible(self) -> bool {
        matches!(self, OptLoad::Value(_))
    }
}

impl fmt::Display for OptLoad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptLoad::Value(v) => write!(f, "{v}"),
            OptLoad::Infeasible => f.write_str("infeasible"),
        }
    }
}

/// Largest `|X|` accepted by [`optload_hall`].
pub const HALL_CAP: usize = 20;

/// Assigns `X` with every server capacity set to `cap`, or `None` if impossible.
fn capacitated(g: &BipartiteGraph, clients: &[usize], cap: usize) -> Option<Assignment> {
    let n = clients.len();
    let source = n + g.n_right();
    let sink = source + 1;
    let mut net = FlowNetwork::new(sink + 1);
    let mut client_arcs = Vec::with_capacity(n);
    for (i, &c) in clients.iter().enumerate() {
        net.add_arc(source, i, 1);
        let arcs: Vec<(usize, usize)> = g
            .neighbors(c)
            .iter()
            .map(|&s| (s, net.add_arc(i, n + s, 1)))
            .collect();
        client_arcs.push(arcs);
    }
    for s in 0..g.n_right() {
        net.add_arc(n + s, sink, cap);
    }
    if net.max_flow(source, sink) < n {
        return None;
    }
    let map: BTreeMap<usize, usize> = clients
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let s = client_arcs[i]
                .iter()
                .find(|&&(_, at)| net.flow_on(i, at) == 1)
                .map(|&(s, _)| s)
                .expect("saturated client carries one unit");
            (c, s)
        })
        .collect();
    Some(Assignment::from_map_unchecked(g.n_right(), map))
}

/// True iff `X` can be assigned with every server load at most `d`.
pub fn feasible_load(g: &BipartiteGraph, clients: &[usize], d: usize) -> Result<bool> {
    g.check_clients(clients)?;
    if d == 0 {
        return Err(Error::input("load bound d must be at least 1"));
    }
    Ok(capacitated(g, clients, d).is_some())
}

/// `OPTLOAD(G[X ∪ R])` by binary search over capacitated feasibility.
pub fn optload(g: &BipartiteGraph, clients: &[usize]) -> Result<OptLoad> {
    g.check_clients(clients)?;
    if clients.is_empty() {
        return Ok(OptLoad::Value(0));
    }
    if clients.iter().any(|&c| g.degree(c) == 0) {
        return Ok(OptLoad::Infeasible);
    }
    let (mut lo, mut hi) = (1, clients.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if capacitated(g, clients, mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(OptLoad::Value(lo))
}

/// `max ⌈|U| / |N(U)|⌉` over nonempty `U ⊆ X`, by enumeration.
pub fn optload_hall(g: &BipartiteGraph, clients: &[usize]) -> Result<OptLoad> {
    g.check_clients(clients)?;
    Error::cap("client set size", HALL_CAP, clients.len())?;
    let words_per = g.n_right().div_ceil(64);
    let rows: Vec<Vec<u64>> = clients
        .iter()
        .map(|&c| {
            let mut w = vec![0u64; words_per];
            for &s in g.neighbors(c) {
                w[s / 64] |= 1 << (s % 64);
            }
            w
        })
        .collect();
    let mut best = 0usize;
    let mut acc = vec![0u64; words_per];
    for mask in 1u32..(1 << clients.len()) {
        acc.iter_mut().for_each(|w| *w = 0);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            for (a, b) in acc.iter_mut().zip(&rows[i]) {
                *a |= b;
            }
        }
        let nbrs: usize = acc.iter().map(|w| w.count_ones() as usize).sum();
        if nbrs == 0 {
            return Ok(OptLoad::Infeasible);
        }
        best = best.max((mask.count_ones() as usize).div_ceil(nbrs));
    }
    Ok(OptLoad::Value(best))
}

/// An assignment of exactly `X` achieving `OPTLOAD(G[X ∪ R])`.
pub fn optimal_assignment(g: &BipartiteGraph, clients: &[usize]) -> Result<Assignment> {
    match optload(g, clients)? {
        OptLoad::Infeasible => {
            let c = clients.iter().find(|&&c| g.degree(c) == 0).copied();
            Err(Error::Infeasible(format!(
                "client {} has no neighbor",
                c.map_or_else(|| "?".into(), |c| c.to_string())
            )))
        }
        OptLoad::Value(0) => Ok(Assignment::from_map_unchecked(g.n_right(), BTreeMap::new())),
        OptLoad::Value(d) => Ok(capacitated(g, clients, d).expect("d is feasible")),
    }
}

/// `MAXLOAD(A)`.
pub fn max_load(a: &Assignment) -> usize {
    a.max_load()
}

/// Visits every assignment of `clients` whose maximum load is at most `cap`.
/// The callback receives the chosen server for each client, aligned with
/// `clients`. Returns the number of assignments visited.
pub fn for_each_assignment(
    g: &BipartiteGraph,
    clients: &[usize],
    cap: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    g.check_clients(clients)?;
    let mut loads = vec![0usize; g.n_right()];
    let mut chosen = Vec::with_capacity(clients.len());
    let mut count = 0;
    fn rec(
        g: &BipartiteGraph,
        clients: &[usize],
        cap: usize,
        loads: &mut [usize],
        chosen: &mut Vec<usize>,
        count: &mut u64,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let Some(&c) = clients.get(chosen.len()) else {
            *count += 1;
            visit(chosen);
            return;
        };
        for &s in g.neighbors(c) {
            if loads[s] < cap {
                loads[s] += 1;
                chosen.push(s);
                rec(g, clients, cap, loads, chosen, count, visit);
                chosen.pop();
                loads[s] -= 1;
            }
        }
    }
    rec(
        g,
        clients,
        cap,
        &mut loads,
        &mut chosen,
        &mut count,
        &mut visit,
    );
    Ok(count)
}
