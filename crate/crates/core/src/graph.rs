//! Bipartite client/server graphs, matchings and assignments.
//!
//! Clients are the left side and servers the right side, both indexed densely
//! from zero. Graphs are simple and immutable once built; every derived graph
//! (induced, union, subgraph) is a fresh value.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// A simple bipartite graph between `n_left` clients and `n_right` servers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    /// Sorted, duplicate-free.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists per client.
    adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph, rejecting out-of-range endpoints and repeated edges.
    pub fn new(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(c, s) in &list {
            if c >= n_left || s >= n_right {
                return Err(Error::input(format!(
                    "edge ({c}, {s}) out of range for a {n_left}x{n_right} graph"
                )));
            }
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::input(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self::from_sorted(n_left, n_right, list))
    }

    /// Builds a graph from a possibly repeating edge list, keeping one copy of each edge.
    pub fn from_support(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = edges.into_iter().collect();
        list.sort_unstable();
        list.dedup();
        Self::new(n_left, n_right, list)
    }

    fn from_sorted(n_left: usize, n_right: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n_left];
        for &(c, s) in &edges {
            adj[c].push(s);
        }
        Self {
            n_left,
            n_right,
            edges,
            adj,
        }
    }

    pub fn empty(n_left: usize, n_right: usize) -> Self {
        Self::from_sorted(n_left, n_right, Vec::new())
    }

    pub fn complete(n_left: usize, n_right: usize) -> Self {
        let edges = (0..n_left)
            .flat_map(|c| (0..n_right).map(move |s| (c, s)))
            .collect();
        Self::from_sorted(n_left, n_right, edges)
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    /// Edges in lexicographic `(client, server)` order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// `N(c)`, sorted.
    pub fn neighbors(&self, client: usize) -> &[usize] {
        &self.adj[client]
    }

    pub fn degree(&self, client: usize) -> usize {
        self.adj[client].len()
    }

    pub fn has_edge(&self, client: usize, server: usize) -> bool {
        client < self.n_left && self.adj[client].binary_search(&server).is_ok()
    }

    /// Position of an edge in [`Self::edges`].
    pub fn edge_index(&self, client: usize, server: usize) -> Option<usize> {
        self.edges.binary_search(&(client, server)).ok()
    }

    pub fn all_clients(&self) -> Vec<usize> {
        (0..self.n_left).collect()
    }

    /// Errors unless every listed client is in range and listed once.
    pub fn check_clients(&self, clients: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n_left];
        for &c in clients {
            if c >= self.n_left {
                return Err(Error::input(format!(
                    "client {c} out of range (graph has {} clients)",
                    self.n_left
                )));
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(Error::input(format!("client {c} listed twice")));
            }
        }
        Ok(())
    }

    /// `N(X)`, sorted.
    pub fn neighborhood(&self, clients: &[usize]) -> Vec<usize> {
        let mut hit = vec![false; self.n_right];
        for &c in clients {
            for &s in &self.adj[c] {
                hit[s] = true;
            }
        }
        hit.iter()
            .enumerate()
            .filter_map(|(s, &h)| h.then_some(s))
            .collect()
    }

    /// `|N(X)|` for a client set given as a bitmask over clients `0..64`.
    pub fn mask_neighborhood_size(&self, mask: u64, words: &mut Vec<u64>) -> usize {
        words.clear();
        words.resize(self.n_right.div_ceil(64), 0);
        let mut m = mask;
        while m != 0 {
            let c = m.trailing_zeros() as usize;
            m &= m - 1;
            for &s in &self.adj[c] {
                words[s / 64] |= 1 << (s % 64);
            }
        }
        words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `E(X, Y)` as a graph on the same vertex sets.
    pub fn restrict(&self, clients: &[usize], servers: Option<&[usize]>) -> Self {
        let mut keep_c = vec![false; self.n_left];
        for &c in clients {
            keep_c[c] = true;
        }
        let keep_s = servers.map(|ss| {
            let mut k = vec![false; self.n_right];
            for &s in ss {
                k[s] = true;
            }
            k
        });
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|&(c, s)| keep_c[c] && keep_s.as_ref().is_none_or(|k| k[s]))
            .collect();
        Self::from_sorted(self.n_left, self.n_right, edges)
    }

    /// `G[X ∪ R]`: all clients outside `X` become isolated.
    pub fn induced_on_clients(&self, clients: &[usize]) -> Self {
        self.restrict(clients, None)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.n_left == other.n_left && self.n_right == other.n_right
    }

    /// True when `self` has the same vertex sets as `host` and `E(self) ⊆ E(host)`.
    pub fn is_subgraph_of(&self, host: &Self) -> bool {
        self.same_shape(host) && self.edges.iter().all(|&(c, s)| host.has_edge(c, s))
    }

    /// Edge union of two graphs on the same vertex sets.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::input("union of graphs on different vertex sets"));
        }
        Self::from_support(
            self.n_left,
            self.n_right,
            self.edges.iter().chain(other.edges.iter()).copied(),
        )
    }

    /// Copy of `self` without the listed edges (missing ones are ignored).
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Self {
        let mut drop = removed.to_vec();
        drop.sort_unstable();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Self::from_sorted(self.n_left, self.n_right, edges)
    }

    /// Subgraph keeping the edges whose index in [`Self::edges`] is set in `keep`.
    pub fn edge_subgraph(&self, keep: impl Fn(usize) -> bool) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| keep(i).then_some(e))
            .collect();
        Self::from_sorted(self.n_left, self.n_right, edges)
    }

    /// Same edges over a larger server set.
    pub fn with_servers(&self, n_right: usize) -> Result<Self> {
        if n_right < self.n_right && self.edges.iter().any(|&(_, s)| s >= n_right) {
            return Err(Error::input("shrinking the server set would drop edges"));
        }
        Ok(Self::from_sorted(self.n_left, n_right, self.edges.clone()))
    }
}

/// A set of vertex-disjoint edges, kept sorted by client.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    /// Rejects pairs that reuse a client or a server.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::input("matching reuses a client"));
        }
        let mut servers: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        servers.sort_unstable();
        if servers.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("matching reuses a server"));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `L(M)`, sorted.
    pub fn left(&self) -> Vec<usize> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    /// `R(M)`, sorted.
    pub fn right(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.pairs.iter().map(|p| p.1).collect();
        r.sort_unstable();
        r
    }

    pub fn partner(&self, client: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&client, |p| p.0)
            .ok()
            .map(|i| self.pairs[i].1)
    }

    pub fn is_in(&self, host: &BipartiteGraph) -> bool {
        self.pairs.iter().all(|&(c, s)| host.has_edge(c, s))
    }
}

/// A map from a subset of clients to adjacent servers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    n_right: usize,
    map: BTreeMap<usize, usize>,
}

impl Assignment {
    /// Validates that every `(client, server)` pair is an edge of `host`
    /// and that no client is assigned twice.
    pub fn new(
        host: &BipartiteGraph,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (c, s) in pairs {
            if !host.has_edge(c, s) {
                return Err(Error::input(format!(
                    "({c}, {s}) is not an edge of the host"
                )));
            }
            if map.insert(c, s).is_some() {
                return Err(Error::input(format!("client {c} assigned twice")));
            }
        }
        Ok(Self {
            n_right: host.n_right(),
            map,
        })
    }

    pub(crate) fn from_map_unchecked(n_right: usize, map: BTreeMap<usize, usize>) -> Self {
        Self { n_right, map }
    }

    pub fn server_of(&self, client: usize) -> Option<usize> {
        self.map.get(&client).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Assigned `(client, server)` pairs in client order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map.iter().map(|(&c, &s)| (c, s))
    }

    pub fn clients(&self) -> Vec<usize> {
        self.map.keys().copied().collect()
    }

    /// `LOAD(s)` for every server.
    pub fn loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.n_right];
        for &s in self.map.values() {
            loads[s] += 1;
        }
        loads
    }

    pub fn load(&self, server: usize) -> usize {
        self.map.values().filter(|&&s| s == server).count()
    }

    /// `MAXLOAD`; zero for the empty assignment.
    pub fn max_load(&self) -> usize {
        self.loads().into_iter().max().unwrap_or(0)
    }

    /// True when every pair is an edge of `host`.
    pub fn is_valid_on(&self, host: &BipartiteGraph) -> bool {
        self.map.iter().all(|(&c, &s)| host.has_edge(c, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(BipartiteGraph::new(1, 1, [(0, 1)]).is_err());
        assert!(BipartiteGraph::new(1, 1, [(1, 0)]).is_err());
        assert!(BipartiteGraph::new(1, 1, [(0, 0), (0, 0)]).is_err());
        assert_eq!(
            BipartiteGraph::from_support(1, 1, [(0, 0), (0, 0)])
                .unwrap()
                .num_edges(),
            1
        );
    }

    #[test]
    fn neighborhoods() {
        let g = BipartiteGraph::new(3, 3, [(0, 0), (0, 2), (1, 2), (2, 1)]).unwrap();
        assert_eq!(g.neighbors(0), &[0, 2]);
        assert_eq!(g.neighborhood(&[0, 1]), vec![0, 2]);
        assert_eq!(g.neighborhood(&[]), Vec::<usize>::new());
        let mut w = Vec::new();
        assert_eq!(g.mask_neighborhood_size(0b101, &mut w), 3);
        let induced = g.induced_on_clients(&[1, 2]);
        assert_eq!(induced.edges(), &[(1, 2), (2, 1)]);
        assert!(induced.is_subgraph_of(&g));
        assert!(!g.is_subgraph_of(&induced));
    }

    #[test]
    fn matching_endpoints() {
        let m = Matching::new([(2, 0), (0, 3)]).unwrap();
        assert_eq!(m.left(), vec![0, 2]);
        assert_eq!(m.right(), vec![0, 3]);
        assert_eq!(m.left().len(), m.len());
        assert_eq!(m.partner(2), Some(0));
        assert!(Matching::new([(0, 0), (0, 1)]).is_err());
        assert!(Matching::new([(0, 0), (1, 0)]).is_err());
    }

    #[test]
    fn assignment_loads() {
        let g = BipartiteGraph::new(3, 2, [(0, 0), (1, 1), (2, 1)]).unwrap();
        let empty = Assignment::new(&g, []).unwrap();
        assert_eq!(empty.max_load(), 0);
        let a = Assignment::new(&g, [(0, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(a.max_load(), 2);
        assert_eq!(a.load(1), 2);
        assert!(Assignment::new(&g, [(0, 1)]).is_err());
    }
}
