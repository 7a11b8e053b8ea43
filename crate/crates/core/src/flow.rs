//! Dinic max-flow over small integer networks, used for b-matching feasibility.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    rev: usize,
    cap: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FlowNetwork {
    arcs: Vec<Vec<Arc>>,
    level: Vec<u32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub(crate) fn new(nodes: usize) -> Self {
        Self {
            arcs: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Adds `from -> to` and returns its position in `from`'s arc list.
    pub(crate) fn add_arc(&mut self, from: usize, to: usize, cap: usize) -> usize {
        let at = self.arcs[from].len();
        let rev = self.arcs[to].len() + usize::from(from == to);
        self.arcs[from].push(Arc { to, rev, cap });
        self.arcs[to].push(Arc {
            to: from,
            rev: at,
            cap: 0,
        });
        at
    }

    /// Flow currently pushed through the arc `from[at]`.
    pub(crate) fn flow_on(&self, from: usize, at: usize) -> usize {
        let a = &self.arcs[from][at];
        self.arcs[a.to][a.rev].cap
    }

    fn bfs(&mut self, source: usize, sink: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = u32::MAX);
        self.level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for a in &self.arcs[v] {
                if a.cap > 0 && self.level[a.to] == u32::MAX {
                    self.level[a.to] = self.level[v] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[sink] != u32::MAX
    }

    fn dfs(&mut self, v: usize, sink: usize, limit: usize) -> usize {
        if v == sink {
            return limit;
        }
        while self.iter[v] < self.arcs[v].len() {
            let i = self.iter[v];
            let Arc { to, rev, cap } = self.arcs[v][i];
            if cap > 0 && self.level[v] < self.level[to] {
                let pushed = self.dfs(to, sink, limit.min(cap));
                if pushed > 0 {
                    self.arcs[v][i].cap -= pushed;
                    self.arcs[to][rev].cap += pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    pub(crate) fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut total = 0;
        while self.bfs(source, sink) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let pushed = self.dfs(source, sink, usize::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
        total
    }
}
