//! Edmonds' blossom algorithm on the unit-copy graph.
//!
//! The unit graph is never materialized: unit `x` belongs to compact vertex
//! `owner[x]` and is adjacent to every unit of every compact neighbour.

use std::collections::VecDeque;

pub(super) const NONE: usize = usize::MAX;

pub(super) struct UnitGraph {
    /// First unit of each compact vertex; has one extra trailing entry.
    pub start: Vec<usize>,
    pub owner: Vec<usize>,
    /// Deduplicated compact adjacency, ascending.
    pub adj: Vec<Vec<usize>>,
}

impl UnitGraph {
    pub fn units(&self) -> usize {
        self.owner.len()
    }

    fn neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[self.owner[x]]
            .iter()
            .flat_map(move |&w| self.start[w]..self.start[w + 1])
    }
}

struct Search<'a> {
    g: &'a UnitGraph,
    mate: &'a mut [usize],
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Search<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.units()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Free vertex at the end of an augmenting path from `root`, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.units();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.queue.clear();
        self.used[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            let g = self.g;
            for to in g.neighbours(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Grows `mate` into a maximum matching of `g`.
///
/// Each free unit is tried once: a failed search stays failed after later
/// augmentations. Twin units of the same compact vertex share the outcome,
/// so after one failure the remaining free twins are skipped.
pub(super) fn maximize(g: &UnitGraph, mate: &mut [usize]) {
    let n = g.units();
    let mut s = Search {
        g,
        mate,
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    let mut failed = vec![false; g.adj.len()];
    for root in 0..n {
        if s.mate[root] != NONE || failed[g.owner[root]] {
            continue;
        }
        match s.find_path(root) {
            Some(end) => s.augment(end),
            None => failed[g.owner[root]] = true,
        }
    }
}
