//! Maximum b-matching by unit expansion and Edmonds' blossom algorithm.
//!
//! Each vertex `v` becomes `b(v)` interchangeable unit copies; an edge joins
//! every copy of one end to every copy of the other. An edge with a finite
//! capacity `c` is first replaced by a path `u - x - y - v` with
//! `b(x) = b(y) = c`, which raises the optimum by exactly `c`.

mod blossom;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use blossom::{UnitGraph, NONE};

/// Expansion stops above this many unit copies.
pub const MAX_UNITS: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BEdge {
    pub u: usize,
    pub v: usize,
    /// `None` means bounded only by the endpoint b-values.
    pub capacity: Option<u64>,
    /// Carried through for scheduling; the solver ignores it.
    pub priority: usize,
}

impl BEdge {
    pub fn new(u: usize, v: usize) -> Self {
        BEdge {
            u,
            v,
            capacity: None,
            priority: 0,
        }
    }

    pub fn with_priority(mut self, priority: usize) -> Self {
        self.priority = priority;
        self
    }

    pub fn with_capacity(mut self, capacity: u64) -> Self {
        self.capacity = Some(capacity);
        self
    }
}

/// Undirected multigraph with degree budgets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BGraph {
    pub b: Vec<u64>,
    pub edges: Vec<BEdge>,
}

/// Multiplicity chosen for each edge, indexed like `BGraph::edges`.
pub type Assignment = Vec<u64>;

impl BGraph {
    pub fn new(b: Vec<u64>) -> Self {
        BGraph { b, edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, b: u64) -> usize {
        self.b.push(b);
        self.b.len() - 1
    }

    pub fn add_edge(&mut self, edge: BEdge) -> usize {
        self.edges.push(edge);
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.b.len()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= self.b.len() || e.v >= self.b.len() {
                return Err(Error::InvalidInstance(format!("edge {i} has a dangling endpoint")));
            }
            if e.u == e.v {
                return Err(Error::InvalidInstance(format!("edge {i} is a loop")));
            }
        }
        Ok(())
    }

    /// Sum of `f` over the edges at each vertex.
    pub fn degrees(&self, f: &[u64]) -> Vec<u64> {
        let mut deg = vec![0u64; self.b.len()];
        for (e, &x) in self.edges.iter().zip(f) {
            deg[e.u] += x;
            deg[e.v] += x;
        }
        deg
    }

    /// `f` respects every capacity and every degree budget.
    pub fn is_feasible(&self, f: &[u64]) -> bool {
        f.len() == self.edges.len()
            && self.edges.iter().zip(f).all(|(e, &x)| e.capacity.is_none_or(|c| x <= c))
            && self.degrees(f).iter().zip(&self.b).all(|(d, b)| d <= b)
    }
}

/// Every degree budget is met exactly.
pub fn is_perfect(g: &BGraph, f: &[u64]) -> bool {
    f.len() == g.edges.len() && g.degrees(f) == g.b
}

/// Total multiplicity of an assignment.
pub fn total(f: &[u64]) -> u64 {
    f.iter().sum()
}

/// Compact graph after capacity gadgets, with the origin of each edge.
struct Expanded {
    b: Vec<u64>,
    /// Compact edge list, deduplicated by endpoint pair.
    pairs: BTreeMap<(usize, usize), Origin>,
}

#[derive(Clone, Copy)]
enum Origin {
    /// Uncapacitated edge of the input.
    Plain(usize),
    /// Gadget piece of capacitated input edge `e`: 0 = u-x, 1 = x-y, 2 = y-v.
    Gadget(usize, u8),
}

fn expand(g: &BGraph) -> Expanded {
    let mut b = g.b.clone();
    let mut pairs = BTreeMap::new();
    let key = |a: usize, c: usize| (a.min(c), a.max(c));
    for (i, e) in g.edges.iter().enumerate() {
        match e.capacity {
            None => {
                let entry = pairs.entry(key(e.u, e.v)).or_insert(Origin::Plain(i));
                // Parallel edges collapse onto the lowest-priority, lowest-index one.
                if let Origin::Plain(j) = *entry {
                    if (e.priority, i) < (g.edges[j].priority, j) {
                        *entry = Origin::Plain(i);
                    }
                }
            }
            Some(cap) => {
                let x = b.len();
                b.push(cap);
                let y = b.len();
                b.push(cap);
                pairs.insert(key(e.u, x), Origin::Gadget(i, 0));
                pairs.insert(key(x, y), Origin::Gadget(i, 1));
                pairs.insert(key(y, e.v), Origin::Gadget(i, 2));
            }
        }
    }
    Expanded { b, pairs }
}

/// Maximum b-matching; deterministic for a fixed input.
pub fn max_bmatching(g: &BGraph) -> Result<Assignment> {
    g.validate()?;
    let ex = expand(g);
    let units: u64 = ex.b.iter().sum();
    if units > MAX_UNITS {
        return Err(Error::SizeGuard(format!("{units} unit copies exceed {MAX_UNITS}")));
    }
    let n = ex.b.len();
    let mut start = Vec::with_capacity(n + 1);
    let mut owner = Vec::with_capacity(units as usize);
    for (v, &bv) in ex.b.iter().enumerate() {
        start.push(owner.len());
        owner.extend(std::iter::repeat_n(v, bv as usize));
    }
    start.push(owner.len());
    let mut adj = vec![Vec::new(); n];
    for &(a, c) in ex.pairs.keys() {
        adj[a].push(c);
        adj[c].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let ug = UnitGraph { start, owner, adj };

    // Greedy warm start on the compact graph, then laid out on consecutive copies.
    let mut mate = vec![NONE; ug.units()];
    let mut next_free: Vec<usize> = ug.start[..n].to_vec();
    for &(a, c) in ex.pairs.keys() {
        let room_a = ug.start[a + 1] - next_free[a];
        let room_c = ug.start[c + 1] - next_free[c];
        for _ in 0..room_a.min(room_c) {
            let (x, y) = (next_free[a], next_free[c]);
            mate[x] = y;
            mate[y] = x;
            next_free[a] += 1;
            next_free[c] += 1;
        }
    }
    blossom::maximize(&ug, &mut mate);

    let mut count: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (x, &y) in mate.iter().enumerate() {
        if y != NONE && x < y {
            let (a, c) = (ug.owner[x], ug.owner[y]);
            *count.entry((a.min(c), a.max(c))).or_default() += 1;
        }
    }
    let mut f = vec![0u64; g.edges.len()];
    let mut gadget = vec![[0u64; 3]; g.edges.len()];
    for (pair, origin) in &ex.pairs {
        let k = count.get(pair).copied().unwrap_or(0);
        match *origin {
            Origin::Plain(i) => f[i] += k,
            Origin::Gadget(i, part) => gadget[i][part as usize] = k,
        }
    }
    for (i, e) in g.edges.iter().enumerate() {
        if e.capacity.is_some() {
            f[i] = gadget[i][0].min(gadget[i][2]);
        }
    }
    debug_assert!(g.is_feasible(&f));
    Ok(f)
}
