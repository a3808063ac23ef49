//! Hardness-reduction generators and brute-force solvers for their source problems.

mod parse;
mod tm;

pub use parse::{parse_cnf, parse_graph, parse_tm, GraphFile};
pub use tm::{tm_to_icrn11, Row5, TmEncoding, TmOutcome, Transition, TuringMachine};

use crate::error::{Error, Result};
use crate::model::{classify, Configuration, Instance, Model, Reaction, SpeciesTable};
use crate::states::{self, Convention, GadgetNetwork};

/// Largest graph [`solve_source`] will brute-force.
pub const MAX_SOLVE_VERTICES: usize = 8;
/// Largest formula [`solve_source`] will brute-force.
pub const MAX_SOLVE_VARS: usize = 6;
/// Step budget for direct machine simulation.
pub const MAX_SOLVE_STEPS: usize = 200;

/// A graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub directed: bool,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, directed: bool) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidSource(format!("edge ({u},{v}) leaves the vertex range")));
        }
        Ok(Graph { n, edges, directed })
    }

    pub fn undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Graph::new(n, edges, false)
    }

    pub fn directed(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Graph::new(n, edges, true)
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph {
            n,
            edges,
            directed: false,
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (!self.directed && (b, a) == (u, v)))
    }
}

/// A CNF formula with DIMACS-style signed literals over variables `1..=vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    /// Clauses must hold one to three distinct literals and never a literal
    /// together with its negation.
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() || clause.len() > 3 {
                return Err(Error::InvalidSource(format!("clause {} must have 1 to 3 literals", j + 1)));
            }
            for (a, &l) in clause.iter().enumerate() {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::InvalidSource(format!("clause {}: literal {l} out of range", j + 1)));
                }
                for &m in &clause[a + 1..] {
                    if m == l {
                        return Err(Error::InvalidSource(format!("clause {}: duplicate literal {l}", j + 1)));
                    }
                    if m == -l {
                        return Err(Error::InvalidSource(format!(
                            "clause {}: contains both {l} and {m}",
                            j + 1
                        )));
                    }
                }
            }
        }
        Ok(Cnf { vars, clauses })
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// A satisfying assignment, by exhaustive search.
    pub fn solve(&self) -> Option<Vec<bool>> {
        (0u64..1 << self.vars)
            .map(|mask| (0..self.vars).map(|i| mask >> i & 1 == 1).collect::<Vec<bool>>())
            .find(|a| self.satisfied_by(a))
    }
}

/// Problems the generators reduce from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceProblem {
    VertexCover { graph: Graph, k: usize },
    HamPath { graph: Graph, s: usize, t: usize },
    /// Hamiltonian path (or cycle) from `s` under a target convention.
    HamPathFrom { graph: Graph, s: usize, convention: Convention },
    Sat(Cnf),
    Tm(TuringMachine),
    Gadgets(GadgetNetwork),
}

fn named(names: Vec<String>) -> SpeciesTable {
    SpeciesTable::new(names).expect("generated names are distinct")
}

fn check_k(graph: &Graph, k: usize) -> Result<()> {
    if graph.directed {
        return Err(Error::InvalidSource("vertex cover needs an undirected graph".into()));
    }
    if k == 0 || k > graph.n {
        return Err(Error::InvalidSource(format!("k must satisfy 0 < k <= |V| = {}", graph.n)));
    }
    if graph.edges.iter().any(|&(u, v)| u == v) {
        return Err(Error::InvalidSource("vertex cover graphs must not have loops".into()));
    }
    Ok(())
}

/// Vertex cover as a priority iCRN over `⟨R, v…, e…, X⟩`.
pub fn vc_to_picrn(graph: &Graph, k: usize) -> Result<Instance> {
    vc_instance(graph, k, Model::Picrn)
}

/// Vertex cover as an iCRN whose only inhibitor is `R`.
pub fn vc_to_icrn_single_inhibitor(graph: &Graph, k: usize) -> Result<Instance> {
    vc_instance(graph, k, Model::Icrn)
}

fn vc_instance(graph: &Graph, k: usize, model: Model) -> Result<Instance> {
    check_k(graph, k)?;
    let nv = graph.n;
    let ne = graph.edges.len();
    let dim = nv + ne + 2;
    let (r, x) = (0, dim - 1);
    let v = |i: usize| 1 + i;
    let e = |j: usize| 1 + nv + j;
    let mut names = vec!["R".to_string()];
    names.extend((1..=nv).map(|i| format!("v{i}")));
    names.extend((1..=ne).map(|j| format!("e{j}")));
    names.push("X".into());

    let gated = |rx: Reaction| match model {
        Model::Picrn => rx.with_priority(1),
        _ => rx.with_inhibitors([r]),
    };
    let mut reactions = Vec::new();
    for i in 0..nv {
        reactions.push(Reaction::from_sparse(dim, &[(v(i), 1), (r, 1)], &[]));
        reactions.push(gated(Reaction::from_sparse(dim, &[(v(i), 1), (x, 1)], &[])));
    }
    for (j, &(a, b)) in graph.edges.iter().enumerate() {
        for end in [a, b] {
            reactions.push(gated(Reaction::from_sparse(dim, &[(v(end), 1), (e(j), 1)], &[(v(end), 1)])));
        }
    }
    let mut source = vec![1u64; dim];
    source[r] = (nv - k) as u64;
    source[x] = k as u64;
    Instance::new(
        model,
        named(names),
        reactions,
        Configuration::from_counts(source),
        Configuration::zeros(dim),
    )
}

/// Hamiltonian `s`-`t` path as a `(2,0)` iCRN over `v, v_c` per vertex plus `s'`.
pub fn hampath_to_icrn20(graph: &Graph, s: usize, t: usize) -> Result<Instance> {
    if s >= graph.n || t >= graph.n {
        return Err(Error::InvalidSource("s and t must be vertices".into()));
    }
    if s == t {
        return Err(Error::InvalidSource("s and t must differ".into()));
    }
    let n = graph.n;
    let dim = 2 * n + 1;
    let v = |i: usize| 2 * i;
    let vc = |i: usize| 2 * i + 1;
    let start = 2 * n;
    let mut names = Vec::with_capacity(dim);
    for i in 1..=n {
        names.push(format!("v{i}"));
        names.push(format!("v{i}_c"));
    }
    names.push("s'".into());
    let mut reactions = Vec::new();
    for &(a, b) in &graph.edges {
        let mut arcs = vec![(a, b)];
        if !graph.directed && a != b {
            arcs.push((b, a));
        }
        for (u, w) in arcs {
            reactions.push(Reaction::from_sparse(dim, &[(vc(u), 1), (v(w), 1)], &[]).with_inhibitors([v(u)]));
        }
    }
    reactions.push(Reaction::from_sparse(dim, &[(start, 1), (v(s), 1)], &[]));
    let mut target = vec![0u64; dim];
    target[vc(t)] = 1;
    Instance::new(
        Model::Icrn,
        named(names),
        reactions,
        Configuration::from_counts(vec![1u64; dim]),
        Configuration::from_counts(target),
    )
}

/// 3SAT as a `(2,1)` iCRN over `T_i, F_i`, one species per clause, and `X`.
pub fn sat3_to_icrn21(cnf: &Cnf) -> Result<Instance> {
    let cnf = Cnf::new(cnf.vars, cnf.clauses.clone())?;
    let n = cnf.vars;
    let m = cnf.clauses.len();
    let dim = 2 * n + m + 1;
    let t = |i: usize| 2 * i;
    let f = |i: usize| 2 * i + 1;
    let c = |j: usize| 2 * n + j;
    let x = dim - 1;
    let mut names = Vec::with_capacity(dim);
    for i in 1..=n {
        names.push(format!("T{i}"));
        names.push(format!("F{i}"));
    }
    names.extend((1..=m).map(|j| format!("c{j}")));
    names.push("X".into());
    let mut reactions = Vec::new();
    for i in 0..n {
        reactions.push(Reaction::from_sparse(dim, &[(t(i), 1), (f(i), 1)], &[(t(i), 1)]));
        reactions.push(Reaction::from_sparse(dim, &[(t(i), 1), (f(i), 1)], &[(f(i), 1)]));
    }
    for (j, clause) in cnf.clauses.iter().enumerate() {
        for &l in clause {
            let i = l.unsigned_abs() as usize - 1;
            let (keep, block) = if l > 0 { (t(i), f(i)) } else { (f(i), t(i)) };
            reactions.push(Reaction::from_sparse(dim, &[(c(j), 1), (keep, 1)], &[(keep, 1)]).with_inhibitors([block]));
        }
    }
    for i in 0..n {
        reactions.push(Reaction::from_sparse(dim, &[(t(i), 1), (x, 1)], &[(x, 1)]));
        reactions.push(Reaction::from_sparse(dim, &[(f(i), 1), (x, 1)], &[(x, 1)]));
    }
    let mut target = vec![0u64; dim];
    target[x] = 1;
    Instance::new(
        Model::Icrn,
        named(names),
        reactions,
        Configuration::from_counts(vec![1u64; dim]),
        Configuration::from_counts(target),
    )
}

/// Turns a `(2,1)` iCRN into a `(k,k-1)` one by adding `k-2` copies of a
/// fresh catalyst species to every rule and to both configurations.
pub fn pad_catalyst(inst: &Instance, k: u64) -> Result<Instance> {
    if k < 3 {
        return Err(Error::InvalidSource("catalyst padding needs k >= 3".into()));
    }
    if inst.model != Model::Icrn || !classify(inst).only(2, 1) {
        return Err(Error::InvalidSource("catalyst padding expects a (2,1) iCRN".into()));
    }
    let mut name = "d".to_string();
    while inst.species.id(&name).is_some() {
        name.push('\'');
    }
    let mut names = inst.species.names().to_vec();
    names.push(name);
    let pad = k - 2;
    let reactions = inst
        .reactions
        .iter()
        .map(|rx| {
            let mut out = rx.clone();
            out.reactants.push(pad);
            out.products.push(pad);
            out
        })
        .collect();
    let extend = |c: &Configuration| {
        let mut v = c.counts().to_vec();
        v.push(pad.into());
        Configuration::from_biguints(v)
    };
    Instance::new(Model::Icrn, named(names), reactions, extend(&inst.source), extend(&inst.target))
}

/// 3SAT as a `(1,1)` iCRN with at most one inhibitor per rule.
///
/// Clauses with fewer than three literals only get species for the literals
/// they have; the target count of `W` is the sum of `literals - 1`.
pub fn sat3_to_icrn11(cnf: &Cnf) -> Result<Instance> {
    let cnf = Cnf::new(cnf.vars, cnf.clauses.clone())?;
    let n = cnf.vars;
    let mut names = Vec::new();
    let push = |names: &mut Vec<String>, s: String| {
        names.push(s);
        names.len() - 1
    };
    let mut y = Vec::new();
    let mut x = Vec::new();
    let mut t = Vec::new();
    let mut f = Vec::new();
    for i in 1..=n {
        y.push(push(&mut names, format!("y{i}")));
        x.push(push(&mut names, format!("x{i}")));
        t.push(push(&mut names, format!("T{i}")));
        f.push(push(&mut names, format!("F{i}")));
    }
    let mut lits = Vec::new();
    let mut sj = Vec::new();
    for (j, clause) in cnf.clauses.iter().enumerate() {
        let mut per = Vec::new();
        for (k, _) in clause.iter().enumerate() {
            let c = push(&mut names, format!("c{}_{}", k + 1, j + 1));
            let d = push(&mut names, format!("d{}_{}", k + 1, j + 1));
            per.push((c, d));
        }
        lits.push(per);
        sj.push(push(&mut names, format!("S{}", j + 1)));
    }
    let w = push(&mut names, "W".into());
    let dim = names.len();
    let one = |a: usize, b: usize| Reaction::from_sparse(dim, &[(a, 1)], &[(b, 1)]);
    let mut reactions = Vec::new();
    for i in 0..n {
        reactions.push(one(y[i], t[i]));
        reactions.push(one(y[i], f[i]));
        let guard = |rx: Reaction| if i == 0 { rx } else { rx.with_inhibitors([x[i - 1]]) };
        reactions.push(guard(one(x[i], t[i])));
        reactions.push(guard(one(x[i], f[i])));
    }
    let last_x = x.last().copied();
    for (j, clause) in cnf.clauses.iter().enumerate() {
        for (k, &l) in clause.iter().enumerate() {
            let (c, d) = lits[j][k];
            let i = l.unsigned_abs() as usize - 1;
            let mut step = one(c, d);
            if let Some(xn) = last_x {
                step = step.with_inhibitors([xn]);
            }
            reactions.push(step);
            let block = if l > 0 { f[i] } else { t[i] };
            reactions.push(one(d, sj[j]).with_inhibitors([block]));
            reactions.push(one(d, w));
        }
    }
    let mut source = vec![0u64; dim];
    let mut target = vec![0u64; dim];
    for i in 0..n {
        source[y[i]] = 1;
        source[x[i]] = 1;
        target[t[i]] = 1;
        target[f[i]] = 1;
    }
    for (j, per) in lits.iter().enumerate() {
        for &(c, _) in per {
            source[c] = 1;
        }
        target[sj[j]] = 1;
        target[w] += per.len() as u64 - 1;
    }
    Instance::new(
        Model::Icrn,
        named(names),
        reactions,
        Configuration::from_counts(source),
        Configuration::from_counts(target),
    )
}

fn guard_graph(graph: &Graph) -> Result<()> {
    if graph.n > MAX_SOLVE_VERTICES {
        return Err(Error::SizeGuard(format!(
            "{} vertices exceed the brute-force limit of {MAX_SOLVE_VERTICES}",
            graph.n
        )));
    }
    Ok(())
}

/// Smallest vertex cover size, by subset enumeration.
pub fn min_vertex_cover(graph: &Graph) -> Result<usize> {
    guard_graph(graph)?;
    let best = (0u32..1 << graph.n)
        .filter(|mask| graph.edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
        .map(|mask| mask.count_ones() as usize)
        .min();
    Ok(best.unwrap_or(0))
}

/// Hamiltonian paths starting at `s` (any end), as vertex sequences, found by DFS.
pub fn hamiltonian_paths_from(graph: &Graph, s: usize) -> Result<Vec<Vec<usize>>> {
    guard_graph(graph)?;
    fn go(g: &Graph, path: &mut Vec<usize>, seen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if path.len() == g.n {
            out.push(path.clone());
            return;
        }
        let u = *path.last().unwrap();
        for w in 0..g.n {
            if !seen[w] && g.has_arc(u, w) {
                seen[w] = true;
                path.push(w);
                go(g, path, seen, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    if s < graph.n {
        let mut seen = vec![false; graph.n];
        seen[s] = true;
        go(graph, &mut vec![s], &mut seen, &mut out);
    }
    Ok(out)
}

/// Exact answer for a source problem by exhaustive search or direct simulation.
pub fn solve_source(problem: &SourceProblem) -> Result<bool> {
    match problem {
        SourceProblem::VertexCover { graph, k } => Ok(min_vertex_cover(graph)? <= *k),
        SourceProblem::HamPath { graph, s, t } => {
            Ok(hamiltonian_paths_from(graph, *s)?.iter().any(|p| p.last() == Some(t)))
        }
        SourceProblem::HamPathFrom { graph, s, convention } => {
            let paths = hamiltonian_paths_from(graph, *s)?;
            let last_ok = |u: usize| match convention {
                Convention::PaperLiteral => graph.has_arc(u, *s),
                Convention::AnyEndState => (0..graph.n).any(|w| graph.has_arc(u, w)),
            };
            Ok(paths.iter().any(|p| last_ok(*p.last().unwrap())))
        }
        SourceProblem::Sat(cnf) => {
            if cnf.vars > MAX_SOLVE_VARS {
                return Err(Error::SizeGuard(format!(
                    "{} variables exceed the brute-force limit of {MAX_SOLVE_VARS}",
                    cnf.vars
                )));
            }
            Ok(cnf.solve().is_some())
        }
        SourceProblem::Tm(tm) => Ok(tm.run(MAX_SOLVE_STEPS)?.0 == TmOutcome::Accept),
        SourceProblem::Gadgets(net) => states::solve_network(net),
    }
}
