//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails. Seeds are fixed, so runs are reproducible.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use icrn_core::bmatching::{is_perfect, max_bmatching, total, BEdge, BGraph};
use icrn_core::certificate::{self, Certificate};
use icrn_core::fpt;
use icrn_core::model::{classify, Configuration, Instance, Model, Reaction, ReactionId, SpeciesTable};
use icrn_core::oracle::{bfs_reach, bfs_reach_reduced, Bounds, OracleResult, OracleVerdict};
use icrn_core::poly::{self, Verdict};
use icrn_core::reductions::{self, Cnf, Graph, SourceProblem, TmEncoding, TmOutcome, Transition, TuringMachine};
use icrn_core::states::{self, Convention};
use icrn_core::{dispatch, format};
use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_STATES: usize = 1_000_000;

fn bounds() -> Bounds {
    Bounds::states(ORACLE_STATES)
}

struct Outcome {
    pass: bool,
    summary: String,
    /// Verdicts, certificates and serialized instances, for the determinism check.
    transcript: String,
}

/// An oracle-YES void instance and the oracle's step path, kept for the
/// certificate checks.
struct Witnessed {
    inst: Instance,
    path: Vec<ReactionId>,
}

// ---------------------------------------------------------------------------
// Random instances

#[derive(Clone, Copy)]
enum Gate {
    None,
    Priority,
    /// Inhibitors drawn from the first `pool` species (all species if `None`).
    Inhibitors(Option<usize>),
}

fn model_of(g: Gate) -> Model {
    match g {
        Gate::None => Model::Crn,
        Gate::Priority => Model::Picrn,
        Gate::Inhibitors(_) => Model::Icrn,
    }
}

/// Void rule with `k` reactants and `p` products, products taken from the reactants.
fn void_rule(rng: &mut ChaCha8Rng, n: usize, k: u64, p: u64, gate: Gate) -> Reaction {
    let mut reactants = vec![0u64; n];
    let mut picked = Vec::new();
    for _ in 0..k {
        let s = rng.gen_range(0..n);
        reactants[s] += 1;
        picked.push(s);
    }
    picked.shuffle(rng);
    let mut products = vec![0u64; n];
    for &s in picked.iter().take(p as usize) {
        products[s] += 1;
    }
    let rx = Reaction::new(reactants, products);
    match gate {
        Gate::None => rx,
        Gate::Priority => {
            if rng.gen_bool(0.4) {
                rx
            } else {
                rx.with_priority(rng.gen_range(1..=n))
            }
        }
        Gate::Inhibitors(pool) => {
            let pool = pool.unwrap_or(n).min(n);
            let inh: Vec<usize> = (0..pool).filter(|_| rng.gen_bool(0.3)).collect();
            rx.with_inhibitors(inh)
        }
    }
}

fn random_instance(rng: &mut ChaCha8Rng, k: u64, p: u64, gate: Gate) -> Instance {
    let n = rng.gen_range(1..=5usize);
    let m = rng.gen_range(1..=6usize);
    let reactions = (0..m).map(|_| void_rule(rng, n, k, p, gate)).collect();
    let source: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=4)).collect();
    let target: Vec<u64> = source
        .iter()
        .map(|&c| {
            if rng.gen_bool(0.1) {
                rng.gen_range(0..=4)
            } else if rng.gen_bool(0.5) {
                0
            } else {
                rng.gen_range(0..=c)
            }
        })
        .collect();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    Instance::new(
        model_of(gate),
        SpeciesTable::new(names).unwrap(),
        reactions,
        Configuration::from_counts(source),
        Configuration::from_counts(target),
    )
    .unwrap()
}

fn oracle_bool(r: &OracleResult) -> Option<bool> {
    match r.verdict {
        OracleVerdict::Yes => Some(true),
        OracleVerdict::No => Some(false),
        OracleVerdict::BoundedOut => None,
    }
}

fn cert_text(v: &Verdict) -> String {
    match &v.witness {
        Some(c) => c.to_string().replace('\n', ";"),
        None => "-".into(),
    }
}

// ---------------------------------------------------------------------------
// Criterion 1

struct ClassSpec {
    label: &'static str,
    k: u64,
    p: u64,
    gate: Gate,
    decide: fn(&Instance) -> icrn_core::Result<Verdict>,
}

fn criterion_1(witnessed: &mut Vec<Witnessed>) -> Outcome {
    let classes = [
        ClassSpec { label: "(1,0) picrn", k: 1, p: 0, gate: Gate::Priority, decide: poly::decide_picrn_10 },
        ClassSpec { label: "(1,0) icrn", k: 1, p: 0, gate: Gate::Inhibitors(None), decide: poly::decide_icrn_10 },
        ClassSpec { label: "(2,0) picrn", k: 2, p: 0, gate: Gate::Priority, decide: poly::decide_picrn_20 },
        ClassSpec { label: "(2,1) crn", k: 2, p: 1, gate: Gate::None, decide: poly::decide_kk1 },
        ClassSpec { label: "(2,1) picrn", k: 2, p: 1, gate: Gate::Priority, decide: poly::decide_kk1 },
        ClassSpec { label: "(3,2) crn", k: 3, p: 2, gate: Gate::None, decide: poly::decide_kk1 },
        ClassSpec { label: "(3,2) picrn", k: 3, p: 2, gate: Gate::Priority, decide: poly::decide_kk1 },
    ];
    let start = Instant::now();
    let mut transcript = String::new();
    let mut disagreements = Vec::new();
    let mut bad_witness = 0;
    let mut order_disagreements = 0;
    let mut per_class = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1000 + ci as u64);
        let mut yes = 0;
        for i in 0..500 {
            let inst = random_instance(&mut rng, class.k, class.p, class.gate);
            let v = (class.decide)(&inst).expect("generated instances meet the preconditions");
            let o = bfs_reach(&inst, &bounds()).unwrap();
            if oracle_bool(&o) != Some(v.reachable) {
                disagreements.push(format!("{} #{i}", class.label));
            }
            if let Some(c) = &v.witness {
                if !certificate::verify(&inst, c).unwrap() {
                    bad_witness += 1;
                }
            }
            if inst.model == Model::Icrn {
                // Greedy confluence: three rule orders, one answer.
                let m = inst.reactions.len();
                let orders = [
                    (0..m).collect::<Vec<_>>(),
                    (0..m).rev().collect(),
                    (0..m).map(|j| (j + m / 2) % m).collect(),
                ];
                for order in orders {
                    let w = poly::decide_icrn_10_with_order(&inst, &order).unwrap();
                    if w.reachable != v.reachable {
                        order_disagreements += 1;
                    }
                }
            }
            if v.reachable {
                yes += 1;
            }
            if let Some(path) = o.path {
                witnessed.push(Witnessed { inst: inst.clone(), path });
            }
            writeln!(transcript, "c1 {} {i} {} {}", class.label, v.reachable, cert_text(&v)).unwrap();
        }
        per_class.push(format!("{} {yes}/500 yes", class.label));
    }
    let elapsed = start.elapsed();
    let pass = disagreements.is_empty()
        && bad_witness == 0
        && order_disagreements == 0
        && elapsed < Duration::from_secs(60);
    Outcome {
        pass,
        summary: format!(
            "void deciders vs oracle: 3500 instances [{}], {} disagreements {:?}, {} bad witnesses, \
             {} order disagreements, {:.1} s (limit 60 s)",
            per_class.join(", "),
            disagreements.len(),
            disagreements.iter().take(5).collect::<Vec<_>>(),
            bad_witness,
            order_disagreements,
            elapsed.as_secs_f64()
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 2

fn factorial(c: usize) -> usize {
    (1..=c).product()
}

fn criterion_2(witnessed: &mut Vec<Witnessed>) -> Outcome {
    type Fpt = fn(&Instance) -> icrn_core::Result<fpt::FptVerdict>;
    let classes: [(&str, u64, u64, Fpt); 3] = [
        ("(2,0) icrn", 2, 0, fpt::decide_icrn_20_fpt),
        ("(2,1) icrn", 2, 1, fpt::decide_icrn_kk1_fpt),
        ("(3,2) icrn", 3, 2, fpt::decide_icrn_kk1_fpt),
    ];
    let mut transcript = String::new();
    let mut disagreements = Vec::new();
    let mut over_budget = 0;
    let mut bad_witness = 0;
    let mut max_c = 0;
    let start = Instant::now();
    for (ci, &(label, k, p, decide)) in classes.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x2000 + ci as u64);
        for i in 0..500 {
            let inst = random_instance(&mut rng, k, p, Gate::Inhibitors(Some(3)));
            let c = classify(&inst).c;
            max_c = max_c.max(c);
            let v = decide(&inst).unwrap();
            if v.orderings_evaluated > factorial(c) {
                over_budget += 1;
            }
            let o = bfs_reach(&inst, &bounds()).unwrap();
            if oracle_bool(&o) != Some(v.verdict.reachable) {
                disagreements.push(format!("{label} #{i}"));
            }
            if let Some(cert) = &v.verdict.witness {
                if !certificate::verify(&inst, cert).unwrap() {
                    bad_witness += 1;
                }
            }
            if let Some(path) = o.path {
                witnessed.push(Witnessed { inst: inst.clone(), path });
            }
            writeln!(
                transcript,
                "c2 {label} {i} {} {} {}",
                v.verdict.reachable,
                v.orderings_evaluated,
                cert_text(&v.verdict)
            )
            .unwrap();
        }
    }
    Outcome {
        pass: disagreements.is_empty() && over_budget == 0 && bad_witness == 0,
        summary: format!(
            "FPT deciders vs oracle: 1500 instances with c <= {max_c}, {} disagreements {:?}, \
             {over_budget} over the c! budget, {bad_witness} bad witnesses, {:.1} s",
            disagreements.len(),
            disagreements.iter().take(5).collect::<Vec<_>>(),
            start.elapsed().as_secs_f64()
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 3

fn criterion_3() -> Outcome {
    let mut transcript = String::new();
    let mut count = 0;
    let mut mismatches = 0;
    let mut shape_errors = 0;
    for (gi, gate) in [Gate::Priority, Gate::Inhibitors(None)].into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x3000 + gi as u64);
        let mut made = 0;
        while made < 200 {
            let inst = random_instance(&mut rng, 2, 0, gate);
            if !inst.target.le(&inst.source) {
                continue;
            }
            made += 1;
            count += 1;
            let red = poly::reduce_to_empty(&inst).unwrap();
            let expect = inst.source.checked_sub(&inst.target).unwrap();
            if red.instance.source != expect || !red.instance.target.is_zero() {
                shape_errors += 1;
            }
            let a = oracle_bool(&bfs_reach(&inst, &bounds()).unwrap());
            let b = oracle_bool(&bfs_reach(&red.instance, &bounds()).unwrap());
            if a.is_none() || a != b {
                mismatches += 1;
            }
            writeln!(transcript, "c3 {gi} {made} {a:?} {:?}", red.pruned).unwrap();
        }
    }
    Outcome {
        pass: mismatches == 0 && shape_errors == 0,
        summary: format!(
            "empty-target reduction: {count} (2,0) instances (200 picrn, 200 icrn), \
             {mismatches} verdict mismatches, {shape_errors} shape errors"
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 4

/// Exhaustive optimum over edge multiplicities.
fn brute_force_bmatching(g: &BGraph) -> u64 {
    fn go(g: &BGraph, i: usize, res: &mut [u64]) -> u64 {
        let Some(e) = g.edges.get(i) else { return 0 };
        let top = res[e.u].min(res[e.v]).min(e.capacity.unwrap_or(u64::MAX));
        let mut best = 0;
        for x in 0..=top {
            res[e.u] -= x;
            res[e.v] -= x;
            best = best.max(x + go(g, i + 1, res));
            res[e.u] += x;
            res[e.v] += x;
        }
        best
    }
    go(g, 0, &mut g.b.clone())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4000);
    let mut wrong_opt = 0;
    for _ in 0..1500 {
        let n = rng.gen_range(1..=6usize);
        let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        let mut g = BGraph::new(b);
        if n >= 2 {
            for _ in 0..rng.gen_range(0..=9) {
                let u = rng.gen_range(0..n);
                let v = (u + rng.gen_range(1..n)) % n;
                let mut e = BEdge::new(u, v);
                if rng.gen_bool(0.2) {
                    e = e.with_capacity(rng.gen_range(0..=3));
                }
                g.add_edge(e);
            }
        }
        let f = max_bmatching(&g).unwrap();
        if !g.is_feasible(&f) || total(&f) != brute_force_bmatching(&g) {
            wrong_opt += 1;
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x4001);
    let mut wrong_perfect = 0;
    for _ in 0..600 {
        let mut inst = random_instance(&mut rng, 2, 0, Gate::Priority);
        inst.target = Configuration::zeros(inst.dim());
        let rg = poly::build_bmatching(&inst).unwrap();
        let f = max_bmatching(&rg.graph).unwrap();
        let perfect = is_perfect(&rg.graph, &f);
        if oracle_bool(&bfs_reach(&inst, &bounds()).unwrap()) != Some(perfect) {
            wrong_perfect += 1;
        }
    }

    // Ten species with counts up to 200.
    let mut timings = Vec::new();
    let mut large_ok = true;
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4100 + seed);
        let n = 10;
        let mut reactions = Vec::new();
        for a in 0..n {
            for b in a..n {
                if rng.gen_bool(0.35) {
                    let mut r = vec![0u64; n];
                    r[a] += 1;
                    r[b] += 1;
                    let prio = if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1..=a.min(b).max(1)) };
                    reactions.push(Reaction::new(r, vec![0; n]).with_priority(prio));
                }
            }
        }
        let source: Vec<u64> = (0..n).map(|_| rng.gen_range(100..=200)).collect();
        let target: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let inst = Instance::new(
            Model::Picrn,
            SpeciesTable::new(names).unwrap(),
            reactions,
            Configuration::from_counts(source),
            Configuration::from_counts(target),
        )
        .unwrap();
        let t = Instant::now();
        let v = poly::decide_picrn_20(&inst).unwrap();
        let dt = t.elapsed();
        if let Some(c) = &v.witness {
            large_ok &= certificate::verify(&inst, c).unwrap();
        }
        large_ok &= dt < Duration::from_secs(10);
        timings.push(format!("{}:{:.2}s", if v.reachable { "YES" } else { "NO" }, dt.as_secs_f64()));
    }
    // Every pair at priority 0, an even total and no count above half of it: YES.
    let n = 10;
    let mut reactions = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let mut r = vec![0u64; n];
            r[a] = 1;
            r[b] = 1;
            reactions.push(Reaction::new(r, vec![0; n]));
        }
    }
    let source: Vec<u64> = (0..n as u64).map(|i| 150 + i * 4).collect();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let dense = Instance::new(
        Model::Picrn,
        SpeciesTable::new(names).unwrap(),
        reactions,
        Configuration::from_counts(source),
        Configuration::zeros(n),
    )
    .unwrap();
    let t = Instant::now();
    let v = poly::decide_picrn_20(&dense).unwrap();
    let dt = t.elapsed();
    large_ok &= v.reachable && v.witness.as_ref().is_some_and(|c| certificate::verify(&dense, c).unwrap());
    large_ok &= dt < Duration::from_secs(10);
    timings.push(format!("dense {}:{:.2}s", if v.reachable { "YES" } else { "NO" }, dt.as_secs_f64()));

    Outcome {
        pass: wrong_opt == 0 && wrong_perfect == 0 && large_ok,
        summary: format!(
            "b-matching: 1500 random graphs (<= 6 vertices, b <= 3), {wrong_opt} wrong optima; \
             600 (2,0) picrn instances, {wrong_perfect} perfect-matching/oracle mismatches; \
             10-species instances with counts <= 200 [{}] (limit 10 s each)",
            timings.join(", ")
        ),
        transcript: String::new(),
    }
}

// ---------------------------------------------------------------------------
// Criterion 5

/// Largest block count for `rx` at `c`, ignoring inhibition.
fn max_block(c: &Configuration, rx: &Reaction) -> Option<BigUint> {
    let mut best: Option<BigUint> = None;
    for (s, (&r, &p)) in rx.reactants.iter().zip(&rx.products).enumerate() {
        if c.get(s) < &BigUint::from(r) {
            return Some(BigUint::from(0u8));
        }
        if r > p {
            let m = (c.get(s) - BigUint::from(r)) / BigUint::from(r - p) + 1u8;
            best = Some(best.map_or(m.clone(), |b| b.min(m)));
        }
    }
    best
}

fn block_applicable(inst: &Instance, c: &Configuration, rule: ReactionId, m: &BigUint) -> bool {
    let one = Certificate::new(vec![(rule, m.clone())]);
    let probe = Instance {
        source: c.clone(),
        ..inst.clone()
    };
    matches!(certificate::replay(&probe, &one), Ok(Ok(_)))
}

fn states_before(inst: &Instance, cert: &Certificate) -> Vec<Configuration> {
    let mut out = vec![inst.source.clone()];
    for (r, m) in &cert.blocks {
        let mut c = out.last().unwrap().clone();
        let rx = &inst.reactions[*r];
        for (s, (&a, &b)) in rx.reactants.iter().zip(&rx.products).enumerate() {
            c.set(s, c.get(s) + BigUint::from(b) * m - BigUint::from(a) * m);
        }
        out.push(c);
    }
    out
}

fn criterion_5(witnessed: &[Witnessed]) -> Outcome {
    let mut normalized_bad = 0;
    let mut non_contiguous = 0;
    let mut mutations = [0usize; 3];
    let mut accepted = [0usize; 3];
    for w in witnessed {
        let cert = certificate::normalize(&w.inst, &w.path).unwrap();
        if !certificate::verify(&w.inst, &cert).unwrap() {
            normalized_bad += 1;
            continue;
        }
        if !cert.is_contiguous() {
            non_contiguous += 1;
        }
        let before = states_before(&w.inst, &cert);
        for (i, (r, _)) in cert.blocks.iter().enumerate() {
            // Count one past the feasible maximum.
            if let Some(max) = max_block(&before[i], &w.inst.reactions[*r]) {
                let mut bad = cert.clone();
                bad.blocks[i].1 = max + 1u8;
                mutations[0] += 1;
                if certificate::verify(&w.inst, &bad).unwrap() {
                    accepted[0] += 1;
                }
            }
            // Move a block ahead of the block that made it applicable.
            if i > 0 {
                let (next_rule, next_m) = &cert.blocks[i];
                if !block_applicable(&w.inst, &before[i - 1], *next_rule, next_m) {
                    let mut bad = cert.clone();
                    bad.blocks.swap(i - 1, i);
                    mutations[1] += 1;
                    if certificate::verify(&w.inst, &bad).unwrap() {
                        accepted[1] += 1;
                    }
                }
            }
            // A rule with a different net effect, and an id out of range.
            let effect = w.inst.reactions[*r].net_change();
            let other = (0..w.inst.reactions.len()).find(|&j| w.inst.reactions[j].net_change() != effect);
            for wrong in other.into_iter().chain([w.inst.reactions.len()]) {
                let mut bad = cert.clone();
                bad.blocks[i].0 = wrong;
                mutations[2] += 1;
                if certificate::verify(&w.inst, &bad).unwrap_or(false) {
                    accepted[2] += 1;
                }
            }
        }
    }
    let all: usize = mutations.iter().sum();
    let slipped: usize = accepted.iter().sum();
    Outcome {
        pass: normalized_bad == 0 && non_contiguous == 0 && slipped == 0 && all > 0,
        summary: format!(
            "certificates: {} oracle paths normalized, {normalized_bad} fail to verify, {non_contiguous} non-contiguous; \
             mutations rejected: count+1 {}/{}, swap {}/{}, wrong rule {}/{}",
            witnessed.len(),
            mutations[0] - accepted[0],
            mutations[0],
            mutations[1] - accepted[1],
            mutations[1],
            mutations[2] - accepted[2],
            mutations[2],
        ),
        transcript: String::new(),
    }
}

// ---------------------------------------------------------------------------
// Criterion 6

/// Labelled digraphs without loops on `n` nodes, one per class under
/// relabelling of the nodes other than those in `fixed`.
fn digraphs(n: usize, fixed: usize) -> Vec<Graph> {
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| arcs.iter().position(|&a| a == (u, v)).unwrap();
    let perms: Vec<Vec<usize>> = (fixed..n)
        .permutations(n.saturating_sub(fixed))
        .map(|p| (0..fixed.min(n)).chain(p).collect())
        .collect();
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| arcs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << arcs.len() {
        let canonical = maps.iter().all(|map| {
            let mut img = 0u32;
            for (a, &to) in map.iter().enumerate() {
                if mask >> a & 1 == 1 {
                    img |= 1 << to;
                }
            }
            img >= mask
        });
        if canonical {
            let edges = arcs.iter().enumerate().filter(|(a, _)| mask >> a & 1 == 1).map(|(_, &e)| e).collect();
            out.push(Graph::directed(n, edges).unwrap());
        }
    }
    out
}

fn undirected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(a, _)| mask >> a & 1 == 1).map(|(_, &e)| e).collect();
            Graph::undirected(n, edges).unwrap()
        })
        .collect()
}

fn all_cnfs() -> Vec<Cnf> {
    let mut out = Vec::new();
    for vars in 1..=3i32 {
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        for size in 1..=3usize {
            for vs in (1..=vars).combinations(size) {
                for signs in 0..1u32 << size {
                    clauses.push(vs.iter().enumerate().map(|(j, &v)| if signs >> j & 1 == 1 { -v } else { v }).collect());
                }
            }
        }
        for m in 0..=3usize {
            for pick in (0..clauses.len()).combinations_with_replacement(m) {
                out.push(Cnf::new(vars as usize, pick.iter().map(|&c| clauses[c].clone()).collect()).unwrap());
            }
        }
    }
    out
}

#[derive(Default)]
struct Tally {
    runs: usize,
    mismatches: usize,
    bounded: usize,
    yes: usize,
}

impl Tally {
    fn check(&mut self, problem: &SourceProblem, inst: &Instance) {
        let expect = reductions::solve_source(problem).unwrap();
        let got = oracle_bool(&bfs_reach_reduced(inst, &bounds()).unwrap());
        self.runs += 1;
        match got {
            None => self.bounded += 1,
            Some(b) if b != expect => self.mismatches += 1,
            Some(_) => {}
        }
        if expect {
            self.yes += 1;
        }
    }

    fn ok(&self) -> bool {
        self.mismatches == 0 && self.bounded == 0 && self.runs > 0
    }

    fn line(&self, label: &str) -> String {
        format!(
            "{label}: {} runs ({} yes), {} mismatches, {} bounded out",
            self.runs, self.yes, self.mismatches, self.bounded
        )
    }
}

fn criterion_6(transcript_only: bool) -> Outcome {
    let start = Instant::now();
    let mut transcript = String::new();
    let mut ham = Tally::default();
    for n in 2..=5 {
        for g in digraphs(n, 2) {
            let inst = reductions::hampath_to_icrn20(&g, 0, 1).unwrap();
            if transcript_only {
                writeln!(transcript, "{}", format::to_json(&inst)).unwrap();
                continue;
            }
            ham.check(&SourceProblem::HamPath { graph: g, s: 0, t: 1 }, &inst);
        }
        if transcript_only {
            break;
        }
    }
    let mut vc_p = Tally::default();
    let mut vc_i = Tally::default();
    for n in 1..=5 {
        for g in undirected_graphs(n) {
            for k in 1..=n {
                let problem = SourceProblem::VertexCover { graph: g.clone(), k };
                let a = reductions::vc_to_picrn(&g, k).unwrap();
                let b = reductions::vc_to_icrn_single_inhibitor(&g, k).unwrap();
                if transcript_only {
                    writeln!(transcript, "{}{}", format::to_json(&a), format::to_json(&b)).unwrap();
                    continue;
                }
                vc_p.check(&problem, &a);
                vc_i.check(&problem, &b);
            }
        }
        if transcript_only && n == 3 {
            break;
        }
    }
    let mut s21 = Tally::default();
    let mut s11 = Tally::default();
    let mut pad = Tally::default();
    let cnfs = all_cnfs();
    let ncnf = cnfs.len();
    for (i, cnf) in cnfs.into_iter().enumerate() {
        let a = reductions::sat3_to_icrn21(&cnf).unwrap();
        let b = reductions::sat3_to_icrn11(&cnf).unwrap();
        let c = reductions::pad_catalyst(&a, 3).unwrap();
        if transcript_only {
            if i % 97 == 0 {
                writeln!(transcript, "{}{}{}", format::to_json(&a), format::to_json(&b), format::to_json(&c)).unwrap();
            }
            continue;
        }
        let problem = SourceProblem::Sat(cnf);
        s21.check(&problem, &a);
        s11.check(&problem, &b);
        pad.check(&problem, &c);
    }
    let elapsed = start.elapsed();
    let tallies = [&ham, &vc_p, &vc_i, &s21, &s11, &pad];
    Outcome {
        pass: transcript_only || (tallies.iter().all(|t| t.ok()) && elapsed < Duration::from_secs(600)),
        summary: format!(
            "reduction soundness: {}; {}; {}; {} formulas: {}; {}; {}; {:.1} s (limit 600 s)",
            ham.line("hampath->(2,0) icrn, digraphs on 2..5 nodes up to relabelling"),
            vc_p.line("vc->picrn, all graphs on 1..5 nodes, all k"),
            vc_i.line("vc->single-inhibitor icrn"),
            ncnf,
            s21.line("3sat->(2,1) icrn"),
            s11.line("3sat->(1,1) icrn"),
            pad.line("3sat->(3,2) padded"),
            elapsed.as_secs_f64()
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 7

fn random_tm(rng: &mut ChaCha8Rng) -> TuringMachine {
    let q = rng.gen_range(3..=4usize);
    let names = ["s", "a", "r", "p"];
    let mut delta = std::collections::BTreeMap::new();
    for y in (0..q).filter(|&y| y != 1 && y != 2) {
        for bit in 0..2u8 {
            if rng.gen_bool(0.9) {
                let next = if rng.gen_bool(0.3) { y } else { rng.gen_range(0..q) };
                delta.insert(
                    (y, bit),
                    Transition {
                        next,
                        write: rng.gen_range(0..2),
                        dir: if rng.gen_bool(0.5) { 1 } else { -1 },
                    },
                );
            }
        }
    }
    let n = rng.gen_range(1..=3usize);
    TuringMachine {
        states: names[..q].iter().map(|s| s.to_string()).collect(),
        start: 0,
        accept: 1,
        reject: 2,
        delta,
        tape: (0..n).map(|_| rng.gen_range(0..2)).collect(),
        head: rng.gen_range(0..n),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7000);
    let mut machines = Vec::new();
    let (mut acc, mut rej) = (0, 0);
    while acc < 12 || rej < 12 {
        let tm = random_tm(&mut rng);
        match tm.run(50) {
            Ok((TmOutcome::Accept, _)) if acc < 12 => {
                acc += 1;
                machines.push((tm, true));
            }
            Ok((TmOutcome::Reject, _)) if rej < 12 => {
                rej += 1;
                machines.push((tm, false));
            }
            _ => {}
        }
    }
    let chosen = TmEncoding::default();
    let variants = [
        TmEncoding { head_guard: false, row5: reductions::Row5::Literal },
        TmEncoding { head_guard: false, row5: reductions::Row5::Complement },
        TmEncoding { head_guard: true, row5: reductions::Row5::Complement },
        chosen,
    ];
    let mut transcript = String::new();
    let mut report = Vec::new();
    let mut chosen_ok = false;
    for enc in variants {
        let mut wrong = 0;
        let mut bounded = 0;
        let mut self_loops_wrong = 0;
        for (i, (tm, accepts)) in machines.iter().enumerate() {
            let inst = reductions::tm_to_icrn11(tm, enc).unwrap();
            match oracle_bool(&bfs_reach_reduced(&inst, &bounds()).unwrap()) {
                None => bounded += 1,
                Some(b) if b != *accepts => {
                    wrong += 1;
                    if tm.delta.iter().any(|(&(y, _), t)| t.next == y) {
                        self_loops_wrong += 1;
                    }
                }
                Some(_) => {}
            }
            if enc == chosen {
                writeln!(transcript, "c7 {i} {accepts} {}", format::to_json(&inst).len()).unwrap();
            }
        }
        if enc == chosen {
            chosen_ok = wrong == 0 && bounded == 0;
        }
        report.push(format!(
            "{}: {wrong} wrong ({self_loops_wrong} with self-loops), {bounded} bounded out",
            enc.label()
        ));
    }
    Outcome {
        pass: chosen_ok && machines.len() >= 20,
        summary: format!(
            "TM encoding: {} machines ({acc} accept, {rej} reject, n <= 3, |Q| <= 4, halting within 50 steps); \
             resolution used for every machine: {}; variants [{}]",
            machines.len(),
            chosen.label(),
            report.join("; ")
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 8

fn has_arc(g: &Graph, u: usize, v: usize) -> bool {
    g.edges.contains(&(u, v))
}

/// Independent Hamiltonian path/cycle check by permutation enumeration.
fn ham_from(g: &Graph, s: usize, cycle: bool) -> (bool, bool) {
    let rest: Vec<usize> = (0..g.n).filter(|&v| v != s).collect();
    let mut any_path = false;
    let mut ok = false;
    for perm in rest.iter().copied().permutations(rest.len()) {
        let order: Vec<usize> = std::iter::once(s).chain(perm).collect();
        if order.windows(2).all(|w| has_arc(g, w[0], w[1])) {
            any_path = true;
            let last = *order.last().unwrap();
            let end_ok = if cycle { has_arc(g, last, s) } else { (0..g.n).any(|w| has_arc(g, last, w)) };
            ok |= end_ok;
        }
    }
    (ok, any_path)
}

fn two_gadget_network(second_init: usize) -> String {
    format!(
        "gadget g1 L2T 1\ngadget g2 L2T {second_init}\n\
         wire w0\nwire w1\nwire goal\nwire b1\nwire d1\nwire b2\nwire d2\n\
         connect g1.a w0\nconnect g1.c w1\nconnect g2.a w1\nconnect g2.c goal\n\
         connect g1.b b1\nconnect g1.d d1\nconnect g2.b b2\nconnect g2.d d2\n\
         start w0 0\ntarget goal\n"
    )
}

fn criterion_8() -> Outcome {
    let mut transcript = String::new();
    let mut graphs = Vec::new();
    for n in 1..=5 {
        graphs.extend(digraphs(n, 1));
    }
    // Small graphs with loops as well.
    for n in 1..=3usize {
        for mask in 0u32..1 << n {
            for g in digraphs(n, 1) {
                let mut edges = g.edges.clone();
                edges.extend((0..n).filter(|v| mask >> v & 1 == 1).map(|v| (v, v)));
                graphs.push(Graph::directed(n, edges).unwrap());
            }
        }
    }
    let mut any_mismatch = 0;
    let mut lit_vs_cycle = 0;
    let mut lit_vs_path = 0;
    let mut bounded = 0;
    for g in &graphs {
        let (path_ok, _) = ham_from(g, 0, false);
        let (cycle_ok, plain_path) = ham_from(g, 0, true);
        let any = states::hampath_to_states10(g, 0, Convention::AnyEndState).unwrap();
        let lit = states::hampath_to_states10(g, 0, Convention::PaperLiteral).unwrap();
        let a = oracle_bool(&bfs_reach(&any, &bounds()).unwrap());
        let l = oracle_bool(&bfs_reach(&lit, &bounds()).unwrap());
        let expect = reductions::solve_source(&SourceProblem::HamPathFrom {
            graph: g.clone(),
            s: 0,
            convention: Convention::AnyEndState,
        })
        .unwrap();
        if a.is_none() || l.is_none() {
            bounded += 1;
        }
        if a != Some(expect) || expect != path_ok {
            any_mismatch += 1;
        }
        if l == Some(cycle_ok) {
            lit_vs_cycle += 1;
        }
        if l == Some(plain_path) {
            lit_vs_path += 1;
        }
    }

    let open = states::parse_network(&two_gadget_network(1)).unwrap();
    let locked = states::parse_network(&two_gadget_network(3)).unwrap();
    let mut gadget_ok = true;
    for (net, expect) in [(&open, true), (&locked, false)] {
        let inst = states::gadget_rules(net).unwrap();
        gadget_ok &= classify(&inst).sizes == BTreeSet::from([(1, 1)]);
        let v = oracle_bool(&bfs_reach(&inst, &bounds()).unwrap());
        gadget_ok &= v == Some(expect) && states::solve_network(net).unwrap() == expect;
        writeln!(transcript, "c8 {}", format::to_json(&inst)).unwrap();
    }
    Outcome {
        pass: any_mismatch == 0 && bounded == 0 && lit_vs_cycle == graphs.len() && gadget_ok,
        summary: format!(
            "states: {} digraphs on 1..5 nodes (with loops up to 3 nodes); any-end-state convention vs Hamiltonian path: \
             {any_mismatch} mismatches; paper-literal convention equals Hamiltonian cycle through s on {lit_vs_cycle}/{} \
             and plain Hamiltonian path on {lit_vs_path}/{}; {bounded} bounded out; 2-gadget L2T networks \
             (open -> YES, locked -> NO): {}",
            graphs.len(),
            graphs.len(),
            graphs.len(),
            if gadget_ok { "correct" } else { "wrong" }
        ),
        transcript,
    }
}

// ---------------------------------------------------------------------------
// Criterion 9 and driver

fn criterion_9(first: &str) -> Outcome {
    let start = Instant::now();
    let second = deterministic_transcript();
    Outcome {
        pass: first == second,
        summary: format!(
            "determinism: second run of the deciders, reductions and serializers gives {} ({} bytes, {:.1} s)",
            if first == second { "an identical transcript" } else { "a different transcript" },
            first.len(),
            start.elapsed().as_secs_f64()
        ),
        transcript: String::new(),
    }
}

fn deterministic_transcript() -> String {
    let mut sink = Vec::new();
    let mut t = String::new();
    for o in [
        criterion_1(&mut sink),
        criterion_2(&mut sink),
        criterion_3(),
        criterion_6(true),
        criterion_7(),
        criterion_8(),
    ] {
        t.push_str(&o.transcript);
    }
    for w in &sink {
        writeln!(t, "{}", certificate::normalize(&w.inst, &w.path).unwrap()).unwrap();
        let d = dispatch::decide(&w.inst, dispatch::Decider::Auto, &bounds()).unwrap();
        writeln!(t, "{} {:?}", d.answer.label(), d.witness).unwrap();
    }
    t
}

fn main() -> ExitCode {
    let total_start = Instant::now();
    let mut witnessed = Vec::new();
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    let mut transcript = String::new();

    let c1 = criterion_1(&mut witnessed);
    let c2 = criterion_2(&mut witnessed);
    let c3 = criterion_3();
    transcript.push_str(&c1.transcript);
    transcript.push_str(&c2.transcript);
    transcript.push_str(&c3.transcript);
    results.push((1, c1));
    results.push((2, c2));
    results.push((3, c3));
    results.push((4, criterion_4()));
    results.push((5, criterion_5(&witnessed)));
    results.push((6, criterion_6(false)));
    transcript.push_str(&criterion_6(true).transcript);
    let c7 = criterion_7();
    let c8 = criterion_8();
    transcript.push_str(&c7.transcript);
    transcript.push_str(&c8.transcript);
    results.push((7, c7));
    results.push((8, c8));
    for w in &witnessed {
        writeln!(transcript, "{}", certificate::normalize(&w.inst, &w.path).unwrap()).unwrap();
        let d = dispatch::decide(&w.inst, dispatch::Decider::Auto, &bounds()).unwrap();
        writeln!(transcript, "{} {:?}", d.answer.label(), d.witness).unwrap();
    }
    results.push((9, criterion_9(&transcript)));

    let mut failed = 0;
    for (id, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {id}: {}", o.summary);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        results.len() - failed,
        results.len(),
        total_start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
