//! Polynomial-time deciders for deletion-only systems.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bmatching::{self, BEdge, BGraph};
use crate::certificate::{self, Certificate};
use crate::error::{Error, Result};
use crate::model::{classify, enabled, Configuration, Instance, Model, Reaction, ReactionId, SpeciesId};

/// Outcome of a decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub reachable: bool,
    /// Present iff `reachable`; always accepted by [`certificate::verify`].
    pub witness: Option<Certificate>,
    /// Rules dropped as permanently inhibited or self-inhibiting.
    pub pruned_rules: BTreeSet<ReactionId>,
}

impl Verdict {
    pub fn no(pruned_rules: BTreeSet<ReactionId>) -> Self {
        Verdict {
            reachable: false,
            witness: None,
            pruned_rules,
        }
    }

    pub fn yes(witness: Certificate, pruned_rules: BTreeSet<ReactionId>) -> Self {
        Verdict {
            reachable: true,
            witness: Some(witness),
            pruned_rules,
        }
    }

    /// Accepts `witness` only if it replays to the target.
    fn checked(inst: &Instance, witness: Certificate, pruned: BTreeSet<ReactionId>) -> Result<Self> {
        Ok(if certificate::verify(inst, &witness)? {
            Verdict::yes(witness, pruned)
        } else {
            Verdict::no(pruned)
        })
    }
}

fn require(inst: &Instance, models: &[Model], r: u64, p: u64, name: &str) -> Result<()> {
    if !models.contains(&inst.model) {
        return Err(Error::Dispatch(format!("{name} does not handle {} instances", inst.model)));
    }
    if !classify(inst).only(r, p) {
        return Err(Error::Dispatch(format!("{name} needs every rule to have size ({r},{p})")));
    }
    Ok(())
}

/// Need `C_s - C_t` per species, or `None` when the target exceeds the source somewhere.
fn deficit(inst: &Instance) -> Option<Configuration> {
    inst.source.checked_sub(&inst.target)
}

/// Rules whose priority covers a species that keeps copies at the target.
fn covered_by_target(inst: &Instance, rx: &Reaction) -> bool {
    (0..rx.priority.min(inst.dim())).any(|s| !inst.target.get(s).is_zero())
}

fn inhibited_by_target(inst: &Instance, rx: &Reaction) -> bool {
    rx.inhibitors.iter().any(|&s| !inst.target.get(s).is_zero())
}

/// Priority iCRN with `(1,0)` rules.
///
/// Rules covering a species that stays present are dropped; then each species
/// in ascending position is driven down to its target by the lowest-id rule
/// that deletes it and is not blocked by its own priority. Species already at
/// target are skipped. NO as soon as a species needs deletion and no rule does it.
pub fn decide_picrn_10(inst: &Instance) -> Result<Verdict> {
    require(inst, &[Model::Picrn], 1, 0, "the (1,0) priority decider")?;
    let pruned: BTreeSet<ReactionId> = (0..inst.reactions.len())
        .filter(|&r| covered_by_target(inst, &inst.reactions[r]))
        .collect();
    let Some(need) = deficit(inst) else {
        return Ok(Verdict::no(pruned));
    };
    let mut cert = Certificate::empty();
    for s in 0..inst.dim() {
        if need.get(s).is_zero() {
            continue;
        }
        let rule = (0..inst.reactions.len()).find(|&r| {
            let rx = &inst.reactions[r];
            !pruned.contains(&r) && rx.reactants[s] == 1 && rx.priority <= s
        });
        match rule {
            Some(r) => cert.push(r, need.get(s).clone()),
            None => return Ok(Verdict::no(pruned)),
        }
    }
    Verdict::checked(inst, cert, pruned)
}

/// An empty-target instance derived from a `(2,0)` query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyReduction {
    /// Source `C_s - C_t`, target zero, pruned rules removed.
    pub instance: Instance,
    /// Original id of each remaining rule.
    pub kept: Vec<ReactionId>,
    pub pruned: BTreeSet<ReactionId>,
}

/// Rewrites `C_s ⇝ C_t` as `C_s - C_t ⇝ 0`.
///
/// Dropped rules: those permanently blocked by a species that keeps copies at
/// the target, and those consuming a species with nothing left to delete.
/// Pruning repeats until nothing changes.
pub fn reduce_to_empty(inst: &Instance) -> Result<EmptyReduction> {
    require(inst, &[Model::Picrn, Model::Icrn], 2, 0, "the empty-target reduction")?;
    let need = deficit(inst)
        .ok_or_else(|| Error::Dispatch("target exceeds source; the answer is NO".into()))?;
    let mut pruned = BTreeSet::new();
    loop {
        let before = pruned.len();
        for (r, rx) in inst.reactions.iter().enumerate() {
            if pruned.contains(&r) {
                continue;
            }
            let blocked = match inst.model {
                Model::Picrn => covered_by_target(inst, rx),
                _ => inhibited_by_target(inst, rx),
            };
            let starved = rx
                .reactants
                .iter()
                .enumerate()
                .any(|(s, &c)| c > 0 && *need.get(s) < BigUint::from(c));
            if blocked || starved {
                pruned.insert(r);
            }
        }
        if pruned.len() == before {
            break;
        }
    }
    let kept: Vec<ReactionId> = (0..inst.reactions.len()).filter(|r| !pruned.contains(r)).collect();
    let mut instance = inst.with_reactions(kept.iter().map(|&r| inst.reactions[r].clone()).collect());
    instance.source = need;
    instance.target = Configuration::zeros(inst.dim());
    Ok(EmptyReduction { instance, kept, pruned })
}

/// Which rule an edge of the matching graph stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// `λ_i + λ_j -> ∅` with `i != j`.
    Hetero(ReactionId),
    /// Edge `v - v¹` of the gadget for `λ_i + λ_i -> ∅`; its value is the rule count.
    HomoFirst(ReactionId),
    /// Edge `v - v²`.
    HomoSecond(ReactionId),
    /// Edge `v¹ - v²`, absorbing unused gadget budget.
    HomoInner(ReactionId),
}

/// Matching graph of an empty-target `(2,0)` priority instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleGraph {
    pub graph: BGraph,
    pub origin: Vec<EdgeOrigin>,
}

/// Vertex per species with `b = C_s`, an edge per hetero rule and a
/// three-edge gadget per species with a homo rule. Self-inhibiting rules are
/// skipped; a species with several homo rules gets one gadget, for the
/// lowest-priority, lowest-id rule.
pub fn build_bmatching(inst: &Instance) -> Result<RuleGraph> {
    require(inst, &[Model::Picrn], 2, 0, "the b-matching construction")?;
    if !inst.target.is_zero() {
        return Err(Error::Dispatch("the b-matching construction needs an empty target".into()));
    }
    let b: Vec<u64> = inst
        .source
        .to_u64s()
        .ok_or_else(|| Error::SizeGuard("counts exceed 64 bits".into()))?;
    let n = b.len();
    let mut graph = BGraph::new(b);
    let mut origin = Vec::new();
    let mut homo: Vec<Option<ReactionId>> = vec![None; n];
    for (r, rx) in inst.reactions.iter().enumerate() {
        if rx.is_self_inhibiting() {
            continue;
        }
        let species: Vec<SpeciesId> = rx.reactant_species().collect();
        match species[..] {
            [i, j] => {
                graph.add_edge(BEdge::new(i, j).with_priority(rx.priority));
                origin.push(EdgeOrigin::Hetero(r));
            }
            [i] => {
                let better = homo[i].is_none_or(|q| rx.priority < inst.reactions[q].priority);
                if better {
                    homo[i] = Some(r);
                }
            }
            _ => unreachable!("(2,0) rules have one or two reactant species"),
        }
    }
    for (i, rule) in homo.into_iter().enumerate() {
        let Some(r) = rule else { continue };
        let p = inst.reactions[r].priority;
        let half = graph.b[i] / 2;
        let v1 = graph.add_vertex(half);
        let v2 = graph.add_vertex(half);
        graph.add_edge(BEdge::new(i, v1).with_priority(p));
        origin.push(EdgeOrigin::HomoFirst(r));
        graph.add_edge(BEdge::new(i, v2).with_priority(p));
        origin.push(EdgeOrigin::HomoSecond(r));
        graph.add_edge(BEdge::new(v1, v2).with_priority(p));
        origin.push(EdgeOrigin::HomoInner(r));
    }
    Ok(RuleGraph { graph, origin })
}

/// Turns a perfect b-matching into a certificate: per priority level
/// ascending, hetero rules then homo rules, each by ascending rule id.
pub fn schedule_from_matching(rg: &RuleGraph, f: &[u64], inst: &Instance) -> Result<Certificate> {
    if !rg.graph.is_feasible(f) || !bmatching::is_perfect(&rg.graph, f) {
        return Err(Error::ImperfectMatching);
    }
    let mut hetero = vec![0u64; inst.reactions.len()];
    let mut homo = vec![0u64; inst.reactions.len()];
    for (o, &x) in rg.origin.iter().zip(f) {
        match *o {
            EdgeOrigin::Hetero(r) => hetero[r] += x,
            EdgeOrigin::HomoFirst(r) => homo[r] += x,
            EdgeOrigin::HomoSecond(_) | EdgeOrigin::HomoInner(_) => {}
        }
    }
    let max_priority = inst.reactions.iter().map(|rx| rx.priority).max().unwrap_or(0);
    let mut cert = Certificate::empty();
    for p in 0..=max_priority {
        for counts in [&hetero, &homo] {
            for (r, &m) in counts.iter().enumerate() {
                if m > 0 && inst.reactions[r].priority == p {
                    cert.push(r, m);
                }
            }
        }
    }
    Ok(cert)
}

/// Priority iCRN with `(2,0)` rules, via perfect b-matching.
pub fn decide_picrn_20(inst: &Instance) -> Result<Verdict> {
    require(inst, &[Model::Picrn], 2, 0, "the (2,0) priority decider")?;
    if deficit(inst).is_none() {
        return Ok(Verdict::no(BTreeSet::new()));
    }
    let red = reduce_to_empty(inst)?;
    let rg = build_bmatching(&red.instance)?;
    let mut pruned = red.pruned.clone();
    for (r, rx) in red.instance.reactions.iter().enumerate() {
        if rx.is_self_inhibiting() {
            pruned.insert(red.kept[r]);
        }
    }
    let f = bmatching::max_bmatching(&rg.graph)?;
    if !bmatching::is_perfect(&rg.graph, &f) {
        return Ok(Verdict::no(pruned));
    }
    let cert = schedule_from_matching(&rg, &f, &red.instance)?.remap(&red.kept);
    Verdict::checked(inst, cert, pruned)
}

/// CRN or priority iCRN whose rules all have size `(k, k-1)` for one `k`.
///
/// Each rule lowers exactly one species by one copy, so some schedule handles
/// the species one at a time, each with a single rule applied `C_s - C_t`
/// times. The order is built from the back: at every step the highest-position
/// species that can be processed right before those already placed is chosen,
/// with unplaced species counted at their target and placed ones at their
/// source. The resulting schedule is replayed before answering YES.
pub fn decide_kk1(inst: &Instance) -> Result<Verdict> {
    if !matches!(inst.model, Model::Crn | Model::Picrn) {
        return Err(Error::Dispatch(format!("the (k,k-1) decider does not handle {} instances", inst.model)));
    }
    let profile = classify(inst);
    if profile.k_uniform.is_none() && !inst.reactions.is_empty() {
        let uniform_shape = profile.sizes.iter().all(|&(r, p)| r == p + 1);
        return Err(if uniform_shape && profile.all_void {
            Error::MixedK(format!("{:?}", profile.sizes))
        } else {
            Error::Dispatch("the (k,k-1) decider needs every rule to have size (k,k-1)".into())
        });
    }
    if !profile.all_void {
        return Err(Error::Dispatch("the (k,k-1) decider needs void rules".into()));
    }
    let pruned: BTreeSet<ReactionId> = (0..inst.reactions.len())
        .filter(|&r| inst.model == Model::Picrn && inst.reactions[r].is_self_inhibiting())
        .collect();
    let Some(need) = deficit(inst) else {
        return Ok(Verdict::no(pruned));
    };
    let n = inst.dim();
    let pending: Vec<SpeciesId> = (0..n).filter(|&s| !need.get(s).is_zero()).collect();
    let mut placed = vec![false; n];
    let mut order: Vec<(SpeciesId, ReactionId)> = Vec::new();
    for _ in 0..pending.len() {
        let count = |r: SpeciesId| -> &BigUint {
            if placed[r] {
                inst.source.get(r)
            } else {
                inst.target.get(r)
            }
        };
        let min_placed = (0..n).find(|&s| placed[s]).unwrap_or(n);
        let feasible = |s: SpeciesId, rx: &Reaction| -> bool {
            if rx.reduced_species() != Some(s) || BigUint::from(rx.products[s]) > *inst.target.get(s) {
                return false;
            }
            let catalysts_ok = (0..n)
                .filter(|&r| r != s)
                .all(|r| *count(r) >= BigUint::from(rx.reactants[r]));
            let priority_ok = inst.model != Model::Picrn
                || (rx.priority <= s
                    && rx.priority <= min_placed
                    && (0..rx.priority).all(|j| inst.target.get(j).is_zero()));
            catalysts_ok && priority_ok
        };
        let choice = pending.iter().rev().filter(|&&s| !placed[s]).find_map(|&s| {
            (0..inst.reactions.len())
                .find(|&r| !pruned.contains(&r) && feasible(s, &inst.reactions[r]))
                .map(|r| (s, r))
        });
        match choice {
            Some((s, r)) => {
                placed[s] = true;
                order.push((s, r));
            }
            None => return Ok(Verdict::no(pruned)),
        }
    }
    let cert = Certificate::new(order.iter().rev().map(|&(s, r)| (r, need.get(s).clone())).collect());
    Verdict::checked(inst, cert, pruned)
}

/// iCRN with `(1,0)` rules, greedy in ascending rule order.
pub fn decide_icrn_10(inst: &Instance) -> Result<Verdict> {
    let order: Vec<ReactionId> = (0..inst.reactions.len()).collect();
    decide_icrn_10_with_order(inst, &order)
}

/// Repeatedly fires any enabled rule whose species is above its target,
/// driving it straight to the target, until no rule applies. Rules are
/// scanned in `order`.
pub fn decide_icrn_10_with_order(inst: &Instance, order: &[ReactionId]) -> Result<Verdict> {
    require(inst, &[Model::Icrn], 1, 0, "the (1,0) inhibitor decider")?;
    let Some(_) = deficit(inst) else {
        return Ok(Verdict::no(BTreeSet::new()));
    };
    let mut c = inst.source.clone();
    let mut cert = Certificate::empty();
    loop {
        let mut progressed = false;
        for &r in order {
            let rx = &inst.reactions[r];
            let Some(s) = rx.reactant_species().next() else { continue };
            if c.get(s) > inst.target.get(s) && enabled(inst.model, &c, None, rx) {
                cert.push(r, c.get(s) - inst.target.get(s));
                c.set(s, inst.target.get(s).clone());
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }
    if c == inst.target {
        Verdict::checked(inst, cert, BTreeSet::new())
    } else {
        Ok(Verdict::no(BTreeSet::new()))
    }
}
