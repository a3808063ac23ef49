//! iCRN deciders parameterized by the number of inhibitor species, by trying
//! every order in which the inhibitors could disappear.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Zero;

use crate::certificate;
use crate::error::{Error, Result};
use crate::model::{classify, Instance, Model, ReactionId, SpeciesId, SpeciesTable};
use crate::poly::{self, Verdict};

/// A priority instance obtained from an iCRN by fixing an inhibitor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ordered {
    pub instance: Instance,
    /// Original id of each species position in the new table.
    pub species_order: Vec<SpeciesId>,
    /// Original id of each remaining rule.
    pub kept: Vec<ReactionId>,
    pub removed: BTreeSet<ReactionId>,
}

/// Moves `ordering` to the front of the species table and turns each rule's
/// inhibitor set into a priority: the last position among its inhibitors.
/// Rules that would inhibit themselves are dropped.
pub fn order_inhibitors(inst: &Instance, ordering: &[SpeciesId]) -> Result<Ordered> {
    if inst.model != Model::Icrn {
        return Err(Error::Dispatch("inhibitor ordering needs an iCRN instance".into()));
    }
    let inhibitors = classify(inst).inhibitor_species;
    let given: BTreeSet<SpeciesId> = ordering.iter().copied().collect();
    if given.len() != ordering.len() || given != inhibitors {
        return Err(Error::InvalidOrdering(format!(
            "{ordering:?} is not a permutation of the inhibitors {inhibitors:?}"
        )));
    }
    let n = inst.dim();
    let mut species_order: Vec<SpeciesId> = ordering.to_vec();
    species_order.extend((0..n).filter(|s| !given.contains(s)));
    let mut position = vec![0; n];
    for (new, &old) in species_order.iter().enumerate() {
        position[old] = new;
    }
    let mut kept = Vec::new();
    let mut removed = BTreeSet::new();
    let mut reactions = Vec::new();
    for (r, rx) in inst.reactions.iter().enumerate() {
        let mut out = rx.permuted(&species_order);
        out.priority = rx.inhibitors.iter().map(|&s| position[s] + 1).max().unwrap_or(0);
        out.inhibitors.clear();
        if out.is_self_inhibiting() {
            removed.insert(r);
        } else {
            kept.push(r);
            reactions.push(out);
        }
    }
    let species = SpeciesTable::new(species_order.iter().map(|&s| inst.species.name(s).to_string()))?;
    let instance = Instance::new(
        Model::Picrn,
        species,
        reactions,
        inst.source.permuted(&species_order),
        inst.target.permuted(&species_order),
    )?;
    Ok(Ordered {
        instance,
        species_order,
        kept,
        removed,
    })
}

/// Verdict of an ordering-enumeration decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptVerdict {
    pub verdict: Verdict,
    /// Number of priority instances decided; at most `c!`.
    pub orderings_evaluated: usize,
    /// The first successful inhibitor order, in original species ids.
    pub ordering: Option<Vec<SpeciesId>>,
}

/// Inhibitors with no copies can never reappear, so they are placed first in
/// a fixed order and only the others are permuted, lexicographically.
fn run_orderings(
    original: &Instance,
    base: &Instance,
    base_kept: &[ReactionId],
    decide: fn(&Instance) -> Result<Verdict>,
) -> Result<FptVerdict> {
    let inhibitors = classify(base).inhibitor_species;
    let (absent, live): (Vec<SpeciesId>, Vec<SpeciesId>) =
        inhibitors.iter().partition(|&&s| base.source.get(s).is_zero());
    let mut evaluated = 0;
    for perm in live.iter().copied().permutations(live.len()) {
        let ordering: Vec<SpeciesId> = absent.iter().copied().chain(perm).collect();
        let ordered = order_inhibitors(base, &ordering)?;
        evaluated += 1;
        let v = decide(&ordered.instance)?;
        if let Some(cert) = v.witness.filter(|_| v.reachable) {
            let to_base: Vec<ReactionId> = ordered.kept.clone();
            let cert = cert.remap(&to_base).remap(base_kept);
            if certificate::verify(original, &cert)? {
                return Ok(FptVerdict {
                    verdict: Verdict::yes(cert, BTreeSet::new()),
                    orderings_evaluated: evaluated,
                    ordering: Some(ordering),
                });
            }
        }
    }
    Ok(FptVerdict {
        verdict: Verdict::no(BTreeSet::new()),
        orderings_evaluated: evaluated,
        ordering: None,
    })
}

fn not_reachable() -> FptVerdict {
    FptVerdict {
        verdict: Verdict::no(BTreeSet::new()),
        orderings_evaluated: 0,
        ordering: None,
    }
}

/// iCRN with `(2,0)` rules: empty-target reduction, then the `(2,0)` priority
/// decider under every inhibitor order.
pub fn decide_icrn_20_fpt(inst: &Instance) -> Result<FptVerdict> {
    if inst.model != Model::Icrn || !classify(inst).only(2, 0) {
        return Err(Error::Dispatch("the (2,0) ordering decider needs a (2,0) iCRN".into()));
    }
    if !inst.target.le(&inst.source) {
        return Ok(not_reachable());
    }
    let red = poly::reduce_to_empty(inst)?;
    let mut out = run_orderings(inst, &red.instance, &red.kept, poly::decide_picrn_20)?;
    out.verdict.pruned_rules = red.pruned;
    Ok(out)
}

/// iCRN with `(k,k-1)` rules: the `(k,k-1)` decider under every inhibitor order.
pub fn decide_icrn_kk1_fpt(inst: &Instance) -> Result<FptVerdict> {
    if inst.model != Model::Icrn {
        return Err(Error::Dispatch("the (k,k-1) ordering decider needs an iCRN".into()));
    }
    let profile = classify(inst);
    if profile.k_uniform.is_none() && !inst.reactions.is_empty() {
        return Err(if profile.all_void && profile.sizes.iter().all(|&(r, p)| r == p + 1) {
            Error::MixedK(format!("{:?}", profile.sizes))
        } else {
            Error::Dispatch("the (k,k-1) ordering decider needs (k,k-1) rules".into())
        });
    }
    if !inst.target.le(&inst.source) {
        return Ok(not_reachable());
    }
    let all: Vec<ReactionId> = (0..inst.reactions.len()).collect();
    run_orderings(inst, inst, &all, poly::decide_kk1)
}
