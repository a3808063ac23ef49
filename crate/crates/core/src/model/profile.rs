use std::collections::BTreeSet;

use super::{Instance, Model, SpeciesId};

/// Rule-size and inhibition summary used to pick a decider.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleProfile {
    pub model: Model,
    /// Observed `(|R|, |P|)` pairs.
    pub sizes: BTreeSet<(u64, u64)>,
    pub all_void: bool,
    pub inhibitor_species: BTreeSet<SpeciesId>,
    /// Number of distinct inhibitor species (0 outside iCRNs).
    pub c: usize,
    pub max_priority: usize,
    /// `Some(k)` when every rule has size `(k, k-1)`.
    pub k_uniform: Option<u64>,
    pub max_inhibitors_per_rule: usize,
}

impl RuleProfile {
    /// Every rule has exactly size `(r, p)`; vacuously true for no rules.
    pub fn only(&self, r: u64, p: u64) -> bool {
        self.sizes.iter().all(|&s| s == (r, p))
    }
}

pub fn classify(inst: &Instance) -> RuleProfile {
    let sizes: BTreeSet<(u64, u64)> = inst.reactions.iter().map(|rx| rx.size()).collect();
    let inhibitor_species: BTreeSet<SpeciesId> = match inst.model {
        Model::Icrn => inst.reactions.iter().flat_map(|rx| rx.inhibitors.iter().copied()).collect(),
        _ => BTreeSet::new(),
    };
    let k_uniform = match sizes.iter().next() {
        Some(&(k, p)) if sizes.len() == 1 && k >= 1 && p + 1 == k => Some(k),
        _ => None,
    };
    RuleProfile {
        model: inst.model,
        all_void: inst.all_void(),
        c: inhibitor_species.len(),
        inhibitor_species,
        max_priority: inst.reactions.iter().map(|rx| rx.priority).max().unwrap_or(0),
        k_uniform,
        max_inhibitors_per_rule: inst.reactions.iter().map(|rx| rx.inhibitors.len()).max().unwrap_or(0),
        sizes,
    }
}
