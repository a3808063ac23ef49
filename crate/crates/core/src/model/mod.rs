//! Domain types shared by every decider: species tables, configurations,
//! reactions and instances for the four supported dynamics.

mod dynamics;
mod profile;

pub use dynamics::{applicable, apply, enabled, fire, successors, Counts};
pub use profile::{classify, RuleProfile};

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Index of a species in its [`SpeciesTable`] (0-based).
pub type SpeciesId = usize;
/// Index of a reaction within an instance (0-based).
pub type ReactionId = usize;
/// Index of a global state of a CRN with states (0-based).
pub type StateId = usize;

/// Ordered, duplicate-free list of species names.
///
/// Positions matter: a priority `p` refers to the first `p` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesTable {
    names: Vec<String>,
    index: HashMap<String, SpeciesId>,
}

impl SpeciesTable {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidInstance(format!("duplicate species `{name}`")));
            }
        }
        Ok(SpeciesTable { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: SpeciesId) -> &str {
        &self.names[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<SpeciesId> {
        self.index.get(name).copied()
    }

    /// 1-based position of `name`, as used by priorities.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.id(name).map(|i| i + 1)
    }
}

/// Species counts, one arbitrary-precision entry per species.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration(Vec<BigUint>);

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration(vec![BigUint::zero(); len])
    }

    pub fn from_counts<I, C>(counts: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<BigUint>,
    {
        Configuration(counts.into_iter().map(Into::into).collect())
    }

    pub fn from_biguints(counts: Vec<BigUint>) -> Self {
        Configuration(counts)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, s: SpeciesId) -> &BigUint {
        &self.0[s]
    }

    pub fn set(&mut self, s: SpeciesId, value: BigUint) {
        self.0[s] = value;
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.0
    }

    pub fn volume(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// True when every count is zero.
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Species with a non-zero count.
    pub fn support(&self) -> Vec<SpeciesId> {
        (0..self.len()).filter(|&s| !self.0[s].is_zero()).collect()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Configuration) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise difference, `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Configuration) -> Option<Configuration> {
        if !other.le(self) {
            return None;
        }
        Some(Configuration(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    /// Counts as machine integers, when they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(ToPrimitive::to_u64).collect()
    }

    /// Largest single count.
    pub fn max_count(&self) -> BigUint {
        self.0.iter().max().cloned().unwrap_or_default()
    }

    /// Reorders coordinates: entry `i` of the result is entry `order[i]` of `self`.
    pub fn permuted(&self, order: &[SpeciesId]) -> Configuration {
        Configuration(order.iter().map(|&s| self.0[s].clone()).collect())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A configuration paired with an optional global state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateConfig {
    pub state: Option<StateId>,
    pub config: Configuration,
}

impl StateConfig {
    pub fn stateless(config: Configuration) -> Self {
        StateConfig { state: None, config }
    }
}

/// Which dynamics an instance follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Crn,
    Icrn,
    Picrn,
    CrnStates,
}

impl Model {
    pub fn tag(self) -> &'static str {
        match self {
            Model::Crn => "crn",
            Model::Icrn => "icrn",
            Model::Picrn => "picrn",
            Model::CrnStates => "crn_states",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Model> {
        match tag {
            "crn" => Some(Model::Crn),
            "icrn" => Some(Model::Icrn),
            "picrn" => Some(Model::Picrn),
            "crn_states" => Some(Model::CrnStates),
            _ => None,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A reaction `R -> P` with the inhibition data of every model.
///
/// Only the field matching the instance's [`Model`] is consulted by the
/// dynamics; [`Instance::validate`] rejects reactions that set the others.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reaction {
    pub reactants: Vec<u64>,
    pub products: Vec<u64>,
    /// Sorted, duplicate-free inhibitor species (iCRN).
    pub inhibitors: Vec<SpeciesId>,
    /// The first `priority` species must be absent (Priority iCRN).
    pub priority: usize,
    /// `(from, to)` global states (CRN with states).
    pub state_pair: Option<(StateId, StateId)>,
}

impl Reaction {
    pub fn new(reactants: Vec<u64>, products: Vec<u64>) -> Self {
        Reaction {
            reactants,
            products,
            inhibitors: Vec::new(),
            priority: 0,
            state_pair: None,
        }
    }

    /// Builds a reaction over `n` species from sparse `(species, count)` lists.
    pub fn from_sparse(n: usize, reactants: &[(SpeciesId, u64)], products: &[(SpeciesId, u64)]) -> Self {
        let mut r = vec![0; n];
        let mut p = vec![0; n];
        for &(s, c) in reactants {
            r[s] += c;
        }
        for &(s, c) in products {
            p[s] += c;
        }
        Reaction::new(r, p)
    }

    pub fn with_inhibitors(mut self, inhibitors: impl IntoIterator<Item = SpeciesId>) -> Self {
        let mut inh: Vec<SpeciesId> = inhibitors.into_iter().collect();
        inh.sort_unstable();
        inh.dedup();
        self.inhibitors = inh;
        self
    }

    pub fn with_priority(mut self, priority: usize) -> Self {
        self.priority = priority;
        self
    }

    pub fn with_states(mut self, from: StateId, to: StateId) -> Self {
        self.state_pair = Some((from, to));
        self
    }

    pub fn dim(&self) -> usize {
        self.reactants.len()
    }

    /// `(|R|, |P|)`.
    pub fn size(&self) -> (u64, u64) {
        (self.reactants.iter().sum(), self.products.iter().sum())
    }

    /// Never creates copies: `P <= R` componentwise.
    pub fn is_void(&self) -> bool {
        self.products.iter().zip(&self.reactants).all(|(p, r)| p <= r)
    }

    /// `P - R` per species.
    pub fn net_change(&self) -> Vec<i128> {
        self.products
            .iter()
            .zip(&self.reactants)
            .map(|(&p, &r)| p as i128 - r as i128)
            .collect()
    }

    /// Copies consumed and returned unchanged, `min(R, P)`.
    pub fn catalysts(&self) -> Vec<u64> {
        self.reactants
            .iter()
            .zip(&self.products)
            .map(|(&r, &p)| r.min(p))
            .collect()
    }

    /// For a void rule that lowers exactly one species by one copy, that species.
    pub fn reduced_species(&self) -> Option<SpeciesId> {
        let mut found = None;
        for (s, (&r, &p)) in self.reactants.iter().zip(&self.products).enumerate() {
            if p > r {
                return None;
            }
            match r - p {
                0 => {}
                1 if found.is_none() => found = Some(s),
                _ => return None,
            }
        }
        found
    }

    /// Species appearing among the reactants.
    pub fn reactant_species(&self) -> impl Iterator<Item = SpeciesId> + '_ {
        self.reactants
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, _)| s)
    }

    /// Priority iCRN: some reactant sits among the first `priority` species.
    pub fn is_self_inhibiting(&self) -> bool {
        self.reactant_species().any(|s| s < self.priority)
    }

    /// Exchanges species coordinates: entry `i` of the result is entry `order[i]`.
    /// Inhibitor ids are renamed accordingly.
    pub fn permuted(&self, order: &[SpeciesId]) -> Reaction {
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        Reaction {
            reactants: order.iter().map(|&s| self.reactants[s]).collect(),
            products: order.iter().map(|&s| self.products[s]).collect(),
            inhibitors: {
                let mut inh: Vec<_> = self.inhibitors.iter().map(|&s| inverse[s]).collect();
                inh.sort_unstable();
                inh
            },
            priority: self.priority,
            state_pair: self.state_pair,
        }
    }
}

/// Converts a VAS transition vector into a reaction: negative entries become
/// reactants, positive entries products.
pub fn vas_to_crn(y: &[i64]) -> Reaction {
    let reactants = y.iter().map(|&v| if v < 0 { v.unsigned_abs() } else { 0 }).collect();
    let products = y.iter().map(|&v| if v > 0 { v as u64 } else { 0 }).collect();
    Reaction::new(reactants, products)
}

/// A reachability query: network, source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub model: Model,
    pub species: SpeciesTable,
    pub reactions: Vec<Reaction>,
    /// State names; present iff `model == CrnStates`.
    pub states: Option<Vec<String>>,
    pub source: Configuration,
    pub target: Configuration,
    pub source_state: Option<StateId>,
    /// `None` for a CRN with states means the target accepts any state.
    pub target_state: Option<StateId>,
}

impl Instance {
    /// Builds a stateless instance and validates it.
    pub fn new(
        model: Model,
        species: SpeciesTable,
        reactions: Vec<Reaction>,
        source: Configuration,
        target: Configuration,
    ) -> Result<Self> {
        let inst = Instance {
            model,
            species,
            reactions,
            states: None,
            source,
            target,
            source_state: None,
            target_state: None,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds a CRN-with-states instance and validates it.
    pub fn with_states(
        species: SpeciesTable,
        states: Vec<String>,
        reactions: Vec<Reaction>,
        source: StateConfig,
        target: StateConfig,
    ) -> Result<Self> {
        let inst = Instance {
            model: Model::CrnStates,
            species,
            reactions,
            states: Some(states),
            source: source.config,
            target: target.config,
            source_state: source.state,
            target_state: target.state,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn dim(&self) -> usize {
        self.species.len()
    }

    pub fn source_marking(&self) -> StateConfig {
        StateConfig {
            state: self.source_state,
            config: self.source.clone(),
        }
    }

    /// Does `m` match the target (any state when the target leaves it open)?
    pub fn is_target(&self, m: &StateConfig) -> bool {
        m.config == self.target && (self.target_state.is_none() || m.state == self.target_state)
    }

    /// Every rule is deletion-only.
    pub fn all_void(&self) -> bool {
        self.reactions.iter().all(Reaction::is_void)
    }

    /// Returns a copy with a different rule list.
    pub fn with_reactions(&self, reactions: Vec<Reaction>) -> Instance {
        Instance {
            reactions,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        let check_dim = |found: usize| {
            if found != n {
                Err(Error::DimensionMismatch { expected: n, found })
            } else {
                Ok(())
            }
        };
        check_dim(self.source.len())?;
        check_dim(self.target.len())?;
        let n_states = match (&self.states, self.model) {
            (Some(states), Model::CrnStates) => {
                let mut seen = std::collections::HashSet::new();
                for s in states {
                    if !seen.insert(s) {
                        return Err(Error::InvalidInstance(format!("duplicate state `{s}`")));
                    }
                }
                states.len()
            }
            (None, Model::CrnStates) => {
                return Err(Error::InvalidInstance("crn_states instance without states".into()))
            }
            (Some(_), m) => {
                return Err(Error::InvalidInstance(format!("{m} instance must not declare states")))
            }
            (None, _) => 0,
        };
        match self.model {
            Model::CrnStates => match self.source_state {
                Some(q) if q < n_states => {}
                _ => return Err(Error::InvalidInstance("missing or unknown source state".into())),
            },
            _ => {
                if self.source_state.is_some() || self.target_state.is_some() {
                    return Err(Error::InvalidInstance(
                        "state fields are only allowed for crn_states".into(),
                    ));
                }
            }
        }
        if let Some(q) = self.target_state {
            if q >= n_states {
                return Err(Error::InvalidInstance("unknown target state".into()));
            }
        }
        for (i, rx) in self.reactions.iter().enumerate() {
            check_dim(rx.reactants.len())?;
            check_dim(rx.products.len())?;
            let bad = |what: &str| Err(Error::InvalidInstance(format!("reaction {i}: {what}")));
            if rx.inhibitors.iter().any(|&s| s >= n) {
                return bad("inhibitor out of range");
            }
            if rx.inhibitors.windows(2).any(|w| w[0] >= w[1]) {
                return bad("inhibitors must be sorted and unique");
            }
            match self.model {
                Model::Crn => {
                    if !rx.inhibitors.is_empty() || rx.priority != 0 || rx.state_pair.is_some() {
                        return bad("a plain CRN carries no inhibition");
                    }
                }
                Model::Icrn => {
                    if rx.priority != 0 || rx.state_pair.is_some() {
                        return bad("an iCRN reaction only carries inhibitors");
                    }
                }
                Model::Picrn => {
                    if !rx.inhibitors.is_empty() || rx.state_pair.is_some() {
                        return bad("a priority iCRN reaction only carries a priority");
                    }
                    if rx.priority > n {
                        return bad("priority exceeds the number of species");
                    }
                }
                Model::CrnStates => {
                    if !rx.inhibitors.is_empty() || rx.priority != 0 {
                        return bad("a stateful reaction only carries a state pair");
                    }
                    match rx.state_pair {
                        Some((a, b)) if a < n_states && b < n_states => {}
                        _ => return bad("missing or unknown state pair"),
                    }
                }
            }
        }
        Ok(())
    }
}
