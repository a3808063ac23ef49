use num_bigint::BigUint;
use num_traits::Zero;

use super::{Configuration, Model, Reaction, StateConfig, StateId};
use crate::error::{Error, Result};

/// Read access to species counts, shared by big-integer configurations and
/// the machine-word vectors the oracle stores.
pub trait Counts {
    fn len(&self) -> usize;
    /// `count(s) >= n`.
    fn covers(&self, s: usize, n: u64) -> bool;
    fn is_absent(&self, s: usize) -> bool {
        !self.covers(s, 1)
    }
}

impl Counts for Configuration {
    fn len(&self) -> usize {
        Configuration::len(self)
    }
    fn covers(&self, s: usize, n: u64) -> bool {
        *self.get(s) >= BigUint::from(n)
    }
    fn is_absent(&self, s: usize) -> bool {
        self.get(s).is_zero()
    }
}

impl Counts for [u64] {
    fn len(&self) -> usize {
        <[u64]>::len(self)
    }
    fn covers(&self, s: usize, n: u64) -> bool {
        self[s] >= n
    }
}

/// The single point where the four dynamics differ. Assumes matching dimensions.
pub fn enabled<C: Counts + ?Sized>(model: Model, counts: &C, state: Option<StateId>, rx: &Reaction) -> bool {
    let inhibition_clear = match model {
        Model::Crn => true,
        Model::Icrn => rx.inhibitors.iter().all(|&s| counts.is_absent(s)),
        Model::Picrn => (0..rx.priority).all(|s| counts.is_absent(s)),
        Model::CrnStates => matches!((rx.state_pair, state), (Some((from, _)), Some(q)) if from == q),
    };
    inhibition_clear && rx.reactants.iter().enumerate().all(|(s, &r)| counts.covers(s, r))
}

fn check_dims(config: &Configuration, rx: &Reaction) -> Result<()> {
    if rx.dim() != config.len() || rx.products.len() != config.len() {
        return Err(Error::DimensionMismatch {
            expected: config.len(),
            found: rx.dim(),
        });
    }
    Ok(())
}

/// Whether `rx` can fire from `config` (in global state `state`, for CRNs with states).
pub fn applicable(model: Model, config: &Configuration, state: Option<StateId>, rx: &Reaction) -> Result<bool> {
    check_dims(config, rx)?;
    Ok(enabled(model, config, state, rx))
}

/// Fires `rx` once: returns `C - R + P` and the successor state.
pub fn apply(
    model: Model,
    config: &Configuration,
    state: Option<StateId>,
    rx: &Reaction,
) -> Result<(Configuration, Option<StateId>)> {
    if !applicable(model, config, state, rx)? {
        return Err(Error::NotApplicable { reaction: 0 });
    }
    let next = config
        .counts()
        .iter()
        .zip(rx.reactants.iter().zip(&rx.products))
        .map(|(c, (&r, &p))| c - BigUint::from(r) + BigUint::from(p))
        .collect();
    let next_state = match model {
        Model::CrnStates => rx.state_pair.map(|(_, to)| to),
        _ => state,
    };
    Ok((Configuration::from_biguints(next), next_state))
}

/// Word-sized counterpart of [`apply`] for callers that already checked
/// [`enabled`]. `None` on overflow.
pub fn fire(counts: &[u64], rx: &Reaction) -> Option<Vec<u64>> {
    counts
        .iter()
        .zip(rx.reactants.iter().zip(&rx.products))
        .map(|(&c, (&r, &p))| (c - r).checked_add(p))
        .collect()
}

/// All one-step successors, duplicates removed, in first-occurrence order.
pub fn successors(model: Model, marking: &StateConfig, reactions: &[Reaction]) -> Result<Vec<StateConfig>> {
    let mut out: Vec<StateConfig> = Vec::new();
    for rx in reactions {
        if applicable(model, &marking.config, marking.state, rx)? {
            let (config, state) = apply(model, &marking.config, marking.state, rx)?;
            let next = StateConfig { state, config };
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    Ok(out)
}
