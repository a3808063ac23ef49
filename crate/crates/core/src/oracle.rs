//! Explicit-state breadth-first reachability for all four models.
//!
//! Configurations are stored packed into the narrowest integer cell that can
//! hold every count the search may produce.
//!
//! [`bfs_reach_reduced`] additionally applies a stubborn-set partial-order
//! reduction. It only expands a subset of the enabled rules at each
//! configuration, chosen so that every reachable terminal configuration stays
//! reachable, and is used only when the target enables no rule.

use std::hash::Hash;

use indexmap::map::Entry;
use indexmap::IndexMap;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rustc_hash::FxBuildHasher;

use crate::error::{Error, Result};
use crate::model::{enabled, fire, Configuration, Instance, Model, ReactionId, StateConfig};

/// Default state budget.
pub const DEFAULT_MAX_STATES: usize = 1_000_000;

/// Exploration limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub max_states: usize,
    /// Configurations above this volume are not explored. Required when some
    /// rule produces more copies than it consumes.
    pub max_volume: Option<u64>,
}

impl Default for Bounds {
    /// `max_states` comes from `ICRN_MAX_STATES` when set.
    fn default() -> Self {
        let max_states = std::env::var("ICRN_MAX_STATES")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_STATES);
        Bounds {
            max_states,
            max_volume: None,
        }
    }
}

impl Bounds {
    pub fn states(max_states: usize) -> Self {
        Bounds {
            max_states,
            max_volume: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleVerdict {
    Yes,
    No,
    BoundedOut,
}

impl OracleVerdict {
    pub fn label(self) -> &'static str {
        match self {
            OracleVerdict::Yes => "YES",
            OracleVerdict::No => "NO",
            OracleVerdict::BoundedOut => "BOUNDED_OUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub verdict: OracleVerdict,
    /// A shortest step sequence when the verdict is YES.
    pub path: Option<Vec<ReactionId>>,
    pub explored: usize,
}

/// All configurations reached, in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    pub markings: Vec<StateConfig>,
    /// False when a bound cut the exploration short.
    pub complete: bool,
}

trait Cell: Copy + Eq + Hash + TryFrom<u64> + Into<u64> {}
impl Cell for u8 {}
impl Cell for u16 {}
impl Cell for u32 {}
impl Cell for u64 {}

struct Explored {
    /// Packed markings in discovery order with `(parent, rule)`.
    parents: Vec<(usize, ReactionId)>,
    markings: Vec<Vec<u64>>,
    hit: Option<usize>,
    complete: bool,
}

/// Static rule interactions for the stubborn-set closure.
struct Stubborn {
    /// Rules whose firing can change something `t` reads, or that read
    /// something `t` changes.
    interfere: Vec<Vec<ReactionId>>,
    /// Rules with a net gain / net loss of each species.
    raisers: Vec<Vec<ReactionId>>,
    lowerers: Vec<Vec<ReactionId>>,
    /// Species that must be absent for each rule.
    absent: Vec<Vec<usize>>,
}

impl Stubborn {
    fn new(inst: &Instance) -> Self {
        let n = inst.dim();
        let absent: Vec<Vec<usize>> = inst
            .reactions
            .iter()
            .map(|rx| match inst.model {
                Model::Icrn => rx.inhibitors.clone(),
                Model::Picrn => (0..rx.priority.min(n)).collect(),
                _ => Vec::new(),
            })
            .collect();
        let reads: Vec<Vec<bool>> = inst
            .reactions
            .iter()
            .zip(&absent)
            .map(|(rx, abs)| {
                let mut v: Vec<bool> = rx.reactants.iter().map(|&r| r > 0).collect();
                for &s in abs {
                    v[s] = true;
                }
                v
            })
            .collect();
        let changes: Vec<Vec<bool>> = inst
            .reactions
            .iter()
            .map(|rx| rx.reactants.iter().zip(&rx.products).map(|(r, p)| r != p).collect())
            .collect();
        let m = inst.reactions.len();
        let touches = |a: usize, b: usize| (0..n).any(|s| changes[a][s] && reads[b][s]);
        let interfere = (0..m)
            .map(|t| (0..m).filter(|&u| u != t && (touches(u, t) || touches(t, u))).collect())
            .collect();
        let by_sign = |raise: bool| -> Vec<Vec<ReactionId>> {
            (0..n)
                .map(|s| {
                    (0..m)
                        .filter(|&r| {
                            let rx = &inst.reactions[r];
                            if raise {
                                rx.products[s] > rx.reactants[s]
                            } else {
                                rx.products[s] < rx.reactants[s]
                            }
                        })
                        .collect()
                })
                .collect()
        };
        Stubborn {
            interfere,
            raisers: by_sign(true),
            lowerers: by_sign(false),
            absent,
        }
    }

    /// Enabled rules of a stubborn set at `c`, smallest over all seeds.
    fn select(&self, inst: &Instance, c: &[u64], enabled: &[bool]) -> Vec<ReactionId> {
        let m = inst.reactions.len();
        let mut best: Option<Vec<ReactionId>> = None;
        let mut member = vec![false; m];
        for seed in (0..m).filter(|&t| enabled[t]) {
            member.iter_mut().for_each(|x| *x = false);
            member[seed] = true;
            let mut stack = vec![seed];
            let mut picked = Vec::new();
            while let Some(t) = stack.pop() {
                let more: &[ReactionId] = if enabled[t] {
                    picked.push(t);
                    &self.interfere[t]
                } else {
                    self.scapegoat(inst, c, t)
                };
                for &u in more {
                    if !member[u] {
                        member[u] = true;
                        stack.push(u);
                    }
                }
                if best.as_ref().is_some_and(|b| picked.len() >= b.len()) {
                    break;
                }
            }
            if best.as_ref().is_none_or(|b| picked.len() < b.len()) {
                picked.sort_unstable();
                let done = picked.len() == 1;
                best = Some(picked);
                if done {
                    break;
                }
            }
        }
        best.unwrap_or_default()
    }

    /// Rules that could enable the disabled rule `t`; the smallest such group.
    fn scapegoat(&self, inst: &Instance, c: &[u64], t: ReactionId) -> &[ReactionId] {
        let rx = &inst.reactions[t];
        let short = (0..c.len())
            .filter(|&s| c[s] < rx.reactants[s])
            .map(|s| &self.raisers[s]);
        let present = self.absent[t].iter().filter(|&&s| c[s] > 0).map(|&s| &self.lowerers[s]);
        short
            .chain(present)
            .min_by_key(|v| v.len())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

fn explore<T: Cell>(
    inst: &Instance,
    start: Vec<u64>,
    bounds: &Bounds,
    stop_at_target: bool,
    stubborn: Option<&Stubborn>,
) -> Explored {
    let n = inst.dim();
    let stateful = inst.model == Model::CrnStates;
    let target: Option<Vec<u64>> = inst.target.to_u64s();
    let pack = |v: &[u64]| -> Option<Box<[T]>> { v.iter().map(|&x| T::try_from(x).ok()).collect() };
    let is_target = |v: &[u64]| -> bool {
        match &target {
            Some(t) => {
                v[..n] == t[..]
                    && (!stateful || inst.target_state.is_none() || Some(v[n] as usize) == inst.target_state)
            }
            None => false,
        }
    };

    let mut seen: IndexMap<Box<[T]>, (usize, ReactionId), FxBuildHasher> = IndexMap::default();
    let mut out = Explored {
        parents: Vec::new(),
        markings: Vec::new(),
        hit: None,
        complete: true,
    };
    seen.insert(pack(&start).expect("cell width covers the source"), (usize::MAX, 0));
    if is_target(&start) {
        out.hit = Some(0);
        if stop_at_target {
            out.parents.push((usize::MAX, 0));
            return out;
        }
    }

    let mut head = 0;
    let mut current = vec![0u64; start.len()];
    'bfs: while head < seen.len() {
        for (dst, &c) in current.iter_mut().zip(seen.get_index(head).unwrap().0.iter()) {
            *dst = c.into();
        }
        let state = stateful.then(|| current[n] as usize);
        let on: Vec<bool> = inst
            .reactions
            .iter()
            .map(|rx| enabled(inst.model, &current[..n], state, rx))
            .collect();
        let chosen: Vec<ReactionId> = match stubborn {
            Some(st) => st.select(inst, &current[..n], &on),
            None => (0..on.len()).filter(|&r| on[r]).collect(),
        };
        for r in chosen {
            let rx = &inst.reactions[r];
            let Some(mut next) = fire(&current[..n], rx) else {
                out.complete = false;
                continue;
            };
            if let Some(limit) = bounds.max_volume {
                if next.iter().sum::<u64>() > limit {
                    out.complete = false;
                    continue;
                }
            }
            if let Some(q) = state {
                next.push(rx.state_pair.map_or(q, |(_, to)| to) as u64);
            }
            let Some(key) = pack(&next) else {
                out.complete = false;
                continue;
            };
            if let Entry::Vacant(v) = seen.entry(key) {
                let id = v.index();
                v.insert((head, r));
                if out.hit.is_none() && is_target(&next) {
                    out.hit = Some(id);
                    if stop_at_target {
                        break 'bfs;
                    }
                }
                if seen.len() > bounds.max_states {
                    out.complete = false;
                    break 'bfs;
                }
            }
        }
        head += 1;
    }
    if !stop_at_target {
        out.markings = seen.keys().map(|k| k.iter().map(|&c| c.into()).collect()).collect();
    }
    out.parents = seen.into_values().collect();
    out
}

/// Bound on any single count that the search can produce.
fn cell_bound(inst: &Instance, bounds: &Bounds) -> Result<u64> {
    let counts = inst
        .source
        .to_u64s()
        .ok_or_else(|| Error::SizeGuard("source counts exceed 64 bits".into()))?;
    let grows = inst.reactions.iter().any(|rx| {
        let (r, p) = rx.size();
        p > r
    });
    let volume = inst
        .source
        .volume()
        .to_u64()
        .ok_or_else(|| Error::SizeGuard("source volume exceeds 64 bits".into()))?;
    let mut bound = if grows {
        let limit = bounds.max_volume.ok_or_else(|| {
            Error::MissingBound("a rule creates copies, so max_volume is required".into())
        })?;
        limit.max(volume)
    } else if inst.all_void() {
        counts.iter().copied().max().unwrap_or(0)
    } else {
        volume
    };
    if let Some(states) = &inst.states {
        bound = bound.max(states.len() as u64);
    }
    Ok(bound)
}

fn run(inst: &Instance, bounds: &Bounds, stop_at_target: bool, stubborn: Option<&Stubborn>) -> Result<Explored> {
    let bound = cell_bound(inst, bounds)?;
    let mut start = inst.source.to_u64s().expect("checked by cell_bound");
    if inst.model == Model::CrnStates {
        start.push(inst.source_state.unwrap_or(0) as u64);
    }
    Ok(if bound <= u8::MAX as u64 {
        explore::<u8>(inst, start, bounds, stop_at_target, stubborn)
    } else if bound <= u16::MAX as u64 {
        explore::<u16>(inst, start, bounds, stop_at_target, stubborn)
    } else if bound <= u32::MAX as u64 {
        explore::<u32>(inst, start, bounds, stop_at_target, stubborn)
    } else {
        explore::<u64>(inst, start, bounds, stop_at_target, stubborn)
    })
}

/// Breadth-first search from the source towards the target.
pub fn bfs_reach(inst: &Instance, bounds: &Bounds) -> Result<OracleResult> {
    verdict_of(run(inst, bounds, true, None)?)
}

/// Whether [`bfs_reach_reduced`] can use the reduction: a stateless system
/// whose rules never grow the volume and whose target enables no rule.
pub fn reduction_applies(inst: &Instance) -> bool {
    inst.model != Model::CrnStates
        && inst.reactions.iter().all(|rx| rx.size().1 <= rx.size().0)
        && !inst.reactions.iter().any(|rx| enabled(inst.model, &inst.target, None, rx))
}

/// [`bfs_reach`] with the partial-order reduction when
/// [`reduction_applies`], and plain otherwise. The verdict is the same; the
/// path is valid but not necessarily shortest.
pub fn bfs_reach_reduced(inst: &Instance, bounds: &Bounds) -> Result<OracleResult> {
    if !reduction_applies(inst) {
        return bfs_reach(inst, bounds);
    }
    let st = Stubborn::new(inst);
    verdict_of(run(inst, bounds, true, Some(&st))?)
}

fn verdict_of(ex: Explored) -> Result<OracleResult> {
    let explored = ex.parents.len();
    if let Some(mut at) = ex.hit {
        let mut path = Vec::new();
        while at != 0 {
            let (parent, rule) = ex.parents[at];
            path.push(rule);
            at = parent;
        }
        path.reverse();
        return Ok(OracleResult {
            verdict: OracleVerdict::Yes,
            path: Some(path),
            explored,
        });
    }
    Ok(OracleResult {
        verdict: if ex.complete {
            OracleVerdict::No
        } else {
            OracleVerdict::BoundedOut
        },
        path: None,
        explored,
    })
}

/// Every marking reachable from the source within the bounds.
pub fn reach_set(inst: &Instance, bounds: &Bounds) -> Result<ReachSet> {
    let ex = run(inst, bounds, false, None)?;
    let n = inst.dim();
    let stateful = inst.model == Model::CrnStates;
    let markings = ex
        .markings
        .into_iter()
        .map(|v| StateConfig {
            state: stateful.then(|| v[n] as usize),
            config: Configuration::from_biguints(v[..n].iter().map(|&c| BigUint::from(c)).collect()),
        })
        .collect();
    Ok(ReachSet {
        markings,
        complete: ex.complete,
    })
}
