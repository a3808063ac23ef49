//! Block certificates for deletion-only systems: replay, normalization of raw
//! step sequences, and a bounded depth-first certificate search.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{enabled, Configuration, Instance, Model, Reaction, ReactionId};

/// A sequence of `(reaction, count)` blocks; each block fires one rule
/// `count` times in a row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Certificate {
    pub blocks: Vec<(ReactionId, BigUint)>,
}

impl Certificate {
    pub fn new(blocks: Vec<(ReactionId, BigUint)>) -> Self {
        Certificate { blocks }
    }

    pub fn empty() -> Self {
        Certificate::default()
    }

    pub fn push(&mut self, rule: ReactionId, count: impl Into<BigUint>) {
        self.blocks.push((rule, count.into()));
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    /// Each rule id occurs in at most one block.
    pub fn is_contiguous(&self) -> bool {
        let mut seen = HashSet::new();
        self.blocks.iter().all(|(r, _)| seen.insert(*r))
    }

    /// Total number of firings.
    pub fn total_steps(&self) -> BigUint {
        self.blocks.iter().map(|(_, m)| m).sum()
    }

    /// Renames rule ids through `map` (new id -> original id).
    pub fn remap(&self, map: &[ReactionId]) -> Certificate {
        Certificate {
            blocks: self.blocks.iter().map(|(r, m)| (map[*r], m.clone())).collect(),
        }
    }

    /// Parses newline-delimited `rule_id count` pairs. Blank lines and `#`
    /// comments are ignored.
    pub fn parse(text: &str) -> Result<Certificate> {
        let mut blocks = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(r), Some(m), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(i + 1, "expected `rule_id count`"));
            };
            let r: ReactionId = r.parse().map_err(|_| Error::parse(i + 1, "bad rule id"))?;
            let m: BigUint = m.parse().map_err(|_| Error::parse(i + 1, "bad count"))?;
            blocks.push((r, m));
        }
        Ok(Certificate { blocks })
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, m) in &self.blocks {
            writeln!(f, "{r} {m}")?;
        }
        Ok(())
    }
}

fn require_void(inst: &Instance) -> Result<()> {
    if inst.model == Model::CrnStates {
        return Err(Error::UnsupportedCertificate("systems with global states".into()));
    }
    if !inst.all_void() {
        return Err(Error::UnsupportedCertificate("the system has non-void rules".into()));
    }
    Ok(())
}

/// Largest `m` such that `rx` can fire `m` times in a row from `c`, ignoring
/// inhibition. Zero if it cannot fire at all. `None` means unbounded, which
/// only happens for rules with no net effect.
pub(crate) fn max_repeats(c: &Configuration, rx: &Reaction) -> Option<BigUint> {
    let mut best: Option<BigUint> = None;
    for (s, (&r, &p)) in rx.reactants.iter().zip(&rx.products).enumerate() {
        let have = c.get(s);
        if *have < BigUint::from(r) {
            return Some(BigUint::zero());
        }
        if r > p {
            let m = (have - BigUint::from(r)) / BigUint::from(r - p) + BigUint::one();
            best = Some(match best {
                Some(b) if b <= m => b,
                _ => m,
            });
        }
    }
    best
}

/// Applies the block `(rx, m)` to `c`, or `None` if it is infeasible.
pub(crate) fn apply_block(model: Model, c: &Configuration, rx: &Reaction, m: &BigUint) -> Option<Configuration> {
    if m.is_zero() || !enabled(model, c, None, rx) {
        return None;
    }
    if let Some(max) = max_repeats(c, rx) {
        if *m > max {
            return None;
        }
    }
    let mut next = c.clone();
    for (s, (&r, &p)) in rx.reactants.iter().zip(&rx.products).enumerate() {
        if r > p {
            next.set(s, c.get(s) - m * BigUint::from(r - p));
        }
    }
    Some(next)
}

/// Replays `cert` from the source. Returns the configuration reached, or the
/// index of the first infeasible block.
pub fn replay(inst: &Instance, cert: &Certificate) -> Result<std::result::Result<Configuration, usize>> {
    require_void(inst)?;
    let mut c = inst.source.clone();
    for (i, (r, m)) in cert.blocks.iter().enumerate() {
        let Some(rx) = inst.reactions.get(*r) else {
            return Ok(Err(i));
        };
        match apply_block(inst.model, &c, rx, m) {
            Some(next) => c = next,
            None => return Ok(Err(i)),
        }
    }
    Ok(Ok(c))
}

/// Accepts iff every block is feasible in turn and the replay ends at the target.
pub fn verify(inst: &Instance, cert: &Certificate) -> Result<bool> {
    Ok(matches!(replay(inst, cert)?, Ok(end) if end == inst.target))
}

/// Turns an applicable step sequence into a contiguous certificate with the
/// same endpoint.
///
/// Rules are grouped and the groups ordered by each rule's last occurrence.
/// This is the end point of repeatedly postponing an early occurrence of a
/// rule to just before its next one.
pub fn normalize(inst: &Instance, steps: &[ReactionId]) -> Result<Certificate> {
    require_void(inst)?;
    let mut c = inst.source.clone();
    for (pos, &r) in steps.iter().enumerate() {
        let rx = inst.reactions.get(r).ok_or(Error::Inapplicable { position: pos })?;
        c = apply_block(inst.model, &c, rx, &BigUint::one()).ok_or(Error::Inapplicable { position: pos })?;
    }
    let mut last = vec![None; inst.reactions.len()];
    let mut count = vec![0u64; inst.reactions.len()];
    for (pos, &r) in steps.iter().enumerate() {
        last[r] = Some(pos);
        count[r] += 1;
    }
    let mut order: Vec<ReactionId> = (0..inst.reactions.len()).filter(|&r| last[r].is_some()).collect();
    order.sort_by_key(|&r| last[r]);
    let cert = Certificate {
        blocks: order.into_iter().map(|r| (r, BigUint::from(count[r]))).collect(),
    };
    debug_assert_eq!(replay(inst, &cert)?, Ok(c));
    Ok(cert)
}

/// Bounds for [`search`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of blocks; `None` means one per rule.
    pub max_blocks: Option<usize>,
    /// Largest count tried for a single block.
    pub max_block_count: Option<BigUint>,
    /// Node budget for the whole search.
    pub max_nodes: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_blocks: None,
            max_block_count: None,
            max_nodes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Yes(Certificate),
    No,
    Inconclusive,
}

struct Searcher<'a> {
    inst: &'a Instance,
    limits: &'a SearchLimits,
    max_blocks: usize,
    nodes: u64,
    dead: HashSet<(Configuration, Vec<bool>)>,
    path: Vec<(ReactionId, BigUint)>,
}

enum Step {
    Found,
    Exhausted,
    Truncated,
    Aborted,
}

impl Searcher<'_> {
    fn dfs(&mut self, c: &Configuration, used: &mut Vec<bool>) -> Step {
        if *c == self.inst.target {
            return Step::Found;
        }
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Step::Aborted;
        }
        let key = (c.clone(), used.clone());
        if self.dead.contains(&key) {
            return Step::Exhausted;
        }
        let target = &self.inst.target;
        // Every species above target needs some unused rule that lowers it.
        for s in 0..c.len() {
            if c.get(s) > target.get(s)
                && !self
                    .inst
                    .reactions
                    .iter()
                    .enumerate()
                    .any(|(r, rx)| !used[r] && rx.reactants[s] > rx.products[s])
            {
                self.dead.insert(key);
                return Step::Exhausted;
            }
        }
        if self.path.len() >= self.max_blocks {
            return Step::Truncated;
        }
        let mut truncated = false;
        for r in 0..self.inst.reactions.len() {
            if used[r] {
                continue;
            }
            let rx = &self.inst.reactions[r];
            if !enabled(self.inst.model, c, None, rx) {
                continue;
            }
            let Some(mut m) = max_repeats(c, rx) else {
                continue;
            };
            for (s, (&a, &b)) in rx.reactants.iter().zip(&rx.products).enumerate() {
                if a > b {
                    let slack = (c.get(s) - target.get(s)) / BigUint::from(a - b);
                    if slack < m {
                        m = slack;
                    }
                }
            }
            if let Some(cap) = &self.limits.max_block_count {
                if m > *cap {
                    m = cap.clone();
                    truncated = true;
                }
            }
            used[r] = true;
            while !m.is_zero() {
                let next = apply_block(self.inst.model, c, rx, &m).expect("bounded block is feasible");
                self.path.push((r, m.clone()));
                match self.dfs(&next, used) {
                    Step::Found => return Step::Found,
                    Step::Aborted => return Step::Aborted,
                    Step::Truncated => truncated = true,
                    Step::Exhausted => {}
                }
                self.path.pop();
                m -= 1u32;
            }
            used[r] = false;
        }
        if truncated {
            Step::Truncated
        } else {
            self.dead.insert(key);
            Step::Exhausted
        }
    }
}

/// Depth-first search over contiguous certificates: unused rules in ascending
/// id, block counts from the largest feasible down to one.
pub fn search(inst: &Instance, limits: &SearchLimits) -> Result<SearchOutcome> {
    require_void(inst)?;
    if !inst.target.le(&inst.source) {
        return Ok(SearchOutcome::No);
    }
    let mut s = Searcher {
        inst,
        limits,
        max_blocks: limits.max_blocks.unwrap_or(inst.reactions.len()),
        nodes: 0,
        dead: HashSet::new(),
        path: Vec::new(),
    };
    let mut used = vec![false; inst.reactions.len()];
    let outcome = match s.dfs(&inst.source, &mut used) {
        Step::Found => SearchOutcome::Yes(Certificate { blocks: s.path }),
        Step::Exhausted => SearchOutcome::No,
        Step::Truncated | Step::Aborted => SearchOutcome::Inconclusive,
    };
    Ok(outcome)
}

/// Expands the blocks into single steps; `None` if a count does not fit a `usize`.
pub fn steps_of(cert: &Certificate) -> Option<Vec<ReactionId>> {
    let mut out = Vec::new();
    for (r, m) in &cert.blocks {
        let m = m.to_usize()?;
        out.extend(std::iter::repeat_n(*r, m));
    }
    Some(out)
}
