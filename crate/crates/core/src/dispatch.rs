//! Choosing and running a decider for an instance.

use crate::certificate::{self, Certificate, SearchLimits, SearchOutcome};
use crate::error::{Error, Result};
use crate::fpt;
use crate::model::{classify, Instance, Model, ReactionId};
use crate::oracle::{self, Bounds, OracleVerdict};
use crate::poly::{self, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decider {
    Auto,
    Picrn10,
    Picrn20,
    Kk1,
    Icrn10,
    Fpt20,
    FptKk1,
    Search,
    Oracle,
}

impl Decider {
    pub const ALL: [Decider; 9] = [
        Decider::Auto,
        Decider::Picrn10,
        Decider::Picrn20,
        Decider::Kk1,
        Decider::Icrn10,
        Decider::Fpt20,
        Decider::FptKk1,
        Decider::Search,
        Decider::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Decider::Auto => "auto",
            Decider::Picrn10 => "picrn10",
            Decider::Picrn20 => "picrn20",
            Decider::Kk1 => "kk1",
            Decider::Icrn10 => "icrn10",
            Decider::Fpt20 => "fpt20",
            Decider::FptKk1 => "fptkk1",
            Decider::Search => "search",
            Decider::Oracle => "oracle",
        }
    }

    pub fn from_name(name: &str) -> Option<Decider> {
        Decider::ALL.into_iter().find(|d| d.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    Inconclusive,
    BoundedOut,
}

impl Answer {
    pub fn label(self) -> &'static str {
        match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
            Answer::Inconclusive => "INCONCLUSIVE",
            Answer::BoundedOut => "BOUNDED_OUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Certificate(Certificate),
    /// Single steps, as found by the oracle.
    Path(Vec<ReactionId>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    /// The decider that produced the answer.
    pub decider: Decider,
    pub answer: Answer,
    pub witness: Option<Witness>,
    /// Extra facts worth printing, such as orderings tried.
    pub notes: Vec<String>,
}

/// The decider `auto` resolves to.
pub fn select(inst: &Instance) -> Decider {
    let p = classify(inst);
    if inst.model == Model::CrnStates || !p.all_void {
        return Decider::Oracle;
    }
    match inst.model {
        Model::Picrn if p.only(1, 0) => Decider::Picrn10,
        Model::Picrn if p.only(2, 0) => Decider::Picrn20,
        Model::Crn | Model::Picrn if p.k_uniform.is_some() => Decider::Kk1,
        Model::Icrn if p.only(1, 0) => Decider::Icrn10,
        Model::Icrn if p.only(2, 0) => Decider::Fpt20,
        Model::Icrn if p.k_uniform.is_some() => Decider::FptKk1,
        _ => Decider::Search,
    }
}

fn from_verdict(decider: Decider, v: Verdict) -> Decision {
    let mut notes = Vec::new();
    if !v.pruned_rules.is_empty() {
        notes.push(format!("pruned rules: {:?}", v.pruned_rules));
    }
    Decision {
        decider,
        answer: if v.reachable { Answer::Yes } else { Answer::No },
        witness: v.witness.map(Witness::Certificate),
        notes,
    }
}

fn from_fpt(decider: Decider, v: fpt::FptVerdict) -> Decision {
    let mut out = from_verdict(decider, v.verdict);
    out.notes.push(format!("orderings evaluated: {}", v.orderings_evaluated));
    if let Some(order) = v.ordering {
        out.notes.push(format!("inhibitor order: {order:?}"));
    }
    out
}

fn run_oracle(inst: &Instance, bounds: &Bounds) -> Result<Decision> {
    let r = oracle::bfs_reach(inst, bounds)?;
    Ok(Decision {
        decider: Decider::Oracle,
        answer: match r.verdict {
            OracleVerdict::Yes => Answer::Yes,
            OracleVerdict::No => Answer::No,
            OracleVerdict::BoundedOut => Answer::BoundedOut,
        },
        witness: r.path.map(Witness::Path),
        notes: vec![format!("configurations explored: {}", r.explored)],
    })
}

/// Runs `decider` (resolving `Auto` first). Explicit choices whose
/// preconditions fail return the decider's dispatch error.
pub fn decide(inst: &Instance, decider: Decider, bounds: &Bounds) -> Result<Decision> {
    let chosen = match decider {
        Decider::Auto => select(inst),
        d => d,
    };
    match chosen {
        Decider::Auto => unreachable!("auto is resolved above"),
        Decider::Picrn10 => Ok(from_verdict(chosen, poly::decide_picrn_10(inst)?)),
        Decider::Picrn20 => Ok(from_verdict(chosen, poly::decide_picrn_20(inst)?)),
        Decider::Kk1 => Ok(from_verdict(chosen, poly::decide_kk1(inst)?)),
        Decider::Icrn10 => Ok(from_verdict(chosen, poly::decide_icrn_10(inst)?)),
        Decider::Fpt20 => Ok(from_fpt(chosen, fpt::decide_icrn_20_fpt(inst)?)),
        Decider::FptKk1 => Ok(from_fpt(chosen, fpt::decide_icrn_kk1_fpt(inst)?)),
        Decider::Oracle => run_oracle(inst, bounds),
        Decider::Search => {
            let limits = SearchLimits::default();
            match certificate::search(inst, &limits)? {
                SearchOutcome::Yes(cert) => Ok(Decision {
                    decider: chosen,
                    answer: Answer::Yes,
                    witness: Some(Witness::Certificate(cert)),
                    notes: Vec::new(),
                }),
                SearchOutcome::No => Ok(Decision {
                    decider: chosen,
                    answer: Answer::No,
                    witness: None,
                    notes: Vec::new(),
                }),
                SearchOutcome::Inconclusive if decider == Decider::Auto => {
                    let mut out = run_oracle(inst, bounds)?;
                    out.notes.insert(0, "certificate search was inconclusive".into());
                    Ok(out)
                }
                SearchOutcome::Inconclusive => Ok(Decision {
                    decider: chosen,
                    answer: Answer::Inconclusive,
                    witness: None,
                    notes: Vec::new(),
                }),
            }
        }
    }
}

/// `Err` unless `inst` meets the preconditions of `decider`; used to check
/// that [`select`] never picks an inapplicable decider.
pub fn check_applicable(inst: &Instance, decider: Decider) -> Result<()> {
    let p = classify(inst);
    let ok = match decider {
        Decider::Auto | Decider::Oracle => true,
        Decider::Picrn10 => inst.model == Model::Picrn && p.only(1, 0),
        Decider::Picrn20 => inst.model == Model::Picrn && p.only(2, 0),
        Decider::Kk1 => {
            matches!(inst.model, Model::Crn | Model::Picrn)
                && p.all_void
                && (p.k_uniform.is_some() || inst.reactions.is_empty())
        }
        Decider::Icrn10 => inst.model == Model::Icrn && p.only(1, 0),
        Decider::Fpt20 => inst.model == Model::Icrn && p.only(2, 0),
        Decider::FptKk1 => {
            inst.model == Model::Icrn && p.all_void && (p.k_uniform.is_some() || inst.reactions.is_empty())
        }
        Decider::Search => inst.model != Model::CrnStates && p.all_void,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Dispatch(format!("{} does not apply to this instance", decider.name())))
    }
}
