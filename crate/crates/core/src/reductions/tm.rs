//! Bounded-tape Turing machines and their `(1,1)` iCRN encoding.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::model::{Configuration, Instance, Model, Reaction, SpeciesId, SpeciesTable};

/// `δ(q, bit) = (next, write, dir)` with `dir` in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: u8,
    pub dir: i8,
}

/// Deterministic machine over `{0,1}` on a tape of fixed length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub start: usize,
    pub accept: usize,
    pub reject: usize,
    pub delta: BTreeMap<(usize, u8), Transition>,
    pub tape: Vec<u8>,
    /// 0-based head cell.
    pub head: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TmOutcome {
    Accept,
    Reject,
    /// No transition is defined for the current state and symbol.
    Stuck,
    /// The head would leave the tape.
    FellOff,
    /// A configuration repeated.
    Loops,
}

impl TuringMachine {
    pub fn validate(&self) -> Result<()> {
        let q = self.states.len();
        let bad = |m: &str| Err(Error::InvalidSource(m.to_string()));
        if self.start >= q || self.accept >= q || self.reject >= q {
            return bad("start, accept and reject must be states");
        }
        if self.accept == self.reject {
            return bad("accept and reject must differ");
        }
        if self.tape.is_empty() || self.head >= self.tape.len() {
            return bad("the head must sit on a non-empty tape");
        }
        if self.tape.iter().any(|&b| b > 1) {
            return bad("the tape alphabet is {0,1}");
        }
        let distinct: HashSet<&String> = self.states.iter().collect();
        if distinct.len() != q {
            return bad("state names must be distinct");
        }
        for (&(y, v), tr) in &self.delta {
            if y >= q || tr.next >= q || v > 1 || tr.write > 1 || !matches!(tr.dir, -1 | 1) {
                return bad("malformed transition");
            }
            if y == self.accept || y == self.reject {
                return bad("halting states have no transitions");
            }
        }
        Ok(())
    }

    pub fn is_halting(&self, q: usize) -> bool {
        q == self.accept || q == self.reject
    }

    /// Direct simulation, with cycle detection, for at most `max_steps` steps.
    pub fn run(&self, max_steps: usize) -> Result<(TmOutcome, usize)> {
        self.validate()?;
        let (mut q, mut head, mut tape) = (self.start, self.head, self.tape.clone());
        let mut seen = HashSet::new();
        for step in 0..=max_steps {
            if q == self.accept {
                return Ok((TmOutcome::Accept, step));
            }
            if q == self.reject {
                return Ok((TmOutcome::Reject, step));
            }
            if !seen.insert((q, head, tape.clone())) {
                return Ok((TmOutcome::Loops, step));
            }
            let Some(tr) = self.delta.get(&(q, tape[head])) else {
                return Ok((TmOutcome::Stuck, step));
            };
            let next = head as i64 + tr.dir as i64;
            if next < 0 || next >= tape.len() as i64 {
                return Ok((TmOutcome::FellOff, step));
            }
            tape[head] = tr.write;
            head = next as usize;
            q = tr.next;
        }
        Err(Error::SizeGuard(format!("no verdict within {max_steps} steps")))
    }
}

/// How the inhibitor list of the move-and-write rule treats the intermediate
/// state species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Row5 {
    /// Inhibited by `Q_{zi}` itself: the state change must finish first.
    Literal,
    /// Inhibited by every other intermediate `Q_{z'i'}`.
    Complement,
}

/// Encoding switches for [`tm_to_icrn11`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmEncoding {
    pub row5: Row5,
    /// Also inhibit the state-change step by the head marker `x_i`. Without
    /// it, a transition back into the same state can fire its state change a
    /// second time after the head moved, leaving `D` with no state species and
    /// letting the halting clean-up run.
    pub head_guard: bool,
}

impl Default for TmEncoding {
    fn default() -> Self {
        TmEncoding {
            row5: Row5::Literal,
            head_guard: true,
        }
    }
}

impl TmEncoding {
    pub fn label(&self) -> String {
        format!(
            "row5={} head_guard={}",
            match self.row5 {
                Row5::Literal => "literal",
                Row5::Complement => "complement",
            },
            self.head_guard
        )
    }
}

struct Names {
    names: Vec<String>,
}

impl Names {
    fn add(&mut self, s: String) -> SpeciesId {
        self.names.push(s);
        self.names.len() - 1
    }
}

/// Encodes the machine as a volume-preserving iCRN that reaches all-`E`
/// exactly when the machine accepts.
///
/// Transitions that would move the head off the tape get no rules, so the
/// encoding stalls there, matching [`TmOutcome::FellOff`].
pub fn tm_to_icrn11(tm: &TuringMachine, enc: TmEncoding) -> Result<Instance> {
    tm.validate()?;
    let n = tm.tape.len();
    let nq = tm.states.len();
    let mut sp = Names { names: Vec::new() };
    let d = sp.add("D".into());
    let h = sp.add("H".into());
    let e = sp.add("E".into());
    let mut x = Vec::new();
    let mut bit = Vec::new();
    for i in 1..=n {
        x.push(sp.add(format!("x{i}")));
        let zero = sp.add(format!("0_{i}"));
        let one = sp.add(format!("1_{i}"));
        bit.push([zero, one]);
    }
    let q: Vec<SpeciesId> = tm.states.iter().map(|s| sp.add(format!("Q[{s}]"))).collect();
    let mut qv = vec![[0; 2]; nq * n];
    for (y, name) in tm.states.iter().enumerate() {
        for i in 0..n {
            let zero = sp.add(format!("Q[{name}]0_{}", i + 1));
            let one = sp.add(format!("Q[{name}]1_{}", i + 1));
            qv[y * n + i] = [zero, one];
        }
    }
    let mut qi = vec![0; nq * n];
    for (z, name) in tm.states.iter().enumerate() {
        for i in 0..n {
            qi[z * n + i] = sp.add(format!("Q[{name}]@{}", i + 1));
        }
    }
    let dim = sp.names.len();
    let all_qv: Vec<SpeciesId> = qv.iter().flatten().copied().collect();
    let halting = [q[tm.accept], q[tm.reject]];
    let conv = |a: SpeciesId, b: SpeciesId, inh: Vec<SpeciesId>| {
        Reaction::from_sparse(dim, &[(a, 1)], &[(b, 1)]).with_inhibitors(inh)
    };

    let mut reactions = Vec::new();
    // Read the cell under the head, combined with the state.
    for y in (0..nq).filter(|&y| !tm.is_halting(y)) {
        for i in 0..n {
            for v in [1u8, 0] {
                let mut inh: Vec<SpeciesId> = halting.to_vec();
                inh.extend((0..nq).filter(|&w| w != y).map(|w| q[w]));
                inh.push(x[i]);
                inh.push(bit[i][1 - v as usize]);
                reactions.push(conv(d, qv[y * n + i][v as usize], inh));
            }
        }
    }
    let non_halting: Vec<SpeciesId> = (0..nq).filter(|&y| !tm.is_halting(y)).map(|y| q[y]).collect();
    reactions.push(conv(d, e, non_halting));

    for (&(y, v), tr) in &tm.delta {
        for i in 0..n {
            let dest = i as i64 + tr.dir as i64;
            if dest < 0 || dest >= n as i64 {
                continue;
            }
            let dest = dest as usize;
            let read = qv[y * n + i][v as usize];
            let others: Vec<SpeciesId> = all_qv.iter().copied().filter(|&s| s != read).collect();
            let mid = qi[tr.next * n + i];

            let mut inh = vec![d, e];
            inh.extend(&others);
            if enc.head_guard {
                inh.push(x[i]);
            }
            reactions.push(conv(q[y], mid, inh));

            let mut inh = vec![e, bit[i][0], bit[i][1]];
            inh.extend(&others);
            match enc.row5 {
                Row5::Literal => inh.push(mid),
                Row5::Complement => inh.extend(qi.iter().copied().filter(|&s| s != mid)),
            }
            reactions.push(conv(x[dest], bit[i][tr.write as usize], inh));

            reactions.push(conv(read, d, vec![x[dest]]));
        }
    }
    // Consume the read cell into the head marker.
    for i in 0..n {
        for v in [1usize, 0] {
            let mut inh = vec![d, e, x[i]];
            inh.extend(&q);
            reactions.push(conv(bit[i][v], x[i], inh));
        }
    }
    // Complete the state change once the cell is consumed.
    for z in 0..nq {
        for i in 0..n {
            reactions.push(conv(qi[z * n + i], q[z], vec![bit[i][0], bit[i][1]]));
        }
    }
    let mut inh = vec![d];
    inh.extend(&all_qv);
    reactions.push(conv(h, e, inh));
    for s in (0..dim).filter(|&s| s != e && s != q[tm.reject]) {
        reactions.push(conv(s, e, vec![h]));
    }

    let mut source = vec![0u64; dim];
    for i in 0..n {
        source[bit[i][tm.tape[i] as usize]] = 1;
        if i != tm.head {
            source[x[i]] = 1;
        }
    }
    source[q[tm.start]] = 1;
    source[d] = 1;
    source[h] = 1;
    let volume: u64 = source.iter().sum();
    let mut target = vec![0u64; dim];
    target[e] = volume;
    Instance::new(
        Model::Icrn,
        SpeciesTable::new(sp.names)?,
        reactions,
        Configuration::from_counts(source),
        Configuration::from_counts(target),
    )
}
