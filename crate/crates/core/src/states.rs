//! CRNs with a global finite state: the Hamiltonian-path encoding with void
//! `(1,0)` rules and the `(1,1)` encodings of motion-planning gadgets.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Configuration, Instance, Reaction, SpeciesTable, StateConfig, StateId};
use crate::reductions::Graph;

/// Target state used by [`hampath_to_states10`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// The empty configuration back in the start state. Every copy is deleted
    /// by leaving its node, so this holds exactly for Hamiltonian cycles
    /// through `s`.
    PaperLiteral,
    /// The empty configuration in any state: a Hamiltonian path from `s`
    /// whose last node has some outgoing arc.
    AnyEndState,
}

impl Convention {
    pub fn label(self) -> &'static str {
        match self {
            Convention::PaperLiteral => "paper-literal",
            Convention::AnyEndState => "any-end-state",
        }
    }
}

/// One state and one species per node; the arc `k -> l` becomes the rule
/// that deletes `N_k` in state `q_k` and moves to `q_l`.
pub fn hampath_to_states10(graph: &Graph, s: usize, convention: Convention) -> Result<Instance> {
    let n = graph.n;
    if n == 0 {
        return Err(Error::InvalidSource("the graph is empty".into()));
    }
    if s >= n {
        return Err(Error::InvalidSource(format!("start node {} is not a vertex", s + 1)));
    }
    let species = SpeciesTable::new((1..=n).map(|i| format!("N{i}")))?;
    let states: Vec<String> = (1..=n).map(|i| format!("q{i}")).collect();
    let mut reactions = Vec::new();
    for &(k, l) in &graph.edges {
        let mut arcs = vec![(k, l)];
        if !graph.directed && k != l {
            arcs.push((l, k));
        }
        for (a, b) in arcs {
            reactions.push(Reaction::from_sparse(n, &[(a, 1)], &[]).with_states(a, b));
        }
    }
    let target_state = match convention {
        Convention::PaperLiteral => Some(s),
        Convention::AnyEndState => None,
    };
    Instance::with_states(
        species,
        states,
        reactions,
        StateConfig {
            state: Some(s),
            config: Configuration::from_counts(vec![1u64; n]),
        },
        StateConfig {
            state: target_state,
            config: Configuration::zeros(n),
        },
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetKind {
    /// Locking 2-toggle with ports `a, b, c, d`. State 1 is unlocked: `a -> c`
    /// leads to state 2 and `b -> d` to state 3. In state 2 only `c -> a` is
    /// open and in state 3 only `d -> b`, both returning to state 1.
    L2T,
    /// Turnstile with ports `0..4` and rotation states `1..=4`. In state `r`
    /// the agent may enter at port `r - 1`, leaves at the opposite port, and
    /// the turnstile advances to the next state.
    Rotor,
}

impl GadgetKind {
    pub fn ports(self) -> &'static [&'static str] {
        match self {
            GadgetKind::L2T => &["a", "b", "c", "d"],
            GadgetKind::Rotor => &["0", "1", "2", "3"],
        }
    }

    pub fn state_count(self) -> usize {
        match self {
            GadgetKind::L2T => 3,
            GadgetKind::Rotor => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetKind::L2T => "L2T",
            GadgetKind::Rotor => "ROTOR",
        }
    }

    /// Entering `port` in `state` (1-based) either passes through, giving the
    /// exit port and the new state, or bounces (`None`).
    pub fn traverse(self, state: usize, port: usize) -> Option<(usize, usize)> {
        match self {
            GadgetKind::L2T => match (state, port) {
                (1, 0) => Some((2, 2)),
                (1, 1) => Some((3, 3)),
                (2, 2) => Some((0, 1)),
                (3, 3) => Some((1, 1)),
                _ => None,
            },
            GadgetKind::Rotor => (port + 1 == state).then(|| ((port + 2) % 4, state % 4 + 1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub id: String,
    pub kind: GadgetKind,
    /// 1-based internal state.
    pub init: usize,
}

/// Gadgets joined by wires. A wire has two ends: the first `connect` line
/// naming it attaches end 0, the second attaches end 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetNetwork {
    pub gadgets: Vec<Gadget>,
    pub wires: Vec<String>,
    /// `ends[w][e]` is the `(gadget, port)` at end `e` of wire `w`.
    pub ends: Vec<[Option<(usize, usize)>; 2]>,
    /// Wire and the end the agent is heading toward.
    pub start: (usize, usize),
    pub target: usize,
}

impl GadgetNetwork {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSource(m));
        if self.ends.len() != self.wires.len() {
            return bad("every wire needs an end table".into());
        }
        if self.start.0 >= self.wires.len() || self.start.1 > 1 || self.target >= self.wires.len() {
            return bad("start and target must name wires".into());
        }
        let mut seen = HashSet::new();
        for (g, e) in self.ends.iter().flatten().flatten() {
            let Some(gadget) = self.gadgets.get(*g) else {
                return bad(format!("wire attached to unknown gadget {g}"));
            };
            if *e >= gadget.kind.ports().len() || !seen.insert((*g, *e)) {
                return bad(format!("port {}.{e} is wired twice or does not exist", gadget.id));
            }
        }
        for (g, gadget) in self.gadgets.iter().enumerate() {
            if gadget.init == 0 || gadget.init > gadget.kind.state_count() {
                return bad(format!("gadget {} has no state {}", gadget.id, gadget.init));
            }
            for (p, port) in gadget.kind.ports().iter().enumerate() {
                if !seen.contains(&(g, p)) {
                    return bad(format!("port {}.{port} is dangling", gadget.id));
                }
            }
        }
        Ok(())
    }

    /// Where the agent goes once it reaches end `e` of wire `w` with the given
    /// gadget states: the new heading and gadget update, or `None` when the end
    /// is free and the agent is stuck.
    fn arrive(&self, w: usize, e: usize, state: &[usize]) -> Option<((usize, usize), Option<(usize, usize)>)> {
        let (g, p) = self.ends[w][e]?;
        match self.gadgets[g].kind.traverse(state[g], p) {
            Some((exit, next)) => {
                let (w2, e2) = self.attachment(g, exit);
                Some(((w2, 1 - e2), Some((g, next))))
            }
            None => Some(((w, 1 - e), None)),
        }
    }

    fn attachment(&self, g: usize, p: usize) -> (usize, usize) {
        self.ends
            .iter()
            .enumerate()
            .find_map(|(w, ends)| (0..2).find(|&e| ends[e] == Some((g, p))).map(|e| (w, e)))
            .expect("validated networks wire every port")
    }
}

/// Reads `gadget <id> <kind> <init>`, `wire <id>`, `connect <gadget>.<port>
/// <wire>`, `start <wire> <dir>` and `target <wire>` lines. The direction is
/// the wire end the agent heads toward: `1` or `+` for end 1, `0` or `-` for
/// end 0.
pub fn parse_network(text: &str) -> Result<GadgetNetwork> {
    let mut gadgets: Vec<Gadget> = Vec::new();
    let mut wires: Vec<String> = Vec::new();
    let mut ends: Vec<[Option<(usize, usize)>; 2]> = Vec::new();
    let (mut start, mut target) = (None, None);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() || toks[0].starts_with('#') {
            continue;
        }
        let wire = |name: &str| {
            wires
                .iter()
                .position(|w| w == name)
                .ok_or_else(|| Error::parse(line, format!("unknown wire `{name}`")))
        };
        match (toks[0], toks.len()) {
            ("gadget", 4) => {
                if gadgets.iter().any(|g| g.id == toks[1]) {
                    return Err(Error::parse(line, format!("gadget `{}` defined twice", toks[1])));
                }
                let kind = match toks[2].to_ascii_uppercase().as_str() {
                    "L2T" => GadgetKind::L2T,
                    "ROTOR" => GadgetKind::Rotor,
                    other => return Err(Error::parse(line, format!("unknown gadget kind `{other}`"))),
                };
                let init = toks[3]
                    .parse()
                    .map_err(|_| Error::parse(line, format!("bad state `{}`", toks[3])))?;
                gadgets.push(Gadget {
                    id: toks[1].to_string(),
                    kind,
                    init,
                });
            }
            ("wire", 2) => {
                if wires.iter().any(|w| w == toks[1]) {
                    return Err(Error::parse(line, format!("wire `{}` defined twice", toks[1])));
                }
                wires.push(toks[1].to_string());
                ends.push([None, None]);
            }
            ("connect", 3) => {
                let (gid, port) = toks[1]
                    .split_once('.')
                    .ok_or_else(|| Error::parse(line, "expected `<gadget>.<port>`"))?;
                let g = gadgets
                    .iter()
                    .position(|x| x.id == gid)
                    .ok_or_else(|| Error::parse(line, format!("unknown gadget `{gid}`")))?;
                let p = gadgets[g]
                    .kind
                    .ports()
                    .iter()
                    .position(|&x| x == port)
                    .ok_or_else(|| Error::parse(line, format!("gadget `{gid}` has no port `{port}`")))?;
                let w = wire(toks[2])?;
                let slot = ends[w]
                    .iter_mut()
                    .find(|e| e.is_none())
                    .ok_or_else(|| Error::parse(line, format!("wire `{}` already has two ends", toks[2])))?;
                *slot = Some((g, p));
            }
            ("start", 3) => {
                let dir = match toks[2] {
                    "1" | "+" => 1,
                    "0" | "-" => 0,
                    other => return Err(Error::parse(line, format!("bad direction `{other}`"))),
                };
                start = Some((wire(toks[1])?, dir));
            }
            ("target", 2) => target = Some(wire(toks[1])?),
            (kw, _) => return Err(Error::parse(line, format!("malformed `{kw}` line"))),
        }
    }
    let net = GadgetNetwork {
        gadgets,
        wires,
        ends,
        start: start.ok_or_else(|| Error::parse(0, "missing `start` line"))?,
        target: target.ok_or_else(|| Error::parse(0, "missing `target` line"))?,
    };
    net.validate()?;
    Ok(net)
}

/// Global state of an agent heading toward end `e` of wire `w`; the target
/// wire has a single state.
fn agent_state(net: &GadgetNetwork, w: usize, e: usize) -> StateId {
    if w == net.target {
        return 2 * net.wires.len();
    }
    2 * w + e
}

/// Species `<id>^<state>` per gadget state plus `F`; states `<wire>><` per
/// heading plus one for the target wire. Rules cover every traversal and
/// bounce, and target-state rules turn each gadget species into `F`.
pub fn gadget_rules(net: &GadgetNetwork) -> Result<Instance> {
    net.validate()?;
    let mut names = Vec::new();
    let mut offset = Vec::new();
    for g in &net.gadgets {
        offset.push(names.len());
        names.extend((1..=g.kind.state_count()).map(|q| format!("{}^{q}", g.id)));
    }
    let f = names.len();
    names.push("F".into());
    let dim = names.len();
    let mut states = Vec::new();
    for w in &net.wires {
        states.push(format!("{w}<"));
        states.push(format!("{w}>"));
    }
    states.push(net.wires[net.target].clone());
    let qt = 2 * net.wires.len();

    let conv = |a: usize, b: usize| Reaction::from_sparse(dim, &[(a, 1)], &[(b, 1)]);
    let mut reactions = Vec::new();
    for w in (0..net.wires.len()).filter(|&w| w != net.target) {
        for e in 0..2 {
            let Some((g, p)) = net.ends[w][e] else { continue };
            let gadget = &net.gadgets[g];
            for q in 1..=gadget.kind.state_count() {
                let from = agent_state(net, w, e);
                let sp = offset[g] + q - 1;
                let rx = match gadget.kind.traverse(q, p) {
                    Some((exit, next)) => {
                        let (w2, e2) = net.attachment(g, exit);
                        conv(sp, offset[g] + next - 1).with_states(from, agent_state(net, w2, 1 - e2))
                    }
                    None => conv(sp, sp).with_states(from, agent_state(net, w, 1 - e)),
                };
                reactions.push(rx);
            }
        }
    }
    for sp in 0..f {
        reactions.push(conv(sp, f).with_states(qt, qt));
    }

    let mut source = vec![0u64; dim];
    for (g, gadget) in net.gadgets.iter().enumerate() {
        source[offset[g] + gadget.init - 1] = 1;
    }
    let mut target = vec![0u64; dim];
    target[f] = net.gadgets.len() as u64;
    let (sw, se) = net.start;
    Instance::with_states(
        SpeciesTable::new(names)?,
        states,
        reactions,
        StateConfig {
            state: Some(agent_state(net, sw, se)),
            config: Configuration::from_counts(source),
        },
        StateConfig {
            state: Some(qt),
            config: Configuration::from_counts(target),
        },
    )
}

/// Whether the agent can reach the target wire, by BFS over headings and
/// gadget states.
pub fn solve_network(net: &GadgetNetwork) -> Result<bool> {
    net.validate()?;
    let init: Vec<usize> = net.gadgets.iter().map(|g| g.init).collect();
    let first = (net.start, init);
    let mut seen = HashSet::from([first.clone()]);
    let mut queue = VecDeque::from([first]);
    while let Some(((w, e), state)) = queue.pop_front() {
        if w == net.target {
            return Ok(true);
        }
        let Some((heading, update)) = net.arrive(w, e, &state) else { continue };
        let mut next = state;
        if let Some((g, q)) = update {
            next[g] = q;
        }
        let node = (heading, next);
        if seen.insert(node.clone()) {
            queue.push_back(node);
        }
    }
    Ok(false)
}
