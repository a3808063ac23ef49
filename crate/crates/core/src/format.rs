//! Canonical JSON encoding of instances.
//!
//! Keys appear in a fixed order, zero counts are omitted, and counts above
//! `2^53 - 1` are written as decimal strings so that every JSON reader keeps
//! them exact. [`to_json`] followed by [`from_json`] is the identity, and
//! [`from_json`] followed by [`to_json`] is canonical.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{Configuration, Instance, Model, Reaction, SpeciesTable, StateConfig};

const MAX_SAFE: u64 = (1 << 53) - 1;

fn err(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn count_value(c: &BigUint) -> Value {
    match c.to_u64() {
        Some(x) if x <= MAX_SAFE => Value::from(x),
        _ => Value::from(c.to_string()),
    }
}

fn counts_map<'a>(species: &SpeciesTable, counts: impl Iterator<Item = (usize, &'a BigUint)>) -> Value {
    let mut m = Map::new();
    for (s, c) in counts.filter(|(_, c)| !c.is_zero()) {
        m.insert(species.name(s).to_string(), count_value(c));
    }
    Value::Object(m)
}

/// Pretty-printed canonical document with a trailing newline.
pub fn to_json(inst: &Instance) -> String {
    let state_name = |q: usize| Value::from(inst.states.as_ref().expect("stateful")[q].clone());
    let mut doc = Map::new();
    doc.insert("model".into(), Value::from(inst.model.tag()));
    doc.insert("species".into(), Value::from(inst.species.names().to_vec()));
    if let Some(states) = &inst.states {
        doc.insert("states".into(), Value::from(states.clone()));
    }
    let reactions: Vec<Value> = inst
        .reactions
        .iter()
        .map(|rx| {
            let big = |v: &[u64]| v.iter().map(|&x| BigUint::from(x)).collect::<Vec<_>>();
            let (r, p) = (big(&rx.reactants), big(&rx.products));
            let mut m = Map::new();
            m.insert("reactants".into(), counts_map(&inst.species, r.iter().enumerate()));
            m.insert("products".into(), counts_map(&inst.species, p.iter().enumerate()));
            let inh: Vec<String> = rx.inhibitors.iter().map(|&s| inst.species.name(s).to_string()).collect();
            m.insert("inhibitors".into(), Value::from(inh));
            m.insert("priority".into(), Value::from(rx.priority));
            if let Some((from, to)) = rx.state_pair {
                m.insert("from_state".into(), state_name(from));
                m.insert("to_state".into(), state_name(to));
            }
            Value::Object(m)
        })
        .collect();
    doc.insert("reactions".into(), Value::from(reactions));
    for (key, config, state) in [
        ("initial", &inst.source, inst.source_state),
        ("target", &inst.target, inst.target_state),
    ] {
        let mut m = Map::new();
        m.insert("counts".into(), counts_map(&inst.species, config.counts().iter().enumerate()));
        if let Some(q) = state {
            m.insert("state".into(), state_name(q));
        }
        doc.insert(key.into(), Value::Object(m));
    }
    let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("values serialize");
    out.push('\n');
    out
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(format!("{what} must be an object")))
}

fn check_keys(m: &Map<String, Value>, allowed: &[&str], what: &str) -> Result<()> {
    match m.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(err(format!("unknown key `{k}` in {what}"))),
        None => Ok(()),
    }
}

fn names(v: &Value, what: &str) -> Result<Vec<String>> {
    v.as_array()
        .ok_or_else(|| err(format!("{what} must be an array")))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| err(format!("{what} must hold strings"))))
        .collect()
}

fn parse_count(v: &Value, what: &str) -> Result<BigUint> {
    match v {
        Value::Number(n) => n
            .as_u64()
            .map(BigUint::from)
            .ok_or_else(|| err(format!("{what}: counts must be non-negative integers"))),
        Value::String(s) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => {
            Ok(s.parse().expect("digits parse"))
        }
        _ => Err(err(format!("{what}: counts must be integers or decimal strings"))),
    }
}

fn parse_counts(species: &SpeciesTable, v: Option<&Value>, what: &str) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::zero(); species.len()];
    let Some(v) = v else { return Ok(out) };
    for (name, c) in object(v, what)? {
        let s = species.id(name).ok_or_else(|| err(format!("{what}: unknown species `{name}`")))?;
        out[s] = parse_count(c, what)?;
    }
    Ok(out)
}

fn small(v: Vec<BigUint>, what: &str) -> Result<Vec<u64>> {
    v.iter()
        .map(|c| c.to_u64().ok_or_else(|| err(format!("{what}: stoichiometry exceeds 64 bits"))))
        .collect()
}

pub fn from_json(text: &str) -> Result<Instance> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let doc = object(&doc, "the document")?;
    check_keys(doc, &["model", "species", "states", "reactions", "initial", "target"], "the document")?;
    let tag = doc
        .get("model")
        .and_then(Value::as_str)
        .ok_or_else(|| err("`model` must be a string"))?;
    let model = Model::from_tag(tag).ok_or_else(|| err(format!("unknown model `{tag}`")))?;
    let species = SpeciesTable::new(names(doc.get("species").ok_or_else(|| err("missing `species`"))?, "species")?)?;
    let states = doc.get("states").map(|v| names(v, "states")).transpose()?;
    let state_id = |v: &Value, what: &str| -> Result<usize> {
        let name = v.as_str().ok_or_else(|| err(format!("{what} must be a state name")))?;
        states
            .as_ref()
            .and_then(|s| s.iter().position(|x| x == name))
            .ok_or_else(|| err(format!("{what}: unknown state `{name}`")))
    };

    let mut reactions = Vec::new();
    let empty = Vec::new();
    let listed = match doc.get("reactions") {
        None => &empty,
        Some(v) => v.as_array().ok_or_else(|| err("`reactions` must be an array"))?,
    };
    for (i, rv) in listed.iter().enumerate() {
        let what = format!("reaction {i}");
        let m = object(rv, &what)?;
        check_keys(
            m,
            &["reactants", "products", "inhibitors", "priority", "from_state", "to_state"],
            &what,
        )?;
        let reactants = small(parse_counts(&species, m.get("reactants"), &what)?, &what)?;
        let products = small(parse_counts(&species, m.get("products"), &what)?, &what)?;
        let mut rx = Reaction::new(reactants, products);
        if let Some(v) = m.get("inhibitors") {
            let ids = names(v, &what)?
                .iter()
                .map(|n| species.id(n).ok_or_else(|| err(format!("{what}: unknown inhibitor `{n}`"))))
                .collect::<Result<Vec<_>>>()?;
            rx = rx.with_inhibitors(ids);
        }
        if let Some(v) = m.get("priority") {
            let p = v.as_u64().ok_or_else(|| err(format!("{what}: priority must be a non-negative integer")))?;
            rx = rx.with_priority(p as usize);
        }
        match (m.get("from_state"), m.get("to_state")) {
            (None, None) => {}
            (Some(a), Some(b)) => rx = rx.with_states(state_id(a, &what)?, state_id(b, &what)?),
            _ => return Err(err(format!("{what}: from_state and to_state come together"))),
        }
        reactions.push(rx);
    }

    let mut ends = Vec::new();
    for key in ["initial", "target"] {
        let m = object(doc.get(key).ok_or_else(|| err(format!("missing `{key}`")))?, key)?;
        check_keys(m, &["counts", "state"], key)?;
        let config = Configuration::from_biguints(parse_counts(&species, m.get("counts"), key)?);
        let state = m.get("state").map(|v| state_id(v, key)).transpose()?;
        ends.push(StateConfig { state, config });
    }
    let target = ends.pop().expect("two ends");
    let source = ends.pop().expect("two ends");
    match (model, states) {
        (Model::CrnStates, Some(states)) => Instance::with_states(species, states, reactions, source, target),
        (Model::CrnStates, None) => Err(err("a CRN with states needs `states`")),
        (_, Some(_)) => Err(err("only crn_states instances carry `states`")),
        (_, None) => {
            if source.state.is_some() || target.state.is_some() {
                return Err(err("only crn_states instances carry a `state`"));
            }
            Instance::new(model, species, reactions, source.config, target.config)
        }
    }
}
