//! Plain-text readers for graphs, CNF formulas and Turing machines.
//!
//! All formats skip blank lines and lines starting with `c` (DIMACS) or `#`.

use std::collections::BTreeMap;

use super::{Cnf, Graph, Transition, TuringMachine};
use crate::error::{Error, Result};

/// A graph file with its optional designated endpoints (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub s: Option<usize>,
    pub t: Option<usize>,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        let skip = l.is_empty() || l.starts_with('#') || l == "c" || l.starts_with("c ");
        (!skip).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`")))
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v: usize = num(line, tok)?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} is outside 1..={n}")));
    }
    Ok(v - 1)
}

/// DIMACS-style graph: `p edge N M` or `p arc N M`, then `e u v` / `a u v`
/// lines, and optionally `s u` and `t v`. Vertices are 1-based in the file.
pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut header: Option<(bool, usize, usize)> = None;
    let mut edges = Vec::new();
    let (mut s, mut t) = (None, None);
    for (line, toks) in lines(text) {
        match (toks[0], header) {
            ("p", None) => {
                if toks.len() != 4 {
                    return Err(Error::parse(line, "expected `p edge|arc N M`"));
                }
                let directed = match toks[1] {
                    "edge" => false,
                    "arc" => true,
                    other => return Err(Error::parse(line, format!("unknown graph kind `{other}`"))),
                };
                header = Some((directed, num(line, toks[2])?, num(line, toks[3])?));
            }
            ("p", Some(_)) => return Err(Error::parse(line, "duplicate header")),
            (_, None) => return Err(Error::parse(line, "missing `p` header")),
            ("e" | "a", Some((directed, n, _))) => {
                if (toks[0] == "a") != directed {
                    return Err(Error::parse(line, "edge keyword does not match the header"));
                }
                if toks.len() != 3 {
                    return Err(Error::parse(line, "expected two endpoints"));
                }
                edges.push((vertex(line, toks[1], n)?, vertex(line, toks[2], n)?));
            }
            ("s" | "t", Some((_, n, _))) => {
                if toks.len() != 2 {
                    return Err(Error::parse(line, "expected one vertex"));
                }
                let v = Some(vertex(line, toks[1], n)?);
                if toks[0] == "s" {
                    s = v;
                } else {
                    t = v;
                }
            }
            (other, _) => return Err(Error::parse(line, format!("unknown line kind `{other}`"))),
        }
    }
    let Some((directed, n, m)) = header else {
        return Err(Error::parse(0, "missing `p` header"));
    };
    if edges.len() != m {
        return Err(Error::parse(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    Ok(GraphFile {
        graph: Graph::new(n, edges, directed)?,
        s,
        t,
    })
}

/// DIMACS CNF: `p cnf V C` followed by zero-terminated clauses.
pub fn parse_cnf(text: &str) -> Result<Cnf> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last = 0;
    for (line, toks) in lines(text) {
        last = line;
        if toks[0] == "p" {
            if header.is_some() || toks.len() != 4 || toks[1] != "cnf" {
                return Err(Error::parse(line, "expected a single `p cnf V C` header"));
            }
            header = Some((num(line, toks[2])?, num(line, toks[3])?));
            continue;
        }
        if toks[0] == "%" {
            break;
        }
        let Some((vars, _)) = header else {
            return Err(Error::parse(line, "missing `p cnf` header"));
        };
        for tok in toks {
            let l: i32 = num(line, tok)?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if l.unsigned_abs() as usize > vars {
                return Err(Error::parse(line, format!("literal {l} exceeds {vars} variables")));
            } else {
                current.push(l);
            }
        }
    }
    let Some((vars, count)) = header else {
        return Err(Error::parse(0, "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(Error::parse(last, "last clause is not terminated by 0"));
    }
    if clauses.len() != count {
        return Err(Error::parse(0, format!("header announces {count} clauses, found {}", clauses.len())));
    }
    Cnf::new(vars, clauses)
}

/// Line-based machine description:
///
/// ```text
/// start q0
/// accept qa
/// reject qr
/// tape 0110
/// head 1
/// q0 0 -> q1 1 R
/// ```
///
/// `head` is 1-based. Directions are `L`/`R` or `-1`/`+1`. States are
/// numbered in order of first mention.
pub fn parse_tm(text: &str) -> Result<TuringMachine> {
    let mut states: Vec<String> = Vec::new();
    let mut intern = |name: &str| match states.iter().position(|s| s == name) {
        Some(i) => i,
        None => {
            states.push(name.to_string());
            states.len() - 1
        }
    };
    let (mut start, mut accept, mut reject, mut tape, mut head) = (None, None, None, None, None);
    let mut delta = BTreeMap::new();
    for (line, toks) in lines(text) {
        let single = |toks: &[&str]| {
            if toks.len() == 2 {
                Ok(toks[1].to_string())
            } else {
                Err(Error::parse(line, format!("`{}` takes one argument", toks[0])))
            }
        };
        match toks[0] {
            "start" => start = Some(intern(&single(&toks)?)),
            "accept" => accept = Some(intern(&single(&toks)?)),
            "reject" => reject = Some(intern(&single(&toks)?)),
            "tape" => {
                let bits = single(&toks)?;
                let parsed: Option<Vec<u8>> = bits
                    .chars()
                    .map(|c| c.to_digit(2).map(|d| d as u8))
                    .collect();
                tape = Some(parsed.ok_or_else(|| Error::parse(line, "tape must be a 0/1 string"))?);
            }
            "head" => {
                let h: usize = num(line, &single(&toks)?)?;
                if h == 0 {
                    return Err(Error::parse(line, "head is 1-based"));
                }
                head = Some(h - 1);
            }
            _ => {
                if toks.len() != 6 || toks[2] != "->" {
                    return Err(Error::parse(line, "expected `state bit -> state bit dir`"));
                }
                let bit = |tok: &str| match tok {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    _ => Err(Error::parse(line, format!("`{tok}` is not a bit"))),
                };
                let dir = match toks[5] {
                    "L" | "-1" => -1,
                    "R" | "+1" | "1" => 1,
                    other => return Err(Error::parse(line, format!("`{other}` is not a direction"))),
                };
                let from = intern(toks[0]);
                let read = bit(toks[1])?;
                let tr = Transition {
                    next: intern(toks[3]),
                    write: bit(toks[4])?,
                    dir,
                };
                if delta.insert((from, read), tr).is_some() {
                    return Err(Error::parse(line, "transition defined twice"));
                }
            }
        }
    }
    let missing = |what: &str| Error::parse(0, format!("missing `{what}` line"));
    let tm = TuringMachine {
        start: start.ok_or_else(|| missing("start"))?,
        accept: accept.ok_or_else(|| missing("accept"))?,
        reject: reject.ok_or_else(|| missing("reject"))?,
        tape: tape.ok_or_else(|| missing("tape"))?,
        head: head.unwrap_or(0),
        states,
        delta,
    };
    tm.validate()?;
    Ok(tm)
}
