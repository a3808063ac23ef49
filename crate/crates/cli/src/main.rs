//! `icrn`: classify, decide, verify and generate reachability instances.
//!
//! Exit status: 0 for YES or an accepted certificate, 1 for NO or a rejected
//! certificate, 2 for unreadable input, 3 for dispatch or bound failures and
//! inconclusive answers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use icrn_core::certificate::{self, Certificate};
use icrn_core::dispatch::{self, Answer, Decider, Witness};
use icrn_core::model::{classify, Instance, StateConfig};
use icrn_core::oracle::{self, Bounds};
use icrn_core::reductions::{self, Row5, TmEncoding};
use icrn_core::states::{self, Convention};
use icrn_core::{format, Error};

#[derive(Parser)]
#[command(name = "icrn", version, about = "Reachability for chemical reaction networks with inhibition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct BoundArgs {
    /// Oracle state budget (defaults to ICRN_MAX_STATES or 1000000).
    #[arg(long)]
    max_states: Option<usize>,
    /// Skip configurations above this volume; needed for rules that grow.
    #[arg(long)]
    max_volume: Option<u64>,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        let mut b = Bounds::default();
        if let Some(n) = self.max_states {
            b.max_states = n;
        }
        b.max_volume = self.max_volume;
        b
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the rule profile and the decider `auto` would use.
    Classify { file: PathBuf },
    /// Decide reachability from the initial to the target configuration.
    Decide {
        file: PathBuf,
        #[arg(long, default_value = "auto", value_parser = decider_names())]
        decider: String,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Write the certificate (or the oracle's step path) here on YES.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Check a block certificate against an instance.
    Verify {
        file: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Generate an instance from a source problem.
    Reduce {
        kind: ReduceKind,
        src: PathBuf,
        /// Cover size for `vc`.
        #[arg(short)]
        k: Option<usize>,
        /// Pad a `sat21` instance to `(k,k-1)` rules.
        #[arg(long)]
        pad: Option<u64>,
        /// `vc` only: emit the iCRN variant with a single inhibitor.
        #[arg(long)]
        single_inhibitor: bool,
        /// `tm` only: inhibitor set of the move-and-write rule.
        #[arg(long, value_enum, default_value = "literal")]
        row5: Row5Arg,
        /// `tm` only: drop the head-marker inhibitor on the state-change rule.
        #[arg(long)]
        no_head_guard: bool,
        /// `states-hampath` only: target-state convention.
        #[arg(long, value_enum, default_value = "any-end-state")]
        convention: ConventionArg,
        /// Output file (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the bounded explicit-state search.
    Oracle {
        file: PathBuf,
        /// Print every reachable configuration instead of a verdict.
        #[arg(long)]
        target_set: bool,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceKind {
    Vc,
    Hampath,
    Sat21,
    Sat11,
    Tm,
    StatesHampath,
    Gadgets,
}

#[derive(Clone, Copy, ValueEnum)]
enum Row5Arg {
    Literal,
    Complement,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    PaperLiteral,
    AnyEndState,
}

fn decider_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(Decider::ALL.map(Decider::name))
}

/// A failure with its exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Json(_) => 2,
            _ => 3,
        };
        Failure(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(3, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    format::from_json(&read(path)?).map_err(|e| match e {
        Error::Json(_) | Error::Parse { .. } => Failure::from(e),
        other => Failure(2, other.to_string()),
    })
}

fn marking(inst: &Instance, m: &StateConfig) -> String {
    let counts: Vec<String> = m
        .config
        .counts()
        .iter()
        .enumerate()
        .map(|(s, c)| format!("{}={c}", inst.species.name(s)))
        .collect();
    match (m.state, &inst.states) {
        (Some(q), Some(names)) => format!("[{}] {}", names[q], counts.join(" ")),
        _ => counts.join(" "),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { file } => {
            let inst = load(&file)?;
            let p = classify(&inst);
            let names = |set: &std::collections::BTreeSet<usize>| {
                set.iter().map(|&s| inst.species.name(s)).collect::<Vec<_>>().join(" ")
            };
            println!("model: {}", p.model);
            let sizes: Vec<String> = p.sizes.iter().map(|(r, q)| format!("({r},{q})")).collect();
            println!("sizes: {}", sizes.join(" "));
            println!("all_void: {}", p.all_void);
            println!("inhibitors: {} [{}]", p.c, names(&p.inhibitor_species));
            println!("max_inhibitors_per_rule: {}", p.max_inhibitors_per_rule);
            println!("max_priority: {}", p.max_priority);
            match p.k_uniform {
                Some(k) => println!("k_uniform: {k}"),
                None => println!("k_uniform: none"),
            }
            println!("auto: {}", dispatch::select(&inst).name());
            Ok(0)
        }
        Command::Decide {
            file,
            decider,
            bounds,
            witness,
        } => {
            let inst = load(&file)?;
            let choice = Decider::from_name(&decider).expect("clap checks the name");
            let d = dispatch::decide(&inst, choice, &bounds.bounds())?;
            println!("{}", d.answer.label());
            eprintln!("decider: {}", d.decider.name());
            for note in &d.notes {
                eprintln!("{note}");
            }
            if let (Some(path), Some(w)) = (witness, &d.witness) {
                let text = match w {
                    Witness::Certificate(c) => c.to_string(),
                    Witness::Path(steps) => steps.iter().map(|s| format!("{s}\n")).collect(),
                };
                write(&path, &text)?;
            }
            Ok(match d.answer {
                Answer::Yes => 0,
                Answer::No => 1,
                Answer::Inconclusive | Answer::BoundedOut => 3,
            })
        }
        Command::Verify { file, cert } => {
            let inst = load(&file)?;
            let cert = Certificate::parse(&read(&cert)?)?;
            if certificate::verify(&inst, &cert)? {
                println!("ACCEPTED");
                Ok(0)
            } else {
                println!("REJECTED");
                Ok(1)
            }
        }
        Command::Reduce {
            kind,
            src,
            k,
            pad,
            single_inhibitor,
            row5,
            no_head_guard,
            convention,
            output,
        } => {
            let text = read(&src)?;
            let inst = match kind {
                ReduceKind::Vc => {
                    let g = reductions::parse_graph(&text)?.graph;
                    let k = k.ok_or_else(|| Failure(2, "vc needs -k".into()))?;
                    if single_inhibitor {
                        reductions::vc_to_icrn_single_inhibitor(&g, k)?
                    } else {
                        reductions::vc_to_picrn(&g, k)?
                    }
                }
                ReduceKind::Hampath => {
                    let g = reductions::parse_graph(&text)?;
                    let (Some(s), Some(t)) = (g.s, g.t) else {
                        return Err(Failure(2, "hampath needs `s` and `t` lines".into()));
                    };
                    reductions::hampath_to_icrn20(&g.graph, s, t)?
                }
                ReduceKind::Sat21 => {
                    let inst = reductions::sat3_to_icrn21(&reductions::parse_cnf(&text)?)?;
                    match pad {
                        Some(k) => reductions::pad_catalyst(&inst, k)?,
                        None => inst,
                    }
                }
                ReduceKind::Sat11 => reductions::sat3_to_icrn11(&reductions::parse_cnf(&text)?)?,
                ReduceKind::Tm => {
                    let tm = reductions::parse_tm(&text)?;
                    let enc = TmEncoding {
                        row5: match row5 {
                            Row5Arg::Literal => Row5::Literal,
                            Row5Arg::Complement => Row5::Complement,
                        },
                        head_guard: !no_head_guard,
                    };
                    eprintln!("encoding: {}", enc.label());
                    reductions::tm_to_icrn11(&tm, enc)?
                }
                ReduceKind::StatesHampath => {
                    let g = reductions::parse_graph(&text)?;
                    let conv = match convention {
                        ConventionArg::PaperLiteral => Convention::PaperLiteral,
                        ConventionArg::AnyEndState => Convention::AnyEndState,
                    };
                    states::hampath_to_states10(&g.graph, g.s.unwrap_or(0), conv)?
                }
                ReduceKind::Gadgets => states::gadget_rules(&states::parse_network(&text)?)?,
            };
            let json = format::to_json(&inst);
            match output {
                Some(path) => write(&path, &json)?,
                None => print!("{json}"),
            }
            Ok(0)
        }
        Command::Oracle {
            file,
            target_set,
            bounds,
        } => {
            let inst = load(&file)?;
            let bounds = bounds.bounds();
            if target_set {
                let set = oracle::reach_set(&inst, &bounds)?;
                println!("complete: {}", set.complete);
                for m in &set.markings {
                    let mark = if inst.is_target(m) { " *" } else { "" };
                    println!("{}{mark}", marking(&inst, m));
                }
                return Ok(if set.complete { 0 } else { 3 });
            }
            let r = oracle::bfs_reach(&inst, &bounds)?;
            println!("{}", r.verdict.label());
            eprintln!("configurations explored: {}", r.explored);
            Ok(match r.verdict {
                oracle::OracleVerdict::Yes => 0,
                oracle::OracleVerdict::No => 1,
                oracle::OracleVerdict::BoundedOut => 3,
            })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
