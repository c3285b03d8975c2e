use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wgalaxy::enlargement::{Enlargement, HypernodeSpec, Verdict};
use wgalaxy::galaxy::{Closeness, Galaxies};
use wgalaxy::wdistance::{walk_length, Metric};
use wgalaxy::wgraph::catalog;
use wgalaxy::{verify, Error, Rank, WGraph};

#[derive(Parser)]
#[command(name = "wgalaxy", version, about = "Distances and galaxies of transfinite wgraphs")]
struct Cli {
    /// Window for slice expansion; certification compares W and W+1.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(2..))]
    window: u64,
    /// Line-oriented key=value output.
    #[arg(long, global = true)]
    machine: bool,
    /// Suite for `verify` (alternative to the positional name).
    #[arg(long, global = true)]
    suite: Option<String>,
    /// JSON presentation file; its families are addressable by name.
    #[arg(long, global = true)]
    family_file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in families.
    Catalog,
    /// Sections of one rank within the window.
    Sections { graph: String, rho: String },
    /// Distance between two wnodes.
    Dist { graph: String, x: String, y: String },
    /// A least walk between two wnodes.
    Walk { graph: String, x: String, y: String },
    /// Distance profile between two hypernodes.
    Hyperdist { graph: String, x: String, y: String },
    /// Partition hypernodes into galaxies of one rank.
    Classify {
        graph: String,
        rho: String,
        #[arg(required = true)]
        specs: Vec<String>,
    },
    /// Closeness order with its Hasse diagram.
    Order {
        graph: String,
        rho: String,
        #[arg(required = true)]
        specs: Vec<String>,
    },
    /// Ladder of 2K+1 galaxies around the galaxy of `v`.
    Ladder { graph: String, rho: String, x: String, v: String, k: usize },
    /// A hypernode outside the principal galaxy.
    Witness { graph: String, rho: String },
    /// Run invariant suites (default: all).
    Verify { suite: Option<String> },
}

enum Outcome {
    Done,
    Inconclusive,
    Failed,
}

/// Collects report lines in either output mode.
struct Out {
    machine: bool,
}

impl Out {
    fn kv(&self, pairs: &[(&str, &dyn Display)]) {
        if self.machine {
            let line: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={}", verify::machine_value(v))).collect();
            emit(&line.join(" "));
        } else {
            let line: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}: {v}")).collect();
            emit(&line.join(", "));
        }
    }
}

/// Writes one line; a closed pipe ends the process quietly.
fn emit(line: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{line}") {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("cannot write to stdout: {e}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Inconclusive) => ExitCode::from(2),
        Ok(Outcome::Failed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconclusive(_) | Error::Construction(_) | Error::Unreachable(..) => 2,
        Error::ModelViolation(_) => 3,
        _ => 1,
    }
}

fn load_graph(cli: &Cli, name: &str) -> Result<WGraph, Error> {
    if let Some(path) = &cli.family_file {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        let g = WGraph::from_json(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))?;
        if g.name() == name || name == "-" {
            return Ok(g);
        }
    }
    catalog::by_name(name)
}

fn parse_rank(text: &str) -> Result<Rank, Error> {
    text.parse::<Rank>().map_err(|_| Error::Usage(format!("cannot read rank `{text}`")))
}

fn parse_specs(gal: &Galaxies<'_>, texts: &[String]) -> Result<Vec<HypernodeSpec>, Error> {
    texts.iter().map(|t| gal.parse(t)).collect()
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let out = Out { machine: cli.machine };
    let w = cli.window;
    match &cli.command {
        Command::Catalog => {
            for name in catalog::names() {
                let g = catalog::by_name(name)?;
                out.kv(&[("family", &name), ("rank", &g.nu()), ("about", &catalog::describe(name).unwrap_or(""))]);
            }
            Ok(Outcome::Done)
        }
        Command::Sections { graph, rho } => {
            let g = load_graph(cli, graph)?;
            let rho = parse_rank(rho)?;
            for (i, s) in g.sections(rho, w)?.iter().enumerate() {
                out.kv(&[
                    ("section", &i),
                    ("rank", &rho),
                    ("representative", s.representative()),
                    ("wnodes", &s.nodes.len()),
                ]);
            }
            Ok(Outcome::Done)
        }
        Command::Dist { graph, x, y } => {
            let g = load_graph(cli, graph)?;
            let (x, y) = (g.node(x)?, g.node(y)?);
            let d = Metric::new(&g).wdist(&x, &y, w)?;
            if out.machine {
                out.kv(&[("distance", &d.value), ("certified", &d.certified), ("window", &d.window)]);
            } else {
                let cert = if d.certified { "certified" } else { "not certified" };
                emit(&format!("{} ({cert}, window={})", d.value, d.window));
            }
            Ok(if d.certified { Outcome::Done } else { Outcome::Inconclusive })
        }
        Command::Walk { graph, x, y } => {
            let g = load_graph(cli, graph)?;
            let (x, y) = (g.node(x)?, g.node(y)?);
            let walk = Metric::new(&g).shortest_walk(&x, &y, w, None)?;
            out.kv(&[("walk", &walk), ("length", &walk_length(&walk))]);
            Ok(Outcome::Done)
        }
        Command::Hyperdist { graph, x, y } => {
            let g = load_graph(cli, graph)?;
            let enl = Enlargement::new(&g);
            let (x, y) = (enl.parse(x)?, enl.parse(y)?);
            let p = enl.hyperdist(&x, &y, w)?;
            let fit = p.fit.as_ref().map(|f| f.to_string()).unwrap_or_else(|| "none".into());
            out.kv(&[("fit", &fit), ("certified", &p.certified()), ("window", &w)]);
            for n in 0..=w {
                let v = p.value(n).map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
                out.kv(&[("n", &n), ("distance", &v)]);
            }
            Ok(if p.fit.is_some() && p.certified() { Outcome::Done } else { Outcome::Inconclusive })
        }
        Command::Classify { graph, rho, specs } => {
            let g = load_graph(cli, graph)?;
            let gal = Galaxies::new(&g);
            let specs = parse_specs(&gal, specs)?;
            let part = gal.classify(&specs, parse_rank(rho)?, w)?;
            for (i, (id, members)) in part.blocks.iter().enumerate() {
                let list: Vec<String> = members.iter().map(|m| m.to_string()).collect();
                out.kv(&[("block", &i), ("galaxy", id), ("members", &list.join(" "))]);
            }
            for (a, b) in &part.inconclusive {
                out.kv(&[("inconclusive", &format!("{} {}", specs[*a], specs[*b]))]);
            }
            Ok(if part.inconclusive.is_empty() { Outcome::Done } else { Outcome::Inconclusive })
        }
        Command::Order { graph, rho, specs } => {
            let g = load_graph(cli, graph)?;
            let gal = Galaxies::new(&g);
            let specs = parse_specs(&gal, specs)?;
            let rep = gal.partial_order_check(&specs, parse_rank(rho)?, w)?;
            for (i, row) in rep.relation.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if i != j && *c != Closeness::NotCloser {
                        out.kv(&[("closer", &specs[i]), ("than", &specs[j]), ("verdict", c)]);
                    }
                }
            }
            for (a, b) in &rep.hasse {
                out.kv(&[("hasse", &format!("{} < {}", specs[*a], specs[*b]))]);
            }
            out.kv(&[("triples", &rep.triples_checked), ("skipped", &rep.triples_skipped)]);
            Ok(if rep.inconclusive_pairs().is_empty() { Outcome::Done } else { Outcome::Inconclusive })
        }
        Command::Ladder { graph, rho, x, v, k } => {
            let g = load_graph(cli, graph)?;
            let gal = Galaxies::new(&g);
            let (x, v) = (gal.parse(x)?, gal.parse(v)?);
            let rungs = gal.ladder(&x, &v, parse_rank(rho)?, *k, w)?;
            let mid = *k as i64;
            for (i, r) in rungs.iter().enumerate() {
                out.kv(&[("position", &(i as i64 - mid)), ("spec", r)]);
            }
            Ok(Outcome::Done)
        }
        Command::Witness { graph, rho } => {
            let g = load_graph(cli, graph)?;
            let wit = Galaxies::new(&g).non_principal_witness(parse_rank(rho)?, w)?;
            let m: Vec<String> = wit.walk.subsequence.iter().map(|i| wit.walk.nodes[*i].to_string()).collect();
            out.kv(&[("witness", &wit.spec), ("membership", &wit.membership), ("subsequence", &m.join(" "))]);
            Ok(match wit.membership.verdict {
                Verdict::Inconclusive => Outcome::Inconclusive,
                _ => Outcome::Done,
            })
        }
        Command::Verify { suite } => {
            let name = suite.as_deref().or(cli.suite.as_deref()).unwrap_or("all");
            let reports = verify::run(name, verify::DEFAULT_SEED)?;
            for r in &reports {
                if out.machine {
                    for line in r.machine_lines() {
                        emit(&line);
                    }
                } else {
                    emit(r.to_string().trim_end());
                }
            }
            Ok(if reports.iter().all(|r| r.passed()) { Outcome::Done } else { Outcome::Failed })
        }
    }
}
