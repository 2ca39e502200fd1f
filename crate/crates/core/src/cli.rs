//! Command-line front end. Reports are line-oriented `KEY: value` text.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::classifier::{decide_with, Verdict};
use crate::grammar::parse_spec;
use crate::group::ReductiveEmbedding;
use crate::modules::classify_module_with;
use crate::oracle::{build_rep, escalate, oracle_decide, OracleReport, OracleVerdict, Prime, DEFAULT_TRIALS};
use crate::partition::{hasse, hasse_on, natural_form, Composition};
use crate::sweep::{run_sweep, SweepConfig};
use crate::tables::TableSet;

pub const EXIT_SPHERICAL: i32 = 0;
pub const EXIT_NOT_SPHERICAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

pub const TABLES_ENV: &str = "FLAGSPHERE_TABLES";

#[derive(Debug, Parser)]
#[command(name = "flagsphere", about = "Sphericity of flag varieties under reductive subgroups of GL(V)")]
pub struct Cli {
    /// Emit a JSON dump after the text report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify Fl_a(V) from the tables.
    Decide {
        spec: String,
        #[arg(long)]
        a: Option<String>,
    },
    /// Classifier verdict checked against the rank oracle.
    Verify {
        spec: String,
        #[arg(long)]
        a: Option<String>,
        #[arg(long, default_value_t = DEFAULT_TRIALS, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "p61")]
        prime: Prime,
    },
    /// Hasse diagram of nil-equivalence classes of V-flag varieties in dimension d.
    Hasse {
        #[arg(value_parser = clap::value_parser!(u32).range(1..))]
        d: u32,
        /// Restrict to these compositions, e.g. `(1,5) (2,4)`.
        #[arg(long, num_args = 1..)]
        restrict: Vec<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Dump the table data (all, or one of simple|pair|flag|levi).
    Tables {
        #[arg(default_value = "all")]
        which: String,
    },
    /// Sphericity of V as a K-module.
    Module { spec: String },
    /// Classifier/oracle agreement over the configured embedding family.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        dmax: Option<u32>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

fn input_error(msg: impl std::fmt::Display) -> Outcome {
    Outcome { code: EXIT_INPUT, report: format!("ERROR: {msg}\n") }
}

fn load_tables() -> Result<TableSet, String> {
    match std::env::var_os(TABLES_ENV) {
        Some(p) => TableSet::from_path(std::path::Path::new(&p)).map_err(|e| e.to_string()),
        None => Ok(TableSet::builtin().clone()),
    }
}

fn embedding_and_a(spec: &str, a: &Option<String>) -> Result<(ReductiveEmbedding, Composition), String> {
    let (e, inline) = parse_spec(spec).map_err(|e| e.to_string())?;
    let a = match (a, inline) {
        (Some(s), _) => s.parse::<Composition>().map_err(|e| e.to_string())?,
        (None, Some(c)) => c,
        (None, None) => return Err("missing composition (use --a or `a=(...)`)".into()),
    };
    if a.d() as u64 != e.total_dimension() {
        return Err(format!("composition sums to {} but the module has dimension {}", a.d(), e.total_dimension()));
    }
    Ok((e, a))
}

fn verdict_word(spherical: bool) -> &'static str {
    if spherical {
        "SPHERICAL"
    } else {
        "NOT-SPHERICAL"
    }
}

fn write_verdict(out: &mut String, e: &ReductiveEmbedding, v: &Verdict) {
    let _ = writeln!(out, "EMBEDDING: {e}");
    let _ = writeln!(out, "A: {}", v.normalized_composition);
    let _ = writeln!(out, "VERDICT: {}", verdict_word(v.spherical));
    let _ = writeln!(out, "ROUTE: {}", v.route);
    for t in &v.trace {
        let _ = writeln!(out, "TRACE: {t}");
    }
}

fn oracle_word(r: &OracleReport) -> String {
    match r.verdict {
        OracleVerdict::SphericalCertified => "SphericalCertified".into(),
        OracleVerdict::NotSphericalProbable { trials } => format!("NotSphericalProbable(trials={trials})"),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Decide { spec, a } => {
            let tables = match load_tables() {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let (e, a) = match embedding_and_a(spec, a) {
                Ok(x) => x,
                Err(m) => return input_error(m),
            };
            let v = match decide_with(&tables, &e, &a) {
                Ok(v) => v,
                Err(err) => return input_error(err),
            };
            let mut out = String::new();
            write_verdict(&mut out, &e, &v);
            if cli.json {
                out.push_str(&serde_json::to_string_pretty(&v).expect("verdict serializes"));
                out.push('\n');
            }
            Outcome { code: if v.spherical { EXIT_SPHERICAL } else { EXIT_NOT_SPHERICAL }, report: out }
        }
        Command::Verify { spec, a, trials, seed, prime } => {
            let tables = match load_tables() {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let (e, a) = match embedding_and_a(spec, a) {
                Ok(x) => x,
                Err(m) => return input_error(m),
            };
            let v = match decide_with(&tables, &e, &a) {
                Ok(v) => v,
                Err(err) => return input_error(err),
            };
            let rep = match build_rep(&e) {
                Ok(r) => r,
                Err(err) => return input_error(err),
            };
            let mut report = match oracle_decide(&rep, &a, *trials, *seed, *prime) {
                Ok(r) => r,
                Err(err) => return input_error(err),
            };
            let mut out = String::new();
            write_verdict(&mut out, &e, &v);
            let _ = writeln!(out, "ORACLE: {}", oracle_word(&report));
            let _ = writeln!(out, "TRIALS: {trials} PRIME: {prime} SEED: {seed}");
            for (i, w) in report.witnesses.iter().enumerate() {
                let _ = writeln!(out, "WITNESS: trial={} seed={} prime={} rank={} target={}", i, w.seed, w.prime, w.rank, w.target);
            }
            if v.spherical && !report.verdict.spherical() {
                report = match escalate(&rep, &a, *seed) {
                    Ok(r) => r,
                    Err(err) => return input_error(err),
                };
                let _ = writeln!(out, "ESCALATED: {} max-rank={}", oracle_word(&report), report.max_rank());
            }
            let agree = v.spherical == report.verdict.spherical();
            let _ = writeln!(out, "{}", if agree { "AGREE" } else { "DISAGREE" });
            if cli.json {
                out.push_str(&serde_json::to_string_pretty(&(&v, &report)).expect("report serializes"));
                out.push('\n');
            }
            Outcome { code: if agree { EXIT_SPHERICAL } else { EXIT_DISAGREE }, report: out }
        }
        Command::Hasse { d, restrict, dot } => {
            let poset = if restrict.is_empty() {
                hasse(*d)
            } else {
                let mut nodes = Vec::new();
                for s in restrict {
                    let c: Composition = match s.parse() {
                        Ok(c) => c,
                        Err(err) => return input_error(format!("`{s}`: {err}")),
                    };
                    if c.d() != *d {
                        return input_error(format!("`{s}` is a composition of {}, not {d}", c.d()));
                    }
                    nodes.push(natural_form(&c));
                }
                hasse_on(*d, nodes)
            };
            let text = poset.to_dot();
            match dot {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Outcome { code: 0, report: format!("WROTE: {}\n", path.display()) },
                    Err(err) => input_error(format!("{}: {err}", path.display())),
                },
                None => Outcome { code: 0, report: text },
            }
        }
        Command::Tables { which } => {
            let tables = match load_tables() {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            match which.as_str() {
                "all" => Outcome { code: 0, report: tables.raw.clone() },
                "simple" | "pair" | "flag" | "levi" => Outcome { code: 0, report: section(&tables.raw, which) },
                other => input_error(format!("unknown table `{other}` (expected all|simple|pair|flag|levi)")),
            }
        }
        Command::Module { spec } => {
            let tables = match load_tables() {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let (e, _) = match parse_spec(spec) {
                Ok(x) => x,
                Err(err) => return input_error(err),
            };
            let mv = match classify_module_with(&tables, &e) {
                Ok(m) => m,
                Err(err) => return input_error(err),
            };
            let mut out = String::new();
            let _ = writeln!(out, "EMBEDDING: {e}");
            let _ = writeln!(out, "CANONICAL: {}", mv.canonical);
            let _ = writeln!(out, "VERDICT: {}", verdict_word(mv.spherical));
            let _ = writeln!(out, "BLOCKS: {}", mv.block_rows.join(" "));
            let _ = writeln!(
                out,
                "MULTISET: {}",
                mv.combined_multiset.iter().map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(" ")
            );
            for t in &mv.condition_trace {
                let _ = writeln!(out, "TRACE: {t}");
            }
            if cli.json {
                out.push_str(&serde_json::to_string_pretty(&mv).expect("verdict serializes"));
                out.push('\n');
            }
            Outcome { code: if mv.spherical { EXIT_SPHERICAL } else { EXIT_NOT_SPHERICAL }, report: out }
        }
        Command::Sweep { dmax, config } => {
            let tables = match load_tables() {
                Ok(t) => t,
                Err(e) => return input_error(e),
            };
            let mut cfg = match config {
                Some(p) => match SweepConfig::from_path(p) {
                    Ok(c) => c,
                    Err(err) => return input_error(err),
                },
                None => SweepConfig::builtin(),
            };
            if let Some(d) = dmax {
                cfg.dmax = *d;
            }
            match run_sweep(&cfg, &tables) {
                Ok(sum) => {
                    let mut out = sum.report();
                    if cli.json {
                        out.push_str(&serde_json::to_string_pretty(&sum).expect("summary serializes"));
                        out.push('\n');
                    }
                    Outcome { code: if sum.disagreements.is_empty() { 0 } else { EXIT_DISAGREE }, report: out }
                }
                Err(err) => input_error(err),
            }
        }
    }
}

/// The `[[which]]` row blocks of the table file, verbatim.
fn section(raw: &str, which: &str) -> String {
    let header = format!("[[{which}]]");
    let mut out = String::new();
    let mut on = false;
    for line in raw.lines() {
        let t = line.trim();
        if t.starts_with("[[") {
            on = t == header;
        }
        if on {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}
