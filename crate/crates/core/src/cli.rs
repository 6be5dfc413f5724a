//! Command-line front end. Every subcommand builds one serializable report;
//! `--json` prints it, otherwise a plain-text rendering of the same data.
//!
//! Exit status: 0 when everything checked passes, 1 for input errors, 2 when
//! a mathematical verification fails.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::VerificationReport;
use crate::coxeter::{flag_graph, DynkinSpec};
use crate::cw::{cw_kk_summary, skeleton_filtration};
use crate::graph::{AmpGraph, VertexId, VertexSet, DEFAULT_ENUMERATION_BOUND, MAX_ENUMERATION_BOUND};
use crate::io::{emit_graph, read_graph_file, to_pretty};
use crate::ktheory::{chain_k0, check_split_exact_k0, k_groups};
use crate::splitting::{build_splitting, kk_chain, policy_by_name, valid_stars, verify_split_exact, SplitData};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// Environment variable overriding the hereditary-set enumeration bound.
pub const MAX_VERTICES_ENV: &str = "CK_SPLIT_MAX_VERTICES";

#[derive(Debug, Parser)]
#[command(name = "cksplit", version, about = "Splittings and KK-chains for amplified graph C*-algebras")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sinks, sources, acyclicity and amplification.
    Classify { file: PathBuf },
    /// All hereditary subsets, or the hereditary closure of a set.
    Hereditary {
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        closure: Option<Vec<String>>,
    },
    /// Remove a hereditary set of vertices (`--remove ""` for none).
    Quotient {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        remove: Vec<String>,
    },
    /// Valid star vertices for a sink.
    Stars {
        file: PathBuf,
        #[arg(long)]
        sink: String,
    },
    /// Build the splitting for removing a sink.
    Split {
        file: PathBuf,
        #[arg(long)]
        sink: String,
        #[arg(long, conflicts_with = "embed")]
        star: Option<String>,
        /// Use the non-unital embedding instead of a star.
        #[arg(long)]
        embed: bool,
        /// Include the full verification checklist and K₀ checks.
        #[arg(long)]
        verify: bool,
    },
    /// Remove sinks until one vertex remains.
    Chain {
        file: PathBuf,
        /// first | last | source | embed
        #[arg(long, default_value = "first")]
        policy: String,
    },
    /// K-groups of an acyclic amplified graph.
    Ktheory { file: PathBuf },
    /// Flag-manifold graph of a tagged type-A diagram.
    Flag {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        tag: Vec<usize>,
    },
    /// Skeleton filtration and KK chain of a flag graph.
    Cw {
        #[arg(long)]
        rank: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        tag: Vec<usize>,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

macro_rules! lib {
    ($e:expr) => {
        $e.map_err(|e| Failure::Lib(Error::from(e)))
    };
}

/// Report plus its text rendering and whether all checks passed.
struct Report {
    json: String,
    text: String,
    passed: bool,
}

impl Report {
    fn new<T: Serialize>(value: &T, text: String) -> Self {
        Report { json: to_pretty(value), text, passed: true }
    }

    fn checked<T: Serialize>(value: &T, text: String, passed: bool) -> Self {
        Report { json: to_pretty(value), text, passed }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let (stdout, stderr) = if e.use_stderr() { (String::new(), text) } else { (text, String::new()) };
            return Outcome { stdout, stderr, code };
        }
    };
    match dispatch(&cli.command) {
        Ok(r) => Outcome {
            stdout: if cli.json { r.json } else { r.text },
            stderr: String::new(),
            code: if r.passed { EXIT_OK } else { EXIT_VERIFICATION },
        },
        Err(Failure::Input(msg)) => Outcome { stdout: String::new(), stderr: format!("error: {}\n", msg), code: EXIT_INPUT },
        Err(Failure::Lib(e)) => {
            let code = if e.is_verification_failure() { EXIT_VERIFICATION } else { EXIT_INPUT };
            Outcome { stdout: String::new(), stderr: format!("error: {}\n", e), code }
        }
    }
}

fn load(file: &Path) -> Result<AmpGraph, Failure> {
    lib!(read_graph_file(file))
}

fn enumeration_bound() -> Result<usize, Failure> {
    match std::env::var(MAX_VERTICES_ENV) {
        Err(_) => Ok(DEFAULT_ENUMERATION_BOUND),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n <= MAX_ENUMERATION_BOUND => Ok(n),
            _ => Err(Failure::Input(format!(
                "{} must be an integer in 0..={}, got {:?}",
                MAX_VERTICES_ENV, MAX_ENUMERATION_BOUND, v
            ))),
        },
    }
}

fn spec(rank: usize, tag: &[usize]) -> Result<DynkinSpec, Failure> {
    lib!(DynkinSpec::new(rank, tag))
}

fn join(set: &[VertexId]) -> String {
    set.iter().map(VertexId::as_str).collect::<Vec<_>>().join(" ")
}

fn set_text(set: &VertexSet) -> String {
    format!("{{{}}}", set.labels().join(", "))
}

fn graph_text(g: &AmpGraph) -> String {
    let mut s = format!("vertices: {}\n", join(g.vertices()));
    for (a, b, m) in g.families() {
        let mult = match m {
            crate::graph::Multiplicity::Finite(n) => n.to_string(),
            _ => "inf".to_string(),
        };
        s.push_str(&format!("  {} -> {} ({})\n", g.vertex(a), g.vertex(b), mult));
    }
    s
}

fn checks_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    for c in &r.checks {
        let status = match (c.passed, c.required) {
            (true, _) => "pass",
            (false, true) => "FAIL",
            (false, false) => "fail (not required)",
        };
        s.push_str(&format!("  {:<32} {}\n", c.name, status));
        if let Some(ce) = &c.counterexample {
            s.push_str(&format!("      {}\n", ce));
        }
    }
    s
}

fn image_rows(table: Vec<(String, String)>) -> Vec<Value> {
    table.into_iter().map(|(g, i)| json!({"generator": g, "image": i})).collect()
}

fn pairs(v: &[(VertexId, VertexId)]) -> Vec<[&str; 2]> {
    v.iter().map(|(a, b)| [a.as_str(), b.as_str()]).collect()
}

fn dispatch(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Classify { file } => {
            let g = load(file)?;
            let c = g.classify();
            let value = json!({
                "command": "classify",
                "vertices": g.n(),
                "families": g.family_count(),
                "amplified": c.amplified,
                "acyclic": c.acyclic,
                "sinks": c.sinks,
                "sources": c.sources,
            });
            let text = format!(
                "vertices: {}\nfamilies: {}\namplified: {}\nacyclic: {}\nsinks: {}\nsources: {}\n",
                g.n(),
                g.family_count(),
                c.amplified,
                c.acyclic,
                set_text(&c.sinks),
                set_text(&c.sources)
            );
            Ok(Report::new(&value, text))
        }
        Command::Hereditary { file, closure } => {
            let g = load(file)?;
            match closure {
                Some(labels) => {
                    let set = lib!(g.vertex_set(labels))?;
                    let cl = lib!(g.hereditary_closure(&set))?;
                    let value = json!({"command": "hereditary", "input": set, "closure": cl});
                    Ok(Report::new(&value, format!("{}\n", set_text(&cl))))
                }
                None => {
                    let sets = lib!(g.enumerate_hereditary(enumeration_bound()?))?;
                    let value = json!({"command": "hereditary", "count": sets.len(), "sets": sets});
                    let mut text = format!("{} hereditary subsets\n", sets.len());
                    for s in &sets {
                        text.push_str(&format!("  {}\n", set_text(s)));
                    }
                    Ok(Report::new(&value, text))
                }
            }
        }
        Command::Quotient { file, remove } => {
            let g = load(file)?;
            let labels: Vec<&str> = remove.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
            let set = lib!(g.vertex_set(&labels))?;
            let q = lib!(g.quotient(&set))?;
            Ok(Report { json: emit_graph(&q), text: graph_text(&q), passed: true })
        }
        Command::Stars { file, sink } => {
            let g = load(file)?;
            let stars = lib!(valid_stars(&g, sink))?;
            let value = json!({"command": "stars", "sink": sink, "stars": stars});
            Ok(Report::new(&value, format!("{}\n", join(&stars))))
        }
        Command::Split { file, sink, star, embed, verify } => {
            let g = load(file)?;
            let chosen = match (star, embed) {
                (Some(s), _) => Some(s.clone()),
                (None, true) => None,
                (None, false) => {
                    let stars = lib!(valid_stars(&g, sink))?;
                    match stars.first() {
                        Some(s) => Some(s.to_string()),
                        None => {
                            return Err(Failure::Input(format!(
                                "no valid star for sink {}; use --embed for the non-unital embedding",
                                sink
                            )))
                        }
                    }
                }
            };
            let sd = lib!(build_splitting(&g, sink, chosen.as_deref()))?;
            split_report(&sd, *verify)
        }
        Command::Chain { file, policy } => {
            let g = load(file)?;
            let p = policy_by_name(policy)
                .ok_or_else(|| Failure::Input(format!("unknown policy {:?}; expected first, last, source or embed", policy)))?;
            let chain = lib!(kk_chain(&g, p.as_ref()))?;
            let k0 = lib!(chain_k0(chain.steps()))?;
            let steps: Vec<Value> = chain
                .steps()
                .iter()
                .zip(chain.labels())
                .map(|(sd, l)| {
                    json!({
                        "sink": sd.sink(),
                        "star": sd.star(),
                        "ideal": sd.ideal(),
                        "augmentations": pairs(sd.augmentations()),
                        "quotient_vertices": sd.quotient().vertices(),
                        "classes": l,
                    })
                })
                .collect();
            let value = json!({
                "command": "chain",
                "policy": policy,
                "augmentations": pairs(chain.splitting().augmentations()),
                "steps": steps,
                "terminal": chain.terminal(),
                "pi": chain.pi_terms(),
                "i": chain.i_terms(),
                "k0": k0,
            });
            let mut text = String::new();
            for (k, sd) in chain.steps().iter().enumerate() {
                let star = sd.star().map_or("(embedding)".to_string(), |s| s.to_string());
                text.push_str(&format!("step {}: remove {} with star {}\n", k + 1, sd.sink(), star));
            }
            text.push_str(&format!("terminal: {}\n", chain.terminal()));
            text.push_str(&format!("Π = {}\n", chain.pi_terms().join(" ⊕ ")));
            text.push_str(&format!("I = {}\n", chain.i_terms().join(" ⊕ ")));
            text.push_str(&format!("K₀ Π = {}\nK₀ I = {}\n", k0.pi, k0.i));
            text.push_str(&checks_text(&k0.checks));
            Ok(Report::checked(&value, text, k0.checks.ok()))
        }
        Command::Ktheory { file } => {
            let g = load(file)?;
            let k = lib!(k_groups(&g))?;
            let value = json!({
                "command": "ktheory",
                "k0_rank": k.k0_rank,
                "k0_generators": k.k0_generators,
                "k1_rank": k.k1_rank,
            });
            let text = format!("K0 = Z^{} on [p_v] for v in {}\nK1 = 0\n", k.k0_rank, join(&k.k0_generators));
            Ok(Report::new(&value, text))
        }
        Command::Flag { rank, tag } => {
            let g = lib!(flag_graph(&spec(*rank, tag)?))?;
            Ok(Report { json: emit_graph(&g), text: graph_text(&g), passed: true })
        }
        Command::Cw { rank, tag } => {
            let spec = spec(*rank, tag)?;
            let filt = lib!(skeleton_filtration(&spec))?;
            let summary = lib!(cw_kk_summary(&spec))?;
            let levels: Vec<Value> = filt
                .levels
                .iter()
                .map(|s| json!({"level": s.level, "vertices": s.graph.vertices(), "families": s.graph.family_count()}))
                .collect();
            let value = json!({
                "command": "cw",
                "rank": spec.rank(),
                "tagged": spec.tagged(),
                "levels": levels,
                "records": summary.records,
                "removal_order": summary.removal_order,
                "stars": summary.stars,
                "k_groups": summary.k_groups,
                "k0": summary.k0,
            });
            let mut text = String::new();
            for s in &filt.levels {
                text.push_str(&format!("level {}: {} vertices, {} families\n", s.level, s.graph.n(), s.graph.family_count()));
            }
            text.push_str(&format!("C*(skel_{}) ≈ {}\n", filt.levels.len() - 1, summary.texts().join(" ≈ ")));
            text.push_str(&checks_text(&summary.k0.checks));
            Ok(Report::checked(&value, text, summary.k0.checks.ok()))
        }
    }
}

fn split_report(sd: &SplitData, verify: bool) -> Result<Report, Failure> {
    let mut value = json!({
        "command": "split",
        "sink": sd.sink(),
        "star": sd.star(),
        "unital": sd.is_unital(),
        "ideal": sd.ideal(),
        "augmentations": pairs(sd.augmentations()),
        "quotient_vertices": sd.quotient().vertices(),
        "sigma": image_rows(sd.sigma().image_table()),
        "q": image_rows(sd.q().image_table()),
    });
    let mut text = format!(
        "sink {} star {} ideal {}\n",
        sd.sink(),
        sd.star().map_or("(embedding)".to_string(), |s| s.to_string()),
        match sd.ideal() {
            crate::splitting::IdealKind::Compact => "K",
            crate::splitting::IdealKind::Scalars => "C",
        }
    );
    for (a, b) in sd.augmentations() {
        text.push_str(&format!("added family {} -> {}\n", a, b));
    }
    text.push_str("sigma:\n");
    for (g, i) in sd.sigma().image_table() {
        text.push_str(&format!("  {} -> {}\n", g, i));
    }
    let mut passed = true;
    if verify {
        let report = lib!(verify_split_exact(sd))?;
        let k0 = lib!(check_split_exact_k0(sd))?;
        passed = report.ok() && k0.checks.ok();
        value["verification"] = serde_json::to_value(&report).expect("report serializes");
        value["k0"] = serde_json::to_value(&k0).expect("report serializes");
        text.push_str("verification:\n");
        text.push_str(&checks_text(&report));
        text.push_str(&format!("K₀: Q = {}, S = {}\n", k0.q, k0.s));
        text.push_str(&checks_text(&k0.checks));
    }
    Ok(Report::checked(&value, text, passed))
}
