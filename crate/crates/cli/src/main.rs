//! Command line front end: parse graph and twist files, run one library
//! operation, print a text or structured report.
//!
//! Exit codes: 0 for success or a positive decision, 1 for a negative
//! decision (not a member, bound violated, paths blocked), 2 for input
//! errors (unparseable files, invalid systems, unknown identifiers).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use multitwist::enumerate::{enumerate_systems, verify_theorems, EnumSpec, VerifyOptions};
use multitwist::format::{parse_graph, parse_twist, serialize_graph, serialize_twist};
use multitwist::homology::{crossing_vector, edge_disjoint_paths, two_transversal_circles};
use multitwist::necklace::{necklace_is_bp, necklace_partition};
use multitwist::torelli::{
    abelian_rank_bound, defect_invariants, multitwist_subgroup_rank, rank_upper_bounds,
    torelli_membership, Decoration,
};
use multitwist::{
    ClosedWalk, Direction, EdgeId, Mode, MultiTwist, PathSearch, SurfaceGraph, VertexId,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "multitwist", version, about = "Dehn multi-twists on dual graphs of curve systems")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    System,
    General,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::System => Mode::System,
            ModeArg::General => Mode::General,
        }
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Check that a graph is a valid system of circles.
    Validate { graph: PathBuf },
    /// Genus of the closed surface the graph encodes.
    Genus { graph: PathBuf },
    /// Partition of the circles into necklaces and separating circles.
    Necklaces { graph: PathBuf },
    /// Decide whether a multi-twist acts trivially on homology.
    Check {
        graph: PathBuf,
        #[arg(long)]
        twist: PathBuf,
    },
    /// Rank and basis of the homologically trivial multi-twists.
    Rank { graph: PathBuf },
    /// Piece defects and their aggregates.
    Invariants { graph: PathBuf },
    /// The family of rank upper bounds.
    Bounds { graph: PathBuf },
    /// Upper bound for an abelian subgroup with marked pieces.
    AbelianBound {
        graph: PathBuf,
        /// Piece carrying a pseudo-Anosov restriction; repeatable.
        #[arg(long = "mark")]
        marks: Vec<String>,
    },
    /// Two transversal circles through a chosen circle.
    TwoCircles {
        graph: PathBuf,
        #[arg(long)]
        edge: String,
    },
    /// Edge-disjoint paths between two pieces.
    Paths {
        graph: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(short = 'k', default_value_t = 2)]
        count: usize,
    },
    /// Whether necklaces span bounding-pair shapes when cut along alone.
    Bp {
        graph: PathBuf,
        /// Restrict to the necklace containing this circle.
        #[arg(long)]
        necklace: Option<String>,
    },
    /// Reduce a general graph to a valid system, merging isotopic circles.
    Normalize {
        graph: PathBuf,
        #[arg(long)]
        twist: Option<PathBuf>,
    },
    /// Generate all systems of a given genus.
    Enumerate {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        max_edges: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::System)]
        mode: ModeArg,
        /// Keep isomorphic duplicates.
        #[arg(long)]
        no_dedup: bool,
    },
    /// Re-check every library guarantee over an enumerated stream.
    Verify {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        max_edges: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::System)]
        mode: ModeArg,
        #[arg(long)]
        no_dedup: bool,
        /// Seed for random twist sampling.
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Random twists per graph when exhaustive sweeps are too large.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Wall-clock budget in seconds; exceeding it yields a partial report.
        #[arg(long)]
        budget_seconds: Option<u64>,
    },
}

/// What a verb produced: a report plus the decision that drives the exit
/// code.
struct Outcome {
    text: String,
    structured: serde_json::Value,
    negative: bool,
}

impl Outcome {
    fn positive(text: String, structured: serde_json::Value) -> Self {
        Outcome {
            text,
            structured,
            negative: false,
        }
    }

    fn decided(negative: bool, text: String, structured: serde_json::Value) -> Self {
        Outcome {
            text,
            structured,
            negative,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.verb) {
        Ok(outcome) => {
            // Tolerate a closed pipe (`multitwist enumerate | head`): the
            // decision still drives the exit code.
            let mut stdout = std::io::stdout().lock();
            let _ = match cli.format {
                Format::Text => writeln!(stdout, "{}", outcome.text.trim_end()),
                Format::Structured => {
                    let wrapped = json!({
                        "schema_version": SCHEMA_VERSION,
                        "verb": verb_name(&cli.verb),
                        "report": outcome.structured,
                    });
                    writeln!(stdout, "{}", serde_json::to_string_pretty(&wrapped).unwrap())
                }
            };
            if outcome.negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn verb_name(verb: &Verb) -> &'static str {
    match verb {
        Verb::Validate { .. } => "validate",
        Verb::Genus { .. } => "genus",
        Verb::Necklaces { .. } => "necklaces",
        Verb::Check { .. } => "check",
        Verb::Rank { .. } => "rank",
        Verb::Invariants { .. } => "invariants",
        Verb::Bounds { .. } => "bounds",
        Verb::AbelianBound { .. } => "abelian-bound",
        Verb::TwoCircles { .. } => "two-circles",
        Verb::Paths { .. } => "paths",
        Verb::Bp { .. } => "bp",
        Verb::Normalize { .. } => "normalize",
        Verb::Enumerate { .. } => "enumerate",
        Verb::Verify { .. } => "verify",
    }
}

fn load_graph(path: &Path) -> Result<SurfaceGraph, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_graph(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_twist(path: &Path, graph: &SurfaceGraph) -> Result<MultiTwist, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    parse_twist(&text, graph).map_err(|e| format!("{}: {e}", path.display()))
}

fn describe_walk(walk: &ClosedWalk) -> String {
    walk.steps()
        .iter()
        .map(|step| match step.direction {
            Direction::Forward => format!("+{}", step.edge),
            Direction::Backward => format!("-{}", step.edge),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct WalkReport {
    steps: Vec<String>,
    crossings: Vec<(EdgeId, i64)>,
}

fn walk_report(graph: &SurfaceGraph, walk: &ClosedWalk) -> Result<WalkReport, String> {
    let z = crossing_vector(graph, walk).map_err(|e| e.to_string())?;
    Ok(WalkReport {
        steps: walk
            .steps()
            .iter()
            .map(|s| match s.direction {
                Direction::Forward => format!("+{}", s.edge),
                Direction::Backward => format!("-{}", s.edge),
            })
            .collect(),
        crossings: z.entries().map(|(e, c)| (e.clone(), c)).collect(),
    })
}

fn run(verb: &Verb) -> Result<Outcome, String> {
    match verb {
        Verb::Validate { graph } => {
            let g = load_graph(graph)?;
            let violations = g.validate();
            let mut text = String::new();
            if violations.is_empty() {
                writeln!(text, "valid {} graph", g.mode()).unwrap();
            } else {
                writeln!(text, "invalid: {} violation(s)", violations.len()).unwrap();
                for v in &violations {
                    writeln!(text, "  {v}").unwrap();
                }
            }
            Ok(Outcome::decided(
                !violations.is_empty(),
                text,
                json!({ "valid": violations.is_empty(), "violations": violations }),
            ))
        }
        Verb::Genus { graph } => {
            let g = load_graph(graph)?;
            let genus = g.genus().map_err(|e| e.to_string())?;
            Ok(Outcome::positive(
                format!("genus {genus}\n"),
                json!({ "genus": genus }),
            ))
        }
        Verb::Necklaces { graph } => {
            let g = load_graph(graph)?;
            let partition = necklace_partition(&g).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(
                text,
                "{} necklace(s), {} separating circle(s)",
                partition.necklaces.len(),
                partition.separating.len()
            )
            .unwrap();
            for necklace in &partition.necklaces {
                writeln!(
                    text,
                    "  necklace: {}",
                    necklace
                        .iter()
                        .map(EdgeId::as_str)
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
            }
            if !partition.separating.is_empty() {
                writeln!(
                    text,
                    "  separating: {}",
                    partition
                        .separating
                        .iter()
                        .map(EdgeId::as_str)
                        .collect::<Vec<_>>()
                        .join(" ")
                )
                .unwrap();
            }
            Ok(Outcome::positive(text, serde_json::to_value(&partition).unwrap()))
        }
        Verb::Check { graph, twist } => {
            let g = load_graph(graph)?;
            let t = load_twist(twist, &g)?;
            // General-mode inputs are reduced to a system first; membership
            // is preserved by the reduction.
            let (g, t) = if g.mode() == Mode::General {
                g.normalized(&t).map_err(|e| e.to_string())?
            } else {
                (g, t)
            };
            let report = torelli_membership(&g, &t).map_err(|e| e.to_string())?;
            let mut text = String::new();
            if report.member {
                writeln!(text, "member: acts trivially on homology").unwrap();
            } else {
                writeln!(
                    text,
                    "not a member: {} necklace(s) with non-zero exponent sum",
                    report.violations.len()
                )
                .unwrap();
                for v in &report.violations {
                    writeln!(
                        text,
                        "  sum {} over {}",
                        v.exponent_sum,
                        v.circles
                            .iter()
                            .map(EdgeId::as_str)
                            .collect::<Vec<_>>()
                            .join(" ")
                    )
                    .unwrap();
                }
            }
            Ok(Outcome::decided(
                !report.member,
                text,
                serde_json::to_value(&report).unwrap(),
            ))
        }
        Verb::Rank { graph } => {
            let g = load_graph(graph)?;
            let report = multitwist_subgroup_rank(&g).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(
                text,
                "rank {} ({} circle(s), {} necklace(s), {} separating)",
                report.rank,
                g.edge_count(),
                report.necklace_count,
                report.separating_count
            )
            .unwrap();
            for twist in &report.basis {
                let entries: Vec<String> = twist
                    .entries()
                    .map(|(e, x)| format!("{x}*{e}"))
                    .collect();
                writeln!(text, "  basis: {}", entries.join(" + ")).unwrap();
            }
            Ok(Outcome::positive(text, serde_json::to_value(&report).unwrap()))
        }
        Verb::Invariants { graph } => {
            let g = load_graph(graph)?;
            let report = defect_invariants(&g).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(
                text,
                "total defect {}, {} piece(s) with positive defect",
                report.total, report.positive
            )
            .unwrap();
            for (v, d) in &report.defects {
                writeln!(text, "  {v}: defect {d}").unwrap();
            }
            Ok(Outcome::positive(text, serde_json::to_value(&report).unwrap()))
        }
        Verb::Bounds { graph } => {
            let g = load_graph(graph)?;
            let report = rank_upper_bounds(&g).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(text, "genus {}", report.genus).unwrap();
            writeln!(text, "generic bound    {}", report.generic).unwrap();
            writeln!(text, "refined bound    {}", report.refined).unwrap();
            writeln!(text, "multi-twist bound {}", report.multitwist).unwrap();
            match &report.conditional {
                Some(c) => {
                    writeln!(text, "conditional bound {} via:", c.value).unwrap();
                    for t in &c.triggers {
                        writeln!(text, "  {t:?}").unwrap();
                    }
                }
                None => writeln!(text, "conditional bound: not triggered").unwrap(),
            }
            Ok(Outcome::positive(text, serde_json::to_value(&report).unwrap()))
        }
        Verb::AbelianBound { graph, marks } => {
            let g = load_graph(graph)?;
            let decoration = Decoration::new(marks.iter().map(|m| VertexId::new(m.as_str())));
            let report = abelian_rank_bound(&g, &decoration).map_err(|e| e.to_string())?;
            let text = format!(
                "abelian rank bound {} ({} marked piece(s) + twist rank {}, raw {})\n",
                report.value, report.marked_pieces, report.twist_rank, report.raw
            );
            Ok(Outcome::positive(text, serde_json::to_value(&report).unwrap()))
        }
        Verb::TwoCircles { graph, edge } => {
            let g = load_graph(graph)?;
            let target = EdgeId::new(edge.as_str());
            let (a, b) = two_transversal_circles(&g, &target).map_err(|e| e.to_string())?;
            let ra = walk_report(&g, &a)?;
            let rb = walk_report(&g, &b)?;
            let text = format!(
                "first:  {}\nsecond: {}\n",
                describe_walk(&a),
                describe_walk(&b)
            );
            Ok(Outcome::positive(
                text,
                json!({ "first": ra, "second": rb }),
            ))
        }
        Verb::Paths { graph, from, to, count } => {
            let g = load_graph(graph)?;
            let search = edge_disjoint_paths(&g, &VertexId::new(from.as_str()), &VertexId::new(to.as_str()), *count)
                .map_err(|e| e.to_string())?;
            match search {
                PathSearch::Found(paths) => {
                    let mut text = String::new();
                    writeln!(text, "found {} edge-disjoint path(s)", paths.len()).unwrap();
                    let mut listed = Vec::new();
                    for path in &paths {
                        let steps: Vec<String> = path
                            .steps
                            .iter()
                            .map(|s| match s.direction {
                                Direction::Forward => format!("+{}", s.edge),
                                Direction::Backward => format!("-{}", s.edge),
                            })
                            .collect();
                        writeln!(text, "  {}", steps.join(" ")).unwrap();
                        listed.push(steps);
                    }
                    Ok(Outcome::positive(
                        text,
                        json!({ "found": true, "paths": listed }),
                    ))
                }
                PathSearch::Blocked { max_paths } => Ok(Outcome::decided(
                    true,
                    format!("blocked: at most {max_paths} edge-disjoint path(s) exist\n"),
                    json!({ "found": false, "max_paths": max_paths }),
                )),
            }
        }
        Verb::Bp { graph, necklace } => {
            let g = load_graph(graph)?;
            let partition = necklace_partition(&g).map_err(|e| e.to_string())?;
            let chosen: Vec<Vec<EdgeId>> = match necklace {
                Some(member) => {
                    let member = EdgeId::new(member.as_str());
                    let found = partition
                        .necklaces
                        .iter()
                        .find(|n| n.contains(&member))
                        .ok_or_else(|| format!("no necklace contains circle `{member}`"))?;
                    vec![found.clone()]
                }
                None => partition
                    .necklaces
                    .iter()
                    .filter(|n| n.len() >= 2)
                    .cloned()
                    .collect(),
            };
            let mut text = String::new();
            let mut results = Vec::new();
            let mut any_negative = false;
            if chosen.is_empty() {
                writeln!(text, "no necklace with two or more circles").unwrap();
            }
            for n in &chosen {
                let verdict = necklace_is_bp(&g, n).map_err(|e| e.to_string())?;
                any_negative |= !verdict;
                writeln!(
                    text,
                    "necklace {}: {}",
                    n.iter().map(EdgeId::as_str).collect::<Vec<_>>().join(" "),
                    if verdict { "bounding-pair shape" } else { "not a bounding-pair shape" }
                )
                .unwrap();
                results.push(json!({ "necklace": n, "bounding_pair": verdict }));
            }
            Ok(Outcome::decided(any_negative, text, json!({ "necklaces": results })))
        }
        Verb::Normalize { graph, twist } => {
            let g = load_graph(graph)?;
            let t = match twist {
                Some(path) => load_twist(path, &g)?,
                None => MultiTwist::default(),
            };
            let (reduced, back) = g.normalized(&t).map_err(|e| e.to_string())?;
            let mut text = serialize_graph(&reduced);
            let twist_text = serialize_twist(&back);
            if twist.is_some() && !twist_text.is_empty() {
                text.push('\n');
                text.push_str(&twist_text);
            }
            Ok(Outcome::positive(
                text,
                json!({
                    "graph": serialize_graph(&reduced),
                    "twist": if twist.is_some() { Some(twist_text) } else { None },
                }),
            ))
        }
        Verb::Enumerate { genus, max_edges, mode, no_dedup } => {
            let mut spec = EnumSpec::for_genus(*genus);
            spec.mode = (*mode).into();
            if let Some(m) = max_edges {
                spec.max_edges = *m;
            }
            spec.dedup = !no_dedup;
            let graphs = enumerate_systems(&spec).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(text, "# {} graph(s)", graphs.len()).unwrap();
            for (i, g) in graphs.iter().enumerate() {
                writeln!(text, "\n# graph {}", i + 1).unwrap();
                text.push_str(&serialize_graph(g));
            }
            let listed: Vec<String> = graphs.iter().map(serialize_graph).collect();
            Ok(Outcome::positive(
                text,
                json!({ "count": graphs.len(), "graphs": listed }),
            ))
        }
        Verb::Verify {
            genus,
            max_edges,
            mode,
            no_dedup,
            seed,
            samples,
            budget_seconds,
        } => {
            let mut spec = EnumSpec::for_genus(*genus);
            spec.mode = (*mode).into();
            if let Some(m) = max_edges {
                spec.max_edges = *m;
            }
            spec.dedup = !no_dedup;
            let opts = VerifyOptions {
                seed: *seed,
                twist_samples: *samples,
                time_budget: budget_seconds.map(std::time::Duration::from_secs),
                ..VerifyOptions::default()
            };
            let report = verify_theorems(&spec, &opts).map_err(|e| e.to_string())?;
            let mut text = String::new();
            writeln!(
                text,
                "{} graph(s) in {} ms{}",
                report.graphs,
                report.elapsed_ms,
                if report.complete { "" } else { " (incomplete: budget exhausted)" }
            )
            .unwrap();
            for p in &report.properties {
                writeln!(
                    text,
                    "  {:<26} {:>8} check(s)  {}",
                    p.name,
                    p.checks,
                    if p.failures == 0 { "ok".to_owned() } else { format!("{} FAILURE(S)", p.failures) }
                )
                .unwrap();
                for c in &p.counterexamples {
                    for line in c.lines() {
                        writeln!(text, "      {line}").unwrap();
                    }
                }
            }
            let green = report.all_green();
            writeln!(text, "{}", if green { "all green" } else { "NOT GREEN" }).unwrap();
            Ok(Outcome::decided(
                !green,
                text,
                serde_json::to_value(&report).unwrap(),
            ))
        }
    }
}
