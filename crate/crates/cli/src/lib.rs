//! Command line front end: decompose, build, replace, verify and emit.

pub mod algebra;
pub mod inputs;
pub mod pipeline;
pub mod report;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use arrowaut_core::cdga::SullivanPresentation;
use arrowaut_core::relsys::RelPipeline;
use arrowaut_core::{Error, SearchBudget};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::pipeline::{build_graphs, run_pipeline, save_graphs, save_relational, verify_dir, Input};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "arrowaut", about = "Realise G1, G2 and H <= G1 x G2 as automorphism groups and verify the result")]
struct Cli {
    /// Node limit for every exhaustive search.
    #[arg(long, global = true, default_value_t = arrowaut_core::budget::DEFAULT_NODE_LIMIT)]
    budget: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Include wall-clock timings in reports (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// First group: cyclic:n, klein4, dihedral:n, sym:k or a JSON file.
    #[arg(long)]
    g1: String,
    /// Second group, same forms as --g1.
    #[arg(long)]
    g2: String,
    /// Generators of H as pairs, e.g. "(2,2);(0,1)".
    #[arg(long)]
    h: String,
}

impl GroupArgs {
    fn input(&self) -> Result<Input, Failure> {
        Ok(Input {
            g1: inputs::parse_group(&self.g1).map_err(usage)?,
            g2: inputs::parse_group(&self.g2).map_err(usage)?,
            h_generators: inputs::parse_pairs(&self.h).map_err(usage)?,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Goursat decomposition of H.
    Goursat {
        #[command(flatten)]
        groups: GroupArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the source and target systems and the arrow between them.
    BuildRelsys {
        #[command(flatten)]
        groups: GroupArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build the relational artifacts and their simple-graph replacements.
    Replace {
        #[command(flatten)]
        groups: GroupArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Verify every claim, either from groups or from saved artifacts.
    Verify {
        #[arg(long, conflicts_with_all = ["g1", "g2", "h"])]
        from: Option<PathBuf>,
        #[arg(long, requires_all = ["g2", "h"])]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        #[arg(long)]
        h: Option<String>,
        /// Skip the graph level.
        #[arg(long)]
        relational_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sullivan algebras of digraphs.
    Cdga {
        #[command(subcommand)]
        command: CdgaCommand,
    },
    /// Run the Z8, Z4, <(2,2)> example end to end.
    ExampleSec5 {
        #[arg(long)]
        relational_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify the relational pipeline for all subgroups of small products.
    Sweep {
        /// Comma-separated group list.
        #[arg(long, default_value = "cyclic:2,cyclic:3,cyclic:4,klein4,sym:3")]
        groups: String,
        #[arg(long, default_value_t = 24)]
        max_order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CdgaCommand {
    /// Print a presentation.
    Emit {
        /// Digraph preset (cycle:k, complete:k, bowtie, chorded:k) or JSON file.
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check d∘d = 0, degrees, degree bases and ellipticity witnesses.
    Check {
        #[arg(long, required_unless_present = "from")]
        graph: Option<String>,
        #[arg(long, default_value_t = 1)]
        n: u64,
        /// A presentation JSON file written by `cdga emit`.
        #[arg(long, conflicts_with = "graph")]
        from: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate morphisms with coefficients from a finite set and compare
    /// with digraph homomorphisms.
    Homs {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value = "-1,0,1")]
        coeff_set: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Why a command did not succeed: bad usage (exit 2) or a failed
/// verification or search (exit 1).
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn failed(e: Error) -> Failure {
    match e {
        Error::Parse(m) => Failure::Usage(m),
        e => Failure::Verification(e.to_string()),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(j) = cli.jobs {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let budget = SearchBudget::new(cli.budget);
    match execute(&cli, &budget, stdout) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(Failure::Verification(m)) => {
            let _ = writeln!(stderr, "verification failed: {m}");
            1
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    stdout.write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serialisable") + "\n"
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    std::fs::write(dir.join(name), text).map_err(|e| Failure::Usage(format!("{}: {e}", dir.join(name).display())))
}

/// Prints the summary, saves the JSON report when asked, and returns
/// whether every check passed.
fn finish(report: &Report, out: Option<&Path>, stdout: &mut dyn Write) -> Result<bool, Failure> {
    emit(stdout, &report.summary())?;
    if let Some(dir) = out {
        write_file(dir, "report.json", &to_json(report))?;
    }
    Ok(report.passed())
}

fn execute(cli: &Cli, budget: &SearchBudget, stdout: &mut dyn Write) -> Result<bool, Failure> {
    match &cli.command {
        Command::Goursat { groups, out } => {
            let gd = groups.input()?.generating_data().map_err(usage)?;
            let text = to_json(gd.decomposition());
            if let Some(dir) = out {
                write_file(dir, "goursat.json", &text)?;
            }
            emit(stdout, &text)?;
            Ok(true)
        }
        Command::BuildRelsys { groups, out, format } | Command::Replace { groups, out, format } => {
            let graphs = matches!(cli.command, Command::Replace { .. });
            let input = groups.input()?;
            let p = RelPipeline::new(input.generating_data().map_err(usage)?).map_err(failed)?;
            let g = if graphs { Some(build_graphs(&p).map_err(failed)?) } else { None };
            match out {
                Some(dir) => {
                    let dot = *format == Format::Dot;
                    save_relational(dir, &input, &p, dot).map_err(failed)?;
                    if let Some((g, gadgets)) = &g {
                        save_graphs(dir, g, gadgets, dot).map_err(failed)?;
                    }
                    emit(stdout, &format!("wrote artifacts to {}\n", dir.display()))?;
                }
                None if *format == Format::Dot => {
                    emit(stdout, &p.source.to_dot("source"))?;
                    emit(stdout, &p.target.to_dot("target"))?;
                    if let Some((g, _)) = &g {
                        emit(stdout, &g.source.to_dot("source_graph"))?;
                        emit(stdout, &g.target.to_dot("target_graph"))?;
                    }
                }
                None => {
                    let mut v = serde_json::json!({
                        "source": &*p.source,
                        "target": &*p.target,
                        "phi": p.phi.pairs(),
                    });
                    if let Some((g, gadgets)) = &g {
                        v["source_graph"] = serde_json::json!(&*g.source);
                        v["target_graph"] = serde_json::json!(&*g.target);
                        v["graph_phi"] = serde_json::json!(g.phi_pairs);
                        v["gadgets"] = gadgets.clone();
                    }
                    emit(stdout, &to_json(&v))?;
                }
            }
            Ok(true)
        }
        Command::Verify { from, g1, g2, h, relational_only, out } => {
            let report = match (from, g1, g2, h) {
                (Some(dir), ..) => verify_dir(dir, budget, cli.timings).map_err(failed)?,
                (None, Some(g1), Some(g2), Some(h)) => {
                    let input = GroupArgs { g1: g1.clone(), g2: g2.clone(), h: h.clone() }.input()?;
                    run_pipeline(&input, !relational_only, budget, cli.timings).map_err(failed)?
                }
                _ => return Err(Failure::Usage("verify needs --from DIR or --g1, --g2 and --h".into())),
            };
            finish(&report, out.as_deref(), stdout)
        }
        Command::ExampleSec5 { relational_only, out } => {
            let input = GroupArgs { g1: "cyclic:8".into(), g2: "cyclic:4".into(), h: "(2,2)".into() }.input()?;
            let mut report = run_pipeline(&input, !relational_only, budget, cli.timings).map_err(failed)?;
            let orders: Vec<(String, usize)> =
                report.claims.iter().map(|c| (c.object.clone(), c.verified_order)).collect();
            for (object, order) in orders {
                let want = match object.as_str() {
                    "source system" | "source graph" => 8,
                    _ => 4,
                };
                report.check(format!("example.order[{object}]"), order == want, format!("{order} (expected {want})"));
            }
            finish(&report, out.as_deref(), stdout)
        }
        Command::Sweep { groups, max_order, out } => {
            let gs = groups
                .split(',')
                .map(|g| inputs::parse_group(g.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            let report = sweep::run_sweep(&gs, *max_order, budget).map_err(failed)?;
            for e in &report.entries {
                if !e.failed.is_empty() {
                    emit(
                        stdout,
                        &format!("FAIL {} x {} H={:?}: {}\n", e.g1, e.g2, e.h_generators, e.failed.join("; ")),
                    )?;
                }
            }
            emit(stdout, &format!("{} instances, {} failures\n", report.instances, report.failures))?;
            if let Some(dir) = out {
                write_file(dir, "sweep.json", &to_json(&report))?;
            }
            Ok(report.failures == 0)
        }
        Command::Cdga { command } => cdga(command, budget, stdout),
    }
}

fn cdga(command: &CdgaCommand, budget: &SearchBudget, stdout: &mut dyn Write) -> Result<bool, Failure> {
    match command {
        CdgaCommand::Emit { graph, n, format, out } => {
            let g = inputs::parse_digraph(graph).map_err(usage)?;
            let p = SullivanPresentation::new(&g, *n).map_err(usage)?;
            let text = match format {
                Format::Text => p.render(),
                Format::Json => to_json(&p.to_json()),
                Format::Dot => return Err(Failure::Usage("presentations have no DOT form".into())),
            };
            if let Some(dir) = out {
                write_file(dir, "presentation.json", &to_json(&p.to_json()))?;
            }
            emit(stdout, &text)?;
            Ok(true)
        }
        CdgaCommand::Check { graph, n, from, out } => {
            let p = match (from, graph) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let v = serde_json::from_str(&text).map_err(|e| Failure::Usage(e.to_string()))?;
                    SullivanPresentation::from_json(&v).map_err(usage)?
                }
                (None, Some(g)) => {
                    SullivanPresentation::new(&inputs::parse_digraph(g).map_err(usage)?, *n).map_err(usage)?
                }
                (None, None) => return Err(Failure::Usage("cdga check needs --graph or --from".into())),
            };
            let mut report = Report::new(serde_json::json!({ "digraph": p.digraph(), "n": p.n() }));
            algebra::structure_checks(&p, &mut report).map_err(failed)?;
            finish(&report, out.as_deref(), stdout)
        }
        CdgaCommand::Homs { source, target, n, coeff_set, out } => {
            let a = inputs::parse_digraph(source).map_err(usage)?;
            let b = inputs::parse_digraph(target).map_err(usage)?;
            let coeffs = inputs::parse_coeff_set(coeff_set).map_err(usage)?;
            let mut report = Report::new(serde_json::json!({
                "source": a.name(),
                "target": b.name(),
                "n": n,
                "coefficient_set": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }));
            let found = algebra::correspondence_checks(&a, &b, *n, &coeffs, budget, &mut report).map_err(failed)?;
            for f in &found {
                emit(stdout, &format!("morphism:\n{}", f.render()))?;
            }
            if let Some(dir) = out {
                write_file(dir, "morphisms.json", &to_json(&algebra::morphisms_json(&found, &coeffs)))?;
            }
            finish(&report, out.as_deref(), stdout)
        }
    }
}
