//! `boxdim`: build intersection/incidence graphs, check forbidden
//! structures and certificates, generate the explicit constructions, run
//! the edge-bound certification pipeline, and sweep experiments.
//!
//! Exit codes: 0 on success or when the checked property holds, 1 when a
//! property is violated (a witness is emitted), 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use boxdim::bounds::certify_edge_bound;
use boxdim::constructions::{
    dyadic_k22free_generator, lift_incidence_to_boxes3d, lines3d_generator,
};
use boxdim::forbidden::{find_ktt, KttWitness};
use boxdim::graph::{
    incidence_graph, intersection_graph_with, BoxFamily, BuilderMode, Graph, IncidenceConfig,
};
use boxdim::poset::{
    build_pg, check_realizer, eliminate_nesting, phi_embedding, EmbeddingCert, Poset,
    RealizerVerdict,
};
use boxdim::separation::{check_certificate, CertVerdict, SepCert, SepViolation};

use boxdim_cli::experiment::{run_sweep, SUITES};
use boxdim_cli::manifest::RunManifest;
use boxdim_cli::{emit, read_json};

#[derive(Parser)]
#[command(name = "boxdim", version, about = "box intersection graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write a replayable run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Graph builders.
    Graph {
        #[command(subcommand)]
        cmd: GraphCmd,
    },
    /// Property and certificate checks.
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
    /// Construction generators.
    Gen {
        #[command(subcommand)]
        cmd: GenCmd,
    },
    /// Poset operations.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Certification pipelines.
    Certify {
        #[command(subcommand)]
        cmd: CertifyCmd,
    },
    /// Experiment sweeps emitting CSV and gnuplot data.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Intersection graph of a box family JSON file.
    Build {
        #[arg(long)]
        boxes: PathBuf,
        /// Builder: "sweep" (default) or "brute".
        #[arg(long, default_value = "sweep")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Incidence graph of a point/rectangle configuration.
    Incidence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Search for a K_{t,t} subgraph; exit 1 with a witness if found.
    Ktt {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a separation certificate; exit 1 with the violating pair.
    Sepcert {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a dominance realizer against a poset; exit 1 on violation.
    Realizer {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Lift a planar incidence configuration to boxes in R^3.
    Lift3d {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Skew-lines family over the extremal k x 2k^2 incidence grid.
    Lines3d {
        #[arg(long)]
        k: usize,
        /// Intersection graph output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional output for the exact line coordinates.
        #[arg(long)]
        lines_out: Option<PathBuf>,
    },
    /// Dyadic K_{2,2}-free incidence configuration at scale m.
    Dyadic {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PosetCmd {
    /// The bipartite poset P(G) of a graph, as cover relations.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 4-dimensional realizer of a nesting-free configuration.
    Phi {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace nested rectangles by thin slabs, preserving incidences.
    EliminateNesting {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CertifyCmd {
    /// Full pipeline: K_{t,t}-free boxes -> P(G) -> half -> edge bound.
    Main {
        #[arg(long)]
        boxes: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run a named sweep suite into a directory.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// One of: dyadic-density, lines-density, numedges-soundness.
    #[arg(long)]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest scale parameter (suite-specific default).
    #[arg(long)]
    max_scale: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

/// Whether the checked property held; drives the exit code.
enum Outcome {
    Holds,
    Violated,
}

#[derive(Serialize)]
struct KttReport {
    t: usize,
    free: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<KttWitness>,
}

#[derive(Serialize)]
struct SepReport {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<SepViolation>,
}

#[derive(Serialize)]
struct RealizerReport {
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<RealizerVerdict>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Holds) => ExitCode::SUCCESS,
        Ok(Outcome::Violated) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    let manifest_path = cli.manifest.clone();
    let (outcome, manifest) = dispatch(cli)?;
    if let Some(path) = manifest_path {
        manifest.write(&path)?;
    }
    Ok(outcome)
}

fn dispatch(cli: Cli) -> Result<(Outcome, RunManifest)> {
    match cli.command {
        Command::Graph { cmd } => match cmd {
            GraphCmd::Build { boxes, mode, out } => {
                let family: BoxFamily = read_json(&boxes)?;
                let builder = match mode.as_str() {
                    "sweep" => BuilderMode::Sweep,
                    "brute" => BuilderMode::BruteForce,
                    other => anyhow::bail!("unknown builder mode {other:?}"),
                };
                let g = intersection_graph_with(&family, builder);
                emit(&g, out.as_deref())?;
                let manifest = RunManifest::new("graph build")
                    .param("mode", &mode)
                    .input(&boxes);
                Ok((Outcome::Holds, manifest))
            }
            GraphCmd::Incidence { config, out } => {
                let c: IncidenceConfig = read_json(&config)?;
                emit(&incidence_graph(&c), out.as_deref())?;
                Ok((
                    Outcome::Holds,
                    RunManifest::new("graph incidence").input(&config),
                ))
            }
        },
        Command::Check { cmd } => match cmd {
            CheckCmd::Ktt { graph, t, out } => {
                let g: Graph = read_json(&graph)?;
                let witness = find_ktt(&g, t);
                let outcome = if witness.is_some() {
                    Outcome::Violated
                } else {
                    Outcome::Holds
                };
                emit(
                    &KttReport {
                        t,
                        free: witness.is_none(),
                        witness,
                    },
                    out.as_deref(),
                )?;
                let manifest = RunManifest::new("check ktt").param("t", t).input(&graph);
                Ok((outcome, manifest))
            }
            CheckCmd::Sepcert { graph, cert, out } => {
                let g: Graph = read_json(&graph)?;
                let c: SepCert = read_json(&cert)?;
                let verdict = check_certificate(&g, &c)?;
                let (outcome, report) = match verdict {
                    CertVerdict::Valid => (
                        Outcome::Holds,
                        SepReport {
                            valid: true,
                            violation: None,
                        },
                    ),
                    CertVerdict::Violation(v) => (
                        Outcome::Violated,
                        SepReport {
                            valid: false,
                            violation: Some(v),
                        },
                    ),
                };
                emit(&report, out.as_deref())?;
                let manifest = RunManifest::new("check sepcert").input(&graph).input(&cert);
                Ok((outcome, manifest))
            }
            CheckCmd::Realizer { poset, cert, out } => {
                let p: Poset = read_json(&poset)?;
                let c: EmbeddingCert = read_json(&cert)?;
                let verdict = check_realizer(&p, &c)?;
                let (outcome, report) = match verdict {
                    RealizerVerdict::Valid => (
                        Outcome::Holds,
                        RealizerReport {
                            valid: true,
                            violation: None,
                        },
                    ),
                    v @ RealizerVerdict::Violation { .. } => (
                        Outcome::Violated,
                        RealizerReport {
                            valid: false,
                            violation: Some(v),
                        },
                    ),
                };
                emit(&report, out.as_deref())?;
                let manifest = RunManifest::new("check realizer")
                    .input(&poset)
                    .input(&cert);
                Ok((outcome, manifest))
            }
        },
        Command::Gen { cmd } => match cmd {
            GenCmd::Lift3d { config, out } => {
                let c: IncidenceConfig = read_json(&config)?;
                let family = lift_incidence_to_boxes3d(&c)?;
                emit(&family, out.as_deref())?;
                Ok((
                    Outcome::Holds,
                    RunManifest::new("gen lift3d").input(&config),
                ))
            }
            GenCmd::Lines3d { k, out, lines_out } => {
                let (lines, graph) = lines3d_generator(k);
                emit(&graph, out.as_deref())?;
                if let Some(path) = lines_out.as_deref() {
                    emit(&lines, Some(path))?;
                }
                Ok((
                    Outcome::Holds,
                    RunManifest::new("gen lines3d").param("k", k),
                ))
            }
            GenCmd::Dyadic { m, out } => {
                let config = dyadic_k22free_generator(m)?;
                emit(&config, out.as_deref())?;
                Ok((Outcome::Holds, RunManifest::new("gen dyadic").param("m", m)))
            }
        },
        Command::Poset { cmd } => match cmd {
            PosetCmd::Build { graph, out } => {
                let g: Graph = read_json(&graph)?;
                let poset = build_pg(&g).to_poset();
                emit(&poset, out.as_deref())?;
                Ok((
                    Outcome::Holds,
                    RunManifest::new("poset build").input(&graph),
                ))
            }
            PosetCmd::Phi { config, out } => {
                let c: IncidenceConfig = read_json(&config)?;
                let cert = phi_embedding(&c)?;
                emit(&cert, out.as_deref())?;
                Ok((Outcome::Holds, RunManifest::new("poset phi").input(&config)))
            }
            PosetCmd::EliminateNesting { config, out } => {
                let c: IncidenceConfig = read_json(&config)?;
                let fixed = eliminate_nesting(&c)?;
                emit(&fixed, out.as_deref())?;
                Ok((
                    Outcome::Holds,
                    RunManifest::new("poset eliminate-nesting").input(&config),
                ))
            }
        },
        Command::Certify { cmd } => match cmd {
            CertifyCmd::Main { boxes, t, out } => {
                let family: BoxFamily = read_json(&boxes)?;
                let report = certify_edge_bound(&family, t)?;
                let outcome = if report.holds {
                    Outcome::Holds
                } else {
                    Outcome::Violated
                };
                emit(&report, out.as_deref())?;
                let manifest = RunManifest::new("certify main").param("t", t).input(&boxes);
                Ok((outcome, manifest))
            }
        },
        Command::Experiment { cmd } => match cmd {
            ExperimentCmd::Sweep(args) => {
                if !SUITES.contains(&args.suite.as_str()) {
                    anyhow::bail!(
                        "unknown suite {:?} (expected one of {SUITES:?})",
                        args.suite
                    );
                }
                let output = run_sweep(&args.suite, args.seed, args.max_scale, &args.out)?;
                let mut manifest = RunManifest::new("experiment sweep")
                    .param("suite", &args.suite)
                    .seed(args.seed)
                    .output(&output.csv_path)
                    .output(&output.dat_path);
                if let Some(s) = args.max_scale {
                    manifest = manifest.param("max_scale", s);
                }
                Ok((Outcome::Holds, manifest))
            }
        },
    }
}
