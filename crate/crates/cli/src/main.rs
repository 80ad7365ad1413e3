//! `netident`: decide which edge dynamics of a networked system can be
//! recovered from a chosen set of measured nodes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use netident_core::graph::GraphJson;
use netident_core::identify::{self, Status};
use netident_core::oracle::{self, Fixture};
use netident_core::paths::DEFAULT_CAP;
use netident_core::ratfun::DEFAULT_MAX_EXACT_N;
use netident_core::{parse_graph, Config, DiGraph, Execution, NodeSet, Vertex};

use netident::report::{
    CounterexampleReport, NodeReport, OracleEvidence, OracleTestReport, Report, Settings, TOOL,
    VERSION,
};

/// Exit code of `oracle-test` when sampled evidence contradicts a verdict.
const EXIT_VIOLATION: u8 = 4;
const EXIT_ERROR: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "netident",
    version,
    about = "Identifiability analysis for dynamical networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide every node of a graph and report the overall verdict.
    Analyze {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Generic samples used to cross-check verdicts (0 disables).
        #[arg(long, default_value_t = 0)]
        oracle_samples: usize,
    },
    /// Decide a single node and print its certificate.
    CheckNode {
        graph: PathBuf,
        #[arg(long)]
        node: Vertex,
        #[command(flatten)]
        common: Common,
    },
    /// Build two network matrices a measurement cannot tell apart.
    Counterexample {
        fixture: PathBuf,
        #[arg(long)]
        node: Vertex,
        #[command(flatten)]
        common: Common,
    },
    /// Print the graph as DOT with measured nodes highlighted.
    ExportDot {
        graph: PathBuf,
        #[arg(long, value_delimiter = ',')]
        measured: Option<Vec<Vertex>>,
    },
    /// Check verdicts against exact rank computations on generic samples.
    OracleTest {
        graph: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        oracle_samples: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Measured nodes, e.g. `4,5`. Defaults to the set stored in the graph file.
    #[arg(long, value_delimiter = ',')]
    measured: Option<Vec<Vertex>>,
    #[arg(long, env = "NETIDENT_SEED", default_value_t = 0)]
    seed: u64,
    /// Emit a JSON report.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit a plain-text report (default).
    #[arg(long)]
    text: bool,
    /// Upper bound on enumerated path sets.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Largest graph handled by exhaustive procedures.
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT_N)]
    max_exact_n: usize,
}

impl Common {
    fn config(&self) -> Config {
        Config {
            max_exact_n: self.max_exact_n,
            cap: self.cap,
            execution: Execution::Parallel,
        }
    }

    fn settings(&self, oracle_samples: usize) -> Settings {
        Settings {
            seed: self.seed,
            cap: self.cap,
            max_exact_n: self.max_exact_n,
            oracle_samples,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> Result<DiGraph> {
    parse_graph(&read(path)?).with_context(|| format!("cannot parse {}", path.display()))
}

fn measured_set(graph: &DiGraph, flag: &Option<Vec<Vertex>>) -> Result<NodeSet> {
    let set = match (flag, graph.measured()) {
        (Some(v), _) => {
            let set: NodeSet = v.iter().copied().collect();
            if set.len() != v.len() {
                bail!("duplicate vertex in --measured");
            }
            set
        }
        (None, Some(m)) => m.clone(),
        (None, None) => bail!("no measured set: pass --measured or mark nodes in the graph file"),
    };
    graph.check_set(&set)?;
    Ok(set)
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        print!("{}", text());
    }
    Ok(())
}

fn rank_evidence(
    graph: &DiGraph,
    c: &NodeSet,
    verdicts: &[identify::Verdict],
    seed: u64,
    samples: usize,
    config: &Config,
) -> Result<OracleEvidence> {
    let end = seed
        .checked_add(samples as u64)
        .context("seed range overflows")?;
    let per_node = oracle::rank_evidence(graph, c, seed..end, config)?;
    Ok(OracleEvidence {
        seeds: [seed, end],
        consistent: oracle::verdicts_consistent(verdicts, &per_node),
        per_node,
    })
}

fn analyze(path: &Path, common: &Common, samples: usize) -> Result<u8> {
    let graph = load_graph(path)?;
    let c = measured_set(&graph, &common.measured)?;
    let config = common.config();
    let gv = identify::decide_graph(&graph, &c, config.execution)?;
    let oracle = if samples > 0 {
        Some(rank_evidence(
            &graph,
            &c,
            &gv.per_node,
            common.seed,
            samples,
            &config,
        )?)
    } else {
        None
    };
    let report = Report {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: "analyze".into(),
        settings: common.settings(samples),
        graph: GraphJson::from(&graph),
        measured: c,
        overall: gv.overall,
        verdicts: gv.per_node,
        oracle,
    };
    emit(common.json, &report, || report.to_text())?;
    Ok(report.overall.exit_code() as u8)
}

fn check_node(path: &Path, node: Vertex, common: &Common) -> Result<u8> {
    let graph = load_graph(path)?;
    let c = measured_set(&graph, &common.measured)?;
    let verdict = identify::decide_node(&graph, node, &c)?;
    let pair_counts = if verdict.status == Status::Inconclusive {
        identify::pair_counts(&graph, node, &c, common.cap)?
    } else {
        Vec::new()
    };
    let report = NodeReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: "check-node".into(),
        settings: common.settings(0),
        graph: GraphJson::from(&graph),
        measured: c,
        verdict,
        pair_counts,
    };
    emit(common.json, &report, || report.to_text())?;
    Ok(report.verdict.status.exit_code() as u8)
}

fn counterexample(path: &Path, node: Vertex, common: &Common) -> Result<u8> {
    let fixture = Fixture::from_json(&read(path)?)
        .with_context(|| format!("cannot parse {}", path.display()))?;
    let c = measured_set(&fixture.graph, &common.measured)?;
    let config = common.config();
    let nm = fixture.sample(config.max_exact_n)?;
    let cx = oracle::build_counterexample(&nm, node, &c, &config)?;
    let verified = cx.verify()?;
    let rows: Vec<usize> = c.iter().map(|v| v - 1).collect();
    let all: Vec<usize> = (0..nm.n()).collect();
    let transfer_rows = nm.transfer()?.submatrix(&rows, &all);
    let report = CounterexampleReport::new(&cx, &transfer_rows, verified);
    emit(common.json, &report, || report.to_text())?;
    Ok(0)
}

fn export_dot(path: &Path, measured: &Option<Vec<Vertex>>) -> Result<u8> {
    let graph = load_graph(path)?;
    let c = match measured {
        Some(_) => Some(measured_set(&graph, measured)?),
        None => graph.measured().cloned(),
    };
    print!("{}", graph.to_dot(c.as_ref()));
    Ok(0)
}

fn oracle_test(path: &Path, common: &Common, samples: usize) -> Result<u8> {
    let graph = load_graph(path)?;
    let c = measured_set(&graph, &common.measured)?;
    let config = common.config();
    let gv = identify::decide_graph(&graph, &c, config.execution)?;
    let rank = rank_evidence(&graph, &c, &gv.per_node, common.seed, samples, &config)?;
    let jacobi = oracle::jacobi_sweep(&graph, rank.seeds[0]..rank.seeds[1], &config)?;
    let passed = rank.consistent && jacobi.all_passed();
    let report = OracleTestReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        settings: common.settings(samples),
        graph: GraphJson::from(&graph),
        measured: c,
        verdicts: gv.per_node,
        rank,
        jacobi,
        passed,
    };
    emit(common.json, &report, || report.to_text())?;
    Ok(if passed { 0 } else { EXIT_VIOLATION })
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Analyze {
            graph,
            common,
            oracle_samples,
        } => analyze(graph, common, *oracle_samples),
        Command::CheckNode {
            graph,
            node,
            common,
        } => check_node(graph, *node, common),
        Command::Counterexample {
            fixture,
            node,
            common,
        } => counterexample(fixture, *node, common),
        Command::ExportDot { graph, measured } => export_dot(graph, measured),
        Command::OracleTest {
            graph,
            common,
            oracle_samples,
        } => oracle_test(graph, common, *oracle_samples),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
