use std::fmt::Write as _;

use netident_core::graph::GraphJson;
use netident_core::identify::{Certificate, PairCount, Status, Verdict};
use netident_core::oracle::{Counterexample, JacobiSummary, RankEvidence};
use netident_core::ratfun::RationalFunction;
use netident_core::NodeSet;
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "netident";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub seed: u64,
    pub cap: usize,
    pub max_exact_n: usize,
    pub oracle_samples: usize,
}

/// Sampled rank evidence attached to an analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleEvidence {
    /// Half-open seed range `[first, end)`.
    pub seeds: [u64; 2],
    pub per_node: Vec<RankEvidence>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub settings: Settings,
    pub graph: GraphJson,
    pub measured: NodeSet,
    pub overall: Status,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub settings: Settings,
    pub graph: GraphJson,
    pub measured: NodeSet,
    pub verdict: Verdict,
    /// Path-set counts per endpoint pair; filled for inconclusive verdicts.
    pub pair_counts: Vec<PairCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleReport {
    pub tool: String,
    pub version: String,
    pub node: usize,
    pub measured: NodeSet,
    pub g: Vec<Vec<RationalFunction>>,
    pub g_bar: Vec<Vec<RationalFunction>>,
    pub kernel_vector: Vec<RationalFunction>,
    pub v: Vec<RationalFunction>,
    pub alpha: String,
    pub delay: usize,
    /// Measured rows of `(I - G)^{-1}`, shared by both matrices.
    pub transfer_rows: Vec<Vec<RationalFunction>>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleTestReport {
    pub tool: String,
    pub version: String,
    pub settings: Settings,
    pub graph: GraphJson,
    pub measured: NodeSet,
    pub verdicts: Vec<Verdict>,
    pub rank: OracleEvidence,
    pub jacobi: JacobiSummary,
    pub passed: bool,
}

fn rows_of(m: &netident_core::ratfun::RatMatrix) -> Vec<Vec<RationalFunction>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

impl CounterexampleReport {
    pub fn new(
        cx: &Counterexample,
        transfer_rows: &netident_core::ratfun::RatMatrix,
        verified: bool,
    ) -> Self {
        CounterexampleReport {
            tool: TOOL.into(),
            version: VERSION.into(),
            node: cx.node,
            measured: cx.measured.clone(),
            g: rows_of(&cx.g.g),
            g_bar: rows_of(&cx.g_bar.g),
            kernel_vector: cx.kernel_vector.clone(),
            v: cx.v.clone(),
            alpha: cx.alpha.to_string(),
            delay: cx.delay,
            transfer_rows: rows_of(transfer_rows),
            verified,
        }
    }
}

pub fn describe_certificate(v: &Verdict) -> String {
    match &v.certificate {
        Certificate::Constrained(w) if w.path_set.is_empty() => "no out-neighbours".into(),
        Certificate::Constrained(w) => format!("constrained paths: {}", w.path_set),
        Certificate::PathDeficiency {
            max_paths,
            required,
            witness,
        } => {
            let best = if witness.is_empty() {
                "none".to_string()
            } else {
                witness.to_string()
            };
            format!("at most {max_paths} of {required} out-neighbours reach the measured set by vertex-disjoint paths; best: {best}")
        }
        Certificate::None => format!(
            "no constrained set of {} vertex-disjoint paths",
            v.out_neighbors.len()
        ),
    }
}

fn header(out: &mut String, graph: &GraphJson, measured: &NodeSet) {
    writeln!(
        out,
        "graph: {} vertices, {} edges",
        graph.n,
        graph.edges.len()
    )
    .unwrap();
    writeln!(out, "measured: {measured}").unwrap();
}

fn describe_ranks(e: &RankEvidence) -> String {
    let parts: Vec<String> = e
        .ranks
        .iter()
        .map(|(r, k)| format!("rank {r} x{k}"))
        .collect();
    format!(
        "node {}: {} (need {})",
        e.node,
        parts.join(", "),
        e.required
    )
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.graph, &self.measured);
        for v in &self.verdicts {
            writeln!(
                out,
                "node {}: {} ({})",
                v.node,
                v.status,
                describe_certificate(v)
            )
            .unwrap();
        }
        writeln!(out, "overall: {}", self.overall).unwrap();
        if let Some(o) = &self.oracle {
            let verdict = if o.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            };
            writeln!(
                out,
                "oracle: seeds {}..{}: {verdict}",
                o.seeds[0], o.seeds[1]
            )
            .unwrap();
            for e in &o.per_node {
                writeln!(out, "  {}", describe_ranks(e)).unwrap();
            }
        }
        out
    }
}

impl NodeReport {
    pub fn to_text(&self) -> String {
        let v = &self.verdict;
        let mut out = String::new();
        header(&mut out, &self.graph, &self.measured);
        writeln!(out, "node {}: {}", v.node, v.status).unwrap();
        writeln!(out, "out-neighbours: {}", v.out_neighbors).unwrap();
        writeln!(out, "{}", describe_certificate(v)).unwrap();
        if let Certificate::Constrained(w) = &v.certificate {
            writeln!(out, "enumeration count: {}", w.enumeration_count).unwrap();
        }
        for p in &self.pair_counts {
            let count = match p.count {
                Some(k) => k.to_string(),
                None => format!("more than {}", self.settings.cap),
            };
            writeln!(out, "  {} → {}: {count} path sets", p.sources, p.targets).unwrap();
        }
        out
    }
}

fn write_matrix(out: &mut String, name: &str, rows: &[Vec<RationalFunction>]) {
    writeln!(out, "{name}:").unwrap();
    for row in rows {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(out, "  [{}]", cells.join(", ")).unwrap();
    }
}

fn join(v: &[RationalFunction]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl CounterexampleReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "node: {}", self.node).unwrap();
        writeln!(out, "measured: {}", self.measured).unwrap();
        write_matrix(&mut out, "G", &self.g);
        write_matrix(&mut out, "G_bar", &self.g_bar);
        writeln!(out, "kernel vector: [{}]", join(&self.kernel_vector)).unwrap();
        writeln!(out, "v: [{}]", join(&self.v)).unwrap();
        writeln!(out, "alpha: {}", self.alpha).unwrap();
        writeln!(out, "delay: {}", self.delay).unwrap();
        write_matrix(
            &mut out,
            "measured transfer rows (both)",
            &self.transfer_rows,
        );
        writeln!(out, "verified: {}", self.verified).unwrap();
        out
    }
}

impl OracleTestReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        header(&mut out, &self.graph, &self.measured);
        for (v, e) in self.verdicts.iter().zip(&self.rank.per_node) {
            let mark = if e.consistent_with(v.status) {
                "ok"
            } else {
                "VIOLATION"
            };
            writeln!(out, "{mark} {} [{}]", describe_ranks(e), v.status).unwrap();
        }
        let j = &self.jacobi;
        writeln!(
            out,
            "jacobi: {}/{} agree, {}/{} exact identity",
            j.agreed, j.instances, j.identity_held, j.instances
        )
        .unwrap();
        writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}
