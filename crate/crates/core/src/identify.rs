//! Per-node and whole-graph identifiability verdicts.
//!
//! A node `i` with out-neighbours `N` is
//! - `Identifiable` when a constrained set of `|N|` vertex-disjoint paths
//!   runs from `N` to the measured set (sufficient condition);
//! - `NotIdentifiable` when fewer than `|N|` vertex-disjoint paths exist at
//!   all, which caps the rank of the measured block below `|N|` for every
//!   network matrix;
//! - `Inconclusive` otherwise. The graph test is only sufficient, so the
//!   absence of a constrained set proves nothing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{DiGraph, NodeSet, Vertex};
use crate::paths::{
    enumerate_path_sets, exists_constrained_set, max_disjoint_paths, ConstrainedWitness, Mode,
    PathSet,
};
use crate::Config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Identifiable,
    NotIdentifiable,
    Inconclusive,
}

impl Status {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Identifiable => 0,
            Status::Inconclusive => 2,
            Status::NotIdentifiable => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Identifiable => "Identifiable",
            Status::NotIdentifiable => "NotIdentifiable",
            Status::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Constrained(ConstrainedWitness),
    PathDeficiency {
        max_paths: usize,
        required: usize,
        witness: PathSet,
    },
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub node: Vertex,
    pub out_neighbors: NodeSet,
    pub status: Status,
    pub certificate: Certificate,
}

impl Verdict {
    /// Re-derives the certificate from scratch.
    pub fn verify(&self, g: &DiGraph, c: &NodeSet) -> Result<bool> {
        let m = self.out_neighbors.len();
        Ok(match (&self.status, &self.certificate) {
            (Status::Identifiable, Certificate::Constrained(w)) => {
                w.verify(g)?
                    && w.path_set.len() == m
                    && w.path_set.start_nodes() == &self.out_neighbors
                    && w.path_set.end_nodes().is_subset(c)
            }
            (
                Status::NotIdentifiable,
                Certificate::PathDeficiency {
                    max_paths,
                    required,
                    ..
                },
            ) => {
                *required == m
                    && *max_paths < m
                    && max_disjoint_paths(g, &self.out_neighbors, c)?.count == *max_paths
            }
            (Status::Inconclusive, Certificate::None) => true,
            _ => false,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphVerdict {
    pub per_node: Vec<Verdict>,
    pub overall: Status,
}

fn aggregate(per_node: &[Verdict]) -> Status {
    if per_node.iter().any(|v| v.status == Status::NotIdentifiable) {
        Status::NotIdentifiable
    } else if per_node.iter().all(|v| v.status == Status::Identifiable) {
        Status::Identifiable
    } else {
        Status::Inconclusive
    }
}

pub fn decide_node(g: &DiGraph, i: Vertex, c: &NodeSet) -> Result<Verdict> {
    g.check_set(c)?;
    let out = g.out_neighbors(i)?;
    let m = out.len();
    let verdict = |status, certificate| Verdict {
        node: i,
        out_neighbors: out.clone(),
        status,
        certificate,
    };
    let flow = max_disjoint_paths(g, &out, c)?;
    if flow.count < m {
        return Ok(verdict(
            Status::NotIdentifiable,
            Certificate::PathDeficiency {
                max_paths: flow.count,
                required: m,
                witness: flow.witness,
            },
        ));
    }
    Ok(match exists_constrained_set(g, &out, c, m)? {
        Some(w) => verdict(Status::Identifiable, Certificate::Constrained(w)),
        None => verdict(Status::Inconclusive, Certificate::None),
    })
}

pub fn decide_graph(g: &DiGraph, c: &NodeSet, exec: Execution) -> Result<GraphVerdict> {
    g.check_set(c)?;
    let nodes: Vec<Vertex> = (1..=g.n()).collect();
    let per_node = exec.try_map(&nodes, |&i| decide_node(g, i, c))?;
    let overall = aggregate(&per_node);
    Ok(GraphVerdict { per_node, overall })
}

fn all_identifiable(g: &DiGraph, c: &NodeSet) -> Result<bool> {
    for i in 1..=g.n() {
        if decide_node(g, i, c)?.status != Status::Identifiable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every measured set of size `k` (lexicographic) under which the whole
/// graph is certified identifiable.
pub fn suggest_measurement_sets(g: &DiGraph, k: usize, config: &Config) -> Result<Vec<NodeSet>> {
    if g.n() > config.max_exact_n {
        return Err(Error::SizeLimit {
            size: g.n(),
            limit: config.max_exact_n,
        });
    }
    if k == 0 || k > g.n() {
        return Err(Error::Precondition(format!(
            "k = {k} outside 1..={}",
            g.n()
        )));
    }
    let candidates = g.vertices().combinations(k);
    let keep = config
        .execution
        .try_map(&candidates, |c| all_identifiable(g, c))?;
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(c, ok)| ok.then_some(c))
        .collect())
}

/// Number of vertex-disjoint path sets joining one pair of endpoint sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub sources: NodeSet,
    pub targets: NodeSet,
    /// `None` when the enumeration cap was hit.
    pub count: Option<usize>,
}

/// For node `i`, counts the path sets between every source/target subset
/// pair that the constrained-set search considers and that admits at least
/// one path set. Shared vertices are handled as in the search: they take
/// part as length-zero paths and are excluded from the counted pairs.
pub fn pair_counts(g: &DiGraph, i: Vertex, c: &NodeSet, cap: usize) -> Result<Vec<PairCount>> {
    g.check_set(c)?;
    let out = g.out_neighbors(i)?;
    let shared = out.intersection(c);
    let sources = out.difference(&shared);
    let targets = c.difference(&shared);
    let reduced = out.len() - shared.len();
    if reduced == 0 {
        return Ok(Vec::new());
    }
    let h = g.isolate(&shared);
    let mut counts = Vec::new();
    for t in targets.combinations(reduced) {
        for s in sources.combinations(reduced) {
            let count = match enumerate_path_sets(&h, &s, &t, reduced, cap, Mode::Exact) {
                Ok(sets) if sets.is_empty() => continue,
                Ok(sets) => Some(sets.len()),
                Err(Error::CapExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            counts.push(PairCount {
                sources: s,
                targets: t.clone(),
                count,
            });
        }
    }
    Ok(counts)
}
