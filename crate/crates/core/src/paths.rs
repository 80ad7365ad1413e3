//! Vertex-disjoint paths between node sets: maximum path count (unit-capacity
//! max-flow on the node-split digraph), exhaustive enumeration of path sets,
//! and the search for a constrained (unique) path set.
//!
//! Overlap convention: vertices shared by the source and target sets count
//! as length-zero paths. The remaining paths run from `v1 \ v2` to `v2 \ v1`
//! and never touch a shared vertex.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiGraph, NodeSet, Vertex};

/// Default bound on the number of path sets an enumeration may produce.
pub const DEFAULT_CAP: usize = 1_000_000;

/// A simple path given by its vertex sequence. A single vertex is a
/// length-zero path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Invariant("path must contain a vertex".into()));
        }
        let distinct: NodeSet = vertices.iter().copied().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::Invariant(format!(
                "path {vertices:?} repeats a vertex"
            )));
        }
        Ok(Path(vertices))
    }

    pub fn trivial(v: Vertex) -> Self {
        Path(vec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn start(&self) -> Vertex {
        self.0[0]
    }

    pub fn end(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    /// Number of edges. A path always has a vertex; see [`Path::is_trivial`].
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn is_in(&self, g: &DiGraph) -> bool {
        self.0.iter().all(|&v| g.check_vertex(v).is_ok())
            && self.edges().all(|(i, j)| g.has_edge(i, j))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "→")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Pairwise vertex-disjoint paths, stored sorted by starting vertex.
///
/// Because the paths are disjoint, two path sets compare equal exactly when
/// they have the same edges and the same length-zero paths.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Path>", into = "Vec<Path>")]
pub struct PathSet {
    paths: Vec<Path>,
    start_nodes: NodeSet,
    end_nodes: NodeSet,
}

impl PathSet {
    pub fn new(mut paths: Vec<Path>) -> Result<Self> {
        paths.sort();
        let mut seen = NodeSet::new();
        for p in &paths {
            let vs: NodeSet = p.vertices().iter().copied().collect();
            if !vs.intersection(&seen).is_empty() {
                return Err(Error::Invariant(format!(
                    "path {p} is not vertex-disjoint from the others"
                )));
            }
            seen = seen.union(&vs);
        }
        let start_nodes = paths.iter().map(Path::start).collect();
        let end_nodes = paths.iter().map(Path::end).collect();
        Ok(PathSet {
            paths,
            start_nodes,
            end_nodes,
        })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn start_nodes(&self) -> &NodeSet {
        &self.start_nodes
    }

    pub fn end_nodes(&self) -> &NodeSet {
        &self.end_nodes
    }

    /// Sorted edge list of all paths.
    pub fn edge_set(&self) -> Vec<(Vertex, Vertex)> {
        let mut e: Vec<_> = self.paths.iter().flat_map(|p| p.edges()).collect();
        e.sort_unstable();
        e
    }

    /// Structural re-check: paths lie in `g` and are disjoint.
    pub fn is_valid_in(&self, g: &DiGraph) -> bool {
        self.paths.iter().all(|p| p.is_in(g)) && PathSet::new(self.paths.clone()).is_ok()
    }

    /// The set with its length-zero paths removed.
    pub fn nontrivial(&self) -> PathSet {
        PathSet::new(
            self.paths
                .iter()
                .filter(|p| !p.is_trivial())
                .cloned()
                .collect(),
        )
        .expect("subset of a disjoint set is disjoint")
    }

    fn merged(&self, extra: impl IntoIterator<Item = Path>) -> Result<PathSet> {
        PathSet::new(self.paths.iter().cloned().chain(extra).collect())
    }
}

impl TryFrom<Vec<Path>> for PathSet {
    type Error = Error;
    fn try_from(paths: Vec<Path>) -> Result<Self> {
        PathSet::new(paths)
    }
}

impl From<PathSet> for Vec<Path> {
    fn from(p: PathSet) -> Self {
        p.paths
    }
}

impl fmt::Display for PathSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, p) in self.paths.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointPaths {
    pub count: usize,
    pub witness: PathSet,
}

/// Certificate that a constrained set of vertex-disjoint paths exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstrainedWitness {
    /// Full witness, including the length-zero paths on shared vertices.
    pub path_set: PathSet,
    /// Starting nodes of the non-trivial paths.
    pub source_subset: NodeSet,
    /// End nodes of the non-trivial paths.
    pub target_subset: NodeSet,
    /// Vertices in both the source and the target set.
    pub shared: NodeSet,
    /// Number of path sets between `source_subset` and `target_subset`
    /// avoiding `shared`; always 1 for a valid witness.
    pub enumeration_count: usize,
}

impl ConstrainedWitness {
    /// Recomputes uniqueness by enumeration.
    pub fn verify(&self, g: &DiGraph) -> Result<bool> {
        let h = g.isolate(&self.shared);
        let m = self.source_subset.len();
        let sets = enumerate_path_sets(
            &h,
            &self.source_subset,
            &self.target_subset,
            m,
            DEFAULT_CAP,
            Mode::Exact,
        )?;
        let trivial_ok = self
            .path_set
            .paths()
            .iter()
            .filter(|p| p.is_trivial())
            .map(Path::start)
            .collect::<NodeSet>()
            == self.shared;
        Ok(trivial_ok
            && self.path_set.is_valid_in(g)
            && sets.len() == 1
            && sets[0] == self.path_set.nontrivial())
    }
}

/// Residual network for unit-capacity max-flow on the node-split digraph.
struct SplitFlow {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    source: usize,
    sink: usize,
}

impl SplitFlow {
    fn node_in(v: Vertex) -> usize {
        2 * (v - 1)
    }

    fn node_out(v: Vertex) -> usize {
        2 * (v - 1) + 1
    }

    fn build(g: &DiGraph, sources: &NodeSet, targets: &NodeSet, blocked: &NodeSet) -> Self {
        let n = g.n();
        let mut f = SplitFlow {
            head: vec![Vec::new(); 2 * n + 2],
            to: Vec::new(),
            cap: Vec::new(),
            source: 2 * n,
            sink: 2 * n + 1,
        };
        for s in sources.iter() {
            f.arc(f.source, Self::node_in(s));
        }
        for v in 1..=n {
            if blocked.contains(v) {
                continue;
            }
            f.arc(Self::node_in(v), Self::node_out(v));
            if targets.contains(v) {
                f.arc(Self::node_out(v), f.sink);
            }
            for &w in g.succ(v) {
                if !blocked.contains(w) {
                    f.arc(Self::node_out(v), Self::node_in(w));
                }
            }
        }
        f
    }

    fn arc(&mut self, u: usize, v: usize) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(1);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Shortest augmenting paths; arcs are scanned in insertion order, which
    /// follows increasing vertex index.
    fn run(&mut self) -> usize {
        let mut flow = 0;
        let nodes = self.head.len();
        loop {
            let mut parent = vec![usize::MAX; nodes];
            let mut seen = vec![false; nodes];
            seen[self.source] = true;
            let mut queue = VecDeque::from([self.source]);
            while let Some(u) = queue.pop_front() {
                if u == self.sink {
                    break;
                }
                for &e in &self.head[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && !seen[v] {
                        seen[v] = true;
                        parent[v] = e;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[self.sink] {
                return flow;
            }
            let mut v = self.sink;
            while v != self.source {
                let e = parent[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            flow += 1;
        }
    }

    /// Decomposes the flow into vertex sequences of the original graph.
    fn paths(&self) -> Vec<Vec<Vertex>> {
        let mut used = vec![false; self.to.len()];
        let mut out = Vec::new();
        let carries = |e: usize| e.is_multiple_of(2) && self.cap[e] == 0;
        for &e0 in &self.head[self.source] {
            if !carries(e0) {
                continue;
            }
            let mut verts = Vec::new();
            let mut u = self.to[e0];
            while u != self.sink {
                if u.is_multiple_of(2) {
                    verts.push(u / 2 + 1);
                }
                let e = *self.head[u]
                    .iter()
                    .find(|&&e| carries(e) && !used[e])
                    .expect("flow conservation");
                used[e] = true;
                u = self.to[e];
            }
            out.push(verts);
        }
        out
    }
}

/// Restricts a raw flow path so its interior avoids every source and target.
fn trim(mut verts: Vec<Vertex>, sources: &NodeSet, targets: &NodeSet) -> Path {
    if let Some(end) = verts.iter().position(|&v| targets.contains(v)) {
        verts.truncate(end + 1);
    }
    if let Some(start) = verts.iter().rposition(|&v| sources.contains(v)) {
        verts.drain(..start);
    }
    Path(verts)
}

fn flow_paths(g: &DiGraph, sources: &NodeSet, targets: &NodeSet, blocked: &NodeSet) -> Vec<Path> {
    let mut f = SplitFlow::build(g, sources, targets, blocked);
    f.run();
    f.paths()
        .into_iter()
        .map(|p| trim(p, sources, targets))
        .collect()
}

/// Maximum number of vertex-disjoint paths from `v1` to `v2`, with a
/// witness realizing it.
pub fn max_disjoint_paths(g: &DiGraph, v1: &NodeSet, v2: &NodeSet) -> Result<DisjointPaths> {
    g.check_set(v1)?;
    g.check_set(v2)?;
    let shared = v1.intersection(v2);
    let sources = v1.difference(&shared);
    let targets = v2.difference(&shared);
    let paths = flow_paths(g, &sources, &targets, &shared);
    let witness = PathSet::new(paths)?.merged(shared.iter().map(Path::trivial))?;
    Ok(DisjointPaths {
        count: witness.len(),
        witness,
    })
}

/// Which starting nodes an enumerated path set may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Starting nodes are exactly `v1` (so `m` must equal `|v1|`).
    Exact,
    /// Starting nodes are any `m`-subset of `v1`.
    Subset,
}

struct Enumerator<'a> {
    g: &'a DiGraph,
    sources: &'a [Vertex],
    v1: &'a NodeSet,
    v2: &'a NodeSet,
    mode: Mode,
    used: Vec<bool>,
    stack: Vec<Path>,
    found: Vec<PathSet>,
    limit: usize,
}

impl Enumerator<'_> {
    fn full(&self) -> bool {
        self.found.len() >= self.limit
    }

    fn choose(&mut self, idx: usize, remaining: usize) {
        if self.full() {
            return;
        }
        if remaining == 0 {
            let set = PathSet::new(self.stack.clone()).expect("enumerated paths are disjoint");
            self.found.push(set);
            return;
        }
        let left = self.sources.len() - idx;
        if left < remaining {
            return;
        }
        let s = self.sources[idx];
        if !self.used[s] {
            self.used[s] = true;
            let mut walk = vec![s];
            self.extend(&mut walk, idx, remaining);
            self.used[s] = false;
        }
        if self.mode == Mode::Subset && left > remaining {
            self.choose(idx + 1, remaining);
        }
    }

    fn extend(&mut self, walk: &mut Vec<Vertex>, idx: usize, remaining: usize) {
        let u = *walk.last().expect("walk starts at a source");
        for &w in self.g.succ(u) {
            if self.full() {
                return;
            }
            if self.used[w] || self.v1.contains(w) {
                continue;
            }
            self.used[w] = true;
            walk.push(w);
            if self.v2.contains(w) {
                self.stack.push(Path(walk.clone()));
                self.choose(idx + 1, remaining - 1);
                self.stack.pop();
            } else {
                self.extend(walk, idx, remaining);
            }
            walk.pop();
            self.used[w] = false;
        }
    }
}

fn search(
    g: &DiGraph,
    v1: &NodeSet,
    v2: &NodeSet,
    m: usize,
    mode: Mode,
    limit: usize,
) -> Vec<PathSet> {
    if mode == Mode::Exact && m != v1.len() {
        return Vec::new();
    }
    let mut e = Enumerator {
        g,
        sources: v1.as_slice(),
        v1,
        v2,
        mode,
        used: vec![false; g.n() + 1],
        stack: Vec::new(),
        found: Vec::new(),
        limit,
    };
    e.choose(0, m);
    e.found
}

/// All distinct sets of exactly `m` vertex-disjoint paths from `v1` to `v2`.
///
/// Path interiors avoid `v1 ∪ v2`: each path ends at the first target it
/// reaches. In [`Mode::Exact`] this loses nothing, since every source starts
/// a path and every path ends at a distinct target. Fails with
/// [`Error::CapExceeded`] once more than `cap` sets are found.
pub fn enumerate_path_sets(
    g: &DiGraph,
    v1: &NodeSet,
    v2: &NodeSet,
    m: usize,
    cap: usize,
    mode: Mode,
) -> Result<Vec<PathSet>> {
    g.check_set(v1)?;
    g.check_set(v2)?;
    if cap == 0 {
        return Err(Error::Precondition(
            "enumeration cap must be at least 1".into(),
        ));
    }
    if !v1.intersection(v2).is_empty() {
        return Err(Error::Invariant(format!(
            "source set {v1} and target set {v2} overlap"
        )));
    }
    let found = search(g, v1, v2, m, mode, cap.saturating_add(1));
    if found.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(found)
}

/// Looks for a constrained set of `m` vertex-disjoint paths from `v1` to
/// `v2`: target subsets are scanned lexicographically, then source subsets,
/// and the first pair joined by exactly one path set wins.
pub fn exists_constrained_set(
    g: &DiGraph,
    v1: &NodeSet,
    v2: &NodeSet,
    m: usize,
) -> Result<Option<ConstrainedWitness>> {
    g.check_set(v1)?;
    g.check_set(v2)?;
    let shared = v1.intersection(v2);
    let sources = v1.difference(&shared);
    let targets = v2.difference(&shared);
    let reduced = m.saturating_sub(shared.len());
    let h = g.isolate(&shared);
    let trivial: Vec<Path> = shared.iter().map(Path::trivial).collect();

    let source_subsets = sources.combinations(reduced);
    for t in targets.combinations(reduced) {
        for s in &source_subsets {
            if reduced > 0 && flow_paths(&h, s, &t, &NodeSet::new()).len() < reduced {
                continue;
            }
            // Uniqueness only needs to know whether a second set exists.
            let sets = search(&h, s, &t, reduced, Mode::Exact, 2);
            if sets.len() == 1 {
                return Ok(Some(ConstrainedWitness {
                    path_set: sets[0].merged(trivial.iter().cloned())?,
                    source_subset: s.clone(),
                    target_subset: t,
                    shared,
                    enumeration_count: 1,
                }));
            }
        }
    }
    Ok(None)
}
