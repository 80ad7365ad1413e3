//! Exact algebraic cross-checks on concrete network matrices: admissibility,
//! the rank criterion on the measured block of `T = (I - G)^{-1}`, the
//! complementary-minor (Jacobi) equivalence, and explicit counterexamples
//! `Ḡ = G - v e_iᵀ` that share the measured transfer matrix with `G`.

use std::collections::BTreeMap;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DiGraph, GraphJson, NodeSet, Vertex};
use crate::identify::{Status, Verdict};
use crate::ratfun::{QMatrix, RatMatrix, RationalFunction};
use crate::Config;

/// Number of random principal minors checked when the graph is too large
/// for exhaustive enumeration.
const SAMPLED_MINORS: usize = 256;

/// Evaluation points used by the probabilistic rank fallback.
const RANK_POINTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    /// Every entry proper.
    pub proper: bool,
    /// Nonzero pattern equals the edge set.
    pub consistent: bool,
    /// Every principal minor of `lim (I - G)` nonzero.
    pub well_posed: bool,
    /// `well_posed` was established from sampled minors only.
    pub probabilistic: bool,
    pub diagnostics: Vec<String>,
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        self.proper && self.consistent && self.well_posed
    }
}

/// A network matrix `G` together with its graph and admissibility record.
/// Entry `G[j][i]` (0-based `j-1, i-1`) is the transfer function on edge `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkMatrix {
    pub g: RatMatrix,
    pub graph: DiGraph,
    pub admissibility: Admissibility,
}

impl NetworkMatrix {
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Transfer function on edge `(i, j)`.
    pub fn edge(&self, i: Vertex, j: Vertex) -> &RationalFunction {
        &self.g[(j - 1, i - 1)]
    }

    pub fn i_minus_g(&self) -> RatMatrix {
        RatMatrix::identity(self.n()).sub(&self.g)
    }

    /// `T = (I - G)^{-1}`.
    pub fn transfer(&self) -> Result<RatMatrix> {
        self.i_minus_g().inverse()
    }

    fn require_admissible(&self) -> Result<()> {
        if self.admissibility.is_admissible() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "network matrix is not admissible: {}",
                self.admissibility.diagnostics.join("; ")
            )))
        }
    }
}

fn indices(s: &NodeSet) -> Vec<usize> {
    s.iter().map(|v| v - 1).collect()
}

fn principal_minors_nonzero(l: &QMatrix, max_exact_n: usize) -> (bool, bool, Option<Vec<usize>>) {
    let n = l.rows();
    let lower = (0..n).all(|r| (r + 1..n).all(|c| l[(r, c)].is_zero()));
    let upper = (0..n).all(|r| (0..r).all(|c| l[(r, c)].is_zero()));
    if lower || upper {
        // Triangular: every principal minor is a product of diagonal entries.
        let bad = (0..n).find(|&k| l[(k, k)].is_zero());
        return (bad.is_none(), false, bad.map(|k| vec![k]));
    }
    let check = |set: &[usize]| !l.submatrix(set, set).determinant().is_zero();
    if n <= max_exact_n {
        for mask in 1u32..(1u32 << n) {
            let set: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
            if !check(&set) {
                return (false, false, Some(set));
            }
        }
        (true, false, None)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_MINORS {
            let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            if !set.is_empty() && !check(&set) {
                return (false, true, Some(set));
            }
        }
        (true, true, None)
    }
}

/// Checks the three admissibility properties of `g` against `graph`.
/// Failures are recorded in the diagnostics rather than returned as errors.
pub fn validate_admissible(
    g: RatMatrix,
    graph: &DiGraph,
    max_exact_n: usize,
) -> Result<NetworkMatrix> {
    let n = graph.n();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Precondition(format!(
            "network matrix is {}x{}, graph has {n} vertices",
            g.rows(),
            g.cols()
        )));
    }
    let mut diagnostics = Vec::new();
    let mut proper = true;
    let mut consistent = true;
    for ((r, c), f) in g.entries() {
        let (i, j) = (c + 1, r + 1);
        if !f.is_proper() {
            proper = false;
            diagnostics.push(format!("G[{j},{i}] = {f} is not proper"));
        }
        if f.is_zero() == graph.has_edge(i, j) {
            consistent = false;
            if f.is_zero() {
                diagnostics.push(format!("G[{j},{i}] is zero on edge ({i},{j})"));
            } else {
                diagnostics.push(format!(
                    "G[{j},{i}] = {f} is nonzero but ({i},{j}) is not an edge"
                ));
            }
        }
    }
    let (well_posed, probabilistic) = if proper {
        let lim = RatMatrix::identity(n).sub(&g).limit_at_infinity()?;
        let (ok, probabilistic, witness) = principal_minors_nonzero(&lim, max_exact_n);
        if let Some(set) = witness {
            let set: Vec<usize> = set.iter().map(|k| k + 1).collect();
            diagnostics.push(format!("principal minor {set:?} of lim(I-G) vanishes"));
        }
        (ok, probabilistic)
    } else {
        diagnostics.push("lim(I-G) undefined for an improper matrix".into());
        (false, false)
    };
    Ok(NetworkMatrix {
        g,
        graph: graph.clone(),
        admissibility: Admissibility {
            proper,
            consistent,
            well_posed,
            probabilistic,
            diagnostics,
        },
    })
}

/// How edge weights are chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SampleMode {
    /// Every edge gets `a / (z - b)` with `a ∈ [-9, 9] \ {0}`, `b ∈ [-9, 9]`.
    #[default]
    Generic,
    /// Listed edges `(i, j)` get the given weight; the rest are generic.
    Adversarial(BTreeMap<(Vertex, Vertex), RationalFunction>),
}

/// Draws a network matrix consistent with `graph`, deterministic in `seed`.
pub fn sample_admissible(
    graph: &DiGraph,
    seed: u64,
    mode: &SampleMode,
    max_exact_n: usize,
) -> Result<NetworkMatrix> {
    let n = graph.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = RatMatrix::zeros(n, n);
    for (i, j) in graph.edges() {
        let a = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let b = rng.gen_range(-9..=9);
        g[(j - 1, i - 1)] = RationalFunction::first_order(a, b);
    }
    if let SampleMode::Adversarial(assign) = mode {
        for (&(i, j), f) in assign {
            if !graph.has_edge(i, j) {
                return Err(Error::Invariant(format!(
                    "assignment on non-edge ({i},{j})"
                )));
            }
            if f.is_zero() {
                return Err(Error::Invariant(format!(
                    "zero assignment on edge ({i},{j})"
                )));
            }
            if !f.is_proper() {
                return Err(Error::Invariant(format!(
                    "improper assignment {f} on edge ({i},{j})"
                )));
            }
            g[(j - 1, i - 1)] = f.clone();
        }
    }
    let nm = validate_admissible(g, graph, max_exact_n)?;
    if !nm.admissibility.is_admissible() {
        return Err(Error::Invariant(nm.admissibility.diagnostics.join("; ")));
    }
    Ok(nm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTest {
    pub rank: usize,
    pub required: usize,
    pub full: bool,
    pub probabilistic: bool,
}

fn measured_block(t: &RatMatrix, c: &NodeSet, out: &NodeSet) -> RatMatrix {
    t.submatrix(&indices(c), &indices(out))
}

/// Rank of `T[C, N_i]` compared with `|N_i|`.
///
/// Exact for `n ≤ max_exact_n`; larger networks are evaluated at random
/// points and flagged as probabilistic.
pub fn rank_test(nm: &NetworkMatrix, i: Vertex, c: &NodeSet, config: &Config) -> Result<RankTest> {
    nm.require_admissible()?;
    nm.graph.check_set(c)?;
    let out = nm.graph.out_neighbors(i)?;
    let required = out.len();
    if required == 0 {
        return Ok(RankTest {
            rank: 0,
            required,
            full: true,
            probabilistic: false,
        });
    }
    let (rank, probabilistic) = if nm.n() <= config.max_exact_n {
        (
            measured_block(&nm.transfer()?, c, &out).normal_rank()?,
            false,
        )
    } else {
        (sampled_block_rank(nm, c, &out)?, true)
    };
    Ok(RankTest {
        rank,
        required,
        full: rank == required,
        probabilistic,
    })
}

fn sampled_block_rank(nm: &NetworkMatrix, c: &NodeSet, out: &NodeSet) -> Result<usize> {
    let a = nm.i_minus_g();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut best = 0;
    let mut tried = 0;
    let mut attempts = 0;
    while tried < RANK_POINTS {
        attempts += 1;
        if attempts > 100 * RANK_POINTS {
            return Err(Error::Singular);
        }
        let x = BigRational::from_integer(BigInt::from(rng.gen_range(-1_000_000i64..=1_000_000)));
        let Some(ax) = a.eval(&x) else { continue };
        let Ok(inv) = invert_q(&ax) else { continue };
        best = best.max(inv.submatrix(&indices(c), &indices(out)).rank());
        tried += 1;
    }
    Ok(best)
}

fn invert_q(a: &QMatrix) -> Result<QMatrix> {
    let n = a.rows();
    let mut aug = QMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n + r)] = BigRational::one();
    }
    for k in 0..n {
        let p = (k..n)
            .find(|&r| !aug[(r, k)].is_zero())
            .ok_or(Error::Singular)?;
        for c in 0..2 * n {
            let tmp = aug[(p, c)].clone();
            aug[(p, c)] = aug[(k, c)].clone();
            aug[(k, c)] = tmp;
        }
        let inv = aug[(k, k)].recip();
        for c in 0..2 * n {
            aug[(k, c)] = &aug[(k, c)] * &inv;
        }
        for r in 0..n {
            if r != k && !aug[(r, k)].is_zero() {
                let f = aug[(r, k)].clone();
                for c in 0..2 * n {
                    let v = &f * &aug[(k, c)];
                    aug[(r, c)] -= v;
                }
            }
        }
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Ok(aug.submatrix(&rows, &cols))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiCheck {
    /// `det T[C, N_i] ≠ 0`.
    pub lhs_nonzero: bool,
    /// `det (I - G)[N_i^c, C^c] ≠ 0`.
    pub rhs_nonzero: bool,
    pub agree: bool,
    /// `det T[C,N] · det(I-G) = (-1)^(ΣC+ΣN) · det (I-G)[N^c, C^c]` holds exactly.
    pub identity_holds: bool,
}

/// Square case only: `|C| = |N_i|`.
pub fn jacobi_check(nm: &NetworkMatrix, i: Vertex, c: &NodeSet) -> Result<JacobiCheck> {
    nm.require_admissible()?;
    nm.graph.check_set(c)?;
    let out = nm.graph.out_neighbors(i)?;
    if c.len() != out.len() {
        return Err(Error::Precondition(format!(
            "|C| = {} differs from |N_{i}| = {}",
            c.len(),
            out.len()
        )));
    }
    let a = nm.i_minus_g();
    let t = a.inverse()?;
    let lhs = measured_block(&t, c, &out).determinant()?;
    let out_c = nm.graph.complement(&out)?;
    let c_c = nm.graph.complement(c)?;
    let rhs = a
        .submatrix(&indices(&out_c), &indices(&c_c))
        .determinant()?;
    let det_a = a.determinant()?;
    let parity = (c.iter().sum::<usize>() + out.iter().sum::<usize>()) % 2;
    let signed_rhs = if parity == 0 { rhs.clone() } else { -&rhs };
    Ok(JacobiCheck {
        lhs_nonzero: !lhs.is_zero(),
        rhs_nonzero: !rhs.is_zero(),
        agree: lhs.is_zero() == rhs.is_zero(),
        identity_holds: &lhs * &det_a == signed_rhs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferComparison {
    /// The measured rows of both inverses coincide.
    pub rows_equal: bool,
    /// `C T_a (G_a - G_b) = 0`.
    pub annihilates: bool,
}

pub fn compare_transfer(
    a: &NetworkMatrix,
    b: &NetworkMatrix,
    c: &NodeSet,
) -> Result<TransferComparison> {
    if a.n() != b.n() {
        return Err(Error::Precondition(
            "network matrices differ in size".into(),
        ));
    }
    a.graph.check_set(c)?;
    let rows = indices(c);
    let all: Vec<usize> = (0..a.n()).collect();
    let ta = a.transfer()?.submatrix(&rows, &all);
    let tb = b.transfer()?.submatrix(&rows, &all);
    let d = a.g.sub(&b.g);
    Ok(TransferComparison {
        rows_equal: ta == tb,
        annihilates: ta.mul(&d).is_zero(),
    })
}

/// Whether `C(I - G_a)^{-1} = C(I - G_b)^{-1}`, computed by two routes that
/// must agree.
pub fn transfer_equal(a: &NetworkMatrix, b: &NetworkMatrix, c: &NodeSet) -> Result<bool> {
    let cmp = compare_transfer(a, b, c)?;
    if cmp.rows_equal != cmp.annihilates {
        return Err(Error::Inconsistent(format!(
            "row comparison says {}, C·T·D = 0 says {}",
            cmp.rows_equal, cmp.annihilates
        )));
    }
    Ok(cmp.rows_equal)
}

/// A second admissible network matrix that no measurement on `C` can tell
/// apart from the first, yet differs in column `node`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub g: NetworkMatrix,
    pub g_bar: NetworkMatrix,
    pub node: Vertex,
    pub measured: NodeSet,
    /// Kernel vector of `T[C, N_i]`, indexed like `N_i`.
    pub kernel_vector: Vec<RationalFunction>,
    /// Full-length perturbation; zero outside `N_i`.
    pub v: Vec<RationalFunction>,
    pub alpha: BigRational,
    pub delay: usize,
}

impl Counterexample {
    /// Re-checks every defining property from scratch.
    pub fn verify(&self) -> Result<bool> {
        let col_differs = (0..self.g.n())
            .any(|r| self.g.g[(r, self.node - 1)] != self.g_bar.g[(r, self.node - 1)]);
        Ok(self.g_bar.admissibility.is_admissible()
            && col_differs
            && transfer_equal(&self.g, &self.g_bar, &self.measured)?)
    }
}

fn alpha_sequence() -> impl Iterator<Item = i64> {
    (1i64..).flat_map(|k| [k, -k])
}

/// Builds `Ḡ = G - v e_iᵀ` from a kernel vector of the rank-deficient block
/// `T[C, N_i]`: the vector is delayed by the smallest `z^{-k}` that makes it
/// strictly proper and scaled by the first `α` in `1, -1, 2, -2, ..` that
/// keeps every edge weight out of `i` nonzero.
pub fn build_counterexample(
    nm: &NetworkMatrix,
    i: Vertex,
    c: &NodeSet,
    config: &Config,
) -> Result<Counterexample> {
    nm.require_admissible()?;
    let out = nm.graph.out_neighbors(i)?;
    if out.is_empty() {
        return Err(Error::Precondition(format!(
            "node {i} has no out-neighbours: nothing to identify"
        )));
    }
    let test = rank_test(nm, i, c, config)?;
    if test.full {
        return Err(Error::Precondition(format!(
            "T[C, N_{i}] already has full rank {}",
            test.rank
        )));
    }
    let block = measured_block(&nm.transfer()?, c, &out);
    let kernel =
        block.kernel_basis()?.into_iter().next().ok_or_else(|| {
            Error::Inconsistent("rank-deficient block has an empty kernel".into())
        })?;

    let max_rel = kernel
        .iter()
        .filter_map(RationalFunction::relative_degree)
        .max();
    let delay = max_rel.map_or(0, |d| (d + 1).max(0) as usize);
    let delayed: Vec<RationalFunction> = kernel
        .iter()
        .map(|w| w * &RationalFunction::z_pow(-(delay as i64)))
        .collect();

    let column: Vec<RationalFunction> = out.iter().map(|j| nm.edge(i, j).clone()).collect();
    let alpha = alpha_sequence()
        .take(2 * out.len() + 2)
        .map(|a| BigRational::from_integer(BigInt::from(a)))
        .find(|a| {
            column
                .iter()
                .zip(&delayed)
                .all(|(g, w)| !(g - &w.scale(a)).is_zero())
        })
        .ok_or_else(|| Error::Inconsistent("no admissible scale factor found".into()))?;

    let n = nm.n();
    let mut v = vec![RationalFunction::zero(); n];
    for (j, w) in out.iter().zip(&delayed) {
        v[j - 1] = w.scale(&alpha);
    }
    let mut g_bar = nm.g.clone();
    for r in 0..n {
        g_bar[(r, i - 1)] = &g_bar[(r, i - 1)] - &v[r];
    }
    let g_bar = validate_admissible(g_bar, &nm.graph, config.max_exact_n)?;
    let cx = Counterexample {
        g: nm.clone(),
        g_bar,
        node: i,
        measured: c.clone(),
        kernel_vector: kernel,
        v,
        alpha,
        delay,
    };
    if !cx.verify()? {
        return Err(Error::Inconsistent(
            "constructed counterexample failed re-verification".into(),
        ));
    }
    Ok(cx)
}

/// Observed ranks of `T[C, N_i]` over a batch of generic samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEvidence {
    pub node: Vertex,
    pub required: usize,
    pub samples: usize,
    /// `(rank, count)` pairs in increasing rank order.
    pub ranks: Vec<(usize, usize)>,
}

impl RankEvidence {
    pub fn full_count(&self) -> usize {
        self.ranks
            .iter()
            .filter(|(r, _)| *r == self.required)
            .map(|(_, k)| k)
            .sum()
    }

    /// Whether the samples contradict `status`. Inconclusive verdicts make
    /// no claim, so any evidence is consistent with them.
    pub fn consistent_with(&self, status: Status) -> bool {
        match status {
            Status::Identifiable => self.full_count() == self.samples,
            Status::NotIdentifiable => self.full_count() == 0,
            Status::Inconclusive => true,
        }
    }
}

/// Runs generic samples with seeds `seeds` and records, for every node,
/// the rank of its measured block.
pub fn rank_evidence(
    graph: &DiGraph,
    c: &NodeSet,
    seeds: Range<u64>,
    config: &Config,
) -> Result<Vec<RankEvidence>> {
    graph.check_set(c)?;
    let seeds: Vec<u64> = seeds.collect();
    let per_seed = config
        .execution
        .try_map(&seeds, |&seed| -> Result<Vec<usize>> {
            let nm = sample_admissible(graph, seed, &SampleMode::Generic, config.max_exact_n)?;
            (1..=graph.n())
                .map(|i| rank_test(&nm, i, c, config).map(|t| t.rank))
                .collect()
        })?;
    Ok((1..=graph.n())
        .map(|i| {
            let mut hist = BTreeMap::new();
            for ranks in &per_seed {
                *hist.entry(ranks[i - 1]).or_insert(0) += 1;
            }
            RankEvidence {
                node: i,
                required: graph.succ(i).len(),
                samples: seeds.len(),
                ranks: hist.into_iter().collect(),
            }
        })
        .collect())
}

/// Checks a batch of verdicts against sampled rank evidence.
pub fn verdicts_consistent(verdicts: &[Verdict], evidence: &[RankEvidence]) -> bool {
    verdicts
        .iter()
        .zip(evidence)
        .all(|(v, e)| v.node == e.node && e.consistent_with(v.status))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobiSummary {
    pub instances: usize,
    /// Instances where both determinants vanish together.
    pub agreed: usize,
    /// Instances where the exact complementary-minor identity holds.
    pub identity_held: usize,
}

impl JacobiSummary {
    pub fn all_passed(&self) -> bool {
        self.agreed == self.instances && self.identity_held == self.instances
    }
}

/// One square-case Jacobi check per seed: a generic sample, a random node
/// with at least one out-neighbour, and a random measured set of matching
/// size. Graphs without edges yield no instances.
pub fn jacobi_sweep(graph: &DiGraph, seeds: Range<u64>, config: &Config) -> Result<JacobiSummary> {
    let nodes: Vec<Vertex> = (1..=graph.n())
        .filter(|&i| !graph.succ(i).is_empty())
        .collect();
    if nodes.is_empty() {
        return Ok(JacobiSummary {
            instances: 0,
            agreed: 0,
            identity_held: 0,
        });
    }
    let seeds: Vec<u64> = seeds.collect();
    let checks = config.execution.try_map(&seeds, |&seed| {
        let nm = sample_admissible(graph, seed, &SampleMode::Generic, config.max_exact_n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let i = nodes[rng.gen_range(0..nodes.len())];
        let m = graph.succ(i).len();
        let mut pool: Vec<Vertex> = (1..=graph.n()).collect();
        for k in 0..m {
            let pick = rng.gen_range(k..pool.len());
            pool.swap(k, pick);
        }
        let c: NodeSet = pool[..m].iter().copied().collect();
        jacobi_check(&nm, i, &c)
    })?;
    Ok(JacobiSummary {
        instances: checks.len(),
        agreed: checks.iter().filter(|j| j.agree).count(),
        identity_held: checks.iter().filter(|j| j.identity_holds).count(),
    })
}

/// Wire form of a sampling fixture.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureJson {
    pub graph: GraphJson,
    #[serde(default)]
    pub assignments: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_mode() -> String {
    "generic".into()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub graph: DiGraph,
    pub seed: u64,
    pub mode: SampleMode,
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FixtureJson =
            serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
        let graph = DiGraph::try_from(raw.graph)?;
        let mode = match raw.mode.as_str() {
            "generic" => {
                if !raw.assignments.is_empty() {
                    return Err(Error::Syntax("generic fixtures take no assignments".into()));
                }
                SampleMode::Generic
            }
            "adversarial" => {
                let mut map = BTreeMap::new();
                for (key, lit) in raw.assignments {
                    let (i, j) = key.split_once("->").ok_or_else(|| {
                        Error::Syntax(format!("assignment key '{key}' is not 'i->j'"))
                    })?;
                    let parse = |s: &str| {
                        s.trim()
                            .parse::<Vertex>()
                            .map_err(|_| Error::Syntax(format!("bad vertex in '{key}'")))
                    };
                    map.insert((parse(i)?, parse(j)?), lit.parse::<RationalFunction>()?);
                }
                SampleMode::Adversarial(map)
            }
            other => return Err(Error::Syntax(format!("unknown fixture mode '{other}'"))),
        };
        Ok(Fixture {
            graph,
            seed: raw.seed,
            mode,
        })
    }

    pub fn sample(&self, max_exact_n: usize) -> Result<NetworkMatrix> {
        sample_admissible(&self.graph, self.seed, &self.mode, max_exact_n)
    }
}
