//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! with its runtime and limit; the process exits nonzero if any fails.

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use netident::report::Report;
use netident_core::identify::{decide_graph, decide_node, Status};
use netident_core::oracle::{self, build_counterexample, rank_test, transfer_equal, Fixture};
use netident_core::paths::{enumerate_path_sets, max_disjoint_paths, Mode};
use netident_core::ratfun::{det_via_cycle_families, RatMatrix, RationalFunction, WeightedDigraph};
use netident_core::{parse_graph, Config, DiGraph, Execution, NodeSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<(), String>;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn fixture_graph(name: &str) -> DiGraph {
    parse_graph(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

fn netident(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netident"))
        .args(args)
        .env_remove("NETIDENT_SEED")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Result<Value, String> {
    serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON: {e}"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn edge_set(paths: &Value) -> BTreeSet<(u64, u64)> {
    let mut edges = BTreeSet::new();
    for p in paths.as_array().into_iter().flatten() {
        let vs: Vec<u64> = p
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        edges.extend(vs.windows(2).map(|w| (w[0], w[1])));
    }
    edges
}

fn criterion_1() -> Check {
    let f = fixture_path("fig3.json");
    let out = netident(&[
        "check-node",
        f.to_str().unwrap(),
        "--node",
        "1",
        "--measured",
        "4,5",
        "--json",
    ]);
    ensure(
        out.status.code() == Some(0),
        format!("exit {:?}", out.status.code()),
    )?;
    let v = json_of(&out)?;
    let verdict = &v["verdict"];
    ensure(verdict["status"] == "Identifiable", "status")?;
    let cert = &verdict["certificate"];
    ensure(cert["kind"] == "constrained", "certificate kind")?;
    ensure(
        cert["path_set"] == serde_json::json!([[2, 4], [3, 5]]),
        format!("witness {}", cert["path_set"]),
    )?;
    ensure(cert["enumeration_count"] == 1, "enumeration count")
}

fn criterion_2() -> Check {
    let g = fixture_graph("fig1.json");
    let c = NodeSet::from([4, 5]);
    ensure(
        decide_node(&g, 1, &c).unwrap().status == Status::Inconclusive,
        "node 1 not inconclusive",
    )?;
    let f = fixture_path("fig1.json");
    let out = netident(&[
        "check-node",
        f.to_str().unwrap(),
        "--node",
        "1",
        "--measured",
        "4,5",
    ]);
    ensure(out.status.code() == Some(2), "CLI exit code")?;
    let sets = enumerate_path_sets(&g, &NodeSet::from([2, 3]), &c, 2, 1000, Mode::Exact).unwrap();
    ensure(sets.len() == 2, format!("{} path sets", sets.len()))?;

    let cfg = Config::default();
    let text = std::fs::read_to_string(fixture_path("fig1_equal_weights.json")).unwrap();
    let nm = Fixture::from_json(&text)
        .unwrap()
        .sample(cfg.max_exact_n)
        .unwrap();
    let t = rank_test(&nm, 1, &c, &cfg).unwrap();
    ensure(t.rank == 1 && !t.full, format!("rank {}", t.rank))?;
    let cx = build_counterexample(&nm, 1, &c, &cfg).map_err(|e| e.to_string())?;
    ensure(
        transfer_equal(&cx.g, &cx.g_bar, &c).unwrap(),
        "transfer rows differ",
    )?;
    ensure(
        cx.g.g.column(0) != cx.g_bar.g.column(0),
        "column 1 unchanged",
    )?;
    ensure(
        (1..5).all(|k| cx.g.g.column(k) == cx.g_bar.g.column(k)),
        "other columns changed",
    )?;
    ensure(
        cx.g_bar.admissibility.is_admissible(),
        "G_bar not admissible",
    )
}

fn criterion_3() -> Check {
    let f = fixture_path("fig2.json");
    let out = netident(&[
        "analyze",
        f.to_str().unwrap(),
        "--measured",
        "6,7,8",
        "--json",
    ]);
    ensure(
        out.status.code() == Some(0),
        format!("exit {:?}", out.status.code()),
    )?;
    let v = json_of(&out)?;
    ensure(v["overall"] == "Identifiable", "overall")?;
    let node1 = &v["verdicts"][0];
    ensure(node1["node"] == 1, "first verdict is not node 1")?;
    let expect: BTreeSet<(u64, u64)> = [(2, 4), (4, 6), (3, 5), (5, 7)].into_iter().collect();
    ensure(
        edge_set(&node1["certificate"]["path_set"]) == expect,
        "node-1 witness edges",
    )?;
    let g = fixture_graph("fig2.json");
    let sets = enumerate_path_sets(
        &g,
        &NodeSet::from([2, 3]),
        &NodeSet::from([7, 8]),
        2,
        1000,
        Mode::Exact,
    )
    .unwrap();
    ensure(
        sets.len() == 2,
        format!("pairing to {{7,8}} has {} path sets", sets.len()),
    )
}

/// Measured sets giving every verdict kind on the fixture graphs.
fn fixture_cases() -> Vec<(&'static str, NodeSet)> {
    vec![
        ("fig1.json", NodeSet::from([4, 5])),
        ("fig1.json", NodeSet::from([4])),
        ("fig2.json", NodeSet::from([6, 7, 8])),
        ("fig2.json", NodeSet::from([7, 8])),
        ("fig3.json", NodeSet::from([4, 5])),
        ("fig3.json", NodeSet::from([4])),
    ]
}

fn criterion_4() -> Check {
    let cfg = Config::default();
    let mut seen = BTreeSet::new();
    for (name, c) in fixture_cases() {
        let g = fixture_graph(name);
        let verdicts = decide_graph(&g, &c, Execution::Parallel).unwrap().per_node;
        let evidence = oracle::rank_evidence(&g, &c, 0..100, &cfg).unwrap();
        for (v, e) in verdicts.iter().zip(&evidence) {
            seen.insert(format!("{:?}", v.status));
            let full = e.full_count();
            match v.status {
                Status::Identifiable if full != 100 => {
                    return Err(format!("{name} {c} node {}: {full}/100 full rank", v.node))
                }
                Status::NotIdentifiable if full != 0 => {
                    return Err(format!("{name} {c} node {}: {full}/100 full rank", v.node))
                }
                _ => {}
            }
        }
    }
    ensure(seen.len() == 3, "fixture cases do not cover all verdicts")
}

fn criterion_5() -> Check {
    let cfg = Config::default();
    let mut instances = 0;
    for (name, seeds) in [
        ("fig1.json", 0..34),
        ("fig2.json", 34..67),
        ("fig3.json", 67..100),
    ] {
        let s = oracle::jacobi_sweep(&fixture_graph(name), seeds, &cfg).unwrap();
        ensure(s.all_passed(), format!("{name}: {s:?}"))?;
        instances += s.instances;
    }
    ensure(instances == 100, format!("{instances} instances"))
}

fn random_entry(rng: &mut ChaCha8Rng) -> RationalFunction {
    let a = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
    let b = rng.gen_range(-4..=4);
    match rng.gen_range(0..3) {
        0 => RationalFunction::from_int(a),
        1 => RationalFunction::first_order(a, b),
        _ => format!("(z+{b})/({a}*z^2+1)").parse().unwrap(),
    }
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..100 {
        let p = rng.gen_range(1..=6);
        let mut m = RatMatrix::zeros(p, p);
        for r in 0..p {
            for c in 0..p {
                if rng.gen_bool(0.4) {
                    m[(r, c)] = random_entry(&mut rng);
                }
            }
        }
        let chen = det_via_cycle_families(&WeightedDigraph::from_matrix(&m).unwrap(), 16).unwrap();
        let elim = m.determinant().unwrap();
        ensure(chen == elim, format!("matrix {k}: {chen} != {elim}"))?;
    }
    Ok(())
}

/// Whether some vertex of `from` reaches some vertex of `to` once `cut`
/// is deleted; a vertex in both sets reaches itself.
fn connected(g: &DiGraph, from: &NodeSet, to: &NodeSet, cut: u32) -> bool {
    let alive = |v: usize| cut & (1 << (v - 1)) == 0;
    let mut seen = vec![false; g.n() + 1];
    let mut queue: VecDeque<usize> = from.iter().filter(|&v| alive(v)).collect();
    for &v in &queue {
        seen[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        if to.contains(u) {
            return true;
        }
        for w in g.out_neighbors(u).unwrap().iter() {
            if alive(w) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

fn min_vertex_cut(g: &DiGraph, v1: &NodeSet, v2: &NodeSet) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&cut| !connected(g, v1, v2, cut))
        .map(|cut| cut.count_ones() as usize)
        .min()
        .unwrap()
}

fn enumeration_maximum(g: &DiGraph, v1: &NodeSet, v2: &NodeSet) -> usize {
    let shared = v1.intersection(v2);
    let h = g.isolate(&shared);
    let (s, t) = (v1.difference(&shared), v2.difference(&shared));
    let best = (1..=s.len().min(t.len()))
        .rev()
        .find(|&m| {
            !enumerate_path_sets(&h, &s, &t, m, usize::MAX, Mode::Subset)
                .unwrap()
                .is_empty()
        })
        .unwrap_or(0);
    best + shared.len()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> NodeSet {
    loop {
        let s: NodeSet = (1..=n).filter(|_| rng.gen_bool(0.4)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

fn disjoint_pair(rng: &mut ChaCha8Rng, n: usize) -> (NodeSet, NodeSet) {
    let mut order: Vec<usize> = (1..=n).collect();
    for k in (1..n).rev() {
        order.swap(k, rng.gen_range(0..=k));
    }
    let a = rng.gen_range((n / 2).min(2)..=n / 2);
    let b = rng.gen_range(a..=n - a);
    (
        order[..a].iter().copied().collect(),
        order[a..a + b].iter().copied().collect(),
    )
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..200 {
        let n = rng.gen_range(3..=8);
        let density = rng.gen_range(0.25..0.6);
        let edges: Vec<(usize, usize)> = (1..=n)
            .flat_map(|i| (1..=n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .filter(|_| rng.gen_bool(density))
            .collect();
        let g = DiGraph::new(n, edges).unwrap();
        // Mostly disjoint endpoint sets, so the flow rather than the overlap decides.
        let (v1, v2) = if rng.gen_bool(0.75) {
            disjoint_pair(&mut rng, n)
        } else {
            (random_subset(&mut rng, n), random_subset(&mut rng, n))
        };
        let flow = max_disjoint_paths(&g, &v1, &v2).unwrap();
        let cut = min_vertex_cut(&g, &v1, &v2);
        let enumerated = enumeration_maximum(&g, &v1, &v2);
        ensure(
            flow.count == cut && cut == enumerated && flow.witness.len() == flow.count,
            format!(
                "graph {k}: flow {} cut {cut} enumeration {enumerated}",
                flow.count
            ),
        )?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let g = fixture_graph("fig1.json");
    for seed in [0, 1] {
        let nm = oracle::sample_admissible(&g, seed, &oracle::SampleMode::Generic, 16).unwrap();
        let t = nm.transfer().unwrap();
        let e = |i, j| nm.edge(i, j).clone();
        let tt = |row: usize, col: usize| t[(row - 1, col - 1)].clone();
        let one = RationalFunction::one();
        let zero = RationalFunction::zero();
        let expected = [
            (4, 1, &(&e(2, 4) * &e(1, 2)) + &(&e(3, 4) * &e(1, 3))),
            (5, 1, &(&e(2, 5) * &e(1, 2)) + &(&e(3, 5) * &e(1, 3))),
            (4, 2, e(2, 4)),
            (4, 3, e(3, 4)),
            (5, 2, e(2, 5)),
            (5, 3, e(3, 5)),
            (4, 4, one.clone()),
            (5, 5, one),
            (4, 5, zero.clone()),
            (5, 4, zero),
        ];
        for (row, col, want) in expected {
            ensure(
                tt(row, col) == want,
                format!("seed {seed}: T[{row},{col}] = {}", tt(row, col)),
            )?;
        }
    }
    Ok(())
}

fn criterion_9() -> Check {
    let f = fixture_path("fig1.json");
    let args = [
        "analyze",
        f.to_str().unwrap(),
        "--measured",
        "4,5",
        "--json",
        "--seed",
        "17",
        "--oracle-samples",
        "8",
    ];
    let a = netident(&args);
    let b = netident(&args);
    ensure(
        a.status.code() == Some(2),
        format!("exit {:?}", a.status.code()),
    )?;
    ensure(a.stdout == b.stdout, "reports differ")?;
    let report: Report = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure(
        report.oracle.as_ref().is_some_and(|o| o.consistent),
        "oracle evidence missing",
    )?;
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    ensure(
        again.as_bytes() == a.stdout.as_slice(),
        "report does not round-trip",
    )
}

/// Name, check, and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Check, u64);

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "fig3 node 1 has a unique constrained witness",
            criterion_1,
            1,
        ),
        (
            "fig1 node 1 inconclusive with explicit counterexample",
            criterion_2,
            1,
        ),
        (
            "fig2 identifiable with the expected witness",
            criterion_3,
            1,
        ),
        (
            "verdicts agree with exact ranks on 100 samples",
            criterion_4,
            60,
        ),
        (
            "Jacobi minors agree on 100 square instances",
            criterion_5,
            60,
        ),
        (
            "cycle-family determinant equals elimination",
            criterion_6,
            30,
        ),
        ("max-flow, min cut and enumeration agree", criterion_7, 60),
        (
            "fig1 measured transfer entries match path sums",
            criterion_8,
            5,
        ),
        ("analyze reports are byte-identical", criterion_9, 1),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            ensure(
                elapsed <= Duration::from_secs(limit),
                format!("took {:.2}s", elapsed.as_secs_f64()),
            )
        });
        let (mark, note) = match &result {
            Ok(()) => ("PASS", String::new()),
            Err(e) => ("FAIL", format!(": {e}")),
        };
        println!(
            "criterion {}: {mark} {name} ({:.3}s, limit {limit}s){note}",
            k + 1,
            elapsed.as_secs_f64()
        );
        failed += usize::from(result.is_err());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
