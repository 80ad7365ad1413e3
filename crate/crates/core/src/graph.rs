//! Simple directed graphs on the vertex set `{1, .., n}`.
//!
//! Vertices are 1-based. Edges are kept in lexicographic order so that
//! serialization and every traversal is deterministic.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A sorted, duplicate-free set of vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(Vec<Vertex>);

impl NodeSet {
    pub fn new() -> Self {
        NodeSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| other.contains(v)).collect()
    }

    pub fn difference(&self, other: &NodeSet) -> NodeSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// All subsets of size `k`, in lexicographic order.
    pub fn combinations(&self, k: usize) -> Vec<NodeSet> {
        let items = &self.0;
        let n = items.len();
        if k > n {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(NodeSet(idx.iter().map(|&i| items[i]).collect()));
            let Some(pos) = (0..k).rev().find(|&p| idx[p] < p + n - k) else {
                return out;
            };
            idx[pos] += 1;
            for j in pos + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl FromIterator<Vertex> for NodeSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        NodeSet(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for NodeSet {
    fn from(a: [Vertex; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Simple directed graph: no self-loops, at most one edge per ordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    out: Vec<Vec<Vertex>>,
    labels: Option<Vec<String>>,
    measured: Option<NodeSet>,
}

impl DiGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invariant(
                "graph must have at least one vertex".into(),
            ));
        }
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::Invariant(format!(
                    "edge ({i},{j}) has an endpoint outside 1..={n}"
                )));
            }
            if i == j {
                return Err(Error::Invariant(format!("self-loop ({i},{i})")));
            }
            if !set.insert((i, j)) {
                return Err(Error::Invariant(format!("duplicate edge ({i},{j})")));
            }
        }
        let mut out = vec![Vec::new(); n];
        for &(i, j) in &set {
            out[i - 1].push(j);
        }
        Ok(DiGraph {
            n,
            edges: set,
            out,
            labels: None,
            measured: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Invariant(format!(
                "expected {} labels, got {}",
                self.n,
                labels.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn with_measured(mut self, measured: NodeSet) -> Result<Self> {
        self.check_set(&measured)?;
        self.measured = Some(measured);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, i: Vertex, j: Vertex) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn measured(&self) -> Option<&NodeSet> {
        self.measured.as_ref()
    }

    pub fn vertices(&self) -> NodeSet {
        (1..=self.n).collect()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::Invariant(format!(
                "vertex {v} outside 1..={}",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    pub fn check_set(&self, s: &NodeSet) -> Result<()> {
        s.iter().try_for_each(|v| self.check_vertex(v))
    }

    /// Sorted successors of `i`, without validation.
    pub(crate) fn succ(&self, i: Vertex) -> &[Vertex] {
        &self.out[i - 1]
    }

    pub fn out_neighbors(&self, i: Vertex) -> Result<NodeSet> {
        self.check_vertex(i)?;
        Ok(NodeSet(self.out[i - 1].clone()))
    }

    pub fn complement(&self, s: &NodeSet) -> Result<NodeSet> {
        self.check_set(s)?;
        Ok((1..=self.n).filter(|&v| !s.contains(v)).collect())
    }

    /// Same vertex set with every edge touching `s` removed.
    pub fn isolate(&self, s: &NodeSet) -> DiGraph {
        let edges: BTreeSet<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(i, j)| !s.contains(i) && !s.contains(j))
            .collect();
        let mut out = vec![Vec::new(); self.n];
        for &(i, j) in &edges {
            out[i - 1].push(j);
        }
        DiGraph {
            n: self.n,
            edges,
            out,
            labels: self.labels.clone(),
            measured: self.measured.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serialization is infallible")
    }

    pub fn to_dot(&self, measured: Option<&NodeSet>) -> String {
        let measured = measured.or(self.measured.as_ref());
        let mut s = String::from("digraph G {\n");
        for v in 1..=self.n {
            let mut attrs = Vec::new();
            if let Some(labels) = &self.labels {
                attrs.push(format!("label=\"{}\"", escape_dot(&labels[v - 1])));
            }
            if measured.is_some_and(|m| m.contains(v)) {
                attrs.push("shape=doublecircle".to_string());
            }
            if attrs.is_empty() {
                s.push_str(&format!("  {v};\n"));
            } else {
                s.push_str(&format!("  {v} [{}];\n", attrs.join(", ")));
            }
        }
        for (i, j) in self.edges() {
            s.push_str(&format!("  {i} -> {j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn escape_dot(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Wire form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured: Option<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&DiGraph> for GraphJson {
    fn from(g: &DiGraph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().map(|(i, j)| [i, j]).collect(),
            measured: g.measured.as_ref().map(|m| m.as_slice().to_vec()),
            labels: g.labels.clone(),
        }
    }
}

impl TryFrom<GraphJson> for DiGraph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Self> {
        let mut g = DiGraph::new(j.n, j.edges.iter().map(|e| (e[0], e[1])))?;
        if let Some(labels) = j.labels {
            g = g.with_labels(labels)?;
        }
        if let Some(m) = j.measured {
            let len = m.len();
            let set: NodeSet = m.into_iter().collect();
            if set.len() != len {
                return Err(Error::Invariant("duplicate measured vertex".into()));
            }
            g = g.with_measured(set)?;
        }
        Ok(g)
    }
}

/// Parses a graph from JSON or from a restricted DOT digraph; the format is
/// detected from the first non-blank character.
pub fn parse_graph(text: &str) -> Result<DiGraph> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        parse_json(trimmed)
    } else {
        parse_dot(trimmed)
    }
}

pub fn parse_json(text: &str) -> Result<DiGraph> {
    let j: GraphJson = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    DiGraph::try_from(j)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Str(String),
    Arrow,
    UndirectedEdge,
    Sym(char),
}

fn tokenize_dot(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '/' => {
                chars.next();
                match chars.next() {
                    Some('/') => {
                        for c in chars.by_ref() {
                            if c == '\n' {
                                break;
                            }
                        }
                    }
                    Some('*') => {
                        let mut prev = ' ';
                        loop {
                            match chars.next() {
                                Some('/') if prev == '*' => break,
                                Some(c) => prev = c,
                                None => return Err(Error::Syntax("unterminated comment".into())),
                            }
                        }
                    }
                    _ => return Err(Error::Syntax("stray '/'".into())),
                }
            }
            '#' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '-' => {
                chars.next();
                match chars.next() {
                    Some('>') => toks.push(Tok::Arrow),
                    Some('-') => toks.push(Tok::UndirectedEdge),
                    _ => return Err(Error::Syntax("expected '->'".into())),
                }
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('\\') => match chars.next() {
                            Some(c) => s.push(c),
                            None => return Err(Error::Syntax("unterminated string".into())),
                        },
                        Some('"') => break,
                        Some(c) => s.push(c),
                        None => return Err(Error::Syntax("unterminated string".into())),
                    }
                }
                toks.push(Tok::Str(s));
            }
            '{' | '}' | '[' | ']' | ';' | ',' | '=' => {
                chars.next();
                toks.push(Tok::Sym(c));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '.' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Id(s));
            }
            other => return Err(Error::Syntax(format!("unexpected character '{other}'"))),
        }
    }
    Ok(toks)
}

struct DotParser {
    toks: Vec<Tok>,
    pos: usize,
}

impl DotParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.next() {
            Some(Tok::Sym(s)) if s == c => Ok(()),
            other => Err(Error::Syntax(format!("expected '{c}', found {other:?}"))),
        }
    }

    fn attr_list(&mut self) -> Result<Vec<(String, String)>> {
        let mut attrs = Vec::new();
        while self.peek() == Some(&Tok::Sym('[')) {
            self.next();
            loop {
                match self.next() {
                    Some(Tok::Sym(']')) => break,
                    Some(Tok::Sym(',')) | Some(Tok::Sym(';')) => continue,
                    Some(Tok::Id(key)) | Some(Tok::Str(key)) => {
                        self.expect_sym('=')?;
                        let value = match self.next() {
                            Some(Tok::Id(v)) | Some(Tok::Str(v)) => v,
                            other => {
                                return Err(Error::Syntax(format!(
                                    "expected attribute value, found {other:?}"
                                )))
                            }
                        };
                        attrs.push((key, value));
                    }
                    other => {
                        return Err(Error::Syntax(format!("bad attribute list near {other:?}")))
                    }
                }
            }
        }
        Ok(attrs)
    }
}

fn dot_vertex(tok: Tok) -> Result<Vertex> {
    let s = match tok {
        Tok::Id(s) | Tok::Str(s) => s,
        other => return Err(Error::Syntax(format!("expected node id, found {other:?}"))),
    };
    match s.parse::<Vertex>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::Syntax(format!(
            "node id '{s}' is not a positive integer"
        ))),
    }
}

/// Restricted DOT: `digraph [name] { stmt; ... }` with positive-integer node
/// ids, edge chains `a -> b -> c`, and node attributes `label` and
/// `shape=doublecircle` (marks a measured node). Other attributes are ignored.
pub fn parse_dot(text: &str) -> Result<DiGraph> {
    let mut p = DotParser {
        toks: tokenize_dot(text)?,
        pos: 0,
    };
    if let Some(Tok::Id(s)) = p.peek() {
        if s.eq_ignore_ascii_case("strict") {
            p.next();
        }
    }
    match p.next() {
        Some(Tok::Id(s)) if s.eq_ignore_ascii_case("digraph") => {}
        other => {
            return Err(Error::Syntax(format!(
                "expected 'digraph', found {other:?}"
            )))
        }
    }
    if matches!(p.peek(), Some(Tok::Id(_)) | Some(Tok::Str(_))) {
        p.next();
    }
    p.expect_sym('{')?;

    let mut max_v = 0;
    let mut edges = Vec::new();
    let mut labels: Vec<(Vertex, String)> = Vec::new();
    let mut measured = Vec::new();
    loop {
        let tok = match p.next() {
            Some(Tok::Sym('}')) => break,
            Some(Tok::Sym(';')) => continue,
            Some(t) => t,
            None => return Err(Error::Syntax("missing closing '}'".into())),
        };
        if let Tok::Id(kw) = &tok {
            if matches!(kw.as_str(), "graph" | "node" | "edge") && p.peek() == Some(&Tok::Sym('['))
            {
                p.attr_list()?;
                continue;
            }
            if p.peek() == Some(&Tok::Sym('=')) {
                p.next();
                p.next();
                continue;
            }
        }
        let mut chain = vec![dot_vertex(tok)?];
        loop {
            match p.peek() {
                Some(Tok::Arrow) => {
                    p.next();
                    let t = p
                        .next()
                        .ok_or_else(|| Error::Syntax("dangling '->'".into()))?;
                    chain.push(dot_vertex(t)?);
                }
                Some(Tok::UndirectedEdge) => {
                    return Err(Error::Syntax("undirected edge '--' in digraph".into()))
                }
                _ => break,
            }
        }
        let attrs = p.attr_list()?;
        max_v = max_v.max(*chain.iter().max().expect("chain is nonempty"));
        if chain.len() == 1 {
            let v = chain[0];
            for (k, val) in attrs {
                match k.as_str() {
                    "label" => labels.push((v, val)),
                    "shape" if val == "doublecircle" => measured.push(v),
                    _ => {}
                }
            }
        } else {
            edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
        }
    }
    if p.peek().is_some() {
        return Err(Error::Syntax("trailing input after '}'".into()));
    }
    if max_v == 0 {
        return Err(Error::Syntax("digraph declares no nodes".into()));
    }
    let mut g = DiGraph::new(max_v, edges)?;
    if !labels.is_empty() {
        let mut all: Vec<String> = (1..=max_v).map(|v| v.to_string()).collect();
        for (v, l) in labels {
            all[v - 1] = l;
        }
        g = g.with_labels(all)?;
    }
    if !measured.is_empty() {
        g = g.with_measured(measured.into_iter().collect())?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fig1() -> DiGraph {
        parse_graph(r#"{"n":5,"edges":[[1,2],[1,3],[2,4],[2,5],[3,4],[3,5]]}"#).unwrap()
    }

    fn fig2() -> DiGraph {
        DiGraph::new(
            8,
            [
                (1, 2),
                (1, 3),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 6),
                (4, 7),
                (4, 8),
                (5, 7),
                (5, 8),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parses_json_graphs() {
        let g = fig1();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        let single = parse_graph(r#"{"n":1,"edges":[]}"#).unwrap();
        assert_eq!(single.n(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn rejects_bad_json() {
        assert!(matches!(
            parse_graph(r#"{"n":2,"edges":[[1,1]]}"#),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":2,"edges":[[1,2],[1,2]]}"#),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":2,"edges":[[1,3]]}"#),
            Err(Error::Invariant(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":2,"edges":[[1,"#),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_graph(r#"{"n":3,"edges":[],"measured":[1,1]}"#),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn neighbors_and_complement() {
        assert_eq!(fig1().out_neighbors(1).unwrap(), NodeSet::from([2, 3]));
        assert_eq!(fig2().out_neighbors(4).unwrap(), NodeSet::from([6, 7, 8]));
        assert!(fig2().out_neighbors(8).unwrap().is_empty());
        assert!(fig2().out_neighbors(9).is_err());

        let g = fig1();
        assert_eq!(
            g.complement(&NodeSet::from([4, 5])).unwrap(),
            NodeSet::from([1, 2, 3])
        );
        assert_eq!(g.complement(&NodeSet::new()).unwrap(), g.vertices());
        assert_eq!(
            fig2().complement(&NodeSet::from([2, 3])).unwrap(),
            NodeSet::from([1, 4, 5, 6, 7, 8])
        );
    }

    #[test]
    fn combinations_are_lexicographic() {
        let s = NodeSet::from([2, 5, 7, 9]);
        let c: Vec<String> = s.combinations(2).iter().map(|x| x.to_string()).collect();
        assert_eq!(c, ["{2,5}", "{2,7}", "{2,9}", "{5,7}", "{5,9}", "{7,9}"]);
        assert_eq!(s.combinations(0), vec![NodeSet::new()]);
        assert_eq!(s.combinations(4).len(), 1);
        assert!(s.combinations(5).is_empty());
        assert_eq!(NodeSet::new().combinations(0).len(), 1);
    }

    #[test]
    fn dot_import_and_export() {
        let g = parse_graph("digraph { 1 -> 2; 2 -> 3 -> 4; 5; }").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 3);

        let m = NodeSet::from([4, 5]);
        let dot = fig1().to_dot(Some(&m));
        assert!(dot.contains("4 [shape=doublecircle];"));
        assert!(dot.contains("1 -> 3;"));
        let back = parse_dot(&dot).unwrap();
        assert_eq!(back.measured(), Some(&m));
        assert_eq!(
            back.edges().collect::<Vec<_>>(),
            fig1().edges().collect::<Vec<_>>()
        );

        assert!(matches!(
            parse_dot("digraph { a -> b; }"),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_dot("digraph { 1 -- 2; }"),
            Err(Error::Syntax(_))
        ));
        assert!(matches!(
            parse_dot("digraph { 1 -> 1; }"),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn dot_labels_roundtrip() {
        let g = DiGraph::new(2, [(1, 2)])
            .unwrap()
            .with_labels(vec!["pump \"A\"".into(), "tank".into()])
            .unwrap();
        let back = parse_dot(&g.to_dot(None)).unwrap();
        assert_eq!(back.labels(), g.labels());
    }

    fn arb_graph() -> impl Strategy<Value = DiGraph> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::btree_set((1..=n, 1..=n), 0..20).prop_map(move |es| {
                DiGraph::new(n, es.into_iter().filter(|(i, j)| i != j)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn json_roundtrip(g in arb_graph()) {
            let back = parse_graph(&g.to_json()).unwrap();
            prop_assert_eq!(back, g);
        }

        #[test]
        fn complement_is_involution(g in arb_graph(), bits in any::<u16>()) {
            let s: NodeSet = (1..=g.n()).filter(|v| bits & (1 << (v - 1)) != 0).collect();
            let c = g.complement(&s).unwrap();
            prop_assert_eq!(c.len(), g.n() - s.len());
            prop_assert_eq!(g.complement(&c).unwrap(), s);
        }

        #[test]
        fn no_self_neighbors(g in arb_graph()) {
            for i in 1..=g.n() {
                prop_assert!(!g.out_neighbors(i).unwrap().contains(i));
            }
        }
    }
}
