//! Spin graphs, chain descriptions and the line-based graph-spec format.
//!
//! ```text
//! # two spin-1/2 sites joined by a unit coupling
//! site 0 1
//! site 1 1
//! edge 0 1 1.0
//! ```
//! `site <id> <twice_spin>` declares a vertex with spin `twice_spin / 2`;
//! `edge <u> <v> <J>` joins two declared ids with a positive coupling.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::{Error, HalfInt, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub id: i64,
    pub spin: HalfInt,
}

/// An undirected edge between site positions `u < v` (indices into `sites`).
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub coupling: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphWarning {
    Disconnected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinGraph {
    sites: Vec<Site>,
    edges: Vec<Edge>,
}

impl SpinGraph {
    /// Validates and normalizes a graph. Sites are sorted by id; edges refer to
    /// ids and are stored with `u < v` in first-seen order.
    pub fn new(mut sites: Vec<Site>, edges: Vec<(i64, i64, f64)>) -> Result<Self> {
        sites.sort_by_key(|s| s.id);
        for w in sites.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::InvalidGraph(format!("duplicate site id {}", w[0].id)));
            }
        }
        for s in &sites {
            if s.spin.twice() < 1 {
                return Err(Error::InvalidGraph(format!(
                    "site {} has spin {}, must be at least 1/2",
                    s.id, s.spin
                )));
            }
        }
        let pos: BTreeMap<i64, usize> = sites.iter().enumerate().map(|(i, s)| (s.id, i)).collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (a, b, j) in edges {
            let (&pa, &pb) = match (pos.get(&a), pos.get(&b)) {
                (Some(pa), Some(pb)) => (pa, pb),
                _ => {
                    let missing = if pos.contains_key(&a) { b } else { a };
                    return Err(Error::InvalidGraph(format!("unknown site id {missing}")));
                }
            };
            if pa == pb {
                return Err(Error::InvalidGraph(format!("self-loop at site {a}")));
            }
            if j <= 0.0 || !j.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "nonpositive coupling {j} on edge {a}-{b}"
                )));
            }
            let (u, v) = (pa.min(pb), pa.max(pb));
            if !seen.insert((u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            out.push(Edge { u, v, coupling: j });
        }
        Ok(SpinGraph { sites, edges: out })
    }

    /// Path `0 - 1 - ... - (L-1)` with the given spins and couplings.
    pub fn path(spins: &[HalfInt], couplings: &[f64]) -> Result<Self> {
        if couplings.len() + 1 != spins.len() {
            return Err(Error::InvalidGraph(format!(
                "{} spins need {} couplings, got {}",
                spins.len(),
                spins.len().saturating_sub(1),
                couplings.len()
            )));
        }
        let sites = spins
            .iter()
            .enumerate()
            .map(|(i, &spin)| Site { id: i as i64, spin })
            .collect();
        let edges = couplings
            .iter()
            .enumerate()
            .map(|(i, &j)| (i as i64, i as i64 + 1, j))
            .collect();
        Self::new(sites, edges)
    }

    /// `n` sites of equal spin and the given `(u, v, J)` edges by position.
    pub fn uniform(n: usize, spin: HalfInt, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let sites = (0..n).map(|i| Site { id: i as i64, spin }).collect();
        Self::new(sites, edges.iter().map(|&(u, v, j)| (u as i64, v as i64, j)).collect())
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn spins(&self) -> Vec<HalfInt> {
        self.sites.iter().map(|s| s.spin).collect()
    }

    pub fn with_couplings(&self, couplings: &[f64]) -> Result<Self> {
        if couplings.len() != self.edges.len() {
            return Err(Error::DimensionMismatch {
                expected: self.edges.len(),
                found: couplings.len(),
            });
        }
        let edges = self
            .edges
            .iter()
            .zip(couplings)
            .map(|(e, &j)| (self.sites[e.u].id, self.sites[e.v].id, j))
            .collect();
        Self::new(self.sites.clone(), edges)
    }

    pub fn is_connected(&self) -> bool {
        if self.sites.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.sites.len()];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        let mut seen = vec![false; self.sites.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn warnings(&self) -> Vec<GraphWarning> {
        if self.is_connected() {
            Vec::new()
        } else {
            vec![GraphWarning::Disconnected]
        }
    }
}

/// A parsed graph-spec file together with non-fatal findings.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: SpinGraph,
    pub warnings: Vec<GraphWarning>,
}

pub fn parse_graph_spec(text: &str) -> Result<ParsedGraph> {
    let mut sites = Vec::new();
    let mut site_ids = BTreeSet::new();
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse { line: line_no, message };
        match fields[0] {
            "site" => {
                if fields.len() != 3 {
                    return Err(err("expected `site <id> <twice_spin>`".into()));
                }
                let id: i64 = fields[1].parse().map_err(|_| err(format!("bad site id `{}`", fields[1])))?;
                let twice: i64 = fields[2]
                    .parse()
                    .map_err(|_| err(format!("bad twice_spin `{}`", fields[2])))?;
                if twice < 1 {
                    return Err(err(format!("twice_spin must be positive, got {twice}")));
                }
                if !site_ids.insert(id) {
                    return Err(err(format!("duplicate site id {id}")));
                }
                sites.push(Site { id, spin: HalfInt::from_twice(twice) });
            }
            "edge" => {
                if fields.len() != 4 {
                    return Err(err("expected `edge <u> <v> <J>`".into()));
                }
                let u: i64 = fields[1].parse().map_err(|_| err(format!("bad site id `{}`", fields[1])))?;
                let v: i64 = fields[2].parse().map_err(|_| err(format!("bad site id `{}`", fields[2])))?;
                let j: f64 = fields[3].parse().map_err(|_| err(format!("bad coupling `{}`", fields[3])))?;
                if j <= 0.0 || !j.is_finite() {
                    return Err(err(format!("nonpositive coupling {j}")));
                }
                edges.push((u, v, j));
                edge_lines.push(line_no);
            }
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    // Re-validate edge by edge so errors carry the offending line.
    for (k, &(u, v, _)) in edges.iter().enumerate() {
        let line = edge_lines[k];
        for id in [u, v] {
            if !site_ids.contains(&id) {
                return Err(Error::Parse { line, message: format!("unknown site id {id}") });
            }
        }
        if u == v {
            return Err(Error::Parse { line, message: format!("self-loop at site {u}") });
        }
        let key = (u.min(v), u.max(v));
        if edges[..k].iter().any(|&(a, b, _)| (a.min(b), a.max(b)) == key) {
            return Err(Error::Parse { line, message: format!("duplicate edge {u}-{v}") });
        }
    }
    let graph = SpinGraph::new(sites, edges)?;
    let warnings = graph.warnings();
    Ok(ParsedGraph { graph, warnings })
}

/// Open chain `s_1, ..., s_L` with nearest-neighbour couplings `J_{x,x+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    spins: Vec<HalfInt>,
    couplings: Vec<f64>,
}

impl ChainSpec {
    pub fn new(spins: Vec<HalfInt>, couplings: Vec<f64>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::InvalidParameter("empty chain".into()));
        }
        if couplings.len() + 1 != spins.len() {
            return Err(Error::InvalidParameter(format!(
                "{} spins need {} couplings, got {}",
                spins.len(),
                spins.len() - 1,
                couplings.len()
            )));
        }
        if let Some(j) = couplings.iter().find(|j| **j <= 0.0 || !j.is_finite()) {
            return Err(Error::InvalidParameter(format!("nonpositive coupling {j}")));
        }
        if let Some(s) = spins.iter().find(|s| s.twice() < 1) {
            return Err(Error::InvalidParameter(format!("spin {s} must be at least 1/2")));
        }
        Ok(ChainSpec { spins, couplings })
    }

    /// Chain of identical spins with unit couplings.
    pub fn uniform(len: usize, spin: HalfInt) -> Result<Self> {
        Self::new(vec![spin; len], vec![1.0; len.saturating_sub(1)])
    }

    pub fn spins(&self) -> &[HalfInt] {
        &self.spins
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }
}

/// Edge lists of all trees on `n` vertices up to isomorphism (one
/// representative each), built by attaching leaves and deduplicating by a
/// canonical rooted encoding taken at the tree's center.
pub fn nonisomorphic_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    level.insert(tree_code(1, &[]), Vec::new());
    for size in 2..=n {
        let mut next = BTreeMap::new();
        for edges in level.values() {
            for v in 0..size - 1 {
                let mut e = edges.clone();
                e.push((v, size - 1));
                next.entry(tree_code(size, &e)).or_insert(e);
            }
        }
        level = next;
    }
    level.into_values().collect()
}

fn tree_code(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // Peel leaves until one or two centers remain.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> =
            adj[v].iter().filter(|&&w| w != parent).map(|&w| encode(adj, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(&adj, c, usize::MAX)).min().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let p = parse_graph_spec("site 0 1\nsite 1 1\nedge 0 1 1.0").unwrap();
        assert_eq!(p.graph.len(), 2);
        assert_eq!(p.graph.spins(), vec![HalfInt::HALF; 2]);
        assert_eq!(p.graph.edges(), &[Edge { u: 0, v: 1, coupling: 1.0 }]);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn comments_and_ordering() {
        let text = "# header\nsite 7 2  # spin one\n\nsite 3 1\nedge 7 3 0.5\n";
        let p = parse_graph_spec(text).unwrap();
        assert_eq!(p.graph.sites()[0].id, 3);
        assert_eq!(p.graph.sites()[1].spin, HalfInt::ONE);
        assert_eq!(p.graph.edges()[0].u, 0);
    }

    #[test]
    fn disconnected_is_a_warning() {
        let p = parse_graph_spec("site 0 1\nsite 1 1\n").unwrap();
        assert_eq!(p.warnings, vec![GraphWarning::Disconnected]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = parse_graph_spec("site 0 1\nsite 1 1\nedge 0 1 -1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("nonpositive"));
        let e = parse_graph_spec("site 0 1\nedge 0 5 1.0").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_graph_spec("site 0 1\nsite 1 1\nedge 0 1 1\nedge 1 0 2").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }));
        let e = parse_graph_spec("site 0 1\nsite 0 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_graph_spec("vertex 0 1").is_err());
        assert!(parse_graph_spec("site x 1").is_err());
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=9).map(|n| nonisomorphic_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47]);
        for t in nonisomorphic_trees(6) {
            let g = SpinGraph::uniform(6, HalfInt::HALF, &t.iter().map(|&(a, b)| (a, b, 1.0)).collect::<Vec<_>>()).unwrap();
            assert!(g.is_connected());
        }
    }

    #[test]
    fn chain_validation() {
        assert!(ChainSpec::new(vec![HalfInt::HALF; 3], vec![1.0]).is_err());
        assert!(ChainSpec::new(vec![HalfInt::HALF; 2], vec![0.0]).is_err());
        assert!(ChainSpec::new(vec![HalfInt::HALF, HalfInt::ZERO], vec![1.0]).is_err());
        assert!(ChainSpec::uniform(4, HalfInt::ONE).is_ok());
    }
}
