//! Finite connected metric graphs with piecewise-constant potentials.
//!
//! Edge `e` is parametrised by `[0, length]` with `x = 0` at `u` and
//! `x = length` at `v`. Loops and parallel edges are allowed.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationIssue};

const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialPiece {
    pub len: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub u: String,
    pub v: String,
    pub length: f64,
    /// Ordered pieces from `x = 0`; never empty once part of a graph.
    #[serde(default)]
    pub potential: Vec<PotentialPiece>,
}

impl Edge {
    pub fn new(id: impl Into<String>, u: impl Into<String>, v: impl Into<String>, length: f64) -> Self {
        Self {
            id: id.into(),
            u: u.into(),
            v: v.into(),
            length,
            potential: vec![PotentialPiece { len: length, q: 0.0 }],
        }
    }

    pub fn with_potential(mut self, pieces: Vec<PotentialPiece>) -> Self {
        self.potential = pieces;
        self
    }

    /// Constant potential `q` on the whole edge.
    pub fn with_constant_potential(mut self, q: f64) -> Self {
        self.potential = vec![PotentialPiece { len: self.length, q }];
        self
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn potential_integral(&self) -> f64 {
        self.potential.iter().map(|p| p.len * p.q).sum()
    }

    pub fn potential_is_zero(&self) -> bool {
        self.potential.iter().all(|p| p.q == 0.0)
    }

    /// Piece boundaries as `(start, len, q)` triples.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let mut start = 0.0;
        self.potential.iter().map(move |p| {
            let s = start;
            start += p.len;
            (s, p.len, p.q)
        })
    }

    fn normalize(&mut self) {
        if self.potential.is_empty() {
            self.potential.push(PotentialPiece {
                len: self.length,
                q: 0.0,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

/// A validated metric graph. Immutable once constructed.
#[derive(Debug, Clone)]
pub struct MetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

impl PartialEq for MetricGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl MetricGraph {
    /// Builds and validates a graph. Empty potentials become `q ≡ 0`.
    pub fn new(vertices: Vec<String>, mut edges: Vec<Edge>) -> Result<Self> {
        for e in &mut edges {
            e.normalize();
        }
        let issues = collect_issues(&vertices, &edges);
        if !issues.is_empty() {
            return Err(Error::Invalid(issues));
        }
        let index: HashMap<String, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let ends = edges.iter().map(|e| (index[&e.u], index[&e.v])).collect();
        Ok(Self {
            vertices,
            edges,
            ends,
            index,
        })
    }

    /// Convenience constructor with `q ≡ 0` and edge ids `e0, e1, ...`.
    pub fn from_lengths(vertices: &[&str], edges: &[(&str, &str, f64)]) -> Result<Self> {
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, l))| Edge::new(format!("e{i}"), u, v, l))
            .collect();
        Self::new(vertices.iter().map(|s| s.to_string()).collect(), edges)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Vertex indices `(u, v)` of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.ends
            .iter()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(a, b) in &self.ends {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Edge-ends incident to each vertex, as `(edge, end)` with `end = 0` for
    /// `x = 0` and `end = 1` for `x = length`, in edge order.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            inc[a].push((e, 0));
            inc[b].push((e, 1));
        }
        inc
    }

    pub fn potential_is_zero(&self) -> bool {
        self.edges.iter().all(Edge::potential_is_zero)
    }

    pub fn max_potential(&self) -> f64 {
        self.edges
            .iter()
            .flat_map(|e| e.potential.iter().map(|p| p.q))
            .fold(0.0, f64::max)
    }

    pub fn into_parts(self) -> (Vec<String>, Vec<Edge>) {
        (self.vertices, self.edges)
    }
}

fn collect_issues(vertices: &[String], edges: &[Edge]) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    if vertices.is_empty() || edges.is_empty() {
        issues.push(ValidationIssue::new(
            "EMPTY_GRAPH",
            "graph needs at least one vertex and one edge",
        ));
    }

    let mut index = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if index.insert(v.as_str(), i).is_some() {
            issues.push(ValidationIssue::new(
                "DUPLICATE_VERTEX",
                format!("vertex `{v}` listed more than once"),
            ));
        }
    }

    let mut edge_ids = HashSet::new();
    for e in edges {
        if !edge_ids.insert(e.id.as_str()) {
            issues.push(ValidationIssue::new(
                "DUPLICATE_EDGE",
                format!("edge id `{}` used more than once", e.id),
            ));
        }
        for end in [&e.u, &e.v] {
            if !index.contains_key(end.as_str()) {
                issues.push(ValidationIssue::new(
                    "UNKNOWN_VERTEX",
                    format!("edge `{}` references unknown vertex `{end}`", e.id),
                ));
            }
        }
        if !e.length.is_finite() {
            issues.push(ValidationIssue::new(
                "NONFINITE_VALUE",
                format!("edge `{}` has non-finite length", e.id),
            ));
        } else if e.length <= 0.0 {
            issues.push(ValidationIssue::new(
                "NONPOSITIVE_LENGTH",
                format!("edge `{}` has length {}", e.id, e.length),
            ));
        }
        let mut sum = 0.0;
        for p in &e.potential {
            if !p.len.is_finite() || !p.q.is_finite() {
                issues.push(ValidationIssue::new(
                    "NONFINITE_VALUE",
                    format!("edge `{}` has a non-finite potential piece", e.id),
                ));
                continue;
            }
            if p.len <= 0.0 {
                issues.push(ValidationIssue::new(
                    "NONPOSITIVE_PIECE",
                    format!("edge `{}` has a potential piece of length {}", e.id, p.len),
                ));
            }
            if p.q < 0.0 {
                issues.push(ValidationIssue::new(
                    "NEGATIVE_POTENTIAL",
                    format!("edge `{}` has potential value {}", e.id, p.q),
                ));
            }
            sum += p.len;
        }
        if e.length.is_finite() && e.length > 0.0 && (sum - e.length).abs() > REL_TOL * e.length.max(1.0) * 10.0 {
            issues.push(ValidationIssue::new(
                "POTENTIAL_LENGTH_MISMATCH",
                format!(
                    "edge `{}`: potential pieces sum to {sum}, edge length is {}",
                    e.id, e.length
                ),
            ));
        }
    }

    if !vertices.is_empty() && !has_unknown(&issues) && !is_connected(vertices.len(), edges, &index) {
        issues.push(ValidationIssue::new("NOT_CONNECTED", "graph not connected"));
    }
    issues
}

fn has_unknown(issues: &[ValidationIssue]) -> bool {
    issues.iter().any(|i| i.code == "UNKNOWN_VERTEX")
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn is_connected(n: usize, edges: &[Edge], index: &HashMap<&str, usize>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for e in edges {
        let a = find(&mut parent, index[e.u.as_str()]);
        let b = find(&mut parent, index[e.v.as_str()]);
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components == 1
}

/// Checks every graph invariant, returning one issue per violation.
pub fn validate(graph: &MetricGraph) -> std::result::Result<(), Vec<ValidationIssue>> {
    let issues = collect_issues(&graph.vertices, &graph.edges);
    if issues.is_empty() {
        Ok(())
    } else {
        Err(issues)
    }
}

pub fn total_length(graph: &MetricGraph) -> f64 {
    graph.edges.iter().map(|e| e.length).sum()
}

pub fn integrate_potential(graph: &MetricGraph) -> f64 {
    graph.edges.iter().map(Edge::potential_integral).sum()
}

pub fn parse_graph(text: &str) -> Result<MetricGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    MetricGraph::new(doc.vertices, doc.edges)
}

pub fn serialize_graph(graph: &MetricGraph) -> String {
    let doc = GraphDoc {
        vertices: graph.vertices.clone(),
        edges: graph.edges.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("graph documents always serialize")
}
