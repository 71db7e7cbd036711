//! Discrete graph surgery with exact potential bookkeeping.
//!
//! Every operation returns a fresh graph together with a map from old
//! vertex and edge ids to their images, so spectra can be compared across
//! the transformation.

mod interlacing;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::conditions::ConditionSpec;
use crate::error::{Error, Result};
use crate::graph::{Edge, MetricGraph, PotentialPiece};

pub use interlacing::{required_index, verify_interlacing, InequalityRecord, InterlacingReport, Theorem};

/// Acceptance tolerance for inequality checks. `KREINGRAPH_TOL` overrides
/// the default `1e-8`.
pub fn tolerance() -> f64 {
    std::env::var("KREINGRAPH_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t >= 0.0)
        .unwrap_or(1e-8)
}

#[derive(Debug, Clone)]
pub struct SurgeryResult {
    pub graph: MetricGraph,
    /// Old vertex id to new vertex id. Cut vertices map to their first part.
    pub vertex_map: BTreeMap<String, String>,
    /// Old edge id to the new edge ids covering it, in order along the edge.
    pub edge_map: BTreeMap<String, Vec<String>>,
    /// Vertices that did not exist before the operation.
    pub new_vertices: Vec<String>,
}

impl SurgeryResult {
    fn identity_maps(graph: &MetricGraph) -> (BTreeMap<String, String>, BTreeMap<String, Vec<String>>) {
        let vm = graph.vertices().iter().map(|v| (v.clone(), v.clone())).collect();
        let em = graph
            .edges()
            .iter()
            .map(|e| (e.id.clone(), vec![e.id.clone()]))
            .collect();
        (vm, em)
    }
}

/// Which end of an edge: `x = 0` (at `u`) or `x = ℓ` (at `v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Start,
    End,
}

/// An edge end, used to describe how a vertex is cut.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEnd {
    pub edge: String,
    pub side: Side,
}

impl EdgeEnd {
    pub fn new(edge: impl Into<String>, side: Side) -> Self {
        Self { edge: edge.into(), side }
    }
}

/// A point of the graph: an existing vertex or an interior edge point.
#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Vertex(String),
    OnEdge { edge: String, position: f64 },
}

fn rebuild(vertices: Vec<String>, edges: Vec<Edge>) -> Result<MetricGraph> {
    MetricGraph::new(vertices, edges).map_err(|e| match e {
        Error::Invalid(issues) if issues.iter().any(|i| i.code == "NOT_CONNECTED") => Error::Disconnects,
        other => other,
    })
}

fn fresh(base: &str, taken: &HashSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}.{i}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded search")
}

fn require_vertex(graph: &MetricGraph, v: &str) -> Result<usize> {
    graph.vertex_index(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))
}

fn require_edge(graph: &MetricGraph, e: &str) -> Result<usize> {
    graph.edge_index(e).ok_or_else(|| Error::UnknownEdge(e.to_string()))
}

/// Splits piecewise data at `x`, returning the pieces on `[0, x]` and `[x, ℓ]`.
fn split_pieces(pieces: &[PotentialPiece], x: f64) -> (Vec<PotentialPiece>, Vec<PotentialPiece>) {
    let (mut left, mut right) = (Vec::new(), Vec::new());
    let mut start = 0.0;
    for p in pieces {
        let end = start + p.len;
        if end <= x {
            left.push(*p);
        } else if start >= x {
            right.push(*p);
        } else {
            left.push(PotentialPiece { len: x - start, q: p.q });
            right.push(PotentialPiece { len: end - x, q: p.q });
        }
        start = end;
    }
    // Rounding can leave a sliver on the wrong side; fold it into its neighbour.
    fix_total(&mut left, x);
    fix_total(&mut right, start - x);
    (left, right)
}

fn fix_total(pieces: &mut Vec<PotentialPiece>, total: f64) {
    pieces.retain(|p| p.len > 1e-14 * total.max(1.0));
    let sum: f64 = pieces.iter().map(|p| p.len).sum();
    if let Some(last) = pieces.last_mut() {
        last.len += total - sum;
    }
}

fn merge_equal(pieces: Vec<PotentialPiece>) -> Vec<PotentialPiece> {
    let mut out: Vec<PotentialPiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if last.q == p.q => last.len += p.len,
            _ => out.push(p),
        }
    }
    out
}

/// Identifies the vertices of `set` into one, keeping the id of the first.
pub fn glue_vertices(graph: &MetricGraph, set: &[String]) -> Result<SurgeryResult> {
    let mut seen = BTreeSet::new();
    for v in set {
        require_vertex(graph, v)?;
        seen.insert(v.clone());
    }
    if seen.len() < 2 {
        return Err(Error::InvalidArgument("gluing needs at least two distinct vertices".into()));
    }
    let keep = set[0].clone();
    let image = |v: &str| if seen.contains(v) { keep.clone() } else { v.to_string() };
    let vertices: Vec<String> = graph
        .vertices()
        .iter()
        .filter(|v| !seen.contains(*v) || **v == keep)
        .cloned()
        .collect();
    let edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|e| Edge { u: image(&e.u), v: image(&e.v), ..e.clone() })
        .collect();
    let (mut vertex_map, edge_map) = SurgeryResult::identity_maps(graph);
    for v in &seen {
        vertex_map.insert(v.clone(), keep.clone());
    }
    Ok(SurgeryResult {
        graph: rebuild(vertices, edges)?,
        vertex_map,
        edge_map,
        new_vertices: Vec::new(),
    })
}

/// Replaces `v` by one vertex per group of incident edge ends. The first
/// group keeps the id `v`; the others get `v.1`, `v.2`, ...
pub fn cut_vertex(graph: &MetricGraph, v: &str, partition: &[Vec<EdgeEnd>]) -> Result<SurgeryResult> {
    let vi = require_vertex(graph, v)?;
    if partition.len() < 2 || partition.iter().any(Vec::is_empty) {
        return Err(Error::BadPartition("need at least two nonempty groups".into()));
    }
    let mut incident: BTreeSet<EdgeEnd> = BTreeSet::new();
    for (e, end) in &graph.incidence()[vi] {
        let side = if *end == 0 { Side::Start } else { Side::End };
        incident.insert(EdgeEnd::new(graph.edges()[*e].id.clone(), side));
    }
    let mut listed = BTreeSet::new();
    for end in partition.iter().flatten() {
        require_edge(graph, &end.edge)?;
        if !incident.contains(end) {
            return Err(Error::BadPartition(format!("{}:{:?} is not incident to `{v}`", end.edge, end.side)));
        }
        if !listed.insert(end.clone()) {
            return Err(Error::BadPartition(format!("{}:{:?} listed twice", end.edge, end.side)));
        }
    }
    if listed.len() != incident.len() {
        return Err(Error::BadPartition(format!("not every edge end at `{v}` is assigned")));
    }

    let mut taken: HashSet<String> = graph.vertices().iter().cloned().collect();
    let mut names = vec![v.to_string()];
    for i in 1..partition.len() {
        let name = fresh(&format!("{v}.{i}"), &taken);
        taken.insert(name.clone());
        names.push(name);
    }
    let group_of: BTreeMap<&EdgeEnd, usize> = partition
        .iter()
        .enumerate()
        .flat_map(|(g, ends)| ends.iter().map(move |end| (end, g)))
        .collect();

    let mut vertices = graph.vertices().to_vec();
    vertices.extend(names[1..].iter().cloned());
    let edges: Vec<Edge> = graph
        .edges()
        .iter()
        .map(|e| {
            let mut out = e.clone();
            if let Some(&g) = group_of.get(&EdgeEnd::new(e.id.clone(), Side::Start)) {
                out.u = names[g].clone();
            }
            if let Some(&g) = group_of.get(&EdgeEnd::new(e.id.clone(), Side::End)) {
                out.v = names[g].clone();
            }
            out
        })
        .collect();
    let (vertex_map, edge_map) = SurgeryResult::identity_maps(graph);
    Ok(SurgeryResult {
        graph: rebuild(vertices, edges)?,
        vertex_map,
        edge_map,
        new_vertices: names[1..].to_vec(),
    })
}

/// Splits `edge` at `position` with a new degree-2 vertex. The halves are
/// named `<edge>.a` (from `u`) and `<edge>.b` (to `v`).
pub fn insert_degree2(graph: &MetricGraph, edge: &str, position: f64) -> Result<SurgeryResult> {
    let ei = require_edge(graph, edge)?;
    let e = &graph.edges()[ei];
    if !(position > 0.0 && position < e.length) {
        return Err(Error::BadPosition {
            edge: edge.to_string(),
            position,
            length: e.length,
        });
    }
    let mut vtaken: HashSet<String> = graph.vertices().iter().cloned().collect();
    let w = fresh(&format!("{edge}.m"), &vtaken);
    vtaken.insert(w.clone());
    let mut etaken: HashSet<String> = graph.edges().iter().map(|e| e.id.clone()).collect();
    etaken.remove(edge);
    let ida = fresh(&format!("{edge}.a"), &etaken);
    etaken.insert(ida.clone());
    let idb = fresh(&format!("{edge}.b"), &etaken);

    let (left, right) = split_pieces(&e.potential, position);
    let a = Edge {
        id: ida.clone(),
        u: e.u.clone(),
        v: w.clone(),
        length: position,
        potential: left,
    };
    let b = Edge {
        id: idb.clone(),
        u: w.clone(),
        v: e.v.clone(),
        length: e.length - position,
        potential: right,
    };
    let mut edges = graph.edges().to_vec();
    edges.splice(ei..=ei, [a, b]);
    let mut vertices = graph.vertices().to_vec();
    vertices.push(w.clone());

    let (vertex_map, mut edge_map) = SurgeryResult::identity_maps(graph);
    edge_map.insert(edge.to_string(), vec![ida, idb]);
    Ok(SurgeryResult {
        graph: rebuild(vertices, edges)?,
        vertex_map,
        edge_map,
        new_vertices: vec![w],
    })
}

fn reversed(e: &Edge) -> Edge {
    let mut potential = e.potential.clone();
    potential.reverse();
    Edge {
        id: e.id.clone(),
        u: e.v.clone(),
        v: e.u.clone(),
        length: e.length,
        potential,
    }
}

/// Concatenates the two edges at a degree-2 vertex and drops the vertex.
pub fn remove_degree2(graph: &MetricGraph, v: &str) -> Result<SurgeryResult> {
    let vi = require_vertex(graph, v)?;
    let deg = graph.degree(vi);
    if deg != 2 {
        return Err(Error::NotDegree2 {
            vertex: v.to_string(),
            degree: deg,
        });
    }
    let ends = &graph.incidence()[vi];
    let (e1, e2) = (ends[0].0, ends[1].0);
    if e1 == e2 {
        return Err(Error::LoneLoopVertex(v.to_string()));
    }
    // Orient the first edge into v and the second out of v.
    let first = &graph.edges()[e1.min(e2)];
    let second = &graph.edges()[e1.max(e2)];
    let first = if first.v == v { first.clone() } else { reversed(first) };
    let second = if second.u == v { second.clone() } else { reversed(second) };

    let id = match (first.id.strip_suffix(".a"), second.id.strip_suffix(".b")) {
        (Some(s1), Some(s2)) if s1 == s2 && graph.edge_index(s1).is_none() => s1.to_string(),
        _ => first.id.clone(),
    };
    let mut potential = first.potential.clone();
    potential.extend(second.potential.iter().copied());
    let joined = Edge {
        id: id.clone(),
        u: first.u.clone(),
        v: second.v.clone(),
        length: first.length + second.length,
        potential: merge_equal(potential),
    };
    let pos = e1.min(e2);
    let mut edges: Vec<Edge> = Vec::with_capacity(graph.edge_count() - 1);
    for (i, e) in graph.edges().iter().enumerate() {
        if i == pos {
            edges.push(joined.clone());
        } else if i != e1.max(e2) {
            edges.push(e.clone());
        }
    }
    let vertices: Vec<String> = graph.vertices().iter().filter(|w| *w != v).cloned().collect();

    let (mut vertex_map, mut edge_map) = SurgeryResult::identity_maps(graph);
    vertex_map.remove(v);
    edge_map.insert(first.id.clone(), vec![id.clone()]);
    edge_map.insert(second.id.clone(), vec![id]);
    Ok(SurgeryResult {
        graph: rebuild(vertices, edges)?,
        vertex_map,
        edge_map,
        new_vertices: Vec::new(),
    })
}

fn scaled(e: &Edge, alpha: f64) -> Edge {
    Edge {
        length: e.length * alpha,
        potential: e
            .potential
            .iter()
            .map(|p| PotentialPiece {
                len: p.len * alpha,
                q: p.q / (alpha * alpha),
            })
            .collect(),
        ..e.clone()
    }
}

/// Multiplies the length of `edge` by `alpha > 1`; the potential becomes
/// `α⁻² q(x/α)`.
pub fn lengthen_edge(graph: &MetricGraph, edge: &str, alpha: f64) -> Result<SurgeryResult> {
    let ei = require_edge(graph, edge)?;
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(Error::BadAlpha(alpha));
    }
    let mut edges = graph.edges().to_vec();
    edges[ei] = scaled(&edges[ei], alpha);
    let (vertex_map, edge_map) = SurgeryResult::identity_maps(graph);
    Ok(SurgeryResult {
        graph: rebuild(graph.vertices().to_vec(), edges)?,
        vertex_map,
        edge_map,
        new_vertices: Vec::new(),
    })
}

/// Scales every edge by `alpha > 0` with potentials `α⁻² q(x/α)`; the
/// spectrum scales by `α⁻²`.
pub fn scale_graph(graph: &MetricGraph, alpha: f64) -> Result<MetricGraph> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("scale factor must be positive, got {alpha}")));
    }
    let edges = graph.edges().iter().map(|e| scaled(e, alpha)).collect();
    rebuild(graph.vertices().to_vec(), edges)
}

/// Disjoint union with `other`, then each pair `(vertex of other, vertex of
/// graph)` is identified. Clashing ids from `other` get a suffix.
pub fn attach_graph(graph: &MetricGraph, other: &MetricGraph, pairing: &[(String, String)]) -> Result<SurgeryResult> {
    if pairing.is_empty() {
        return Err(Error::BadPairing("at least one vertex pair is required".into()));
    }
    let mut lhs = HashSet::new();
    let mut rhs = HashSet::new();
    for (a, b) in pairing {
        if other.vertex_index(a).is_none() {
            return Err(Error::BadPairing(format!("`{a}` is not a vertex of the attached graph")));
        }
        if graph.vertex_index(b).is_none() {
            return Err(Error::BadPairing(format!("`{b}` is not a vertex of the host graph")));
        }
        if !lhs.insert(a.clone()) || !rhs.insert(b.clone()) {
            return Err(Error::BadPairing(format!("vertex repeated in pair {a}={b}")));
        }
    }
    let paired: BTreeMap<&str, &str> = pairing.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();

    let mut vtaken: HashSet<String> = graph.vertices().iter().cloned().collect();
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    let mut vertices = graph.vertices().to_vec();
    let mut new_vertices = Vec::new();
    for w in other.vertices() {
        let name = match paired.get(w.as_str()) {
            Some(b) => (*b).to_string(),
            None => {
                let n = fresh(w, &vtaken);
                vtaken.insert(n.clone());
                vertices.push(n.clone());
                new_vertices.push(n.clone());
                n
            }
        };
        rename.insert(w.clone(), name);
    }
    let mut etaken: HashSet<String> = graph.edges().iter().map(|e| e.id.clone()).collect();
    let (vertex_map, mut edge_map) = SurgeryResult::identity_maps(graph);
    let mut edges = graph.edges().to_vec();
    for e in other.edges() {
        let id = fresh(&e.id, &etaken);
        etaken.insert(id.clone());
        edge_map.entry(format!("attached:{}", e.id)).or_insert_with(|| vec![id.clone()]);
        edges.push(Edge {
            id,
            u: rename[&e.u].clone(),
            v: rename[&e.v].clone(),
            ..e.clone()
        });
    }
    Ok(SurgeryResult {
        graph: rebuild(vertices, edges)?,
        vertex_map,
        edge_map,
        new_vertices,
    })
}

/// Adds an edge between existing (not necessarily distinct) vertices.
pub fn insert_edge(
    graph: &MetricGraph,
    u: &str,
    v: &str,
    length: f64,
    potential: Vec<PotentialPiece>,
) -> Result<SurgeryResult> {
    require_vertex(graph, u)?;
    require_vertex(graph, v)?;
    let etaken: HashSet<String> = graph.edges().iter().map(|e| e.id.clone()).collect();
    let id = fresh(&format!("e{}", graph.edge_count()), &etaken);
    let mut edges = graph.edges().to_vec();
    edges.push(Edge::new(id.clone(), u, v, length).with_potential(potential));
    let (vertex_map, mut edge_map) = SurgeryResult::identity_maps(graph);
    edge_map.insert(format!("attached:{id}"), vec![id]);
    Ok(SurgeryResult {
        graph: rebuild(graph.vertices().to_vec(), edges)?,
        vertex_map,
        edge_map,
        new_vertices: Vec::new(),
    })
}

/// Outcome of [`glue_points`]: `k + 1` distinct points were glued, `k₀` of
/// which were interior edge points.
#[derive(Debug, Clone)]
pub struct PointGluing {
    pub surgery: SurgeryResult,
    pub k: usize,
    pub k0: usize,
}

/// Glues a set of points, inserting degree-2 vertices at interior points
/// first (in input order).
pub fn glue_points(graph: &MetricGraph, points: &[Point]) -> Result<PointGluing> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("gluing needs at least two points".into()));
    }
    // Each original edge is tracked as a sequence of (current id, offset, length).
    let mut segments: BTreeMap<String, Vec<(String, f64, f64)>> = graph
        .edges()
        .iter()
        .map(|e| (e.id.clone(), vec![(e.id.clone(), 0.0, e.length)]))
        .collect();
    let mut current = graph.clone();
    let (vertex_map, _) = SurgeryResult::identity_maps(graph);
    let mut targets: Vec<String> = Vec::with_capacity(points.len());
    let mut new_vertices = Vec::new();
    for p in points {
        match p {
            Point::Vertex(v) => {
                require_vertex(graph, v)?;
                targets.push(v.clone());
            }
            Point::OnEdge { edge, position } => {
                let ei = require_edge(graph, edge)?;
                let length = graph.edges()[ei].length;
                if !(*position > 0.0 && *position < length) {
                    return Err(Error::BadPosition {
                        edge: edge.clone(),
                        position: *position,
                        length,
                    });
                }
                let segs = segments.get_mut(edge).expect("edge tracked");
                let si = segs
                    .iter()
                    .position(|&(_, off, len)| *position <= off + len)
                    .unwrap_or(segs.len() - 1);
                let (sid, off, len) = segs[si].clone();
                let local = position - off;
                if local <= 0.0 || local >= len {
                    // Coincides with a vertex inserted earlier.
                    let r = if local <= 0.0 { si.checked_sub(1) } else { Some(si) };
                    let seg_id = &segs[r.unwrap_or(0)].0;
                    let ci = current.edge_index(seg_id).expect("segment exists");
                    let e = &current.edges()[ci];
                    targets.push(if local <= 0.0 { e.u.clone() } else { e.v.clone() });
                    continue;
                }
                let r = insert_degree2(&current, &sid, local)?;
                let halves = r.edge_map[&sid].clone();
                segs.splice(
                    si..=si,
                    [(halves[0].clone(), off, local), (halves[1].clone(), off + local, len - local)],
                );
                let w = r.new_vertices[0].clone();
                targets.push(w.clone());
                new_vertices.push(w);
                current = r.graph;
            }
        }
    }
    let k0 = new_vertices.len();
    let k = targets.iter().collect::<BTreeSet<_>>().len() - 1;
    let glued = glue_vertices(&current, &targets)?;
    let mut vmap = vertex_map;
    for (old, new) in vmap.iter_mut() {
        *new = glued.vertex_map.get(old).cloned().unwrap_or_else(|| new.clone());
    }
    let edge_map = segments
        .into_iter()
        .map(|(k, v)| (k, v.into_iter().map(|s| s.0).collect()))
        .collect();
    let new_vertices = new_vertices
        .into_iter()
        .filter(|w| glued.graph.vertex_index(w).is_some())
        .collect();
    Ok(PointGluing {
        surgery: SurgeryResult {
            graph: glued.graph,
            vertex_map: vmap,
            edge_map,
            new_vertices,
        },
        k,
        k0,
    })
}

/// Shrinks the Krein boundary set from `boundary` to `keep ⊂ boundary`;
/// returns the two condition specs and `k = |B| − |B̃|`.
pub fn restrict_boundary(
    graph: &MetricGraph,
    boundary: &[String],
    keep: &[String],
) -> Result<(ConditionSpec, ConditionSpec, usize)> {
    let b: BTreeSet<&String> = boundary.iter().collect();
    let bt: BTreeSet<&String> = keep.iter().collect();
    for v in b.iter().chain(bt.iter()) {
        require_vertex(graph, v)?;
    }
    if bt.is_empty() {
        return Err(Error::InvalidArgument("restricted boundary must be nonempty".into()));
    }
    if !bt.is_subset(&b) {
        return Err(Error::InvalidArgument("restricted boundary must be a subset of the boundary".into()));
    }
    Ok((
        ConditionSpec::krein_subset(b.iter().map(|s| s.to_string())),
        ConditionSpec::krein_subset(bt.iter().map(|s| s.to_string())),
        b.len() - bt.len(),
    ))
}
