//! Vertex Weyl matrix `M(λ)`, Dirichlet-to-Neumann matrix `Λ_q = -M(0)`,
//! weighted discrete Laplacian and boundary Schur complements.
//!
//! Rows and columns follow the order of [`MetricGraph::vertices`].

use nalgebra::DMatrix;

use crate::edge::{dtn_block_from_basis, transfer_matrix};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaplacian {
    pub entries: DMatrix<f64>,
    pub vertex_order: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylMatrix {
    pub lambda: f64,
    pub entries: DMatrix<f64>,
    pub vertex_order: Vec<String>,
}

/// `L` with off-diagonal `-Σ 1/ℓ(e)` over edges joining the two vertices and
/// diagonal `Σ 1/ℓ(e)` over incident non-loop edges.
pub fn discrete_laplacian(graph: &MetricGraph) -> DiscreteLaplacian {
    let n = graph.vertex_count();
    let mut l = DMatrix::zeros(n, n);
    for (e, edge) in graph.edges().iter().enumerate() {
        let (a, b) = graph.endpoints(e);
        if a == b {
            continue;
        }
        let w = 1.0 / edge.length;
        l[(a, a)] += w;
        l[(b, b)] += w;
        l[(a, b)] -= w;
        l[(b, a)] -= w;
    }
    DiscreteLaplacian {
        entries: l,
        vertex_order: graph.vertices().to_vec(),
    }
}

/// Sum of edge Dirichlet-to-Neumann blocks scattered into vertex positions
/// (`-M(λ)`), or the list of edges at which `λ` is a Dirichlet eigenvalue.
fn assembled_dtn(graph: &MetricGraph, lambda: f64) -> std::result::Result<DMatrix<f64>, Vec<String>> {
    let n = graph.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    let mut poles = Vec::new();
    for (e, edge) in graph.edges().iter().enumerate() {
        let basis = transfer_matrix(edge, lambda);
        if basis.is_dirichlet_pole(edge.length) {
            poles.push(edge.id.clone());
            continue;
        }
        let blk = dtn_block_from_basis(&basis);
        let (a, b) = graph.endpoints(e);
        let idx = [a, b];
        for i in 0..2 {
            for j in 0..2 {
                m[(idx[i], idx[j])] += blk[(i, j)];
            }
        }
    }
    if poles.is_empty() {
        Ok(m)
    } else {
        Err(poles)
    }
}

pub fn weyl_matrix(graph: &MetricGraph, lambda: f64) -> Result<WeylMatrix> {
    let dtn = assembled_dtn(graph, lambda).map_err(|edges| Error::DirichletPole { lambda, edges })?;
    Ok(WeylMatrix {
        lambda,
        entries: -dtn,
        vertex_order: graph.vertices().to_vec(),
    })
}

/// `Λ_q = -M(0)`. Never singular at the edge level because `q ≥ 0`.
pub fn dtn_zero(graph: &MetricGraph) -> DMatrix<f64> {
    assembled_dtn(graph, 0.0).expect("λ = 0 lies below every edge Dirichlet eigenvalue")
}

/// Schur complement of `dtn` onto the vertex indices `boundary`, returned in
/// increasing index order.
pub fn schur_boundary(dtn: &DMatrix<f64>, boundary: &[usize]) -> Result<DMatrix<f64>> {
    let n = dtn.nrows();
    let mut b: Vec<usize> = boundary.to_vec();
    b.sort_unstable();
    b.dedup();
    if b.is_empty() {
        return Err(Error::InvalidArgument("boundary set must be nonempty".into()));
    }
    if let Some(&bad) = b.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidArgument(format!("boundary index {bad} out of range")));
    }
    let interior: Vec<usize> = (0..n).filter(|i| b.binary_search(i).is_err()).collect();
    let d = dtn.select_rows(&b).select_columns(&b);
    if interior.is_empty() {
        return Ok(d);
    }
    let li = dtn.select_rows(&interior).select_columns(&interior);
    let coupling = dtn.select_rows(&interior).select_columns(&b);
    let sv = li.clone().singular_values();
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > 1e12 {
        return Err(Error::SingularInteriorBlock { condition });
    }
    let solved = li
        .lu()
        .solve(&coupling)
        .ok_or(Error::SingularInteriorBlock { condition })?;
    let s = d - coupling.transpose() * solved;
    Ok((&s + s.transpose()) * 0.5)
}

/// [`schur_boundary`] addressed by vertex ids.
pub fn schur_boundary_ids(graph: &MetricGraph, dtn: &DMatrix<f64>, boundary: &[String]) -> Result<DMatrix<f64>> {
    let idx = boundary_indices(graph, boundary)?;
    schur_boundary(dtn, &idx)
}

pub(crate) fn boundary_indices(graph: &MetricGraph, boundary: &[String]) -> Result<Vec<usize>> {
    let mut idx = boundary
        .iter()
        .map(|v| graph.vertex_index(v).ok_or_else(|| Error::UnknownVertex(v.clone())))
        .collect::<Result<Vec<_>>>()?;
    idx.sort_unstable();
    idx.dedup();
    Ok(idx)
}
