use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::conditions::{ConditionSpec, Resolved};
use crate::edge::{piece_block, transfer_matrix};
use crate::error::{Error, Result};
use crate::graph::{total_length, Edge, MetricGraph};
use crate::weyl::weyl_matrix;

use super::scan::{eigenvalues, kernel_dimension};

/// Zeros of the Dirichlet solution `s(·; λ)` in `(0, ℓ]`, by exact Prüfer
/// angles on each constant piece.
fn dirichlet_zeros(edge: &Edge, lambda: f64) -> usize {
    let (mut y, mut dy) = (0.0f64, 1.0f64);
    let mut count = 0i64;
    for p in &edge.potential {
        let w2 = lambda - p.q;
        let h = p.len;
        if w2 > 0.0 {
            let w = w2.sqrt();
            let theta = y.atan2(dy / w);
            count += ((theta + w * h) / PI).floor() as i64 - (theta / PI).floor() as i64;
        }
        let blk = piece_block(w2, h);
        let y_end = blk[(0, 0)] * y + blk[(0, 1)] * dy;
        let dy_end = blk[(1, 0)] * y + blk[(1, 1)] * dy;
        if w2 <= 0.0 && y != 0.0 && (y_end == 0.0 || (y > 0.0) != (y_end > 0.0)) {
            count += 1;
        }
        y = y_end;
        dy = dy_end;
    }
    count.max(0) as usize
}

/// Number of Dirichlet eigenvalues of the decoupled edges below `λ`.
pub fn dirichlet_count(graph: &MetricGraph, lambda: f64) -> usize {
    graph.edges().iter().map(|e| dirichlet_zeros(e, lambda)).sum()
}

fn near_pole(graph: &MetricGraph, lambda: f64) -> bool {
    graph.edges().iter().any(|e| {
        let b = transfer_matrix(e, lambda);
        let scale = 1f64.max(b.c_end.abs()).max(b.ds_end.abs());
        b.s_end.abs() < 1e-9 * e.length * scale
    })
}

fn negative_index(m: &DMatrix<f64>) -> usize {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().filter(|&&x| x < 0.0).count()
}

/// Exact number of eigenvalues strictly below `λ`, counting the kernel,
/// from the Dirichlet count plus the negative index of `Θ - M(λ)` where
/// `Θ = -C` is the coupling in boundary-triple form.
///
/// `λ` is nudged slightly if it sits on an edge Dirichlet eigenvalue; callers
/// should evaluate away from eigenvalues of the operator itself.
pub fn index_count(graph: &MetricGraph, conditions: &ConditionSpec, lambda: f64) -> Result<usize> {
    index_count_resolved(graph, &conditions.resolve(graph)?, lambda)
}

pub(crate) fn index_count_resolved(graph: &MetricGraph, resolved: &Resolved, lambda: f64) -> Result<usize> {
    if lambda <= 0.0 {
        return Err(Error::InvalidArgument(format!("index count needs λ > 0, got {lambda}")));
    }
    let mut lam = lambda;
    let mut k = 0;
    while near_pole(graph, lam) {
        k += 1;
        if k > 20 {
            return Err(Error::DirichletPole { lambda, edges: vec![] });
        }
        let shift = 1e-9 * lambda.max(1.0) * k as f64;
        lam = if k % 2 == 1 { lambda + shift } else { lambda - shift };
    }
    let nd = dirichlet_count(graph, lam);
    match resolved {
        Resolved::Dirichlet => Ok(nd),
        Resolved::Coupling(c) => {
            let m = weyl_matrix(graph, lam)?.entries;
            Ok(nd + negative_index(&(-c - m)))
        }
    }
}

/// `N(λ)`: eigenvalues `≤ λ` with multiplicity, kernel included, from a
/// certified spectrum.
pub fn counting_function(graph: &MetricGraph, conditions: &ConditionSpec, lambda: f64) -> Result<usize> {
    if lambda < 0.0 {
        return Ok(0);
    }
    if lambda == 0.0 {
        return kernel_dimension(graph, conditions);
    }
    Ok(eigenvalues(graph, conditions, lambda)?.count(lambda))
}

/// Weyl-type bounds `(ℓ(Γ)√λ/π - E, ℓ(Γ)√λ/π + V)` for zero potential.
pub fn weyl_bounds(graph: &MetricGraph, lambda: f64) -> Result<(f64, f64)> {
    if !graph.potential_is_zero() {
        return Err(Error::PotentialNotZero);
    }
    let t = total_length(graph) * lambda.max(0.0).sqrt() / PI;
    Ok((t - graph.edge_count() as f64, t + graph.vertex_count() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::PotentialPiece;

    #[test]
    fn dirichlet_zero_counts() {
        let e = Edge::new("e", "a", "b", 1.0);
        assert_eq!(dirichlet_zeros(&e, 0.5), 0);
        assert_eq!(dirichlet_zeros(&e, 10.0), 1);
        assert_eq!(dirichlet_zeros(&e, 50.0), 2);
        assert_eq!(dirichlet_zeros(&e, 4.1 * 4.1 * PI * PI), 4);

        // Split into pieces with zero potential: same counts.
        let split = Edge::new("e", "a", "b", 1.0).with_potential(vec![
            PotentialPiece { len: 0.3, q: 0.0 },
            PotentialPiece { len: 0.7, q: 0.0 },
        ]);
        for lam in [0.5, 10.0, 50.0, 300.0, 1000.0] {
            assert_eq!(dirichlet_zeros(&split, lam), dirichlet_zeros(&e, lam), "{lam}");
        }
    }

    #[test]
    fn barrier_piece_counts() {
        // q = 100 on the middle third: the first Dirichlet eigenvalue lies
        // below 100 although part of the edge is classically forbidden.
        let e = Edge::new("e", "a", "b", 3.0).with_potential(vec![
            PotentialPiece { len: 1.0, q: 0.0 },
            PotentialPiece { len: 1.0, q: 100.0 },
            PotentialPiece { len: 1.0, q: 0.0 },
        ]);
        // Two nearly decoupled unit wells, each with an eigenvalue near 8.1.
        assert_eq!(dirichlet_zeros(&e, 7.0), 0);
        assert_eq!(dirichlet_zeros(&e, 9.5), 2);
    }

    #[test]
    fn loop_counts() {
        let g = MetricGraph::from_lengths(&["a"], &[("a", "a", 2.0 * PI)]).unwrap();
        assert_eq!(index_count(&g, &ConditionSpec::Krein, 0.5).unwrap(), 1);
        assert_eq!(index_count(&g, &ConditionSpec::Krein, 1.5).unwrap(), 3);
        assert_eq!(index_count(&g, &ConditionSpec::Krein, 4.5).unwrap(), 5);
        // λ = 1 and λ = 4 are Dirichlet eigenvalues of the loop edge.
        assert_eq!(index_count(&g, &ConditionSpec::Krein, 4.0 + 1e-3).unwrap(), 5);
    }

    #[test]
    fn interval_counts() {
        let g = MetricGraph::from_lengths(&["a", "b"], &[("a", "b", 1.0)]).unwrap();
        let k = ConditionSpec::Krein;
        assert_eq!(index_count(&g, &k, 1.0).unwrap(), 2);
        assert_eq!(index_count(&g, &k, 40.0).unwrap(), 3);
        assert_eq!(index_count(&g, &k, 80.0).unwrap(), 3);
        assert_eq!(index_count(&g, &k, 81.0).unwrap(), 4);
        assert_eq!(index_count(&g, &ConditionSpec::Standard, 1.0).unwrap(), 1);
        assert_eq!(index_count(&g, &ConditionSpec::Standard, 10.0).unwrap(), 2);
        assert_eq!(index_count(&g, &ConditionSpec::Dirichlet, 10.0).unwrap(), 1);
        assert!(index_count(&g, &k, 0.0).is_err());
    }

    #[test]
    fn weyl_bound_values() {
        let g = MetricGraph::from_lengths(&["a"], &[("a", "a", 2.0 * PI)]).unwrap();
        assert_eq!(weyl_bounds(&g, 1.0).unwrap(), (1.0, 3.0));
        let g = MetricGraph::from_lengths(&["a", "b"], &[("a", "b", 1.0)]).unwrap();
        let (lo, hi) = weyl_bounds(&g, (2.5 * PI).powi(2)).unwrap();
        assert!((lo - 1.5).abs() < 1e-14 && (hi - 4.5).abs() < 1e-14);
        assert_eq!(weyl_bounds(&g, 0.0).unwrap(), (-1.0, 2.0));
        let q = MetricGraph::new(
            vec!["a".into(), "b".into()],
            vec![Edge::new("e", "a", "b", 1.0).with_constant_potential(1.0)],
        )
        .unwrap();
        assert_eq!(weyl_bounds(&q, 1.0).unwrap_err().code(), "POTENTIAL_NOT_ZERO");
    }
}
