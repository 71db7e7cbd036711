use kreingraph::harness::{random_graph, random_graph_with_potential, trial_rng, RandomGraphOptions};
use kreingraph::surgery::{cut_vertex, glue_points, glue_vertices, insert_degree2, remove_degree2, scale_graph, EdgeEnd, Point, Side};
use kreingraph::{
    eigenvalues, integrate_potential, total_length, transfer_matrix, weyl_matrix, ConditionSpec, Edge, MetricGraph,
    PotentialPiece,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn graph_from_seed(seed: u64, potential: bool) -> MetricGraph {
    let mut rng = trial_rng(seed, 0);
    let opts = RandomGraphOptions {
        max_vertices: 5,
        max_edges: 7,
        ..RandomGraphOptions::default()
    };
    if potential {
        random_graph_with_potential(&mut rng, &opts)
    } else {
        random_graph(&mut rng, &opts)
    }
}

fn window(g: &MetricGraph) -> f64 {
    (PI * (g.edge_count() + g.vertex_count() + 4) as f64 / total_length(g)).powi(2) + g.max_potential()
}

/// Compares the expanded Krein spectra of two graphs below `0.9 * top`.
fn same_spectrum(a: &MetricGraph, b: &MetricGraph, tol: f64) -> Result<(), TestCaseError> {
    let top = window(a);
    let sa = eigenvalues(a, &ConditionSpec::Krein, top).unwrap().expanded();
    let sb = eigenvalues(b, &ConditionSpec::Krein, top).unwrap().expanded();
    let n = sa.iter().filter(|&&l| l < 0.9 * top).count();
    prop_assert!(sb.len() >= n, "{} vs {} eigenvalues", sa.len(), sb.len());
    for (x, y) in sa.iter().zip(&sb).take(n) {
        prop_assert!((x - y).abs() <= tol * x.abs().max(1.0), "{x} vs {y}");
    }
    Ok(())
}

/// Classical RK4 for `u'' = (q - λ) u` across the pieces.
fn rk4_fundamental(pieces: &[(f64, f64)], lambda: f64, u0: f64, du0: f64) -> (f64, f64) {
    let (mut u, mut du) = (u0, du0);
    for &(len, q) in pieces {
        let n = 4000;
        let h = len / n as f64;
        let k = q - lambda;
        for _ in 0..n {
            let f = |u: f64, du: f64| (du, k * u);
            let (a1, b1) = f(u, du);
            let (a2, b2) = f(u + 0.5 * h * a1, du + 0.5 * h * b1);
            let (a3, b3) = f(u + 0.5 * h * a2, du + 0.5 * h * b2);
            let (a4, b4) = f(u + h * a3, du + h * b3);
            u += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            du += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
        }
    }
    (u, du)
}

fn pieces_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.2f64..2.0, -2.0f64..6.0), 1..4)
}

fn edge_from(pieces: &[(f64, f64)]) -> Edge {
    let length = pieces.iter().map(|p| p.0).sum();
    Edge::new("e", "a", "b", length).with_potential(pieces.iter().map(|&(len, q)| PotentialPiece { len, q }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wronskian_is_one(pieces in pieces_strategy(), lambda in -40.0f64..200.0) {
        let b = transfer_matrix(&edge_from(&pieces), lambda);
        let scale = (b.c_end * b.ds_end).abs().max((b.s_end * b.dc_end).abs()).max(1.0);
        prop_assert!((b.wronskian() - 1.0).abs() <= 1e-12 * scale, "W = {}", b.wronskian());
    }

    #[test]
    fn transfer_matches_rk4(pieces in pieces_strategy(), lambda in -20.0f64..80.0) {
        let b = transfer_matrix(&edge_from(&pieces), lambda);
        let (c, dc) = rk4_fundamental(&pieces, lambda, 1.0, 0.0);
        let (s, ds) = rk4_fundamental(&pieces, lambda, 0.0, 1.0);
        for (x, y) in [(b.c_end, c), (b.dc_end, dc), (b.s_end, s), (b.ds_end, ds)] {
            prop_assert!((x - y).abs() <= 1e-8 * y.abs().max(1.0), "{x} vs rk4 {y}");
        }
    }

    #[test]
    fn weyl_matrix_is_symmetric(seed in any::<u64>(), lambda in -30.0f64..1.0) {
        let g = graph_from_seed(seed, true);
        let m = weyl_matrix(&g, lambda).unwrap().entries;
        let scale = m.amax().max(1.0);
        prop_assert!((&m - m.transpose()).amax() <= 1e-13 * scale);
    }

    #[test]
    fn glue_then_cut_restores_spectrum(seed in any::<u64>()) {
        let g = graph_from_seed(seed, seed % 2 == 0);
        prop_assume!(g.vertex_count() >= 2);
        let (keep, other) = (g.vertices()[0].clone(), g.vertices()[1].clone());
        let ends_at = |v: &str| -> Vec<EdgeEnd> {
            let mut out = Vec::new();
            for e in g.edges() {
                if e.u == v { out.push(EdgeEnd::new(e.id.clone(), Side::Start)); }
                if e.v == v { out.push(EdgeEnd::new(e.id.clone(), Side::End)); }
            }
            out
        };
        let glued = glue_vertices(&g, &[keep.clone(), other.clone()]).unwrap().graph;
        let cut = cut_vertex(&glued, &keep, &[ends_at(&keep), ends_at(&other)]).unwrap().graph;
        prop_assert_eq!(cut.edge_count(), g.edge_count());
        prop_assert!((total_length(&cut) - total_length(&g)).abs() < 1e-12);
        same_spectrum(&g, &cut, 1e-9)?;
    }

    #[test]
    fn insert_then_remove_degree2(seed in any::<u64>(), t in 0.05f64..0.95) {
        let g = graph_from_seed(seed, true);
        let e = g.edges()[0].clone();
        let inserted = insert_degree2(&g, &e.id, t * e.length).unwrap();
        let mid = inserted.new_vertices[0].clone();
        prop_assert!((total_length(&inserted.graph) - total_length(&g)).abs() < 1e-12);
        prop_assert!((integrate_potential(&inserted.graph) - integrate_potential(&g)).abs() < 1e-12);
        let back = remove_degree2(&inserted.graph, &mid).unwrap().graph;
        prop_assert_eq!(back.edge_count(), g.edge_count());
        prop_assert!((integrate_potential(&back) - integrate_potential(&g)).abs() < 1e-12);
        same_spectrum(&g, &back, 1e-9)?;
    }

    #[test]
    fn relabelling_and_reversal_are_invisible(seed in any::<u64>()) {
        let g = graph_from_seed(seed, true);
        let rename = |v: &str| format!("w_{v}");
        let mut vertices: Vec<String> = g.vertices().iter().map(|v| rename(v)).collect();
        vertices.reverse();
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let mut f = e.clone();
                f.id = format!("r{i}");
                f.u = rename(&e.u);
                f.v = rename(&e.v);
                if i % 2 == 0 {
                    std::mem::swap(&mut f.u, &mut f.v);
                    f.potential.reverse();
                }
                f
            })
            .rev()
            .collect();
        let h = MetricGraph::new(vertices, edges).unwrap();
        same_spectrum(&g, &h, 1e-9)?;
    }

    #[test]
    fn scaling_by_alpha(seed in any::<u64>(), alpha in 0.5f64..2.5) {
        let g = graph_from_seed(seed, seed % 3 == 0);
        let h = scale_graph(&g, alpha).unwrap();
        prop_assert!((total_length(&h) - alpha * total_length(&g)).abs() < 1e-12 * alpha * total_length(&g));
        let top = window(&g);
        let sg = eigenvalues(&g, &ConditionSpec::Krein, top).unwrap().expanded();
        let sh = eigenvalues(&h, &ConditionSpec::Krein, top / (alpha * alpha)).unwrap().expanded();
        let n = sg.iter().filter(|&&l| l < 0.9 * top).count();
        prop_assert!(sh.len() >= n);
        for (x, y) in sg.iter().zip(&sh).take(n) {
            prop_assert!((x - y * alpha * alpha).abs() <= 1e-9 * x.abs().max(1.0), "{x} vs {}", y * alpha * alpha);
        }
    }

    #[test]
    fn glue_points_order_is_irrelevant(seed in any::<u64>(), t in 0.1f64..0.9) {
        let g = graph_from_seed(seed, false);
        let e = &g.edges()[g.edge_count() - 1];
        let points = vec![
            Point::Vertex(g.vertices()[0].clone()),
            Point::OnEdge { edge: e.id.clone(), position: t * e.length },
        ];
        let forward = glue_points(&g, &points).unwrap();
        let mut reversed = points.clone();
        reversed.reverse();
        let backward = glue_points(&g, &reversed).unwrap();
        prop_assert_eq!((forward.k, forward.k0), (1, 1));
        prop_assert_eq!((backward.k, backward.k0), (1, 1));
        same_spectrum(&forward.surgery.graph, &backward.surgery.graph, 1e-9)?;
    }
}
