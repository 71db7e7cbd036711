use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditions::ConditionSpec;
use crate::edge::{particular_solution, sample_count, sample_nodes, EdgeSolution};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::weyl::{dtn_zero, weyl_matrix};

use super::secular::{reference_scale, SecularSystem, KERNEL_TOL};

/// A right-hand side sampled at the per-piece Gauss–Legendre nodes of each
/// edge (see [`crate::edge::sample_nodes`]).
#[derive(Debug, Clone, PartialEq)]
pub struct EdgewiseFunction {
    pub samples: Vec<Vec<f64>>,
}

impl EdgewiseFunction {
    /// Samples `f(edge_index, x)`.
    pub fn sample(graph: &MetricGraph, f: impl Fn(usize, f64) -> f64) -> Self {
        Self {
            samples: graph
                .edges()
                .iter()
                .enumerate()
                .map(|(e, edge)| sample_nodes(edge).into_iter().map(|x| f(e, x)).collect())
                .collect(),
        }
    }

    pub fn constant(graph: &MetricGraph, c: f64) -> Self {
        Self::sample(graph, |_, _| c)
    }

    /// A random combination of low trigonometric modes on every edge.
    pub fn random_smooth(graph: &MetricGraph, rng: &mut impl Rng) -> Self {
        let coeffs: Vec<[f64; 8]> = graph
            .edges()
            .iter()
            .map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
            .collect();
        Self::sample(graph, |e, x| {
            let t = std::f64::consts::PI * x / graph.edges()[e].length;
            (0..4)
                .map(|k| {
                    let k = k as f64;
                    coeffs[e][2 * k as usize] * (k * t).cos()
                        + coeffs[e][2 * k as usize + 1] * ((k + 1.0) * t).sin()
                })
                .sum()
        })
    }

    fn check(&self, graph: &MetricGraph) -> Result<()> {
        let ok = self.samples.len() == graph.edge_count()
            && self
                .samples
                .iter()
                .zip(graph.edges())
                .all(|(s, e)| s.len() == sample_count(e));
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "right-hand side does not match the sample layout of the graph".into(),
            ))
        }
    }
}

/// A function given edgewise as `a c + b s + u_p`.
#[derive(Debug, Clone)]
pub struct EdgewiseSolution {
    pub edges: Vec<EdgeSolution>,
}

impl EdgewiseSolution {
    /// `(u(x), u'(x))` on edge `e`.
    pub fn eval(&self, e: usize, x: f64) -> (f64, f64) {
        self.edges[e].eval(x)
    }

    /// Values of `self - other` at this solution's quadrature points, with
    /// weights.
    fn difference_samples(&self, other: &EdgewiseSolution) -> (Vec<f64>, Vec<f64>) {
        let mut vals = Vec::new();
        let mut wts = Vec::new();
        for (mine, theirs) in self.edges.iter().zip(&other.edges) {
            for (x, w) in mine.quadrature_points() {
                vals.push(mine.eval(x).0 - theirs.eval(x).0);
                wts.push(w);
            }
        }
        (vals, wts)
    }

    fn samples(&self) -> (Vec<f64>, Vec<f64>) {
        let mut vals = Vec::new();
        let mut wts = Vec::new();
        for edge in &self.edges {
            for (x, w) in edge.quadrature_points() {
                vals.push(edge.eval(x).0);
                wts.push(w);
            }
        }
        (vals, wts)
    }

    pub fn l2_norm(&self) -> f64 {
        let (v, w) = self.samples();
        v.iter().zip(&w).map(|(a, b)| a * a * b).sum::<f64>().sqrt()
    }

    pub fn l2_distance(&self, other: &EdgewiseSolution) -> f64 {
        let (v, w) = self.difference_samples(other);
        v.iter().zip(&w).map(|(a, b)| a * a * b).sum::<f64>().sqrt()
    }
}

/// `(H - λ)⁻¹ f` for the operator selected by `conditions`.
pub fn apply_resolvent(
    graph: &MetricGraph,
    conditions: &ConditionSpec,
    lambda: f64,
    f: &EdgewiseFunction,
) -> Result<EdgewiseSolution> {
    f.check(graph)?;
    let sys = SecularSystem::new(graph, conditions)?;
    let parts: Vec<_> = graph
        .edges()
        .iter()
        .zip(&f.samples)
        .map(|(e, s)| particular_solution(e, lambda, s))
        .collect();
    let bases: Vec<_> = parts.iter().map(|p| p.basis).collect();
    let ends: Vec<(f64, f64)> = parts.iter().map(|p| (p.value_end, p.deriv_end)).collect();
    let mut asm = sys.assemble(&bases, Some(&ends), 1.0);
    asm.normalize();
    let x = solve_regular(asm.m, &asm.rhs, lambda)?;
    Ok(EdgewiseSolution {
        edges: parts
            .into_iter()
            .enumerate()
            .map(|(e, particular)| EdgeSolution {
                a: x[2 * e],
                b: x[2 * e + 1],
                particular,
            })
            .collect(),
    })
}

fn solve_regular(m: DMatrix<f64>, rhs: &DVector<f64>, lambda: f64) -> Result<DVector<f64>> {
    let svd = m.svd(true, true);
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let scale = reference_scale(&sv);
    let smin = svd.singular_values.min();
    if !(smin > KERNEL_TOL * scale) {
        return Err(Error::LambdaInSpectrum {
            lambda,
            sigma: smin / scale,
        });
    }
    svd.solve(rhs, 0.0).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Krein resolvent assembled as `R_D f + γ(λ) (M(0) - M(λ))⁻¹ γ(λ)* f`.
///
/// `γ(λ)* f` is the vector of `-∂_ν (R_D f)` at the vertices and `γ(λ) φ` is
/// the edgewise solution of the homogeneous equation with vertex values `φ`.
pub fn krein_resolvent_via_formula(
    graph: &MetricGraph,
    lambda: f64,
    f: &EdgewiseFunction,
) -> Result<EdgewiseSolution> {
    let w = apply_resolvent(graph, &ConditionSpec::Dirichlet, lambda, f)?;
    let n = graph.vertex_count();
    let mut beta = DVector::zeros(n);
    for (e, sol) in w.edges.iter().enumerate() {
        let (a, b) = graph.endpoints(e);
        let (_, d0) = sol.eval(0.0);
        let (_, d1) = sol.eval(graph.edges()[e].length);
        // toward-vertex derivatives are -u'(0) and u'(ℓ)
        beta[a] += d0;
        beta[b] -= d1;
    }
    let m0 = -dtn_zero(graph);
    let ml = weyl_matrix(graph, lambda)?.entries;
    let phi = solve_regular(m0 - ml, &beta, lambda)?;

    let edges = w
        .edges
        .into_iter()
        .enumerate()
        .map(|(e, sol)| {
            let (u, v) = graph.endpoints(e);
            let basis = sol.particular.basis;
            let ca = phi[u];
            let cb = (phi[v] - phi[u] * basis.c_end) / basis.s_end;
            EdgeSolution {
                a: sol.a + ca,
                b: sol.b + cb,
                particular: sol.particular,
            }
        })
        .collect();
    Ok(EdgewiseSolution { edges })
}

/// Numerical rank of `R_A(λ) - R_B(λ)` seen through `n_probes` random smooth
/// probes (fixed seed).
pub fn resolvent_difference_rank(
    graph: &MetricGraph,
    cond_a: &ConditionSpec,
    cond_b: &ConditionSpec,
    lambda: f64,
    n_probes: usize,
) -> Result<usize> {
    resolvent_difference_rank_seeded(graph, cond_a, cond_b, lambda, n_probes, 0x5eed)
}

pub fn resolvent_difference_rank_seeded(
    graph: &MetricGraph,
    cond_a: &ConditionSpec,
    cond_b: &ConditionSpec,
    lambda: f64,
    n_probes: usize,
    seed: u64,
) -> Result<usize> {
    let need = 2 * graph.vertex_count();
    if n_probes < need {
        return Err(Error::InvalidArgument(format!(
            "need at least {need} probes, got {n_probes}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diffs: Vec<Vec<f64>> = Vec::with_capacity(n_probes);
    let mut weights = Vec::new();
    for _ in 0..n_probes {
        let f = EdgewiseFunction::random_smooth(graph, &mut rng);
        let ua = apply_resolvent(graph, cond_a, lambda, &f)?;
        let ub = apply_resolvent(graph, cond_b, lambda, &f)?;
        let (d, w) = ua.difference_samples(&ub);
        diffs.push(d);
        weights = w;
    }
    let gram = DMatrix::from_fn(n_probes, n_probes, |i, j| {
        diffs[i]
            .iter()
            .zip(&diffs[j])
            .zip(&weights)
            .map(|((a, b), w)| a * b * w)
            .sum::<f64>()
    });
    let sv = gram.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > KERNEL_TOL * smax).count())
}
