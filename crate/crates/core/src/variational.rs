//! Rayleigh–Ritz upper bounds for the positive Krein eigenvalues.
//!
//! The positive eigenvalues of the Krein realisation are the eigenvalues of
//! the buckling pencil
//! `∫(-f''+qf)(-f''+qg) = λ ∫(f'g' + q f g)` on functions that vanish at
//! every vertex and whose toward-vertex derivatives sum to zero there.
//! Trial functions are sines on each edge (they vanish at the endpoints),
//! optionally enriched by two cubics whose second derivatives do not vanish
//! at the ends; the Kirchhoff sums are imposed through an explicit null-space
//! basis of the constraint matrix.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::conditions::ConditionSpec;
use crate::error::{Error, Result};
use crate::graph::{integrate_potential, total_length, Edge, MetricGraph};
use crate::quadrature::mapped_nodes;
use crate::spectral::eigenvalues;

/// Per-edge trial space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisKind {
    /// `sin(mπx/ℓ)`, `m = 1..M`.
    Sine,
    /// The sines plus two cubics vanishing at both ends with `p'' = (ℓ-x)/ℓ`
    /// and `p'' = x/ℓ`. Converges much faster because eigenfunctions of the
    /// pencil need not have `f'' = 0` at the vertices.
    #[default]
    SineCubic,
}

#[derive(Debug, Clone)]
pub struct BucklingPencil {
    pub a: DMatrix<f64>,
    pub bm: DMatrix<f64>,
    /// One row per vertex: toward-vertex derivative sums of the basis.
    pub c: DMatrix<f64>,
    pub modes: usize,
    pub basis: BasisKind,
    /// First column of each edge's block.
    pub offsets: Vec<usize>,
}

struct EdgeTrial {
    length: f64,
    modes: usize,
    cubic: bool,
}

impl EdgeTrial {
    fn size(&self) -> usize {
        self.modes + if self.cubic { 2 } else { 0 }
    }

    /// `(φ, φ', φ'')` of every trial function at `x`.
    fn eval(&self, x: f64, out: &mut [[f64; 3]]) {
        let l = self.length;
        for m in 1..=self.modes {
            let k = m as f64 * PI / l;
            let (s, c) = (k * x).sin_cos();
            out[m - 1] = [s, k * c, -k * k * s];
        }
        if self.cubic {
            let n = self.modes;
            out[n] = [
                (x * x * x - 3.0 * l * x * x + 2.0 * l * l * x) / (-6.0 * l),
                (3.0 * x * x - 6.0 * l * x + 2.0 * l * l) / (-6.0 * l),
                (l - x) / l,
            ];
            out[n + 1] = [
                (x * x * x - l * l * x) / (6.0 * l),
                (3.0 * x * x - l * l) / (6.0 * l),
                x / l,
            ];
        }
    }
}

fn edge_blocks(edge: &Edge, trial: &EdgeTrial) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = trial.size();
    let mut a = DMatrix::zeros(n, n);
    let mut b = DMatrix::zeros(n, n);
    let mut vals = vec![[0.0; 3]; n];
    for (start, len, q) in edge.pieces() {
        let sub = (2.0 * trial.modes as f64 * len / edge.length).ceil() as usize + 1;
        let h = len / sub as f64;
        for k in 0..sub {
            for (x, w) in mapped_nodes(start + k as f64 * h, h) {
                trial.eval(x, &mut vals);
                for i in 0..n {
                    let ri = -vals[i][2] + q * vals[i][0];
                    for j in i..n {
                        let rj = -vals[j][2] + q * vals[j][0];
                        a[(i, j)] += w * ri * rj;
                        b[(i, j)] += w * (vals[i][1] * vals[j][1] + q * vals[i][0] * vals[j][0]);
                    }
                }
            }
        }
    }
    // q-free sine–sine parts in closed form.
    let l = edge.length;
    for i in 0..trial.modes {
        for j in i..trial.modes {
            let mut qa = 0.0;
            let mut qb = 0.0;
            if !edge.potential_is_zero() {
                // keep only the q-dependent part of the quadrature
                let (fa, fb) = free_sine_quadrature(edge, trial, i, j);
                qa = a[(i, j)] - fa;
                qb = b[(i, j)] - fb;
            }
            let (ea, eb) = if i == j {
                let k = (i + 1) as f64 * PI / l;
                (k.powi(4) * l / 2.0, k * k * l / 2.0)
            } else {
                (0.0, 0.0)
            };
            a[(i, j)] = ea + qa;
            b[(i, j)] = eb + qb;
        }
    }
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
            b[(i, j)] = b[(j, i)];
        }
    }
    (a, b)
}

/// The q-free sine–sine integrals evaluated by the same quadrature as the
/// full entries, so that subtracting them isolates the q-dependent part.
fn free_sine_quadrature(edge: &Edge, trial: &EdgeTrial, i: usize, j: usize) -> (f64, f64) {
    let mut fa = 0.0;
    let mut fb = 0.0;
    let l = edge.length;
    let ki = (i + 1) as f64 * PI / l;
    let kj = (j + 1) as f64 * PI / l;
    for (start, len, _) in edge.pieces() {
        let sub = (2.0 * trial.modes as f64 * len / l).ceil() as usize + 1;
        let h = len / sub as f64;
        for k in 0..sub {
            for (x, w) in mapped_nodes(start + k as f64 * h, h) {
                fa += w * ki * ki * (ki * x).sin() * kj * kj * (kj * x).sin();
                fb += w * ki * (ki * x).cos() * kj * (kj * x).cos();
            }
        }
    }
    (fa, fb)
}

pub fn assemble_buckling_pencil(graph: &MetricGraph, modes: usize) -> Result<BucklingPencil> {
    assemble_buckling_pencil_with(graph, modes, BasisKind::default())
}

pub fn assemble_buckling_pencil_with(graph: &MetricGraph, modes: usize, basis: BasisKind) -> Result<BucklingPencil> {
    if modes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 modes per edge, got {modes}")));
    }
    let trials: Vec<EdgeTrial> = graph
        .edges()
        .iter()
        .map(|e| EdgeTrial {
            length: e.length,
            modes,
            cubic: basis == BasisKind::SineCubic,
        })
        .collect();
    let mut offsets = Vec::with_capacity(trials.len());
    let mut total = 0;
    for t in &trials {
        offsets.push(total);
        total += t.size();
    }
    let mut a = DMatrix::zeros(total, total);
    let mut bm = DMatrix::zeros(total, total);
    let mut c = DMatrix::zeros(graph.vertex_count(), total);
    let mut vals0 = Vec::new();
    let mut vals1 = Vec::new();
    for (e, (edge, trial)) in graph.edges().iter().zip(&trials).enumerate() {
        let (ae, be) = edge_blocks(edge, trial);
        let off = offsets[e];
        let n = trial.size();
        a.view_mut((off, off), (n, n)).copy_from(&ae);
        bm.view_mut((off, off), (n, n)).copy_from(&be);

        vals0.resize(n, [0.0; 3]);
        vals1.resize(n, [0.0; 3]);
        trial.eval(0.0, &mut vals0);
        trial.eval(edge.length, &mut vals1);
        let (u, v) = graph.endpoints(e);
        for i in 0..n {
            c[(u, off + i)] -= vals0[i][1];
            c[(v, off + i)] += vals1[i][1];
        }
    }
    Ok(BucklingPencil {
        a,
        bm,
        c,
        modes,
        basis,
        offsets,
    })
}

impl BucklingPencil {
    /// Orthonormal basis (columns) of `ker C`.
    pub fn constraint_null_space(&self) -> DMatrix<f64> {
        let n = self.c.ncols();
        let svd = self.c.clone().svd(false, true);
        let vt = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        let rows: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > 1e-12 * smax.max(1.0))
            .collect();
        let vr = vt.select_rows(&rows);
        let proj = DMatrix::identity(n, n) - vr.transpose() * &vr;
        let eig = proj.symmetric_eigen();
        let cols: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        eig.eigenvectors.select_columns(&cols)
    }

    /// Generalised eigenvalues of the pencil restricted to `ker C`, ascending.
    pub fn ritz_values(&self) -> Result<Vec<f64>> {
        // Unit-diagonal scaling; the sine columns alone span four orders of
        // magnitude in Bm at large M.
        let d = DVector::from_iterator(self.bm.nrows(), self.bm.diagonal().iter().map(|&x| 1.0 / x.sqrt()));
        let dm = DMatrix::from_diagonal(&d);
        let scaled = BucklingPencil {
            a: &dm * &self.a * &dm,
            bm: &dm * &self.bm * &dm,
            c: &self.c * &dm,
            ..self.clone()
        };
        let z = scaled.constraint_null_space();
        if z.ncols() == 0 {
            return Ok(Vec::new());
        }
        let ar = z.transpose() * &scaled.a * &z;
        let br = z.transpose() * &scaled.bm * &z;
        let br = (&br + br.transpose()) * 0.5;
        let chol = br
            .cholesky()
            .ok_or_else(|| Error::InvalidArgument("reduced stiffness matrix is not positive definite".into()))?;
        let l = chol.l();
        let x = l
            .solve_lower_triangular(&ar)
            .expect("Cholesky factor is invertible");
        let y = l
            .solve_lower_triangular(&x.transpose())
            .expect("Cholesky factor is invertible");
        let y = (&y + y.transpose()) * 0.5;
        let mut ev: Vec<f64> = y.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        Ok(ev)
    }
}

/// Upper bounds `u_1 ≤ … ≤ u_{j_max}` for the positive Krein eigenvalues.
pub fn rayleigh_ritz(graph: &MetricGraph, modes: usize, j_max: usize) -> Result<Vec<f64>> {
    rayleigh_ritz_with(graph, modes, j_max, BasisKind::default())
}

pub fn rayleigh_ritz_with(graph: &MetricGraph, modes: usize, j_max: usize, basis: BasisKind) -> Result<Vec<f64>> {
    let pencil = assemble_buckling_pencil_with(graph, modes, basis)?;
    let ev = pencil.ritz_values()?;
    if ev.len() < j_max {
        return Err(Error::InsufficientSubspace {
            available: ev.len(),
            requested: j_max,
        });
    }
    Ok(ev[..j_max].to_vec())
}

/// `(π²/ℓ(Γ)) Σ n_e²/ℓ(e)` minimised over `n_e ≥ 1` with `Σ n_e` even, for
/// graphs whose vertices all have even degree; `None` otherwise.
pub fn eulerian_upper_bound(graph: &MetricGraph) -> Result<Option<f64>> {
    if !graph.potential_is_zero() {
        return Err(Error::PotentialNotZero);
    }
    if graph.degrees().iter().any(|d| d % 2 == 1) {
        return Ok(None);
    }
    let mut n = vec![1.0; graph.edge_count()];
    if graph.edge_count() % 2 == 1 {
        let longest = graph
            .edges()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.length.total_cmp(&b.1.length))
            .map(|(i, _)| i)
            .expect("graphs have edges");
        n[longest] = 2.0;
    }
    let sum: f64 = graph
        .edges()
        .iter()
        .zip(&n)
        .map(|(e, ne)| ne * ne / e.length)
        .sum();
    Ok(Some(PI * PI / total_length(graph) * sum))
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsoperimetricReport {
    pub lambda1_plus: f64,
    /// `4π²/ℓ(Γ)²` for zero potential, otherwise the first eigenvalue of the
    /// δ-loop of length `ℓ(Γ)` and strength `∫q`.
    pub bound: f64,
    pub margin: f64,
    pub relative_margin: f64,
    pub potential_zero: bool,
    pub holds: bool,
}

/// Smallest positive eigenvalue, widening the search window until one is
/// found.
pub fn first_positive(graph: &MetricGraph, conditions: &ConditionSpec) -> Result<f64> {
    let l = total_length(graph);
    let mut lambda_max = 16.0 * PI * PI / (l * l) + 2.0 * graph.max_potential();
    for _ in 0..12 {
        let s = eigenvalues(graph, conditions, lambda_max)?;
        if let Some(&(lam, _)) = s.pairs.iter().find(|p| p.0 > 0.0) {
            return Ok(lam);
        }
        lambda_max *= 2.0;
    }
    Err(Error::ScanIncomplete {
        lambda_max,
        detail: "no positive eigenvalue found".into(),
    })
}

/// Compares `λ₁⁺` of the Krein realisation with `4π²/ℓ(Γ)²` (zero
/// potential) or with the δ-loop eigenvalue (nonzero potential).
pub fn isoperimetric_check(graph: &MetricGraph) -> Result<IsoperimetricReport> {
    let lambda1 = first_positive(graph, &ConditionSpec::Krein)?;
    let l = total_length(graph);
    let potential_zero = graph.potential_is_zero();
    let tol = crate::surgery::tolerance();
    let (bound, holds) = if potential_zero {
        let b = 4.0 * PI * PI / (l * l);
        (b, lambda1 >= b - tol)
    } else {
        let lp = MetricGraph::from_lengths(&["o"], &[("o", "o", l)])?;
        let b = first_positive(&lp, &ConditionSpec::delta([("o", integrate_potential(graph))]))?;
        (b, lambda1 > b)
    };
    Ok(IsoperimetricReport {
        lambda1_plus: lambda1,
        bound,
        margin: lambda1 - bound,
        relative_margin: (lambda1 - bound) / bound,
        potential_zero,
        holds,
    })
}
