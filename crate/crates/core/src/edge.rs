//! Closed-form solutions of `-u'' + q u = λ u` on one edge.
//!
//! On a piece of length `h` with `w2 = λ - q` the solution map
//! `(u, u') ↦ (u, u')` is `[[C, S], [-w2 S, C]]` with `C = cos(ωh)` and
//! `S = sin(ωh)/ω` (hyperbolic analogues for `w2 < 0`). Near `w2 h² = 0`
//! both entries are evaluated from their power series so there is no jump at
//! the branch switch.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::quadrature::{gl10, lagrange, mapped_nodes, GL_ORDER};

const SERIES_RADIUS: f64 = 1.0;

/// Solution map over a piece of length `h` with `w2 = λ - q`.
pub fn piece_block(w2: f64, h: f64) -> Matrix2<f64> {
    let (c, s) = cos_sinc(w2, h);
    Matrix2::new(c, s, -w2 * s, c)
}

/// `(cos(ωh), sin(ωh)/ω)` for `ω² = w2`, analytic in `w2`.
fn cos_sinc(w2: f64, h: f64) -> (f64, f64) {
    let z = w2 * h * h;
    if z.abs() <= SERIES_RADIUS {
        // C = Σ (-z)^n/(2n)!,  S/h = Σ (-z)^n/(2n+1)!
        let mut c = 1.0;
        let mut s = 1.0;
        let mut tc = 1.0;
        let mut ts = 1.0;
        for n in 1..30 {
            let nf = n as f64;
            tc *= -z / ((2.0 * nf - 1.0) * (2.0 * nf));
            ts *= -z / ((2.0 * nf) * (2.0 * nf + 1.0));
            c += tc;
            s += ts;
            if tc.abs() < 1e-18 && ts.abs() < 1e-18 {
                break;
            }
        }
        (c, s * h)
    } else if w2 > 0.0 {
        let w = w2.sqrt();
        ((w * h).cos(), (w * h).sin() / w)
    } else {
        let w = (-w2).sqrt();
        ((w * h).cosh(), (w * h).sinh() / w)
    }
}

/// Values and derivatives at `x = ℓ` of the solutions `c`, `s` with
/// `c(0) = 1, c'(0) = 0, s(0) = 0, s'(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeBasis {
    pub lambda: f64,
    pub c_end: f64,
    pub s_end: f64,
    pub dc_end: f64,
    pub ds_end: f64,
}

impl EdgeBasis {
    pub fn wronskian(&self) -> f64 {
        self.c_end * self.ds_end - self.s_end * self.dc_end
    }

    /// Whether `λ` is numerically a Dirichlet eigenvalue of the edge.
    pub fn is_dirichlet_pole(&self, length: f64) -> bool {
        let scale = 1f64.max(self.c_end.abs()).max(self.ds_end.abs());
        self.s_end.abs() < 1e-12 * length * scale
    }
}

/// Fundamental matrix `[[c, s], [c', s']]` at `x = ℓ`.
pub fn transfer_product(edge: &Edge, lambda: f64) -> Matrix2<f64> {
    edge.potential
        .iter()
        .fold(Matrix2::identity(), |m, p| piece_block(lambda - p.q, p.len) * m)
}

pub fn transfer_matrix(edge: &Edge, lambda: f64) -> EdgeBasis {
    let m = transfer_product(edge, lambda);
    EdgeBasis {
        lambda,
        c_end: m[(0, 0)],
        s_end: m[(0, 1)],
        dc_end: m[(1, 0)],
        ds_end: m[(1, 1)],
    }
}

/// Fundamental matrix `[[c, s], [c', s']]` at an interior point `x`.
pub fn fundamental_at(edge: &Edge, lambda: f64, x: f64) -> Matrix2<f64> {
    let mut m = Matrix2::identity();
    for (start, len, q) in edge.pieces() {
        let t = (x - start).min(len);
        if t <= 0.0 {
            break;
        }
        m = piece_block(lambda - q, t) * m;
    }
    m
}

/// Maps `(f(0), f(ℓ))` of a λ-solution to its derivatives pointing towards
/// the `u` end and the `v` end.
pub fn dtn_block_from_basis(b: &EdgeBasis) -> Matrix2<f64> {
    Matrix2::new(b.c_end, -1.0, -1.0, b.ds_end) / b.s_end
}

pub fn edge_dtn_block(edge: &Edge, lambda: f64) -> Result<Matrix2<f64>> {
    let b = transfer_matrix(edge, lambda);
    if b.is_dirichlet_pole(edge.length) {
        return Err(Error::EdgeDirichletPole {
            edge: edge.id.clone(),
            lambda,
        });
    }
    Ok(dtn_block_from_basis(&b))
}

/// Positions of the sample nodes of an edge: 10 Gauss–Legendre nodes per
/// potential piece, in order.
pub fn sample_nodes(edge: &Edge) -> Vec<f64> {
    edge.pieces()
        .flat_map(|(start, len, _)| mapped_nodes(start, len).map(|(x, _)| x))
        .collect()
}

/// Samples `f` at the nodes of [`sample_nodes`].
pub fn sample_edge(edge: &Edge, f: impl Fn(f64) -> f64) -> Vec<f64> {
    sample_nodes(edge).into_iter().map(f).collect()
}

#[derive(Debug, Clone)]
struct PieceState {
    start: f64,
    len: f64,
    w2: f64,
    basis: Matrix2<f64>,
    ic: f64,
    is: f64,
    nodes: [f64; GL_ORDER],
    f: [f64; GL_ORDER],
}

impl PieceState {
    fn basis_at(&self, x: f64) -> Matrix2<f64> {
        piece_block(self.w2, x - self.start) * self.basis
    }

    /// `(∫ c f, ∫ s f)` over `[start, x]`.
    fn partial(&self, x: f64) -> (f64, f64) {
        let h = x - self.start;
        if h <= 0.0 {
            return (0.0, 0.0);
        }
        let full = (h - self.len).abs() <= 1e-15 * self.len;
        let mut ic = 0.0;
        let mut is = 0.0;
        for (k, (t, w)) in mapped_nodes(self.start, h).enumerate() {
            let fv = if full { self.f[k] } else { lagrange(&self.nodes, &self.f, t) };
            let b = self.basis_at(t);
            ic += w * b[(0, 0)] * fv;
            is += w * b[(0, 1)] * fv;
        }
        (ic, is)
    }
}

/// The solution of `-u'' + q u - λ u = f` with `u(0) = u'(0) = 0`, together
/// with the homogeneous basis it was built from.
#[derive(Debug, Clone)]
pub struct ParticularSolution {
    pub lambda: f64,
    pub length: f64,
    pieces: Vec<PieceState>,
    /// `u_p(ℓ)`.
    pub value_end: f64,
    /// `u_p'(ℓ)`, which is also the derivative towards the `v` end.
    pub deriv_end: f64,
    pub basis: EdgeBasis,
}

/// Pointwise data of the homogeneous basis and the particular solution.
#[derive(Debug, Clone, Copy)]
pub struct PointData {
    pub c: f64,
    pub s: f64,
    pub dc: f64,
    pub ds: f64,
    pub up: f64,
    pub dup: f64,
}

impl ParticularSolution {
    fn locate(&self, x: f64) -> &PieceState {
        let idx = self
            .pieces
            .iter()
            .position(|p| x <= p.start + p.len)
            .unwrap_or(self.pieces.len() - 1);
        &self.pieces[idx]
    }

    pub fn point(&self, x: f64) -> PointData {
        let x = x.clamp(0.0, self.length);
        let p = self.locate(x);
        let b = p.basis_at(x);
        let (dic, dis) = p.partial(x);
        let ic = p.ic + dic;
        let is = p.is + dis;
        let (c, s, dc, ds) = (b[(0, 0)], b[(0, 1)], b[(1, 0)], b[(1, 1)]);
        PointData {
            c,
            s,
            dc,
            ds,
            up: -(s * ic - c * is),
            dup: -(ds * ic - dc * is),
        }
    }

    /// `(u_p(x), u_p'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let d = self.point(x);
        (d.up, d.dup)
    }
}

/// Variation of constants on the sampled right-hand side `f` (values at
/// [`sample_nodes`]).
pub fn particular_solution(edge: &Edge, lambda: f64, f: &[f64]) -> ParticularSolution {
    let n = edge.potential.len();
    assert_eq!(f.len(), GL_ORDER * n, "expected {} samples", GL_ORDER * n);
    let mut basis = Matrix2::identity();
    let mut ic = 0.0;
    let mut is = 0.0;
    let mut pieces = Vec::with_capacity(n);
    for (k, (start, len, q)) in edge.pieces().enumerate() {
        let mut nodes = [0.0; GL_ORDER];
        for (slot, (x, _)) in nodes.iter_mut().zip(mapped_nodes(start, len)) {
            *slot = x;
        }
        let mut fk = [0.0; GL_ORDER];
        fk.copy_from_slice(&f[k * GL_ORDER..(k + 1) * GL_ORDER]);
        let state = PieceState {
            start,
            len,
            w2: lambda - q,
            basis,
            ic,
            is,
            nodes,
            f: fk,
        };
        let (dic, dis) = state.partial(start + len);
        ic += dic;
        is += dis;
        basis = piece_block(lambda - q, len) * basis;
        pieces.push(state);
    }
    let (c, s, dc, ds) = (basis[(0, 0)], basis[(0, 1)], basis[(1, 0)], basis[(1, 1)]);
    ParticularSolution {
        lambda,
        length: edge.length,
        pieces,
        value_end: -(s * ic - c * is),
        deriv_end: -(ds * ic - dc * is),
        basis: EdgeBasis {
            lambda,
            c_end: c,
            s_end: s,
            dc_end: dc,
            ds_end: ds,
        },
    }
}

/// `u = a c + b s + u_p` on one edge.
#[derive(Debug, Clone)]
pub struct EdgeSolution {
    pub a: f64,
    pub b: f64,
    pub particular: ParticularSolution,
}

impl EdgeSolution {
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let d = self.particular.point(x);
        (
            self.a * d.c + self.b * d.s + d.up,
            self.a * d.dc + self.b * d.ds + d.dup,
        )
    }

    /// Composite Gauss–Legendre points `(x, weight)` fine enough for the
    /// oscillation scale of the basis.
    pub fn quadrature_points(&self) -> Vec<(f64, f64)> {
        let mut pts = Vec::new();
        for p in &self.particular.pieces {
            let osc = p.w2.abs().sqrt() * p.len;
            let sub = (osc.ceil() as usize).clamp(1, 64);
            let h = p.len / sub as f64;
            for k in 0..sub {
                pts.extend(mapped_nodes(p.start + k as f64 * h, h));
            }
        }
        pts
    }

    /// Integrates `g(x, u(x))` over the edge.
    pub fn integrate(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        self.quadrature_points()
            .into_iter()
            .map(|(x, w)| w * g(x, self.eval(x).0))
            .sum()
    }
}

/// Number of quadrature samples of an edge.
pub fn sample_count(edge: &Edge) -> usize {
    GL_ORDER * edge.potential.len()
}

/// Weights matching [`sample_nodes`].
pub fn sample_weights(edge: &Edge) -> Vec<f64> {
    let (_, w) = gl10();
    edge.pieces()
        .flat_map(|(_, len, _)| w.iter().map(move |wi| 0.5 * len * wi))
        .collect()
}
