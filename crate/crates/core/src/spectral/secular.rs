use nalgebra::{DMatrix, DVector};

use crate::conditions::{ConditionSpec, Resolved};
use crate::edge::{transfer_matrix, EdgeBasis};
use crate::error::Result;
use crate::graph::MetricGraph;

/// Relative singular-value threshold for kernel detection.
pub(crate) const KERNEL_TOL: f64 = 1e-8;

/// The `2E×2E` matrix whose kernel at `λ` gives the eigenfunctions.
///
/// Unknowns are `(a_e, b_e)` per edge with `f_e = a_e c_e + b_e s_e`,
/// columns `2e` and `2e + 1`.
#[derive(Debug, Clone)]
pub struct SecularMatrix {
    pub lambda: f64,
    pub entries: DMatrix<f64>,
}

/// Graph and resolved conditions, ready for repeated assembly.
#[derive(Debug, Clone)]
pub struct SecularSystem<'a> {
    pub graph: &'a MetricGraph,
    pub resolved: Resolved,
    incidence: Vec<Vec<(usize, usize)>>,
}

/// Linear functional of the unknowns plus a constant.
#[derive(Clone, Copy)]
struct EndForm {
    col: usize,
    ca: f64,
    cb: f64,
    constant: f64,
}

impl<'a> SecularSystem<'a> {
    pub fn new(graph: &'a MetricGraph, conditions: &ConditionSpec) -> Result<Self> {
        Ok(Self {
            graph,
            resolved: conditions.resolve(graph)?,
            incidence: graph.incidence(),
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.graph.edge_count()
    }

    pub fn bases(&self, lambda: f64) -> Vec<EdgeBasis> {
        self.graph
            .edges()
            .iter()
            .map(|e| transfer_matrix(e, lambda))
            .collect()
    }

    /// Assembles rows and right-hand side. `particular` holds `(u_p(ℓ), u_p'(ℓ))`
    /// per edge; `b_scale` multiplies every `b` column.
    pub(crate) fn assemble(
        &self,
        bases: &[EdgeBasis],
        particular: Option<&[(f64, f64)]>,
        b_scale: f64,
    ) -> Assembled {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut rhs = DVector::zeros(n);
        let mut mag = vec![0.0f64; n];
        let value = |(e, end): (usize, usize)| -> EndForm {
            let b = &bases[e];
            if end == 0 {
                EndForm { col: 2 * e, ca: 1.0, cb: 0.0, constant: 0.0 }
            } else {
                let p = particular.map_or(0.0, |p| p[e].0);
                EndForm { col: 2 * e, ca: b.c_end, cb: b.s_end * b_scale, constant: p }
            }
        };
        let deriv = |(e, end): (usize, usize)| -> EndForm {
            let b = &bases[e];
            if end == 0 {
                EndForm { col: 2 * e, ca: 0.0, cb: -b_scale, constant: 0.0 }
            } else {
                let p = particular.map_or(0.0, |p| p[e].1);
                EndForm { col: 2 * e, ca: b.dc_end, cb: b.ds_end * b_scale, constant: p }
            }
        };
        let add = |row: usize, f: EndForm, w: f64, m: &mut DMatrix<f64>, rhs: &mut DVector<f64>, mag: &mut [f64]| {
            m[(row, f.col)] += w * f.ca;
            m[(row, f.col + 1)] += w * f.cb;
            rhs[row] -= w * f.constant;
            mag[row] = mag[row].max((w * f.ca).abs()).max((w * f.cb).abs());
        };

        let mut row = 0;
        for ends in &self.incidence {
            match &self.resolved {
                Resolved::Dirichlet => {
                    for &end in ends {
                        add(row, value(end), 1.0, &mut m, &mut rhs, &mut mag);
                        row += 1;
                    }
                }
                Resolved::Coupling(_) => {
                    let first = value(ends[0]);
                    for &end in &ends[1..] {
                        add(row, value(end), 1.0, &mut m, &mut rhs, &mut mag);
                        add(row, first, -1.0, &mut m, &mut rhs, &mut mag);
                        row += 1;
                    }
                    row += 1;
                }
            }
        }
        if let Resolved::Coupling(c) = &self.resolved {
            let mut row = 0;
            for (v, ends) in self.incidence.iter().enumerate() {
                row += ends.len() - 1;
                for &end in ends {
                    add(row, deriv(end), 1.0, &mut m, &mut rhs, &mut mag);
                }
                for (j, ends_j) in self.incidence.iter().enumerate() {
                    let cij = c[(v, j)];
                    if cij != 0.0 {
                        add(row, value(ends_j[0]), -cij, &mut m, &mut rhs, &mut mag);
                    }
                }
                row += 1;
            }
        }
        Assembled { m, rhs, mag }
    }

    /// Row-normalised secular matrix at `λ` with `b` columns scaled by
    /// `max(1, √|λ|)` so that all entries stay of comparable size.
    pub fn normalized(&self, lambda: f64) -> DMatrix<f64> {
        let bases = self.bases(lambda);
        let mut asm = self.assemble(&bases, None, lambda.abs().sqrt().max(1.0));
        asm.normalize();
        asm.m
    }

    /// Singular values of the normalised matrix, descending.
    pub fn singular_values(&self, lambda: f64) -> Vec<f64> {
        let mut sv: Vec<f64> = self.normalized(lambda).singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Smallest singular value of the normalised matrix relative to
    /// [`reference_scale`].
    pub fn sigma_ratio(&self, lambda: f64) -> f64 {
        let sv = self.singular_values(lambda);
        sv.last().copied().unwrap_or(0.0) / reference_scale(&sv)
    }

    /// Number of singular values below `KERNEL_TOL` times the reference scale.
    pub fn nullity(&self, lambda: f64) -> usize {
        let sv = self.singular_values(lambda);
        let cut = KERNEL_TOL * reference_scale(&sv);
        sv.iter().filter(|&&s| s < cut).count()
    }
}

/// Rows are normalised by the size of their individual terms, so an
/// O(1) reference is meaningful even when every row cancels (as happens at
/// eigenvalues of loops and at `λ = 0` for Krein conditions).
pub(crate) fn reference_scale(sv: &[f64]) -> f64 {
    sv.iter().copied().fold(1.0, f64::max)
}

pub(crate) struct Assembled {
    pub m: DMatrix<f64>,
    pub rhs: DVector<f64>,
    /// Largest individual term entering each row.
    pub mag: Vec<f64>,
}

impl Assembled {
    /// Scales each row (and its right-hand side) by its largest term.
    pub fn normalize(&mut self) {
        for (i, &scale) in self.mag.iter().enumerate() {
            if scale > 0.0 {
                self.m.row_mut(i).scale_mut(1.0 / scale);
                self.rhs[i] /= scale;
            }
        }
    }
}

/// Unnormalised secular matrix at `λ`.
pub fn secular_matrix(graph: &MetricGraph, conditions: &ConditionSpec, lambda: f64) -> Result<SecularMatrix> {
    let sys = SecularSystem::new(graph, conditions)?;
    let entries = sys.assemble(&sys.bases(lambda), None, 1.0).m;
    Ok(SecularMatrix { lambda, entries })
}
