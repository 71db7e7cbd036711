//! Vertex conditions.
//!
//! Every non-Dirichlet kind is continuity at each vertex together with a
//! coupling `∂_ν f = C f` between the vector of toward-vertex derivative sums
//! and the vector of vertex values:
//!
//! | kind            | `C`                                   |
//! |-----------------|---------------------------------------|
//! | standard        | `0`                                   |
//! | δ               | `-diag(I_v)`                          |
//! | Krein           | `Λ_q`                                 |
//! | Krein on `B`    | Schur complement `Λ_{q,B}` on `B`, 0 elsewhere |
//! | custom          | user matrix                           |

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::weyl::{boundary_indices, dtn_zero, schur_boundary};

#[derive(Debug, Clone, PartialEq)]
pub enum ConditionSpec {
    Dirichlet,
    Standard,
    /// δ-interaction strengths per vertex id; unlisted vertices get 0.
    Delta(BTreeMap<String, f64>),
    Krein,
    KreinSubset(Vec<String>),
    /// Symmetric `V×V` coupling in vertex order.
    Custom(DMatrix<f64>),
}

impl fmt::Display for ConditionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConditionSpec::Dirichlet => write!(f, "dirichlet"),
            ConditionSpec::Standard => write!(f, "standard"),
            ConditionSpec::Delta(_) => write!(f, "delta"),
            ConditionSpec::Krein => write!(f, "krein"),
            ConditionSpec::KreinSubset(b) => write!(f, "krein-subset({})", b.join(",")),
            ConditionSpec::Custom(_) => write!(f, "custom"),
        }
    }
}

/// Conditions with the coupling matrix evaluated on a specific graph.
#[derive(Debug, Clone, PartialEq)]
pub enum Resolved {
    Dirichlet,
    Coupling(DMatrix<f64>),
}

impl ConditionSpec {
    pub fn delta(strengths: impl IntoIterator<Item = (impl Into<String>, f64)>) -> Self {
        ConditionSpec::Delta(strengths.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn krein_subset(boundary: impl IntoIterator<Item = impl Into<String>>) -> Self {
        ConditionSpec::KreinSubset(boundary.into_iter().map(Into::into).collect())
    }

    /// Checks the parameters against `graph` and builds the coupling matrix.
    pub fn resolve(&self, graph: &MetricGraph) -> Result<Resolved> {
        let n = graph.vertex_count();
        let coupling = match self {
            ConditionSpec::Dirichlet => return Ok(Resolved::Dirichlet),
            ConditionSpec::Standard => DMatrix::zeros(n, n),
            ConditionSpec::Delta(strengths) => {
                let mut c = DMatrix::zeros(n, n);
                for (v, &s) in strengths {
                    let i = graph.vertex_index(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
                    if !(s.is_finite() && s >= 0.0) {
                        return Err(Error::InvalidConditions(format!(
                            "δ strength at `{v}` must be finite and ≥ 0, got {s}"
                        )));
                    }
                    c[(i, i)] = -s;
                }
                c
            }
            ConditionSpec::Krein => dtn_zero(graph),
            ConditionSpec::KreinSubset(b) => {
                if b.is_empty() {
                    return Err(Error::InvalidConditions("boundary set B must be nonempty".into()));
                }
                let idx = boundary_indices(graph, b)?;
                let schur = schur_boundary(&dtn_zero(graph), &idx)?;
                let mut c = DMatrix::zeros(n, n);
                for (i, &vi) in idx.iter().enumerate() {
                    for (j, &vj) in idx.iter().enumerate() {
                        c[(vi, vj)] = schur[(i, j)];
                    }
                }
                c
            }
            ConditionSpec::Custom(c) => {
                if c.nrows() != n || c.ncols() != n {
                    return Err(Error::InvalidConditions(format!(
                        "coupling must be {n}×{n}, got {}×{}",
                        c.nrows(),
                        c.ncols()
                    )));
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidConditions("coupling has non-finite entries".into()));
                }
                let scale = c.amax().max(1.0);
                if (c - c.transpose()).amax() > 1e-12 * scale {
                    return Err(Error::InvalidConditions("coupling matrix is not symmetric".into()));
                }
                c.clone()
            }
        };
        Ok(Resolved::Coupling(coupling))
    }

    /// Kernel dimension predicted by the theory for this kind, where known.
    pub fn expected_kernel(&self, graph: &MetricGraph) -> Option<usize> {
        match self {
            ConditionSpec::Dirichlet => Some(0),
            ConditionSpec::Krein => Some(graph.vertex_count()),
            ConditionSpec::KreinSubset(b) => boundary_indices(graph, b).ok().map(|i| i.len()),
            ConditionSpec::Standard if graph.potential_is_zero() => Some(1),
            ConditionSpec::Standard => Some(0),
            _ => None,
        }
    }
}
