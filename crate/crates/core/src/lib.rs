//! Spectra of Schrödinger operators on finite metric graphs.
//!
//! The crate covers the Dirichlet, standard (Kirchhoff), δ-type,
//! Krein–von Neumann and partial-boundary Krein realisations of `-u'' + q u`
//! with piecewise-constant nonnegative potentials, together with
//! resolvent-rank diagnostics, graph surgery with interlacing checks,
//! a Rayleigh–Ritz upper-bound oracle and isoperimetric bounds.

pub mod cli;
pub mod conditions;
pub mod edge;
pub mod error;
pub mod format;
pub mod graph;
pub mod harness;
pub mod quadrature;
pub mod spectral;
pub mod surgery;
pub mod variational;
pub mod weyl;

pub use conditions::ConditionSpec;
pub use edge::{edge_dtn_block, particular_solution, transfer_matrix, EdgeBasis};
pub use error::{Error, Result, ValidationIssue};
pub use graph::{
    integrate_potential, parse_graph, serialize_graph, total_length, validate, Edge, MetricGraph,
    PotentialPiece,
};
pub use spectral::{
    apply_resolvent, counting_function, eigenvalues, kernel_dimension,
    krein_resolvent_via_formula, resolvent_difference_rank, secular_matrix, weyl_bounds,
    EdgewiseFunction, EdgewiseSolution, Spectrum,
};
pub use variational::{
    assemble_buckling_pencil, eulerian_upper_bound, isoperimetric_check, rayleigh_ritz,
    BasisKind, BucklingPencil, IsoperimetricReport,
};
pub use weyl::{discrete_laplacian, dtn_zero, schur_boundary, weyl_matrix, WeylMatrix};
