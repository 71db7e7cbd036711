//! Eigenvalues, counting functions and resolvents via the secular matrix.

mod counting;
mod resolvent;
mod scan;
mod secular;

pub use counting::{counting_function, dirichlet_count, index_count, weyl_bounds};
pub use resolvent::{
    apply_resolvent, krein_resolvent_via_formula, resolvent_difference_rank,
    resolvent_difference_rank_seeded, EdgewiseFunction, EdgewiseSolution,
};
pub use scan::{eigenvalues, kernel_dimension, Spectrum};
pub use secular::{secular_matrix, SecularMatrix, SecularSystem};
