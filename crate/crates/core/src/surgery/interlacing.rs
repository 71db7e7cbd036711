//! Interlacing inequalities between spectra before and after surgery.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::Spectrum;

use super::tolerance;

/// Surgery theorem together with the integers it depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "theorem", rename_all = "kebab-case")]
pub enum Theorem {
    /// `k + 1` vertices glued; `vertices` is `V` of the original graph.
    Gluing { k: usize, vertices: usize },
    /// `k0` degree-2 vertices inserted.
    Degree2 { k0: usize },
    /// `k + 1` points glued, `k0` of them interior.
    GluePoints { k: usize, k0: usize },
    Lengthen,
    /// A graph with `v0` vertices attached by `m` vertices.
    Attach { v0: usize, m: usize },
    InsertEdge,
    /// Krein boundary shrunk by `k` vertices; "before" is the larger set.
    Boundary { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    Before,
    After,
}

/// `λ_{j+offset}` (or `λ⁺_{j+offset}`) of one of the two spectra.
#[derive(Debug, Clone, Copy)]
struct Term {
    which: Which,
    positive: bool,
    offset: usize,
}

const fn t(which: Which, positive: bool, offset: usize) -> Term {
    Term { which, positive, offset }
}

impl Term {
    fn label(&self, j: usize) -> String {
        let name = match self.which {
            Which::Before => "before",
            Which::After => "after",
        };
        let plus = if self.positive { "+" } else { "" };
        format!("{name}{plus}[{}]", j + self.offset)
    }
}

fn chains(theorem: Theorem) -> Vec<(&'static str, Vec<Term>)> {
    use Which::{After as A, Before as B};
    match theorem {
        Theorem::Gluing { k, .. } | Theorem::Boundary { k } => vec![
            ("positive", vec![t(A, true, 0), t(B, true, 0), t(A, true, k), t(B, true, k)]),
            ("all", vec![t(B, false, 0), t(A, false, 0), t(B, false, k), t(A, false, k)]),
        ],
        Theorem::Degree2 { k0 } => vec![
            ("positive", vec![t(B, true, 0), t(A, true, 0), t(B, true, k0), t(A, true, k0)]),
            ("all", vec![t(A, false, 0), t(B, false, 0), t(A, false, k0), t(B, false, k0)]),
        ],
        Theorem::GluePoints { k, k0 } => vec![
            (
                "positive",
                vec![t(A, true, 0), t(B, true, k0), t(A, true, k + k0), t(B, true, k + 2 * k0)],
            ),
            (
                "all",
                vec![t(A, false, 0), t(B, false, k), t(A, false, k + k0), t(B, false, 2 * k + k0)],
            ),
        ],
        Theorem::Lengthen | Theorem::InsertEdge => vec![
            ("positive", vec![t(A, true, 0), t(B, true, 0)]),
            ("all", vec![t(A, false, 0), t(B, false, 0)]),
        ],
        Theorem::Attach { v0, m } => vec![
            ("positive", vec![t(A, true, 0), t(B, true, 0)]),
            ("all", vec![t(A, false, v0.saturating_sub(m)), t(B, false, 0)]),
        ],
    }
}

/// Highest indices needed for `j ≤ j_max`, as
/// `(before_all, before_positive, after_all, after_positive)`.
pub fn required_index(theorem: Theorem, j_max: usize) -> (usize, usize, usize, usize) {
    let mut need = (0, 0, 0, 0);
    for (_, terms) in chains(theorem) {
        for term in terms {
            let idx = j_max + term.offset;
            let slot = match (term.which, term.positive) {
                (Which::Before, false) => &mut need.0,
                (Which::Before, true) => &mut need.1,
                (Which::After, false) => &mut need.2,
                (Which::After, true) => &mut need.3,
            };
            *slot = (*slot).max(idx);
        }
    }
    if let Theorem::Gluing { k, vertices } = theorem {
        need.2 = need.2.max(vertices.saturating_sub(k) + 1);
    }
    need
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRecord {
    pub chain: &'static str,
    pub j: usize,
    pub lhs: String,
    pub rhs: String,
    /// `None` when the eigenvalue lies beyond the certified range.
    pub lhs_value: Option<f64>,
    pub rhs_value: Option<f64>,
    pub violation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterlacingReport {
    #[serde(flatten)]
    pub theorem: Theorem,
    pub j_max: usize,
    pub lambda_max: f64,
    pub tolerance: f64,
    pub checked: usize,
    pub max_violation: f64,
    pub passed: bool,
    pub records: Vec<InequalityRecord>,
}

struct Lists {
    before_all: Vec<f64>,
    before_pos: Vec<f64>,
    after_all: Vec<f64>,
    after_pos: Vec<f64>,
    lambda_max: f64,
}

impl Lists {
    /// Value of the term at `j`, or `None` if it lies above the common
    /// certified range.
    fn get(&self, term: Term, j: usize) -> Option<f64> {
        let list = match (term.which, term.positive) {
            (Which::Before, false) => &self.before_all,
            (Which::Before, true) => &self.before_pos,
            (Which::After, false) => &self.after_all,
            (Which::After, true) => &self.after_pos,
        };
        list.get(j + term.offset - 1).copied().filter(|&l| l <= self.lambda_max)
    }
}

/// Checks every inequality of `theorem` for `j = 1..=j_max`.
///
/// Eigenvalues beyond the common certified range are treated as unknown
/// but larger than that range; an inequality with both sides unknown
/// cannot be decided and yields `INSUFFICIENT_RANGE`.
pub fn verify_interlacing(
    before: &Spectrum,
    after: &Spectrum,
    theorem: Theorem,
    j_max: usize,
) -> Result<InterlacingReport> {
    if j_max == 0 {
        return Err(Error::InvalidArgument("j_max must be at least 1".into()));
    }
    let lambda_max = before.certified_up_to.min(after.certified_up_to);
    let lists = Lists {
        before_all: before.expanded(),
        before_pos: before.positive(),
        after_all: after.expanded(),
        after_pos: after.positive(),
        lambda_max,
    };
    let tol = tolerance();
    let mut records = Vec::new();

    for (chain, terms) in chains(theorem) {
        for j in 1..=j_max {
            for pair in terms.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let (va, vb) = (lists.get(a, j), lists.get(b, j));
                let violation = match (va, vb) {
                    (Some(x), Some(y)) => (x - y).max(0.0),
                    (Some(_), None) => 0.0,
                    // The left side exceeds the range while the right side does not.
                    (None, Some(y)) => lambda_max - y,
                    (None, None) => {
                        return Err(Error::InsufficientRange(format!(
                            "{} and {} both exceed lambda = {lambda_max}",
                            a.label(j),
                            b.label(j)
                        )))
                    }
                };
                records.push(InequalityRecord {
                    chain,
                    j,
                    lhs: a.label(j),
                    rhs: b.label(j),
                    lhs_value: va,
                    rhs_value: vb,
                    violation,
                    pass: violation <= tol && !(va.is_none() && vb.is_some()),
                });
            }
        }
    }

    if let Theorem::Gluing { k, vertices } = theorem {
        let idx = vertices.saturating_sub(k) + 1;
        let term = t(Which::After, false, idx - 1);
        let v = lists.get(term, 1);
        let pass = v.is_none_or(|x| x > 0.0);
        records.push(InequalityRecord {
            chain: "kernel",
            j: idx,
            lhs: "0".into(),
            rhs: term.label(1),
            lhs_value: Some(0.0),
            rhs_value: v,
            violation: if pass { 0.0 } else { 1.0 },
            pass,
        });
    }

    let max_violation = records.iter().map(|r| r.violation).fold(0.0, f64::max);
    Ok(InterlacingReport {
        theorem,
        j_max,
        lambda_max,
        tolerance: tol,
        checked: records.len(),
        max_violation,
        passed: records.iter().all(|r| r.pass),
        records,
    })
}
