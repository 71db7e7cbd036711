use std::f64::consts::PI;

use rayon::prelude::*;

use crate::conditions::ConditionSpec;
use crate::error::{Error, Result};
use crate::format::format_real;
use crate::graph::{total_length, MetricGraph};

use super::counting::index_count_resolved;
use super::secular::SecularSystem;

/// Sorted eigenvalues with multiplicities, exhaustive on `[0, certified_up_to]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub pairs: Vec<(f64, usize)>,
    pub certified_up_to: f64,
    pub condition: ConditionSpec,
}

impl Spectrum {
    pub fn kernel_dimension(&self) -> usize {
        match self.pairs.first() {
            Some(&(l, m)) if l == 0.0 => m,
            _ => 0,
        }
    }

    /// Eigenvalues repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat(l).take(m))
            .collect()
    }

    /// Positive eigenvalues repeated according to multiplicity.
    pub fn positive(&self) -> Vec<f64> {
        self.pairs
            .iter()
            .filter(|p| p.0 > 0.0)
            .flat_map(|&(l, m)| std::iter::repeat(l).take(m))
            .collect()
    }

    /// Eigenvalues `≤ λ`, with multiplicity.
    pub fn count(&self, lambda: f64) -> usize {
        self.pairs.iter().filter(|p| p.0 <= lambda).map(|p| p.1).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for &(l, m) in &self.pairs {
            out.push_str(&format!("{},{m}\n", format_real(l)));
        }
        out
    }
}

/// Dimension of the kernel: singular values of the secular matrix at `λ = 0`
/// below the relative threshold.
pub fn kernel_dimension(graph: &MetricGraph, conditions: &ConditionSpec) -> Result<usize> {
    Ok(SecularSystem::new(graph, conditions)?.nullity(0.0))
}

const MAX_HALVINGS: u32 = 4;
const GOLDEN_TOL: f64 = 1e-12;
const MERGE_TOL: f64 = 1e-9;
const MIN_KAPPA: f64 = 1e-6;

struct Scanner<'a> {
    sys: SecularSystem<'a>,
    kernel: usize,
}

impl Scanner<'_> {
    fn objective(&self, kappa: f64) -> f64 {
        self.sys.sigma_ratio(kappa * kappa)
    }

    fn golden(&self, mut a: f64, mut b: f64) -> f64 {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.objective(c);
        let mut fd = self.objective(d);
        let tol = GOLDEN_TOL.max(4.0 * f64::EPSILON * b.abs());
        while b - a > tol {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.objective(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.objective(d);
            }
        }
        if fc <= fd {
            c
        } else {
            d
        }
    }

    /// Local minima of `σ_min` on a uniform κ-grid, refined and filtered to
    /// genuine roots.
    fn scan(&self, kappa_end: f64, step: f64) -> Vec<(f64, usize)> {
        let n = (kappa_end / step).ceil() as usize + 1;
        let grid: Vec<f64> = (0..=n).map(|i| i as f64 * step).collect();
        let vals: Vec<f64> = grid.par_iter().map(|&k| self.objective(k)).collect();
        let candidates: Vec<usize> = (1..n)
            .filter(|&i| {
                let left = if i == 1 && self.kernel > 0 { f64::INFINITY } else { vals[i - 1] };
                vals[i] <= left && vals[i] <= vals[i + 1]
            })
            .collect();
        let mut roots: Vec<(f64, usize)> = candidates
            .par_iter()
            .filter_map(|&i| {
                let k = self.golden(grid[i - 1], grid[i + 1]);
                if k < MIN_KAPPA {
                    return None;
                }
                let mult = self.sys.nullity(k * k);
                (mult > 0).then_some((k, mult))
            })
            .collect();
        merge(&mut roots);
        roots
    }

    fn count_at(&self, kappa: f64) -> Result<usize> {
        index_count_resolved(self.sys.graph, &self.sys.resolved, kappa * kappa)
    }

    /// Check points between consecutive roots and at the end of the range;
    /// returns the intervals `(lo, hi, n_lo, n_hi)` whose eigenvalue count
    /// disagrees with the roots found inside.
    fn audit(&self, roots: &[(f64, usize)], kappa_top: f64) -> Result<Vec<(f64, f64, usize, usize)>> {
        let mut points: Vec<f64> = Vec::with_capacity(roots.len() + 1);
        if let Some(&(r0, _)) = roots.first() {
            points.push(0.5 * r0);
        }
        for w in roots.windows(2) {
            points.push(0.5 * (w[0].0 + w[1].0));
        }
        let mut top = kappa_top;
        if roots.iter().any(|&(r, _)| (r - top).abs() < 1e-7 * top.max(1.0)) {
            top *= 1.0 + 1e-5;
        }
        if points.last().is_none_or(|&p| p < top) {
            points.retain(|&p| p < top);
            points.push(top);
        }
        let counts: Vec<usize> = points
            .par_iter()
            .map(|&p| self.count_at(p))
            .collect::<Result<_>>()?;

        let mut bad = Vec::new();
        let (mut lo, mut n_lo) = (0.0, self.kernel);
        for (&p, &n) in points.iter().zip(&counts) {
            let found: usize = roots
                .iter()
                .filter(|&&(r, _)| r > lo && r < p)
                .map(|r| r.1)
                .sum();
            if n != n_lo + found {
                bad.push((lo, p, n_lo, n));
            }
            lo = p;
            n_lo = n;
        }
        Ok(bad)
    }

    /// Count-based bisection isolating every eigenvalue in `(lo, hi)`.
    fn isolate(&self, lo: f64, hi: f64, n_lo: usize, n_hi: usize, out: &mut Vec<(f64, usize)>) -> Result<()> {
        if n_hi <= n_lo {
            return Ok(());
        }
        if hi - lo < GOLDEN_TOL.max(4.0 * f64::EPSILON * hi) {
            out.push((0.5 * (lo + hi), n_hi - n_lo));
            return Ok(());
        }
        let mid = 0.5 * (lo + hi);
        let n_mid = self.count_at(mid)?;
        let n_mid = n_mid.clamp(n_lo, n_hi);
        self.isolate(lo, mid, n_lo, n_mid, out)?;
        self.isolate(mid, hi, n_mid, n_hi, out)
    }

    /// Count bisection is limited by the conditioning of the index matrix;
    /// refine each isolated root on `σ_min` within a window that excludes
    /// its neighbours.
    fn polish(&self, found: &[(f64, usize)], others: &[(f64, usize)]) -> Vec<(f64, usize)> {
        let mut all: Vec<f64> = found.iter().chain(others).map(|r| r.0).collect();
        all.sort_by(f64::total_cmp);
        found
            .iter()
            .map(|&(k, m)| {
                let gap = all
                    .iter()
                    .filter(|&&x| x != k)
                    .map(|&x| (x - k).abs())
                    .fold(f64::INFINITY, f64::min);
                let delta = (1e-6 * k.max(1.0)).min(0.5 * gap);
                let refined = self.golden((k - delta).max(MIN_KAPPA), k + delta);
                if self.objective(refined) <= self.objective(k) {
                    (refined, m)
                } else {
                    (k, m)
                }
            })
            .collect()
    }

    fn rescue(&self, roots: &mut Vec<(f64, usize)>, bad: &[(f64, f64, usize, usize)]) -> Result<()> {
        for &(lo, hi, n_lo, n_hi) in bad {
            roots.retain(|&(r, _)| !(r > lo && r < hi));
            let lo_eff = if lo == 0.0 { MIN_KAPPA } else { lo };
            let mut found = Vec::new();
            self.isolate(lo_eff, hi, n_lo, n_hi, &mut found)?;
            let found = self.polish(&found, roots);
            for (k, m) in found {
                if self.sys.sigma_ratio(k * k) > 1e-6 {
                    return Err(Error::ScanIncomplete {
                        lambda_max: hi * hi,
                        detail: format!(
                            "count jump at λ ≈ {} not confirmed by the secular matrix",
                            format_real(k * k)
                        ),
                    });
                }
                roots.push((k, m));
            }
        }
        roots.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(())
    }
}

fn merge(roots: &mut Vec<(f64, usize)>) {
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, usize)> = Vec::with_capacity(roots.len());
    for &(k, m) in roots.iter() {
        match out.last_mut() {
            Some(last) if k - last.0 < MERGE_TOL => last.1 = last.1.max(m),
            _ => out.push((k, m)),
        }
    }
    *roots = out;
}

/// All eigenvalues in `[0, lambda_max]` with multiplicities.
///
/// The scan runs in `κ = √λ` with step `π / (8 ℓ(Γ))`, locating local minima
/// of the smallest normalised singular value of the secular matrix and
/// refining them by golden-section search. Completeness is audited against
/// an exact eigenvalue count between consecutive roots; on failure the step
/// is halved (up to four times) and, as a last resort, the offending
/// intervals are resolved by count bisection.
pub fn eigenvalues(graph: &MetricGraph, conditions: &ConditionSpec, lambda_max: f64) -> Result<Spectrum> {
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda_max must be positive, got {lambda_max}")));
    }
    let sys = SecularSystem::new(graph, conditions)?;
    let kernel = sys.nullity(0.0);
    let scanner = Scanner { sys, kernel };
    let kappa_max = lambda_max.sqrt();
    let base = PI / (8.0 * total_length(graph));

    let mut roots = Vec::new();
    let mut bad = Vec::new();
    let mut step = base;
    for attempt in 0..=MAX_HALVINGS {
        step = base / f64::from(1u32 << attempt);
        roots = scanner.scan(kappa_max + step, step);
        bad = scanner.audit(&roots, kappa_max)?;
        if bad.is_empty() {
            break;
        }
    }
    if !bad.is_empty() {
        scanner.rescue(&mut roots, &bad)?;
        merge(&mut roots);
        let still = scanner.audit(&roots, kappa_max)?;
        if let Some(&(lo, hi, n_lo, n_hi)) = still.first() {
            return Err(Error::ScanIncomplete {
                lambda_max,
                detail: format!(
                    "{} eigenvalue(s) expected in ({}, {}) at final step {step:e}",
                    n_hi as i64 - n_lo as i64,
                    format_real(lo * lo),
                    format_real(hi * hi)
                ),
            });
        }
    }

    let mut pairs = Vec::with_capacity(roots.len() + 1);
    if kernel > 0 {
        pairs.push((0.0, kernel));
    }
    pairs.extend(
        roots
            .into_iter()
            .map(|(k, m)| (k * k, m))
            .filter(|&(l, _)| l <= lambda_max),
    );
    Ok(Spectrum {
        pairs,
        certified_up_to: lambda_max,
        condition: conditions.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> MetricGraph {
        MetricGraph::from_lengths(&["a", "b"], &[("a", "b", 1.0)]).unwrap()
    }

    #[test]
    fn dirichlet_interval() {
        let s = eigenvalues(&interval(), &ConditionSpec::Dirichlet, 400.0).unwrap();
        assert_eq!(s.pairs.len(), 6);
        for (j, &(l, m)) in s.pairs.iter().enumerate() {
            let exact = ((j + 1) as f64 * PI).powi(2);
            assert!((l - exact).abs() < 1e-10 * exact, "{l} vs {exact}");
            assert_eq!(m, 1);
        }
    }

    #[test]
    fn loop_double_eigenvalues() {
        let g = MetricGraph::from_lengths(&["a"], &[("a", "a", 1.0)]).unwrap();
        let s = eigenvalues(&g, &ConditionSpec::Standard, 500.0).unwrap();
        assert_eq!(s.pairs[0], (0.0, 1));
        assert_eq!(s.pairs.len(), 4);
        for (j, &(l, m)) in s.pairs.iter().enumerate().skip(1) {
            let exact = (2.0 * j as f64 * PI).powi(2);
            assert!((l - exact).abs() < 1e-10 * exact);
            assert_eq!(m, 2);
        }
    }

    #[test]
    fn spectrum_helpers() {
        let s = Spectrum {
            pairs: vec![(0.0, 2), (3.0, 1), (5.0, 2)],
            certified_up_to: 6.0,
            condition: ConditionSpec::Krein,
        };
        assert_eq!(s.kernel_dimension(), 2);
        assert_eq!(s.expanded(), vec![0.0, 0.0, 3.0, 5.0, 5.0]);
        assert_eq!(s.positive(), vec![3.0, 5.0, 5.0]);
        assert_eq!(s.count(4.0), 3);
        assert_eq!(s.to_csv(), "0,2\n3,1\n5,2\n");
    }

    #[test]
    fn rejects_bad_range() {
        assert_eq!(
            eigenvalues(&interval(), &ConditionSpec::Krein, -1.0).unwrap_err().code(),
            "INVALID_ARGUMENT"
        );
    }

    #[test]
    fn kernel_dimensions() {
        let g = interval();
        assert_eq!(kernel_dimension(&g, &ConditionSpec::Krein).unwrap(), 2);
        assert_eq!(kernel_dimension(&g, &ConditionSpec::Standard).unwrap(), 1);
        assert_eq!(kernel_dimension(&g, &ConditionSpec::Dirichlet).unwrap(), 0);
    }
}
