//! Seeded randomized verification suites.
//!
//! Each suite draws independent random graphs per trial (trials run in
//! parallel, results are collected in trial order) and records every
//! inequality it checks.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conditions::ConditionSpec;
use crate::error::{Error, Result};
use crate::graph::{total_length, Edge, MetricGraph, PotentialPiece};
use crate::spectral::{dirichlet_count, eigenvalues, resolvent_difference_rank, weyl_bounds, Spectrum};
use crate::surgery::{
    attach_graph, glue_points, glue_vertices, insert_degree2, insert_edge, lengthen_edge, required_index,
    restrict_boundary, tolerance, verify_interlacing, InterlacingReport, Point, Theorem,
};
use crate::variational::isoperimetric_check;
use crate::weyl::discrete_laplacian;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Gluing,
    Degree2,
    GluePoints,
    Lengthen,
    Attach,
    InsertEdge,
    Boundary,
    Counting,
    Isoperimetric,
    Resolvent,
    Perturbation,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Gluing,
        Suite::Degree2,
        Suite::GluePoints,
        Suite::Lengthen,
        Suite::Attach,
        Suite::InsertEdge,
        Suite::Boundary,
        Suite::Counting,
        Suite::Isoperimetric,
        Suite::Resolvent,
        Suite::Perturbation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gluing => "gluing",
            Suite::Degree2 => "degree2",
            Suite::GluePoints => "glue-points",
            Suite::Lengthen => "lengthen",
            Suite::Attach => "attach",
            Suite::InsertEdge => "insert-edge",
            Suite::Boundary => "boundary",
            Suite::Counting => "counting",
            Suite::Isoperimetric => "isoperimetric",
            Suite::Resolvent => "resolvent",
            Suite::Perturbation => "perturbation",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

/// Shape of the random graphs drawn by the suites.
#[derive(Debug, Clone, Copy)]
pub struct RandomGraphOptions {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Probability that an edge carries a nonzero potential.
    pub potential_rate: f64,
    pub loops: bool,
}

impl Default for RandomGraphOptions {
    fn default() -> Self {
        Self {
            min_vertices: 2,
            max_vertices: 6,
            max_edges: 9,
            potential_rate: 0.0,
            loops: true,
        }
    }
}

/// Random connected graph: a random spanning tree plus extra edges
/// (parallel edges and loops allowed), lengths uniform in `[0.5, 2)`.
pub fn random_graph(rng: &mut impl Rng, opts: &RandomGraphOptions) -> MetricGraph {
    let v = rng.gen_range(opts.min_vertices.max(1)..=opts.max_vertices.max(opts.min_vertices.max(1)));
    let max_edges = opts.max_edges.max(v.saturating_sub(1)).max(1);
    let min_edges = (v - 1).max(1);
    let e_total = rng.gen_range(min_edges..=max_edges);
    let names: Vec<String> = (0..v).map(|i| format!("v{i}")).collect();
    let mut ends: Vec<(usize, usize)> = (1..v).map(|i| (rng.gen_range(0..i), i)).collect();
    while ends.len() < e_total {
        let a = rng.gen_range(0..v);
        let b = rng.gen_range(0..v);
        if a == b && !(opts.loops || v == 1) {
            continue;
        }
        ends.push((a, b));
    }
    let edges: Vec<Edge> = ends
        .into_iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let length = rng.gen_range(0.5..2.0);
            let edge = Edge::new(format!("e{i}"), names[a].clone(), names[b].clone(), length);
            if rng.gen_bool(opts.potential_rate.clamp(0.0, 1.0)) {
                edge.with_potential(random_pieces(rng, length))
            } else {
                edge
            }
        })
        .collect();
    MetricGraph::new(names, edges).expect("generated graph is valid")
}

/// One or two constant pieces with values in `[0.2, 4)`.
pub fn random_pieces(rng: &mut impl Rng, length: f64) -> Vec<PotentialPiece> {
    if rng.gen_bool(0.5) {
        vec![PotentialPiece {
            len: length,
            q: rng.gen_range(0.2..4.0),
        }]
    } else {
        let cut = length * rng.gen_range(0.2..0.8);
        vec![
            PotentialPiece {
                len: cut,
                q: rng.gen_range(0.0..4.0),
            },
            PotentialPiece {
                len: length - cut,
                q: rng.gen_range(0.2..4.0),
            },
        ]
    }
}

/// Random graph whose potential is guaranteed to be nonzero.
pub fn random_graph_with_potential(rng: &mut impl Rng, opts: &RandomGraphOptions) -> MetricGraph {
    let g = random_graph(rng, &RandomGraphOptions { potential_rate: 0.5, ..*opts });
    if !g.potential_is_zero() {
        return g;
    }
    let (vertices, mut edges) = g.into_parts();
    let i = rng.gen_range(0..edges.len());
    let len = edges[i].length;
    edges[i].potential = random_pieces(rng, len);
    MetricGraph::new(vertices, edges).expect("valid graph")
}

/// Independent stream per trial.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mixed = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add((trial as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9))
        ^ 0x94d0_49bb_1331_11eb;
    ChaCha8Rng::seed_from_u64(mixed)
}

/// A scalar inequality `lhs ≤ rhs` (or `<` when `strict`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub violation: f64,
    pub pass: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let violation = (lhs - rhs).max(0.0);
        Self {
            name: name.into(),
            lhs,
            rhs,
            strict: false,
            violation,
            pass: violation <= tolerance(),
        }
    }

    pub fn lt(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            strict: true,
            violation: (lhs - rhs).max(0.0),
            pass: lhs < rhs,
        }
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let violation = (lhs - rhs).abs();
        Self {
            name: name.into(),
            lhs,
            rhs,
            strict: false,
            violation,
            pass: violation == 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub vertices: usize,
    pub edges: usize,
    pub passed: bool,
    pub max_violation: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interlacing: Option<InterlacingReport>,
}

impl TrialOutcome {
    fn from_checks(trial: usize, graph: &MetricGraph, detail: String, checks: Vec<Check>) -> Self {
        Self {
            trial,
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            passed: checks.iter().all(|c| c.pass),
            max_violation: checks.iter().map(|c| c.violation).fold(0.0, f64::max),
            detail,
            checks,
            interlacing: None,
        }
    }

    fn from_report(trial: usize, graph: &MetricGraph, detail: String, report: InterlacingReport) -> Self {
        Self {
            trial,
            vertices: graph.vertex_count(),
            edges: graph.edge_count(),
            passed: report.passed,
            max_violation: report.max_violation,
            detail,
            checks: Vec::new(),
            interlacing: Some(report),
        }
    }

    fn failed(trial: usize, err: &Error) -> Self {
        Self {
            trial,
            vertices: 0,
            edges: 0,
            passed: false,
            max_violation: f64::INFINITY,
            detail: format!("error[{}]: {err}", err.code()),
            checks: Vec::new(),
            interlacing: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub j_max: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub max_violation: f64,
    pub outcomes: Vec<TrialOutcome>,
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub j_max: usize,
    pub graphs: RandomGraphOptions,
    /// Give attached and inserted edges a random potential instead of zero.
    pub random_attached_potential: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            seed: 0,
            j_max: 8,
            graphs: RandomGraphOptions {
                potential_rate: 0.3,
                ..RandomGraphOptions::default()
            },
            random_attached_potential: false,
        }
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> SuiteReport {
    let outcomes: Vec<TrialOutcome> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed ^ suite_salt(suite), trial);
            run_trial(suite, trial, &mut rng, config).unwrap_or_else(|e| TrialOutcome::failed(trial, &e))
        })
        .collect();
    SuiteReport {
        suite,
        seed: config.seed,
        trials: config.trials,
        j_max: config.j_max,
        tolerance: tolerance(),
        passed: outcomes.iter().all(|o| o.passed),
        max_violation: outcomes.iter().map(|o| o.max_violation).fold(0.0, f64::max),
        outcomes,
    }
}

fn suite_salt(suite: Suite) -> u64 {
    Suite::ALL.iter().position(|&s| s == suite).unwrap_or(0) as u64 * 0x1000_0000_01b3
}

fn run_trial(suite: Suite, trial: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<TrialOutcome> {
    let j_max = cfg.j_max;
    match suite {
        Suite::Gluing => {
            let g = random_graph(rng, &cfg.graphs);
            let size = rng.gen_range(2..=g.vertex_count());
            let set: Vec<String> = g.vertices().choose_multiple(rng, size).cloned().collect();
            let after = glue_vertices(&g, &set)?.graph;
            let theorem = Theorem::Gluing {
                k: size - 1,
                vertices: g.vertex_count(),
            };
            let detail = format!("glued {}", set.join(","));
            surgery_trial(trial, &g, &after, &ConditionSpec::Krein, &ConditionSpec::Krein, theorem, j_max, detail)
        }
        Suite::Degree2 => {
            let g = random_graph(rng, &cfg.graphs);
            let k0 = rng.gen_range(1..=3);
            let mut after = g.clone();
            let mut detail = Vec::new();
            for _ in 0..k0 {
                let e = &after.edges()[rng.gen_range(0..after.edge_count())];
                let pos = e.length * rng.gen_range(0.1..0.9);
                detail.push(format!("{}@{pos:.6}", e.id));
                let id = e.id.clone();
                after = insert_degree2(&after, &id, pos)?.graph;
            }
            let theorem = Theorem::Degree2 { k0 };
            surgery_trial(trial, &g, &after, &ConditionSpec::Krein, &ConditionSpec::Krein, theorem, j_max, detail.join(" "))
        }
        Suite::GluePoints => {
            let g = random_graph(rng, &cfg.graphs);
            let n_points = rng.gen_range(2..=3);
            let mut points = Vec::new();
            let mut used_vertices: Vec<String> = Vec::new();
            while points.len() < n_points {
                if rng.gen_bool(0.4) {
                    let v = g.vertices()[rng.gen_range(0..g.vertex_count())].clone();
                    if used_vertices.contains(&v) {
                        continue;
                    }
                    used_vertices.push(v.clone());
                    points.push(Point::Vertex(v));
                } else {
                    let e = &g.edges()[rng.gen_range(0..g.edge_count())];
                    points.push(Point::OnEdge {
                        edge: e.id.clone(),
                        position: e.length * rng.gen_range(0.1..0.9),
                    });
                }
            }
            let glued = glue_points(&g, &points)?;
            let theorem = Theorem::GluePoints { k: glued.k, k0: glued.k0 };
            let detail = format!("{points:?}");
            surgery_trial(
                trial,
                &g,
                &glued.surgery.graph,
                &ConditionSpec::Krein,
                &ConditionSpec::Krein,
                theorem,
                j_max,
                detail,
            )
        }
        Suite::Lengthen => {
            let g = random_graph(rng, &cfg.graphs);
            let e = g.edges()[rng.gen_range(0..g.edge_count())].id.clone();
            let alpha = rng.gen_range(1.1..2.5);
            let after = lengthen_edge(&g, &e, alpha)?.graph;
            let detail = format!("{e} x {alpha:.6}");
            surgery_trial(trial, &g, &after, &ConditionSpec::Krein, &ConditionSpec::Krein, Theorem::Lengthen, j_max, detail)
        }
        Suite::Attach => {
            let g = random_graph(rng, &cfg.graphs);
            let small = RandomGraphOptions {
                min_vertices: 1,
                max_vertices: 3,
                max_edges: 3,
                potential_rate: if cfg.random_attached_potential { 0.5 } else { 0.0 },
                loops: true,
            };
            let other = random_graph(rng, &small);
            let m = rng.gen_range(1..=other.vertex_count().min(g.vertex_count()));
            let ours: Vec<String> = other.vertices().choose_multiple(rng, m).cloned().collect();
            let theirs: Vec<String> = g.vertices().choose_multiple(rng, m).cloned().collect();
            let pairing: Vec<(String, String)> = ours.into_iter().zip(theirs).collect();
            let after = attach_graph(&g, &other, &pairing)?.graph;
            let theorem = Theorem::Attach {
                v0: other.vertex_count(),
                m,
            };
            let detail = format!("V0={} E0={} pairing={pairing:?}", other.vertex_count(), other.edge_count());
            surgery_trial(trial, &g, &after, &ConditionSpec::Krein, &ConditionSpec::Krein, theorem, j_max, detail)
        }
        Suite::InsertEdge => {
            let g = random_graph(rng, &cfg.graphs);
            let u = g.vertices()[rng.gen_range(0..g.vertex_count())].clone();
            let v = g.vertices()[rng.gen_range(0..g.vertex_count())].clone();
            let length = rng.gen_range(0.5..2.0);
            let potential = if cfg.random_attached_potential {
                random_pieces(rng, length)
            } else {
                Vec::new()
            };
            let after = insert_edge(&g, &u, &v, length, potential)?.graph;
            let detail = format!("{u}-{v} length {length:.6}");
            surgery_trial(trial, &g, &after, &ConditionSpec::Krein, &ConditionSpec::Krein, Theorem::InsertEdge, j_max, detail)
        }
        Suite::Boundary => {
            let g = random_graph(
                rng,
                &RandomGraphOptions {
                    min_vertices: 2.max(cfg.graphs.min_vertices),
                    ..cfg.graphs
                },
            );
            let b_size = rng.gen_range(2..=g.vertex_count());
            let boundary: Vec<String> = g.vertices().choose_multiple(rng, b_size).cloned().collect();
            let keep_size = rng.gen_range(1..b_size);
            let keep: Vec<String> = boundary.choose_multiple(rng, keep_size).cloned().collect();
            let (before_cond, after_cond, k) = restrict_boundary(&g, &boundary, &keep)?;
            let detail = format!("B={} B~={}", boundary.join(","), keep.join(","));
            surgery_trial(trial, &g, &g, &before_cond, &after_cond, Theorem::Boundary { k }, j_max, detail)
        }
        Suite::Counting => counting_trial(trial, rng, cfg),
        Suite::Isoperimetric => isoperimetric_trial(trial, rng, cfg),
        Suite::Resolvent => resolvent_trial(trial, rng, cfg),
        Suite::Perturbation => perturbation_trial(trial, rng, cfg, j_max),
    }
}

/// Smallest `λ_max` on a geometric ladder for which each spectrum holds
/// the required number of eigenvalues (all / positive).
pub fn spectra_covering(
    items: &[(&MetricGraph, &ConditionSpec, usize, usize)],
) -> Result<Vec<Spectrum>> {
    let mut lambda = items
        .iter()
        .map(|(g, _, all, pos)| {
            let n = (*all).max(*pos + g.vertex_count()) + g.edge_count() + 1;
            let k = PI * n as f64 / total_length(g);
            k * k + g.max_potential()
        })
        .fold(1.0, f64::max);
    for _ in 0..16 {
        let spectra: Vec<Spectrum> = items
            .par_iter()
            .map(|(g, c, _, _)| eigenvalues(g, c, lambda))
            .collect::<Result<_>>()?;
        let enough = items
            .iter()
            .zip(&spectra)
            .all(|((_, _, all, pos), s)| s.expanded().len() >= *all && s.positive().len() >= *pos);
        if enough {
            return Ok(spectra);
        }
        lambda *= 1.5;
    }
    Err(Error::InsufficientRange(format!("spectra not covered up to lambda = {lambda}")))
}

#[allow(clippy::too_many_arguments)]
fn surgery_trial(
    trial: usize,
    before: &MetricGraph,
    after: &MetricGraph,
    before_cond: &ConditionSpec,
    after_cond: &ConditionSpec,
    theorem: Theorem,
    j_max: usize,
    detail: String,
) -> Result<TrialOutcome> {
    let (ba, bp, aa, ap) = required_index(theorem, j_max);
    let spectra = spectra_covering(&[(before, before_cond, ba, bp), (after, after_cond, aa, ap)])?;
    let report = verify_interlacing(&spectra[0], &spectra[1], theorem, j_max)?;
    Ok(TrialOutcome::from_report(trial, before, detail, report))
}

fn counting_trial(trial: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<TrialOutcome> {
    let g = random_graph(rng, &cfg.graphs);
    let v = g.vertex_count() as f64;
    let zero = g.potential_is_zero();
    let k = PI * (3 * g.edge_count() + 10) as f64 / total_length(&g);
    let lambda_max = k * k;
    let (sk, ss) = rayon::join(
        || eigenvalues(&g, &ConditionSpec::Krein, lambda_max),
        || eigenvalues(&g, &ConditionSpec::Standard, lambda_max),
    );
    let (sk, ss) = (sk?, ss?);
    let mut checks = Vec::new();
    for _ in 0..50 {
        let lambda = rng.gen_range(0.0..lambda_max);
        let nk = sk.count(lambda) as f64;
        let nd = dirichlet_count(&g, lambda) as f64;
        let ns = ss.count(lambda) as f64;
        let tag = format!("lambda={lambda:.6}");
        checks.push(Check::le(format!("N_D <= N_K at {tag}"), nd, nk));
        checks.push(Check::le(format!("N_K <= N_D + V at {tag}"), nk, nd + v));
        checks.push(Check::le(format!("N_st <= N_K at {tag}"), ns, nk));
        let slack = if zero { v - 1.0 } else { v };
        checks.push(Check::le(format!("N_K <= N_st + {slack} at {tag}"), nk, ns + slack));
        if zero {
            let (lo, hi) = weyl_bounds(&g, lambda)?;
            checks.push(Check::le(format!("Weyl lower at {tag}"), lo, nk));
            checks.push(Check::le(format!("Weyl upper at {tag}"), nk, hi));
        }
    }
    Ok(TrialOutcome::from_checks(trial, &g, String::new(), checks))
}

fn isoperimetric_trial(trial: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<TrialOutcome> {
    let zero_opts = RandomGraphOptions {
        potential_rate: 0.0,
        ..cfg.graphs
    };
    let g = random_graph(rng, &zero_opts);
    let gq = random_graph_with_potential(rng, &zero_opts);
    let (r0, rq) = rayon::join(|| isoperimetric_check(&g), || isoperimetric_check(&gq));
    let (r0, rq) = (r0?, rq?);
    let checks = vec![
        Check::le("4pi^2/L^2 <= lambda1+ (q = 0)", r0.bound, r0.lambda1_plus),
        Check::lt("delta-loop lambda1+ < lambda1+ (q != 0)", rq.bound, rq.lambda1_plus),
    ];
    let detail = format!(
        "q=0: V={} E={}; q!=0: V={} E={}",
        g.vertex_count(),
        g.edge_count(),
        gq.vertex_count(),
        gq.edge_count()
    );
    Ok(TrialOutcome::from_checks(trial, &g, detail, checks))
}

fn resolvent_trial(trial: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig) -> Result<TrialOutcome> {
    let zero_opts = RandomGraphOptions {
        potential_rate: 0.0,
        ..cfg.graphs
    };
    let g = random_graph(rng, &zero_opts);
    let gq = random_graph_with_potential(rng, &zero_opts);
    let probes = |g: &MetricGraph| 2 * g.vertex_count() + 6;
    let v = g.vertex_count() as f64;
    let vq = gq.vertex_count() as f64;
    let kd = resolvent_difference_rank(&g, &ConditionSpec::Krein, &ConditionSpec::Dirichlet, -1.0, probes(&g))?;
    let ks = resolvent_difference_rank(&g, &ConditionSpec::Krein, &ConditionSpec::Standard, -1.0, probes(&g))?;
    let kdq = resolvent_difference_rank(&gq, &ConditionSpec::Krein, &ConditionSpec::Dirichlet, -1.0, probes(&gq))?;
    let ksq = resolvent_difference_rank(&gq, &ConditionSpec::Krein, &ConditionSpec::Standard, -1.0, probes(&gq))?;
    let checks = vec![
        Check::eq("rank(R_K - R_D) = V (q = 0)", kd as f64, v),
        Check::eq("rank(R_K - R_st) = V - 1 (q = 0)", ks as f64, v - 1.0),
        Check::eq("rank(R_K - R_D) = V (q != 0)", kdq as f64, vq),
        Check::eq("rank(R_K - R_st) = V (q != 0)", ksq as f64, vq),
    ];
    Ok(TrialOutcome::from_checks(trial, &g, String::new(), checks))
}

/// Krein realisation of `S + Q` against the Krein realisation of `S` plus
/// `Q`, i.e. coupling `L` with the same potential.
fn perturbation_trial(trial: usize, rng: &mut ChaCha8Rng, cfg: &SuiteConfig, j_max: usize) -> Result<TrialOutcome> {
    let g = random_graph_with_potential(rng, &cfg.graphs);
    let krein = ConditionSpec::Krein;
    let shifted = ConditionSpec::Custom(discrete_laplacian(&g).entries);
    let v = g.vertex_count();
    let d_guess = v;
    let spectra = spectra_covering(&[(&g, &krein, j_max, j_max), (&g, &shifted, j_max + d_guess, 0)])?;
    let (sk, sc) = (&spectra[0], &spectra[1]);
    let d = sc.kernel_dimension();
    let (all_k, pos_k, all_c) = (sk.expanded(), sk.positive(), sc.expanded());
    let mut checks = Vec::new();
    for j in 1..=j_max {
        checks.push(Check::le(
            format!("lambda_{j}(K(q)) <= lambda_{j}(L + q)"),
            all_k[j - 1],
            all_c[j - 1],
        ));
        checks.push(Check::le(
            format!("lambda_{}(L + q) <= lambda+_{j}(K(q))", j + d),
            all_c[j + d - 1],
            pos_k[j - 1],
        ));
    }
    Ok(TrialOutcome::from_checks(trial, &g, format!("d = {d}"), checks))
}
