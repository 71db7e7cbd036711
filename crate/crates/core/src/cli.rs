//! Command-line front end. Every subcommand is a thin wrapper over a
//! library call.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::conditions::ConditionSpec;
use crate::error::{Error, Result};
use crate::format::format_real;
use crate::graph::{parse_graph, serialize_graph, MetricGraph};
use crate::harness::{run_suite, RandomGraphOptions, Suite, SuiteConfig};
use crate::spectral::{counting_function, eigenvalues, resolvent_difference_rank_seeded, secular_matrix};
use crate::surgery::{self, EdgeEnd, Point, Side};
use crate::variational::{eulerian_upper_bound, isoperimetric_check, rayleigh_ritz};
use crate::weyl::{discrete_laplacian, dtn_zero, weyl_matrix};

#[derive(Debug, Parser)]
#[command(name = "kreingraph", version, about = "Spectra of Schrödinger operators on metric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConditionKind {
    Dirichlet,
    Standard,
    Krein,
    KreinSubset,
    Delta,
}

#[derive(Debug, Args)]
struct ConditionArgs {
    #[arg(long, value_enum)]
    conditions: ConditionKind,
    /// Boundary vertices for krein-subset, comma separated.
    #[arg(long, value_delimiter = ',')]
    boundary: Vec<String>,
    /// δ strengths as `vertex:strength`, comma separated.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SurgeryOpName {
    GlueVertices,
    CutVertex,
    InsertDegree2,
    RemoveDegree2,
    GluePoints,
    LengthenEdge,
    AttachGraph,
    InsertEdge,
    RestrictBoundary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixKind {
    Secular,
    Weyl,
    Dtn,
    Laplacian,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues up to `--lambda-max` as headerless CSV `lambda,multiplicity` lines.
    Spectrum {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        cond: ConditionArgs,
        #[arg(long, allow_negative_numbers = true)]
        lambda_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Number of eigenvalues `≤ λ`.
    Count {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        cond: ConditionArgs,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one surgery operation and write the resulting graph.
    Surgery {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: SurgeryOpName,
        /// Vertex list (glue-vertices) or single vertex (cut-vertex, remove-degree2).
        #[arg(long, value_delimiter = ',')]
        vertices: Vec<String>,
        /// Cut groups: `edge:start|end` items, comma separated, groups separated by `/`.
        #[arg(long)]
        partition: Option<String>,
        #[arg(long)]
        edge: Option<String>,
        #[arg(long)]
        position: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Graph to attach (attach-graph).
        #[arg(long)]
        attach: Option<PathBuf>,
        /// Pairs `attached=host`, comma separated.
        #[arg(long, value_delimiter = ',')]
        pairing: Vec<String>,
        /// Length of the inserted edge.
        #[arg(long)]
        length: Option<f64>,
        /// Points for glue-points: vertex ids or `edge@position`, comma separated.
        #[arg(long, value_delimiter = ',')]
        points: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<String>,
        /// Restricted boundary for restrict-boundary.
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized verification suite and emit a JSON report.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        j_max: usize,
        /// Random nonnegative potential on attached or inserted edges.
        #[arg(long)]
        random_potential: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical rank of the difference of two resolvents.
    ResolventRank {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        cond: ConditionArgs,
        /// Second realisation: dirichlet, standard or krein.
        #[arg(long, value_enum)]
        against: ConditionKind,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        probes: Option<usize>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral-gap lower bound check as JSON.
    Isoperimetric {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rayleigh–Ritz upper bounds as CSV `j,upper_bound`.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 40)]
        modes: usize,
        #[arg(long, default_value_t = 5)]
        j_max: usize,
        /// Print the Eulerian-cycle bound instead.
        #[arg(long)]
        eulerian: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump a matrix at `λ` as CSV.
    Matrix {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: MatrixKind,
        #[arg(long, value_enum)]
        conditions: Option<ConditionKind>,
        #[arg(long, value_delimiter = ',')]
        boundary: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        delta: Vec<String>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of a successful command: text to emit, and whether the result
/// is a failed verification (exit code 1).
struct Output {
    text: String,
    failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

/// Runs the CLI and returns the process exit code: 0 on success, 1 on
/// domain errors (with `error[CODE]: message` on stderr), 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let (out_path, result) = execute(cli.command);
    match result {
        Ok(output) => {
            let written = match &out_path {
                Some(p) => fs::write(p, &output.text).map_err(Error::from),
                None => stdout.write_all(output.text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error[{}]: {e}", e.code());
                return 1;
            }
            match output.failure {
                Some(msg) => {
                    let _ = writeln!(stderr, "error[VERIFICATION_FAILED]: {msg}");
                    1
                }
                None => 0,
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            1
        }
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn read_graph(path: &Path) -> Result<MetricGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

fn conditions(kind: ConditionKind, boundary: &[String], delta: &[String]) -> Result<ConditionSpec> {
    Ok(match kind {
        ConditionKind::Dirichlet => ConditionSpec::Dirichlet,
        ConditionKind::Standard => ConditionSpec::Standard,
        ConditionKind::Krein => ConditionSpec::Krein,
        ConditionKind::KreinSubset => {
            if boundary.is_empty() {
                return Err(Error::InvalidConditions("krein-subset needs --boundary".into()));
            }
            ConditionSpec::krein_subset(boundary.iter().cloned())
        }
        ConditionKind::Delta => {
            let mut pairs = Vec::with_capacity(delta.len());
            for item in delta {
                let (v, s) = item
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidConditions(format!("expected vertex:strength, got `{item}`")))?;
                let s: f64 = s
                    .parse()
                    .map_err(|_| Error::InvalidConditions(format!("bad strength in `{item}`")))?;
                pairs.push((v.to_string(), s));
            }
            ConditionSpec::delta(pairs)
        }
    })
}

fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required for this operation")))
}

fn parse_partition(text: &str) -> Result<Vec<Vec<EdgeEnd>>> {
    text.split('/')
        .map(|group| {
            group
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|item| {
                    let (edge, side) = item
                        .split_once(':')
                        .ok_or_else(|| Error::BadPartition(format!("expected edge:start|end, got `{item}`")))?;
                    let side = match side {
                        "start" | "0" => Side::Start,
                        "end" | "1" => Side::End,
                        other => return Err(Error::BadPartition(format!("unknown side `{other}`"))),
                    };
                    Ok(EdgeEnd::new(edge, side))
                })
                .collect()
        })
        .collect()
}

fn parse_points(items: &[String]) -> Result<Vec<Point>> {
    items
        .iter()
        .map(|item| match item.split_once('@') {
            Some((edge, pos)) => Ok(Point::OnEdge {
                edge: edge.to_string(),
                position: pos
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad position in `{item}`")))?,
            }),
            None => Ok(Point::Vertex(item.clone())),
        })
        .collect()
}

fn matrix_csv(m: &nalgebra::DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format_real(m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_text(value: &impl serde::Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn execute(command: Command) -> (Option<PathBuf>, Result<Output>) {
    match command {
        Command::Spectrum {
            input,
            cond,
            lambda_max,
            out,
        } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let c = conditions(cond.conditions, &cond.boundary, &cond.delta)?;
                Ok(Output::ok(eigenvalues(&g, &c, lambda_max)?.to_csv()))
            })(),
        ),
        Command::Count { input, cond, lambda, out } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let c = conditions(cond.conditions, &cond.boundary, &cond.delta)?;
                Ok(Output::ok(format!("{}\n", counting_function(&g, &c, lambda)?)))
            })(),
        ),
        Command::Surgery {
            input,
            op,
            vertices,
            partition,
            edge,
            position,
            alpha,
            attach,
            pairing,
            length,
            points,
            boundary,
            keep,
            out,
        } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let single = || {
                    vertices
                        .first()
                        .cloned()
                        .ok_or_else(|| Error::InvalidArgument("--vertices is required for this operation".into()))
                };
                let result = match op {
                    SurgeryOpName::GlueVertices => surgery::glue_vertices(&g, &vertices)?,
                    SurgeryOpName::CutVertex => {
                        let parts = parse_partition(&need(partition.clone(), "partition")?)?;
                        surgery::cut_vertex(&g, &single()?, &parts)?
                    }
                    SurgeryOpName::InsertDegree2 => {
                        surgery::insert_degree2(&g, &need(edge.clone(), "edge")?, need(position, "position")?)?
                    }
                    SurgeryOpName::RemoveDegree2 => surgery::remove_degree2(&g, &single()?)?,
                    SurgeryOpName::GluePoints => surgery::glue_points(&g, &parse_points(&points)?)?.surgery,
                    SurgeryOpName::LengthenEdge => {
                        surgery::lengthen_edge(&g, &need(edge.clone(), "edge")?, need(alpha, "alpha")?)?
                    }
                    SurgeryOpName::AttachGraph => {
                        let other = read_graph(&need(attach.clone(), "attach")?)?;
                        let pairs = pairing
                            .iter()
                            .map(|p| {
                                p.split_once('=')
                                    .map(|(a, b)| (a.to_string(), b.to_string()))
                                    .ok_or_else(|| Error::BadPairing(format!("expected a=b, got `{p}`")))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        surgery::attach_graph(&g, &other, &pairs)?
                    }
                    SurgeryOpName::InsertEdge => {
                        if vertices.len() != 2 {
                            return Err(Error::InvalidArgument("insert-edge needs --vertices u,v".into()));
                        }
                        surgery::insert_edge(&g, &vertices[0], &vertices[1], need(length, "length")?, Vec::new())?
                    }
                    SurgeryOpName::RestrictBoundary => {
                        let (before, after, k) = surgery::restrict_boundary(&g, &boundary, &keep)?;
                        return Ok(Output::ok(json_text(&json!({
                            "before": before.to_string(),
                            "after": after.to_string(),
                            "k": k,
                        }))?));
                    }
                };
                let mut text = serialize_graph(&result.graph);
                text.push('\n');
                Ok(Output::ok(text))
            })(),
        ),
        Command::Verify {
            suite,
            trials,
            seed,
            j_max,
            random_potential,
            out,
        } => (
            out,
            (|| {
                let suite: Suite = suite.parse()?;
                let config = SuiteConfig {
                    trials,
                    seed,
                    j_max,
                    graphs: RandomGraphOptions {
                        potential_rate: 0.3,
                        ..RandomGraphOptions::default()
                    },
                    random_attached_potential: random_potential,
                };
                let report = run_suite(suite, &config);
                let failure = (!report.passed).then(|| {
                    let failed = report.outcomes.iter().filter(|o| !o.passed).count();
                    format!("{failed} of {trials} trials of suite {suite} failed")
                });
                Ok(Output {
                    text: json_text(&report)?,
                    failure,
                })
            })(),
        ),
        Command::ResolventRank {
            input,
            cond,
            against,
            lambda,
            probes,
            seed,
            out,
        } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let a = conditions(cond.conditions, &cond.boundary, &cond.delta)?;
                let b = conditions(against, &cond.boundary, &cond.delta)?;
                let probes = probes.unwrap_or(2 * g.vertex_count() + 6);
                let rank = resolvent_difference_rank_seeded(&g, &a, &b, lambda, probes, seed)?;
                Ok(Output::ok(format!("{rank}\n")))
            })(),
        ),
        Command::Isoperimetric { input, out } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let r = isoperimetric_check(&g)?;
                let text = json_text(&json!({
                    "lambda1_plus": r.lambda1_plus,
                    "bound": r.bound,
                    "margin": r.margin,
                    "relative_margin": r.relative_margin,
                    "potential_zero": r.potential_zero,
                    "holds": r.holds,
                }))?;
                let failure = (!r.holds).then(|| "isoperimetric bound violated".to_string());
                Ok(Output { text, failure })
            })(),
        ),
        Command::Oracle {
            input,
            modes,
            j_max,
            eulerian,
            out,
        } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                if eulerian {
                    let value = eulerian_upper_bound(&g)?.map_or_else(|| "none".to_string(), format_real);
                    return Ok(Output::ok(format!("eulerian_upper_bound\n{value}\n")));
                }
                let bounds = rayleigh_ritz(&g, modes, j_max)?;
                let mut text = String::from("j,upper_bound\n");
                for (j, u) in bounds.iter().enumerate() {
                    text.push_str(&format!("{},{}\n", j + 1, format_real(*u)));
                }
                Ok(Output::ok(text))
            })(),
        ),
        Command::Matrix {
            input,
            kind,
            conditions: kind_c,
            boundary,
            delta,
            lambda,
            out,
        } => (
            out,
            (|| {
                let g = read_graph(&input)?;
                let m = match kind {
                    MatrixKind::Secular => {
                        let c = conditions(need(kind_c, "conditions")?, &boundary, &delta)?;
                        secular_matrix(&g, &c, lambda)?.entries
                    }
                    MatrixKind::Weyl => weyl_matrix(&g, lambda)?.entries,
                    MatrixKind::Dtn => dtn_zero(&g),
                    MatrixKind::Laplacian => discrete_laplacian(&g).entries,
                };
                Ok(Output::ok(matrix_csv(&m)))
            })(),
        ),
    }
}
