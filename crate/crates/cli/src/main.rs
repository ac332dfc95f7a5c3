//! `rigidity`: rank, stress and bound computations from the command line.
//!
//! Exit status is 0 when everything checked passes, 1 on a bound violation,
//! oracle mismatch or invalid certificate, and 2 on usage or input errors.

mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rigidity_core::bounds::{self, BoundReport, Family, Theorem};
use rigidity_core::realization::{sample_generic_realization, sample_rational, ScalarDomain};
use rigidity_core::reductions::{self, ReductionTrace};
use rigidity_core::rigidity::{self, RigidityMatrix};
use rigidity_core::{generators, pebble, Error, Graph};

#[derive(Parser, Debug)]
#[command(
    name = "rigidity",
    version,
    about = "Planar generic rigidity: ranks, stresses, reductions and regular-graph bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for realizations and random families.
    #[arg(long, global = true, default_value_t = rigidity::DEFAULT_SEED)]
    seed: u64,
    /// Random realizations tried per rank computation.
    #[arg(long, global = true, default_value_t = rigidity::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Include wall-clock times in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generic rigidity rank, checked against the pebble game.
    Rank(GraphArgs),
    /// Stress count |E| - r(G), optionally with a stress basis.
    Stress {
        #[command(flatten)]
        graph: GraphArgs,
        /// Print a basis of stresses at a random rational realization.
        #[arg(long)]
        basis: bool,
    },
    /// Check the 4- or 5-regular rank bound, or the stress potential bound.
    Verify(VerifyArgs),
    /// Write graphs of a family as edge lists.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Write one file per graph into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the exact reductions exhaustively and print the trace.
    Reduce { input: PathBuf },
    /// Certify s(G) <= z(G) by the bounded-degree case analysis.
    Certify {
        input: PathBuf,
        /// Degree cap, 4 or 5 (default: 4 if the maximum degree allows it).
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Compare the pebble game with the matrix rank on random graphs.
    Selfcheck {
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
    /// Draw a graph as DOT, or as SVG / JSON at a sampled realization.
    Export { input: PathBuf },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge-list file, or `-` for stdin.
    input: PathBuf,
    /// Use exact rational arithmetic instead of the prime field.
    #[arg(long)]
    rational: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Edge-list file; omit when using --family.
    input: Option<PathBuf>,
    /// 1: 4-regular bound 8n/5 - 1; 2: 5-regular bound 5n/3 - 1.
    #[arg(long, value_parser = ["1", "2"])]
    theorem: Option<String>,
    /// Check s(G) <= z(G) with degree cap 4 or 5.
    #[arg(long, value_parser = ["4", "5"], conflicts_with = "theorem")]
    lemma: Option<String>,
    #[command(flatten)]
    family: FamilyArgs,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: Option<FamilyName>,
    /// Number of graphs (default: the whole size range, or 100 random ones).
    #[arg(long)]
    count: Option<usize>,
    /// Degree for random-regular.
    #[arg(long)]
    degree: Option<usize>,
    /// `n` or `lo..hi` (inclusive): vertices, or cliques for chains.
    #[arg(long)]
    size: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyName {
    K5chain,
    K6chain,
    RandomRegular,
    Complete,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
    Dot,
    Svg,
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    status: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            status: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::LemmaInapplicable { .. }
            | Error::UnhandledCase(_)
            | Error::OracleMismatch { .. } => 1,
            _ => 2,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

/// Output text plus whether every check passed.
struct Outcome {
    stdout: String,
    passed: bool,
}

impl Outcome {
    fn pass(stdout: String) -> Self {
        Outcome {
            stdout,
            passed: true,
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    if cli.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    match &cli.command {
        Command::Rank(args) => rank(cli, args),
        Command::Stress { graph, basis } => stress(cli, graph, *basis),
        Command::Verify(args) => verify(cli, args),
        Command::Generate { family, out } => generate(cli, family, out.as_deref()),
        Command::Reduce { input } => reduce(cli, input),
        Command::Certify { input, degree } => certify(cli, input, *degree),
        Command::Selfcheck { count } => selfcheck(cli, *count),
        Command::Export { input } => export(cli, input),
    }
}

fn format_or(cli: &Cli, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::usage(format!(
            "--format {} is not available for this command",
            f.to_possible_value().unwrap().get_name()
        )))
    }
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = if path == Path::new("-") {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|source| Error::Io {
                path: "-".into(),
                source,
            })?;
        buf
    } else {
        fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?
    };
    Ok(Graph::parse_edge_list(&text)?)
}

fn domain(rational: bool) -> ScalarDomain {
    if rational {
        ScalarDomain::Rational
    } else {
        ScalarDomain::PrimeField
    }
}

fn domain_name(d: ScalarDomain) -> &'static str {
    match d {
        ScalarDomain::Rational => "rational",
        ScalarDomain::PrimeField => "prime-field",
    }
}

struct RankPair {
    matrix: usize,
    pebble: usize,
}

fn ranks(cli: &Cli, g: &Graph, rational: bool) -> RankPair {
    RankPair {
        matrix: rigidity::generic_rank_in(g, cli.trials, cli.seed, domain(rational)),
        pebble: pebble::pebble_rank(g),
    }
}

fn mismatch_note(r: &RankPair) -> Option<String> {
    (r.matrix != r.pebble).then(|| {
        format!(
            "oracle mismatch: matrix rank {} vs pebble rank {}",
            r.matrix, r.pebble
        )
    })
}

fn rank(cli: &Cli, args: &GraphArgs) -> CmdResult {
    let format = format_or(cli, Format::Text, &[Format::Text, Format::Json])?;
    let g = read_graph(&args.input)?;
    let r = ranks(cli, &g, args.rational);
    if let Some(note) = mismatch_note(&r) {
        eprintln!("{note}");
    }
    let stdout = match format {
        Format::Json => json_line(&json!({
            "vertex_count": g.vertex_count(),
            "edge_count": g.edge_count(),
            "rank": r.matrix,
            "pebble_rank": r.pebble,
            "oracle_agreement": r.matrix == r.pebble,
            "domain": domain_name(domain(args.rational)),
        })),
        _ => format!("{}\n", r.matrix),
    };
    Ok(Outcome {
        stdout,
        passed: r.matrix == r.pebble,
    })
}

fn json_line(v: &serde_json::Value) -> String {
    format!("{v}\n")
}

fn stress(cli: &Cli, args: &GraphArgs, with_basis: bool) -> CmdResult {
    let format = format_or(cli, Format::Text, &[Format::Text, Format::Json])?;
    let g = read_graph(&args.input)?;
    let r = ranks(cli, &g, args.rational);
    if let Some(note) = mismatch_note(&r) {
        eprintln!("{note}");
    }
    let s = g.edge_count() - r.matrix;
    let basis = if with_basis {
        let realization = sample_rational(g.vertex_count(), cli.seed)?;
        let m = RigidityMatrix::build(&g, &realization)?;
        let b = m.stress_basis();
        let vectors: Vec<Vec<String>> = b
            .vectors
            .iter()
            .map(|v| v.iter().map(|q| q.to_string()).collect())
            .collect();
        Some((b.edge_order, vectors))
    } else {
        None
    };
    let stdout = match format {
        Format::Json => {
            let mut v = json!({
                "vertex_count": g.vertex_count(),
                "edge_count": g.edge_count(),
                "rank": r.matrix,
                "stress": s,
                "pebble_rank": r.pebble,
                "oracle_agreement": r.matrix == r.pebble,
            });
            if let Some((edges, vectors)) = &basis {
                v["edge_order"] = json!(edges);
                v["basis"] = json!(vectors);
            }
            json_line(&v)
        }
        _ => {
            let mut out = format!("{s}\n");
            if let Some((edges, vectors)) = &basis {
                for vector in vectors {
                    let entries: Vec<String> = edges
                        .iter()
                        .zip(vector)
                        .filter(|(_, q)| q.as_str() != "0")
                        .map(|(e, q)| format!("{e}:{q}"))
                        .collect();
                    let _ = writeln!(out, "{}", entries.join(" "));
                }
            }
            out
        }
    };
    Ok(Outcome {
        stdout,
        passed: r.matrix == r.pebble,
    })
}

fn parse_size(text: &str) -> Result<RangeInclusive<usize>, Failure> {
    let bad = || Failure::usage(format!("--size expects `n` or `lo..hi`, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// The family, its default count and the degree of its members.
fn resolve_family(args: &FamilyArgs) -> Result<(Family, usize), Failure> {
    let name = args
        .family
        .ok_or_else(|| Failure::usage("--family is required"))?;
    let size = args.size.as_deref().map(parse_size).transpose()?;
    let span = |r: &RangeInclusive<usize>| r.end() - r.start() + 1;
    if args.degree.is_some() && name != FamilyName::RandomRegular {
        return Err(Failure::usage("--degree only applies to random-regular"));
    }
    let (family, default_count) = match name {
        FamilyName::K5chain | FamilyName::K6chain => {
            let clique_size = if name == FamilyName::K5chain { 5 } else { 6 };
            let default_hi = if clique_size == 5 { 6 } else { 5 };
            let k = size.unwrap_or(2..=default_hi);
            (
                Family::CliqueChain {
                    clique_size,
                    k_min: *k.start(),
                    k_max: *k.end(),
                },
                span(&k),
            )
        }
        FamilyName::RandomRegular => {
            let degree = args.degree.unwrap_or(4);
            let default_hi = if degree == 5 { 36 } else { 40 };
            let n = size.unwrap_or(6..=default_hi);
            (
                Family::RandomRegular {
                    degree,
                    n_min: *n.start(),
                    n_max: *n.end(),
                },
                100,
            )
        }
        FamilyName::Complete => {
            let n = size.unwrap_or(5..=6);
            (
                Family::Complete {
                    n_min: *n.start(),
                    n_max: *n.end(),
                },
                span(&n),
            )
        }
    };
    Ok((family, args.count.unwrap_or(default_count)))
}

fn strip_timing(cli: &Cli, mut r: BoundReport) -> BoundReport {
    if !cli.timing {
        r.runtime_ms = None;
    }
    r
}

fn render_reports(format: Format, reports: &[BoundReport]) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(BoundReport::CSV_HEADER);
            out.push('\n');
            for r in reports {
                out.push_str(&r.to_csv_row());
                out.push('\n');
            }
        }
        Format::Text => {
            for r in reports {
                let _ = writeln!(
                    out,
                    "{}: n={} |E|={} r={} s={} bound={} gap={} {}{}",
                    r.graph_id,
                    r.vertex_count,
                    r.edge_count,
                    r.rank,
                    r.stress,
                    bounds::format_ratio(&r.theorem_bound),
                    bounds::format_ratio(&r.gap()),
                    if r.satisfied { "satisfied" } else { "VIOLATED" },
                    if r.oracle_agreement {
                        ""
                    } else {
                        " ORACLE-MISMATCH"
                    },
                );
            }
        }
        _ => {
            for r in reports {
                out.push_str(&r.to_json_line());
                out.push('\n');
            }
        }
    }
    out
}

fn verify(cli: &Cli, args: &VerifyArgs) -> CmdResult {
    let format = format_or(
        cli,
        Format::Json,
        &[Format::Json, Format::Csv, Format::Text],
    )?;
    let theorem = args.theorem.as_deref().map(|t| {
        if t == "1" {
            Theorem::DegreeFour
        } else {
            Theorem::DegreeFive
        }
    });
    let reports = match (&args.input, args.family.family) {
        (Some(_), Some(_)) => {
            return Err(Failure::usage(
                "give either an input file or --family, not both",
            ))
        }
        (None, None) => return Err(Failure::usage("an input file or --family is required")),
        (Some(path), None) => {
            let g = read_graph(path)?;
            let id = path
                .file_stem()
                .map_or("graph".into(), |s| s.to_string_lossy().into_owned());
            let report = if let Some(cap) = &args.lemma {
                bounds::verify_lemma_bound_as(&g, cap.parse().unwrap(), &id)?
            } else {
                let theorem = theorem
                    .or_else(|| Theorem::from_degree(g.max_degree()))
                    .ok_or_else(|| Failure::usage("pass --theorem or --lemma"))?;
                bounds::verify_theorem(&g, theorem, &id)?
            };
            vec![strip_timing(cli, report)]
        }
        (None, Some(_)) => {
            if args.lemma.is_some() {
                return Err(Failure::usage("--lemma needs an input file"));
            }
            let (family, count) = resolve_family(&args.family)?;
            let mut reports = Vec::new();
            for (i, result) in bounds::batch_verify(&family, count, cli.seed)
                .into_iter()
                .enumerate()
            {
                let report = result.map_err(|e| Failure {
                    message: format!("item {i}: {e}"),
                    ..Failure::from(e)
                })?;
                if let Some(t) = theorem {
                    if t.degree() * report.vertex_count != 2 * report.edge_count {
                        return Err(Failure::usage(format!(
                            "{} is not {}-regular",
                            report.graph_id,
                            t.degree()
                        )));
                    }
                }
                reports.push(strip_timing(cli, report));
            }
            reports
        }
    };
    let passed = reports.iter().all(|r| r.satisfied && r.oracle_agreement);
    if reports.len() > 1 {
        let summary = bounds::summarize(&reports.iter().cloned().map(Ok).collect::<Vec<_>>());
        eprintln!(
            "{} graphs: {} satisfied, {} violated, {} oracle mismatches, {} tight",
            summary.total,
            summary.satisfied,
            summary.violations,
            summary.oracle_mismatches,
            summary.tight
        );
    }
    Ok(Outcome {
        stdout: render_reports(format, &reports),
        passed,
    })
}

fn generate(cli: &Cli, args: &FamilyArgs, out: Option<&Path>) -> CmdResult {
    let format = format_or(
        cli,
        Format::Text,
        &[Format::Text, Format::Dot, Format::Json],
    )?;
    let (family, count) = resolve_family(args)?;
    let mut stdout = String::new();
    for i in 0..count {
        let (id, g) = family.member(i, cli.seed)?;
        let (body, ext) = match format {
            Format::Dot => (g.to_dot(&id.replace('-', "_")), "dot"),
            Format::Json => (json_line(&json!({ "graph_id": id, "graph": g })), "json"),
            _ => (g.to_edge_list(), "edges"),
        };
        match out {
            Some(dir) => {
                let path = dir.join(format!("{id}.{ext}"));
                fs::write(&path, &body).map_err(|source| Error::Io {
                    path: path.to_path_buf(),
                    source,
                })?;
                let _ = writeln!(stdout, "{}", path.display());
            }
            None => {
                if format == Format::Text {
                    let _ = writeln!(stdout, "# {id}");
                }
                stdout.push_str(&body);
            }
        }
    }
    Ok(Outcome::pass(stdout))
}

fn trace_text(trace: &ReductionTrace) -> String {
    let mut out = String::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let edges: Vec<String> = step.removed_edges.iter().map(|e| e.to_string()).collect();
        let added: Vec<String> = step.added_edges.iter().map(|e| e.to_string()).collect();
        let kind = serde_json::to_value(step.kind).unwrap();
        let _ = write!(
            out,
            "{i}: {} -[{}]",
            kind.as_str().unwrap(),
            edges.join(" ")
        );
        if !added.is_empty() {
            let _ = write!(out, " +[{}]", added.join(" "));
        }
        let _ = writeln!(out, "  {}", step.relation);
    }
    let _ = writeln!(
        out,
        "final: {} edges; s(initial) vs s(final): {}",
        trace.final_graph.edge_count(),
        trace.accumulated_relation
    );
    out
}

fn reduce(cli: &Cli, input: &Path) -> CmdResult {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let g = read_graph(input)?;
    let trace = reductions::simplify(&g)?;
    Ok(Outcome::pass(match format {
        Format::Text => trace_text(&trace),
        _ => format!("{}\n", trace.to_json()),
    }))
}

fn certify(cli: &Cli, input: &Path, degree: Option<usize>) -> CmdResult {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    let g = read_graph(input)?;
    let cap = degree.unwrap_or(if g.max_degree() <= 4 { 4 } else { 5 });
    let cert = reductions::certify_stress_bound(&g, cap)?;
    let stdout = match format {
        Format::Text => {
            let mut out = trace_text(&cert.trace);
            let _ = writeln!(
                out,
                "s(G) = {} <= {} <= z(G) = {}: {}",
                cert.stress,
                cert.certified_bound,
                bounds::format_ratio(&cert.potential),
                if cert.valid { "valid" } else { "INVALID" }
            );
            out
        }
        _ => format!(
            "{}\n",
            serde_json::to_string_pretty(&cert).expect("certificate serializes")
        ),
    };
    if !cert.valid {
        eprintln!(
            "certificate invalid; failed steps {:?}",
            cert.check.failed_steps
        );
    }
    Ok(Outcome {
        stdout,
        passed: cert.valid,
    })
}

fn selfcheck(cli: &Cli, count: usize) -> CmdResult {
    let format = format_or(cli, Format::Json, &[Format::Json, Format::Text])?;
    const DENSITIES: [f64; 5] = [0.15, 0.3, 0.5, 0.7, 0.9];
    let mut graphs: Vec<(String, Graph)> = (0..count)
        .map(|i| {
            let n = 2 + i % 14;
            let p = DENSITIES[i % DENSITIES.len()];
            let seed = cli.seed.wrapping_add(i as u64);
            (
                format!("gnp-{n}-{p}-s{seed}"),
                generators::random_graph(n, p, seed),
            )
        })
        .collect();
    for n in 2..=8 {
        graphs.push((format!("k{n}"), generators::complete(n)));
    }
    for (size, ks) in [(5, 2..=6), (6, 2..=5)] {
        for k in ks {
            graphs.push((
                format!("k{size}chain-{k}"),
                generators::clique_chain(size, k)?,
            ));
        }
    }
    let mismatches: Vec<&String> = graphs
        .iter()
        .filter(|(_, g)| rigidity::generic_rank(g, cli.trials, cli.seed) != pebble::pebble_rank(g))
        .map(|(id, _)| id)
        .collect();
    let stdout = match format {
        Format::Text => format!(
            "checked {} graphs, {} mismatches{}\n",
            graphs.len(),
            mismatches.len(),
            mismatches
                .iter()
                .map(|m| format!(" {m}"))
                .collect::<String>()
        ),
        _ => json_line(&json!({ "checked": graphs.len(), "mismatches": mismatches })),
    };
    Ok(Outcome {
        stdout,
        passed: mismatches.is_empty(),
    })
}

fn export(cli: &Cli, input: &Path) -> CmdResult {
    let format = format_or(cli, Format::Dot, &[Format::Dot, Format::Svg, Format::Json])?;
    let g = read_graph(input)?;
    let name = input.file_stem().map_or("G".into(), |s| {
        s.to_string_lossy()
            .replace(|c: char| !c.is_alphanumeric(), "_")
    });
    Ok(Outcome::pass(match format {
        Format::Svg => {
            let realization = sample_rational(g.vertex_count(), cli.seed)?;
            svg::render(&g, &realization.to_f64())
        }
        Format::Json => {
            let realization =
                sample_generic_realization(g.vertex_count(), cli.seed, ScalarDomain::Rational)?;
            json_line(&json!({ "graph": g, "realization": realization.to_json() }))
        }
        _ => g.to_dot(&name),
    }))
}
