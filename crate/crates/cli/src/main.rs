//! `shortpoly`: command-line front end for short-polynomial computations.
//!
//! Exit codes: 0 success, 1 computation failed, 2 usage error, 3 input error,
//! 4 budget exhausted, 5 bound violation.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use shortpoly::determinantal::{DetError, DeterminantalIdeal, Relation, RelationGraph};
use shortpoly::matroid::{format_label_set, ColumnMatroid, DEFAULT_MATROID_LIMIT};
use shortpoly::pforms::{build_pforms, coefficient_matrix};
use shortpoly::shortness::{shortness, ShortnessOptions, ShortnessReport, ShortnessStatus, DEFAULT_BUDGET};
use shortpoly::{parse_ideal, theorem_bound, Exponent, Field, Fp, GeneratorSystem, Rational, Shape};

/// Primes accepted by `--field p<prime>`.
const PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 101, 32003, 65521, 1000003];

#[derive(Parser, Debug)]
#[command(name = "shortpoly", version, about = "Short polynomials in graded components of polynomial ideals")]
struct Cli {
    /// Coefficient field: `q` for the rationals or `p<prime>`, e.g. `p32003`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Maximum number of rank tests in exhaustive searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for the randomized upper-bound phase.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the shortness search.
    #[arg(long, global = true, env = "SHORTPOLY_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the nonzero linear forms p_α of a graded component.
    Pforms { file: PathBuf, degree: u32 },
    /// Compute the shortness of a graded component.
    Shortness {
        file: PathBuf,
        degree: u32,
        /// Stop after refuting elements with this many terms.
        #[arg(long)]
        max_terms: Option<usize>,
    },
    /// Determinantal ideal of t-minors of a generic m x n matrix in degree t + d.
    Det {
        #[command(flatten)]
        params: DetParams,
        /// Certify by exhaustive search that no element has floor(t!/2) or fewer terms.
        #[arg(long)]
        verify_bound: bool,
        /// Print the relation graph in DOT format.
        #[arg(long)]
        graph_dot: bool,
        /// Build a relation starting from this exponent, e.g. `101|010`.
        #[arg(long, value_name = "BETA")]
        relation_from: Option<String>,
        /// Exponents the relation must avoid.
        #[arg(long, value_name = "ALPHA")]
        forbid: Vec<String>,
    },
    /// Bases, circuits and hyperplanes of the matroid of the p_α.
    Matroid {
        file: PathBuf,
        degree: u32,
        /// Largest number of non-loop elements to enumerate.
        #[arg(long, default_value_t = DEFAULT_MATROID_LIMIT)]
        limit: usize,
    },
    /// Sign-alternating relation among determinantal p-forms.
    Relation {
        #[command(flatten)]
        params: DetParams,
        beta: String,
        #[arg(long, value_name = "ALPHA")]
        forbid: Vec<String>,
    },
    /// Relation graph of a determinantal ideal (DOT, or JSON with --json).
    Graph {
        #[command(flatten)]
        params: DetParams,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct DetParams {
    m: usize,
    n: usize,
    t: usize,
    d: u32,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Computation(String),
}

/// Completed computations can still signal a verdict through the exit code.
enum Verdict {
    Done,
    BudgetExhausted,
    BoundViolated,
}

type Outcome = Result<(String, Verdict), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("warning: could not configure {threads} threads: {err}");
        }
    }
    match dispatch(&cli) {
        Ok((output, verdict)) => {
            print!("{output}");
            match verdict {
                Verdict::Done => ExitCode::SUCCESS,
                Verdict::BudgetExhausted => ExitCode::from(4),
                Verdict::BoundViolated => ExitCode::from(5),
            }
        }
        Err(failure) => {
            let (code, msg) = match failure {
                Failure::Usage(msg) => (2, msg),
                Failure::Input(msg) => (3, msg),
                Failure::Computation(msg) => (1, msg),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let field = cli.field.trim().to_ascii_lowercase();
    if field == "q" {
        return run::<Rational>(cli);
    }
    let prime: u64 = field
        .strip_prefix('p')
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| Failure::Usage(format!("unknown field '{}', expected q or p<prime>", cli.field)))?;
    match prime {
        2 => run::<Fp<2>>(cli),
        3 => run::<Fp<3>>(cli),
        5 => run::<Fp<5>>(cli),
        7 => run::<Fp<7>>(cli),
        11 => run::<Fp<11>>(cli),
        13 => run::<Fp<13>>(cli),
        101 => run::<Fp<101>>(cli),
        32003 => run::<Fp<32003>>(cli),
        65521 => run::<Fp<65521>>(cli),
        1000003 => run::<Fp<1000003>>(cli),
        _ => Err(Failure::Usage(format!("unsupported prime {prime}; supported primes: {PRIMES:?}"))),
    }
}

fn run<F: Field>(cli: &Cli) -> Outcome {
    let options = ShortnessOptions { budget: cli.budget, seed: cli.seed, ..Default::default() };
    match &cli.command {
        Command::Pforms { file, degree } => cmd_pforms::<F>(&load(file)?, *degree, cli.json),
        Command::Shortness { file, degree, max_terms } => {
            let system = load::<F>(file)?;
            let options = ShortnessOptions { max_terms: *max_terms, ..options };
            cmd_shortness(&system, *degree, &options, cli.json)
        }
        Command::Matroid { file, degree, limit } => cmd_matroid::<F>(&load(file)?, *degree, *limit, cli.json),
        Command::Det { params, verify_bound, graph_dot, relation_from, forbid } => {
            let ideal = det_ideal(*params)?;
            let mut out = String::new();
            let mut verdict = Verdict::Done;
            if !verify_bound && !graph_dot && relation_from.is_none() {
                out.push_str(&det_summary(&ideal, params.d, cli.json));
            }
            if *verify_bound {
                let (text, v) = verify_theorem_bound::<F>(&ideal, params.d, &options, cli.json);
                out.push_str(&text);
                verdict = v;
            }
            if *graph_dot {
                out.push_str(&ideal.relation_graph(params.d).to_dot());
            }
            if let Some(beta) = relation_from {
                out.push_str(&cmd_relation(&ideal, params.d, beta, forbid, cli.json)?);
            }
            Ok((out, verdict))
        }
        Command::Relation { params, beta, forbid } => {
            let ideal = det_ideal(*params)?;
            Ok((cmd_relation(&ideal, params.d, beta, forbid, cli.json)?, Verdict::Done))
        }
        Command::Graph { params } => {
            let graph = det_ideal(*params)?.relation_graph(params.d);
            let out = if cli.json { graph_json(&graph) } else { graph.to_dot() };
            Ok((out, Verdict::Done))
        }
    }
}

fn load<F: Field>(path: &PathBuf) -> Result<GeneratorSystem<F>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|err| Failure::Input(format!("cannot read {}: {err}", path.display())))?;
    parse_ideal(&text).map_err(|err| Failure::Input(format!("{}: {err}", path.display())))
}

fn det_ideal(p: DetParams) -> Result<DeterminantalIdeal, Failure> {
    DeterminantalIdeal::new(p.m, p.n, p.t).map_err(|err| Failure::Input(err.to_string()))
}

fn to_json_string(value: &impl serde::Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serializable");
    out.push('\n');
    out
}

fn cmd_pforms<F: Field>(system: &GeneratorSystem<F>, degree: u32, as_json: bool) -> Outcome {
    let shape = system.shape();
    let forms = build_pforms(system, degree);
    let zero = forms.iter().filter(|f| f.is_zero()).count();
    let nonzero: Vec<_> = forms.iter().filter(|f| !f.is_zero()).collect();
    let out = if as_json {
        let items: Vec<_> = nonzero
            .iter()
            .map(|f| json!({"monomial": shape.format_exponent(&f.alpha), "form": f.to_json()}))
            .collect();
        to_json_string(&json!({"field": F::name(), "degree": degree, "forms": items, "zero_forms": zero}))
    } else {
        let mut out = String::new();
        for f in &nonzero {
            let _ = writeln!(out, "p_{} = {}", shape.format_exponent(&f.alpha), f.display(shape));
        }
        let _ = writeln!(out, "{} nonzero forms, {zero} zero forms", nonzero.len());
        out
    };
    Ok((out, Verdict::Done))
}

fn cmd_shortness<F: Field>(
    system: &GeneratorSystem<F>,
    degree: u32,
    options: &ShortnessOptions,
    as_json: bool,
) -> Outcome {
    let report = shortness(system, degree, options);
    let verdict = match report.status {
        ShortnessStatus::LowerBound { budget_exhausted: true, .. } => Verdict::BudgetExhausted,
        _ => Verdict::Done,
    };
    let out = if as_json { to_json_string(&report.to_json(system)) } else { shortness_text(&report) };
    Ok((out, verdict))
}

fn shortness_text<F: Field>(report: &ShortnessReport<F>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "field: {}", report.field);
    let _ = writeln!(out, "degree: {}", report.degree);
    let _ = writeln!(out, "monomials: {} ({} loops)", report.num_monomials, report.num_loops);
    let _ = writeln!(out, "component dimension: {}", report.component_dim);
    let candidate = if report.is_candidate() { " (candidate: prime field)" } else { "" };
    let status = match report.status {
        ShortnessStatus::Exact(s) => format!("exact {s}{candidate}"),
        ShortnessStatus::LowerBound { no_element_with_at_most, budget_exhausted } => {
            let why = if budget_exhausted { ", budget exhausted" } else { "" };
            format!("lower bound: no element with at most {no_element_with_at_most} terms{why}{candidate}")
        }
        ShortnessStatus::ZeroComponent => "zero component".to_string(),
    };
    let _ = writeln!(out, "status: {status}");
    if let Some(w) = &report.witness {
        let _ = writeln!(out, "witness: {}", w.polynomial);
        let cofactors: Vec<String> = w.cofactors.iter().map(|g| g.to_string()).collect();
        let _ = writeln!(out, "cofactors: {}", cofactors.join("; "));
    }
    if let Some(b) = &report.bounds {
        let hyper = b.hyperplane_shortness.map_or("-".to_string(), |h| h.to_string());
        let _ = writeln!(out, "bounds: dim {}, occurrence {}, hyperplanes {hyper}", b.dim_bound, b.occurrence_bound);
    }
    if let Some(u) = report.upper_bound {
        let _ = writeln!(out, "random upper bound: {u}");
    }
    let _ = writeln!(out, "rank tests: {}", report.rank_tests);
    out
}

fn cmd_matroid<F: Field>(system: &GeneratorSystem<F>, degree: u32, limit: usize, as_json: bool) -> Outcome {
    let matroid = ColumnMatroid::new(&coefficient_matrix(system, degree));
    let report = matroid.report(limit).map_err(|err| Failure::Computation(err.to_string()))?;
    if as_json {
        return Ok((to_json_string(&report), Verdict::Done));
    }
    let sets = |s: &[Vec<usize>]| s.iter().map(|x| format_label_set(x)).collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    let ground: Vec<String> = report.ground.iter().enumerate().map(|(k, g)| format!("{}:{g}", k + 1)).collect();
    let _ = writeln!(out, "ground: {}", ground.join(" "));
    let _ = writeln!(out, "rank: {}", report.rank);
    let _ = writeln!(out, "loops: {}", format_label_set(&report.loops));
    let _ = writeln!(out, "bases: {}", sets(&report.bases));
    let _ = writeln!(out, "circuits: {}", sets(&report.circuits));
    let _ = writeln!(out, "hyperplanes: {}", sets(&report.hyperplanes));
    let shortness = report.shortness.map_or("- (rank 0)".to_string(), |s| s.to_string());
    let _ = writeln!(out, "shortness: {shortness}");
    Ok((out, Verdict::Done))
}

fn det_summary(ideal: &DeterminantalIdeal, d: u32, as_json: bool) -> String {
    let graph = ideal.relation_graph(d);
    let components = graph.components().len();
    let bound = theorem_bound(ideal.t());
    if as_json {
        return to_json_string(&json!({
            "minors": ideal.num_minors(),
            "degree": ideal.t() as u32 + d,
            "nonzero_forms": graph.vertices.len(),
            "graph_edges": graph.edges.len(),
            "graph_components": components,
            "theorem_bound": bound.to_string(),
        }));
    }
    format!(
        "minors: {}\ndegree: {}\nnonzero forms: {}\ngraph: {} edges, {components} components\ntheorem bound: {bound}\n",
        ideal.num_minors(),
        ideal.t() as u32 + d,
        graph.vertices.len(),
        graph.edges.len(),
    )
}

fn verify_theorem_bound<F: Field>(
    ideal: &DeterminantalIdeal,
    d: u32,
    options: &ShortnessOptions,
    as_json: bool,
) -> (String, Verdict) {
    let bound = theorem_bound(ideal.t());
    let below = usize::try_from(bound - 1).unwrap_or(usize::MAX);
    let system = ideal.minors::<F>();
    let degree = ideal.t() as u32 + d;
    let (verdict, message, report) = if below == 0 {
        (Verdict::Done, format!("bound {bound} holds trivially"), None)
    } else {
        let options = ShortnessOptions { max_terms: Some(below), random_trials: 0, ..options.clone() };
        let report = shortness(&system, degree, &options);
        let (verdict, message) = match report.status {
            ShortnessStatus::LowerBound { budget_exhausted: false, .. } | ShortnessStatus::ZeroComponent => {
                (Verdict::Done, format!("no {below}-short element; bound {bound} holds"))
            }
            ShortnessStatus::LowerBound { no_element_with_at_most, budget_exhausted: true } => (
                Verdict::BudgetExhausted,
                format!("budget exhausted: no element with at most {no_element_with_at_most} terms; bound {bound} not certified"),
            ),
            ShortnessStatus::Exact(s) => (Verdict::BoundViolated, format!("found a {s}-term element; bound {bound} violated")),
        };
        (verdict, message, Some(report))
    };
    let message = match report.as_ref() {
        Some(r) if r.is_candidate() => format!("{message} (candidate: prime field)"),
        _ => message,
    };
    if as_json {
        let text = to_json_string(&json!({
            "theorem_bound": bound.to_string(),
            "verdict": message,
            "report": report.map(|r| r.to_json(&system)),
        }));
        return (text, verdict);
    }
    (format!("{message}\n"), verdict)
}

fn parse_exponents(shape: Shape, items: &[String]) -> Result<BTreeSet<Exponent>, Failure> {
    items
        .iter()
        .map(|s| shape.parse_exponent(s).ok_or_else(|| Failure::Input(format!("cannot parse exponent '{s}'"))))
        .collect()
}

fn cmd_relation(ideal: &DeterminantalIdeal, d: u32, beta: &str, forbid: &[String], as_json: bool) -> Result<String, Failure> {
    let shape = ideal.shape();
    let beta = shape.parse_exponent(beta).ok_or_else(|| Failure::Input(format!("cannot parse exponent '{beta}'")))?;
    let forbidden = parse_exponents(shape, forbid)?;
    let relation = ideal.bfs_relation(d, &beta, &forbidden).map_err(|err| match err {
        DetError::NoValidPartner { .. } | DetError::StepLimit(_) | DetError::VerificationFailed => {
            Failure::Computation(err.to_string())
        }
        other => Failure::Input(other.to_string()),
    })?;
    Ok(if as_json { to_json_string(&relation.to_json()) } else { relation_text(&relation) })
}

fn relation_text(relation: &Relation) -> String {
    let fmt = |e: &Exponent| relation.shape.format_exponent(e);
    let mut out = String::new();
    let terms: Vec<String> = relation.members.iter().map(|a| format!("p_{}", fmt(a))).collect();
    let _ = writeln!(out, "{} = 0", terms.join(" + "));
    for (k, level) in relation.levels.iter().enumerate() {
        let _ = writeln!(out, "level {k}: {}", level.iter().map(fmt).collect::<Vec<_>>().join(" "));
    }
    out
}

fn graph_json(graph: &RelationGraph) -> String {
    to_json_string(&json!({
        "vertices": graph.vertices.iter().map(|v| graph.shape.format_exponent(v)).collect::<Vec<_>>(),
        "edges": graph.edges,
        "components": graph.components(),
    }))
}
