//! Command-line front end. Graphs travel as JSON on stdin/stdout, so the
//! generators compose with the analysis subcommands through pipes:
//!
//! ```text
//! ordhom generate boolean 3 | ordhom hilbert-b --json
//! ordhom generate cassidy-shelton | ordhom koszul
//! ```
//!
//! Exit codes: 0 on success, 1 on domain errors (malformed or invalid graphs,
//! unmet hypotheses), 2 on usage errors.

use std::fmt::Display;
use std::fs;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use ordhom::generators::{parse_sizes, FamilySpec};
use ordhom::oracle::b_graded_dims;
use ordhom::series::HypothesisError;
use ordhom::{
    is_cohen_macaulay, mobius, reduced_cohomology_dims, BettiTable, FieldSpec, HilbertEngine,
    LayeredGraph, TruncatedSeries,
};

#[derive(Parser)]
#[command(
    name = "ordhom",
    version,
    about = "Order cohomology of layered graphs and Hilbert series of their graph algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GraphInput {
    /// Read the graph from FILE instead of stdin.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct FieldArg {
    /// Coefficient field: `q` for the rationals, `p:PRIME` for a prime field.
    #[arg(long, default_value = "q", value_parser = FieldSpec::parse)]
    field: FieldSpec,
    /// Rerun over the rationals as well and report whether the chosen prime
    /// field agrees.
    #[arg(long, requires = "field")]
    both_fields: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Window cohomology sums.
    Cohomology,
    /// Signed chain counting; needs a unique bottom vertex at level 0.
    ChainCount,
}

#[derive(Subcommand)]
enum Command {
    /// Check the layered condition and list violating edges.
    Validate {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
    },
    /// Decide uniformity and name the failing tails.
    Uniform {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
    },
    /// Reduced cohomology of the order complex, whole poset or one window.
    Homology {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        /// Restrict to the window below this vertex (with --window).
        #[arg(long, requires = "window")]
        vertex: Option<String>,
        /// Window depth i: vertices below --vertex by fewer than i levels.
        #[arg(long, requires = "vertex")]
        window: Option<u32>,
    },
    /// Möbius invariant of the whole poset with bounds adjoined.
    Mobius {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
    },
    /// Cohen-Macaulay test over open intervals; --strict adjoins bounds.
    CmCheck {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        /// Also require the intervals reaching the adjoined bottom and top.
        #[arg(long)]
        strict: bool,
    },
    /// Hilbert series of B(Γ) from window cohomology (uniform graphs).
    HilbertB {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        /// Pad or cut the printed series to this truncation degree.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Inverse Hilbert series of the splitting algebra A(Γ).
    InvHilbertA {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        #[arg(long, value_enum, default_value = "cohomology")]
        route: Route,
        /// Pad or cut the printed series to this truncation degree.
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Numerical-Koszulity verdict with per-degree defects.
    Koszul {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Graded dimensions of B(Γ) from its presentation, checked against the
    /// cohomological series.
    Oracle {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        /// Compute dimensions up to this degree (default: graph height).
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Emit a family graph as JSON on stdout.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Full pipeline: validation, uniformity, both series, Koszulity, oracle.
    Report {
        #[command(flatten)]
        io: GraphInput,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        field: FieldArg,
        /// Exit nonzero when any stage is skipped or disagrees.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Complete layered graph; sizes run from the top level down to level 0.
    Complete { sizes: String },
    /// Subsets of {1..n} ordered by inclusion.
    Boolean { n: u32 },
    /// The height-4 graph whose Koszulity defect appears in degree 4.
    CassidyShelton {
        /// Drop the b3 -> c2 edge.
        #[arg(long)]
        deleted: bool,
    },
    /// Height-3 uniform graph with series 1 + rτ + sτ² + (s−r+3)τ³.
    Prescribed { r: u32, s: u32 },
    /// Height-3 graph whose inverse A-series is 1 − rτ + rτ² − τ³ (r ≥ 9).
    Palindromic { r: u32 },
    /// Seeded uniform graph with the given level sizes (top first).
    Random {
        sizes: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(msg: impl Display) -> ! {
    eprintln!("error: {msg}");
    exit(1);
}

fn usage_fail(msg: &str) -> ! {
    eprintln!("usage error: {msg}");
    exit(2);
}

fn read_graph(input: &Option<PathBuf>) -> LayeredGraph {
    let text = match input {
        Some(path) => fs::read_to_string(path)
            .unwrap_or_else(|e| fail(format_args!("{}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .unwrap_or_else(|e| fail(format_args!("stdin: {e}")));
            buf
        }
    };
    LayeredGraph::from_json(&text).unwrap_or_else(|e| fail(e))
}

/// Reads a graph and refuses to continue if the layered condition fails.
fn checked_graph(input: &Option<PathBuf>) -> LayeredGraph {
    let g = read_graph(input);
    let report = g.validate();
    if !report.is_valid() {
        for v in &report.violations {
            eprintln!("error: {v}");
        }
        exit(1);
    }
    g
}

fn failing_tail_ids(g: &LayeredGraph) -> Vec<String> {
    g.is_uniform().failing_tails.iter().map(|&v| g.id(v).to_string()).collect()
}

fn require_uniform(g: &LayeredGraph) {
    if !g.is_uniform().uniform {
        fail(HypothesisError::NotUniform(failing_tail_ids(g)));
    }
}

/// Runs `compute` over the requested field(s) and prints the result; with
/// --both-fields the rational and prime-field answers are compared through
/// `project` and emitted side by side.
fn emit_compared<T, V, C, K, R>(
    json_mode: bool,
    fa: &FieldArg,
    compute: C,
    project: K,
    render: R,
) where
    T: Serialize,
    V: PartialEq,
    C: Fn(FieldSpec) -> T,
    K: Fn(&T) -> V,
    R: Fn(&T, FieldSpec),
{
    if fa.both_fields {
        if fa.field == FieldSpec::Rationals {
            usage_fail("--both-fields needs --field p:PRIME to compare against");
        }
        let over_q = compute(FieldSpec::Rationals);
        let over_p = compute(fa.field);
        let agree = project(&over_q) == project(&over_p);
        if json_mode {
            println!("{}", json!({ "q": over_q, "modp": over_p, "agree": agree }));
        } else {
            render(&over_q, FieldSpec::Rationals);
            render(&over_p, fa.field);
            println!("{}", if agree { "fields agree" } else { "fields differ" });
        }
    } else {
        let out = compute(fa.field);
        if json_mode {
            println!("{}", serde_json::to_string(&out).expect("serializable result"));
        } else {
            render(&out, fa.field);
        }
    }
}

fn print_betti(betti: &BettiTable, field: FieldSpec) {
    println!("field {}", field.label());
    for (d, dim) in betti.entries() {
        println!("dim H^({d}) = {dim}");
    }
}

fn print_series(name: &str, s: &TruncatedSeries, field: FieldSpec) {
    println!("{name} over {} = {s}", field.label());
}

#[derive(Serialize, PartialEq, Eq, Clone)]
struct OracleDoc {
    dims: Vec<usize>,
    #[serde(rename = "matches_hilbert_B")]
    matches_hilbert_b: bool,
}

fn oracle_doc(g: &LayeredGraph, depth: usize, field: FieldSpec) -> OracleDoc {
    let dims = b_graded_dims(g, depth, field);
    let engine = HilbertEngine::new(g, field).unwrap_or_else(|e| fail(e));
    let series = engine.hilbert_b().resized(depth);
    let matches_hilbert_b =
        dims.iter().enumerate().all(|(i, &d)| series.coeff(i) == d as i128);
    OracleDoc { dims, matches_hilbert_b }
}

fn family_graph(family: Family) -> LayeredGraph {
    let spec = match family {
        Family::Complete { sizes } => {
            FamilySpec::CompleteLayered(parse_sizes(&sizes).unwrap_or_else(|e| fail(e)))
        }
        Family::Boolean { n } => FamilySpec::Boolean(n),
        Family::CassidyShelton { deleted: false } => FamilySpec::CassidyShelton,
        Family::CassidyShelton { deleted: true } => FamilySpec::CassidySheltonDeleted,
        Family::Prescribed { r, s } => FamilySpec::PrescribedRS { r, s },
        Family::Palindromic { r } => FamilySpec::Palindromic { r },
        Family::Random { sizes, seed } => FamilySpec::RandomUniform {
            seed,
            level_sizes: parse_sizes(&sizes).unwrap_or_else(|e| fail(e)),
        },
    };
    spec.build().unwrap_or_else(|e| fail(e))
}

fn run_report(io: &GraphInput, json_mode: bool, fa: &FieldArg, strict: bool) {
    if fa.both_fields {
        usage_fail("report runs over a single field; drop --both-fields");
    }
    let g = read_graph(&io.input);
    let validation = g.validate();
    let summary = json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "height": g.height(),
    });
    if !validation.is_valid() {
        if json_mode {
            println!(
                "{}",
                json!({ "graph": summary, "valid": false, "violations": validation.violations })
            );
        } else {
            for v in &validation.violations {
                println!("invalid: {v}");
            }
        }
        exit(1);
    }

    let uniform = g.is_uniform();
    let tails = failing_tail_ids(&g);
    let field = fa.field;
    let mut notes: Vec<String> = Vec::new();

    let mut hilbert_b = None;
    let mut inv_hilbert_a = None;
    let mut koszul = None;
    let mut oracle = None;
    if uniform.uniform {
        let engine = HilbertEngine::new(&g, field).unwrap_or_else(|e| fail(e));
        let hb = engine.hilbert_b();
        inv_hilbert_a = Some(engine.inv_hilbert_a());
        match engine.koszul() {
            Ok(k) => koszul = Some(k),
            Err(e) => notes.push(format!("koszul skipped: {e}")),
        }
        let doc = oracle_doc(&g, g.height() as usize, field);
        if !doc.matches_hilbert_b {
            notes.push("presentation dimensions disagree with the cohomological series".into());
        }
        oracle = Some(doc);
        hilbert_b = Some(hb);
    } else {
        notes.push(format!("{}", HypothesisError::NotUniform(tails.clone())));
    }
    let strict_fail = strict && !notes.is_empty();

    if json_mode {
        println!(
            "{}",
            json!({
                "graph": summary,
                "valid": true,
                "uniform": uniform.uniform,
                "failing_tails": tails,
                "field": field.label(),
                "hilbert_b": hilbert_b,
                "inv_hilbert_a": inv_hilbert_a,
                "koszul": koszul,
                "oracle": oracle,
                "notes": notes,
            })
        );
    } else {
        println!(
            "graph: {} vertices, {} edges, height {}",
            g.vertex_count(),
            g.edge_count(),
            g.height()
        );
        println!("valid: yes");
        println!("uniform: {}", if uniform.uniform { "yes" } else { "no" });
        if let Some(s) = &hilbert_b {
            print_series("h(B)", s, field);
        }
        if let Some(s) = &inv_hilbert_a {
            print_series("1/h(A)", s, field);
        }
        if let Some(k) = &koszul {
            println!("numerically Koszul: {}", if k.verdict { "yes" } else { "no" });
            for (i, d) in &k.defects {
                println!("defect at degree {i}: {d}");
            }
        }
        if let Some(o) = &oracle {
            println!("presentation dims: {:?}", o.dims);
            println!(
                "presentation matches h(B): {}",
                if o.matches_hilbert_b { "yes" } else { "no" }
            );
        }
        for n in &notes {
            println!("note: {n}");
        }
    }
    if strict_fail {
        exit(1);
    }
}

fn main() {
    // Die quietly when the downstream end of a pipeline closes early, like
    // any other Unix filter, instead of panicking on the broken pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match Cli::parse().command {
        Command::Validate { io, json } => {
            let g = read_graph(&io.input);
            let report = g.validate();
            if json {
                println!(
                    "{}",
                    json!({ "valid": report.is_valid(), "violations": report.violations })
                );
            } else if report.is_valid() {
                println!(
                    "valid layered graph: {} vertices, {} edges, height {}",
                    g.vertex_count(),
                    g.edge_count(),
                    g.height()
                );
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
            }
            if !report.is_valid() {
                exit(1);
            }
        }
        Command::Uniform { io, json } => {
            let g = checked_graph(&io.input);
            let report = g.is_uniform();
            let tails = failing_tail_ids(&g);
            if json {
                println!("{}", json!({ "uniform": report.uniform, "failing_tails": tails }));
            } else if report.uniform {
                println!("uniform");
            } else {
                println!("not uniform; failing tails: {}", tails.join(", "));
            }
        }
        Command::Homology { io, json, field, vertex, window } => {
            let g = checked_graph(&io.input);
            emit_compared(
                json,
                &field,
                |f| match (&vertex, window) {
                    (Some(id), Some(i)) => {
                        let a = g.require_vertex(id).unwrap_or_else(|e| fail(e));
                        reduced_cohomology_dims(&g.level_window_subgraph(a, i).poset(), f)
                    }
                    _ => reduced_cohomology_dims(&g.poset(), f),
                },
                |betti| betti.entries().collect::<Vec<_>>(),
                print_betti,
            );
        }
        Command::Mobius { io, json } => {
            let g = checked_graph(&io.input);
            let m = mobius(&g.poset());
            if json {
                println!("{}", json!({ "mobius": m }));
            } else {
                println!("{m}");
            }
        }
        Command::CmCheck { io, json, field, strict } => {
            let g = checked_graph(&io.input);
            let p = g.poset();
            emit_compared(
                json,
                &field,
                |f| is_cohen_macaulay(&p, f, strict),
                |r| r.clone(),
                |r, f| {
                    if r.cohen_macaulay {
                        println!("Cohen-Macaulay over {}", f.label());
                    } else {
                        println!(
                            "not Cohen-Macaulay over {}: {} failing interval(s)",
                            f.label(),
                            r.failures.len()
                        );
                    }
                },
            );
        }
        Command::HilbertB { io, json, field, max_degree } => {
            let g = checked_graph(&io.input);
            require_uniform(&g);
            emit_compared(
                json,
                &field,
                |f| {
                    let engine = HilbertEngine::new(&g, f).unwrap_or_else(|e| fail(e));
                    let s = engine.hilbert_b();
                    match max_degree {
                        Some(d) => s.resized(d),
                        None => s,
                    }
                },
                |s| s.coeffs().to_vec(),
                |s, f| print_series("h(B)", s, f),
            );
        }
        Command::InvHilbertA { io, json, field, route, max_degree } => {
            let g = checked_graph(&io.input);
            match route {
                Route::Cohomology => {
                    require_uniform(&g);
                    emit_compared(
                        json,
                        &field,
                        |f| {
                            let engine = HilbertEngine::new(&g, f).unwrap_or_else(|e| fail(e));
                            let s = engine.inv_hilbert_a();
                            match max_degree {
                                Some(d) => s.resized(d),
                                None => s,
                            }
                        },
                        |s| s.coeffs().to_vec(),
                        |s, f| print_series("1/h(A)", s, f),
                    );
                }
                Route::ChainCount => {
                    if field.both_fields || field.field != FieldSpec::Rationals {
                        eprintln!("warning: the chain-count route uses no field; ignoring --field");
                    }
                    let s = ordhom::inv_hilbert_a_chain_count(&g).unwrap_or_else(|e| fail(e));
                    let s = match max_degree {
                        Some(d) => s.resized(d),
                        None => s,
                    };
                    if json {
                        println!("{}", serde_json::to_string(&s).expect("serializable series"));
                    } else {
                        println!("1/h(A) by chain count = {s}");
                    }
                }
            }
        }
        Command::Koszul { io, json, field } => {
            let g = checked_graph(&io.input);
            emit_compared(
                json,
                &field,
                |f| {
                    let engine = HilbertEngine::new(&g, f).unwrap_or_else(|e| fail(e));
                    engine.koszul().unwrap_or_else(|e| fail(e))
                },
                |k| k.clone(),
                |k, f| {
                    println!(
                        "numerically Koszul over {}: {}",
                        f.label(),
                        if k.verdict { "yes" } else { "no" }
                    );
                    for (i, d) in &k.defects {
                        println!("defect at degree {i}: {d}");
                    }
                    if !k.consistent {
                        println!("warning: defect and series checks disagree");
                    }
                },
            );
        }
        Command::Oracle { io, json, field, max_degree } => {
            let g = checked_graph(&io.input);
            require_uniform(&g);
            let depth = max_degree.unwrap_or(g.height() as usize);
            emit_compared(
                json,
                &field,
                |f| oracle_doc(&g, depth, f),
                |o| o.clone(),
                |o, f| {
                    println!("graded dims over {}: {:?}", f.label(), o.dims);
                    println!(
                        "matches h(B): {}",
                        if o.matches_hilbert_b { "yes" } else { "no" }
                    );
                },
            );
        }
        Command::Generate { family } => {
            println!("{}", family_graph(family).to_json_string());
        }
        Command::Report { io, json, field, strict } => {
            run_report(&io, json, &field, strict);
        }
    }
}
