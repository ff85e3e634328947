use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qautgraph::automorphisms::{schmidt_bruteforce, AutConfig};
use qautgraph::canonical::iso_test;
use qautgraph::decomposition::{decompose, recognize_cograph, recognize_forest, BaseClass};
use qautgraph::homcount::{fractionally_isomorphic, hom_counts, CountConfig};
use qautgraph::io::{parse_graph, write_graph6};
use qautgraph::quantum_expr::qu_expr;
use qautgraph::schmidt::symmetry_summary;
use qautgraph::verify::{run_suite, VerifyConfig, SUITES};
use qautgraph::{Error, Graph};

/// Quantum symmetry and quantum isomorphism for graphs built from sums and
/// complements.
///
/// Graph arguments are graph6 strings, paths to files holding graph6 or an
/// edge list (first line: vertex count), or `-` for stdin.
#[derive(Parser)]
#[command(name = "qautgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomised verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest graph handed to automorphism search.
    #[arg(long, global = true, default_value_t = AutConfig::default().max_n)]
    max_n: usize,
    /// Largest number of vertex maps a counting run may enumerate.
    #[arg(long, global = true, default_value_t = qautgraph::homcount::DEFAULT_BUDGET)]
    budget: u128,
    /// Numerical tolerance for magic unitary checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Class membership and decomposition tree.
    Recognize { graph: String },
    /// Schmidt's criterion and quantum symmetry.
    Qsym { graph: String },
    /// The quantum automorphism group as a normalised expression.
    Qaut { graph: String },
    /// Whether two graphs are quantum isomorphic.
    Qiso { first: String, second: String },
    /// Homomorphism, monomorphism and quotient counts from one graph to another.
    Hom { from: String, to: String },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

enum Failure {
    Input(String),
    Unsupported(String),
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(_) | Error::SizeLimit { .. } | Error::BudgetExceeded { .. } => {
                Failure::Unsupported(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read_graph(arg: &str) -> Result<Graph, Failure> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        s
    } else if std::path::Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
    } else {
        arg.to_string()
    };
    Ok(parse_graph(&text)?)
}

fn class_flags(g: &Graph) -> Value {
    json!({
        "cograph": recognize_cograph(g),
        "forest": recognize_forest(g),
        "tree-cograph": decompose(g, BaseClass::TreeCograph).is_some() || g.n() == 0,
        "g5-cograph": decompose(g, BaseClass::G5).is_some() || g.n() == 0,
    })
}

fn in_supported_class(g: &Graph) -> bool {
    g.n() == 0 || [BaseClass::TreeCograph, BaseClass::G5].iter().any(|&b| decompose(g, b).is_some())
}

fn recognize(g: &Graph) -> Value {
    let tree = [BaseClass::Cograph, BaseClass::TreeCograph, BaseClass::G5]
        .iter()
        .find_map(|&b| decompose(g, b).map(|d| json!({"base": b.name(), "tree": d.to_json()})));
    json!({ "classes": class_flags(g), "decomposition": tree })
}

fn qsym(g: &Graph, aut: &AutConfig) -> Result<Value, Failure> {
    let summary = symmetry_summary(g, aut)?;
    let witness = if g.n() <= aut.max_n {
        schmidt_bruteforce(g, aut)?
            .1
            .map(|(f, h)| json!([f.to_string(), h.to_string()]))
    } else {
        None
    };
    // Schmidt's criterion forces quantum symmetry; without it the answer is
    // only known inside the supported classes
    let quantum = if summary.satisfies_schmidt {
        true
    } else if in_supported_class(g) {
        false
    } else {
        return Err(Failure::Unsupported(
            "Schmidt's criterion fails and the graph is in no supported class".into(),
        ));
    };
    Ok(json!({
        "aut_order": summary.aut_order.to_string(),
        "schmidt": summary.satisfies_schmidt,
        "has_quantum_symmetry": quantum,
        "witness": witness,
    }))
}

fn qaut(g: &Graph) -> Result<Value, Failure> {
    let q = qu_expr(g)?;
    Ok(json!({
        "expr": q.to_string(),
        "json": q,
        "classical_order": q.classical_order().to_string(),
        "is_trivial": q.is_trivial(),
        "is_commutative": q.is_commutative(),
    }))
}

fn qiso(g: &Graph, h: &Graph) -> Result<Value, Failure> {
    if g.component_count() != h.component_count() {
        // the component projections of a quantum isomorphism form a square grid
        return Ok(json!({ "isomorphic": false, "quantum_isomorphic": false, "reason": "component counts differ" }));
    }
    if !fractionally_isomorphic(g, h) {
        // quantum isomorphic graphs are fractionally isomorphic
        return Ok(json!({ "isomorphic": false, "quantum_isomorphic": false, "reason": "not fractionally isomorphic" }));
    }
    let reason = if in_supported_class(g) && in_supported_class(h) {
        "both graphs in a supported class"
    } else if g.is_tree() || h.is_tree() {
        "trees are superrigid"
    } else {
        return Err(Failure::Unsupported(
            "fractionally isomorphic graphs outside the supported classes".into(),
        ));
    };
    let iso = iso_test(g, h)?;
    Ok(json!({ "isomorphic": iso, "quantum_isomorphic": iso, "reason": reason }))
}

fn verify(suite: &str, cfg: &VerifyConfig) -> Result<Value, Failure> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(Failure::Input(format!(
            "unknown suite {suite:?}; expected one of {} or all",
            SUITES.join(", ")
        )));
    };
    let outcomes: Vec<_> = names
        .iter()
        .map(|n| run_suite(n, cfg).expect("listed suite"))
        .collect();
    let value = json!({ "passed": outcomes.iter().all(|o| o.passed), "suites": outcomes });
    if outcomes.iter().all(|o| o.passed) {
        Ok(value)
    } else {
        Err(Failure::Verification(value))
    }
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let aut = AutConfig {
        max_n: cli.max_n,
        ..AutConfig::default()
    };
    let counts = CountConfig { budget: cli.budget };
    let (name, input, result) = match &cli.command {
        Command::Recognize { graph } => {
            let g = read_graph(graph)?;
            ("recognize", json!(write_graph6(&g)), recognize(&g))
        }
        Command::Qsym { graph } => {
            let g = read_graph(graph)?;
            ("qsym", json!(write_graph6(&g)), qsym(&g, &aut)?)
        }
        Command::Qaut { graph } => {
            let g = read_graph(graph)?;
            ("qaut", json!(write_graph6(&g)), qaut(&g)?)
        }
        Command::Qiso { first, second } => {
            let (g, h) = (read_graph(first)?, read_graph(second)?);
            ("qiso", json!([write_graph6(&g), write_graph6(&h)]), qiso(&g, &h)?)
        }
        Command::Hom { from, to } => {
            let (g, h) = (read_graph(from)?, read_graph(to)?);
            let c = hom_counts(&g, &h, &counts)?;
            ("hom", json!([write_graph6(&g), write_graph6(&h)]), json!(c))
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                seed: cli.seed,
                tol: cli.tol,
            };
            let result = verify(suite, &cfg).map_err(|e| match e {
                Failure::Verification(v) => Failure::Verification(
                    json!({ "command": "verify", "input": suite, "result": v }),
                ),
                other => other,
            })?;
            ("verify", json!(suite), result)
        }
    };
    Ok(json!({ "command": name, "input": input, "result": result }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(&cli);
    let with_timing = |mut v: Value| {
        if cli.timing {
            v["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
        }
        v
    };
    match outcome {
        Ok(v) => {
            println!("{}", with_timing(v));
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(v)) => {
            println!("{}", with_timing(v));
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("unsupported: {msg}");
            ExitCode::from(3)
        }
    }
}
