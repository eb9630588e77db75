//! The `cosec` command line.
//!
//! Exit codes: 0 success, 1 I/O error, 2 usage or parse error, 3 verification
//! mismatch, 4 oracle budget exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::annotate::{annotate, NodeReport};
use crate::bench::bench;
use crate::cotree::{parse_cotree, Cotree};
use crate::generators::{g_k, GkSpec, MAX_ENUMERATION_LEAVES};
use crate::oracles::{OracleBudget, OracleError};
use crate::verify::{check_instance, verify, Mismatch, VerifyConfig, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Overrides the default oracle budget: `D` or `D,S`.
pub const BUDGET_ENV: &str = "COSEC_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "cosec",
    version,
    about = "Cotree annotation, property-P checks and oracle cross-validation for cographs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a .cotree file and print it back
    Parse(ParseArgs),
    /// Print per-node annotations of a cotree
    Annotate(AnnotateArgs),
    /// Write the cotree of the counterexample graph G_k
    Gk(GkArgs),
    /// Cross-check annotations against the oracles over a corpus
    Verify(VerifyArgs),
    /// Time the annotation pass on random cotrees
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct ParseArgs {
    file: PathBuf,
    #[arg(long)]
    normalize: bool,
    #[arg(long, conflicts_with = "json")]
    dot: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct AnnotateArgs {
    file: PathBuf,
    #[arg(long)]
    json: bool,
    /// Recompute every annotation with the exponential oracles
    #[arg(long)]
    oracle_check: bool,
    /// Vertex cap for the oracles
    #[arg(long, value_name = "N")]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct GkArgs {
    k: u64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Enumerate all cotrees with up to N leaves (0 skips)
    #[arg(long, value_name = "N", default_value_t = 8)]
    max_n: usize,
    /// Number of random cotrees
    #[arg(long, value_name = "COUNT", default_value_t = 0)]
    random: usize,
    /// Upper bound on random cotree leaf counts
    #[arg(long, value_name = "L", default_value_t = 12)]
    leaves: usize,
    #[arg(long, value_name = "S", default_value_t = 1)]
    seed: u64,
    /// Vertex cap for the oracles
    #[arg(long, value_name = "B")]
    budget: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated leaf counts
    #[arg(long, value_delimiter = ',', default_value = "100000,1000000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(EXIT_IO, format!("I/O error: {e}"))
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => Failure::new(EXIT_BUDGET, e.to_string()),
            _ => Failure::new(EXIT_USAGE, e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Oracle(o) => o.into(),
            VerifyError::Generator(g) => Failure::new(EXIT_USAGE, g.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

/// Entry point for the binary: real arguments, environment and stdio.
pub fn run_env() -> i32 {
    let env_budget = std::env::var(BUDGET_ENV).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(
        std::env::args_os(),
        env_budget.as_deref(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    )
}

/// Runs one command line and returns its exit code. `env_budget` stands in
/// for the `COSEC_BUDGET` variable.
pub fn run<I, T>(args: I, env_budget: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Parse(a) => cmd_parse(a, out),
        Command::Annotate(a) => cmd_annotate(a, env_budget, out),
        Command::Gk(a) => cmd_gk(a, out),
        Command::Verify(a) => cmd_verify(a, env_budget, out, err),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn resolve_budget(flag: Option<usize>, env: Option<&str>) -> Result<OracleBudget, Failure> {
    let budget = match (flag, env) {
        (Some(n), _) => OracleBudget::uniform(n),
        (None, Some(text)) => OracleBudget::parse(text),
        (None, None) => Ok(OracleBudget::default()),
    };
    budget.map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))
}

fn read_cotree(path: &PathBuf) -> Result<Cotree, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    parse_cotree(&text).map_err(|e| Failure::new(EXIT_USAGE, format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct TreeJson<'a> {
    cotree: String,
    root: usize,
    nodes: Vec<TreeNodeJson<'a>>,
}

#[derive(Serialize)]
struct TreeNodeJson<'a> {
    id: usize,
    kind: &'static str,
    label: Option<&'a str>,
    children: Vec<usize>,
}

fn tree_json(t: &Cotree) -> TreeJson<'_> {
    TreeJson {
        cotree: t.to_string(),
        root: t.root().0,
        nodes: t
            .ids()
            .map(|id| {
                let node = t.node(id);
                TreeNodeJson {
                    id: id.0,
                    kind: match node.kind() {
                        None => "leaf",
                        Some(crate::Kind::Union) => "union",
                        Some(crate::Kind::Join) => "join",
                    },
                    label: node.label(),
                    children: node.children().iter().map(|c| c.0).collect(),
                }
            })
            .collect(),
    }
}

fn cmd_parse(a: ParseArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut tree = read_cotree(&a.file)?;
    if a.normalize {
        tree = tree.normalize();
    }
    if a.dot {
        write!(out, "{}", tree.to_dot())?;
    } else if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&tree_json(&tree))?)?;
    } else {
        writeln!(out, "{tree}")?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct AnnotateJson {
    cotree: String,
    nodes: Vec<NodeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_mismatches: Option<Vec<Mismatch>>,
}

fn show(v: Option<bool>) -> &'static str {
    match v {
        None => "-",
        Some(true) => "yes",
        Some(false) => "no",
    }
}

fn cmd_annotate(
    a: AnnotateArgs,
    env_budget: Option<&str>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let budget = resolve_budget(a.budget, env_budget)?;
    let tree = read_cotree(&a.file)?.normalize();
    let ann = annotate(&tree).expect("normalized");
    let mismatches = if a.oracle_check {
        Some(check_instance(&tree, &budget)?.mismatches)
    } else {
        None
    };
    let failed = mismatches.as_ref().is_some_and(|m| !m.is_empty());

    if a.json {
        let doc = AnnotateJson {
            cotree: tree.to_string(),
            nodes: ann.report(),
            oracle_mismatches: mismatches,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        writeln!(out, "{tree}")?;
        writeln!(
            out,
            "{:>4} {:<5} {:>5} {:>6} {:>5} {:>7} {:>11} {:>10} {:>11}  leaves",
            "id",
            "kind",
            "size",
            "clique",
            "gamma",
            "label_r",
            "two_cliques",
            "p_original",
            "p_corrected"
        )?;
        for row in ann.report() {
            writeln!(
                out,
                "{:>4} {:<5} {:>5} {:>6} {:>5} {:>7} {:>11} {:>10} {:>11}  {}",
                row.id,
                row.kind,
                row.size,
                if row.is_clique { "yes" } else { "no" },
                row.gamma,
                show(row.label_r),
                show(row.union_of_two_cliques),
                show(row.p_original),
                show(row.p_corrected),
                tree.leaf_path(crate::NodeId(row.id)),
            )?;
        }
        if let Some(m) = &mismatches {
            writeln!(out, "oracle check: {} mismatches", m.len())?;
            for x in m {
                writeln!(
                    out,
                    "  {:?} at #{} [{}]: expected {}, got {}",
                    x.check, x.node, x.path, x.expected, x.got
                )?;
            }
        }
    }
    Ok(if failed { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_gk(a: GkArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let k = usize::try_from(a.k).map_err(|_| Failure::new(EXIT_USAGE, "k is too large"))?;
    let spec = GkSpec::new(k).map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
    let text = format!("{}\n", g_k(spec));
    match a.out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(
    a: VerifyArgs,
    env_budget: Option<&str>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if a.max_n > MAX_ENUMERATION_LEAVES {
        return Err(Failure::new(
            EXIT_USAGE,
            format!("--max-n must be at most {MAX_ENUMERATION_LEAVES}"),
        ));
    }
    if a.random > 0 && a.leaves == 0 {
        return Err(Failure::new(EXIT_USAGE, "--leaves must be positive"));
    }
    let config = VerifyConfig {
        max_n: a.max_n,
        random_count: a.random,
        random_leaves: a.leaves,
        seed: a.seed,
        budget: resolve_budget(a.budget, env_budget)?,
    };
    let report = verify(&config)?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        write!(out, "{report}")?;
    }
    writeln!(err, "elapsed: {} ms", report.elapsed_ms)?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    })
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.sizes.is_empty() || a.sizes.contains(&0) {
        return Err(Failure::new(EXIT_USAGE, "sizes must be positive"));
    }
    if a.repeats == 0 {
        return Err(Failure::new(EXIT_USAGE, "--repeats must be positive"));
    }
    let rows = bench(&a.sizes, a.seed, a.repeats);
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
    } else {
        writeln!(
            out,
            "{:>10} {:>10} {:>12} {:>10}",
            "size", "nodes", "median_ms", "ns/node"
        )?;
        for r in &rows {
            writeln!(
                out,
                "{:>10} {:>10} {:>12.3} {:>10.1}",
                r.size, r.nodes, r.median_ms, r.ns_per_node
            )?;
        }
    }
    Ok(EXIT_OK)
}
