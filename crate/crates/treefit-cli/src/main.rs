use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use treefit::generate::{random_graph, random_tree, random_tree_with_leaf_degree};
use treefit::hardness::{
    generate_hardness_instance, generate_micro_instance, ThreePartitionInstance,
};
use treefit::io::{
    parse_certificate, parse_graph, parse_tree, write_certificate, write_graph, write_tree,
};
use treefit::seed::{child_seed, rng};
use treefit::{
    brute_force_contains, solve, verify_certificate, Config, Graph, Mode, SolveOutcome, Thresholds,
    Tree,
};

const EXIT_CONTAINS: u8 = 0;
const EXIT_NOT_CONTAINED: u8 = 1;
const EXIT_NOT_FOUND: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_INPUT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "treefit",
    version,
    about = "Certificate-producing tree containment solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the tree embeds into the graph.
    Solve(SolveArgs),
    /// Check a certificate against a graph and a tree.
    Verify(VerifyArgs),
    /// Write random or hardness instances.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Exhaustive backtracking, for small instances.
    Oracle(OracleArgs),
    /// Solve every instance under a directory and print a CSV table.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Budgeted,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdArg {
    Literal,
    Relaxed,
}

#[derive(Args)]
struct SolverOpts {
    #[arg(long, env = "TREEFIT_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    failure_exponent: u32,
    #[arg(long, value_enum, default_value = "budgeted")]
    mode: ModeArg,
    /// Node cap for budgeted mode.
    #[arg(long, default_value_t = 20_000_000)]
    budget_nodes: u64,
    #[arg(long, value_enum, default_value = "literal")]
    thresholds: ThresholdArg,
}

impl SolverOpts {
    fn config(&self, seed: u64) -> Config {
        Config {
            seed,
            failure_exponent: self.failure_exponent,
            node_cap: self.budget_nodes,
            mode: match self.mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Budgeted => Mode::Budgeted,
            },
            thresholds: match self.thresholds {
                ThresholdArg::Literal => Thresholds::Literal,
                ThresholdArg::Relaxed => Thresholds::Relaxed,
            },
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
    /// Where to write the certificate on CONTAINS.
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    cert: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, default_value_t = 20_000_000)]
    budget_nodes: u64,
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory whose subdirectories each hold `graph.txt` and `tree.txt`.
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Connected host with exact minimum degree plus a random tree.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long)]
        tree_size: usize,
        /// Bound on the tree's leaf-degree.
        #[arg(long)]
        max_leaf_degree: Option<usize>,
        #[arg(long, env = "TREEFIT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// The 3-Partition reduction. The instance file holds `B` on the first line and the sizes
    /// on the second.
    Hardness {
        #[arg(long)]
        instance: PathBuf,
        /// `p/q` or a decimal such as `0.5`.
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Ratio<u64>,
        /// Tiny test scale: relaxed size bounds and no pendant cliques.
        #[arg(long)]
        micro: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

/// A failure that maps to an exit code above 2.
struct Failure {
    code: u8,
    msg: String,
}

fn input_err(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        msg: format!("{}: {e}", path.display()),
    }
}

fn usage_err(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_err(path, e))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| input_err(path, e))
}

fn load_tree(path: &Path) -> Result<Tree, Failure> {
    parse_tree(&read(path)?).map_err(|e| input_err(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| input_err(path, e))
}

fn parse_epsilon(s: &str) -> Result<Ratio<u64>, String> {
    let bad = || format!("not a positive rational: {s:?}");
    let r = if let Some((p, q)) = s.split_once('/') {
        let (p, q): (u64, u64) = (
            p.trim().parse().map_err(|_| bad())?,
            q.trim().parse().map_err(|_| bad())?,
        );
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p, q)
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        let num: u64 = digits.parse().map_err(|_| bad())?;
        Ratio::new(num, 10u64.pow(frac.len() as u32))
    };
    if r == Ratio::from_integer(0) {
        return Err(bad());
    }
    Ok(r)
}

fn outcome_line(out: &SolveOutcome) -> String {
    match out {
        SolveOutcome::Contains { .. } => "CONTAINS".into(),
        SolveOutcome::NotContained { .. } => "NOT_CONTAINED".into(),
        SolveOutcome::NotFound { rounds, seed, .. } => {
            format!("NOT_FOUND rounds={rounds} seed={seed}")
        }
    }
}

fn exit_for(out: &SolveOutcome) -> u8 {
    match out {
        SolveOutcome::Contains { .. } => EXIT_CONTAINS,
        SolveOutcome::NotContained { .. } => EXIT_NOT_CONTAINED,
        SolveOutcome::NotFound { .. } => EXIT_NOT_FOUND,
    }
}

fn detail(out: &SolveOutcome) -> String {
    match out {
        SolveOutcome::Contains { branch, .. } => format!("branch={branch}"),
        SolveOutcome::NotContained { reason } => format!("reason={reason}"),
        SolveOutcome::NotFound {
            failure_exponent,
            reason,
            ..
        } => {
            format!("reason={reason} failure_exponent={failure_exponent}")
        }
    }
}

fn report(out: &SolveOutcome, cert_out: Option<&Path>) -> Result<u8, Failure> {
    println!("{}", outcome_line(out));
    eprintln!("{}", detail(out));
    if let (Some(path), Some(e)) = (cert_out, out.embedding()) {
        write(path, &write_certificate(e))?;
    }
    Ok(exit_for(out))
}

fn cmd_solve(a: &SolveArgs) -> Result<u8, Failure> {
    let g = load_graph(&a.graph)?;
    let t = load_tree(&a.tree)?;
    let out = solve(&g, &t, &a.opts.config(a.opts.seed));
    report(&out, a.cert_out.as_deref())
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8, Failure> {
    let g = load_graph(&a.graph)?;
    let t = load_tree(&a.tree)?;
    let e = parse_certificate(&read(&a.cert)?, t.n(), g.n())
        .map_err(|e| usage_err(format!("{}: {e}", a.cert.display())))?;
    if verify_certificate(&g, &t, &e) {
        println!("VALID");
        Ok(0)
    } else {
        println!("INVALID");
        Ok(1)
    }
}

fn cmd_oracle(a: &OracleArgs) -> Result<u8, Failure> {
    let g = load_graph(&a.graph)?;
    let t = load_tree(&a.tree)?;
    match brute_force_contains(&g, &t, a.budget_nodes) {
        Ok(out) => report(&out, a.cert_out.as_deref()),
        Err(e) => {
            println!("NOT_FOUND rounds=0 seed=0");
            eprintln!("reason={e}");
            Ok(EXIT_NOT_FOUND)
        }
    }
}

fn parse_three_partition(text: &str, micro: bool) -> Result<ThreePartitionInstance, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let b: u64 = lines
        .next()
        .ok_or("line 1: missing B")?
        .parse()
        .map_err(|_| "line 1: B is not a positive integer".to_string())?;
    let sizes = lines
        .next()
        .ok_or("line 2: missing sizes")?
        .split_whitespace()
        .map(|f| {
            f.parse::<u64>()
                .map_err(|_| format!("line 2: not an integer: {f:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if lines.next().is_some() {
        return Err("trailing content after line 2".into());
    }
    let inst = if micro {
        ThreePartitionInstance::new_micro(b, sizes)
    } else {
        ThreePartitionInstance::new(b, sizes)
    };
    inst.map_err(|e| e.to_string())
}

fn cmd_generate(c: &GenerateCommand) -> Result<u8, Failure> {
    match c {
        GenerateCommand::Random {
            n,
            delta,
            tree_size,
            max_leaf_degree,
            seed,
            out_dir,
        } => {
            if *tree_size == 0 || tree_size > n {
                return Err(usage_err(format!("tree size must lie in 1..={n}")));
            }
            if *max_leaf_degree == Some(0) || (*max_leaf_degree == Some(1) && *tree_size == 3) {
                return Err(usage_err(
                    "no tree of that size meets the leaf-degree bound",
                ));
            }
            let g = random_graph(*n, *delta, &mut rng(child_seed(*seed, 0)))
                .map_err(|e| usage_err(e.to_string()))?;
            let mut r = rng(child_seed(*seed, 1));
            let t = match max_leaf_degree {
                Some(ld) => random_tree_with_leaf_degree(*tree_size, *ld, &mut r),
                None => random_tree(*tree_size, &mut r),
            };
            fs::create_dir_all(out_dir).map_err(|e| input_err(out_dir, e))?;
            write(&out_dir.join("graph.txt"), &write_graph(&g))?;
            write(&out_dir.join("tree.txt"), &write_tree(&t))?;
            eprintln!("n={} delta={} tree_size={}", g.n(), g.delta(), t.n());
        }
        GenerateCommand::Hardness {
            instance,
            epsilon,
            micro,
            out_dir,
        } => {
            let inst = parse_three_partition(&read(instance)?, *micro)
                .map_err(|e| input_err(instance, e))?;
            let out = if *micro {
                generate_micro_instance(&inst, *epsilon)
            } else {
                generate_hardness_instance(&inst, *epsilon)
            }
            .map_err(|e| usage_err(e.to_string()))?;
            fs::create_dir_all(out_dir).map_err(|e| input_err(out_dir, e))?;
            write(&out_dir.join("graph.txt"), &write_graph(&out.g))?;
            write(&out_dir.join("tree.txt"), &write_tree(&out.t))?;
            write(&out_dir.join("landmarks.jsonl"), &out.sidecar_jsonl())?;
            eprintln!(
                "delta={} Delta={} tree_size={} graph_size={}",
                out.delta,
                out.big_delta,
                out.t.n(),
                out.g.n()
            );
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct BenchRow {
    instance: String,
    outcome: String,
    branch: String,
    ms: u128,
    rounds: String,
    error: String,
}

fn bench_one(dir: &Path, config: Config) -> BenchRow {
    let instance = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut row = BenchRow {
        instance,
        outcome: String::new(),
        branch: String::new(),
        ms: 0,
        rounds: String::new(),
        error: String::new(),
    };
    let loaded =
        load_graph(&dir.join("graph.txt")).and_then(|g| Ok((g, load_tree(&dir.join("tree.txt"))?)));
    let (g, t) = match loaded {
        Ok(pair) => pair,
        Err(f) => {
            row.outcome = "ERROR".into();
            row.error = f.msg;
            return row;
        }
    };
    let start = Instant::now();
    let out = solve(&g, &t, &config);
    row.ms = start.elapsed().as_millis();
    match &out {
        SolveOutcome::Contains { branch, .. } => {
            row.outcome = "CONTAINS".into();
            row.branch = branch.to_string();
        }
        SolveOutcome::NotContained { reason } => {
            row.outcome = "NOT_CONTAINED".into();
            row.branch = reason.to_string();
        }
        SolveOutcome::NotFound { rounds, reason, .. } => {
            row.outcome = "NOT_FOUND".into();
            row.branch = reason.to_string();
            row.rounds = rounds.to_string();
        }
    }
    row
}

fn cmd_bench(a: &BenchArgs) -> Result<u8, Failure> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(&a.dir)
        .map_err(|e| input_err(&a.dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    // Instance i (in sorted name order) gets child seed i of the master seed.
    let rows: Vec<BenchRow> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, d)| bench_one(d, a.opts.config(child_seed(a.opts.seed, i as u64))))
        .collect();
    let mut w = csv::Writer::from_writer(std::io::stdout());
    if rows.is_empty() {
        w.write_record(["instance", "outcome", "branch", "ms", "rounds", "error"])
            .map_err(|e| usage_err(e.to_string()))?;
    }
    for row in &rows {
        w.serialize(row).map_err(|e| usage_err(e.to_string()))?;
    }
    w.flush().map_err(|e| usage_err(e.to_string()))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(c) => cmd_generate(c),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_forms() {
        assert_eq!(parse_epsilon("1"), Ok(Ratio::from_integer(1)));
        assert_eq!(parse_epsilon("3/6"), Ok(Ratio::new(1, 2)));
        assert_eq!(parse_epsilon("0.125"), Ok(Ratio::new(1, 8)));
        assert_eq!(parse_epsilon(".5"), Ok(Ratio::new(1, 2)));
        assert!(parse_epsilon("0").is_err());
        assert!(parse_epsilon("1/0").is_err());
        assert!(parse_epsilon("x").is_err());
    }

    #[test]
    fn three_partition_file() {
        let inst = parse_three_partition("9\n3 3 3\n", false).unwrap();
        assert_eq!((inst.n(), inst.m()), (1, 3));
        assert!(parse_three_partition("9\n", false).is_err());
        assert!(parse_three_partition("9\n1 4 4\n", false).is_err());
    }
}
