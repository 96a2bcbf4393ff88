use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use interval_explore::experiments::{
    explore_grid, read_text, replay_dir, run_attack, run_succeeded, save_grid, write_atomic, Algo,
    Attack, AttackSpec, ExperimentError, ExploreSpec,
};
use interval_explore::graph::{verify_interval_connectivity, ConnectivityVerdict, ScheduleDoc};
use interval_explore::sim::{Model, SimError};

#[derive(Parser)]
#[command(
    name = "interval-explore",
    version,
    about = "Explore T-interval-connected dynamic graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random interval-connected instance.
    Gen(GenArgs),
    /// Run an explorer over a grid of generated instances.
    Explore(ExploreArgs),
    /// Run an explorer against an adaptive adversary.
    Adversary(AdversaryArgs),
    /// Check a stored schedule for T-interval connectivity.
    Verify(VerifyArgs),
    /// Re-run a saved grid and compare with its stored outputs.
    Replay(ReplayArgs),
    /// Time both greedy explorers on a grid.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Window size; defaults to tau(n, m, c).
    #[arg(long = "T")]
    t: Option<u64>,
    #[arg(long, default_value_t = 16)]
    c: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    horizon: Option<u64>,
    /// Probability that an unprotected edge drops out in a block.
    #[arg(long, default_value_t = 0.3)]
    churn: f64,
    /// Rotate the protected spanning tree every window.
    #[arg(long)]
    hard: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExploreArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = Algo::Ge1)]
    algo: Algo,
    /// Defaults to kt1 for ge1 and kt0 otherwise.
    #[arg(long, value_enum)]
    model: Option<Model>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Defaults to 4 * tau.
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long, value_enum)]
    attack: Attack,
    /// Number of nodes (gadget size for `clique`).
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 1.0 / 32.0)]
    cprime: f64,
    #[arg(long, value_enum, default_value_t = Algo::Ge1)]
    algo: Algo,
    #[arg(long, value_enum)]
    model: Option<Model>,
    #[arg(long, default_value_t = 16)]
    c: u64,
    #[arg(long, default_value_t = 50_000)]
    max_steps: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    path: PathBuf,
    /// Window to check; defaults to the file's claimed_T.
    #[arg(long = "T")]
    t: Option<u64>,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 16)]
    c: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0.3)]
    churn: f64,
    /// Optional CSV output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit statuses: 0 success, 1 claim violated, 2 usage or parse error.
enum Failure {
    Violated(String),
    Usage(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Potential(_)
            | ExperimentError::Sim(SimError::ProtocolViolation { .. }) => {
                Failure::Violated(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn explore_spec(a: &InstanceArgs, algo: Algo, model: Option<Model>) -> ExploreSpec {
    ExploreSpec {
        n: a.n,
        m: a.m,
        t: a.t,
        c: a.c,
        seed: a.seed,
        reps: 1,
        algo,
        model: model.unwrap_or(algo.default_model()),
        max_steps: None,
        horizon: a.horizon,
        churn: a.churn,
        hard: a.hard,
    }
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let spec = explore_spec(&args.instance, Algo::Ge1, None);
    let schedule = spec.instance(0)?;
    let json = ScheduleDoc::from_schedule(&schedule).to_json();
    match args.out {
        Some(path) => write_atomic(&path, json.as_bytes())?,
        None => println!("{json}"),
    }
    Ok(())
}

fn cmd_explore(args: ExploreArgs) -> Result<(), Failure> {
    let mut spec = explore_spec(&args.instance, args.algo, args.model);
    spec.reps = args.reps;
    spec.max_steps = args.max_steps;
    let runs = explore_grid(&spec, args.jobs)?;
    save_grid(&args.out, &spec, &runs)?;
    let failed: Vec<usize> = runs
        .iter()
        .filter(|r| !run_succeeded(&r.row))
        .map(|r| r.row.run)
        .collect();
    println!(
        "{} runs, {} explored, summary in {}",
        runs.len(),
        runs.len() - failed.len(),
        args.out.display()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violated(format!("unexplored runs: {failed:?}")))
    }
}

fn cmd_adversary(args: AdversaryArgs) -> Result<(), Failure> {
    let spec = AttackSpec {
        attack: args.attack,
        n: args.n,
        m: args.m,
        c_prime: args.cprime,
        algo: args.algo,
        model: args.model.unwrap_or(args.algo.default_model()),
        c: args.c,
        max_steps: args.max_steps,
    };
    let outcome = run_attack(&spec)?;
    let verdict = serde_json::to_string(&outcome.verdict).expect("serializable");
    write_atomic(
        &args.out.join("schedule.json"),
        outcome.dump().to_json().as_bytes(),
    )?;
    write_atomic(
        &args.out.join("trace.jsonl"),
        outcome.trace.to_jsonl().as_bytes(),
    )?;
    write_atomic(&args.out.join("verdict.json"), verdict.as_bytes())?;
    println!("{verdict}");
    if outcome.verdict.holds() {
        Ok(())
    } else {
        Err(Failure::Violated("adversary claim violated".into()))
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let text = read_text(&args.path)?;
    let doc = ScheduleDoc::from_json(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.path.display())))?;
    let schedule = doc
        .to_schedule()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let t = args
        .t
        .or(doc.claimed_t)
        .ok_or_else(|| Failure::Usage("no --T given and no claimed_T in the file".into()))?;
    match verify_interval_connectivity(&schedule, t).map_err(|e| Failure::Usage(e.to_string()))? {
        ConnectivityVerdict::Connected => {
            println!("ok");
            Ok(())
        }
        ConnectivityVerdict::Violated { from, to } => Err(Failure::Violated(format!(
            "violation at window [{from}..{to}]"
        ))),
    }
}

fn cmd_replay(args: ReplayArgs) -> Result<(), Failure> {
    let mismatches = replay_dir(&args.out)?;
    if mismatches.is_empty() {
        println!("ok");
        return Ok(());
    }
    for m in &mismatches {
        println!("run {}: {}", m.run, m.what);
    }
    Err(Failure::Violated(format!(
        "{} mismatches",
        mismatches.len()
    )))
}

#[derive(Serialize)]
struct BenchRow {
    algo: String,
    n: usize,
    m: usize,
    reps: usize,
    explored: usize,
    mean_steps: f64,
    max_bound_ratio: f64,
    millis: u128,
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let mut rows = Vec::new();
    for algo in [Algo::Ge1, Algo::Ge0] {
        let mut spec = ExploreSpec::new(args.n, args.m, algo);
        spec.c = args.c;
        spec.seed = args.seed;
        spec.reps = args.reps;
        spec.churn = args.churn;
        let start = Instant::now();
        let runs = explore_grid(&spec, args.jobs)?;
        let millis = start.elapsed().as_millis();
        let steps: Vec<f64> = runs.iter().map(|r| r.row.steps as f64).collect();
        rows.push(BenchRow {
            algo: algo.to_string(),
            n: args.n,
            m: args.m,
            reps: runs.len(),
            explored: runs.iter().filter(|r| run_succeeded(&r.row)).count(),
            mean_steps: steps.iter().sum::<f64>() / steps.len() as f64,
            max_bound_ratio: runs.iter().map(|r| r.row.bound_ratio).fold(0.0, f64::max),
            millis,
        });
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row)
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    print!("{}", String::from_utf8_lossy(&bytes));
    if let Some(path) = args.out {
        write_atomic(Path::new(&path), &bytes)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Explore(a) => cmd_explore(a),
        Command::Adversary(a) => cmd_adversary(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Replay(a) => cmd_replay(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
