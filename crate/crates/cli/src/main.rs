mod commands;
mod json;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bornbox", version, about = "Born-rule estimators, samplers and verification harnesses")]
struct Cli {
    /// Global seed; every random stream is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the probability of an outcome pattern with the family's estimator.
    Estimate(EstimateArgs),
    /// Draw samples through one of the estimator-to-sampler converters.
    Sample(SampleArgs),
    /// Exact probability of a pattern, or the whole distribution.
    Oracle(OracleArgs),
    /// Run an experiment harness.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Run the fast self-checks.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Pattern over {0,1,*}.
    #[arg(long)]
    pub pattern: String,
    #[arg(long, default_value_t = 0.05)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Expected family; checked against the file when given.
    #[arg(long)]
    pub family: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Sparse,
    Cdf,
    Chain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EstimatorKind {
    /// The family's own estimator.
    Native,
    /// Exact oracle marginals.
    Exact,
    /// Oracle marginals with bounded additive noise.
    Noisy,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value = "sparse")]
    pub method: Method,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// Estimator behind the sampler. `native` is faithful but slow at small eps.
    #[arg(long, value_enum)]
    pub estimator: Option<EstimatorKind>,
    /// Sparse sampler: overall L1 budget eps'.
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    /// Sparse sampler: sparsity bound t (a constant sparsity polynomial).
    #[arg(long, default_value_t = 4)]
    pub t: usize,
    /// CDF sampler: bits of the uniform draw.
    #[arg(long, default_value_t = 40)]
    pub m: u32,
    /// CDF and chain samplers: precision of each estimator query.
    #[arg(long, default_value_t = 0.01)]
    pub query_eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub query_delta: f64,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Pattern over {0,1,*}; without it the full distribution is printed.
    #[arg(long)]
    pub pattern: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Experiment {
    /// Outcome-probability statistics under uniformly random Cliffords.
    Anticoncentration(AntiArgs),
    /// Minimal approximate sparsity over a grid of eps.
    Sparsity(SparsityArgs),
    /// Referee game between Alice (exact) and Bob.
    Distinguish(DistinguishArgs),
}

#[derive(Args, Debug)]
pub struct AntiArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    pub alphas: Vec<f64>,
    /// Use a seeded random pure product input instead of |0...0>.
    #[arg(long)]
    pub random_input: bool,
}

#[derive(Args, Debug)]
pub struct SparsityArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.2,0.5,1")]
    pub eps_grid: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BobKind {
    Exact,
    Scheduled,
    Corrupted,
}

#[derive(Args, Debug)]
pub struct DistinguishArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value = "scheduled")]
    pub bob: BobKind,
    /// L1 distance of the corrupted Bob.
    #[arg(long, default_value_t = 0.4)]
    pub l1: f64,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub rounds: u64,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Swap in a corrupted Bob; the indistinguishability check should fail.
    #[arg(long)]
    pub inject_corrupted_bob: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let lines = match commands::run(&cli.command, cli.seed) {
        Ok(lines) => lines,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(commands::exit_status(&e));
        }
    };
    let mut text = String::new();
    for line in &lines {
        text.push_str(&json::to_line(line));
        text.push('\n');
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
