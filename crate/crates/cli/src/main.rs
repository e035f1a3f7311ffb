use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgGroup, Args, Parser, Subcommand};
use kserver_cli::{
    bench_repeated, emit_instance, generate_instance, parse_instance, random_instances, run,
    trace_from_env, verify_instance, write_csv, FastSolver, Instance, NaiveSolver, Shape, Solver,
};
use kserver_core::oracle::{offline_opt, OPT_MAX_NODES, OPT_MAX_QUERIES, OPT_MAX_SERVERS};
use kserver_core::NodeId;

/// Online k-server on trees.
#[derive(Parser)]
#[command(name = "kserver", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve every query of FILE and print per-query costs.
    Solve {
        /// Use the phase-by-phase simulation instead of the fast engine.
        #[arg(long)]
        naive: bool,
        file: PathBuf,
    },
    /// Compare the fast engine against the simulation.
    Verify(VerifyArgs),
    /// Emit visit counters and timings as CSV.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Shape::Random)]
        shape: Shape,
        /// Preprocess this many times and report the fastest.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Write to PATH instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact offline optimum of a tiny instance next to the online cost.
    Opt { file: PathBuf },
    /// Print a random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Shape::Random)]
        shape: Shape,
    },
}

#[derive(Args)]
#[group(skip)]
#[command(group(ArgGroup::new("source").required(true).args(["file", "random"])))]
struct VerifyArgs {
    #[arg(long)]
    file: Option<PathBuf>,
    /// N K Q COUNT: COUNT instances with n <= N, k <= K and Q queries.
    #[arg(long, num_args = 4, value_names = ["N", "K", "Q", "COUNT"], requires = "seed")]
    random: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let instances: Vec<Instance> = match (args.file, args.random) {
        (Some(path), _) => vec![read_instance(&path)?],
        (None, Some(r)) => {
            let seed = args.seed.context("--random needs --seed")?;
            random_instances(r[0], r[1], r[2], r[3], seed).collect::<Result<_, _>>()?
        }
        (None, None) => bail!("pass --file or --random"),
    };
    for (i, inst) in instances.iter().enumerate() {
        if let Some(d) = verify_instance(inst)? {
            print(&format!(
                "FAIL instance {}/{}\n{d}instance:\n{}",
                i + 1,
                instances.len(),
                emit_instance(inst)
            ))?;
            return Ok(ExitCode::from(1));
        }
    }
    print(&format!("ok {} instances\n", instances.len()))?;
    Ok(ExitCode::SUCCESS)
}

fn opt(path: &Path) -> anyhow::Result<()> {
    let inst = read_instance(path)?;
    let tree = inst.validate()?;
    let node = |v: u32| tree.node(v);
    let initial: Vec<NodeId> = inst
        .initial
        .iter()
        .map(|&v| node(v))
        .collect::<Result<_, _>>()?;
    let queries: Vec<NodeId> = inst
        .queries
        .iter()
        .map(|&v| node(v))
        .collect::<Result<_, _>>()?;
    let best = offline_opt(&tree, &initial, &queries).with_context(|| {
        format!("opt handles n <= {OPT_MAX_NODES}, k <= {OPT_MAX_SERVERS}, at most {OPT_MAX_QUERIES} queries")
    })?;
    let online = run(&mut FastSolver::new(&inst, false)?, &inst.queries)?.total_cost;
    print(&format!("opt={best}\nonline={online}\n"))
}

fn main_inner(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Solve { naive, file } => {
            let trace = trace_from_env()?;
            let inst = read_instance(&file)?;
            let mut solver: Box<dyn Solver> = if naive {
                Box::new(NaiveSolver::new(&inst, trace)?)
            } else {
                Box::new(FastSolver::new(&inst, trace)?)
            };
            print(&run(solver.as_mut(), &inst.queries)?.to_string())?;
        }
        Command::Verify(args) => return verify(args),
        Command::Bench {
            n,
            k,
            q,
            seed,
            shape,
            repeat,
            csv,
        } => {
            let row = bench_repeated(&generate_instance(n, k, q, seed, shape)?, repeat)?;
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&[row], file)?;
                }
                None => write_csv(&[row], io::stdout().lock())?,
            }
        }
        Command::Opt { file } => opt(&file)?,
        Command::Gen {
            n,
            k,
            q,
            seed,
            shape,
        } => {
            print(&emit_instance(&generate_instance(n, k, q, seed, shape)?))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match main_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
