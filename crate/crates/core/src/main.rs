use std::fs;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use hyperglass::cli::{
    export_csv, gen_instance, read_ledger, run, solve_instance, InstanceKind, InstanceParams, KernelName, RunConfig,
    SolveOptions,
};
use hyperglass::solvers::{ConstraintSet, Schedule, SolverChoice};

#[derive(Parser)]
#[command(name = "hyperglass", version, about = "Sparse hypergraph optimization experiments")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "HYPERGLASS_THREADS")]
    threads: Option<usize>,
    /// Root seed; overrides the one in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output path (ledger for `run`, CSV for `export`, instance for `gen-instance`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and append one record per cell to the ledger.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Flatten a ledger to CSV.
    Export {
        ledger: PathBuf,
        /// Keep only records of this experiment.
        #[arg(long)]
        experiment: Option<String>,
    },
    /// Sample an instance and write its canonical text form.
    GenInstance {
        /// er, regular, poisson, sbm or xorsat.
        #[arg(long)]
        kind: InstanceKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
    },
    /// Maximize the Hamiltonian of an instance file.
    Solve {
        instance: PathBuf,
        /// cut, xor or indicator (ignored for XORSAT files).
        #[arg(long, default_value = "cut")]
        kernel: String,
        #[arg(long, default_value_t = 2)]
        q: usize,
        #[arg(long)]
        balanced: bool,
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 20_000)]
        sweeps: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
    },
    /// Print the version.
    Version,
}

fn write_out(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    hyperglass::par::init_threads(cli.threads).map_err(anyhow::Error::msg)?;
    match cli.command {
        Command::Run { config } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = RunConfig::from_json(&text).context("invalid config")?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            let Some(ledger) = cli.out.clone().or_else(|| cfg.ledger.clone()) else {
                bail!("no ledger path: pass --out or set `ledger` in the config");
            };
            let (records, ok) = run(&cfg, &ledger)?;
            let failed = records.iter().filter(|r| r.error.is_some()).count();
            eprintln!("{} cells, {failed} failed, ledger {}", records.len(), ledger.display());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Export { ledger, experiment } => {
            let records = read_ledger(&ledger)?;
            match &cli.out {
                Some(p) => {
                    let f = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    export_csv(&records, experiment.as_deref(), f)?;
                }
                None => {
                    export_csv(&records, experiment.as_deref(), io::stdout().lock())?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::GenInstance { kind, n, p, d, xi } => {
            let text = gen_instance(kind, &InstanceParams { n, p, d, xi }, cli.seed.unwrap_or(0))?;
            write_out(&cli.out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { instance, kernel, q, balanced, exact, sweeps, restarts } => {
            let kernel: KernelName = serde_json::from_value(serde_json::Value::String(kernel.clone()))
                .with_context(|| format!("unknown kernel `{kernel}`"))?;
            let opts = SolveOptions {
                kernel,
                q,
                constraint: if balanced { ConstraintSet::BalancedBisection } else { ConstraintSet::All },
                solver: if exact { SolverChoice::Exact } else { SolverChoice::Anneal(Schedule::with_budget(sweeps, restarts)) },
                seed: cli.seed.unwrap_or(0),
            };
            let report = solve_instance(&instance, &opts)?;
            write_out(&cli.out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Version => {
            println!("hyperglass {}", env!("CARGO_PKG_VERSION"));
            Ok(ExitCode::SUCCESS)
        }
    }
}
