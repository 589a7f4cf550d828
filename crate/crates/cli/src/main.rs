//! `perr`: solve, validate and benchmark exchange-routing instances.
//!
//! Exit status 0 on success, 1 on bad arguments, unreadable input or an
//! invalid plan, 2 when a solver fails. `PERR_TEST_MODE=1` turns on the
//! solvers' internal bound checks.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};
use perr_core::bench::{
    bench_cycle, bench_grid, bench_linear, bench_square, solve, summarize, to_csv, Algo, BenchOptions,
    BenchRecord, SolveError, SolveOptions,
};
use perr_core::instance::load_instance;
use perr_core::optimal::DEFAULT_STATE_BUDGET;
use perr_core::{validate_plan, Instance, Plan};

#[derive(Parser)]
#[command(name = "perr", version, about = "Exchange-permitting multi-robot routing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one map/scenario pair and write the plan CSV.
    Solve {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value = "rip")]
        algo: Algo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plan CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// State budget for the exhaustive oracle.
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    /// Dense permutations on linear arrays.
    BenchLinear {
        #[arg(long)]
        max_n: usize,
        /// Only run lengths that are multiples of this.
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Dense permutations on square grids.
    BenchSquare {
        #[arg(long)]
        max_side: usize,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Random-obstacle grids over densities and robot counts.
    BenchGrid {
        #[arg(long, default_value_t = 20)]
        width: usize,
        #[arg(long, default_value_t = 15)]
        height: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3")]
        densities: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
        ks: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// The cycle counterexample family.
    BenchCycle {
        #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
        ns: Vec<usize>,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Check a plan CSV against a map/scenario pair.
    Validate {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Optimal makespan by exhaustive search.
    Oracle {
        #[command(flatten)]
        input: InstanceArgs,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    scen: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "rip")]
    algo: Vec<Algo>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-size summary CSV; a readable summary goes to stderr otherwise.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Fill the runtime_ms column (makes the CSV nondeterministic).
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Input(String),
    Solver(String),
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Generate(e) => Failure::Input(e.to_string()),
            e => Failure::Solver(e.to_string()),
        }
    }
}

fn test_mode() -> bool {
    std::env::var("PERR_TEST_MODE").is_ok_and(|v| v == "1")
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(input: &InstanceArgs) -> Result<Instance, Failure> {
    let (_, inst) =
        load_instance(&read(&input.map)?, &read(&input.scen)?).map_err(|e| Failure::Input(e.to_string()))?;
    Ok(inst)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Input(e.to_string())),
    }
}

fn run_solve(inst: &Instance, algo: Algo, opts: SolveOptions, out: Option<&Path>) -> Result<(), Failure> {
    let solved = solve(inst, algo, &opts)?;
    let m = validate_plan(inst, &solved.plan)
        .map_err(|e| Failure::Solver(format!("{algo} produced an invalid plan: {e}")))?;
    emit(out, &solved.plan.to_csv())?;
    let line = format!(
        "algo={algo} makespan={} swaps={} sic={} timesteps={}",
        m.makespan, m.swaps, m.sic, solved.timesteps
    );
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn finish_sweep(records: Vec<BenchRecord>, sweep: &SweepArgs, square: bool) -> Result<(), Failure> {
    let csv = to_csv(&records).map_err(|e| Failure::Input(e.to_string()))?;
    emit(sweep.out.as_deref(), &csv)?;
    let rows = summarize(&records, square);
    match &sweep.summary {
        Some(p) => {
            let text = to_csv(&rows).map_err(|e| Failure::Input(e.to_string()))?;
            emit(Some(p), &text)?;
        }
        None => {
            for r in rows {
                eprintln!(
                    "{} n={} k={} min={} avg={:.2} max={}",
                    r.algo, r.n, r.k, r.min_makespan, r.avg_makespan, r.max_makespan
                );
            }
        }
    }
    Ok(())
}

fn bench_options(sweep: &SweepArgs) -> BenchOptions {
    BenchOptions {
        algos: sweep.algo.clone(),
        trials: sweep.trials,
        seed: sweep.seed,
        timing: sweep.timing,
        checked: test_mode(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            input,
            algo,
            seed,
            out,
            budget,
        } => {
            let inst = load(&input)?;
            let opts = SolveOptions {
                seed,
                checked: test_mode(),
                state_budget: budget,
            };
            run_solve(&inst, algo, opts, out.as_deref())
        }
        Command::Oracle { input, budget, out } => {
            let inst = load(&input)?;
            let opts = SolveOptions {
                state_budget: budget,
                ..SolveOptions::default()
            };
            run_solve(&inst, Algo::Oracle, opts, out.as_deref())
        }
        Command::BenchLinear { max_n, step, sweep } => {
            if max_n == 0 {
                return Err(Failure::Input("--max-n must be at least 1".into()));
            }
            let records = bench_linear(max_n, step, &bench_options(&sweep))?;
            finish_sweep(records, &sweep, false)
        }
        Command::BenchSquare { max_side, sweep } => {
            if max_side == 0 {
                return Err(Failure::Input("--max-side must be at least 1".into()));
            }
            let records = bench_square(max_side, &bench_options(&sweep))?;
            finish_sweep(records, &sweep, true)
        }
        Command::BenchGrid {
            width,
            height,
            densities,
            ks,
            sweep,
        } => {
            let records = bench_grid(width, height, &densities, &ks, &bench_options(&sweep))?;
            finish_sweep(records, &sweep, false)
        }
        Command::BenchCycle { ns, sweep } => {
            let records = bench_cycle(&ns, &bench_options(&sweep))?;
            finish_sweep(records, &sweep, false)
        }
        Command::Validate { input, plan } => {
            let inst = load(&input)?;
            let plan = Plan::from_csv(&read(&plan)?).map_err(|e| Failure::Input(format!("plan: {e}")))?;
            let m = validate_plan(&inst, &plan).map_err(|e| Failure::Input(format!("invalid plan: {e}")))?;
            println!("valid makespan={} swaps={} sic={}", m.makespan, m.swaps, m.sic);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver error: {msg}");
            ExitCode::from(2)
        }
    }
}
