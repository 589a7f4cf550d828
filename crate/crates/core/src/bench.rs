//! Algorithm dispatch and the experiment sweeps behind the CLI.
//!
//! Every sweep enumerates its jobs in a fixed order (size, then `k` or
//! density, then trial), solves them on the rayon pool and returns records
//! in that same order, so the CSV only depends on the arguments. Each
//! instance seed is derived from the base seed and the job coordinates.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::baselines::{odd_even_sort_plan, shearsort_phase_budget, shearsort_plan, BaselineError};
use crate::bubbletree::{bubbletree_solve, BubbleConfig, BubbleError};
use crate::instance::{
    gen_cycle_counterexample, gen_linear_array, gen_random_grid, gen_square_array, GenerateError, Instance,
};
use crate::optimal::{optimal_makespan, OptimalError, DEFAULT_STATE_BUDGET};
use crate::plan::{validate_plan, Plan, PlanError};
use crate::rip::{rip_solve, ChainPolicy, RipConfig, RipError};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    Rip,
    RipIc,
    Bubbletree,
    Bubbletree2,
    OddEven,
    Shearsort,
    Oracle,
}

impl Algo {
    pub const ALL: [Algo; 7] = [
        Algo::Rip,
        Algo::RipIc,
        Algo::Bubbletree,
        Algo::Bubbletree2,
        Algo::OddEven,
        Algo::Shearsort,
        Algo::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Rip => "rip",
            Algo::RipIc => "rip-ic",
            Algo::Bubbletree => "bubbletree",
            Algo::Bubbletree2 => "bubbletree2",
            Algo::OddEven => "oddeven",
            Algo::Shearsort => "shearsort",
            Algo::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown algorithm `{0}`")]
pub struct UnknownAlgo(pub String);

impl FromStr for Algo {
    type Err = UnknownAlgo;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownAlgo(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Rip(#[from] RipError),
    #[error(transparent)]
    Bubble(#[from] BubbleError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Optimal(#[from] OptimalError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("{algo} produced an invalid plan: {error}")]
    Invalid { algo: Algo, error: PlanError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Seed for solver-internal randomness (bubbletree priorities).
    pub seed: u64,
    /// Run the solvers' bound and monovariant checks.
    pub checked: bool,
    pub state_budget: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            checked: false,
            state_budget: DEFAULT_STATE_BUDGET,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub plan: Plan,
    /// Steps the solver took before any truncation or postprocessing.
    pub timesteps: usize,
}

/// Runs `algo` on `inst` without validating the result.
pub fn solve(inst: &Instance, algo: Algo, opts: &SolveOptions) -> Result<Solved, SolveError> {
    let rip = |cfg: RipConfig| -> Result<Solved, SolveError> {
        let cfg = if opts.checked { cfg.checked() } else { cfg };
        let sol = rip_solve(inst, &cfg)?;
        Ok(Solved {
            timesteps: sol.stats.timesteps,
            plan: sol.plan,
        })
    };
    let bubble = |cfg: BubbleConfig| -> Result<Solved, SolveError> {
        let cfg = cfg.seeded(opts.seed);
        let cfg = if opts.checked { cfg.checked() } else { cfg };
        let sol = bubbletree_solve(inst, &cfg)?;
        Ok(Solved {
            timesteps: sol.stats.raw_makespan,
            plan: sol.plan,
        })
    };
    let plain = |plan: Plan| Solved {
        timesteps: plan.makespan(),
        plan,
    };
    match algo {
        Algo::Rip => rip(RipConfig::default()),
        Algo::RipIc => rip(RipConfig::inverse_chains(ChainPolicy::FarthestToGo)),
        Algo::Bubbletree => bubble(BubbleConfig::basic()),
        Algo::Bubbletree2 => bubble(BubbleConfig::bubbletree2()),
        Algo::OddEven => Ok(plain(odd_even_sort_plan(inst)?)),
        Algo::Shearsort => Ok(plain(shearsort_plan(inst)?)),
        Algo::Oracle => Ok(plain(optimal_makespan(inst, opts.state_budget)?.plan)),
    }
}

/// One solved instance. `runtime_ms` is zero unless timing was requested,
/// keeping CSVs byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub density: f64,
    pub seed: u64,
    pub makespan: usize,
    pub sic: usize,
    /// Longest start-goal distance.
    pub l: usize,
    pub swaps: usize,
    pub timesteps: usize,
    pub runtime_ms: f64,
    pub valid: bool,
    pub makespan_per_k: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchOptions {
    pub algos: Vec<Algo>,
    pub trials: usize,
    pub seed: u64,
    pub timing: bool,
    pub checked: bool,
}

/// Solves, validates and records one instance.
pub fn run_record(
    inst: &Instance,
    algo: Algo,
    density: f64,
    seed: u64,
    opts: &BenchOptions,
) -> Result<BenchRecord, SolveError> {
    let solve_opts = SolveOptions {
        seed,
        checked: opts.checked,
        ..SolveOptions::default()
    };
    let clock = Instant::now();
    let solved = solve(inst, algo, &solve_opts)?;
    let elapsed = clock.elapsed().as_secs_f64() * 1000.0;
    let metrics = validate_plan(inst, &solved.plan).map_err(|error| SolveError::Invalid { algo, error })?;
    Ok(BenchRecord {
        algo: algo.name().to_string(),
        n: inst.n(),
        k: inst.k(),
        density,
        seed,
        makespan: metrics.makespan,
        sic: metrics.sic,
        l: inst.max_distance(),
        swaps: metrics.swaps,
        timesteps: solved.timesteps,
        runtime_ms: if opts.timing { elapsed } else { 0.0 },
        valid: true,
        makespan_per_k: if inst.k() == 0 {
            0.0
        } else {
            metrics.makespan as f64 / inst.k() as f64
        },
    })
}

type Job = Box<dyn Fn() -> Result<Instance, GenerateError> + Send + Sync>;

fn run_jobs(jobs: Vec<(Job, f64, u64)>, opts: &BenchOptions) -> Result<Vec<BenchRecord>, SolveError> {
    let per_job = jobs
        .par_iter()
        .map(|(make, density, seed)| {
            let inst = make()?;
            opts.algos
                .iter()
                .map(|&algo| run_record(&inst, algo, *density, *seed, opts))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(per_job.into_iter().flatten().collect())
}

/// Dense permutations on paths of length `n = step, 2 step, ...` up to `max_n`.
pub fn bench_linear(max_n: usize, step: usize, opts: &BenchOptions) -> Result<Vec<BenchRecord>, SolveError> {
    let mut jobs: Vec<(Job, f64, u64)> = Vec::new();
    for n in (step.max(1)..=max_n).step_by(step.max(1)) {
        for trial in 0..opts.trials {
            let seed = derive_seed(opts.seed, &[n as u64, trial as u64]);
            jobs.push((Box::new(move || gen_linear_array(n, seed)), 1.0, seed));
        }
    }
    run_jobs(jobs, opts)
}

/// Dense permutations on `side × side` grids for `side = 1..=max_side`.
pub fn bench_square(max_side: usize, opts: &BenchOptions) -> Result<Vec<BenchRecord>, SolveError> {
    let mut jobs: Vec<(Job, f64, u64)> = Vec::new();
    for side in 1..=max_side {
        for trial in 0..opts.trials {
            let seed = derive_seed(opts.seed, &[side as u64, trial as u64]);
            jobs.push((Box::new(move || gen_square_array(side, seed)), 1.0, seed));
        }
    }
    run_jobs(jobs, opts)
}

/// Random-obstacle grids over every density and robot count.
pub fn bench_grid(
    width: usize,
    height: usize,
    densities: &[f64],
    ks: &[usize],
    opts: &BenchOptions,
) -> Result<Vec<BenchRecord>, SolveError> {
    let mut jobs: Vec<(Job, f64, u64)> = Vec::new();
    for (di, &density) in densities.iter().enumerate() {
        for &k in ks {
            for trial in 0..opts.trials {
                let seed = derive_seed(opts.seed, &[di as u64, k as u64, trial as u64]);
                let make = move || gen_random_grid(width, height, density, k, seed).map(|(_, inst)| inst);
                jobs.push((Box::new(make), density, seed));
            }
        }
    }
    run_jobs(jobs, opts)
}

/// The cycle counterexample for each `n` (deterministic, so one trial).
pub fn bench_cycle(ns: &[usize], opts: &BenchOptions) -> Result<Vec<BenchRecord>, SolveError> {
    let jobs: Vec<(Job, f64, u64)> = ns
        .iter()
        .map(|&n| -> (Job, f64, u64) { (Box::new(move || gen_cycle_counterexample(n)), 0.0, 0) })
        .collect();
    run_jobs(jobs, opts)
}

/// Makespan statistics per algorithm and instance size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub min_makespan: usize,
    pub avg_makespan: f64,
    pub max_makespan: usize,
    pub avg_makespan_per_k: f64,
    /// `(2⌈lg n⌉ + 1) √n`, square sweeps only.
    pub shearsort_bound: Option<usize>,
    /// `2 lg n √n`, square sweeps only.
    pub shearsort_curve: Option<f64>,
}

/// Groups consecutive records by `(algo, n, k)`, keeping first-seen order.
pub fn summarize(records: &[BenchRecord], square: bool) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, usize, usize)> = Vec::new();
    for r in records {
        let key = (r.algo.clone(), r.n, r.k);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(algo, n, k)| {
            let group: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.algo == algo && r.n == n && r.k == k)
                .collect();
            let total: usize = group.iter().map(|r| r.makespan).sum();
            let avg = total as f64 / group.len() as f64;
            let side = (n as f64).sqrt().round() as usize;
            SummaryRow {
                min_makespan: group.iter().map(|r| r.makespan).min().unwrap_or(0),
                max_makespan: group.iter().map(|r| r.makespan).max().unwrap_or(0),
                trials: group.len(),
                avg_makespan: avg,
                avg_makespan_per_k: if k == 0 { 0.0 } else { avg / k as f64 },
                shearsort_bound: square.then(|| shearsort_phase_budget(side) * side),
                shearsort_curve: square.then(|| 2.0 * (n as f64).log2() * side as f64),
                algo,
                n,
                k,
            }
        })
        .collect()
}

/// Serializes rows as CSV with a header.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
