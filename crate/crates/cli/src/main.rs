//! Command-line front end: solve examples, benchmark, verify and plan paths.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use eikonal::harness::{
    export_field_csv, make_example, max_residual, run_bench_with, verify_example, worker_sweep, Method,
};
use eikonal::parallel::resolve_workers;
use eikonal::pathplan::{gradient_descent_path, load_barrier_map, map_problem, synthetic_map, BarrierMap};
use eikonal::{Executor, DEFAULT_TOL};

/// Largest grid side accepted without `--large`.
const DESK_MAX_SIZE: usize = 512;

#[derive(Parser, Debug)]
#[command(name = "eikonal", version, about = "Eikonal solvers on uniform 2D grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Common {
    /// Worker threads; 0 = all hardware threads. Default: $EIKONAL_WORKERS, else hardware.
    #[arg(long, short)]
    workers: Option<usize>,
    /// Absolute convergence tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Allow grid sizes above 512.
    #[arg(long)]
    large: bool,
}

impl Common {
    fn executor(&self) -> Result<Executor> {
        Ok(Executor::new(resolve_workers(self.workers))?)
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if n > DESK_MAX_SIZE && !self.large {
            bail!("size {n} exceeds {DESK_MAX_SIZE}; pass --large to allow it");
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one example and optionally write the field as CSV.
    Solve {
        #[arg(long, short)]
        example: u8,
        #[arg(long, short, default_value_t = 128)]
        size: usize,
        #[arg(long, short, default_value = "ifim")]
        method: Method,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Benchmark methods over examples and sizes; one CSV row per combination.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        examples: Vec<u8>,
        #[arg(long, value_delimiter = ',', default_value = "64,128")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "fmm,fsm,fim,ifim")]
        methods: Vec<Method>,
        /// Repetitions per row; the minimum wall time is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// CSV output; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every method against the oracle; exits nonzero on disagreement.
    Verify {
        #[arg(long, short)]
        example: u8,
        #[arg(long, short, default_value_t = 64)]
        size: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Time one parallel method at several worker counts.
    Sweep {
        #[arg(long, short)]
        example: u8,
        #[arg(long, short, default_value_t = 128)]
        size: usize,
        #[arg(long, short, default_value = "ifim")]
        method: Method,
        #[arg(long = "workers-list", value_delimiter = ',', default_value = "1,2,4,8")]
        workers_list: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Extract a shortest path on a barrier map by gradient descent.
    Plan {
        /// `.pgm` (P2) or `.csv` map, or `synthetic:<n>` for the bundled map.
        #[arg(long)]
        map: String,
        /// Source cell `i,j`; the travel-time field is seeded here.
        #[arg(long, value_parser = parse_cell)]
        start: (usize, usize),
        /// Goal cell `i,j`; the descent starts here and ends at the source.
        #[arg(long, value_parser = parse_cell)]
        goal: (usize, usize),
        #[arg(long, short, default_value = "ifim")]
        method: Method,
        #[arg(long, default_value_t = 0.5)]
        step: f64,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_cell(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or_else(|| format!("expected i,j, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(i)?, parse(j)?))
}

fn load_map(spec: &str) -> Result<BarrierMap> {
    if let Some(n) = spec.strip_prefix("synthetic:") {
        let n: usize = n.parse().with_context(|| format!("bad synthetic map size {n:?}"))?;
        return Ok(synthetic_map(n)?);
    }
    load_barrier_map(spec).with_context(|| format!("loading map {spec}"))
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve {
            example,
            size,
            method,
            out,
            common,
        } => {
            common.check_size(size)?;
            let exec = common.executor()?;
            let (mut grid, bc) = make_example(example, size)?;
            let r = method.run(&mut grid, &bc, common.tol, &exec)?;
            let s = r.stats;
            println!(
                "example {example} n={size} method={method} workers={} time={:.4}s calls={} iterations={} \
peak_active={} peak_remedy={} residual={:.2e}",
                exec.workers(),
                s.wall_time,
                s.solver_calls,
                s.iterations,
                s.peak_active,
                s.peak_remedy,
                max_residual(&grid)
            );
            if let Some(path) = out {
                export_field_csv(&grid, &path).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Bench {
            examples,
            sizes,
            methods,
            reps,
            report,
            common,
        } => {
            for &n in &sizes {
                common.check_size(n)?;
            }
            let workers = resolve_workers(common.workers);
            let r = run_bench_with(&examples, &sizes, &methods, workers, reps, common.tol)?;
            write_or_print(report.as_deref(), &r.to_csv())?;
            if let Some(bad) = r.rows.iter().find(|row| !row.agrees()) {
                eprintln!(
                    "warning: example {} n={} {} residual {:.2e}, oracle diff {:.2e}",
                    bad.example, bad.n, bad.method, bad.max_residual, bad.max_diff_vs_oracle
                );
            }
        }
        Command::Verify { example, size, common } => {
            common.check_size(size)?;
            let rows = verify_example(example, size, common.tol, &common.executor()?)?;
            let mut ok = true;
            for row in &rows {
                ok &= row.agrees();
                println!(
                    "{:<6} diff={:.2e} residual={:.2e} {}",
                    row.method.name(),
                    row.max_diff_vs_oracle,
                    row.max_residual,
                    if row.agrees() { "ok" } else { "MISMATCH" }
                );
            }
            if !ok {
                eprintln!("example {example} at {size}: methods disagree with the oracle");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Sweep {
            example,
            size,
            method,
            workers_list,
            tol,
        } => {
            let rows = worker_sweep(example, size, method, &workers_list, tol)?;
            println!("workers,wall_time_s,solver_calls,phi_hash");
            for r in &rows {
                println!("{},{:.6e},{},{:016x}", r.workers, r.wall_time(), r.solver_calls, r.phi_hash);
            }
            if rows.iter().any(|r| r.phi_hash != rows[0].phi_hash) {
                eprintln!("fields differ between worker counts");
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Plan {
            map,
            start,
            goal,
            method,
            step,
            out,
            common,
        } => {
            let map = load_map(&map)?;
            for (name, (i, j)) in [("start", start), ("goal", goal)] {
                if i >= map.width() || j >= map.height() {
                    bail!("{name} ({i},{j}) outside the {}x{} map", map.width(), map.height());
                }
            }
            let (mut grid, bc) = map_problem(&map, start)?;
            method.run(&mut grid, &bc, common.tol, &common.executor()?)?;
            let path = gradient_descent_path(&grid, (goal.0 as f64, goal.1 as f64), step)?;
            eprintln!(
                "{} points, length {:.3}, phi at goal {:.3}, sentinel {:.3}",
                path.len(),
                path.length(),
                path.phi[0],
                path.sentinel
            );
            write_or_print(out.as_deref(), &path.to_csv())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
