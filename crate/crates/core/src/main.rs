use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gsopt::bench::{self, BenchConfig, Execution};
use gsopt::instance::{encode_node_cover, generate_uniform, NodeCoverGraph, ProblemInstance};
use gsopt::oracle::{solve_exhaustive, DEFAULT_MAX_VARS};
use gsopt::transform::{availability, to_bilp};
use gsopt::{solve, Error, SolveStatus};

const EXIT_OPTIMAL: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_ORACLE_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "gsopt", version, about = "Minimum ground-station selection with site diversity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance JSON file to global optimality.
    Solve {
        instance: PathBuf,
        /// Write the per-iteration progress trace as CSV.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        /// Cross-check the optimum against exhaustive search.
        #[arg(long)]
        oracle_check: bool,
    },
    /// Write a seeded random instance JSON file.
    Generate {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 12)]
        t: usize,
        #[arg(long, default_value_t = 0.999)]
        availability: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        low: f64,
        #[arg(long, default_value_t = 1.0)]
        high: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run seeded scenario batches and report iteration statistics.
    Bench {
        /// Station counts, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 15, 20, 25, 30])]
        k: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        scenarios: usize,
        #[arg(long, default_value_t = 12)]
        periods: usize,
        #[arg(long, default_value_t = 0.999)]
        availability: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 15)]
        oracle_cap: usize,
        #[arg(long, default_value = "bench_report.json")]
        json_out: PathBuf,
        #[arg(long, default_value = "bench_report.txt")]
        table_out: PathBuf,
        /// Solve scenarios one at a time instead of on the thread pool.
        #[arg(long)]
        sequential: bool,
    },
    /// Solve minimum vertex cover for a graph file (`N M` header, 1-based edges).
    Cover { graph: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::OracleMismatch { .. } => EXIT_ORACLE_MISMATCH,
                _ => EXIT_INPUT,
            })
        }
    }
}

fn run(command: Command) -> gsopt::Result<u8> {
    match command {
        Command::Solve {
            instance,
            trace_out,
            oracle_check,
        } => cmd_solve(&instance, trace_out.as_deref(), oracle_check),
        Command::Generate {
            k,
            t,
            availability,
            seed,
            low,
            high,
            out,
        } => {
            let inst = generate_uniform(k, t, low, high, availability, seed)?;
            std::fs::write(&out, inst.to_json_string())?;
            println!("wrote {}", out.display());
            Ok(EXIT_OPTIMAL)
        }
        Command::Bench {
            k,
            scenarios,
            periods,
            availability,
            seed,
            oracle_cap,
            json_out,
            table_out,
            sequential,
        } => {
            let config = BenchConfig {
                k_values: k,
                num_scenarios: scenarios,
                num_periods: periods,
                required_availability: availability,
                seed,
                oracle_cap,
                ..BenchConfig::default()
            };
            let execution = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let reports = bench::run_benchmark(&config, execution)?;
            let table = bench::report_table(&reports);
            std::fs::write(&json_out, bench::report_json(&config, &reports))?;
            std::fs::write(&table_out, &table)?;
            print!("{table}");
            Ok(EXIT_OPTIMAL)
        }
        Command::Cover { graph } => {
            let graph = NodeCoverGraph::parse(&std::fs::read_to_string(graph)?)?;
            let result = solve(&encode_node_cover(&graph)?)?;
            let selection = result.solution.expect("a vertex cover always exists");
            println!("optimum={} nodes={}", selection.cardinality(), selection);
            println!("iterations total={}", result.total_iterations);
            Ok(EXIT_OPTIMAL)
        }
    }
}

fn cmd_solve(path: &std::path::Path, trace_out: Option<&std::path::Path>, oracle_check: bool) -> gsopt::Result<u8> {
    let instance = ProblemInstance::from_json_str(&std::fs::read_to_string(path)?)?;
    let bilp = to_bilp(&instance);
    let result = solve(&bilp)?;
    if let Some(trace_path) = trace_out {
        bench::emit_trace_csv(&result, trace_path)?;
    }

    if oracle_check {
        let oracle = solve_exhaustive(&bilp, DEFAULT_MAX_VARS)?;
        if oracle.optimum != result.optimum {
            return Err(Error::OracleMismatch {
                num_stations: instance.num_stations(),
                scenario: 0,
                seed: 0,
                bnb: result.optimum,
                oracle: oracle.optimum,
            });
        }
        println!("oracle check passed ({} subsets)", oracle.subsets_checked);
    }

    match (result.status, &result.solution) {
        (SolveStatus::Optimal, Some(selection)) => {
            println!("optimum={} stations={}", selection.cardinality(), selection);
            for t in 0..instance.num_periods() {
                println!(
                    "period {}: availability={:.9} required={:.9}",
                    t + 1,
                    availability(&instance, selection, t),
                    instance.required_availability(t)
                );
            }
            println!(
                "iterations total={} to_first_optimum={}",
                result.total_iterations, result.iterations_to_first_optimum
            );
            Ok(EXIT_OPTIMAL)
        }
        _ => {
            println!("infeasible: even all stations together miss the availability target");
            Ok(EXIT_INFEASIBLE)
        }
    }
}
