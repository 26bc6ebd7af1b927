//! Seeded scenario batches, solver cross-checks and aggregate statistics.
//!
//! Scenario `i` of the batch for `K` stations draws from its own ChaCha8
//! stream: the master seed fixes the key and `(K << 32) | i` selects the
//! stream. Scenarios are therefore independent of execution order, and a
//! batch solved in parallel is bit-identical to the sequential run.
//!
//! Draws whose all-ones selection misses the availability target have no
//! solution; they are discarded and redrawn from the same stream, so every
//! reported scenario is feasible.

use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bnb::{solve, SolveResult, TraceRecord};
use crate::error::{Error, Result};
use crate::greedy::run_greedy;
use crate::instance::{ProblemInstance, Selection, UniformScenario};
use crate::oracle::solve_exhaustive;
use crate::transform::{is_feasible, to_bilp, BilpInstance};
use crate::FORMAT_VERSION;

/// Redraw budget per scenario before giving up on a parameter set.
pub const MAX_DRAWS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Scenarios are spread over the rayon pool. Without the `parallel`
    /// feature this runs sequentially.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub k_values: Vec<usize>,
    pub num_scenarios: usize,
    pub num_periods: usize,
    pub required_availability: f64,
    pub seed: u64,
    /// Scenarios with at most this many stations are also solved by
    /// exhaustive search and compared.
    pub oracle_cap: usize,
    pub low: f64,
    pub high: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            k_values: vec![10, 15, 20, 25, 30],
            num_scenarios: 200,
            num_periods: 12,
            required_availability: 0.999,
            seed: 0,
            oracle_cap: 15,
            low: 0.1,
            high: 1.0,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_scenarios == 0 {
            return Err(Error::parameter("num_scenarios", "must be at least 1"));
        }
        if self.k_values.is_empty() {
            return Err(Error::parameter("k_values", "at least one station count is required"));
        }
        for &k in &self.k_values {
            self.scenario(k).validate()?;
        }
        Ok(())
    }

    fn scenario(&self, k: usize) -> UniformScenario {
        UniformScenario {
            num_stations: k,
            num_periods: self.num_periods,
            low: self.low,
            high: self.high,
            required_availability: self.required_availability,
        }
    }
}

pub fn scenario_rng(master_seed: u64, num_stations: usize, scenario: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((num_stations as u64) << 32) | scenario as u64);
    rng
}

/// The first feasible draw of a scenario's stream, with the number of draws
/// it took.
pub fn draw_feasible(
    config: &BenchConfig,
    num_stations: usize,
    scenario: usize,
) -> Result<(ProblemInstance, BilpInstance, usize)> {
    let params = config.scenario(num_stations);
    let mut rng = scenario_rng(config.seed, num_stations, scenario);
    for draws in 1..=MAX_DRAWS {
        let instance = params.sample(&mut rng)?;
        let bilp = to_bilp(&instance);
        if bilp.is_satisfiable() {
            return Ok((instance, bilp, draws));
        }
    }
    Err(Error::NoFeasibleScenario {
        num_stations,
        scenario,
        attempts: MAX_DRAWS,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub num_stations: usize,
    pub scenario: usize,
    pub draws: usize,
    pub optimum: usize,
    pub total_iterations: usize,
    pub iterations_to_first_optimum: usize,
    pub trace: Vec<TraceRecord>,
    pub greedy_cardinality: usize,
    pub greedy_iterations: usize,
    pub greedy_feasible: bool,
    pub oracle_optimum: Option<usize>,
}

pub fn run_scenario(config: &BenchConfig, num_stations: usize, scenario: usize) -> Result<ScenarioOutcome> {
    let (_, bilp, draws) = draw_feasible(config, num_stations, scenario)?;
    let result = solve(&bilp)?;
    let optimum = result
        .optimum
        .expect("feasible draws always have an optimum");

    let root_greedy = run_greedy(bilp.num_vars(), bilp.alpha(), bilp.beta())?;
    let greedy_feasible = is_feasible(&bilp, &Selection::new(root_greedy.z_free.clone()));

    let oracle_optimum = if num_stations <= config.oracle_cap {
        let oracle = solve_exhaustive(&bilp, config.oracle_cap)?;
        if oracle.optimum != Some(optimum) {
            return Err(Error::OracleMismatch {
                num_stations,
                scenario,
                seed: config.seed,
                bnb: Some(optimum),
                oracle: oracle.optimum,
            });
        }
        oracle.optimum
    } else {
        None
    };

    Ok(ScenarioOutcome {
        num_stations,
        scenario,
        draws,
        optimum,
        total_iterations: result.total_iterations,
        iterations_to_first_optimum: result.iterations_to_first_optimum,
        trace: result.trace,
        greedy_cardinality: root_greedy.cardinality,
        greedy_iterations: root_greedy.iterations,
        greedy_feasible,
        oracle_optimum,
    })
}

/// Applies `f` to `0..n`, keeping results in index order. The first error in
/// index order wins regardless of execution mode.
pub fn map_indexed<T, F>(n: usize, execution: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    let results: Vec<Result<T>> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(&f).collect()
        }
        _ => (0..n).map(&f).collect(),
    };
    results.into_iter().collect()
}

pub fn run_batch(config: &BenchConfig, num_stations: usize, execution: Execution) -> Result<Vec<ScenarioOutcome>> {
    config.validate()?;
    map_indexed(config.num_scenarios, execution, |i| {
        run_scenario(config, num_stations, i)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub k_value: usize,
    pub num_scenarios: usize,
    pub mean_selected: f64,
    pub std_selected: f64,
    pub mean_iterations: f64,
    pub std_iterations: f64,
    pub mean_iters_to_first_opt: f64,
    pub std_iters_to_first_opt: f64,
    /// Share of scenarios in which the greedy alone, run on the full
    /// problem, already reached the optimum.
    pub pct_greedy_optimal: f64,
    pub mean_greedy_selected: f64,
    /// `2^(K+1) - 1`, saturating.
    pub iteration_upper_bound: u64,
    pub mean_draws: f64,
    pub oracle_checked: bool,
}

/// Population mean and standard deviation, summed in slice order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn iteration_upper_bound(num_stations: usize) -> u64 {
    if num_stations >= 63 {
        u64::MAX
    } else {
        (1u64 << (num_stations + 1)) - 1
    }
}

pub fn summarize(num_stations: usize, outcomes: &[ScenarioOutcome]) -> BenchmarkReport {
    let column = |f: fn(&ScenarioOutcome) -> usize| -> Vec<f64> {
        outcomes.iter().map(|o| f(o) as f64).collect()
    };
    let (mean_selected, std_selected) = mean_std(&column(|o| o.optimum));
    let (mean_iterations, std_iterations) = mean_std(&column(|o| o.total_iterations));
    let (mean_first, std_first) = mean_std(&column(|o| o.iterations_to_first_optimum));
    let (mean_greedy, _) = mean_std(&column(|o| o.greedy_cardinality));
    let (mean_draws, _) = mean_std(&column(|o| o.draws));
    let greedy_hits = outcomes
        .iter()
        .filter(|o| o.greedy_cardinality == o.optimum)
        .count();
    let pct_greedy_optimal = if outcomes.is_empty() {
        0.0
    } else {
        100.0 * greedy_hits as f64 / outcomes.len() as f64
    };
    BenchmarkReport {
        k_value: num_stations,
        num_scenarios: outcomes.len(),
        mean_selected,
        std_selected,
        mean_iterations,
        std_iterations,
        mean_iters_to_first_opt: mean_first,
        std_iters_to_first_opt: std_first,
        pct_greedy_optimal,
        mean_greedy_selected: mean_greedy,
        iteration_upper_bound: iteration_upper_bound(num_stations),
        mean_draws,
        oracle_checked: outcomes.iter().all(|o| o.oracle_optimum.is_some()),
    }
}

/// One report per entry of `config.k_values`, in that order.
pub fn run_benchmark(config: &BenchConfig, execution: Execution) -> Result<Vec<BenchmarkReport>> {
    config.validate()?;
    config
        .k_values
        .iter()
        .map(|&k| run_batch(config, k, execution).map(|outcomes| summarize(k, &outcomes)))
        .collect()
}

#[derive(Serialize)]
struct ReportDocument<'a> {
    format: u32,
    config: &'a BenchConfig,
    reports: &'a [BenchmarkReport],
}

pub fn report_json(config: &BenchConfig, reports: &[BenchmarkReport]) -> String {
    let doc = ReportDocument {
        format: FORMAT_VERSION,
        config,
        reports,
    };
    serde_json::to_string_pretty(&doc).expect("report serialization is infallible")
}

/// Human-readable table with one row per station count.
pub fn report_table(reports: &[BenchmarkReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>4}  {:>9}  {:>13}  {:>13}  {:>14}  {:>22}  {:>22}  {:>12}\n",
        "K",
        "scenarios",
        "mean selected",
        "greedy mean",
        "greedy optimal",
        "total iterations",
        "iters to 1st optimum",
        "upper bound"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:>4}  {:>9}  {:>13.2}  {:>13.2}  {:>13.1}%  {:>22}  {:>22}  {:>12}\n",
            r.k_value,
            r.num_scenarios,
            r.mean_selected,
            r.mean_greedy_selected,
            r.pct_greedy_optimal,
            format!("{:.2} ({:.2})", r.mean_iterations, r.std_iterations),
            format!("{:.2} ({:.2})", r.mean_iters_to_first_opt, r.std_iters_to_first_opt),
            r.iteration_upper_bound
        ));
    }
    out
}

/// Writes `iteration,incumbent_U,active_list_L,event`, one row per trace
/// record.
pub fn write_trace_csv<W: Write>(result: &SolveResult, writer: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["iteration", "incumbent_U", "active_list_L", "event"])?;
    for rec in &result.trace {
        csv.write_record([
            rec.iteration.to_string(),
            rec.incumbent.to_string(),
            rec.active_list_length.to_string(),
            rec.event.as_str().to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

pub fn emit_trace_csv(result: &SolveResult, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_trace_csv(result, std::io::BufWriter::new(file))
}
