//! FIFO branch-and-bound over fixed-variable subproblems.
//!
//! Every examined node runs the same sequence: closed-form infeasibility test,
//! LP relaxation, pruning against the incumbent, fathoming on an integral LP
//! point, greedy upper bound, fathoming when the greedy value meets the LP
//! ceiling, and otherwise branching on the LP value closest to one half. The
//! `z_b = 0` child is queued before the `z_b = 1` child.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::greedy::{run_greedy, GreedyResult};
use crate::instance::Selection;
use crate::lp::{is_integral, lower_bound, solve_lp, LpSolution};
use crate::tolerance::{EPS_FEAS, EPS_TIE};
use crate::transform::{is_feasible, BilpInstance};

/// A node of the search tree: some variables fixed to 0 or 1, the rest free.
#[derive(Debug, Clone, PartialEq)]
pub struct Subproblem {
    free: Vec<usize>,
    fixed: Vec<Option<bool>>,
    beta_prime: Vec<f64>,
    fixed_sum: usize,
}

impl Subproblem {
    pub fn root(bilp: &BilpInstance) -> Self {
        Self {
            free: (0..bilp.num_vars()).collect(),
            fixed: vec![None; bilp.num_vars()],
            beta_prime: bilp.beta().to_vec(),
            fixed_sum: 0,
        }
    }

    /// Free variable indices in ascending order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    pub fn fixed_value(&self, var: usize) -> Option<bool> {
        self.fixed[var]
    }

    pub fn beta_prime(&self) -> &[f64] {
        &self.beta_prime
    }

    /// Number of variables fixed to one.
    pub fn fixed_sum(&self) -> usize {
        self.fixed_sum
    }

    /// The columns of `alpha` that belong to free variables.
    pub fn alpha_free(&self, bilp: &BilpInstance) -> Vec<Vec<f64>> {
        bilp.alpha()
            .iter()
            .map(|row| self.free.iter().map(|&v| row[v]).collect())
            .collect()
    }

    /// Whether setting every free variable to one satisfies all rows.
    pub fn is_satisfiable(&self, bilp: &BilpInstance) -> bool {
        bilp.alpha()
            .iter()
            .zip(&self.beta_prime)
            .all(|(row, &b)| self.free.iter().map(|&v| row[v]).sum::<f64>() >= b - EPS_FEAS)
    }

    /// `beta - sum over fixed-to-one columns`, computed from scratch.
    pub fn recompute_beta_prime(&self, bilp: &BilpInstance) -> Vec<f64> {
        bilp.alpha()
            .iter()
            .zip(bilp.beta())
            .map(|(row, &b)| {
                let used: f64 = self
                    .fixed
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| **f == Some(true))
                    .map(|(c, _)| row[c])
                    .sum();
                b - used
            })
            .collect()
    }

    /// Merges a free-variable assignment with the fixed values.
    pub fn complete(&self, z_free: &[bool]) -> Selection {
        let mut chosen: Vec<bool> = self.fixed.iter().map(|f| f.unwrap_or(false)).collect();
        for (&v, &on) in self.free.iter().zip(z_free) {
            chosen[v] = on;
        }
        Selection::new(chosen)
    }
}

/// Splits `parent` on variable `var`, returning the `z = 0` child and the
/// `z = 1` child.
pub fn branch(bilp: &BilpInstance, parent: &Subproblem, var: usize) -> Result<(Subproblem, Subproblem)> {
    let pos = parent
        .free
        .iter()
        .position(|&v| v == var)
        .ok_or(Error::NotFree(var))?;
    let mut free = parent.free.clone();
    free.remove(pos);

    let mut zero = Subproblem {
        free: free.clone(),
        fixed: parent.fixed.clone(),
        beta_prime: parent.beta_prime.clone(),
        fixed_sum: parent.fixed_sum,
    };
    zero.fixed[var] = Some(false);

    let mut one = Subproblem {
        free,
        fixed: parent.fixed.clone(),
        beta_prime: parent
            .beta_prime
            .iter()
            .zip(bilp.alpha())
            .map(|(b, row)| b - row[var])
            .collect(),
        fixed_sum: parent.fixed_sum + 1,
    };
    one.fixed[var] = Some(true);
    Ok((zero, one))
}

/// Position (within the free set) of the LP value closest to 0.5. Ties go to
/// the lowest position.
pub fn select_branching_variable(lp_values: &[f64]) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in lp_values.iter().enumerate() {
        let dist = (v - 0.5).abs();
        if best.is_none_or(|(_, d)| dist < d - EPS_TIE) {
            best = Some((i, dist));
        }
    }
    best.map(|(i, _)| i).ok_or(Error::EmptyFreeSet)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEvent {
    /// Initial state before any node is examined.
    Start,
    Infeasible,
    Pruned,
    FathomedIntegral,
    FathomedBoundMatch,
    Branched,
}

impl TraceEvent {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceEvent::Start => "start",
            TraceEvent::Infeasible => "infeasible",
            TraceEvent::Pruned => "pruned",
            TraceEvent::FathomedIntegral => "fathomed_integral",
            TraceEvent::FathomedBoundMatch => "fathomed_bound_match",
            TraceEvent::Branched => "branched",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    /// Incumbent value after this iteration.
    pub incumbent: usize,
    /// Active subproblems remaining after this iteration.
    pub active_list_length: usize,
    pub event: TraceEvent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub optimum: Option<usize>,
    pub solution: Option<Selection>,
    pub total_iterations: usize,
    /// Iteration at which the final incumbent value was first reached; 0 when
    /// the initial all-ones incumbent was already optimal.
    pub iterations_to_first_optimum: usize,
    pub trace: Vec<TraceRecord>,
}

/// Everything known about a node once its iteration has finished.
#[derive(Debug)]
pub struct NodeVisit<'a> {
    pub iteration: usize,
    /// Creation order of the node; the root is 0.
    pub node_id: usize,
    pub subproblem: &'a Subproblem,
    pub lp: Option<&'a LpSolution>,
    pub lower_bound: Option<usize>,
    pub greedy: Option<&'a GreedyResult>,
    /// `(zero_child_id, one_child_id)` when the node was branched.
    pub children: Option<(usize, usize)>,
    pub record: TraceRecord,
}

/// Solves the program to global optimality.
pub fn solve(bilp: &BilpInstance) -> Result<SolveResult> {
    solve_inspected(bilp, |_| {})
}

/// Like [`solve`], calling `inspect` after every examined node.
pub fn solve_inspected<F>(bilp: &BilpInstance, mut inspect: F) -> Result<SolveResult>
where
    F: FnMut(&NodeVisit<'_>),
{
    let k = bilp.num_vars();
    let root = Subproblem::root(bilp);

    if !root.is_satisfiable(bilp) {
        let record = TraceRecord {
            iteration: 1,
            incumbent: k,
            active_list_length: 0,
            event: TraceEvent::Infeasible,
        };
        inspect(&NodeVisit {
            iteration: 1,
            node_id: 0,
            subproblem: &root,
            lp: None,
            lower_bound: None,
            greedy: None,
            children: None,
            record,
        });
        return Ok(SolveResult {
            status: SolveStatus::Infeasible,
            optimum: None,
            solution: None,
            total_iterations: 1,
            iterations_to_first_optimum: 0,
            trace: vec![record],
        });
    }

    let mut incumbent = k;
    let mut best = Selection::full(k);
    let mut first_optimum = 0;
    let mut trace = vec![TraceRecord {
        iteration: 0,
        incumbent,
        active_list_length: 1,
        event: TraceEvent::Start,
    }];
    let mut active: VecDeque<(usize, Subproblem)> = VecDeque::from([(0, root)]);
    let mut next_id = 1;
    let mut iteration = 0;

    let mut update = |selection: Selection, iteration: usize, incumbent: &mut usize| {
        assert!(
            is_feasible(bilp, &selection),
            "incumbent candidate {selection} is infeasible"
        );
        *incumbent = selection.cardinality();
        best = selection;
        first_optimum = iteration;
    };

    while let Some((node_id, node)) = active.pop_front() {
        iteration += 1;
        let mut lp = None;
        let mut bound = None;
        let mut greedy = None;
        let mut children = None;

        let event = if !node.is_satisfiable(bilp) {
            TraceEvent::Infeasible
        } else {
            let alpha = node.alpha_free(bilp);
            let relaxed = solve_lp(node.num_free(), &alpha, node.beta_prime())?;
            let lb = lower_bound(&relaxed, node.fixed_sum());
            bound = Some(lb);
            let rounded = integral_point(&relaxed, &node, bilp);
            let event = if incumbent <= lb {
                TraceEvent::Pruned
            } else if let Some(selection) = rounded {
                update(selection, iteration, &mut incumbent);
                TraceEvent::FathomedIntegral
            } else {
                let g = run_greedy(node.num_free(), &alpha, node.beta_prime())?;
                let value = g.cardinality + node.fixed_sum();
                if value < incumbent {
                    update(node.complete(&g.z_free), iteration, &mut incumbent);
                }
                greedy = Some(g);
                if lb == value {
                    TraceEvent::FathomedBoundMatch
                } else {
                    let pos = select_branching_variable(&relaxed.values)?;
                    let (zero, one) = branch(bilp, &node, node.free()[pos])?;
                    children = Some((next_id, next_id + 1));
                    active.push_back((next_id, zero));
                    active.push_back((next_id + 1, one));
                    next_id += 2;
                    TraceEvent::Branched
                }
            };
            lp = Some(relaxed);
            event
        };

        let record = TraceRecord {
            iteration,
            incumbent,
            active_list_length: active.len(),
            event,
        };
        trace.push(record);
        inspect(&NodeVisit {
            iteration,
            node_id,
            subproblem: &node,
            lp: lp.as_ref(),
            lower_bound: bound,
            greedy: greedy.as_ref(),
            children,
            record,
        });
    }

    Ok(SolveResult {
        status: SolveStatus::Optimal,
        optimum: Some(incumbent),
        solution: Some(best),
        total_iterations: iteration,
        iterations_to_first_optimum: first_optimum,
        trace,
    })
}

// An integral LP point rounded to 0/1. Rounding a basic value that sits just
// inside the integrality tolerance can break a row, so the rounded point is
// only accepted if it is still feasible; otherwise the node continues to the
// greedy step.
fn integral_point(lp: &LpSolution, node: &Subproblem, bilp: &BilpInstance) -> Option<Selection> {
    if !is_integral(lp) {
        return None;
    }
    let z: Vec<bool> = lp.values.iter().map(|&v| v >= 0.5).collect();
    let selection = node.complete(&z);
    is_feasible(bilp, &selection).then_some(selection)
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    fn example() -> BilpInstance {
        BilpInstance::new(2, vec![vec![2.302585, 1.609438]], vec![2.995732]).unwrap()
    }

    #[test]
    fn two_variable_example() {
        let res = solve(&example()).unwrap();
        assert_eq!(res.status, SolveStatus::Optimal);
        assert_eq!(res.optimum, Some(2));
        assert_eq!(res.solution, Some(Selection::full(2)));
        // root LP bound ceil(1.43) = 2 equals the initial incumbent
        assert_eq!(res.total_iterations, 1);
        assert_eq!(res.iterations_to_first_optimum, 0);
        assert_eq!(res.trace.len(), 2);
        assert_eq!(res.trace[1].event, TraceEvent::Pruned);
    }

    #[test]
    fn zero_rhs_selects_nothing() {
        let bilp = BilpInstance::new(3, vec![vec![0.3, 0.2, 0.1]; 2], vec![0.0, 0.0]).unwrap();
        let res = solve(&bilp).unwrap();
        assert_eq!(res.optimum, Some(0));
        assert_eq!(res.solution, Some(Selection::empty(3)));
        assert_eq!(res.iterations_to_first_optimum, 1);
    }

    #[test]
    fn infeasible_original() {
        let bilp = BilpInstance::new(1, vec![vec![0.5]], vec![1.0]).unwrap();
        let res = solve(&bilp).unwrap();
        assert_eq!(res.status, SolveStatus::Infeasible);
        assert_eq!(res.optimum, None);
        assert!(res.solution.is_none());
        assert_eq!(res.trace.len(), 1);
        assert_eq!(res.trace[0].event, TraceEvent::Infeasible);
        assert_eq!(res.trace[0].active_list_length, 0);
    }

    #[test]
    fn branching_selection() {
        assert_eq!(select_branching_variable(&[1.0, 0.43]).unwrap(), 1);
        assert_eq!(select_branching_variable(&[0.5, 0.7]).unwrap(), 0);
        assert_eq!(select_branching_variable(&[0.2, 0.8]).unwrap(), 0);
        assert!(matches!(select_branching_variable(&[]), Err(Error::EmptyFreeSet)));
    }

    #[test]
    fn branch_example() {
        let bilp = example();
        let root = Subproblem::root(&bilp);
        let (zero, one) = branch(&bilp, &root, 1).unwrap();
        assert_eq!(zero.free(), &[0]);
        assert!((zero.beta_prime()[0] - 2.995732).abs() < 1e-12);
        assert_eq!(zero.fixed_sum(), 0);
        assert!(!zero.is_satisfiable(&bilp));
        assert_eq!(one.free(), &[0]);
        assert!((one.beta_prime()[0] - 1.386294).abs() < 1e-6);
        assert_eq!(one.fixed_sum(), 1);
        assert_eq!(one.fixed_value(1), Some(true));
        assert_eq!(zero.fixed_value(1), Some(false));
        assert!(matches!(branch(&bilp, &zero, 1), Err(Error::NotFree(1))));
    }

    #[test]
    fn branch_on_useless_column() {
        let bilp = BilpInstance::new(2, vec![vec![0.0, 1.0]], vec![0.5]).unwrap();
        let (_, one) = branch(&bilp, &Subproblem::root(&bilp), 0).unwrap();
        assert_eq!(one.beta_prime(), &[0.5]);
        assert_eq!(one.fixed_sum(), 1);
    }

    #[test]
    fn branch_last_free_variable() {
        let bilp = BilpInstance::new(1, vec![vec![1.0]], vec![0.5]).unwrap();
        let (zero, one) = branch(&bilp, &Subproblem::root(&bilp), 0).unwrap();
        assert_eq!(zero.num_free(), 0);
        assert_eq!(one.num_free(), 0);
        assert_eq!(one.complete(&[]), Selection::full(1));
        assert_eq!(zero.complete(&[]), Selection::empty(1));
    }

    #[test]
    fn triangle_cover_branches() {
        let rows = vec![vec![1.0, 1.0, 0.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let bilp = BilpInstance::new(3, rows, vec![1.0; 3]).unwrap();
        let res = solve(&bilp).unwrap();
        assert_eq!(res.optimum, Some(2));
        assert_eq!(res.trace.first().unwrap().active_list_length, 1);
        assert_eq!(res.trace.last().unwrap().active_list_length, 0);
    }
}
