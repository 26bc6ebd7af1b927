//! LP relaxation of a covering subproblem:
//!
//! ```text
//! minimize    sum_v z_v
//! subject to  sum_v alpha[t][v] z_v >= beta'[t]   for every row t
//!             0 <= z_v <= 1
//! ```
//!
//! Solved with a dense bounded-variable primal simplex. Each row gets a
//! surplus variable `s_t = alpha_t . z - beta'_t >= 0`, so with every `z_v` at
//! its upper bound the surplus basis is primal feasible whenever the LP is
//! feasible at all (the all-ones point dominates every row because
//! `alpha >= 0`). No phase one is needed. Entering and leaving variables are
//! chosen by Bland's lowest-index rule.

use crate::error::{Error, Result};
use crate::tolerance::{EPS_CEIL, EPS_FEAS, EPS_INT, EPS_PIVOT};

const EPS_REDUCED_COST: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// Free-variable values clamped to `[0, 1]`. Empty when infeasible.
    pub values: Vec<f64>,
    /// `sum(values)`; `+inf` when infeasible.
    pub objective: f64,
    pub status: LpStatus,
    /// Simplex pivots plus bound flips performed.
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    fn infeasible() -> Self {
        Self {
            values: Vec::new(),
            objective: f64::INFINITY,
            status: LpStatus::Infeasible,
            pivots: 0,
        }
    }
}

/// Solves the relaxation over `num_free` variables.
///
/// `beta_prime` may contain negative entries; such rows are implied by the
/// bounds and are dropped. The LP is reported infeasible exactly when some
/// row sum falls short of its right-hand side by more than [`EPS_FEAS`].
pub fn solve_lp(num_free: usize, alpha_free: &[Vec<f64>], beta_prime: &[f64]) -> Result<LpSolution> {
    if alpha_free.len() != beta_prime.len() {
        return Err(Error::Dimension {
            what: "beta_prime",
            expected: alpha_free.len(),
            actual: beta_prime.len(),
        });
    }
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (row, &b) in alpha_free.iter().zip(beta_prime) {
        if row.len() != num_free {
            return Err(Error::Dimension {
                what: "alpha_free row",
                expected: num_free,
                actual: row.len(),
            });
        }
        let reach: f64 = row.iter().sum();
        if reach < b - EPS_FEAS {
            return Ok(LpSolution::infeasible());
        }
        if b > 0.0 {
            rows.push(row.as_slice());
            // Clamp so that z = 1 is exactly feasible for the simplex start.
            rhs.push(b.min(reach));
        }
    }
    Simplex::new(num_free, &rows, &rhs).run()
}

/// True when every value lies within [`EPS_INT`] of 0 or 1.
pub fn is_integral(solution: &LpSolution) -> bool {
    solution
        .values
        .iter()
        .all(|&v| v <= EPS_INT || v >= 1.0 - EPS_INT)
}

/// `ceil(objective + fixed_sum - EPS_CEIL)`, the integer bound on the
/// subproblem optimum.
pub fn lower_bound(solution: &LpSolution, fixed_sum: usize) -> usize {
    let bound = (solution.objective + fixed_sum as f64 - EPS_CEIL).ceil();
    if bound <= 0.0 {
        0
    } else {
        bound as usize
    }
}

struct Simplex {
    num_free: usize,
    /// `B^-1 A` for the extended matrix `[A | -I]`, one row per constraint.
    tableau: Vec<Vec<f64>>,
    reduced: Vec<f64>,
    values: Vec<f64>,
    upper: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    at_upper: Vec<bool>,
}

impl Simplex {
    fn new(num_free: usize, rows: &[&[f64]], rhs: &[f64]) -> Self {
        let m = rows.len();
        let n = num_free + m;
        let mut tableau = vec![vec![0.0; n]; m];
        let mut values = vec![0.0; n];
        for (i, row) in rows.iter().enumerate() {
            for (v, &a) in row.iter().enumerate() {
                tableau[i][v] = -a;
            }
            tableau[i][num_free + i] = 1.0;
            let reach: f64 = row.iter().sum();
            values[num_free + i] = reach - rhs[i];
        }
        for v in values.iter_mut().take(num_free) {
            *v = 1.0;
        }
        let mut reduced = vec![0.0; n];
        reduced[..num_free].fill(1.0);
        let mut upper = vec![f64::INFINITY; n];
        upper[..num_free].fill(1.0);
        let mut is_basic = vec![false; n];
        is_basic[num_free..].fill(true);
        let mut at_upper = vec![false; n];
        at_upper[..num_free].fill(true);
        Self {
            num_free,
            tableau,
            reduced,
            values,
            upper,
            basis: (num_free..n).collect(),
            is_basic,
            at_upper,
        }
    }

    fn entering(&self) -> Option<(usize, f64)> {
        (0..self.values.len()).find_map(|j| {
            if self.is_basic[j] {
                return None;
            }
            let d = self.reduced[j];
            if self.at_upper[j] && d > EPS_REDUCED_COST {
                Some((j, -1.0))
            } else if !self.at_upper[j] && d < -EPS_REDUCED_COST {
                Some((j, 1.0))
            } else {
                None
            }
        })
    }

    fn run(mut self) -> Result<LpSolution> {
        let n = self.values.len();
        let limit = 10_000 + 50 * n * n;
        let mut pivots = 0;
        while let Some((enter, dir)) = self.entering() {
            pivots += 1;
            if pivots > limit {
                return Err(Error::IterationLimit(limit));
            }
            // Ratio test. `None` row means the entering variable flips bounds.
            let mut step = self.upper[enter];
            let mut leave: Option<(usize, bool)> = None;
            for (i, row) in self.tableau.iter().enumerate() {
                let rate = dir * row[enter];
                let basic = self.basis[i];
                let (limit_here, to_upper) = if rate > EPS_PIVOT {
                    (self.values[basic].max(0.0) / rate, false)
                } else if rate < -EPS_PIVOT && self.upper[basic].is_finite() {
                    (((self.upper[basic] - self.values[basic]).max(0.0)) / -rate, true)
                } else {
                    continue;
                };
                let better = match leave {
                    _ if limit_here < step => true,
                    Some((r, _)) if limit_here == step => basic < self.basis[r],
                    _ => false,
                };
                if better {
                    step = limit_here;
                    leave = Some((i, to_upper));
                }
            }
            if step.is_infinite() {
                // Cannot happen for a covering LP: the objective is bounded
                // below by zero.
                return Err(Error::IterationLimit(pivots));
            }

            for (i, row) in self.tableau.iter().enumerate() {
                self.values[self.basis[i]] -= step * dir * row[enter];
            }
            self.values[enter] += dir * step;

            match leave {
                None => {
                    self.at_upper[enter] = !self.at_upper[enter];
                    self.values[enter] = if self.at_upper[enter] {
                        self.upper[enter]
                    } else {
                        0.0
                    };
                }
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    self.values[out] = if to_upper { self.upper[out] } else { 0.0 };
                    self.at_upper[out] = to_upper;
                    self.is_basic[out] = false;
                    self.is_basic[enter] = true;
                    self.at_upper[enter] = false;
                    self.basis[r] = enter;
                    self.pivot(r, enter);
                }
            }
        }

        let values: Vec<f64> = self.values[..self.num_free]
            .iter()
            .map(|v| v.clamp(0.0, 1.0))
            .collect();
        let objective = values.iter().sum();
        Ok(LpSolution {
            values,
            objective,
            status: LpStatus::Optimal,
            pivots,
        })
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.tableau[r][col];
        for a in self.tableau[r].iter_mut() {
            *a /= p;
        }
        let pivot_row = self.tableau[r].clone();
        for (i, row) in self.tableau.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col];
            if factor != 0.0 {
                for (a, &b) in row.iter_mut().zip(&pivot_row) {
                    *a -= factor * b;
                }
            }
        }
        let factor = self.reduced[col];
        for (d, &b) in self.reduced.iter_mut().zip(&pivot_row) {
            *d -= factor * b;
        }
    }
}
