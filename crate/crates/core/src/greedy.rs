//! Cost-function greedy for covering subproblems.
//!
//! Starting from the zero vector, each pass sets to one the remaining free
//! variable whose addition leaves the smallest total constraint violation,
//! until no row is violated. The result is a feasible point and therefore an
//! upper bound on the subproblem optimum.

use crate::error::{Error, Result};
use crate::tolerance::{EPS_FEAS, EPS_TIE};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyResult {
    pub z_free: Vec<bool>,
    pub cardinality: usize,
    /// Passes of the selection loop; at most the number of free variables.
    pub iterations: usize,
}

// Deficits inside the feasibility tolerance count as satisfied.
fn violation(deficit: f64) -> f64 {
    if deficit > EPS_FEAS {
        deficit
    } else {
        0.0
    }
}

/// Total violation `sum_t max(beta'[t] - alpha[t] . z, 0)`; zero exactly when
/// `z` is feasible up to [`EPS_FEAS`].
pub fn cost_function(alpha_free: &[Vec<f64>], z: &[bool], beta_prime: &[f64]) -> f64 {
    assert_eq!(alpha_free.len(), beta_prime.len(), "row count mismatch");
    alpha_free
        .iter()
        .zip(beta_prime)
        .map(|(row, &b)| {
            assert_eq!(row.len(), z.len(), "column count mismatch");
            let lhs: f64 = row.iter().zip(z).filter(|(_, &on)| on).map(|(a, _)| a).sum();
            violation(b - lhs)
        })
        .sum()
}

/// Runs the greedy over `num_free` variables.
///
/// Fails with [`Error::InfeasibleInput`] when the all-ones vector does not
/// satisfy every row, since the loop could then never reach zero violation.
pub fn run_greedy(num_free: usize, alpha_free: &[Vec<f64>], beta_prime: &[f64]) -> Result<GreedyResult> {
    if alpha_free.len() != beta_prime.len() {
        return Err(Error::Dimension {
            what: "beta_prime",
            expected: alpha_free.len(),
            actual: beta_prime.len(),
        });
    }
    for (t, (row, &b)) in alpha_free.iter().zip(beta_prime).enumerate() {
        if row.len() != num_free {
            return Err(Error::Dimension {
                what: "alpha_free row",
                expected: num_free,
                actual: row.len(),
            });
        }
        let reachable: f64 = row.iter().sum();
        if reachable < b - EPS_FEAS {
            return Err(Error::InfeasibleInput {
                period: t,
                reachable,
                required: b,
            });
        }
    }

    let mut z = vec![false; num_free];
    let mut deficits = beta_prime.to_vec();
    let mut cost: f64 = deficits.iter().map(|&d| violation(d)).sum();
    let mut iterations = 0;

    while cost > 0.0 {
        let mut best: Option<(usize, f64)> = None;
        for r in (0..num_free).filter(|&r| !z[r]) {
            let after: f64 = deficits
                .iter()
                .zip(alpha_free)
                .map(|(&d, row)| violation(d - row[r]))
                .sum();
            // Candidates are scanned in index order, so a near-tie keeps the
            // lower index.
            if best.is_none_or(|(_, c)| after < c - EPS_TIE) {
                best = Some((r, after));
            }
        }
        let Some((pick, after)) = best else {
            // Only reachable through accumulated rounding in the deficits.
            return Err(Error::InfeasibleInput {
                period: deficits.iter().position(|&d| d > EPS_FEAS).unwrap_or(0),
                reachable: 0.0,
                required: cost,
            });
        };
        z[pick] = true;
        for (d, row) in deficits.iter_mut().zip(alpha_free) {
            *d -= row[pick];
        }
        cost = after;
        iterations += 1;
    }

    Ok(GreedyResult {
        cardinality: z.iter().filter(|&&on| on).count(),
        z_free: z,
        iterations,
    })
}
