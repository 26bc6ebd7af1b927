//! Logarithmic mapping from outage products to linear covering constraints.
//!
//! `prod_k p[k][t]^z_k <= P[t]` holds exactly when
//! `sum_k ln(1/p[k][t]) z_k >= ln(1/P[t])`, which turns the selection problem
//! into a covering program with nonnegative data.

use crate::error::{Error, Result};
use crate::instance::{ProblemInstance, Selection};
use crate::tolerance::EPS_FEAS;

/// Minimize `sum z` subject to `alpha z >= beta`, `z` binary.
///
/// `alpha` has one row per period and one column per station.
#[derive(Debug, Clone, PartialEq)]
pub struct BilpInstance {
    num_vars: usize,
    alpha: Vec<Vec<f64>>,
    beta: Vec<f64>,
}

impl BilpInstance {
    pub fn new(num_vars: usize, alpha: Vec<Vec<f64>>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::Dimension {
                what: "beta",
                expected: alpha.len(),
                actual: beta.len(),
            });
        }
        for (t, row) in alpha.iter().enumerate() {
            if row.len() != num_vars {
                return Err(Error::Dimension {
                    what: "alpha row",
                    expected: num_vars,
                    actual: row.len(),
                });
            }
            if let Some(k) = row.iter().position(|a| !(a.is_finite() && *a >= 0.0)) {
                return Err(Error::parameter(
                    format!("alpha[{t}][{k}]"),
                    "coefficients must be finite and nonnegative",
                ));
            }
        }
        if let Some(t) = beta.iter().position(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::parameter(
                format!("beta[{t}]"),
                "right-hand sides must be finite and nonnegative",
            ));
        }
        Ok(Self {
            num_vars,
            alpha,
            beta,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.beta.len()
    }

    pub fn alpha(&self) -> &[Vec<f64>] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Whether selecting every variable satisfies all rows.
    pub fn is_satisfiable(&self) -> bool {
        self.alpha
            .iter()
            .zip(&self.beta)
            .all(|(row, &b)| row.iter().sum::<f64>() >= b - EPS_FEAS)
    }
}

/// `alpha[t][k] = ln(1/p[k][t])`, `beta[t] = ln(1/P[t])`.
pub fn to_bilp(instance: &ProblemInstance) -> BilpInstance {
    let alpha = (0..instance.num_periods())
        .map(|t| {
            (0..instance.num_stations())
                .map(|k| log_inverse(instance.outage(k, t)))
                .collect()
        })
        .collect();
    let beta = instance
        .required_outage()
        .iter()
        .map(|&p| log_inverse(p))
        .collect();
    BilpInstance::new(instance.num_stations(), alpha, beta)
        .expect("validated probabilities map to finite nonnegative logs")
}

// -ln(p) is -0.0 at p = 1; normalize so the stored value is +0.0.
fn log_inverse(p: f64) -> f64 {
    (-p.ln()).max(0.0)
}

/// Probability that at least one selected station is available in `period`.
/// An empty selection has availability 0.
pub fn availability(instance: &ProblemInstance, selection: &Selection, period: usize) -> f64 {
    let joint_outage: f64 = selection
        .indices()
        .into_iter()
        .map(|s| instance.outage(s, period))
        .product();
    1.0 - joint_outage
}

/// `sum_k alpha[t][k] z_k >= beta[t] - EPS_FEAS` for every row.
///
/// Panics if the selection length differs from the number of variables.
pub fn is_feasible(bilp: &BilpInstance, z: &Selection) -> bool {
    assert_eq!(z.len(), bilp.num_vars(), "selection length mismatch");
    bilp.alpha().iter().zip(bilp.beta()).all(|(row, &b)| {
        let lhs: f64 = row
            .iter()
            .zip(z.as_slice())
            .filter(|(_, &c)| c)
            .map(|(a, _)| a)
            .sum();
        lhs >= b - EPS_FEAS
    })
}
