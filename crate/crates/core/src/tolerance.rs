//! Numerical tolerances shared by every solver component.
//!
//! Constraint checks are made on the logarithmic scale, so all of these are
//! absolute tolerances on sums of `ln(1/p)` terms or on LP values.

/// Slack allowed when testing `sum(alpha * z) >= beta`.
pub const EPS_FEAS: f64 = 1e-9;

/// Distance from 0 or 1 under which an LP value counts as integral.
pub const EPS_INT: f64 = 1e-6;

/// Subtracted before taking the ceiling of an LP objective, so that
/// `2.0000000001` bounds to 2 rather than 3.
pub const EPS_CEIL: f64 = 1e-7;

/// Maximum spread between objectives of repeated solves of the same LP.
pub const EPS_LP: f64 = 1e-8;

/// Cost differences below this are treated as ties in the greedy arg-min.
pub const EPS_TIE: f64 = 1e-12;

/// Pivot magnitude below which a tableau entry is treated as zero.
pub(crate) const EPS_PIVOT: f64 = 1e-11;
