//! Reference solver by subset enumeration, smallest cardinality first.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::Selection;
use crate::transform::{is_feasible, BilpInstance};

pub const DEFAULT_MAX_VARS: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// `None` when even the full set is infeasible.
    pub optimum: Option<usize>,
    pub selection: Option<Selection>,
    pub subsets_checked: u64,
}

/// Enumerates subsets by increasing size, each size in lexicographic order,
/// and returns the first feasible one. Refuses instances with more than
/// `max_vars` variables.
pub fn solve_exhaustive(bilp: &BilpInstance, max_vars: usize) -> Result<OracleResult> {
    let k = bilp.num_vars();
    if k > max_vars {
        return Err(Error::SizeGuard {
            num_vars: k,
            max_vars,
        });
    }
    let mut checked = 0u64;
    for size in 0..=k {
        for subset in (0..k).combinations(size) {
            checked += 1;
            let selection = Selection::from_indices(k, subset);
            if is_feasible(bilp, &selection) {
                return Ok(OracleResult {
                    optimum: Some(size),
                    selection: Some(selection),
                    subsets_checked: checked,
                });
            }
        }
    }
    Ok(OracleResult {
        optimum: None,
        selection: None,
        subsets_checked: checked,
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    #[test]
    fn two_variable_example() {
        let bilp = BilpInstance::new(2, vec![vec![2.302585, 1.609438]], vec![2.995732]).unwrap();
        let res = solve_exhaustive(&bilp, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(res.optimum, Some(2));
        assert_eq!(res.selection, Some(Selection::full(2)));
        assert_eq!(res.subsets_checked, 4);
    }

    #[test]
    fn zero_rhs() {
        let bilp = BilpInstance::new(3, vec![vec![1.0; 3]], vec![0.0]).unwrap();
        let res = solve_exhaustive(&bilp, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(res.optimum, Some(0));
        assert_eq!(res.selection, Some(Selection::empty(3)));
    }

    #[test]
    fn infeasible() {
        let bilp = BilpInstance::new(1, vec![vec![0.5]], vec![1.0]).unwrap();
        let res = solve_exhaustive(&bilp, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(res.optimum, None);
        assert_eq!(res.subsets_checked, 2);
    }

    #[test]
    fn lexicographic_tie_break() {
        // any single variable works; the first one wins
        let bilp = BilpInstance::new(3, vec![vec![1.0; 3]], vec![1.0]).unwrap();
        let res = solve_exhaustive(&bilp, DEFAULT_MAX_VARS).unwrap();
        assert_eq!(res.selection, Some(Selection::from_indices(3, [0])));
    }

    #[test]
    fn size_guard() {
        let bilp = BilpInstance::new(4, vec![vec![1.0; 4]], vec![1.0]).unwrap();
        assert!(matches!(
            solve_exhaustive(&bilp, 3),
            Err(Error::SizeGuard { num_vars: 4, max_vars: 3 })
        ));
    }
}
