//! The simplex is checked against brute-force vertex enumeration: every
//! basic point of `{A z >= b, 0 <= z <= 1}` is obtained by making `V` of the
//! constraints tight and solving the square system.

use gsopt::lp::{is_integral, lower_bound, solve_lp, LpStatus};
use gsopt::tolerance::{EPS_FEAS, EPS_LP};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (a, b) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *a -= f * b;
                }
                rhs[r] -= f * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

/// Minimum of `sum z` over all feasible vertices, or `None` if there are none.
fn vertex_enumeration(v: usize, alpha: &[Vec<f64>], beta: &[f64]) -> Option<f64> {
    let mut planes: Vec<(Vec<f64>, f64)> = alpha.iter().cloned().zip(beta.iter().copied()).collect();
    for i in 0..v {
        let mut e = vec![0.0; v];
        e[i] = 1.0;
        planes.push((e.clone(), 0.0));
        planes.push((e, 1.0));
    }
    let feasible = |z: &[f64]| {
        z.iter().all(|&x| (-1e-9..=1.0 + 1e-9).contains(&x))
            && alpha
                .iter()
                .zip(beta)
                .all(|(row, &b)| row.iter().zip(z).map(|(a, x)| a * x).sum::<f64>() >= b - 1e-9)
    };
    if v == 0 {
        return feasible(&[]).then_some(0.0);
    }
    planes
        .iter()
        .combinations(v)
        .filter_map(|tight| {
            let m = tight.iter().map(|(a, _)| a.clone()).collect();
            let r = tight.iter().map(|(_, b)| *b).collect();
            solve_square(m, r)
        })
        .filter(|z| feasible(z))
        .map(|z| z.iter().sum::<f64>())
        .min_by(f64::total_cmp)
}

fn random_lp(rng: &mut ChaCha8Rng) -> (usize, Vec<Vec<f64>>, Vec<f64>) {
    let v = rng.random_range(1..=4);
    let t = rng.random_range(1..=3);
    let alpha: Vec<Vec<f64>> = (0..t)
        .map(|_| {
            (0..v)
                .map(|_| if rng.random_bool(0.2) { 0.0 } else { rng.random_range(0.0..2.5) })
                .collect()
        })
        .collect();
    let beta = alpha
        .iter()
        .map(|row| row.iter().sum::<f64>() * rng.random_range(-0.2..1.2))
        .collect();
    (v, alpha, beta)
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut optimal = 0;
    for case in 0..3000 {
        let (v, alpha, beta) = random_lp(&mut rng);
        let sol = solve_lp(v, &alpha, &beta).unwrap();
        match vertex_enumeration(v, &alpha, &beta) {
            Some(best) => {
                optimal += 1;
                assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
                assert!(
                    (sol.objective - best).abs() < 1e-7,
                    "case {case}: simplex {} vs vertices {best}",
                    sol.objective
                );
                for (row, &b) in alpha.iter().zip(&beta) {
                    let lhs: f64 = row.iter().zip(&sol.values).map(|(a, x)| a * x).sum();
                    assert!(lhs >= b - EPS_FEAS, "case {case}: row violated");
                }
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible, "case {case}"),
        }
    }
    assert!(optimal > 2000);
}

#[test]
fn single_row_matches_fractional_knapsack() {
    // one row: fill by decreasing coefficient, the last one fractionally
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let v = rng.random_range(1..=12);
        let row: Vec<f64> = (0..v).map(|_| rng.random_range(0.01..3.0)).collect();
        let b = row.iter().sum::<f64>() * rng.random_range(0.0..1.0);
        let mut sorted = row.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let (mut need, mut expected) = (b, 0.0);
        for a in sorted {
            if need <= 0.0 {
                break;
            }
            let take = (need / a).min(1.0);
            expected += take;
            need -= take * a;
        }
        let sol = solve_lp(v, std::slice::from_ref(&row), &[b]).unwrap();
        assert!((sol.objective - expected).abs() < 1e-9);
    }
}

#[test]
fn feasibility_status_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..2000 {
        let (v, alpha, beta) = random_lp(&mut rng);
        let closed_form = alpha
            .iter()
            .zip(&beta)
            .all(|(row, &b)| row.iter().sum::<f64>() >= b - EPS_FEAS);
        let sol = solve_lp(v, &alpha, &beta).unwrap();
        assert_eq!(sol.is_optimal(), closed_form);
    }
}

#[test]
fn objective_range_and_determinism() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..1000 {
        let v = rng.random_range(1..=20);
        let t = rng.random_range(1..=12);
        let alpha: Vec<Vec<f64>> = (0..t)
            .map(|_| (0..v).map(|_| -rng.random_range(0.1f64..1.0).ln()).collect())
            .collect();
        let beta: Vec<f64> = alpha
            .iter()
            .map(|row| row.iter().sum::<f64>() * rng.random_range(0.0..1.0))
            .collect();
        let fixed = rng.random_range(0..5);
        let a = solve_lp(v, &alpha, &beta).unwrap();
        let b = solve_lp(v, &alpha, &beta).unwrap();
        assert!((a.objective - b.objective).abs() < EPS_LP);
        assert!(a.objective >= 0.0 && a.objective <= v as f64 + 1e-12);
        assert!(lower_bound(&a, fixed) <= v + fixed);
        assert!(a.values.iter().all(|x| (0.0..=1.0).contains(x)));
        if is_integral(&a) {
            assert!((a.objective - a.objective.round()).abs() < 1e-5 * v as f64);
        }
    }
}
