//! Batch solving for parameter sweeps and operator comparisons.
//!
//! Problems are independent and immutable, so a sweep is a data-parallel
//! map. With the `parallel` feature (on by default) `solve_all` fans out
//! over a work-stealing pool; without it the same call runs sequentially.
//! Output order always matches input order, so reports are deterministic
//! either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::engine::{CoinsuranceProblem, SolveReport};
use crate::error::Result;

/// Solve every problem, in input order.
#[cfg(feature = "parallel")]
pub fn solve_all(problems: &[CoinsuranceProblem], tol: f64) -> Vec<Result<SolveReport>> {
    problems.par_iter().map(|p| p.solve_report(tol)).collect()
}

/// Solve every problem, in input order.
#[cfg(not(feature = "parallel"))]
pub fn solve_all(problems: &[CoinsuranceProblem], tol: f64) -> Vec<Result<SolveReport>> {
    solve_all_seq(problems, tol)
}

/// Always-sequential variant, kept public so the two execution paths can
/// be compared directly in benchmarks and tests.
pub fn solve_all_seq(problems: &[CoinsuranceProblem], tol: f64) -> Vec<Result<SolveReport>> {
    problems.iter().map(|p| p.solve_report(tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::CoinsuranceProblem;
    use crate::fuzzy::FuzzyNumber;
    use crate::operators::EuOperator;
    use crate::utility::UtilityFunction;
    use crate::weighting::WeightingFunction;

    fn grid(n: usize) -> Vec<CoinsuranceProblem> {
        let risk = FuzzyNumber::triangular(2.0, 1.0, 1.0).unwrap();
        (0..n)
            .map(|k| {
                let lam = 0.4 * k as f64 / (n - 1) as f64;
                CoinsuranceProblem::new(
                    10.0,
                    lam,
                    risk,
                    UtilityFunction::cara(),
                    EuOperator::t1(WeightingFunction::linear()),
                )
                .unwrap()
            })
            .collect()
    }

    #[test]
    fn parallel_and_sequential_agree_in_order_and_value() {
        let problems = grid(33);
        let par = solve_all(&problems, 1e-10);
        let seq = solve_all_seq(&problems, 1e-10);
        assert_eq!(par.len(), seq.len());
        for (a, b) in par.iter().zip(&seq) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert_eq!(a.beta_approx, b.beta_approx);
            assert_eq!(a.beta_exact, b.beta_exact);
            assert_eq!(a.e_f, b.e_f);
        }
        // first grid point is the fair premium: full coverage exactly
        assert_eq!(par[0].as_ref().unwrap().beta_exact, Some(1.0));
    }
}
