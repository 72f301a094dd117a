//! Possibilistic coinsurance toolkit.
//!
//! Risk is a fuzzy number described by its γ-level sets, indicators are
//! weighted integrals over those levels, and expected-utility operators
//! abstract the two classical evaluators (endpoint average and interval
//! mean) together with their convex mixtures. On top of that sits the
//! coinsurance engine: premium, total-utility objective, its derivatives,
//! an exact bisection solver for the optimal rate, and the closed-form
//! approximations in terms of the Arrow–Pratt index, expected value, and
//! operator variance.
//!
//! ```
//! use possi_core::{CoinsuranceProblem, EuOperator, FuzzyNumber, UtilityFunction, WeightingFunction};
//!
//! let risk = FuzzyNumber::triangular(2.0, 4.0, 1.0).unwrap();
//! let problem = CoinsuranceProblem::new(
//!     10.0,
//!     1.0,
//!     risk,
//!     UtilityFunction::cara(),
//!     EuOperator::t1(WeightingFunction::linear()),
//! )
//! .unwrap();
//! let rate = problem.approx_rate().unwrap();
//! assert!((rate - 23.0 / 41.0).abs() < 1e-12);
//! ```

pub mod batch;
pub mod engine;
pub mod error;
pub mod fuzzy;
pub mod measures;
pub mod operators;
pub mod quadrature;
pub mod utility;
pub mod weighting;

pub use batch::{solve_all, solve_all_seq};
pub use engine::{
    combine_rates, compare_agents, AgentComparison, ClosedFormOperator, CoinsuranceProblem,
    Diagnostics, ExactSolve, RateGap, SolveReport,
};
pub use error::{Error, Result};
pub use fuzzy::{FuzzyNumber, Interval};
pub use operators::{AxiomReport, EuOperator, OperatorKind};
pub use quadrature::{gauss_legendre, GaussLegendre, QuadratureConfig};
pub use utility::{more_risk_averse, TwiceDifferentiable, UtilityFunction};
pub use weighting::WeightingFunction;
