use thiserror::Error;

/// Errors produced by construction, evaluation, and solving.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument violates its precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An evaluation point lies outside the valid domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The utility function was asked for a wealth level outside its domain.
    /// `loss` is the loss realization that produced the offending wealth.
    #[error("utility undefined at wealth {wealth} (loss x = {loss})")]
    UtilityDomain { loss: f64, wealth: f64 },

    /// Bracket expansion reached the utility-domain boundary before the
    /// objective derivative changed sign. The largest feasible bracket found
    /// is reported.
    #[error("bracket hit the utility domain boundary before a sign change; feasible bracket [{lo}, {hi}]")]
    DomainBoundedBracket { lo: f64, hi: f64 },

    /// The first-order condition has no root: the objective is strictly
    /// decreasing over the whole feasible range.
    #[error("no interior optimum: {0}")]
    NoInteriorOptimum(String),

    /// The root finder stopped without meeting the residual tolerance.
    #[error("solver did not converge within {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: u32, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
