//! Problem-file schema: one JSON document per problem.
//!
//! ```json
//! {
//!   "weighting": {"kind": "power", "exponent": 1.0},
//!   "risk": {"kind": "triangular", "a": 2.0, "alpha": 4.0, "beta": 1.0},
//!   "utility": {"kind": "cara"},
//!   "operator": {"kind": "t1"},
//!   "w0": 10.0,
//!   "lambda": 1.0,
//!   "quadrature": {"outer": 64, "inner": 32}
//! }
//! ```

use serde::{Deserialize, Serialize};

use possi_core::{
    CoinsuranceProblem, EuOperator, FuzzyNumber, QuadratureConfig, UtilityFunction,
    WeightingFunction,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub weighting: WeightingSpec,
    pub risk: RiskSpec,
    pub utility: UtilitySpec,
    pub operator: OperatorSpec,
    pub w0: f64,
    pub lambda: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightingSpec {
    Power { exponent: f64 },
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RiskSpec {
    Triangular { a: f64, alpha: f64, beta: f64 },
    Trapezoidal { core_lo: f64, core_hi: f64, alpha: f64, beta: f64 },
    Crisp { a: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum UtilitySpec {
    Hara { zeta: f64, eta: f64, gamma: f64 },
    Crra { gamma: f64 },
    Log,
    Cara,
    Quadratic { b: f64, c: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OperatorSpec {
    T1,
    T2,
    Mix {
        c: f64,
        left: Box<OperatorSpec>,
        right: Box<OperatorSpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub outer: usize,
    pub inner: usize,
}

impl WeightingSpec {
    pub fn build(&self) -> Result<WeightingFunction, possi_core::Error> {
        match *self {
            WeightingSpec::Power { exponent } => WeightingFunction::power(exponent),
            WeightingSpec::Uniform => Ok(WeightingFunction::uniform()),
        }
    }
}

impl RiskSpec {
    pub fn build(&self) -> Result<FuzzyNumber, possi_core::Error> {
        match *self {
            RiskSpec::Triangular { a, alpha, beta } => FuzzyNumber::triangular(a, alpha, beta),
            RiskSpec::Trapezoidal {
                core_lo,
                core_hi,
                alpha,
                beta,
            } => FuzzyNumber::trapezoidal(core_lo, core_hi, alpha, beta),
            RiskSpec::Crisp { a } => FuzzyNumber::crisp(a),
        }
    }
}

impl UtilitySpec {
    pub fn build(&self) -> Result<UtilityFunction, possi_core::Error> {
        match *self {
            UtilitySpec::Hara { zeta, eta, gamma } => UtilityFunction::hara(zeta, eta, gamma),
            UtilitySpec::Crra { gamma } => UtilityFunction::crra(gamma),
            UtilitySpec::Log => Ok(UtilityFunction::log()),
            UtilitySpec::Cara => Ok(UtilityFunction::cara()),
            UtilitySpec::Quadratic { b, c } => UtilityFunction::quadratic(b, c),
        }
    }
}

impl OperatorSpec {
    /// Instantiate with the file's weighting at every leaf.
    pub fn build(
        &self,
        weighting: &WeightingFunction,
        quadrature: QuadratureConfig,
    ) -> Result<EuOperator, possi_core::Error> {
        let op = match self {
            OperatorSpec::T1 => EuOperator::t1(weighting.clone()),
            OperatorSpec::T2 => EuOperator::t2(weighting.clone()),
            OperatorSpec::Mix { c, left, right } => EuOperator::convex_combination(
                *c,
                left.build(weighting, quadrature)?,
                right.build(weighting, quadrature)?,
            )?,
        };
        Ok(op.with_quadrature(quadrature))
    }

    /// Short display form used in record rows.
    pub fn label(&self) -> String {
        match self {
            OperatorSpec::T1 => "t1".to_string(),
            OperatorSpec::T2 => "t2".to_string(),
            OperatorSpec::Mix { c, left, right } => {
                if matches!(**left, OperatorSpec::T1) && matches!(**right, OperatorSpec::T2) {
                    format!("mix:{c}")
                } else {
                    format!("mix:{c}({},{})", left.label(), right.label())
                }
            }
        }
    }
}

impl ProblemFile {
    pub fn build_problem(
        &self,
        quadrature: QuadratureConfig,
    ) -> Result<CoinsuranceProblem, possi_core::Error> {
        let weighting = self.weighting.build()?;
        let operator = self.operator.build(&weighting, quadrature)?;
        CoinsuranceProblem::new(
            self.w0,
            self.lambda,
            self.risk.build()?,
            self.utility.build()?,
            operator,
        )
    }
}
