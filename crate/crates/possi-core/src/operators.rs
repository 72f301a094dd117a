//! Expected-utility operators over fuzzy numbers.
//!
//! An operator maps a fuzzy number and a continuous function to a real and
//! satisfies four axioms: it reproduces the weighted expected value on the
//! identity, fixes constants, is linear in the function argument, and is
//! monotone. The two concrete evaluators average the level-set endpoints
//! (`t1`) or the whole level interval (`t2`); convex mixtures of operators
//! are again operators.

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::measures;
use crate::quadrature::QuadratureConfig;
use crate::utility::TwiceDifferentiable;
use crate::weighting::WeightingFunction;

#[derive(Debug, Clone)]
pub struct EuOperator {
    kind: OperatorKind,
    quadrature: QuadratureConfig,
}

#[derive(Debug, Clone)]
pub enum OperatorKind {
    /// Endpoint average: evaluate(A, g) integrates ½[g(a1) + g(a2)] f(γ).
    T1(WeightingFunction),
    /// Interval mean: evaluate(A, g) integrates the level mean of g.
    T2(WeightingFunction),
    /// weight·left + (1−weight)·right; any real weight is constructible,
    /// but monotonicity is only guaranteed for weight ∈ [0, 1].
    Mix {
        weight: f64,
        left: Box<EuOperator>,
        right: Box<EuOperator>,
    },
}

impl EuOperator {
    pub fn t1(f: WeightingFunction) -> Self {
        Self {
            kind: OperatorKind::T1(f),
            quadrature: QuadratureConfig::default(),
        }
    }

    pub fn t2(f: WeightingFunction) -> Self {
        Self {
            kind: OperatorKind::T2(f),
            quadrature: QuadratureConfig::default(),
        }
    }

    /// weight·left + (1−weight)·right. The mixture inherits the
    /// differentiation-commuting property from its parts, so first-order
    /// conditions remain valid for it.
    pub fn convex_combination(weight: f64, left: EuOperator, right: EuOperator) -> Result<Self> {
        if !weight.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "mixture weight must be finite (got {weight})"
            )));
        }
        let quadrature = left.quadrature;
        Ok(Self {
            kind: OperatorKind::Mix {
                weight,
                left: Box::new(left),
                right: Box::new(right),
            },
            quadrature,
        })
    }

    /// Replace the quadrature configuration on this operator and all parts.
    pub fn with_quadrature(self, q: QuadratureConfig) -> Self {
        let kind = match self.kind {
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => OperatorKind::Mix {
                weight,
                left: Box::new(left.with_quadrature(q)),
                right: Box::new(right.with_quadrature(q)),
            },
            leaf => leaf,
        };
        Self {
            kind,
            quadrature: q,
        }
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        self.quadrature
    }

    /// Both base evaluators are strictly monotone; a mixture keeps that
    /// only when its weight stays inside [0, 1].
    pub fn strictly_increasing(&self) -> bool {
        match &self.kind {
            OperatorKind::T1(_) | OperatorKind::T2(_) => true,
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => {
                (0.0..=1.0).contains(weight)
                    && left.strictly_increasing()
                    && right.strictly_increasing()
            }
        }
    }

    /// True when every leaf weighting is f(t) = 2t, the precondition of the
    /// triangular closed forms.
    pub fn weighting_is_linear(&self) -> bool {
        match &self.kind {
            OperatorKind::T1(f) | OperatorKind::T2(f) => f.is_linear(),
            OperatorKind::Mix { left, right, .. } => {
                left.weighting_is_linear() && right.weighting_is_linear()
            }
        }
    }

    pub fn try_evaluate(
        &self,
        a: &FuzzyNumber,
        g: &dyn Fn(f64) -> Result<f64>,
    ) -> Result<f64> {
        match &self.kind {
            OperatorKind::T1(f) => measures::expected_utility_e1(f, g, a, &self.quadrature),
            OperatorKind::T2(f) => measures::expected_utility_e2(f, g, a, &self.quadrature),
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => Ok(weight * left.try_evaluate(a, g)? + (1.0 - weight) * right.try_evaluate(a, g)?),
        }
    }

    pub fn evaluate<F: Fn(f64) -> f64>(&self, a: &FuzzyNumber, g: F) -> f64 {
        self.try_evaluate(a, &|x| Ok(g(x)))
            .expect("infallible integrand")
    }

    /// The operator's own expected value of A: closed form at the leaves
    /// when available, mixture-combined otherwise. Coincides with
    /// evaluate(A, id) by the identity axiom.
    pub fn expected_value(&self, a: &FuzzyNumber) -> f64 {
        match &self.kind {
            OperatorKind::T1(f) | OperatorKind::T2(f) => {
                measures::expected_value(f, a, &self.quadrature)
            }
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => weight * left.expected_value(a) + (1.0 - weight) * right.expected_value(a),
        }
    }

    /// evaluate(A, (x − E)²) before clamping; may dip a hair below zero
    /// from quadrature rounding.
    pub fn t_variance_raw(&self, a: &FuzzyNumber) -> f64 {
        match &self.kind {
            OperatorKind::T1(f) => measures::variance_1_quadrature(f, a, &self.quadrature),
            OperatorKind::T2(f) => measures::variance_2_quadrature(f, a, &self.quadrature),
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => weight * left.t_variance_raw(a) + (1.0 - weight) * right.t_variance_raw(a),
        }
    }

    /// Operator variance, clamped at zero. For the base operators with the
    /// f(t) = 2t weight and triangular A this takes the closed form.
    pub fn t_variance(&self, a: &FuzzyNumber) -> f64 {
        match &self.kind {
            OperatorKind::T1(f) => measures::variance_1(f, a, &self.quadrature),
            OperatorKind::T2(f) => measures::variance_2(f, a, &self.quadrature),
            OperatorKind::Mix {
                weight,
                left,
                right,
            } => (weight * left.t_variance(a) + (1.0 - weight) * right.t_variance(a)).max(0.0),
        }
    }

    /// T(A, u·v) − T(A, u)·T(A, v). By linearity and the constant axiom
    /// this equals T applied to the product of the centered functions.
    pub fn try_t_covariance(
        &self,
        a: &FuzzyNumber,
        u: &dyn Fn(f64) -> Result<f64>,
        v: &dyn Fn(f64) -> Result<f64>,
    ) -> Result<f64> {
        let tu = self.try_evaluate(a, u)?;
        let tv = self.try_evaluate(a, v)?;
        let tuv = self.try_evaluate(a, &|x| Ok(u(x)? * v(x)?))?;
        Ok(tuv - tu * tv)
    }

    pub fn t_covariance<F, G>(&self, a: &FuzzyNumber, u: F, v: G) -> f64
    where
        F: Fn(f64) -> f64,
        G: Fn(f64) -> f64,
    {
        self.try_t_covariance(a, &|x| Ok(u(x)), &|x| Ok(v(x)))
            .expect("infallible integrands")
    }

    /// u(E) + ½ u''(E) Var_T(A): the second-order expansion of
    /// evaluate(A, u) around the expected value. Exact when u'' is constant.
    pub fn second_order_approx<U: TwiceDifferentiable + ?Sized>(
        &self,
        a: &FuzzyNumber,
        u: &U,
    ) -> Result<f64> {
        let m = self.expected_value(a);
        Ok(u.value(m)? + 0.5 * u.second_derivative(m)? * self.t_variance(a))
    }

    /// Measure the worst violation of each operator axiom over a probe set.
    pub fn check_axioms(
        &self,
        a: &FuzzyNumber,
        probes: &[&dyn Fn(f64) -> f64],
        tol: f64,
    ) -> AxiomReport {
        let hull = a.support();

        let identity = (self.evaluate(a, |x| x) - self.expected_value(a)).abs();

        let mut constants: f64 = 0.0;
        for c in [-3.0, 0.5, 7.0] {
            constants = constants.max((self.evaluate(a, |_| c) - c).abs());
        }

        let mut linearity: f64 = 0.0;
        for (i, g) in probes.iter().enumerate() {
            for h in probes.iter().skip(i) {
                for (ca, cb) in [(2.0, -3.0), (0.5, 1.5)] {
                    let combined = self.evaluate(a, |x| ca * g(x) + cb * h(x));
                    let split = ca * self.evaluate(a, g) + cb * self.evaluate(a, h);
                    linearity = linearity.max((combined - split).abs());
                }
            }
        }

        // Monotonicity over probe pairs that are ordered on a sampled grid,
        // plus a synthesized dominating pair per probe.
        const GRID: usize = 512;
        let sample = |g: &dyn Fn(f64) -> f64| -> Vec<f64> {
            (0..=GRID)
                .map(|k| {
                    let x = hull.lo + hull.width() * k as f64 / GRID as f64;
                    g(x)
                })
                .collect()
        };
        let mut monotonicity: f64 = 0.0;
        for g in probes {
            for h in probes {
                let gs = sample(g);
                let hs = sample(h);
                if gs.iter().zip(&hs).all(|(a, b)| a <= b) {
                    let tg = self.evaluate(a, g);
                    let th = self.evaluate(a, h);
                    monotonicity = monotonicity.max(tg - th);
                }
            }
            let mid = 0.5 * (hull.lo + hull.hi);
            let tg = self.evaluate(a, g);
            let tdom = self.evaluate(a, |x| g(x) + 1.0 + (x - mid) * (x - mid));
            monotonicity = monotonicity.max(tg - tdom);
        }

        AxiomReport {
            identity_violation: identity,
            constant_violation: constants,
            linearity_violation: linearity,
            monotonicity_violation: monotonicity.max(0.0),
            tol,
        }
    }
}

/// Worst observed violation per axiom; `pass` holds iff all are within tol.
#[derive(Debug, Clone, Copy)]
pub struct AxiomReport {
    pub identity_violation: f64,
    pub constant_violation: f64,
    pub linearity_violation: f64,
    pub monotonicity_violation: f64,
    pub tol: f64,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.identity_violation <= self.tol
            && self.constant_violation <= self.tol
            && self.linearity_violation <= self.tol
            && self.monotonicity_violation <= self.tol
    }

    pub fn max_violation(&self) -> f64 {
        self.identity_violation
            .max(self.constant_violation)
            .max(self.linearity_violation)
            .max(self.monotonicity_violation)
    }
}
