//! The coinsurance objective and its solvers.
//!
//! A problem bundles initial wealth, a loading factor, a fuzzy loss, a
//! utility, and an expected-utility operator. The retained wealth after a
//! loss x under coinsurance rate β is w0 − βP0 − (1−β)x with premium scale
//! P0 = (1+λ)E, and the objective H(β) is the operator value of its
//! utility. H is concave, so the exact optimum is the root of H′, found by
//! leftward bracket expansion and bisection; the approximate optimum comes
//! from a first-order expansion of u′ around w = w0 − P0.

use crate::error::{Error, Result};
use crate::fuzzy::FuzzyNumber;
use crate::measures::closed_form;
use crate::operators::EuOperator;
use crate::utility::UtilityFunction;

const MAX_BRACKET_EXPANSIONS: u32 = 64;
const MAX_BISECT_ITERATIONS: u32 = 200;
const INITIAL_BRACKET_STEP: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct CoinsuranceProblem {
    w0: f64,
    loading: f64,
    risk: FuzzyNumber,
    utility: UtilityFunction,
    operator: EuOperator,
}

/// Root-finder outcome for the first-order condition H′(β) = 0.
#[derive(Debug, Clone, Copy)]
pub struct ExactSolve {
    pub beta: f64,
    pub h_at_beta: f64,
    pub iterations: u32,
    pub bracket: (f64, f64),
    pub residual: f64,
}

/// Everything a caller needs to report one solved problem.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub beta_exact: Option<f64>,
    pub beta_approx: f64,
    pub h_at_beta_exact: Option<f64>,
    pub h_approx_total: f64,
    pub premium_p0: f64,
    pub e_f: f64,
    pub var_t: f64,
    pub w: f64,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub iterations: u32,
    pub bracket: Option<(f64, f64)>,
    pub residual: Option<f64>,
    pub var_t_raw: f64,
    pub domain_warnings: Vec<String>,
}

/// Predicted relation between the two base-operator rates for a triangular
/// risk under the linear weight, together with the rates themselves.
#[derive(Debug, Clone, Copy)]
pub struct RateGap {
    pub predicted: f64,
    pub beta_t1: f64,
    pub beta_t2: f64,
}

/// Which closed-form rate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedFormOperator {
    T1,
    T2,
    HalfMix,
}

/// Outcome of comparing two agents that differ only in utility.
#[derive(Debug, Clone, Copy)]
pub struct AgentComparison {
    pub rate_1: f64,
    pub rate_2: f64,
    pub first_more_risk_averse: bool,
    pub ordering_consistent: bool,
}

impl CoinsuranceProblem {
    /// Validates the problem: finite inputs, non-negative loading, a risk
    /// whose support is not a single point, and a positive expected value.
    /// A support reaching below zero is reported as a warning rather than
    /// rejected, since only E > 0 is load-bearing downstream.
    pub fn new(
        w0: f64,
        loading: f64,
        risk: FuzzyNumber,
        utility: UtilityFunction,
        operator: EuOperator,
    ) -> Result<Self> {
        if !w0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "initial wealth must be finite (got {w0})"
            )));
        }
        if !loading.is_finite() || loading < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "loading factor must be a finite non-negative real (got {loading})"
            )));
        }
        if risk.support_is_point() {
            return Err(Error::InvalidParameter(
                "risk support must not reduce to a single point".to_string(),
            ));
        }
        let e_f = operator.expected_value(&risk);
        let e_f_valid = e_f.is_finite() && e_f > 0.0;
        if !e_f_valid {
            return Err(Error::InvalidParameter(format!(
                "risk must have a positive expected value (got {e_f})"
            )));
        }
        Ok(Self {
            w0,
            loading,
            risk,
            utility,
            operator,
        })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn loading(&self) -> f64 {
        self.loading
    }

    pub fn risk(&self) -> &FuzzyNumber {
        &self.risk
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn operator(&self) -> &EuOperator {
        &self.operator
    }

    /// Replace the utility, keeping everything else. Used for agent
    /// comparisons.
    pub fn with_utility(&self, utility: UtilityFunction) -> Self {
        Self {
            utility,
            ..self.clone()
        }
    }

    /// Replace the loading factor, revalidating it.
    pub fn with_loading(&self, loading: f64) -> Result<Self> {
        Self::new(
            self.w0,
            loading,
            self.risk,
            self.utility,
            self.operator.clone(),
        )
    }

    pub fn expected_value(&self) -> f64 {
        self.operator.expected_value(&self.risk)
    }

    /// P0 = (1 + λ) E.
    pub fn premium_p0(&self) -> f64 {
        (1.0 + self.loading) * self.expected_value()
    }

    /// w = w0 − P0, the sure wealth under full coverage.
    pub fn wealth_after_premium(&self) -> f64 {
        self.w0 - self.premium_p0()
    }

    /// Premium paid at rate β: β·P0.
    pub fn premium(&self, beta: f64) -> f64 {
        beta * self.premium_p0()
    }

    /// Retained wealth for loss x at rate β.
    fn wealth_at(&self, x: f64, beta: f64) -> f64 {
        self.w0 - beta * self.premium_p0() - (1.0 - beta) * x
    }

    fn support_warning(&self) -> Option<String> {
        let s = self.risk.support();
        (s.lo < 0.0).then(|| {
            format!(
                "risk support [{}, {}] extends below zero; positivity of the expected value was verified numerically",
                s.lo, s.hi
            )
        })
    }

    /// Warnings attached to every report for this problem.
    pub fn support_warnings(&self) -> Vec<String> {
        self.support_warning().into_iter().collect()
    }

    /// H(β) = T(A, u(w0 − βP0 − (1−β)x)).
    pub fn total_utility(&self, beta: f64) -> Result<f64> {
        self.operator.try_evaluate(&self.risk, &|x| {
            let wealth = self.wealth_at(x, beta);
            self.utility
                .value(wealth)
                .map_err(|_| Error::UtilityDomain { loss: x, wealth })
        })
    }

    /// H′(β) = T(A, (x − P0) u′(g(x, β))).
    pub fn dh(&self, beta: f64) -> Result<f64> {
        let p0 = self.premium_p0();
        self.operator.try_evaluate(&self.risk, &|x| {
            let wealth = self.wealth_at(x, beta);
            let du = self
                .utility
                .first_derivative(wealth)
                .map_err(|_| Error::UtilityDomain { loss: x, wealth })?;
            Ok((x - p0) * du)
        })
    }

    /// H″(β) = T(A, u″(g(x, β)) (x − P0)²) ≤ 0.
    pub fn d2h(&self, beta: f64) -> Result<f64> {
        let p0 = self.premium_p0();
        self.operator.try_evaluate(&self.risk, &|x| {
            let wealth = self.wealth_at(x, beta);
            let d2u = self
                .utility
                .second_derivative(wealth)
                .map_err(|_| Error::UtilityDomain { loss: x, wealth })?;
            Ok(d2u * (x - p0) * (x - p0))
        })
    }

    /// True when the wealth map stays inside the utility domain for every
    /// loss in the support hull at this β. The wealth map is affine in x,
    /// so the two hull endpoints bound the whole range.
    fn rate_feasible(&self, beta: f64) -> bool {
        let hull = self.risk.support();
        self.utility.contains(self.wealth_at(hull.lo, beta))
            && self.utility.contains(self.wealth_at(hull.hi, beta))
    }

    /// Largest feasible β between an infeasible and a feasible point.
    fn refine_feasible_edge(&self, mut bad: f64, mut good: f64) -> f64 {
        for _ in 0..120 {
            let mid = 0.5 * (bad + good);
            if mid == bad || mid == good {
                break;
            }
            if self.rate_feasible(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    /// Root of the first-order condition. Zero loading short-circuits to
    /// full coverage. Otherwise H′(1) < 0, so the bracket expands leftward
    /// by doubling until H′ turns positive, refining against the utility
    /// domain boundary if it is hit, then bisects. Monotonicity of H′
    /// (concavity of H) makes the bracket logic exhaustive: no sign change
    /// within reach means no root.
    pub fn solve_exact(&self, tol: f64) -> Result<ExactSolve> {
        let tol_valid = tol.is_finite() && tol > 0.0;
        if !tol_valid {
            return Err(Error::InvalidParameter(format!(
                "solver tolerance must be a positive real (got {tol})"
            )));
        }
        if self.loading == 0.0 {
            let beta = 1.0;
            let residual = self.dh(beta)?.abs();
            return Ok(ExactSolve {
                beta,
                h_at_beta: self.total_utility(beta)?,
                iterations: 0,
                bracket: (1.0, 1.0),
                residual,
            });
        }

        let hull = self.risk.support();
        let p0 = self.premium_p0();
        if hull.hi <= p0 {
            return Err(Error::NoInteriorOptimum(format!(
                "premium scale {p0} is at least the largest loss {}; H is strictly decreasing",
                hull.hi
            )));
        }
        let f_right = self.dh(1.0)?;
        if f_right >= 0.0 {
            // H'(1) = -λ E u'(w) is negative for λ > 0; anything else is a
            // degenerate evaluation.
            return Err(Error::NonConvergence {
                iterations: 0,
                residual: f_right,
            });
        }

        // Expand leftward for a sign change.
        let mut step = INITIAL_BRACKET_STEP;
        let mut neg_end = 1.0; // smallest β known with H' < 0
        let mut pos_end = None; // β with H' > 0
        for _ in 0..MAX_BRACKET_EXPANSIONS {
            let cand = 1.0 - step;
            if !self.rate_feasible(cand) {
                let edge = self.refine_feasible_edge(cand, neg_end);
                let v = self.dh(edge)?;
                if v > 0.0 {
                    pos_end = Some(edge);
                } else {
                    return Err(Error::DomainBoundedBracket {
                        lo: edge,
                        hi: 1.0,
                    });
                }
                break;
            }
            let v = self.dh(cand)?;
            if !v.is_finite() {
                return Err(Error::NonConvergence {
                    iterations: 0,
                    residual: v,
                });
            }
            if v > 0.0 {
                pos_end = Some(cand);
                break;
            }
            neg_end = cand;
            step *= 2.0;
        }
        let Some(mut lo) = pos_end else {
            return Err(Error::NonConvergence {
                iterations: MAX_BRACKET_EXPANSIONS,
                residual: self.dh(neg_end)?,
            });
        };
        let bracket = (lo, neg_end);

        // Bisect. H' is decreasing: positive side on the left.
        let mut hi = neg_end;
        let mut iterations = 0;
        let mut best = (0.5 * (lo + hi), f64::INFINITY);
        while iterations < MAX_BISECT_ITERATIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo.min(hi) || mid >= lo.max(hi) {
                break;
            }
            iterations += 1;
            let v = self.dh(mid)?;
            if v.abs() < best.1 {
                best = (mid, v.abs());
            }
            if v > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            let width_tol = 1e-12 * (1.0 + mid.abs());
            if v.abs() <= tol && (hi - lo).abs() <= width_tol {
                break;
            }
        }
        let (beta, residual) = best;
        if residual > tol {
            return Err(Error::NonConvergence {
                iterations,
                residual,
            });
        }
        debug_assert!(beta < 1.0, "positive loading must give beta < 1");
        Ok(ExactSolve {
            beta,
            h_at_beta: self.total_utility(beta)?,
            iterations,
            bracket,
            residual,
        })
    }

    /// 1 − (λ / r_u(w)) E / (Var_T + λ²E²): the rate from linearizing u′
    /// around w. Exact when u′ is affine.
    pub fn approx_rate(&self) -> Result<f64> {
        let w = self.wealth_after_premium();
        let r = self.utility.arrow_pratt(w)?;
        let e = self.expected_value();
        let v = self.operator.t_variance(&self.risk);
        Ok(1.0 - (self.loading / r) * e / (v + self.loading * self.loading * e * e))
    }

    /// Second-order estimate of the objective at the approximate optimum:
    /// u at a shifted wealth plus a curvature correction. The shift is
    /// w + (1/r) λ²E²/(Var + λ²E²).
    pub fn approx_total_utility(&self) -> Result<f64> {
        let w = self.wealth_after_premium();
        if self.loading == 0.0 {
            return self.utility.value(w);
        }
        let r = self.utility.arrow_pratt(w)?;
        let e = self.expected_value();
        let v = self.operator.t_variance(&self.risk);
        let le2 = self.loading * self.loading * e * e;
        let d = v + le2;
        let shifted = w + le2 / (r * d);
        let d2 = self.utility.second_derivative(shifted)?;
        Ok(self.utility.value(shifted)?
            + (self.loading * self.loading) / (2.0 * r * r) * e * e * v / (d * d) * d2)
    }

    /// Run the approximation and the exact solver and assemble one report.
    /// A solver failure that leaves the approximation intact (domain-bounded
    /// bracket, no interior optimum, non-convergence) degrades to a warning.
    pub fn solve_report(&self, tol: f64) -> Result<SolveReport> {
        let e_f = self.expected_value();
        let var_t = self.operator.t_variance(&self.risk);
        let var_t_raw = self.operator.t_variance_raw(&self.risk);
        let premium_p0 = self.premium_p0();
        let w = self.wealth_after_premium();
        let beta_approx = self.approx_rate()?;
        let h_approx_total = self.approx_total_utility()?;

        let mut diagnostics = Diagnostics {
            var_t_raw,
            domain_warnings: self.support_warnings(),
            ..Diagnostics::default()
        };
        if !(beta_approx > 0.0 && beta_approx <= 1.0) {
            diagnostics
                .domain_warnings
                .push("rate outside (0,1]".to_string());
        }

        let (beta_exact, h_at_beta_exact) = match self.solve_exact(tol) {
            Ok(exact) => {
                diagnostics.iterations = exact.iterations;
                diagnostics.bracket = Some(exact.bracket);
                diagnostics.residual = Some(exact.residual);
                if !(exact.beta > 0.0 && exact.beta <= 1.0) {
                    diagnostics
                        .domain_warnings
                        .push("exact rate outside (0,1]".to_string());
                }
                (Some(exact.beta), Some(exact.h_at_beta))
            }
            Err(
                err @ (Error::DomainBoundedBracket { .. }
                | Error::NoInteriorOptimum(_)
                | Error::NonConvergence { .. }),
            ) => {
                diagnostics
                    .domain_warnings
                    .push(format!("exact solve unavailable: {err}"));
                (None, None)
            }
            Err(err) => return Err(err),
        };

        Ok(SolveReport {
            beta_exact,
            beta_approx,
            h_at_beta_exact,
            h_approx_total,
            premium_p0,
            e_f,
            var_t,
            w,
            diagnostics,
        })
    }

    fn triangular_parts(&self) -> Result<(f64, f64, f64)> {
        match self.risk {
            FuzzyNumber::Triangular {
                peak,
                left_spread,
                right_spread,
            } => Ok((peak, left_spread, right_spread)),
            _ => Err(Error::InvalidParameter(
                "closed-form rates require a triangular risk".to_string(),
            )),
        }
    }

    fn require_linear_weighting(&self) -> Result<()> {
        if self.operator.weighting_is_linear() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "closed-form rates require the linear weighting f(t) = 2t".to_string(),
            ))
        }
    }

    /// Approximate rate from the triangular closed forms under f(t) = 2t.
    pub fn closed_form_rate(&self, which: ClosedFormOperator) -> Result<f64> {
        let (peak, left, right) = self.triangular_parts()?;
        self.require_linear_weighting()?;
        if self.loading == 0.0 {
            return Ok(1.0);
        }
        let e = closed_form::expected_value_linear_triangular(peak, left, right);
        let v1 = closed_form::variance_1_linear_triangular(left, right);
        let v2 = closed_form::variance_2_linear_triangular(left, right);
        let v = match which {
            ClosedFormOperator::T1 => v1,
            ClosedFormOperator::T2 => v2,
            ClosedFormOperator::HalfMix => 0.5 * (v1 + v2),
        };
        let w = self.w0 - (1.0 + self.loading) * e;
        let r = self.utility.arrow_pratt(w)?;
        Ok(1.0 - (self.loading / r) * e / (v + self.loading * self.loading * e * e))
    }

    /// Predicted difference of retention reciprocals between the two base
    /// operators: 1/(1−β₁) − 1/(1−β₂) = (α+β)² r_u(w) / (36 λ E).
    pub fn rate_gap_t1_t2(&self) -> Result<RateGap> {
        if self.loading <= 0.0 {
            return Err(Error::InvalidParameter(
                "the rate gap requires a positive loading factor".to_string(),
            ));
        }
        let (peak, left, right) = self.triangular_parts()?;
        self.require_linear_weighting()?;
        let e = closed_form::expected_value_linear_triangular(peak, left, right);
        let w = self.w0 - (1.0 + self.loading) * e;
        let r = self.utility.arrow_pratt(w)?;
        let spread = left + right;
        let predicted = spread * spread * r / (36.0 * self.loading * e);
        let beta_t1 = self.closed_form_rate(ClosedFormOperator::T1)?;
        let beta_t2 = self.closed_form_rate(ClosedFormOperator::T2)?;
        // strict for any visible spread; spreads near machine epsilon can
        // round the two rates to the same double
        debug_assert!(
            beta_t1 >= beta_t2,
            "endpoint-averaging must give the higher rate"
        );
        Ok(RateGap {
            predicted,
            beta_t1,
            beta_t2,
        })
    }

    /// Sufficient condition for a positive approximate rate under the
    /// unit-absolute-risk-aversion utility: λ > 1/E.
    pub fn cara_positivity_sufficient(&self) -> Result<bool> {
        if !matches!(self.utility, UtilityFunction::Cara) {
            return Err(Error::InvalidParameter(
                "the positivity sufficiency test applies to the exponential utility only"
                    .to_string(),
            ));
        }
        let holds = self.loading > 1.0 / self.expected_value();
        if holds {
            debug_assert!(
                self.approx_rate().map(|b| b > 0.0).unwrap_or(true),
                "sufficiency must imply a positive approximate rate"
            );
        }
        Ok(holds)
    }

    /// Upper bound on λ that is necessary for a positive exact rate:
    /// Cov_T(x, u′(w0 − x)) / (E · T(A, u′(w0 − x))). Requires a strictly
    /// increasing operator and a positive loading.
    pub fn necessary_positivity_bound(&self) -> Result<f64> {
        if self.loading <= 0.0 {
            return Err(Error::InvalidParameter(
                "the positivity bound requires a positive loading factor".to_string(),
            ));
        }
        if !self.operator.strictly_increasing() {
            return Err(Error::InvalidParameter(
                "the positivity bound requires a strictly increasing operator".to_string(),
            ));
        }
        let marginal = |x: f64| -> Result<f64> {
            let wealth = self.w0 - x;
            self.utility
                .first_derivative(wealth)
                .map_err(|_| Error::UtilityDomain { loss: x, wealth })
        };
        let e = self.expected_value();
        let t_v = self.operator.try_evaluate(&self.risk, &marginal)?;
        let cov = self
            .operator
            .try_t_covariance(&self.risk, &|x| Ok(x), &marginal)?;
        Ok(cov / (e * t_v))
    }
}

/// Rate of the weight-c mixture from the component rates:
/// 1 − 1/(c/(1−β_T) + (1−c)/(1−β_S)), the harmonic combination of the
/// retentions. Either rate at 1 means zero loading, where the mixture rate
/// is also 1.
pub fn combine_rates(beta_t: f64, beta_s: f64, c: f64) -> f64 {
    if beta_t == 1.0 || beta_s == 1.0 {
        return 1.0;
    }
    1.0 - 1.0 / (c / (1.0 - beta_t) + (1.0 - c) / (1.0 - beta_s))
}

/// Compare the approximate rates of two problems that differ only in the
/// utility. A higher Arrow–Pratt index at w must not give a lower rate.
pub fn compare_agents(p1: &CoinsuranceProblem, p2: &CoinsuranceProblem) -> Result<AgentComparison> {
    if p1.w0() != p2.w0() || p1.loading() != p2.loading() || p1.risk() != p2.risk() {
        return Err(Error::InvalidParameter(
            "agent comparison requires problems differing only in utility".to_string(),
        ));
    }
    let (e1, e2) = (p1.expected_value(), p2.expected_value());
    let (v1, v2) = (
        p1.operator().t_variance(p1.risk()),
        p2.operator().t_variance(p2.risk()),
    );
    if (e1 - e2).abs() > 1e-12 * (1.0 + e1.abs()) || (v1 - v2).abs() > 1e-12 * (1.0 + v1.abs()) {
        return Err(Error::InvalidParameter(
            "agent comparison requires identical operators and weightings".to_string(),
        ));
    }
    let w = p1.wealth_after_premium();
    let r1 = p1.utility().arrow_pratt(w)?;
    let r2 = p2.utility().arrow_pratt(w)?;
    let rate_1 = p1.approx_rate()?;
    let rate_2 = p2.approx_rate()?;
    let first_more_risk_averse = r1 >= r2;
    let ordering_consistent = !first_more_risk_averse || rate_1 >= rate_2 - 1e-12;
    Ok(AgentComparison {
        rate_1,
        rate_2,
        first_more_risk_averse,
        ordering_consistent,
    })
}
