use crate::error::{Error, Result};
use crate::fuzzy::Interval;

/// Anything with a value and two derivatives on an open domain. The
/// second-order indicator approximation only needs this much structure,
/// so it accepts any implementor rather than just the stock families.
pub trait TwiceDifferentiable {
    fn value(&self, x: f64) -> Result<f64>;
    fn first_derivative(&self, x: f64) -> Result<f64>;
    fn second_derivative(&self, x: f64) -> Result<f64>;
}

/// Risk-averse utility families with analytic derivatives. Every variant
/// satisfies u' > 0 and u'' < 0 on its declared open domain; constructors
/// reject parameters that would break that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFunction {
    /// u(w) = ζ (η + w/γ)^(1−γ) on η + w/γ > 0, with ζ > 0 and γ ∈ (0, 1)
    /// so that the monotonicity and concavity constraints hold.
    Hara { zeta: f64, eta: f64, gamma: f64 },
    /// u(w) = w^(1−γ)/(1−γ) for γ > 1, ln w for γ = 1, on w > 0.
    Crra { gamma: f64 },
    /// u(w) = ln w on w > 0.
    Log,
    /// u(x) = −e^(−x) on all of ℝ; unit absolute risk aversion.
    Cara,
    /// u(x) = x − (c/2)x² on x < bound, with bound ≤ 1/c so u' > 0 holds.
    Quadratic { bound: f64, curvature: f64 },
}

impl UtilityFunction {
    pub fn hara(zeta: f64, eta: f64, gamma: f64) -> Result<Self> {
        if !(zeta.is_finite() && zeta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hara scale must be a positive real (got {zeta})"
            )));
        }
        if !eta.is_finite() || !gamma.is_finite() || gamma == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "hara parameters must be finite with nonzero curvature (eta {eta}, gamma {gamma})"
            )));
        }
        // u' = ζ(1−γ)/γ · (η + w/γ)^(−γ) is positive iff (1−γ)/γ > 0.
        if !(0.0 < gamma && gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "hara curvature must lie in (0, 1) for an increasing concave utility (got {gamma})"
            )));
        }
        Ok(Self::Hara { zeta, eta, gamma })
    }

    pub fn crra(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "crra coefficient must satisfy gamma >= 1 (got {gamma})"
            )));
        }
        Ok(Self::Crra { gamma })
    }

    pub fn log() -> Self {
        Self::Log
    }

    pub fn cara() -> Self {
        Self::Cara
    }

    pub fn quadratic(bound: f64, curvature: f64) -> Result<Self> {
        if !(curvature.is_finite() && curvature > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadratic curvature must be a positive real (got {curvature})"
            )));
        }
        if !bound.is_finite() || bound > 1.0 / curvature {
            return Err(Error::InvalidParameter(format!(
                "quadratic bound must satisfy bound <= 1/curvature so u' stays positive (got {bound})"
            )));
        }
        Ok(Self::Quadratic { bound, curvature })
    }

    /// Open interval of validity.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            Self::Hara { eta, gamma, .. } => (-eta * gamma, f64::INFINITY),
            Self::Crra { .. } | Self::Log => (0.0, f64::INFINITY),
            Self::Cara => (f64::NEG_INFINITY, f64::INFINITY),
            Self::Quadratic { bound, .. } => (f64::NEG_INFINITY, bound),
        }
    }

    pub fn contains(&self, w: f64) -> bool {
        let (lo, hi) = self.domain();
        w.is_finite() && lo < w && w < hi
    }

    fn check_domain(&self, w: f64) -> Result<()> {
        if self.contains(w) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "wealth {w} outside the utility domain {:?}",
                self.domain()
            )))
        }
    }

    pub fn value(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(match *self {
            Self::Hara { zeta, eta, gamma } => zeta * (eta + w / gamma).powf(1.0 - gamma),
            Self::Crra { gamma } => {
                if gamma == 1.0 {
                    w.ln()
                } else {
                    w.powf(1.0 - gamma) / (1.0 - gamma)
                }
            }
            Self::Log => w.ln(),
            Self::Cara => -(-w).exp(),
            Self::Quadratic { curvature, .. } => w - 0.5 * curvature * w * w,
        })
    }

    pub fn first_derivative(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(match *self {
            Self::Hara { zeta, eta, gamma } => {
                zeta * (1.0 - gamma) / gamma * (eta + w / gamma).powf(-gamma)
            }
            Self::Crra { gamma } => w.powf(-gamma),
            Self::Log => 1.0 / w,
            Self::Cara => (-w).exp(),
            Self::Quadratic { curvature, .. } => 1.0 - curvature * w,
        })
    }

    pub fn second_derivative(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(match *self {
            Self::Hara { zeta, eta, gamma } => {
                -zeta * (1.0 - gamma) / gamma * (eta + w / gamma).powf(-gamma - 1.0)
            }
            Self::Crra { gamma } => -gamma * w.powf(-gamma - 1.0),
            Self::Log => -1.0 / (w * w),
            Self::Cara => -(-w).exp(),
            Self::Quadratic { curvature, .. } => -curvature,
        })
    }

    /// Absolute risk aversion −u''(w)/u'(w), via the per-family closed form.
    pub fn arrow_pratt(&self, w: f64) -> Result<f64> {
        self.check_domain(w)?;
        Ok(match *self {
            Self::Hara { eta, gamma, .. } => 1.0 / (eta + w / gamma),
            Self::Crra { gamma } => gamma / w,
            Self::Log => 1.0 / w,
            Self::Cara => 1.0,
            Self::Quadratic { curvature, .. } => curvature / (1.0 - curvature * w),
        })
    }
}

impl TwiceDifferentiable for UtilityFunction {
    fn value(&self, x: f64) -> Result<f64> {
        UtilityFunction::value(self, x)
    }
    fn first_derivative(&self, x: f64) -> Result<f64> {
        UtilityFunction::first_derivative(self, x)
    }
    fn second_derivative(&self, x: f64) -> Result<f64> {
        UtilityFunction::second_derivative(self, x)
    }
}

/// True iff u1 has an Arrow–Pratt index at least as large as u2 at every
/// point of a grid over the interval.
pub fn more_risk_averse(
    u1: &UtilityFunction,
    u2: &UtilityFunction,
    interval: Interval,
    grid: usize,
) -> Result<bool> {
    if grid == 0 {
        return Err(Error::InvalidParameter(
            "comparison grid must have at least one point".to_string(),
        ));
    }
    for k in 0..grid {
        let w = if grid == 1 {
            interval.lo
        } else {
            interval.lo + interval.width() * k as f64 / (grid - 1) as f64
        };
        if u1.arrow_pratt(w)? < u2.arrow_pratt(w)? {
            return Ok(false);
        }
    }
    Ok(true)
}
