use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Non-negative increasing function on [0, 1] integrating to 1, used to
/// weight the γ-levels in every indicator.
#[derive(Clone)]
pub struct WeightingFunction {
    kind: WeightingKind,
}

#[derive(Clone)]
enum WeightingKind {
    /// f(t) = (n + 1) t^n; n = 0 is the uniform weight, n = 1 is f(t) = 2t.
    Power { exponent: f64 },
    Uniform,
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
}

impl WeightingFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !exponent.is_finite() || exponent < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "power weight exponent must be a finite non-negative real (got {exponent})"
            )));
        }
        Ok(Self {
            kind: WeightingKind::Power { exponent },
        })
    }

    pub fn uniform() -> Self {
        Self {
            kind: WeightingKind::Uniform,
        }
    }

    /// f(t) = 2t, the weight used by the triangular closed forms.
    pub fn linear() -> Self {
        Self::power(1.0).expect("exponent 1 is valid")
    }

    /// Arbitrary weighting function. Non-negativity and monotonicity are
    /// checked on a dense grid; unit mass is checked by quadrature to 1e-12.
    pub fn custom<F>(f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        const GRID: usize = 2048;
        let mut prev = f(0.0);
        if !prev.is_finite() || prev < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weighting function must be non-negative on [0,1] (f(0) = {prev})"
            )));
        }
        for k in 1..=GRID {
            let t = k as f64 / GRID as f64;
            let v = f(t);
            if !v.is_finite() || v < -1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "weighting function must be non-negative on [0,1] (f({t}) = {v})"
                )));
            }
            if v < prev - 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "weighting function must be nondecreasing on [0,1] (drops at t = {t})"
                )));
            }
            prev = v;
        }
        let mass = gauss_legendre(256).integrate(0.0, 1.0, &f);
        if (mass - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weighting function must integrate to 1 on [0,1] (got {mass})"
            )));
        }
        Ok(Self {
            kind: WeightingKind::Custom { f: Arc::new(f) },
        })
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        match &self.kind {
            WeightingKind::Power { exponent } => (exponent + 1.0) * t.powf(*exponent),
            WeightingKind::Uniform => 1.0,
            WeightingKind::Custom { f } => f(t),
        }
    }

    /// True exactly for f(t) = 2t, the precondition of the triangular
    /// closed-form paths.
    pub fn is_linear(&self) -> bool {
        matches!(self.kind, WeightingKind::Power { exponent } if exponent == 1.0)
    }
}

impl fmt::Debug for WeightingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightingKind::Power { exponent } => {
                write!(f, "WeightingFunction::Power({exponent})")
            }
            WeightingKind::Uniform => write!(f, "WeightingFunction::Uniform"),
            WeightingKind::Custom { .. } => write!(f, "WeightingFunction::Custom"),
        }
    }
}

impl PartialEq for WeightingFunction {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (WeightingKind::Power { exponent: a }, WeightingKind::Power { exponent: b }) => a == b,
            (WeightingKind::Uniform, WeightingKind::Uniform) => true,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_weights_evaluate_to_normalized_monomials() {
        let f = WeightingFunction::linear();
        assert_eq!(f.evaluate(0.0), 0.0);
        assert_eq!(f.evaluate(0.5), 1.0);
        assert_eq!(f.evaluate(1.0), 2.0);
        assert!(f.is_linear());

        let u = WeightingFunction::uniform();
        assert_eq!(u.evaluate(0.3), 1.0);
        assert!(!u.is_linear());

        // power(0) is the uniform weight as a function.
        let p0 = WeightingFunction::power(0.0).unwrap();
        for t in [0.0, 0.25, 1.0] {
            assert_eq!(p0.evaluate(t), 1.0);
        }
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(WeightingFunction::power(-0.5).is_err());
        assert!(WeightingFunction::power(f64::NAN).is_err());
    }

    #[test]
    fn unit_mass_holds_numerically() {
        for f in [
            WeightingFunction::uniform(),
            WeightingFunction::linear(),
            WeightingFunction::power(3.0).unwrap(),
        ] {
            let mass = gauss_legendre(64).integrate(0.0, 1.0, |t| f.evaluate(t));
            assert!((mass - 1.0).abs() < 1e-12, "{f:?}: {mass}");
        }
    }

    #[test]
    fn custom_weight_validated() {
        // 3t^2 is nonneg, increasing, integrates to 1.
        assert!(WeightingFunction::custom(|t| 3.0 * t * t).is_ok());
        // decreasing
        assert!(WeightingFunction::custom(|t| 2.0 * (1.0 - t)).is_err());
        // wrong mass
        assert!(WeightingFunction::custom(|t| 4.0 * t).is_err());
        // negative
        assert!(WeightingFunction::custom(|t| t - 0.5).is_err());
    }
}
