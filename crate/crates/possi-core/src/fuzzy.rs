use crate::error::{Error, Result};

/// Closed interval [lo, hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interval bounds must be finite (got [{lo}, {hi}])"
            )));
        }
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "interval requires lo <= hi (got [{lo}, {hi}])"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Fuzzy number stored by shape parameters, so every γ-level set has an
/// analytic closed form. The right spread is kept separate from the
/// coinsurance rate naming used elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FuzzyNumber {
    Triangular {
        peak: f64,
        left_spread: f64,
        right_spread: f64,
    },
    Trapezoidal {
        core_lo: f64,
        core_hi: f64,
        left_spread: f64,
        right_spread: f64,
    },
    Crisp {
        value: f64,
    },
}

fn check_spread(name: &str, s: f64) -> Result<()> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{name} must be a finite non-negative real (got {s})"
        )));
    }
    Ok(())
}

impl FuzzyNumber {
    /// Triangular number with membership 1 at `peak` and support
    /// (peak − left_spread, peak + right_spread).
    pub fn triangular(peak: f64, left_spread: f64, right_spread: f64) -> Result<Self> {
        if !peak.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "peak must be finite (got {peak})"
            )));
        }
        check_spread("left spread", left_spread)?;
        check_spread("right spread", right_spread)?;
        Ok(Self::Triangular {
            peak,
            left_spread,
            right_spread,
        })
    }

    pub fn trapezoidal(
        core_lo: f64,
        core_hi: f64,
        left_spread: f64,
        right_spread: f64,
    ) -> Result<Self> {
        if !core_lo.is_finite() || !core_hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "core bounds must be finite (got [{core_lo}, {core_hi}])"
            )));
        }
        if core_lo > core_hi {
            return Err(Error::InvalidParameter(format!(
                "trapezoid requires core_lo <= core_hi (got [{core_lo}, {core_hi}])"
            )));
        }
        check_spread("left spread", left_spread)?;
        check_spread("right spread", right_spread)?;
        Ok(Self::Trapezoidal {
            core_lo,
            core_hi,
            left_spread,
            right_spread,
        })
    }

    pub fn crisp(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "crisp value must be finite (got {value})"
            )));
        }
        Ok(Self::Crisp { value })
    }

    /// Trapezoid whose core spans the [lo_q, hi_q] sample quantiles and
    /// whose support spans the sample range. Quantiles interpolate linearly
    /// between adjacent order statistics, so the construction is
    /// deterministic for a given sample.
    pub fn trapezoid_from_samples(data: &[f64], lo_q: f64, hi_q: f64) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter(
                "sample data must be nonempty".to_string(),
            ));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "sample data must be finite".to_string(),
            ));
        }
        if !(0.0..=1.0).contains(&lo_q) || !(0.0..=1.0).contains(&hi_q) || lo_q >= hi_q {
            return Err(Error::InvalidParameter(format!(
                "quantile levels must satisfy 0 <= lo_q < hi_q <= 1 (got {lo_q}, {hi_q})"
            )));
        }
        let mut sorted = data.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
        let q = |p: f64| -> f64 {
            let h = p * (sorted.len() - 1) as f64;
            let i = h.floor() as usize;
            let frac = h - i as f64;
            if i + 1 < sorted.len() {
                sorted[i] + frac * (sorted[i + 1] - sorted[i])
            } else {
                sorted[i]
            }
        };
        let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
        let (core_lo, core_hi) = (q(lo_q), q(hi_q));
        Self::trapezoidal(core_lo, core_hi, core_lo - min, max - core_hi)
    }

    /// Level-set endpoints (a1(γ), a2(γ)) without the γ-range check; the
    /// quadrature loops only ever pass γ ∈ (0, 1).
    pub(crate) fn level_bounds(&self, gamma: f64) -> (f64, f64) {
        let s = 1.0 - gamma;
        match *self {
            Self::Triangular {
                peak,
                left_spread,
                right_spread,
            } => (peak - s * left_spread, peak + s * right_spread),
            Self::Trapezoidal {
                core_lo,
                core_hi,
                left_spread,
                right_spread,
            } => (core_lo - s * left_spread, core_hi + s * right_spread),
            Self::Crisp { value } => (value, value),
        }
    }

    /// [a1(γ), a2(γ)] for γ ∈ [0, 1].
    pub fn level_set(&self, gamma: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!(
                "level parameter must lie in [0, 1] (got {gamma})"
            )));
        }
        let (lo, hi) = self.level_bounds(gamma);
        Ok(Interval { lo, hi })
    }

    /// Hull of the support, i.e. the γ = 0 level set.
    pub fn support(&self) -> Interval {
        let (lo, hi) = self.level_bounds(0.0);
        Interval { lo, hi }
    }

    pub fn support_is_point(&self) -> bool {
        matches!(self, Self::Crisp { .. }) || self.support().is_point()
    }
}
