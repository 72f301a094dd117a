//! Weighted possibilistic indicators over level sets.
//!
//! Two expected-utility functionals are provided: the endpoint average
//! `expected_utility_e1` and the interval-mean form `expected_utility_e2`.
//! The interval mean is normalized so that both functionals reduce to the
//! same expected value under the identity function, which also makes the
//! triangular variance fast paths consistent with the quadrature path.

use crate::error::Result;
use crate::fuzzy::FuzzyNumber;
use crate::quadrature::{gauss_legendre, QuadratureConfig};
use crate::weighting::WeightingFunction;

/// ½ ∫ [u(a1(γ)) + u(a2(γ))] f(γ) dγ.
pub fn expected_utility_e1(
    f: &WeightingFunction,
    u: &dyn Fn(f64) -> Result<f64>,
    a: &FuzzyNumber,
    q: &QuadratureConfig,
) -> Result<f64> {
    let rule = gauss_legendre(q.outer_nodes);
    rule.try_integrate(0.0, 1.0, &|gamma| {
        let (lo, hi) = a.level_bounds(gamma);
        Ok(0.5 * (u(lo)? + u(hi)?) * f.evaluate(gamma))
    })
}

/// ∫ mean(u on [a1(γ), a2(γ)]) f(γ) dγ. Degenerate levels evaluate u at
/// the interval midpoint, the analytic limit of the mean.
pub fn expected_utility_e2(
    f: &WeightingFunction,
    u: &dyn Fn(f64) -> Result<f64>,
    a: &FuzzyNumber,
    q: &QuadratureConfig,
) -> Result<f64> {
    let outer = gauss_legendre(q.outer_nodes);
    let inner = gauss_legendre(q.inner_nodes);
    outer.try_integrate(0.0, 1.0, &|gamma| {
        let (lo, hi) = a.level_bounds(gamma);
        let mean = if hi - lo < q.degenerate_eps * (1.0 + lo.abs()) {
            u(0.5 * (lo + hi))?
        } else {
            inner.try_mean(lo, hi, u)?
        };
        Ok(mean * f.evaluate(gamma))
    })
}

/// ½ ∫ [a1(γ) + a2(γ)] f(γ) dγ, dispatching to the triangular closed form
/// when the weight is f(t) = 2t.
pub fn expected_value(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> f64 {
    if let (
        true,
        FuzzyNumber::Triangular {
            peak,
            left_spread,
            right_spread,
        },
    ) = (f.is_linear(), a)
    {
        return closed_form::expected_value_linear_triangular(*peak, *left_spread, *right_spread);
    }
    expected_value_quadrature(f, a, q)
}

/// Always-generic quadrature path for the expected value.
pub fn expected_value_quadrature(
    f: &WeightingFunction,
    a: &FuzzyNumber,
    q: &QuadratureConfig,
) -> f64 {
    gauss_legendre(q.outer_nodes).integrate(0.0, 1.0, |gamma| {
        let (lo, hi) = a.level_bounds(gamma);
        0.5 * (lo + hi) * f.evaluate(gamma)
    })
}

/// Endpoint-form variance, clamped at zero. Point-support shapes are zero
/// structurally rather than through cancellation.
pub fn variance_1(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> f64 {
    if a.support_is_point() {
        return 0.0;
    }
    if let (
        true,
        FuzzyNumber::Triangular {
            left_spread,
            right_spread,
            ..
        },
    ) = (f.is_linear(), a)
    {
        return closed_form::variance_1_linear_triangular(*left_spread, *right_spread);
    }
    variance_1_quadrature(f, a, q).max(0.0)
}

/// Generic quadrature path for the endpoint-form variance (unclamped).
pub fn variance_1_quadrature(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> f64 {
    let m = expected_value(f, a, q);
    gauss_legendre(q.outer_nodes).integrate(0.0, 1.0, |gamma| {
        let (lo, hi) = a.level_bounds(gamma);
        let (dl, dh) = (lo - m, hi - m);
        0.5 * (dl * dl + dh * dh) * f.evaluate(gamma)
    })
}

/// Interval-mean variance, clamped at zero. Point-support shapes are zero
/// structurally rather than through cancellation.
pub fn variance_2(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> f64 {
    if a.support_is_point() {
        return 0.0;
    }
    if let (
        true,
        FuzzyNumber::Triangular {
            left_spread,
            right_spread,
            ..
        },
    ) = (f.is_linear(), a)
    {
        return closed_form::variance_2_linear_triangular(*left_spread, *right_spread);
    }
    variance_2_quadrature(f, a, q).max(0.0)
}

/// Generic quadrature path for the interval-mean variance (unclamped).
pub fn variance_2_quadrature(f: &WeightingFunction, a: &FuzzyNumber, q: &QuadratureConfig) -> f64 {
    let m = expected_value(f, a, q);
    expected_utility_e2(f, &|x| Ok((x - m) * (x - m)), a, q)
        .expect("polynomial integrand cannot fail")
}

/// Triangular closed forms under the weight f(t) = 2t.
pub mod closed_form {
    /// a + (β − α)/6.
    pub fn expected_value_linear_triangular(peak: f64, left: f64, right: f64) -> f64 {
        peak + (right - left) / 6.0
    }

    /// (α² + β² + αβ)/18.
    pub fn variance_1_linear_triangular(left: f64, right: f64) -> f64 {
        (left * left + right * right + left * right) / 18.0
    }

    /// (α² + β²)/36.
    pub fn variance_2_linear_triangular(left: f64, right: f64) -> f64 {
        (left * left + right * right) / 36.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri(a: f64, alpha: f64, beta: f64) -> FuzzyNumber {
        FuzzyNumber::triangular(a, alpha, beta).unwrap()
    }

    fn q() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn linear() -> WeightingFunction {
        WeightingFunction::linear()
    }

    #[test]
    fn e1_reproduces_reference_values() {
        let f = linear();
        let a = tri(6.0, 2.0, 3.0);
        let got = expected_utility_e1(&f, &|x| Ok(x), &a, &q()).unwrap();
        assert!((got - 37.0 / 6.0).abs() < 1e-12, "got {got}");

        // constants come out unchanged for any weight and shape
        let got = expected_utility_e1(&WeightingFunction::uniform(), &|_| Ok(4.25), &a, &q())
            .unwrap();
        assert!((got - 4.25).abs() < 1e-13);

        let b = tri(2.0, 4.0, 1.0);
        let got = expected_utility_e1(&f, &|x| Ok(x * x), &b, &q()).unwrap();
        assert!((got - 41.0 / 12.0).abs() < 1e-11, "got {got}");
    }

    #[test]
    fn e2_reproduces_reference_values() {
        let f = linear();
        let b = tri(2.0, 4.0, 1.0);
        let got = expected_utility_e2(&f, &|x| Ok(x), &b, &q()).unwrap();
        assert!((got - 1.5).abs() < 1e-12, "got {got}");

        let crisp = FuzzyNumber::crisp(5.0).unwrap();
        let got =
            expected_utility_e2(&WeightingFunction::uniform(), &|x| Ok(x), &crisp, &q()).unwrap();
        assert!((got - 5.0).abs() < 1e-13, "got {got}");

        let got = expected_utility_e2(&f, &|x| Ok((x - 1.5) * (x - 1.5)), &b, &q()).unwrap();
        assert!((got - 17.0 / 36.0).abs() < 1e-11, "got {got}");
    }

    #[test]
    fn expected_value_reference_values() {
        let f = linear();
        assert!((expected_value(&f, &tri(6.0, 2.0, 3.0), &q()) - 37.0 / 6.0).abs() < 1e-15);
        assert!((expected_value(&f, &tri(2.0, 4.0, 1.0), &q()) - 1.5).abs() < 1e-15);
        // symmetric triangular centers on the peak
        assert!((expected_value(&f, &tri(3.5, 2.0, 2.0), &q()) - 3.5).abs() < 1e-15);
    }

    #[test]
    fn asymmetric_trapezoid_expected_value() {
        // core [1,2], spreads 1 and 3: hand integration gives 11/6.
        let t = FuzzyNumber::trapezoidal(1.0, 2.0, 1.0, 3.0).unwrap();
        let f = linear();
        let got = expected_value(&f, &t, &q());
        assert!((got - 11.0 / 6.0).abs() < 1e-12, "got {got}");
        let got2 = expected_utility_e2(&f, &|x| Ok(x), &t, &q()).unwrap();
        assert!((got2 - 11.0 / 6.0).abs() < 1e-12, "got {got2}");
    }

    #[test]
    fn variance_reference_values() {
        let f = linear();
        let a = tri(6.0, 2.0, 3.0);
        let b = tri(2.0, 4.0, 1.0);
        assert!((variance_1(&f, &a, &q()) - 19.0 / 18.0).abs() < 1e-15);
        assert!((variance_1(&f, &b, &q()) - 7.0 / 6.0).abs() < 1e-15);
        assert!((variance_2(&f, &a, &q()) - 13.0 / 36.0).abs() < 1e-15);
        assert!((variance_2(&f, &b, &q()) - 17.0 / 36.0).abs() < 1e-15);

        let crisp = FuzzyNumber::crisp(3.0).unwrap();
        assert_eq!(variance_1(&WeightingFunction::uniform(), &crisp, &q()), 0.0);
        assert_eq!(variance_2(&f, &crisp, &q()), 0.0);
    }

    #[test]
    fn degenerate_levels_use_midpoint() {
        // A triangular number has a point core; the inner mean must not blow up.
        let f = linear();
        let a = tri(1.0, 1e-14, 1e-14);
        let got = expected_utility_e2(&f, &|x| Ok(x.exp()), &a, &q()).unwrap();
        assert!((got - 1.0_f64.exp()).abs() < 1e-10, "got {got}");
    }

    fn arb_shape() -> impl Strategy<Value = FuzzyNumber> {
        let tri = (-10.0..10.0, 0.0..10.0, 0.0..10.0)
            .prop_map(|(a, l, r)| FuzzyNumber::triangular(a, l, r).unwrap());
        let trap = (-10.0..10.0, 0.0..4.0, 0.0..8.0, 0.0..8.0)
            .prop_map(|(lo, c, l, r)| FuzzyNumber::trapezoidal(lo, lo + c, l, r).unwrap());
        prop_oneof![tri, trap]
    }

    proptest! {
        // Both expected-utility forms agree with the expected value under id.
        #[test]
        fn identity_collapses_to_expected_value(a in arb_shape()) {
            let f = linear();
            let ev = expected_value(&f, &a, &q());
            let e1 = expected_utility_e1(&f, &|x| Ok(x), &a, &q()).unwrap();
            let e2 = expected_utility_e2(&f, &|x| Ok(x), &a, &q()).unwrap();
            prop_assert!((e1 - ev).abs() < 1e-10, "e1 {} vs ev {}", e1, ev);
            prop_assert!((e2 - ev).abs() < 1e-10, "e2 {} vs ev {}", e2, ev);
        }

        // g <= g + q^2 pointwise implies the functionals preserve the order.
        #[test]
        fn monotone_in_the_integrand(
            a in arb_shape(),
            c0 in -3.0..3.0,
            c1 in -2.0..2.0,
            d0 in -2.0..2.0,
            d1 in -1.0..1.0,
        ) {
            let f = linear();
            let g = move |x: f64| Ok(c0 + c1 * x);
            let h = move |x: f64| Ok(c0 + c1 * x + (d0 + d1 * x) * (d0 + d1 * x));
            let g1 = expected_utility_e1(&f, &g, &a, &q()).unwrap();
            let h1 = expected_utility_e1(&f, &h, &a, &q()).unwrap();
            prop_assert!(g1 <= h1 + 1e-9);
            let g2 = expected_utility_e2(&f, &g, &a, &q()).unwrap();
            let h2 = expected_utility_e2(&f, &h, &a, &q()).unwrap();
            prop_assert!(g2 <= h2 + 1e-9);
        }

        // Triangular fast paths agree with the generic quadrature path.
        #[test]
        fn closed_forms_match_quadrature(
            a in -10.0..10.0,
            l in 0.0..10.0,
            r in 0.0..10.0,
        ) {
            let f = linear();
            let t = tri(a, l, r);
            let ev_c = closed_form::expected_value_linear_triangular(a, l, r);
            let ev_q = expected_value_quadrature(&f, &t, &q());
            prop_assert!((ev_c - ev_q).abs() < 1e-9, "{} vs {}", ev_c, ev_q);

            let v1_c = closed_form::variance_1_linear_triangular(l, r);
            let v1_q = variance_1_quadrature(&f, &t, &q());
            prop_assert!((v1_c - v1_q).abs() < 1e-9, "{} vs {}", v1_c, v1_q);

            let v2_c = closed_form::variance_2_linear_triangular(l, r);
            let v2_q = variance_2_quadrature(&f, &t, &q());
            prop_assert!((v2_c - v2_q).abs() < 1e-9, "{} vs {}", v2_c, v2_q);
        }

        // Non-negative support gives a non-negative expected value.
        #[test]
        fn nonneg_support_nonneg_expected_value(
            lo in 0.0..10.0,
            l in 0.0..5.0,
            r in 0.0..10.0,
            n in 0.0..4.0,
        ) {
            let t = tri(lo + l, l, r); // support starts at lo >= 0
            let f = WeightingFunction::power(n).unwrap();
            prop_assert!(expected_value(&f, &t, &q()) >= 0.0);
        }
    }
}
