use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Node counts and the degenerate-interval guard used by the level-set
/// integrals. `outer_nodes` drives the γ-integral, `inner_nodes` the
/// per-level x-integral of the interval-mean evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub outer_nodes: usize,
    pub inner_nodes: usize,
    /// Base width threshold below which a level interval is treated as a
    /// point; the comparison scales it by `1 + |a1(γ)|`.
    pub degenerate_eps: f64,
}

impl QuadratureConfig {
    pub fn new(outer_nodes: usize, inner_nodes: usize, degenerate_eps: f64) -> Result<Self> {
        if outer_nodes < 2 || inner_nodes < 2 {
            return Err(Error::InvalidParameter(format!(
                "quadrature node counts must be >= 2 (got outer {outer_nodes}, inner {inner_nodes})"
            )));
        }
        let eps_valid = degenerate_eps.is_finite() && degenerate_eps > 0.0;
        if !eps_valid {
            return Err(Error::InvalidParameter(format!(
                "degenerate_eps must be a positive real (got {degenerate_eps})"
            )));
        }
        Ok(Self {
            outer_nodes,
            inner_nodes,
            degenerate_eps,
        })
    }

    pub fn with_outer_nodes(mut self, outer_nodes: usize) -> Result<Self> {
        if outer_nodes < 2 {
            return Err(Error::InvalidParameter(format!(
                "quadrature node counts must be >= 2 (got outer {outer_nodes})"
            )));
        }
        self.outer_nodes = outer_nodes;
        Ok(self)
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            outer_nodes: 64,
            inner_nodes: 32,
            degenerate_eps: 1e-12,
        }
    }
}

/// Gauss–Legendre rule on [-1, 1]. Exact for polynomials of degree
/// 2n − 1, which covers every polynomial integrand used by the indicator
/// closed-form cross-checks with large margin.
#[derive(Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let legendre_pair = |x: f64| -> (f64, f64) {
            let (mut p0, mut p1) = (1.0_f64, 0.0_f64);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = (((2 * j + 1) as f64) * x * p1 - (j as f64) * p2) / (j as f64 + 1.0);
            }
            let dp = (n as f64) * (x * p0 - p1) / (x * x - 1.0);
            (p0, dp)
        };
        for i in 0..m {
            // Tricomi-style initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_pair(x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            // the weight wants the derivative at the converged node
            let (_, dp) = legendre_pair(x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// ∫_a^b f(x) dx.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }

    /// ∫_a^b f(x) dx for a fallible integrand; the first error aborts.
    pub fn try_integrate(
        &self,
        a: f64,
        b: f64,
        f: &dyn Fn(f64) -> Result<f64>,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * x)?;
        }
        Ok(acc * half)
    }

    /// Mean of f over [a, b], computed in normalized coordinates so that
    /// narrow intervals never divide by their width.
    pub fn try_mean(&self, a: f64, b: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += 0.5 * w * f(mid + half * x)?;
        }
        Ok(acc)
    }
}

static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();

/// Shared rule for a given node count; rules are immutable once built.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    let cache = RULES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| Arc::new(GaussLegendre::compute(n)))
        .clone()
}
